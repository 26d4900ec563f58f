//! Invariant measures over a class table and their interplay with the
//! equidecomposition-type algebras.
//!
//! A measure is stored by its per-class intensity: restricted to a class it
//! is that multiple of counting measure, which makes invariance automatic.
//! Evaluation on `K`/`L` elements is the weighted sum of counts/class sums,
//! a countable-sum homomorphism by construction. Ergodicity is equivalent to
//! single-class support, certified either way: a meet-preservation
//! counterexample is produced for non-ergodic measures.
//!
//! [`extend_measure`] implements the extension of an invariant measure from
//! a subset to the whole relation: the group is `Z = {0, 1, -1, 2, -2, …}`
//! acting by translation in zigzag coordinates on infinite classes (rotation
//! on finite ones), the blocks `Bᵢ = γᵢ·A \ ⋃_{j<i} γⱼ·A` partition the
//! saturation, and the formula `Σᵢ μ(γᵢ⁻¹(B ∩ Bᵢ))` is evaluated exactly on
//! queried sets.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::eqrel::{BorelSetDesc, ClassSize, ClassTable, SetPart, WeightedFn};
use crate::extnum::ExtReal;
use crate::klalg::{KElem, LElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureError {
    TableMismatch,
    /// The restricted measure is not invariant on `A`: a class carries
    /// unequal weights.
    NotInvariantOnA {
        class: String,
        weights: Vec<ExtReal>,
    },
    /// The weighted function is not supported inside `A`.
    NotSupportedOnA {
        class: String,
        index: u64,
    },
    /// The extension formula needs finite/cofinite parts.
    UnsupportedSetShape {
        class: String,
    },
    /// `a ≤ b`, so no measure separates them.
    AlreadyBelow,
    /// Duality evaluation needs an ergodic σ-finite measure.
    NotErgodicSigmaFinite,
    NotCompressible,
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::TableMismatch => write!(f, "values live over different class tables"),
            MeasureError::NotInvariantOnA { class, weights } => {
                write!(f, "unequal weights {weights:?} on class {class:?}")
            }
            MeasureError::NotSupportedOnA { class, index } => {
                write!(f, "mass at {class:?}:{index} outside the restriction set")
            }
            MeasureError::UnsupportedSetShape { class } => {
                write!(
                    f,
                    "class {class:?} needs a finite or cofinite description here"
                )
            }
            MeasureError::AlreadyBelow => write!(f, "left element is below the right one"),
            MeasureError::NotErgodicSigmaFinite => {
                write!(f, "evaluation requires an ergodic sigma-finite measure")
            }
            MeasureError::NotCompressible => {
                write!(f, "operation requires all classes infinite")
            }
        }
    }
}

/// An invariant measure: per class, a multiple of counting measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvMeasure {
    table: Arc<ClassTable>,
    intensities: Vec<ExtReal>,
}

impl InvMeasure {
    pub fn new(table: Arc<ClassTable>, intensities: Vec<ExtReal>) -> Self {
        assert_eq!(intensities.len(), table.len(), "one intensity per class");
        InvMeasure { table, intensities }
    }

    pub fn zero(table: Arc<ClassTable>) -> Self {
        let n = table.len();
        InvMeasure::new(table, alloc::vec![ExtReal::zero(); n])
    }

    /// Counting measure on a single class.
    pub fn counting(table: Arc<ClassTable>, class: usize) -> Self {
        let mut intensities = alloc::vec![ExtReal::zero(); table.len()];
        intensities[class] = ExtReal::one();
        InvMeasure::new(table, intensities)
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn intensity(&self, c: usize) -> &ExtReal {
        &self.intensities[c]
    }

    pub fn intensities(&self) -> &[ExtReal] {
        &self.intensities
    }

    pub fn scale(&self, r: &ExtReal) -> InvMeasure {
        InvMeasure {
            table: self.table.clone(),
            intensities: self
                .intensities
                .iter()
                .map(|i| r.clone() * i.clone())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.intensities.iter().all(ExtReal::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        self.intensities
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, _)| c)
            .collect()
    }

    pub fn is_sigma_finite(&self) -> bool {
        self.intensities
            .iter()
            .enumerate()
            .all(|(c, v)| v.is_finite() || !self.table.size(c).is_omega())
    }

    fn check_table(&self, table: &Arc<ClassTable>) -> Result<(), MeasureError> {
        if &self.table == table {
            Ok(())
        } else {
            Err(MeasureError::TableMismatch)
        }
    }

    /// `μ(Ã)` for a type of sets.
    pub fn eval_k(&self, a: &KElem) -> Result<ExtReal, MeasureError> {
        self.check_table(a.table())?;
        Ok(self
            .intensities
            .iter()
            .zip(a.counts())
            .map(|(i, c)| i.clone() * c.to_ext())
            .sum())
    }

    /// `μ(α̃) = ∫ α dμ` for a type of weighted functions.
    pub fn eval_l(&self, a: &LElem) -> Result<ExtReal, MeasureError> {
        self.check_table(a.table())?;
        Ok(self
            .intensities
            .iter()
            .zip(a.sums())
            .map(|(i, s)| i.clone() * s.clone())
            .sum())
    }

    /// `∫ α dμ` for a concrete weighted function.
    pub fn eval_weighted(&self, alpha: &WeightedFn) -> Result<ExtReal, MeasureError> {
        self.check_table(alpha.table())?;
        Ok(self
            .intensities
            .iter()
            .zip(alpha.class_sums())
            .map(|(i, s)| i.clone() * s)
            .sum())
    }

    /// `μ(A)` for a set description.
    pub fn eval_set(&self, a: &BorelSetDesc) -> Result<ExtReal, MeasureError> {
        self.check_table(a.table())?;
        Ok(self
            .intensities
            .iter()
            .zip(a.parts())
            .map(|(i, p)| i.clone() * p.count())
            .sum())
    }
}

/// Why a measure fails to be ergodic.
#[derive(Clone, Debug)]
pub enum NonErgodic {
    /// The zero measure: the greatest element maps to 0, so even the empty
    /// meet is not preserved.
    Zero,
    /// Two disjoint invariant sets both of positive measure:
    /// `μ(a ∧ b) = 0 < min(μ(a), μ(b))`.
    MeetCounterexample {
        a: BorelSetDesc,
        b: BorelSetDesc,
        meet_value: ExtReal,
        min_value: ExtReal,
    },
}

#[derive(Debug)]
pub struct ErgodicReport {
    pub ergodic: bool,
    pub certificate: Option<NonErgodic>,
}

/// Ergodicity test: true iff the support is a single class. Non-ergodic
/// measures come with a meet-preservation counterexample.
pub fn is_ergodic(mu: &InvMeasure) -> ErgodicReport {
    let support = mu.support();
    match support.len() {
        1 => ErgodicReport {
            ergodic: true,
            certificate: None,
        },
        0 => ErgodicReport {
            ergodic: false,
            certificate: Some(NonErgodic::Zero),
        },
        _ => {
            let table = mu.table().clone();
            let class_set = |c: usize| {
                let parts = (0..table.len())
                    .map(|k| {
                        if k == c {
                            SetPart::whole(table.size(k))
                        } else {
                            SetPart::empty()
                        }
                    })
                    .collect();
                BorelSetDesc::new(table.clone(), parts).expect("class sets are valid")
            };
            let a = class_set(support[0]);
            let b = class_set(support[1]);
            let va = mu.eval_set(&a).expect("same table");
            let vb = mu.eval_set(&b).expect("same table");
            ErgodicReport {
                ergodic: false,
                certificate: Some(NonErgodic::MeetCounterexample {
                    a,
                    b,
                    meet_value: ExtReal::zero(),
                    min_value: va.min(vb),
                }),
            }
        }
    }
}

/// Zigzag coordinates identifying the index set of an infinite class with
/// the integers: `0, 1, -1, 2, -2, …`. The group element `γᵢ` is `zig(i)`.
pub fn zig(i: u64) -> i64 {
    if i == 0 {
        0
    } else if i % 2 == 1 {
        i.div_ceil(2) as i64
    } else {
        -((i / 2) as i64)
    }
}

pub fn zig_inv(m: i64) -> u64 {
    if m > 0 {
        2 * m as u64 - 1
    } else {
        2 * (-m) as u64
    }
}

/// The action of a group element on a class index: translation in zigzag
/// coordinates on infinite classes, rotation on finite ones.
fn act(size: ClassSize, g: i64, x: u64) -> u64 {
    match size {
        ClassSize::Omega => zig_inv(zig(x) + g),
        ClassSize::Finite(n) => (x as i64 + g).rem_euclid(n as i64) as u64,
    }
}

/// An extension of an invariant measure from a subset to the whole relation.
pub struct Extension {
    set: BorelSetDesc,
    weights: Vec<ExtReal>,
    measure: InvMeasure,
}

impl Extension {
    /// The extended measure in closed form: intensity = the common
    /// per-point weight on each class met by the set, zero elsewhere.
    pub fn measure(&self) -> &InvMeasure {
        &self.measure
    }

    /// The blocks `Bᵢ = γᵢ·A \ ⋃_{j<i} γⱼ·A` of one class, up to `trunc`.
    pub fn blocks(&self, class: usize, trunc: usize) -> Vec<SetPart> {
        let size = self.set.table().size(class);
        let a = self.set.part(class);
        let mut seen = SetPart::empty();
        let mut out = Vec::with_capacity(trunc);
        for i in 0..trunc {
            let g = zig(i as u64);
            let shifted = a
                .map_bijective(|x| act(size, g, x))
                .expect("finite/cofinite checked at construction");
            let block = shifted.minus(&seen).expect("finite/cofinite closed");
            seen = seen.union(&shifted).expect("finite/cofinite closed");
            out.push(block);
        }
        out
    }

    /// The extension formula `Σ_{i<trunc} μ(γᵢ⁻¹(B ∩ Bᵢ))` evaluated
    /// exactly. For sets whose blocks are exhausted within the truncation
    /// this equals the closed-form answer.
    pub fn formula_eval(&self, b: &BorelSetDesc, trunc: usize) -> Result<ExtReal, MeasureError> {
        if b.table() != self.set.table() {
            return Err(MeasureError::TableMismatch);
        }
        let table = self.set.table();
        let mut total = ExtReal::zero();
        for c in 0..table.len() {
            let size = table.size(c);
            let weight = &self.weights[c];
            if weight.is_zero() {
                continue;
            }
            for (i, block) in self.blocks(c, trunc).into_iter().enumerate() {
                let g = zig(i as u64);
                let hit = match b.part(c).intersect(&block) {
                    Some(s) => s,
                    None => {
                        return Err(MeasureError::UnsupportedSetShape {
                            class: String::from(table.label(c)),
                        })
                    }
                };
                let pulled = hit
                    .map_bijective(|x| act(size, -g, x))
                    .expect("finite/cofinite closed");
                total = total + weight.clone() * pulled.count();
            }
        }
        Ok(total)
    }
}

/// Extend a measure given on a subset `A` (as a weighted function carrying
/// the per-point masses, supported on `A` and constant on each class's
/// `A`-part) to the unique invariant measure concentrated on the saturation.
pub fn extend_measure(
    restricted: &WeightedFn,
    set: &BorelSetDesc,
) -> Result<Extension, MeasureError> {
    if restricted.table() != set.table() {
        return Err(MeasureError::TableMismatch);
    }
    let table = set.table().clone();
    let mut weights = Vec::with_capacity(table.len());
    for c in 0..table.len() {
        let class = || String::from(table.label(c));
        let part = set.part(c);
        if matches!(part, SetPart::Periodic { .. }) {
            return Err(MeasureError::UnsupportedSetShape { class: class() });
        }
        let seq = restricted.part(c);
        // support check: mass only inside A
        for (i, v) in seq.prefix().iter().enumerate() {
            if !v.is_zero() && !part.contains(i as u64) {
                return Err(MeasureError::NotSupportedOnA {
                    class: class(),
                    index: i as u64,
                });
            }
        }
        let tail = seq.tail_value();
        if !tail.is_zero() {
            if let SetPart::Finite(_) = part {
                return Err(MeasureError::NotSupportedOnA {
                    class: class(),
                    index: seq.spine() as u64,
                });
            }
        }
        // invariance check: the weights on A ∩ C must all agree
        let mut values: Vec<ExtReal> = Vec::new();
        let horizon = match part {
            SetPart::Finite(s) => s.iter().next_back().map_or(0, |m| m + 1),
            SetPart::Cofinite(e) => {
                let bound = e.iter().next_back().map_or(0, |m| m + 1);
                bound.max(seq.spine() as u64) + 1
            }
            SetPart::Periodic { .. } => unreachable!("rejected above"),
        };
        for i in 0..horizon {
            if part.contains(i) {
                let v = seq.get(i as usize);
                if !values.contains(&v) {
                    values.push(v);
                }
            }
        }
        if matches!(part, SetPart::Cofinite(_)) && !values.contains(&tail) {
            values.push(tail.clone());
        }
        match values.len() {
            0 => weights.push(ExtReal::zero()),
            1 => weights.push(values.pop().unwrap()),
            _ => {
                return Err(MeasureError::NotInvariantOnA {
                    class: class(),
                    weights: values,
                })
            }
        }
    }
    let measure = InvMeasure::new(table, weights.clone());
    Ok(Extension {
        set: set.clone(),
        weights,
        measure,
    })
}

/// A separating measure for `a ≰ b` in `K`: counting measure on the least
/// class where `a` strictly exceeds `b` (there `b` is finite), giving
/// `μ(a) > μ(b)` with `μ` ergodic and σ-finite.
pub fn separate_k(a: &KElem, b: &KElem) -> Result<InvMeasure, MeasureError> {
    if a.table() != b.table() {
        return Err(MeasureError::TableMismatch);
    }
    let c = (0..a.table().len())
        .find(|&c| !(a.count(c) <= b.count(c)))
        .ok_or(MeasureError::AlreadyBelow)?;
    Ok(InvMeasure::counting(a.table().clone(), c))
}

/// A separating measure for `a ≰ b` in `L`.
pub fn separate_l(a: &LElem, b: &LElem) -> Result<InvMeasure, MeasureError> {
    if a.table() != b.table() {
        return Err(MeasureError::TableMismatch);
    }
    let c = (0..a.table().len())
        .find(|&c| !(a.sum(c) <= b.sum(c)))
        .ok_or(MeasureError::AlreadyBelow)?;
    Ok(InvMeasure::counting(a.table().clone(), c))
}

/// A `(0, ∞)`-equivariant functional on ergodic σ-finite measures,
/// determined by its values on the per-class counting measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFn {
    table: Arc<ClassTable>,
    values: Vec<ExtReal>,
}

impl DualFn {
    pub fn new(table: Arc<ClassTable>, values: Vec<ExtReal>) -> Self {
        assert_eq!(values.len(), table.len(), "one value per class");
        DualFn { table, values }
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    /// Evaluate at an ergodic σ-finite measure `r · counting_C`:
    /// equivariance gives `r · value(C)`.
    pub fn eval(&self, mu: &InvMeasure) -> Result<ExtReal, MeasureError> {
        if mu.table() != &self.table {
            return Err(MeasureError::TableMismatch);
        }
        if !mu.is_sigma_finite() || !is_ergodic(mu).ergodic {
            return Err(MeasureError::NotErgodicSigmaFinite);
        }
        let c = mu.support()[0];
        Ok(mu.intensity(c).clone() * self.values[c].clone())
    }
}

/// The duality embedding `ι`: a type maps to the functional `μ ↦ μ(α)`.
pub fn iota(a: &LElem) -> DualFn {
    DualFn {
        table: a.table().clone(),
        values: a.sums().to_vec(),
    }
}

/// Reconstruct a type from a functional by reading off its values on the
/// canonical ergodic measures. Inverse to [`iota`] on both sides.
pub fn dual_reconstruct(f: &DualFn) -> Result<LElem, MeasureError> {
    LElem::new(f.table.clone(), f.values.clone()).map_err(|_| MeasureError::NotCompressible)
}

/// A presentation of the positivity locus of a functional as a finite union
/// of finite intersections of threshold sets `{μ : μ(A) > r}`.
#[derive(Clone, Debug)]
pub struct ThresholdPresentation {
    pub clauses: Vec<Vec<(BorelSetDesc, ExtReal)>>,
}

impl ThresholdPresentation {
    pub fn satisfied(&self, mu: &InvMeasure) -> Result<bool, MeasureError> {
        for clause in &self.clauses {
            let mut all = true;
            for (a, r) in clause {
                if !(mu.eval_set(a)? > *r) {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Check that the presentation carves out exactly the positivity locus
    /// of `f` on the given measures, and that it is stable under scaling in
    /// the way equivariance dictates (positivity is scale-invariant).
    pub fn consistent_with(
        &self,
        f: &DualFn,
        samples: &[InvMeasure],
    ) -> Result<Option<usize>, MeasureError> {
        for (k, mu) in samples.iter().enumerate() {
            let positive = !f.eval(mu)?.is_zero();
            if self.satisfied(mu)? != positive {
                return Ok(Some(k));
            }
            let doubled = mu.scale(&ExtReal::nat(2));
            if self.satisfied(&doubled)? != positive {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

#[derive(Debug)]
pub struct CompressibilityReport {
    pub compressible: bool,
    /// A uniform invariant probability measure on some finite class, when
    /// one exists.
    pub probability_witness: Option<InvMeasure>,
}

/// Compressibility: no invariant probability measure, which for a smooth
/// presentation means every class is infinite.
pub fn is_compressible(table: &Arc<ClassTable>) -> CompressibilityReport {
    for c in 0..table.len() {
        if let ClassSize::Finite(n) = table.size(c) {
            let mut intensities = alloc::vec![ExtReal::zero(); table.len()];
            intensities[c] = ExtReal::ratio(1, n);
            return CompressibilityReport {
                compressible: false,
                probability_witness: Some(InvMeasure::new(table.clone(), intensities)),
            };
        }
    }
    CompressibilityReport {
        compressible: true,
        probability_witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extnum::{Tail, TailSeq};
    use crate::klalg::Count;

    fn e(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let t = ClassTable::omega(2);
        let mu = InvMeasure::new(t.clone(), alloc::vec![e("1"), e("0")]);
        let alpha = LElem::new(t.clone(), alloc::vec![e("3/2"), e("7")]).unwrap();
        assert_eq!(mu.eval_l(&alpha).unwrap(), e("3/2"));

        let zero = InvMeasure::zero(t.clone());
        assert_eq!(zero.eval_l(&alpha).unwrap(), e("0"));

        let mu = InvMeasure::new(t.clone(), alloc::vec![e("1"), e("1")]);
        let a = KElem::new(t, alloc::vec![Count::Omega, Count::Fin(2)]).unwrap();
        assert_eq!(mu.eval_k(&a).unwrap(), ExtReal::Infinity);
    }

    #[test]
    fn ergodicity_examples() {
        let t = ClassTable::omega(3);
        let mu = InvMeasure::new(t.clone(), alloc::vec![e("1"), e("0"), e("0")]);
        assert!(is_ergodic(&mu).ergodic);

        let t2 = ClassTable::omega(2);
        let mu = InvMeasure::new(t2.clone(), alloc::vec![e("1"), e("1")]);
        let report = is_ergodic(&mu);
        assert!(!report.ergodic);
        match report.certificate.unwrap() {
            NonErgodic::MeetCounterexample {
                meet_value,
                min_value,
                a,
                b,
            } => {
                assert_eq!(meet_value, e("0"));
                assert!(min_value > e("0"));
                let va = mu.eval_set(&a).unwrap();
                let vb = mu.eval_set(&b).unwrap();
                assert!(meet_value < va.min(vb));
            }
            other => panic!("expected a meet counterexample, got {other:?}"),
        }

        let report = is_ergodic(&InvMeasure::zero(t2));
        assert!(!report.ergodic);
        assert!(matches!(report.certificate, Some(NonErgodic::Zero)));
    }

    #[test]
    fn zigzag_is_an_action() {
        for x in 0..20u64 {
            assert_eq!(zig_inv(zig(x)), x);
            for g in -5..=5i64 {
                let y = act(ClassSize::Omega, g, x);
                assert_eq!(act(ClassSize::Omega, -g, y), x);
            }
        }
    }

    #[test]
    fn extension_counting_example() {
        let t = ClassTable::omega(1);
        // A = {0, 1}, weight 1 each: the extension is counting measure
        let set =
            BorelSetDesc::new(t.clone(), alloc::vec![SetPart::Finite([0, 1].into())]).unwrap();
        let alpha = WeightedFn::new(t.clone(), alloc::vec![TailSeq::indicator([0, 1])]).unwrap();
        let ext = extend_measure(&alpha, &set).unwrap();
        assert_eq!(ext.measure().intensity(0), &e("1"));

        // formula evaluation on B = {5, 6, 7} gives 3
        let b =
            BorelSetDesc::new(t.clone(), alloc::vec![SetPart::Finite([5, 6, 7].into())]).unwrap();
        assert_eq!(ext.formula_eval(&b, 64).unwrap(), e("3"));

        // restricting back to A returns the input
        assert_eq!(ext.formula_eval(&set, 64).unwrap(), e("2"));

        // blocks partition: B0 = A, and low blocks are disjoint
        let blocks = ext.blocks(0, 8);
        assert_eq!(blocks[0], SetPart::Finite([0, 1].into()));
        for i in 0..8 {
            for j in 0..i {
                for x in 0..30u64 {
                    assert!(
                        !(blocks[i].contains(x) && blocks[j].contains(x)),
                        "blocks {i} and {j} overlap at {x}"
                    );
                }
            }
        }
    }

    #[test]
    fn extension_misses_class() {
        let t = ClassTable::omega(2);
        let set = BorelSetDesc::new(
            t.clone(),
            alloc::vec![SetPart::Finite([0].into()), SetPart::empty()],
        )
        .unwrap();
        let alpha = WeightedFn::new(
            t.clone(),
            alloc::vec![TailSeq::indicator([0]), TailSeq::zero()],
        )
        .unwrap();
        let ext = extend_measure(&alpha, &set).unwrap();
        assert_eq!(ext.measure().intensity(1), &e("0"));
    }

    #[test]
    fn extension_rejects_uneven_weights() {
        let t = ClassTable::omega(1);
        let set =
            BorelSetDesc::new(t.clone(), alloc::vec![SetPart::Finite([0, 1].into())]).unwrap();
        let alpha = WeightedFn::new(
            t.clone(),
            alloc::vec![TailSeq::new(alloc::vec![e("1"), e("2")], Tail::Zero)],
        )
        .unwrap();
        assert!(matches!(
            extend_measure(&alpha, &set),
            Err(MeasureError::NotInvariantOnA { .. })
        ));
    }

    #[test]
    fn separation_examples() {
        let t = ClassTable::omega(2);
        let a = KElem::new(t.clone(), alloc::vec![Count::Fin(1), Count::Fin(0)]).unwrap();
        let b = KElem::new(t.clone(), alloc::vec![Count::Fin(0), Count::Omega]).unwrap();
        let mu = separate_k(&a, &b).unwrap();
        assert!(mu.eval_k(&a).unwrap() > mu.eval_k(&b).unwrap());

        let a = KElem::new(t.clone(), alloc::vec![Count::Omega, Count::Fin(0)]).unwrap();
        let b = KElem::new(t.clone(), alloc::vec![Count::Fin(3), Count::Fin(0)]).unwrap();
        let mu = separate_k(&a, &b).unwrap();
        assert!(mu.eval_k(&a).unwrap() > mu.eval_k(&b).unwrap());

        let below = KElem::new(t.clone(), alloc::vec![Count::Fin(1), Count::Fin(0)]).unwrap();
        let above = KElem::new(t, alloc::vec![Count::Fin(2), Count::Omega]).unwrap();
        assert!(matches!(
            separate_k(&below, &above),
            Err(MeasureError::AlreadyBelow)
        ));
    }

    #[test]
    fn duality_round_trip() {
        let t = ClassTable::omega(2);
        let a = LElem::new(t.clone(), alloc::vec![e("3/2"), ExtReal::Infinity]).unwrap();
        let f = iota(&a);
        assert_eq!(dual_reconstruct(&f).unwrap(), a);

        let zero = DualFn::new(t.clone(), alloc::vec![e("0"), e("0")]);
        assert_eq!(
            dual_reconstruct(&zero).unwrap(),
            LElem::zero(t.clone()).unwrap()
        );

        // evaluation is equivariant
        let mu = InvMeasure::counting(t.clone(), 0).scale(&e("2"));
        assert_eq!(f.eval(&mu).unwrap(), e("3"));
    }

    #[test]
    fn threshold_presentation_example() {
        let t = ClassTable::omega(2);
        let whole_c0 = BorelSetDesc::new(
            t.clone(),
            alloc::vec![SetPart::Cofinite([].into()), SetPart::empty()],
        )
        .unwrap();
        let pres = ThresholdPresentation {
            clauses: alloc::vec![alloc::vec![(whole_c0, e("1"))]],
        };
        let f = DualFn::new(t.clone(), alloc::vec![ExtReal::Infinity, e("0")]);
        let mu = InvMeasure::counting(t.clone(), 0).scale(&e("2"));
        assert!(pres.satisfied(&mu).unwrap());
        assert!(!f.eval(&mu).unwrap().is_zero());
        let nu = InvMeasure::counting(t, 1);
        assert!(!pres.satisfied(&nu).unwrap());
        assert!(
            pres.consistent_with(&f, &[mu, nu]).unwrap().is_none(),
            "presentation matches the positivity locus"
        );
    }

    #[test]
    fn compressibility_witness() {
        let t = ClassTable::omega(3);
        assert!(is_compressible(&t).compressible);

        let t = ClassTable::new(alloc::vec![
            (String::from("a"), ClassSize::Omega),
            (String::from("b"), ClassSize::Finite(3)),
        ])
        .unwrap();
        let report = is_compressible(&t);
        assert!(!report.compressible);
        let mu = report.probability_witness.unwrap();
        let whole = BorelSetDesc::whole(t);
        assert_eq!(mu.eval_set(&whole).unwrap(), e("1"));

        let empty = ClassTable::new(alloc::vec![]).unwrap();
        assert!(is_compressible(&empty).compressible);
    }
}
