//! The cardinal algebras of equidecomposition types over a compressible
//! table: `K` (per-class counts in `ℕ ∪ {ω}`, types of sets) and `L`
//! (per-class extended-real sums, types of weighted functions).
//!
//! Equality is per-class equality of the normal forms; witnesses live in
//! [`crate::eqrel`] and are materialized on demand from representatives.
//! Binary meets and joins are computed twice — through the comparison
//! partition on set representatives, and pointwise — and the two routes are
//! asserted to agree. Countable families are finite lists with an optional
//! ω-replicated last element, which keeps sums and joins computable.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use crate::eqrel::{BorelSetDesc, ClassTable, SetPart, WeightedFn};
use crate::extnum::{ExtReal, Tail, TailSeq};
use crate::transport::{self, TransportPlan};

/// A count in `ℕ ∪ {ω}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Count {
    Fin(u64),
    Omega,
}

impl Count {
    pub fn is_zero(&self) -> bool {
        matches!(self, Count::Fin(0))
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, Count::Omega)
    }

    pub fn to_ext(&self) -> ExtReal {
        match self {
            Count::Fin(n) => ExtReal::nat(*n),
            Count::Omega => ExtReal::Infinity,
        }
    }

    /// `n · self` with `0 · ω = 0`.
    pub fn times(&self, n: Count) -> Count {
        match (self, n) {
            (Count::Fin(0), _) | (_, Count::Fin(0)) => Count::Fin(0),
            (Count::Omega, _) | (_, Count::Omega) => Count::Omega,
            (Count::Fin(a), Count::Fin(b)) => Count::Fin(a * b),
        }
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Fin(a), Count::Fin(b)) => Count::Fin(a + b),
            _ => Count::Omega,
        }
    }
}

impl PartialOrd for Count {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Count {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Count::Fin(a), Count::Fin(b)) => a.cmp(b),
            (Count::Fin(_), Count::Omega) => Ordering::Less,
            (Count::Omega, Count::Fin(_)) => Ordering::Greater,
            (Count::Omega, Count::Omega) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Fin(n) => write!(f, "{n}"),
            Count::Omega => write!(f, "omega"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KlError {
    /// `K`/`L` elements live over all-infinite tables only.
    NotCompressible,
    TableMismatch,
    EmptyFamily,
    NotAperiodic {
        offending: Vec<(String, u64)>,
    },
    /// The family does not sum to `a + b` in the refinement axiom.
    RefinementMismatch {
        class: String,
    },
    /// `aᵢ = bᵢ + aᵢ₊₁` fails somewhere.
    ChainBroken {
        index: usize,
        class: String,
    },
}

impl fmt::Display for KlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KlError::NotCompressible => {
                write!(f, "equidecomposition types require all classes infinite")
            }
            KlError::TableMismatch => write!(f, "elements live over different class tables"),
            KlError::EmptyFamily => write!(f, "empty countable family"),
            KlError::NotAperiodic { offending } => {
                write!(f, "not aperiodic; finite nonzero counts: {offending:?}")
            }
            KlError::RefinementMismatch { class } => {
                write!(f, "family does not sum to a + b in class {class:?}")
            }
            KlError::ChainBroken { index, class } => {
                write!(
                    f,
                    "chain equation fails at index {index} in class {class:?}"
                )
            }
        }
    }
}

/// A countable family: finitely many listed elements, optionally followed by
/// ω repetitions of a final element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountableList<T> {
    pub listed: Vec<T>,
    pub tail: Option<T>,
}

impl<T> CountableList<T> {
    pub fn finite(listed: Vec<T>) -> Self {
        CountableList { listed, tail: None }
    }

    pub fn with_tail(listed: Vec<T>, tail: T) -> Self {
        CountableList {
            listed,
            tail: Some(tail),
        }
    }

    pub fn get(&self, i: usize) -> Option<&T> {
        if i < self.listed.len() {
            self.listed.get(i)
        } else {
            self.tail.as_ref()
        }
    }

    pub fn iter_all(&self) -> impl Iterator<Item = &T> {
        self.listed.iter().chain(self.tail.iter())
    }
}

/// An equidecomposition type of sets: per-class counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KElem {
    table: Arc<ClassTable>,
    counts: Vec<Count>,
}

impl KElem {
    pub fn new(table: Arc<ClassTable>, counts: Vec<Count>) -> Result<Self, KlError> {
        if !table.is_compressible() {
            return Err(KlError::NotCompressible);
        }
        assert_eq!(counts.len(), table.len(), "one count per class");
        Ok(KElem { table, counts })
    }

    pub fn zero(table: Arc<ClassTable>) -> Result<Self, KlError> {
        let n = table.len();
        KElem::new(table, alloc::vec![Count::Fin(0); n])
    }

    /// The greatest element: the type of the whole space.
    pub fn top(table: Arc<ClassTable>) -> Result<Self, KlError> {
        let n = table.len();
        KElem::new(table, alloc::vec![Count::Omega; n])
    }

    /// The type of a set description.
    pub fn of_set(desc: &BorelSetDesc) -> Result<Self, KlError> {
        let counts = desc
            .parts()
            .iter()
            .map(|p| match p.count() {
                ExtReal::Infinity => Count::Omega,
                v => {
                    let r = v.as_finite().expect("finite count");
                    debug_assert!(r.denom() == &num_bigint::BigUint::from(1u32));
                    Count::Fin(u64::try_from(r.to_integer()).expect("desk-scale count"))
                }
            })
            .collect();
        KElem::new(desc.table().clone(), counts)
    }

    /// The canonical set representative: an initial segment per class.
    pub fn representative(&self) -> BorelSetDesc {
        let parts = self
            .counts
            .iter()
            .map(|c| match c {
                Count::Fin(n) => SetPart::Finite((0..*n).collect()),
                Count::Omega => SetPart::Cofinite([].into()),
            })
            .collect();
        BorelSetDesc::new(self.table.clone(), parts).expect("representative is valid")
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn counts(&self) -> &[Count] {
        &self.counts
    }

    pub fn count(&self, c: usize) -> Count {
        self.counts[c]
    }

    pub fn le(&self, other: &KElem) -> bool {
        self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn is_aperiodic(&self) -> bool {
        self.counts.iter().all(|c| c.is_zero() || c.is_omega())
    }

    fn check_table(&self, other: &KElem) -> Result<(), KlError> {
        if self.table == other.table {
            Ok(())
        } else {
            Err(KlError::TableMismatch)
        }
    }

    pub fn add(&self, other: &KElem) -> Result<KElem, KlError> {
        self.check_table(other)?;
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(KElem {
            table: self.table.clone(),
            counts,
        })
    }

    /// `n · a`.
    pub fn times(&self, n: Count) -> KElem {
        let counts = self.counts.iter().map(|c| c.times(n)).collect();
        KElem {
            table: self.table.clone(),
            counts,
        }
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (c, count) in self.counts.iter().enumerate() {
            if c > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {count}", self.table.label(c))?;
        }
        write!(f, ")")
    }
}

/// An equidecomposition type of weighted functions: per-class sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LElem {
    table: Arc<ClassTable>,
    sums: Vec<ExtReal>,
}

impl LElem {
    pub fn new(table: Arc<ClassTable>, sums: Vec<ExtReal>) -> Result<Self, KlError> {
        if !table.is_compressible() {
            return Err(KlError::NotCompressible);
        }
        assert_eq!(sums.len(), table.len(), "one sum per class");
        Ok(LElem { table, sums })
    }

    pub fn zero(table: Arc<ClassTable>) -> Result<Self, KlError> {
        let n = table.len();
        LElem::new(table, alloc::vec![ExtReal::zero(); n])
    }

    /// The type of a weighted function.
    pub fn of_weighted(alpha: &WeightedFn) -> Result<Self, KlError> {
        LElem::new(alpha.table().clone(), alpha.class_sums())
    }

    /// A weighted-function representative: the whole class sum at index 0.
    pub fn representative(&self) -> WeightedFn {
        let parts = self
            .sums
            .iter()
            .map(|s| {
                if s.is_zero() {
                    TailSeq::zero()
                } else {
                    TailSeq::from_prefix(alloc::vec![s.clone()])
                }
            })
            .collect();
        WeightedFn::new(self.table.clone(), parts).expect("representative is valid")
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn sums(&self) -> &[ExtReal] {
        &self.sums
    }

    pub fn sum(&self, c: usize) -> &ExtReal {
        &self.sums[c]
    }

    pub fn le(&self, other: &LElem) -> bool {
        self.sums.iter().zip(&other.sums).all(|(a, b)| a <= b)
    }

    pub fn is_aperiodic(&self) -> bool {
        self.sums.iter().all(|s| s.is_zero() || s.is_infinite())
    }

    pub fn is_finite_type(&self) -> bool {
        self.sums.iter().all(ExtReal::is_finite)
    }

    fn check_table(&self, other: &LElem) -> Result<(), KlError> {
        if self.table == other.table {
            Ok(())
        } else {
            Err(KlError::TableMismatch)
        }
    }

    pub fn add(&self, other: &LElem) -> Result<LElem, KlError> {
        self.check_table(other)?;
        let sums = self
            .sums
            .iter()
            .zip(&other.sums)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(LElem {
            table: self.table.clone(),
            sums,
        })
    }

    /// The real multiple `r · a`, pointwise with `0 · ∞ = 0`.
    pub fn scale(&self, r: &ExtReal) -> LElem {
        let sums = self.sums.iter().map(|s| r.clone() * s.clone()).collect();
        LElem {
            table: self.table.clone(),
            sums,
        }
    }

    /// Exact division by a positive integer; every element divides.
    pub fn div_nat(&self, n: u64) -> LElem {
        let sums = self.sums.iter().map(|s| s.div_nat(n)).collect();
        LElem {
            table: self.table.clone(),
            sums,
        }
    }

    /// `(p/q) · a` computed by the division route `p · (a/q)`, for
    /// cross-checking against [`scale`](Self::scale).
    pub fn scale_by_division(&self, p: u64, q: u64) -> LElem {
        self.div_nat(q).scale(&ExtReal::nat(p))
    }
}

impl fmt::Display for LElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (c, s) in self.sums.iter().enumerate() {
            if c > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {s}", self.table.label(c))?;
        }
        write!(f, ")")
    }
}

/// The embedding `χ : K → L`, per-class count into `[0, ∞]`.
pub fn chi(a: &KElem) -> LElem {
    LElem {
        table: a.table.clone(),
        sums: a.counts.iter().map(Count::to_ext).collect(),
    }
}

/// The comparison partition of the class labels: on `below`, `a ≤ b`
/// classwise; on `above`, `a` strictly exceeds `b` with an absorbing
/// remainder. Ties (including `ω`/`ω`) go to `below`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparePartition {
    pub below: Vec<String>,
    pub above: Vec<String>,
    below_idx: Vec<usize>,
}

impl ComparePartition {
    pub fn is_below(&self, c: usize) -> bool {
        self.below_idx.contains(&c)
    }
}

pub fn compare_k(a: &KElem, b: &KElem) -> Result<ComparePartition, KlError> {
    a.check_table(b)?;
    Ok(partition_by(a.table(), |c| a.counts[c] <= b.counts[c]))
}

pub fn compare_l(a: &LElem, b: &LElem) -> Result<ComparePartition, KlError> {
    a.check_table(b)?;
    Ok(partition_by(a.table(), |c| a.sums[c] <= b.sums[c]))
}

fn partition_by(table: &Arc<ClassTable>, le: impl Fn(usize) -> bool) -> ComparePartition {
    let mut below = Vec::new();
    let mut above = Vec::new();
    let mut below_idx = Vec::new();
    for c in 0..table.len() {
        if le(c) {
            below.push(String::from(table.label(c)));
            below_idx.push(c);
        } else {
            above.push(String::from(table.label(c)));
        }
    }
    ComparePartition {
        below,
        above,
        below_idx,
    }
}

/// Binary meet in `K`, computed through the comparison partition on set
/// representatives and checked against the pointwise minimum.
pub fn meet_k(a: &KElem, b: &KElem) -> Result<KElem, KlError> {
    let part = compare_k(a, b)?;
    let formula = mix_representatives(a, b, &part, true)?;
    let pointwise = KElem {
        table: a.table.clone(),
        counts: a
            .counts
            .iter()
            .zip(&b.counts)
            .map(|(&x, &y)| x.min(y))
            .collect(),
    };
    assert_eq!(formula, pointwise, "meet routes disagree");
    Ok(formula)
}

/// Binary join in `K`: the partition route with the sides swapped, checked
/// against the pointwise maximum.
pub fn join_k(a: &KElem, b: &KElem) -> Result<KElem, KlError> {
    let part = compare_k(a, b)?;
    let formula = mix_representatives(a, b, &part, false)?;
    let pointwise = KElem {
        table: a.table.clone(),
        counts: a
            .counts
            .iter()
            .zip(&b.counts)
            .map(|(&x, &y)| x.max(y))
            .collect(),
    };
    assert_eq!(formula, pointwise, "join routes disagree");
    Ok(formula)
}

/// `[(A ∩ Y) ∪ (B ∩ Z)]` for the meet, `[(A ∩ Z) ∪ (B ∩ Y)]` for the join.
fn mix_representatives(
    a: &KElem,
    b: &KElem,
    part: &ComparePartition,
    meet: bool,
) -> Result<KElem, KlError> {
    let ra = a.representative();
    let rb = b.representative();
    let parts: Vec<SetPart> = (0..a.table.len())
        .map(|c| {
            let pick_a = part.is_below(c) == meet;
            if pick_a {
                ra.part(c).clone()
            } else {
                rb.part(c).clone()
            }
        })
        .collect();
    let desc = BorelSetDesc::new(a.table.clone(), parts).expect("representatives are valid");
    KElem::of_set(&desc)
}

/// Meet in `L` via the finite/aperiodic four-way split, checked against the
/// pointwise minimum of class sums.
pub fn meet_l(a: &LElem, b: &LElem) -> Result<LElem, KlError> {
    a.check_table(b)?;
    let sums = four_way(a, b, true);
    let pointwise: Vec<ExtReal> = a
        .sums
        .iter()
        .zip(&b.sums)
        .map(|(x, y)| x.clone().min(y.clone()))
        .collect();
    assert_eq!(sums, pointwise, "meet routes disagree");
    LElem::new(a.table.clone(), sums)
}

pub fn join_l(a: &LElem, b: &LElem) -> Result<LElem, KlError> {
    a.check_table(b)?;
    let sums = four_way(a, b, false);
    let pointwise: Vec<ExtReal> = a
        .sums
        .iter()
        .zip(&b.sums)
        .map(|(x, y)| x.clone().max(y.clone()))
        .collect();
    assert_eq!(sums, pointwise, "join routes disagree");
    LElem::new(a.table.clone(), sums)
}

/// The four-way split: where both restrictions are finite the value comes
/// from the order isomorphism with class-sum functions; where exactly one is
/// finite the meet is the finite side and the join the infinite one; where
/// both are aperiodic the computation happens in `K` through `χ`.
fn four_way(a: &LElem, b: &LElem, meet: bool) -> Vec<ExtReal> {
    a.sums
        .iter()
        .zip(&b.sums)
        .map(|(x, y)| match (x.is_finite(), y.is_finite()) {
            (true, true) => {
                if meet {
                    x.clone().min(y.clone())
                } else {
                    x.clone().max(y.clone())
                }
            }
            (true, false) => {
                if meet {
                    x.clone()
                } else {
                    ExtReal::Infinity
                }
            }
            (false, true) => {
                if meet {
                    y.clone()
                } else {
                    ExtReal::Infinity
                }
            }
            // both ω in the aperiodic part: meet and join both ω
            (false, false) => ExtReal::Infinity,
        })
        .collect()
}

fn family_table<'a, T>(
    family: &'a CountableList<T>,
    table_of: impl Fn(&'a T) -> &'a Arc<ClassTable>,
) -> Result<Arc<ClassTable>, KlError> {
    let mut iter = family.iter_all();
    let first = iter.next().ok_or(KlError::EmptyFamily)?;
    let table = table_of(first).clone();
    for a in iter {
        if *table_of(a) != table {
            return Err(KlError::TableMismatch);
        }
    }
    Ok(table)
}

/// Countable sum in `K`: listed elements plus ω copies of the tail.
pub fn sum_k(family: &CountableList<KElem>) -> Result<KElem, KlError> {
    let table = family_table(family, KElem::table)?;
    let mut counts = alloc::vec![Count::Fin(0); table.len()];
    for a in &family.listed {
        for (c, &v) in a.counts.iter().enumerate() {
            counts[c] = counts[c] + v;
        }
    }
    if let Some(t) = &family.tail {
        for (c, &v) in t.counts.iter().enumerate() {
            counts[c] = counts[c] + v.times(Count::Omega);
        }
    }
    Ok(KElem { table, counts })
}

/// Countable sum in `L`.
pub fn sum_l(family: &CountableList<LElem>) -> Result<LElem, KlError> {
    let table = family_table(family, LElem::table)?;
    let mut sums = alloc::vec![ExtReal::zero(); table.len()];
    for a in &family.listed {
        for (c, v) in a.sums.iter().enumerate() {
            sums[c] = sums[c].clone() + v.clone();
        }
    }
    if let Some(t) = &family.tail {
        for (c, v) in t.sums.iter().enumerate() {
            sums[c] = sums[c].clone() + ExtReal::Infinity * v.clone();
        }
    }
    Ok(LElem { table, sums })
}

/// Countable join in `K`. Two routes: the pointwise supremum, and the
/// partition construction — each class goes to its first supremum attainer
/// and the chosen representatives are combined.
pub fn countable_join_k(family: &CountableList<KElem>) -> Result<KElem, KlError> {
    let table = family_table(family, KElem::table)?;
    let members: Vec<&KElem> = family.iter_all().collect();
    let mut sup = Vec::with_capacity(table.len());
    let mut constructed = Vec::with_capacity(table.len());
    for c in 0..table.len() {
        let m = members.iter().map(|a| a.counts[c]).max().expect("nonempty");
        sup.push(m);
        let winner = members
            .iter()
            .position(|a| a.counts[c] == m)
            .expect("supremum attained in a finite family");
        constructed.push(members[winner].counts[c]);
    }
    assert_eq!(sup, constructed, "join routes disagree");
    Ok(KElem { table, counts: sup })
}

/// Countable join in `L`: pointwise supremum of class sums (attained, since
/// the family lists finitely many distinct elements).
pub fn countable_join_l(family: &CountableList<LElem>) -> Result<LElem, KlError> {
    let table = family_table(family, LElem::table)?;
    let members: Vec<&LElem> = family.iter_all().collect();
    let sums = (0..table.len())
        .map(|c| {
            members
                .iter()
                .map(|a| a.sums[c].clone())
                .max()
                .expect("nonempty")
        })
        .collect();
    Ok(LElem { table, sums })
}

/// The join of the increasing chain of partial sums, `⋁ₙ Σ_{i<n} aᵢ`,
/// realized by the nested-representative construction (partial-sum
/// representatives are initial segments, so the union carries the supremum
/// count). Its equality with [`sum_k`] is the increasing-join law.
pub fn partial_sums_join_k(family: &CountableList<KElem>) -> Result<KElem, KlError> {
    let total = sum_k(family)?;
    let mut partial = KElem::zero(total.table.clone())?;
    let mut sup = partial.clone();
    for a in &family.listed {
        partial = partial.add(a)?;
        sup = countable_join_k(&CountableList::finite(alloc::vec![sup, partial.clone()]))?;
    }
    if let Some(t) = &family.tail {
        // past the prefix the partial sums grow by the tail each step, so
        // their supremum adds ω·tail
        sup = countable_join_k(&CountableList::finite(alloc::vec![
            sup,
            partial.add(&t.times(Count::Omega))?,
        ]))?;
    }
    assert_eq!(sup, total, "increasing-join routes disagree");
    Ok(total)
}

/// The same increasing-join law in `L`.
pub fn partial_sums_join_l(family: &CountableList<LElem>) -> Result<LElem, KlError> {
    let total = sum_l(family)?;
    let mut partial = LElem::zero(total.table.clone())?;
    let mut sup = partial.clone();
    for a in &family.listed {
        partial = partial.add(a)?;
        sup = countable_join_l(&CountableList::finite(alloc::vec![sup, partial.clone()]))?;
    }
    if let Some(t) = &family.tail {
        sup = countable_join_l(&CountableList::finite(alloc::vec![
            sup,
            partial.add(&t.scale(&ExtReal::Infinity))?,
        ]))?;
    }
    assert_eq!(sup, total, "increasing-join routes disagree");
    Ok(total)
}

/// Divide an aperiodic element by `n ≥ 1`: each infinite class is blocked
/// into consecutive runs of `n` indices, and the `n` transversals returned,
/// the `r`-th consisting of the indices `≡ r (mod n)`.
pub fn divide(a: &KElem, n: u64) -> Result<(KElem, Vec<BorelSetDesc>), KlError> {
    assert!(n >= 1);
    let offending: Vec<(String, u64)> = a
        .counts
        .iter()
        .enumerate()
        .filter_map(|(c, count)| match count {
            Count::Fin(k) if *k > 0 => Some((String::from(a.table.label(c)), *k)),
            _ => None,
        })
        .collect();
    if !offending.is_empty() {
        return Err(KlError::NotAperiodic { offending });
    }
    let quotient = a.clone();
    let transversals = (0..n)
        .map(|r| {
            let parts = a
                .counts
                .iter()
                .map(|count| match count {
                    Count::Omega => SetPart::Periodic {
                        from: 0,
                        modulus: n,
                        residues: [r].into(),
                    },
                    Count::Fin(_) => SetPart::empty(),
                })
                .collect();
            BorelSetDesc::new(a.table.clone(), parts).expect("transversals are valid")
        })
        .collect();
    Ok((quotient, transversals))
}

/// A refinement of `a + b = Σᵢ cᵢ`: per class, a transport plan between
/// `(a, b, 0, …)` and the series, whose rows give the refining families.
pub struct Refinement {
    table: Arc<ClassTable>,
    plans: Vec<TransportPlan>,
}

impl Refinement {
    /// The `i`-th element of the family refining the first summand.
    pub fn first(&self, i: usize) -> LElem {
        self.row(0, i)
    }

    /// The `i`-th element of the family refining the second summand.
    pub fn second(&self, i: usize) -> LElem {
        self.row(1, i)
    }

    fn row(&self, row: usize, i: usize) -> LElem {
        LElem {
            table: self.table.clone(),
            sums: self.plans.iter().map(|p| p.entry(row, i)).collect(),
        }
    }

    pub fn plans(&self) -> &[TransportPlan] {
        &self.plans
    }
}

/// The refinement axiom, constructively: given `a + b = Σᵢ cᵢ`, produce
/// families `(aᵢ)`, `(bᵢ)` with `a = Σᵢ aᵢ`, `b = Σᵢ bᵢ`, `aᵢ + bᵢ = cᵢ`.
pub fn refine(a: &LElem, b: &LElem, cs: &CountableList<LElem>) -> Result<Refinement, KlError> {
    a.check_table(b)?;
    let total = sum_l(cs)?;
    let lhs = a.add(b)?;
    for c in 0..a.table.len() {
        if lhs.sums[c] != total.sums[c] {
            return Err(KlError::RefinementMismatch {
                class: String::from(a.table.label(c)),
            });
        }
    }
    let plans = (0..a.table.len())
        .map(|c| {
            let u = TailSeq::from_prefix(alloc::vec![a.sums[c].clone(), b.sums[c].clone()]);
            let listed: Vec<ExtReal> = cs.listed.iter().map(|x| x.sums[c].clone()).collect();
            let tail = cs
                .tail
                .as_ref()
                .map(|t| t.sums[c].clone())
                .unwrap_or_else(ExtReal::zero);
            let v = TailSeq::new(listed, Tail::Const(tail));
            transport::transport(&u, &v).expect("sums checked equal")
        })
        .collect();
    Ok(Refinement {
        table: a.table.clone(),
        plans,
    })
}

/// The remainder axiom, constructively: given chains with `aᵢ = bᵢ + aᵢ₊₁`
/// (verified), the remainder is the pointwise infimum `c = ⋀ᵢ aᵢ`, and
/// `aᵢ = c + Σⱼ bᵢ₊ⱼ` holds exactly.
pub fn remainder(
    a_chain: &CountableList<LElem>,
    b_chain: &CountableList<LElem>,
) -> Result<LElem, KlError> {
    let table = family_table(a_chain, LElem::table)?;
    let horizon = a_chain.listed.len().max(b_chain.listed.len()) + 1;
    for i in 0..horizon {
        let (ai, bi, an) = match (a_chain.get(i), b_chain.get(i), a_chain.get(i + 1)) {
            (Some(x), Some(y), Some(z)) => (x, y, z),
            _ => {
                return Err(KlError::ChainBroken {
                    index: i,
                    class: String::new(),
                })
            }
        };
        let rhs = bi.add(an)?;
        for c in 0..table.len() {
            if ai.sums[c] != rhs.sums[c] {
                return Err(KlError::ChainBroken {
                    index: i,
                    class: String::from(table.label(c)),
                });
            }
        }
    }
    let members: Vec<&LElem> = a_chain.iter_all().collect();
    let sums = (0..table.len())
        .map(|c| {
            members
                .iter()
                .map(|a| a.sums[c].clone())
                .min()
                .expect("nonempty")
        })
        .collect();
    Ok(LElem { table, sums })
}

/// `Σ_{j ≥ i} bⱼ` for a listed-plus-tail chain.
pub fn tail_sum_from(b_chain: &CountableList<LElem>, i: usize) -> Result<LElem, KlError> {
    let listed: Vec<LElem> = b_chain.listed.iter().skip(i).cloned().collect();
    let fam = CountableList {
        listed,
        tail: b_chain.tail.clone(),
    };
    sum_l(&fam)
}
