//! Finitely presented smooth equivalence relations and the calculus of
//! weighted functions over them.
//!
//! A [`ClassTable`] lists the equivalence classes by label, each of size
//! `n ≥ 1` or `ω`; points of a class are its indices. Over a table live:
//!
//! - [`BorelSetDesc`] — a set of points, described per class as a finite
//!   index set, a cofinite one, or an arithmetic progression (the latter only
//!   appears in outputs of division and dyadic spreading);
//! - [`WeightedFn`] — a weighted function, one [`TailSeq`] per class;
//! - [`witness::Witness`] — an equidecomposition witness, a
//!   nonnegative kernel on the relation with structured sparsity.
//!
//! Because the presentation is smooth with explicit indexing,
//! equidecomposability of weighted functions reduces to per-class sum
//! equality; the witness calculus still carries the constructive content
//! (composition through transport plans, splitting, concentration onto a
//! complete section, and the spread of dyadic mass into an indicator).

pub mod symbolic;
pub mod witness;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::extnum::{ExtReal, Tail, TailSeq};
use crate::transport;

pub use witness::{Witness, WitnessPart, WitnessTail};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassSize {
    Finite(u64),
    Omega,
}

impl ClassSize {
    pub fn is_omega(&self) -> bool {
        matches!(self, ClassSize::Omega)
    }

    pub fn contains(&self, i: u64) -> bool {
        match self {
            ClassSize::Omega => true,
            ClassSize::Finite(n) => i < *n,
        }
    }

    pub fn count(&self) -> ExtReal {
        match self {
            ClassSize::Omega => ExtReal::Infinity,
            ClassSize::Finite(n) => ExtReal::nat(*n),
        }
    }
}

impl fmt::Display for ClassSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSize::Omega => write!(f, "omega"),
            ClassSize::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// A finitely presented smooth equivalence relation: an ordered list of
/// labeled classes with explicit sizes.
#[derive(Debug, PartialEq, Eq)]
pub struct ClassTable {
    classes: Vec<(String, ClassSize)>,
}

impl ClassTable {
    pub fn new(classes: Vec<(String, ClassSize)>) -> Result<Arc<Self>, EqrelError> {
        let mut seen = BTreeSet::new();
        for (label, size) in &classes {
            if !seen.insert(label.clone()) {
                return Err(EqrelError::DuplicateLabel(label.clone()));
            }
            if let ClassSize::Finite(0) = size {
                return Err(EqrelError::EmptyClass(label.clone()));
            }
        }
        Ok(Arc::new(ClassTable { classes }))
    }

    /// Convenience constructor: `n` classes labeled `c0, c1, …`, all `ω`.
    pub fn omega(n: usize) -> Arc<Self> {
        let classes = (0..n)
            .map(|i| (alloc::format!("c{i}"), ClassSize::Omega))
            .collect();
        ClassTable::new(classes).expect("generated labels are unique")
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn label(&self, c: usize) -> &str {
        &self.classes[c].0
    }

    pub fn size(&self, c: usize) -> ClassSize {
        self.classes[c].1
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|(l, _)| l == label)
    }

    /// Compressible iff every class is infinite.
    pub fn is_compressible(&self) -> bool {
        self.classes.iter().all(|(_, s)| s.is_omega())
    }

    pub fn finite_classes(&self) -> Vec<(String, u64)> {
        self.classes
            .iter()
            .filter_map(|(l, s)| match s {
                ClassSize::Finite(n) => Some((l.clone(), *n)),
                ClassSize::Omega => None,
            })
            .collect()
    }
}

/// One class's worth of a Borel set description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetPart {
    Finite(BTreeSet<u64>),
    /// Complement of a finite exception set; infinite classes only.
    Cofinite(BTreeSet<u64>),
    /// `{ from + k·modulus + r : k ∈ ℕ, r ∈ residues }`; infinite classes only.
    Periodic {
        from: u64,
        modulus: u64,
        residues: BTreeSet<u64>,
    },
}

impl SetPart {
    pub fn empty() -> Self {
        SetPart::Finite(BTreeSet::new())
    }

    pub fn whole(size: ClassSize) -> Self {
        match size {
            ClassSize::Omega => SetPart::Cofinite(BTreeSet::new()),
            ClassSize::Finite(n) => SetPart::Finite((0..n).collect()),
        }
    }

    pub fn contains(&self, i: u64) -> bool {
        match self {
            SetPart::Finite(s) => s.contains(&i),
            SetPart::Cofinite(e) => !e.contains(&i),
            SetPart::Periodic {
                from,
                modulus,
                residues,
            } => i >= *from && residues.contains(&((i - from) % modulus)),
        }
    }

    pub fn count(&self) -> ExtReal {
        match self {
            SetPart::Finite(s) => ExtReal::nat(s.len() as u64),
            SetPart::Cofinite(_) => ExtReal::Infinity,
            SetPart::Periodic { residues, .. } => {
                if residues.is_empty() {
                    ExtReal::zero()
                } else {
                    ExtReal::Infinity
                }
            }
        }
    }

    pub fn is_empty_part(&self) -> bool {
        match self {
            SetPart::Finite(s) => s.is_empty(),
            SetPart::Cofinite(_) => false,
            SetPart::Periodic { residues, .. } => residues.is_empty(),
        }
    }

    pub fn least(&self) -> Option<u64> {
        match self {
            SetPart::Finite(s) => s.iter().next().copied(),
            SetPart::Cofinite(e) => (0..).find(|i| !e.contains(i)),
            SetPart::Periodic { from, residues, .. } => residues.iter().next().map(|r| from + r),
        }
    }

    /// Union of finite/cofinite parts (the family is closed under boolean
    /// operations; periodic parts are outside it).
    pub fn union(&self, other: &SetPart) -> Option<SetPart> {
        match (self, other) {
            (SetPart::Finite(a), SetPart::Finite(b)) => {
                Some(SetPart::Finite(a.union(b).copied().collect()))
            }
            (SetPart::Finite(a), SetPart::Cofinite(e))
            | (SetPart::Cofinite(e), SetPart::Finite(a)) => Some(SetPart::Cofinite(
                e.iter().copied().filter(|i| !a.contains(i)).collect(),
            )),
            (SetPart::Cofinite(e1), SetPart::Cofinite(e2)) => {
                Some(SetPart::Cofinite(e1.intersection(e2).copied().collect()))
            }
            _ => None,
        }
    }

    pub fn intersect(&self, other: &SetPart) -> Option<SetPart> {
        match (self, other) {
            (SetPart::Finite(a), b) => Some(SetPart::Finite(
                a.iter().copied().filter(|&i| b.contains(i)).collect(),
            )),
            (a, SetPart::Finite(b)) => Some(SetPart::Finite(
                b.iter().copied().filter(|&i| a.contains(i)).collect(),
            )),
            (SetPart::Cofinite(e1), SetPart::Cofinite(e2)) => {
                Some(SetPart::Cofinite(e1.union(e2).copied().collect()))
            }
            _ => None,
        }
    }

    pub fn minus(&self, other: &SetPart) -> Option<SetPart> {
        match (self, other) {
            (a, SetPart::Finite(b)) => match a {
                SetPart::Finite(s) => Some(SetPart::Finite(
                    s.iter().copied().filter(|i| !b.contains(i)).collect(),
                )),
                SetPart::Cofinite(e) => Some(SetPart::Cofinite(e.union(b).copied().collect())),
                SetPart::Periodic { .. } => None,
            },
            (SetPart::Finite(s), SetPart::Cofinite(e)) => {
                Some(SetPart::Finite(s.intersection(e).copied().collect()))
            }
            (SetPart::Cofinite(e1), SetPart::Cofinite(e2)) => Some(SetPart::Finite(
                e2.iter().copied().filter(|i| !e1.contains(i)).collect(),
            )),
            _ => None,
        }
    }

    /// Image under a bijection of the index set; finite/cofinite only.
    pub fn map_bijective(&self, f: impl Fn(u64) -> u64) -> Option<SetPart> {
        match self {
            SetPart::Finite(s) => Some(SetPart::Finite(s.iter().map(|&i| f(i)).collect())),
            SetPart::Cofinite(e) => Some(SetPart::Cofinite(e.iter().map(|&i| f(i)).collect())),
            SetPart::Periodic { .. } => None,
        }
    }
}

impl fmt::Display for SetPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, s: &BTreeSet<u64>) -> fmt::Result {
            for (k, i) in s.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            Ok(())
        }
        match self {
            SetPart::Finite(s) => {
                write!(f, "finite{{")?;
                list(f, s)?;
                write!(f, "}}")
            }
            SetPart::Cofinite(e) => {
                write!(f, "cofinite{{")?;
                list(f, e)?;
                write!(f, "}}")
            }
            SetPart::Periodic {
                from,
                modulus,
                residues,
            } => {
                write!(f, "periodic{{from {from} mod {modulus}: ")?;
                list(f, residues)?;
                write!(f, "}}")
            }
        }
    }
}

/// A Borel set over a class table: one [`SetPart`] per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelSetDesc {
    table: Arc<ClassTable>,
    parts: Vec<SetPart>,
}

impl BorelSetDesc {
    pub fn new(table: Arc<ClassTable>, parts: Vec<SetPart>) -> Result<Self, EqrelError> {
        assert_eq!(parts.len(), table.len(), "one part per class");
        for (c, part) in parts.iter().enumerate() {
            match (part, table.size(c)) {
                (SetPart::Cofinite(_) | SetPart::Periodic { .. }, ClassSize::Finite(_)) => {
                    return Err(EqrelError::InfinitePartOnFiniteClass {
                        class: String::from(table.label(c)),
                    });
                }
                (SetPart::Finite(s), ClassSize::Finite(n)) => {
                    if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                        return Err(EqrelError::IndexOutOfRange {
                            class: String::from(table.label(c)),
                            index: bad,
                        });
                    }
                }
                _ => {}
            }
        }
        Ok(BorelSetDesc { table, parts })
    }

    pub fn empty(table: Arc<ClassTable>) -> Self {
        let parts = (0..table.len()).map(|_| SetPart::empty()).collect();
        BorelSetDesc { table, parts }
    }

    pub fn whole(table: Arc<ClassTable>) -> Self {
        let parts = (0..table.len())
            .map(|c| SetPart::whole(table.size(c)))
            .collect();
        BorelSetDesc { table, parts }
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn part(&self, c: usize) -> &SetPart {
        &self.parts[c]
    }

    pub fn parts(&self) -> &[SetPart] {
        &self.parts
    }

    pub fn contains(&self, c: usize, i: u64) -> bool {
        self.parts[c].contains(i)
    }

    /// Per-class counts in `ℕ ∪ {ω}`, as extended reals.
    pub fn class_counts(&self) -> Vec<ExtReal> {
        self.parts.iter().map(SetPart::count).collect()
    }
}

/// A weighted function over a table: one tail sequence per class. On a finite
/// class the sequence must be supported inside the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedFn {
    table: Arc<ClassTable>,
    parts: Vec<TailSeq>,
}

impl WeightedFn {
    pub fn new(table: Arc<ClassTable>, parts: Vec<TailSeq>) -> Result<Self, EqrelError> {
        assert_eq!(parts.len(), table.len(), "one sequence per class");
        for (c, seq) in parts.iter().enumerate() {
            if let ClassSize::Finite(n) = table.size(c) {
                if !seq.is_finitely_supported() {
                    return Err(EqrelError::TailOnFiniteClass {
                        class: String::from(table.label(c)),
                    });
                }
                if seq.spine() as u64 > n {
                    return Err(EqrelError::IndexOutOfRange {
                        class: String::from(table.label(c)),
                        index: seq.spine() as u64 - 1,
                    });
                }
            }
        }
        Ok(WeightedFn { table, parts })
    }

    pub fn zero(table: Arc<ClassTable>) -> Self {
        let parts = (0..table.len()).map(|_| TailSeq::zero()).collect();
        WeightedFn { table, parts }
    }

    /// The characteristic function of a set description, when it lies in the
    /// tail-sequence family (periodic parts do not).
    pub fn indicator(desc: &BorelSetDesc) -> Option<WeightedFn> {
        let mut parts = Vec::with_capacity(desc.table.len());
        for part in &desc.parts {
            let seq = match part {
                SetPart::Finite(s) => TailSeq::indicator(s.iter().copied()),
                SetPart::Cofinite(e) => {
                    let bound = e.iter().next_back().map_or(0, |m| m + 1);
                    let prefix = (0..bound)
                        .map(|i| {
                            if e.contains(&i) {
                                ExtReal::zero()
                            } else {
                                ExtReal::one()
                            }
                        })
                        .collect();
                    TailSeq::new(prefix, Tail::Const(ExtReal::one()))
                }
                SetPart::Periodic { .. } => return None,
            };
            parts.push(seq);
        }
        Some(WeightedFn {
            table: desc.table.clone(),
            parts,
        })
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn part(&self, c: usize) -> &TailSeq {
        &self.parts[c]
    }

    pub fn parts(&self) -> &[TailSeq] {
        &self.parts
    }

    pub fn get(&self, c: usize, i: u64) -> ExtReal {
        self.parts[c].get(i as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(TailSeq::is_zero)
    }

    pub fn class_sum(&self, c: usize) -> ExtReal {
        self.parts[c].sum()
    }

    pub fn class_sums(&self) -> Vec<ExtReal> {
        self.parts.iter().map(TailSeq::sum).collect()
    }

    /// The per-class sum map together with its finite/aperiodic
    /// classification. The zero function is both finite and aperiodic.
    pub fn sigma(&self) -> SigmaReport {
        let mut sums = BTreeMap::new();
        let mut finite = true;
        let mut aperiodic = true;
        for (c, seq) in self.parts.iter().enumerate() {
            let s = seq.sum();
            finite &= s.is_finite();
            aperiodic &= s.is_zero() || s.is_infinite();
            sums.insert(String::from(self.table.label(c)), s);
        }
        SigmaReport {
            sums,
            finite,
            aperiodic,
        }
    }

    pub fn pointwise_add(&self, other: &WeightedFn) -> Result<WeightedFn, EqrelError> {
        self.check_table(other)?;
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.pointwise_add(b))
            .collect();
        Ok(WeightedFn {
            table: self.table.clone(),
            parts,
        })
    }

    pub fn scale(&self, r: &ExtReal) -> WeightedFn {
        let parts = self.parts.iter().map(|s| s.scale(r)).collect();
        WeightedFn {
            table: self.table.clone(),
            parts,
        }
    }

    fn check_table(&self, other: &WeightedFn) -> Result<(), EqrelError> {
        if self.table == other.table {
            Ok(())
        } else {
            Err(EqrelError::TableMismatch)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaReport {
    pub sums: BTreeMap<String, ExtReal>,
    pub finite: bool,
    pub aperiodic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqrelError {
    DuplicateLabel(String),
    EmptyClass(String),
    TableMismatch,
    IndexOutOfRange {
        class: String,
        index: u64,
    },
    InfinitePartOnFiniteClass {
        class: String,
    },
    TailOnFiniteClass {
        class: String,
    },
    /// A structured-tail combination escapes the representable family.
    UnrepresentableSums {
        class: String,
    },
    /// `rng φ ≠ dom ψ` when composing.
    WitnessMismatch {
        class: String,
    },
    /// `α₁ + α₂ ≠ α` when splitting.
    SumMismatch {
        class: String,
    },
    NotCompleteSection {
        missed: Vec<String>,
    },
    NotAperiodic {
        offending: Vec<String>,
    },
    NonDyadicValues {
        class: String,
    },
}

impl fmt::Display for EqrelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqrelError::DuplicateLabel(l) => write!(f, "duplicate class label {l:?}"),
            EqrelError::EmptyClass(l) => write!(f, "class {l:?} has size 0"),
            EqrelError::TableMismatch => write!(f, "values live over different class tables"),
            EqrelError::IndexOutOfRange { class, index } => {
                write!(f, "index {index} out of range in class {class:?}")
            }
            EqrelError::InfinitePartOnFiniteClass { class } => {
                write!(f, "infinite set description on finite class {class:?}")
            }
            EqrelError::TailOnFiniteClass { class } => {
                write!(f, "nonzero tail on finite class {class:?}")
            }
            EqrelError::UnrepresentableSums { class } => {
                write!(f, "sums in class {class:?} escape the representable family")
            }
            EqrelError::WitnessMismatch { class } => {
                write!(f, "range/domain mismatch in class {class:?}")
            }
            EqrelError::SumMismatch { class } => {
                write!(f, "split parts do not sum to the domain in class {class:?}")
            }
            EqrelError::NotCompleteSection { missed } => {
                write!(f, "not a complete section; missed classes: {missed:?}")
            }
            EqrelError::NotAperiodic { offending } => {
                write!(f, "not aperiodic; offending classes: {offending:?}")
            }
            EqrelError::NonDyadicValues { class } => {
                write!(
                    f,
                    "class {class:?} carries values outside the supported dyadic family"
                )
            }
        }
    }
}

/// Result of the equidecomposability test.
#[derive(Debug)]
pub enum Equidec {
    /// Per-class sums agree; a witness is materialized when both sides are
    /// finitely supported in every class.
    Equivalent { witness: Option<Witness> },
    Inequivalent {
        class: String,
        left: ExtReal,
        right: ExtReal,
    },
}

impl Equidec {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equidec::Equivalent { .. })
    }
}

/// Decide `α ∼ β`: per-class sum equality on a smooth presentation. When both
/// restrictions are finitely supported everywhere, mass is moved greedily in
/// index order through a transport plan per class and the witness returned.
pub fn equidecomposable(alpha: &WeightedFn, beta: &WeightedFn) -> Result<Equidec, EqrelError> {
    alpha.check_table(beta)?;
    for c in 0..alpha.table.len() {
        let (l, r) = (alpha.class_sum(c), beta.class_sum(c));
        if l != r {
            return Ok(Equidec::Inequivalent {
                class: String::from(alpha.table.label(c)),
                left: l,
                right: r,
            });
        }
    }
    let finitely_supported = alpha
        .parts
        .iter()
        .chain(&beta.parts)
        .all(TailSeq::is_finitely_supported);
    if !finitely_supported {
        return Ok(Equidec::Equivalent { witness: None });
    }
    let mut parts = Vec::with_capacity(alpha.table.len());
    for c in 0..alpha.table.len() {
        let plan = transport::transport(alpha.part(c), beta.part(c))
            .expect("per-class sums verified equal");
        let mut entries = BTreeMap::new();
        for i in 0..alpha.part(c).spine() {
            for j in 0..beta.part(c).spine() {
                let w = plan.entry(i, j);
                if !w.is_zero() {
                    entries.insert((i as u64, j as u64), w);
                }
            }
        }
        parts.push(WitnessPart {
            entries,
            tails: Vec::new(),
        });
    }
    let witness = Witness::new(alpha.table.clone(), parts)?;
    Ok(Equidec::Equivalent {
        witness: Some(witness),
    })
}

/// Concentrate `α` onto a complete section `Y`: the retraction fixes points
/// of `Y` and sends everything else to the least `Y`-index of its class.
/// Returns the concentrated function and the witness `φ(x, f(x)) = α(x)`.
pub fn concentrate(
    alpha: &WeightedFn,
    section: &BorelSetDesc,
) -> Result<(WeightedFn, Witness), EqrelError> {
    if alpha.table != section.table {
        return Err(EqrelError::TableMismatch);
    }
    let table = &alpha.table;
    let missed: Vec<String> = (0..table.len())
        .filter(|&c| !alpha.class_sum(c).is_zero() && section.part(c).is_empty_part())
        .map(|c| String::from(table.label(c)))
        .collect();
    if !missed.is_empty() {
        return Err(EqrelError::NotCompleteSection { missed });
    }

    let mut parts = Vec::with_capacity(table.len());
    for c in 0..table.len() {
        let seq = alpha.part(c);
        if seq.is_zero() {
            parts.push(WitnessPart::empty());
            continue;
        }
        let y = section.part(c);
        let least = y.least().expect("nonempty by the complete-section check");
        let mut entries = BTreeMap::new();
        let mut tails = Vec::new();
        let tail_val = seq.tail_value();
        if tail_val.is_zero() {
            for (i, v) in seq.prefix().iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let i = i as u64;
                let target = if y.contains(i) { i } else { least };
                add_entry(&mut entries, (i, target), v.clone());
            }
        } else {
            // constant tail: beyond `from`, section membership must be
            // eventually uniform for the witness to stay structured
            let from = match y {
                SetPart::Cofinite(e) => {
                    let bound = e.iter().next_back().map_or(0, |m| m + 1);
                    let from = bound.max(seq.spine() as u64);
                    tails.push(WitnessTail::Shift {
                        offset: 0,
                        from,
                        value: tail_val.clone(),
                    });
                    from
                }
                SetPart::Finite(s) => {
                    let bound = s.iter().next_back().map_or(0, |m| m + 1);
                    let from = bound.max(seq.spine() as u64);
                    tails.push(WitnessTail::Sink {
                        col: least,
                        from,
                        value: tail_val.clone(),
                    });
                    from
                }
                SetPart::Periodic { .. } => {
                    return Err(EqrelError::UnrepresentableSums {
                        class: String::from(table.label(c)),
                    });
                }
            };
            for i in 0..from {
                let v = seq.get(i as usize);
                if v.is_zero() {
                    continue;
                }
                let target = if y.contains(i) { i } else { least };
                add_entry(&mut entries, (i, target), v);
            }
        }
        parts.push(WitnessPart { entries, tails });
    }
    let witness = Witness::new(table.clone(), parts)?;
    let (dom, rng) = witness.dom_rng()?;
    debug_assert_eq!(&dom, alpha);
    Ok((rng, witness))
}

fn add_entry(entries: &mut BTreeMap<(u64, u64), ExtReal>, key: (u64, u64), v: ExtReal) {
    let slot = entries.entry(key).or_insert_with(ExtReal::zero);
    *slot = slot.clone() + v;
}

/// Result of [`spread_dyadic`]: an indicator set equidecomposable with the
/// input, together with the chain of witnesses realizing it.
#[derive(Debug)]
pub struct Spread {
    pub indicator: BorelSetDesc,
    pub chain: Vec<Witness>,
}

/// Replace an aperiodic dyadic `α` by an equivalent characteristic function.
///
/// Per class, two supported shapes:
/// - finitely supported values (dyadic or `∞`): all mass is concentrated on
///   the least support point (where it is `∞` by aperiodicity) and then
///   spread as weight 1 over the whole class;
/// - the constant function `2^-n`: indices are grouped into blocks of `2^n`
///   and each block's mass moved onto its least element, one transversal
///   point per block.
pub fn spread_dyadic(alpha: &WeightedFn) -> Result<Spread, EqrelError> {
    let table = &alpha.table;
    let non_omega: Vec<String> = (0..table.len())
        .filter(|&c| !table.size(c).is_omega())
        .map(|c| String::from(table.label(c)))
        .collect();
    if !non_omega.is_empty() {
        return Err(EqrelError::NotAperiodic {
            offending: non_omega,
        });
    }
    let offending: Vec<String> = (0..table.len())
        .filter(|&c| {
            let s = alpha.class_sum(c);
            !(s.is_zero() || s.is_infinite())
        })
        .map(|c| String::from(table.label(c)))
        .collect();
    if !offending.is_empty() {
        return Err(EqrelError::NotAperiodic { offending });
    }

    let mut set_parts = Vec::with_capacity(table.len());
    let mut step1 = Vec::with_capacity(table.len());
    let mut step2 = Vec::with_capacity(table.len());
    for c in 0..table.len() {
        let seq = alpha.part(c);
        let class = || String::from(table.label(c));
        if seq.is_zero() {
            set_parts.push(SetPart::empty());
            step1.push(WitnessPart::empty());
            step2.push(WitnessPart::empty());
            continue;
        }
        if seq.is_finitely_supported() {
            for v in seq.prefix() {
                if v.is_finite() && v.dyadic_bits().is_err() {
                    return Err(EqrelError::NonDyadicValues { class: class() });
                }
            }
            // class sum is ∞ with finite support, so an ∞ point exists;
            // concentrate on the least support index, then spread as 1's
            let x0 = seq
                .prefix()
                .iter()
                .position(|v| !v.is_zero())
                .expect("nonzero class") as u64;
            let mut entries = BTreeMap::new();
            for (i, v) in seq.prefix().iter().enumerate() {
                if !v.is_zero() {
                    add_entry(&mut entries, (i as u64, x0), v.clone());
                }
            }
            step1.push(WitnessPart {
                entries,
                tails: Vec::new(),
            });
            step2.push(WitnessPart {
                entries: BTreeMap::new(),
                tails: alloc::vec![WitnessTail::Source {
                    row: x0,
                    from: 0,
                    value: ExtReal::one(),
                }],
            });
            set_parts.push(SetPart::whole(ClassSize::Omega));
            continue;
        }
        // constant-tail class: only the whole-class constant 2^-n is supported
        if seq.spine() != 0 {
            return Err(EqrelError::NonDyadicValues { class: class() });
        }
        let c_val = seq.tail_value();
        let n = match dyadic_power(&c_val) {
            Some(n) => n,
            None => return Err(EqrelError::NonDyadicValues { class: class() }),
        };
        if n == 0 {
            // already an indicator
            step1.push(WitnessPart::identity_tail(ExtReal::one()));
            step2.push(WitnessPart::identity_tail(ExtReal::one()));
            set_parts.push(SetPart::whole(ClassSize::Omega));
            continue;
        }
        let period = 1u64 << n;
        let pairs = (0..period)
            .map(|a| (a, -(a as i64), c_val.clone()))
            .collect();
        step1.push(WitnessPart {
            entries: BTreeMap::new(),
            tails: alloc::vec![WitnessTail::Block {
                from: 0,
                period,
                pairs
            }],
        });
        step2.push(WitnessPart {
            entries: BTreeMap::new(),
            tails: alloc::vec![WitnessTail::Block {
                from: 0,
                period,
                pairs: alloc::vec![(0, 0, ExtReal::one())],
            }],
        });
        let mut residues = BTreeSet::new();
        residues.insert(0u64);
        set_parts.push(SetPart::Periodic {
            from: 0,
            modulus: period,
            residues,
        });
    }

    let indicator = BorelSetDesc::new(table.clone(), set_parts)?;
    let chain = alloc::vec![
        Witness::new(table.clone(), step1)?,
        Witness::new(table.clone(), step2)?,
    ];
    Ok(Spread { indicator, chain })
}

/// `Some(n)` iff the value is exactly `2^-n` (so `1` gives `n = 0`).
fn dyadic_power(v: &ExtReal) -> Option<u32> {
    let r = v.as_finite()?;
    use num_traits::One;
    if !r.numer().is_one() {
        return None;
    }
    let d = r.denom();
    let dm1 = d - num_bigint::BigUint::one();
    if (d & &dm1) != num_bigint::BigUint::from(0u32) {
        return None;
    }
    Some(d.bits().saturating_sub(1) as u32)
}
