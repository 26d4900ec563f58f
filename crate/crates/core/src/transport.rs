//! The refinement/transport operator `d`.
//!
//! Given two equal-sum sequences `u`, `v` over `[0, ∞]`, [`transport`] builds
//! a deterministic plan — a queryable matrix whose row sums are `u` and whose
//! column sums are `v`. The construction is by cases on where the infinite
//! entries sit:
//!
//! - **I**: both sides contain an `∞` entry — a cross pattern at the least
//!   such indices.
//! - **II**: one side is `{0, ∞}`-valued, the other all finite — windows of
//!   the finite side with sums exceeding 1 are routed round-robin to the
//!   infinite indices of the other.
//! - **III**: both all finite — a greedy walk maintaining row/column
//!   residuals, advancing the row on ties.
//! - **IV**: one side mixes finite and infinite values — it is split into a
//!   finite and an infinite part, the other side is split to match, and the
//!   pieces recurse into cases II and III.
//!
//! Entries are memoized; querying entry `(i, j)` in case III touches at most
//! `i + j + 1` greedy steps. Plans are deterministic but use interior
//! mutability for the memo, so they are not `Sync`; share a plan across
//! threads only behind external synchronization or keep it thread-local.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::extnum::{ExtReal, TailSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    I,
    II,
    IISym,
    III,
    IV,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::I => write!(f, "I"),
            CaseTag::II => write!(f, "II"),
            CaseTag::IISym => write!(f, "II-sym"),
            CaseTag::III => write!(f, "III"),
            CaseTag::IV => write!(f, "IV"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransportError {
    SumMismatch { left: ExtReal, right: ExtReal },
}

impl fmt::Display for TransportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransportError::SumMismatch { left, right } => {
                write!(f, "sequence sums differ: {left} vs {right}")
            }
        }
    }
}

/// Which marginal a violation was found on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Row,
    Col,
}

#[derive(Clone, Debug)]
pub struct MarginalViolation {
    pub axis: Axis,
    pub index: usize,
    pub expected: ExtReal,
    pub observed: ExtReal,
}

impl fmt::Display for MarginalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = match self.axis {
            Axis::Row => "row",
            Axis::Col => "column",
        };
        write!(
            f,
            "{axis} {} sums to {} but the marginal is {}",
            self.index, self.observed, self.expected
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginalStatus {
    /// The sum over a covering window equals the marginal exactly.
    Exact,
    /// The marginal is `∞` and the partial sums were driven past the bound.
    DivergenceCertified,
}

#[derive(Clone, Debug)]
pub struct MarginalLine {
    pub index: usize,
    pub expected: ExtReal,
    pub observed: ExtReal,
    pub scanned_to: usize,
    pub status: MarginalStatus,
}

#[derive(Clone, Debug)]
pub struct MarginalReport {
    pub bound: usize,
    pub rows: Vec<MarginalLine>,
    pub cols: Vec<MarginalLine>,
}

/// A transport plan between `u` and `v`: row marginals `u`, column marginals
/// `v`, entries computed on demand and memoized.
pub struct TransportPlan {
    u: TailSeq,
    v: TailSeq,
    tag: CaseTag,
    transposed: bool,
    core: RefCell<Core>,
}

impl fmt::Debug for TransportPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransportPlan")
            .field("u", &self.u)
            .field("v", &self.v)
            .field("case", &self.tag)
            .finish()
    }
}

/// Build the plan for `u`, `v`. Fails unless the sums agree exactly.
pub fn transport(u: &TailSeq, v: &TailSeq) -> Result<TransportPlan, TransportError> {
    let (su, sv) = (u.sum(), v.sum());
    if su != sv {
        return Err(TransportError::SumMismatch {
            left: su,
            right: sv,
        });
    }
    let (tag, transposed, core) = classify(u, v);
    Ok(TransportPlan {
        u: u.clone(),
        v: v.clone(),
        tag,
        transposed,
        core: RefCell::new(core),
    })
}

fn classify(u: &TailSeq, v: &TailSeq) -> (CaseTag, bool, Core) {
    if u.has_infinite_entry() && v.has_infinite_entry() {
        let i0 = u.least_infinite_index().unwrap();
        let j0 = v.least_infinite_index().unwrap();
        return (
            CaseTag::I,
            false,
            Core::CaseI {
                u: u.clone(),
                v: v.clone(),
                i0,
                j0,
            },
        );
    }
    if u.zero_infinity_valued() && v.all_finite() {
        if u.is_zero() {
            return (CaseTag::II, false, Core::Zero);
        }
        return (
            CaseTag::II,
            false,
            Core::CaseII(CaseII::new(u.clone(), Seq::plain(v.clone()))),
        );
    }
    if v.zero_infinity_valued() && u.all_finite() {
        if v.is_zero() {
            return (CaseTag::IISym, true, Core::Zero);
        }
        return (
            CaseTag::IISym,
            true,
            Core::CaseII(CaseII::new(v.clone(), Seq::plain(u.clone()))),
        );
    }
    if u.all_finite() && v.all_finite() {
        return (
            CaseTag::III,
            false,
            Core::Greedy(Greedy::new(Seq::plain(u.clone()), Seq::plain(v.clone()))),
        );
    }
    // exactly one side mixes ∞ with nonzero finite values
    if u.has_infinite_entry() {
        (CaseTag::IV, false, Core::CaseIV(CaseIV::new(u, v)))
    } else {
        (CaseTag::IV, true, Core::CaseIV(CaseIV::new(v, u)))
    }
}

impl TransportPlan {
    pub fn case_tag(&self) -> CaseTag {
        self.tag
    }

    pub fn source(&self) -> &TailSeq {
        &self.u
    }

    pub fn target(&self) -> &TailSeq {
        &self.v
    }

    /// The deterministic entry at `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> ExtReal {
        let mut core = self.core.borrow_mut();
        if self.transposed {
            core.entry(j, i)
        } else {
            core.entry(i, j)
        }
    }

    /// Verify the row and column marginals inside `bound`.
    ///
    /// Finite marginals are checked by exact summation over a window that
    /// provably covers the row/column support (at least `bound` wide, so
    /// entries beyond the support are checked to vanish). Infinite marginals
    /// get a divergence certificate: the partial sums are driven strictly
    /// past `max(bound, 1)` or until an `∞` entry appears.
    pub fn verify_marginals(&self, bound: usize) -> Result<MarginalReport, MarginalViolation> {
        let mut rows = Vec::new();
        for i in 0..bound {
            rows.push(self.verify_line(Axis::Row, i, bound)?);
        }
        let mut cols = Vec::new();
        for j in 0..bound {
            cols.push(self.verify_line(Axis::Col, j, bound)?);
        }
        Ok(MarginalReport { bound, rows, cols })
    }

    fn verify_line(
        &self,
        axis: Axis,
        index: usize,
        bound: usize,
    ) -> Result<MarginalLine, MarginalViolation> {
        let expected = match axis {
            Axis::Row => self.u.get(index),
            Axis::Col => self.v.get(index),
        };
        let get = |k: usize| match axis {
            Axis::Row => self.entry(index, k),
            Axis::Col => self.entry(k, index),
        };
        if expected.is_finite() {
            let cover = {
                let mut core = self.core.borrow_mut();
                match (axis, self.transposed) {
                    (Axis::Row, false) | (Axis::Col, true) => core.row_cover(index),
                    (Axis::Row, true) | (Axis::Col, false) => core.col_cover(index),
                }
            };
            let window = cover.max(bound);
            let observed: ExtReal = (0..window).map(get).sum();
            if observed != expected {
                return Err(MarginalViolation {
                    axis,
                    index,
                    expected,
                    observed,
                });
            }
            Ok(MarginalLine {
                index,
                expected,
                observed,
                scanned_to: window,
                status: MarginalStatus::Exact,
            })
        } else {
            let threshold = ExtReal::nat(bound.max(1) as u64);
            let mut partial = ExtReal::zero();
            let mut k = 0usize;
            loop {
                let e = get(k);
                k += 1;
                let infinite = e.is_infinite();
                partial = partial + e;
                if infinite || partial > threshold {
                    break;
                }
            }
            Ok(MarginalLine {
                index,
                expected,
                observed: partial,
                scanned_to: k,
                status: MarginalStatus::DivergenceCertified,
            })
        }
    }

    /// Greedy steps taken so far (case III and the finite half of case IV);
    /// querying entry `(i, j)` on a fresh plan takes at most `i + j + 1`.
    pub fn greedy_steps(&self) -> usize {
        match &*self.core.borrow() {
            Core::Greedy(g) => g.steps,
            Core::CaseIV(c) => c.fin.steps,
            _ => 0,
        }
    }

    /// The `bound × bound` window of entries, for reports.
    pub fn window(&self, bound: usize) -> Vec<Vec<ExtReal>> {
        (0..bound)
            .map(|i| (0..bound).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

enum Core {
    Zero,
    CaseI {
        u: TailSeq,
        v: TailSeq,
        i0: usize,
        j0: usize,
    },
    CaseII(CaseII),
    Greedy(Greedy),
    CaseIV(CaseIV),
}

impl Core {
    fn entry(&mut self, i: usize, j: usize) -> ExtReal {
        match self {
            Core::Zero => ExtReal::zero(),
            Core::CaseI { u, v, i0, j0 } => {
                if i == *i0 {
                    v.get(j)
                } else if j == *j0 {
                    u.get(i)
                } else {
                    ExtReal::zero()
                }
            }
            Core::CaseII(c) => c.entry(i, j),
            Core::Greedy(g) => g.entry(i, j),
            Core::CaseIV(c) => c.fin.entry(i, j) + c.inf.entry(i, j),
        }
    }

    /// A column index past which row `i` is identically zero. Only called
    /// when the row marginal is finite.
    fn row_cover(&mut self, i: usize) -> usize {
        match self {
            Core::Zero => 0,
            Core::CaseI { j0, i0, .. } => {
                debug_assert!(i != *i0);
                *j0 + 1
            }
            Core::CaseII(_) => 0, // finite row marginal in case II means the row is zero
            Core::Greedy(g) => g.row_cover(i),
            Core::CaseIV(c) => c.fin.row_cover(i).max(c.inf.row_cover_zero()),
        }
    }

    fn col_cover(&mut self, j: usize) -> usize {
        match self {
            Core::Zero => 0,
            Core::CaseI { i0, .. } => *i0 + 1,
            Core::CaseII(c) => c.col_cover(j),
            Core::Greedy(g) => g.col_cover(j),
            Core::CaseIV(c) => {
                let a = c.fin.col_cover(j);
                let b = c.inf.col_cover(j);
                a.max(b)
            }
        }
    }
}

/// Internal sequence view: a plain tail sequence, or a tail sequence masked
/// to its `>1`-sum windows of one parity (used by the case IV split).
struct Seq {
    base: TailSeq,
    mask: Option<Mask>,
}

struct Mask {
    parity: usize,
    cuts: WindowCuts,
}

impl Seq {
    fn plain(base: TailSeq) -> Self {
        Seq { base, mask: None }
    }

    fn masked(base: TailSeq, parity: usize) -> Self {
        Seq {
            base,
            mask: Some(Mask {
                parity,
                cuts: WindowCuts::new(),
            }),
        }
    }

    fn get(&mut self, i: usize) -> ExtReal {
        match &mut self.mask {
            None => self.base.get(i),
            Some(m) => {
                let base = &self.base;
                let w = m.cuts.window_of(|k| base.get(k), i);
                if w % 2 == m.parity {
                    self.base.get(i)
                } else {
                    ExtReal::zero()
                }
            }
        }
    }

    fn is_finitely_supported(&self) -> bool {
        self.mask.is_none() && self.base.is_finitely_supported()
    }

    fn spine(&self) -> usize {
        self.base.spine()
    }
}

/// Lazily extended cut points `0 = k_0 < k_1 < …` where each window
/// `[k_l, k_{l+1})` has entry sum strictly greater than 1. Well-defined
/// whenever the underlying sequence has infinite sum.
struct WindowCuts {
    cuts: Vec<usize>,
}

impl WindowCuts {
    fn new() -> Self {
        WindowCuts {
            cuts: alloc::vec![0],
        }
    }

    /// Index of the window containing position `j`.
    fn window_of(&mut self, get: impl Fn(usize) -> ExtReal, j: usize) -> usize {
        let one = ExtReal::one();
        while *self.cuts.last().unwrap() <= j {
            let start = *self.cuts.last().unwrap();
            let mut acc = ExtReal::zero();
            let mut k = start;
            loop {
                acc = acc + get(k);
                k += 1;
                if acc > one {
                    break;
                }
            }
            self.cuts.push(k);
        }
        // j < cuts.last(); find l with cuts[l] <= j < cuts[l+1]
        match self.cuts.binary_search(&j) {
            Ok(l) => l,
            Err(ins) => ins - 1,
        }
    }
}

/// Case II: `u` is `{0, ∞}`-valued with at least one `∞`, `v` all finite with
/// infinite sum. Window `l` of `v` is routed to row `f(l)`.
struct CaseII {
    u: TailSeq,
    v: Seq,
    inf: InfIndices,
    v_cuts: WindowCuts,
}

/// The increasing enumeration of `u`'s infinite indices.
enum InfIndices {
    Finite(Vec<usize>),
    /// Listed prefix positions, then every index from `from` on.
    Eventually {
        listed: Vec<usize>,
        from: usize,
    },
}

impl InfIndices {
    fn nth(&self, k: usize) -> usize {
        match self {
            InfIndices::Finite(s) => s[k],
            InfIndices::Eventually { listed, from } => {
                if k < listed.len() {
                    listed[k]
                } else {
                    from + (k - listed.len())
                }
            }
        }
    }

    /// The surjection hitting every infinite index infinitely often: plain
    /// round-robin when there are finitely many, the triangular enumeration
    /// `s0; s0 s1; s0 s1 s2; …` otherwise.
    fn route(&self, l: usize) -> usize {
        match self {
            InfIndices::Finite(s) => self.nth(l % s.len()),
            InfIndices::Eventually { .. } => {
                let mut row = 0usize;
                let mut base = 0usize;
                while base + row < l {
                    base += row + 1;
                    row += 1;
                }
                self.nth(l - base)
            }
        }
    }
}

impl CaseII {
    fn new(u: TailSeq, v: Seq) -> Self {
        let listed = u.infinite_prefix_indices();
        let inf = if u.tail_value().is_infinite() {
            InfIndices::Eventually {
                listed,
                from: u.spine(),
            }
        } else {
            debug_assert!(!listed.is_empty());
            InfIndices::Finite(listed)
        };
        CaseII {
            u,
            v,
            inf,
            v_cuts: WindowCuts::new(),
        }
    }

    fn entry(&mut self, i: usize, j: usize) -> ExtReal {
        if !self.u.get(i).is_infinite() {
            return ExtReal::zero();
        }
        let l = {
            let v = &mut self.v;
            // borrow dance: window_of needs the getter; compute via a local buffer
            window_of_seq(&mut self.v_cuts, v, j)
        };
        if self.inf.route(l) == i {
            self.v.get(j)
        } else {
            ExtReal::zero()
        }
    }

    /// All rows with finite marginal are zero rows.
    fn row_cover_zero(&self) -> usize {
        0
    }

    fn col_cover(&mut self, j: usize) -> usize {
        let l = window_of_seq(&mut self.v_cuts, &mut self.v, j);
        self.inf.route(l) + 1
    }
}

fn window_of_seq(cuts: &mut WindowCuts, seq: &mut Seq, j: usize) -> usize {
    let one = ExtReal::one();
    while *cuts.cuts.last().unwrap() <= j {
        let start = *cuts.cuts.last().unwrap();
        let mut acc = ExtReal::zero();
        let mut k = start;
        loop {
            acc = acc + seq.get(k);
            k += 1;
            if acc > one {
                break;
            }
        }
        cuts.cuts.push(k);
    }
    match cuts.cuts.binary_search(&j) {
        Ok(l) => l,
        Err(ins) => ins - 1,
    }
}

/// Case III: both marginals all finite. Greedy walk with residuals, advancing
/// the row on ties; position after `k` steps satisfies `i + j = k`.
struct Greedy {
    u: Seq,
    v: Seq,
    ci: usize,
    cj: usize,
    row_rem: ExtReal,
    col_rem: ExtReal,
    assigned: BTreeMap<(usize, usize), ExtReal>,
    done: bool,
    steps: usize,
}

impl Greedy {
    fn new(mut u: Seq, mut v: Seq) -> Self {
        let row_rem = u.get(0);
        let col_rem = v.get(0);
        let mut g = Greedy {
            u,
            v,
            ci: 0,
            cj: 0,
            row_rem,
            col_rem,
            assigned: BTreeMap::new(),
            done: false,
            steps: 0,
        };
        g.refresh_done();
        g
    }

    /// All remaining entries are zero once both residuals and all mass past
    /// the walk position vanish; the walk itself may still drift (ties keep
    /// advancing the row), so this checks mass, not position.
    fn refresh_done(&mut self) {
        if self.done
            || !self.row_rem.is_zero()
            || !self.col_rem.is_zero()
            || !self.u.is_finitely_supported()
            || !self.v.is_finitely_supported()
        {
            return;
        }
        let u_rest: ExtReal = (self.ci + 1..self.u.spine()).map(|i| self.u.get(i)).sum();
        let v_rest: ExtReal = (self.cj + 1..self.v.spine()).map(|j| self.v.get(j)).sum();
        if u_rest.is_zero() && v_rest.is_zero() {
            self.done = true;
        }
    }

    fn step(&mut self) {
        debug_assert!(!self.done);
        self.steps += 1;
        if self.row_rem <= self.col_rem {
            let r = self.row_rem.clone();
            if !r.is_zero() {
                self.col_rem = self.col_rem.checked_sub(&r).expect("finite residuals");
                self.assigned.insert((self.ci, self.cj), r);
            }
            self.ci += 1;
            self.row_rem = self.u.get(self.ci);
        } else {
            let s = self.col_rem.clone();
            if !s.is_zero() {
                self.row_rem = self.row_rem.checked_sub(&s).expect("finite residuals");
                self.assigned.insert((self.ci, self.cj), s);
            }
            self.cj += 1;
            self.col_rem = self.v.get(self.cj);
        }
        self.refresh_done();
    }

    fn entry(&mut self, i: usize, j: usize) -> ExtReal {
        while !self.done && self.ci + self.cj <= i + j {
            self.step();
        }
        self.assigned
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(ExtReal::zero)
    }

    fn row_cover(&mut self, i: usize) -> usize {
        while !self.done && self.ci <= i {
            self.step();
        }
        self.assigned
            .range((i, 0)..(i + 1, 0))
            .map(|((_, j), _)| j + 1)
            .max()
            .unwrap_or(0)
    }

    fn col_cover(&mut self, j: usize) -> usize {
        while !self.done && self.cj <= j {
            self.step();
        }
        self.assigned
            .iter()
            .filter(|((_, jj), _)| *jj == j)
            .map(|((i, _), _)| i + 1)
            .max()
            .unwrap_or(0)
    }
}

/// Case IV: `u` mixes `∞` with nonzero finite values, `v` is all finite.
/// Split `u = u' + u''` into finite and infinite parts and `v = v' + v''`
/// to match, then recurse into cases III and II.
struct CaseIV {
    fin: Greedy,
    inf: CaseII,
}

impl CaseIV {
    fn new(u: &TailSeq, v: &TailSeq) -> Self {
        let u_fin = u.finite_part();
        let u_inf = u.infinite_part();
        let s_fin = u_fin.sum();
        if let ExtReal::Finite(_) = s_fin {
            // least k with v(0) + … + v(k) > sum(u'); exists since sum(v) = ∞
            let mut acc = ExtReal::zero();
            let mut k = 0usize;
            loop {
                acc = acc + v.get(k);
                if acc > s_fin {
                    break;
                }
                k += 1;
            }
            let mut prefix: Vec<ExtReal> = (0..k).map(|j| v.get(j)).collect();
            let below: ExtReal = prefix.iter().cloned().sum();
            prefix.push(s_fin.checked_sub(&below).expect("partial sums below cut"));
            let v_fin = TailSeq::from_prefix(prefix);
            let v_inf = v.pointwise_sub(&v_fin).expect("v' <= v pointwise");
            CaseIV {
                fin: Greedy::new(Seq::plain(u_fin), Seq::plain(v_fin)),
                inf: CaseII::new(u_inf, Seq::plain(v_inf)),
            }
        } else {
            // split v along its >1-sum windows, even windows to the finite part
            CaseIV {
                fin: Greedy::new(Seq::plain(u_fin), Seq::masked(v.clone(), 0)),
                inf: CaseII::new(u_inf, Seq::masked(v.clone(), 1)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extnum::Tail;
    use proptest::prelude::*;

    fn seq(prefix: &[&str], tail: &str) -> TailSeq {
        let p = prefix.iter().map(|s| s.parse().unwrap()).collect();
        TailSeq::new(p, Tail::Const(tail.parse().unwrap()))
    }

    fn e(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    #[test]
    fn case_iii_hand_trace() {
        let p = transport(&seq(&["1", "1"], "0"), &seq(&["2"], "0")).unwrap();
        assert_eq!(p.case_tag(), CaseTag::III);
        assert_eq!(p.entry(0, 0), e("1"));
        assert_eq!(p.entry(1, 0), e("1"));
        assert_eq!(p.entry(0, 1), e("0"));
        assert_eq!(p.entry(5, 7), e("0"));
        p.verify_marginals(4).unwrap();
    }

    #[test]
    fn case_i_cross() {
        let p = transport(&seq(&["inf"], "0"), &seq(&["0", "inf"], "0")).unwrap();
        assert_eq!(p.case_tag(), CaseTag::I);
        assert_eq!(p.entry(0, 1), ExtReal::Infinity);
        assert_eq!(p.entry(0, 0), e("0"));
        assert_eq!(p.entry(1, 1), e("0"));
        assert_eq!(p.entry(2, 3), e("0"));
        let report = p.verify_marginals(3).unwrap();
        assert_eq!(report.rows[0].status, MarginalStatus::DivergenceCertified);
        assert_eq!(report.cols[1].status, MarginalStatus::DivergenceCertified);
    }

    #[test]
    fn zero_plan_is_case_ii() {
        let p = transport(&TailSeq::zero(), &TailSeq::zero()).unwrap();
        assert_eq!(p.case_tag(), CaseTag::II);
        assert_eq!(p.entry(4, 4), e("0"));
        p.verify_marginals(5).unwrap();
    }

    #[test]
    fn case_ii_single_infinite_row() {
        let p = transport(&seq(&["inf"], "0"), &seq(&[], "1")).unwrap();
        assert_eq!(p.case_tag(), CaseTag::II);
        for j in 0..12 {
            assert_eq!(p.entry(0, j), e("1"), "column {j}");
            assert_eq!(p.entry(1, j), e("0"));
        }
        p.verify_marginals(6).unwrap();
    }

    #[test]
    fn single_cell_mass() {
        let p = transport(&seq(&["3"], "0"), &seq(&["3"], "0")).unwrap();
        assert_eq!(p.entry(0, 0), e("3"));
    }

    #[test]
    fn sum_mismatch_rejected() {
        let err = transport(&seq(&["1"], "0"), &seq(&["2"], "0")).unwrap_err();
        assert!(matches!(err, TransportError::SumMismatch { .. }));
    }

    #[test]
    fn case_iv_splits_and_verifies() {
        // u mixes ∞ with finite mass; v is an all-finite constant tail
        let u = seq(&["3/2", "inf", "1"], "0");
        let v = seq(&["1/2"], "1");
        let p = transport(&u, &v).unwrap();
        assert_eq!(p.case_tag(), CaseTag::IV);
        p.verify_marginals(8).unwrap();

        // infinite finite-part sum: u' has a constant tail
        let u = seq(&["inf"], "1/3");
        let p = transport(&u, &v).unwrap();
        assert_eq!(p.case_tag(), CaseTag::IV);
        p.verify_marginals(8).unwrap();
    }

    #[test]
    fn case_iv_transposed() {
        let u = seq(&["1/2"], "1");
        let v = seq(&["3/2", "inf", "1"], "0");
        let p = transport(&u, &v).unwrap();
        assert_eq!(p.case_tag(), CaseTag::IV);
        p.verify_marginals(8).unwrap();
    }

    #[test]
    fn case_ii_eventually_all_infinite() {
        let u = TailSeq::constant(ExtReal::Infinity);
        let v = seq(&[], "2");
        let p = transport(&u, &v).unwrap();
        assert_eq!(p.case_tag(), CaseTag::II);
        p.verify_marginals(5).unwrap();
    }

    #[test]
    fn determinism_across_constructions() {
        let u = seq(&["1/3", "inf", "2"], "1/2");
        let v = seq(&["7"], "2/3");
        let p1 = transport(&u, &v).unwrap();
        let p2 = transport(&u, &v).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(p1.entry(i, j), p2.entry(i, j));
            }
        }
    }

    #[test]
    fn infinite_case_iii_rows_complete() {
        let u = seq(&["5"], "1/2");
        let v = seq(&["1/4"], "2/3");
        let p = transport(&u, &v).unwrap();
        assert_eq!(p.case_tag(), CaseTag::III);
        p.verify_marginals(6).unwrap();
    }

    #[test]
    fn case_iv_split_recombines() {
        // the finite/infinite split of the mixed side is a pointwise
        // decomposition, and the recombined plan has the right marginals
        let u = seq(&["3/2", "inf", "1"], "0");
        assert_eq!(u.finite_part().pointwise_add(&u.infinite_part()), u);
        let u = seq(&["inf", "2"], "1/3");
        assert_eq!(u.finite_part().pointwise_add(&u.infinite_part()), u);
        let v = seq(&["1/2"], "1");
        let p = transport(&u, &v).unwrap();
        p.verify_marginals(10).unwrap();
    }

    #[test]
    fn case_iii_query_touches_few_steps() {
        for (i, j) in [(0usize, 0usize), (3, 2), (7, 7), (12, 0)] {
            let u = seq(&["5"], "1/2");
            let v = seq(&["1/4"], "2/3");
            let p = transport(&u, &v).unwrap();
            let _ = p.entry(i, j);
            assert!(
                p.greedy_steps() <= i + j + 1,
                "entry ({i},{j}) took {} steps",
                p.greedy_steps()
            );
        }
    }

    fn arb_fin_seq() -> impl Strategy<Value = Vec<(u64, u64)>> {
        proptest::collection::vec((0u64..12, 1u64..6), 0..6)
    }

    proptest! {
        // finite-support case III pairs produced by splitting a common total
        #[test]
        fn marginals_exact_on_split_pairs(parts in arb_fin_seq(), regroup in 1usize..5) {
            let u: Vec<ExtReal> = parts.iter().map(|&(p, q)| ExtReal::ratio(p, q)).collect();
            let u = TailSeq::from_prefix(u);
            // regroup the same masses into a different shape with equal sum
            let total = u.sum();
            let mut vs = Vec::new();
            if let ExtReal::Finite(t) = &total {
                let chunks = regroup as u64;
                let mut left = t.clone();
                for k in 0..regroup {
                    if k + 1 == regroup {
                        vs.push(ExtReal::Finite(left.clone()));
                    } else {
                        let part = &left / num_bigint::BigUint::from(chunks);
                        vs.push(ExtReal::Finite(part.clone()));
                        left -= part;
                    }
                }
            }
            let v = TailSeq::from_prefix(vs);
            let p = transport(&u, &v).unwrap();
            prop_assert!(p.verify_marginals(10).is_ok());
        }
    }
}
