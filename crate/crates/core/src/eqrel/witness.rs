//! Equidecomposition witnesses: nonnegative kernels on the relation with
//! prescribed row sums (domain) and column sums (range).
//!
//! A witness stores, per class, finitely many sparse entries plus any number
//! of structured tails, all additive:
//!
//! - `Shift { offset, from, value }` — cells `(i, i+offset)` for `i ≥ from`
//!   (offset 0 is the diagonal);
//! - `Sink { col, from, value }` — cells `(i, col)` for `i ≥ from`;
//! - `Source { row, from, value }` — cells `(row, j)` for `j ≥ from`;
//! - `Block { from, period, pairs }` — for each `(a, s, w)` the cells
//!   `(from + k·period + a, from + k·period + a + s)`.
//!
//! Composition follows the transitivity construction: for each mediating
//! point `y`, a transport plan between the `y`-column of the first witness
//! and the `y`-row of the second; only finitely many `y` are irregular, and
//! past that bound the columns/rows form a constant pattern whose plan is
//! computed once and emitted as tails. Splitting applies a per-row transport
//! plan against the pair `(α₁(x), α₂(x))`. Combinations whose plans escape
//! the representable family are reported as errors, not approximated.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::extnum::{ExtReal, Tail, TailSeq};
use crate::transport;

use super::symbolic;
use super::{add_entry, ClassSize, ClassTable, EqrelError, WeightedFn};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessTail {
    Shift {
        offset: i64,
        from: u64,
        value: ExtReal,
    },
    Sink {
        col: u64,
        from: u64,
        value: ExtReal,
    },
    Source {
        row: u64,
        from: u64,
        value: ExtReal,
    },
    Block {
        from: u64,
        period: u64,
        pairs: Vec<(u64, i64, ExtReal)>,
    },
}

impl WitnessTail {
    fn value(&self) -> &ExtReal {
        match self {
            WitnessTail::Shift { value, .. }
            | WitnessTail::Sink { value, .. }
            | WitnessTail::Source { value, .. } => value,
            WitnessTail::Block { pairs, .. } => {
                // blocks are filtered elsewhere; any pair value stands in
                &pairs[0].2
            }
        }
    }

    pub fn value_at(&self, x: u64, y: u64) -> ExtReal {
        match self {
            WitnessTail::Shift {
                offset,
                from,
                value,
            } => {
                if x >= *from && y as i64 == x as i64 + offset {
                    value.clone()
                } else {
                    ExtReal::zero()
                }
            }
            WitnessTail::Sink { col, from, value } => {
                if y == *col && x >= *from {
                    value.clone()
                } else {
                    ExtReal::zero()
                }
            }
            WitnessTail::Source { row, from, value } => {
                if x == *row && y >= *from {
                    value.clone()
                } else {
                    ExtReal::zero()
                }
            }
            WitnessTail::Block {
                from,
                period,
                pairs,
            } => {
                if x < *from {
                    return ExtReal::zero();
                }
                let a = (x - from) % period;
                let mut acc = ExtReal::zero();
                for (pa, s, w) in pairs {
                    if *pa == a && y as i64 == x as i64 + s {
                        acc = acc + w.clone();
                    }
                }
                acc
            }
        }
    }
}

/// One class's worth of a witness.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WitnessPart {
    pub entries: BTreeMap<(u64, u64), ExtReal>,
    pub tails: Vec<WitnessTail>,
}

impl WitnessPart {
    pub fn empty() -> Self {
        WitnessPart::default()
    }

    pub(super) fn identity_tail(value: ExtReal) -> Self {
        WitnessPart {
            entries: BTreeMap::new(),
            tails: alloc::vec![WitnessTail::Shift {
                offset: 0,
                from: 0,
                value
            }],
        }
    }

    fn canonicalize(&mut self) {
        self.entries.retain(|_, v| !v.is_zero());
        self.tails.retain(|t| match t {
            WitnessTail::Block { pairs, .. } => !pairs.is_empty(),
            t => !t.value().is_zero(),
        });
    }

    pub fn value_at(&self, x: u64, y: u64) -> ExtReal {
        let mut acc = self
            .entries
            .get(&(x, y))
            .cloned()
            .unwrap_or_else(ExtReal::zero);
        for t in &self.tails {
            acc = acc + t.value_at(x, y);
        }
        acc
    }

    pub fn is_empty_part(&self) -> bool {
        self.entries.is_empty() && self.tails.is_empty()
    }

    /// Row `x` as a sequence over column indices.
    pub fn row_seq(&self, x: u64) -> TailSeq {
        let mut points: BTreeMap<u64, ExtReal> = BTreeMap::new();
        let mut consts: Vec<(u64, ExtReal)> = Vec::new();
        for (&(i, j), w) in self.entries.range((x, 0)..=(x, u64::MAX)) {
            debug_assert_eq!(i, x);
            add_point(&mut points, j, w.clone());
        }
        for t in &self.tails {
            match t {
                WitnessTail::Shift {
                    offset,
                    from,
                    value,
                } => {
                    if x >= *from {
                        add_point(&mut points, (x as i64 + offset) as u64, value.clone());
                    }
                }
                WitnessTail::Sink { col, from, value } => {
                    if x >= *from {
                        add_point(&mut points, *col, value.clone());
                    }
                }
                WitnessTail::Source { row, from, value } => {
                    if x == *row {
                        consts.push((*from, value.clone()));
                    }
                }
                WitnessTail::Block {
                    from,
                    period,
                    pairs,
                } => {
                    if x >= *from {
                        let a = (x - from) % period;
                        for (pa, s, w) in pairs {
                            if *pa == a {
                                add_point(&mut points, (x as i64 + s) as u64, w.clone());
                            }
                        }
                    }
                }
            }
        }
        build_tailseq(points, consts)
    }

    /// Column `y` as a sequence over row indices.
    pub fn col_seq(&self, y: u64) -> TailSeq {
        let mut points: BTreeMap<u64, ExtReal> = BTreeMap::new();
        let mut consts: Vec<(u64, ExtReal)> = Vec::new();
        for (&(i, j), w) in &self.entries {
            if j == y {
                add_point(&mut points, i, w.clone());
            }
        }
        for t in &self.tails {
            match t {
                WitnessTail::Shift {
                    offset,
                    from,
                    value,
                } => {
                    let i = y as i64 - offset;
                    if i >= 0 && i as u64 >= *from {
                        add_point(&mut points, i as u64, value.clone());
                    }
                }
                WitnessTail::Sink { col, from, value } => {
                    if y == *col {
                        consts.push((*from, value.clone()));
                    }
                }
                WitnessTail::Source { row, from, value } => {
                    if y >= *from {
                        add_point(&mut points, *row, value.clone());
                    }
                }
                WitnessTail::Block {
                    from,
                    period,
                    pairs,
                } => {
                    for (pa, s, w) in pairs {
                        let x = y as i64 - s;
                        if x >= 0 && x as u64 >= *from && (x as u64 - from) % period == *pa {
                            add_point(&mut points, x as u64, w.clone());
                        }
                    }
                }
            }
        }
        build_tailseq(points, consts)
    }

    fn has_block(&self) -> bool {
        self.tails
            .iter()
            .any(|t| matches!(t, WitnessTail::Block { .. }))
    }

    /// Add another part's entries and tails into this one.
    pub(super) fn absorb(&mut self, other: WitnessPart) {
        for (cell, w) in other.entries {
            add_entry(&mut self.entries, cell, w);
        }
        self.tails.extend(other.tails);
    }

    /// Re-interpret a plan over the two-point row space `{0, 1}` as
    /// contributions at the absolute row `x`, split by plan row. Only source
    /// tails make sense in the two-point space.
    pub(super) fn project_two_rows(self, x: u64) -> Result<(WitnessPart, WitnessPart), ()> {
        let mut out = [WitnessPart::empty(), WitnessPart::empty()];
        for ((i, z), w) in self.entries {
            if i > 1 {
                return Err(());
            }
            add_entry(&mut out[i as usize].entries, (x, z), w);
        }
        for t in self.tails {
            match t {
                WitnessTail::Source {
                    row: row @ (0 | 1),
                    from,
                    value,
                } => {
                    out[row as usize].tails.push(WitnessTail::Source {
                        row: x,
                        from,
                        value,
                    });
                }
                _ => return Err(()),
            }
        }
        let [a, b] = out;
        Ok((a, b))
    }

    pub(super) fn transpose(&self) -> WitnessPart {
        let entries = self
            .entries
            .iter()
            .map(|(&(i, j), w)| ((j, i), w.clone()))
            .collect();
        let mut tails = Vec::new();
        let mut extra = BTreeMap::new();
        for t in &self.tails {
            match t {
                WitnessTail::Shift {
                    offset,
                    from,
                    value,
                } => tails.push(WitnessTail::Shift {
                    offset: -offset,
                    from: (*from as i64 + offset) as u64,
                    value: value.clone(),
                }),
                WitnessTail::Sink { col, from, value } => tails.push(WitnessTail::Source {
                    row: *col,
                    from: *from,
                    value: value.clone(),
                }),
                WitnessTail::Source { row, from, value } => tails.push(WitnessTail::Sink {
                    col: *row,
                    from: *from,
                    value: value.clone(),
                }),
                WitnessTail::Block {
                    from,
                    period,
                    pairs,
                } => {
                    for (a, s, w) in pairs {
                        let t = *a as i64 + s;
                        let p = *period as i64;
                        let q = t.div_euclid(p);
                        let a2 = t.rem_euclid(p) as u64;
                        if q >= 0 {
                            tails.push(WitnessTail::Block {
                                from: from + q as u64 * period,
                                period: *period,
                                pairs: alloc::vec![(a2, -s, w.clone())],
                            });
                        } else {
                            // the first -q transposed cells fall before the
                            // realigned block; emit them as sparse entries
                            for k in 0..(-q) as u64 {
                                let x = (from + k * period + a) as i64 + s;
                                add_entry(&mut extra, (x as u64, from + k * period + a), w.clone());
                            }
                            tails.push(WitnessTail::Block {
                                from: *from,
                                period: *period,
                                pairs: alloc::vec![(a2, -s, w.clone())],
                            });
                        }
                    }
                }
            }
        }
        let mut part = WitnessPart { entries, tails };
        for (k, v) in extra {
            add_entry(&mut part.entries, k, v);
        }
        part.canonicalize();
        part
    }
}

fn add_point(points: &mut BTreeMap<u64, ExtReal>, k: u64, v: ExtReal) {
    if v.is_zero() {
        return;
    }
    let slot = points.entry(k).or_insert_with(ExtReal::zero);
    *slot = slot.clone() + v;
}

fn build_tailseq(points: BTreeMap<u64, ExtReal>, consts: Vec<(u64, ExtReal)>) -> TailSeq {
    let mut spine = points.keys().next_back().map_or(0, |&m| m + 1);
    for (from, _) in &consts {
        spine = spine.max(*from);
    }
    let mut prefix = Vec::with_capacity(spine as usize);
    for i in 0..spine {
        let mut v = points.get(&i).cloned().unwrap_or_else(ExtReal::zero);
        for (from, c) in &consts {
            if i >= *from {
                v = v + c.clone();
            }
        }
        prefix.push(v);
    }
    let tail: ExtReal = consts.into_iter().map(|(_, c)| c).sum();
    TailSeq::new(prefix, Tail::Const(tail))
}

/// An equidecomposition witness over a class table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    table: Arc<ClassTable>,
    parts: Vec<WitnessPart>,
}

impl Witness {
    pub fn new(table: Arc<ClassTable>, mut parts: Vec<WitnessPart>) -> Result<Self, EqrelError> {
        assert_eq!(parts.len(), table.len(), "one part per class");
        for (c, part) in parts.iter_mut().enumerate() {
            part.canonicalize();
            if let ClassSize::Finite(n) = table.size(c) {
                if !part.tails.is_empty() {
                    return Err(EqrelError::TailOnFiniteClass {
                        class: String::from(table.label(c)),
                    });
                }
                if let Some((&(i, j), _)) =
                    part.entries.iter().find(|(&(i, j), _)| i >= n || j >= n)
                {
                    return Err(EqrelError::IndexOutOfRange {
                        class: String::from(table.label(c)),
                        index: i.max(j),
                    });
                }
            }
            for t in &part.tails {
                match t {
                    WitnessTail::Shift { offset, from, .. } => {
                        assert!(*from as i64 + offset >= 0, "shift leaves the index set");
                    }
                    WitnessTail::Block {
                        from,
                        period,
                        pairs,
                    } => {
                        assert!(*period >= 1);
                        for (a, s, _) in pairs {
                            assert!(a < period, "block pair offset exceeds the period");
                            assert!((from + a) as i64 + s >= 0, "block leaves the index set");
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(Witness { table, parts })
    }

    /// The reflexive witness on `α`: all mass on the diagonal.
    pub fn identity(alpha: &WeightedFn) -> Witness {
        let parts = alpha
            .parts()
            .iter()
            .map(|seq| {
                let mut entries = BTreeMap::new();
                for (i, v) in seq.prefix().iter().enumerate() {
                    if !v.is_zero() {
                        entries.insert((i as u64, i as u64), v.clone());
                    }
                }
                let mut tails = Vec::new();
                let tv = seq.tail_value();
                if !tv.is_zero() {
                    tails.push(WitnessTail::Shift {
                        offset: 0,
                        from: seq.spine() as u64,
                        value: tv,
                    });
                }
                WitnessPart { entries, tails }
            })
            .collect();
        Witness {
            table: alpha.table().clone(),
            parts,
        }
    }

    pub fn table(&self) -> &Arc<ClassTable> {
        &self.table
    }

    pub fn part(&self, c: usize) -> &WitnessPart {
        &self.parts[c]
    }

    pub fn parts(&self) -> &[WitnessPart] {
        &self.parts
    }

    pub fn value(&self, c: usize, x: u64, y: u64) -> ExtReal {
        self.parts[c].value_at(x, y)
    }

    /// The reversed witness (graph transpose).
    pub fn transpose(&self) -> Witness {
        Witness {
            table: self.table.clone(),
            parts: self.parts.iter().map(WitnessPart::transpose).collect(),
        }
    }

    /// Row and column sums as weighted functions: `(dom φ, rng φ)`.
    pub fn dom_rng(&self) -> Result<(WeightedFn, WeightedFn), EqrelError> {
        let dom = self.marginal(false)?;
        let rng = self.marginal(true)?;
        Ok((dom, rng))
    }

    fn marginal(&self, cols: bool) -> Result<WeightedFn, EqrelError> {
        let mut seqs = Vec::with_capacity(self.parts.len());
        for (c, part) in self.parts.iter().enumerate() {
            let mut points: BTreeMap<u64, ExtReal> = BTreeMap::new();
            let mut consts: Vec<(u64, ExtReal)> = Vec::new();
            for (&(i, j), w) in &part.entries {
                add_point(&mut points, if cols { j } else { i }, w.clone());
            }
            for t in &part.tails {
                match t {
                    WitnessTail::Shift {
                        offset,
                        from,
                        value,
                    } => {
                        let start = if cols {
                            (*from as i64 + offset) as u64
                        } else {
                            *from
                        };
                        consts.push((start, value.clone()));
                    }
                    WitnessTail::Sink { col, from, value } => {
                        if cols {
                            // infinitely many cells land in one column
                            add_point(&mut points, *col, ExtReal::Infinity * value.clone());
                        } else {
                            consts.push((*from, value.clone()));
                        }
                    }
                    WitnessTail::Source { row, from, value } => {
                        if cols {
                            consts.push((*from, value.clone()));
                        } else {
                            add_point(&mut points, *row, ExtReal::Infinity * value.clone());
                        }
                    }
                    WitnessTail::Block {
                        from,
                        period,
                        pairs,
                    } => {
                        // per-offset sums must be uniform to stay in the family
                        let mut sums: Vec<ExtReal> =
                            (0..*period).map(|_| ExtReal::zero()).collect();
                        for (a, s, w) in pairs {
                            let off = if cols {
                                (*a as i64 + s).rem_euclid(*period as i64) as u64
                            } else {
                                *a
                            };
                            sums[off as usize] = sums[off as usize].clone() + w.clone();
                        }
                        let uniform = sums.windows(2).all(|w| w[0] == w[1]);
                        if !uniform {
                            return Err(EqrelError::UnrepresentableSums {
                                class: String::from(self.table.label(c)),
                            });
                        }
                        consts.push((*from, sums[0].clone()));
                    }
                }
            }
            seqs.push(build_tailseq(points, consts));
        }
        WeightedFn::new(self.table.clone(), seqs)
    }
}

/// Slot of a stable column/row pattern: a cell at a fixed absolute index, or
/// one moving in lockstep with the mediating index.
#[derive(Clone, Debug)]
enum Slot {
    Abs(u64),
    Rel(i64),
}

impl Slot {
    fn pos_at(&self, y: u64) -> i64 {
        match self {
            Slot::Abs(r) => *r as i64,
            Slot::Rel(d) => y as i64 + d,
        }
    }
}

/// Compose `φ : α ∼ β` with `ψ : β ∼ γ` into a witness `α ∼ γ`.
///
/// For every mediating point `y`, the contribution is the transport plan
/// between `φ`'s `y`-column and `ψ`'s `y`-row, evaluated at the composite
/// cell; irregular `y` are handled one by one and the stable pattern beyond
/// them is planned once and emitted as tails.
pub fn compose(phi: &Witness, psi: &Witness) -> Result<Witness, EqrelError> {
    if phi.table != psi.table {
        return Err(EqrelError::TableMismatch);
    }
    let rng_phi = phi.dom_rng()?.1;
    let dom_psi = psi.dom_rng()?.0;
    for c in 0..phi.table.len() {
        if rng_phi.part(c) != dom_psi.part(c) {
            return Err(EqrelError::WitnessMismatch {
                class: String::from(phi.table.label(c)),
            });
        }
    }

    let mut out = Vec::with_capacity(phi.parts.len());
    for c in 0..phi.parts.len() {
        let p = &phi.parts[c];
        let q = &psi.parts[c];
        let class = String::from(phi.table.label(c));
        if p.has_block() || q.has_block() {
            return Err(EqrelError::UnrepresentableSums { class });
        }
        let mut acc = WitnessPart::empty();

        // bound past which φ's columns and ψ's rows form a stable pattern
        let mut y0: u64 = 0;
        let mut bump = |v: u64| y0 = y0.max(v);
        bump(p.entries.keys().map(|&(_, j)| j + 1).max().unwrap_or(0));
        bump(q.entries.keys().map(|&(i, _)| i + 1).max().unwrap_or(0));
        let mut phi_rel: BTreeMap<i64, ExtReal> = BTreeMap::new();
        let mut phi_abs: BTreeMap<u64, ExtReal> = BTreeMap::new();
        let mut psi_rel: BTreeMap<i64, ExtReal> = BTreeMap::new();
        let mut psi_abs: BTreeMap<u64, ExtReal> = BTreeMap::new();
        for t in &p.tails {
            match t {
                WitnessTail::Shift {
                    offset,
                    from,
                    value,
                } => {
                    bump(((*from as i64) + offset).max(0) as u64);
                    let e = phi_rel.entry(-offset).or_insert_with(ExtReal::zero);
                    *e = e.clone() + value.clone();
                }
                WitnessTail::Sink { col, .. } => bump(col + 1),
                WitnessTail::Source { row, from, value } => {
                    bump(*from);
                    bump(row + 1);
                    let e = phi_abs.entry(*row).or_insert_with(ExtReal::zero);
                    *e = e.clone() + value.clone();
                }
                WitnessTail::Block { .. } => unreachable!("blocks rejected above"),
            }
        }
        for t in &q.tails {
            match t {
                WitnessTail::Shift {
                    offset,
                    from,
                    value,
                } => {
                    bump(*from);
                    let e = psi_rel.entry(*offset).or_insert_with(ExtReal::zero);
                    *e = e.clone() + value.clone();
                }
                WitnessTail::Source { row, .. } => bump(row + 1),
                WitnessTail::Sink { col, from, value } => {
                    bump(*from);
                    let e = psi_abs.entry(*col).or_insert_with(ExtReal::zero);
                    *e = e.clone() + value.clone();
                }
                WitnessTail::Block { .. } => unreachable!("blocks rejected above"),
            }
        }
        // keep relative slots strictly above absolute ones in the pure zone
        for &d in phi_rel.keys() {
            for &r in phi_abs.keys() {
                bump((r as i64 - d + 1).max(0) as u64);
            }
        }
        for &d in psi_rel.keys() {
            for &z in psi_abs.keys() {
                bump((z as i64 - d + 1).max(0) as u64);
            }
        }

        for y in 0..y0 {
            let u = p.col_seq(y);
            let v = q.row_seq(y);
            if u.is_zero() && v.is_zero() {
                continue;
            }
            let sym = symbolic::plan(&u, &v).map_err(|_| EqrelError::UnrepresentableSums {
                class: class.clone(),
            })?;
            acc.absorb(sym);
        }

        // the stable pattern: one plan covers every y ≥ y0
        let mut u_slots: Vec<(Slot, ExtReal)> = phi_rel
            .iter()
            .map(|(&d, v)| (Slot::Rel(d), v.clone()))
            .chain(phi_abs.iter().map(|(&r, v)| (Slot::Abs(r), v.clone())))
            .collect();
        let mut v_slots: Vec<(Slot, ExtReal)> = psi_rel
            .iter()
            .map(|(&d, v)| (Slot::Rel(d), v.clone()))
            .chain(psi_abs.iter().map(|(&z, v)| (Slot::Abs(z), v.clone())))
            .collect();
        u_slots.sort_by_key(|(s, _)| s.pos_at(y0));
        v_slots.sort_by_key(|(s, _)| s.pos_at(y0));
        if !(u_slots.is_empty() && v_slots.is_empty()) {
            let u_pat = TailSeq::from_prefix(u_slots.iter().map(|(_, v)| v.clone()).collect());
            let v_pat = TailSeq::from_prefix(v_slots.iter().map(|(_, v)| v.clone()).collect());
            debug_assert_eq!(u_pat.sum(), v_pat.sum(), "pattern sums agree past y0");
            let plan = transport::transport(&u_pat, &v_pat).expect("pattern sums agree");
            for (a, (su, _)) in u_slots.iter().enumerate() {
                for (b, (sv, _)) in v_slots.iter().enumerate() {
                    let w = plan.entry(a, b);
                    if w.is_zero() {
                        continue;
                    }
                    match (su, sv) {
                        (Slot::Rel(da), Slot::Rel(db)) => acc.tails.push(WitnessTail::Shift {
                            offset: db - da,
                            from: (y0 as i64 + da) as u64,
                            value: w,
                        }),
                        (Slot::Rel(da), Slot::Abs(z)) => acc.tails.push(WitnessTail::Sink {
                            col: *z,
                            from: (y0 as i64 + da) as u64,
                            value: w,
                        }),
                        (Slot::Abs(r), Slot::Rel(db)) => acc.tails.push(WitnessTail::Source {
                            row: *r,
                            from: (y0 as i64 + db) as u64,
                            value: w,
                        }),
                        (Slot::Abs(r), Slot::Abs(z)) => {
                            // the same cell receives w from every y ≥ y0
                            add_entry(&mut acc.entries, (*r, *z), ExtReal::Infinity * w);
                        }
                    }
                }
            }
        }
        out.push(acc);
    }
    Witness::new(phi.table.clone(), out)
}

/// Split `φ : α ∼ β` along `α = α₁ + α₂` into `φ₁ + φ₂ = φ` with
/// `dom φᵢ = αᵢ`, via the two-row transport plan applied to each row of `φ`.
pub fn split_witness(
    phi: &Witness,
    alpha1: &WeightedFn,
    alpha2: &WeightedFn,
) -> Result<(Witness, Witness), EqrelError> {
    if phi.table != *alpha1.table() || phi.table != *alpha2.table() {
        return Err(EqrelError::TableMismatch);
    }
    let dom = phi.dom_rng()?.0;
    let total = alpha1.pointwise_add(alpha2)?;
    for c in 0..phi.table.len() {
        if total.part(c) != dom.part(c) {
            return Err(EqrelError::SumMismatch {
                class: String::from(phi.table.label(c)),
            });
        }
    }

    let mut out1 = Vec::with_capacity(phi.parts.len());
    let mut out2 = Vec::with_capacity(phi.parts.len());
    for c in 0..phi.parts.len() {
        let p = &phi.parts[c];
        let class = String::from(phi.table.label(c));
        if p.has_block() {
            return Err(EqrelError::UnrepresentableSums { class });
        }
        let mut acc1 = WitnessPart::empty();
        let mut acc2 = WitnessPart::empty();

        // bound past which φ's rows are a stable pattern and the α's constant
        let mut x0: u64 = 0;
        let mut bump = |v: u64| x0 = x0.max(v);
        bump(p.entries.keys().map(|&(i, _)| i + 1).max().unwrap_or(0));
        bump(alpha1.part(c).spine() as u64);
        bump(alpha2.part(c).spine() as u64);
        let mut rel: BTreeMap<i64, ExtReal> = BTreeMap::new();
        let mut abs: BTreeMap<u64, ExtReal> = BTreeMap::new();
        for t in &p.tails {
            match t {
                WitnessTail::Shift {
                    offset,
                    from,
                    value,
                } => {
                    bump(*from);
                    let e = rel.entry(*offset).or_insert_with(ExtReal::zero);
                    *e = e.clone() + value.clone();
                }
                WitnessTail::Sink { col, from, value } => {
                    bump(*from);
                    let e = abs.entry(*col).or_insert_with(ExtReal::zero);
                    *e = e.clone() + value.clone();
                }
                WitnessTail::Source { row, .. } => bump(row + 1),
                WitnessTail::Block { .. } => unreachable!("blocks rejected above"),
            }
        }
        for &d in rel.keys() {
            for &z in abs.keys() {
                bump((z as i64 - d + 1).max(0) as u64);
            }
        }

        for x in 0..x0 {
            let u = TailSeq::from_prefix(alloc::vec![
                alpha1.part(c).get(x as usize),
                alpha2.part(c).get(x as usize),
            ]);
            let v = p.row_seq(x);
            if u.is_zero() && v.is_zero() {
                continue;
            }
            let sym = symbolic::plan(&u, &v).map_err(|_| EqrelError::UnrepresentableSums {
                class: class.clone(),
            })?;
            let (row0, row1) =
                sym.project_two_rows(x)
                    .map_err(|_| EqrelError::UnrepresentableSums {
                        class: class.clone(),
                    })?;
            acc1.absorb(row0);
            acc2.absorb(row1);
        }

        let mut v_slots: Vec<(Slot, ExtReal)> = rel
            .iter()
            .map(|(&d, v)| (Slot::Rel(d), v.clone()))
            .chain(abs.iter().map(|(&z, v)| (Slot::Abs(z), v.clone())))
            .collect();
        v_slots.sort_by_key(|(s, _)| s.pos_at(x0));
        if !v_slots.is_empty() {
            let a1 = alpha1.part(c).tail_value();
            let a2 = alpha2.part(c).tail_value();
            let u_pat = TailSeq::from_prefix(alloc::vec![a1, a2]);
            let v_pat = TailSeq::from_prefix(v_slots.iter().map(|(_, v)| v.clone()).collect());
            debug_assert_eq!(u_pat.sum(), v_pat.sum(), "pattern sums agree past x0");
            let plan = transport::transport(&u_pat, &v_pat).expect("pattern sums agree");
            for (b, (sv, _)) in v_slots.iter().enumerate() {
                for (row, acc) in [(0usize, &mut acc1), (1usize, &mut acc2)] {
                    let w = plan.entry(row, b);
                    if w.is_zero() {
                        continue;
                    }
                    match sv {
                        Slot::Rel(d) => acc.tails.push(WitnessTail::Shift {
                            offset: *d,
                            from: x0,
                            value: w,
                        }),
                        Slot::Abs(z) => acc.tails.push(WitnessTail::Sink {
                            col: *z,
                            from: x0,
                            value: w,
                        }),
                    }
                }
            }
        }
        out1.push(acc1);
        out2.push(acc2);
    }
    Ok((
        Witness::new(phi.table.clone(), out1)?,
        Witness::new(phi.table.clone(), out2)?,
    ))
}
