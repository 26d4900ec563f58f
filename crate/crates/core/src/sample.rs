//! Deterministic seeded generators for the test suites, the axiom checker,
//! and the CLI. A hand-rolled SplitMix64 keeps seeded runs bit-stable across
//! platforms; all sampling flows from one seed.
//!
//! Distributions are biased toward the absorbing values `0` and `inf` and
//! small fractions, which is where the algebraic laws are most fragile.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::eqrel::{
    BorelSetDesc, ClassTable, SetPart, WeightedFn, Witness, WitnessPart, WitnessTail,
};
use crate::extnum::{ExtReal, Tail, TailSeq};
use crate::klalg::{Count, KElem, LElem};
use crate::measures::InvMeasure;
use crate::topdec::{adjoin_closed, full_mask, saturation_check, FinSpace, Mask, SpaceRel, Tower};

/// SplitMix64: tiny, seedable, and identical everywhere.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (n ≥ 1).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n >= 1);
        self.next_u64() % n
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// A derived generator, for parallelizable per-item streams.
    pub fn fork(&mut self, salt: u64) -> SplitMix64 {
        SplitMix64::new(self.next_u64() ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// The grid `{0, 1/3, 1/2, 1, 2, inf}` plus uniform small fractions.
pub fn ext_grid(rng: &mut SplitMix64) -> ExtReal {
    if rng.chance(7, 10) {
        match rng.below(6) {
            0 => ExtReal::zero(),
            1 => ExtReal::ratio(1, 3),
            2 => ExtReal::ratio(1, 2),
            3 => ExtReal::one(),
            4 => ExtReal::nat(2),
            _ => ExtReal::Infinity,
        }
    } else {
        ExtReal::ratio(rng.below(9), 1 + rng.below(8))
    }
}

/// A finite positive grid value.
pub fn positive_finite(rng: &mut SplitMix64) -> ExtReal {
    ExtReal::ratio(1 + rng.below(8), 1 + rng.below(8))
}

/// A finite (possibly zero) grid value.
pub fn finite_grid(rng: &mut SplitMix64) -> ExtReal {
    loop {
        let v = ext_grid(rng);
        if v.is_finite() {
            return v;
        }
    }
}

pub fn tail_seq(
    rng: &mut SplitMix64,
    max_prefix: u64,
    allow_inf: bool,
    allow_tail: bool,
) -> TailSeq {
    let len = rng.below(max_prefix + 1) as usize;
    let prefix = (0..len)
        .map(|_| {
            if allow_inf {
                ext_grid(rng)
            } else {
                finite_grid(rng)
            }
        })
        .collect();
    let tail = if allow_tail && rng.chance(1, 3) {
        Tail::Const(positive_finite(rng))
    } else {
        Tail::Zero
    };
    TailSeq::new(prefix, tail)
}

/// An equal-sum pair spanning the transport cases; `case` cycles through
/// 0..=6 variants (cross, routed, routed-transposed, finite greedy, infinite
/// greedy, mixed split with finite and with infinite finite-part).
pub fn equal_sum_pair(rng: &mut SplitMix64, case: u64) -> (TailSeq, TailSeq) {
    match case % 7 {
        0 => {
            // both sides carry an infinity
            let mut u = tail_seq(rng, 4, true, false);
            let mut v = tail_seq(rng, 4, true, false);
            u = with_entry(u, rng.below(4), ExtReal::Infinity);
            v = with_entry(v, rng.below(4), ExtReal::Infinity);
            (u, v)
        }
        1 => {
            // u in {0, inf} with at least one inf; v all finite, infinite sum
            let len = 1 + rng.below(4) as usize;
            let mut prefix: Vec<ExtReal> = (0..len)
                .map(|_| {
                    if rng.chance(1, 2) {
                        ExtReal::Infinity
                    } else {
                        ExtReal::zero()
                    }
                })
                .collect();
            prefix[0] = ExtReal::Infinity;
            let tail = if rng.chance(1, 4) {
                Tail::Const(ExtReal::Infinity)
            } else {
                Tail::Zero
            };
            let u = TailSeq::new(prefix, tail);
            let v = TailSeq::new(
                (0..rng.below(4) as usize)
                    .map(|_| finite_grid(rng))
                    .collect(),
                Tail::Const(positive_finite(rng)),
            );
            (u, v)
        }
        2 => {
            let (v, u) = equal_sum_pair(rng, 1);
            (u, v)
        }
        3 => {
            // both finitely supported with equal finite sums
            let u = tail_seq(rng, 5, false, false);
            let v = split_mass(rng, u.sum());
            (u, v)
        }
        4 => {
            // both all-finite with constant tails (infinite sums)
            let u = TailSeq::new(
                (0..rng.below(4) as usize)
                    .map(|_| finite_grid(rng))
                    .collect(),
                Tail::Const(positive_finite(rng)),
            );
            let v = TailSeq::new(
                (0..rng.below(4) as usize)
                    .map(|_| finite_grid(rng))
                    .collect(),
                Tail::Const(positive_finite(rng)),
            );
            (u, v)
        }
        5 => {
            // one side mixes inf with positive finite mass, finite finite-part
            let mut u = tail_seq(rng, 4, false, false);
            u = with_entry(u, rng.below(4), positive_finite(rng));
            u = with_entry(u, rng.below(5), ExtReal::Infinity);
            let v = TailSeq::new(
                (0..rng.below(3) as usize)
                    .map(|_| finite_grid(rng))
                    .collect(),
                Tail::Const(positive_finite(rng)),
            );
            if rng.chance(1, 2) {
                (u, v)
            } else {
                (v, u)
            }
        }
        _ => {
            // one side mixes inf with an infinite finite part (constant tail)
            let mut u = TailSeq::new(
                (0..1 + rng.below(3) as usize)
                    .map(|_| finite_grid(rng))
                    .collect(),
                Tail::Const(positive_finite(rng)),
            );
            u = with_entry(u, rng.below(3), ExtReal::Infinity);
            let v = TailSeq::new(
                (0..rng.below(3) as usize)
                    .map(|_| finite_grid(rng))
                    .collect(),
                Tail::Const(positive_finite(rng)),
            );
            if rng.chance(1, 2) {
                (u, v)
            } else {
                (v, u)
            }
        }
    }
}

fn with_entry(seq: TailSeq, index: u64, value: ExtReal) -> TailSeq {
    let mut prefix: Vec<ExtReal> = seq.prefix().to_vec();
    if prefix.len() <= index as usize {
        let tail_val = seq.tail_value();
        prefix.resize(index as usize + 1, tail_val);
    }
    prefix[index as usize] = value;
    TailSeq::new(prefix, seq.tail().clone())
}

/// A finitely supported sequence with the given finite total.
pub fn split_mass(rng: &mut SplitMix64, total: ExtReal) -> TailSeq {
    let mut remaining = total;
    let parts = 1 + rng.below(4);
    let mut out = Vec::new();
    for k in 0..parts {
        if k + 1 == parts {
            out.push(remaining.clone());
        } else {
            let piece = remaining
                .div_nat(1 + rng.below(3))
                .div_nat(1 + rng.below(2));
            remaining = remaining
                .checked_sub(&piece)
                .expect("piece is at most the remainder");
            out.push(piece);
        }
    }
    // scatter some zeros for irregular support
    let mut prefix = Vec::new();
    for v in out {
        if rng.chance(1, 3) {
            prefix.push(ExtReal::zero());
        }
        prefix.push(v);
    }
    TailSeq::from_prefix(prefix)
}

pub fn class_table(rng: &mut SplitMix64, max_classes: u64) -> Arc<ClassTable> {
    ClassTable::omega(1 + rng.below(max_classes) as usize)
}

pub fn lelem(rng: &mut SplitMix64, table: &Arc<ClassTable>) -> LElem {
    let sums = (0..table.len()).map(|_| ext_grid(rng)).collect();
    LElem::new(table.clone(), sums).expect("all-infinite table")
}

pub fn kelem(rng: &mut SplitMix64, table: &Arc<ClassTable>) -> KElem {
    let counts = (0..table.len())
        .map(|_| match rng.below(5) {
            0 => Count::Fin(0),
            4 => Count::Omega,
            k => Count::Fin(k),
        })
        .collect();
    KElem::new(table.clone(), counts).expect("all-infinite table")
}

pub fn aperiodic_kelem(rng: &mut SplitMix64, table: &Arc<ClassTable>) -> KElem {
    let counts = (0..table.len())
        .map(|_| {
            if rng.chance(3, 4) {
                Count::Omega
            } else {
                Count::Fin(0)
            }
        })
        .collect();
    KElem::new(table.clone(), counts).expect("all-infinite table")
}

/// A measure with grid intensities; σ-finite on demand.
pub fn measure(rng: &mut SplitMix64, table: &Arc<ClassTable>, sigma_finite: bool) -> InvMeasure {
    let intensities = (0..table.len())
        .map(|_| {
            if sigma_finite {
                if rng.chance(1, 3) {
                    ExtReal::zero()
                } else {
                    positive_finite(rng)
                }
            } else {
                ext_grid(rng)
            }
        })
        .collect();
    InvMeasure::new(table.clone(), intensities)
}

/// An ergodic σ-finite measure: a positive multiple of counting measure on
/// one class.
pub fn ergodic_measure(rng: &mut SplitMix64, table: &Arc<ClassTable>) -> InvMeasure {
    let c = rng.below(table.len() as u64) as usize;
    InvMeasure::counting(table.clone(), c).scale(&positive_finite(rng))
}

/// A weighted function with tail-sequence parts.
pub fn weighted_fn(rng: &mut SplitMix64, table: &Arc<ClassTable>, allow_inf: bool) -> WeightedFn {
    let parts = (0..table.len())
        .map(|_| tail_seq(rng, 4, allow_inf, true))
        .collect();
    WeightedFn::new(table.clone(), parts).expect("infinite classes accept tails")
}

/// A witness with the given domain: per class, the finite prefix mass is
/// scattered through a small transport-style rearrangement and the constant
/// tail rides a shift (or, for infinite point masses, a source spray).
pub fn witness_from_dom(rng: &mut SplitMix64, dom: &WeightedFn) -> Witness {
    let table = dom.table().clone();
    let mut parts = Vec::with_capacity(table.len());
    for c in 0..table.len() {
        let seq = dom.part(c);
        let mut part = WitnessPart::empty();
        // keep infinite point masses in distinct columns so composite
        // columns stay within the representable plan shapes
        let mut inf_cols: Vec<u64> = Vec::new();
        for (i, v) in seq.prefix().iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let x = i as u64;
            if v.is_infinite() && rng.chance(1, 3) {
                part.tails.push(WitnessTail::Source {
                    row: x,
                    from: rng.below(3),
                    value: ExtReal::one(),
                });
                continue;
            }
            let mut t1 = rng.below(seq.spine() as u64 + 4);
            if v.is_infinite() {
                while inf_cols.contains(&t1) {
                    t1 += 1;
                }
                inf_cols.push(t1);
            }
            if rng.chance(1, 2) || v.is_infinite() {
                add(&mut part, x, t1, v.clone());
            } else {
                let half = v.div_nat(2);
                let rest = v.checked_sub(&half).expect("half of a finite value");
                let t2 = rng.below(seq.spine() as u64 + 4);
                add(&mut part, x, t1, half);
                add(&mut part, x, t2, rest);
            }
        }
        let tail = seq.tail_value();
        if !tail.is_zero() {
            let from = seq.spine() as u64;
            let offset = rng.below(4) as i64 - (from.min(2) as i64);
            part.tails.push(WitnessTail::Shift {
                offset,
                from,
                value: tail,
            });
        }
        parts.push(part);
    }
    Witness::new(table, parts).expect("generated parts are valid")
}

fn add(part: &mut WitnessPart, x: u64, y: u64, v: ExtReal) {
    let slot = part.entries.entry((x, y)).or_insert_with(ExtReal::zero);
    *slot = slot.clone() + v;
}

/// A random space on `n` points: transitive closure of a random reflexive
/// relation, topologized by its up-sets.
pub fn space(rng: &mut SplitMix64, n: usize) -> FinSpace {
    assert!((1..=6).contains(&n));
    let labels: Vec<String> = (0..n).map(|i| alloc::format!("p{i}")).collect();
    let mut up: Vec<Mask> = (0..n).map(|x| 1 << x).collect();
    for x in 0..n {
        for y in 0..n {
            if x != y && rng.chance(1, 3) {
                up[x] |= 1 << y;
            }
        }
    }
    transitive_close(&mut up, n);
    FinSpace::from_preorder(labels, &up).expect("up-set topology")
}

fn transitive_close(up: &mut [Mask], n: usize) {
    loop {
        let mut changed = false;
        for x in 0..n {
            let mut new = up[x];
            for y in 0..n {
                if up[x] & (1 << y) != 0 {
                    new |= up[y];
                }
            }
            if new != up[x] {
                up[x] = new;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// A space with a partition whose saturations are open: random partitions
/// with rejection, falling back to equality (which always qualifies).
pub fn saturated_rel(rng: &mut SplitMix64, n: usize) -> SpaceRel {
    let sp = space(rng, n);
    for _ in 0..12 {
        let blocks = random_partition(rng, n);
        if let Ok(sr) = SpaceRel::from_partition(sp.clone(), &blocks) {
            if saturation_check(&sr).ok {
                return sr;
            }
        }
    }
    SpaceRel::discrete_relation(sp)
}

fn random_partition(rng: &mut SplitMix64, n: usize) -> Vec<Vec<usize>> {
    let k = 1 + rng.below(n as u64) as usize;
    let mut blocks: Vec<Vec<usize>> = alloc::vec![Vec::new(); k];
    for x in 0..n {
        let b = rng.below(k as u64) as usize;
        blocks[b].push(x);
    }
    blocks.retain(|b| !b.is_empty());
    blocks
}

/// An increasing-topology tower over one relation: each stage adjoins a
/// random invariant closed set (saturations stay open along the way).
pub fn increasing_tower(rng: &mut SplitMix64, n: usize, stages: usize) -> Vec<SpaceRel> {
    let mut current = saturated_rel(rng, n);
    let mut out = alloc::vec![current.clone()];
    for _ in 1..stages {
        let opens: Vec<Mask> = current.space().opens().iter().copied().collect();
        let u = opens[rng.below(opens.len() as u64) as usize];
        let invariant_open = current.saturation(u);
        let f = !invariant_open & full_mask(current.space().n());
        current = adjoin_closed(&current, &[f]).expect("invariant closed set");
        out.push(current.clone());
    }
    out
}

/// A tower with dense bonds: each earlier stage coarsens the preorder of the
/// next, so the identity map downward is continuous and surjective (hence
/// dense-image).
pub fn dense_tower(rng: &mut SplitMix64, n: usize, stages: usize) -> Tower {
    assert!(stages >= 1);
    let finest = space(rng, n);
    let mut list = alloc::vec![finest];
    for _ in 1..stages {
        let prev = &list[0];
        let mut up: Vec<Mask> = (0..n).map(|x| prev.up_mask(x)).collect();
        // coarsen: relate one more random pair and re-close
        let x = rng.below(n as u64) as usize;
        let y = rng.below(n as u64) as usize;
        up[x] |= 1 << y;
        transitive_close(&mut up, n);
        let coarser =
            FinSpace::from_preorder(prev.labels().to_vec(), &up).expect("up-set topology");
        list.insert(0, coarser);
    }
    let bonds = (0..stages - 1).map(|_| (0..n).collect()).collect();
    Tower::new(list, bonds).expect("identity bonds are continuous")
}

/// A random finite/cofinite set description.
pub fn set_desc(
    rng: &mut SplitMix64,
    table: &Arc<ClassTable>,
    allow_cofinite: bool,
) -> BorelSetDesc {
    let parts = (0..table.len())
        .map(|_| {
            if allow_cofinite && rng.chance(1, 4) {
                let excl = (0..rng.below(3)).map(|_| rng.below(6)).collect();
                SetPart::Cofinite(excl)
            } else {
                let members = (0..rng.below(5)).map(|_| rng.below(8)).collect();
                SetPart::Finite(members)
            }
        })
        .collect();
    BorelSetDesc::new(table.clone(), parts).expect("infinite classes accept cofinite parts")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn equal_sum_pairs_have_equal_sums() {
        let mut rng = SplitMix64::new(7);
        for case in 0..70 {
            let (u, v) = equal_sum_pair(&mut rng, case);
            assert_eq!(u.sum(), v.sum(), "case {case}: {u} vs {v}");
        }
    }

    #[test]
    fn witness_from_dom_has_the_domain() {
        let mut rng = SplitMix64::new(11);
        for i in 0..40 {
            let table = class_table(&mut rng, 3);
            let alpha = weighted_fn(&mut rng, &table, true);
            let w = witness_from_dom(&mut rng, &alpha);
            let (dom, _) = w.dom_rng().expect("generated tails stay representable");
            assert_eq!(dom, alpha, "iteration {i}");
        }
    }

    #[test]
    fn increasing_towers_increase() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..10 {
            let stages = increasing_tower(&mut rng, 4, 3);
            for w in stages.windows(2) {
                assert!(w[0].space().opens().is_subset(w[1].space().opens()));
            }
        }
    }

    #[test]
    fn dense_towers_validate() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..10 {
            let t = dense_tower(&mut rng, 4, 3);
            assert_eq!(t.len(), 3);
        }
    }
}
