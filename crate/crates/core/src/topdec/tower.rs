//! Towers of finite spaces and their limits.
//!
//! Towers here are eventually-identity: a finite list of stages and
//! continuous bonding maps, with identity maps implied past the last stage,
//! so the inverse limit is the last stage with the composed bonds as
//! projections. On this family we exercise:
//!
//! - the comparison between the decomposition of a join topology and the
//!   limit of the stagewise decompositions ([`quotient_tower_comparison`]);
//! - ladders of open vertical maps satisfying the Beck–Chevalley condition,
//!   whose induced limit map is open and surjective ([`beck_chevalley`]);
//! - the lax colimit of a dense-bond tower, in which the limit sits densely
//!   and projects densely onto every stage ([`lax_colimit`]).

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{
    full_mask, map_mask, preimage_mask, saturation_check, t0_quotient, FinSpace, Mask, Quotient,
    SpaceRel, TopError,
};

/// A finite tower `X₀ ← X₁ ← ⋯ ← X_{k-1}`, identity past the end.
#[derive(Clone, Debug)]
pub struct Tower {
    stages: Vec<FinSpace>,
    /// `bonds[i]` maps points of stage `i+1` to stage `i`.
    bonds: Vec<Vec<usize>>,
}

impl Tower {
    pub fn new(stages: Vec<FinSpace>, bonds: Vec<Vec<usize>>) -> Result<Self, TopError> {
        assert!(!stages.is_empty(), "a tower has at least one stage");
        assert_eq!(bonds.len() + 1, stages.len(), "one bond per adjacent pair");
        for (i, bond) in bonds.iter().enumerate() {
            assert_eq!(bond.len(), stages[i + 1].n(), "total maps");
            for &y in bond {
                assert!(y < stages[i].n(), "bond lands in the codomain");
            }
            for &u in stages[i].opens() {
                let pre = preimage_mask(u, stages[i + 1].n(), |x| bond[x]);
                if !stages[i + 1].is_open(pre) {
                    return Err(TopError::NotContinuous { stage: i });
                }
            }
        }
        Ok(Tower { stages, bonds })
    }

    pub fn stages(&self) -> &[FinSpace] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Compose bonds downward from `from` to `to ≤ from`.
    pub fn project(&self, from: usize, to: usize, x: usize) -> usize {
        let mut x = x;
        let mut s = from;
        while s > to {
            x = self.bonds[s - 1][x];
            s -= 1;
        }
        x
    }

    /// The inverse limit: the last stage, with composed bonds as projections.
    pub fn limit(&self) -> &FinSpace {
        self.stages.last().expect("nonempty")
    }

    pub fn limit_projection(&self, to: usize, x: usize) -> usize {
        self.project(self.stages.len() - 1, to, x)
    }
}

/// Result of comparing the join-topology decomposition with the limit of the
/// stagewise decompositions.
#[derive(Debug)]
pub struct TowerComparison {
    pub stage_quotients: Vec<Quotient>,
    pub join_quotient: Quotient,
    /// The limit of the quotient tower, as a space on the last quotient's
    /// points with the limit topology.
    pub limit_space: FinSpace,
    /// The comparison map from the join quotient to the limit.
    pub comparison: Vec<usize>,
    pub bijective: bool,
    pub homeomorphism: bool,
}

/// Stages share one point set and relation, with increasing topologies whose
/// saturations stay open. Builds the join topology, every decomposition, the
/// limit of the quotient tower, and the comparison map, verifying it is a
/// homeomorphism.
pub fn quotient_tower_comparison(stages: &[SpaceRel]) -> Result<TowerComparison, TopError> {
    assert!(!stages.is_empty(), "at least one stage");
    let base = &stages[0];
    for (i, sr) in stages.iter().enumerate() {
        if sr.space().labels() != base.space().labels() || sr.classes() != base.classes() {
            return Err(TopError::LadderMismatch);
        }
        let report = saturation_check(sr);
        if !report.ok {
            return Err(TopError::SaturationFails {
                open: report.counterexample.unwrap_or_default(),
            });
        }
        if i > 0 && !stages[i - 1].space().opens().is_subset(sr.space().opens()) {
            return Err(TopError::NotIncreasingTopologies { stage: i });
        }
    }

    // the join of increasing topologies: generated by the union
    let mut subbasis: BTreeSet<Mask> = BTreeSet::new();
    for sr in stages {
        subbasis.extend(sr.space().opens().iter().copied());
    }
    let join_space = FinSpace::from_subbasis(base.space().labels().to_vec(), subbasis)?;
    let join_rel = base.with_space(join_space);
    let join_quotient = t0_quotient(&join_rel)?;

    let stage_quotients: Vec<Quotient> =
        stages.iter().map(t0_quotient).collect::<Result<_, _>>()?;

    // bonding maps between consecutive quotients: den_{i+1}(x) ↦ den_i(x),
    // checked to be well-defined and continuous
    let n = base.space().n();
    let k = stages.len();
    let mut g: Vec<Vec<usize>> = Vec::new();
    for i in 0..k - 1 {
        let fine = &stage_quotients[i + 1];
        let coarse = &stage_quotients[i];
        let nq = fine.space.n();
        let mut map = alloc::vec![usize::MAX; nq];
        for x in 0..n {
            let q = fine.projection[x];
            let target = coarse.projection[x];
            if map[q] == usize::MAX {
                map[q] = target;
            } else if map[q] != target {
                return Err(TopError::LadderMismatch);
            }
        }
        for &u in coarse.space.opens() {
            let pre = preimage_mask(u, nq, |x| map[x]);
            if !fine.space.is_open(pre) {
                return Err(TopError::NotContinuous { stage: i });
            }
        }
        g.push(map);
    }

    // the limit of the finite quotient chain: threads are determined by the
    // last coordinate; the limit topology is generated by the coordinate
    // preimages of stage opens
    let last = &stage_quotients[k - 1];
    let thread_coord = |q: usize, i: usize| {
        let mut x = q;
        let mut s = k - 1;
        while s > i {
            x = g[s - 1][x];
            s -= 1;
        }
        x
    };
    let mut limit_subbasis: BTreeSet<Mask> = BTreeSet::new();
    for (i, sq) in stage_quotients.iter().enumerate() {
        for &v in sq.space.opens() {
            let mut mask = 0;
            for q in 0..last.space.n() {
                if v & (1 << thread_coord(q, i)) != 0 {
                    mask |= 1 << q;
                }
            }
            limit_subbasis.insert(mask);
        }
    }
    let limit_space = FinSpace::from_subbasis(last.space.labels().to_vec(), limit_subbasis)?;

    // the comparison map: den^join(x) ↦ (den^i(x))_i ≅ den^last(x)
    let mut comparison = alloc::vec![usize::MAX; join_quotient.space.n()];
    let mut bijective = true;
    for x in 0..n {
        let from = join_quotient.projection[x];
        let to = last.projection[x];
        if comparison[from] == usize::MAX {
            comparison[from] = to;
        } else if comparison[from] != to {
            bijective = false;
        }
    }
    let mut seen = alloc::vec![false; limit_space.n()];
    for &t in &comparison {
        if t == usize::MAX || seen[t] {
            bijective = false;
        } else {
            seen[t] = true;
        }
    }
    let surjective = seen.iter().all(|&b| b);
    let bijective = bijective && surjective;

    // bicontinuity
    let mut homeomorphism = bijective;
    if bijective {
        for &v in limit_space.opens() {
            let pre = preimage_mask(v, join_quotient.space.n(), |q| comparison[q]);
            if !join_quotient.space.is_open(pre) {
                homeomorphism = false;
            }
        }
        for &u in join_quotient.space.opens() {
            let img = map_mask(u, |q| comparison[q]);
            if !limit_space.is_open(img) {
                homeomorphism = false;
            }
        }
    }

    Ok(TowerComparison {
        stage_quotients,
        join_quotient,
        limit_space,
        comparison,
        bijective,
        homeomorphism,
    })
}

/// Verified conclusions of a Beck–Chevalley ladder.
#[derive(Clone, Debug)]
pub struct BcReport {
    pub condition_holds: bool,
    pub h0_surjective: bool,
    pub limit_map_surjective: bool,
    pub limit_map_open: bool,
    /// `h(pᵢ⁻¹(U)) = qᵢ⁻¹(hᵢ(U))` for every stage open.
    pub star_identity: bool,
}

/// A commutative ladder of two towers with open vertical maps. Checks the
/// Beck–Chevalley condition on every stage open and, when it holds, verifies
/// that the induced limit map is open, satisfies the projection identity,
/// and is surjective whenever the base vertical is.
pub fn beck_chevalley(
    upper: &Tower,
    lower: &Tower,
    verticals: &[Vec<usize>],
) -> Result<BcReport, TopError> {
    let k = upper.len();
    if lower.len() != k || verticals.len() != k {
        return Err(TopError::LadderMismatch);
    }
    for i in 0..k {
        let x = &upper.stages()[i];
        let y = &lower.stages()[i];
        if verticals[i].len() != x.n() {
            return Err(TopError::LadderMismatch);
        }
        for &v in &verticals[i] {
            if v >= y.n() {
                return Err(TopError::LadderMismatch);
            }
        }
        // verticals are continuous open maps
        for &u in y.opens() {
            let pre = preimage_mask(u, x.n(), |p| verticals[i][p]);
            if !x.is_open(pre) {
                return Err(TopError::NotContinuous { stage: i });
            }
        }
        for &u in x.opens() {
            let img = map_mask(u, |p| verticals[i][p]);
            if !y.is_open(img) {
                return Err(TopError::VerticalNotOpen { stage: i });
            }
        }
    }
    for i in 0..k - 1 {
        for x in 0..upper.stages()[i + 1].n() {
            let via_upper = verticals[i][upper.project(i + 1, i, x)];
            let via_lower = lower.project(i + 1, i, verticals[i + 1][x]);
            if via_upper != via_lower {
                return Err(TopError::LadderMismatch);
            }
        }
    }

    // the condition: h_{i+1}(f_i⁻¹(U)) = g_i⁻¹(h_i(U)) for open U ⊆ X_i
    for i in 0..k - 1 {
        let xi = &upper.stages()[i];
        let xn = &upper.stages()[i + 1];
        let yn = &lower.stages()[i + 1];
        for &u in xi.opens() {
            let pre = preimage_mask(u, xn.n(), |x| upper.project(i + 1, i, x));
            let lhs = map_mask(pre, |x| verticals[i + 1][x]);
            let hi_u = map_mask(u, |x| verticals[i][x]);
            let rhs = preimage_mask(hi_u, yn.n(), |y| lower.project(i + 1, i, y));
            if lhs != rhs {
                return Err(TopError::ConditionFails {
                    stage: i,
                    open: xi.mask_names(u),
                });
            }
        }
    }

    // limits are the last stages; the induced map is the last vertical
    let x_lim = upper.limit();
    let y_lim = lower.limit();
    let h = &verticals[k - 1];
    let h0 = &verticals[0];
    let h0_surjective = {
        let img = map_mask(full_mask(upper.stages()[0].n()), |x| h0[x]);
        img == full_mask(lower.stages()[0].n())
    };
    let limit_map_surjective = {
        let img = map_mask(full_mask(x_lim.n()), |x| h[x]);
        img == full_mask(y_lim.n())
    };
    let limit_map_open = x_lim
        .opens()
        .iter()
        .all(|&u| y_lim.is_open(map_mask(u, |x| h[x])));
    let mut star_identity = true;
    for i in 0..k {
        let xi = &upper.stages()[i];
        for &u in xi.opens() {
            let p_pre = preimage_mask(u, x_lim.n(), |x| upper.limit_projection(i, x));
            let lhs = map_mask(p_pre, |x| h[x]);
            let hi_u = map_mask(u, |x| verticals[i][x]);
            let rhs = preimage_mask(hi_u, y_lim.n(), |y| lower.limit_projection(i, y));
            if lhs != rhs {
                star_identity = false;
            }
        }
    }

    Ok(BcReport {
        condition_holds: true,
        h0_surjective,
        limit_map_surjective: h0_surjective && limit_map_surjective,
        limit_map_open,
        star_identity,
    })
}

/// The lax colimit of a dense-bond tower and its density checks.
#[derive(Debug)]
pub struct LaxReport {
    pub space: FinSpace,
    /// Density of the upper set `⇑Xᵢ` in the lax colimit, per stage.
    pub tail_dense: Vec<bool>,
    /// Density of the limit copy in the lax colimit.
    pub limit_dense: bool,
    /// Density of the image of each projection `lim → Xᵢ`, per stage.
    pub projection_dense: Vec<bool>,
}

impl LaxReport {
    pub fn all_dense(&self) -> bool {
        self.tail_dense.iter().all(|&b| b)
            && self.limit_dense
            && self.projection_dense.iter().all(|&b| b)
    }
}

/// Build the lax colimit — the disjoint union of the stages and the limit,
/// with basic opens `⇑U` collecting the preimages of `U` at all later stages
/// and in the limit — and verify the density facts that make the finite
/// Baire-style argument work.
pub fn lax_colimit(t: &Tower) -> Result<LaxReport, TopError> {
    let k = t.len();
    for i in 0..k - 1 {
        let img = map_mask(full_mask(t.stages()[i + 1].n()), |x| t.project(i + 1, i, x));
        if !t.stages()[i].is_dense(img) {
            return Err(TopError::NotDenseBond { stage: i });
        }
    }

    let stage_sizes: Vec<usize> = t.stages().iter().map(FinSpace::n).collect();
    let lim_n = t.limit().n();
    let total: usize = stage_sizes.iter().sum::<usize>() + lim_n;
    if total > 64 {
        return Err(TopError::TooManyPoints(total));
    }
    let mut offsets = Vec::with_capacity(k);
    let mut acc = 0usize;
    for &s in &stage_sizes {
        offsets.push(acc);
        acc += s;
    }
    let lim_offset = acc;

    let mut labels = Vec::with_capacity(total);
    for (i, stage) in t.stages().iter().enumerate() {
        for x in 0..stage.n() {
            labels.push(alloc::format!("s{i}:{}", stage.label(x)));
        }
    }
    for x in 0..lim_n {
        labels.push(alloc::format!("lim:{}", t.limit().label(x)));
    }

    // ⇑U for open U at stage i
    let up_mask = |i: usize, u: Mask| -> Mask {
        let mut mask: Mask = 0;
        for j in i..k {
            for x in 0..stage_sizes[j] {
                if u & (1 << t.project(j, i, x)) != 0 {
                    mask |= 1 << (offsets[j] + x);
                }
            }
        }
        for x in 0..lim_n {
            if u & (1 << t.limit_projection(i, x)) != 0 {
                mask |= 1 << (lim_offset + x);
            }
        }
        mask
    };

    let mut subbasis: BTreeSet<Mask> = BTreeSet::new();
    for i in 0..k {
        for &u in t.stages()[i].opens() {
            subbasis.insert(up_mask(i, u));
        }
    }
    let space = FinSpace::from_subbasis(labels, subbasis)?;

    let tail_dense = (0..k)
        .map(|i| space.is_dense(up_mask(i, full_mask(stage_sizes[i]))))
        .collect();
    let limit_copy: Mask = (0..lim_n).fold(0, |m, x| m | (1 << (lim_offset + x)));
    let limit_dense = space.is_dense(limit_copy);
    let projection_dense = (0..k)
        .map(|i| {
            let img = map_mask(full_mask(lim_n), |x| t.limit_projection(i, x));
            t.stages()[i].is_dense(img)
        })
        .collect();

    Ok(LaxReport {
        space,
        tail_dense,
        limit_dense,
        projection_dense,
    })
}
