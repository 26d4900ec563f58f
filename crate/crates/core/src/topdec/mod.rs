//! Finite topological spaces, equivalence relations with open saturations,
//! T0-quotient decompositions, and the patch/upper correspondence.
//!
//! A [`FinSpace`] stores at most 64 labeled points, the full open family as
//! bitmasks, and the derived specialization preorder; the two views are
//! cross-validated on construction (finite spaces are exactly the Alexandrov
//! ones: opens coincide with the up-sets of the preorder).
//!
//! A [`SpaceRel`] adds an equivalence relation, either as an explicit
//! partition or as the orbit partition of permutations that are checked to
//! be homeomorphisms. When every open set has open saturation, the T0
//! quotient of the quotient space is the topological decomposition into
//! minimal pieces; [`t0_quotient`] computes it and re-verifies the expected
//! properties (open projection, T0, kernel = closure equality, minimal
//! fibers, quotient order = the closure preorder) rather than trusting them.

pub mod tower;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use tower::{
    beck_chevalley, lax_colimit, quotient_tower_comparison, BcReport, LaxReport, Tower,
    TowerComparison,
};

pub type Mask = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopError {
    TooManyPoints(usize),
    DuplicatePoint(String),
    UnknownPoint(String),
    /// The family misses ∅/X or is not closed under union/intersection.
    NotATopology {
        culprit: Vec<String>,
    },
    /// A generator permutation does not map opens to opens.
    NotHomeomorphism {
        generator: Vec<String>,
    },
    /// The partition does not respect the point set.
    BadPartition,
    SaturationFails {
        open: Vec<String>,
    },
    NotInvariantClosed {
        set: Vec<String>,
    },
    NotContinuous {
        stage: usize,
    },
    NotIncreasingTopologies {
        stage: usize,
    },
    VerticalNotOpen {
        stage: usize,
    },
    NotT0,
    LadderMismatch,
    ConditionFails {
        stage: usize,
        open: Vec<String>,
    },
    NotDenseBond {
        stage: usize,
    },
}

impl fmt::Display for TopError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopError::TooManyPoints(n) => write!(f, "{n} points exceed the 64-point limit"),
            TopError::DuplicatePoint(p) => write!(f, "duplicate point {p:?}"),
            TopError::UnknownPoint(p) => write!(f, "unknown point {p:?}"),
            TopError::NotATopology { culprit } => {
                write!(f, "open family is not a topology; missing {culprit:?}")
            }
            TopError::NotHomeomorphism { generator } => {
                write!(f, "generator {generator:?} is not a homeomorphism")
            }
            TopError::BadPartition => write!(f, "partition does not cover the points"),
            TopError::SaturationFails { open } => {
                write!(f, "saturation of open {open:?} is not open")
            }
            TopError::NotInvariantClosed { set } => {
                write!(f, "{set:?} is not an invariant closed set")
            }
            TopError::NotContinuous { stage } => write!(f, "bond at stage {stage} discontinuous"),
            TopError::NotIncreasingTopologies { stage } => {
                write!(
                    f,
                    "topology at stage {stage} does not refine its predecessor"
                )
            }
            TopError::VerticalNotOpen { stage } => {
                write!(f, "vertical map at stage {stage} is not open")
            }
            TopError::NotT0 => write!(f, "space is not T0"),
            TopError::LadderMismatch => write!(f, "ladder shapes do not match"),
            TopError::ConditionFails { stage, open } => {
                write!(f, "Beck-Chevalley fails at stage {stage} on {open:?}")
            }
            TopError::NotDenseBond { stage } => {
                write!(f, "bond at stage {stage} does not have dense image")
            }
        }
    }
}

/// A finite topological space: labeled points, the full open family, and the
/// derived specialization preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    points: Vec<String>,
    opens: BTreeSet<Mask>,
    /// `up[x]` = the mask of `{y : x ≲ y}` (every open containing x contains y).
    up: Vec<Mask>,
}

impl FinSpace {
    /// Validate a complete open family: must contain ∅ and X, be closed
    /// under union and intersection, and coincide with the up-sets of its
    /// specialization preorder.
    pub fn new(points: Vec<String>, opens: BTreeSet<Mask>) -> Result<Self, TopError> {
        let n = points.len();
        if n > 64 {
            return Err(TopError::TooManyPoints(n));
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.clone()) {
                return Err(TopError::DuplicatePoint(p.clone()));
            }
        }
        let full = full_mask(n);
        let name = |m: Mask| mask_names_raw(&points, m);
        if !opens.contains(&0) {
            return Err(TopError::NotATopology { culprit: name(0) });
        }
        if !opens.contains(&full) {
            return Err(TopError::NotATopology {
                culprit: name(full),
            });
        }
        for &u in &opens {
            if u & !full != 0 {
                return Err(TopError::NotATopology {
                    culprit: name(u & !full),
                });
            }
            for &v in &opens {
                if !opens.contains(&(u | v)) {
                    return Err(TopError::NotATopology {
                        culprit: name(u | v),
                    });
                }
                if !opens.contains(&(u & v)) {
                    return Err(TopError::NotATopology {
                        culprit: name(u & v),
                    });
                }
            }
        }
        // derive the specialization preorder: x ≲ y iff every open
        // containing x contains y
        let mut up = alloc::vec![full; n];
        for x in 0..n {
            for &u in &opens {
                if u & (1 << x) != 0 {
                    up[x] &= u;
                }
            }
        }
        let space = FinSpace { points, opens, up };
        // Alexandrov cross-check: the minimal up-set of each point is open,
        // hence (closure under union) every up-set is open; and every open
        // is an up-set by construction of ≲
        for x in 0..n {
            if !space.opens.contains(&space.up[x]) {
                return Err(TopError::NotATopology {
                    culprit: space.mask_names(space.up[x]),
                });
            }
        }
        for &u in &space.opens {
            debug_assert_eq!(space.saturate_up(u), u, "opens are up-sets");
        }
        Ok(space)
    }

    /// Generate the topology from a subbasis (∅ and X are added, then the
    /// family is closed under union and intersection).
    pub fn from_subbasis(points: Vec<String>, subbasis: BTreeSet<Mask>) -> Result<Self, TopError> {
        let n = points.len();
        if n > 64 {
            return Err(TopError::TooManyPoints(n));
        }
        let mut opens = subbasis;
        opens.insert(0);
        opens.insert(full_mask(n));
        loop {
            let mut fresh = Vec::new();
            for &u in &opens {
                for &v in &opens {
                    for w in [u | v, u & v] {
                        if !opens.contains(&w) {
                            fresh.push(w);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            opens.extend(fresh);
        }
        FinSpace::new(points, opens)
    }

    /// The up-set topology of an explicit preorder (`leq[x]` = up-set mask).
    pub fn from_preorder(points: Vec<String>, up: &[Mask]) -> Result<Self, TopError> {
        let n = points.len();
        let full = full_mask(n);
        let mut opens = BTreeSet::new();
        for mask in 0..=full {
            let is_up = (0..n).all(|x| mask & (1 << x) == 0 || (up[x] & mask) == up[x]);
            if is_up {
                opens.insert(mask);
            }
            if mask == full {
                break;
            }
        }
        FinSpace::new(points, opens)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n())
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    pub fn opens(&self) -> &BTreeSet<Mask> {
        &self.opens
    }

    pub fn is_open(&self, mask: Mask) -> bool {
        self.opens.contains(&mask)
    }

    pub fn is_closed(&self, mask: Mask) -> bool {
        self.opens.contains(&(!mask & self.full()))
    }

    /// x ≲ y: every open containing x contains y (x lies in the closure of y).
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] & (1 << y) != 0
    }

    pub fn up_mask(&self, x: usize) -> Mask {
        self.up[x]
    }

    fn saturate_up(&self, mask: Mask) -> Mask {
        let mut out = 0;
        for x in 0..self.n() {
            if mask & (1 << x) != 0 {
                out |= self.up[x];
            }
        }
        out | mask
    }

    /// The topological closure of a set.
    pub fn closure(&self, mask: Mask) -> Mask {
        let mut biggest_open_missing = 0;
        for &u in &self.opens {
            if u & mask == 0 {
                biggest_open_missing |= u;
            }
        }
        !biggest_open_missing & self.full()
    }

    pub fn is_t0(&self) -> bool {
        let n = self.n();
        for x in 0..n {
            for y in (x + 1)..n {
                if self.leq(x, y) && self.leq(y, x) {
                    return false;
                }
            }
        }
        true
    }

    /// T1 for finite spaces means discrete.
    pub fn is_t1(&self) -> bool {
        (0..self.n()).all(|x| self.up[x] == 1 << x)
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() == 1usize << self.n()
    }

    /// Dense subset: meets every nonempty open.
    pub fn is_dense(&self, mask: Mask) -> bool {
        self.opens.iter().all(|&u| u == 0 || u & mask != 0)
    }

    pub fn mask_names(&self, mask: Mask) -> Vec<String> {
        mask_names_raw(&self.points, mask)
    }

    pub fn mask_of<'a, I: IntoIterator<Item = &'a str>>(&self, names: I) -> Result<Mask, TopError> {
        let mut mask = 0;
        for name in names {
            let x = self
                .index_of(name)
                .ok_or_else(|| TopError::UnknownPoint(String::from(name)))?;
            mask |= 1 << x;
        }
        Ok(mask)
    }
}

pub fn full_mask(n: usize) -> Mask {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

fn mask_names_raw(points: &[String], mask: Mask) -> Vec<String> {
    points
        .iter()
        .enumerate()
        .filter(|(x, _)| mask & (1 << x) != 0)
        .map(|(_, p)| p.clone())
        .collect()
}

/// A finite space with an equivalence relation on its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceRel {
    space: FinSpace,
    /// class id per point
    class_of: Vec<usize>,
    /// class masks, indexed by class id
    classes: Vec<Mask>,
}

impl SpaceRel {
    /// Equality relation.
    pub fn discrete_relation(space: FinSpace) -> Self {
        let n = space.n();
        SpaceRel {
            space,
            class_of: (0..n).collect(),
            classes: (0..n).map(|x| 1 << x).collect(),
        }
    }

    /// From explicit blocks (must partition the points).
    pub fn from_partition(space: FinSpace, blocks: &[Vec<usize>]) -> Result<Self, TopError> {
        let n = space.n();
        let mut class_of = alloc::vec![usize::MAX; n];
        let mut classes = Vec::with_capacity(blocks.len());
        for (id, block) in blocks.iter().enumerate() {
            let mut mask = 0;
            for &x in block {
                if x >= n || class_of[x] != usize::MAX {
                    return Err(TopError::BadPartition);
                }
                class_of[x] = id;
                mask |= 1 << x;
            }
            classes.push(mask);
        }
        if class_of.contains(&usize::MAX) {
            return Err(TopError::BadPartition);
        }
        Ok(SpaceRel {
            space,
            class_of,
            classes,
        })
    }

    /// Orbit partition of generator permutations; each generator must be a
    /// homeomorphism (map opens to opens).
    pub fn from_generators(space: FinSpace, gens: &[Vec<usize>]) -> Result<Self, TopError> {
        let n = space.n();
        for g in gens {
            assert_eq!(g.len(), n, "a permutation per point");
            for &u in space.opens() {
                let image = map_mask(u, |x| g[x]);
                if !space.is_open(image) {
                    return Err(TopError::NotHomeomorphism {
                        generator: g.iter().map(|&x| String::from(space.label(x))).collect(),
                    });
                }
            }
        }
        // connected components under the generators
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for g in gens {
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of: Vec<Option<usize>> = alloc::vec![None; n];
        for x in 0..n {
            let root = find(&mut parent, x);
            match block_of[root] {
                Some(b) => blocks[b].push(x),
                None => {
                    block_of[root] = Some(blocks.len());
                    blocks.push(alloc::vec![x]);
                }
            }
        }
        SpaceRel::from_partition(space, &blocks)
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn classes(&self) -> &[Mask] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_mask(&self, x: usize) -> Mask {
        self.classes[self.class_of[x]]
    }

    /// The union of all classes meeting the set.
    pub fn saturation(&self, mask: Mask) -> Mask {
        let mut out = 0;
        for &c in &self.classes {
            if c & mask != 0 {
                out |= c;
            }
        }
        out
    }

    pub fn is_invariant(&self, mask: Mask) -> bool {
        self.saturation(mask) == mask
    }

    /// Same points, finer topology, same partition.
    pub fn with_space(&self, space: FinSpace) -> SpaceRel {
        assert_eq!(space.labels(), self.space.labels(), "same point set");
        SpaceRel {
            space,
            class_of: self.class_of.clone(),
            classes: self.classes.clone(),
        }
    }
}

pub fn map_mask(mask: Mask, f: impl Fn(usize) -> usize) -> Mask {
    let mut out = 0;
    for x in 0..64 {
        if mask & (1 << x) != 0 {
            out |= 1 << f(x);
        }
    }
    out
}

pub fn preimage_mask(mask: Mask, n_dom: usize, f: impl Fn(usize) -> usize) -> Mask {
    let mut out = 0;
    for x in 0..n_dom {
        if mask & (1 << f(x)) != 0 {
            out |= 1 << x;
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SaturationReport {
    pub ok: bool,
    pub counterexample: Option<Vec<String>>,
}

/// Does every open set have open saturation?
pub fn saturation_check(sr: &SpaceRel) -> SaturationReport {
    for &u in sr.space.opens() {
        let sat = sr.saturation(u);
        if !sr.space.is_open(sat) {
            return SaturationReport {
                ok: false,
                counterexample: Some(sr.space.mask_names(u)),
            };
        }
    }
    SaturationReport {
        ok: true,
        counterexample: None,
    }
}

/// The verified postconditions of a T0 quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientChecks {
    pub open_projection: bool,
    pub t0: bool,
    pub kernel_is_closure_equality: bool,
    pub minimal_fibers: bool,
    pub order_is_closure_preorder: bool,
}

impl QuotientChecks {
    pub fn all_hold(&self) -> bool {
        self.open_projection
            && self.t0
            && self.kernel_is_closure_equality
            && self.minimal_fibers
            && self.order_is_closure_preorder
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub space: FinSpace,
    /// quotient point of each input point
    pub projection: Vec<usize>,
    pub checks: QuotientChecks,
}

/// The T0 quotient of the quotient space: points are classes-up-to-equal-
/// closure, opens are images of invariant opens. All five structural
/// properties are re-verified and reported.
pub fn t0_quotient(sr: &SpaceRel) -> Result<Quotient, TopError> {
    let report = saturation_check(sr);
    if !report.ok {
        return Err(TopError::SaturationFails {
            open: report.counterexample.unwrap_or_default(),
        });
    }
    let space = &sr.space;
    let n = space.n();

    // kernel: x ≈ y iff the closures of their classes agree
    let class_closure: Vec<Mask> = (0..n).map(|x| space.closure(sr.class_mask(x))).collect();
    let mut q_of: Vec<usize> = alloc::vec![usize::MAX; n];
    let mut rep_of_q: Vec<usize> = Vec::new();
    for x in 0..n {
        if q_of[x] != usize::MAX {
            continue;
        }
        let q = rep_of_q.len();
        for y in x..n {
            if q_of[y] == usize::MAX && class_closure[y] == class_closure[x] {
                q_of[y] = q;
            }
        }
        rep_of_q.push(x);
    }
    let nq = rep_of_q.len();

    // display label: the lexicographically least member label
    let q_labels: Vec<String> = (0..nq)
        .map(|q| {
            (0..n)
                .filter(|&x| q_of[x] == q)
                .map(|x| String::from(space.label(x)))
                .min()
                .expect("nonempty block")
        })
        .collect();

    // quotient opens: images of invariant opens
    let mut q_opens = BTreeSet::new();
    for &u in space.opens() {
        if sr.is_invariant(u) {
            q_opens.insert(map_mask(u, |x| q_of[x]));
        }
    }
    let q_space = FinSpace::new(q_labels, q_opens)?;

    // verify the postconditions
    let open_projection = space
        .opens()
        .iter()
        .all(|&u| q_space.is_open(map_mask(u, |x| q_of[x])));
    let t0 = q_space.is_t0();
    let kernel = (0..n)
        .all(|x| (0..n).all(|y| (q_of[x] == q_of[y]) == (class_closure[x] == class_closure[y])));
    let mut minimal_fibers = true;
    for q in 0..nq {
        let fiber = (0..n).fold(0u64, |m, x| if q_of[x] == q { m | (1 << x) } else { m });
        for &c in sr.classes() {
            if c & fiber == 0 {
                continue;
            }
            // the class must meet every relatively open nonempty subset
            for &u in space.opens() {
                if u & fiber != 0 && u & c == 0 {
                    minimal_fibers = false;
                }
            }
        }
    }
    let order = (0..n).all(|x| {
        (0..n).all(|y| {
            let q_le = q_space.leq(q_of[x], q_of[y]);
            let closure_le = space.closure(sr.class_mask(y)) & (1 << x) != 0;
            q_le == closure_le
        })
    });

    Ok(Quotient {
        space: q_space,
        projection: q_of,
        checks: QuotientChecks {
            open_projection,
            t0,
            kernel_is_closure_equality: kernel,
            minimal_fibers,
            order_is_closure_preorder: order,
        },
    })
}

/// Adjoin invariant closed sets to the topology (they become clopen). The
/// saturation property survives, and the decomposition keeps its components
/// with the corresponding quotient sets adjoined as closed sets.
pub fn adjoin_closed(sr: &SpaceRel, closed_sets: &[Mask]) -> Result<SpaceRel, TopError> {
    let space = &sr.space;
    for &f in closed_sets {
        if !space.is_closed(f) || !sr.is_invariant(f) {
            return Err(TopError::NotInvariantClosed {
                set: space.mask_names(f),
            });
        }
    }
    let mut subbasis: BTreeSet<Mask> = space.opens().clone();
    subbasis.extend(closed_sets.iter().copied());
    let finer = FinSpace::from_subbasis(space.labels().to_vec(), subbasis)?;
    let out = sr.with_space(finer);
    debug_assert!(
        saturation_check(&out).ok,
        "adjoining invariant closed sets keeps saturations open"
    );
    Ok(out)
}

/// What the patch/upper round trip verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchReport {
    /// For finite T0 spaces the patch topology is discrete.
    pub patch_discrete: bool,
    /// The specialization order is a closed subset of the patch square.
    pub order_closed_in_square: bool,
    /// The upper topology of (patch, order) returns the input opens.
    pub upper_equals_original: bool,
    /// The reverse direction: the specialization order of the upper
    /// topology is the original order.
    pub order_recovered: bool,
}

impl PatchReport {
    pub fn round_trip_identity(&self) -> bool {
        self.patch_discrete
            && self.order_closed_in_square
            && self.upper_equals_original
            && self.order_recovered
    }
}

/// Compute the patch topology (closed sets generated by the closed sets and
/// the compact up-sets — all up-sets, the space being finite) and the
/// specialization order, take the upper topology of that pair, and verify it
/// reproduces the input.
pub fn stably_compact_roundtrip(s: &FinSpace) -> Result<PatchReport, TopError> {
    if !s.is_t0() {
        return Err(TopError::NotT0);
    }
    let n = s.n();
    if n > 16 {
        return Err(TopError::TooManyPoints(n));
    }
    let full = s.full();

    // basic patch-closed sets: closed sets and up-sets
    let mut patch_closed: BTreeSet<Mask> = BTreeSet::new();
    for mask in 0..=full {
        if s.is_closed(mask) {
            patch_closed.insert(mask);
        }
        let is_up = (0..n).all(|x| mask & (1 << x) == 0 || (s.up_mask(x) & mask) == s.up_mask(x));
        if is_up {
            patch_closed.insert(mask);
        }
        if mask == full {
            break;
        }
    }
    // close under union and intersection
    loop {
        let mut fresh = Vec::new();
        for &a in &patch_closed {
            for &b in &patch_closed {
                for w in [a | b, a & b] {
                    if !patch_closed.contains(&w) {
                        fresh.push(w);
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        patch_closed.extend(fresh);
    }
    let patch_discrete =
        (0..n).all(|x| patch_closed.contains(&(1 << x))) && patch_closed.len() == (1usize << n);

    // order closed in the patch square: in a discrete square every subset is
    // closed; verified via complements of products of patch-opens
    let order_closed_in_square = {
        let mut closed = true;
        if !patch_discrete {
            closed = false;
        } else {
            // explicit check: the complement of the order is a union of
            // open boxes U × V with (U × V) ∩ ≤ = ∅
            for x in 0..n {
                for y in 0..n {
                    if !s.leq(x, y) {
                        let bx: Mask = 1 << x;
                        let by: Mask = 1 << y;
                        let box_misses_order = (0..n).all(|a| {
                            (0..n).all(|b| bx & (1 << a) == 0 || by & (1 << b) == 0 || !s.leq(a, b))
                        });
                        if !box_misses_order {
                            closed = false;
                        }
                    }
                }
            }
        }
        closed
    };

    // upper topology of (patch, ≤): patch-open up-sets; with the patch
    // discrete these are exactly the up-sets of ≤
    let mut upper = BTreeSet::new();
    for mask in 0..=full {
        let patch_open = patch_closed.contains(&(!mask & full));
        let is_up = (0..n).all(|x| mask & (1 << x) == 0 || (s.up_mask(x) & mask) == s.up_mask(x));
        if patch_open && is_up {
            upper.insert(mask);
        }
        if mask == full {
            break;
        }
    }
    let upper_equals_original = &upper == s.opens();

    // reverse direction: the specialization order of the upper topology
    let upper_space = FinSpace::new(s.labels().to_vec(), upper)?;
    let order_recovered = (0..n).all(|x| (0..n).all(|y| upper_space.leq(x, y) == s.leq(x, y)));

    Ok(PatchReport {
        patch_discrete,
        order_closed_in_square,
        upper_equals_original,
        order_recovered,
    })
}

/// All topologies on `n ≤ 5` labeled points, enumerated through preorders
/// (reflexive transitive relations) and their up-set topologies.
pub fn enumerate_topologies(n: usize) -> Vec<FinSpace> {
    assert!(n <= 5, "enumeration is intended for desk-scale n");
    let labels: Vec<String> = (0..n).map(|i| alloc::format!("p{i}")).collect();
    if n == 0 {
        return alloc::vec![FinSpace::new(labels, [0].into()).expect("empty space")];
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for bits in 0..(1u64 << pairs.len()) {
        let mut up = alloc::vec![0 as Mask; n];
        for x in 0..n {
            up[x] |= 1 << x;
        }
        for (k, &(x, y)) in pairs.iter().enumerate() {
            if bits & (1 << k) != 0 {
                up[x] |= 1 << y;
            }
        }
        // transitivity: x ≤ y and y ≤ z imply x ≤ z
        let transitive =
            (0..n).all(|x| (0..n).all(|y| up[x] & (1 << y) == 0 || (up[x] | up[y]) == up[x]));
        if !transitive {
            continue;
        }
        out.push(FinSpace::from_preorder(labels.clone(), &up).expect("up-set topology is valid"));
    }
    out
}

/// All set partitions of `{0, …, n-1}`.
pub fn enumerate_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(n: usize, x: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if x == n {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(x);
            go(n, x + 1, current, out);
            current[b].pop();
        }
        current.push(alloc::vec![x]);
        go(n, x + 1, current, out);
        current.pop();
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    go(n, 0, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests;
