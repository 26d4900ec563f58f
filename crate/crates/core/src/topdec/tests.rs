use alloc::string::String;
use alloc::vec::Vec;

use super::*;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| String::from(*s)).collect()
}

fn sierpinski() -> FinSpace {
    // opens ∅, {b}, {a, b}; specialization a ≤ b
    FinSpace::new(labels(&["a", "b"]), [0b00, 0b10, 0b11].into()).unwrap()
}

fn chain3() -> FinSpace {
    // opens are the up-sets of 0 < 1 < 2: final segments
    FinSpace::new(
        labels(&["x", "y", "z"]),
        [0b000, 0b100, 0b110, 0b111].into(),
    )
    .unwrap()
}

#[test]
fn construction_checks_topology() {
    assert!(matches!(
        FinSpace::new(labels(&["a", "b"]), [0b00].into()),
        Err(TopError::NotATopology { .. })
    ));
    // missing the union {a} ∪ {b}
    assert!(matches!(
        FinSpace::new(labels(&["a", "b"]), [0b00, 0b01, 0b10].into()),
        Err(TopError::NotATopology { .. })
    ));
}

#[test]
fn specialization_matches_closure() {
    let s = sierpinski();
    assert!(s.leq(0, 1), "a lies in the closure of b");
    assert!(!s.leq(1, 0));
    assert_eq!(s.closure(0b10), 0b11);
    assert!(s.is_t0());
    assert!(!s.is_t1());
    let c = chain3();
    assert!(c.leq(0, 2) && c.leq(1, 2) && !c.leq(2, 0));
}

#[test]
fn saturation_check_examples() {
    // equality relation always passes
    let sr = SpaceRel::discrete_relation(sierpinski());
    assert!(saturation_check(&sr).ok);

    // identifying the two Sierpiński points: saturation of {b} is X, open
    let sr = SpaceRel::from_partition(sierpinski(), &[alloc::vec![0, 1]]).unwrap();
    assert!(saturation_check(&sr).ok);

    // chain x < y < z with E = {{x,z},{y}}: saturation of {z} is {x,z}
    let sr = SpaceRel::from_partition(chain3(), &[alloc::vec![0, 2], alloc::vec![1]]).unwrap();
    let report = saturation_check(&sr);
    assert!(!report.ok);
    assert_eq!(report.counterexample.unwrap(), ["z"]);
}

#[test]
fn quotient_examples() {
    // 2-point indiscrete space: both points share closure, one quotient point
    let indiscrete = FinSpace::new(labels(&["a", "b"]), [0b00, 0b11].into()).unwrap();
    let q = t0_quotient(&SpaceRel::discrete_relation(indiscrete)).unwrap();
    assert_eq!(q.space.n(), 1);
    assert!(q.checks.all_hold());

    // Sierpiński with equality is already T0
    let q = t0_quotient(&SpaceRel::discrete_relation(sierpinski())).unwrap();
    assert_eq!(q.space.n(), 2);
    assert!(q.space.leq(q.projection[0], q.projection[1]));
    assert!(q.checks.all_hold());

    // discrete 2 points with the swap orbit: a single class, one point
    let discrete = FinSpace::new(labels(&["a", "b"]), [0b00, 0b01, 0b10, 0b11].into()).unwrap();
    let sr = SpaceRel::from_generators(discrete, &[alloc::vec![1, 0]]).unwrap();
    let q = t0_quotient(&sr).unwrap();
    assert_eq!(q.space.n(), 1);
    assert!(q.checks.all_hold());
}

#[test]
fn swap_is_not_a_homeomorphism_of_sierpinski() {
    assert!(matches!(
        SpaceRel::from_generators(sierpinski(), &[alloc::vec![1, 0]]),
        Err(TopError::NotHomeomorphism { .. })
    ));
}

#[test]
fn adjoin_closed_examples() {
    // adjoining the closed point {a} to Sierpiński yields the discrete space
    let sr = SpaceRel::discrete_relation(sierpinski());
    let before = t0_quotient(&sr).unwrap();
    let finer = adjoin_closed(&sr, &[0b01]).unwrap();
    assert!(finer.space().is_discrete());
    let after = t0_quotient(&finer).unwrap();
    // same components
    assert_eq!(before.projection, after.projection);

    // adjoining X or ∅ is the identity
    let same = adjoin_closed(&sr, &[0b11]).unwrap();
    assert_eq!(same.space().opens(), sr.space().opens());
    let same = adjoin_closed(&sr, &[0b00]).unwrap();
    assert_eq!(same.space().opens(), sr.space().opens());

    // a non-invariant closed set is rejected
    let rel = SpaceRel::from_partition(sierpinski(), &[alloc::vec![0, 1]]).unwrap();
    assert!(matches!(
        adjoin_closed(&rel, &[0b01]),
        Err(TopError::NotInvariantClosed { .. })
    ));
}

#[test]
fn patch_roundtrip_examples() {
    for space in [
        sierpinski(),
        chain3(),
        FinSpace::new(labels(&["a", "b"]), [0b00, 0b01, 0b10, 0b11].into()).unwrap(),
    ] {
        let report = stably_compact_roundtrip(&space).unwrap();
        assert!(report.round_trip_identity(), "{space:?}");
    }
    let indiscrete = FinSpace::new(labels(&["a", "b"]), [0b00, 0b11].into()).unwrap();
    assert!(matches!(
        stably_compact_roundtrip(&indiscrete),
        Err(TopError::NotT0)
    ));
}

#[test]
fn topology_counts_small() {
    // labeled topologies on 0..=3 points
    assert_eq!(enumerate_topologies(0).len(), 1);
    assert_eq!(enumerate_topologies(1).len(), 1);
    assert_eq!(enumerate_topologies(2).len(), 4);
    assert_eq!(enumerate_topologies(3).len(), 29);
    // partitions: Bell numbers
    assert_eq!(enumerate_partitions(3).len(), 5);
    assert_eq!(enumerate_partitions(4).len(), 15);
}

#[test]
fn alexandrov_law_holds_on_enumeration() {
    for space in enumerate_topologies(3) {
        // every open is an up-set, every point's up-set is open
        for &u in space.opens() {
            for x in 0..space.n() {
                if u & (1 << x) != 0 {
                    assert_eq!(u & space.up_mask(x), space.up_mask(x));
                }
            }
        }
        // T1 iff discrete at this size
        assert_eq!(space.is_t1(), space.is_discrete());
    }
}
