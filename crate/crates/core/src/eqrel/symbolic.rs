//! Symbolic transport plans: the same construction as [`crate::transport`],
//! but with the entire (possibly infinite) support extracted into sparse
//! entries plus structured tails, so that witness composition and splitting
//! can consume whole plans.
//!
//! A plan is representable exactly when its support settles into one of the
//! witness tail shapes. The shapes that arise here:
//!
//! - both sides finitely supported — a finite box of entries;
//! - the cross pattern of case I — one source row and one sink column;
//! - case II with a single infinite index — everything lands in one row;
//! - the greedy walk of case III on two constant tails — after a finite
//!   prefix the walk revisits a residual state on the diagonal and the cycle
//!   repeats as a block tail.
//!
//! Everything else (round-robin over several infinite indices, window
//! splits, non-diagonal cycles) escapes the family and is reported as
//! `Unrepresentable`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::extnum::{ExtReal, TailSeq};
use crate::transport;

use super::witness::{WitnessPart, WitnessTail};

#[derive(Clone, Copy, Debug)]
pub(super) struct Unrepresentable;

const LOCKSTEP_STEP_CAP: usize = 20_000;

/// The full plan for `d(u, v)` as sparse entries plus tails, in absolute
/// coordinates. Requires `u.sum() == v.sum()`.
pub(super) fn plan(u: &TailSeq, v: &TailSeq) -> Result<WitnessPart, Unrepresentable> {
    debug_assert_eq!(u.sum(), v.sum(), "callers establish equal sums");
    if u.has_infinite_entry() && v.has_infinite_entry() {
        return Ok(case_cross(u, v));
    }
    if u.zero_infinity_valued() && v.all_finite() {
        if u.is_zero() {
            return Ok(WitnessPart::empty());
        }
        return case_routed(u, v);
    }
    if v.zero_infinity_valued() && u.all_finite() {
        if v.is_zero() {
            return Ok(WitnessPart::empty());
        }
        return Ok(case_routed(v, u)?.transpose());
    }
    if u.all_finite() && v.all_finite() {
        if u.is_finitely_supported() && v.is_finitely_supported() {
            return Ok(finite_box(u, v));
        }
        return lockstep(u, v);
    }
    if u.has_infinite_entry() {
        case_mixed(u, v)
    } else {
        Ok(case_mixed(v, u)?.transpose())
    }
}

/// Case I: cross pattern at the least infinite indices.
fn case_cross(u: &TailSeq, v: &TailSeq) -> WitnessPart {
    let i0 = u.least_infinite_index().unwrap() as u64;
    let j0 = v.least_infinite_index().unwrap() as u64;
    let mut part = WitnessPart::empty();
    for j in 0..v.spine() {
        let w = v.get(j);
        if !w.is_zero() {
            part.entries.insert((i0, j as u64), w);
        }
    }
    let vt = v.tail_value();
    if !vt.is_zero() {
        part.tails.push(WitnessTail::Source {
            row: i0,
            from: v.spine() as u64,
            value: vt,
        });
    }
    for i in 0..u.spine() {
        if i as u64 == i0 {
            continue;
        }
        let w = u.get(i);
        if !w.is_zero() {
            part.entries.insert((i as u64, j0), w);
        }
    }
    let ut = u.tail_value();
    if !ut.is_zero() {
        part.tails.push(WitnessTail::Sink {
            col: j0,
            from: u.spine() as u64,
            value: ut,
        });
    }
    part
}

/// Case II with `u` infinite only at a single index: every window of `v` is
/// routed there, so the whole of `v` lands in one row.
fn case_routed(u: &TailSeq, v: &TailSeq) -> Result<WitnessPart, Unrepresentable> {
    if u.tail_value().is_infinite() {
        return Err(Unrepresentable);
    }
    let rows = u.infinite_prefix_indices();
    if rows.len() != 1 {
        return Err(Unrepresentable);
    }
    let i0 = rows[0] as u64;
    let mut part = WitnessPart::empty();
    for j in 0..v.spine() {
        let w = v.get(j);
        if !w.is_zero() {
            part.entries.insert((i0, j as u64), w);
        }
    }
    let vt = v.tail_value();
    if !vt.is_zero() {
        part.tails.push(WitnessTail::Source {
            row: i0,
            from: v.spine() as u64,
            value: vt,
        });
    }
    Ok(part)
}

/// Both sides finitely supported: read the finite box off a transport plan.
fn finite_box(u: &TailSeq, v: &TailSeq) -> WitnessPart {
    let plan = transport::transport(u, v).expect("equal sums");
    let mut entries = BTreeMap::new();
    for i in 0..u.spine() {
        for j in 0..v.spine() {
            let w = plan.entry(i, j);
            if !w.is_zero() {
                entries.insert((i as u64, j as u64), w);
            }
        }
    }
    WitnessPart {
        entries,
        tails: Vec::new(),
    }
}

/// Case IV with a finite finite-part sum: split `v` at the matching cut and
/// recurse; the infinite-sum variant needs window masks, which have no
/// symbolic form.
fn case_mixed(u: &TailSeq, v: &TailSeq) -> Result<WitnessPart, Unrepresentable> {
    let u_fin = u.finite_part();
    let u_inf = u.infinite_part();
    let s_fin = u_fin.sum();
    if s_fin.is_infinite() {
        return Err(Unrepresentable);
    }
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
    let mut out = plan(&u_fin, &v_fin)?;
    out.absorb(plan(&u_inf, &v_inf)?);
    Ok(out)
}

/// Case III on two constant tails: run the greedy walk, watching for a
/// residual state recurring on the diagonal once both sequences are in their
/// tails. The recurring segment becomes block tails; the prefix stays sparse.
fn lockstep(u: &TailSeq, v: &TailSeq) -> Result<WitnessPart, Unrepresentable> {
    let mut ci = 0usize;
    let mut cj = 0usize;
    let mut row_rem = u.get(0);
    let mut col_rem = v.get(0);
    let mut assigned: Vec<((usize, usize), ExtReal)> = Vec::new();
    let mut history: BTreeMap<(ExtReal, ExtReal), (usize, usize, usize)> = BTreeMap::new();

    for _ in 0..LOCKSTEP_STEP_CAP {
        if ci >= u.spine() && cj >= v.spine() {
            let key = (row_rem.clone(), col_rem.clone());
            if let Some(&(pi, pj, plen)) = history.get(&key) {
                if ci - pi != cj - pj {
                    return Err(Unrepresentable);
                }
                let period = (ci - pi) as u64;
                debug_assert!(period >= 1);
                let mut part = WitnessPart::empty();
                for ((x, y), w) in &assigned[..plen] {
                    part.entries.insert((*x as u64, *y as u64), w.clone());
                }
                for ((x, y), w) in &assigned[plen..] {
                    // forward orbit of one cycle cell, aligned to its own row
                    let t = (*x - pi) as u64;
                    part.tails.push(WitnessTail::Block {
                        from: pi as u64 + (t / period) * period,
                        period,
                        pairs: alloc::vec![(t % period, *y as i64 - *x as i64, w.clone())],
                    });
                }
                return Ok(part);
            }
            history.insert(key, (ci, cj, assigned.len()));
        }
        if row_rem <= col_rem {
            if !row_rem.is_zero() {
                col_rem = col_rem.checked_sub(&row_rem).expect("finite residuals");
                assigned.push(((ci, cj), row_rem.clone()));
            }
            ci += 1;
            row_rem = u.get(ci);
        } else {
            let s = col_rem.clone();
            row_rem = row_rem.checked_sub(&s).expect("finite residuals");
            if !s.is_zero() {
                assigned.push(((ci, cj), s));
            }
            cj += 1;
            col_rem = v.get(cj);
        }
    }
    Err(Unrepresentable)
}
