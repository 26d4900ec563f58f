//! A small Horn-axiom language over the signature of countable sums, binary
//! meets, countable joins, and scalar multiples, with evaluators for the
//! extended reals and for `L` over a class table, plus a seeded randomized
//! checker.
//!
//! Concrete syntax, one axiom per line:
//!
//! ```text
//! forall a b c. a + c = b + c => a = b
//! forall a b. a + b = meet(a, b) + join(a, b)
//! forall a. sum(a; rep a) = sum(; rep a)
//! forall a. 1/2 * a + 1/2 * a = a
//! ```
//!
//! `sum(t1, …; rep t)` and `join(t1, …; rep t)` take finitely many listed
//! terms and an optional ω-replicated tail, mirroring the countable families
//! the algebras can represent. Scale literals are extended-real literals.
//! Hypotheses are comma-separated, `=>` introduces the conclusion, and `0`
//! is the empty sum. A verdict is sampling-based, never a proof.

pub mod parse;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::eqrel::ClassTable;
use crate::extnum::ExtReal;
use crate::klalg::{self, LElem};
use crate::sample::SplitMix64;

pub use parse::{parse_axiom, parse_catalog, CatalogEntry, ParseError};

/// The shipped axiom catalog (also installed as a plain file in the repo).
pub const CATALOG_SRC: &str = include_str!("catalog.horn");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    /// Countable sum: listed terms plus an optional ω-replicated tail.
    /// `Sum { items: [], rep: None }` is the zero constant.
    Sum {
        items: Vec<Term>,
        rep: Option<Box<Term>>,
    },
    Meet(Box<Term>, Box<Term>),
    /// Countable join of the listed terms and the optional tail.
    Join {
        items: Vec<Term>,
        rep: Option<Box<Term>>,
    },
    Scale(ExtReal, Box<Term>),
}

impl Term {
    pub fn zero() -> Term {
        Term::Sum {
            items: Vec::new(),
            rep: None,
        }
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Sum { items, rep } | Term::Join { items, rep } => {
                for t in items {
                    t.collect_vars(out);
                }
                if let Some(t) = rep {
                    t.collect_vars(out);
                }
            }
            Term::Meet(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Scale(_, t) => t.collect_vars(out),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Sum { items, rep } => {
                if rep.is_none() && items.is_empty() {
                    return write!(f, "0");
                }
                if rep.is_none() && items.len() > 1 {
                    // plain finite sums print with +
                    for (i, t) in items.iter().enumerate() {
                        if i > 0 {
                            write!(f, " + ")?;
                        }
                        if matches!(t, Term::Sum { rep: None, items } if items.len() > 1) {
                            write!(f, "({t})")?;
                        } else {
                            write!(f, "{t}")?;
                        }
                    }
                    return Ok(());
                }
                if rep.is_none() && items.len() == 1 {
                    return write!(f, "{}", items[0]);
                }
                write!(f, "sum(")?;
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                if let Some(t) = rep {
                    write!(f, "; rep {t}")?;
                }
                write!(f, ")")
            }
            Term::Meet(a, b) => write!(f, "meet({a}, {b})"),
            Term::Join { items, rep } => {
                write!(f, "join(")?;
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                if let Some(t) = rep {
                    write!(f, "; rep {t}")?;
                }
                write!(f, ")")
            }
            Term::Scale(r, t) => {
                if matches!(
                    **t,
                    Term::Sum { ref items, ref rep } if rep.is_none() && items.len() != 1
                ) {
                    write!(f, "{r} * ({t})")
                } else {
                    write!(f, "{r} * {t}")
                }
            }
        }
    }
}

/// `∀ v̄ [⋀ᵢ (sᵢ = tᵢ) → (s = t)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornAxiom {
    pub vars: Vec<String>,
    pub hypotheses: Vec<(Term, Term)>,
    pub conclusion: (Term, Term),
}

impl HornAxiom {
    pub fn used_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (l, r) in self
            .hypotheses
            .iter()
            .chain(core::iter::once(&self.conclusion))
        {
            l.collect_vars(&mut out);
            r.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for HornAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "forall")?;
        for v in &self.vars {
            write!(f, " {v}")?;
        }
        write!(f, ".")?;
        for (i, (l, r)) in self.hypotheses.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {l} = {r}")?;
        }
        if !self.hypotheses.is_empty() {
            write!(f, " =>")?;
        }
        write!(f, " {} = {}", self.conclusion.0, self.conclusion.1)
    }
}

/// An algebra the language can be interpreted in. Scaling may be partial;
/// everything else is total.
pub trait HornAlgebra {
    type Elem: Clone + PartialEq + fmt::Display;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// The sum of ω copies.
    fn omega_rep(&self, a: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, r: &ExtReal, a: &Self::Elem) -> Option<Self::Elem>;
}

/// The carrier algebra `[0, ∞]`.
pub struct ExtRealAlgebra;

impl HornAlgebra for ExtRealAlgebra {
    type Elem = ExtReal;

    fn zero(&self) -> ExtReal {
        ExtReal::zero()
    }

    fn add(&self, a: &ExtReal, b: &ExtReal) -> ExtReal {
        a.clone() + b.clone()
    }

    fn omega_rep(&self, a: &ExtReal) -> ExtReal {
        ExtReal::Infinity * a.clone()
    }

    fn meet(&self, a: &ExtReal, b: &ExtReal) -> ExtReal {
        a.clone().min(b.clone())
    }

    fn join(&self, a: &ExtReal, b: &ExtReal) -> ExtReal {
        a.clone().max(b.clone())
    }

    fn scale(&self, r: &ExtReal, a: &ExtReal) -> Option<ExtReal> {
        Some(r.clone() * a.clone())
    }
}

/// The algebra of `L`-types over a fixed table. Real multiples are total.
pub struct LAlgebra {
    pub table: Arc<ClassTable>,
}

impl HornAlgebra for LAlgebra {
    type Elem = LElem;

    fn zero(&self) -> LElem {
        LElem::zero(self.table.clone()).expect("compressible table")
    }

    fn add(&self, a: &LElem, b: &LElem) -> LElem {
        a.add(b).expect("same table")
    }

    fn omega_rep(&self, a: &LElem) -> LElem {
        a.scale(&ExtReal::Infinity)
    }

    fn meet(&self, a: &LElem, b: &LElem) -> LElem {
        klalg::meet_l(a, b).expect("same table")
    }

    fn join(&self, a: &LElem, b: &LElem) -> LElem {
        klalg::join_l(a, b).expect("same table")
    }

    fn scale(&self, r: &ExtReal, a: &LElem) -> Option<LElem> {
        Some(a.scale(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    Unbound {
        var: String,
    },
    /// A scale fell outside the algebra's partial operation; the checker
    /// treats the equation as vacuously satisfied.
    ScaleUndefined,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Unbound { var } => write!(f, "unbound variable {var:?}"),
            EvalError::ScaleUndefined => write!(f, "scale undefined on this element"),
        }
    }
}

pub fn eval<A: HornAlgebra>(
    alg: &A,
    term: &Term,
    valuation: &BTreeMap<String, A::Elem>,
) -> Result<A::Elem, EvalError> {
    match term {
        Term::Var(v) => valuation
            .get(v)
            .cloned()
            .ok_or_else(|| EvalError::Unbound { var: v.clone() }),
        Term::Sum { items, rep } => {
            let mut acc = alg.zero();
            for t in items {
                let v = eval(alg, t, valuation)?;
                acc = alg.add(&acc, &v);
            }
            if let Some(t) = rep {
                let v = eval(alg, t, valuation)?;
                acc = alg.add(&acc, &alg.omega_rep(&v));
            }
            Ok(acc)
        }
        Term::Meet(a, b) => {
            let a = eval(alg, a, valuation)?;
            let b = eval(alg, b, valuation)?;
            Ok(alg.meet(&a, &b))
        }
        Term::Join { items, rep } => {
            let mut acc = alg.zero();
            for t in items {
                let v = eval(alg, t, valuation)?;
                acc = alg.join(&acc, &v);
            }
            if let Some(t) = rep {
                // the join of ω copies is the element itself
                let v = eval(alg, t, valuation)?;
                acc = alg.join(&acc, &v);
            }
            Ok(acc)
        }
        Term::Scale(r, t) => {
            let v = eval(alg, t, valuation)?;
            alg.scale(r, &v).ok_or(EvalError::ScaleUndefined)
        }
    }
}

/// Outcome of a randomized axiom check.
#[derive(Clone, Debug)]
pub enum Verdict<E> {
    Pass {
        trials: usize,
    },
    Fail {
        valuation: BTreeMap<String, E>,
        lhs: E,
        rhs: E,
    },
}

impl<E> Verdict<E> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

/// Exhaustive check over all valuations drawn from a finite value grid.
/// Equations with an undefined side are vacuously satisfied.
pub fn check_exhaustive<A: HornAlgebra>(
    alg: &A,
    axiom: &HornAxiom,
    grid: &[A::Elem],
) -> Result<Verdict<A::Elem>, EvalError> {
    let k = axiom.vars.len();
    let mut idx = alloc::vec![0usize; k];
    let mut total = 0usize;
    'outer: loop {
        let mut valuation = BTreeMap::new();
        for (v, &i) in axiom.vars.iter().zip(idx.iter()) {
            valuation.insert(v.clone(), grid[i].clone());
        }
        total += 1;
        let mut vacuous = false;
        for (l, r) in &axiom.hypotheses {
            match (eval(alg, l, &valuation), eval(alg, r, &valuation)) {
                (Ok(lv), Ok(rv)) => {
                    if lv != rv {
                        vacuous = true;
                        break;
                    }
                }
                (Err(EvalError::ScaleUndefined), _) | (_, Err(EvalError::ScaleUndefined)) => {
                    vacuous = true;
                    break;
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        if !vacuous {
            let (l, r) = &axiom.conclusion;
            match (eval(alg, l, &valuation), eval(alg, r, &valuation)) {
                (Ok(lv), Ok(rv)) => {
                    if lv != rv {
                        return Ok(Verdict::Fail {
                            valuation,
                            lhs: lv,
                            rhs: rv,
                        });
                    }
                }
                (Err(EvalError::ScaleUndefined), _) | (_, Err(EvalError::ScaleUndefined)) => {}
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        // advance the odometer
        for slot in 0..k {
            idx[slot] += 1;
            if idx[slot] < grid.len() {
                continue 'outer;
            }
            idx[slot] = 0;
        }
        break;
    }
    Ok(Verdict::Pass { trials: total })
}

/// Randomized valuation search for a counterexample. Equations with an
/// undefined side are treated as vacuously satisfied. Deterministic for a
/// fixed seed state.
pub fn check<A: HornAlgebra>(
    alg: &A,
    axiom: &HornAxiom,
    rng: &mut SplitMix64,
    trials: usize,
    mut sample: impl FnMut(&mut SplitMix64) -> A::Elem,
) -> Result<Verdict<A::Elem>, EvalError> {
    'trial: for _ in 0..trials {
        let mut valuation = BTreeMap::new();
        for v in &axiom.vars {
            valuation.insert(v.clone(), sample(rng));
        }
        for (l, r) in &axiom.hypotheses {
            let lv = match eval(alg, l, &valuation) {
                Ok(v) => v,
                Err(EvalError::ScaleUndefined) => continue 'trial,
                Err(e) => return Err(e),
            };
            let rv = match eval(alg, r, &valuation) {
                Ok(v) => v,
                Err(EvalError::ScaleUndefined) => continue 'trial,
                Err(e) => return Err(e),
            };
            if lv != rv {
                continue 'trial;
            }
        }
        let (l, r) = &axiom.conclusion;
        let lv = match eval(alg, l, &valuation) {
            Ok(v) => v,
            Err(EvalError::ScaleUndefined) => continue 'trial,
            Err(e) => return Err(e),
        };
        let rv = match eval(alg, r, &valuation) {
            Ok(v) => v,
            Err(EvalError::ScaleUndefined) => continue 'trial,
            Err(e) => return Err(e),
        };
        if lv != rv {
            return Ok(Verdict::Fail {
                valuation,
                lhs: lv,
                rhs: rv,
            });
        }
    }
    Ok(Verdict::Pass { trials })
}
