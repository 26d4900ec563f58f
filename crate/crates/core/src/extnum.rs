//! Exact arithmetic in the extended nonnegative reals `[0, ∞]` and countable
//! sequences over it.
//!
//! [`ExtReal`] is either an exact nonnegative rational (arbitrary precision,
//! always in lowest terms) or the formal value `inf`. Multiplication follows
//! the convention `0 · ∞ = 0`.
//!
//! [`TailSeq`] represents a countable sequence by a finite prefix followed by
//! a constant tail (zero or some fixed value). The family is closed under the
//! pointwise operations the rest of the crate needs, and sums stay exactly
//! computable: a nonzero constant tail contributes `∞`, a zero tail nothing.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, Mul};
use core::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact nonnegative rational.
pub type Rat = Ratio<BigUint>;

/// A value in `[0, ∞]`: an exact nonnegative rational or infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtReal {
    Finite(Rat),
    Infinity,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Rat::zero())
    }

    pub fn one() -> Self {
        ExtReal::Finite(Rat::one())
    }

    pub fn nat(n: u64) -> Self {
        ExtReal::Finite(Rat::from_integer(BigUint::from(n)))
    }

    /// `p/q` as an exact value. Panics if `q == 0`.
    pub fn ratio(p: u64, q: u64) -> Self {
        assert!(q != 0, "zero denominator");
        ExtReal::Finite(Rat::new(BigUint::from(p), BigUint::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtReal::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtReal::Finite(r) => Some(r),
            ExtReal::Infinity => None,
        }
    }

    /// `self - other`, defined when the result stays in `[0, ∞]`:
    /// `∞ - finite = ∞`; `finite - bigger` and `finite - ∞` are `None`.
    pub fn checked_sub(&self, other: &ExtReal) -> Option<ExtReal> {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Finite(_)) => Some(ExtReal::Infinity),
            (ExtReal::Infinity, ExtReal::Infinity) => None,
            (ExtReal::Finite(_), ExtReal::Infinity) => None,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                if b <= a {
                    Some(ExtReal::Finite(a - b))
                } else {
                    None
                }
            }
        }
    }

    /// Exact division by a positive natural; `∞ / n = ∞`.
    pub fn div_nat(&self, n: u64) -> ExtReal {
        assert!(n != 0, "division by zero");
        match self {
            ExtReal::Infinity => ExtReal::Infinity,
            ExtReal::Finite(r) => ExtReal::Finite(r / Rat::from_integer(BigUint::from(n))),
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// The binary expansion of a finite dyadic value: integer part plus
    /// fractional bits, `a = int + Σ bits[i]·2^-(i+1)`, with no trailing
    /// zero bits.
    pub fn dyadic_bits(&self) -> Result<(BigUint, Vec<bool>), DyadicError> {
        let r = match self {
            ExtReal::Infinity => return Err(DyadicError::InfiniteInput),
            ExtReal::Finite(r) => r,
        };
        let denom = r.denom();
        // power of two iff d & (d-1) == 0 (d >= 1 always holds in lowest terms)
        let dm1 = denom - BigUint::one();
        if (denom & &dm1) != BigUint::zero() {
            return Err(DyadicError::NonDyadic);
        }
        let int = r.numer() / denom;
        let mut rem = r.numer() % denom;
        let mut bits = Vec::new();
        let k = denom.bits().saturating_sub(1);
        for _ in 0..k {
            rem <<= 1;
            if rem >= *denom {
                bits.push(true);
                rem -= denom;
            } else {
                bits.push(false);
            }
        }
        debug_assert!(rem.is_zero());
        while bits.last() == Some(&false) {
            bits.pop();
        }
        Ok((int, bits))
    }

    /// Inverse of [`dyadic_bits`](Self::dyadic_bits).
    pub fn from_dyadic_bits(int: &BigUint, bits: &[bool]) -> ExtReal {
        let mut acc = Rat::from_integer(int.clone());
        let mut scale = Rat::new(BigUint::one(), BigUint::from(2u32));
        for &b in bits {
            if b {
                acc += scale.clone();
            }
            scale /= Rat::from_integer(BigUint::from(2u32));
        }
        ExtReal::Finite(acc)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinity,
        }
    }
}

impl<'a> Add<&'a ExtReal> for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: &'a ExtReal) -> ExtReal {
        self + rhs.clone()
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a * b),
            // 0 · ∞ = 0, in either order
            (a, b) => {
                if a.is_zero() || b.is_zero() {
                    ExtReal::zero()
                } else {
                    ExtReal::Infinity
                }
            }
        }
    }
}

impl Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::zero(), |a, b| a + b)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.cmp(b),
            (ExtReal::Finite(_), ExtReal::Infinity) => Ordering::Less,
            (ExtReal::Infinity, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Infinity, ExtReal::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Infinity => write!(f, "inf"),
            ExtReal::Finite(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Literal syntax: `p/q`, a nonnegative integer, or `inf`.
impl FromStr for ExtReal {
    type Err = ParseExtRealError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtReal::Infinity);
        }
        let bad = || ParseExtRealError(String::from(s));
        if let Some((p, q)) = s.split_once('/') {
            let p = BigUint::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigUint::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(ExtReal::Finite(Rat::new(p, q)))
        } else {
            let n = BigUint::from_str(s).map_err(|_| bad())?;
            Ok(ExtReal::Finite(Rat::from_integer(n)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseExtRealError(pub String);

impl fmt::Display for ParseExtRealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not an extended-real literal: {:?}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DyadicError {
    /// The denominator is not a power of two.
    NonDyadic,
    /// Infinity has no binary expansion; callers handle it separately.
    InfiniteInput,
}

impl fmt::Display for DyadicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicError::NonDyadic => write!(f, "denominator is not a power of two"),
            DyadicError::InfiniteInput => write!(f, "infinite input"),
        }
    }
}

/// Tail descriptor of a [`TailSeq`]: all entries past the prefix are zero or
/// a fixed constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    Zero,
    Const(ExtReal),
}

/// A countable sequence over `[0, ∞]` with a finite prefix and a constant
/// tail. Entry `i` is `prefix[i]` for `i < prefix.len()`, else the tail value.
///
/// Construction canonicalizes, so structural equality coincides with
/// pointwise equality: a `Const(0)` tail becomes `Zero`, and prefix entries
/// equal to the tail value are trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TailSeq {
    prefix: Vec<ExtReal>,
    tail: Tail,
}

impl TailSeq {
    pub fn new(mut prefix: Vec<ExtReal>, tail: Tail) -> Self {
        let tail = match tail {
            Tail::Const(c) if c.is_zero() => Tail::Zero,
            t => t,
        };
        let tail_val = match &tail {
            Tail::Zero => ExtReal::zero(),
            Tail::Const(c) => c.clone(),
        };
        while prefix.last() == Some(&tail_val) {
            prefix.pop();
        }
        TailSeq { prefix, tail }
    }

    pub fn zero() -> Self {
        TailSeq::new(Vec::new(), Tail::Zero)
    }

    pub fn constant(c: ExtReal) -> Self {
        TailSeq::new(Vec::new(), Tail::Const(c))
    }

    pub fn from_prefix(prefix: Vec<ExtReal>) -> Self {
        TailSeq::new(prefix, Tail::Zero)
    }

    /// The indicator sequence of a finite index set.
    pub fn indicator<I: IntoIterator<Item = u64>>(idx: I) -> Self {
        let mut prefix = Vec::new();
        for i in idx {
            let i = i as usize;
            if prefix.len() <= i {
                prefix.resize(i + 1, ExtReal::zero());
            }
            prefix[i] = ExtReal::one();
        }
        TailSeq::from_prefix(prefix)
    }

    pub fn prefix(&self) -> &[ExtReal] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn tail_value(&self) -> ExtReal {
        match &self.tail {
            Tail::Zero => ExtReal::zero(),
            Tail::Const(c) => c.clone(),
        }
    }

    /// First index at which the sequence has entered its constant tail.
    pub fn spine(&self) -> usize {
        self.prefix.len()
    }

    pub fn get(&self, i: usize) -> ExtReal {
        if i < self.prefix.len() {
            self.prefix[i].clone()
        } else {
            self.tail_value()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.tail == Tail::Zero
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.tail == Tail::Zero
    }

    pub fn all_finite(&self) -> bool {
        self.prefix.iter().all(ExtReal::is_finite) && self.tail_value().is_finite()
    }

    /// All entries in `{0, ∞}`.
    pub fn zero_infinity_valued(&self) -> bool {
        let ok = |v: &ExtReal| v.is_zero() || v.is_infinite();
        self.prefix.iter().all(ok) && ok(&self.tail_value())
    }

    pub fn has_infinite_entry(&self) -> bool {
        self.prefix.iter().any(ExtReal::is_infinite) || self.tail_value().is_infinite()
    }

    /// Indices of `∞` entries in the prefix; the tail may add a cofinal set.
    pub fn infinite_prefix_indices(&self) -> Vec<usize> {
        self.prefix
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_infinite())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn least_infinite_index(&self) -> Option<usize> {
        if let Some(i) = self.prefix.iter().position(ExtReal::is_infinite) {
            return Some(i);
        }
        if self.tail_value().is_infinite() {
            Some(self.prefix.len())
        } else {
            None
        }
    }

    /// Exact countable sum: the prefix sum, plus `∞` when the tail constant
    /// is positive.
    pub fn sum(&self) -> ExtReal {
        let tail = match &self.tail {
            Tail::Zero => ExtReal::zero(),
            Tail::Const(c) if c.is_zero() => ExtReal::zero(),
            Tail::Const(_) => ExtReal::Infinity,
        };
        self.prefix.iter().cloned().sum::<ExtReal>() + tail
    }

    /// The sequence with the first entry dropped.
    pub fn shifted(&self) -> TailSeq {
        if self.prefix.is_empty() {
            self.clone()
        } else {
            TailSeq::new(self.prefix[1..].to_vec(), self.tail.clone())
        }
    }

    pub fn pointwise_add(&self, other: &TailSeq) -> TailSeq {
        let n = self.spine().max(other.spine());
        let prefix = (0..n).map(|i| self.get(i) + other.get(i)).collect();
        TailSeq::new(prefix, Tail::Const(self.tail_value() + other.tail_value()))
    }

    /// Pointwise difference, when every entry stays in `[0, ∞]`.
    pub fn pointwise_sub(&self, other: &TailSeq) -> Option<TailSeq> {
        let n = self.spine().max(other.spine());
        let mut prefix = Vec::with_capacity(n);
        for i in 0..n {
            prefix.push(self.get(i).checked_sub(&other.get(i))?);
        }
        let tail = self.tail_value().checked_sub(&other.tail_value())?;
        Some(TailSeq::new(prefix, Tail::Const(tail)))
    }

    pub fn scale(&self, r: &ExtReal) -> TailSeq {
        let prefix = self.prefix.iter().map(|v| r.clone() * v.clone()).collect();
        TailSeq::new(prefix, Tail::Const(r.clone() * self.tail_value()))
    }

    pub fn map(&self, f: impl Fn(&ExtReal) -> ExtReal) -> TailSeq {
        let prefix = self.prefix.iter().map(&f).collect();
        TailSeq::new(prefix, Tail::Const(f(&self.tail_value())))
    }

    /// Entries with `∞` replaced by zero.
    pub fn finite_part(&self) -> TailSeq {
        self.map(|v| {
            if v.is_infinite() {
                ExtReal::zero()
            } else {
                v.clone()
            }
        })
    }

    /// Entries with finite values replaced by zero.
    pub fn infinite_part(&self) -> TailSeq {
        self.map(|v| {
            if v.is_infinite() {
                ExtReal::Infinity
            } else {
                ExtReal::zero()
            }
        })
    }
}

impl fmt::Display for TailSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ";{}]", self.tail_value())
    }
}

impl fmt::Debug for TailSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ext(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(ext("1/2") + ext("1/3"), ext("5/6"));
        assert_eq!(ExtReal::Infinity + ExtReal::zero(), ExtReal::Infinity);
        assert_eq!(ExtReal::zero() + ExtReal::zero(), ExtReal::zero());
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(ExtReal::zero() * ExtReal::Infinity, ExtReal::zero());
        assert_eq!(ExtReal::Infinity * ExtReal::zero(), ExtReal::zero());
        assert_eq!(ext("2/3") * ext("3/4"), ext("1/2"));
        assert_eq!(ext("5") * ExtReal::Infinity, ExtReal::Infinity);
    }

    #[test]
    fn sum_examples() {
        let s = TailSeq::new(vec![ext("1/2"), ext("1/3")], Tail::Zero);
        assert_eq!(s.sum(), ext("5/6"));
        assert_eq!(TailSeq::constant(ExtReal::one()).sum(), ExtReal::Infinity);
        let s = TailSeq::new(vec![ExtReal::Infinity], Tail::Zero);
        assert_eq!(s.sum(), ExtReal::Infinity);
    }

    #[test]
    fn sum_satisfies_head_recursion() {
        let cases = [
            TailSeq::new(vec![ext("1"), ext("2"), ext("1/7")], Tail::Zero),
            TailSeq::new(vec![ext("3")], Tail::Const(ext("1/2"))),
            TailSeq::constant(ExtReal::Infinity),
            TailSeq::zero(),
        ];
        for u in cases {
            assert_eq!(u.sum(), u.get(0) + u.shifted().sum());
        }
    }

    #[test]
    fn dyadic_examples() {
        let (int, bits) = ext("5/4").dyadic_bits().unwrap();
        assert_eq!(int, BigUint::from(1u32));
        assert_eq!(bits, vec![false, true]);
        let (int, bits) = ext("3").dyadic_bits().unwrap();
        assert_eq!(int, BigUint::from(3u32));
        assert!(bits.is_empty());
        assert_eq!(ext("1/3").dyadic_bits(), Err(DyadicError::NonDyadic));
        assert_eq!(
            ExtReal::Infinity.dyadic_bits(),
            Err(DyadicError::InfiniteInput)
        );
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["0", "7", "5/6", "inf", "1/2"] {
            let v: ExtReal = s.parse().unwrap();
            assert_eq!(format!("{v}"), s);
        }
        assert!("1/0".parse::<ExtReal>().is_err());
        assert!("-1".parse::<ExtReal>().is_err());
    }

    #[test]
    fn tailseq_canonical_equality() {
        let a = TailSeq::new(vec![ext("1"), ext("1")], Tail::Const(ext("1")));
        let b = TailSeq::constant(ext("1"));
        assert_eq!(a, b);
        let z = TailSeq::new(vec![ExtReal::zero()], Tail::Const(ExtReal::zero()));
        assert_eq!(z, TailSeq::zero());
    }

    fn arb_ext() -> impl Strategy<Value = ExtReal> {
        prop_oneof![
            4 => (0u64..30, 1u64..12).prop_map(|(p, q)| ExtReal::ratio(p, q)),
            1 => Just(ExtReal::Infinity),
        ]
    }

    proptest! {
        #[test]
        fn add_commutative_associative(a in arb_ext(), b in arb_ext(), c in arb_ext()) {
            prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b + c));
            prop_assert_eq!(a.clone() + ExtReal::zero(), a);
        }

        #[test]
        fn prefix_permutation_invariance(mut xs in proptest::collection::vec(arb_ext(), 0..6)) {
            let s1 = TailSeq::from_prefix(xs.clone()).sum();
            xs.reverse();
            let s2 = TailSeq::from_prefix(xs).sum();
            prop_assert_eq!(s1, s2);
        }

        #[test]
        fn pointwise_sum_additive(
            xs in proptest::collection::vec(arb_ext(), 0..5),
            ys in proptest::collection::vec(arb_ext(), 0..5),
            tx in arb_ext(),
            ty in arb_ext(),
        ) {
            let u = TailSeq::new(xs, Tail::Const(tx));
            let v = TailSeq::new(ys, Tail::Const(ty));
            prop_assert_eq!(u.pointwise_add(&v).sum(), u.sum() + v.sum());
        }

        #[test]
        fn dyadic_round_trip(int in 0u64..20, k in 0usize..8, mask in 0u64..256) {
            let bits: Vec<bool> = (0..k).map(|i| mask & (1 << i) != 0).collect();
            let v = ExtReal::from_dyadic_bits(&BigUint::from(int), &bits);
            let (i2, b2) = v.dyadic_bits().unwrap();
            let v2 = ExtReal::from_dyadic_bits(&i2, &b2);
            prop_assert_eq!(v, v2);
        }
    }
}
