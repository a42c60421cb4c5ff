use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{
    ceil_int, dyadic, floor_int, from_biguint, log2_estimate, rat_pow, rat_to_f64, scale2,
    to_biguint, Rat, MAX_PREC,
};
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Outcome of comparing an enclosure against a rational threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// `hi < threshold`.
    CertifiedLess,
    /// `lo >= threshold`.
    CertifiedGreaterEq,
    Inconclusive,
}

/// Exponent accepted by [`iv_pow`]: an integer, or `k/2` for a half-integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Int(i64),
    /// The exponent `k / 2`.
    Half(i64),
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval);
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: Rat) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub(crate) fn from_sorted(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }

    pub fn midpoint_f64(&self) -> f64 {
        0.5 * (rat_to_f64(&self.lo) + rat_to_f64(&self.hi))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the open interval `(lo, hi)`.
    pub fn is_strictly_inside(&self, lo: &Rat, hi: &Rat) -> bool {
        lo < &self.lo && &self.hi < hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn neg(&self) -> Interval {
        Interval::from_sorted(-&self.hi, -&self.lo)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::from_sorted(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::from_sorted(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return Interval::from_sorted(&self.lo * &o.lo, &self.hi * &o.hi);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().expect("non-empty").clone();
        let hi = c.iter().max().expect("non-empty").clone();
        Interval::from_sorted(lo, hi)
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        Ok(Interval::from_sorted(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn scale(&self, k: &Rat) -> Interval {
        if k.is_negative() {
            Interval::from_sorted(&self.hi * k, &self.lo * k)
        } else {
            Interval::from_sorted(&self.lo * k, &self.hi * k)
        }
    }

    /// Exact integer power.
    pub fn powi(&self, n: i64) -> Result<Interval> {
        if n < 0 {
            if self.contains_zero() {
                return Err(Error::ZeroToNegativePower);
            }
            return self.recip()?.powi(-n);
        }
        let e = u32::try_from(n).map_err(|_| Error::Param(format!("exponent {n} too large")))?;
        let lo_p = rat_pow(&self.lo, e);
        let hi_p = rat_pow(&self.hi, e);
        if e % 2 == 1 || !self.lo.is_negative() {
            return Ok(Interval::from_sorted(lo_p, hi_p));
        }
        if !self.hi.is_positive() {
            return Ok(Interval::from_sorted(hi_p, lo_p));
        }
        Ok(Interval::from_sorted(Rat::zero(), lo_p.max(hi_p)))
    }

    /// Widens the endpoints outward to dyadic rationals carrying roughly
    /// `prec` significant bits. Small endpoints are left exact.
    pub fn round_out(&self, prec: u32) -> Interval {
        Interval::from_sorted(round_down(&self.lo, prec), round_up(&self.hi, prec))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

fn needs_rounding(x: &Rat, prec: u32) -> bool {
    x.numer().bits() + x.denom().bits() > 2 * u64::from(prec) + 64
}

pub(crate) fn round_down(x: &Rat, prec: u32) -> Rat {
    if x.is_zero() || !needs_rounding(x, prec) {
        return x.clone();
    }
    let k = i64::from(prec) - log2_estimate(x);
    dyadic(floor_int(&scale2(x, k)), k)
}

pub(crate) fn round_up(x: &Rat, prec: u32) -> Rat {
    if x.is_zero() || !needs_rounding(x, prec) {
        return x.clone();
    }
    let k = i64::from(prec) - log2_estimate(x);
    dyadic(ceil_int(&scale2(x, k)), k)
}

pub fn iv_arith(op: ArithOp, a: &Interval, b: &Interval) -> Result<Interval> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

fn exact_root(x: &Rat, m: u32) -> Option<Rat> {
    let n = x.numer().nth_root(m);
    let d = x.denom().nth_root(m);
    (n.pow(m) == *x.numer() && d.pow(m) == *x.denom()).then(|| Rat::new(n, d))
}

/// Scale exponent `k` such that the root is resolved to `2^-k`, at least
/// `prec + 1` bits and more for small radicands.
fn root_scale(x: &Rat, m: u32, prec: u32) -> u64 {
    let small = (-log2_estimate(x)).max(0) as u64;
    u64::from(prec) + 2 + small / u64::from(m)
}

fn root_down(x: &Rat, m: u32, prec: u32) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    if let Some(r) = exact_root(x, m) {
        return r;
    }
    let k = root_scale(x, m, prec);
    let n = floor_int(&scale2(x, (k * u64::from(m)) as i64));
    let r = to_biguint(&n).nth_root(m);
    dyadic(from_biguint(r), k as i64)
}

fn root_up(x: &Rat, m: u32, prec: u32) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    if let Some(r) = exact_root(x, m) {
        return r;
    }
    let k = root_scale(x, m, prec);
    let n = to_biguint(&ceil_int(&scale2(x, (k * u64::from(m)) as i64)));
    let mut r = n.nth_root(m);
    if r.pow(m) < n {
        r += 1u32;
    }
    dyadic(from_biguint(r), k as i64)
}

/// Enclosure of `{√x : x ∈ a}` whose width exceeds `√hi − √lo` by at most
/// `2^-prec`.
pub fn iv_sqrt(a: &Interval, prec: u32) -> Result<Interval> {
    iv_root(a, 2, prec)
}

/// Enclosure of `{x^(1/m) : x ∈ a}` for `a ⊆ [0, ∞)`.
pub fn iv_root(a: &Interval, m: u32, prec: u32) -> Result<Interval> {
    if m == 0 {
        return Err(Error::Param("root index must be positive".into()));
    }
    if a.lo.is_negative() {
        return Err(Error::NegativeRadicand);
    }
    if m == 1 {
        return Ok(a.clone());
    }
    Ok(Interval::from_sorted(
        root_down(&a.lo, m, prec),
        root_up(&a.hi, m, prec),
    ))
}

/// Enclosure of `{x^e : x ∈ a}`. Integer powers are exact; half-integer
/// powers go through [`iv_sqrt`].
pub fn iv_pow(a: &Interval, e: Exponent, prec: u32) -> Result<Interval> {
    match e {
        Exponent::Int(n) => a.powi(n),
        Exponent::Half(k) if k % 2 == 0 => a.powi(k / 2),
        Exponent::Half(k) => {
            if a.lo.is_negative() {
                return Err(Error::NegativeBaseFractionalExponent);
            }
            if k < 0 && a.contains_zero() {
                return Err(Error::ZeroToNegativePower);
            }
            let r = iv_sqrt(&a.powi(k.abs())?, prec)?;
            if k < 0 {
                r.recip()
            } else {
                Ok(r)
            }
        }
    }
}

fn pow_down(x: &Rat, mut n: u64, prec: u32) -> Rat {
    let mut acc = Rat::one();
    let mut base = x.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = round_down(&(&acc * &base), prec);
        }
        n >>= 1;
        if n > 0 {
            base = round_down(&(&base * &base), prec);
        }
    }
    acc
}

fn pow_up(x: &Rat, mut n: u64, prec: u32) -> Rat {
    let mut acc = Rat::one();
    let mut base = x.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = round_up(&(&acc * &base), prec);
        }
        n >>= 1;
        if n > 0 {
            base = round_up(&(&base * &base), prec);
        }
    }
    acc
}

/// Enclosure of `{x^n : x ∈ a}` for `a ⊆ [0, ∞)`, rounding outward after
/// every multiplication. Use for exponents where exact powers get too large.
pub fn pow_rounded(a: &Interval, n: u64, prec: u32) -> Result<Interval> {
    if a.lo.is_negative() {
        return Err(Error::Domain(
            "rounded powers require a nonnegative base".into(),
        ));
    }
    // Guard bits absorb the ~2·log2(n) roundings.
    let guard = prec + 2 * (64 - n.leading_zeros()) + 8;
    Ok(Interval::from_sorted(
        pow_down(&a.lo, n, guard),
        pow_up(&a.hi, n, guard),
    ))
}

pub fn certify_compare(a: &Interval, threshold: &Rat) -> Comparison {
    if &a.hi < threshold {
        Comparison::CertifiedLess
    } else if &a.lo >= threshold {
        Comparison::CertifiedGreaterEq
    } else {
        Comparison::Inconclusive
    }
}

/// Re-evaluates `enclose` at doubling precision until the comparison with
/// `threshold` is decided or [`MAX_PREC`] is exhausted.
pub(crate) fn compare_refining<F>(
    mut enclose: F,
    threshold: &Rat,
    start_prec: u32,
) -> Result<(Comparison, Interval, u32)>
where
    F: FnMut(u32) -> Result<Interval>,
{
    let mut prec = start_prec.max(16);
    loop {
        let iv = enclose(prec)?;
        let c = certify_compare(&iv, threshold);
        if c != Comparison::Inconclusive || prec >= MAX_PREC {
            return Ok((c, iv, prec));
        }
        prec = (prec * 2).min(MAX_PREC);
    }
}
