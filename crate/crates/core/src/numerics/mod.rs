//! Exact rational arithmetic, rational intervals and rigorous root
//! enclosures.

mod exact;
mod interval;
mod text;

pub use exact::ExactReal;
pub use interval::{
    certify_compare, iv_arith, iv_pow, iv_root, iv_sqrt, pow_rounded, ArithOp, Comparison,
    Exponent, Interval,
};
pub(crate) use interval::compare_refining;
pub use text::{
    format_fixed, format_sig, format_sig_directed, parse_rat, render_fixed, render_outward, render_sig,
};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// Default interval width budget, in bits.
pub const DEFAULT_PREC: u32 = 128;
/// Largest precision tried when a comparison stays inconclusive.
pub const MAX_PREC: u32 = 4096;

/// Evaluation mode for every kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Plain `f64` evaluation; nothing is certified.
    Float,
    /// Rational interval enclosure with the given width budget in bits.
    Certified { prec: u32 },
}

impl Mode {
    pub fn certified() -> Self {
        Mode::Certified { prec: DEFAULT_PREC }
    }

    pub fn prec(self) -> u32 {
        match self {
            Mode::Float => DEFAULT_PREC,
            Mode::Certified { prec } => prec,
        }
    }
}

/// A value produced by a kernel: a float or a certified enclosure.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Float(f64),
    Certified(Interval),
}

impl Scalar {
    /// Best `f64` approximation (interval midpoint in certified mode).
    pub fn approx(&self) -> f64 {
        match self {
            Scalar::Float(x) => *x,
            Scalar::Certified(iv) => iv.midpoint_f64(),
        }
    }

    pub fn interval(&self) -> Option<&Interval> {
        match self {
            Scalar::Float(_) => None,
            Scalar::Certified(iv) => Some(iv),
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Scalar::Certified(_))
    }
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `x^n` for a normalized rational; coprime powers stay coprime, so no gcd
/// is needed.
pub fn rat_pow(x: &Rat, n: u32) -> Rat {
    Rat::new_raw(x.numer().pow(n), x.denom().pow(n))
}

/// `x^n` for any integer exponent, `x != 0` when `n < 0`.
pub fn rat_powi(x: &Rat, n: i64) -> Rat {
    let mag = u32::try_from(n.unsigned_abs()).expect("exponent fits in u32");
    let v = rat_pow(x, mag);
    if n < 0 {
        v.recip()
    } else {
        v
    }
}

/// Approximate base-2 logarithm of `|x|` (difference of bit lengths), `x != 0`.
pub(crate) fn log2_estimate(x: &Rat) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64
}

/// `x * 2^k` for a signed shift `k`.
pub(crate) fn scale2(x: &Rat, k: i64) -> Rat {
    if k >= 0 {
        Rat::new(x.numer() << (k as u64), x.denom().clone())
    } else {
        Rat::new(x.numer().clone(), x.denom() << ((-k) as u64))
    }
}

pub(crate) fn dyadic(m: BigInt, k: i64) -> Rat {
    scale2(&Rat::from_integer(m), -k)
}

pub(crate) fn floor_int(x: &Rat) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub(crate) fn ceil_int(x: &Rat) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

pub(crate) fn to_biguint(x: &BigInt) -> BigUint {
    debug_assert!(!x.is_negative());
    x.to_biguint().unwrap_or_default()
}

pub(crate) fn from_biguint(x: BigUint) -> BigInt {
    BigInt::from_biguint(if x.is_zero() { Sign::NoSign } else { Sign::Plus }, x)
}

/// Converts a rational to the nearest-ish `f64`, handling very large
/// numerators and denominators.
pub fn rat_to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    if x.is_zero() {
        return 0.0;
    }
    if let Some(v) = x.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    // Fall back to an explicit shift for values outside the direct range.
    let e = log2_estimate(x);
    let shifted = scale2(x, 60 - e);
    let m = shifted.to_integer().to_f64().unwrap_or(0.0);
    m * 2f64.powi((e - 60).clamp(-2000, 2000) as i32)
}
