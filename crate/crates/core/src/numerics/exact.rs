use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::compare_refining;
use super::{int, iv_root, parse_rat, rat_pow, rat_to_f64, Comparison, Interval, Mode, Rat, Scalar};
use crate::error::{Error, Result};

/// An exact real of the form `coeff · radicand^(1/index)`.
///
/// Every closed-form bound in the engine is of this shape: a rational
/// times at most one root of a rational. Enclosures are produced on demand
/// at any precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactReal {
    coeff: Rat,
    radicand: Rat,
    index: u32,
}

impl ExactReal {
    pub fn new(coeff: Rat, radicand: Rat, index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::Param("root index must be positive".into()));
        }
        if radicand.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        Ok(Self {
            coeff,
            radicand,
            index,
        }
        .normalized())
    }

    pub fn rational(x: Rat) -> Self {
        Self {
            coeff: x,
            radicand: Rat::one(),
            index: 1,
        }
    }

    /// `coeff · √radicand`.
    pub fn surd(coeff: Rat, radicand: Rat) -> Result<Self> {
        Self::new(coeff, radicand, 2)
    }

    fn normalized(mut self) -> Self {
        if self.coeff.is_zero() || self.radicand.is_zero() {
            return Self::rational(Rat::zero());
        }
        if self.index == 1 {
            return Self::rational(&self.coeff * &self.radicand);
        }
        let n = num_integer::Roots::nth_root(self.radicand.numer(), self.index);
        let d = num_integer::Roots::nth_root(self.radicand.denom(), self.index);
        if n.pow(self.index) == *self.radicand.numer() && d.pow(self.index) == *self.radicand.denom() {
            self.coeff *= Rat::new(n, d);
            self.radicand = Rat::one();
            self.index = 1;
        }
        self
    }

    pub fn coeff(&self) -> &Rat {
        &self.coeff
    }

    pub fn radicand(&self) -> &Rat {
        &self.radicand
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_rational(&self) -> bool {
        self.index == 1
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.coeff)
    }

    pub fn is_negative(&self) -> bool {
        self.coeff.is_negative()
    }

    pub fn mul_rat(&self, k: &Rat) -> Self {
        Self {
            coeff: &self.coeff * k,
            ..self.clone()
        }
        .normalized()
    }

    pub fn mul(&self, other: &ExactReal) -> Self {
        let l = self.index.lcm(&other.index);
        let radicand = rat_pow(&self.radicand, l / self.index) * rat_pow(&other.radicand, l / other.index);
        Self {
            coeff: &self.coeff * &other.coeff,
            radicand,
            index: l,
        }
        .normalized()
    }

    /// Equality of the represented reals (the representation itself is not
    /// canonical: `sqrt(8)` and `2*sqrt(2)` are different forms).
    pub fn value_eq(&self, other: &ExactReal) -> bool {
        if self.coeff.is_negative() != other.coeff.is_negative() {
            return false;
        }
        let l = self.index.lcm(&other.index);
        let lift = |x: &ExactReal| rat_pow(&x.coeff.abs(), l) * rat_pow(&x.radicand, l / x.index);
        lift(self) == lift(other)
    }

    /// Sound enclosure of the value.
    pub fn enclose(&self, prec: u32) -> Result<Interval> {
        if self.is_rational() {
            return Ok(Interval::point(self.coeff.clone()));
        }
        // Keep the root's relative error near 2^-prec regardless of the
        // coefficient's size.
        let boost = super::log2_estimate(&self.coeff).max(0) as u32;
        let root = iv_root(&Interval::point(self.radicand.clone()), self.index, prec + boost)?;
        Ok(root.scale(&self.coeff))
    }

    pub fn to_f64(&self) -> f64 {
        let c = rat_to_f64(&self.coeff);
        if self.is_rational() {
            return c;
        }
        let r = rat_to_f64(&self.radicand);
        if r.is_finite() && r > 0.0 {
            return c * r.powf(1.0 / f64::from(self.index));
        }
        // Radicand outside f64 range: work in the log domain.
        let lr = log2_abs(&self.radicand) / f64::from(self.index);
        c * lr.exp2()
    }

    pub fn to_scalar(&self, mode: Mode) -> Result<Scalar> {
        Ok(match mode {
            Mode::Float => Scalar::Float(self.to_f64()),
            Mode::Certified { prec } => Scalar::Certified(self.enclose(prec)?),
        })
    }

    /// Compares against `threshold`, refining from `prec` up to the maximum
    /// precision. Returns the decisive enclosure and the precision used.
    pub fn compare(&self, threshold: &Rat, prec: u32) -> Result<(Comparison, Interval, u32)> {
        compare_refining(|p| self.enclose(p), threshold, prec)
    }
}

fn log2_abs(x: &Rat) -> f64 {
    let e = super::log2_estimate(x);
    let m = rat_to_f64(&super::scale2(x, -e));
    e as f64 + m.abs().log2()
}

impl From<Rat> for ExactReal {
    fn from(x: Rat) -> Self {
        Self::rational(x)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            1 => write!(f, "{}", self.coeff),
            2 => write!(f, "{}*sqrt({})", self.coeff, self.radicand),
            m => write!(f, "{}*root({},{})", self.coeff, self.radicand, m),
        }
    }
}

impl FromStr for ExactReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some((coeff, rest)) = s.split_once('*') else {
            return Ok(Self::rational(parse_rat(s)?));
        };
        let coeff = parse_rat(coeff)?;
        let rest = rest.trim();
        let inner = |prefix: &str| {
            rest.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("malformed exact form `{s}`")))
        };
        if rest.starts_with("sqrt(") {
            Self::new(coeff, parse_rat(inner("sqrt(")?)?, 2)
        } else if rest.starts_with("root(") {
            let body = inner("root(")?;
            let (r, m) = body
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("malformed root in `{s}`")))?;
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad root index in `{s}`")))?;
            Self::new(coeff, parse_rat(r)?, m)
        } else {
            Err(Error::Parse(format!("malformed exact form `{s}`")))
        }
    }
}

impl Default for ExactReal {
    fn default() -> Self {
        Self::rational(int(0))
    }
}
