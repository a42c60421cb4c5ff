use num_traits::{Signed, Zero};

use super::poly;
use crate::error::{Error, Result};
use crate::kernels::{build_q, SpaceParams};
use crate::numerics::{int, iv_sqrt, Interval, Mode, Rat, Scalar};

/// An isolating interval for the unique root of `Q` in `(0, 1/(p-j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootBracket {
    pub params: SpaceParams,
    pub interval: Interval,
    /// Exact signs of `Q` at the endpoints; `(0, 0)` if bisection hit the
    /// root exactly.
    pub sign_change: (i8, i8),
}

fn sign(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `Q` with any root at `λ = 0` divided out, so that it has the same sign
/// as `Q` on `λ > 0` and is nonzero at 0.
pub(crate) fn deflated_q(params: &SpaceParams) -> Result<Vec<Rat>> {
    let q = poly::trim(build_q(params)?.ascending());
    if q.is_empty() {
        return Err(Error::DegenerateCase(format!("{params}: Q vanishes identically")));
    }
    Ok(poly::deflate_zero_roots(&q))
}

/// Checks that `Q` has exactly one root in `(0, 1/(p-j))`, returning the
/// deflated cubic and the right end.
pub(crate) fn unique_root_window(params: &SpaceParams) -> Result<(Vec<Rat>, Rat)> {
    if params.j() < 1 {
        return Err(Error::Param("Q is defined for j >= 1".into()));
    }
    if (params.d(), params.n(), params.j()) == (2, 2, 1) {
        return Err(Error::DegenerateCase(
            "(d=2, n=2, j=1): Q = -2λ² has no sign change; P peaks at λ = 0".into(),
        ));
    }
    if params.free() <= 0 {
        return Err(Error::Param(format!("{params}: needs p - j > 0")));
    }
    let q = deflated_q(params)?;
    let right = Rat::new(1.into(), params.free().into());
    let (s0, s1) = (sign(&poly::eval(&q, &Rat::zero())), sign(&poly::eval(&q, &right)));
    if s0 == 0 || s1 == 0 || s0 == s1 {
        return Err(Error::NoSignChange(format!(
            "{params}: Q has signs ({s0}, {s1}) at 0+ and 1/(p-j)"
        )));
    }
    let count = poly::count_roots(&q, &Rat::zero(), &right);
    if count != 1 {
        return Err(Error::NoSignChange(format!(
            "{params}: expected one root of Q in (0, 1/(p-j)), found {count}"
        )));
    }
    Ok((q, right))
}

/// Bisects the unique root of `Q` in `(0, 1/(p-j))` down to `width`, using
/// exact rational midpoints and exact signs.
pub fn isolate_q_root(params: &SpaceParams, width: &Rat) -> Result<RootBracket> {
    if !width.is_positive() {
        return Err(Error::Param("bracket width must be positive".into()));
    }
    let (q, right) = unique_root_window(params)?;
    let (mut lo, mut hi) = (Rat::zero(), right);
    let s_lo = sign(&poly::eval(&q, &lo));
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / int(2);
        let s = sign(&poly::eval(&q, &mid));
        if s == 0 {
            return Ok(RootBracket {
                params: *params,
                interval: Interval::point(mid),
                sign_change: (0, 0),
            });
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RootBracket {
        params: *params,
        interval: Interval::new(lo, hi)?,
        sign_change: (s_lo, -s_lo),
    })
}

/// Enclosure of the closed-form maximizing root for `n = 2, j = 1`:
/// `2(d-2) / (3 + d(3d-7) + √(-7 + d(22 + d(-17 + d(2+d)))))`.
pub fn appb1_root_enclosure(d: u32, prec: u32) -> Result<Interval> {
    check_appb1(d)?;
    let d = i64::from(d);
    let disc = -7 + d * (22 + d * (-17 + d * (2 + d)));
    let root = iv_sqrt(&Interval::point(int(disc)), prec + 8)?;
    let den = root.add(&Interval::point(int(3 + d * (3 * d - 7))));
    Interval::point(int(2 * (d - 2))).div(&den)
}

pub fn appb1_root(d: u32, mode: Mode) -> Result<Scalar> {
    check_appb1(d)?;
    Ok(match mode {
        Mode::Float => {
            let x = f64::from(d);
            let disc = -7.0 + x * (22.0 + x * (-17.0 + x * (2.0 + x)));
            Scalar::Float(2.0 * (x - 2.0) / (3.0 + x * (3.0 * x - 7.0) + disc.sqrt()))
        }
        Mode::Certified { prec } => Scalar::Certified(appb1_root_enclosure(d, prec)?),
    })
}

fn check_appb1(d: u32) -> Result<()> {
    match d {
        4 | 8 => Ok(()),
        2 => Err(Error::Domain(
            "d = 2 is degenerate: the root formula collapses to λ = 0".into(),
        )),
        _ => Err(Error::Param(format!("the closed-form root needs d in {{4, 8}} (got {d})"))),
    }
}

/// `Q` evaluated on an interval.
pub fn eval_q_interval(params: &SpaceParams, x: &Interval) -> Result<Interval> {
    Ok(poly::eval_interval(&build_q(params)?.ascending(), x))
}
