use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numerics::{int, pow_rounded, rat_pow, ExactReal, Interval, Mode, Rat, Scalar, MAX_PREC};

/// Default upper end of the `n_ε` search.
pub const EPSILON_SEARCH_CAP: u32 = 1_000_000;

/// A group of homological dimension `hd` acting on `H^n_K`, `d = dim_R K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomDimQuery {
    pub d: u32,
    pub n: u32,
    pub hd: u32,
}

impl HomDimQuery {
    fn validate(&self) -> Result<()> {
        let Self { d, n, hd } = *self;
        if ![1, 2, 4, 8].contains(&d) {
            return Err(Error::Param(format!("d must be one of 1, 2, 4, 8 (got {d})")));
        }
        if n <= 2 {
            return Err(Error::Param(format!("the lower bound needs n > 2 (got n = {n})")));
        }
        let dn = d * n;
        if hd + d <= dn {
            return Err(Error::Param(format!("the lower bound needs hd > dn - d = {} (got hd = {hd})", dn - d)));
        }
        if hd > dn {
            return Err(Error::Param(format!("hd cannot exceed the dimension dn = {dn} (got {hd})")));
        }
        if hd < 3 {
            return Err(Error::Param(format!("the lower bound needs hd >= 3 (got {hd})")));
        }
        Ok(())
    }
}

/// `((hd-2)/√2)^(dn/hd - 1) · (hd-2+d)^(2 - dn/hd)`, exactly.
///
/// With `j = dn - hd` this is `(hd-2+d) · (c^j)^(1/(2hd))` where
/// `c = (hd-2)² / (2 (hd-2+d)²)`, so only an integer root of a rational is
/// needed.
pub fn critical_exponent_exact(q: &HomDimQuery) -> Result<ExactReal> {
    q.validate()?;
    let (top, j) = top_and_codim(q);
    let c = c_ratio(q);
    ExactReal::new(top, rat_pow(&c, j), 2 * q.hd)
}

pub fn critical_exponent_lower_bound(q: &HomDimQuery, mode: Mode) -> Result<Scalar> {
    critical_exponent_exact(q)?.to_scalar(mode)
}

fn top_and_codim(q: &HomDimQuery) -> (Rat, u32) {
    (int(i64::from(q.hd) - 2 + i64::from(q.d)), q.d * q.n - q.hd)
}

fn c_ratio(q: &HomDimQuery) -> Rat {
    let a = int(i64::from(q.hd) - 2);
    let b = int(i64::from(q.hd) - 2 + i64::from(q.d));
    &a * &a / (int(2) * &b * &b)
}

/// The earlier lower bound `δ >= hd - 1`.
pub fn kapovich_bound(hd: u32) -> Result<Rat> {
    if hd == 0 {
        return Err(Error::Param("hd must be at least 1".into()));
    }
    Ok(int(i64::from(hd) - 1))
}

/// Smallest `n > 2` such that the lower bound is at least `hd - 2 + d - ε`
/// for every admissible `hd` in `(dn - d, dn]`.
pub fn epsilon_threshold(d: u32, epsilon: &Rat) -> Result<u32> {
    epsilon_threshold_with_cap(d, epsilon, EPSILON_SEARCH_CAP)
}

pub fn epsilon_threshold_with_cap(d: u32, epsilon: &Rat, cap: u32) -> Result<u32> {
    if ![2, 4, 8].contains(&d) {
        return Err(Error::Param(format!("d must be one of 2, 4, 8 (got {d})")));
    }
    if !epsilon.is_positive() {
        return Err(Error::Param(format!("ε must be positive (got {epsilon})")));
    }
    let eps = crate::numerics::rat_to_f64(epsilon);
    for n in 3..=cap {
        let queries: Vec<HomDimQuery> = (1..d)
            .map(|j| HomDimQuery { d, n, hd: d * n - j })
            .filter(|q| q.validate().is_ok())
            .collect();
        // Cheap float rejection first; only survivors are certified.
        if queries.iter().any(|q| clearly_fails(q, eps)) {
            continue;
        }
        let mut all = true;
        for q in &queries {
            if !holds(q, epsilon)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(n);
        }
    }
    Err(Error::NotFoundWithinCap { cap })
}

/// `u = (top - ε)/top`, the ratio the bound must reach.
fn target_ratio(q: &HomDimQuery, epsilon: &Rat) -> Rat {
    let (top, _) = top_and_codim(q);
    (&top - epsilon) / &top
}

/// Float test of `j ln c < 2hd ln u` with a relative margin far above
/// rounding error.
fn clearly_fails(q: &HomDimQuery, eps: f64) -> bool {
    let h = f64::from(q.hd);
    let top = h - 2.0 + f64::from(q.d);
    let u = (top - eps) / top;
    if u <= 0.0 {
        return false;
    }
    let ln_c = 2.0 * ((h - 2.0) / top).ln() - std::f64::consts::LN_2;
    let lhs = f64::from(q.d * q.n - q.hd) * ln_c;
    let rhs = 2.0 * h * u.ln();
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    lhs - rhs < -1e-6 * scale
}

/// Decides `(c^j)^(1/(2hd)) >= u`, i.e. `c^j >= u^(2hd)`, with rounded
/// interval powers.
fn holds(q: &HomDimQuery, epsilon: &Rat) -> Result<bool> {
    let u = target_ratio(q, epsilon);
    if !u.is_positive() {
        return Ok(true);
    }
    let (_, j) = top_and_codim(q);
    let cj = rat_pow(&c_ratio(q), j);
    let base = Interval::point(u);
    let mut prec = 64;
    loop {
        let pw = pow_rounded(&base, 2 * u64::from(q.hd), prec)?;
        if pw.hi() <= &cj {
            return Ok(true);
        }
        if pw.lo() > &cj {
            return Ok(false);
        }
        if prec >= MAX_PREC {
            return Err(Error::Inconclusive { prec });
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Comparison};

    fn q(d: u32, n: u32, hd: u32) -> HomDimQuery {
        HomDimQuery { d, n, hd }
    }

    #[test]
    fn exponent_zero_cases() {
        assert_eq!(critical_exponent_exact(&q(4, 3, 12)).unwrap(), ExactReal::rational(int(14)));
        assert_eq!(critical_exponent_exact(&q(8, 3, 24)).unwrap(), ExactReal::rational(int(30)));
    }

    #[test]
    fn beats_kapovich_at_small_rank() {
        let v = critical_exponent_lower_bound(&q(4, 3, 11), Mode::certified()).unwrap();
        let iv = v.interval().unwrap();
        assert!((iv.midpoint_f64() - 12.1827).abs() < 1e-4);
        assert!(iv.lo() > &kapovich_bound(11).unwrap());
    }

    #[test]
    fn matches_direct_float_formula() {
        for (d, n, hd) in [(4, 3, 9), (4, 7, 27), (8, 4, 26), (2, 10, 19), (1, 9, 9)] {
            let dn = f64::from(d * n);
            let h = f64::from(hd);
            let direct = ((h - 2.0) / 2f64.sqrt()).powf(dn / h - 1.0) * (h - 2.0 + f64::from(d)).powf(2.0 - dn / h);
            let v = critical_exponent_lower_bound(&q(d, n, hd), Mode::Float).unwrap().approx();
            assert!((v - direct).abs() < 1e-10 * direct, "{d} {n} {hd}");
        }
    }

    #[test]
    fn large_rank_beats_kapovich() {
        for d in [4u32, 8] {
            let hd = 25 * d - 1;
            let e = critical_exponent_exact(&q(d, 25, hd)).unwrap();
            let (c, iv, _) = e.compare(&kapovich_bound(hd).unwrap(), 128).unwrap();
            assert_eq!(c, Comparison::CertifiedGreaterEq);
            assert!(iv.lo() > &kapovich_bound(hd).unwrap());
        }
    }

    #[test]
    fn preconditions() {
        assert!(critical_exponent_exact(&q(4, 2, 8)).is_err());
        assert!(critical_exponent_exact(&q(4, 3, 8)).is_err());
        assert!(critical_exponent_exact(&q(4, 3, 13)).is_err());
        assert!(critical_exponent_exact(&q(3, 3, 8)).is_err());
        assert_eq!(kapovich_bound(1).unwrap(), int(0));
        assert_eq!(kapovich_bound(16).unwrap(), int(15));
        assert!(kapovich_bound(0).is_err());
    }

    #[test]
    fn epsilon_search_values() {
        assert_eq!(epsilon_threshold(4, &int(2)).unwrap(), 5);
        assert_eq!(epsilon_threshold(2, &int(1)).unwrap(), 3);
        assert_eq!(epsilon_threshold(8, &int(3)).unwrap(), 16);
        assert_eq!(epsilon_threshold(4, &rat(3, 2)).unwrap(), 9);
    }

    #[test]
    fn epsilon_below_the_limit_deficit_is_never_reached() {
        // The deficit tends to j·ln√2 per codimension j, so for d = 4 no n
        // works once ε < 3 ln√2 ≈ 1.04.
        assert_eq!(
            epsilon_threshold(4, &rat(1, 2)),
            Err(Error::NotFoundWithinCap { cap: EPSILON_SEARCH_CAP })
        );
        assert_eq!(
            epsilon_threshold_with_cap(4, &rat(1, 10), 20_000),
            Err(Error::NotFoundWithinCap { cap: 20_000 })
        );
    }

    #[test]
    fn epsilon_threshold_is_monotone() {
        let mut last = 0;
        for k in (11..=40).rev() {
            let n = epsilon_threshold(4, &rat(k, 10)).unwrap();
            assert!(last == 0 || n >= last, "ε = {k}/10");
            last = n;
        }
    }

    #[test]
    fn epsilon_rejects_bad_input() {
        assert!(epsilon_threshold(1, &int(1)).is_err());
        assert!(epsilon_threshold(4, &int(0)).is_err());
    }
}
