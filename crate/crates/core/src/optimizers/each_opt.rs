use num_traits::{One, Signed};

use super::lattice::{lattice_size, scan, MAX_LATTICE_POINTS};
use crate::error::{Error, Result};
use crate::numerics::compare_refining;
use crate::numerics::{int, iv_sqrt, rat, Comparison, Interval, Mode, Rat, Scalar};

/// `a + b√2` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: Rat,
    pub b: Rat,
}

impl QuadSurd {
    pub fn enclose(&self, prec: u32) -> Result<Interval> {
        let boost = prec + 4 + crate::numerics::log2_estimate(&(self.b.abs() + Rat::one())).max(0) as u32;
        let r2 = iv_sqrt(&Interval::point(int(2)), boost)?;
        Ok(r2.scale(&self.b).add(&Interval::point(self.a.clone())))
    }

    pub fn to_f64(&self) -> f64 {
        crate::numerics::rat_to_f64(&self.a) + crate::numerics::rat_to_f64(&self.b) * std::f64::consts::SQRT_2
    }

    fn to_scalar(&self, mode: Mode) -> Result<Scalar> {
        Ok(match mode {
            Mode::Float => Scalar::Float(self.to_f64()),
            Mode::Certified { prec } => Scalar::Certified(self.enclose(prec)?),
        })
    }

    /// Exact `x <= self` for rational `x`; never inconclusive since `b != 0`
    /// makes `self` irrational.
    fn is_at_least(&self, x: &Rat) -> Result<bool> {
        let (c, _, prec) = compare_refining(|p| self.enclose(p), x, 64)?;
        match c {
            Comparison::CertifiedGreaterEq => Ok(true),
            Comparison::CertifiedLess => Ok(false),
            Comparison::Inconclusive => Err(Error::Inconclusive { prec }),
        }
    }
}

/// The σ-threshold of the lemma for each `d`.
pub fn each_opt_threshold(d: u32) -> Result<QuadSurd> {
    let (a, b) = match d {
        1 => (int(-2), int(2)),
        2 => (int(0), rat(1, 2)),
        4 => (rat(1, 7), rat(2, 7)),
        8 => (rat(3, 23), rat(4, 23)),
        _ => return Err(Error::Param(format!("d must be one of 1, 2, 4, 8 (got {d})"))),
    };
    Ok(QuadSurd { a, b })
}

/// Smallest `k` for which the lemma holds for every `σ`.
pub fn each_opt_k_min(d: u32) -> u32 {
    match d {
        1 => 3,
        8 => 6,
        _ => 4,
    }
}

fn threshold_text(d: u32) -> &'static str {
    match d {
        1 => "2*sqrt(2)-2",
        2 => "1/sqrt(2)",
        4 => "(1+2*sqrt(2))/7",
        _ => "(3+4*sqrt(2))/23",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoints {
    pub c0: Rat,
    /// `σ²(d²+4d-4) - 4σ(d-2) - 4`.
    pub discriminant: Rat,
    /// The symmetric pair exists and differs from `c0`.
    pub real: bool,
    pub c_minus: Option<Scalar>,
    pub c_plus: Option<Scalar>,
    /// `2(√2 d + d - 2) / (d(d+4) - 4)`.
    pub reality_threshold: Scalar,
    /// `real` agrees with `σ > reality_threshold`.
    pub threshold_consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EachOptGrid {
    pub resolution: u32,
    pub argmax: Vec<u32>,
    /// The maximizer `σ c / resolution`.
    pub point: Vec<Rat>,
    pub value_f64: f64,
    pub at_equal_point: bool,
    /// Every coordinate within one lattice cell of `σ/k`.
    pub within_cell: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EachOptReport {
    pub d: u32,
    pub k: u32,
    pub sigma: Rat,
    pub threshold: Scalar,
    pub threshold_form: &'static str,
    pub k_min: u32,
    pub hypothesis: bool,
    pub critical_points: Option<CriticalPoints>,
    pub grid: Option<EachOptGrid>,
}

impl EachOptReport {
    /// The conclusion holds on the grid whenever the hypothesis does.
    pub fn grid_consistent(&self) -> Option<bool> {
        self.grid.as_ref().map(|g| !self.hypothesis || g.within_cell)
    }
}

/// Threshold, hypothesis, critical-point structure and an optional grid
/// check for maximizing `√(x_1⋯x_k) / ∏ (1 - x_i + (d-1) x_{k+1-i})` under
/// `Σ x_i <= σ`.
pub fn each_opt_structure(d: u32, k: u32, sigma: &Rat, grid: Option<u32>, mode: Mode) -> Result<EachOptReport> {
    let threshold = each_opt_threshold(d)?;
    if k < 2 {
        return Err(Error::Param(format!("k must be at least 2 (got {k})")));
    }
    if !sigma.is_positive() || *sigma > Rat::one() {
        return Err(Error::Param(format!("σ must lie in (0, 1] (got {sigma})")));
    }
    if let Some(g) = grid {
        if k > 6 || g > 40 || g == 0 {
            return Err(Error::BudgetExceeded(format!(
                "grid check needs k <= 6 and 1 <= resolution <= 40 (got k = {k}, resolution = {g})"
            )));
        }
    }
    let k_min = each_opt_k_min(d);
    let hypothesis = k >= k_min || threshold.is_at_least(sigma)?;
    let critical_points = if d >= 2 { Some(critical_points(d, sigma, mode)?) } else { None };
    let grid = grid.map(|g| grid_check(d, k, sigma, g)).transpose()?;
    Ok(EachOptReport {
        d,
        k,
        sigma: sigma.clone(),
        threshold: threshold.to_scalar(mode)?,
        threshold_form: threshold_text(d),
        k_min,
        hypothesis,
        critical_points,
        grid,
    })
}

fn critical_points(d: u32, sigma: &Rat, mode: Mode) -> Result<CriticalPoints> {
    let di = i64::from(d);
    let m = di * di + 4 * di - 4;
    let disc = sigma * sigma * int(m) - int(4 * (di - 2)) * sigma - int(4);
    let c0 = sigma / int(2);
    let real = disc.is_positive();
    let reality = QuadSurd { a: rat(2 * (di - 2), m), b: rat(2 * di, m) };
    let threshold_consistent = real == !reality.is_at_least(sigma)?;
    let (c_minus, c_plus) = if disc.is_negative() {
        (None, None)
    } else {
        let half_width = match mode {
            Mode::Float => Scalar::Float(crate::numerics::rat_to_f64(&disc).sqrt() / (2.0 * f64::from(d))),
            Mode::Certified { prec } => Scalar::Certified(
                iv_sqrt(&Interval::point(disc.clone()), prec)?.scale(&rat(1, 2 * di)),
            ),
        };
        let shift = |sign: i64| match &half_width {
            Scalar::Float(w) => Scalar::Float(crate::numerics::rat_to_f64(&c0) + sign as f64 * w),
            Scalar::Certified(w) => Scalar::Certified(w.scale(&int(sign)).add(&Interval::point(c0.clone()))),
        };
        (Some(shift(-1)), Some(shift(1)))
    };
    Ok(CriticalPoints {
        c0,
        discriminant: disc,
        real,
        c_minus,
        c_plus,
        reality_threshold: reality.to_scalar(mode)?,
        threshold_consistent,
    })
}

fn grid_check(d: u32, k: u32, sigma: &Rat, g: u32) -> Result<EachOptGrid> {
    let points = lattice_size(k, g);
    if points > MAX_LATTICE_POINTS {
        return Err(Error::BudgetExceeded(format!("{points} lattice points")));
    }
    let ku = k as usize;
    let s = crate::numerics::rat_to_f64(sigma) / f64::from(g);
    let dm1 = f64::from(d) - 1.0;
    let best = scan(ku, g, |c| {
        let mut num = 1.0;
        let mut den = 1.0;
        for i in 0..ku {
            let xi = s * f64::from(c[i]);
            let factor = 1.0 - xi + dm1 * s * f64::from(c[ku - 1 - i]);
            if factor.abs() < 1e-9 {
                return None;
            }
            num *= xi;
            den *= factor * factor;
        }
        Some(num / den)
    })
    .ok_or_else(|| Error::Domain("every lattice point is a pole".into()))?;
    let at_equal_point = best.counts.iter().all(|&c| c * k == g);
    let within_cell = best
        .counts
        .iter()
        .all(|&c| (i64::from(c) * i64::from(k) - i64::from(g)).abs() <= i64::from(k));
    let point = best
        .counts
        .iter()
        .map(|&c| sigma * Rat::new(c.into(), g.into()))
        .collect();
    Ok(EachOptGrid {
        resolution: g,
        argmax: best.counts,
        point,
        value_f64: best.value,
        at_equal_point,
        within_cell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn thresholds() {
        for (d, v) in [(1, 0.8284), (2, 0.7071), (4, 0.5469), (8, 0.3764)] {
            let t = each_opt_threshold(d).unwrap();
            assert!((t.to_f64() - v).abs() < 1e-4, "d = {d}");
            let iv = t.enclose(100).unwrap();
            assert!(iv.width() < rat(1, 1 << 60));
        }
        assert!(each_opt_threshold(3).is_err());
    }

    #[test]
    fn hypothesis_is_a_disjunction() {
        let r = each_opt_structure(4, 2, &rat(1, 2), None, Mode::Float).unwrap();
        assert!(r.hypothesis);
        let r = each_opt_structure(4, 2, &rat(3, 5), None, Mode::Float).unwrap();
        assert!(!r.hypothesis);
        let r = each_opt_structure(4, 4, &rat(3, 5), None, Mode::Float).unwrap();
        assert!(r.hypothesis);
        let r = each_opt_structure(1, 2, &rat(4, 5), None, Mode::Float).unwrap();
        assert!(r.hypothesis && r.critical_points.is_none());
    }

    #[test]
    fn grid_peak_at_equal_point() {
        let r = each_opt_structure(2, 4, &rat(1, 2), Some(40), Mode::certified()).unwrap();
        let g = r.grid.as_ref().unwrap();
        assert!(g.at_equal_point);
        assert_eq!(g.point, vec![rat(1, 8); 4]);
        assert_eq!(r.grid_consistent(), Some(true));
    }

    #[test]
    fn critical_pair_appears_past_reality_threshold() {
        for d in [2u32, 4, 8] {
            for t in 1..=40 {
                let sigma = rat(t, 40);
                let r = each_opt_structure(d, 2, &sigma, None, Mode::certified()).unwrap();
                let cp = r.critical_points.unwrap();
                assert!(cp.threshold_consistent, "d = {d}, σ = {sigma}");
                if cp.real {
                    let lo = cp.c_minus.unwrap();
                    let hi = cp.c_plus.unwrap();
                    assert!(lo.approx() < hi.approx());
                    assert!((lo.approx() + hi.approx() - crate::numerics::rat_to_f64(&sigma)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn budgets_and_params() {
        assert!(matches!(each_opt_structure(2, 7, &rat(1, 2), Some(10), Mode::Float), Err(Error::BudgetExceeded(_))));
        assert!(matches!(each_opt_structure(2, 4, &rat(1, 2), Some(41), Mode::Float), Err(Error::BudgetExceeded(_))));
        assert!(each_opt_structure(2, 1, &rat(1, 2), None, Mode::Float).is_err());
        assert!(each_opt_structure(2, 4, &int(0), None, Mode::Float).is_err());
        assert!(each_opt_structure(2, 4, &rat(3, 2), None, Mode::Float).is_err());
        assert!(each_opt_structure(2, 7, &rat(1, 2), None, Mode::Float).is_ok());
    }

    #[test]
    fn pair_is_real_at_full_mass() {
        let r = each_opt_structure(2, 2, &Rat::one(), None, Mode::Float).unwrap();
        let cp = r.critical_points.unwrap();
        // d = 2: 8σ² - 4 at σ = 1 is positive.
        assert!(cp.real && !cp.discriminant.is_zero());
    }
}
