use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{poly, roots::unique_root_window};
use crate::error::{Error, Result};
use crate::kernels::{p2_exact, SpaceParams};
use crate::numerics::{int, rat, ExactReal, Interval, Mode, Rat};

/// How the maximum of `P` was controlled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MaxMethod {
    /// `P(1/p, 2/p)` from the sign window of `Q`.
    EndpointOverestimate,
    /// `P` at the ends of an exact root bracket.
    RootBracketing,
    /// The maximum sits at `λ = 0` and equals `P(0)`.
    BoundaryMaximum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxCertificate {
    pub params: SpaceParams,
    /// Contains the maximizing `λ`.
    pub arg_bracket: Interval,
    /// Contains the matching `σ = (1 - (p-j)λ)/j`.
    pub sigma_bracket: Interval,
    /// The over-estimate of `max P`, exactly.
    pub value: ExactReal,
    /// Enclosure of `value`.
    pub value_bound: Interval,
    pub method: MaxMethod,
}

/// Published root brackets for the exceptional cases with a sign change.
pub fn exceptional_bracket(params: &SpaceParams) -> Option<(Rat, Rat)> {
    if params.n() != 2 {
        return None;
    }
    Some(match (params.d(), params.j()) {
        (4, 1) => (rat(4, 37), rat(1, 9)),
        (8, 1) => (rat(1, 17), rat(12, 203)),
        (8, 2) => (rat(1, 20), rat(3, 50)),
        (8, 3) => (rat(1, 20), rat(7, 125)),
        _ => return None,
    })
}

fn sigma_of(params: &SpaceParams, lambda: &Rat) -> Rat {
    (Rat::one() - int(params.free()) * lambda) / int(i64::from(params.j()))
}

/// Certified over-estimate of `max P(λ)` on `[0, 1/(p-j)]`.
///
/// `P` is increasing where `Q > 0` and decreasing where `Q < 0`, and `P(λ, σ)`
/// is increasing in both arguments on the feasible range, so bounding `λ`
/// above and `σ` above at the maximizer bounds the maximum.
pub fn max_p_certified(params: &SpaceParams, mode: Mode) -> Result<MaxCertificate> {
    if !params.satisfies_max_hypothesis() {
        return Err(Error::Param(format!(
            "{params}: needs d in {{2, 4, 8}}, 1 <= j <= min(d, dn - 3), j <= 3 for d = 8"
        )));
    }
    let prec = mode.prec();
    if (params.d(), params.n(), params.j()) == (2, 2, 1) {
        return boundary_case(params, prec);
    }
    let (q, _) = unique_root_window(params)?;
    let (lo, hi, method) = match exceptional_bracket(params) {
        Some((lo, hi)) => (lo, hi, MaxMethod::RootBracketing),
        None => {
            let p = int(i64::from(params.p()));
            let lower = (int(2) / &p - Rat::one() / int(params.free())).max(Rat::zero());
            (lower, Rat::one() / p, MaxMethod::EndpointOverestimate)
        }
    };
    let q_lo = poly::eval(&q, &lo);
    let q_hi = poly::eval(&q, &hi);
    if q_lo.is_negative() || (q_lo.is_zero() && lo.is_zero()) || !q_hi.is_negative() {
        return Err(Error::NoSignChange(format!(
            "{params}: Q does not change sign on [{lo}, {hi}]"
        )));
    }
    let (s_hi, s_lo) = (sigma_of(params, &lo), sigma_of(params, &hi));
    let sigma_cap = match method {
        MaxMethod::EndpointOverestimate => rat(2, i64::from(params.p())),
        _ => s_hi.clone(),
    };
    let value = p2_exact(params, &hi, &sigma_cap)?;
    Ok(MaxCertificate {
        params: *params,
        arg_bracket: Interval::new(lo, hi)?,
        sigma_bracket: Interval::new(s_lo, s_hi)?,
        value_bound: value.enclose(prec)?,
        value,
        method,
    })
}

/// `(2, 2, 1)`: `Q = -2λ²` so `P` decreases from `P(0) = 1/2`.
fn boundary_case(params: &SpaceParams, prec: u32) -> Result<MaxCertificate> {
    let q = poly::trim(crate::kernels::build_q(params)?.ascending());
    debug_assert_eq!(q, vec![Rat::zero(), Rat::zero(), int(-2)]);
    let value = ExactReal::rational(rat(1, 2));
    Ok(MaxCertificate {
        params: *params,
        arg_bracket: Interval::point(Rat::zero()),
        sigma_bracket: Interval::point(Rat::one()),
        value_bound: value.enclose(prec)?,
        value,
        method: MaxMethod::BoundaryMaximum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{p_reduced_exact, general_formula};
    use crate::numerics::rat_pow;

    fn sp(d: u32, n: u32, j: u32) -> SpaceParams {
        SpaceParams::new(d, n, j).unwrap()
    }

    #[test]
    fn boundary_case_is_one_half() {
        let c = max_p_certified(&sp(2, 2, 1), Mode::certified()).unwrap();
        assert_eq!(c.method, MaxMethod::BoundaryMaximum);
        assert_eq!(c.value, ExactReal::rational(rat(1, 2)));
    }

    #[test]
    fn octonionic_codimension_three() {
        let c = max_p_certified(&sp(8, 2, 3), Mode::certified()).unwrap();
        let coeff = int(6) * rat_pow(&int(5), 12) * rat_pow(&int(7), 5) / rat_pow(&int(167), 10);
        assert!(c.value.value_eq(&ExactReal::surd(coeff, int(6)).unwrap()));
        assert_eq!(c.method, MaxMethod::RootBracketing);
        assert_eq!(c.sigma_bracket.hi(), &rat(1, 6));
    }

    #[test]
    fn general_case_matches_closed_form() {
        let s = sp(4, 3, 1);
        let c = max_p_certified(&s, Mode::certified()).unwrap();
        assert_eq!(c.method, MaxMethod::EndpointOverestimate);
        let coeff = rat_pow(&int(11), 5) / (int(9) * rat_pow(&int(13), 10));
        assert!(c.value.value_eq(&ExactReal::surd(coeff, int(22)).unwrap()));
        // Times δ^p / p^(p/2) this is the Jacobian bound.
        let delta = int(12);
        let scaled = c.value.mul(&ExactReal::surd(rat_pow(&delta, 11), Rat::one() / rat_pow(&int(11), 11)).unwrap());
        assert!(scaled.value_eq(&general_formula(&s, &delta).unwrap()));
    }

    #[test]
    fn dense_sample_stays_below() {
        for (d, n, j) in [(4, 3, 1), (4, 2, 1), (8, 2, 2), (2, 5, 2), (4, 4, 3)] {
            let s = sp(d, n, j);
            let c = max_p_certified(&s, Mode::certified()).unwrap();
            let hi = c.value_bound.hi().clone();
            let steps = 400;
            for t in 0..=steps {
                let l = Rat::new(t.into(), (steps * s.free()).into());
                if let Ok(v) = p_reduced_exact(&s, &l) {
                    let sq = v.coeff() * v.coeff() * v.radicand();
                    assert!(v.index() <= 2 && sq <= &hi * &hi, "{s} at λ = {l}");
                }
            }
        }
    }

    #[test]
    fn rejects_outside_hypothesis() {
        assert!(max_p_certified(&sp(1, 4, 1), Mode::Float).is_err());
        assert!(max_p_certified(&sp(8, 3, 4), Mode::Float).is_err());
        assert!(max_p_certified(&sp(4, 3, 0), Mode::Float).is_err());
    }
}
