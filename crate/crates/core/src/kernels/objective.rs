use num_traits::{One, Signed, Zero};

use super::SpaceParams;
use crate::error::{Error, Result};
use crate::numerics::{int, rat_powi, ExactReal, Mode, Rat, Scalar};

/// `P(λ, σ) = λ^((p-j)/2) σ^(j/2) / ((1 + (d-2)λ)^(p-j) (1-σ)^j)`, exactly.
pub fn p2_exact(params: &SpaceParams, lambda: &Rat, sigma: &Rat) -> Result<ExactReal> {
    if lambda.is_negative() {
        return Err(Error::Domain(format!("λ = {lambda} is negative")));
    }
    if sigma.is_negative() || *sigma >= Rat::one() {
        return Err(Error::Domain(format!("σ = {sigma} is outside [0, 1)")));
    }
    let free = params.free();
    if free < 0 {
        return Err(Error::Domain(format!("{params}: p - j is negative")));
    }
    let j = i64::from(params.j());
    let base = Rat::one() + int(i64::from(params.d()) - 2) * lambda;
    if base.is_zero() {
        return Err(Error::Pole("1 + (d-2)λ vanishes".into()));
    }
    let square = rat_powi(lambda, free) * rat_powi(sigma, j)
        / (rat_powi(&base, 2 * free) * rat_powi(&(Rat::one() - sigma), 2 * j));
    ExactReal::surd(Rat::one(), square)
}

pub fn eval_p2(params: &SpaceParams, lambda: &Rat, sigma: &Rat, mode: Mode) -> Result<Scalar> {
    p2_exact(params, lambda, sigma)?.to_scalar(mode)
}

/// The one-variable objective `P(λ)` obtained by substituting
/// `σ = (1 - (p-j)λ)/j`.
///
/// For `j = 1` the factor `λ^2` is cancelled before evaluation, which makes
/// `P(0)` finite whenever `p - j >= 2`.
pub fn p_reduced_exact(params: &SpaceParams, lambda: &Rat) -> Result<ExactReal> {
    let j = i64::from(params.j());
    if j < 1 {
        return Err(Error::Param("the reduced objective needs j >= 1".into()));
    }
    if lambda.is_negative() || *lambda > Rat::one() {
        return Err(Error::Domain(format!("λ = {lambda} is outside [0, 1]")));
    }
    let free = params.free();
    if free < 0 {
        return Err(Error::Domain(format!("{params}: p - j is negative")));
    }
    let slack = Rat::one() - int(free) * lambda;
    if slack.is_negative() {
        return Err(Error::Domain(format!("λ(p-j) > 1 at λ = {lambda}")));
    }
    let base = Rat::one() + int(i64::from(params.d()) - 2) * lambda;
    if base.is_zero() {
        return Err(Error::Pole("1 + (d-2)λ vanishes".into()));
    }
    let tail = rat_powi(&base, 2 * free);
    let square = if j == 1 {
        if free == 0 || (free < 2 && lambda.is_zero()) {
            return Err(Error::Pole(format!("{params}: σ-denominator vanishes at λ = {lambda}")));
        }
        rat_powi(lambda, free - 2) * slack / (int(free * free) * tail)
    } else {
        let denom = int(j - 1) + lambda * int(free);
        rat_powi(&int(j), j) * rat_powi(lambda, free) * rat_powi(&slack, j)
            / (rat_powi(&denom, 2 * j) * tail)
    };
    ExactReal::surd(Rat::one(), square)
}

pub fn eval_p_reduced(params: &SpaceParams, lambda: &Rat, mode: Mode) -> Result<Scalar> {
    p_reduced_exact(params, lambda)?.to_scalar(mode)
}

/// A cubic with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicPoly {
    pub c3: Rat,
    pub c2: Rat,
    pub c1: Rat,
    pub c0: Rat,
}

impl CubicPoly {
    pub fn eval(&self, x: &Rat) -> Rat {
        ((&self.c3 * x + &self.c2) * x + &self.c1) * x + &self.c0
    }

    /// Coefficients in ascending degree order.
    pub fn ascending(&self) -> Vec<Rat> {
        vec![self.c0.clone(), self.c1.clone(), self.c2.clone(), self.c3.clone()]
    }
}

/// The cubic `Q` whose sign is the sign of `P'(λ)` on `(0, 1/(p-j))`.
pub fn build_q(params: &SpaceParams) -> Result<CubicPoly> {
    if params.j() < 1 {
        return Err(Error::Param("Q is defined for j >= 1".into()));
    }
    let d = i64::from(params.d());
    let j = i64::from(params.j());
    let p = i64::from(params.p());
    Ok(CubicPoly {
        c3: int(p * (d - 2) * (p - j)),
        c2: int(j * (d - 2 - 2 * j * (d - 1)) + p * (d * (j - 2) + j + 4) - p * p),
        c1: int(p * (2 - j) - j * (d + 1) + d - 2),
        c0: int(j - 1),
    })
}

pub fn eval_q(params: &SpaceParams, lambda: &Rat) -> Result<Rat> {
    Ok(build_q(params)?.eval(lambda))
}

/// The squared objective
/// `x_1⋯x_p / (∏_{i>j} (1 - x_i + (d-1) x_{dn+1-i})^2 ∏_{i<=j} (1 - x_i)^2)`.
///
/// `x` has length `p` or `dn`; entries past `p` never enter the formula
/// because the pairing index stays in `j+1..=p`.
pub fn objective_exact(params: &SpaceParams, x: &[Rat]) -> Result<Rat> {
    let (p, j, dn) = (params.p() as usize, params.j() as usize, params.dn() as usize);
    check_len(params, x.len())?;
    if j > p {
        return Err(Error::Param(format!("{params}: objective needs j <= p")));
    }
    if x.iter().any(|v| v.is_negative()) {
        return Err(Error::Domain("objective entries must be nonnegative".into()));
    }
    let num: Rat = x[..p].iter().product();
    let dm1 = int(i64::from(params.d()) - 1);
    let mut den = Rat::one();
    for (i, xi) in x[..p].iter().enumerate() {
        let factor = if i < j {
            Rat::one() - xi
        } else {
            Rat::one() - xi + &dm1 * &x[dn - 1 - i]
        };
        if factor.is_zero() {
            return Err(Error::Pole(format!("denominator factor {} vanishes", i + 1)));
        }
        den *= &factor * &factor;
    }
    Ok(num / den)
}

pub fn objective_f(params: &SpaceParams, x: &[Rat], mode: Mode) -> Result<Scalar> {
    ExactReal::rational(objective_exact(params, x)?).to_scalar(mode)
}

/// Float evaluation for lattice scans; `None` near a pole.
pub fn objective_f64(params: &SpaceParams, x: &[f64]) -> Option<f64> {
    let (p, j, dn) = (params.p() as usize, params.j() as usize, params.dn() as usize);
    let dm1 = f64::from(params.d()) - 1.0;
    let mut num = 1.0;
    let mut den = 1.0;
    for i in 0..p {
        num *= x[i];
        let factor = if i < j { 1.0 - x[i] } else { 1.0 - x[i] + dm1 * x[dn - 1 - i] };
        if factor.abs() < 1e-9 {
            return None;
        }
        den *= factor * factor;
    }
    Some(num / den)
}

fn check_len(params: &SpaceParams, len: usize) -> Result<()> {
    if len == params.p() as usize || len == params.dn() as usize {
        Ok(())
    } else {
        Err(Error::Param(format!(
            "objective expects {} or {} entries, got {len}",
            params.p(),
            params.dn()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_pow};
    use proptest::prelude::*;

    fn sp(d: u32, n: u32, j: u32) -> SpaceParams {
        SpaceParams::new(d, n, j).unwrap()
    }

    #[test]
    fn p2_at_one_over_p() {
        let v = p2_exact(&sp(4, 3, 1), &rat(1, 11), &rat(2, 11)).unwrap();
        let coeff = rat_pow(&int(11), 5) / (int(9) * rat_pow(&int(13), 10));
        assert!(v.value_eq(&ExactReal::surd(coeff, int(22)).unwrap()));
    }

    #[test]
    fn p2_vanishes_at_zero_sigma() {
        assert_eq!(p2_exact(&sp(4, 3, 2), &rat(1, 10), &int(0)).unwrap(), ExactReal::default());
        assert!(p2_exact(&sp(4, 3, 2), &rat(1, 10), &int(1)).is_err());
    }

    #[test]
    fn reduced_quaternion_free_case() {
        // d = 2: 1 + (d-2)λ = 1 and the closed form is sqrt(1 - 2λ)/2.
        let v = p_reduced_exact(&sp(2, 2, 1), &rat(9, 50)).unwrap();
        assert_eq!(v, ExactReal::rational(rat(2, 5)));
        assert_eq!(p_reduced_exact(&sp(2, 2, 1), &int(0)).unwrap(), ExactReal::rational(rat(1, 2)));
    }

    #[test]
    fn reduced_vanishes_at_right_end() {
        for (d, n, j) in [(4, 2, 1), (8, 2, 3), (4, 3, 2), (2, 5, 2)] {
            let s = sp(d, n, j);
            let v = p_reduced_exact(&s, &Rat::new(1.into(), s.free().into())).unwrap();
            assert_eq!(v, ExactReal::default());
        }
        assert!(p_reduced_exact(&sp(4, 2, 1), &rat(1, 5)).is_err());
    }

    #[test]
    fn q_examples() {
        assert_eq!(eval_q(&sp(4, 2, 1), &rat(1, 7)).unwrap(), rat(-6, 49));
        for l in [rat(1, 3), rat(-2, 7), int(5)] {
            assert_eq!(eval_q(&sp(2, 2, 1), &l).unwrap(), int(-2) * &l * &l);
        }
        assert_eq!(eval_q(&sp(8, 2, 3), &int(0)).unwrap(), int(2));
        assert!(build_q(&sp(1, 3, 0)).is_err());
    }

    #[test]
    fn objective_symmetric_point() {
        let third = vec![rat(1, 3); 3];
        assert_eq!(objective_exact(&sp(1, 3, 0), &third).unwrap(), rat(27, 64));
        let mut z = third.clone();
        z[1] = int(0);
        assert_eq!(objective_exact(&sp(1, 3, 0), &z).unwrap(), int(0));
    }

    #[test]
    fn objective_matches_p2_squared_on_shape() {
        let (s, sigma, lambda) = (sp(2, 2, 1), rat(2, 5), rat(3, 10));
        let x = vec![sigma.clone(), lambda.clone(), lambda.clone(), int(0)];
        let p2 = p2_exact(&s, &lambda, &sigma).unwrap();
        assert_eq!(ExactReal::rational(objective_exact(&s, &x).unwrap()), p2.mul(&p2));
        // With d = 2 the paired factors are 1 - λ + λ = 1.
        let f = objective_f64(&s, &[0.4, 0.3, 0.3, 0.0]).unwrap();
        assert!((f - 0.4 * 0.09 / 0.36).abs() < 1e-15);
    }

    #[test]
    fn objective_rejects_bad_input() {
        assert!(objective_exact(&sp(2, 2, 1), &[int(1), int(0), int(0)]).is_err());
        assert!(objective_exact(&sp(2, 2, 1), &[int(1), int(0)]).is_err());
    }

    proptest! {
        #[test]
        fn reduced_agrees_with_two_variable_form(
            (d, n, j) in prop_oneof![
                (Just(2u32), 2u32..8, 1u32..=2),
                (Just(4u32), 2u32..6, 1u32..=4),
                (Just(8u32), 2u32..4, 1u32..=3),
            ],
            t in 1u32..1000,
        ) {
            let s = SpaceParams::new(d, n, j).unwrap();
            prop_assume!(s.free() > 0 && s.check_jacobian_range().is_ok());
            let lambda = Rat::new(t.into(), (1000 * s.free()).into());
            let sigma = (Rat::one() - int(s.free()) * &lambda) / int(i64::from(j));
            prop_assume!(sigma < Rat::one());
            let a = p_reduced_exact(&s, &lambda).unwrap();
            let b = p2_exact(&s, &lambda, &sigma).unwrap();
            prop_assert_eq!(a.mul(&a), b.mul(&b));
        }
    }
}
