use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::SpaceParams;
use crate::error::{Error, Result};
use crate::numerics::{int, rat_pow, rat_powi, Comparison, ExactReal, Interval, Mode, Rat, Scalar};

/// Which closed form produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundFormula {
    GeneralCFM,
    ExceptionalTable,
    GenericBCG,
}

/// Certification status of `bound < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LtOne {
    Yes,
    No,
    Inconclusive,
}

impl From<Comparison> for LtOne {
    fn from(c: Comparison) -> Self {
        match c {
            Comparison::CertifiedLess => LtOne::Yes,
            Comparison::CertifiedGreaterEq => LtOne::No,
            Comparison::Inconclusive => LtOne::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub params: SpaceParams,
    pub delta: Rat,
    pub value: Scalar,
    /// The bound as an exact real.
    pub exact: ExactReal,
    pub formula: BoundFormula,
    pub certified_lt_one: LtOne,
    /// Precision of the decisive enclosure (certified mode only).
    pub prec_used: Option<u32>,
}

/// One row of the `n = 2` table: the bound is `K · δ^p` where
/// `K = ∏ base^(half_exp / 2)`.
#[derive(Debug, Clone, Copy)]
pub struct ExceptionalRow {
    pub d: u32,
    pub j: u32,
    /// `(base, twice the exponent)`.
    pub factors: &'static [(u64, i32)],
}

pub const EXCEPTIONAL_ROWS: [ExceptionalRow; 5] = [
    // δ^3 / (6√3)
    ExceptionalRow { d: 2, j: 1, factors: &[(6, -2), (3, -1)] },
    // 3^5 √13 √37 δ^7 / (√7 · 2^3 · 7^3 · 11^6)
    ExceptionalRow {
        d: 4,
        j: 1,
        factors: &[(3, 10), (13, 1), (37, 1), (7, -1), (2, -6), (7, -6), (11, -12)],
    },
    // 2^13 7^6 29^7 √17 δ^15 / (√5 · 5^35 · 11^14)
    ExceptionalRow {
        d: 8,
        j: 1,
        factors: &[(2, 26), (7, 12), (29, 14), (17, 1), (5, -1), (5, -70), (11, -28)],
    },
    // 3^6 5^13 δ^14 / (2^29 7^7 17^12)
    ExceptionalRow { d: 8, j: 2, factors: &[(3, 12), (5, 26), (2, -58), (7, -14), (17, -24)] },
    // 6√6 · 5^12 7^5 δ^13 / (√13 · 13^6 · 167^10)
    ExceptionalRow {
        d: 8,
        j: 3,
        factors: &[(6, 2), (6, 1), (5, 24), (7, 10), (13, -1), (13, -12), (167, -20)],
    },
];

/// The constant `K` of the exceptional row for `(d, j)`, if there is one.
pub fn exceptional_constant(d: u32, j: u32) -> Option<ExactReal> {
    let row = EXCEPTIONAL_ROWS.iter().find(|r| r.d == d && r.j == j)?;
    let mut coeff = Rat::one();
    let mut radicand = Rat::one();
    for &(base, twice) in row.factors {
        let b = int(base as i64);
        coeff *= rat_powi(&b, i64::from(twice.div_euclid(2)));
        if twice.rem_euclid(2) == 1 {
            radicand *= &b;
        }
    }
    Some(ExactReal::surd(coeff, radicand).expect("positive radicand"))
}

/// `2^(j/2) δ^p / ((p-2)^j (p+d-2)^(dn-2j))` without range checks, for
/// witnesses outside the theorem's hypotheses.
pub fn general_formula(params: &SpaceParams, delta: &Rat) -> Result<ExactReal> {
    check_delta(delta)?;
    let (d, j, p) = (i64::from(params.d()), i64::from(params.j()), i64::from(params.p()));
    if p <= 2 {
        return Err(Error::Param(format!("{params}: the general formula needs p > 2")));
    }
    let coeff = rat_powi(delta, p) / (rat_powi(&int(p - 2), j) * rat_powi(&int(p + d - 2), p - j));
    ExactReal::surd(coeff, rat_powi(&int(2), j))
}

/// The Jacobian bound at degree `p = dn - j` for critical exponent `δ`.
pub fn jacobian_bound(params: &SpaceParams, delta: &Rat, mode: Mode) -> Result<BoundReport> {
    check_delta(delta)?;
    params.check_jacobian_range()?;
    let (exact, formula) = if params.n() == 2 {
        let k = exceptional_constant(params.d(), params.j()).ok_or(Error::UnsupportedCase {
            d: params.d(),
            n: params.n(),
            j: params.j(),
        })?;
        (k.mul_rat(&rat_pow(delta, params.p())), BoundFormula::ExceptionalTable)
    } else {
        (general_formula(params, delta)?, BoundFormula::GeneralCFM)
    };
    let (value, certified_lt_one, prec_used) = certify_lt_one(&exact, mode)?;
    Ok(BoundReport {
        params: *params,
        delta: delta.clone(),
        value,
        exact,
        formula,
        certified_lt_one,
        prec_used,
    })
}

/// Float mode reports `Inconclusive`; certified mode refines until decided.
pub(crate) fn certify_lt_one(x: &ExactReal, mode: Mode) -> Result<(Scalar, LtOne, Option<u32>)> {
    Ok(match mode {
        Mode::Float => (Scalar::Float(x.to_f64()), LtOne::Inconclusive, None),
        Mode::Certified { prec } => {
            let (c, iv, used): (Comparison, Interval, u32) = x.compare(&Rat::one(), prec)?;
            (Scalar::Certified(iv), c.into(), Some(used))
        }
    })
}

/// The generic bound `(δ / (p-1))^p`.
pub fn bcg_bound(params: &SpaceParams, delta: &Rat, mode: Mode) -> Result<Scalar> {
    check_delta(delta)?;
    let p = params.p();
    if p <= 1 {
        return Err(Error::Param(format!("{params}: the generic bound needs dn - j - 1 > 0")));
    }
    let v = rat_pow(&(delta / int(i64::from(p) - 1)), p);
    ExactReal::rational(v).to_scalar(mode)
}

fn check_delta(delta: &Rat) -> Result<()> {
    if delta.is_zero() || delta.is_negative() {
        return Err(Error::Param(format!("δ must be positive (got {delta})")));
    }
    Ok(())
}
