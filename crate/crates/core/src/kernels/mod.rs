//! Closed-form bound functions.
//!
//! All kernels build an [`ExactReal`](crate::ExactReal) first and only then
//! convert to a [`Scalar`](crate::Scalar), so float and certified modes
//! share one formula.

mod bounds;
mod objective;
mod sequence;

pub use bounds::{
    bcg_bound, exceptional_constant, general_formula, jacobian_bound, BoundFormula,
    BoundReport, LtOne, EXCEPTIONAL_ROWS,
};
pub use objective::{
    build_q, eval_p2, eval_p_reduced, eval_q, objective_f, objective_f64, objective_exact,
    p2_exact, p_reduced_exact, CubicPoly,
};
pub use sequence::{seq_c, seq_c_exact, seq_c_limit};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// The discrete data `(d, n, j)` with `p = dn - j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SpaceParams {
    d: u32,
    n: u32,
    j: u32,
    p: u32,
}

impl SpaceParams {
    pub fn new(d: u32, n: u32, j: u32) -> Result<Self> {
        if ![1, 2, 4, 8].contains(&d) {
            return Err(Error::Param(format!("d must be one of 1, 2, 4, 8 (got {d})")));
        }
        if n < 2 {
            return Err(Error::Param(format!("n must be at least 2 (got {n})")));
        }
        let dn = d * n;
        if j >= dn {
            return Err(Error::Param(format!(
                "j must be below dn = {dn} so that p = dn - j >= 1 (got {j})"
            )));
        }
        Ok(Self { d, n, j, p: dn - j })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dn(&self) -> u32 {
        self.d * self.n
    }

    /// `p - j`, the multiplicity of the free eigenvalue `λ`; negative when
    /// `2j > dn`.
    pub fn free(&self) -> i64 {
        i64::from(self.p) - i64::from(self.j)
    }

    /// The range `j <= min(dn - 3, d)` in which Jacobian bounds exist.
    pub fn check_jacobian_range(&self) -> Result<()> {
        let cap = (i64::from(self.dn()) - 3).min(i64::from(self.d));
        if i64::from(self.j) > cap {
            return Err(Error::Param(format!(
                "{self}: j must satisfy j <= min(dn - 3, d) = {cap}"
            )));
        }
        Ok(())
    }

    /// `n = 2` cases whose bound comes from the exceptional table.
    pub fn is_exceptional(&self) -> bool {
        self.n == 2
            && ((self.j == 1 && matches!(self.d, 2 | 4 | 8)) || (self.d == 8 && matches!(self.j, 2 | 3)))
    }

    /// Hypotheses under which the maximum of `P` is controlled:
    /// `d in {2, 4, 8}`, `1 <= j <= min(d, dn - 3)`, and `j <= 3` when `d = 8`.
    pub fn satisfies_max_hypothesis(&self) -> bool {
        matches!(self.d, 2 | 4 | 8)
            && self.j >= 1
            && self.check_jacobian_range().is_ok()
            && (self.d != 8 || self.j <= 3)
    }
}

impl fmt::Display for SpaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, n={}, j={})", self.d, self.n, self.j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validate() {
        let s = SpaceParams::new(4, 2, 1).unwrap();
        assert_eq!((s.p(), s.free()), (7, 6));
        assert!(SpaceParams::new(3, 2, 1).is_err());
        assert!(SpaceParams::new(4, 1, 1).is_err());
        assert!(SpaceParams::new(1, 2, 2).is_err());
        assert_eq!(SpaceParams::new(8, 2, 9).unwrap().free(), -2);
    }

    #[test]
    fn jacobian_range() {
        assert!(SpaceParams::new(4, 2, 4).unwrap().check_jacobian_range().is_ok());
        assert!(SpaceParams::new(4, 2, 5).unwrap().check_jacobian_range().is_err());
        assert!(SpaceParams::new(2, 2, 2).unwrap().check_jacobian_range().is_err());
        assert!(SpaceParams::new(1, 4, 1).unwrap().check_jacobian_range().is_ok());
    }

    #[test]
    fn exceptional_membership() {
        let ex = |d, n, j| SpaceParams::new(d, n, j).unwrap().is_exceptional();
        assert!(ex(2, 2, 1) && ex(4, 2, 1) && ex(8, 2, 1) && ex(8, 2, 2) && ex(8, 2, 3));
        assert!(!ex(4, 2, 2) && !ex(8, 2, 4) && !ex(4, 3, 1));
    }
}
