//! Critical-exponent gap, homology-vanishing decisions and critical-exponent
//! lower bounds.

mod critexp;

pub use critexp::{
    critical_exponent_exact, critical_exponent_lower_bound, epsilon_threshold,
    epsilon_threshold_with_cap, kapovich_bound, HomDimQuery, EPSILON_SEARCH_CAP,
};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kernels::{jacobian_bound, BoundReport, LtOne, SpaceParams};
use crate::numerics::{int, Mode, Rat};

/// The critical-exponent gap for quaternionic and octonionic groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaBound {
    pub d: u32,
    pub n: u32,
    pub is_lattice: bool,
    /// Exact value for lattices, upper bound otherwise.
    pub delta_bound: Rat,
}

pub fn corlette_delta_bound(d: u32, n: u32, is_lattice: bool) -> Result<DeltaBound> {
    let delta = match d {
        1 | 2 => return Err(Error::UnsupportedField(d)),
        4 if n >= 2 => {
            let n4 = 4 * i64::from(n);
            if is_lattice { n4 + 2 } else { n4 }
        }
        8 if n == 2 => {
            if is_lattice { 22 } else { 16 }
        }
        4 => return Err(Error::Param(format!("n must be at least 2 (got {n})"))),
        8 => return Err(Error::Param(format!("the Cayley plane has n = 2 (got {n})"))),
        _ => return Err(Error::Param(format!("d must be one of 1, 2, 4, 8 (got {d})"))),
    };
    Ok(DeltaBound { d, n, is_lattice, delta_bound: int(delta) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VanishingReport {
    pub d: u32,
    pub n: u32,
    pub delta_used: Rat,
    /// `(degree, bound)` in increasing degree.
    pub per_degree: Vec<(u32, BoundReport)>,
    pub vanishing_degrees: BTreeSet<u32>,
}

/// Evaluates the Jacobian bound in every degree `dn - j` where one exists,
/// with `δ` at the non-lattice gap bound, and collects the degrees whose
/// bound is certified below 1.
pub fn vanishing_degrees(d: u32, n: u32, mode: Mode) -> Result<VanishingReport> {
    let delta = corlette_delta_bound(d, n, false)?.delta_bound;
    let mut per_degree = Vec::new();
    for j in 1..=d.min(d * n - 3) {
        let params = SpaceParams::new(d, n, j)?;
        match jacobian_bound(&params, &delta, mode) {
            Ok(report) => per_degree.push((params.p(), report)),
            Err(Error::UnsupportedCase { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    per_degree.sort_by_key(|(p, _)| *p);
    let vanishing_degrees = per_degree
        .iter()
        .filter(|(_, r)| r.certified_lt_one == LtOne::Yes)
        .map(|(p, _)| *p)
        .collect();
    Ok(VanishingReport { d, n, delta_used: delta, per_degree, vanishing_degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{seq_c_exact, BoundFormula};

    #[test]
    fn gap_values() {
        assert_eq!(corlette_delta_bound(4, 2, false).unwrap().delta_bound, int(8));
        assert_eq!(corlette_delta_bound(4, 2, true).unwrap().delta_bound, int(10));
        assert_eq!(corlette_delta_bound(8, 2, false).unwrap().delta_bound, int(16));
        assert_eq!(corlette_delta_bound(8, 2, true).unwrap().delta_bound, int(22));
        assert_eq!(corlette_delta_bound(2, 3, false), Err(Error::UnsupportedField(2)));
        assert!(corlette_delta_bound(8, 3, false).is_err());
        assert!(corlette_delta_bound(4, 1, false).is_err());
        assert!(corlette_delta_bound(3, 2, false).is_err());
    }

    #[test]
    fn octonionic_plane() {
        let r = vanishing_degrees(8, 2, Mode::certified()).unwrap();
        assert_eq!(r.vanishing_degrees, BTreeSet::from([13, 14, 15]));
        let expected = [(13, 0.92495456626), (14, 0.24892821847), (15, 0.03197831847)];
        for ((p, rep), (q, v)) in r.per_degree.iter().zip(expected) {
            assert_eq!(*p, q);
            assert!((rep.value.approx() - v).abs() < 5e-11, "degree {p}");
        }
    }

    #[test]
    fn quaternionic_rank_five() {
        let r = vanishing_degrees(4, 5, Mode::certified()).unwrap();
        assert_eq!(r.vanishing_degrees, BTreeSet::from([19]));
        assert_eq!(r.per_degree.len(), 4);
        let top = &r.per_degree.last().unwrap().1;
        assert_eq!(top.formula, BoundFormula::GeneralCFM);
        assert!(top.exact.value_eq(&seq_c_exact(5).unwrap()));
        for (_, rep) in &r.per_degree[..3] {
            assert_eq!(rep.certified_lt_one, LtOne::No);
        }
    }

    #[test]
    fn quaternionic_plane_uses_table() {
        let r = vanishing_degrees(4, 2, Mode::certified()).unwrap();
        assert_eq!(r.vanishing_degrees, BTreeSet::from([7]));
        assert_eq!(r.per_degree.len(), 1);
        assert_eq!(r.per_degree[0].1.formula, BoundFormula::ExceptionalTable);
    }

    #[test]
    fn float_mode_certifies_nothing() {
        assert!(vanishing_degrees(4, 3, Mode::Float).unwrap().vanishing_degrees.is_empty());
    }

    #[test]
    fn out_of_scope_fields() {
        assert!(matches!(vanishing_degrees(2, 3, Mode::Float), Err(Error::UnsupportedField(2))));
        assert!(matches!(vanishing_degrees(1, 3, Mode::Float), Err(Error::UnsupportedField(1))));
        assert!(vanishing_degrees(8, 3, Mode::Float).is_err());
    }
}
