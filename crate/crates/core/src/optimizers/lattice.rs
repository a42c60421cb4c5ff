use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{objective_exact, objective_f64, SpaceParams};
use crate::numerics::Rat;

/// Largest lattice the exhaustive scans will visit.
pub const MAX_LATTICE_POINTS: u64 = 400_000_000;

/// Number of points `c ∈ N^k` with `Σ c <= grid`, i.e. `C(grid + k, k)`.
pub fn lattice_size(k: u32, grid: u32) -> u64 {
    let mut acc: u128 = 1;
    for i in 1..=u128::from(k) {
        acc = acc * (u128::from(grid) + i) / i;
    }
    u64::try_from(acc).unwrap_or(u64::MAX)
}

#[derive(Debug, Clone)]
pub(crate) struct Best {
    pub value: f64,
    pub counts: Vec<u32>,
}

impl Best {
    /// Larger value wins; ties go to the lexicographically smaller point, so
    /// the result does not depend on how the scan was split.
    fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                if b.value > a.value || (b.value == a.value && b.counts < a.counts) {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        }
    }
}

/// Exhaustive maximization of `f` over `{c ∈ N^k : Σ c <= grid}`, split over
/// the first coordinate and reduced in a fixed order.
pub(crate) fn scan<F>(k: usize, grid: u32, f: F) -> Option<Best>
where
    F: Fn(&[u32]) -> Option<f64> + Sync,
{
    fn rec<F: Fn(&[u32]) -> Option<f64>>(
        counts: &mut Vec<u32>,
        pos: usize,
        left: u32,
        f: &F,
        best: &mut Option<Best>,
    ) {
        if pos == counts.len() {
            if let Some(v) = f(counts).filter(|v| v.is_finite()) {
                let better = match best {
                    None => true,
                    Some(b) => v > b.value || (v == b.value && counts[..] < b.counts[..]),
                };
                if better {
                    *best = Some(Best { value: v, counts: counts.clone() });
                }
            }
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            rec(counts, pos + 1, left - c, f, best);
        }
        counts[pos] = 0;
    }

    (0..=grid)
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0; k];
            let mut best = None;
            counts[0] = first;
            rec(&mut counts, 1, grid - first, &f, &mut best);
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None, Best::merge)
}

/// Result of the exhaustive scan of the squared objective.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexMax {
    pub params: SpaceParams,
    pub grid: u32,
    /// Lattice coordinates of the maximizer (length `dn`, zeros past `p`).
    pub argmax: Vec<u32>,
    /// The maximizer as exact rationals.
    pub point: Vec<Rat>,
    /// Exact objective value at the maximizer.
    pub value: Rat,
    pub value_f64: f64,
    /// `2j < dn`, the condition under which the maximizer is claimed to be
    /// symmetric.
    pub hypothesis_ok: bool,
    pub points_scanned: u64,
}

impl SimplexMax {
    /// Whether some `(σ, λ)` with `jσ + (p-j)λ = 1` lies within one lattice
    /// cell of the maximizer, coordinatewise.
    pub fn within_cell_of_shape(&self) -> bool {
        let (p, j) = (self.params.p() as usize, self.params.j() as usize);
        let g = i64::from(self.grid);
        // Feasible range, in lattice units, for a common value of a block.
        let block = |s: &[u32]| -> Option<(i64, i64)> {
            if s.is_empty() {
                return None;
            }
            let lo = s.iter().map(|&c| i64::from(c) - 1).max().unwrap_or(0);
            let hi = s.iter().map(|&c| i64::from(c) + 1).min().unwrap_or(0);
            Some((lo, hi))
        };
        let (sig, lam) = (block(&self.argmax[..j]), block(&self.argmax[j..p]));
        let mut total = (0i64, 0i64);
        for (b, mult) in [(sig, j as i64), (lam, (p - j) as i64)] {
            if let Some((lo, hi)) = b {
                if lo > hi {
                    return false;
                }
                total.0 += mult * lo;
                total.1 += mult * hi;
            }
        }
        total.0 <= g && g <= total.1
    }
}

/// Exhaustive maximization of the squared objective over lattice points
/// `x = c / grid` with `Σ x <= 1`. Coordinates past `p` do not enter the
/// objective and are fixed at 0.
pub fn brute_force_simplex_max(params: &SpaceParams, grid: u32) -> Result<SimplexMax> {
    if params.dn() > 8 || grid > 60 {
        return Err(Error::BudgetExceeded(format!(
            "{params} at grid {grid}: needs dn <= 8 and grid <= 60"
        )));
    }
    if grid == 0 {
        return Err(Error::Param("grid must be positive".into()));
    }
    let p = params.p();
    let points = lattice_size(p, grid);
    if points > MAX_LATTICE_POINTS {
        return Err(Error::BudgetExceeded(format!(
            "{params} at grid {grid}: {points} lattice points exceed {MAX_LATTICE_POINTS}"
        )));
    }
    let dn = params.dn() as usize;
    let g = f64::from(grid);
    let best = scan(p as usize, grid, |c| {
        let mut x = [0.0f64; 8];
        for (xi, &ci) in x.iter_mut().zip(c) {
            *xi = f64::from(ci) / g;
        }
        objective_f64(params, &x[..dn])
    })
    .ok_or_else(|| Error::Domain(format!("{params}: every lattice point is a pole")))?;
    let mut argmax = best.counts;
    argmax.resize(dn, 0);
    let point: Vec<Rat> = argmax
        .iter()
        .map(|&c| Rat::new(c.into(), grid.into()))
        .collect();
    let value = objective_exact(params, &point)?;
    Ok(SimplexMax {
        params: *params,
        grid,
        argmax,
        point,
        value,
        value_f64: best.value,
        hypothesis_ok: 2 * params.j() < params.dn(),
        points_scanned: points,
    })
}
