//! Randomized checks of the determinant and eigenvalue inequalities behind
//! the Jacobian estimate. Float only; inequalities carry a `-1e-9` slack.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{rat_to_f64, Rat};

/// Slack allowed on every checked inequality.
pub const SLACK: f64 = 1e-9;
/// Eigenvalues down to this are accepted as zero and clamped.
pub const PSD_TOL: f64 = 1e-10;
/// Largest matrix accepted by `fiedler_check`.
pub const MAX_FIEDLER_SIZE: usize = 12;

const TRACE_TOL: f64 = 1e-12;
const MAX_REJECTIONS: u32 = 10_000;

/// Eigenvalues of a compressed operator against those of the ambient one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPair {
    /// Descending spectrum of the compression (length `p`).
    pub lambdas: Vec<f64>,
    /// Ascending spectrum of the ambient operator (length `nd`).
    pub betas: Vec<f64>,
}

impl SpectrumPair {
    /// `λ_i <= β_{nd-i+1}` for `1 <= i <= p`.
    pub fn interlaces(&self) -> bool {
        let nd = self.betas.len();
        self.lambdas
            .iter()
            .enumerate()
            .all(|(i, l)| *l <= self.betas[nd - 1 - i] + SLACK)
    }

    pub fn in_unit_range(&self) -> bool {
        self.lambdas
            .iter()
            .chain(&self.betas)
            .all(|x| *x >= -PSD_TOL && *x < 1.0)
    }

    pub fn beta_sum(&self) -> f64 {
        self.betas.iter().sum()
    }
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Ascending eigenvalues of a symmetric matrix.
fn ascending_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn random_psd_with(rng: &mut ChaCha8Rng, size: usize, trace: f64, strict: bool) -> Result<DMatrix<f64>> {
    if trace == 0.0 {
        return Ok(DMatrix::zeros(size, size));
    }
    for _ in 0..MAX_REJECTIONS {
        let g = gaussian(rng, size, size);
        let a = &g * g.transpose();
        let t = a.trace();
        if t <= 0.0 {
            continue;
        }
        let m = a * (trace / t);
        let m = (&m + m.transpose()) * 0.5;
        if !strict || ascending_eigenvalues(&m).last().is_some_and(|top| *top < 1.0) {
            return Ok(m);
        }
    }
    Err(Error::Domain(format!(
        "no {size}x{size} sample with eigenvalues below 1 after {MAX_REJECTIONS} draws"
    )))
}

/// Seeded random symmetric PSD matrix with the given trace. With trace 1
/// and size at least 2, every eigenvalue is strictly below 1 (by rejection);
/// the 1×1 case cannot satisfy that and is an error.
pub fn random_psd(size: usize, trace: &Rat, seed: u64) -> Result<DMatrix<f64>> {
    if size == 0 {
        return Err(Error::Param("size must be at least 1".into()));
    }
    let t = rat_to_f64(trace);
    if t < 0.0 {
        return Err(Error::Param(format!("trace must be nonnegative (got {trace})")));
    }
    let strict = t == 1.0;
    if strict && size == 1 {
        return Err(Error::Domain(
            "a 1x1 matrix of trace 1 has eigenvalue 1, not strictly below 1".into(),
        ));
    }
    random_psd_with(&mut ChaCha8Rng::seed_from_u64(seed), size, t, strict)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiedlerReport {
    pub size: usize,
    pub summands: usize,
    /// `det(Σ A_j)`.
    pub det: f64,
    /// `∏_i Σ_j α_{i,j}` over ascending spectra.
    pub product: f64,
    pub margin: f64,
    pub holds: bool,
    /// The input matrices, kept only when the inequality fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<Vec<f64>>>>,
}

/// Checks `det(Σ A_j) >= ∏_i (Σ_j α_{i,j})` where `α_{·,j}` is the ascending
/// spectrum of `A_j`.
pub fn fiedler_check(matrices: &[DMatrix<f64>]) -> Result<FiedlerReport> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::ShapeMismatch("at least one matrix is needed".into()))?;
    let size = first.nrows();
    if size == 0 || size > MAX_FIEDLER_SIZE {
        return Err(Error::ShapeMismatch(format!(
            "size must be in 1..={MAX_FIEDLER_SIZE} (got {size})"
        )));
    }
    let mut sums = vec![0.0; size];
    for (k, m) in matrices.iter().enumerate() {
        if m.nrows() != size || m.ncols() != size {
            return Err(Error::ShapeMismatch(format!(
                "matrix {k} is {}x{}, expected {size}x{size}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asym = (m - m.transpose()).amax();
        if asym > PSD_TOL * m.amax().max(1.0) {
            return Err(Error::NotPsd(format!("matrix {k} is not symmetric (defect {asym:e})")));
        }
        let ev = ascending_eigenvalues(m);
        if ev[0] < -PSD_TOL {
            return Err(Error::NotPsd(format!("matrix {k} has eigenvalue {:e}", ev[0])));
        }
        for (s, e) in sums.iter_mut().zip(ev) {
            *s += e.max(0.0);
        }
    }
    let total = matrices.iter().fold(DMatrix::zeros(size, size), |acc, m| acc + m);
    let det = total.determinant();
    let product: f64 = sums.iter().product();
    let margin = det - product;
    let holds = margin >= -SLACK;
    Ok(FiedlerReport {
        size,
        summands: matrices.len(),
        det,
        product,
        margin,
        holds,
        witness: (!holds).then(|| matrices.iter().map(to_rows).collect()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiedlerSweep {
    pub trials: u64,
    pub passed: u64,
    pub min_margin: f64,
    /// First failing trial, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<(u64, FiedlerReport)>,
}

/// Seeded random Fiedler trials with sizes in `2..=max_size` and 2 to 4
/// trace-1 summands; trial `t` uses seed `seed ^ t`.
pub fn fiedler_trials(trials: u64, seed: u64, max_size: usize) -> Result<FiedlerSweep> {
    if !(2..=MAX_FIEDLER_SIZE).contains(&max_size) {
        return Err(Error::Param(format!("max size must be in 2..={MAX_FIEDLER_SIZE}")));
    }
    if trials == 0 {
        return Err(Error::Param("trials must be positive".into()));
    }
    let reports = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ t);
            let size = rng.random_range(2..=max_size);
            let count = rng.random_range(2..=4);
            let mats = (0..count)
                .map(|_| random_psd_with(&mut rng, size, 1.0, true))
                .collect::<Result<Vec<_>>>()?;
            fiedler_check(&mats)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sweep = FiedlerSweep { trials, passed: 0, min_margin: f64::INFINITY, failure: None };
    for (t, r) in (0u64..).zip(reports) {
        sweep.min_margin = sweep.min_margin.min(r.margin);
        if r.holds {
            sweep.passed += 1;
        } else if sweep.failure.is_none() {
            sweep.failure = Some((t, r));
        }
    }
    Ok(sweep)
}

/// Haar-random orthogonal matrix via QR with the sign of `R`'s diagonal
/// folded into `Q`.
fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let qr = gaussian(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for (k, mut col) in q.column_iter_mut().enumerate() {
        if r[(k, k)] < 0.0 {
            col.neg_mut();
        }
    }
    q
}

/// `O J0 Oᵀ` with `J0` the standard block complex structure.
fn random_complex_structure(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let mut j0 = DMatrix::zeros(n, n);
    for b in (0..n).step_by(2) {
        j0[(b, b + 1)] = -1.0;
        j0[(b + 1, b)] = 1.0;
    }
    let o = random_orthogonal(rng, n);
    &o * j0 * o.transpose()
}

/// Random `n × p` matrix with orthonormal columns.
fn random_frame(rng: &mut ChaCha8Rng, n: usize, p: usize) -> DMatrix<f64> {
    random_orthogonal(rng, n).columns(0, p).into_owned()
}

/// One sampled configuration: `h`, the structures `J_i`, and a frame `W`.
#[derive(Debug, Clone)]
pub struct KxwDraw {
    pub d: u32,
    pub h: DMatrix<f64>,
    pub structures: Vec<DMatrix<f64>>,
    pub frame: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KxwTrial {
    pub det: f64,
    pub product: f64,
    pub margin: f64,
    pub spectra: SpectrumPair,
    pub interlacing: bool,
    /// Each `J_i` squares to `-Id` and each `-J_i h J_i` is PSD with the
    /// spectrum of `h`.
    pub structures_ok: bool,
    pub holds: bool,
}

impl KxwDraw {
    pub fn sample(d: u32, nd: usize, p: usize, seed: u64) -> Result<Self> {
        validate_kxw(d, nd, p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_psd_with(&mut rng, nd, 1.0, true)?;
        let structures = (1..d).map(|_| random_complex_structure(&mut rng, nd)).collect();
        let frame = random_frame(&mut rng, nd, p);
        Ok(Self { d, h, structures, frame })
    }

    /// The isotropic configuration `h = Id/nd` with random structures and
    /// frame.
    pub fn isotropic(d: u32, nd: usize, p: usize, seed: u64) -> Result<Self> {
        let mut draw = Self::sample(d, nd, p, seed)?;
        draw.h = DMatrix::identity(nd, nd) / nd as f64;
        Ok(draw)
    }

    /// `-J_i h J_i` for every structure.
    pub fn conjugates(&self) -> Vec<DMatrix<f64>> {
        self.structures.iter().map(|j| -(j * &self.h * j)).collect()
    }

    /// `Id - h - Σ J_i h J_i` on the whole space.
    pub fn k_full(&self) -> DMatrix<f64> {
        let n = self.h.nrows();
        self.conjugates()
            .into_iter()
            .fold(DMatrix::identity(n, n) - &self.h, |acc, m| acc + m)
    }

    pub fn evaluate(&self) -> KxwTrial {
        let n = self.h.nrows();
        let w = &self.frame;
        let k_w = w.transpose() * self.k_full() * w;
        let h_w = w.transpose() * &self.h * w;
        let betas = ascending_eigenvalues(&self.h);
        let mut lambdas = ascending_eigenvalues(&h_w);
        lambdas.reverse();
        let spectra = SpectrumPair { lambdas, betas };
        let dm1 = f64::from(self.d - 1);
        let product: f64 = spectra
            .lambdas
            .iter()
            .zip(&spectra.betas)
            .map(|(l, b)| 1.0 - l + dm1 * b)
            .product();
        let det = k_w.determinant();
        let margin = det - product;
        let id = DMatrix::<f64>::identity(n, n);
        let structures_ok = self.structures.iter().all(|j| (j * j + &id).amax() < 1e-10)
            && self.conjugates().iter().all(|m| {
                let ev = ascending_eigenvalues(m);
                ev[0] >= -PSD_TOL && ev.iter().zip(&spectra.betas).all(|(a, b)| (a - b).abs() < 1e-10)
            });
        let interlacing = spectra.interlaces();
        let unit = spectra.in_unit_range() && (spectra.beta_sum() - 1.0).abs() < TRACE_TOL;
        KxwTrial {
            det,
            product,
            margin,
            holds: margin >= -SLACK && interlacing && structures_ok && unit,
            spectra,
            interlacing,
            structures_ok,
        }
    }
}

fn validate_kxw(d: u32, nd: usize, p: usize) -> Result<()> {
    if ![2, 4, 8].contains(&d) {
        return Err(Error::Param(format!("d must be one of 2, 4, 8 (got {d})")));
    }
    if nd < 2 || nd > 16 || nd % 2 != 0 {
        return Err(Error::ShapeMismatch(format!(
            "nd must be even and in 2..=16 for complex structures to exist (got {nd})"
        )));
    }
    if p == 0 || p > nd {
        return Err(Error::ShapeMismatch(format!("p must be in 1..={nd} (got {p})")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KxwReport {
    pub d: u32,
    pub nd: usize,
    pub p: usize,
    pub trials: u64,
    pub passed: u64,
    pub interlacing_failures: u64,
    pub structure_failures: u64,
    pub min_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<(u64, KxwTrial)>,
}

impl KxwReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

/// Checks `det k_W >= ∏_{i<=p} (1 - λ_i + (d-1) β_i)` and the interlacing
/// `λ_i <= β_{nd-i+1}` on seeded random draws; trial `t` uses seed
/// `seed ^ t`.
pub fn kxw_inequality_check(d: u32, nd: usize, p: usize, trials: u64, seed: u64) -> Result<KxwReport> {
    validate_kxw(d, nd, p)?;
    if trials == 0 {
        return Err(Error::Param("trials must be positive".into()));
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|t| KxwDraw::sample(d, nd, p, seed ^ t).map(|draw| draw.evaluate()))
        .collect::<Result<Vec<_>>>()?;
    let mut report = KxwReport {
        d,
        nd,
        p,
        trials,
        passed: 0,
        interlacing_failures: 0,
        structure_failures: 0,
        min_margin: f64::INFINITY,
        failure: None,
    };
    for (t, r) in (0u64..).zip(results) {
        report.min_margin = report.min_margin.min(r.margin);
        report.interlacing_failures += u64::from(!r.interlacing);
        report.structure_failures += u64::from(!r.structures_ok);
        if r.holds {
            report.passed += 1;
        } else if report.failure.is_none() {
            report.failure = Some((t, r));
        }
    }
    Ok(report)
}
