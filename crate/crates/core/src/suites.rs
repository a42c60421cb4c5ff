//! Verification suites: each one re-runs a family of oracles and reports
//! per-case margins. Exact values are reported as strings in the
//! `ExactReal`/rational text form.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{eval_q, exceptional_constant, p_reduced_exact, SpaceParams};
use crate::matrix::{fiedler_trials, kxw_inequality_check, FiedlerSweep, KxwReport};
use crate::numerics::{int, rat, rat_pow, ExactReal, Mode, Rat};
use crate::optimizers::{
    brute_force_simplex_max, exceptional_bracket, isolate_q_root, max_p_certified,
    verify_sorted_matching, MaxMethod,
};

/// Default grid for the lattice oracles.
pub const DEFAULT_GRID: u32 = 40;
/// Default seed for the randomized suites.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Factor,
    Pest,
    Fiedler,
    Matching,
    Kxw,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["factor", "pest", "fiedler", "matching", "kxw", "all"];

    /// Trials used when none are requested.
    pub fn default_trials(self) -> u64 {
        match self {
            Suite::Fiedler => 1000,
            _ => 500,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "factor" => Suite::Factor,
            "pest" => Suite::Pest,
            "fiedler" => Suite::Fiedler,
            "matching" => Suite::Matching,
            "kxw" => Suite::Kxw,
            "all" => Suite::All,
            _ => {
                return Err(Error::Param(format!(
                    "unknown suite {s:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::Factor, Suite::Pest, Suite::Fiedler, Suite::Matching, Suite::Kxw, Suite::All]
            .iter()
            .position(|s| s == self)
            .expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub grid: u32,
    /// `None` uses each suite's default.
    pub trials: Option<u64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, grid: DEFAULT_GRID, trials: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorCase {
    pub params: SpaceParams,
    pub argmax: Vec<u32>,
    pub value: String,
    pub value_f64: f64,
    pub within_cell: bool,
    pub hypothesis_ok: bool,
    pub points_scanned: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorSuite {
    pub grid: u32,
    pub cases: Vec<FactorCase>,
    pub passed: bool,
}

/// Lattice cases whose maximizer should have the symmetric block shape.
pub const FACTOR_CASES: [(u32, u32, u32); 3] = [(2, 2, 1), (1, 3, 0), (4, 2, 1)];

pub fn factor_suite(grid: u32) -> Result<FactorSuite> {
    let mut cases = Vec::new();
    for (d, n, j) in FACTOR_CASES {
        let m = brute_force_simplex_max(&SpaceParams::new(d, n, j)?, grid)?;
        cases.push(FactorCase {
            params: m.params,
            within_cell: m.within_cell_of_shape(),
            value: m.value.to_string(),
            argmax: m.argmax,
            value_f64: m.value_f64,
            hypothesis_ok: m.hypothesis_ok,
            points_scanned: m.points_scanned,
        });
    }
    let passed = cases.iter().all(|c| c.within_cell);
    Ok(FactorSuite { grid, cases, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalCase {
    pub params: SpaceParams,
    pub method: MaxMethod,
    /// Certified over-estimate of `max P`.
    pub max_p: String,
    pub lo: String,
    pub hi: String,
    pub width_below_1e_20: bool,
    /// `max P / p^(p/2)` equals the table constant exactly.
    pub matches_table: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketCase {
    pub params: SpaceParams,
    pub published: (String, String),
    pub isolated: (String, String),
    pub sign_change: (i8, i8),
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseCase {
    pub params: SpaceParams,
    pub samples: u32,
    pub max_sample: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignWindowSummary {
    /// Valid non-exceptional cases with `dn` at most this.
    pub max_dn: u32,
    pub checked: usize,
    /// Cases with `p = 2j`, where the window `[2/p - 1/(p-j), 1/p]` is undefined.
    pub skipped: Vec<SpaceParams>,
    pub failures: Vec<SpaceParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PestSuite {
    pub exceptional: Vec<ExceptionalCase>,
    pub brackets: Vec<BracketCase>,
    pub dense: Vec<DenseCase>,
    pub sign_windows: SignWindowSummary,
    pub passed: bool,
}

/// The five `n = 2` cases with tabulated constants.
pub const EXCEPTIONAL_CASES: [(u32, u32); 5] = [(2, 1), (4, 1), (8, 1), (8, 2), (8, 3)];

/// `x²` exactly, for values with at most a square root.
fn exact_square(x: &ExactReal) -> Option<Rat> {
    match x.index() {
        1 => Some(x.coeff() * x.coeff()),
        2 => Some(x.coeff() * x.coeff() * x.radicand()),
        _ => None,
    }
}

fn exceptional_case(d: u32, j: u32) -> Result<ExceptionalCase> {
    let params = SpaceParams::new(d, 2, j)?;
    let cert = max_p_certified(&params, Mode::certified())?;
    let p = int(i64::from(params.p()));
    let p_half = ExactReal::surd(Rat::one(), rat_pow(&p, params.p()))?;
    let k = exceptional_constant(d, j).expect("tabulated");
    let iv = &cert.value_bound;
    Ok(ExceptionalCase {
        params,
        method: cert.method,
        max_p: cert.value.to_string(),
        lo: iv.lo().to_string(),
        hi: iv.hi().to_string(),
        width_below_1e_20: iv.width() < rat(1, 10).pow(20),
        matches_table: cert.value.value_eq(&k.mul(&p_half)),
    })
}

fn bracket_case(d: u32, j: u32) -> Result<BracketCase> {
    let params = SpaceParams::new(d, 2, j)?;
    let (lo, hi) = exceptional_bracket(&params).expect("published");
    let b = isolate_q_root(&params, &rat(1, 1 << 40))?;
    let inside = b.interval.is_strictly_inside(&lo, &hi) && b.sign_change == (1, -1);
    Ok(BracketCase {
        params,
        published: (lo.to_string(), hi.to_string()),
        isolated: (b.interval.lo().to_string(), b.interval.hi().to_string()),
        sign_change: b.sign_change,
        inside,
    })
}

/// Every `(d, n, j)` under the max hypothesis with `dn <= max_dn`.
pub fn max_hypothesis_cases(max_dn: u32) -> Vec<SpaceParams> {
    let mut out = Vec::new();
    for d in [2u32, 4, 8] {
        for n in 2..=max_dn / d {
            for j in 1..=d {
                if let Ok(s) = SpaceParams::new(d, n, j) {
                    if s.satisfies_max_hypothesis() {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Samples the reduced objective at `steps + 1` equispaced `λ` and compares
/// each exact square with the square of the certified maximum.
pub fn dense_sample_case(params: &SpaceParams, steps: u32) -> Result<DenseCase> {
    let cert = max_p_certified(params, Mode::certified())?;
    let bound_sq = exact_square(&cert.value).expect("square-root form");
    let mut holds = true;
    let mut max_sample = 0.0f64;
    let mut samples = 0;
    let span = i64::from(steps) * params.free();
    for t in 0..=i64::from(steps) {
        let Ok(v) = p_reduced_exact(params, &Rat::new(t.into(), span.into())) else {
            continue;
        };
        samples += 1;
        let sq = exact_square(&v).expect("square-root form");
        holds &= sq <= bound_sq;
        max_sample = max_sample.max(v.to_f64());
    }
    Ok(DenseCase { params: *params, samples, max_sample, bound: cert.value.to_f64(), holds })
}

/// `Q(0) = j - 1`, `Q(1/p) = -2(d-1)j²/p²` and `Q(2/p - 1/(p-j)) >= 0`.
pub fn sign_window_holds(params: &SpaceParams) -> Result<bool> {
    let (d, j) = (i64::from(params.d()), i64::from(params.j()));
    let p = int(i64::from(params.p()));
    let at_zero = eval_q(params, &int(0))? == int(j - 1);
    let top = eval_q(params, &(Rat::one() / &p))? == int(-2 * (d - 1) * j * j) / (&p * &p);
    let lower = int(2) / &p - Rat::one() / int(params.free());
    Ok(at_zero && top && !eval_q(params, &lower)?.is_negative())
}

pub fn sign_window_sweep(max_dn: u32) -> Result<SignWindowSummary> {
    let mut summary = SignWindowSummary { max_dn, checked: 0, skipped: vec![], failures: vec![] };
    for s in max_hypothesis_cases(max_dn) {
        if s.is_exceptional() {
            continue;
        }
        if s.free() <= 0 {
            summary.skipped.push(s);
            continue;
        }
        summary.checked += 1;
        if !sign_window_holds(&s)? {
            summary.failures.push(s);
        }
    }
    Ok(summary)
}

/// Dense-sample cases are drawn with replacement from the cases with
/// `dn <= 24` and a unique root of `Q`.
pub fn pest_suite(seed: u64) -> Result<PestSuite> {
    let exceptional = EXCEPTIONAL_CASES
        .iter()
        .map(|&(d, j)| exceptional_case(d, j))
        .collect::<Result<Vec<_>>>()?;
    let brackets = [(4, 1), (8, 1), (8, 2), (8, 3)]
        .iter()
        .map(|&(d, j)| bracket_case(d, j))
        .collect::<Result<Vec<_>>>()?;
    let pool: Vec<SpaceParams> = max_hypothesis_cases(24)
        .into_iter()
        .filter(|s| max_p_certified(s, Mode::Float).is_ok())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dense = (0..20)
        .map(|_| dense_sample_case(&pool[rng.random_range(0..pool.len())], 200))
        .collect::<Result<Vec<_>>>()?;
    let sign_windows = sign_window_sweep(60)?;
    let passed = exceptional.iter().all(|c| c.matches_table && c.width_below_1e_20)
        && brackets.iter().all(|b| b.inside)
        && dense.iter().all(|c| c.holds)
        && sign_windows.failures.is_empty();
    Ok(PestSuite { exceptional, brackets, dense, sign_windows, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiedlerSuite {
    pub seed: u64,
    pub sweep: FiedlerSweep,
    pub passed: bool,
}

pub fn fiedler_suite(trials: u64, seed: u64) -> Result<FiedlerSuite> {
    let sweep = fiedler_trials(trials, seed, 8)?;
    let passed = sweep.passed == sweep.trials;
    Ok(FiedlerSuite { seed, sweep, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingSuite {
    pub seed: u64,
    pub trials: u64,
    pub identity_minimal: u64,
    /// First `(a, b)` where the sorted matching is not minimal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Vec<String>, Vec<String>)>,
    pub passed: bool,
}

fn ascending(rng: &mut ChaCha8Rng, len: usize, num_cap: i64, den: i64) -> Vec<Rat> {
    let mut v: Vec<i64> = (0..len).map(|_| rng.random_range(0..=num_cap)).collect();
    v.sort_unstable();
    v.into_iter().map(|x| rat(x, den)).collect()
}

/// Random ascending pairs of lengths 1 to 6 with `a` in `[0, 1]` and `b` in
/// `[0, 2]`; trial `t` uses seed `seed ^ t`.
pub fn matching_suite(trials: u64, seed: u64) -> Result<MatchingSuite> {
    let mut suite = MatchingSuite { seed, trials, identity_minimal: 0, witness: None, passed: true };
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ t);
        let len = rng.random_range(1..=6);
        let a = ascending(&mut rng, len, 97, 97);
        let b = ascending(&mut rng, len, 106, 53);
        if verify_sorted_matching(&a, &b)?.identity_is_min() {
            suite.identity_minimal += 1;
        } else if suite.witness.is_none() {
            let s = |v: &[Rat]| v.iter().map(ToString::to_string).collect();
            suite.witness = Some((s(&a), s(&b)));
        }
    }
    suite.passed = suite.identity_minimal == trials;
    Ok(suite)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KxwSuite {
    pub seed: u64,
    pub configurations: Vec<KxwReport>,
    pub passed: bool,
}

/// `(d, nd, p)` configurations: every `p` for `(2, 8)` and `p <= 6` for
/// `(4, 12)`.
pub fn kxw_configurations() -> Vec<(u32, usize, usize)> {
    (1..=8).map(|p| (2, 8, p)).chain((1..=6).map(|p| (4, 12, p))).collect()
}

pub fn kxw_suite(trials: u64, seed: u64) -> Result<KxwSuite> {
    let configurations = kxw_configurations()
        .into_iter()
        .map(|(d, nd, p)| kxw_inequality_check(d, nd, p, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    let passed = configurations.iter().all(KxwReport::all_passed);
    Ok(KxwSuite { seed, configurations, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "suite", rename_all = "lowercase")]
pub enum SuiteResult {
    Factor(FactorSuite),
    Pest(PestSuite),
    Fiedler(FiedlerSuite),
    Matching(MatchingSuite),
    Kxw(KxwSuite),
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        match self {
            SuiteResult::Factor(s) => s.passed,
            SuiteResult::Pest(s) => s.passed,
            SuiteResult::Fiedler(s) => s.passed,
            SuiteResult::Matching(s) => s.passed,
            SuiteResult::Kxw(s) => s.passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub results: Vec<SuiteResult>,
    pub passed: bool,
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<VerifyReport> {
    let trials = |s: Suite| opts.trials.unwrap_or_else(|| s.default_trials());
    let single = |s: Suite| -> Result<SuiteResult> {
        Ok(match s {
            Suite::Factor => SuiteResult::Factor(factor_suite(opts.grid)?),
            Suite::Pest => SuiteResult::Pest(pest_suite(opts.seed)?),
            Suite::Fiedler => SuiteResult::Fiedler(fiedler_suite(trials(s), opts.seed)?),
            Suite::Matching => SuiteResult::Matching(matching_suite(trials(s), opts.seed)?),
            Suite::Kxw => SuiteResult::Kxw(kxw_suite(trials(s), opts.seed)?),
            Suite::All => unreachable!("expanded below"),
        })
    };
    let list = match suite {
        Suite::All => vec![Suite::Factor, Suite::Pest, Suite::Fiedler, Suite::Matching, Suite::Kxw],
        s => vec![s],
    };
    let results = list.into_iter().map(single).collect::<Result<Vec<_>>>()?;
    let passed = results.iter().all(SuiteResult::passed);
    Ok(VerifyReport { results, passed })
}
