use jacbound::kernels::{BoundFormula, BoundReport, LtOne, SpaceParams};
use jacbound::numerics::{format_sig, render_sig, Rat};
use jacbound::suites::VerifyReport;
use jacbound::{Interval, Scalar};
use serde::Serialize;

/// Most significant digits shown for a value.
const MAX_DIGITS: u32 = 15;
/// Significant digits of the outward-rounded endpoint decimals.
pub(crate) const ENDPOINT_DIGITS: u32 = 20;

/// A value as a decimal string. Certified values carry the exact interval
/// endpoints the decimal was rounded from, plus outward-rounded decimals of
/// those endpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decimal {
    pub decimal: String,
    /// Significant digits in `decimal`; 0 if no digit is determined.
    pub digits: u32,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo_decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi_decimal: Option<String>,
}

impl Decimal {
    /// The longest rendering (up to 15 significant digits) on which both
    /// endpoints agree, so the decimal is correctly rounded.
    pub fn from_interval(iv: &Interval) -> Self {
        let (decimal, digits) = (1..=MAX_DIGITS)
            .rev()
            .find_map(|sig| render_sig(iv, sig).map(|s| (s, sig)))
            .unwrap_or_else(|| (format_sig(&iv.midpoint(), 3), 0));
        let (lo_decimal, hi_decimal) = crate::outward(iv);
        Self {
            decimal,
            digits,
            certified: true,
            lo: Some(iv.lo().to_string()),
            hi: Some(iv.hi().to_string()),
            lo_decimal: Some(lo_decimal),
            hi_decimal: Some(hi_decimal),
        }
    }

    pub fn from_f64(v: f64) -> Self {
        let decimal = Rat::from_float(v).map_or_else(|| v.to_string(), |r| format_sig(&r, MAX_DIGITS));
        Self {
            decimal,
            digits: MAX_DIGITS,
            certified: false,
            lo: None,
            hi: None,
            lo_decimal: None,
            hi_decimal: None,
        }
    }

    pub fn from_scalar(s: &Scalar) -> Self {
        match s {
            Scalar::Float(v) => Self::from_f64(*v),
            Scalar::Certified(iv) => Self::from_interval(iv),
        }
    }
}

#[derive(Debug, Serialize)]
pub(crate) struct BoundsRecord {
    pub command: &'static str,
    pub echo: String,
    pub params: SpaceParams,
    pub delta: String,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prec: Option<u32>,
    pub formula: BoundFormula,
    pub exact: String,
    pub value: Decimal,
    pub certified_lt_one: LtOne,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prec_used: Option<u32>,
}

impl BoundsRecord {
    pub fn new(echo: &str, r: &BoundReport, prec: Option<u32>) -> Self {
        Self {
            command: "bounds",
            echo: echo.into(),
            params: r.params,
            delta: r.delta.to_string(),
            mode: if prec.is_some() { "certified" } else { "float" },
            prec,
            formula: r.formula,
            exact: r.exact.to_string(),
            value: Decimal::from_scalar(&r.value),
            certified_lt_one: r.certified_lt_one,
            prec_used: r.prec_used,
        }
    }
}

#[derive(Debug, Serialize)]
pub(crate) struct VanishingRow {
    pub degree: u32,
    pub j: u32,
    pub delta: String,
    pub formula: BoundFormula,
    pub exact: String,
    pub value: Decimal,
    pub certified_lt_one: LtOne,
}

impl VanishingRow {
    pub fn new(degree: u32, r: &BoundReport) -> Self {
        Self {
            degree,
            j: r.params.j(),
            delta: r.delta.to_string(),
            formula: r.formula,
            exact: r.exact.to_string(),
            value: Decimal::from_scalar(&r.value),
            certified_lt_one: r.certified_lt_one,
        }
    }
}

#[derive(Debug, Serialize)]
pub(crate) struct VanishingRecord {
    pub command: &'static str,
    pub echo: String,
    pub d: u32,
    pub n: u32,
    pub delta_used: String,
    pub prec: u32,
    pub vanishing_degrees: Vec<u32>,
    pub rows: Vec<VanishingRow>,
}

#[derive(Debug, Serialize)]
pub(crate) struct CritexpRecord {
    pub command: &'static str,
    pub echo: String,
    pub d: u32,
    pub n: u32,
    pub hd: u32,
    pub cfm_exact: String,
    pub cfm_bound: Decimal,
    pub kapovich_bound: String,
    pub larger: &'static str,
}

#[derive(Debug, Serialize)]
pub(crate) struct EpsilonRecord {
    pub command: &'static str,
    pub echo: String,
    pub d: u32,
    pub epsilon: String,
    pub cap: u32,
    pub n_epsilon: u32,
}

#[derive(Debug, Serialize)]
pub(crate) struct VerifySummary {
    pub suites: usize,
    pub passed: usize,
}

#[derive(Debug, Serialize)]
pub(crate) struct VerifyRecord {
    pub command: &'static str,
    pub echo: String,
    pub suite: String,
    pub seed: u64,
    pub grid: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub summary: VerifySummary,
    pub report: VerifyReport,
}
