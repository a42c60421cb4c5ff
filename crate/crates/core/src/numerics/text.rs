use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{rat_to_f64, Interval, Rat};
use crate::error::{Error, Result};

/// Parses `"8"`, `"-16/3"`, a finite decimal such as `"0.85"` or `"3.1e-4"`
/// into an exact rational. Decimals never pass through a float.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("`{s}` has a zero denominator")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let exp: i32 = exp.parse().map_err(|_| bad())?;
        if mant.contains(['e', 'E', '/']) || exp.unsigned_abs() > 10_000 {
            return Err(bad());
        }
        let scale = Rat::from_integer(BigInt::from(10).pow(exp.unsigned_abs()));
        let m = parse_rat(mant)?;
        return Ok(if exp >= 0 { m * scale } else { m / scale });
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) || (int_part.is_empty() && frac_part.is_empty()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mantissa: BigInt = all.parse().map_err(|_| bad())?;
    let scale = BigInt::from(10).pow(frac_part.len() as u32);
    let v = Rat::new(mantissa, scale);
    Ok(if neg { -v } else { v })
}

fn round_half_away(x: &Rat) -> BigInt {
    let two = BigInt::from(2);
    let n = x.numer().abs() * &two + x.denom();
    let q = n.div_floor(&(x.denom() * &two));
    if x.is_negative() {
        -q
    } else {
        q
    }
}

/// Correctly rounded (half away from zero) decimal with `dp` places.
pub fn format_fixed(x: &Rat, dp: u32) -> String {
    let m = round_half_away(&(x * Rat::from_integer(BigInt::from(10).pow(dp))));
    let neg = m.is_negative();
    let digits = m.abs().to_string();
    let body = if dp == 0 {
        digits
    } else {
        let dp = dp as usize;
        let padded = format!("{digits:0>width$}", width = dp + 1);
        let (i, f) = padded.split_at(padded.len() - dp);
        format!("{i}.{f}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// `floor(log10 |x|)` computed exactly.
fn decimal_exponent(x: &Rat) -> i64 {
    let a = x.abs();
    let guess = rat_to_f64(&a).log10().floor();
    let mut e = if guess.is_finite() { guess as i64 } else { 0 };
    let ten = Rat::from_integer(BigInt::from(10));
    let pow10 = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from_integer(BigInt::from(10).pow(k as u32))
        } else {
            Rat::from_integer(BigInt::from(10).pow((-k) as u32)).recip()
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e) * &ten <= a {
        e += 1;
    }
    e
}

/// Correctly rounded decimal with `sig` significant digits; plain notation
/// for moderate magnitudes, scientific otherwise.
pub fn format_sig(x: &Rat, sig: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sig = sig.max(1);
    let e = decimal_exponent(x);
    if (-6..15).contains(&e) {
        let dp = (i64::from(sig) - 1 - e).max(0) as u32;
        return format_fixed(x, dp);
    }
    let scale = if e >= 0 {
        Rat::from_integer(BigInt::from(10).pow(e as u32))
    } else {
        Rat::from_integer(BigInt::from(10).pow((-e) as u32)).recip()
    };
    let mut mant = format_fixed(&(x / &scale), sig - 1);
    let mut exp = e;
    if mant.trim_start_matches('-').starts_with("10") {
        mant = format_fixed(&(x / (scale * Rat::from_integer(BigInt::from(10)))), sig - 1);
        exp += 1;
    }
    format!("{mant}e{exp}")
}

/// Decimal with `sig` significant digits rounded toward `-∞` (`up = false`)
/// or `+∞` (`up = true`), so that `[lower, upper]` renderings stay sound.
pub fn format_sig_directed(x: &Rat, sig: u32, up: bool) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sig = i64::from(sig.max(1));
    let e = decimal_exponent(x);
    let k = sig - 1 - e;
    let ten = BigInt::from(10);
    let scaled = if k >= 0 {
        x * Rat::from_integer(ten.pow(k as u32))
    } else {
        x / Rat::from_integer(ten.pow((-k) as u32))
    };
    let m = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let digits = m.abs().to_string();
    let sign = if m.is_negative() { "-" } else { "" };
    // Rounding up can carry into a new digit; `digits` already reflects it.
    let exp10 = digits.len() as i64 - 1 - k;
    if (-6..15).contains(&exp10) {
        if k <= 0 {
            let zeros = "0".repeat((-k) as usize);
            return format!("{sign}{digits}{zeros}");
        }
        let k = k as usize;
        let padded = format!("{digits:0>width$}", width = k + 1);
        let (i, f) = padded.split_at(padded.len() - k);
        return format!("{sign}{i}.{f}");
    }
    let (head, tail) = digits.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{exp10}")
    } else {
        format!("{sign}{head}.{tail}e{exp10}")
    }
}

/// Outward-rounded decimal endpoints of an interval.
pub fn render_outward(iv: &Interval, sig: u32) -> (String, String) {
    (format_sig_directed(iv.lo(), sig, false), format_sig_directed(iv.hi(), sig, true))
}

/// The common fixed-point rendering of both endpoints, if they agree.
pub fn render_fixed(iv: &Interval, dp: u32) -> Option<String> {
    let lo = format_fixed(iv.lo(), dp);
    (lo == format_fixed(iv.hi(), dp)).then_some(lo)
}

/// The common significant-digit rendering of both endpoints, if they agree.
pub fn render_sig(iv: &Interval, sig: u32) -> Option<String> {
    let lo = format_sig(iv.lo(), sig);
    (lo == format_sig(iv.hi(), sig)).then_some(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    #[test]
    fn directed_rounding() {
        assert_eq!(format_sig_directed(&rat(2, 3), 4, false), "0.6666");
        assert_eq!(format_sig_directed(&rat(2, 3), 4, true), "0.6667");
        assert_eq!(format_sig_directed(&rat(-2, 3), 4, false), "-0.6667");
        assert_eq!(format_sig_directed(&rat(-2, 3), 4, true), "-0.6666");
        assert_eq!(format_sig_directed(&rat(99999, 1000), 3, true), "100.0");
        assert_eq!(format_sig_directed(&int(1234567), 3, false), "1230000");
        assert_eq!(format_sig_directed(&rat(1, 3_000_000_000), 3, true), "3.34e-10");
        assert_eq!(format_sig_directed(&int(7), 5, true), "7.0000");
        for (x, sig) in [(rat(22, 7), 10), (rat(-1, 9), 7), (rat(10_001, 10), 3), (rat(1, 1 << 40), 6)] {
            let lo = parse_rat(&format_sig_directed(&x, sig, false)).unwrap();
            let hi = parse_rat(&format_sig_directed(&x, sig, true)).unwrap();
            assert!(lo <= x && x <= hi, "{x}");
        }
    }

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rat("8").unwrap(), int(8));
        assert_eq!(parse_rat("16/3").unwrap(), rat(16, 3));
        assert_eq!(parse_rat("3.1e-4").unwrap(), rat(31, 100_000));
        assert_eq!(parse_rat("-2E3").unwrap(), int(-2000));
        assert!(parse_rat("1e2e3").is_err());
        assert!(parse_rat("1/2e3").is_err());
        assert_eq!(parse_rat(" -4/6 ").unwrap(), rat(-2, 3));
        assert_eq!(parse_rat("0.85").unwrap(), rat(17, 20));
        assert_eq!(parse_rat("-.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("12.").unwrap(), int(12));
        for bad in ["", "1/0", "abc", "1.2.3", "1e", "e5", "/3", "."] {
            assert!(parse_rat(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn fixed_rounding() {
        assert_eq!(format_fixed(&rat(1, 3), 4), "0.3333");
        assert_eq!(format_fixed(&rat(2, 3), 4), "0.6667");
        assert_eq!(format_fixed(&rat(1, 8), 2), "0.13");
        assert_eq!(format_fixed(&rat(-1, 8), 2), "-0.13");
        assert_eq!(format_fixed(&rat(7, 1), 0), "7");
        assert_eq!(format_fixed(&rat(1, 1000), 2), "0.00");
    }

    #[test]
    fn significant_rounding() {
        assert_eq!(format_sig(&rat(1, 3), 5), "0.33333");
        assert_eq!(format_sig(&rat(22, 7), 4), "3.143");
        assert_eq!(format_sig(&rat(1, 3_000_000_000), 3), "3.33e-10");
        assert_eq!(format_sig(&rat(99999, 1_000_000_000_000), 2), "1.0e-7");
        assert_eq!(format_sig(&int(14), 6), "14.0000");
    }

    #[test]
    fn interval_rendering_requires_agreement() {
        let tight = Interval::new(rat(8689994123, 10_000_000_000), rat(86899941231, 100_000_000_000)).unwrap();
        assert_eq!(render_fixed(&tight, 10).as_deref(), Some("0.8689994123"));
        let loose = Interval::new(rat(99, 100), rat(101, 100)).unwrap();
        assert_eq!(render_fixed(&loose, 2), None);
    }
}
