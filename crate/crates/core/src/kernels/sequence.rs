use crate::error::{Error, Result};
use crate::numerics::{int, iv_sqrt, pow_rounded, rat, rat_pow, ExactReal, Interval, Mode, Scalar};

/// `C_n = (4n/(4n+1))^(4n-2) · √2 · 4n/(4n-3)`, exactly.
pub fn seq_c_exact(n: u32) -> Result<ExactReal> {
    check_n(n)?;
    let m = 4 * i64::from(n);
    let coeff = rat_pow(&rat(m, m + 1), (m - 2) as u32) * rat(m, m - 3);
    ExactReal::surd(coeff, int(2))
}

/// `C_n` in the given mode. Certified values use rounded powers, so large
/// `n` stays cheap.
pub fn seq_c(n: u32, mode: Mode) -> Result<Scalar> {
    check_n(n)?;
    let m = 4 * i64::from(n);
    match mode {
        Mode::Float => {
            let mf = m as f64;
            let pw = (-(mf - 2.0) * (1.0 / mf).ln_1p()).exp();
            Ok(Scalar::Float(pw * std::f64::consts::SQRT_2 * mf / (mf - 3.0)))
        }
        Mode::Certified { prec } => {
            let guard = prec + 16;
            let pw = pow_rounded(&Interval::point(rat(m, m + 1)), (m - 2) as u64, guard)?;
            let root2 = iv_sqrt(&Interval::point(int(2)), guard)?;
            Ok(Scalar::Certified(pw.mul(&root2).scale(&rat(m, m - 3)).round_out(prec)))
        }
    }
}

/// Rational enclosure of `lim C_n = √2/e`, of width `4·10^-12`.
pub fn seq_c_limit() -> Interval {
    let scale = 1_000_000_000_000i64;
    Interval::new(rat(520_260_095_019, scale), rat(520_260_095_023, scale)).expect("ordered")
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Param("C_n needs n >= 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Comparison;
    use crate::numerics::Rat;
    use num_bigint::BigInt;
    use num_traits::One;

    /// `e` enclosed by the partial sums of `Σ 1/k!` and the tail bound
    /// `1/(K!·K)`.
    fn e_enclosure(terms: u32) -> Interval {
        let mut sum = Rat::one();
        let mut fact = BigInt::one();
        for k in 1..=terms {
            fact *= k;
            sum += Rat::new(BigInt::one(), fact.clone());
        }
        let tail = Rat::new(BigInt::one(), fact * terms);
        Interval::new(sum.clone(), sum + tail).unwrap()
    }

    #[test]
    fn limit_enclosure_is_sound_and_tight() {
        let e = e_enclosure(30);
        let root2 = iv_sqrt(&Interval::point(int(2)), 128).unwrap();
        let limit = root2.div(&e).unwrap();
        assert!(limit.is_subset_of(&seq_c_limit()));
        assert!(seq_c_limit().width() < rat(1, 100_000_000_000));
    }

    #[test]
    fn third_term_value() {
        let c3 = seq_c(3, Mode::certified()).unwrap();
        let iv = c3.interval().unwrap();
        assert!((iv.midpoint_f64() - 0.84690105104).abs() < 5e-11);
        assert_eq!(crate::numerics::certify_compare(iv, &int(1)), Comparison::CertifiedLess);
        assert!(iv.contains(&seq_c_exact(3).unwrap().enclose(256).unwrap().midpoint()));
    }

    #[test]
    fn first_terms_exceed_one() {
        assert!((seq_c(1, Mode::Float).unwrap().approx() - 3.6204).abs() < 1e-4);
        assert!((seq_c(2, Mode::Float).unwrap().approx() - 1.11614).abs() < 1e-5);
        assert!(seq_c(0, Mode::Float).is_err());
    }

    #[test]
    fn float_and_certified_agree() {
        for n in [1, 2, 5, 34, 1000, 10_000] {
            let f = seq_c(n, Mode::Float).unwrap().approx();
            let c = seq_c(n, Mode::certified()).unwrap();
            assert!((f - c.approx()).abs() < 1e-13, "n = {n}");
            let exact = seq_c_exact(n.min(200)).unwrap().to_f64();
            if n <= 200 {
                assert!((exact - f).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn sequence_stays_above_limit() {
        let limit = seq_c_limit();
        for n in [1, 10, 100, 10_000] {
            let c = seq_c(n, Mode::certified()).unwrap();
            assert!(c.interval().unwrap().lo() > limit.hi(), "n = {n}");
        }
    }
}
