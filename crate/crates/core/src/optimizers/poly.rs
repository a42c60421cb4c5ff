//! Dense univariate polynomials over the rationals, ascending coefficients.

use num_traits::{Signed, Zero};

use crate::numerics::{int, Interval, Rat};

pub(crate) fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub(crate) fn eval_interval(p: &[Rat], x: &Interval) -> Interval {
    p.iter().rev().fold(Interval::point(Rat::zero()), |acc, c| {
        acc.mul(x).add(&Interval::point(c.clone()))
    })
}

fn derivative(p: &[Rat]) -> Vec<Rat> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * int(k as i64))
        .collect()
}

/// Remainder of `a` divided by the nonzero polynomial `b`.
fn rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let q = r.last().expect("nonempty") / lead;
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &q * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Divides out the largest power of `x` dividing `p`.
pub(crate) fn deflate_zero_roots(p: &[Rat]) -> Vec<Rat> {
    let k = p.iter().take_while(|c| c.is_zero()).count();
    p[k..].to_vec()
}

fn sturm_chain(p: &[Rat]) -> Vec<Vec<Rat>> {
    let mut chain = vec![trim(p.to_vec())];
    let d = trim(derivative(p));
    if d.is_empty() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r: Vec<Rat> = rem(&chain[n - 2], &chain[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            return chain;
        }
        chain.push(r);
    }
}

fn variations(chain: &[Vec<Rat>], x: &Rat) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|q| eval(q, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(a, b]`, for `p(a) != 0`.
pub(crate) fn count_roots(p: &[Rat], a: &Rat, b: &Rat) -> usize {
    let chain = sturm_chain(p);
    variations(&chain, a).saturating_sub(variations(&chain, b))
}
