use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numerics::Rat;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingReport {
    /// `∏ (a_i + b_i)` for the sorted-to-sorted matching.
    pub identity_value: Rat,
    pub min_value: Rat,
    /// Lexicographically first permutation attaining the minimum.
    pub min_perm: Vec<usize>,
    pub max_value: Rat,
    pub permutations: usize,
}

impl MatchingReport {
    pub fn identity_is_min(&self) -> bool {
        self.identity_value == self.min_value
    }
}

/// Enumerates every matching `π` of two ascending vectors and confirms that
/// `∏ (a_i + b_π(i))` is smallest for `π = id`.
pub fn verify_sorted_matching(a: &[Rat], b: &[Rat]) -> Result<MatchingReport> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "matching needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() > 8 {
        return Err(Error::BudgetExceeded(format!(
            "matching enumerates n! permutations; n = {} exceeds 8",
            a.len()
        )));
    }
    if a.iter().chain(b).any(Signed::is_negative) || a.iter().any(|x| *x > Rat::one()) {
        return Err(Error::Domain("entries must be nonnegative with a_i <= 1".into()));
    }
    if a.windows(2).any(|w| w[0] > w[1]) || b.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Param("both vectors must be ascending".into()));
    }
    let value = |perm: &[usize]| -> Rat { a.iter().zip(perm).map(|(x, &k)| x + &b[k]).product() };
    let mut perm: Vec<usize> = (0..a.len()).collect();
    let identity_value = value(&perm);
    let (mut min_value, mut min_perm) = (identity_value.clone(), perm.clone());
    let mut max_value = identity_value.clone();
    let mut count = 1;
    while next_permutation(&mut perm) {
        count += 1;
        let v = value(&perm);
        if v < min_value {
            min_value = v.clone();
            min_perm = perm.clone();
        }
        if v > max_value {
            max_value = v;
        }
    }
    Ok(MatchingReport {
        identity_value,
        min_value,
        min_perm,
        max_value,
        permutations: count,
    })
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn two_element_example() {
        let r = verify_sorted_matching(&[rat(1, 10), rat(1, 2)], &[rat(1, 5), rat(7, 10)]).unwrap();
        assert_eq!(r.identity_value, rat(9, 25));
        assert_eq!(r.max_value, rat(14, 25));
        assert!(r.identity_is_min());
        assert_eq!(r.permutations, 2);
    }

    #[test]
    fn constant_vector_ties() {
        let a = vec![rat(1, 4); 4];
        let b = vec![rat(1, 10), rat(1, 5), rat(1, 2), int(3)];
        let r = verify_sorted_matching(&a, &b).unwrap();
        assert_eq!(r.min_value, r.max_value);
        assert_eq!(r.permutations, 24);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(verify_sorted_matching(&[int(0)], &[]), Err(Error::ShapeMismatch(_))));
        let nine = vec![int(0); 9];
        assert!(matches!(verify_sorted_matching(&nine, &nine), Err(Error::BudgetExceeded(_))));
        assert!(verify_sorted_matching(&[int(2)], &[int(0)]).is_err());
        assert!(verify_sorted_matching(&[rat(1, 2), rat(1, 3)], &[int(0), int(0)]).is_err());
    }

    #[test]
    fn permutation_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    fn ascending(len: usize, cap: i64) -> impl Strategy<Value = Vec<Rat>> {
        prop::collection::vec(0..=cap, len).prop_map(move |mut v| {
            v.sort_unstable();
            v.into_iter().map(|x| rat(x, cap)).collect()
        })
    }

    proptest! {
        #[test]
        fn sorted_matching_is_minimal(
            (a, b) in (1usize..=6).prop_flat_map(|n| (ascending(n, 97), ascending(n, 53)))
        ) {
            prop_assert!(verify_sorted_matching(&a, &b).unwrap().identity_is_min());
        }
    }
}
