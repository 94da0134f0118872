use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial_big(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // exact at every step: acc = C(n - k + i + 1, i + 1) after the division
        acc *= n - k + i + 1;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Number of multisets of size `i` drawn from `m` kinds, `C(m + i - 1, i)`,
/// with the conventions `multiset(m, 0) = 1` and `multiset(0, i > 0) = 0`.
///
/// These are the coefficients of `(1 - t)^{-m}`.
pub fn multiset(m: u64, i: u64) -> BigInt {
    if i == 0 {
        BigInt::one()
    } else if m == 0 {
        BigInt::zero()
    } else {
        binomial_big(m + i - 1, i as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial_big(5, 2), BigInt::from(10));
        for n in 0..10 {
            assert_eq!(binomial_big(n, 0), BigInt::one());
            assert_eq!(binomial_big(n, n as i64), BigInt::one());
        }
        assert_eq!(binomial_big(5, -1), BigInt::zero());
        assert_eq!(binomial_big(5, 6), BigInt::zero());
    }

    #[test]
    fn matches_factorial_ratio() {
        for (n, k) in [(60u64, 30i64), (100, 37), (17, 4)] {
            let oracle = factorial(n) / (factorial(k as u64) * factorial(n - k as u64));
            assert_eq!(binomial_big(n, k), oracle);
        }
    }

    #[test]
    fn pascal_rule() {
        for n in 1..40u64 {
            for k in 1..n as i64 {
                assert_eq!(
                    binomial_big(n, k),
                    binomial_big(n - 1, k - 1) + binomial_big(n - 1, k)
                );
            }
        }
    }

    #[test]
    fn multiset_conventions() {
        assert_eq!(multiset(0, 0), BigInt::one());
        assert_eq!(multiset(0, 3), BigInt::zero());
        assert_eq!(multiset(3, 2), BigInt::from(6));
    }
}
