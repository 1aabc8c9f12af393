use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Binomial coefficient in machine integers; `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Binomial coefficient, zero outside `0 <= k <= n` (negative arguments allowed).
pub fn binomial_big(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `binomial` as a `usize`, panicking only if the value cannot be an index.
pub(crate) fn binomial_usize(n: usize, k: usize) -> Option<usize> {
    binomial(n, k).and_then(|b| usize::try_from(b).ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(4, 5), Some(0));
        assert_eq!(binomial(64, 32), Some(1_832_624_140_942_590_534));
        assert_eq!(binomial_big(6, 3), BigInt::from(20));
        assert_eq!(binomial_big(-1, 0), BigInt::zero());
        assert_eq!(binomial_big(3, -1), BigInt::zero());
    }

    #[test]
    fn pascal_rule() {
        for n in 1..30i64 {
            for k in 1..n {
                assert_eq!(
                    binomial_big(n, k),
                    binomial_big(n - 1, k - 1) + binomial_big(n - 1, k)
                );
            }
        }
    }
}
