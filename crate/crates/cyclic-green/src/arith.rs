//! Exact integer helpers.

pub fn gcd(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Binomial coefficient C(n, k), computed multiplicatively with gcd reduction.
///
/// Returns `None` on overflow of u128.
pub fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) / i stays integral; divide out common factors first
        let mut num = n - k + i;
        let mut den = i;
        let g = gcd(num, den);
        num /= g;
        den /= g;
        let g = gcd(acc, den);
        acc /= g;
        den /= g;
        debug_assert_eq!(den, 1);
        acc = acc.checked_mul(num)?;
    }
    Some(acc)
}

pub fn gcd_u(a: usize, b: usize) -> usize {
    gcd(a as u128, b as u128) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(binomial(64, 32), Some(1_832_624_140_942_590_534));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..90u128 {
            for k in 1..n {
                let lhs = binomial(n, k).unwrap();
                let rhs = binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap();
                assert_eq!(lhs, rhs, "C({n},{k})");
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(binomial(1000, 500), None);
    }
}
