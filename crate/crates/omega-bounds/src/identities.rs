//! Integer-exact identities for S_ω(x) = Σ_{n≤x} ω(n).
//!
//! ω = 𝟙 ∗ ϖ (ϖ the characteristic function of the primes), so the hyperbola
//! method splits S_ω(x) into two short sums minus a correction:
//!
//!   S_ω(x) = Σ_{p≤y} ⌊x/p⌋ + Σ_{n≤x/y} π(x/n) − ⌊x/y⌋·π(y),   1 ≤ y ≤ x.
//!
//! This is an identity, not an approximation: every evaluation must match the
//! sieve exactly, and the total must not depend on the choice of y.

use crate::sieve::PrimeTable;
use crate::{Error, Result};

/// The three terms of the hyperbola split at a given (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperbolaSplit {
    pub x: u64,
    pub y: u64,
    /// Σ_{p≤y} ⌊x/p⌋
    pub term_prime_sum: u128,
    /// Σ_{n≤x/y} π(x/n)
    pub term_pi_sum: u128,
    /// ⌊x/y⌋·π(y)
    pub term_correction: u128,
}

impl HyperbolaSplit {
    /// term_prime_sum + term_pi_sum − term_correction = S_ω(x).
    pub fn total(&self) -> u128 {
        self.term_prime_sum + self.term_pi_sum - self.term_correction
    }
}

/// Evaluate the right-hand side of the hyperbola identity. The table must
/// cover x, since π is queried at ⌊x/n⌋ for n down to 1.
pub fn hyperbola_rhs(x: u64, y: u64, table: &PrimeTable) -> Result<HyperbolaSplit> {
    if y == 0 || y > x {
        return Err(Error::domain("y", format!("need 1 <= y <= x, got y={y}, x={x}")));
    }
    if table.limit() < x {
        return Err(Error::InsufficientTable { limit: table.limit(), needed: x });
    }
    let mut term_prime_sum: u128 = 0;
    for &p in table.primes() {
        if p > y {
            break;
        }
        term_prime_sum += u128::from(x / p);
    }
    let mut term_pi_sum: u128 = 0;
    for n in 1..=(x / y) {
        term_pi_sum += u128::from(table.prime_count(x / n)?);
    }
    let term_correction = u128::from(x / y) * u128::from(table.prime_count(y)?);
    Ok(HyperbolaSplit { x, y, term_prime_sum, term_pi_sum, term_correction })
}

/// ω(n) as the divisor sum Σ_{d|n} ϖ(d), with ϖ realized by deterministic
/// Miller–Rabin. Independent of the sieve path.
pub fn convolution_omega(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::domain("n", "0 has no divisors"));
    }
    let mut count = 0u32;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            if is_prime_u64(d) {
                count += 1;
            }
            let q = n / d;
            if q != d && is_prime_u64(q) {
                count += 1;
            }
        }
        d += 1;
    }
    Ok(count)
}

/// Deterministic Miller–Rabin for 64-bit integers. The witness set
/// {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is exact below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{factor_count_naive, prefix_scan, primes_up_to, Stream};

    #[test]
    fn worked_example_x100_y10() {
        let t = primes_up_to(100).unwrap().with_count_index();
        let h = hyperbola_rhs(100, 10, &t).unwrap();
        assert_eq!(h.term_prime_sum, 117); // 50 + 33 + 20 + 14
        assert_eq!(h.term_pi_sum, 94); // 25+15+11+9+8+6+6+5+5+4
        assert_eq!(h.term_correction, 40); // 10 * pi(10)
        assert_eq!(h.total(), 171);
    }

    #[test]
    fn boundary_y_equals_x() {
        let t = primes_up_to(2).unwrap();
        let h = hyperbola_rhs(2, 2, &t).unwrap();
        assert_eq!(h.total(), 1); // S_omega(2)
    }

    #[test]
    fn rejects_bad_y_and_short_table() {
        let t = primes_up_to(100).unwrap();
        assert!(hyperbola_rhs(100, 0, &t).is_err());
        assert!(hyperbola_rhs(100, 101, &t).is_err());
        assert!(matches!(hyperbola_rhs(200, 10, &t), Err(Error::InsufficientTable { .. })));
    }

    #[test]
    fn matches_sieve_and_is_y_independent() {
        let x = 5000u64;
        let t = primes_up_to(x).unwrap().with_count_index();
        let s = prefix_scan(x, 777, Stream::SegmentBoundary, |_| {}).unwrap();
        let mut totals = Vec::new();
        for y in [1u64, 2, 3, 70, 71, 4999, 5000] {
            let h = hyperbola_rhs(x, y, &t).unwrap();
            assert_eq!(h.total(), s.sum_omega, "y = {y}");
            totals.push(h.total());
        }
        assert!(totals.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn convolution_examples() {
        assert_eq!(convolution_omega(1).unwrap(), 0);
        assert_eq!(convolution_omega(12).unwrap(), 2);
        // 9699690 = 2*3*5*7*11*13*17*19
        assert_eq!(convolution_omega(9_699_690).unwrap(), 8);
        assert!(convolution_omega(0).is_err());
    }

    #[test]
    fn convolution_matches_naive_to_10k() {
        for n in 1..=10_000u64 {
            let (om, _) = factor_count_naive(n).unwrap();
            assert_eq!(convolution_omega(n).unwrap(), om, "n = {n}");
        }
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..5000u64 {
            let mut prime = n >= 2;
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    prime = false;
                    break;
                }
                d += 1;
            }
            assert_eq!(is_prime_u64(n), prime, "n = {n}");
        }
        // a few larger known cases
        assert!(is_prime_u64(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime_u64(2_147_483_649));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
    }
}
