//! Classical number theory used to precompute circuit constants.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b)`.
pub fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    (r0, x0, y0)
}

/// `a⁻¹ mod n`, if it exists.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = extended_gcd(i128::from(a % n), i128::from(n));
    (g == 1).then(|| x.rem_euclid(i128::from(n)) as u64)
}

pub fn mod_mul(a: u64, b: u64, n: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(n)) as u64
}

/// `base^exp mod n` by repeated squaring.
pub fn mod_pow(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut result = 1;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mod_mul(result, b, n);
        }
        b = mod_mul(b, b, n);
        exp >>= 1;
    }
    result
}

/// `⌈log₂ n⌉`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(n: u64) -> usize {
    assert!(n > 0, "ceil_log2 of zero");
    (64 - (n - 1).leading_zeros()) as usize
}

/// Qubits needed to hold every value below the modulus `n` (at least one).
pub fn register_width(n: u64) -> usize {
    ceil_log2(n).max(1)
}

/// Deterministic primality test by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(b, k)` with `b^k = n` and `k ≥ 2` maximal, if `n` is a perfect power.
pub fn perfect_power(n: u64) -> Option<(u64, u32)> {
    if n < 4 {
        return None;
    }
    for k in (2..=63u32).rev() {
        let r = (n as f64).powf(1.0 / f64::from(k)).round() as u64;
        for b in r.saturating_sub(1).max(2)..=r + 1 {
            if b.checked_pow(k) == Some(n) {
                return Some((b, k));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_exhaustive() {
        for n in 2..60u64 {
            for a in 0..n {
                match mod_inverse(a, n) {
                    Some(inv) => assert_eq!(a * inv % n, 1, "a={a} n={n}"),
                    None => assert_ne!(gcd(a, n), 1),
                }
            }
        }
    }

    #[test]
    fn pow_matches_naive() {
        for n in 1..40u64 {
            for a in 0..n {
                let mut naive = 1 % n;
                for e in 0..20u64 {
                    assert_eq!(mod_pow(a, e, n), naive, "{a}^{e} mod {n}");
                    naive = naive * a % n;
                }
            }
        }
        assert_eq!(mod_pow(2, 4, 11), 5);
        assert_eq!(mod_pow(4, 6, 35), 1);
    }

    #[test]
    fn logs_and_widths() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(11), 4);
        assert_eq!(ceil_log2(15), 4);
        assert_eq!(ceil_log2(16), 4);
        assert_eq!(ceil_log2(35), 6);
        assert_eq!(register_width(2), 1);
    }

    #[test]
    fn primes_and_powers() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(perfect_power(27), Some((3, 3)));
        assert_eq!(perfect_power(64), Some((2, 6)));
        assert_eq!(perfect_power(15), None);
        assert_eq!(perfect_power(49), Some((7, 2)));
    }

    #[test]
    fn euclid_identity() {
        for a in 0..50i128 {
            for b in 0..50i128 {
                let (g, x, y) = extended_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g as u64, gcd(a as u64, b as u64));
            }
        }
    }
}
