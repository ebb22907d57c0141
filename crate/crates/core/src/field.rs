//! Exact arithmetic in the prime field F_p (p an odd prime) and the
//! additive character Exp.
//!
//! Field elements are plain `u64` residues in `[0, p)`; every operation
//! reduces its result, so values stay canonical. The character is fixed
//! once per field as `k -> e^{2*pi*i*k/p}`; replacing it by `Exp(c*x)`
//! only rescales the cocycles downstream, so one canonical choice
//! suffices.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default upper bound on the modulus. Operator dimensions grow as `p^n`,
/// so large primes are rejected up front instead of silently crawling.
pub const DEFAULT_MODULUS_LIMIT: u64 = 13;

/// An odd prime field F_p, carried by value next to the residues it governs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Creates F_p, requiring p to be an odd prime no larger than
    /// [`DEFAULT_MODULUS_LIMIT`].
    pub fn new(p: u64) -> Result<Self> {
        Self::with_limit(p, DEFAULT_MODULUS_LIMIT)
    }

    /// Creates F_p with a caller-chosen modulus limit.
    pub fn with_limit(p: u64, limit: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if p > limit {
            return Err(Error::ModulusTooLarge { p, limit });
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn elem(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; division by zero is an explicit error.
    pub fn inv(self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The element h with 2h = 1, i.e. (p+1)/2. Exists since p is odd.
    #[inline]
    pub fn half(self) -> u64 {
        self.p.div_ceil(2)
    }

    /// Legendre symbol of a: 0 for a = 0, +1 for squares, -1 for non-squares.
    pub fn legendre(self, a: u64) -> i32 {
        if a.is_multiple_of(self.p) {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// The additive character Exp(a) = e^{2*pi*i*a/p}.
    pub fn character(self, a: u64) -> Complex64 {
        let angle = std::f64::consts::TAU * ((a % self.p) as f64) / (self.p as f64);
        Complex64::from_polar(1.0, angle)
    }

    /// Iterator over all residues 0..p.
    pub fn elements(self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_primes_and_even_moduli() {
        for p in [0, 1, 2, 4, 6, 9, 12] {
            assert!(matches!(PrimeField::new(p), Err(Error::NotOddPrime(_))));
        }
    }

    #[test]
    fn rejects_moduli_over_limit() {
        assert!(matches!(
            PrimeField::new(17),
            Err(Error::ModulusTooLarge { .. })
        ));
        assert_eq!(PrimeField::with_limit(17, 17).unwrap().modulus(), 17);
    }

    #[test]
    fn inverse_examples() {
        let f3 = PrimeField::new(3).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f3.inv(2).unwrap(), 2);
        assert_eq!(f5.inv(3).unwrap(), 2);
        assert_eq!(f3.neg(1), 2);
    }

    #[test]
    fn inverse_times_self_is_one_for_all_nonzero() {
        for p in [3, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(f.inv(a).unwrap(), a), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(0), Err(Error::DivisionByZero(5)));
        assert_eq!(f.div(3, 0), Err(Error::DivisionByZero(5)));
    }

    #[test]
    fn half_examples() {
        assert_eq!(PrimeField::new(3).unwrap().half(), 2);
        assert_eq!(PrimeField::new(5).unwrap().half(), 3);
        assert_eq!(PrimeField::new(7).unwrap().half(), 4);
        for p in [3, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(f.mul(f.half(), 2), 1);
        }
    }

    #[test]
    fn character_examples() {
        let f3 = PrimeField::new(3).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        assert!((f3.character(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert!((f3.character(1) - omega).norm() < 1e-15);
        let expected = Complex64::from_polar(1.0, 4.0 * std::f64::consts::PI / 5.0);
        assert!((f5.character(2) - expected).norm() < 1e-15);
    }

    #[test]
    fn legendre_splits_squares_and_nonsquares() {
        let f = PrimeField::new(7).unwrap();
        let squares: Vec<u64> = (1..7).filter(|&a| f.legendre(a) == 1).collect();
        assert_eq!(squares, vec![1, 2, 4]);
        assert_eq!(f.legendre(0), 0);
    }

    proptest! {
        #[test]
        fn character_is_additive(a in 0u64..13, b in 0u64..13) {
            for p in [3u64, 5, 7, 11, 13] {
                let f = PrimeField::new(p).unwrap();
                let (a, b) = (a % p, b % p);
                let lhs = f.character(f.add(a, b));
                let rhs = f.character(a) * f.character(b);
                prop_assert!((lhs - rhs).norm() < 1e-14);
            }
        }
    }
}
