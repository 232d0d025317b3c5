//! Exact arithmetic in `Z/p^m` and the distinguished constants built on it.
//!
//! Scalars are plain `u64` residues in `[0, p^m)`. Products go through `u128`,
//! so any `p^m < 2^62` is supported.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest admissible modulus `p^m`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Deterministic primality test by trial division (inputs are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `base^exp mod modulus` by square and multiply.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `modulus` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, modulus: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % modulus as i128, modulus as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(modulus as i128) as u64)
}

/// The smallest primitive root modulo `p^2`.
///
/// A primitive root modulo `p^2` is a primitive root modulo every `p^k`, so
/// this is also a primitive root modulo `p^p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 3 {
        return Err(Error::PrimeTooSmall { p, min: 3 });
    }
    let p2 = p * p;
    let phi = p * (p - 1);
    let factors = prime_factors(phi);
    (2..p2)
        .find(|&g| g % p != 0 && factors.iter().all(|&q| pow_mod(g, phi / q, p2) != 1))
        .ok_or(Error::NotPrime(p))
}

/// `Z/p^m` for a prime `p` and precision `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScalarRing {
    p: u64,
    m: u32,
    modulus: u64,
}

impl ScalarRing {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 3 {
            return Err(Error::PrimeTooSmall { p, min: 3 });
        }
        if m == 0 {
            return Err(Error::PrecisionTooLarge { p, m });
        }
        let mut modulus = 1u64;
        for _ in 0..m {
            modulus = modulus
                .checked_mul(p)
                .filter(|&v| v < MAX_MODULUS)
                .ok_or(Error::PrecisionTooLarge { p, m })?;
        }
        Ok(Self { p, m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p^m`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, x: u128) -> u64 {
        (x % self.modulus as u128) as u64
    }

    pub fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 + b as u128)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u64) -> u64 {
        let a = a % self.modulus;
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.modulus)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.modulus)
    }

    /// `C(n, k) mod p^m` from Pascal's rule, so no modular division is needed.
    /// Out-of-range `k` gives 0.
    pub fn binom(&self, n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k) as usize;
        let mut row = vec![0u64; k + 1];
        row[0] = 1 % self.modulus;
        for i in 1..=n as usize {
            for j in (1..=k.min(i)).rev() {
                row[j] = self.add(row[j], row[j - 1]);
            }
        }
        row[k]
    }

    pub fn factorial(&self, k: u64) -> u64 {
        (1..=k).fold(1 % self.modulus, |acc, i| self.mul(acc, i))
    }

    /// The unit `s` with `s * k! = 1`; only defined for `k < p`.
    pub fn inv_factorial(&self, k: u64) -> Result<u64> {
        if k >= self.p {
            return Err(Error::NotInvertible(k));
        }
        self.inv(self.factorial(k)).ok_or(Error::NotInvertible(k))
    }

    /// The Teichmüller lift of the smallest primitive root modulo `p^2`.
    ///
    /// The lift is the unique `(p-1)`-th root of unity congruent to the
    /// primitive root modulo `p`; the Frobenius iteration `x -> x^p`
    /// stabilises on it after at most `m` steps.
    pub fn xi(&self) -> u64 {
        let gamma = primitive_root(self.p).expect("p validated at construction");
        let mut x = gamma % self.modulus;
        loop {
            let next = self.pow(x, self.p);
            if next == x {
                return x;
            }
            x = next;
        }
    }

    /// `-(1 + p + ... + p^{p-1})`, the inverse of `p - 1`.
    pub fn twist_constant(&self) -> u64 {
        let mut sum = 0u64;
        let mut power = 1 % self.modulus;
        for _ in 0..self.p {
            sum = self.add(sum, power);
            power = self.mul(power, self.p);
        }
        self.neg(sum)
    }

    /// The integers `C(p-1, i-1) / i = C(p, i) / p` for `i = 1..p-1`, reduced.
    pub fn frobenius_coefficients(&self) -> Vec<u64> {
        (1..self.p)
            .map(|i| self.reduce(exact_binom(self.p - 1, i - 1) / i as u128))
            .collect()
    }
}

/// `C(n, k)` over the integers; callers keep `n` small enough for `u128`.
pub fn exact_binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
