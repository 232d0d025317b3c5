//! Truncated power series in the shift `L = a * (-)`.
//!
//! With `e_1 = a`, `e_{i+1} = a * e_i` we have `e_i = L^{i-1} a`. Writing
//! `c_i = C(p, i) / p`:
//!
//! * `f(a) = F a` with `F = sum_i c_i L^{i-1}`,
//! * `[f(a)] ⊙ [x] = [T x]` with `T = sum_i c_i L^i = L F`,
//!
//! so the chains `f_j` and `q_i` become `T^{j-1} F a` and `T^i b`, and the
//! coefficient systems are unitriangular in this basis.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::ScalarRing;

/// `sum_k coeffs[k] L^k` modulo `L^{coeffs.len()}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSeries {
    ring: ScalarRing,
    coeffs: Vec<u64>,
}

impl ShiftSeries {
    pub fn zero(ring: &ScalarRing, len: usize) -> Self {
        Self {
            ring: *ring,
            coeffs: vec![0; len],
        }
    }

    pub fn one(ring: &ScalarRing, len: usize) -> Self {
        Self::monomial(ring, len, 0)
    }

    /// `L^k`.
    pub fn monomial(ring: &ScalarRing, len: usize, k: usize) -> Self {
        let mut s = Self::zero(ring, len);
        if k < len {
            s.coeffs[k] = 1;
        }
        s
    }

    pub fn from_coeffs(ring: &ScalarRing, coeffs: Vec<u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| ring.reduce(c as u128)).collect();
        Self {
            ring: *ring,
            coeffs,
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ring.add(a, b))
            .collect();
        Self {
            ring: self.ring,
            coeffs,
        }
    }

    pub fn scale(&self, s: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.mul(a, s)).collect();
        Self {
            ring: self.ring,
            coeffs,
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len();
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = self.ring.add(out[i + j], self.ring.mul(a, b));
            }
        }
        Self {
            ring: self.ring,
            coeffs: out,
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(&self.ring, self.len()), |acc, _| acc.mul(self))
    }
}

/// `F = sum_{i=1}^{p-1} c_i L^{i-1}` and `T = L F`, modulo `L^len`.
pub fn frobenius_series(ring: &ScalarRing, len: usize) -> (ShiftSeries, ShiftSeries) {
    let c = ring.frobenius_coefficients();
    let mut f = ShiftSeries::zero(ring, len);
    let mut t = ShiftSeries::zero(ring, len);
    for (i, &ci) in c.iter().enumerate() {
        if i < len {
            f.coeffs[i] = ci;
        }
        if i + 1 < len {
            t.coeffs[i + 1] = ci;
        }
    }
    (f, t)
}

/// `α_1 .. α_{p-1}` with `sum_j α_j T^{j-1} F = 1` modulo `L^{p-1}`, so that
/// `[a] = sum_j α_j [f_j(a)]`.
pub fn alpha_coefficients(ring: &ScalarRing) -> Vec<u64> {
    let p = ring.p() as usize;
    let len = p - 1;
    let (f, t) = frobenius_series(ring, len);
    let mut residual = ShiftSeries::one(ring, len);
    let mut alpha = Vec::with_capacity(p - 1);
    let mut basis = f;
    for j in 0..p - 1 {
        // basis = T^j F = L^j + higher terms
        let aj = residual.coeffs[j];
        residual = residual.add(&basis.scale(ring.neg(aj)));
        alpha.push(aj);
        basis = basis.mul(&t);
    }
    debug_assert!(residual.coeffs.iter().all(|&c| c == 0));
    alpha
}

/// `γ_1 .. γ_{p-1}` with `sum_i γ_i T^i = L` modulo `L^{p-1}`, so that
/// `[a * b] = sum_i γ_i [q_i(a, b)]`. `T^{p-1}` vanishes at this precision,
/// so `γ_{p-1}` is not determined and is returned as 0.
pub fn gamma_coefficients(ring: &ScalarRing) -> Vec<u64> {
    let p = ring.p() as usize;
    let len = p - 1;
    let (_, t) = frobenius_series(ring, len);
    let mut residual = ShiftSeries::monomial(ring, len, 1);
    let mut gamma = Vec::with_capacity(p - 1);
    for i in 1..p {
        let ti = t.pow(i);
        let gi = if i < len { residual.coeffs[i] } else { 0 };
        residual = residual.add(&ti.scale(ring.neg(gi)));
        gamma.push(gi);
    }
    debug_assert!(residual.coeffs.iter().all(|&c| c == 0));
    gamma
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: u64, m: u32) -> ScalarRing {
        ScalarRing::new(p, m).unwrap()
    }

    #[test]
    fn leading_coefficients() {
        for (p, m) in [(5, 3), (7, 5), (11, 4), (13, 2)] {
            let ring = r(p, m);
            let a = alpha_coefficients(&ring);
            let g = gamma_coefficients(&ring);
            assert_eq!(a.len(), p as usize - 1);
            assert_eq!(g.len(), p as usize - 1);
            assert_eq!(a[0], 1);
            assert_eq!(g[0], 1);
        }
    }

    /// Independent check: substitute back into the defining identities.
    #[test]
    fn solutions_satisfy_their_systems() {
        for (p, m) in [(5, 3), (7, 5), (11, 3)] {
            let ring = r(p, m);
            let len = p as usize - 1;
            let (f, t) = frobenius_series(&ring, len);
            let alpha = alpha_coefficients(&ring);
            let mut sum = ShiftSeries::zero(&ring, len);
            for (j, &aj) in alpha.iter().enumerate() {
                sum = sum.add(&t.pow(j).mul(&f).scale(aj));
            }
            assert_eq!(sum, ShiftSeries::one(&ring, len));

            let gamma = gamma_coefficients(&ring);
            let mut sum = ShiftSeries::zero(&ring, len);
            for (i, &gi) in gamma.iter().enumerate() {
                sum = sum.add(&t.pow(i + 1).scale(gi));
            }
            assert_eq!(sum, ShiftSeries::monomial(&ring, len, 1));
        }
    }

    /// `sum γ_i T^i = L` is `L` times the `α` system one degree lower, so the
    /// two agree below the undetermined top coefficient.
    #[test]
    fn gamma_agrees_with_alpha() {
        for (p, m) in [(5, 3), (7, 5), (13, 4)] {
            let ring = r(p, m);
            let a = alpha_coefficients(&ring);
            let g = gamma_coefficients(&ring);
            let k = p as usize - 2;
            assert_eq!(a[..k], g[..k]);
        }
    }

    /// p = 5 by hand: F = 1 + 2L + 2L^2 + L^3, T = L + 2L^2 + 2L^3.
    /// Solving modulo L^4 over the integers:
    /// α = (1, -2, 6, -21) and γ = (1, -2, 6, 0).
    #[test]
    fn p5_by_hand() {
        let ring = r(5, 3);
        assert_eq!(alpha_coefficients(&ring), vec![1, 123, 6, 104]);
        assert_eq!(gamma_coefficients(&ring), vec![1, 123, 6, 0]);
    }
}
