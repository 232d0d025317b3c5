//! The group of flows of a left-nilpotent pre-Lie ring.
//!
//! With `L_a(b) = a . b`:
//!
//! * `W(a) = a + a.a/2! + a.(a.a)/3! + ...`
//! * `Omega = W^{-1}`, found by fixed-point iteration,
//! * `a * b = sum_{k >= 1} L_{Omega(a)}^k (b) / k!` and `a o b = a * b + a + b`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::brace::{Brace, DENSE_TABLE_LIMIT};
use crate::error::{Error, Result};
use crate::group::{Element, PGroup, ENUMERATION_LIMIT};
use crate::prelie::PreLieRing;

/// Carriers up to this size get a precomputed `Omega` table.
pub const OMEGA_TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone)]
pub struct FlowContext {
    ring: PreLieRing,
    /// Nilpotency index: `L_{a_1} ... L_{a_{s-1}} = 0` on `A`.
    index: usize,
    /// `1/k!` for `k < index`, reduced modulo the group exponent.
    inv_fact: Vec<u64>,
}

impl FlowContext {
    /// Rejects rings whose left chain does not reach 0, and rings whose
    /// series would need `1/k!` with `k >= p`.
    pub fn new(ring: &PreLieRing) -> Result<Self> {
        let index = ring.nilpotency_index()?;
        Self::with_index(ring, index)
    }

    /// Uses a known nilpotency index instead of measuring it (for carriers
    /// too large to enumerate). The index is trusted.
    pub fn with_index(ring: &PreLieRing, index: usize) -> Result<Self> {
        let g = ring.group();
        if index as u64 > g.p() {
            return Err(Error::NotNilpotent(format!(
                "index {index} needs 1/k! for k >= p = {}",
                g.p()
            )));
        }
        let r = g.scalars();
        let inv_fact = (0..index.max(1) as u64)
            .map(|k| r.inv_factorial(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ring: ring.clone(),
            index,
            inv_fact,
        })
    }

    pub fn ring(&self) -> &PreLieRing {
        &self.ring
    }

    pub fn group(&self) -> &PGroup {
        self.ring.group()
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// `sum_{k >= 1} L_a^k (b) / k!`.
    pub fn exp_l(&self, a: &Element, b: &Element) -> Element {
        let g = self.group();
        let mut acc = g.zero();
        let mut term = b.clone();
        for k in 1..self.index {
            term = self.ring.mul(a, &term);
            if term.is_zero() {
                break;
            }
            acc = g.add(&acc, &g.smul(self.inv_fact[k], &term));
        }
        acc
    }

    /// `W(a) = sum_{k >= 1} L_a^{k-1}(a) / k!`.
    pub fn w(&self, a: &Element) -> Element {
        let g = self.group();
        let mut acc = a.clone();
        let mut term = a.clone();
        for k in 2..self.index {
            term = self.ring.mul(a, &term);
            if term.is_zero() {
                break;
            }
            acc = g.add(&acc, &g.smul(self.inv_fact[k], &term));
        }
        acc
    }

    /// Iteration cap for [`omega`](Self::omega).
    pub fn omega_bound(&self) -> usize {
        let n = self.group().n() as usize;
        (n + 2) * (n + 2)
    }

    /// The `x` with `W(x) = a`, via `x_{t+1} = a - (W(x_t) - x_t)` from
    /// `x_0 = a`. Returns only after checking `W(x) = a`.
    pub fn omega(&self, a: &Element) -> Result<Element> {
        let g = self.group();
        let mut x = a.clone();
        for _ in 0..=self.omega_bound() {
            let wx = self.w(&x);
            if wx == *a {
                return Ok(x);
            }
            x = g.sub(a, &g.sub(&wx, &x));
        }
        Err(Error::NoConvergence(format!(
            "Omega({a}) after {} iterations",
            self.omega_bound()
        )))
    }

    /// `a * b = exp_L(Omega(a), b)`.
    pub fn star(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.exp_l(&self.omega(a)?, b))
    }

    /// `Omega(a)` for every element, indexed like [`PGroup::element_at`].
    pub fn omega_table(&self) -> Result<Vec<Element>> {
        let g = self.group();
        if g.order() > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(g.order()));
        }
        g.elements().map(|a| self.omega(&a)).collect()
    }

    /// The brace `a o b = a + b + exp_L(Omega(a), b)`. `Omega` is tabulated
    /// up front, so every failure surfaces here.
    pub fn brace(&self) -> Result<Brace> {
        let g = self.group().clone();
        let ctx = self.clone();
        if g.order() <= OMEGA_TABLE_LIMIT {
            let table: Arc<[Element]> = self.omega_table()?.into();
            let gg = g.clone();
            let f = move |a: &Element, b: &Element| {
                let oa = &table[gg.index_of(a) as usize];
                gg.add(&gg.add(a, b), &ctx.exp_l(oa, b))
            };
            Ok(if g.order() <= DENSE_TABLE_LIMIT {
                Brace::from_fn(&g, f)
            } else {
                Brace::lazy(&g, f)
            })
        } else {
            let gg = g.clone();
            Ok(Brace::lazy(&g, move |a, b| {
                let oa = ctx.omega(a).expect("Omega converges on a nilpotent ring");
                gg.add(&gg.add(a, b), &ctx.exp_l(&oa, b))
            }))
        }
    }
}

/// The group of flows of `ring`.
pub fn flows_brace(ring: &PreLieRing) -> Result<Brace> {
    FlowContext::new(ring)?.brace()
}
