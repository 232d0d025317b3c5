//! The pre-Lie ring `(A/ann(p^2), +, •)` derived from a brace.
//!
//! `[a] ⊙ [b] = [℘^{-1}((p a) * b)]` and
//! `[x] • [y] = sum_{i=0}^{p-2} ξ^{p-1-i} [ξ^i x] ⊙ [y]`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::brace::{coverage_note, random_member, Brace};
use crate::error::Result;
use crate::group::{Element, PGroup, Quotient};
use crate::prelie::PreLieRing;
use crate::report::{Check, Report};
use crate::sample::{self, Budget};

/// Quotients up to this size get a precomputed `•` table.
pub const BULLET_TABLE_LIMIT: u64 = 1024;

#[derive(Debug, Clone)]
pub struct DerivedPreLie {
    source: Brace,
    quotient: Quotient,
    xi: u64,
    /// `ξ^i` for `0 <= i < p`.
    xi_pows: Vec<u64>,
    bullet: Option<Arc<[u32]>>,
}

impl DerivedPreLie {
    /// Tabulates `•` when the quotient has at most [`BULLET_TABLE_LIMIT`]
    /// elements.
    pub fn new(source: &Brace) -> Result<Self> {
        let mut d = Self::lazy(source)?;
        let q = d.group().clone();
        if q.order() <= BULLET_TABLE_LIMIT {
            let all: Vec<Element> = q.elements().collect();
            let mut table = Vec::with_capacity(all.len() * all.len());
            for x in &all {
                for y in &all {
                    table.push(q.index_of(&d.bullet(x, y)) as u32);
                }
            }
            d.bullet = Some(table.into());
        }
        Ok(d)
    }

    pub fn lazy(source: &Brace) -> Result<Self> {
        let g = source.group();
        let quotient = Quotient::new(&g.ann(2))?;
        let r = g.scalars();
        let xi = r.xi();
        let xi_pows = (0..g.p()).map(|i| r.pow(xi, i)).collect();
        Ok(Self {
            source: source.clone(),
            quotient,
            xi,
            xi_pows,
            bullet: None,
        })
    }

    pub fn source(&self) -> &Brace {
        &self.source
    }

    /// `A -> A/ann(p^2)`.
    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// The carrier `A/ann(p^2)`.
    pub fn group(&self) -> &PGroup {
        self.quotient.target()
    }

    pub fn xi(&self) -> u64 {
        self.xi
    }

    /// The canonical section: every coordinate divided by `p`. On inputs
    /// outside `pA` the remainder is dropped; [`verify`](Self::verify)
    /// checks that this never happens.
    fn section(g: &PGroup, x: &Element) -> Element {
        let p = g.p();
        Element::new(x.coords().iter().map(|&c| c / p))
    }

    /// `⊙` on representatives in `A`.
    pub fn odot_reps(&self, a: &Element, b: &Element) -> Element {
        let g = self.source.group();
        let pa = g.smul(g.p(), a);
        self.quotient
            .project(&Self::section(g, &self.source.star(&pa, b)))
    }

    /// `⊙` with a caller-supplied section of multiplication by `p`.
    pub fn odot_with_section<S>(&self, x: &Element, y: &Element, section: S) -> Element
    where
        S: Fn(&Element) -> Element,
    {
        let g = self.source.group();
        let pa = g.smul(g.p(), &self.quotient.lift(x));
        self.quotient
            .project(&section(&self.source.star(&pa, &self.quotient.lift(y))))
    }

    pub fn odot(&self, x: &Element, y: &Element) -> Element {
        self.odot_reps(&self.quotient.lift(x), &self.quotient.lift(y))
    }

    pub fn bullet(&self, x: &Element, y: &Element) -> Element {
        let q = self.group();
        if let Some(t) = &self.bullet {
            let idx = q.index_of(x) * q.order() + q.index_of(y);
            return q.element_at(t[idx as usize] as u64);
        }
        let p = q.p() as usize;
        let mut acc = q.zero();
        for i in 0..p - 1 {
            let xi_x = q.smul(self.xi_pows[i], x);
            let term = q.smul(self.xi_pows[p - 1 - i], &self.odot(&xi_x, y));
            acc = q.add(&acc, &term);
        }
        acc
    }

    /// `(A/ann(p^2), +, •)` as a [`PreLieRing`].
    pub fn ring(&self) -> PreLieRing {
        let q = self.group();
        if let Some(t) = &self.bullet {
            PreLieRing::from_table(q, t.to_vec()).expect("bullet table matches its carrier")
        } else {
            let d = self.clone();
            PreLieRing::from_fn(q, move |x, y| d.bullet(x, y))
        }
    }

    /// Checks that `⊙` is defined and independent of all choices, then runs
    /// the pre-Lie verifier on `•`.
    pub fn verify(&self, budget: &Budget) -> Report {
        let g = self.source.group();
        let q = self.group();
        let mut report = Report::new();

        let c2 = budget.coverage_for(g, 2, 31);
        let w = sample::first_failure_2(g, c2, |a, b| {
            g.in_pa(&self.source.star(&g.smul(g.p(), a), b))
        });
        report.push(
            Check::from_witness(
                "odot-defined",
                w.map(|(a, b)| format!("(pa)*b not in pA for a={a} b={b}")),
            )
            .with_note(coverage_note(c2)),
        );

        let kernel = self.quotient.kernel().clone();
        let c2q = budget.coverage_for(q, 2, 32);
        let mut rng = sample::rng(budget.seed ^ 0x0d07);
        let w = sample::first_failure_2(q, c2q, |x, y| {
            let z1 = random_member(&kernel, &mut rng);
            let z2 = random_member(&kernel, &mut rng);
            let a = g.add(&self.quotient.lift(x), &z1);
            let b = g.add(&self.quotient.lift(y), &z2);
            self.odot_reps(&a, &b) == self.odot(x, y)
        });
        report.push(
            Check::from_witness("odot-well-defined", w.map(|(x, y)| format!("x={x} y={y}")))
                .with_note(coverage_note(c2q)),
        );

        // Another section of multiplication by p: shift by a nonzero element
        // of ann(p) depending on the input.
        let gg = g.clone();
        let perturbed = move |x: &Element| {
            let base = Self::section(&gg, x);
            let p = gg.p();
            let shift = gg.element(
                x.coords()
                    .iter()
                    .zip(gg.factors())
                    .enumerate()
                    .map(|(j, (&c, &e))| ((c / p + j as u64 + 1) % p) * p.pow(e - 1)),
            );
            gg.add(&base, &shift)
        };
        let w = sample::first_failure_2(q, c2q.reseeded(33), |x, y| {
            self.odot_with_section(x, y, &perturbed) == self.odot(x, y)
        });
        report.push(
            Check::from_witness(
                "section-independence",
                w.map(|(x, y)| format!("x={x} y={y}")),
            )
            .with_note(coverage_note(c2q)),
        );

        report.extend(self.ring().verify(budget));
        if let Ok(s) = self.ring().nilpotency_index() {
            let bound = q.n() as usize + 1;
            let witness = (s > bound.max(2)).then(|| format!("index {s} exceeds {}", bound.max(2)));
            report.push(
                Check::from_witness("nilpotency-bound", witness).with_note(format!("index {s}")),
            );
        }
        report
    }
}

/// The derived ring of `b`: `•` on `A/ann(p^2)`.
pub fn derive(b: &Brace) -> Result<DerivedPreLie> {
    DerivedPreLie::new(b)
}

/// Describes the first pair where two rings on the same carrier differ.
pub fn ring_difference(x: &PreLieRing, y: &PreLieRing, budget: &Budget) -> Option<String> {
    if x.group() != y.group() {
        return Some(format!(
            "carriers {} and {}",
            x.group().describe(),
            y.group().describe()
        ));
    }
    x.first_difference(y, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::flows_brace;

    fn el(c: u64) -> Element {
        Element::new([c])
    }

    fn affine() -> Brace {
        let g = PGroup::cyclic(5, 3).unwrap();
        Brace::from_fn(&g, |a, b| {
            let (x, y) = (a.coords()[0], b.coords()[0]);
            Element::new([(x + y + 5 * x * y) % 125])
        })
    }

    #[test]
    fn trivial_brace_gives_zero_ring() {
        let g = PGroup::new(5, &[3]).unwrap();
        let d = derive(&Brace::trivial(&g)).unwrap();
        assert_eq!(d.group().order(), 5);
        for x in d.group().elements() {
            for y in d.group().elements() {
                assert!(d.odot(&x, &y).is_zero());
                assert!(d.bullet(&x, &y).is_zero());
            }
        }
        assert!(d.verify(&Budget::default()).passed());
    }

    /// Oracle for the affine brace: `(5a) * b = 25ab`, so
    /// `[a] ⊙ [b] = [5ab]` and `[x] • [y] = sum ξ^{4-i} ξ^i 5xy = 4 [5xy]`.
    #[test]
    fn affine_brace_direct_formula() {
        let d = derive(&affine()).unwrap();
        assert_eq!(d.xi(), 57);
        for x in 0..5u64 {
            for y in 0..5u64 {
                assert_eq!(d.odot(&el(x), &el(y)), el(5 * x * y % 5));
                assert_eq!(d.bullet(&el(x), &el(y)), el(0));
            }
        }
        assert!(d.verify(&Budget::default()).passed());
    }

    #[test]
    fn bullet_table_matches_lazy() {
        let g = PGroup::cyclic(7, 4).unwrap();
        let r = PreLieRing::cyclic_scaled(&g, 7).unwrap();
        let b = flows_brace(&r).unwrap();
        let dense = derive(&b).unwrap();
        let lazy = DerivedPreLie::lazy(&b).unwrap();
        assert!(ring_difference(&dense.ring(), &lazy.ring(), &Budget::default()).is_none());
        let report = dense.verify(&Budget::default());
        assert!(report.passed(), "{report}");
    }
}
