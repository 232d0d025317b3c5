//! Exhaustive or fixed-seed sampled iteration over element tuples.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::{Element, PGroup};

/// Tuple spaces up to this size are walked exhaustively by [`Coverage::auto`].
pub const EXHAUSTIVE_BUDGET: u128 = 50_000_000;

/// Default number of samples when a space is too large to enumerate.
pub const DEFAULT_SAMPLES: usize = 100_000;

pub const DEFAULT_SEED: u64 = 0x5eed_b7ac_e000_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl Coverage {
    pub fn sampled(samples: usize, seed: u64) -> Self {
        Coverage::Sampled { samples, seed }
    }

    /// Exhaustive when `|A|^arity` fits [`EXHAUSTIVE_BUDGET`], sampled otherwise.
    pub fn auto(group: &PGroup, arity: u32, samples: usize, seed: u64) -> Self {
        Self::auto_with_budget(group, arity, samples, seed, EXHAUSTIVE_BUDGET)
    }

    pub fn auto_with_budget(
        group: &PGroup,
        arity: u32,
        samples: usize,
        seed: u64,
        budget: u128,
    ) -> Self {
        let space = (group.order() as u128).checked_pow(arity);
        match space {
            Some(s) if s <= budget && group.is_enumerable() => Coverage::Exhaustive,
            _ => Coverage::Sampled { samples, seed },
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Coverage::Exhaustive)
    }

    /// Same policy with a different seed, so independent checks do not share
    /// sample streams.
    pub fn reseeded(self, salt: u64) -> Self {
        match self {
            Coverage::Exhaustive => Coverage::Exhaustive,
            Coverage::Sampled { samples, seed } => Coverage::Sampled {
                samples,
                seed: seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15),
            },
        }
    }
}

/// Sampling policy shared by every verifier: how many samples to draw when a
/// space is too big, the seed, and whether to force exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub samples: usize,
    pub seed: u64,
    pub exhaustive: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            exhaustive: false,
        }
    }
}

impl Budget {
    pub fn with_samples(samples: usize) -> Self {
        Self {
            samples,
            ..Self::default()
        }
    }

    pub fn coverage(&self, group: &PGroup, arity: u32) -> Coverage {
        if self.exhaustive && group.is_enumerable() {
            Coverage::Exhaustive
        } else {
            Coverage::auto(group, arity, self.samples, self.seed)
        }
    }

    /// Coverage for a check with its own sample stream.
    pub fn coverage_for(&self, group: &PGroup, arity: u32, salt: u64) -> Coverage {
        self.coverage(group, arity).reseeded(salt)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Calls `f` on every element (or on samples) until it reports a failure.
pub fn first_failure_1<F>(g: &PGroup, cov: Coverage, mut f: F) -> Option<Element>
where
    F: FnMut(&Element) -> bool,
{
    match cov {
        Coverage::Exhaustive => g.elements().find(|a| !f(a)),
        Coverage::Sampled { samples, seed } => {
            let mut r = rng(seed);
            (0..samples).map(|_| g.random(&mut r)).find(|a| !f(a))
        }
    }
}

pub fn first_failure_2<F>(g: &PGroup, cov: Coverage, mut f: F) -> Option<(Element, Element)>
where
    F: FnMut(&Element, &Element) -> bool,
{
    match cov {
        Coverage::Exhaustive => {
            let all: Vec<Element> = g.elements().collect();
            for a in &all {
                for b in &all {
                    if !f(a, b) {
                        return Some((a.clone(), b.clone()));
                    }
                }
            }
            None
        }
        Coverage::Sampled { samples, seed } => {
            let mut r = rng(seed);
            for _ in 0..samples {
                let a = g.random(&mut r);
                let b = g.random(&mut r);
                if !f(&a, &b) {
                    return Some((a, b));
                }
            }
            None
        }
    }
}

pub fn first_failure_3<F>(
    g: &PGroup,
    cov: Coverage,
    mut f: F,
) -> Option<(Element, Element, Element)>
where
    F: FnMut(&Element, &Element, &Element) -> bool,
{
    match cov {
        Coverage::Exhaustive => {
            let all: Vec<Element> = g.elements().collect();
            for a in &all {
                for b in &all {
                    for c in &all {
                        if !f(a, b, c) {
                            return Some((a.clone(), b.clone(), c.clone()));
                        }
                    }
                }
            }
            None
        }
        Coverage::Sampled { samples, seed } => {
            let mut r = rng(seed);
            for _ in 0..samples {
                let a = g.random(&mut r);
                let b = g.random(&mut r);
                let c = g.random(&mut r);
                if !f(&a, &b, &c) {
                    return Some((a, b, c));
                }
            }
            None
        }
    }
}

/// Index-level variant for table-backed structures: `f` receives element
/// indices. Only valid for enumerable groups.
pub fn first_failure_3_idx<F>(
    order: usize,
    cov: Coverage,
    mut f: F,
) -> Option<(usize, usize, usize)>
where
    F: FnMut(usize, usize, usize) -> bool,
{
    match cov {
        Coverage::Exhaustive => {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !f(a, b, c) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
            None
        }
        Coverage::Sampled { samples, seed } => {
            use rand::Rng;
            let mut r = rng(seed);
            for _ in 0..samples {
                let a = r.random_range(0..order);
                let b = r.random_range(0..order);
                let c = r.random_range(0..order);
                if !f(a, b, c) {
                    return Some((a, b, c));
                }
            }
            None
        }
    }
}
