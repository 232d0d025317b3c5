//! Known identities for braces of order `p^n` with `p > n + 1`, checked on
//! sampled tuples:
//!
//! * `sum-expansion`: with `d_0 = a`, `d'_0 = b`, `d_{i+1} = d_i + d'_i`,
//!   `d'_{i+1} = d_i * d'_i`,
//!   `(a+b)*c = a*c + b*c + sum_{i=0}^{2s} (-1)^{i+1} ((d_i*d'_i)*c - d_i*(d'_i*c))`;
//! * `binomial-star` and `binomial-power`: `a^{o n} * b = sum C(n,i) e_i` and
//!   `a^{o n} = sum C(n,i) a_i`;
//! * `power-subgroups`: the `o`-subgroup generated by all `a^{o p^i}` is `p^i A`;
//! * `pa-products`: any product of `p - 1` elements of `pA`, with any
//!   elements of `A` mixed in, is 0;
//! * `scalar-words`: `(ma)*c - m(a*c)` lies in the span of the words in `a`
//!   and `c` with `c` once at the right end and `a` at least twice.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::brace::Brace;
use crate::group::{Element, PGroup, Span};
use crate::report::{Check, Report};
use crate::sample;
use crate::scalar::exact_binom;

/// Default number of sampled tuples per identity.
pub const DEFAULT_IDENTITY_SAMPLES: usize = 10_000;

/// Groups up to this size get every `a^{o p^i}` as a candidate generator.
const POWER_SUBGROUP_EXHAUSTIVE: u64 = 1 << 16;

/// Cap on distinct word values kept per degree in `scalar-words`.
const WORD_VALUES_PER_DEGREE: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityBudget {
    pub samples: usize,
    pub seed: u64,
}

impl Default for IdentityBudget {
    fn default() -> Self {
        Self {
            samples: DEFAULT_IDENTITY_SAMPLES,
            seed: sample::DEFAULT_SEED,
        }
    }
}

pub fn verify_quoted_identities(b: &Brace, budget: &IdentityBudget) -> Report {
    let mut report = Report::new();
    report.push(sum_expansion(b, budget));
    let (star, power) = binomial(b, budget);
    report.push(star);
    report.push(power);
    report.push(power_subgroups(b, budget));
    report.push(pa_products(b, budget));
    report.push(scalar_words(b, budget));
    report
}

fn samples_note(budget: &IdentityBudget) -> String {
    format!("{} samples", budget.samples)
}

/// Length of the left chain, or the `n + 1` bound when it cannot be computed.
fn chain_length(b: &Brace) -> usize {
    b.left_chain()
        .map(|c| c.len())
        .unwrap_or(b.group().n() as usize + 1)
}

/// Right-hand side of the `sum-expansion` identity.
pub fn sum_expansion_rhs(b: &Brace, a: &Element, bb: &Element, c: &Element, s: usize) -> Element {
    let g = b.group();
    let mut acc = g.add(&b.star(a, c), &b.star(bb, c));
    let mut d = a.clone();
    let mut dp = bb.clone();
    for i in 0..=2 * s {
        let dd = b.star(&d, &dp);
        let term = g.sub(&b.star(&dd, c), &b.star(&d, &b.star(&dp, c)));
        acc = if i % 2 == 0 {
            g.sub(&acc, &term)
        } else {
            g.add(&acc, &term)
        };
        d = g.add(&d, &dp);
        dp = dd;
    }
    acc
}

fn sum_expansion(b: &Brace, budget: &IdentityBudget) -> Check {
    let g = b.group();
    let s = chain_length(b);
    let mut rng = sample::rng(budget.seed ^ 0xe6e1);
    let mut witness = None;
    for _ in 0..budget.samples {
        let (a, bb, c) = (g.random(&mut rng), g.random(&mut rng), g.random(&mut rng));
        if b.star(&g.add(&a, &bb), &c) != sum_expansion_rhs(b, &a, &bb, &c, s) {
            witness = Some(format!("a={a} b={bb} c={c}"));
            break;
        }
    }
    Check::from_witness("sum-expansion", witness).with_note(samples_note(budget))
}

/// `sum_{i=1}^{n} C(n, i) x_i` for a chain `x_1, x_2, ...` (missing terms
/// are zero).
fn binomial_sum(g: &PGroup, n: u64, chain: &[Element]) -> Element {
    let m = g.exponent_modulus();
    g.combination(
        chain
            .iter()
            .enumerate()
            .take(n as usize)
            .map(|(i, x)| ((exact_binom(n, i as u64 + 1) % m as u128) as u64, x)),
    )
}

fn binomial(b: &Brace, budget: &IdentityBudget) -> (Check, Check) {
    let g = b.group();
    let p = g.p();
    let depth = g.n() as usize + 2;
    let mut rng = sample::rng(budget.seed ^ 0xb1_0e);
    let mut w_star = None;
    let mut w_power = None;
    for k in 0..budget.samples {
        let a = g.random(&mut rng);
        let c = g.random(&mut rng);
        // cycle through 1..=p, then random n up to 2p
        let n = if (k as u64) < p {
            k as u64 + 1
        } else {
            rng.random_range(1..=2 * p)
        };
        let an = b.circ_pow(&a, n);
        if w_star.is_none() {
            let e = b.star_powers(&a, &b.star(&a, &c), depth);
            if b.star(&an, &c) != binomial_sum(g, n, &e) {
                w_star = Some(format!("a={a} b={c} n={n}"));
            }
        }
        if w_power.is_none() {
            let chain = b.star_powers(&a, &a, depth);
            if an != binomial_sum(g, n, &chain) {
                w_power = Some(format!("a={a} n={n}"));
            }
        }
        if w_star.is_some() && w_power.is_some() {
            break;
        }
    }
    (
        Check::from_witness("binomial-star", w_star).with_note(samples_note(budget)),
        Check::from_witness("binomial-power", w_power).with_note(samples_note(budget)),
    )
}

/// The subgroup of `(A, o)` generated by `gens`.
pub fn circ_closure(b: &Brace, gens: impl IntoIterator<Item = Element>) -> Vec<Element> {
    let g = b.group();
    let mut member = vec![false; g.order() as usize];
    let zero = g.zero();
    member[g.index_of(&zero) as usize] = true;
    let mut elems = vec![zero];
    let mut used: Vec<Element> = Vec::new();
    for x in gens {
        if member[g.index_of(&x) as usize] {
            continue;
        }
        used.push(x);
        // right-multiply everything by every generator until closed; finite,
        // so the generated monoid is the generated group
        let mut i = 0;
        while i < elems.len() {
            for h in &used {
                let y = b.circ(&elems[i], h);
                let slot = &mut member[g.index_of(&y) as usize];
                if !*slot {
                    *slot = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
    }
    elems
}

fn power_subgroups(b: &Brace, budget: &IdentityBudget) -> Check {
    let g = b.group();
    if !g.is_enumerable() {
        return Check::fail("power-subgroups", "carrier too large to enumerate");
    }
    let p = g.p();
    let exhaustive = g.order() <= POWER_SUBGROUP_EXHAUSTIVE;
    let bases: Vec<Element> = if exhaustive {
        g.elements().collect()
    } else {
        let mut rng = sample::rng(budget.seed ^ 0x9a55);
        (0..budget.samples).map(|_| g.random(&mut rng)).collect()
    };
    for i in 0..=g.exponent() {
        let target = g.pk_image(i);
        let pi = p.pow(i);
        let powers: Vec<Element> = bases.iter().map(|a| b.circ_pow(a, pi)).collect();
        if let Some((a, x)) = bases.iter().zip(&powers).find(|(_, x)| !target.contains(x)) {
            return Check::fail(
                "power-subgroups",
                format!("a={a} i={i}: a^(o p^i) = {x} not in p^iA"),
            );
        }
        let closure = circ_closure(b, powers);
        if closure.len() as u64 != target.order() {
            return Check::fail(
                "power-subgroups",
                format!(
                    "i={i}: generated subgroup has {} elements, p^iA has {}",
                    closure.len(),
                    target.order()
                ),
            );
        }
    }
    let note = if exhaustive {
        String::from("all elements, all i")
    } else {
        samples_note(budget)
    };
    Check::pass("power-subgroups").with_note(note)
}

/// A random product tree with `pa` leaves from `pA` and `extra` leaves from
/// `A`, in random order.
fn random_product<R: Rng + ?Sized>(
    b: &Brace,
    pa: usize,
    extra: usize,
    rng: &mut R,
) -> (Element, String) {
    let g = b.group();
    let mut leaves: Vec<(Element, String)> = (0..pa + extra)
        .map(|k| {
            let x = g.random(rng);
            if k < pa {
                let y = g.smul(g.p(), &x);
                let s = format!("{y}");
                (y, s)
            } else {
                let s = format!("{x}");
                (x, s)
            }
        })
        .collect();
    for i in (1..leaves.len()).rev() {
        leaves.swap(i, rng.random_range(0..=i));
    }
    build_tree(b, &leaves, rng)
}

fn build_tree<R: Rng + ?Sized>(
    b: &Brace,
    leaves: &[(Element, String)],
    rng: &mut R,
) -> (Element, String) {
    if leaves.len() == 1 {
        return leaves[0].clone();
    }
    let split = rng.random_range(1..leaves.len());
    let (l, ls) = build_tree(b, &leaves[..split], rng);
    let (r, rs) = build_tree(b, &leaves[split..], rng);
    (b.star(&l, &r), format!("({ls}*{rs})"))
}

fn pa_products(b: &Brace, budget: &IdentityBudget) -> Check {
    let g = b.group();
    let k = g.p() as usize - 1;
    let mut rng = sample::rng(budget.seed ^ 0x0b0b);
    for t in 0..budget.samples {
        let extra = if t % 2 == 0 {
            0
        } else {
            rng.random_range(1..=3)
        };
        let (v, expr) = random_product(b, k, extra, &mut rng);
        if !v.is_zero() {
            return Check::fail("pa-products", format!("{expr} = {v}"));
        }
    }
    Check::pass("pa-products").with_note(samples_note(budget))
}

/// Values of the words of `a`-degree `1..=max_deg`: pure words in `a`, and
/// words ending in a single `c`. Distinct values only, capped per degree.
fn word_values(b: &Brace, a: &Element, c: &Element, max_deg: usize) -> Vec<Vec<Element>> {
    let mut pure: Vec<Vec<Element>> = vec![Vec::new(), vec![a.clone()]];
    let mut ending: Vec<Vec<Element>> = vec![vec![c.clone()]];
    for k in 1..=max_deg {
        if k >= 2 {
            let mut set = BTreeSet::new();
            for i in 1..k {
                for x in &pure[i] {
                    for y in &pure[k - i] {
                        set.insert(b.star(x, y));
                        if set.len() >= WORD_VALUES_PER_DEGREE {
                            break;
                        }
                    }
                }
            }
            pure.push(set.into_iter().collect());
        }
        let mut set = BTreeSet::new();
        for i in 1..=k {
            for x in &pure[i] {
                for z in &ending[k - i] {
                    set.insert(b.star(x, z));
                    if set.len() >= WORD_VALUES_PER_DEGREE {
                        break;
                    }
                }
            }
        }
        ending.push(set.into_iter().collect());
    }
    ending
}

fn scalar_words(b: &Brace, budget: &IdentityBudget) -> Check {
    let g = b.group();
    if !g.is_enumerable() {
        return Check::fail("scalar-words", "carrier too large to enumerate");
    }
    let max_deg = g.n() as usize + 2;
    let m_range = g.exponent_modulus();
    let mut rng = sample::rng(budget.seed ^ 0x777);
    for _ in 0..budget.samples {
        let a = g.random(&mut rng);
        let c = g.random(&mut rng);
        let m = rng.random_range(0..m_range);
        let lhs = g.sub(&b.star(&g.smul(m, &a), &c), &g.smul(m, &b.star(&a, &c)));
        if lhs.is_zero() {
            continue;
        }
        let words = word_values(b, &a, &c, max_deg);
        let span = Span::spanned_by(g, words.iter().skip(2).flatten()).expect("enumerable");
        if !span.contains(&lhs) {
            return Check::fail(
                "scalar-words",
                format!("a={a} c={c} m={m}: {lhs} outside the word span"),
            );
        }
    }
    Check::pass("scalar-words").with_note(samples_note(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::flows_brace;
    use crate::prelie::PreLieRing;

    fn affine() -> Brace {
        let g = PGroup::cyclic(5, 3).unwrap();
        Brace::from_fn(&g, |a, b| {
            let (x, y) = (a.coords()[0], b.coords()[0]);
            Element::new([(x + y + 5 * x * y) % 125])
        })
    }

    fn quick() -> IdentityBudget {
        IdentityBudget {
            samples: 500,
            ..IdentityBudget::default()
        }
    }

    #[test]
    fn trivial_brace() {
        let g = PGroup::new(5, &[2, 1]).unwrap();
        let r = verify_quoted_identities(&Brace::trivial(&g), &quick());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn affine_brace() {
        let b = affine();
        let r = verify_quoted_identities(&b, &quick());
        assert!(r.passed(), "{r}");
        // (5x) * (5y) = 125xy = 0
        let g = b.group();
        for x in 0..25u64 {
            for y in 0..25u64 {
                assert!(b.star(&g.element([5 * x]), &g.element([5 * y])).is_zero());
            }
        }
    }

    #[test]
    fn two_generator_flows_brace() {
        let g = PGroup::new(7, &[2, 1]).unwrap();
        let consts = vec![g.element([7, 1]), g.zero(), g.zero(), g.zero()];
        let b = flows_brace(&PreLieRing::from_constants(&g, consts).unwrap()).unwrap();
        let r = verify_quoted_identities(&b, &quick());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn sum_expansion_detects_broken_star() {
        // a o b = a + b + 5 a^2 b is not a brace; the sum formula fails
        let g = PGroup::cyclic(5, 3).unwrap();
        let b = Brace::lazy(&g, |a, b| {
            let (x, y) = (a.coords()[0], b.coords()[0]);
            Element::new([(x + y + 5 * x * x * y) % 125])
        });
        assert!(!sum_expansion(&b, &quick()).passed);
    }

    #[test]
    fn closure_of_all_elements_is_everything() {
        let b = affine();
        let all = circ_closure(&b, b.group().elements());
        assert_eq!(all.len(), 125);
        let g = b.group();
        let five = circ_closure(&b, [g.element([5])]);
        assert_eq!(five.len(), 25);
    }
}
