//! The map `f(a) = sum_{i=1}^{p-1} (C(p-1, i-1)/i) e_i`, its inverse `g`
//! on `A/ann(p^2)`, and the reconstruction identities built from it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::brace::{coverage_note, Brace};
use crate::correspondence::derived::DerivedPreLie;
use crate::correspondence::shift::{alpha_coefficients, gamma_coefficients};
use crate::error::{Error, Result};
use crate::group::{Element, PGroup};
use crate::report::{Check, Report};
use crate::sample::{self, Budget, Coverage};
use crate::scalar::prime_factors;

/// Classes up to this many are walked exhaustively by the `α` check.
pub const CLASS_EXHAUSTIVE_LIMIT: u64 = 10_000;

/// `f(a)` with `e_1 = a`, `e_{i+1} = a * e_i`.
pub fn f_map(b: &Brace, a: &Element) -> Element {
    let g = b.group();
    let c = g.scalars().frobenius_coefficients();
    let chain = b.star_powers(a, a, c.len());
    g.combination(c.iter().copied().zip(chain.iter()))
}

/// `[f_1] = [f(a)]`, `[f_{i+1}] = [f(a)] ⊙ [f_i]`, for `i < p`.
fn f_chain(d: &DerivedPreLie, fa: &Element, first: &Element) -> Vec<Element> {
    let p = d.group().p() as usize;
    let mut out = Vec::with_capacity(p - 1);
    let mut cur = first.clone();
    for _ in 0..p - 1 {
        out.push(cur.clone());
        if cur.is_zero() {
            break;
        }
        cur = d.odot(fa, &cur);
    }
    out
}

fn class_coverage(q: &PGroup, arity: u32, budget: &Budget, salt: u64) -> Coverage {
    let space = (q.order() as u128).checked_pow(arity);
    if q.is_enumerable() && space.is_some_and(|s| s <= CLASS_EXHAUSTIVE_LIMIT.pow(arity) as u128) {
        Coverage::Exhaustive
    } else {
        budget.coverage_for(q, arity, salt)
    }
}

/// `p f(a) = a^{o p}` for every (or sampled) `a`.
pub fn verify_f_power(b: &Brace, budget: &Budget) -> Check {
    let g = b.group();
    let cov = budget.coverage_for(g, 1, 41);
    let w = sample::first_failure_1(g, cov, |a| {
        g.smul(g.p(), &f_map(b, a)) == b.circ_pow(a, g.p())
    });
    Check::from_witness("f-power", w.map(|a| format!("a={a}"))).with_note(coverage_note(cov))
}

/// `α_1 = 1` and `[a] = sum α_i [f_i(a)]` over the classes of `A/ann(p^2)`.
pub fn verify_alpha_identity(d: &DerivedPreLie, budget: &Budget) -> Report {
    let b = d.source();
    let q = d.group();
    let alpha = alpha_coefficients(&b.group().scalars());
    let mut report = Report::new();
    report.push(Check::from_witness(
        "alpha-1",
        (alpha[0] != 1).then(|| format!("alpha_1 = {}", alpha[0])),
    ));
    let cov = class_coverage(q, 1, budget, 42);
    let w = sample::first_failure_1(q, cov, |x| {
        let fa = d.quotient().project(&f_map(b, &d.quotient().lift(x)));
        let chain = f_chain(d, &fa, &fa);
        q.combination(alpha.iter().copied().zip(chain.iter())) == *x
    });
    report.push(
        Check::from_witness("alpha-identity", w.map(|x| format!("[a]={x}")))
            .with_note(coverage_note(cov)),
    );
    report
}

/// `γ_1 = 1` and `[a * b] = sum γ_i [q_i(a, b)]` over pairs of classes.
pub fn verify_gamma_identity(d: &DerivedPreLie, budget: &Budget) -> Report {
    let b = d.source();
    let q = d.group();
    let gamma = gamma_coefficients(&b.group().scalars());
    let mut report = Report::new();
    report.push(Check::from_witness(
        "gamma-1",
        (gamma[0] != 1).then(|| format!("gamma_1 = {}", gamma[0])),
    ));
    let cov = class_coverage(q, 2, budget, 43);
    let w = sample::first_failure_2(q, cov, |x, y| {
        let a = d.quotient().lift(x);
        let fa = d.quotient().project(&f_map(b, &a));
        let q1 = d.odot(&fa, y);
        let chain = f_chain(d, &fa, &q1);
        let lhs = d.quotient().project(&b.star(&a, &d.quotient().lift(y)));
        lhs == q.combination(gamma.iter().copied().zip(chain.iter()))
    });
    report.push(
        Check::from_witness("gamma-identity", w.map(|(x, y)| format!("[a]={x} [b]={y}")))
            .with_note(coverage_note(cov)),
    );
    report
}

/// `[a] -> [f(a)]` tabulated on `A/ann(p^2)` as a permutation.
#[derive(Debug, Clone)]
pub struct FPermutation {
    quotient: PGroup,
    image: Vec<u32>,
    cycle_lengths: Vec<u64>,
    /// `None` if the lcm overflows.
    order: Option<u128>,
}

impl FPermutation {
    /// Tabulates `f` on class representatives. Fails with a witness pair if
    /// two classes collide.
    pub fn new(d: &DerivedPreLie) -> Result<Self> {
        let q = d.group().clone();
        if !q.is_enumerable() {
            return Err(Error::TooLarge(q.order()));
        }
        let n = q.order() as usize;
        let image: Vec<u32> = q
            .elements()
            .map(|x| {
                q.index_of(
                    &d.quotient()
                        .project(&f_map(d.source(), &d.quotient().lift(&x))),
                ) as u32
            })
            .collect();
        let mut preimage = alloc::vec![u32::MAX; n];
        for (i, &y) in image.iter().enumerate() {
            let slot = &mut preimage[y as usize];
            if *slot != u32::MAX {
                return Err(Error::BadTable(format!(
                    "f([{}]) = f([{}]) = [{}]",
                    q.element_at(*slot as u64),
                    q.element_at(i as u64),
                    q.element_at(y as u64)
                )));
            }
            *slot = i as u32;
        }
        let mut seen = alloc::vec![false; n];
        let mut cycle_lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = image[i] as usize;
                len += 1;
            }
            cycle_lengths.push(len);
        }
        let order = cycle_lengths.iter().try_fold(1u128, |acc, &l| {
            (acc / gcd(acc, l as u128)).checked_mul(l as u128)
        });
        Ok(Self {
            quotient: q,
            image,
            cycle_lengths,
            order,
        })
    }

    pub fn quotient(&self) -> &PGroup {
        &self.quotient
    }

    pub fn apply(&self, x: &Element) -> Element {
        self.quotient
            .element_at(self.image[self.quotient.index_of(x) as usize] as u64)
    }

    fn cycle_length(&self, start: usize) -> u128 {
        let mut len = 1u128;
        let mut i = self.image[start] as usize;
        while i != start {
            i = self.image[i] as usize;
            len += 1;
        }
        len
    }

    /// `f^k(x)`; `k` is reduced modulo the cycle length of `x`.
    pub fn iterate(&self, x: &Element, k: u128) -> Element {
        let start = self.quotient.index_of(x) as usize;
        let len = self.cycle_length(start);
        let mut i = start;
        for _ in 0..k % len {
            i = self.image[i] as usize;
        }
        self.quotient.element_at(i as u64)
    }

    pub fn cycle_lengths(&self) -> &[u64] {
        &self.cycle_lengths
    }

    /// `N`, the order of the permutation (`None` beyond `u128`).
    pub fn order(&self) -> Option<u128> {
        self.order
    }

    /// `g = f^{N-1}`. Every cycle length divides `N`, so without `N` the
    /// cycle length minus one is the same exponent.
    pub fn g(&self, x: &Element) -> Element {
        let k = match self.order {
            Some(n) => n - 1,
            None => self.cycle_length(self.quotient.index_of(x) as usize) - 1,
        };
        self.iterate(x, k)
    }

    /// Checks `f o g = g o f = id` on every class and that every cycle
    /// length divides `(p^p)!`.
    pub fn verify(&self) -> Report {
        let q = &self.quotient;
        let mut report = Report::new();
        report.push(Check::pass("f-bijective").with_note(format!(
            "{} classes, {} cycles, order {}",
            q.order(),
            self.cycle_lengths.len(),
            self.order.map_or_else(|| String::from("> 2^128"), |n| format!("{n}"))
        )));
        let w = q
            .elements()
            .find(|x| self.apply(&self.g(x)) != *x || self.g(&self.apply(x)) != *x);
        report.push(Check::from_witness(
            "g-inverse",
            w.map(|x| format!("[a]={x}")),
        ));
        let p = q.p();
        let w = self
            .cycle_lengths
            .iter()
            .find(|&&l| !divides_factorial_of_p_pow_p(l, p))
            .map(|l| format!("cycle length {l}"));
        report.push(Check::from_witness("cycle-divides-factorial", w));
        report
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `v_q(N!)` by Legendre's formula.
pub fn legendre(n: u128, q: u128) -> u128 {
    let mut v = 0;
    let mut m = n;
    while m > 0 {
        m /= q;
        v += m;
    }
    v
}

/// Whether `l` divides `(p^p)!`, by comparing prime valuations. When `p^p`
/// overflows, `u128::MAX` stands in for it: valuations of `N!` grow with
/// `N`, so divisibility of the smaller factorial implies it for the larger.
pub fn divides_factorial_of_p_pow_p(l: u64, p: u64) -> bool {
    let n = (p as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
    let mut rest = l;
    for q in prime_factors(l) {
        let mut k = 0u128;
        while rest % q == 0 {
            rest /= q;
            k += 1;
        }
        if legendre(n, q as u128) < k {
            return false;
        }
    }
    true
}

/// The permutation and its checks in one report.
pub fn verify_f_bijection(d: &DerivedPreLie) -> Report {
    match FPermutation::new(d) {
        Ok(perm) => perm.verify(),
        Err(e) => {
            let mut r = Report::new();
            r.push(Check::fail("f-bijective", format!("{e}")));
            r
        }
    }
}

/// `g([a])` via the permutation order.
pub fn g_map(d: &DerivedPreLie, x: &Element) -> Result<Element> {
    Ok(FPermutation::new(d)?.g(x))
}

/// Sorted cycle lengths, for reports.
pub fn describe_cycles(perm: &FPermutation) -> String {
    let mut lens = perm.cycle_lengths().to_vec();
    lens.sort_unstable();
    format!("{lens:?}")
}
