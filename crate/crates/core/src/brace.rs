//! Left braces `(A, +, o)` on a [`PGroup`].
//!
//! The `o` operation is either a dense index table (small carriers) or an
//! arbitrary thread-safe closure evaluated on demand.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Element, PGroup, Quotient, Span, Subgroup};
use crate::report::{Check, Report};
use crate::sample::{self, Budget, Coverage};

/// Carriers up to this size get a precomputed `o` table.
pub const DENSE_TABLE_LIMIT: u64 = 4096;

pub type CircFn = Arc<dyn Fn(&Element, &Element) -> Element + Send + Sync>;

#[derive(Clone)]
enum Circ {
    Table(Arc<[u32]>),
    Lazy(CircFn),
}

/// A left brace: `(A, +)` abelian, `(A, o)` a group with neutral element 0,
/// and `a o (b + c) = a o b - a + a o c`.
#[derive(Clone)]
pub struct Brace {
    group: PGroup,
    circ: Circ,
}

impl fmt::Debug for Brace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.circ {
            Circ::Table(_) => "table",
            Circ::Lazy(_) => "lazy",
        };
        write!(f, "Brace({:?}, {kind})", self.group)
    }
}

/// Which distinguished subgroup to factor out in [`Brace::ideal_quotient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealKind {
    /// `ann(p^i)`
    Ann,
    /// `p^i A`
    PowerImage,
}

impl Brace {
    /// `a o b = a + b`.
    pub fn trivial(group: &PGroup) -> Self {
        let g = group.clone();
        Self::from_fn(group, move |a, b| g.add(a, b))
    }

    /// Wraps a closure; tabulates it when the carrier is at most
    /// [`DENSE_TABLE_LIMIT`] elements.
    pub fn from_fn<F>(group: &PGroup, f: F) -> Self
    where
        F: Fn(&Element, &Element) -> Element + Send + Sync + 'static,
    {
        let lazy = Self::lazy(group, f);
        if group.order() <= DENSE_TABLE_LIMIT {
            lazy.tabulate()
        } else {
            lazy
        }
    }

    /// Wraps a closure without tabulating.
    pub fn lazy<F>(group: &PGroup, f: F) -> Self
    where
        F: Fn(&Element, &Element) -> Element + Send + Sync + 'static,
    {
        Self {
            group: group.clone(),
            circ: Circ::Lazy(Arc::new(f)),
        }
    }

    /// A brace from a row-major table of element indices; entry
    /// `a * |A| + b` is the index of `a o b`.
    pub fn from_table(group: &PGroup, table: Vec<u32>) -> Result<Self> {
        let order = group.order();
        if !group.is_enumerable() || table.len() as u64 != order * order {
            return Err(Error::BadTable(format!(
                "expected {} entries, found {}",
                order.saturating_mul(order),
                table.len()
            )));
        }
        if let Some(pos) = table.iter().position(|&v| v as u64 >= order) {
            return Err(Error::BadTable(format!("entry {pos} out of range")));
        }
        Ok(Self {
            group: group.clone(),
            circ: Circ::Table(table.into()),
        })
    }

    /// Evaluates every product into a dense table (no-op if already dense).
    pub fn tabulate(&self) -> Self {
        if let Circ::Table(_) = self.circ {
            return self.clone();
        }
        let all: Vec<Element> = self.group.elements().collect();
        let mut table = Vec::with_capacity(all.len() * all.len());
        for a in &all {
            for b in &all {
                table.push(self.group.index_of(&self.circ(a, b)) as u32);
            }
        }
        Self {
            group: self.group.clone(),
            circ: Circ::Table(table.into()),
        }
    }

    pub fn group(&self) -> &PGroup {
        &self.group
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.circ, Circ::Table(_))
    }

    /// The dense table, if any.
    pub fn table(&self) -> Option<&[u32]> {
        match &self.circ {
            Circ::Table(t) => Some(t),
            Circ::Lazy(_) => None,
        }
    }

    pub fn circ(&self, a: &Element, b: &Element) -> Element {
        match &self.circ {
            Circ::Table(t) => {
                let n = self.group.order();
                let idx = self.group.index_of(a) * n + self.group.index_of(b);
                self.group.element_at(t[idx as usize] as u64)
            }
            Circ::Lazy(f) => f(a, b),
        }
    }

    /// `a * b = a o b - a - b`.
    pub fn star(&self, a: &Element, b: &Element) -> Element {
        let g = &self.group;
        g.sub(&g.sub(&self.circ(a, b), a), b)
    }

    /// `lambda_a(b) = a o b - a`.
    pub fn lambda(&self, a: &Element, b: &Element) -> Element {
        self.group.sub(&self.circ(a, b), a)
    }

    /// `a o a o ... o a` (`k` factors), by square and multiply.
    pub fn circ_pow(&self, a: &Element, mut k: u64) -> Element {
        let mut acc = self.group.zero();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.circ(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.circ(&base, &base);
            }
        }
        acc
    }

    /// The `o`-inverse. Dense tables are searched; otherwise `a^{o(|A|-1)}`,
    /// which is the inverse because `|(A, o)| = |A|`.
    pub fn inverse(&self, a: &Element) -> Element {
        match &self.circ {
            Circ::Table(t) => {
                let n = self.group.order() as usize;
                let row = self.group.index_of(a) as usize * n;
                let zero = self.group.index_of(&self.group.zero()) as u32;
                match t[row..row + n].iter().position(|&v| v == zero) {
                    Some(x) => self.group.element_at(x as u64),
                    None => self.group.zero(),
                }
            }
            Circ::Lazy(_) => self.circ_pow(a, self.group.order() - 1),
        }
    }

    /// `a_1 = a`, `a_{i+1} = a * a_i`, stopping at the first zero term.
    pub fn star_powers(&self, a: &Element, b: &Element, max_len: usize) -> Vec<Element> {
        let mut out = Vec::new();
        let mut cur = b.clone();
        while out.len() < max_len && !cur.is_zero() {
            out.push(cur.clone());
            cur = self.star(a, &cur);
        }
        out
    }

    /// Checks the brace axioms.
    pub fn verify(&self, budget: &Budget) -> Report {
        let mut report = Report::new();
        let g = &self.group;
        let c1 = budget.coverage_for(g, 1, 1);
        let c2 = budget.coverage_for(g, 2, 2);
        let c3 = budget.coverage_for(g, 3, 3);
        let note3 = coverage_note(c3);

        let zero = g.zero();
        let w = sample::first_failure_1(g, c1, |a| {
            &self.circ(&zero, a) == a && &self.circ(a, &zero) == a
        });
        report.push(Check::from_witness("identity", w.map(|a| format!("a={a}"))));

        let w = sample::first_failure_1(g, c1, |a| {
            let inv = self.inverse(a);
            self.circ(a, &inv).is_zero() && self.circ(&inv, a).is_zero()
        });
        report.push(Check::from_witness("inverses", w.map(|a| format!("a={a}"))));

        let w = sample::first_failure_2(g, c2, |a, b| g.add(a, b) == g.add(b, a));
        report.push(Check::from_witness(
            "additive-abelian",
            w.map(|(a, b)| format!("a={a} b={b}")),
        ));

        if let (Some(t), true) = (self.table(), c3.is_exhaustive() || g.is_enumerable()) {
            let (assoc, law) = self.verify_table_triples(t, c3);
            report.push(Check::from_witness("associativity", assoc).with_note(note3.clone()));
            report.push(Check::from_witness("left-brace-law", law).with_note(note3));
        } else {
            let w = sample::first_failure_3(g, c3, |a, b, c| {
                self.circ(&self.circ(a, b), c) == self.circ(a, &self.circ(b, c))
            });
            report.push(
                Check::from_witness(
                    "associativity",
                    w.map(|(a, b, c)| format!("a={a} b={b} c={c}")),
                )
                .with_note(note3.clone()),
            );
            let w = sample::first_failure_3(g, c3.reseeded(4), |a, b, c| {
                self.circ(a, &g.add(b, c)) == g.add(&g.sub(&self.circ(a, b), a), &self.circ(a, c))
            });
            report.push(
                Check::from_witness(
                    "left-brace-law",
                    w.map(|(a, b, c)| format!("a={a} b={b} c={c}")),
                )
                .with_note(note3),
            );
        }
        report
    }

    fn verify_table_triples(&self, t: &[u32], cov: Coverage) -> (Option<String>, Option<String>) {
        let g = &self.group;
        let n = g.order() as usize;
        let all: Vec<Element> = g.elements().collect();
        let (add, sub) = g.index_tables();
        let circ = |a: usize, b: usize| t[a * n + b] as usize;
        let fmt3 =
            |(a, b, c): (usize, usize, usize)| format!("a={} b={} c={}", all[a], all[b], all[c]);
        let assoc = sample::first_failure_3_idx(n, cov, |a, b, c| {
            circ(circ(a, b), c) == circ(a, circ(b, c))
        })
        .map(fmt3);
        let law = sample::first_failure_3_idx(n, cov.reseeded(4), |a, b, c| {
            let lhs = circ(a, add[b * n + c] as usize);
            let rhs = add[sub[circ(a, b) * n + a] as usize * n + circ(a, c)] as usize;
            lhs == rhs
        })
        .map(fmt3);
        (assoc, law)
    }

    /// `A = A^1 ⊇ A^2 ⊇ ...` with `A^{i+1}` spanned by `a * x`, `x ∈ A^i`;
    /// ends with the zero subgroup. Left distributivity of `*` means the
    /// generators of `A^i` suffice for `x`.
    pub fn left_chain(&self) -> Result<Vec<Span>> {
        let g = &self.group;
        let all: Vec<Element> = g.elements().collect();
        let mut chain = vec![Span::spanned_by(g, &g.generators())?];
        let bound = g.n() as usize + 1;
        while !chain.last().expect("non-empty").is_trivial() {
            if chain.len() > bound {
                return Err(Error::ChainDidNotTerminate);
            }
            let gens: Vec<Element> = chain.last().expect("non-empty").generators().to_vec();
            let mut next = Span::new(g)?;
            for a in &all {
                for x in &gens {
                    next.insert(&self.star(a, x));
                }
            }
            chain.push(next);
        }
        Ok(chain)
    }

    /// Checks that `s` is an ideal: `lambda_a(S) ⊆ S` and `a o S o a^- ⊆ S`.
    pub fn check_ideal(&self, s: &Subgroup, budget: &Budget) -> Option<String> {
        let g = &self.group;
        let gens = s.generators();
        let c1 = budget.coverage_for(g, 1, 11);
        let w = sample::first_failure_1(g, c1, |a| {
            gens.iter().all(|x| s.contains(&self.lambda(a, x)))
        });
        if let Some(a) = w {
            return Some(format!("lambda_{a} leaves the subgroup"));
        }
        let exhaustive = (g.order() as u128) * (s.order() as u128) <= 1_000_000;
        let mut rng = sample::rng(budget.seed ^ 0x1dea1);
        let pairs: Vec<(Element, Element)> = if exhaustive {
            let members: Vec<Element> = s.elements().collect();
            g.elements()
                .flat_map(|a| members.iter().map(move |x| (a.clone(), x.clone())))
                .collect()
        } else {
            (0..budget.samples.min(10_000))
                .map(|_| (g.random(&mut rng), random_member(s, &mut rng)))
                .collect()
        };
        for (a, x) in pairs {
            let conj = self.circ(&self.circ(&a, &x), &self.inverse(&a));
            if !s.contains(&conj) {
                return Some(format!("a={a} x={x}: a o x o a^- = {conj}"));
            }
        }
        None
    }

    /// The factor brace `A / S` for `S = ann(p^i)` or `p^i A`.
    pub fn ideal_quotient(&self, i: u32, kind: IdealKind, budget: &Budget) -> Result<Brace> {
        let s = match kind {
            IdealKind::Ann => self.group.ann(i),
            IdealKind::PowerImage => self.group.pk_image(i),
        };
        if let Some(witness) = self.check_ideal(&s, budget) {
            let name = match kind {
                IdealKind::Ann => format!("ann(p^{i})"),
                IdealKind::PowerImage => format!("p^{i}A"),
            };
            return Err(Error::NotIdeal { name, witness });
        }
        Ok(self.quotient_unchecked(&Quotient::new(&s)?))
    }

    /// `[a] o [b] = [a o b]` on canonical representatives, without the
    /// ideal check.
    pub fn quotient_unchecked(&self, q: &Quotient) -> Brace {
        let parent = self.clone();
        let qq = q.clone();
        Brace::from_fn(q.target(), move |a, b| {
            qq.project(&parent.circ(&qq.lift(a), &qq.lift(b)))
        })
    }

    /// First pair where the two `o` operations differ (same carrier).
    pub fn first_difference(&self, other: &Brace, cov: Coverage) -> Option<String> {
        if self.group != other.group {
            return Some(String::from("different carriers"));
        }
        sample::first_failure_2(&self.group, cov, |a, b| self.circ(a, b) == other.circ(a, b)).map(
            |(a, b)| {
                format!(
                    "a={a} b={b}: {} vs {}",
                    self.circ(&a, &b),
                    other.circ(&a, &b)
                )
            },
        )
    }
}

pub(crate) fn coverage_note(c: Coverage) -> String {
    match c {
        Coverage::Exhaustive => String::from("exhaustive"),
        Coverage::Sampled { samples, .. } => format!("{samples} samples"),
    }
}

pub(crate) fn random_member<R: Rng + ?Sized>(s: &Subgroup, rng: &mut R) -> Element {
    let g = s.group();
    let p = g.p();
    Element::new(
        g.factors()
            .iter()
            .zip(s.steps())
            .map(|(&e, &st)| rng.random_range(0..p.pow(e - st)) * p.pow(st)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `a o b = a + b + 5ab` on `Z/p^e`, a brace since `1 + 5a` is a unit.
    fn affine(e: u32) -> Brace {
        let g = PGroup::cyclic(5, e).unwrap();
        let m = g.moduli()[0];
        Brace::from_fn(&g, move |a, b| {
            let (x, y) = (a.coords()[0], b.coords()[0]);
            Element::new([(x + y + 5 * x * y) % m])
        })
    }

    fn el(c: u64) -> Element {
        Element::new([c])
    }

    /// Independent oracle: brute-force every axiom over all triples.
    fn brute_is_brace(b: &Brace) -> bool {
        let g = b.group();
        let all: Vec<Element> = g.elements().collect();
        let zero = g.zero();
        for x in &all {
            if b.circ(x, &zero) != *x || b.circ(&zero, x) != *x {
                return false;
            }
            if !all.iter().any(|y| b.circ(x, y).is_zero()) {
                return false;
            }
            for y in &all {
                for z in &all {
                    if b.circ(&b.circ(x, y), z) != b.circ(x, &b.circ(y, z)) {
                        return false;
                    }
                    let lhs = b.circ(x, &g.add(y, z));
                    let rhs = g.add(&g.sub(&b.circ(x, y), x), &b.circ(x, z));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn affine_example_values() {
        let b = affine(2);
        assert!(brute_is_brace(&b));
        assert_eq!(b.star(&el(1), &el(1)), el(5));
        // lambda_a(b) = a o b - a = b + 5ab
        assert_eq!(b.lambda(&el(1), &el(2)), el(12));
        assert_eq!(b.circ_pow(&el(1), 5), el(5));
        assert_eq!(b.circ_pow(&el(3), 0), el(0));
        for a in b.group().elements() {
            assert!(b.star(&el(0), &a).is_zero());
            assert_eq!(b.lambda(&el(0), &a), a);
        }
    }

    #[test]
    fn trivial_brace() {
        let g = PGroup::new(5, &[2, 1]).unwrap();
        let b = Brace::trivial(&g);
        for a in g.elements() {
            assert_eq!(b.circ_pow(&a, 7), g.smul(7, &a));
            for c in g.elements().step_by(7) {
                assert!(b.star(&a, &c).is_zero());
                assert_eq!(b.lambda(&a, &c), c);
            }
        }
        assert!(b.verify(&Budget::default()).passed());
        let chain = b.left_chain().unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain[1].is_trivial());
    }

    #[test]
    fn verify_passes_and_detects_corruption() {
        let b = affine(2);
        let report = b.verify(&Budget::default());
        assert!(report.passed(), "{report}");
        let mut t = b.table().unwrap().to_vec();
        // a=(3), b=(4): move the product one step
        t[3 * 25 + 4] = (t[3 * 25 + 4] + 1) % 25;
        let bad = Brace::from_table(b.group(), t).unwrap();
        assert!(!brute_is_brace(&bad));
        let report = bad.verify(&Budget::default());
        let law = report.get("left-brace-law").unwrap();
        assert!(!law.passed);
        assert!(law.witness.is_some());
    }

    #[test]
    fn circ_pow_matches_binomial_expansion() {
        let b = affine(3);
        let r = b.group().scalars();
        for a in b.group().elements() {
            for k in 0..12u64 {
                let terms = b.star_powers(&a, &a, k as usize);
                let expansion = b.group().combination(
                    terms
                        .iter()
                        .enumerate()
                        .map(|(i, t)| (r.binom(k, i as u64 + 1), t)),
                );
                let mut iterated = b.group().zero();
                for _ in 0..k {
                    iterated = b.circ(&iterated, &a);
                }
                assert_eq!(b.circ_pow(&a, k), iterated);
                assert_eq!(expansion, iterated, "a={a} k={k}");
            }
        }
    }

    #[test]
    fn lambda_is_multiplicative() {
        let b = affine(3);
        let g = b.group();
        for a in g.elements().step_by(3) {
            for c in g.elements().step_by(5) {
                for x in g.elements().step_by(7) {
                    assert_eq!(
                        b.lambda(&b.circ(&a, &c), &x),
                        b.lambda(&a, &b.lambda(&c, &x))
                    );
                }
            }
        }
    }

    #[test]
    fn left_chain_of_affine_brace() {
        let b = affine(2);
        let chain = b.left_chain().unwrap();
        assert_eq!(chain.len(), 3);
        assert!(chain[1].same_as(&b.group().pk_image(1)));
        assert!(chain[2].is_trivial());
    }

    #[test]
    fn inverses() {
        let b = affine(3);
        let lazy = Brace::lazy(b.group(), {
            let b = b.clone();
            move |x, y| b.circ(x, y)
        });
        for a in b.group().elements() {
            assert!(b.circ(&a, &b.inverse(&a)).is_zero());
            assert_eq!(lazy.inverse(&a), b.inverse(&a));
        }
    }

    #[test]
    fn quotients_of_affine_brace() {
        let b = affine(3);
        let budget = Budget::default();
        let q = b.ideal_quotient(2, IdealKind::Ann, &budget).unwrap();
        assert_eq!(q.group().order(), 5);
        assert!(q.verify(&budget).passed());
        let q = b.ideal_quotient(3, IdealKind::Ann, &budget).unwrap();
        assert_eq!(q.group().order(), 1);
        let q = b.ideal_quotient(1, IdealKind::PowerImage, &budget).unwrap();
        assert_eq!(q.group().order(), 5);
        // projection is a homomorphism
        let quot = Quotient::new(&b.group().ann(1)).unwrap();
        let qb = b.ideal_quotient(1, IdealKind::Ann, &budget).unwrap();
        for x in b.group().elements() {
            for y in b.group().elements().step_by(11) {
                assert_eq!(
                    quot.project(&b.circ(&x, &y)),
                    qb.circ(&quot.project(&x), &quot.project(&y))
                );
            }
        }
    }

    #[test]
    fn non_ideal_rejected() {
        // lambda_a(b) = (b1 + a2 b2, b2) on Z/7 x Z/7: 0 x Z/7 is not
        // lambda-invariant, Z/7 x 0 is an ideal.
        let g = PGroup::new(7, &[1, 1]).unwrap();
        let b = Brace::from_fn(&g, {
            let g = g.clone();
            move |x, y| {
                let a2 = x.coords()[1];
                let (b1, b2) = (y.coords()[0], y.coords()[1]);
                g.add(x, &g.element([b1 + a2 * b2, b2]))
            }
        });
        assert!(brute_is_brace(&b));
        let s = Subgroup::from_steps(&g, &[1, 0]).unwrap();
        assert!(b.check_ideal(&s, &Budget::default()).is_some());
        let s = Subgroup::from_steps(&g, &[0, 1]).unwrap();
        assert!(b.check_ideal(&s, &Budget::default()).is_none());
    }
}
