//! Finite abelian p-groups `Z/p^{e_1} x ... x Z/p^{e_r}` in invariant-factor
//! coordinates, their coordinate-aligned subgroups and quotients, generated
//! subgroups, and the canonical section of multiplication by `p`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{is_prime, ScalarRing, MAX_MODULUS};

/// Groups with more elements than this are never enumerated into bitsets.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

/// A group element as its vector of canonical coordinates.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(SmallVec<[u64; 4]>);

impl Element {
    pub fn new<I: IntoIterator<Item = u64>>(coords: I) -> Self {
        Element(coords.into_iter().collect())
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `p`-adic valuation of `x` capped at `cap` (`x = 0` gives `cap`).
fn valuation(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

/// A finite abelian p-group of order `p^n` with `n < p - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PGroup {
    p: u64,
    factors: Vec<u32>,
    moduli: Vec<u64>,
    n: u32,
    order: u64,
}

impl fmt::Debug for PGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PGroup(p={}, factors={:?})", self.p, self.factors)
    }
}

impl PGroup {
    /// `factors` are the exponents `e_1 >= ... >= e_r >= 1`; an empty list
    /// gives the trivial group.
    pub fn new(p: u64, factors: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 3 {
            return Err(Error::PrimeTooSmall { p, min: 3 });
        }
        if factors.contains(&0) || factors.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadFactors(format!("{factors:?}")));
        }
        let n: u32 = factors.iter().sum();
        if n as u64 >= p - 1 {
            return Err(Error::OrderTooLarge { p, n });
        }
        let mut order = 1u64;
        for _ in 0..n {
            order = order
                .checked_mul(p)
                .filter(|&v| v < MAX_MODULUS)
                .ok_or(Error::PrecisionTooLarge { p, m: n })?;
        }
        let moduli = factors.iter().map(|&e| p.pow(e)).collect();
        Ok(Self {
            p,
            factors: factors.to_vec(),
            moduli,
            n,
            order,
        })
    }

    pub fn cyclic(p: u64, e: u32) -> Result<Self> {
        Self::new(p, &[e])
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, &[])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// `log_p |A|`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Largest exponent, 0 for the trivial group.
    pub fn exponent(&self) -> u32 {
        self.factors.first().copied().unwrap_or(0)
    }

    /// `p^e` for the exponent `e`: the additive order of the group.
    pub fn exponent_modulus(&self) -> u64 {
        self.p.pow(self.exponent())
    }

    /// Scalars acting on the group: `Z/p^e` with `e` the exponent (at least 1).
    pub fn scalars(&self) -> ScalarRing {
        ScalarRing::new(self.p, self.exponent().max(1)).expect("group validated")
    }

    pub fn is_enumerable(&self) -> bool {
        self.order <= ENUMERATION_LIMIT
    }

    pub fn zero(&self) -> Element {
        Element::new(self.moduli.iter().map(|_| 0))
    }

    /// The canonical generators `g_1, ..., g_r`.
    pub fn generators(&self) -> Vec<Element> {
        (0..self.rank())
            .map(|j| Element::new((0..self.rank()).map(|i| u64::from(i == j))))
            .collect()
    }

    pub fn contains(&self, a: &Element) -> bool {
        a.rank() == self.rank() && a.coords().iter().zip(&self.moduli).all(|(c, m)| c < m)
    }

    pub fn check(&self, a: &Element) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::NotInGroup(format!("{a}")))
        }
    }

    /// Builds an element from residues, reducing each coordinate.
    pub fn element<I: IntoIterator<Item = u64>>(&self, coords: I) -> Element {
        let e = Element::new(coords.into_iter().zip(&self.moduli).map(|(c, m)| c % m));
        debug_assert_eq!(e.rank(), self.rank());
        e
    }

    /// Builds an element from signed integers, reducing each coordinate.
    pub fn element_i<I: IntoIterator<Item = i64>>(&self, coords: I) -> Element {
        Element::new(
            coords
                .into_iter()
                .zip(&self.moduli)
                .map(|(c, &m)| c.rem_euclid(m as i64) as u64),
        )
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        Element::new(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((x, y), m)| (x + y) % m),
        )
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element::new(a.0.iter().zip(&self.moduli).map(|(x, m)| (m - x) % m))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        Element::new(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((x, y), m)| (x + m - y) % m),
        )
    }

    /// `k * a`, with `k` reduced per coordinate.
    pub fn smul(&self, k: u64, a: &Element) -> Element {
        Element::new(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| ((k % m) as u128 * x as u128 % m as u128) as u64),
        )
    }

    /// Sum of `k_i * a_i`.
    pub fn combination<'a, I>(&self, terms: I) -> Element
    where
        I: IntoIterator<Item = (u64, &'a Element)>,
    {
        terms
            .into_iter()
            .fold(self.zero(), |acc, (k, a)| self.add(&acc, &self.smul(k, a)))
    }

    /// Checked variants used at API boundaries.
    pub fn try_add(&self, a: &Element, b: &Element) -> Result<Element> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::GroupMismatch);
        }
        Ok(self.add(a, b))
    }

    /// Mixed-radix index in `[0, |A|)`, first coordinate least significant.
    pub fn index_of(&self, a: &Element) -> u64 {
        let mut idx = 0u64;
        for (c, m) in a.0.iter().zip(&self.moduli).rev() {
            idx = idx * m + c;
        }
        idx
    }

    pub fn element_at(&self, mut idx: u64) -> Element {
        Element::new(self.moduli.iter().map(|m| {
            let c = idx % m;
            idx /= m;
            c
        }))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    /// Row-major `(index(a + b), index(a - b))` tables over all pairs.
    pub fn index_tables(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.order() as usize;
        let all: Vec<Element> = self.elements().collect();
        let mut add = Vec::with_capacity(n * n);
        let mut sub = Vec::with_capacity(n * n);
        for a in &all {
            for b in &all {
                add.push(self.index_of(&self.add(a, b)) as u32);
                sub.push(self.index_of(&self.sub(a, b)) as u32);
            }
        }
        (add, sub)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        Element::new(self.moduli.iter().map(|&m| rng.random_range(0..m)))
    }

    /// `{a : p^i a = 0}`.
    pub fn ann(&self, i: u32) -> Subgroup {
        Subgroup {
            group: self.clone(),
            steps: self.factors.iter().map(|&e| e.saturating_sub(i)).collect(),
        }
    }

    /// `p^i A`.
    pub fn pk_image(&self, i: u32) -> Subgroup {
        Subgroup {
            group: self.clone(),
            steps: self.factors.iter().map(|&e| e.min(i)).collect(),
        }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            group: self.clone(),
            steps: vec![0; self.rank()],
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            group: self.clone(),
            steps: self.factors.clone(),
        }
    }

    pub fn in_pa(&self, x: &Element) -> bool {
        x.0.iter().all(|c| c % self.p == 0)
    }

    /// The canonical section of multiplication by `p` on `pA`: divide each
    /// canonical coordinate by `p`.
    pub fn wp_inverse(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        if !self.in_pa(x) {
            return Err(Error::NotInPA(format!("{x}")));
        }
        Ok(Element::new(x.0.iter().map(|c| c / self.p)))
    }

    /// Additive order of `a` as `log_p`.
    pub fn order_exponent(&self, a: &Element) -> u32 {
        a.0.iter()
            .zip(&self.factors)
            .map(|(&c, &e)| e - valuation(c, self.p, e))
            .max()
            .unwrap_or(0)
    }

    pub fn quotient(&self, s: &Subgroup) -> Result<Quotient> {
        Quotient::new(s)
    }

    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            return String::from("0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|e| format!("Z/{}^{}", self.p, e))
            .collect();
        parts.join(" x ")
    }
}

/// A coordinate-aligned subgroup: coordinate `j` ranges over the multiples of
/// `p^{steps[j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    group: PGroup,
    steps: Vec<u32>,
}

impl Subgroup {
    pub fn from_steps(group: &PGroup, steps: &[u32]) -> Result<Self> {
        if steps.len() != group.rank() || steps.iter().zip(group.factors()).any(|(s, e)| s > e) {
            return Err(Error::NotAligned);
        }
        Ok(Self {
            group: group.clone(),
            steps: steps.to_vec(),
        })
    }

    pub fn group(&self) -> &PGroup {
        &self.group
    }

    pub fn steps(&self) -> &[u32] {
        &self.steps
    }

    pub fn contains(&self, a: &Element) -> bool {
        a.0.iter()
            .zip(&self.steps)
            .all(|(&c, &s)| c % self.group.p.pow(s) == 0)
    }

    pub fn order(&self) -> u64 {
        self.group
            .factors
            .iter()
            .zip(&self.steps)
            .map(|(e, s)| self.group.p.pow(e - s))
            .product()
    }

    /// Additive generators `p^{s_j} g_j` for the coordinates not killed.
    pub fn generators(&self) -> Vec<Element> {
        let r = self.group.rank();
        (0..r)
            .filter(|&j| self.steps[j] < self.group.factors[j])
            .map(|j| {
                Element::new((0..r).map(|i| {
                    if i == j {
                        self.group.p.pow(self.steps[j])
                    } else {
                        0
                    }
                }))
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let sizes: Vec<u64> = self
            .group
            .factors
            .iter()
            .zip(&self.steps)
            .map(|(e, s)| self.group.p.pow(e - s))
            .collect();
        let scales: Vec<u64> = self.steps.iter().map(|&s| self.group.p.pow(s)).collect();
        (0..self.order()).map(move |mut idx| {
            Element::new(sizes.iter().zip(&scales).map(|(&size, &scale)| {
                let c = idx % size;
                idx /= size;
                c * scale
            }))
        })
    }
}

/// `A/S` for a coordinate-aligned `S`, realised as the group
/// `prod Z/p^{d_j}` on the canonical representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    kernel: Subgroup,
    target: PGroup,
}

impl Quotient {
    pub fn new(kernel: &Subgroup) -> Result<Self> {
        let steps = kernel.steps();
        if steps.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAligned);
        }
        let kept: Vec<u32> = steps.iter().copied().filter(|&d| d > 0).collect();
        let target = PGroup::new(kernel.group.p, &kept)?;
        Ok(Self {
            kernel: kernel.clone(),
            target,
        })
    }

    pub fn parent(&self) -> &PGroup {
        &self.kernel.group
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// The quotient as a group in its own right.
    pub fn target(&self) -> &PGroup {
        &self.target
    }

    pub fn project(&self, a: &Element) -> Element {
        Element::new(a.0.iter().zip(self.target.moduli()).map(|(c, m)| c % m))
    }

    /// The canonical representative of a class.
    pub fn lift(&self, q: &Element) -> Element {
        let r = self.parent().rank();
        Element::new((0..r).map(|j| q.0.get(j).copied().unwrap_or(0)))
    }
}

/// An arbitrary subgroup of an enumerable group, grown by closure over
/// generators.
#[derive(Clone, Debug)]
pub struct Span {
    group: PGroup,
    member: Vec<bool>,
    elements: Vec<Element>,
    gens: Vec<Element>,
}

impl Span {
    pub fn new(group: &PGroup) -> Result<Self> {
        if !group.is_enumerable() {
            return Err(Error::TooLarge(group.order()));
        }
        let mut member = vec![false; group.order() as usize];
        member[0] = true;
        Ok(Self {
            group: group.clone(),
            member,
            elements: vec![group.zero()],
            gens: Vec::new(),
        })
    }

    pub fn spanned_by<'a, I>(group: &PGroup, gens: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let mut span = Self::new(group)?;
        for g in gens {
            span.insert(g);
        }
        Ok(span)
    }

    /// Adds a generator; returns whether the span grew.
    pub fn insert(&mut self, g: &Element) -> bool {
        if self.contains(g) {
            return false;
        }
        let base = self.elements.len();
        let mut t = g.clone();
        while !self.contains(&t) {
            for i in 0..base {
                let x = self.group.add(&self.elements[i], &t);
                self.member[self.group.index_of(&x) as usize] = true;
                self.elements.push(x);
            }
            t = self.group.add(&t, g);
        }
        self.gens.push(g.clone());
        true
    }

    pub fn contains(&self, a: &Element) -> bool {
        self.member[self.group.index_of(a) as usize]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// A generating set (each generator strictly enlarged the span).
    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    pub fn is_subset_of(&self, other: &Span) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_as(&self, s: &Subgroup) -> bool {
        self.len() as u64 == s.order() && self.gens.iter().all(|g| s.contains(g))
    }

    /// The coordinate-aligned descriptor of this span, if it is one.
    pub fn to_subgroup(&self) -> Result<Subgroup> {
        let g = &self.group;
        let steps: Vec<u32> = (0..g.rank())
            .map(|j| {
                self.gens
                    .iter()
                    .map(|x| valuation(x.0[j], g.p, g.factors[j]))
                    .min()
                    .unwrap_or(g.factors[j])
            })
            .collect();
        let s = Subgroup::from_steps(g, &steps)?;
        if s.order() == self.len() as u64 {
            Ok(s)
        } else {
            Err(Error::NotAligned)
        }
    }
}
