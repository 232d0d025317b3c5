//! Pre-Lie rings `(A, +, .)` on a [`PGroup`]: bilinear products satisfying
//! `(a.b).c - a.(b.c) = (b.a).c - b.(a.c)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::brace::coverage_note;
use crate::error::{Error, Result};
use crate::group::{Element, PGroup, Quotient, Span, Subgroup};
use crate::report::{Check, Report};
use crate::sample::{self, Budget};

pub type ProductFn = Arc<dyn Fn(&Element, &Element) -> Element + Send + Sync>;

#[derive(Clone)]
enum Product {
    /// `consts[j * r + k] = g_j . g_k`.
    Constants(Arc<[Element]>),
    Table(Arc<[u32]>),
    Lazy(ProductFn),
}

#[derive(Clone)]
pub struct PreLieRing {
    group: PGroup,
    product: Product,
}

impl fmt::Debug for PreLieRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.product {
            Product::Constants(c) => write!(f, "PreLieRing({:?}, constants {:?})", self.group, c),
            Product::Table(_) => write!(f, "PreLieRing({:?}, table)", self.group),
            Product::Lazy(_) => write!(f, "PreLieRing({:?}, lazy)", self.group),
        }
    }
}

/// Outcome of the left chain `L^1 = A`, `L^{i+1} = A . L^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nilpotency {
    /// The first `s` with `L^s = 0`.
    Index(usize),
    /// The chain stopped shrinking at a nonzero subgroup of this size.
    Stalled { level: usize, size: usize },
}

impl PreLieRing {
    pub fn zero(group: &PGroup) -> Self {
        let r = group.rank();
        Self {
            group: group.clone(),
            product: Product::Constants(vec![group.zero(); r * r].into()),
        }
    }

    /// `consts[j * r + k]` is `g_j . g_k`. Rejects constants that are not
    /// well defined on the torsion: `p^{e_j} (g_j . g_k)` and
    /// `p^{e_k} (g_j . g_k)` must vanish.
    pub fn from_constants(group: &PGroup, consts: Vec<Element>) -> Result<Self> {
        let r = group.rank();
        if consts.len() != r * r {
            return Err(Error::BadTable(format!(
                "expected {} structure constants",
                r * r
            )));
        }
        for c in &consts {
            group.check(c)?;
        }
        let moduli = group.moduli();
        for j in 0..r {
            for k in 0..r {
                let c = &consts[j * r + k];
                for l in 0..r {
                    let v = c.coords()[l] as u128;
                    let m = moduli[l] as u128;
                    if v * moduli[j] as u128 % m != 0 || v * moduli[k] as u128 % m != 0 {
                        return Err(Error::Torsion {
                            j: j + 1,
                            k: k + 1,
                            l: l + 1,
                        });
                    }
                }
            }
        }
        Ok(Self {
            group: group.clone(),
            product: Product::Constants(consts.into()),
        })
    }

    /// `a . b = k * (a_1 b_1)` on a cyclic group (the commutative
    /// associative fixtures).
    pub fn cyclic_scaled(group: &PGroup, k: u64) -> Result<Self> {
        if group.rank() != 1 {
            return Err(Error::BadFactors(format!(
                "{:?} is not cyclic",
                group.factors()
            )));
        }
        Self::from_constants(group, vec![group.element([k])])
    }

    pub fn from_table(group: &PGroup, table: Vec<u32>) -> Result<Self> {
        let order = group.order();
        if !group.is_enumerable() || table.len() as u64 != order * order {
            return Err(Error::BadTable(String::from(
                "table size does not match the group",
            )));
        }
        if table.iter().any(|&v| v as u64 >= order) {
            return Err(Error::BadTable(String::from("entry out of range")));
        }
        Ok(Self {
            group: group.clone(),
            product: Product::Table(table.into()),
        })
    }

    /// An arbitrary product; bilinearity is the caller's claim and is
    /// checked by [`verify`](Self::verify).
    pub fn from_fn<F>(group: &PGroup, f: F) -> Self
    where
        F: Fn(&Element, &Element) -> Element + Send + Sync + 'static,
    {
        Self {
            group: group.clone(),
            product: Product::Lazy(Arc::new(f)),
        }
    }

    pub fn group(&self) -> &PGroup {
        &self.group
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match &self.product {
            Product::Constants(c) => self.mul_constants(c, a, b),
            Product::Table(t) => {
                let n = self.group.order();
                let idx = self.group.index_of(a) * n + self.group.index_of(b);
                self.group.element_at(t[idx as usize] as u64)
            }
            Product::Lazy(f) => f(a, b),
        }
    }

    fn mul_constants(&self, consts: &[Element], a: &Element, b: &Element) -> Element {
        let r = self.group.rank();
        let moduli = self.group.moduli();
        let mut acc = [0u128; 8];
        let mut wide = Vec::new();
        let out: &mut [u128] = if r <= acc.len() {
            &mut acc[..r]
        } else {
            wide.resize(r, 0);
            &mut wide
        };
        for (j, &x) in a.coords().iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k, &y) in b.coords().iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = &consts[j * r + k];
                for (l, &cl) in c.coords().iter().enumerate() {
                    if cl == 0 {
                        continue;
                    }
                    let m = moduli[l] as u128;
                    let xy = (x as u128 % m) * (y as u128 % m) % m;
                    out[l] = (out[l] + xy * cl as u128) % m;
                }
            }
        }
        Element::new(out.iter().map(|&v| v as u64))
    }

    /// The structure constants, computed from generator products when the
    /// ring is not stored that way.
    pub fn structure_constants(&self) -> Vec<Element> {
        match &self.product {
            Product::Constants(c) => c.to_vec(),
            _ => {
                let gens = self.group.generators();
                gens.iter()
                    .flat_map(|gj| gens.iter().map(move |gk| (gj, gk)))
                    .map(|(gj, gk)| self.mul(gj, gk))
                    .collect()
            }
        }
    }

    pub fn has_constants(&self) -> bool {
        matches!(self.product, Product::Constants(_))
    }

    /// Re-expresses the product through its structure constants. Only
    /// faithful for bilinear products.
    pub fn to_constants(&self) -> Result<Self> {
        Self::from_constants(&self.group, self.structure_constants())
    }

    pub fn tabulate(&self) -> Result<Self> {
        if !self.group.is_enumerable() {
            return Err(Error::TooLarge(self.group.order()));
        }
        let all: Vec<Element> = self.group.elements().collect();
        let mut table = Vec::with_capacity(all.len() * all.len());
        for a in &all {
            for b in &all {
                table.push(self.group.index_of(&self.mul(a, b)) as u32);
            }
        }
        Self::from_table(&self.group, table)
    }

    /// `(a.b).c - a.(b.c) - (b.a).c + b.(a.c)`.
    pub fn pre_lie_defect(&self, a: &Element, b: &Element, c: &Element) -> Element {
        let g = &self.group;
        let lhs = g.sub(&self.mul(&self.mul(a, b), c), &self.mul(a, &self.mul(b, c)));
        let rhs = g.sub(&self.mul(&self.mul(b, a), c), &self.mul(b, &self.mul(a, c)));
        g.sub(&lhs, &rhs)
    }

    /// Bilinearity and the pre-Lie identity on element indices.
    fn verify_table_triples(
        &self,
        t: &[u32],
        budget: &Budget,
    ) -> (Option<String>, Option<String>, String) {
        let g = &self.group;
        let n = g.order() as usize;
        let (add, sub) = g.index_tables();
        let mul = |a: usize, b: usize| t[a * n + b] as usize;
        let add = |a: usize, b: usize| add[a * n + b] as usize;
        let sub = |a: usize, b: usize| sub[a * n + b] as usize;
        let fmt3 = |(a, b, c): (usize, usize, usize)| {
            let e = |i: usize| g.element_at(i as u64);
            format!("a={} b={} c={}", e(a), e(b), e(c))
        };
        let c3 = budget.coverage_for(g, 3, 21);
        let bilinear = sample::first_failure_3_idx(n, c3, |a, b, c| {
            mul(add(a, b), c) == add(mul(a, c), mul(b, c))
                && mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        })
        .map(fmt3);
        let pre_lie = sample::first_failure_3_idx(n, c3.reseeded(22), |a, b, c| {
            let lhs = sub(mul(mul(a, b), c), mul(a, mul(b, c)));
            let rhs = sub(mul(mul(b, a), c), mul(b, mul(a, c)));
            lhs == rhs
        })
        .map(fmt3);
        (bilinear, pre_lie, coverage_note(c3))
    }

    /// `L^1 = A ⊇ L^2 ⊇ ...` (generator products suffice by bilinearity).
    pub fn left_chain(&self) -> Result<(Vec<Span>, Nilpotency)> {
        let g = &self.group;
        let gens = g.generators();
        let mut chain = vec![Span::spanned_by(g, &gens)?];
        loop {
            let cur = chain.last().expect("non-empty");
            if cur.is_trivial() {
                let index = chain.len();
                return Ok((chain, Nilpotency::Index(index)));
            }
            let mut next = Span::new(g)?;
            for a in &gens {
                for x in cur.generators() {
                    next.insert(&self.mul(a, x));
                }
            }
            if next.len() == cur.len() {
                let (level, size) = (chain.len(), cur.len());
                return Ok((chain, Nilpotency::Stalled { level, size }));
            }
            chain.push(next);
        }
    }

    /// The first `s` with `L^s = 0`; the zero ring has index 2 (index 1 only
    /// on the trivial group).
    pub fn nilpotency_index(&self) -> Result<usize> {
        match self.left_chain()?.1 {
            Nilpotency::Index(s) => Ok(s),
            Nilpotency::Stalled { level, size } => Err(Error::NotNilpotent(format!(
                "L^{level} has {size} elements and L^{} = L^{level}",
                level + 1
            ))),
        }
    }

    pub fn verify(&self, budget: &Budget) -> Report {
        let g = &self.group;
        let mut report = Report::new();

        // exhaustive triple walks run on element indices
        let table_triples = match &self.product {
            Product::Table(t) => Some(self.verify_table_triples(t, budget)),
            _ if budget.coverage(g, 3).is_exhaustive() => match self.tabulate() {
                Ok(t) => match &t.product {
                    Product::Table(t) => Some(self.verify_table_triples(t, budget)),
                    _ => None,
                },
                Err(_) => None,
            },
            _ => None,
        };

        if self.has_constants() {
            report.push(Check::pass("bilinearity").with_note("structure constants"));
        } else if let Some((bilinear, _, note)) = &table_triples {
            report
                .push(Check::from_witness("bilinearity", bilinear.clone()).with_note(note.clone()));
        } else {
            let c3 = budget.coverage_for(g, 3, 21);
            let w = sample::first_failure_3(g, c3, |a, b, c| {
                let ab = g.add(a, b);
                let bc = g.add(b, c);
                self.mul(&ab, c) == g.add(&self.mul(a, c), &self.mul(b, c))
                    && self.mul(a, &bc) == g.add(&self.mul(a, b), &self.mul(a, c))
            });
            report.push(
                Check::from_witness(
                    "bilinearity",
                    w.map(|(a, b, c)| format!("a={a} b={b} c={c}")),
                )
                .with_note(coverage_note(c3)),
            );
        }

        let torsion = Self::from_constants(g, self.structure_constants());
        report.push(Check::from_witness(
            "torsion",
            torsion.err().map(|e| format!("{e}")),
        ));

        let gens = g.generators();
        let mut witness = None;
        'outer: for a in &gens {
            for b in &gens {
                for c in &gens {
                    let d = self.pre_lie_defect(a, b, c);
                    if !d.is_zero() {
                        witness = Some(format!("a={a} b={b} c={c} defect={d}"));
                        break 'outer;
                    }
                }
            }
        }
        report.push(Check::from_witness("pre-lie-generators", witness));

        if let Some((_, pre_lie, note)) = table_triples {
            report.push(Check::from_witness("pre-lie", pre_lie).with_note(note));
        } else {
            let c3 = budget.coverage_for(g, 3, 22);
            let w =
                sample::first_failure_3(g, c3, |a, b, c| self.pre_lie_defect(a, b, c).is_zero());
            report.push(
                Check::from_witness("pre-lie", w.map(|(a, b, c)| format!("a={a} b={b} c={c}")))
                    .with_note(coverage_note(c3)),
            );
        }

        match self.left_chain() {
            Ok((_, Nilpotency::Index(s))) => {
                report.push(Check::pass("left-nilpotent").with_note(format!("index {s}")))
            }
            Ok((_, Nilpotency::Stalled { level, size })) => report.push(Check::fail(
                "left-nilpotent",
                format!("chain stalls at L^{level} with {size} elements"),
            )),
            Err(e) => report.push(Check::fail("left-nilpotent", format!("{e}"))),
        }
        report
    }

    /// `a ._s b = s (a . b)`.
    pub fn twist(&self, s: u64) -> Self {
        match &self.product {
            Product::Constants(c) => Self {
                group: self.group.clone(),
                product: Product::Constants(c.iter().map(|x| self.group.smul(s, x)).collect()),
            },
            _ => {
                let inner = self.clone();
                Self::from_fn(&self.group, move |a, b| {
                    inner.group.smul(s, &inner.mul(a, b))
                })
            }
        }
    }

    /// Checks `A . S ⊆ S` and `S . A ⊆ S` on generators.
    pub fn check_ideal(&self, s: &Subgroup) -> Option<String> {
        for g in self.group.generators() {
            for h in s.generators() {
                let left = self.mul(&g, &h);
                if !s.contains(&left) {
                    return Some(format!("{g} . {h} = {left}"));
                }
                let right = self.mul(&h, &g);
                if !s.contains(&right) {
                    return Some(format!("{h} . {g} = {right}"));
                }
            }
        }
        None
    }

    /// The factor ring `A / S` with `[x].[y] = [x.y]`.
    pub fn quotient(&self, s: &Subgroup) -> Result<Self> {
        if let Some(witness) = self.check_ideal(s) {
            return Err(Error::NotIdeal {
                name: String::from("subgroup"),
                witness,
            });
        }
        let q = Quotient::new(s)?;
        let target = q.target().clone();
        let t = target.rank();
        let gens: Vec<Element> = target.generators().iter().map(|g| q.lift(g)).collect();
        let consts = (0..t)
            .flat_map(|j| (0..t).map(move |k| (j, k)))
            .map(|(j, k)| q.project(&self.mul(&gens[j], &gens[k])))
            .collect();
        if self.has_constants() {
            Self::from_constants(&target, consts)
        } else {
            let inner = self.clone();
            Ok(Self::from_fn(&target, move |a, b| {
                q.project(&inner.mul(&q.lift(a), &q.lift(b)))
            }))
        }
    }

    /// First pair where the products differ.
    pub fn first_difference(&self, other: &PreLieRing, budget: &Budget) -> Option<String> {
        if self.group != other.group {
            return Some(String::from("different carriers"));
        }
        let cov = budget.coverage_for(&self.group, 2, 23);
        sample::first_failure_2(&self.group, cov, |a, b| self.mul(a, b) == other.mul(a, b))
            .map(|(a, b)| format!("a={a} b={b}: {} vs {}", self.mul(&a, &b), other.mul(&a, &b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: u64) -> Element {
        Element::new([c])
    }

    #[test]
    fn zero_ring() {
        let g = PGroup::new(5, &[2, 1]).unwrap();
        let r = PreLieRing::zero(&g);
        let report = r.verify(&Budget::default());
        assert!(report.passed(), "{report}");
        assert_eq!(r.nilpotency_index().unwrap(), 2);
        assert_eq!(
            report.get("left-nilpotent").unwrap().note.as_deref(),
            Some("index 2")
        );
    }

    #[test]
    fn scaled_product_on_z125() {
        let g = PGroup::cyclic(5, 3).unwrap();
        let r = PreLieRing::cyclic_scaled(&g, 5).unwrap();
        assert_eq!(r.mul(&el(3), &el(7)), el(105));
        // a.(b.c) = 25abc, so L^3 = 25A, and L^4 = 0
        assert_eq!(r.mul(&el(1), &r.mul(&el(1), &el(1))), el(25));
        assert!(r.verify(&Budget::default()).passed());
        assert_eq!(r.nilpotency_index().unwrap(), 4);
    }

    #[test]
    fn non_nilpotent_detected() {
        let g = PGroup::cyclic(5, 2).unwrap();
        let r = PreLieRing::cyclic_scaled(&g, 1).unwrap();
        assert!(matches!(r.nilpotency_index(), Err(Error::NotNilpotent(_))));
        let report = r.verify(&Budget::default());
        assert!(!report.get("left-nilpotent").unwrap().passed);
        assert!(report.get("pre-lie").unwrap().passed);
    }

    #[test]
    fn torsion_rejected() {
        let g = PGroup::new(7, &[3, 2]).unwrap();
        // g_2 . g_2 = g_1 breaks torsion: 49 (g_2 . g_2) = 49 g_1 != 0
        let consts = vec![g.zero(), g.zero(), g.zero(), g.element([1, 0])];
        assert_eq!(
            PreLieRing::from_constants(&g, consts).unwrap_err(),
            Error::Torsion { j: 2, k: 2, l: 1 }
        );
        let consts = vec![g.zero(), g.zero(), g.zero(), g.element([7, 0])];
        assert!(PreLieRing::from_constants(&g, consts).is_ok());
    }

    #[test]
    fn non_pre_lie_detected() {
        // g1.g1 = g2, g2.g1 = g1 (on Z/7 x Z/7): the identity fails
        let g = PGroup::new(7, &[1, 1]).unwrap();
        let consts = vec![g.element([0, 1]), g.zero(), g.element([1, 0]), g.zero()];
        let r = PreLieRing::from_constants(&g, consts).unwrap();
        let report = r.verify(&Budget::default());
        assert!(!report.get("pre-lie-generators").unwrap().passed);
        assert!(!report.get("pre-lie").unwrap().passed);
    }

    #[test]
    fn generator_and_element_level_agree() {
        let g = PGroup::new(7, &[2, 1]).unwrap();
        let consts = vec![g.element([7, 0]), g.element([0, 1]), g.zero(), g.zero()];
        let r = PreLieRing::from_constants(&g, consts).unwrap();
        let report = r.verify(&Budget::default());
        assert_eq!(
            report.get("pre-lie-generators").unwrap().passed,
            report.get("pre-lie").unwrap().passed
        );
    }

    #[test]
    fn twists() {
        let g = PGroup::cyclic(5, 3).unwrap();
        let r = PreLieRing::cyclic_scaled(&g, 5).unwrap();
        let b = Budget::default();
        assert!(r.twist(1).first_difference(&r, &b).is_none());
        assert!(r
            .twist(0)
            .first_difference(&PreLieRing::zero(&g), &b)
            .is_none());
        let s = g.scalars().twist_constant();
        let t = r.twist(s);
        assert!(t.verify(&b).passed());
        for a in g.elements() {
            assert_eq!(t.mul(&a, &el(1)), g.smul(s * 5 % 125, &a));
        }
        // twisting a lazy copy agrees with twisting constants
        let lazy = PreLieRing::from_fn(&g, {
            let r = r.clone();
            move |a, b| r.mul(a, b)
        });
        assert!(lazy
            .twist(7)
            .twist(3)
            .first_difference(&r.twist(21), &b)
            .is_none());
        assert!(lazy.verify(&b).passed());
    }

    #[test]
    fn quotients() {
        let g = PGroup::cyclic(5, 3).unwrap();
        let r = PreLieRing::cyclic_scaled(&g, 5).unwrap();
        let q = r.quotient(&g.ann(2)).unwrap();
        assert_eq!(q.group().order(), 5);
        for a in q.group().elements() {
            for b in q.group().elements() {
                assert!(q.mul(&a, &b).is_zero());
            }
        }
        let whole = r.quotient(&g.whole()).unwrap();
        assert_eq!(whole.group().order(), 1);
        let z = PreLieRing::zero(&g).quotient(&g.ann(1)).unwrap();
        assert!(z
            .first_difference(&PreLieRing::zero(z.group()), &Budget::default())
            .is_none());
    }

    #[test]
    fn quotient_rejects_non_ideal() {
        let g = PGroup::new(7, &[1, 1]).unwrap();
        // g1.g1 = g2: the subgroup spanned by g1 is not an ideal
        let consts = vec![g.element([0, 1]), g.zero(), g.zero(), g.zero()];
        let r = PreLieRing::from_constants(&g, consts).unwrap();
        let s = Subgroup::from_steps(&g, &[0, 1]).unwrap();
        assert!(matches!(r.quotient(&s), Err(Error::NotIdeal { .. })));
    }

    #[test]
    fn table_round_trip() {
        let g = PGroup::new(5, &[2, 1]).unwrap();
        let consts = vec![
            g.element([5, 0]),
            g.element([0, 1]),
            g.element([5, 0]),
            g.zero(),
        ];
        let r = PreLieRing::from_constants(&g, consts).unwrap();
        let t = r.tabulate().unwrap();
        assert!(t.first_difference(&r, &Budget::default()).is_none());
        assert_eq!(t.structure_constants(), r.structure_constants());
    }
}
