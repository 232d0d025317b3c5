use braceflow_core::correspondence::{derive, verify_flows_scaling};
use braceflow_core::flows::{flows_brace, FlowContext};
use braceflow_core::sample::Budget;
use braceflow_core::{Brace, PGroup, PreLieRing, Quotient, ScalarRing};
use proptest::prelude::*;

const SMALL_GROUPS: [(u64, &[u32]); 6] = [
    (5, &[2]),
    (5, &[3]),
    (5, &[2, 1]),
    (5, &[1, 1, 1]),
    (7, &[2]),
    (7, &[2, 1]),
];

fn small_group() -> impl Strategy<Value = PGroup> {
    (0..SMALL_GROUPS.len()).prop_map(|i| PGroup::new(SMALL_GROUPS[i].0, SMALL_GROUPS[i].1).unwrap())
}

/// Left-nilpotent pre-Lie rings with every constant in `pA`; candidates
/// that fail the pre-Lie identity on generators are discarded.
fn nilpotent_ring() -> impl Strategy<Value = PreLieRing> {
    small_group()
        .prop_flat_map(|g| {
            let r = g.rank();
            let slots = (0..r * r * r)
                .map(|i| 0..g.moduli()[i % r] / g.p())
                .collect::<Vec<_>>();
            (Just(g), slots)
        })
        .prop_filter_map("pre-Lie on generators", |(g, vals)| {
            let r = g.rank();
            let consts = vals
                .chunks(r)
                .map(|c| {
                    g.element(
                        c.iter()
                            .enumerate()
                            .map(|(l, &x)| x * g.p() % g.moduli()[l]),
                    )
                })
                .collect();
            let ring = PreLieRing::from_constants(&g, consts).ok()?;
            let gens = g.generators();
            let ok = gens.iter().all(|a| {
                gens.iter()
                    .all(|b| gens.iter().all(|c| ring.pre_lie_defect(a, b, c).is_zero()))
            });
            ok.then_some(ring)
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn flows_of_nilpotent_rings_are_braces(ring in nilpotent_ring()) {
        let b = flows_brace(&ring).unwrap();
        let report = b.verify(&Budget::default());
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn omega_inverts_w(ring in nilpotent_ring(), i in 0u64..1 << 20) {
        let ctx = FlowContext::new(&ring).unwrap();
        let a = ctx.group().element_at(i % ctx.group().order());
        prop_assert_eq!(ctx.w(&ctx.omega(&a).unwrap()), a.clone());
        prop_assert_eq!(ctx.omega(&ctx.w(&a)).unwrap(), a);
    }

    #[test]
    fn flows_then_derive_scales_by_p_minus_1(ring in nilpotent_ring()) {
        let report = verify_flows_scaling(&ring, &Budget::default());
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn derived_ring_is_pre_lie(ring in nilpotent_ring()) {
        let d = derive(&flows_brace(&ring).unwrap()).unwrap();
        let report = d.verify(&Budget::default());
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn twists_compose(ring in nilpotent_ring(), s in 1u64..50, t in 1u64..50) {
        let lhs = ring.twist(s).twist(t);
        let rhs = ring.twist(s * t);
        prop_assert!(lhs.first_difference(&rhs, &Budget::default()).is_none());
    }

    #[test]
    fn quotient_projection_is_a_homomorphism(g in small_group(), i in 0u32..4, x in 0u64..1 << 20, y in 0u64..1 << 20) {
        let q = Quotient::new(&g.ann(i)).unwrap();
        let (a, b) = (g.element_at(x % g.order()), g.element_at(y % g.order()));
        let t = q.target();
        prop_assert_eq!(q.project(&g.add(&a, &b)), t.add(&q.project(&a), &q.project(&b)));
        let pa = q.project(&a);
        prop_assert_eq!(q.project(&q.lift(&pa)), pa);
        prop_assert!(q.kernel().contains(&g.sub(&a, &q.lift(&q.project(&a)))));
    }

    #[test]
    fn group_laws(g in small_group(), x in 0u64..1 << 20, y in 0u64..1 << 20) {
        let (a, b) = (g.element_at(x % g.order()), g.element_at(y % g.order()));
        prop_assert_eq!(g.add(&a, &b), g.add(&b, &a));
        prop_assert_eq!(g.sub(&g.add(&a, &b), &b), a.clone());
        prop_assert_eq!(g.element_at(g.index_of(&a)), a.clone());
        prop_assert!(g.smul(g.exponent_modulus(), &a).is_zero());
    }

    /// Plain-integer oracle for the scalar constants.
    #[test]
    fn scalar_constants(pi in 0usize..6, m in 1u32..5) {
        let p = [5u64, 7, 11, 13, 17, 19][pi];
        let r = ScalarRing::new(p, m).unwrap();
        let q = p.pow(m) as u128;
        let pow = |b: u64, e: u64| (0..e).fold(1u128, |acc, _| acc * b as u128 % q);
        let xi = r.xi();
        prop_assert_eq!(pow(xi, p - 1), 1 % q);
        prop_assert!((1..p - 1).all(|j| pow(xi, j) % p as u128 != 1));
        prop_assert_eq!((p - 1) as u128 * r.twist_constant() as u128 % q, 1 % q);
        for k in 0..p {
            let fact = (1..=k as u128).fold(1u128, |a, i| a * i % q);
            prop_assert_eq!(r.inv_factorial(k).unwrap() as u128 * fact % q, 1 % q);
        }
    }

    #[test]
    fn trivial_brace_derives_zero(g in small_group(), x in 0u64..1 << 20, y in 0u64..1 << 20) {
        let d = derive(&Brace::trivial(&g)).unwrap();
        let q = d.group();
        let (a, b) = (q.element_at(x % q.order()), q.element_at(y % q.order()));
        prop_assert!(d.bullet(&a, &b).is_zero());
    }

    #[test]
    fn brace_star_and_lambda(ring in nilpotent_ring(), x in 0u64..1 << 20, y in 0u64..1 << 20) {
        let b = flows_brace(&ring).unwrap();
        let g = b.group();
        let (a, c) = (g.element_at(x % g.order()), g.element_at(y % g.order()));
        prop_assert_eq!(b.star(&a, &c), g.sub(&g.sub(&b.circ(&a, &c), &a), &c));
        prop_assert_eq!(b.lambda(&a, &c), g.sub(&b.circ(&a, &c), &a));
        prop_assert_eq!(b.circ(&a, &b.inverse(&a)), g.zero());
    }
}
