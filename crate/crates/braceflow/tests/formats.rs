use braceflow::format::{parse, serialize, BraceBody, BraceDoc, Document, PreLieDoc};
use braceflow_core::{Element, PGroup};
use proptest::prelude::*;

/// Groups with `n < p - 1`: exponents non-increasing, at most three factors.
fn group() -> impl Strategy<Value = PGroup> {
    prop_oneof![Just(5u64), Just(7), Just(11)]
        .prop_flat_map(|p| {
            let max_n = (p - 2) as u32;
            proptest::collection::vec(1..=max_n, 0..=3).prop_filter_map(
                "n < p - 1",
                move |mut f| {
                    f.sort_unstable_by(|a, b| b.cmp(a));
                    (f.iter().sum::<u32>() <= max_n).then_some((p, f))
                },
            )
        })
        .prop_map(|(p, f)| {
            if f.is_empty() {
                PGroup::trivial(p)
            } else {
                PGroup::new(p, &f)
            }
            .unwrap()
        })
}

/// Torsion-compatible constants: coordinate `l` of `g_j . g_k` is a
/// multiple of `p^{e_l - min(e_j, e_k, e_l)}`.
fn constants(g: PGroup) -> impl Strategy<Value = (PGroup, Vec<Element>)> {
    let r = g.rank();
    let p = g.p();
    let f = g.factors().to_vec();
    let slots: Vec<_> = (0..r * r)
        .flat_map(|jk| (0..r).map(move |l| (jk / r, jk % r, l)))
        .map(|(j, k, l)| {
            let step = p.pow(f[l] - f[l].min(f[j]).min(f[k]));
            let count = p.pow(f[l]) / step;
            (0..count).prop_map(move |x| x * step)
        })
        .collect();
    (Just(g), slots).prop_map(move |(g, vals)| {
        let consts = vals
            .chunks(r.max(1))
            .take(r * r)
            .map(|c| Element::new(c.to_vec()))
            .collect();
        (g, consts)
    })
}

fn prelie_doc() -> impl Strategy<Value = PreLieDoc> {
    group()
        .prop_flat_map(constants)
        .prop_map(|(group, constants)| PreLieDoc { group, constants })
}

fn cayley_doc() -> impl Strategy<Value = BraceDoc> {
    group()
        .prop_filter("small carrier", |g| g.order() <= 25)
        .prop_flat_map(|g| {
            let n = g.order() as u32;
            (Just(g), proptest::collection::vec(0..n, (n * n) as usize))
        })
        .prop_map(|(group, t)| BraceDoc {
            group,
            body: BraceBody::Cayley(t),
        })
}

proptest! {
    #[test]
    fn prelie_round_trip(d in prelie_doc()) {
        let doc = Document::PreLie(d);
        let text = serialize(&doc, &["generated"]);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize(&back, &["generated"]), text);
    }

    #[test]
    fn flows_round_trip(d in prelie_doc()) {
        let doc = Document::Brace(BraceDoc { group: d.group, body: BraceBody::Flows(d.constants) });
        let text = serialize(&doc, &[]);
        prop_assert_eq!(parse(&text).unwrap(), doc);
    }

    #[test]
    fn cayley_round_trip(d in cayley_doc()) {
        let doc = Document::Brace(d);
        let text = serialize(&doc, &[]);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(parse(&text.replace('∘', "o")).unwrap(), doc);
    }

    /// Comments, blank lines and spacing do not change the document.
    #[test]
    fn layout_is_irrelevant(d in prelie_doc()) {
        let doc = Document::PreLie(d);
        let text = serialize(&doc, &[]);
        let noisy: String = text
            .lines()
            .map(|l| format!("  {}   # note\n\n", l.replace(' ', "   ")))
            .collect();
        prop_assert_eq!(parse(&noisy).unwrap(), doc);
    }

    #[test]
    fn oversized_groups_rejected(p in prop_oneof![Just(5u64), Just(7)], extra in 0u32..3) {
        let n = (p - 1) as u32 + extra;
        let text = format!("prelie v1\np {p}\nfactors {n}\n");
        prop_assert!(parse(&text).is_err());
    }
}

#[test]
fn duplicate_cayley_row_rejected() {
    let mut text = serialize(
        &Document::Brace(BraceDoc::cayley(&braceflow_core::Brace::trivial(
            &PGroup::cyclic(5, 1).unwrap(),
        ))),
        &[],
    );
    text.push_str("(0) ∘ (0) = (0)\n");
    let e = parse(&text).unwrap_err().to_string();
    assert!(e.contains("given twice"), "{e}");
}

#[test]
fn non_canonical_coordinate_rejected() {
    let e = parse("brace v1\np 5\nfactors 1\n(5) o (0) = (0)\n")
        .unwrap_err()
        .to_string();
    assert!(e.starts_with("line 4"), "{e}");
}
