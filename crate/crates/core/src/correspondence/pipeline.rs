//! Reconstruction of `A/ann(p^4)` as a group of flows.
//!
//! Writing `Q = A/ann(p^2)` and `I = ann_Q(p^2)`:
//!
//! * brace 2 is `(A/ann(p^2))/I`, computed directly from the brace;
//! * brace 1 is the group of flows of the twisted ring
//!   `s (•)` with `s = -(1 + p + ... + p^{p-1})`, factored by `I`;
//! * the target is `A/ann(p^4)`, matched to `Q/I` by `[[a]]_I -> [a]`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::brace::{coverage_note, Brace, IdealKind};
use crate::correspondence::derived::{derive, ring_difference, DerivedPreLie};
use crate::error::Result;
use crate::flows::flows_brace;
use crate::group::{Element, PGroup, Quotient};
use crate::prelie::PreLieRing;
use crate::report::{Check, Report};
use crate::sample::{self, Budget};

/// The group of flows of `s (•)` on `A/ann(p^2)`.
pub fn reconstruct_brace(d: &DerivedPreLie) -> Result<Brace> {
    let s = d.source().group().scalars().twist_constant();
    let mut ring = d.ring().twist(s);
    if d.group().is_enumerable() && d.group().order() <= crate::brace::DENSE_TABLE_LIMIT {
        ring = ring.tabulate()?;
    }
    flows_brace(&ring)
}

/// `[x] • [y] = (p - 1) [x . y]` on `A/ann(p^2)` for the group of flows of
/// `ring`.
pub fn verify_flows_scaling(ring: &PreLieRing, budget: &Budget) -> Report {
    let mut report = Report::new();
    let d = match flows_brace(ring).and_then(|b| derive(&b)) {
        Ok(d) => d,
        Err(e) => {
            report.push(Check::fail("flows-scaling", format!("{e}")));
            return report;
        }
    };
    let q = d.group();
    let proj = d.quotient();
    let p1 = q.p() - 1;
    let cov = budget.coverage_for(q, 2, 51);
    let w = sample::first_failure_2(q, cov, |x, y| {
        let xy = proj.project(&ring.mul(&proj.lift(x), &proj.lift(y)));
        d.bullet(x, y) == q.smul(p1, &xy)
    });
    report.push(
        Check::from_witness("flows-scaling", w.map(|(x, y)| format!("[x]={x} [y]={y}")))
            .with_note(coverage_note(cov)),
    );
    report
}

/// Element-level view of `[[a]]_I -> [a]_{ann(p^4)}`.
struct IsoMap {
    q: Quotient,
    i: Quotient,
    target: Quotient,
}

impl IsoMap {
    fn apply(&self, x: &Element) -> Element {
        self.target.project(&self.q.lift(&self.i.lift(x)))
    }
}

fn push_failure(report: &mut Report, name: &str, e: crate::Error) {
    report.push(Check::fail(name, format!("{e}")));
}

/// Runs the whole pipeline. The report ends with `theorem-main`, which
/// passes iff every other check passed.
pub fn check_reconstruction(b: &Brace, budget: &Budget) -> Report {
    let mut report = Report::new();
    let outcome = run_pipeline(b, budget, &mut report);
    if let Err(e) = outcome {
        push_failure(&mut report, "pipeline", e);
    }
    let ok = report.passed();
    report.push(if ok {
        Check::pass("theorem-main")
    } else {
        let names: Vec<String> = report.failures().map(|c| c.name.clone()).collect();
        Check::fail("theorem-main", format!("failed: {}", names.join(", ")))
    });
    report
}

fn run_pipeline(b: &Brace, budget: &Budget, report: &mut Report) -> Result<()> {
    let a = b.group();

    // brace 2
    let q_brace = b.ideal_quotient(2, IdealKind::Ann, budget)?;
    let qg = q_brace.group().clone();
    let brace2 = q_brace.ideal_quotient(2, IdealKind::Ann, budget)?;

    // brace 1
    let d = derive(b)?;
    let rec = reconstruct_brace(&d)?;
    report.extend(rec.verify(budget).scoped("flows-brace"));
    let brace1 = rec.ideal_quotient(2, IdealKind::Ann, budget)?;

    // target
    let target = b.ideal_quotient(4, IdealKind::Ann, budget)?;
    report.push(Check::pass("quotients").with_note(format!(
        "A = {}, A/ann(p^2) = {}, (A/ann(p^2))/I = {}, A/ann(p^4) = {}",
        a.describe(),
        qg.describe(),
        brace2.group().describe(),
        target.group().describe()
    )));

    let c2 = budget.coverage_for(brace2.group(), 2, 61);
    report.push(
        Check::from_witness("brace1-equals-brace2", brace1.first_difference(&brace2, c2))
            .with_note(coverage_note(c2)),
    );

    // pre-Lie rings 1, 2 and 4 on Q/I
    let i_sub = qg.ann(2);
    let ring1 = d.ring().quotient(&i_sub);
    let ring2 = derive(&q_brace).map(|d2| d2.ring());
    let ring4 = derive(&rec).map(|d4| d4.ring());
    match (ring1, ring2, ring4) {
        (Ok(r1), Ok(r2), Ok(r4)) => {
            report.push(Check::from_witness(
                "ring1-equals-ring2",
                ring_difference(&r1, &r2, budget),
            ));
            report.push(Check::from_witness(
                "ring4-equals-ring1",
                ring_difference(&r4, &r1, budget),
            ));
        }
        (r1, r2, r4) => {
            for (name, r) in [("ring1", r1), ("ring2", r2), ("ring4", r4)] {
                if let Err(e) = r {
                    push_failure(report, name, e);
                }
            }
        }
    }

    let iso = IsoMap {
        q: Quotient::new(&a.ann(2))?,
        i: Quotient::new(&i_sub)?,
        target: Quotient::new(&a.ann(4))?,
    };
    report.push(Check::from_witness(
        "iso-bijective",
        check_bijective(brace2.group(), target.group(), |x| iso.apply(x)),
    ));
    let w = sample::first_failure_2(brace2.group(), c2.reseeded(62), |x, y| {
        let t = target.group();
        iso.apply(&brace2.circ(x, y)) == target.circ(&iso.apply(x), &iso.apply(y))
            && iso.apply(&brace2.group().add(x, y)) == t.add(&iso.apply(x), &iso.apply(y))
    });
    report.push(
        Check::from_witness("brace2-iso-target", w.map(|(x, y)| format!("x={x} y={y}")))
            .with_note(coverage_note(c2)),
    );
    Ok(())
}

fn check_bijective<F: Fn(&Element) -> Element>(from: &PGroup, to: &PGroup, f: F) -> Option<String> {
    if from.order() != to.order() {
        return Some(format!("|{}| != |{}|", from.describe(), to.describe()));
    }
    if !from.is_enumerable() {
        return Some(String::from("carrier too large to enumerate"));
    }
    let mut hit = alloc::vec![false; to.order() as usize];
    for x in from.elements() {
        let y = f(&x);
        let slot = &mut hit[to.index_of(&y) as usize];
        if *slot {
            return Some(format!("{y} hit twice"));
        }
        *slot = true;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_brace_passes() {
        let g = PGroup::cyclic(5, 3).unwrap();
        let report = check_reconstruction(&Brace::trivial(&g), &Budget::default());
        assert!(report.passed(), "{report}");
        assert!(report.get("theorem-main").unwrap().passed);
    }

    #[test]
    fn flows_brace_on_z7_4() {
        let g = PGroup::cyclic(7, 4).unwrap();
        let r = PreLieRing::cyclic_scaled(&g, 7).unwrap();
        let b = flows_brace(&r).unwrap();
        let report = check_reconstruction(&b, &Budget::default());
        assert!(report.passed(), "{report}");
        assert!(verify_flows_scaling(&r, &Budget::default()).passed());
    }

    #[test]
    fn reconstruction_of_zero_is_trivial() {
        let g = PGroup::new(5, &[2, 1]).unwrap();
        let d = derive(&Brace::trivial(&g)).unwrap();
        let rec = reconstruct_brace(&d).unwrap();
        assert!(rec
            .first_difference(&Brace::trivial(d.group()), crate::Coverage::Exhaustive)
            .is_none());
    }
}
