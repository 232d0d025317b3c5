//! The acceptance suite: one function per criterion, each returning a
//! report over the fixtures it covers.

use std::time::{Duration, Instant};

use braceflow_core::correspondence::{check_reconstruction, derive, fmap, verify_flows_scaling};
use braceflow_core::flows::flows_brace;
use braceflow_core::identities::{verify_quoted_identities, IdentityBudget};
use braceflow_core::sample::Budget;
use braceflow_core::{Check, Error, PGroup, Report, ScalarRing};

use crate::fixtures::{self, Fixture};
use crate::format::{self, FormatError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    pub budget: Budget,
    pub identities: IdentityBudget,
    /// Skips E2 and shrinks the sample counts.
    pub quick: bool,
}

impl Options {
    pub fn quick() -> Self {
        Self {
            budget: Budget::with_samples(10_000),
            identities: IdentityBudget {
                samples: 1_000,
                ..IdentityBudget::default()
            },
            quick: true,
        }
    }

    fn suite(&self) -> Vec<Fixture> {
        fixtures::SUITE
            .into_iter()
            .filter(|f| !(self.quick && f.name == "E2"))
            .collect()
    }

    fn pre_lie_suite(&self) -> Vec<Fixture> {
        self.suite()
            .into_iter()
            .filter(|f| f.ring().is_some())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub limit: Duration,
}

const fn criterion(id: u8, name: &'static str, secs: u64) -> Criterion {
    Criterion {
        id,
        name,
        limit: Duration::from_secs(secs),
    }
}

pub const CRITERIA: [Criterion; 8] = [
    criterion(1, "derived-pre-lie", 60),
    criterion(2, "flows-derive-scaling", 60),
    criterion(3, "reconstruction-coefficients", 120),
    criterion(4, "f-permutation", 30),
    criterion(5, "reconstruction", 300),
    criterion(6, "quoted-identities", 120),
    criterion(7, "arithmetic", 1),
    criterion(8, "robustness", 5),
];

#[derive(Debug, Clone)]
pub struct Outcome {
    pub criterion: Criterion,
    pub report: Report,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn in_time(&self) -> bool {
        self.elapsed <= self.criterion.limit
    }

    pub fn passed(&self) -> bool {
        self.report.passed() && self.in_time()
    }

    /// `ACCEPT <id> PASS|FAIL <name> (<elapsed> / <limit>)`.
    pub fn line(&self) -> String {
        let mut s = format!(
            "ACCEPT {} {} {} ({:.2}s / {}s)",
            self.criterion.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.criterion.name,
            self.elapsed.as_secs_f64(),
            self.criterion.limit.as_secs()
        );
        if !self.in_time() {
            s.push_str(" over time");
        }
        s
    }
}

pub fn run(id: u8, opts: &Options) -> Outcome {
    let criterion = CRITERIA[usize::from(id) - 1];
    let start = Instant::now();
    let report = match id {
        1 => derived_pre_lie(opts),
        2 => flows_derive_scaling(opts),
        3 => reconstruction_coefficients(opts),
        4 => f_permutation(opts),
        5 => reconstruction(opts),
        6 => quoted_identities(opts),
        7 => arithmetic(),
        8 => robustness(opts),
        _ => unreachable!("criteria are numbered 1..=8"),
    };
    Outcome {
        criterion,
        report,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(opts: &Options) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run(c.id, opts)).collect()
}

fn fail(report: &mut Report, name: &str, e: impl std::fmt::Display) {
    report.push(Check::fail(name, e.to_string()));
}

/// The derived ring on `A/ann(p^2)` is a left-nilpotent pre-Lie ring.
pub fn derived_pre_lie(opts: &Options) -> Report {
    let mut report = Report::new();
    for f in opts.suite() {
        match derive(&f.brace()) {
            Ok(d) => report.extend(d.verify(&opts.budget).scoped(f.name)),
            Err(e) => fail(&mut report, f.name, e),
        }
    }
    report
}

/// `[x] • [y] = (p - 1) [x . y]` for the flows of every pre-Lie fixture.
pub fn flows_derive_scaling(opts: &Options) -> Report {
    let mut report = Report::new();
    for f in opts.pre_lie_suite() {
        let ring = f.ring().expect("pre-Lie fixture");
        report.extend(verify_flows_scaling(&ring, &opts.budget).scoped(f.name));
    }
    report
}

/// `alpha_1 = gamma_1 = 1` and both reconstruction identities on every class.
pub fn reconstruction_coefficients(opts: &Options) -> Report {
    let mut report = Report::new();
    for f in opts.suite() {
        match derive(&f.brace()) {
            Ok(d) => {
                report.extend(fmap::verify_alpha_identity(&d, &opts.budget).scoped(f.name));
                report.extend(fmap::verify_gamma_identity(&d, &opts.budget).scoped(f.name));
            }
            Err(e) => fail(&mut report, f.name, e),
        }
    }
    report
}

/// `[a] -> [f(a)]` permutes `A/ann(p^2)`, `g` inverts it, and cycle lengths
/// divide `(p^p)!`.
pub fn f_permutation(opts: &Options) -> Report {
    let mut report = Report::new();
    for f in opts.suite() {
        match derive(&f.brace()) {
            Ok(d) => report.extend(fmap::verify_f_bijection(&d).scoped(f.name)),
            Err(e) => fail(&mut report, f.name, e),
        }
    }
    report
}

/// The full reconstruction of `A/ann(p^4)`. For E1 and E2 the target must
/// be the nontrivial `Z/7`.
pub fn reconstruction(opts: &Options) -> Report {
    let mut report = Report::new();
    for f in opts.suite() {
        let b = f.brace();
        if matches!(f.name, "E1" | "E2") {
            let order = b
                .group()
                .quotient(&b.group().ann(4))
                .map(|q| q.target().order());
            report.push(
                Check::from_witness(
                    format!("{}.target-nontrivial", f.name),
                    (order != Ok(7)).then(|| format!("|A/ann(p^4)| = {order:?}")),
                )
                .with_note("A/ann(p^4) = Z/7"),
            );
        }
        report.extend(check_reconstruction(&b, &opts.budget).scoped(f.name));
    }
    report
}

pub fn quoted_identities(opts: &Options) -> Report {
    let mut report = Report::new();
    for f in opts.suite() {
        report.extend(verify_quoted_identities(&f.brace(), &opts.identities).scoped(f.name));
    }
    report
}

/// The congruences for `xi`, the twist constant and inverse factorials,
/// checked with plain integer arithmetic.
pub fn arithmetic() -> Report {
    let mut report = Report::new();
    let pow = |b: u64, e: u64, m: u64| {
        (0..e).fold(1u128 % m as u128, |acc, _| acc * b as u128 % m as u128) as u64
    };
    for (p, m) in [(5u64, 2u32), (5, 3), (7, 3), (7, 5)] {
        let scope = format!("R({p},{m})");
        let r = match ScalarRing::new(p, m) {
            Ok(r) => r,
            Err(e) => {
                fail(&mut report, &scope, e);
                continue;
            }
        };
        let q = p.pow(m);
        let xi = r.xi();
        report.push(Check::from_witness(
            format!("{scope}.xi-order"),
            (pow(xi, p - 1, q) != 1).then(|| format!("xi = {xi}, xi^(p-1) != 1 mod {q}")),
        ));
        let bad_j = (1..p - 1).find(|&j| pow(xi, j, p) == 1);
        report.push(Check::from_witness(
            format!("{scope}.xi-primitive"),
            bad_j.map(|j| format!("xi^{j} = 1 mod {p}")),
        ));
        let s = r.twist_constant();
        report.push(Check::from_witness(
            format!("{scope}.twist"),
            ((p - 1) as u128 * s as u128 % q as u128 != 1)
                .then(|| format!("(p-1) * {s} != 1 mod {q}")),
        ));
        let bad_k = (0..p).find(|&k| {
            let fact = (1..=k).fold(1u128, |acc, i| acc * i as u128) % q as u128;
            r.inv_factorial(k)
                .map_or(true, |inv| inv as u128 * fact % q as u128 != 1)
        });
        report.push(Check::from_witness(
            format!("{scope}.inv-factorial"),
            bad_k.map(|k| format!("k = {k}")),
        ));
    }
    report
}

/// Bad inputs are caught: a corrupted Cayley table fails verification with
/// a witness, a non-nilpotent ring has no group of flows, and `n >= p - 1`
/// is refused by the parser.
pub fn robustness(opts: &Options) -> Report {
    let mut report = Report::new();

    let intact = fixtures::Z25.brace().verify(&opts.budget);
    report.push(Check::from_witness(
        "intact-table-passes",
        (!intact.passed()).then(|| intact.to_string()),
    ));

    let corrupt = fixtures::Z25_CORRUPT.brace().verify(&opts.budget);
    let witness = corrupt.failures().find_map(|c| c.witness.clone());
    report.push(match witness {
        Some(w) => Check::pass("corrupt-table-fails").with_note(w),
        None => Check::fail(
            "corrupt-table-fails",
            "verification passed or gave no witness",
        ),
    });

    let ring = fixtures::NON_NILPOTENT.ring().expect("pre-Lie fixture");
    report.push(match flows_brace(&ring) {
        Err(Error::NotNilpotent(msg)) => Check::pass("non-nilpotent-rejected").with_note(msg),
        Err(e) => Check::fail("non-nilpotent-rejected", format!("unexpected error: {e}")),
        Ok(_) => Check::fail("non-nilpotent-rejected", "flows accepted the ring"),
    });

    report.push(match format::parse(fixtures::ORDER_TOO_LARGE.text) {
        Err(
            e @ FormatError::Invalid {
                source: Error::OrderTooLarge { .. },
                ..
            },
        ) => Check::pass("order-too-large-rejected").with_note(e.to_string()),
        Err(e) => Check::fail("order-too-large-rejected", format!("unexpected error: {e}")),
        Ok(_) => Check::fail("order-too-large-rejected", "parsed"),
    });
    report.push(Check::from_witness(
        "order-too-large-group",
        PGroup::cyclic(7, 6)
            .is_ok()
            .then(|| String::from("Z/7^6 accepted")),
    ));
    report
}
