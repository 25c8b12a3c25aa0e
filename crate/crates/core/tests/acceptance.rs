//! Acceptance criteria 1–11 at their stated tolerances, on the default
//! configuration (N = 2, D = 12, 25 trials, seed 0).
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use torext::verify::{run_suite, CheckRecord, Report, SuiteConfig};

struct Criterion {
    number: u32,
    title: &'static str,
    /// `(check id, bound, minimum trials)`
    requirements: &'static [(&'static str, f64, usize)],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "chain rule (FG)^J = F^J(G)·G^J",
        requirements: &[("diffeo.chain-rule", 1e-7, 25)],
    },
    Criterion {
        number: 2,
        title: "central cocycle law for the gauge cocycle",
        requirements: &[("gauge.cocycle-law", 1e-8, 25)],
    },
    Criterion {
        number: 3,
        title: "abelian law for the three pulled-back cocycles",
        requirements: &[
            ("pullback.gauge-law", 1e-7, 25),
            ("pullback.circle-law", 1e-7, 25),
            ("pullback.volume-law", 1e-7, 25),
        ],
    },
    Criterion {
        number: 4,
        title: "B(F,G) = C(F^J(G), G^J) and dense quadrature",
        requirements: &[
            ("circle.heisenberg-pullback", 1e-9, 50),
            ("circle.quadrature", 1e-8, 25),
            ("circle.golden", 1e-8, 1),
        ],
    },
    Criterion {
        number: 5,
        title: "homotopy oracle = ∫ ln|f| d ln|g| = π Σ j a_j b_{−j}",
        requirements: &[("circle.heisenberg-chain", 1e-8, 25)],
    },
    Criterion {
        number: 6,
        title: "φ is a homomorphism; exact rational group law",
        requirements: &[("heisenberg.phi-homomorphism", 1e-10, 25), ("heisenberg.exact-group", 0.0, 25)],
    },
    Criterion {
        number: 7,
        title: "skew-symmetry and Jacobi law for τ₁, τ₂, dτ₁, dτ₂ on T² and T³",
        requirements: &[
            ("lie.skew", 1e-12, 25),
            ("lie.jacobi-tau1", 1e-7, 25),
            ("lie.jacobi-tau2", 1e-7, 25),
            ("lie.jacobi-dtau1", 1e-7, 25),
            ("lie.jacobi-dtau2", 1e-7, 25),
            ("lie.jacobi-3d", 1e-7, 25),
        ],
    },
    Criterion {
        number: 8,
        title: "trivializations on divergence-free fields, volume-preserving pairs, the circle",
        requirements: &[
            ("trivial.divergence-free", 1e-9, 25),
            ("trivial.volume-preserving", 1e-9, 25),
            ("trivial.circle-taus", 0.0, 25),
        ],
    },
    Criterion {
        number: 9,
        title: "group → Lie algebra bridges, one constant each",
        requirements: &[("bridge.virasoro-bott", 1e-3, 10), ("bridge.gauge-dtau1", 1e-3, 10)],
    },
    Criterion {
        number: 10,
        title: "standard volume form: div cocycle = τ₂, δ = det F^J",
        requirements: &[("trivial.div-cocycle-standard", 1e-9, 25), ("volume.delta-det", 1e-8, 25)],
    },
];

fn meets(c: &CheckRecord, bound: f64, trials: usize) -> bool {
    c.pass && c.trials >= trials && c.residual.is_some_and(|r| r <= bound)
}

fn evaluate(report: &Report, criterion: &Criterion) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(id, bound, trials) in criterion.requirements {
        match report.check(id) {
            Some(c) => {
                let good = meets(c, bound, trials);
                ok &= good;
                let r = c.residual.map(|r| format!("{r:.2e}")).unwrap_or_else(|| "error".into());
                parts.push(format!("{id} {r} ≤ {bound:.0e} ×{}{}", c.trials, if good { "" } else { " ✗" }));
            }
            None => {
                ok = false;
                parts.push(format!("{id} missing"));
            }
        }
    }
    (ok, parts.join("; "))
}

#[test]
fn acceptance() {
    let cfg = SuiteConfig::default();
    let first = run_suite(&cfg).expect("default configuration runs");
    let mut all = true;
    for criterion in CRITERIA {
        let (ok, detail) = evaluate(&first, criterion);
        all &= ok;
        println!(
            "criterion {:>2} {}  {}  [{}]",
            criterion.number,
            if ok { "PASS" } else { "FAIL" },
            criterion.title,
            detail
        );
    }
    for (k, v) in &first.constants {
        println!("             constant {k} = {v:.7}");
    }

    let second = run_suite(&cfg).expect("default configuration runs");
    let identical = first.to_json().as_bytes() == second.to_json().as_bytes();
    all &= identical;
    println!(
        "criterion 11 {}  identical (seed, config) give byte-identical JSON  [{} bytes]",
        if identical { "PASS" } else { "FAIL" },
        first.to_json().len()
    );

    let failing: Vec<&str> = first.checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
    println!("default configuration: {} checks, failing {:?}", first.checks.len(), failing);
    assert!(failing.is_empty(), "checks failing in the default configuration: {failing:?}");
    assert!(all, "an acceptance criterion failed");
}
