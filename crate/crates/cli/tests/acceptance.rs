//! Acceptance suite: one line per criterion, non-zero exit if any is red.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines are always
//! printed, not swallowed by the test harness' output capture.

mod common;

#[path = "../../core/tests/common/exprgen.rs"]
mod exprgen;
#[allow(dead_code)]
#[path = "../../core/tests/common/fd_order.rs"]
mod fd_order;

use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

use bonnetlab::bonnet::{check_suite, constraint_residuals, construct_pair, BonnetFields, FundamentalPair, Variant};
use bonnetlab::fieldcore::{Sampling, StencilOrder};
use bonnetlab::fixtures;
use bonnetlab::report::ResidualReport;
use bonnetlab::solver::{least_squares_solve, FieldId, SolveConfig};
use bonnetlab::tensorlab::{
    codazzi_general_residual, detect_anet, gauss_general_residual, principal_curvatures, FundamentalData,
};

const EXACT_TOL: f64 = 1e-10;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(checks: Vec<(bool, String)>) -> Self {
        let pass = checks.iter().all(|(ok, _)| *ok);
        let detail = checks
            .into_iter()
            .map(|(ok, what)| if ok { what } else { format!("[FAIL] {what}") })
            .collect::<Vec<_>>()
            .join("; ");
        Verdict { pass, detail }
    }
}

fn timed(f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn worst(r: &ResidualReport) -> (String, f64) {
    r.entries.iter().map(|e| (e.name.clone(), e.full.linf)).fold((String::new(), 0.0), |acc, (n, v)| {
        if v > acc.1 || v.is_nan() {
            (n, v)
        } else {
            acc
        }
    })
}

fn suite_below(label: &str, r: &ResidualReport, tol: f64) -> (bool, String) {
    let (name, v) = worst(r);
    (v <= tol, format!("{label} suite worst {name} = {v:.2e} (≤ {tol:e})"))
}

fn b_sampling(f: &BonnetFields) -> Sampling {
    fixtures::sigma_sampling(*f.grid(), 17)
}

fn criterion_1() -> Verdict {
    let (r, elapsed) = {
        let t = Instant::now();
        let r = check_suite(&fixtures::example_a(33), Variant::DerivationConsistent, &Sampling::plane());
        (r, t.elapsed())
    };
    let r = r.expect("example A suite");
    Verdict::new(vec![
        suite_below("example A 33²", &r, EXACT_TOL),
        (elapsed < Duration::from_secs(1), format!("runtime {:.3}s (< 1s)", elapsed.as_secs_f64())),
    ])
}

fn criterion_2() -> Verdict {
    let t = Instant::now();
    let f = fixtures::example_b(33);
    let sampling = b_sampling(&f);
    let r = check_suite(&f, Variant::DerivationConsistent, &sampling).expect("example B suite");

    let chart = construct_pair(&f, Variant::DerivationConsistent).unwrap().m.to_chart().unwrap();
    let expect = [1.0 + SQRT_2, 0.0, 1.0 - SQRT_2];
    let mut dk: f64 = 0.0;
    let mut dh: f64 = 0.0;
    let g = f.grid();
    for i in 0..g.n1 {
        for j in 0..g.n2 {
            let p = principal_curvatures(&chart, i, j, 1.0).unwrap();
            for (v, e) in p.eigenvalues.iter().zip(expect) {
                dk = dk.max((v - e).abs());
            }
            for &s in &sampling.sigmas {
                let p = principal_curvatures(&chart, i, j, s).unwrap();
                dh = dh.max((p.h - 1.0 / s).abs());
            }
        }
    }
    let elapsed = t.elapsed();
    Verdict::new(vec![
        suite_below("example B 33²×17", &r, EXACT_TOL),
        (dk <= EXACT_TOL, format!("principal curvatures at σ=1 off by {dk:.2e}")),
        (dh <= EXACT_TOL, format!("H − 1/σ = {dh:.2e}")),
        (elapsed < Duration::from_secs(10), format!("runtime {:.3}s (< 10s)", elapsed.as_secs_f64())),
    ])
}

fn criterion_3() -> Verdict {
    let a = fixtures::example_a(33);
    let gauss = |variant| {
        let chart = construct_pair(&a, variant).unwrap().m.to_chart().unwrap();
        gauss_general_residual(&chart, &Sampling::plane()).unwrap().get("gauss_general").unwrap().full.linf
    };
    let (good, printed) = (gauss(Variant::DerivationConsistent), gauss(Variant::AsPrinted));
    Verdict::new(vec![
        (good <= EXACT_TOL, format!("derivation-consistent gauss {good:.2e}")),
        ((printed - 1.0).abs() <= 1e-6, format!("as-printed gauss {printed:.9}")),
    ])
}

fn criterion_4() -> Verdict {
    let a = fixtures::example_a(33);
    let b = fixtures::example_b(33);
    let k = fixtures::kappa_violated(33);
    let anet = |f: &BonnetFields, sampling: &Sampling| {
        let chart = construct_pair(f, Variant::DerivationConsistent).unwrap().m.to_chart().unwrap();
        detect_anet(&chart, f.case().linfac(), sampling, 1e-9).is_anet
    };
    let c3 = constraint_residuals(&k, StencilOrder::Second).unwrap().c3.full.linf;
    let chart = construct_pair(&k, Variant::DerivationConsistent).unwrap().m.to_chart().unwrap();
    let gauss = gauss_general_residual(&chart, &b_sampling(&k)).unwrap().get("gauss_general").unwrap().full.linf;
    Verdict::new(vec![
        (anet(&a, &Sampling::plane()), "A-net on example A".into()),
        (anet(&b, &b_sampling(&b)), "A-net on example B".into()),
        ((c3 - 2.0).abs() <= 1e-9, format!("κ-violated c3 = {c3:.12}")),
        (gauss >= 0.1, format!("κ-violated gauss {gauss:.3e} (≥ 0.1)")),
    ])
}

fn bitwise_eq(a: &FundamentalData, b: &FundamentalData) -> bool {
    a.g11.s_power == b.g11.s_power
        && a.g11.base.values().iter().zip(b.g11.base.values()).all(|(x, y)| x.to_bits() == y.to_bits())
}

fn pair_contract(label: &str, pair: &FundamentalPair, sampling: &Sampling) -> Vec<(bool, String)> {
    let (m, mp) = (&pair.m, &pair.m_prime);
    let (c, cp) = (m.to_chart().unwrap(), mp.to_chart().unwrap());
    let g = m.grid();
    let (mut dh, mut dev): (f64, f64) = (0.0, 0.0);
    for i in 0..g.n1 {
        for j in 0..g.n2 {
            for &s in &sampling.sigmas {
                let (p, pp) = (principal_curvatures(&c, i, j, s).unwrap(), principal_curvatures(&cp, i, j, s).unwrap());
                dh = dh.max((p.h - pp.h).abs());
                if p.eigenvalues.len() != pp.eigenvalues.len() {
                    dev = f64::INFINITY;
                }
                for (x, y) in p.eigenvalues.iter().zip(&pp.eigenvalues) {
                    dev = dev.max((x - y).abs());
                }
            }
        }
    }
    let negated =
        m.b12.s_power == mp.b12.s_power && m.b12.base.values().iter().zip(mp.b12.base.values()).all(|(x, y)| *x == -*y);
    let differs = m.b11 != mp.b11 || m.b22 != mp.b22 || m.b12 != mp.b12;
    vec![
        (bitwise_eq(m, mp), format!("{label}: g bitwise identical")),
        (dh <= 1e-12, format!("{label}: ΔH {dh:.1e}")),
        (dev <= 1e-12, format!("{label}: Δspectrum {dev:.1e}")),
        (negated, format!("{label}: b12 negated")),
        (differs, format!("{label}: b(M) ≠ b(M′)")),
    ]
}

fn criterion_5() -> Verdict {
    let a = construct_pair(&fixtures::example_a(33), Variant::DerivationConsistent).unwrap();
    let bf = fixtures::example_b(33);
    let b = construct_pair(&bf, Variant::DerivationConsistent).unwrap();
    let mut checks = pair_contract("A", &a, &Sampling::plane());
    checks.extend(pair_contract("B", &b, &b_sampling(&bf)));
    Verdict::new(checks)
}

fn criterion_6() -> Verdict {
    let levels = [33, 65, 129];
    let mut gauss = Vec::new();
    let mut codazzi = Vec::new();
    for &n in &levels {
        let chart = fixtures::sphere_chart(n, 2.0);
        gauss.push(
            gauss_general_residual(&chart, &Sampling::plane()).unwrap().get("gauss_general").unwrap().interior.linf,
        );
        codazzi.push(
            codazzi_general_residual(&chart, &Sampling::plane()).unwrap().get("codazzi_general").unwrap().interior.linf,
        );
    }
    let sci = |e: &[f64]| e.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(" → ");
    let ratios = |e: &[f64]| e.windows(2).map(|w| w[0] / w[1]).collect::<Vec<_>>();
    let in_band = |r: &[f64]| r.iter().all(|x| (3.0..=5.0).contains(x));
    // A residual already at roundoff on every level has nothing left to shrink.
    let at_roundoff = |e: &[f64]| e.iter().all(|v| *v <= 1e-12);
    let (rg, rc) = (ratios(&gauss), ratios(&codazzi));
    Verdict::new(vec![
        (in_band(&rg), format!("gauss {} ratios {rg:.2?}", sci(&gauss))),
        (in_band(&rc) || at_roundoff(&codazzi), format!("codazzi {} ratios {rc:.2?}", sci(&codazzi))),
    ])
}

fn criterion_7() -> Verdict {
    let t = Instant::now();
    let initial = fixtures::perturbed_example_a(33);
    let config = SolveConfig::anchored_at(FieldId::ALL.to_vec(), &fixtures::example_a(33), 0, 0);
    let r = least_squares_solve(&config, &initial);
    let elapsed = t.elapsed();
    let r = match r {
        Ok(r) => r,
        Err(e) => return Verdict::new(vec![(false, format!("solver error: {e}"))]),
    };
    let suite = check_suite(&r.fields, Variant::DerivationConsistent, &Sampling::plane()).unwrap();
    Verdict::new(vec![
        (
            r.converged && r.final_residual() <= 1e-8,
            format!("linf {:.2e} after {} iterations", r.final_residual(), r.iterations),
        ),
        (r.iterations <= 50, "≤ 50 iterations".into()),
        (elapsed < Duration::from_secs(60), format!("runtime {:.2}s (< 60s)", elapsed.as_secs_f64())),
        suite_below("solved fields", &suite, 1e-6),
    ])
}

fn criterion_8() -> Verdict {
    let fits = fd_order::order_fits();
    let bad_fits: Vec<String> =
        fits.iter().filter(|f| !f.passes()).map(|f| format!("{} {:.2}/{}", f.name, f.fitted, f.nominal)).collect();
    let fitted: Vec<String> = fits.iter().map(|f| format!("{:.2}", f.fitted)).collect();
    let mismatches = exprgen::differential(0x5eed_0001, 1000);
    let work = tempfile::tempdir().expect("temp dir");
    let cells = common::exit_code_matrix(work.path());
    let red: Vec<String> =
        cells.iter().filter(|c| !c.ok()).map(|c| format!("{} {} → {}", c.command, c.case, c.got)).collect();
    Verdict::new(vec![
        (bad_fits.is_empty(), format!("FD orders [{}] {bad_fits:?}", fitted.join(", "))),
        (mismatches.is_empty(), format!("exprlang differential: {} mismatches / 1000", mismatches.len())),
        (
            red.is_empty() && cells.len() == 12,
            format!("CLI matrix {}/{} green {red:?}", cells.len() - red.len(), cells.len()),
        ),
    ])
}

fn main() {
    // Respect `cargo test -- <filter>` loosely: a bare number selects one criterion.
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let criteria: [Criterion; 8] = [
        ("exact Case 2 fixture", criterion_1),
        ("exact Case 1 fixture", criterion_2),
        ("misprint adjudication", criterion_3),
        ("forward/backward probes", criterion_4),
        ("associate-pair contract", criterion_5),
        ("oracle calibration", criterion_6),
        ("solver", criterion_7),
        ("derivative/parser/CLI suites", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let (v, elapsed) = timed(run);
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {tag} ({name}, {:.2}s): {}", k + 1, elapsed.as_secs_f64(), v.detail);
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
