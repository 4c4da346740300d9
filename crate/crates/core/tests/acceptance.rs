//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit
//! on any failure.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use absorption::algebra::Scalar;
use absorption::chain::to_chain_file;
use absorption::hitting::{
    all_hitting_transforms, density_partial_fractions, hitting_transform, mean, pmf,
    residuals_vanish, variance,
};
use absorption::oracle::{
    cdf_uniformization, laplace_uniformization, pmf_matrix_power, simulate_continuous,
    simulate_discrete, McConfig,
};
use absorption::spectral::{decompose_skip_free, nonunit_spectrum, verify_identities, IdentityStatus};
use absorption::{Chain, ContinuousChain, DiscreteChain, RatPoly, Rational};
use common::{rat, Gen};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, budget_s: u64) -> Result<(), String> {
    check(elapsed.as_secs_f64() < budget_s as f64, || {
        format!("took {:.1} s, budget {budget_s} s", elapsed.as_secs_f64())
    })
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn discrete_corpus() -> Vec<DiscreteChain> {
    let mut g = Gen::new(0xD15C);
    (0..240)
        .map(|k| common::random_discrete(&mut g, 1 + k % 6))
        .collect()
}

fn criterion_1(corpus: &[DiscreteChain]) -> Outcome {
    let t0 = Instant::now();
    let mut starts = 0;
    for (k, chain) in corpus.iter().enumerate() {
        let transforms = all_hitting_transforms(chain);
        check(residuals_vanish(chain, &transforms).unwrap(), || {
            format!("chain {k}: nonzero first-step residual")
        })?;
        for t in &transforms {
            let series = pmf(t, 30).unwrap();
            let oracle = pmf_matrix_power(chain, t.start, 30).unwrap();
            check(series.exact_values() == oracle.exact_values(), || {
                format!("chain {k} start {}: series differs from matrix power", t.start)
            })?;
            starts += 1;
        }
    }
    within_budget(t0.elapsed(), 60)?;
    Ok(format!(
        "{} discrete chains, {starts} starts, residuals zero and pmf(n<=30) exact",
        corpus.len()
    ))
}

fn criterion_2() -> Outcome {
    let t0 = Instant::now();
    let mut g = Gen::new(0xC0A7);
    let grid = [0.0, 0.5, 1.0, 2.0, 4.0];
    let mut worst = 0.0f64;
    let n = 120;
    for k in 0..n {
        let chain = common::random_continuous(&mut g, 1 + k % 5);
        let transforms = all_hitting_transforms(&chain);
        check(residuals_vanish(&chain, &transforms).unwrap(), || {
            format!("chain {k}: nonzero first-step residual")
        })?;
        for t in &transforms {
            for &s in &grid {
                let exact = t.func.eval(&rat((s * 2.0) as i64, 2)).unwrap().to_f64_lossy();
                let oracle = laplace_uniformization(&chain, t.start, s, 1e-12).unwrap();
                worst = worst.max((exact - oracle).abs());
            }
        }
        check(worst <= 1e-6, || format!("chain {k}: deviation {worst:e}"))?;
    }
    within_budget(t0.elapsed(), 120)?;
    Ok(format!(
        "{n} continuous chains, residuals zero, max |transform - uniformization| {worst:.2e} <= 1e-6"
    ))
}

fn criterion_3() -> Outcome {
    let t0 = Instant::now();
    let mut g = Gen::new(0xB1D3);
    let points = [(0.25, rat(1, 4)), (0.5, rat(1, 2)), (0.75, rat(3, 4))];
    let n = 120;
    let mut worst = 0.0f64;
    for k in 0..n {
        let chain = common::lazy_birth_death(&mut g, 1 + k % 6);
        let dec = decompose_skip_free(&chain).unwrap();
        check(dec.valid, || format!("chain {k}: {:?}", dec.invalid_reason))?;
        let f0 = hitting_transform(&chain, 0).unwrap().func;
        for (s, exact) in points.clone() {
            let product = dec.product_transform(s).unwrap();
            let reference = f0.eval(&exact).unwrap().to_f64_lossy();
            worst = worst.max(rel_err(product, reference));
        }
        check(worst <= 1e-10, || format!("chain {k}: product form deviation {worst:e}"))?;
        let report = &dec.identity_checks;
        let monomial = report.get("numerator_monomial").unwrap();
        check(monomial.exact && monomial.status == IdentityStatus::Passed, || {
            format!("chain {k}: {}", monomial.detail)
        })?;
        check(report.all_passed(), || format!("chain {k}: identity failure {:?}", report.checks))?;
    }
    within_budget(t0.elapsed(), 30)?;
    Ok(format!(
        "{n} lazy birth-death chains, product form rel err {worst:.2e} <= 1e-10, identities pass"
    ))
}

fn criterion_4() -> Outcome {
    let t0 = Instant::now();
    let mut g = Gen::new(0xB1D4);
    let n = 110;
    let mut worst_product = 0.0f64;
    let mut worst_cdf = 0.0f64;
    let times = [0.5, 1.0, 2.0];
    for k in 0..n {
        let chain = common::continuous_birth_death(&mut g, 1 + k % 5);
        let dec = decompose_skip_free(&chain).unwrap();
        check(dec.valid, || format!("chain {k}: {:?}", dec.invalid_reason))?;
        let t = hitting_transform(&chain, 0).unwrap();
        for (s, exact) in [(0.5, rat(1, 2)), (1.0, rat(1, 1)), (2.0, rat(2, 1))] {
            let product = dec.product_transform(s).unwrap();
            let reference = t.func.eval(&exact).unwrap().to_f64_lossy();
            worst_product = worst_product.max(rel_err(product, reference));
        }
        let density = density_partial_fractions(&t).map_err(|e| format!("chain {k}: {e}"))?;
        let oracle = cdf_uniformization(&chain, 0, &times, 1e-12).unwrap().float_values();
        for (&time, cdf) in times.iter().zip(oracle) {
            worst_cdf = worst_cdf.max((density.cdf(time) - cdf).abs());
        }
        check(worst_product <= 1e-10 && worst_cdf <= 1e-8, || {
            format!("chain {k}: product {worst_product:e}, cdf {worst_cdf:e}")
        })?;
    }
    within_budget(t0.elapsed(), 60)?;
    Ok(format!(
        "{n} continuous birth-death chains, product rel err {worst_product:.2e}, cdf err {worst_cdf:.2e}"
    ))
}

fn criterion_5() -> Outcome {
    let tc4 = DiscreteChain::new(vec![
        vec![rat(0, 1), rat(1, 2), rat(1, 2)],
        vec![rat(1, 2), rat(0, 1), rat(1, 2)],
        vec![rat(0, 1), rat(0, 1), rat(1, 1)],
    ])
    .unwrap();
    let f = hitting_transform(&tc4, 0).unwrap().func;
    check(
        f.num() == &RatPoly::new(vec![rat(0, 1), rat(1, 2)])
            && f.den() == &RatPoly::new(vec![rat(1, 1), rat(-1, 2)]),
        || format!("tc4 f_0 = ({}) / ({})", f.num(), f.den()),
    )?;
    // s/(2 - s) = sum_n s^n / 2^n
    let oracle = pmf_matrix_power(&tc4, 0, 12).unwrap();
    let expected: Vec<Rational> = (0..=12)
        .map(|n| if n == 0 { rat(0, 1) } else { rat(1, 1 << n) })
        .collect();
    check(oracle.exact_values() == Some(&expected[..]), || {
        "tc4 matrix-power oracle disagrees with s/(2-s)".into()
    })?;

    let tc3 = DiscreteChain::new(vec![
        vec![rat(1, 2), rat(1, 2), rat(0, 1)],
        vec![rat(1, 4), rat(1, 4), rat(1, 2)],
        vec![rat(0, 1), rat(0, 1), rat(1, 1)],
    ])
    .unwrap();
    let want = [rat(0, 1), rat(0, 1), rat(1, 4), rat(3, 16)];
    let series = pmf(&hitting_transform(&tc3, 0).unwrap(), 3).unwrap();
    let oracle = pmf_matrix_power(&tc3, 0, 3).unwrap();
    check(series.exact_values() == Some(&want[..]), || "tc3 series pmf".into())?;
    check(oracle.exact_values() == Some(&want[..]), || "tc3 oracle pmf".into())?;

    let exp2 = ContinuousChain::new(vec![
        vec![rat(-2, 1), rat(2, 1)],
        vec![rat(0, 1), rat(0, 1)],
    ])
    .unwrap();
    let f = hitting_transform(&exp2, 0).unwrap().func;
    // 2/(s+2) normalized to 1/(1 + s/2)
    check(
        f.num() == &RatPoly::new(vec![rat(1, 1)])
            && f.den() == &RatPoly::new(vec![rat(1, 1), rat(1, 2)]),
        || format!("Exp(2) f~_0 = ({}) / ({})", f.num(), f.den()),
    )?;
    Ok("tc4 f_0 = s/(2-s), tc3 pmf [0,0,1/4,3/16], Exp(2) f~_0 = 2/(s+2), all exact".into())
}

fn criterion_6(corpus: &[DiscreteChain]) -> Outcome {
    for (k, chain) in corpus.iter().enumerate() {
        let report = verify_identities(chain, &nonunit_spectrum(chain));
        let fact = report.get("factorization").unwrap();
        check(fact.exact && fact.status == IdentityStatus::Passed, || {
            format!("chain {k}: {}", fact.detail)
        })?;
    }
    Ok(format!(
        "det(I - sP) = (1 - s) det A(s) exactly for all {} corpus chains",
        corpus.len()
    ))
}

/// Twenty seeded chains (ten of each kind) with certain absorption from state 0.
fn monte_carlo_fixtures() -> Vec<Chain> {
    let mut g = Gen::new(0x3C);
    let mut chains: Vec<Chain> = Vec::new();
    while chains.len() < 20 {
        let k = chains.len();
        let chain: Chain = if k < 10 {
            common::random_discrete(&mut g, 1 + k % 5).into()
        } else {
            common::random_continuous(&mut g, 1 + k % 5).into()
        };
        if hitting_transform(&chain, 0).unwrap().is_certain() {
            chains.push(chain);
        }
    }
    chains
}

fn criterion_7() -> Outcome {
    let t0 = Instant::now();
    let samples = 1_000_000;
    let mut worst_z = 0.0f64;
    for (k, chain) in monte_carlo_fixtures().iter().enumerate() {
        let start = 0;
        let t = hitting_transform(chain, start).unwrap();
        let (m, v) = (mean(&t).unwrap(), variance(&t).unwrap());
        let cfg = McConfig::new(samples, 1000 + k as u64);
        let run = |c: &Chain| match c {
            Chain::Discrete(c) => simulate_discrete(c, start, &cfg).unwrap(),
            Chain::Continuous(c) => simulate_continuous(c, start, &cfg).unwrap(),
        };
        let first = run(chain);
        let second = run(chain);
        check(first == second, || format!("chain {k}: reruns differ"))?;
        check(first.censored == 0, || format!("chain {k}: {} censored", first.censored))?;
        let se = (v.to_f64_lossy() / samples as f64).sqrt();
        let z = if se > 0.0 {
            (first.mean - m.to_f64_lossy()).abs() / se
        } else {
            0.0
        };
        worst_z = worst_z.max(z);
        check(z <= 4.0, || format!("chain {k}: |z| = {z:.2}"))?;
    }
    within_budget(t0.elapsed(), 120)?;
    Ok(format!(
        "20 chains x {samples} samples, max |z| {worst_z:.2} <= 4, reruns bit-identical"
    ))
}

fn criterion_8() -> Outcome {
    let mut g = Gen::new(0x12);
    let chain = common::tenths_chain(&mut g, 12);
    let dir = std::env::temp_dir().join(format!("absorption-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("dense12.json");
    std::fs::write(&path, to_chain_file(&chain)).map_err(|e| e.to_string())?;
    let t0 = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_absorption"))
        .arg("analyze")
        .arg(&path)
        .arg("--all-starts")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    let _ = std::fs::remove_dir_all(&dir);
    check(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let results = doc["results"].as_array().cloned().unwrap_or_default();
    check(results.len() == 12, || format!("{} results", results.len()))?;
    check(results.iter().all(|r| r["absorption_probability"] == "1"), || {
        "absorption probability not exactly 1".into()
    })?;
    within_budget(elapsed, 10)?;
    Ok(format!(
        "d=12 chain with tenths entries, analyze --all-starts in {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let corpus = discrete_corpus();
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(|| criterion_1(&corpus))),
        (2, Box::new(criterion_2)),
        (3, Box::new(criterion_3)),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(|| criterion_6(&corpus))),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (n, run) in &criteria {
        let t0 = Instant::now();
        let outcome = run();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("[PASS] criterion {n}: {msg} ({secs:.2} s)"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {n}: {msg} ({secs:.2} s)");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
