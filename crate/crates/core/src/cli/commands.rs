use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::render::{coeff_strings, csv, to_f64, OutputRecord};
use super::{chain_digest, format_float, load, CliError, Command, Format};
use crate::chain::{format_rational, parse_rational, AbsorbingChain, Chain, ChainKind};
use crate::hitting::{
    all_hitting_transforms, first_step_residual, hitting_transform, mean, pmf, variance,
    HittingError, HittingTimeTransform,
};
use crate::oracle::{
    cdf_uniformization, laplace_uniformization, pmf_matrix_power, simulate_continuous,
    simulate_discrete, McConfig,
};
use crate::spectral::{
    decompose_skip_free, is_skip_free, nonunit_spectrum, verify_identities, Classification,
    IdentityReport,
};
use crate::Rational;

/// Transform-vs-uniformization grid and its tolerance.
const VERIFY_GRID: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.0];
const VERIFY_TOL: f64 = 1e-8;

fn base_warnings(chain: &Chain) -> Vec<String> {
    let unreachable = chain.unreachable_states();
    if unreachable.is_empty() {
        Vec::new()
    } else {
        vec![format!(
            "states {unreachable:?} cannot reach the absorbing state; their transforms are identically zero"
        )]
    }
}

fn record<T: Serialize>(
    command: &'static str,
    arguments: Vec<String>,
    chain: &Chain,
    results: T,
    warnings: Vec<String>,
) -> OutputRecord<T> {
    OutputRecord {
        command,
        arguments,
        chain_digest: chain_digest(chain),
        kind: chain.kind().as_str(),
        d: chain.d(),
        results,
        warnings,
    }
}

pub(super) fn execute(cmd: &Command, echo: Vec<String>) -> Result<(String, i32), CliError> {
    match cmd {
        Command::Analyze {
            file,
            start,
            all_starts,
        } => {
            let chain = load(file)?;
            analyze(&chain, *start, *all_starts, echo).map(|s| (s, 0))
        }
        Command::Pmf {
            file,
            start,
            n_max,
            format,
        } => {
            let chain = load(file)?;
            pmf_table(&chain, *start, *n_max, *format, echo).map(|s| (s, 0))
        }
        Command::Cdf {
            file,
            start,
            times,
            eps,
            format,
        } => {
            let chain = load(file)?;
            let grid = parse_times(times)?;
            cdf_table(&chain, *start, &grid, *eps, *format, echo).map(|s| (s, 0))
        }
        Command::Decompose { file } => {
            let chain = load(file)?;
            Ok((decompose(&chain, echo), 0))
        }
        Command::Simulate {
            file,
            start,
            samples,
            seed,
            max_steps,
        } => {
            let chain = load(file)?;
            let cfg = McConfig::new(*samples, *seed).with_max_steps(*max_steps);
            simulate(&chain, *start, &cfg, echo).map(|s| (s, 0))
        }
        Command::Verify { file, n_max } => {
            let chain = load(file)?;
            verify(&chain, *n_max, echo)
        }
    }
}

fn parse_times(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && *x >= 0.0)
                .ok_or_else(|| CliError::Input(format!("bad time value {t:?}")))
        })
        .collect()
}

#[derive(Serialize)]
struct AnalyzeEntry {
    start: usize,
    transform: &'static str,
    numerator: Vec<String>,
    denominator: Vec<String>,
    reaches_absorbing: bool,
    absorption_probability: String,
    absorption_probability_float: f64,
    mean: Option<String>,
    mean_float: Option<f64>,
    variance: Option<String>,
    variance_float: Option<f64>,
    note: Option<String>,
}

fn analyze_entry(chain: &Chain, t: &HittingTimeTransform) -> AnalyzeEntry {
    let (m, v, note) = match (mean(t), variance(t)) {
        (Ok(m), Ok(v)) => (Some(m), Some(v), None),
        (Err(e), _) | (_, Err(e)) => (None, None, Some(e.to_string())),
    };
    AnalyzeEntry {
        start: t.start,
        transform: t.kind.as_str(),
        numerator: coeff_strings(t.func.num()),
        denominator: coeff_strings(t.func.den()),
        reaches_absorbing: chain.reaches_absorbing(t.start),
        absorption_probability: format_rational(&t.absorption_probability),
        absorption_probability_float: to_f64(&t.absorption_probability),
        mean_float: m.as_ref().map(to_f64),
        mean: m.as_ref().map(format_rational),
        variance_float: v.as_ref().map(to_f64),
        variance: v.as_ref().map(format_rational),
        note,
    }
}

fn analyze(
    chain: &Chain,
    start: Option<usize>,
    all_starts: bool,
    echo: Vec<String>,
) -> Result<String, CliError> {
    let transforms = match (start, all_starts) {
        (_, true) => all_hitting_transforms(chain),
        (Some(i), false) => vec![hitting_transform(chain, i)?],
        (None, false) => return Err(CliError::Input("pass --start or --all-starts".into())),
    };
    let entries: Vec<AnalyzeEntry> = transforms.iter().map(|t| analyze_entry(chain, t)).collect();
    Ok(record("analyze", echo, chain, entries, base_warnings(chain)).to_json())
}

#[derive(Serialize)]
struct PmfRow {
    n: usize,
    prob_exact: String,
    prob_float: f64,
}

#[derive(Serialize)]
struct PmfResults {
    start: usize,
    n_max: usize,
    source: &'static str,
    rows: Vec<PmfRow>,
}

fn pmf_table(
    chain: &Chain,
    start: usize,
    n_max: usize,
    format: Format,
    echo: Vec<String>,
) -> Result<String, CliError> {
    if chain.kind() != ChainKind::Discrete {
        return Err(CliError::Math(
            "pmf needs a discrete chain; use cdf for continuous chains".into(),
        ));
    }
    let t = hitting_transform(chain, start)?;
    let table = pmf(&t, n_max)?;
    let values = table.exact_values().expect("series values are exact");
    let rows: Vec<PmfRow> = values
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, p)| PmfRow {
            n,
            prob_exact: format_rational(p),
            prob_float: to_f64(p),
        })
        .collect();
    Ok(match format {
        Format::Csv => csv(
            &["n", "prob_exact", "prob_float"],
            &rows
                .iter()
                .map(|r| vec![r.n.to_string(), r.prob_exact.clone(), format_float(r.prob_float)])
                .collect::<Vec<_>>(),
        ),
        Format::Json => record(
            "pmf",
            echo,
            chain,
            PmfResults {
                start,
                n_max,
                source: "exact_series",
                rows,
            },
            base_warnings(chain),
        )
        .to_json(),
    })
}

#[derive(Serialize)]
struct CdfRow {
    t: f64,
    cdf: f64,
    cdf_exact: Option<String>,
}

#[derive(Serialize)]
struct CdfResults {
    start: usize,
    source: &'static str,
    eps: Option<f64>,
    rows: Vec<CdfRow>,
}

fn cdf_table(
    chain: &Chain,
    start: usize,
    grid: &[f64],
    eps: f64,
    format: Format,
    echo: Vec<String>,
) -> Result<String, CliError> {
    let results = match chain {
        Chain::Continuous(c) => {
            let table = cdf_uniformization(c, start, grid, eps)?;
            CdfResults {
                start,
                source: "uniformization",
                eps: Some(eps),
                rows: grid
                    .iter()
                    .zip(table.float_values())
                    .map(|(&t, cdf)| CdfRow {
                        t,
                        cdf,
                        cdf_exact: None,
                    })
                    .collect(),
            }
        }
        Chain::Discrete(_) => {
            let horizon = grid.iter().fold(0.0f64, |a, &b| a.max(b)).floor();
            let n_max = horizon
                .to_usize()
                .ok_or_else(|| CliError::Input(format!("time {horizon} too large")))?;
            let t = hitting_transform(chain, start)?;
            let table = pmf(&t, n_max)?;
            let values = table.exact_values().expect("series values are exact");
            let mut acc = Rational::zero();
            let cumulative: Vec<Rational> = values
                .iter()
                .map(|p| {
                    acc += p;
                    acc.clone()
                })
                .collect();
            CdfResults {
                start,
                source: "exact_series",
                eps: None,
                rows: grid
                    .iter()
                    .map(|&t| {
                        let c = &cumulative[t.floor() as usize];
                        CdfRow {
                            t,
                            cdf: to_f64(c),
                            cdf_exact: Some(format_rational(c)),
                        }
                    })
                    .collect(),
            }
        }
    };
    Ok(match format {
        Format::Csv => csv(
            &["t", "cdf"],
            &results
                .rows
                .iter()
                .map(|r| vec![format_float(r.t), format_float(r.cdf)])
                .collect::<Vec<_>>(),
        ),
        Format::Json => record("cdf", echo, chain, results, base_warnings(chain)).to_json(),
    })
}

#[derive(Serialize)]
struct EigenOut {
    re: f64,
    im: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct SpectrumOut {
    char_poly: Vec<String>,
    eigenvalues: Vec<EigenOut>,
    zero_eigenvalues: usize,
    classification: &'static str,
}

#[derive(Serialize)]
struct CheckOut {
    name: &'static str,
    exact: bool,
    status: &'static str,
    detail: String,
}

#[derive(Serialize)]
struct DecompositionOut {
    valid: bool,
    reason: Option<String>,
    parameter_kind: &'static str,
    parameters: Vec<f64>,
}

#[derive(Serialize)]
struct DecomposeResults {
    skip_free: bool,
    spectrum: SpectrumOut,
    decomposition: Option<DecompositionOut>,
    identity_checks: Vec<CheckOut>,
}

fn checks_out(report: &IdentityReport) -> Vec<CheckOut> {
    report
        .checks
        .iter()
        .map(|c| CheckOut {
            name: c.name,
            exact: c.exact,
            status: c.status.as_str(),
            detail: c.detail.clone(),
        })
        .collect()
}

fn decompose(chain: &Chain, echo: Vec<String>) -> String {
    let mut warnings = base_warnings(chain);
    let skip_free = is_skip_free(chain);
    let (spectrum, decomposition, report) = if skip_free {
        let dec = decompose_skip_free(chain).expect("skip-free checked");
        let out = DecompositionOut {
            valid: dec.valid,
            reason: dec.invalid_reason.clone(),
            parameter_kind: match chain.kind() {
                ChainKind::Discrete => "geometric_success_probability",
                ChainKind::Continuous => "exponential_rate",
            },
            parameters: dec.parameters.clone(),
        };
        if chain.kind() == ChainKind::Continuous {
            warnings.push(
                "exponential factors are rate/(s + rate), rates being the eigenvalues of -Q on the transient states"
                    .into(),
            );
        }
        (dec.spectrum, Some(out), dec.identity_checks)
    } else {
        let spectrum = nonunit_spectrum(chain);
        let report = verify_identities(chain, &spectrum);
        (spectrum, None, report)
    };
    if spectrum.classification == Classification::ComplexPresent {
        warnings.push("complex eigenvalues: no geometric/exponential sum representation".into());
    }
    let results = DecomposeResults {
        skip_free,
        spectrum: SpectrumOut {
            char_poly: coeff_strings(&spectrum.char_poly),
            eigenvalues: spectrum
                .eigenvalues
                .iter()
                .map(|r| EigenOut {
                    re: r.value.re + 0.0,
                    im: r.value.im + 0.0,
                    multiplicity: r.multiplicity,
                })
                .collect(),
            zero_eigenvalues: spectrum.zero_eigenvalues,
            classification: spectrum.classification.as_str(),
        },
        decomposition,
        identity_checks: checks_out(&report),
    };
    record("decompose", echo, chain, results, warnings).to_json()
}

#[derive(Serialize)]
struct SimulateResults {
    start: usize,
    samples: u64,
    seed: u64,
    max_steps: u64,
    absorbed: u64,
    censored: u64,
    censored_fraction: f64,
    mean: f64,
    variance: f64,
    exact_mean: Option<String>,
    exact_mean_float: Option<f64>,
    exact_variance: Option<String>,
    z_score: Option<f64>,
    empirical_pmf: Vec<u64>,
}

fn simulate(chain: &Chain, start: usize, cfg: &McConfig, echo: Vec<String>) -> Result<String, CliError> {
    let summary = match chain {
        Chain::Discrete(c) => simulate_discrete(c, start, cfg)?,
        Chain::Continuous(c) => simulate_continuous(c, start, cfg)?,
    };
    let t = hitting_transform(chain, start)?;
    let exact = mean(&t).and_then(|m| variance(&t).map(|v| (m, v))).ok();
    let z_score = exact.as_ref().and_then(|(m, v)| {
        let sd = to_f64(v).sqrt();
        (sd > 0.0 && summary.absorbed > 0)
            .then(|| (summary.mean - to_f64(m)) / summary.standard_error(sd))
    });
    let results = SimulateResults {
        start,
        samples: summary.samples,
        seed: cfg.seed,
        max_steps: cfg.max_steps,
        absorbed: summary.absorbed,
        censored: summary.censored,
        censored_fraction: summary.censored_fraction(),
        mean: summary.mean,
        variance: summary.variance,
        exact_mean: exact.as_ref().map(|(m, _)| format_rational(m)),
        exact_mean_float: exact.as_ref().map(|(m, _)| to_f64(m)),
        exact_variance: exact.as_ref().map(|(_, v)| format_rational(v)),
        z_score,
        empirical_pmf: summary.empirical_pmf,
    };
    Ok(record("simulate", echo, chain, results, base_warnings(chain)).to_json())
}

#[derive(Serialize)]
struct VerifyCheck {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyResults {
    passed: bool,
    checks: Vec<VerifyCheck>,
}

fn verify(chain: &Chain, n_max: usize, echo: Vec<String>) -> Result<(String, i32), CliError> {
    let transforms = all_hitting_transforms(chain);
    let mut checks = Vec::new();

    let residuals = first_step_residual(chain, &transforms)?;
    let bad: Vec<usize> = (0..residuals.len()).filter(|&i| !residuals[i].is_zero()).collect();
    checks.push(VerifyCheck {
        name: "first_step_residuals".into(),
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("all {} residuals are identically zero", residuals.len())
        } else {
            format!("nonzero residual rows {bad:?}")
        },
    });

    match chain {
        Chain::Discrete(c) => {
            for t in &transforms {
                let series = pmf(t, n_max)?;
                let oracle = pmf_matrix_power(c, t.start, n_max)?;
                let first_diff = series
                    .exact_values()
                    .unwrap()
                    .iter()
                    .zip(oracle.exact_values().unwrap())
                    .position(|(a, b)| a != b);
                checks.push(VerifyCheck {
                    name: format!("pmf_vs_matrix_power[start={}]", t.start),
                    passed: first_diff.is_none(),
                    detail: match first_diff {
                        None => format!("exact agreement for n <= {n_max}"),
                        Some(n) => format!("first disagreement at n = {n}"),
                    },
                });
            }
        }
        Chain::Continuous(c) => {
            for t in &transforms {
                let mut worst = 0.0f64;
                for &s in &VERIFY_GRID {
                    let exact = to_f64(&t.func.eval(&parse_rational(&s.to_string())?).map_err(HittingError::from)?);
                    let oracle = laplace_uniformization(c, t.start, s, 1e-12)?;
                    worst = worst.max((exact - oracle).abs());
                }
                checks.push(VerifyCheck {
                    name: format!("transform_vs_uniformization[start={}]", t.start),
                    passed: worst <= VERIFY_TOL,
                    detail: format!("max abs deviation {worst:e} over s in {VERIFY_GRID:?}"),
                });
            }
        }
    }

    let spectrum = nonunit_spectrum(chain);
    let report = verify_identities(chain, &spectrum);
    let fact = report.get("factorization").expect("always reported");
    checks.push(VerifyCheck {
        name: "factorization".into(),
        passed: fact.status != crate::spectral::IdentityStatus::Failed,
        detail: fact.detail.clone(),
    });

    let passed = checks.iter().all(|c| c.passed);
    let out = record(
        "verify",
        echo,
        chain,
        VerifyResults { passed, checks },
        base_warnings(chain),
    )
    .to_json();
    Ok((out, if passed { 0 } else { 2 }))
}
