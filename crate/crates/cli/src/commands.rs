use std::fmt::Display;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use coset_spectra::approximation::{
    check_h_feasibility, construct_h, expected_under_binomial, solve_dual_lp, theorem_bounds,
    HCase, LpStatus, Variant,
};
use coset_spectra::experiments::{
    coset_average, ensemble_gamma, gv_fraction, AveragingMode, CosetAverageOptions,
    CosetAverageReport,
};
use coset_spectra::fourier::{mse_lhs_exhaustive_grid, mse_rhs};
use coset_spectra::gf2::coset_weight_counts;
use coset_spectra::macwilliams::{bilateral_profile, dual_profile, macwilliams_transform};
use coset_spectra::spectra::{h_c_eval, weight_distribution, WeightDistribution};
use coset_spectra::{CodeFamily, LinearCode, WeightEnumerator};

use crate::{Cli, CodeArgs, Command, Family, Outcome, RunConfig};

/// Slack allowed when comparing floating evaluations of the two sides of an
/// inequality or identity.
const IDENTITY_TOLERANCE: f64 = 1e-9;
const LP_TOLERANCE: f64 = 1e-7;
/// A sampled average counts as a violation only this many standard errors
/// above the bound.
const SAMPLING_STDERRS: f64 = 5.0;

type CliResult<T> = std::result::Result<T, String>;

fn fail(e: impl Display) -> String {
    e.to_string()
}

fn require(value: Option<usize>, flag: &str, family: &str) -> CliResult<usize> {
    value.ok_or_else(|| format!("--family {family} requires --{flag}"))
}

impl CodeArgs {
    fn family(&self) -> CliResult<Option<CodeFamily>> {
        let Some(family) = self.family else {
            return Ok(None);
        };
        let r = |name| require(self.r, "r", name);
        let t = |name| require(self.t, "t", name);
        Ok(Some(match family {
            Family::Simplex => CodeFamily::Simplex { r: r("simplex")? },
            Family::Hamming => CodeFamily::Hamming { r: r("hamming")? },
            Family::Bch => CodeFamily::Bch {
                t: t("bch")?,
                r: r("bch")?,
            },
            Family::ExtHadamard => CodeFamily::ExtHadamard {
                r: r("ext-hadamard")?,
            },
            Family::ExtDualBch => CodeFamily::ExtDualBch {
                t: t("ext-dual-bch")?,
                r: r("ext-dual-bch")?,
            },
            Family::Random => CodeFamily::Random {
                n: require(self.n, "n", "random")?,
                k: require(self.k, "k", "random")?,
                seed: self.seed.ok_or("--family random requires --seed")?,
            },
        }))
    }

    /// The selected code with a label for reports.
    fn load(&self) -> CliResult<(LinearCode, String)> {
        if let Some(path) = &self.input {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let code =
                LinearCode::from_text(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            return Ok((code, path.display().to_string()));
        }
        let family = self.family()?.ok_or("a code needs --family or --input")?;
        Ok((family.build().map_err(fail)?, family.to_string()))
    }

    fn config(&self, cli: &Cli, subcommand: &'static str) -> CliResult<RunConfig> {
        Ok(RunConfig {
            code: self.family()?,
            input: self.input.clone(),
            n: self.n,
            t: self.t,
            k: self.k,
            seed: self.seed,
            enumeration_budget: Some(self.budget),
            ..RunConfig::base(cli, subcommand)
        })
    }
}

impl RunConfig {
    fn base(cli: &Cli, subcommand: &'static str) -> Self {
        RunConfig {
            subcommand,
            version: env!("CARGO_PKG_VERSION"),
            out: cli.out.clone(),
            threads: cli.threads,
            ..RunConfig::default()
        }
    }
}

fn json_report(config: &RunConfig, report: impl Serialize, verified: bool) -> CliResult<Outcome> {
    let value = json!({ "config": config, "verified": verified, "report": report });
    let mut text = serde_json::to_string_pretty(&value).map_err(fail)?;
    text.push('\n');
    Ok(Outcome { text, verified })
}

/// Appends the configuration as a comment line, which both text formats skip.
fn with_config_comment(mut text: String, config: &RunConfig) -> CliResult<Outcome> {
    text.push_str("# config ");
    text.push_str(&serde_json::to_string(config).map_err(fail)?);
    text.push('\n');
    Ok(Outcome {
        text,
        verified: true,
    })
}

fn grid(points: usize) -> CliResult<Vec<f64>> {
    if points < 2 {
        return Err("--grid must be at least 2".into());
    }
    Ok((0..points)
        .map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64)
        .collect())
}

fn counts_as_strings(counts: &[BigUint]) -> Vec<String> {
    counts.iter().map(|c| c.to_string()).collect()
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Construct(code) => {
            let config = code.config(cli, "construct")?;
            let (q, _) = code.load()?;
            with_config_comment(q.to_text(), &config)
        }
        Command::Spectrum { code, dual } => {
            let config = code.config(cli, "spectrum")?;
            let (q, _) = code.load()?;
            let primal = weight_distribution(&q, None, code.budget).map_err(fail)?;
            let spectrum = if *dual {
                let size = BigUint::from(1u8) << q.dimension();
                let enumerator = WeightEnumerator::from_distribution(&primal).map_err(fail)?;
                macwilliams_transform(&enumerator, &size)
                    .and_then(|e| e.to_distribution())
                    .map_err(fail)?
            } else {
                primal
            };
            with_config_comment(spectrum.to_csv(), &config)
        }
        Command::CosetAvg {
            code,
            samples,
            grid,
            coset_budget,
            dump_per_coset,
        } => {
            let config = RunConfig {
                samples: *samples,
                grid: Some(*grid),
                coset_budget_log2: Some(*coset_budget),
                ..code.config(cli, "coset-avg")?
            };
            let (q, label) = code.load()?;
            let mode = match samples {
                Some(samples) => AveragingMode::MonteCarlo {
                    samples: *samples,
                    seed: code.seed.unwrap_or(0),
                },
                None => AveragingMode::Exact,
            };
            let options = CosetAverageOptions {
                coset_budget_log2: *coset_budget,
                enumeration_budget: code.budget,
                certificate_grid: *grid,
                keep_per_coset: dump_per_coset.is_some(),
            };
            let report = coset_average(&q, &label, mode, &options).map_err(fail)?;
            if let (Some(path), Some(csv)) = (dump_per_coset, report.per_coset_csv()) {
                std::fs::write(path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let verified = coset_report_holds(&report);
            json_report(&config, &report, verified)
        }
        Command::VerifyBounds { code, grid: points } => {
            let config = RunConfig {
                grid: Some(*points),
                ..code.config(cli, "verify-bounds")?
            };
            let (report, verified) = verify_bounds(code, &grid(*points)?)?;
            json_report(&config, report, verified)
        }
        Command::Macwilliams(code) => {
            let config = code.config(cli, "macwilliams")?;
            let (q, label) = code.load()?;
            let primal = WeightEnumerator::from_distribution(
                &weight_distribution(&q, None, code.budget).map_err(fail)?,
            )
            .map_err(fail)?;
            let size = BigUint::from(1u8) << q.dimension();
            let dual = macwilliams_transform(&primal, &size).map_err(fail)?;
            let profile = bilateral_profile(&dual);
            // compare with direct enumeration of the dual when it is small enough
            let direct =
                if (q.redundancy() as u32) < u64::BITS && (1u64 << q.redundancy()) <= code.budget {
                    let counts = coset_weight_counts(&q.dual(), None, code.budget).map_err(fail)?;
                    let counts: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
                    Some(counts.as_slice() == dual.coefficients())
                } else {
                    None
                };
            let report = json!({
                "code": label,
                "n": q.length(),
                "k": q.dimension(),
                "primal": counts_as_strings(primal.coefficients()),
                "dual": counts_as_strings(dual.coefficients()),
                "dualProfile": profile,
                "directDualMatches": direct,
            });
            json_report(&config, report, direct != Some(false))
        }
        Command::MseIdentity { code, grid: points } => {
            let config = RunConfig {
                grid: Some(*points),
                ..code.config(cli, "mse-identity")?
            };
            let (q, label) = code.load()?;
            let cs = grid(*points)?;
            let spectrum = weight_distribution(&q, None, code.budget).map_err(fail)?;
            let lhs = mse_lhs_exhaustive_grid(&q, &cs).map_err(fail)?;
            let mut records = Vec::with_capacity(cs.len());
            let mut max_gap = 0.0f64;
            for (&c, &l) in cs.iter().zip(&lhs) {
                let r = mse_rhs(&spectrum, c).map_err(fail)?;
                max_gap = max_gap.max((l - r).abs());
                records.push(json!({ "c": c, "lhs": l, "rhs": r, "gap": (l - r).abs() }));
            }
            let verified = max_gap < IDENTITY_TOLERANCE;
            let report = json!({
                "code": label,
                "n": q.length(),
                "k": q.dimension(),
                "maxGap": max_gap,
                "tolerance": IDENTITY_TOLERANCE,
                "records": records,
            });
            json_report(&config, report, verified)
        }
        Command::Ensemble {
            n,
            k,
            samples,
            seed,
        } => {
            let config = RunConfig {
                n: Some(*n),
                k: Some(*k),
                samples: Some(*samples),
                seed: Some(*seed),
                ..RunConfig::base(cli, "ensemble")
            };
            if *k >= 64 {
                return Err("--k must be below 64".into());
            }
            let report = ensemble_gamma(*n, 1u64 << k, *samples, *seed).map_err(fail)?;
            json_report(&config, report, true)
        }
        Command::GvCheck {
            n,
            c,
            samples,
            seed,
        } => {
            let config = RunConfig {
                n: Some(*n),
                c: Some(*c),
                samples: Some(*samples),
                seed: Some(*seed),
                ..RunConfig::base(cli, "gv-check")
            };
            let report = gv_fraction(*n, *c, *samples, *seed).map_err(fail)?;
            json_report(&config, report, true)
        }
    }
}

/// `value <= bound`, allowing for sampling error when `stderr` is given.
fn within(value: f64, stderr: Option<f64>, bound: f64) -> bool {
    value - SAMPLING_STDERRS * stderr.unwrap_or(0.0) <= bound
}

fn coset_report_holds(report: &CosetAverageReport) -> bool {
    let Some(checks) = report.checks else {
        return true;
    };
    let linf_err = report.stderr.map(|s| s.linf);
    let l1_err = report.stderr.map(|s| s.l1);
    within(report.avg_linf, linf_err, checks.linf_bound)
        && within(report.avg_linf, linf_err, report.certificate)
        && checks
            .l1_bound
            .map_or(true, |b| within(report.avg_l1, l1_err, b))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BoundRecord {
    c: f64,
    variant: Variant,
    case: HCase,
    feasible: bool,
    worst_slack: f64,
    e_bin_h: f64,
    bound_a: f64,
    bound_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lp_value: Option<f64>,
    /// `E H_c` under the code's normalized spectrum.
    #[serde(skip_serializing_if = "Option::is_none")]
    e_code_hc: Option<f64>,
    /// Mean-square deviation of the code's cosets at this `c`.
    #[serde(skip_serializing_if = "Option::is_none")]
    code_mse: Option<f64>,
    holds: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BoundsReport {
    code: Option<String>,
    n: u64,
    t: u64,
    dual_bilateral_distance: Option<usize>,
    mse_bound: f64,
    records: Vec<BoundRecord>,
    violations: usize,
}

fn verify_bounds(code: &CodeArgs, cs: &[f64]) -> CliResult<(BoundsReport, bool)> {
    let (n, t, spectrum, label, d) = if code.family.is_some() || code.input.is_some() {
        let (q, label) = code.load()?;
        let (_, profile) = dual_profile(&q, code.budget).map_err(fail)?;
        let d = profile.d_bilateral;
        if d < 3 {
            return Err(format!("{label}: dual bilateral distance {d} is below 3"));
        }
        let spectrum = weight_distribution(&q, None, code.budget).map_err(fail)?;
        (
            q.length() as u64,
            (d as u64 - 1) / 2,
            Some(spectrum),
            Some(label),
            Some(d),
        )
    } else {
        let n = code.n.ok_or("verify-bounds needs a code or --n and --t")?;
        let t = code.t.ok_or("verify-bounds needs a code or --n and --t")?;
        (n as u64, t as u64, None, None, None)
    };
    let bounds = theorem_bounds(n, t).map_err(fail)?;
    let lp_in_domain = n <= 512;

    let per_c = cs
        .par_iter()
        .map(|&c| bound_records(n, t, c, &bounds, spectrum.as_ref(), lp_in_domain))
        .collect::<CliResult<Vec<_>>>()?;
    let records: Vec<BoundRecord> = per_c.into_iter().flatten().collect();
    let violations = records.iter().filter(|r| !r.holds).count();
    Ok((
        BoundsReport {
            code: label,
            n,
            t,
            dual_bilateral_distance: d,
            mse_bound: bounds.mse(),
            records,
            violations,
        },
        violations == 0,
    ))
}

fn bound_records(
    n: u64,
    t: u64,
    c: f64,
    bounds: &coset_spectra::approximation::BoundSet,
    spectrum: Option<&WeightDistribution>,
    with_lp: bool,
) -> CliResult<Vec<BoundRecord>> {
    let lp_value = if with_lp {
        let lp = solve_dual_lp(n, 2 * t + 1, c).map_err(fail)?;
        if lp.status != LpStatus::Optimal {
            return Err(format!("linear program at c = {c}: {:?}", lp.status));
        }
        Some(lp.value)
    } else {
        None
    };
    let e_code_hc = spectrum.map(|s| s.expect(|w| h_c_eval(c, n as usize, w)));
    let code_mse = spectrum.map(|s| mse_rhs(s, c)).transpose().map_err(fail)?;

    [
        (Variant::PartA, bounds.mse_small),
        (Variant::PartB, bounds.mse_large),
    ]
    .into_iter()
    .map(|(variant, bound)| {
        let h = construct_h(n, t, c, variant).map_err(fail)?;
        let feasibility = check_h_feasibility(&h, c, n).map_err(fail)?;
        let e_bin_h = expected_under_binomial(&h, n).map_err(fail)?;
        let holds = feasibility.feasible
            && e_bin_h <= bound
            && lp_value.map_or(true, |v| v <= e_bin_h + LP_TOLERANCE)
            && match (e_code_hc, lp_value) {
                (Some(lower), Some(v)) => lower <= v + LP_TOLERANCE,
                (Some(lower), None) => lower <= e_bin_h + LP_TOLERANCE,
                _ => true,
            }
            && code_mse.map_or(true, |m| m <= bounds.mse());
        Ok(BoundRecord {
            c,
            variant,
            case: h.case,
            feasible: feasibility.feasible,
            worst_slack: feasibility.worst_slack,
            e_bin_h,
            bound_a: bounds.mse_small,
            bound_b: bounds.mse_large,
            lp_value,
            e_code_hc,
            code_mse,
            holds,
        })
    })
    .collect()
}
