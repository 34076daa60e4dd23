//! Experiment drivers: averages of spectral distances over the cosets of a
//! code (exhaustively or by seeded sampling), the mean squared distance of a
//! random code's spectrum from the binomial law, and the fraction of random
//! codes whose duals reach a given bilateral distance.
//!
//! Parallel work is collected in index order and summed sequentially, so every
//! number in a report is independent of the worker count.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::approximation::{linf_certificate, tail_fraction_bound, theorem_bounds, BoundSet};
use crate::codes::random_linear_code_from;
use crate::error::{out_of_range, Error, Result};
use crate::gf2::{coset_weight_counts, BitVector, LinearCode, DEFAULT_ENUMERATION_BUDGET};
use crate::macwilliams::dual_profile;
use crate::rng::{random_vector, stream_rng};
use crate::spectra::{binomial_masses, count_metrics, mass_metrics, weight_distribution, Metrics};

/// Largest redundancy `n - k` averaged exhaustively by default.
pub const DEFAULT_COSET_BUDGET_LOG2: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AveragingMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct CosetAverageOptions {
    pub coset_budget_log2: usize,
    pub enumeration_budget: u64,
    pub certificate_grid: usize,
    pub keep_per_coset: bool,
}

impl Default for CosetAverageOptions {
    fn default() -> Self {
        Self {
            coset_budget_log2: DEFAULT_COSET_BUDGET_LOG2,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            certificate_grid: 64,
            keep_per_coset: false,
        }
    }
}

/// Distances of one coset `Q + u` from the binomial law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetRecord {
    pub representative: String,
    pub l1: f64,
    pub linf: f64,
    pub l2sq: f64,
}

/// Comparison of the averages with the closed-form bounds. A bound is vacuous
/// when it is no smaller than the trivial bound (1 for L∞, 2 for L1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundChecks {
    pub linf_bound: f64,
    pub linf_vacuous: bool,
    pub linf_holds: bool,
    pub l1_bound: Option<f64>,
    pub l1_vacuous: Option<bool>,
    pub l1_holds: Option<bool>,
    pub certificate_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CosetAverageReport {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub mode: AveragingMode,
    pub cosets_evaluated: u64,
    pub avg_l1: f64,
    pub avg_linf: f64,
    pub avg_l2sq: f64,
    /// Standard errors of the three averages (sampling mode only).
    pub stderr: Option<Metrics>,
    pub dual_bilateral_distance: usize,
    pub t: usize,
    pub bounds: Option<BoundSet>,
    pub certificate: f64,
    pub checks: Option<BoundChecks>,
    #[serde(skip)]
    pub per_coset: Option<Vec<CosetRecord>>,
}

impl CosetAverageReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `representative,l1,linf,l2sq` rows, when per-coset values were kept.
    pub fn per_coset_csv(&self) -> Option<String> {
        let records = self.per_coset.as_ref()?;
        let mut out = String::from("representative,l1,linf,l2sq\n");
        for r in records {
            let _ = writeln!(
                out,
                "{},{:e},{:e},{:e}",
                r.representative, r.l1, r.linf, r.l2sq
            );
        }
        Some(out)
    }
}

fn mean_and_stderr(values: &[Metrics]) -> (Metrics, Metrics) {
    let count = values.len() as f64;
    let sum = values.iter().fold(Metrics::default(), |a, m| Metrics {
        l1: a.l1 + m.l1,
        linf: a.linf + m.linf,
        l2sq: a.l2sq + m.l2sq,
    });
    let mean = Metrics {
        l1: sum.l1 / count,
        linf: sum.linf / count,
        l2sq: sum.l2sq / count,
    };
    if values.len() < 2 {
        return (mean, Metrics::default());
    }
    let sq = values.iter().fold(Metrics::default(), |a, m| Metrics {
        l1: a.l1 + (m.l1 - mean.l1).powi(2),
        linf: a.linf + (m.linf - mean.linf).powi(2),
        l2sq: a.l2sq + (m.l2sq - mean.l2sq).powi(2),
    });
    let scale = |s: f64| (s / (count - 1.0) / count).sqrt();
    (
        mean,
        Metrics {
            l1: scale(sq.l1),
            linf: scale(sq.linf),
            l2sq: scale(sq.l2sq),
        },
    )
}

fn bound_checks(bounds: &BoundSet, avg: &Metrics, certificate: f64) -> BoundChecks {
    let linf_bound = bounds.linf();
    let l1_bound = bounds.valid_l1.then(|| bounds.l1());
    BoundChecks {
        linf_bound,
        linf_vacuous: linf_bound >= 1.0,
        linf_holds: avg.linf <= linf_bound,
        l1_bound,
        l1_vacuous: l1_bound.map(|b| b >= 2.0),
        l1_holds: l1_bound.map(|b| avg.l1 <= b),
        certificate_holds: avg.linf <= certificate,
    }
}

/// Averages the L1, L∞ and squared-L2 distances between the spectrum of
/// `Q + u` and `Bin_n` over `u`, exactly (one representative per coset) or
/// over `samples` uniform draws, draw `i` taken from stream `i` of `seed`.
pub fn coset_average(
    q: &LinearCode,
    label: &str,
    mode: AveragingMode,
    options: &CosetAverageOptions,
) -> Result<CosetAverageReport> {
    let n = q.length();
    let reference = binomial_masses(n)?;
    let budget = options.enumeration_budget;
    let evaluate = |u: &BitVector| -> Result<Metrics> {
        Ok(count_metrics(
            &coset_weight_counts(q, Some(u), budget)?,
            &reference,
        ))
    };

    let (representatives, metrics): (Vec<BitVector>, Vec<Metrics>) = match mode {
        AveragingMode::Exact => {
            let redundancy = q.redundancy();
            if redundancy > options.coset_budget_log2 {
                return Err(Error::CosetBudgetExceeded {
                    redundancy,
                    budget: 1u64 << options.coset_budget_log2.min(63),
                });
            }
            let free = q.free_columns();
            (0..1u64 << redundancy)
                .into_par_iter()
                .map(|i| {
                    let u = q.coset_representative(&free, i);
                    evaluate(&u).map(|m| (u, m))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip()
        }
        AveragingMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(out_of_range("samples", "must be at least 1"));
            }
            (0..samples)
                .into_par_iter()
                .map(|i| {
                    let u = random_vector(&mut stream_rng(seed, i), n);
                    evaluate(&u).map(|m| (u, m))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip()
        }
    };

    let (avg, stderr) = mean_and_stderr(&metrics);
    let spectrum = weight_distribution(q, None, budget)?;
    let certificate = linf_certificate(&spectrum, options.certificate_grid)?;
    let (_, profile) = dual_profile(q, budget)?;
    let d = profile.d_bilateral;
    let t = d.saturating_sub(1) / 2;
    let bounds = if t >= 1 {
        theorem_bounds(n as u64, t as u64).ok()
    } else {
        None
    };
    let checks = bounds.as_ref().map(|b| bound_checks(b, &avg, certificate));
    let per_coset = options.keep_per_coset.then(|| {
        representatives
            .iter()
            .zip(&metrics)
            .map(|(u, m)| CosetRecord {
                representative: u.to_string(),
                l1: m.l1,
                linf: m.linf,
                l2sq: m.l2sq,
            })
            .collect()
    });

    Ok(CosetAverageReport {
        code: label.to_string(),
        n,
        k: q.dimension(),
        mode,
        cosets_evaluated: metrics.len() as u64,
        avg_l1: avg.l1,
        avg_linf: avg.linf,
        avg_l2sq: avg.l2sq,
        stderr: matches!(mode, AveragingMode::MonteCarlo { .. }).then_some(stderr),
        dual_bilateral_distance: d,
        t,
        bounds,
        certificate,
        checks,
        per_coset,
    })
}

/// Outcome of the tail bound check at one value of `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailCheck {
    pub xi: f64,
    pub threshold: f64,
    pub fraction_bound: f64,
    pub empirical_fraction: f64,
    /// `avg / threshold`, which bounds the fraction for every `ξ`.
    pub markov_bound: f64,
    /// The bound says something: fewer than all cosets, below the trivial L1.
    pub nonvacuous: bool,
    pub markov_holds: bool,
    pub fraction_holds: bool,
}

/// Fraction of cosets whose L1 distance exceeds `n^(-(d-5-ξ)/4)`, compared
/// with `n^(-ξ/5)` and with the Markov bound `avg / threshold`.
pub fn tail_checks(per_coset_l1: &[f64], n: u64, d: u64, xis: &[f64]) -> Result<Vec<TailCheck>> {
    if per_coset_l1.is_empty() {
        return Err(Error::EmptyInput);
    }
    let count = per_coset_l1.len() as f64;
    let avg = per_coset_l1.iter().sum::<f64>() / count;
    xis.iter()
        .map(|&xi| {
            let (threshold, fraction_bound) = tail_fraction_bound(n, d, xi)?;
            let above = per_coset_l1.iter().filter(|&&v| v > threshold).count() as f64;
            let empirical_fraction = above / count;
            let markov_bound = avg / threshold;
            Ok(TailCheck {
                xi,
                threshold,
                fraction_bound,
                empirical_fraction,
                markov_bound,
                nonvacuous: fraction_bound < 1.0 && threshold < 2.0,
                markov_holds: empirical_fraction <= markov_bound,
                fraction_holds: empirical_fraction <= fraction_bound,
            })
        })
        .collect()
}

/// Distances between the spectrum of `Q` itself and `Bin_n`.
pub fn untranslated_distance(q: &LinearCode, budget: u64) -> Result<Metrics> {
    let spectrum = weight_distribution(q, None, budget)?;
    let reference = binomial_masses(q.length())?;
    Ok(mass_metrics(spectrum.masses(), &reference))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub size: u64,
    pub trials: u64,
    pub seed: u64,
    pub gamma_hat: f64,
    pub gamma_hat_times_size: f64,
    pub avg_l1: f64,
    pub p_n: f64,
}

fn check_size(n: usize, size: u64) -> Result<usize> {
    if !size.is_power_of_two() {
        return Err(out_of_range("N", format!("{size} is not a power of two")));
    }
    let k = size.trailing_zeros() as usize;
    if k > 20 || k >= n {
        return Err(Error::Precondition(format!(
            "N = 2^{k} must satisfy k <= 20 and k < n = {n}"
        )));
    }
    Ok(k)
}

/// Average over `trials` random codes of size `N` of the squared L2 distance
/// between the code's spectrum and `Bin_n`. Trial `i` draws its code from
/// stream `i` of `seed`.
pub fn ensemble_gamma(n: usize, size: u64, trials: u64, seed: u64) -> Result<GammaReport> {
    let k = check_size(n, size)?;
    if trials < 30 {
        return Err(out_of_range("trials", format!("{trials} is below 30")));
    }
    let reference = binomial_masses(n)?;
    let values = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (q, _) = random_linear_code_from(n, k, &mut stream_rng(seed, i))?;
            Ok(count_metrics(
                &coset_weight_counts(&q, None, 1 << 20)?,
                &reference,
            ))
        })
        .collect::<Result<Vec<Metrics>>>()?;
    let (avg, _) = mean_and_stderr(&values);
    let p_n = (size - 1) as f64 / (2f64.powi(n as i32) - 1.0);
    Ok(GammaReport {
        n,
        size,
        trials,
        seed,
        gamma_hat: avg.l2sq,
        gamma_hat_times_size: avg.l2sq * size as f64,
        avg_l1: avg.l1,
        p_n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GvReport {
    pub n: usize,
    pub c: f64,
    pub k: usize,
    pub d_required: usize,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub fraction: f64,
}

/// Fraction of random codes of size `2^round(c log2 n)` whose dual has
/// bilateral minimum distance at least `ceil(c) - 1`.
pub fn gv_fraction(n: usize, c: f64, trials: u64, seed: u64) -> Result<GvReport> {
    if n < 2 {
        return Err(out_of_range("n", "must be at least 2"));
    }
    if c <= 0.0 || !c.is_finite() {
        return Err(out_of_range("c", format!("{c} must be positive")));
    }
    if trials < 30 {
        return Err(out_of_range("trials", format!("{trials} is below 30")));
    }
    let k = (c * (n as f64).log2()).round() as usize;
    if k > 20 || k >= n {
        return Err(Error::Precondition(format!(
            "code size 2^{k} must satisfy k <= 20 and k < n = {n}"
        )));
    }
    let d_required = (c.ceil() as usize).saturating_sub(1);
    let hits = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (q, _) = random_linear_code_from(n, k, &mut stream_rng(seed, i))?;
            let (_, profile) = dual_profile(&q, 1 << 20)?;
            Ok(profile.d_bilateral >= d_required)
        })
        .collect::<Result<Vec<bool>>>()?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    Ok(GvReport {
        n,
        c,
        k,
        d_required,
        trials,
        seed,
        successes,
        fraction: successes as f64 / trials as f64,
    })
}
