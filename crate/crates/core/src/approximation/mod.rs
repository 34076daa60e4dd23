//! Closed-form bounds on coset spectra and the polynomial machinery behind
//! them: explicit dominating polynomials `h(w) = f(w) + (-1)^w g(w)` for
//! `H_c(w) = c^w - ((c+1)/2)^n`, the linear program they are feasible points
//! of, and binomial moments.
//!
//! Polynomials are stored in the centred, scaled variable
//! `x = (w - n/2)/(n/2)`, which ranges over `[-1, 1]` on `[0:n]`.

mod lp;
mod simplex;

use std::f64::consts::E;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::spectra::{binomial_masses, binomial_row, h_c_eval, WeightDistribution};

pub use lp::{solve_dual_lp, solve_dual_lp_in, LpBasis, LpResult, LpStatus};

/// Absolute tolerance of [`check_h_feasibility`].
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

/// Target precision used by [`linf_certificate`] when refining its grid.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-6;

/// Closed-form bounds for codes whose dual has bilateral minimum distance at
/// least `2t + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub n: u64,
    pub t: u64,
    pub linf_small: f64,
    pub linf_large: f64,
    pub l1_small: f64,
    pub l1_large: f64,
    pub mse_small: f64,
    pub mse_large: f64,
    pub valid_l1: bool,
    pub delta_star: f64,
}

impl BoundSet {
    pub fn linf(&self) -> f64 {
        self.linf_small.min(self.linf_large)
    }

    pub fn l1(&self) -> f64 {
        self.l1_small.min(self.l1_large)
    }

    pub fn mse(&self) -> f64 {
        self.mse_small.min(self.mse_large)
    }
}

fn check_nt(n: u64, t: u64) -> Result<()> {
    if t == 0 {
        return Err(out_of_range("t", "must be at least 1"));
    }
    if n < 2 * (2 * t + 1) {
        return Err(Error::Precondition(format!(
            "n = {n} must be at least 2(2t + 1) = {}",
            2 * (2 * t + 1)
        )));
    }
    Ok(())
}

pub fn theorem_bounds(n: u64, t: u64) -> Result<BoundSet> {
    check_nt(n, t)?;
    let (nf, tf) = (n as f64, t as f64);
    let ratio = 2.0 * tf / nf;
    // ln of (e ln(n/2t))^t (2t/n)^(t/2)
    let log_small = tf * (E * (1.0 / ratio).ln()).ln() + 0.5 * tf * ratio.ln();
    let linf_small = log_small.exp();
    let linf_large = std::f64::consts::SQRT_2 * (-tf / 10.0).exp();
    let l1_small = (2.0 * tf + 1.0) * (log_small - ratio.ln()).exp();
    Ok(BoundSet {
        n,
        t,
        linf_small,
        linf_large,
        l1_small,
        l1_large: (nf + 1.0) * linf_large,
        mse_small: linf_small * linf_small,
        mse_large: linf_large * linf_large,
        valid_l1: t >= 3,
        delta_star: crossover_delta_star(1e-12),
    })
}

fn crossover_gap(delta: f64) -> f64 {
    if delta <= 0.0 {
        return -(-0.1f64).exp();
    }
    E * delta.sqrt() * (1.0 / delta).ln() - (-0.1f64).exp()
}

/// Root of `e √δ ln(1/δ) = e^(-1/10)` on `(0, 0.01)`, by bisection.
///
/// `δ` plays the role of `2t/n`: below the root the per-`t` factor of
/// `linf_small` beats that of `linf_large`.
pub fn crossover_delta_star(tolerance: f64) -> f64 {
    let tolerance = tolerance.max(1e-15);
    let (mut lo, mut hi) = (0.0f64, 0.01f64);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if crossover_gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(n^(-(d-5-ξ)/4), n^(-ξ/5))`: an L1 threshold and the fraction of cosets
/// allowed to exceed it.
pub fn tail_fraction_bound(n: u64, d: u64, xi: f64) -> Result<(f64, f64)> {
    if d < 7 || d % 2 == 0 {
        return Err(Error::Precondition(format!(
            "d = {d} must be odd and at least 7"
        )));
    }
    if xi <= 0.0 || !xi.is_finite() {
        return Err(out_of_range("xi", format!("{xi} must be positive")));
    }
    if n < 1 {
        return Err(out_of_range("n", "must be positive"));
    }
    let nf = n as f64;
    Ok((nf.powf(-(d as f64 - 5.0 - xi) / 4.0), nf.powf(-xi / 5.0)))
}

/// Parameter choice for [`construct_h`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `β = ln(n/2t)`, `γ = 1/4`.
    PartA,
    /// `γ = 0.107`, `β = 1/(e(1 - 2γ))`.
    PartB,
}

impl Variant {
    pub fn parameters(self, n: u64, t: u64) -> (f64, f64) {
        match self {
            Variant::PartA => ((n as f64 / (2 * t) as f64).ln(), 0.25),
            Variant::PartB => {
                let gamma = 0.107;
                (1.0 / (E * (1.0 - 2.0 * gamma)), gamma)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HCase {
    /// `c >= c*`: Taylor expansion of `c^w` around `n/2`.
    TaylorPos,
    /// `c <= -c*`: the same expansion of `|c|^w`, carried by `(-1)^w`.
    TaylorNeg,
    /// `|c| < c*`: a scaled even power of `n/2 - w` plus a constant.
    Central,
    /// Dual solution of the linear program.
    LpWitness,
    /// Supplied directly.
    Explicit,
}

/// `h(w) = f(x) + (-1)^w g(x)` with `x = (w - n/2)/(n/2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HPolynomial {
    pub n: u64,
    pub t: u64,
    pub c: f64,
    pub case: HCase,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    /// Coefficients of `x^j`, lowest first.
    pub f_coeffs: Vec<f64>,
    pub g_coeffs: Vec<f64>,
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

fn trimmed_degree(coeffs: &[f64]) -> Option<usize> {
    coeffs.iter().rposition(|&a| a != 0.0)
}

impl HPolynomial {
    pub fn explicit(
        n: u64,
        t: u64,
        c: f64,
        f_coeffs: Vec<f64>,
        g_coeffs: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(out_of_range("n", "must be positive"));
        }
        let h = Self {
            n,
            t,
            c,
            case: HCase::Explicit,
            beta: None,
            gamma: None,
            f_coeffs,
            g_coeffs,
        };
        if h.f_coeffs.len().max(h.g_coeffs.len()) > h.degree_bound() + 1 {
            return Err(Error::Precondition(format!(
                "degree exceeds d - 1 = {}",
                h.degree_bound()
            )));
        }
        Ok(h)
    }

    /// `d - 1 = 2t`.
    pub fn degree_bound(&self) -> usize {
        2 * self.t as usize
    }

    pub fn degree_f(&self) -> Option<usize> {
        trimmed_degree(&self.f_coeffs)
    }

    pub fn degree_g(&self) -> Option<usize> {
        trimmed_degree(&self.g_coeffs)
    }

    pub fn scaled(&self, w: f64) -> f64 {
        let half = self.n as f64 / 2.0;
        (w - half) / half
    }

    pub fn eval_f(&self, w: f64) -> f64 {
        horner(&self.f_coeffs, self.scaled(w))
    }

    pub fn eval_g(&self, w: f64) -> f64 {
        horner(&self.g_coeffs, self.scaled(w))
    }

    pub fn eval(&self, w: u64) -> f64 {
        let sign = if w % 2 == 0 { 1.0 } else { -1.0 };
        self.eval_f(w as f64) + sign * self.eval_g(w as f64)
    }

    /// Coefficients of `(w - n/2)^j` for `f` and `g`.
    pub fn shifted_coefficients(&self) -> (Vec<f64>, Vec<f64>) {
        let half = self.n as f64 / 2.0;
        let rescale = |v: &[f64]| {
            v.iter()
                .enumerate()
                .map(|(j, a)| a / half.powi(j as i32))
                .collect()
        };
        (rescale(&self.f_coeffs), rescale(&self.g_coeffs))
    }
}

/// `a_c(w) + b_c(w)` in the scaled variable, for `0 < c <= 1`, where `a_c` is
/// the degree `k-1` Taylor part of `c^w` around `n/2` and `b_c` its
/// dominating degree `k` term.
fn taylor_parts(n: u64, k: usize, c: f64) -> (Vec<f64>, f64) {
    let half = n as f64 / 2.0;
    let l = -c.ln();
    let lead = c.powf(half);
    // (n/2 - w) L = -(L n/2) x
    let step = -l * half;
    let mut a = Vec::with_capacity(k);
    let mut term = lead;
    for i in 0..k {
        a.push(term);
        term *= step / (i + 1) as f64;
    }
    let mut b = 1.0;
    for i in 0..k {
        b *= (l * half) / (i + 1) as f64;
    }
    (a, b)
}

/// Builds a polynomial `h >= H_c` on `[0:n]` of the form `f + (-1)^w g`, with
/// `f` and `g` of degree at most `2t`.
pub fn construct_h(n: u64, t: u64, c: f64, variant: Variant) -> Result<HPolynomial> {
    check_nt(n, t)?;
    if !(-1.0..=1.0).contains(&c) {
        return Err(out_of_range("c", format!("{c} outside [-1, 1]")));
    }
    let k = 2 * t as usize;
    let (beta, gamma) = variant.parameters(n, t);
    let c_star = (-2.0 * k as f64 * beta / n as f64).exp();
    let uniform = ((c + 1.0) / 2.0).powf(n as f64);
    let mut f = vec![0.0; k + 1];
    let mut g = vec![0.0; k + 1];
    let case = if c >= c_star {
        let (a, b) = taylor_parts(n, k, c);
        f[..k].copy_from_slice(&a);
        f[k] = b;
        f[0] -= uniform;
        HCase::TaylorPos
    } else if c <= -c_star {
        let (a, b) = taylor_parts(n, k, c.abs());
        g[..k].copy_from_slice(&a);
        f[k] = b;
        f[0] -= uniform;
        HCase::TaylorNeg
    } else {
        // ((n/2 - w)/(n/2))^k = x^k since k is even
        f[k] = (1.0 - 2.0 * gamma).powi(-(k as i32));
        f[0] = (-2.0 * beta * gamma * k as f64).exp();
        HCase::Central
    };
    Ok(HPolynomial {
        n,
        t,
        c,
        case,
        beta: Some(beta),
        gamma: Some(gamma),
        f_coeffs: f,
        g_coeffs: g,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub worst_slack: f64,
    pub worst_w: u64,
}

/// `min_w h(w) - H_c(w)` over `[0:n]`.
pub fn check_h_feasibility(h: &HPolynomial, c: f64, n: u64) -> Result<Feasibility> {
    worst_slack(h, c, n, FEASIBILITY_TOLERANCE)
}

pub(crate) fn worst_slack(h: &HPolynomial, c: f64, n: u64, tolerance: f64) -> Result<Feasibility> {
    if h.n != n {
        return Err(Error::LengthMismatch {
            expected: n as usize,
            found: h.n as usize,
        });
    }
    let (worst_w, worst_slack) = (0..=n)
        .map(|w| (w, h.eval(w) - h_c_eval(c, n as usize, w as usize)))
        .fold(
            (0, f64::INFINITY),
            |best, cur| if cur.1 < best.1 { cur } else { best },
        );
    Ok(Feasibility {
        feasible: worst_slack >= -tolerance,
        worst_slack,
        worst_w,
    })
}

/// `E_{w ~ Bin_n} h(w)` by direct summation.
pub fn expected_under_binomial(h: &HPolynomial, n: u64) -> Result<f64> {
    if h.n != n {
        return Err(Error::LengthMismatch {
            expected: n as usize,
            found: h.n as usize,
        });
    }
    let masses = binomial_masses(n as usize)?;
    Ok(masses
        .iter()
        .enumerate()
        .map(|(w, m)| m * h.eval(w as u64))
        .sum())
}

/// An exact scaled central moment of the binomial law and its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralMoment {
    pub n: usize,
    pub k: usize,
    /// `E_{w ~ Bin_n} ((n/2 - w)/(n/2))^k`.
    pub moment: BigRational,
    /// `(k/n)^(k/2)`.
    pub bound: BigRational,
}

pub fn scaled_central_moment(n: usize, k: usize) -> Result<CentralMoment> {
    if !(2..=16).contains(&k) || k % 2 == 1 {
        return Err(out_of_range("k", format!("{k} must be even in 2..=16")));
    }
    if n == 0 || n > 64 {
        return Err(out_of_range("n", format!("{n} outside 1..=64")));
    }
    let row = binomial_row(n);
    let mut sum = BigInt::zero();
    for (w, count) in row.iter().enumerate() {
        let dev = BigInt::from(n as i64 - 2 * w as i64);
        sum += BigInt::from(count.clone()) * num_traits::pow(dev, k);
    }
    let denominator = (BigInt::one() << n) * num_traits::pow(BigInt::from(n), k);
    let moment = BigRational::new(sum, denominator);
    let bound = num_traits::pow(BigRational::new(BigInt::from(k), BigInt::from(n)), k / 2);
    if moment > bound {
        return Err(Error::InequalityViolated(format!(
            "central moment {moment} exceeds {bound} at n={n}, k={k}"
        )));
    }
    Ok(CentralMoment {
        n,
        k,
        moment,
        bound,
    })
}

/// `E_{w ~ m} c^w - ((c+1)/2)^n` without the sign check of `mse_rhs`.
fn mse_value(masses: &[f64], c: f64) -> f64 {
    let n = masses.len() - 1;
    horner(masses, c) - ((c + 1.0) / 2.0).powi(n as i32)
}

fn grid_max(masses: &[f64], points: usize) -> f64 {
    (0..points)
        .into_par_iter()
        .map(|i| {
            let c = -1.0 + 2.0 * i as f64 / (points - 1) as f64;
            mse_value(masses, c)
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// `max_c √(E_{w ~ m_Q} c^w - ((c+1)/2)^n)` over a uniform grid in `c`,
/// refined by doubling until the value moves by less than
/// [`CERTIFICATE_TOLERANCE`].
pub fn linf_certificate(spectrum: &WeightDistribution, grid_size: usize) -> Result<f64> {
    if grid_size < 64 {
        return Err(out_of_range("grid", format!("{grid_size} is below 64")));
    }
    const MAX_POINTS: usize = 1 << 20;
    let masses = spectrum.masses();
    let mut points = grid_size;
    let mut value = grid_max(masses, points).sqrt();
    while points < MAX_POINTS {
        points = 2 * points - 1;
        let refined = grid_max(masses, points).sqrt();
        let change = (refined - value).abs();
        value = value.max(refined);
        if change < CERTIFICATE_TOLERANCE {
            break;
        }
    }
    Ok(value)
}
