//! The linear program over dominating polynomials, solved through its primal
//! form: maximize `E_γ H_c` over distributions `γ` on `[0:n]` that agree with
//! `Bin_n` on every `φ_j(w)` and `(-1)^w φ_j(w)`, `j < d`. The optimal `h` is
//! read off the dual values.

use serde::Serialize;

use super::simplex::{maximize, Outcome};
use super::{expected_under_binomial, worst_slack, HCase, HPolynomial};
use crate::error::{out_of_range, Error, Result};
use crate::spectra::{binomial_masses, h_c_eval};

/// Tolerance on the witness returned by [`solve_dual_lp`].
pub const WITNESS_TOLERANCE: f64 = 1e-7;

/// Polynomial basis `φ_j` used to write the constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpBasis {
    /// `((w - n/2)/(n/2))^j`.
    Scaled,
    /// `(w - n/2)^j`.
    Shifted,
    /// `w^j`.
    Monomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The pivoting failed or produced a witness outside tolerance.
    Breakdown,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpResult {
    pub status: LpStatus,
    /// `E_{Bin_n} h` for the witness; `NaN` unless optimal.
    pub value: f64,
    /// Optimal value of the primal side.
    pub primal_value: f64,
    pub h: Option<HPolynomial>,
}

fn basis_value(basis: LpBasis, n: u64, w: u64, j: usize) -> f64 {
    let half = n as f64 / 2.0;
    let w = w as f64;
    match basis {
        LpBasis::Scaled => ((w - half) / half).powi(j as i32),
        LpBasis::Shifted => (w - half).powi(j as i32),
        LpBasis::Monomial => w.powi(j as i32),
    }
}

/// Rewrites coefficients in `basis` as coefficients of `x^i`,
/// `x = (w - n/2)/(n/2)`.
fn to_scaled(basis: LpBasis, n: u64, coeffs: &[f64]) -> Vec<f64> {
    let half = n as f64 / 2.0;
    match basis {
        LpBasis::Scaled => coeffs.to_vec(),
        LpBasis::Shifted => coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| a * half.powi(j as i32))
            .collect(),
        LpBasis::Monomial => {
            // w^j = (n/2)^j (1 + x)^j
            let mut out = vec![0.0; coeffs.len()];
            for (j, a) in coeffs.iter().enumerate() {
                let scale = a * half.powi(j as i32);
                let mut binom = 1.0;
                for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
                    *slot += scale * binom;
                    binom = binom * (j - i) as f64 / (i + 1) as f64;
                }
            }
            out
        }
    }
}

/// [`solve_dual_lp_in`] with the scaled basis.
pub fn solve_dual_lp(n: u64, d: u64, c: f64) -> Result<LpResult> {
    solve_dual_lp_in(n, d, c, LpBasis::Scaled)
}

/// `min E_{Bin_n} h` over `h = f + (-1)^w g`, `deg f, deg g <= d - 1`,
/// `h >= H_c` on `[0:n]`.
pub fn solve_dual_lp_in(n: u64, d: u64, c: f64, basis: LpBasis) -> Result<LpResult> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::Precondition(format!(
            "d = {d} must be odd and at least 3"
        )));
    }
    if n < 2 * d || n > 512 {
        return Err(Error::Precondition(format!("n = {n} must lie in 2d..=512")));
    }
    if !(-1.0..=1.0).contains(&c) {
        return Err(out_of_range("c", format!("{c} outside [-1, 1]")));
    }
    let d = d as usize;
    let masses = binomial_masses(n as usize)?;
    let mut a = Vec::with_capacity(2 * d);
    for parity in [false, true] {
        for j in 0..d {
            a.push(
                (0..=n)
                    .map(|w| {
                        let sign = if parity && w % 2 == 1 { -1.0 } else { 1.0 };
                        sign * basis_value(basis, n, w, j)
                    })
                    .collect::<Vec<f64>>(),
            );
        }
    }
    let b: Vec<f64> = a
        .iter()
        .map(|row| row.iter().zip(masses.iter()).map(|(v, m)| v * m).sum())
        .collect();
    let cost: Vec<f64> = (0..=n)
        .map(|w| h_c_eval(c, n as usize, w as usize))
        .collect();

    let sol = maximize(&a, &b, &cost);
    let status = match sol.outcome {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Infeasible => LpStatus::Infeasible,
        Outcome::Unbounded => LpStatus::Unbounded,
        Outcome::Breakdown => LpStatus::Breakdown,
    };
    if status != LpStatus::Optimal {
        return Ok(LpResult {
            status,
            value: f64::NAN,
            primal_value: f64::NAN,
            h: None,
        });
    }
    let t = (d as u64 - 1) / 2;
    let h = HPolynomial {
        n,
        t,
        c,
        case: HCase::LpWitness,
        beta: None,
        gamma: None,
        f_coeffs: to_scaled(basis, n, &sol.duals[..d]),
        g_coeffs: to_scaled(basis, n, &sol.duals[d..]),
    };
    let value = expected_under_binomial(&h, n)?;
    let feasible = worst_slack(&h, c, n, WITNESS_TOLERANCE)?.feasible;
    let consistent = (value - sol.objective).abs() <= WITNESS_TOLERANCE;
    Ok(LpResult {
        status: if feasible && consistent {
            LpStatus::Optimal
        } else {
            LpStatus::Breakdown
        },
        value,
        primal_value: sol.objective,
        h: Some(h),
    })
}
