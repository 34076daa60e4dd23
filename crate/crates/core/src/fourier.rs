//! Fourier analysis on the hypercube `Z_2^n`.
//!
//! Points are indexed little-endian: bit `i` of the index is coordinate `i`.
//! The transform is normalized as `f̂(z) = 2^-n Σ_x f(x) (-1)^<x,z>`, so that
//! `f = Σ_z f̂(z) χ_z` and Parseval reads `E|f|^2 = Σ_z |f̂(z)|^2`.
//!
//! The mean-square deviation of a random coset from the uniform law, for the
//! test function `e_θ(x) = exp(iθ|x|)`, has two independent evaluations here:
//! [`mse_lhs_exhaustive`] averages over cosets directly, and [`mse_rhs`] uses
//! only the weight distribution of the code.

use std::ops::{Add, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{out_of_range, Error, Result};
use crate::gf2::{coset_weight_counts, LinearCode};
use crate::spectra::{pow_w, WeightDistribution};

/// Largest dimension stored densely.
pub const MAX_DENSE_DIMENSION: usize = 24;

/// Largest length for which coset averages are computed exhaustively.
pub const MAX_EXHAUSTIVE_LENGTH: usize = 20;

/// Tolerance below zero tolerated in [`mse_rhs`] before the input is rejected.
pub const MSE_NEGATIVITY_TOLERANCE: f64 = 1e-12;

fn check_dimension(n: usize) -> Result<()> {
    if n > MAX_DENSE_DIMENSION {
        return Err(out_of_range(
            "n",
            format!("{n} exceeds {MAX_DENSE_DIMENSION}"),
        ));
    }
    Ok(())
}

/// A point `θ` of the unit circle together with `c = cos θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub theta: f64,
    pub c: f64,
}

impl SpectralPoint {
    /// Reduces `theta` into `[0, 2π)`.
    pub fn from_theta(theta: f64) -> Self {
        let theta = theta.rem_euclid(std::f64::consts::TAU);
        Self {
            theta,
            c: theta.cos(),
        }
    }

    /// The point in `[0, π]` with cosine `c`.
    pub fn from_cos(c: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&c) {
            return Err(out_of_range("c", format!("{c} outside [-1, 1]")));
        }
        Ok(Self { theta: c.acos(), c })
    }

    /// `θ_a = 2πa/m` for `a = 0..m`.
    pub fn circle_grid(m: usize) -> Vec<Self> {
        (0..m)
            .map(|a| Self::from_theta(std::f64::consts::TAU * a as f64 / m as f64))
            .collect()
    }
}

/// A complex function on `{0,1}^n`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFunction {
    n: usize,
    values: Vec<Complex64>,
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<Complex64>) -> Result<Self> {
        check_dimension(n)?;
        if values.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("values must be finite".into()));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(u64) -> Complex64) -> Result<Self> {
        check_dimension(n)?;
        Self::new(n, (0..1u64 << n).map(f).collect())
    }

    /// The character `χ_z(x) = (-1)^<x,z>`.
    pub fn character(n: usize, z: u64) -> Result<Self> {
        Self::from_fn(n, |x| {
            if (x & z).count_ones() % 2 == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        })
    }

    /// `g_r(x) = r^|x|`.
    pub fn exponential(n: usize, r: Complex64) -> Result<Self> {
        let powers: Vec<Complex64> = (0..=n as i32).map(|w| r.powi(w)).collect();
        Self::from_fn(n, |x| powers[x.count_ones() as usize])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `E_U f`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// `E_U |f|^2`.
    pub fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }
}

/// Unnormalized in-place butterflies: `v[z] <- Σ_x v[x] (-1)^<x,z>`.
pub fn fwht_in_place<T>(values: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    assert!(
        values.len().is_power_of_two(),
        "length must be a power of two"
    );
    let mut h = 1;
    while h < values.len() {
        for block in values.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// The normalized Fourier transform `f̂`.
pub fn walsh_hadamard(f: &CubeFunction) -> Result<CubeFunction> {
    check_dimension(f.n)?;
    let mut values = f.values.clone();
    fwht_in_place(&mut values);
    let scale = 1.0 / values.len() as f64;
    for v in &mut values {
        *v *= scale;
    }
    Ok(CubeFunction { n: f.n, values })
}

/// `ĝ_r(z) = ((1 - r)/2)^|z| ((1 + r)/2)^(n - |z|)` for `g_r(x) = r^|x|`.
pub fn exp_transform_closed_form(r: Complex64, n: usize, z_weight: usize) -> Complex64 {
    assert!(z_weight <= n, "weight {z_weight} exceeds n = {n}");
    let minus = (Complex64::new(1.0, 0.0) - r) / 2.0;
    let plus = (Complex64::new(1.0, 0.0) + r) / 2.0;
    minus.powi(z_weight as i32) * plus.powi((n - z_weight) as i32)
}

/// Right-hand side of the coset mean-square identity:
/// `E_{w ~ m_Q} c^w - ((c + 1)/2)^n`, with `0^0 = 1`.
///
/// For a linear code this is a sum of squares; a value below
/// `-MSE_NEGATIVITY_TOLERANCE` means the spectrum cannot come from one.
pub fn mse_rhs(spectrum: &WeightDistribution, c: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&c) {
        return Err(out_of_range("c", format!("{c} outside [-1, 1]")));
    }
    let value = spectrum.expect(|w| pow_w(c, w)) - pow_w((c + 1.0) / 2.0, spectrum.n());
    if value < -MSE_NEGATIVITY_TOLERANCE {
        return Err(Error::NotLinearSpectrum(value));
    }
    Ok(value)
}

/// Weight counts of every coset of `q`, indexed by canonical representative
/// (see [`LinearCode::coset_representative`]).
pub fn all_coset_counts(q: &LinearCode, max_cosets_log2: usize) -> Result<Vec<Vec<u64>>> {
    let redundancy = q.redundancy();
    if redundancy > max_cosets_log2 {
        return Err(Error::CosetBudgetExceeded {
            redundancy,
            budget: 1u64 << max_cosets_log2.min(63),
        });
    }
    let free = q.free_columns();
    (0..1u64 << redundancy)
        .into_par_iter()
        .map(|i| {
            let u = q.coset_representative(&free, i);
            coset_weight_counts(q, Some(&u), u64::MAX)
        })
        .collect()
}

/// `|E_{μ_{Q+u}} e_θ - E_U e_θ|^2` for one coset, given its weight counts and
/// `cos θ = c`.
pub fn coset_deviation_sq(counts: &[u64], c: f64) -> f64 {
    let n = counts.len() - 1;
    let theta = c.clamp(-1.0, 1.0).acos();
    let total = counts.iter().sum::<u64>() as f64;
    let e = Complex64::from_polar(1.0, theta);
    let mut coset_mean = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for &count in counts {
        if count > 0 {
            coset_mean += power * (count as f64 / total);
        }
        power *= e;
    }
    let uniform_mean = ((Complex64::new(1.0, 0.0) + e) / 2.0).powi(n as i32);
    (coset_mean - uniform_mean).norm_sqr()
}

/// `E_{u ~ U_n} |E_{μ_{Q+u}} e_θ - E_U e_θ|^2` with `θ = arccos c`, by
/// visiting every coset once (each coset has the same size, so averaging over
/// representatives equals averaging over `u`).
pub fn mse_lhs_exhaustive(q: &LinearCode, c: f64) -> Result<f64> {
    Ok(mse_lhs_exhaustive_grid(q, &[c])?[0])
}

/// [`mse_lhs_exhaustive`] at several values of `c`, sharing the coset spectra.
pub fn mse_lhs_exhaustive_grid(q: &LinearCode, cs: &[f64]) -> Result<Vec<f64>> {
    if q.length() > MAX_EXHAUSTIVE_LENGTH {
        return Err(out_of_range(
            "n",
            format!(
                "{} exceeds {MAX_EXHAUSTIVE_LENGTH} for exhaustive averaging",
                q.length()
            ),
        ));
    }
    if let Some(bad) = cs.iter().find(|c| !(-1.0..=1.0).contains(*c)) {
        return Err(out_of_range("c", format!("{bad} outside [-1, 1]")));
    }
    let cosets = all_coset_counts(q, MAX_EXHAUSTIVE_LENGTH)?;
    let count = cosets.len() as f64;
    Ok(cs
        .iter()
        .map(|&c| {
            cosets
                .iter()
                .map(|counts| coset_deviation_sq(counts, c))
                .sum::<f64>()
                / count
        })
        .collect())
}

fn check_distribution(p: &[f64]) -> Result<usize> {
    if p.is_empty() || !p.len().is_power_of_two() {
        return Err(Error::Precondition("mass vector length must be 2^n".into()));
    }
    let n = p.len().trailing_zeros() as usize;
    check_dimension(n)?;
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 || p.iter().any(|&m| m < 0.0) {
        return Err(Error::NotNormalized(total));
    }
    Ok(n)
}

/// `E_μ χ_z` for every `z`.
pub fn character_expectations(p: &[f64]) -> Result<Vec<f64>> {
    check_distribution(p)?;
    let mut v = p.to_vec();
    fwht_in_place(&mut v);
    Ok(v)
}

/// `max_{z != 0} |E_μ χ_z|`.
pub fn bias(p: &[f64]) -> Result<f64> {
    let corr = character_expectations(p)?;
    Ok(corr.iter().skip(1).fold(0.0, |m, v| m.max(v.abs())))
}

/// `E_{u ~ U_n} |E_{σ_u μ} f - E_U f|^2` by direct summation over all
/// translations, `(σ_u μ)(x) = μ(x + u)`. Quadratic in `2^n`.
pub fn translation_mean_square(p: &[f64], f: &CubeFunction) -> Result<f64> {
    let n = check_distribution(p)?;
    if n != f.n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: f.n,
        });
    }
    let mean = f.mean();
    let size = p.len();
    let support: Vec<(usize, f64)> = p
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, m)| m != 0.0)
        .collect();
    let sum: f64 = (0..size)
        .into_par_iter()
        .map(|u| {
            let shifted: Complex64 = support.iter().map(|&(y, m)| f.values[y ^ u] * m).sum();
            (shifted - mean).norm_sqr()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(sum / size as f64)
}

/// `Σ_{z != 0} |f̂(z)|^2 (E_μ χ_z)^2`.
pub fn translation_mean_square_fourier(p: &[f64], f: &CubeFunction) -> Result<f64> {
    let corr = character_expectations(p)?;
    if corr.len() != f.values.len() {
        return Err(Error::LengthMismatch {
            expected: corr.len(),
            found: f.values.len(),
        });
    }
    let fhat = walsh_hadamard(f)?;
    Ok(fhat
        .values
        .iter()
        .zip(&corr)
        .skip(1)
        .map(|(v, e)| v.norm_sqr() * e * e)
        .sum())
}

/// Uniform mass vector on the members of `q` (requires `n <= 24`).
pub fn code_distribution(q: &LinearCode) -> Result<Vec<f64>> {
    check_dimension(q.length())?;
    let mut p = vec![0.0; 1 << q.length()];
    let mass = 1.0 / (1u64 << q.dimension()) as f64;
    for w in crate::gf2::enumerate_codewords(q, 1 << MAX_DENSE_DIMENSION)? {
        let idx = w.words().first().copied().unwrap_or(0) as usize;
        p[idx] = mass;
    }
    Ok(p)
}
