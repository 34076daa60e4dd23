//! Exact weight distributions of codes, cosets and the binomial law, and the
//! L1 / L∞ / squared-L2 distances between them.
//!
//! Counts are kept as exact integers. Masses are derived once by a correctly
//! scaled big-integer division and stored as `f64`; for very long codes the
//! smallest binomial masses underflow to zero in the float layer only.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::gf2::{coset_weight_counts, BitVector, LinearCode};

/// Longest block length accepted by the binomial law and the transforms.
pub const MAX_LENGTH: usize = 4096;

/// `x * 2^e` without intermediate overflow or premature underflow.
fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// `num / den` rounded to `f64`, accurate for arbitrarily large operands.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return 0.0;
    }
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    ldexp(q.to_f64().expect("quotient fits in f64"), -shift)
}

/// Weight distribution of a finite multiset of words in `{0,1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution {
    n: usize,
    counts: Vec<BigUint>,
    total: BigUint,
    masses: Vec<f64>,
}

impl WeightDistribution {
    /// From `n + 1` exact counts, not all zero.
    pub fn from_counts(counts: Vec<BigUint>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyInput);
        }
        let total: BigUint = counts.iter().sum();
        if total.is_zero() {
            return Err(Error::Precondition("weight counts sum to zero".into()));
        }
        let masses = counts.iter().map(|c| ratio_to_f64(c, &total)).collect();
        Ok(Self {
            n: counts.len() - 1,
            counts,
            total,
            masses,
        })
    }

    pub fn from_u64_counts(counts: &[u64]) -> Result<Self> {
        Self::from_counts(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Point mass at weight `w`.
    pub fn delta(n: usize, w: usize) -> Result<Self> {
        if w > n {
            return Err(out_of_range("w", format!("{w} exceeds n = {n}")));
        }
        let mut counts = vec![BigUint::zero(); n + 1];
        counts[w] = BigUint::from(1u32);
        Self::from_counts(counts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, w: usize) -> f64 {
        self.masses[w]
    }

    /// Counts as `u64`, when they all fit.
    pub fn counts_u64(&self) -> Option<Vec<u64>> {
        self.counts.iter().map(|c| c.to_u64()).collect()
    }

    /// `E[phi(w)]` under this distribution.
    pub fn expect(&self, phi: impl Fn(usize) -> f64) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0.0)
            .map(|(w, &m)| m * phi(w))
            .sum()
    }

    /// CSV with a `# n=<n> total=<total>` header and rows `w,count,mass`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# n={} total={}\n", self.n, self.total);
        for (w, (c, m)) in self.counts.iter().zip(&self.masses).enumerate() {
            writeln!(out, "{w},{c},{m:e}").expect("writing to a String cannot fail");
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output. Masses are recomputed from the
    /// counts; the header total must agree with them.
    pub fn from_csv(text: &str) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
        let mut n = None;
        let mut total = None;
        for field in header.trim_start_matches('#').split_whitespace() {
            if let Some(v) = field.strip_prefix("n=") {
                n = v.parse::<usize>().ok();
            } else if let Some(v) = field.strip_prefix("total=") {
                total = v.parse::<BigUint>().ok();
            }
        }
        let (n, total) = n
            .zip(total)
            .ok_or_else(|| perr(1, "malformed header".into()))?;
        let mut counts = vec![BigUint::zero(); n + 1];
        let mut seen = vec![false; n + 1];
        for (line, row) in lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('#')) {
            let mut cols = row.split(',');
            let w: usize = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| perr(line, "bad weight".into()))?;
            let count: BigUint = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| perr(line, "bad count".into()))?;
            if w > n || seen[w] {
                return Err(perr(line, format!("weight {w} out of range or repeated")));
            }
            seen[w] = true;
            counts[w] = count;
        }
        let dist = Self::from_counts(counts)?;
        if dist.total != total {
            return Err(perr(1, "header total disagrees with the counts".into()));
        }
        Ok(dist)
    }
}

/// Weight distribution of `code + shift` (of `code` itself when `shift` is
/// `None`): `counts[w] = #{c in code : |c + shift| = w}`.
pub fn weight_distribution(
    code: &LinearCode,
    shift: Option<&BitVector>,
    budget: u64,
) -> Result<WeightDistribution> {
    WeightDistribution::from_u64_counts(&coset_weight_counts(code, shift, budget)?)
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut current = BigUint::from(1u32);
    row.push(current.clone());
    for w in 0..n {
        current = current * BigUint::from(n - w) / BigUint::from(w + 1);
        row.push(current.clone());
    }
    row
}

/// `Bin_n`, the weight distribution of the whole cube.
pub fn binomial_distribution(n: usize) -> Result<WeightDistribution> {
    if !(1..=MAX_LENGTH).contains(&n) {
        return Err(out_of_range("n", format!("{n} outside 1..={MAX_LENGTH}")));
    }
    WeightDistribution::from_counts(binomial_row(n))
}

/// Masses of `Bin_n`, memoized per `n`.
pub fn binomial_masses(n: usize) -> Result<Arc<Vec<f64>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().expect("cache poisoned").get(&n) {
        return Ok(Arc::clone(m));
    }
    let masses = Arc::new(binomial_distribution(n)?.masses().to_vec());
    cache
        .lock()
        .expect("cache poisoned")
        .insert(n, Arc::clone(&masses));
    Ok(masses)
}

/// Distances between two weight distributions, computed on masses.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Metrics {
    pub l1: f64,
    pub linf: f64,
    pub l2sq: f64,
}

/// Distances between two mass vectors of equal length.
pub fn mass_metrics(p: &[f64], q: &[f64]) -> Metrics {
    debug_assert_eq!(p.len(), q.len());
    p.iter().zip(q).fold(Metrics::default(), |acc, (a, b)| {
        let d = (a - b).abs();
        Metrics {
            l1: acc.l1 + d,
            linf: acc.linf.max(d),
            l2sq: acc.l2sq + d * d,
        }
    })
}

/// Distances from integer counts with a power-of-two total to a reference
/// mass vector. Agrees exactly with [`distance_metrics`] for totals below 2^53.
pub fn count_metrics(counts: &[u64], reference: &[f64]) -> Metrics {
    let total = counts.iter().sum::<u64>() as f64;
    let mut m = Metrics::default();
    for (c, r) in counts.iter().zip(reference) {
        let d = (*c as f64 / total - r).abs();
        m.l1 += d;
        m.linf = m.linf.max(d);
        m.l2sq += d * d;
    }
    m
}

pub fn distance_metrics(p: &WeightDistribution, q: &WeightDistribution) -> Result<Metrics> {
    if p.n != q.n {
        return Err(Error::LengthMismatch {
            expected: p.n,
            found: q.n,
        });
    }
    Ok(mass_metrics(&p.masses, &q.masses))
}

/// `c^w` with `0^0 = 1`.
pub fn pow_w(c: f64, w: usize) -> f64 {
    if w == 0 {
        1.0
    } else {
        c.powi(w as i32)
    }
}

/// `H_c(w) = c^w - ((c + 1) / 2)^n`, with `0^0 = 1`.
pub fn h_c_eval(c: f64, n: usize, w: usize) -> f64 {
    pow_w(c, w) - pow_w((c + 1.0) / 2.0, n)
}
