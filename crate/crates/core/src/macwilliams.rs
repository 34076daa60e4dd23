//! MacWilliams transform of weight enumerators and the bilateral profile
//! (bilateral minimum distance and width) read off an enumerator.
//!
//! The dual enumerator is `A⊥[w] = |Q|^-1 Σ_j A[j] K_w(j)` with the Krawtchouk
//! kernel `K_w(j) = Σ_i (-1)^i C(j, i) C(n - j, w - i)`. Kernel columns are
//! generated exactly with the three-term recurrence
//! `(w + 1) K_{w+1}(j) = (n - 2j) K_w(j) - (n - w + 1) K_{w-1}(j)`, one column
//! per nonzero input coefficient, so the full kernel is never stored.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::gf2::LinearCode;
use crate::spectra::{weight_distribution, WeightDistribution, MAX_LENGTH};

/// Exact weight enumerator `A[0..=n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEnumerator {
    n: usize,
    coeffs: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn new(coeffs: Vec<BigUint>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::EmptyInput);
        };
        if first.is_zero() {
            return Err(Error::Precondition("A[0] must be at least 1".into()));
        }
        if coeffs.len() - 1 > MAX_LENGTH {
            return Err(out_of_range(
                "n",
                format!("{} exceeds {MAX_LENGTH}", coeffs.len() - 1),
            ));
        }
        Ok(Self {
            n: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn from_u64(coeffs: &[u64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn from_distribution(dist: &WeightDistribution) -> Result<Self> {
        Self::new(dist.counts().to_vec())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn to_distribution(&self) -> Result<WeightDistribution> {
        WeightDistribution::from_counts(self.coeffs.clone())
    }
}

/// Adds `scale * K_w(j)` to `acc[w]` for every `w`.
fn accumulate_kernel_column(n: usize, j: usize, scale: &BigInt, acc: &mut [BigInt]) {
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    let slope = BigInt::from(n as i64 - 2 * j as i64);
    for (w, slot) in acc.iter_mut().enumerate() {
        *slot += scale * &cur;
        if w == n {
            break;
        }
        let next = &slope * &cur - BigInt::from((n - w + 1) as u64) * &prev;
        let (q, rem) = (
            &next / BigInt::from(w as u64 + 1),
            &next % BigInt::from(w as u64 + 1),
        );
        debug_assert!(rem.is_zero(), "Krawtchouk recurrence must divide exactly");
        prev = std::mem::replace(&mut cur, q);
    }
}

/// Dual weight enumerator of a linear code with enumerator `a` and
/// `code_size` codewords.
pub fn macwilliams_transform(
    a: &WeightEnumerator,
    code_size: &BigUint,
) -> Result<WeightEnumerator> {
    let n = a.n;
    if &a.total() != code_size {
        return Err(Error::NotLinearEnumerator);
    }
    // |Q| must be a power of two dividing 2^n
    let bits = code_size.bits();
    if bits == 0 || code_size != &(BigUint::one() << (bits - 1)) || (bits - 1) as usize > n {
        return Err(Error::NotLinearEnumerator);
    }
    let mut acc = vec![BigInt::zero(); n + 1];
    for (j, c) in a.coeffs.iter().enumerate() {
        if !c.is_zero() {
            let scale = BigInt::from_biguint(Sign::Plus, c.clone());
            accumulate_kernel_column(n, j, &scale, &mut acc);
        }
    }
    let size = BigInt::from_biguint(Sign::Plus, code_size.clone());
    let coeffs = acc
        .into_iter()
        .map(|v| {
            if v.is_negative() || !(&v % &size).is_zero() {
                return Err(Error::NotLinearEnumerator);
            }
            Ok((v / &size).to_biguint().expect("nonnegative"))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightEnumerator::new(coeffs).map_err(|_| Error::NotLinearEnumerator)
}

/// Bilateral minimum distance and width of a code, from its enumerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BilateralProfile {
    pub d_bilateral: usize,
    pub width: usize,
    pub min_w: Option<usize>,
    pub max_w: Option<usize>,
    /// No nonzero codewords; `d_bilateral` is then `floor(n / 2)`.
    #[serde(skip)]
    pub zero_code: bool,
}

impl BilateralProfile {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }
}

/// `d = min(min_w, n - max_w)` over nonzero codewords and the width
/// `σ = max |2|y| - n|`, so that `d = (n - σ) / 2`.
pub fn bilateral_profile(a: &WeightEnumerator) -> BilateralProfile {
    let n = a.n;
    let support = || (1..=n).filter(|&w| !a.coeffs[w].is_zero());
    match (support().next(), support().next_back()) {
        (Some(lo), Some(hi)) => {
            let width = (2 * lo).abs_diff(n).max((2 * hi).abs_diff(n));
            BilateralProfile {
                d_bilateral: lo.min(n - hi),
                width,
                min_w: Some(lo),
                max_w: Some(hi),
                zero_code: false,
            }
        }
        _ => BilateralProfile {
            d_bilateral: n / 2,
            width: n % 2,
            min_w: None,
            max_w: None,
            zero_code: true,
        },
    }
}

/// Enumerates `code`, transforms its enumerator and returns the dual
/// enumerator together with the dual's bilateral profile.
pub fn dual_profile(
    code: &LinearCode,
    budget: u64,
) -> Result<(WeightEnumerator, BilateralProfile)> {
    let primal = WeightEnumerator::from_distribution(&weight_distribution(code, None, budget)?)?;
    let size = BigUint::one() << code.dimension();
    let dual = macwilliams_transform(&primal, &size)?;
    let profile = bilateral_profile(&dual);
    Ok((dual, profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{extended_dual_bch_code, extended_hadamard_code, simplex_code};
    use crate::gf2::{BitVector, DEFAULT_ENUMERATION_BUDGET};
    use crate::spectra::binomial_row;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn enumerator_of(code: &LinearCode) -> WeightEnumerator {
        WeightEnumerator::from_distribution(
            &weight_distribution(code, None, DEFAULT_ENUMERATION_BUDGET).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_recurrence_matches_pascal_sum() {
        for n in [1usize, 2, 7, 12, 31] {
            let rows: Vec<Vec<BigUint>> = (0..=n).map(binomial_row).collect();
            let choose = |a: usize, b: usize| {
                if b > a {
                    BigInt::zero()
                } else {
                    BigInt::from(rows[a][b].clone())
                }
            };
            for j in 0..=n {
                let mut acc = vec![BigInt::zero(); n + 1];
                accumulate_kernel_column(n, j, &BigInt::one(), &mut acc);
                for (w, got) in acc.iter().enumerate() {
                    let direct: BigInt = (0..=w)
                        .map(|i| {
                            let term = choose(j, i) * choose(n - j, w - i);
                            if i % 2 == 1 {
                                -term
                            } else {
                                term
                            }
                        })
                        .sum();
                    assert_eq!(got, &direct, "n={n} j={j} w={w}");
                }
            }
        }
    }

    #[test]
    fn transform_examples() {
        let a = WeightEnumerator::from_u64(&[1, 0, 1]).unwrap();
        assert_eq!(macwilliams_transform(&a, &big(2)).unwrap(), a);

        let simplex = WeightEnumerator::from_u64(&[1, 0, 0, 0, 7, 0, 0, 0]).unwrap();
        let dual = macwilliams_transform(&simplex, &big(8)).unwrap();
        assert_eq!(
            dual,
            WeightEnumerator::from_u64(&[1, 0, 0, 7, 7, 0, 0, 1]).unwrap()
        );
        // direct enumeration of the (7,4) Hamming code
        assert_eq!(dual, enumerator_of(&simplex_code(3).unwrap().dual()));

        let line = WeightEnumerator::from_u64(&[1, 1]).unwrap();
        assert_eq!(
            macwilliams_transform(&line, &big(2)).unwrap(),
            WeightEnumerator::from_u64(&[1, 0]).unwrap()
        );
    }

    #[test]
    fn transform_rejects_non_linear_inputs() {
        let a = WeightEnumerator::from_u64(&[1, 0, 1]).unwrap();
        assert_eq!(
            macwilliams_transform(&a, &big(3)),
            Err(Error::NotLinearEnumerator)
        );
        // {00, 01, 10}: size 3 is not a power of two
        let b = WeightEnumerator::from_u64(&[1, 2, 0]).unwrap();
        assert_eq!(
            macwilliams_transform(&b, &big(3)),
            Err(Error::NotLinearEnumerator)
        );
        // {000, 011}: size 2, but transform would not be integral? it is; use {000, 111, 011, 101}
        let c = WeightEnumerator::from_u64(&[1, 0, 2, 1]).unwrap();
        assert_eq!(
            macwilliams_transform(&c, &big(4)),
            Err(Error::NotLinearEnumerator)
        );
        assert!(WeightEnumerator::from_u64(&[0, 1]).is_err());
    }

    #[test]
    fn profile_examples() {
        let p = bilateral_profile(&WeightEnumerator::from_u64(&[1, 0, 0, 0, 7, 0, 0, 0]).unwrap());
        assert_eq!(
            (p.d_bilateral, p.width, p.min_w, p.max_w),
            (3, 1, Some(4), Some(4))
        );
        assert_eq!(
            p.to_json(),
            r#"{"d_bilateral":3,"width":1,"min_w":4,"max_w":4}"#
        );

        let p = bilateral_profile(&WeightEnumerator::from_u64(&[1, 0, 3, 0, 1]).unwrap());
        assert_eq!(p.d_bilateral, 0);

        let p = bilateral_profile(&WeightEnumerator::from_u64(&[1, 0, 0, 0, 0, 0]).unwrap());
        assert!(p.zero_code);
        assert_eq!(p.d_bilateral, 2);
        assert_eq!(
            p.to_json(),
            r#"{"d_bilateral":2,"width":1,"min_w":null,"max_w":null}"#
        );
    }

    #[test]
    fn extended_codes_have_large_dual_bilateral_distance() {
        let (_, p) = dual_profile(
            &extended_hadamard_code(3).unwrap(),
            DEFAULT_ENUMERATION_BUDGET,
        )
        .unwrap();
        assert_eq!(p.d_bilateral, 3);
        let (_, p) = dual_profile(
            &extended_dual_bch_code(2, 4).unwrap(),
            DEFAULT_ENUMERATION_BUDGET,
        )
        .unwrap();
        assert!(p.d_bilateral >= 5);
        for (t, r) in [(2, 5), (3, 5), (2, 6), (3, 6)] {
            let (_, p) = dual_profile(
                &extended_dual_bch_code(t, r).unwrap(),
                DEFAULT_ENUMERATION_BUDGET,
            )
            .unwrap();
            assert!(p.d_bilateral >= 2 * t + 1, "t={t} r={r}: {p:?}");
            assert_eq!(p.d_bilateral * 2 + p.width, (1 << r) - 1);
        }
    }

    #[test]
    fn transform_is_an_involution_and_sums_to_dual_size() {
        for code in [
            extended_hadamard_code(4).unwrap(),
            extended_dual_bch_code(2, 5).unwrap(),
            LinearCode::from_generator(9, vec!["110110000".parse::<BitVector>().unwrap()]).unwrap(),
        ] {
            let a = enumerator_of(&code);
            let size = BigUint::one() << code.dimension();
            let dual = macwilliams_transform(&a, &size).unwrap();
            let dual_size = BigUint::one() << (code.length() - code.dimension());
            assert_eq!(dual.total(), dual_size);
            assert_eq!(macwilliams_transform(&dual, &dual_size).unwrap(), a);
        }
    }
}
