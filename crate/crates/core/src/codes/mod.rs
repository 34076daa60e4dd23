//! Concrete code families: simplex (Hadamard), Hamming, binary BCH, the
//! extension `Q = D^⊥ ∪ (D^⊥ + 1)` with large dual bilateral distance, and
//! seeded random linear codes.

pub mod field;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::gf2::{BitVector, LinearCode};
use crate::rng::{random_vector, stream_rng};
use field::{BinaryPolynomial, FieldElement};

pub use field::minimal_polynomial;

fn check_r(r: usize, max: usize) -> Result<()> {
    if !(2..=max).contains(&r) {
        return Err(out_of_range("r", format!("{r} outside 2..={max}")));
    }
    Ok(())
}

/// Primitive polynomials for degrees above the field tables, used only to
/// order simplex columns.
const WIDE_PRIMITIVE_POLYNOMIALS: [u32; 4] = [0x20009, 0x40081, 0x80027, 0x100009];

fn primitive_polynomial(r: usize) -> u32 {
    if r <= field::MAX_DEGREE {
        field::PRIMITIVE_POLYNOMIALS[r]
    } else {
        WIDE_PRIMITIVE_POLYNOMIALS[r - field::MAX_DEGREE - 1]
    }
}

/// The `[2^r - 1, r]` simplex code. Column `j` of the generator is `alpha^j`
/// in the polynomial basis, so the code is cyclic and all nonzero codewords
/// have weight `2^(r-1)`.
pub fn simplex_code(r: usize) -> Result<LinearCode> {
    check_r(r, 20)?;
    let n = (1usize << r) - 1;
    let modulus = primitive_polynomial(r);
    let mut rows = vec![BitVector::zeros(n); r];
    let mut x = 1u32;
    for j in 0..n {
        if j > 0 && x == 1 {
            return Err(Error::Precondition(format!(
                "modulus for r={r} is not primitive"
            )));
        }
        for (i, row) in rows.iter_mut().enumerate() {
            if (x >> i) & 1 == 1 {
                row.set(j, true);
            }
        }
        x <<= 1;
        if x >> r & 1 == 1 {
            x ^= modulus;
        }
    }
    LinearCode::from_generator(n, rows)
}

/// The `[2^r - 1, 2^r - 1 - r, 3]` Hamming code, built as the dual of the
/// simplex code. Memory grows like `4^r / 64` words.
pub fn hamming_code(r: usize) -> Result<LinearCode> {
    Ok(simplex_code(r)?.dual())
}

fn check_bch(t: usize, r: usize) -> Result<()> {
    check_r(r, field::MAX_DEGREE)?;
    if t == 0 {
        return Err(out_of_range("t", "must be at least 1"));
    }
    // 2t - 2 < 2^(r/2), squared to stay in integers
    let lhs = (2 * t - 2) as u128;
    if lhs * lhs >= 1u128 << r {
        return Err(Error::Precondition(format!(
            "BCH(t={t}, r={r}) requires 2t - 2 < 2^(r/2)"
        )));
    }
    Ok(())
}

/// Generator polynomial of the narrow-sense binary BCH code of length
/// `2^r - 1` with zeros `alpha, alpha^2, ..., alpha^(2t)`: the product of the
/// distinct minimal polynomials of those zeros.
pub fn bch_generator_polynomial(t: usize, r: usize) -> Result<BinaryPolynomial> {
    check_bch(t, r)?;
    let n = (1usize << r) - 1;
    let mut covered = vec![false; n];
    let mut g = BinaryPolynomial::one();
    for e in 1..=2 * t {
        let e = e % n;
        if covered[e] {
            continue;
        }
        let mut c = e;
        loop {
            covered[c] = true;
            c = (2 * c) % n;
            if c == e {
                break;
            }
        }
        g = g.mul(&minimal_polynomial(FieldElement::alpha_pow(r, e as u64)?)?);
    }
    Ok(g)
}

/// The binary BCH code `BCH(t, r)` of length `n = 2^r - 1`, designed distance
/// `2t + 1`, as the cyclic code generated by [`bch_generator_polynomial`].
/// Its dimension must equal `2^r - 1 - r t`.
pub fn bch_code(t: usize, r: usize) -> Result<LinearCode> {
    let g = bch_generator_polynomial(t, r)?;
    let n = (1usize << r) - 1;
    let deg = g.degree().expect("generator polynomial is nonzero");
    let expected = n.saturating_sub(r * t);
    if deg >= n || n - deg != expected {
        return Err(Error::DegenerateBch {
            t,
            r,
            expected,
            found: n.saturating_sub(deg),
        });
    }
    let rows = (0..n - deg)
        .map(|shift| {
            let mut row = BitVector::zeros(n);
            for (i, &c) in g.coefficients().iter().enumerate() {
                if c {
                    row.set(i + shift, true);
                }
            }
            row
        })
        .collect();
    LinearCode::from_generator(n, rows)
}

/// `Q = D^⊥ ∪ (D^⊥ + 1)`. Requires odd `n` and `1^n ∈ D`; then every nonzero
/// word of `Q^⊥` is an even-weight word of `D`, so the bilateral minimum
/// distance of `Q^⊥` is at least the minimum distance of `D`.
pub fn extended_bilateral_code(d: &LinearCode) -> Result<LinearCode> {
    let n = d.length();
    if n % 2 == 0 {
        return Err(Error::Precondition(format!("length {n} must be odd")));
    }
    let ones = BitVector::ones(n);
    if !d.contains(&ones) {
        return Err(Error::Precondition(
            "the all-ones vector must be a codeword".into(),
        ));
    }
    let mut rows = d.dual().generator().to_vec();
    rows.push(ones);
    LinearCode::from_generator(n, rows)
}

/// Extended Hadamard code: the simplex code of order `r` together with its
/// complement. Same code as `extended_bilateral_code(hamming_code(r))` without
/// materializing the Hamming code.
pub fn extended_hadamard_code(r: usize) -> Result<LinearCode> {
    let simplex = simplex_code(r)?;
    let n = simplex.length();
    let mut rows = simplex.generator().to_vec();
    rows.push(BitVector::ones(n));
    LinearCode::from_generator(n, rows)
}

/// Extended dual BCH code of size `2 (n + 1)^t`.
pub fn extended_dual_bch_code(t: usize, r: usize) -> Result<LinearCode> {
    extended_bilateral_code(&bch_code(t, r)?)
}

/// Uniform `k x n` matrices drawn from `rng`, rejected until full rank.
/// Returns the code and the number of matrices drawn.
pub fn random_linear_code_from<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<(LinearCode, u32)> {
    if k > n {
        return Err(out_of_range("k", format!("{k} exceeds n = {n}")));
    }
    let mut attempts = 0;
    loop {
        attempts += 1;
        let rows = (0..k).map(|_| random_vector(rng, n)).collect();
        match LinearCode::from_generator(n, rows) {
            Ok(code) => return Ok((code, attempts)),
            Err(Error::RankDeficient) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// A random `[n, k]` code; a deterministic function of `seed`.
pub fn random_linear_code(n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    Ok(random_linear_code_from(n, k, &mut stream_rng(seed, 0))?.0)
}

/// A named construction, used for provenance in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CodeFamily {
    Simplex { r: usize },
    Hamming { r: usize },
    Bch { t: usize, r: usize },
    ExtHadamard { r: usize },
    ExtDualBch { t: usize, r: usize },
    Random { n: usize, k: usize, seed: u64 },
}

impl CodeFamily {
    pub fn build(&self) -> Result<LinearCode> {
        match *self {
            CodeFamily::Simplex { r } => simplex_code(r),
            CodeFamily::Hamming { r } => hamming_code(r),
            CodeFamily::Bch { t, r } => bch_code(t, r),
            CodeFamily::ExtHadamard { r } => extended_hadamard_code(r),
            CodeFamily::ExtDualBch { t, r } => extended_dual_bch_code(t, r),
            CodeFamily::Random { n, k, seed } => random_linear_code(n, k, seed),
        }
    }

    /// The bilateral distance the construction guarantees for the dual of the
    /// built code, when there is one.
    pub fn guaranteed_dual_bilateral_distance(&self) -> Option<usize> {
        match *self {
            CodeFamily::ExtHadamard { .. } => Some(3),
            CodeFamily::ExtDualBch { t, .. } => Some(2 * t + 1),
            _ => None,
        }
    }
}

impl std::fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            CodeFamily::Simplex { r } => write!(f, "simplex(r={r})"),
            CodeFamily::Hamming { r } => write!(f, "hamming(r={r})"),
            CodeFamily::Bch { t, r } => write!(f, "bch(t={t}, r={r})"),
            CodeFamily::ExtHadamard { r } => write!(f, "ext-hadamard(r={r})"),
            CodeFamily::ExtDualBch { t, r } => write!(f, "ext-dual-bch(t={t}, r={r})"),
            CodeFamily::Random { n, k, seed } => write!(f, "random(n={n}, k={k}, seed={seed})"),
        }
    }
}
