//! Arithmetic in GF(2^r) for 2 <= r <= 16, and binary polynomials.
//!
//! Elements use the polynomial basis modulo a fixed primitive polynomial per
//! degree (see [`PRIMITIVE_POLYNOMIALS`]). The class of `x` is the designated
//! primitive element alpha. Exp/log tables are built on first use and shared.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use crate::error::{out_of_range, Error, Result};

pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 16;

/// Primitive polynomials indexed by degree, as bit masks (bit `i` is the
/// coefficient of `x^i`).
///
/// | r | polynomial |
/// |---|------------|
/// | 2 | x^2+x+1 |
/// | 3 | x^3+x+1 |
/// | 4 | x^4+x+1 |
/// | 5 | x^5+x^2+1 |
/// | 6 | x^6+x+1 |
/// | 7 | x^7+x+1 |
/// | 8 | x^8+x^4+x^3+x^2+1 |
/// | 9 | x^9+x^4+1 |
/// | 10 | x^10+x^3+1 |
/// | 11 | x^11+x^2+1 |
/// | 12 | x^12+x^6+x^4+x+1 |
/// | 13 | x^13+x^4+x^3+x+1 |
/// | 14 | x^14+x^10+x^6+x+1 |
/// | 15 | x^15+x+1 |
/// | 16 | x^16+x^12+x^3+x+1 |
pub const PRIMITIVE_POLYNOMIALS: [u32; MAX_DEGREE + 1] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

static TABLES: [OnceLock<Tables>; MAX_DEGREE + 1] = [const { OnceLock::new() }; MAX_DEGREE + 1];

fn check_degree(r: usize) -> Result<()> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&r) {
        return Err(out_of_range(
            "r",
            format!("extension degree {r} outside {MIN_DEGREE}..={MAX_DEGREE}"),
        ));
    }
    Ok(())
}

fn tables(r: usize) -> &'static Tables {
    TABLES[r].get_or_init(|| {
        let order = (1usize << r) - 1;
        let modulus = PRIMITIVE_POLYNOMIALS[r];
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![u32::MAX; order + 1];
        let mut x = 1u32;
        for i in 0..order {
            assert!(
                log[x as usize] == u32::MAX,
                "polynomial {modulus:#x} is not primitive: alpha has order {i}"
            );
            exp[i] = x;
            exp[i + order] = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << r) != 0 {
                x ^= modulus;
            }
        }
        assert_eq!(x, 1, "alpha^(2^r - 1) must equal 1");
        Tables { exp, log }
    })
}

/// An element of GF(2^r).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    r: u8,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})[{:#x}]", self.r, self.value)
    }
}

impl FieldElement {
    pub fn new(r: usize, value: u32) -> Result<Self> {
        check_degree(r)?;
        if value >> r != 0 {
            return Err(out_of_range(
                "value",
                format!("{value:#x} has more than {r} bits"),
            ));
        }
        Ok(Self { r: r as u8, value })
    }

    pub fn zero(r: usize) -> Result<Self> {
        Self::new(r, 0)
    }

    pub fn one(r: usize) -> Result<Self> {
        Self::new(r, 1)
    }

    /// The primitive element alpha (the class of `x`).
    pub fn alpha(r: usize) -> Result<Self> {
        Self::new(r, 2)
    }

    /// `alpha^e`.
    pub fn alpha_pow(r: usize, e: u64) -> Result<Self> {
        check_degree(r)?;
        let t = tables(r);
        let order = (1u64 << r) - 1;
        Ok(Self {
            r: r as u8,
            value: t.exp[(e % order) as usize],
        })
    }

    pub fn degree(&self) -> usize {
        self.r as usize
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn order(&self) -> u64 {
        (1u64 << self.r) - 1
    }

    pub fn pow(self, e: u64) -> Self {
        if self.value == 0 {
            return if e == 0 {
                Self { value: 1, ..self }
            } else {
                self
            };
        }
        let t = tables(self.degree());
        let l = t.log[self.value as usize] as u64;
        let idx = (l * (e % self.order())) % self.order();
        Self {
            value: t.exp[idx as usize],
            ..self
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let order = self.order();
        let l = tables(self.degree()).log[self.value as usize] as u64;
        Some(order / gcd(order, l))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.r, rhs.r);
        Self {
            value: self.value ^ rhs.value,
            ..self
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.r, rhs.r);
        if self.value == 0 || rhs.value == 0 {
            return Self { value: 0, ..self };
        }
        let t = tables(self.degree());
        let idx = t.log[self.value as usize] as usize + t.log[rhs.value as usize] as usize;
        Self {
            value: t.exp[idx],
            ..self
        }
    }
}

/// A polynomial over GF(2). Coefficient `i` multiplies `x^i`; the zero
/// polynomial has no coefficients and nonzero polynomials end in a 1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryPolynomial {
    coeffs: Vec<bool>,
}

impl BinaryPolynomial {
    pub fn from_coefficients(mut coeffs: Vec<bool>) -> Self {
        while coeffs.last() == Some(&false) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_exponents(exponents: &[usize]) -> Self {
        let len = exponents.iter().max().map_or(0, |m| m + 1);
        let mut coeffs = vec![false; len];
        for &e in exponents {
            coeffs[e] ^= true;
        }
        Self::from_coefficients(coeffs)
    }

    pub fn one() -> Self {
        Self { coeffs: vec![true] }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, i: usize) -> bool {
        self.coeffs.get(i).copied().unwrap_or(false)
    }

    pub fn coefficients(&self) -> &[bool] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::default();
        }
        let mut out = vec![false; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a {
                for (j, &b) in other.coeffs.iter().enumerate() {
                    out[i + j] ^= b;
                }
            }
        }
        Self::from_coefficients(out)
    }

    /// Evaluates at a field element.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let zero = FieldElement { value: 0, ..x };
        let one = FieldElement { value: 1, ..x };
        self.coeffs
            .iter()
            .rev()
            .fold(zero, |acc, &c| acc * x + if c { one } else { zero })
    }
}

impl fmt::Display for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = (0..self.coeffs.len())
            .rev()
            .filter(|&i| self.coeffs[i])
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPolynomial({self})")
    }
}

/// The conjugacy class `{e, e^2, e^4, ...}` of `e`.
pub fn conjugates(e: FieldElement) -> Vec<FieldElement> {
    let mut out = vec![e];
    let mut cur = e * e;
    while cur != e {
        out.push(cur);
        cur = cur * cur;
    }
    out
}

/// The monic binary polynomial of least degree with `e` as a root: the
/// product of `(x - c)` over the conjugates `c` of `e`.
pub fn minimal_polynomial(e: FieldElement) -> Result<BinaryPolynomial> {
    if e.is_zero() {
        return Err(Error::ZeroElement);
    }
    let zero = FieldElement { value: 0, ..e };
    let one = FieldElement { value: 1, ..e };
    // coefficients over GF(2^r), lowest degree first
    let mut poly = vec![one];
    for c in conjugates(e) {
        let mut next = vec![zero; poly.len() + 1];
        for (i, &p) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1] + p;
            next[i] = next[i] + p * c;
        }
        poly = next;
    }
    let coeffs = poly
        .iter()
        .map(|c| match c.value {
            0 => false,
            1 => true,
            _ => unreachable!("conjugacy-class product has binary coefficients"),
        })
        .collect();
    Ok(BinaryPolynomial::from_coefficients(coeffs))
}
