//! Packed bit vectors and linear algebra over GF(2).
//!
//! Vectors are stored as little-endian 64-bit words: coordinate `i` lives in
//! bit `i % 64` of word `i / 64`. Bits past the logical length are always zero,
//! so equality and hashing are plain word comparisons.
//!
//! A [`LinearCode`] keeps its generator in reduced row echelon form. The pivot
//! columns double as a systematic information set: every coset of the code has
//! exactly one member that vanishes on all pivot columns, which is how coset
//! representatives are enumerated.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default cap on the number of codewords an enumeration may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 26;

const WORD_BITS: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A vector in `{0,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut words = vec![u64::MAX; word_count(len)];
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    /// Builds a vector from raw words, clearing any bits past `len`.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(word_count(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` whose coordinate `i` is bit `i` of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        Self::from_words(len, vec![value])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BitVector::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("unexpected character {other:?} in bit string"),
                    })
                }
            }
        }
        Ok(v)
    }
}

/// Hamming weight of `v`.
pub fn hamming_weight(v: &BitVector) -> usize {
    v.weight()
}

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each surviving row.
fn row_reduce(n: usize, rows: &mut Vec<BitVector>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

fn check_lengths(n: usize, rows: &[BitVector]) -> Result<()> {
    match rows.iter().find(|r| r.len() != n) {
        Some(bad) => Err(Error::LengthMismatch {
            expected: n,
            found: bad.len(),
        }),
        None => Ok(()),
    }
}

/// GF(2) row rank of a bit matrix.
pub fn rank(matrix: &[BitVector]) -> Result<usize> {
    let first = matrix.first().ok_or(Error::EmptyInput)?;
    let n = first.len();
    check_lengths(n, matrix)?;
    let mut rows = matrix.to_vec();
    Ok(row_reduce(n, &mut rows).len())
}

/// A binary linear code given by a full-rank generator matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    n: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode[{}, {}]", self.n, self.dimension())
    }
}

impl LinearCode {
    /// The code spanned by `rows`. Dependent rows are discarded.
    pub fn span(n: usize, rows: Vec<BitVector>) -> Result<Self> {
        if n == 0 {
            return Err(crate::error::out_of_range(
                "n",
                "block length must be at least 1",
            ));
        }
        check_lengths(n, &rows)?;
        let mut rows = rows;
        let pivots = row_reduce(n, &mut rows);
        Ok(Self { n, rows, pivots })
    }

    /// The code generated by `rows`, which must be linearly independent.
    pub fn from_generator(n: usize, rows: Vec<BitVector>) -> Result<Self> {
        let k = rows.len();
        let code = Self::span(n, rows)?;
        if code.dimension() != k {
            return Err(Error::RankDeficient);
        }
        Ok(code)
    }

    /// The zero code `{0^n}`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::span(n, Vec::new())
    }

    /// The full space `F_2^n`.
    pub fn full(n: usize) -> Result<Self> {
        let rows = (0..n)
            .map(|i| {
                let mut v = BitVector::zeros(n);
                v.set(i, true);
                v
            })
            .collect();
        Self::span(n, rows)
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Generator rows in reduced row echelon form.
    pub fn generator(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns outside the pivot set, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.n).filter(|&c| !is_pivot[c]).collect()
    }

    /// Clears the pivot coordinates of `v` by adding generator rows. The result
    /// is the canonical representative of the coset `v + C`.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.n && self.reduce(v).is_zero()
    }

    /// Number of cosets as a power of two: `n - k`.
    pub fn redundancy(&self) -> usize {
        self.n - self.dimension()
    }

    /// The canonical coset representative whose free coordinates spell out
    /// the bits of `index` (bit `j` of `index` goes to the `j`-th free column).
    pub fn coset_representative(&self, free_columns: &[usize], index: u64) -> BitVector {
        let mut v = BitVector::zeros(self.n);
        for (j, &col) in free_columns.iter().enumerate() {
            if j < 64 && (index >> j) & 1 == 1 {
                v.set(col, true);
            }
        }
        v
    }

    /// Whether both codes have the same row space.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.rows == other.rows
    }

    /// Basis of the dual code, i.e. the null space of the generator.
    pub fn dual(&self) -> LinearCode {
        let n = self.n;
        let rows: Vec<BitVector> = self
            .free_columns()
            .into_iter()
            .map(|f| {
                let mut v = BitVector::zeros(n);
                v.set(f, true);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        LinearCode::span(n, rows).expect("null space basis has consistent lengths")
    }

    /// Serializes to the text format: a line `n k` followed by `k` rows of
    /// `n` characters `0`/`1`, character `i` being coordinate `i`. Lines
    /// starting with `#` are ignored when parsing.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.dimension());
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or(Error::EmptyInput)?;
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let mut parts = header.split_whitespace();
        let mut field = |name: &str| -> Result<usize> {
            parts
                .next()
                .ok_or_else(|| parse_err(line_no, format!("missing {name}")))?
                .parse()
                .map_err(|e| parse_err(line_no, format!("bad {name}: {e}")))
        };
        let n = field("n")?;
        let k = field("k")?;
        let mut rows = Vec::with_capacity(k);
        for (line, text) in lines.by_ref().take(k) {
            let row: BitVector = text.parse().map_err(|_| {
                parse_err(line, "row must consist of '0' and '1' characters".into())
            })?;
            if row.len() != n {
                return Err(parse_err(
                    line,
                    format!("row has {} characters, expected {n}", row.len()),
                ));
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(parse_err(
                line_no,
                format!("expected {k} rows, found {}", rows.len()),
            ));
        }
        if let Some((line, _)) = lines.next() {
            return Err(parse_err(
                line,
                "trailing content after generator rows".into(),
            ));
        }
        Self::from_generator(n, rows)
    }
}

fn check_budget(k: usize, budget: u64) -> Result<()> {
    if k >= 64 || (1u64 << k) > budget {
        return Err(Error::EnumerationTooLarge {
            dimension: k,
            budget,
        });
    }
    Ok(())
}

/// All codewords of `code`, in Gray-code order over the message bits: the
/// `i`-th codeword is the sum of the generator rows selected by the bits of
/// `i ^ (i >> 1)`, so consecutive codewords differ by one generator row.
pub fn enumerate_codewords(code: &LinearCode, budget: u64) -> Result<Codewords<'_>> {
    check_budget(code.dimension(), budget)?;
    Ok(Codewords {
        rows: &code.rows,
        current: BitVector::zeros(code.n),
        index: 0,
        count: 1u64 << code.dimension(),
    })
}

/// Iterator returned by [`enumerate_codewords`].
pub struct Codewords<'a> {
    rows: &'a [BitVector],
    current: BitVector,
    index: u64,
    count: u64,
}

impl Iterator for Codewords<'_> {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.index >= self.count {
            return None;
        }
        if self.index > 0 {
            let row = self.index.trailing_zeros() as usize;
            self.current.xor_assign(&self.rows[row]);
        }
        self.index += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.count - self.index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Codewords<'_> {}

/// Walks Gray-code indices `start..end` of the coset `shift + C`, calling
/// `visit` with the packed words of each member.
pub(crate) fn walk_coset(
    rows: &[BitVector],
    shift: &[u64],
    start: u64,
    end: u64,
    mut visit: impl FnMut(&[u64]),
) {
    let mut cur = shift.to_vec();
    let gray = start ^ (start >> 1);
    for (b, row) in rows.iter().enumerate() {
        if (gray >> b) & 1 == 1 {
            for (c, r) in cur.iter_mut().zip(row.words()) {
                *c ^= r;
            }
        }
    }
    let mut i = start;
    while i < end {
        visit(&cur);
        i += 1;
        if i < end {
            let row = rows[i.trailing_zeros() as usize].words();
            for (c, r) in cur.iter_mut().zip(row) {
                *c ^= r;
            }
        }
    }
}

fn histogram_range_single_word(rows: &[u64], shift: u64, start: u64, end: u64, hist: &mut [u64]) {
    let gray = start ^ (start >> 1);
    let mut cur = shift;
    for (b, row) in rows.iter().enumerate() {
        if (gray >> b) & 1 == 1 {
            cur ^= row;
        }
    }
    let mut i = start;
    while i < end {
        hist[cur.count_ones() as usize] += 1;
        i += 1;
        if i < end {
            cur ^= rows[i.trailing_zeros() as usize];
        }
    }
}

fn histogram_range(code: &LinearCode, shift: &[u64], start: u64, end: u64) -> Vec<u64> {
    let mut hist = vec![0u64; code.n + 1];
    if shift.len() == 1 {
        let rows: Vec<u64> = code.rows.iter().map(|r| r.words()[0]).collect();
        histogram_range_single_word(&rows, shift[0], start, end, &mut hist);
    } else {
        walk_coset(&code.rows, shift, start, end, |w| {
            let weight: u32 = w.iter().map(|x| x.count_ones()).sum();
            hist[weight as usize] += 1;
        });
    }
    hist
}

/// Dimension above which codeword histograms are split across worker threads.
const PARALLEL_DIMENSION: usize = 16;

/// Counts the members of `shift + C` by Hamming weight. Returns `n + 1` counts.
/// The result does not depend on how the walk is split across threads.
pub fn coset_weight_counts(
    code: &LinearCode,
    shift: Option<&BitVector>,
    budget: u64,
) -> Result<Vec<u64>> {
    use rayon::prelude::*;

    let k = code.dimension();
    check_budget(k, budget)?;
    let shift_words = match shift {
        Some(s) if s.len() != code.n => {
            return Err(Error::LengthMismatch {
                expected: code.n,
                found: s.len(),
            })
        }
        Some(s) => s.words().to_vec(),
        None => vec![0; word_count(code.n)],
    };
    let total = 1u64 << k;
    if k < PARALLEL_DIMENSION {
        return Ok(histogram_range(code, &shift_words, 0, total));
    }
    let chunks = 1u64 << (k - PARALLEL_DIMENSION + 4).min(10);
    let chunk_len = total / chunks;
    let partials: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| histogram_range(code, &shift_words, c * chunk_len, (c + 1) * chunk_len))
        .collect();
    let mut hist = vec![0u64; code.n + 1];
    for part in partials {
        for (h, p) in hist.iter_mut().zip(part) {
            *h += p;
        }
    }
    Ok(hist)
}
