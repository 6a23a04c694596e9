//! Betti numbers over the rationals and small prime fields.
//!
//! Ranks of boundary matrices are computed by exact Gaussian elimination,
//! so the resulting Morse lower bounds carry no tolerance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::complex::SimplicialComplex;
use crate::error::{ComplexError, FieldError};

const MAX_PRIME: u32 = 1 << 15;

/// Coefficient field for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        if p < 2 || (2..).take_while(|k| k * k <= p).any(|k| p % k == 0) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// Parses a comma separated list such as `q,gf2,gf3`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>, FieldError> {
        let fields: Vec<Self> = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        if fields.is_empty() {
            return Err(FieldError::Empty);
        }
        Ok(fields)
    }

    /// `{Q, GF(2)}`.
    pub fn defaults() -> Vec<Self> {
        vec![FieldSpec::Rationals, FieldSpec::Prime(2)]
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "rationals" || t == "qq" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("gf"))
            .or_else(|| t.strip_prefix("z"))
            .unwrap_or(&t);
        match digits.parse::<u32>() {
            Ok(p) => FieldSpec::prime(p),
            Err(_) => Err(FieldError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Sparse simplicial boundary matrix `∂_i` with rows indexed by `(i-1)`-faces
/// and columns by `i`-faces (positions within their dimension).
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub dim: usize,
    pub rows: usize,
    pub field: FieldSpec,
    /// Column lists of `(row, entry)`; entries are `±1` over `Q` and residues
    /// in `0..p` over `GF(p)`.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl BoundaryMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Entry at `(row, col)`, zero when absent.
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.columns[col]
            .iter()
            .find(|&&(r, _)| r == row)
            .map_or(0, |&(_, v)| v)
    }

    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Rationals => rank_rational(self.rows, &self.columns),
            FieldSpec::Prime(p) => rank_mod_p(self.rows, &self.columns, p as i64),
        }
    }
}

/// Boundary matrix `∂_i` for `1 <= i <= d`, oriented by sorted vertex order:
/// omitting the `k`-th vertex contributes sign `(-1)^k`.
pub fn boundary_matrix(
    complex: &SimplicialComplex,
    i: usize,
    field: FieldSpec,
) -> Result<BoundaryMatrix, ComplexError> {
    if i == 0 || i > complex.dim() {
        return Err(ComplexError::DimensionOutOfRange { dim: i, max: complex.dim() });
    }
    let row_offset = complex.faces_of_dim(i - 1).start;
    let columns = complex
        .faces_of_dim(i)
        .map(|id| {
            let mut col: Vec<(usize, i64)> = complex
                .face(id)
                .boundary()
                .enumerate()
                .map(|(k, sub)| {
                    let row = complex.face_id(&sub).expect("closed complex") - row_offset;
                    let sign: i64 = if k % 2 == 0 { 1 } else { -1 };
                    let entry = match field {
                        FieldSpec::Rationals => sign,
                        FieldSpec::Prime(p) => (sign).rem_euclid(p as i64),
                    };
                    (row, entry)
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    Ok(BoundaryMatrix { dim: i, rows: complex.f(i - 1), field, columns })
}

fn rank_rational(rows: usize, columns: &[Vec<(usize, i64)>]) -> usize {
    let cols = columns.len();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut m = vec![vec![BigRational::zero(); cols]; rows];
    for (c, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            m[r][c] = BigRational::from_integer(BigInt::from(v));
        }
    }
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        // smallest |numerator * denominator| keeps entry growth down
        let pivot = (rank..rows)
            .filter(|&r| !m[r][c].is_zero())
            .min_by_key(|&r| (m[r][c].numer() * m[r][c].denom()).abs());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for k in c..cols {
            let v = &m[rank][k] * &inv;
            m[rank][k] = v;
        }
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = m[r][c].clone();
            for k in c..cols {
                if m[rank][k].is_zero() {
                    continue;
                }
                let v = &m[r][k] - &factor * &m[rank][k];
                m[r][k] = v;
            }
        }
        rank += 1;
    }
    rank
}

fn rank_mod_p(rows: usize, columns: &[Vec<(usize, i64)>], p: i64) -> usize {
    let cols = columns.len();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut m = vec![vec![0i64; cols]; rows];
    for (c, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            m[r][c] = v.rem_euclid(p);
        }
    }
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = mod_inverse(m[rank][c], p);
        for k in c..cols {
            m[rank][k] = m[rank][k] * inv % p;
        }
        for r in rank + 1..rows {
            let factor = m[r][c];
            if factor == 0 {
                continue;
            }
            for k in c..cols {
                m[r][k] = (m[r][k] - factor * m[rank][k]).rem_euclid(p);
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    // p is prime: a^(p-2)
    let (mut base, mut exp, mut acc) = (a.rem_euclid(p), p - 2, 1i64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Betti numbers `β_0..β_d` over one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub field: FieldSpec,
    pub betti: Vec<usize>,
}

impl BettiVector {
    pub fn total(&self) -> usize {
        self.betti.iter().sum()
    }

    pub fn alternating_sum(&self) -> i64 {
        alternating(&self.betti)
    }
}

pub(crate) fn alternating(values: &[usize]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

pub fn betti_numbers(complex: &SimplicialComplex, field: FieldSpec) -> BettiVector {
    let d = complex.dim();
    // ranks[i] = rank ∂_i, with ∂_0 = ∂_{d+1} = 0
    let mut ranks = vec![0usize; d + 2];
    for (i, rank) in ranks.iter_mut().enumerate().take(d + 1).skip(1) {
        *rank = boundary_matrix(complex, i, field).expect("in range").rank();
    }
    let betti = (0..=d).map(|i| complex.f(i) - ranks[i] - ranks[i + 1]).collect();
    BettiVector { field, betti }
}

pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    alternating(&complex.f_vector())
}

/// Dimension-wise maximum of the Betti numbers over the given fields. Each
/// field yields a valid lower bound on the critical faces per dimension, so
/// the maximum does too.
pub fn best_betti_bounds(
    complex: &SimplicialComplex,
    fields: &[FieldSpec],
) -> Result<Vec<usize>, FieldError> {
    if fields.is_empty() {
        return Err(FieldError::Empty);
    }
    let mut best = vec![0; complex.dim() + 1];
    for &field in fields {
        let b = betti_numbers(complex, field);
        for (x, y) in best.iter_mut().zip(b.betti) {
            *x = (*x).max(y);
        }
    }
    Ok(best)
}
