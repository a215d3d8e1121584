//! Exact rational scalars, vectors and matrices.
//!
//! `Rat` is `num_rational::BigRational`, which keeps every value in reduced
//! form with a positive denominator. Vectors are plain `Vec<Rat>`; their
//! derived `Ord` is the lexicographic order used for canonical output.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

pub fn from_bigint(value: BigInt) -> Rat {
    Rat::from_integer(value)
}

pub fn vec_from_ints(values: &[i64]) -> RatVec {
    values.iter().map(|&v| int(v)).collect()
}

/// Parses `p` or `p/q`. Rejects zero denominators and embedded whitespace.
pub fn parse_rat(token: &str) -> std::result::Result<Rat, String> {
    let parse_int = |s: &str| -> std::result::Result<BigInt, String> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("invalid integer '{s}'"));
        }
        s.parse::<BigInt>().map_err(|e| format!("invalid integer '{s}': {e}"))
    };
    match token.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(token)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            if q.starts_with(['-', '+']) {
                return Err(format!("invalid denominator in '{token}'"));
            }
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(format!("zero denominator in '{token}'"));
            }
            Ok(Rat::new(num, den))
        }
    }
}

pub fn is_integral_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rat], s: &Rat) -> RatVec {
    a.iter().map(|x| x * s).collect()
}

/// Sorts and deduplicates a point list into canonical order.
pub fn canonical(mut points: Vec<RatVec>) -> Vec<RatVec> {
    points.sort();
    points.dedup();
    points
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn denominator_lcm(values: &[Rat]) -> BigInt {
    values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales `values` by the lcm of their denominators, returning integer entries.
pub fn clear_denominators(values: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let l = denominator_lcm(values);
    let ints = values
        .iter()
        .map(|v| v.numer() * (&l / v.denom()))
        .collect();
    (ints, l)
}

/// Scales a nonzero vector by a positive rational so that it becomes an
/// integer vector whose entries have gcd 1. Returns `None` for the zero vector.
pub fn primitive_integer(values: &[Rat]) -> Option<RatVec> {
    let (ints, _) = clear_denominators(values);
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return None;
    }
    Some(ints.into_iter().map(|v| Rat::from_integer(v / &g)).collect())
}

/// Least common multiple of the absolute values of nonzero integers.
pub fn lcm_all(values: &[BigInt]) -> Result<BigInt> {
    if values.is_empty() {
        return Err(Error::EmptyList);
    }
    if values.iter().any(|v| v.is_zero()) {
        return Err(Error::InvalidParameter("lcm of zero".into()));
    }
    Ok(values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v)))
}

fn bit_length(value: &BigInt) -> u64 {
    value.bits()
}

/// Binary encoding size of `p/q`: `1 + ceil(log2(|p|+1)) + ceil(log2(q+1))`,
/// with the numerator field occupying at least one bit.
pub fn encoding_size(value: &Rat) -> u64 {
    1 + bit_length(value.numer()).max(1) + bit_length(value.denom())
}

pub fn encoding_size_vec(values: &[Rat]) -> u64 {
    values.iter().map(encoding_size).sum()
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<RatVec>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let count = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RatMat {
            rows: count,
            cols,
            data,
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows.iter().map(|r| vec_from_ints(r)).collect())
            .expect("rectangular integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rat) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        assert!(r < self.rows, "row {r} out of bounds");
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<RatVec> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn select_rows(&self, indices: &[usize]) -> RatMat {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        RatMat {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, indices: &[usize]) -> RatMat {
        let mut data = Vec::with_capacity(indices.len() * self.rows);
        for r in 0..self.rows {
            for &c in indices {
                data.push(self.get(r, c).clone());
            }
        }
        RatMat {
            rows: self.rows,
            cols: indices.len(),
            data,
        }
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    /// Each row multiplied by the lcm of its denominators.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        (0..self.rows)
            .map(|r| clear_denominators(self.row(r)))
            .unzip()
    }
}

impl fmt::Display for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Exact determinant. Rows are cleared to integers, then Bareiss elimination
/// runs on the integer copy.
pub fn mat_det(m: &RatMat) -> Result<Rat> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            got: m.cols,
        });
    }
    let (ints, scales) = m.integer_rows();
    let det = bareiss_det(ints);
    let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(Rat::new(det, denom))
}

/// Exact solution of `m z = rhs` for a nonsingular square `m`.
pub fn mat_solve(m: &RatMat, rhs: &[Rat]) -> Result<RatVec> {
    let n = m.rows;
    if m.cols != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.cols,
        });
    }
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut a: Vec<RatVec> = m.row_vecs();
    let mut b: RatVec = rhs.to_vec();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(k, pivot);
        b.swap(k, pivot);
        let inv = a[k][k].recip();
        for j in k..n {
            a[k][j] = &a[k][j] * &inv;
        }
        b[k] = &b[k] * &inv;
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].clone();
            for j in k..n {
                let t = &factor * &a[k][j];
                a[i][j] -= t;
            }
            let t = &factor * &b[k];
            b[i] -= t;
        }
    }
    Ok(b)
}

/// Inverse of a nonsingular square matrix.
pub fn mat_inverse(m: &RatMat) -> Result<RatMat> {
    let n = m.rows;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        cols.push(mat_solve(m, &e)?);
    }
    let mut inv = RatMat::zeros(n, n);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    Ok(inv)
}

/// Rank by fraction-free elimination on the integer-cleared rows.
pub fn mat_rank(m: &RatMat) -> usize {
    let (mut a, _) = m.integer_rows();
    let rows = m.rows;
    let cols = m.cols;
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let (pv, iv) = (a[rank][c].clone(), a[i][c].clone());
            for j in c..cols {
                a[i][j] = &a[i][j] * &pv - &a[rank][j] * &iv;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(a: &mut [RatVec]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{z : m z = 0}`.
pub fn null_space(m: &RatMat) -> Vec<RatVec> {
    let mut a = m.row_vecs();
    let pivots = rref(&mut a);
    let cols = m.cols;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut z = vec![Rat::zero(); cols];
            z[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                z[p] = -a[r][f].clone();
            }
            z
        })
        .collect()
}

/// For a `(k-1) x k` matrix, the vector of signed maximal minors. It spans
/// the kernel whenever the matrix has full row rank, and is zero otherwise.
pub fn cofactor_kernel(rows: &[RatVec], k: usize) -> RatVec {
    debug_assert_eq!(rows.len() + 1, k);
    let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r).0).collect();
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = ints
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let det = bareiss_det(minor);
            Rat::from_integer(if j % 2 == 0 { det } else { -det })
        })
        .collect()
}

pub fn max_abs(values: &[Rat]) -> Rat {
    values
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rat::zero)
}
