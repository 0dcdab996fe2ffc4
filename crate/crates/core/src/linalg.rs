//! Exact rational linear algebra.
//!
//! Everything here works over `BigRational`, so there is no overflow and no
//! rounding. Determinant and rank go through fraction-free (Bareiss)
//! elimination on integer-scaled rows; kernels and linear solves use
//! Gauss-Jordan reduction so that their output is in reduced echelon form and
//! therefore deterministic.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RatVector = Vec<Rational>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rvec(entries: &[(i64, i64)]) -> RatVector {
    entries.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn ivec(entries: &[i64]) -> RatVector {
    entries.iter().map(|&v| int(v)).collect()
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.25"`. A leading
/// Unicode minus sign is accepted.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits = format!("{}{}", whole_digits, frac);
        let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Some(if negative { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of the leading digits for huge values.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn vec_to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn vsub(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vadd(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Entrywise quotient.
pub fn vdiv(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x / y).collect()
}

pub fn vscale(a: &[Rational], s: &Rational) -> RatVector {
    a.iter().map(|x| x * s).collect()
}

pub fn vsum(a: &[Rational]) -> Rational {
    a.iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Arithmetic mean of a nonempty list of points.
pub fn centroid(points: &[RatVector]) -> RatVector {
    let k = points[0].len();
    let count = int(points.len() as i64);
    (0..k)
        .map(|j| points.iter().fold(Rational::zero(), |acc, p| acc + &p[j]) / &count)
        .collect()
}

/// Positive multiple of `v` with coprime integer entries. The zero vector is
/// returned unchanged.
pub fn primitive_integer(v: &[Rational]) -> RatVector {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows. `cols` is needed so that a matrix with zero
    /// rows still knows its width.
    pub fn from_rows(rows: &[RatVector], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(columns: &[RatVector], rows: usize) -> Result<Self> {
        Ok(Self::from_rows(columns, rows)?.transpose())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<RatVector> = rows.iter().map(|r| ivec(r)).collect();
        Self::from_rows(&rows, cols).expect("rectangular literal")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<RatVector> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> RatVector {
        assert_eq!(v.len(), self.cols, "mul_vec dimension");
        self.rows().map(|r| dot(r, v)).collect()
    }

    /// `v * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Rational]) -> RatVector {
        assert_eq!(v.len(), self.rows, "vec_mul dimension");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(Rational::zero(), |acc, i| acc + &v[i] * &self[(i, j)])
            })
            .collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows: Vec<RatVector> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(&rows, self.cols).expect("rows of equal length")
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Horizontal concatenation `[self | col]`.
    pub fn append_column(&self, col: &[Rational]) -> Result<Self> {
        if col.len() != self.rows {
            return Err(Error::Dimension("appended column has wrong length".into()));
        }
        let rows: Vec<RatVector> = self
            .rows()
            .zip(col)
            .map(|(r, c)| {
                let mut r = r.to_vec();
                r.push(c.clone());
                r
            })
            .collect();
        Self::from_rows(&rows, self.cols + 1)
    }

    pub fn column_sums(&self) -> RatVector {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(Rational::zero(), |acc, i| acc + &self[(i, j)]))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.rows() {
            let cells: Vec<String> = r.iter().map(format_rational).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Clears denominators row by row. Returns the integer rows together with the
/// product of the row multipliers.
fn integer_rows(m: &RatMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = m
        .rows()
        .map(|r| {
            let lcm = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            r.iter()
                .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    (rows, scale)
}

/// Fraction-free forward elimination. Returns `(rank, sign-adjusted last pivot)`;
/// for a square full-rank input the second value is the integer determinant.
fn bareiss(mut a: Vec<Vec<BigInt>>, ncols: usize) -> (usize, BigInt) {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut rank = 0;
    let mut last = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        last = prev.clone();
        rank += 1;
    }
    if sign < 0 {
        last = -last;
    }
    (rank, last)
}

/// Exact determinant by Bareiss elimination.
pub fn det(m: &RatMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let (rows, scale) = integer_rows(m);
    let (rank, last) = bareiss(rows, n);
    if rank < n {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(last, scale))
}

pub fn rank(m: &RatMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let (rows, _) = integer_rows(m);
    bareiss(rows, m.ncols()).0
}

pub fn rank_of_rows(rows: &[RatVector]) -> usize {
    match rows.first() {
        None => 0,
        Some(r) => rank(&RatMatrix::from_rows(rows, r.len()).expect("rectangular")),
    }
}

/// Reduced row echelon form together with the pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (nrows, ncols) = (a.nrows(), a.ncols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..ncols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, col)].recip();
        for j in col..ncols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..nrows {
            if i == r || a[(i, col)].is_zero() {
                continue;
            }
            let factor = a[(i, col)].clone();
            for j in col..ncols {
                let v = &a[(r, j)] * &factor;
                a[(i, j)] -= v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{v : m v = 0}`, one vector per free column of the reduced echelon
/// form (each vector has a 1 in its free column and zeros in the other free
/// columns).
pub fn right_kernel_basis(m: &RatMatrix) -> Vec<RatVector> {
    let ncols = m.ncols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Basis of `{r : r m = 0}`.
pub fn left_kernel_basis(m: &RatMatrix) -> Vec<RatVector> {
    right_kernel_basis(&m.transpose())
}

/// Basis of the row space of `m` in reduced echelon form.
pub fn row_space_basis(m: &RatMatrix) -> Vec<RatVector> {
    let (r, pivots) = rref(m);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(RatVector),
    /// Consistent with a positive-dimensional solution set; carries one
    /// particular solution (free variables set to zero).
    NonUnique(RatVector),
    Inconsistent,
}

impl Solution {
    pub fn unique(self) -> Option<RatVector> {
        match self {
            Solution::Unique(v) => Some(v),
            _ => None,
        }
    }
}

/// Solves `m x = b` exactly.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Result<Solution> {
    if b.len() != m.nrows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.nrows()
        )));
    }
    let n = m.ncols();
    let aug = m.append_column(b)?;
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return Ok(Solution::Inconsistent);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, n)].clone();
    }
    if pivots.len() == n {
        Ok(Solution::Unique(x))
    } else {
        Ok(Solution::NonUnique(x))
    }
}

/// Affine rank of a point set: the dimension of its affine hull, `-1` when
/// empty.
pub fn affine_dim(points: &[RatVector]) -> isize {
    match points.split_first() {
        None => -1,
        Some((first, rest)) => {
            let diffs: Vec<RatVector> = rest.iter().map(|p| vsub(p, first)).collect();
            rank_of_rows(&diffs) as isize
        }
    }
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
