//! Exact integer and rational linear algebra.
//!
//! Everything in this module is arbitrary precision; there is no floating
//! point anywhere in the crate. The invariants computed downstream are exact
//! fractions and torsion classes, so a single rounding step would destroy
//! them. The module provides Smith normal form with deterministic pivoting,
//! rational linear solves, signatures of symmetric matrices by congruence
//! diagonalization, integer solves through the Smith form, and affine
//! systems over the two-element field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};
use thiserror::Error;

/// Exact rational number, always stored reduced with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn diagonal_matrix(entries: &[BigInt]) -> Self {
        let n = entries.len();
        IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn check_symmetric(&self) -> Result<(), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Err(LinalgError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible dimensions");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += &self[(i, k)] * &other[(k, j)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "incompatible dimensions");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect()
    }

    /// Block diagonal sum of two matrices.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix::from_fn(
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| match (i < self.rows, j < self.cols) {
                (true, true) => self[(i, j)].clone(),
                (false, false) => other[(i - self.rows, j - self.cols)].clone(),
                _ => BigInt::zero(),
            },
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            let v = -std::mem::take(&mut self.data[idx]);
            self.data[idx] = v;
        }
    }

    /// row[dst] += factor * row[src]
    fn row_add(&mut self, dst: usize, src: usize, factor: &BigInt) {
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let add = factor * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] += add;
        }
    }

    /// col[dst] += factor * col[src]
    fn col_add(&mut self, dst: usize, src: usize, factor: &BigInt) {
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let add = factor * &self.data[i * self.cols + src];
            self.data[i * self.cols + dst] += add;
        }
    }

    /// Exact determinant via the Bareiss fraction-free algorithm.
    /// The determinant of the empty matrix is 1.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `U * M * V = S` with unimodular `U`, `V`.
///
/// The diagonal of `S` is nonnegative, each entry divides the next, and
/// zeros trail.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.s.diagonal()
    }

    /// Diagonal entries larger than one, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| d > &BigInt::one())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Exact reconstruction check, for tests and asserts.
    pub fn verifies(&self, m: &IntMatrix) -> bool {
        self.u.mul(m).mul(&self.v) == self.s
    }
}

/// Pivot for step `k`: the smallest nonzero entry in absolute value in the
/// trailing submatrix, ties broken by lowest (row, col). Deterministic, so
/// the transforms (and every canonical coordinate downstream) are too.
fn select_pivot(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..s.rows() {
        for j in k..s.cols() {
            let e = &s[(i, j)];
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form of an arbitrary integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = select_pivot(&s, k) else {
            break;
        };
        s.swap_rows(k, pi);
        u.swap_rows(k, pi);
        s.swap_cols(k, pj);
        v.swap_cols(k, pj);

        'step: loop {
            // Clear column k below the pivot, swapping remainders up until
            // the column is clean, then do the same for row k.
            'clear: loop {
                for i in k + 1..rows {
                    if s[(i, k)].is_zero() {
                        continue;
                    }
                    let q = s[(i, k)].clone() / s[(k, k)].clone();
                    if !q.is_zero() {
                        let neg_q = -q;
                        s.row_add(i, k, &neg_q);
                        u.row_add(i, k, &neg_q);
                    }
                }
                if let Some(i) = smallest_in_col(&s, k) {
                    s.swap_rows(k, i);
                    u.swap_rows(k, i);
                    continue 'clear;
                }
                for j in k + 1..cols {
                    if s[(k, j)].is_zero() {
                        continue;
                    }
                    let q = s[(k, j)].clone() / s[(k, k)].clone();
                    if !q.is_zero() {
                        let neg_q = -q;
                        s.col_add(j, k, &neg_q);
                        v.col_add(j, k, &neg_q);
                    }
                }
                if let Some(j) = smallest_in_row(&s, k) {
                    s.swap_cols(k, j);
                    v.swap_cols(k, j);
                    continue 'clear;
                }
                break 'clear;
            }
            // Pivot must divide the rest of the trailing submatrix; if not,
            // pull the offending row in and reduce again.
            if let Some(i) = first_nondivisible_row(&s, k) {
                s.row_add(k, i, &BigInt::one());
                u.row_add(k, i, &BigInt::one());
                continue 'step;
            }
            break 'step;
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
    }

    SnfResult { u, s, v }
}

fn smallest_in_col(s: &IntMatrix, k: usize) -> Option<usize> {
    let mut best: Option<(BigInt, usize)> = None;
    for i in k + 1..s.rows() {
        if s[(i, k)].is_zero() {
            continue;
        }
        let a = s[(i, k)].abs();
        match &best {
            Some((b, _)) if *b <= a => {}
            _ => best = Some((a, i)),
        }
    }
    best.map(|(_, i)| i)
}

fn smallest_in_row(s: &IntMatrix, k: usize) -> Option<usize> {
    let mut best: Option<(BigInt, usize)> = None;
    for j in k + 1..s.cols() {
        if s[(k, j)].is_zero() {
            continue;
        }
        let a = s[(k, j)].abs();
        match &best {
            Some((b, _)) if *b <= a => {}
            _ => best = Some((a, j)),
        }
    }
    best.map(|(_, j)| j)
}

fn first_nondivisible_row(s: &IntMatrix, k: usize) -> Option<usize> {
    let p = &s[(k, k)];
    if p.is_zero() {
        return None;
    }
    for i in k + 1..s.rows() {
        for j in k + 1..s.cols() {
            if !s[(i, j)].mod_floor(p).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

/// Solves `M x = rhs` over the rationals by Gauss-Jordan elimination.
/// Returns `None` when the system is inconsistent; free variables are set
/// to zero in the returned particular solution.
pub fn solve_rational(m: &IntMatrix, rhs: &[BigInt]) -> Result<Option<Vec<Rational>>, LinalgError> {
    if rhs.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            got: rhs.len(),
        });
    }
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = (0..cols)
                .map(|j| Rational::from(m[(i, j)].clone()))
                .collect();
            row.push(Rational::from(rhs[i].clone()));
            row
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        let Some(pi) = (pr..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, pi);
        let inv = a[pr][c].clone();
        for e in a[pr].iter_mut() {
            *e /= inv.clone();
        }
        for i in 0..rows {
            if i == pr || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..=cols {
                let sub = &f * &a[pr][j];
                a[i][j] -= sub;
            }
        }
        pivots.push((pr, c));
        pr += 1;
        if pr == rows {
            break;
        }
    }
    for row in a.iter().skip(pr) {
        if !row[cols].is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, c) in pivots {
        x[c] = a[r][cols].clone();
    }
    Ok(Some(x))
}

/// Rank of an integer matrix (over the rationals).
pub fn rational_rank(m: &IntMatrix) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| Rational::from(m[(i, j)].clone()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pi) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, pi);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[rank][c];
            for j in c..cols {
                let sub = &f * &a[rank][j];
                a[i][j] -= sub;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Signature of a symmetric integer matrix: number of positive minus number
/// of negative diagonal entries after exact congruence diagonalization.
pub fn signature(m: &IntMatrix) -> Result<i64, LinalgError> {
    m.check_symmetric()?;
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational::from(m[(i, j)].clone()))
                .collect()
        })
        .collect();

    let swap_sym = |a: &mut Vec<Vec<Rational>>, x: usize, y: usize| {
        a.swap(x, y);
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    };
    // row k += row i followed by the matching column operation
    let add_sym = |a: &mut Vec<Vec<Rational>>, k: usize, i: usize| {
        for j in 0..n {
            let add = a[i][j].clone();
            a[k][j] += add;
        }
        for r in 0..n {
            let add = a[r][i].clone();
            a[r][k] += add;
        }
    };

    let mut sig = 0i64;
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                None => continue, // row and column k vanish in the trailing block
                Some(i) => {
                    if !a[i][i].is_zero() {
                        swap_sym(&mut a, k, i);
                    } else {
                        add_sym(&mut a, k, i);
                    }
                }
            }
        }
        debug_assert!(!a[k][k].is_zero());
        sig += if a[k][k].is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in 0..n {
                let sub = &f * &a[k][j];
                a[i][j] -= sub;
            }
            for r in 0..n {
                let sub = &f * &a[r][k];
                a[r][i] -= sub;
            }
        }
    }
    Ok(sig)
}

/// Solves `M x = rhs` over the integers through the Smith normal form.
/// Returns `None` when no integral solution exists.
pub fn solve_integer(m: &IntMatrix, rhs: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if rhs.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            got: rhs.len(),
        });
    }
    let snf = smith_normal_form(m);
    let ur = snf.u.mul_vec(rhs);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, target) in ur.iter().enumerate() {
        let s_i = if i < m.cols() {
            snf.s[(i, i)].clone()
        } else {
            BigInt::zero()
        };
        if s_i.is_zero() {
            if !target.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = target.div_rem(&s_i);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    Ok(Some(snf.v.mul_vec(&y)))
}

/// Above this kernel dimension `solve_affine_mod2` stops enumerating and
/// hands back the particular solution with a kernel basis instead.
pub const MOD2_ENUMERATION_CAP: usize = 20;

/// Solution set of an affine system over the two-element field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mod2Solutions {
    Inconsistent,
    /// Complete list, sorted lexicographically (false < true).
    Enumerated(Vec<Vec<bool>>),
    /// Kernel too large to enumerate; spans particular + span(kernel_basis).
    Spanned {
        particular: Vec<bool>,
        kernel_basis: Vec<Vec<bool>>,
    },
}

impl Mod2Solutions {
    /// log2 of the number of solutions, `None` when inconsistent.
    pub fn count_log2(&self) -> Option<usize> {
        match self {
            Mod2Solutions::Inconsistent => None,
            Mod2Solutions::Enumerated(v) => {
                debug_assert!(v.len().is_power_of_two());
                Some(v.len().trailing_zeros() as usize)
            }
            Mod2Solutions::Spanned { kernel_basis, .. } => Some(kernel_basis.len()),
        }
    }

    pub fn enumerated(&self) -> Option<&[Vec<bool>]> {
        match self {
            Mod2Solutions::Enumerated(v) => Some(v),
            _ => None,
        }
    }
}

/// Solves `A x = d` over GF(2), reducing all entries mod 2 first.
pub fn solve_affine_mod2(a: &IntMatrix, d: &[BigInt]) -> Result<Mod2Solutions, LinalgError> {
    if d.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            got: d.len(),
        });
    }
    let rows = a.rows();
    let cols = a.cols();
    let two = BigInt::from(2);
    let mut mat: Vec<Vec<bool>> = (0..rows)
        .map(|i| {
            let mut row: Vec<bool> = (0..cols)
                .map(|j| !a[(i, j)].mod_floor(&two).is_zero())
                .collect();
            row.push(!d[i].mod_floor(&two).is_zero());
            row
        })
        .collect();

    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        let Some(pi) = (pr..rows).find(|&i| mat[i][c]) else {
            continue;
        };
        mat.swap(pr, pi);
        for i in 0..rows {
            if i != pr && mat[i][c] {
                let (head, tail) = mat.split_at_mut(pr.max(i));
                let (src, dst) = if i < pr {
                    (&tail[0], &mut head[i])
                } else {
                    (&head[pr], &mut tail[0])
                };
                for j in 0..=cols {
                    dst[j] ^= src[j];
                }
            }
        }
        pivot_col_of_row.push(c);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    for row in mat.iter().skip(pr) {
        if row[cols] {
            return Ok(Mod2Solutions::Inconsistent);
        }
    }

    let mut particular = vec![false; cols];
    for (r, &c) in pivot_col_of_row.iter().enumerate() {
        particular[c] = mat[r][cols];
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut kernel_basis: Vec<Vec<bool>> = Vec::new();
    for &fc in &free_cols {
        let mut vec = vec![false; cols];
        vec[fc] = true;
        for (r, &c) in pivot_col_of_row.iter().enumerate() {
            vec[c] = mat[r][fc];
        }
        kernel_basis.push(vec);
    }

    if kernel_basis.len() > MOD2_ENUMERATION_CAP {
        return Ok(Mod2Solutions::Spanned {
            particular,
            kernel_basis,
        });
    }

    let mut all = Vec::with_capacity(1 << kernel_basis.len());
    for mask in 0u64..(1u64 << kernel_basis.len()) {
        let mut sol = particular.clone();
        for (b, basis_vec) in kernel_basis.iter().enumerate() {
            if mask & (1 << b) != 0 {
                for (s, k) in sol.iter_mut().zip(basis_vec) {
                    *s ^= k;
                }
            }
        }
        all.push(sol);
    }
    all.sort();
    all.dedup();
    Ok(Mod2Solutions::Enumerated(all))
}
