//! Dense row-major matrices and exact elimination.
//!
//! All routines are generic over [`Field`]; the field value is passed
//! explicitly because prime-field elements are bare integers.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix::new(rows.len(), ncols, rows.concat())
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

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.rows).collect();
        self.select(&all, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &all)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix::new(self.rows + other.rows, self.cols, data)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix::new(self.rows, self.cols, self.data.iter().map(f).collect())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: Clone> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::new(rows, cols, vec![f.zero(); rows * cols])
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(n, n, |r, c| if r == c { f.one() } else { f.zero() })
}

pub fn random<F: Field, R: Rng + ?Sized>(
    f: &F,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix<F::Elem> {
    Matrix::from_fn(rows, cols, |_, _| f.random(rng))
}

/// A random invertible matrix, by rejection.
pub fn random_invertible<F: Field, R: Rng + ?Sized>(
    f: &F,
    n: usize,
    rng: &mut R,
) -> Matrix<F::Elem> {
    loop {
        let m = random(f, n, n, rng);
        if rank(f, &m) == n {
            return m;
        }
    }
}

pub fn is_zero<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    m.data.iter().all(|x| f.is_zero(x))
}

pub fn add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix::new(
        a.rows,
        a.cols,
        a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect(),
    )
}

pub fn sub<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix::new(
        a.rows,
        a.cols,
        a.data.iter().zip(&b.data).map(|(x, y)| f.sub(x, y)).collect(),
    )
}

pub fn scale<F: Field>(f: &F, s: &F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.mul(s, x))
}

pub fn neg<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.neg(x))
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "inner dimensions");
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = &a[(i, k)];
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let t = f.mul(aik, &b[(k, j)]);
                out[(i, j)] = f.add(&out[(i, j)], &t);
            }
        }
    }
    out
}

pub fn mul_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|r| dot(f, a.row(r), v))
        .collect()
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// `xᵗ M y` for a square bilinear form `M`.
pub fn bilinear<F: Field>(f: &F, m: &Matrix<F::Elem>, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    dot(f, x, &mul_vec(f, m, y))
}

pub fn is_symmetric<F: Field>(_f: &F, m: &Matrix<F::Elem>) -> bool {
    m.is_square() && (0..m.rows).all(|r| (0..r).all(|c| m[(r, c)] == m[(c, r)]))
}

pub fn is_skew<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    m.is_square()
        && (0..m.rows).all(|r| {
            f.is_zero(&m[(r, r)]) && (0..r).all(|c| m[(r, c)] == f.neg(&m[(c, r)]))
        })
}

/// Gauss-Jordan elimination to reduced row echelon form.
pub fn echelon<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Echelon<F::Elem> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[(i, c)])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&a[(r, c)]).expect("nonzero pivot");
        for j in c..cols {
            a[(r, j)] = f.mul(&a[(r, j)], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&a[(i, c)]) {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                let t = f.mul(&factor, &a[(r, j)]);
                a[(i, j)] = f.sub(&a[(i, j)], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { reduced: a, pivots }
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    // forward elimination only
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[(i, c)])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&a[(r, c)]).expect("nonzero pivot");
        for i in r + 1..rows {
            if f.is_zero(&a[(i, c)]) {
                continue;
            }
            let factor = f.mul(&a[(i, c)], &inv);
            for j in c..cols {
                let t = f.mul(&factor, &a[(r, j)]);
                a[(i, j)] = f.sub(&a[(i, j)], &t);
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel, returned as the columns of a
/// `cols × (cols - rank)` matrix.
pub fn kernel_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let ech = echelon(f, m);
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    let mut k = zeros(f, n, free.len());
    for (j, &fc) in free.iter().enumerate() {
        k[(fc, j)] = f.one();
        for (r, &pc) in ech.pivots.iter().enumerate() {
            k[(pc, j)] = f.neg(&ech.reduced[(r, fc)]);
        }
    }
    k
}

/// Basis of the left kernel `{y : yᵗ m = 0}` as columns.
pub fn left_kernel_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    kernel_basis(f, &m.transpose())
}

/// Column indices of `m` forming a basis of its column space.
pub fn pivot_columns<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<usize> {
    echelon(f, m).pivots
}

/// Determinant by Gaussian elimination.
pub fn det<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<F::Elem> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut d = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&a[(i, c)])) else {
            return Ok(f.zero());
        };
        if p != c {
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
            }
            d = f.neg(&d);
        }
        let piv = a[(c, c)].clone();
        d = f.mul(&d, &piv);
        let inv = f.inv(&piv).expect("nonzero pivot");
        for i in c + 1..n {
            if f.is_zero(&a[(i, c)]) {
                continue;
            }
            let factor = f.mul(&a[(i, c)], &inv);
            for j in c..n {
                let t = f.mul(&factor, &a[(c, j)]);
                a[(i, j)] = f.sub(&a[(i, j)], &t);
            }
        }
    }
    Ok(d)
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let ech = echelon(f, &m.hstack(&identity(f, n)));
    if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
        return Err(Error::Degenerate("matrix is singular".into()));
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    let rows: Vec<usize> = (0..n).collect();
    Ok(ech.reduced.select(&rows, &cols))
}

/// One solution `x` of `m x = b`, or `None` if the system is inconsistent.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(m.rows, b.len());
    let aug = m.hstack(&Matrix::new(b.len(), 1, b.to_vec()));
    let ech = echelon(f, &aug);
    if ech.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols];
    for (r, &pc) in ech.pivots.iter().enumerate() {
        x[pc] = ech.reduced[(r, m.cols)].clone();
    }
    Some(x)
}

/// Pfaffian of a skew-symmetric matrix of even size, by congruence
/// elimination (pivoting on 2×2 blocks).
pub fn pfaffian<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<F::Elem> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    if !is_skew(f, m) {
        return Err(Error::NotSkew);
    }
    let n = m.rows;
    if n % 2 == 1 {
        return Ok(f.zero());
    }
    let mut a = m.clone();
    let mut pf = f.one();
    let swap = |a: &mut Matrix<F::Elem>, i: usize, j: usize| {
        if i == j {
            return;
        }
        for c in 0..n {
            a.data.swap(i * n + c, j * n + c);
        }
        for r in 0..n {
            a.data.swap(r * n + i, r * n + j);
        }
    };
    let mut k = 0;
    while k < n {
        // find a nonzero entry in row k to pair with
        let Some(j) = (k + 1..n).find(|&j| !f.is_zero(&a[(k, j)])) else {
            return Ok(f.zero());
        };
        if j != k + 1 {
            swap(&mut a, k + 1, j);
            pf = f.neg(&pf);
        }
        let piv = a[(k, k + 1)].clone();
        pf = f.mul(&pf, &piv);
        let inv = f.inv(&piv).expect("nonzero pivot");
        // clear rows/columns k, k+1 from the trailing block by congruence
        for i in k + 2..n {
            // row_i -= (a[i][k+1]/piv) row_k - (a[i][k]/piv) row_{k+1}
            let c1 = f.mul(&a[(i, k + 1)], &inv);
            let c2 = f.mul(&a[(i, k)], &inv);
            if f.is_zero(&c1) && f.is_zero(&c2) {
                continue;
            }
            for c in 0..n {
                let t1 = f.mul(&c1, &a[(k, c)]);
                let t2 = f.mul(&c2, &a[(k + 1, c)]);
                a[(i, c)] = f.add(&f.sub(&a[(i, c)], &t1), &t2);
            }
            for r in 0..n {
                let t1 = f.mul(&c1, &a[(r, k)]);
                let t2 = f.mul(&c2, &a[(r, k + 1)]);
                a[(r, i)] = f.add(&f.sub(&a[(r, i)], &t1), &t2);
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss_det_integer(m: &Matrix<BigInt>) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            for j in 0..n {
                a.data.swap(p * n + j, k * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                // exact by Sylvester's identity
                a[(i, j)] = num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Exact rational determinant: clear row denominators, run Bareiss over the
/// integers, and divide back.
pub fn det_rational(m: &Matrix<BigRational>) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut ints = Vec::with_capacity(n * n);
    for r in 0..n {
        let l = m
            .row(r)
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for x in m.row(r) {
            ints.push(x.numer() * (&l / x.denom()));
        }
        scale *= l;
    }
    let d = bareiss_det_integer(&Matrix::new(n, n, ints))?;
    Ok(BigRational::new(d, scale))
}
