//! Jumping lines of quadric instantons and jumping conics of `V22`
//! instantons as determinantal loci of matrices of linear forms.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::Geometry;
use crate::hilbert::{self, HilbPoly};
use crate::matrix::{self, Matrix};
use crate::monads::MonadData;
use crate::poly::{self, MultiPoly, PolyJson};
use crate::tensor::Net;

/// A matrix whose entries are linear forms (or zero) in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormMatrix {
    nvars: usize,
    entries: Matrix<MultiPoly<u64>>,
}

impl LinearFormMatrix {
    pub fn new(nvars: usize, entries: Matrix<MultiPoly<u64>>) -> Result<Self> {
        for p in entries.data() {
            if p.nvars() != nvars || !(p.is_zero() || (p.degree() == Some(1) && p.is_homogeneous())) {
                return Err(Error::Dimension("entries must be linear forms".into()));
            }
        }
        Ok(LinearFormMatrix { nvars, entries })
    }

    /// The matrix `Σ_v coeffs[v] x_v` from coefficient matrices.
    pub fn from_coefficients(f: &PrimeField, coeffs: &[Matrix<u64>]) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::Dimension("no variables".into()))?;
        let (r, c) = (first.rows(), first.cols());
        if coeffs.iter().any(|m| m.rows() != r || m.cols() != c) {
            return Err(Error::Dimension("coefficient matrices differ in shape".into()));
        }
        let entries = Matrix::from_fn(r, c, |i, j| {
            let lin: Vec<u64> = coeffs.iter().map(|m| m[(i, j)]).collect();
            MultiPoly::linear(f, &lin)
        });
        Self::new(coeffs.len(), entries)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    pub fn entries(&self) -> &Matrix<MultiPoly<u64>> {
        &self.entries
    }

    /// Coefficient of `x_v` in every entry.
    pub fn coefficient_matrix(&self, f: &PrimeField, v: usize) -> Matrix<u64> {
        self.entries.map(|p| p.linear_coefficients(f).map(|c| c[v]).unwrap_or(0))
    }

    pub fn eval_at(&self, f: &PrimeField, point: &[u64]) -> Matrix<u64> {
        self.entries.eval_at(f, point)
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries == self.entries.transpose()
    }
}

/// `B_E`: the `(k−1) × k` matrix with entries `Σ_u A[i][w][u] x_u` on `ℙ(U)`.
pub fn jumping_lines_matrix(m: &MonadData) -> Result<LinearFormMatrix> {
    if m.geometry != Geometry::Quadric {
        return Err(Error::Unsupported("jumping lines are defined for quadric monads".into()));
    }
    let du = m.a.dim_u();
    let coeffs: Vec<Matrix<u64>> = (0..du)
        .map(|u| Matrix::from_fn(m.a.dim_i(), m.a.dim_w(), |i, w| *m.a.get(i, w, u)))
        .collect();
    LinearFormMatrix::from_coefficients(&m.field, &coeffs)
}

/// Signed maximal minors `(−1)^w det(B without column w)` of an
/// `r × (r+1)` matrix; `B · minors = 0`.
pub fn maximal_minors(f: &PrimeField, b: &LinearFormMatrix) -> Result<Vec<MultiPoly<u64>>> {
    if b.cols() != b.rows() + 1 {
        return Err(Error::Dimension(format!(
            "maximal minors need an r x (r+1) matrix, got {} x {}",
            b.rows(),
            b.cols()
        )));
    }
    let rows: Vec<usize> = (0..b.rows()).collect();
    Ok((0..b.cols())
        .map(|w| {
            let cols: Vec<usize> = (0..b.cols()).filter(|c| *c != w).collect();
            let minor = poly::poly_det(f, &b.entries.select(&rows, &cols));
            if w % 2 == 1 {
                minor.neg(f)
            } else {
                minor
            }
        })
        .collect())
}

/// Whether `B · minors` vanishes as a vector of polynomials.
pub fn hilbert_burch_holds(f: &PrimeField, b: &LinearFormMatrix, minors: &[MultiPoly<u64>]) -> bool {
    (0..b.rows()).all(|i| {
        (0..b.cols())
            .fold(MultiPoly::zero(b.nvars), |acc, w| acc.add(f, &b.entries[(i, w)].mul(f, &minors[w])))
            .is_zero()
    })
}

/// `χ(F(t)) = (k−1)·C(t+3,3) − k·C(t+2,3) + C(t−k+3,3)` for the cokernel
/// of `B_E` on `ℙ³`.
pub fn jumping_hilbert_poly(k: usize) -> HilbPoly {
    let f = crate::field::Rationals;
    let kk = k as i64;
    let scale = |p: HilbPoly, c: i64| p.scale(&f, &BigRational::from_integer(c.into()));
    scale(hilbert::binomial_poly(3, 3), kk - 1)
        .sub(&f, &scale(hilbert::binomial_poly(2, 3), kk))
        .add(&f, &hilbert::binomial_poly(3 - kk, 3))
}

/// Degree of the jumping curve, read off its linear Hilbert polynomial.
pub fn jumping_curve_degree(k: usize) -> Result<u64> {
    let p = jumping_hilbert_poly(k);
    match p.degree() {
        Some(1) => {}
        d => return Err(Error::Degenerate(format!("Hilbert polynomial of degree {d:?}, expected 1"))),
    }
    let lead = p.leading().expect("degree one");
    if !lead.is_integer() || *lead <= BigRational::zero() {
        return Err(Error::Degenerate(format!("leading coefficient {lead} is not a positive integer")));
    }
    lead.to_integer().to_u64().ok_or_else(|| Error::Degenerate("degree overflow".into()))
}

/// Whether the line of `u ∈ ℙ(U)` is jumping: `rank B_E(u) ≤ k − 2`.
pub fn point_is_jumping(m: &MonadData, u: &[u64]) -> Result<bool> {
    let b = jumping_lines_matrix(m)?;
    if u.len() != b.nvars() {
        return Err(Error::Dimension("point must have dim U coordinates".into()));
    }
    Ok(matrix::rank(&m.field, &b.eval_at(&m.field, u)) + 1 < b.cols())
}

/// Curve data emitted by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct JumpingReport {
    pub geometry: Geometry,
    pub k: usize,
    /// Expected degree of the curve.
    pub degree: u64,
    /// Defining polynomials: the maximal minors (lines) or `det M_E` (conics).
    pub equations: Vec<PolyJson<u64>>,
    /// `B · minors = 0` (lines) or `M_E` symmetric (conics).
    pub identity_holds: bool,
    /// Some equation is nonzero.
    pub generic_splitting: bool,
}

pub fn jumping_lines_report(m: &MonadData) -> Result<JumpingReport> {
    let f = &m.field;
    let b = jumping_lines_matrix(m)?;
    let minors = maximal_minors(f, &b)?;
    Ok(JumpingReport {
        geometry: m.geometry,
        k: m.k,
        degree: jumping_curve_degree(m.k)?,
        identity_holds: hilbert_burch_holds(f, &b, &minors),
        generic_splitting: minors.iter().any(|p| !p.is_zero()),
        equations: minors.iter().map(|p| p.to_json()).collect(),
    })
}

/// `det M_E`, homogeneous of degree `k` unless zero.
pub fn jumping_conics_curve(f: &PrimeField, net: &Net<u64>) -> Result<MultiPoly<u64>> {
    let me = jumping_conics_matrix(f, net)?;
    Ok(poly::poly_det(f, me.entries()))
}

/// `M_E`: the net as a symmetric `k × k` matrix of linear forms on `ℙ(B*)`.
pub fn jumping_conics_matrix(f: &PrimeField, net: &Net<u64>) -> Result<LinearFormMatrix> {
    if net.geometry() != Geometry::V22 {
        return Err(Error::Unsupported("jumping conics are defined for v22 nets".into()));
    }
    let k = net.k();
    let coeffs: Vec<Matrix<u64>> = (0..net.dim_b())
        .map(|b| Matrix::from_fn(k, k, |i, j| net.coeffs()[i][j][b]))
        .collect();
    LinearFormMatrix::from_coefficients(f, &coeffs)
}

pub fn jumping_conics_report(f: &PrimeField, net: &Net<u64>) -> Result<JumpingReport> {
    let me = jumping_conics_matrix(f, net)?;
    let curve = poly::poly_det(f, me.entries());
    Ok(JumpingReport {
        geometry: Geometry::V22,
        k: net.k(),
        degree: net.k() as u64,
        identity_holds: me.is_symmetric(),
        generic_splitting: !curve.is_zero(),
        equations: vec![curve.to_json()],
    })
}
