//! Pencils of quadrics in `ℙ⁵` and the branch sextic of the associated
//! genus-2 double cover.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::matrix::{self, Matrix};
use crate::poly::{self, MultiPoly};
use crate::univariate::UniPoly;

/// Two symmetric `6 × 6` matrices spanning a pencil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    q1: Matrix<u64>,
    q2: Matrix<u64>,
}

impl Pencil {
    pub fn new(f: &PrimeField, q1: Matrix<u64>, q2: Matrix<u64>) -> Result<Self> {
        for q in [&q1, &q2] {
            if q.rows() != 6 || q.cols() != 6 {
                return Err(Error::Dimension("pencil members must be 6x6".into()));
            }
            if !matrix::is_symmetric(f, q) {
                return Err(Error::NotSymmetric);
            }
        }
        let stacked = Matrix::from_rows(&[q1.data().to_vec(), q2.data().to_vec()]);
        if matrix::rank(f, &stacked) < 2 {
            return Err(Error::Degenerate("pencil members are proportional".into()));
        }
        Ok(Pencil { q1, q2 })
    }

    pub fn q1(&self) -> &Matrix<u64> {
        &self.q1
    }

    pub fn q2(&self) -> &Matrix<u64> {
        &self.q2
    }

    /// `(gᵗQ₁g, gᵗQ₂g)`.
    pub fn congruent(&self, f: &PrimeField, g: &Matrix<u64>) -> Result<Self> {
        let c = |q: &Matrix<u64>| matrix::mul(f, &matrix::mul(f, &g.transpose(), q), g);
        Pencil::new(f, c(&self.q1), c(&self.q2))
    }
}

/// `det(λQ₁ + μQ₂)` in the variables `(λ, μ)`.
pub fn branch_sextic(f: &PrimeField, p: &Pencil) -> MultiPoly<u64> {
    let m = Matrix::from_fn(6, 6, |r, c| MultiPoly::linear(f, &[p.q1[(r, c)], p.q2[(r, c)]]));
    poly::poly_det(f, &m)
}

/// `s(t, 1)` for a binary form `s(λ, μ)`.
pub fn dehomogenize(f: &PrimeField, s: &MultiPoly<u64>) -> UniPoly<u64> {
    let deg = s.degree().unwrap_or(0) as usize;
    let mut coeffs = vec![0u64; deg + 1];
    for (m, c) in s.terms() {
        coeffs[m.0[0] as usize] = f.add(&coeffs[m.0[0] as usize], c);
    }
    UniPoly::new(f, coeffs)
}

/// The sextic is of full degree and has six distinct roots on `ℙ¹` over
/// the algebraic closure. A simple root at `μ = 0` appears as a drop of
/// the dehomogenized degree from 6 to 5, so the test is: degree of
/// `s(t, 1)` at least 5 and `gcd(s(t,1), s'(t,1)) = 1`.
pub fn is_smooth_sextic(f: &PrimeField, s: &MultiPoly<u64>) -> bool {
    if s.is_zero() || s.degree() != Some(6) || !s.is_homogeneous() {
        return false;
    }
    let g = dehomogenize(f, s);
    matches!(g.degree(), Some(d) if d >= 5) && g.is_squarefree(f)
}

pub fn is_smooth_pencil(f: &PrimeField, p: &Pencil) -> bool {
    is_smooth_sextic(f, &branch_sextic(f, p))
}

/// Sextic coefficients `[c₀, …, c₆]` of `λ^{6−i} μ^i`, with the verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SexticReport {
    pub prime: u64,
    pub coefficients: Vec<u64>,
    pub smooth: bool,
}

pub fn sextic_report(f: &PrimeField, p: &Pencil) -> SexticReport {
    let s = branch_sextic(f, p);
    let coefficients = (0..=6u32)
        .map(|i| *s.coeff(&poly::Monomial(vec![6 - i, i])).unwrap_or(&0))
        .collect();
    SexticReport { prime: f.modulus(), coefficients, smooth: is_smooth_sextic(f, &s) }
}

/// `Q₁ = I`, `Q₂ = diag(d)`.
pub fn diagonal_pencil(f: &PrimeField, d: &[i64; 6]) -> Result<Pencil> {
    let q2 = Matrix::from_fn(6, 6, |r, c| if r == c { f.from_i64(d[r]) } else { 0 });
    Pencil::new(f, matrix::identity(f, 6), q2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn diagonal_pencil_factors() {
        let f = fp();
        let p = diagonal_pencil(&f, &[0, 1, 2, 3, 4, 5]).unwrap();
        let s = branch_sextic(&f, &p);
        let mut expected = MultiPoly::constant(&f, 2, 1);
        for i in 0..6 {
            expected = expected.mul(&f, &MultiPoly::linear(&f, &[1, i]));
        }
        assert_eq!(s, expected);
        assert!(is_smooth_pencil(&f, &p));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(dehomogenize(&f, &s).roots(&f, &mut rng).len(), 6);
    }

    #[test]
    fn degenerate_pencils() {
        let f = fp();
        assert!(Pencil::new(&f, matrix::identity(&f, 6), matrix::identity(&f, 6)).is_err());
        let p = diagonal_pencil(&f, &[0, 0, 1, 2, 3, 4]).unwrap();
        assert!(!is_smooth_pencil(&f, &p));
        // simple root at infinity: Q₂ singular of corank one
        let q = Matrix::from_fn(6, 6, |r, c| if r == c { f.from_i64(r as i64 + 1) } else { 0 });
        let p = Pencil::new(&f, diagonal_pencil(&f, &[0, 1, 2, 3, 4, 5]).unwrap().q2().clone(), q).unwrap();
        assert_eq!(dehomogenize(&f, &branch_sextic(&f, &p)).degree(), Some(5));
        assert!(is_smooth_pencil(&f, &p));
    }

    #[test]
    fn congruence_covariance() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = diagonal_pencil(&f, &[0, 1, 2, 3, 4, 5]).unwrap();
        let s = branch_sextic(&f, &p);
        for _ in 0..5 {
            let g = matrix::random_invertible(&f, 6, &mut rng);
            let d = matrix::det(&f, &g).unwrap();
            let pg = p.congruent(&f, &g).unwrap();
            assert_eq!(branch_sextic(&f, &pg), s.scale(&f, &f.mul(&d, &d)));
        }
    }

    #[test]
    fn report_lists_coefficients() {
        let f = fp();
        let p = diagonal_pencil(&f, &[0, 1, 2, 3, 4, 5]).unwrap();
        let r = sextic_report(&f, &p);
        assert_eq!(r.coefficients[0], 1);
        assert_eq!(r.coefficients[6], 0);
        assert!(r.smooth);
    }
}
