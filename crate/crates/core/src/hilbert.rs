//! Hilbert polynomials `χ(F(t))` with exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::geometry::Geometry;
use crate::univariate::UniPoly;

/// A polynomial in `t` over `ℚ`.
pub type HilbPoly = UniPoly<BigRational>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `C(t + a, r)` as a polynomial in `t`.
pub fn binomial_poly(a: i64, r: u32) -> HilbPoly {
    let f = Rationals;
    let mut p = UniPoly::constant(&f, BigRational::one());
    let mut fact = BigRational::one();
    for j in 0..r as i64 {
        p = p.mul(&f, &UniPoly::new(&f, vec![q(a - j), BigRational::one()]));
        fact *= q(j + 1);
    }
    p.scale(&f, &fact.recip())
}

/// `p(t + a)`.
pub fn shift(p: &HilbPoly, a: i64) -> HilbPoly {
    let f = Rationals;
    let lin = UniPoly::new(&f, vec![q(a), BigRational::one()]);
    p.coeffs()
        .iter()
        .rev()
        .fold(UniPoly::zero(), |acc, c| acc.mul(&f, &lin).add(&f, &UniPoly::constant(&f, c.clone())))
}

pub fn eval(p: &HilbPoly, t: i64) -> BigRational {
    p.eval(&Rationals, &q(t))
}

/// Interpolates the polynomial through `(t, value)` pairs.
pub fn interpolate(points: &[(i64, BigRational)]) -> HilbPoly {
    let xs: Vec<BigRational> = points.iter().map(|(t, _)| q(*t)).collect();
    let ys: Vec<BigRational> = points.iter().map(|(_, v)| v.clone()).collect();
    UniPoly::interpolate(&Rationals, &xs, &ys)
}

/// Coefficients from low to high degree, as `"p/q"` strings.
pub fn to_strings(p: &HilbPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

/// `χ(E(t))` of an instanton with second Chern class `c2`.
pub fn chi_instanton(geometry: Geometry, c2: usize) -> HilbPoly {
    let f = Rationals;
    let k = q(c2 as i64);
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let t = UniPoly::x(&f);
    let (linear, quad) = match geometry {
        Geometry::Quadric => {
            // (t+1)/3 · (2t² + 4t − 3k + 3)
            let lin = UniPoly::new(&f, vec![BigRational::one(), BigRational::one()]);
            let quad = UniPoly::new(&f, vec![q(3) - q(3) * &k, q(4), q(2)]);
            (lin, quad)
        }
        Geometry::V5 => {
            // (t+1)/3 · (d t² + 2d t − 3k + 6), d = 5
            let d = q(geometry.tag().degree as i64);
            let lin = UniPoly::new(&f, vec![BigRational::one(), BigRational::one()]);
            let quad = UniPoly::new(&f, vec![q(6) - q(3) * &k, q(2) * &d, d]);
            (lin, quad)
        }
        Geometry::V22 => {
            // t/3 · ((2g−2) t² − 3k + g + 11)
            let g = q(geometry.tag().genus.expect("genus") as i64);
            let quad = UniPoly::new(&f, vec![&g + q(11) - q(3) * &k, BigRational::zero(), q(2) * &g - q(2)]);
            (t, quad)
        }
    };
    linear.mul(&f, &quad).scale(&f, &third)
}

/// Bundles whose `χ` is available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleTag {
    /// `𝒪_X`.
    O,
    /// Spinor bundle `𝒮` on the quadric.
    Spinor,
    /// Tautological rank-2 bundle `𝒰` on `V5`.
    U,
    /// `𝒰*` on `V5`.
    UDual,
}

/// `χ(𝒪_X(t))`.
pub fn chi_structure_sheaf(geometry: Geometry) -> Result<HilbPoly> {
    let f = Rationals;
    match geometry {
        Geometry::Quadric => Ok(binomial_poly(4, 4).sub(&f, &binomial_poly(2, 4))),
        Geometry::V5 => {
            // odd in s = t + 1 by Serre duality, leading coefficient H³/6,
            // χ(𝒪) = 1: χ = s(d s² + 6 − d)/6
            let d = q(geometry.tag().degree as i64);
            let s = UniPoly::new(&f, vec![BigRational::one(), BigRational::one()]);
            let quad = shift(&UniPoly::new(&f, vec![q(6) - &d, BigRational::zero(), d]), 1);
            Ok(s.mul(&f, &quad).scale(&f, &BigRational::new(BigInt::one(), BigInt::from(6))))
        }
        Geometry::V22 => Err(Error::Unsupported("bundle Euler characteristics on v22".into())),
    }
}

/// `χ(F(t))` for a bundle `F` on `geometry`.
pub fn chi_bundle_poly(geometry: Geometry, tag: BundleTag) -> Result<HilbPoly> {
    let o = chi_structure_sheaf(geometry)?;
    match (geometry, tag) {
        (_, BundleTag::O) => Ok(o),
        (Geometry::Quadric, BundleTag::Spinor) => {
            // χ(𝒮(t)) + χ(𝒮(t+1)) = 4χ(𝒪(t)), χ(𝒮(−1)) = 0
            let mut pts = vec![(-1, BigRational::zero())];
            for t in -1..2 {
                let prev = pts.last().expect("anchor").1.clone();
                pts.push((t + 1, q(4) * eval(&o, t) - prev));
            }
            Ok(interpolate(&pts))
        }
        (Geometry::V5, BundleTag::U) => {
            // χ(𝒰(−1)) = χ(𝒰) = 0, χ(𝒰(1)) = χ(𝒰*) = 5, χ(𝒰(−2)) = −χ(𝒰*) = −5
            let pts = [(-2, q(-5)), (-1, q(0)), (0, q(0)), (1, q(5))];
            Ok(interpolate(&pts))
        }
        (Geometry::V5, BundleTag::UDual) => {
            // 𝒰* ≅ 𝒰(1)
            Ok(shift(&chi_bundle_poly(geometry, BundleTag::U)?, 1))
        }
        _ => Err(Error::Unsupported(format!("bundle {tag:?} on {geometry}"))),
    }
}

pub fn chi_bundle(geometry: Geometry, tag: BundleTag, t: i64) -> Result<BigRational> {
    Ok(eval(&chi_bundle_poly(geometry, tag)?, t))
}

/// `dim W · χ(𝓔₂(t)) − dim I · (χ(𝓔₁(t)) + χ(𝓔₃(t)))` for the monad of
/// charge `k`.
pub fn chi_monad(geometry: Geometry, k: usize) -> Result<HilbPoly> {
    let f = Rationals;
    let dims = geometry.dims(k);
    let (middle, outer) = match geometry {
        Geometry::Quadric => {
            // I ⊗ 𝒪(−1) → W ⊗ 𝒮 → I* ⊗ 𝒪
            let o = chi_structure_sheaf(geometry)?;
            (chi_bundle_poly(geometry, BundleTag::Spinor)?, shift(&o, -1).add(&f, &o))
        }
        Geometry::V5 => {
            // I ⊗ 𝒰 → W ⊗ 𝒪 → I* ⊗ 𝒰*
            let u = chi_bundle_poly(geometry, BundleTag::U)?;
            let ud = chi_bundle_poly(geometry, BundleTag::UDual)?;
            (chi_structure_sheaf(geometry)?, u.add(&f, &ud))
        }
        Geometry::V22 => return Err(Error::Unsupported("monad Euler characteristic on v22".into())),
    };
    Ok(middle
        .scale(&f, &q(dims.dim_w as i64))
        .sub(&f, &outer.scale(&f, &q(dims.dim_i as i64))))
}

/// Comparison of the monad and instanton Hilbert polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiCheck {
    pub geometry: Geometry,
    pub k: usize,
    pub c2: usize,
    pub instanton: Vec<String>,
    pub monad: Vec<String>,
    pub identical: bool,
}

pub fn chi_check(geometry: Geometry, k: usize) -> Result<ChiCheck> {
    let inst = chi_instanton(geometry, geometry.c2(k));
    let monad = chi_monad(geometry, k)?;
    Ok(ChiCheck {
        geometry,
        k,
        c2: geometry.c2(k),
        identical: inst == monad,
        instanton: to_strings(&inst),
        monad: to_strings(&monad),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_integer(x: &BigRational) -> bool {
        x.is_integer()
    }

    #[test]
    fn quadric_values() {
        let o = chi_structure_sheaf(Geometry::Quadric).unwrap();
        assert_eq!(eval(&o, 0), q(1));
        assert_eq!(eval(&o, 1), q(5));
        assert_eq!(eval(&o, 2), q(14));
        assert_eq!(chi_bundle(Geometry::Quadric, BundleTag::Spinor, -1).unwrap(), q(0));
        assert_eq!(chi_bundle(Geometry::Quadric, BundleTag::Spinor, 0).unwrap(), q(0));
        assert_eq!(chi_bundle(Geometry::Quadric, BundleTag::Spinor, 1).unwrap(), q(4));
    }

    #[test]
    fn instanton_values_at_zero() {
        for k in 1..10 {
            let kk = k as i64;
            assert_eq!(eval(&chi_instanton(Geometry::Quadric, k), 0), q(1 - kk));
            assert_eq!(eval(&chi_instanton(Geometry::V5, k), 0), q(2 - kk));
            assert_eq!(eval(&chi_instanton(Geometry::V22, k + 7), 0), q(0));
        }
    }

    #[test]
    fn v5_values() {
        let o = chi_structure_sheaf(Geometry::V5).unwrap();
        // h⁰(𝒪_{V5}(1)) = 7, h⁰(𝒪(2)) = 23
        assert_eq!(eval(&o, 1), q(7));
        assert_eq!(eval(&o, 2), q(23));
        assert_eq!(chi_bundle(Geometry::V5, BundleTag::UDual, 0).unwrap(), q(5));
    }

    #[test]
    fn monad_matches_instanton() {
        for k in 2..=9 {
            assert!(chi_check(Geometry::Quadric, k).unwrap().identical, "quadric {k}");
        }
        for k in 2..=6 {
            assert!(chi_check(Geometry::V5, k).unwrap().identical, "v5 {k}");
        }
        assert!(chi_check(Geometry::V22, 1).is_err());
    }

    #[test]
    fn binomial_poly_matches_integers() {
        let p = binomial_poly(3, 3);
        assert_eq!(eval(&p, 2), q(10));
        assert_eq!(eval(&p, -3), q(0));
        assert_eq!(shift(&p, 1), binomial_poly(4, 3));
    }

    proptest! {
        #[test]
        fn serre_duality(t in -20i64..20) {
            for g in [Geometry::Quadric, Geometry::V5] {
                let o = chi_structure_sheaf(g).unwrap();
                let index = g.tag().index as i64;
                prop_assert_eq!(eval(&o, -index - t), -eval(&o, t));
            }
        }

        #[test]
        fn chi_values_are_integral(t in -30i64..30, k in 1usize..12) {
            for g in Geometry::ALL {
                prop_assert!(is_integer(&eval(&chi_instanton(g, g.c2(k)), t)));
            }
            prop_assert!(is_integer(&chi_bundle(Geometry::Quadric, BundleTag::Spinor, t).unwrap()));
            prop_assert!(is_integer(&chi_bundle(Geometry::V5, BundleTag::U, t).unwrap()));
        }
    }
}
