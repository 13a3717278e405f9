//! Numerical invariants of the three Fano threefolds and the monad
//! dimension table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Quadric,
    V5,
    V22,
}

/// Parity of the duality `D` on `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Skew,
}

/// Numerical data attached to a threefold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryTag {
    pub kind: Geometry,
    /// Fano index `i_X`.
    pub index: u32,
    /// `⌊i_X / 2⌋`.
    pub q: u32,
    /// `i_X mod 2`.
    pub r: u32,
    /// `H³`.
    pub degree: u32,
    /// Genus, `H³/2 + 1` for index one.
    pub genus: Option<u32>,
}

/// Dimensions of the spaces in the monad `I ⊗ 𝓔₁ → W ⊗ 𝓔₂ → I* ⊗ 𝓔₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadDims {
    pub dim_i: usize,
    pub dim_w: usize,
    pub dim_u: usize,
    /// Rank of the middle bundle `𝓔₂`.
    pub rank_e2: usize,
    /// Rank of the outer bundles `𝓔₁ ≅ 𝓔₃*`.
    pub rank_e3: usize,
}

impl MonadDims {
    /// `dim W · rk 𝓔₂ − dim I · (rk 𝓔₁ + rk 𝓔₃)`, the rank of the cohomology.
    pub fn cohomology_rank(&self) -> i64 {
        (self.dim_w * self.rank_e2) as i64 - (2 * self.dim_i * self.rank_e3) as i64
    }
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [Geometry::Quadric, Geometry::V5, Geometry::V22];

    pub fn tag(self) -> GeometryTag {
        let (index, degree, genus) = match self {
            Geometry::Quadric => (3, 2, None),
            Geometry::V5 => (2, 5, None),
            Geometry::V22 => (1, 22, Some(12)),
        };
        GeometryTag { kind: self, index, q: index / 2, r: index % 2, degree, genus }
    }

    /// Parity of the duality: `Dᵗ = (−1)^{r+1} D`.
    pub fn parity(self) -> Parity {
        if self.tag().r == 1 {
            Parity::Symmetric
        } else {
            Parity::Skew
        }
    }

    pub fn dim_u(self) -> usize {
        match self {
            Geometry::Quadric | Geometry::V22 => 4,
            Geometry::V5 => 5,
        }
    }

    /// Monad dimensions for parameter `k`. For the quadric and `V5`, `k` is
    /// the charge; for `V22` it is the net size, with `c₂ = k + 7`.
    pub fn dims(self, k: usize) -> MonadDims {
        match self {
            Geometry::Quadric => MonadDims {
                dim_i: k.saturating_sub(1),
                dim_w: k,
                dim_u: 4,
                rank_e2: 2,
                rank_e3: 1,
            },
            Geometry::V5 => MonadDims { dim_i: k, dim_w: 4 * k + 2, dim_u: 5, rank_e2: 1, rank_e3: 2 },
            Geometry::V22 => MonadDims { dim_i: k, dim_w: 3 * k + 1, dim_u: 4, rank_e2: 2, rank_e3: 3 },
        }
    }

    /// Second Chern class of the instanton for parameter `k`.
    pub fn c2(self, k: usize) -> usize {
        match self {
            Geometry::V22 => k + 7,
            _ => k,
        }
    }

    /// Expected dimension of the moduli component.
    pub fn expected_delta(self, k: usize) -> i64 {
        let k = k as i64;
        match self {
            Geometry::Quadric => 6 * k - 6,
            Geometry::V5 => 4 * k - 3,
            Geometry::V22 => {
                let c2 = k + 7;
                let g = self.tag().genus.unwrap() as i64;
                2 * c2 - g - 2
            }
        }
    }

    /// Range of `k` reachable by the exact samplers.
    pub fn sample_range(self) -> std::ops::RangeInclusive<usize> {
        match self {
            Geometry::Quadric => 2..=9,
            Geometry::V5 => 2..=4,
            Geometry::V22 => 1..=2,
        }
    }

    pub fn check_k(self, k: usize) -> Result<()> {
        let r = self.sample_range();
        if r.contains(&k) {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "k = {k} for {self}; supported range is {}..={}",
                r.start(),
                r.end()
            )))
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Quadric => "quadric",
            Geometry::V5 => "v5",
            Geometry::V22 => "v22",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quadric" | "q" => Ok(Geometry::Quadric),
            "v5" => Ok(Geometry::V5),
            "v22" => Ok(Geometry::V22),
            other => Err(Error::Unsupported(format!("unknown geometry {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_decomposition() {
        for g in Geometry::ALL {
            let t = g.tag();
            assert_eq!(t.index, 2 * t.q + t.r);
        }
        assert_eq!(Geometry::Quadric.parity(), Parity::Symmetric);
        assert_eq!(Geometry::V5.parity(), Parity::Skew);
        assert_eq!(Geometry::V22.parity(), Parity::Symmetric);
    }

    #[test]
    fn cohomology_rank_is_two() {
        for g in Geometry::ALL {
            for k in 1..20 {
                if g == Geometry::Quadric && k < 2 {
                    continue;
                }
                assert_eq!(g.dims(k).cohomology_rank(), 2, "{g} k={k}");
            }
        }
    }

    #[test]
    fn expected_deltas() {
        assert_eq!(Geometry::Quadric.expected_delta(2), 6);
        assert_eq!(Geometry::V5.expected_delta(2), 5);
        assert_eq!(Geometry::V22.expected_delta(1), 2);
        for k in 1..10 {
            assert_eq!(Geometry::V22.expected_delta(k), 2 * k as i64);
        }
    }

    #[test]
    fn parse_and_range() {
        assert_eq!("V22".parse::<Geometry>().unwrap(), Geometry::V22);
        assert!("p3".parse::<Geometry>().is_err());
        assert!(Geometry::V5.check_k(5).is_err());
        assert!(Geometry::Quadric.check_k(9).is_ok());
    }
}
