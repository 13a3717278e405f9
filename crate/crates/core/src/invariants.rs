//! The DD invariant of quadric monads, Wall's semistability test for nets
//! of quadrics, and the apolar quartic of a `V22` net.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::matrix::{self, Matrix};
use crate::poly::{self, MultiPoly};
use crate::tensor::{self, Duality, Net, SpinSplit, Tensor3};

/// The `C(k,2) × C(k,2)` matrix of `S²(φ_A)` restricted to `∧²W* ⊗ ⟨ω⟩`.
/// Rows are indexed by `S²I` (`i ≤ i'`), columns by `∧²W` (`w < w'`).
pub fn dd_matrix<F: Field>(
    f: &F,
    a: &Tensor3<F::Elem>,
    spin: &SpinSplit<F::Elem>,
) -> Matrix<F::Elem> {
    let om = &spin.omega_gram;
    let rows = tensor::sym2_pairs(a.dim_i());
    let cols = tensor::wedge2_pairs(a.dim_w());
    let form = |i: usize, w: usize, j: usize, v: usize| {
        // ω(a_i^w, a_j^v)
        let x: Vec<F::Elem> = (0..a.dim_u()).map(|u| a.get(i, w, u).clone()).collect();
        let y: Vec<F::Elem> = (0..a.dim_u()).map(|u| a.get(j, v, u).clone()).collect();
        matrix::bilinear(f, om, &x, &y)
    };
    Matrix::from_fn(rows.len(), cols.len(), |r, c| {
        let (i, j) = rows[r];
        let (w, v) = cols[c];
        if i == j {
            form(i, w, i, v)
        } else {
            f.add(&form(i, w, j, v), &form(j, w, i, v))
        }
    })
}

/// `DD(A) = det(M_A)`. Only vanishing is basis independent.
pub fn dd_invariant<F: Field>(
    f: &F,
    a: &Tensor3<F::Elem>,
    d: &Duality<F::Elem>,
    spin: &SpinSplit<F::Elem>,
) -> Result<F::Elem> {
    tensor::check_quadric_dims(a, d)?;
    let m = dd_matrix(f, a, spin);
    matrix::det(f, &m)
}

/// Outcome of the Wall test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum SemistabilityWitness {
    Semistable { field: u64, pairs_checked: usize },
    Unstable {
        field: u64,
        /// Rows span `I₁ ⊆ I*`.
        i1: Vec<Vec<u64>>,
        /// Rows span `I₂ ⊆ I*`.
        i2: Vec<Vec<u64>>,
    },
}

impl SemistabilityWitness {
    pub fn is_semistable(&self) -> bool {
        matches!(self, SemistabilityWitness::Semistable { .. })
    }
}

/// The `k × k` symmetric matrices `c[·][·][b]`, one per basis vector of `B`.
pub fn net_slices(net: &Net<u64>) -> Vec<Matrix<u64>> {
    let k = net.k();
    (0..net.dim_b())
        .map(|b| Matrix::from_fn(k, k, |i, j| net.coeffs()[i][j][b]))
        .collect()
}

/// Whether every quadric of the net vanishes on `I₁ × I₂`.
pub fn annihilates(f: &PrimeField, net: &Net<u64>, i1: &[Vec<u64>], i2: &[Vec<u64>]) -> bool {
    net_slices(net).iter().all(|c| {
        i1.iter()
            .all(|x| i2.iter().all(|y| matrix::bilinear(f, c, x, y) == 0))
    })
}

/// All subspaces of `F_q^n` of dimension `d`, as reduced row echelon bases.
pub fn subspaces(f: &PrimeField, n: usize, d: usize) -> Vec<Vec<Vec<u64>>> {
    let q = f.modulus();
    let mut out = Vec::new();
    for pivots in combinations(n, d) {
        // free entries: row r, column c > pivots[r], c not a pivot
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| {
                let pv = pivots.clone();
                (pivots[r] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let total = (q as usize).pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u64; n]; d];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for &(r, c) in &free {
                rows[r][c] = (code % q as usize) as u64;
                code /= q as usize;
            }
            out.push(rows);
        }
    }
    out
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    if n < d {
        return vec![];
    }
    let mut out = combinations(n - 1, d);
    for mut c in combinations(n - 1, d - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out.sort();
    out
}

/// Wall's criterion: the net is unstable iff some `I₁, I₂ ⊆ I*` with
/// `dim I₁ + dim I₂ > k` make `B → I₁ ⊗ I₂` zero. Full enumeration over
/// the net's field, which must be `F_2` or `F_3`.
pub fn wall_semistable(f: &PrimeField, net: &Net<u64>) -> Result<SemistabilityWitness> {
    let q = f.modulus();
    let k = net.k();
    let limit = match q {
        2 => 4,
        3 => 3,
        _ => return Err(Error::Unsupported(format!("Wall enumeration needs q in {{2, 3}}, got {q}"))),
    };
    if k > limit {
        return Err(Error::Unsupported(format!("k = {k} exceeds the enumeration limit {limit} over F_{q}")));
    }
    let all: Vec<Vec<Vec<Vec<u64>>>> = (0..=k).map(|d| subspaces(f, k, d)).collect();
    let mut checked = 0;
    for d1 in 1..=k {
        for d2 in (k + 1 - d1)..=k {
            for i1 in &all[d1] {
                for i2 in &all[d2] {
                    checked += 1;
                    if annihilates(f, net, i1, i2) {
                        return Ok(SemistabilityWitness::Unstable {
                            field: q,
                            i1: i1.clone(),
                            i2: i2.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(SemistabilityWitness::Semistable { field: q, pairs_checked: checked })
}

/// `det(x₁q₁ + x₂q₂ + x₃q₃)` for the Gram matrices `q_b` of `B*`.
pub fn apolar_quartic(f: &PrimeField, grams: &[Matrix<u64>]) -> Result<MultiPoly<u64>> {
    if grams.len() != 3 || grams.iter().any(|g| g.rows() != 4 || g.cols() != 4) {
        return Err(Error::Dimension("apolar quartic needs three 4x4 Gram matrices".into()));
    }
    let m = Matrix::from_fn(4, 4, |r, c| {
        let coeffs: Vec<u64> = grams.iter().map(|g| g[(r, c)]).collect();
        MultiPoly::linear(f, &coeffs)
    });
    let quartic = poly::poly_det(f, &m);
    if quartic.is_zero() {
        return Err(Error::Degenerate("every quadric of the net is singular".into()));
    }
    Ok(quartic)
}
