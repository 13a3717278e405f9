//! Tangent and orbit dimensions at sampled monads and nets, and the
//! resulting moduli dimension `δ = tangent − orbit`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::geometry::{Geometry, Parity};
use crate::matrix::{self, Matrix};
use crate::models::Model;
use crate::monads::{self, MonadData};
use crate::tensor::{self, binomial, Net, SpinSplit, Tensor3};

/// Samples tried per trial before it is reported as uncertified.
pub const CERTIFY_ATTEMPTS: usize = 10;

/// RNG for stream `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Jacobian of `project_condition` at `A`: rows follow the pairs `i < j`
/// and the five `V`-coordinates, columns the entries `(i, w, u)` of `A`.
pub fn quadric_jacobian(
    f: &PrimeField,
    spin: &SpinSplit<u64>,
    a: &Tensor3<u64>,
    d: &Matrix<u64>,
) -> Matrix<u64> {
    let (di, dw, du) = (a.dim_i(), a.dim_w(), a.dim_u());
    let row_len = dw * du;
    let pairs = tensor::wedge2_pairs(di);
    let mut jac = matrix::zeros(f, 5 * pairs.len(), di * row_len);
    let rows = a.rows();
    for (p, &(i, j)) in pairs.iter().enumerate() {
        // f(x, a_j) = −f(a_j, x) for symmetric D
        let wrt_i = matrix::neg(f, &tensor::pair_condition_matrix(f, spin, &rows[j], d));
        let wrt_j = tensor::pair_condition_matrix(f, spin, &rows[i], d);
        for r in 0..5 {
            for c in 0..row_len {
                jac[(5 * p + r, i * row_len + c)] = wrt_i[(r, c)];
                jac[(5 * p + r, j * row_len + c)] = wrt_j[(r, c)];
            }
        }
    }
    jac
}

/// Generic tangent dimension `4k(k−1) − 5·C(k−1, 2)`.
pub fn quadric_generic_tangent(k: usize) -> usize {
    4 * k * (k - 1) - 5 * binomial(k - 1, 2)
}

/// `dim GL(I) × O(W)` for the quadric.
pub fn quadric_group_dim(k: usize) -> usize {
    (k - 1) * (k - 1) + binomial(k, 2)
}

pub fn quadric_tangent_dim(m: &MonadData, spin: &SpinSplit<u64>) -> usize {
    let f = &m.field;
    let jac = quadric_jacobian(f, spin, &m.a, m.d.matrix());
    jac.cols() - matrix::rank(f, &jac)
}

/// Rank of `(ξ, η) ↦ −ξA + Aηᵗ` on `gl(I) ⊕ so(W, D)`.
pub fn quadric_orbit_dim(m: &MonadData) -> Result<usize> {
    let f = &m.field;
    let a = &m.a;
    let (di, dw, du) = (a.dim_i(), a.dim_w(), a.dim_u());
    let d_inv = matrix::inverse(f, m.d.matrix())?;
    let mut images: Vec<Vec<u64>> = Vec::new();
    for x in 0..di {
        for y in 0..di {
            // ξ = E_xy: (ξA)_i = δ_ix a_y
            let mut v = vec![0u64; di * dw * du];
            for w in 0..dw {
                for u in 0..du {
                    v[(x * dw + w) * du + u] = f.neg(a.get(y, w, u));
                }
            }
            images.push(v);
        }
    }
    for (p, q) in tensor::wedge2_pairs(dw) {
        let mut s = matrix::zeros(f, dw, dw);
        s[(p, q)] = f.one();
        s[(q, p)] = f.neg(&f.one());
        let eta = matrix::mul(f, &d_inv, &s);
        let mut v = vec![0u64; di * dw * du];
        for i in 0..di {
            for w in 0..dw {
                for u in 0..du {
                    let mut acc = 0u64;
                    for w2 in 0..dw {
                        acc = f.add(&acc, &f.mul(a.get(i, w2, u), &eta[(w, w2)]));
                    }
                    v[(i * dw + w) * du + u] = acc;
                }
            }
        }
        images.push(v);
    }
    Ok(matrix::rank(f, &Matrix::from_rows(&images)))
}

/// Number of independent conditions `ambient(v)|_{K×K} = 0`, `K` the
/// kernel of `ambient(net)`.
pub fn net_condition_count(geometry: Geometry, k: usize) -> usize {
    let corank = k * geometry.dim_u() - monads::target_rank(geometry, k);
    match geometry.parity() {
        Parity::Skew => binomial(corank, 2),
        Parity::Symmetric => binomial(corank + 1, 2),
    }
}

/// Dimension of the stratum tangent: nets `v` whose form vanishes on the
/// kernel of `ambient(net)`.
pub fn net_tangent_dim(f: &PrimeField, net: &Net<u64>) -> Result<usize> {
    let kern = matrix::kernel_basis(f, &net.ambient(f));
    let c = kern.cols();
    let pairs: Vec<(usize, usize)> = match net.geometry().parity() {
        Parity::Skew => tensor::wedge2_pairs(c),
        Parity::Symmetric => tensor::sym2_pairs(c),
    };
    let n = net.space_dim();
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(n);
    for idx in 0..n {
        let mut coords = vec![0u64; n];
        coords[idx] = 1;
        let v = Net::from_coordinates(f, net.geometry(), net.k(), net.grams().to_vec(), &coords)?;
        let restricted = matrix::mul(f, &matrix::mul(f, &kern.transpose(), &v.ambient(f)), &kern);
        cols.push(pairs.iter().map(|&(a, b)| restricted[(a, b)]).collect());
    }
    if pairs.is_empty() {
        return Ok(n);
    }
    let map = Matrix::from_rows(&cols).transpose();
    Ok(n - matrix::rank(f, &map))
}

/// Rank of `ξ ↦ ξc + cξᵗ` on `gl(I)`, in net coordinates.
pub fn net_orbit_dim(f: &PrimeField, net: &Net<u64>) -> Result<usize> {
    let k = net.k();
    let slices = crate::invariants::net_slices(net);
    let mut images = Vec::with_capacity(k * k);
    for x in 0..k {
        for y in 0..k {
            let mut xi = matrix::zeros(f, k, k);
            xi[(x, y)] = f.one();
            let coeffs: Vec<Vec<Vec<u64>>> = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            slices
                                .iter()
                                .map(|c| {
                                    let l = matrix::mul(f, &xi, c);
                                    f.add(&l[(i, j)], &l[(j, i)])
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            images.push(net.with_coeffs(coeffs).coordinates());
        }
    }
    Ok(matrix::rank(f, &Matrix::from_rows(&images)))
}

/// One δ trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaTrial {
    pub index: usize,
    pub tangent_dim: usize,
    pub orbit_dim: usize,
    pub delta: i64,
    pub certified: bool,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub geometry: Geometry,
    pub k: usize,
    pub c2: usize,
    pub prime: u64,
    pub seed: u64,
    pub expected_delta: i64,
    pub generic_tangent: usize,
    pub group_dim: usize,
    pub trials: Vec<DeltaTrial>,
    pub certified: usize,
    pub passed: bool,
}

/// Generic tangent dimension and group dimension for `(geometry, k)`.
pub fn generic_counts(geometry: Geometry, k: usize) -> (usize, usize) {
    match geometry {
        Geometry::Quadric => (quadric_generic_tangent(k), quadric_group_dim(k)),
        _ => {
            let net_dim = 3 * binomial(k + 1, 2);
            (net_dim - net_condition_count(geometry, k), k * k)
        }
    }
}

fn run_trial(
    geometry: Geometry,
    k: usize,
    model: &Model,
    spin: Option<&SpinSplit<u64>>,
    seed: u64,
    index: usize,
) -> Result<DeltaTrial> {
    let f = model.field();
    let mut rng = stream_rng(seed, index as u64 + 1);
    let (generic, group) = generic_counts(geometry, k);
    let mut last = None;
    for attempt in 1..=CERTIFY_ATTEMPTS {
        let (tangent, orbit) = match model {
            Model::Quadric(_) => {
                let m = monads::sample_quadric_monad(k, f, &mut rng)?;
                (quadric_tangent_dim(&m, spin.expect("quadric split")), quadric_orbit_dim(&m)?)
            }
            Model::V5(v5) => {
                let s = monads::sample_v5_net(k, v5, &mut rng)?;
                (net_tangent_dim(&f, &s.net)?, net_orbit_dim(&f, &s.net)?)
            }
            Model::V22(v22) => {
                let s = monads::sample_v22_net(k, v22, &mut rng)?;
                (net_tangent_dim(&f, &s.net)?, net_orbit_dim(&f, &s.net)?)
            }
        };
        let trial = DeltaTrial {
            index,
            tangent_dim: tangent,
            orbit_dim: orbit,
            delta: tangent as i64 - orbit as i64,
            certified: tangent == generic && orbit == group,
            samples: attempt,
        };
        if trial.certified {
            return Ok(trial);
        }
        last = Some(trial);
    }
    Ok(last.expect("at least one attempt"))
}

/// Samples `trials` independent points and reports `δ` at each. Stream 0
/// of the seed builds the model, trial `i` uses stream `i + 1`.
pub fn delta_check(
    geometry: Geometry,
    k: usize,
    trials: usize,
    field: PrimeField,
    seed: u64,
) -> Result<DeltaReport> {
    geometry.check_k(k)?;
    if trials == 0 {
        return Err(Error::Unsupported("delta_check needs at least one trial".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let model = Model::build(geometry, field, &mut rng)?;
    let spin = match &model {
        Model::Quadric(q) => Some(q.spin.clone()),
        _ => None,
    };
    let results: Vec<DeltaTrial> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(geometry, k, &model, spin.as_ref(), seed, i))
        .collect::<Result<_>>()?;
    let (generic_tangent, group_dim) = generic_counts(geometry, k);
    let expected = geometry.expected_delta(k);
    let certified = results.iter().filter(|t| t.certified).count();
    let passed = certified == trials && results.iter().all(|t| t.delta == expected);
    Ok(DeltaReport {
        geometry,
        k,
        c2: geometry.c2(k),
        prime: field.modulus(),
        seed,
        expected_delta: expected,
        generic_tangent,
        group_dim,
        trials: results,
        certified,
        passed,
    })
}
