//! Monads `I ⊗ 𝓔₁ → W ⊗ 𝓔₂ → I* ⊗ 𝓔₃` given by `(A, D)`: sampling,
//! conversion from nets, fiberwise validation and the group action.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::geometry::{Geometry, MonadDims, Parity};
use crate::invariants;
use crate::matrix::{self, Matrix};
use crate::models::{FiberData, Model, QuadricModel, V22Model, V5Model, XPoint};
use crate::tensor::{self, Duality, Net, SpinSplit, Tensor3};
use crate::univariate::UniPoly;

/// Resamples allowed to the quadric sampler.
pub const QUADRIC_ATTEMPTS: usize = 50;
/// Pencils tried by the net samplers.
pub const PENCIL_ATTEMPTS: usize = 100;

/// A monad `(A, D)` on one of the threefolds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadData {
    pub geometry: Geometry,
    pub k: usize,
    pub field: PrimeField,
    pub a: Tensor3<u64>,
    pub d: Duality<u64>,
}

impl MonadData {
    pub fn new(
        geometry: Geometry,
        k: usize,
        field: PrimeField,
        a: Tensor3<u64>,
        d: Duality<u64>,
    ) -> Result<Self> {
        let dims = geometry.dims(k);
        if (a.dim_i(), a.dim_w(), a.dim_u()) != (dims.dim_i, dims.dim_w, dims.dim_u) {
            return Err(Error::Dimension(format!(
                "{geometry} k={k} needs (dim I, dim W, dim U) = ({}, {}, {}), got ({}, {}, {})",
                dims.dim_i,
                dims.dim_w,
                dims.dim_u,
                a.dim_i(),
                a.dim_w(),
                a.dim_u()
            )));
        }
        if d.dim() != dims.dim_w {
            return Err(Error::Dimension("duality size differs from dim W".into()));
        }
        if d.parity() != geometry.parity() {
            return Err(Error::Dimension(format!("{geometry} needs a {:?} duality", geometry.parity())));
        }
        Ok(MonadData { geometry, k, field, a, d })
    }

    pub fn dims(&self) -> MonadDims {
        self.geometry.dims(self.k)
    }

    /// `A·D·Aᵗ` as a bilinear form on `I ⊗ U` (rows `i·dim U + u`).
    pub fn reassemble(&self) -> Matrix<u64> {
        let f = &self.field;
        let c = self.a.as_iu_by_w();
        matrix::mul(f, &matrix::mul(f, &c, self.d.matrix()), &c.transpose())
    }
}

/// Largest `k` for which the greedy sampler leaves every row free
/// directions beyond the span of the earlier rows.
pub const GREEDY_MAX_K: usize = 5;

/// Samples a point of `Q_k` with `DD ≠ 0`. Up to `GREEDY_MAX_K` row `a_i`
/// is drawn from the common kernel of the `5i` linear conditions pairing
/// it with the earlier rows; beyond that the monad comes from `k`
/// pairwise disjoint lines, moved by a random group element.
pub fn sample_quadric_monad<R: Rng + ?Sized>(
    k: usize,
    field: PrimeField,
    rng: &mut R,
) -> Result<MonadData> {
    Geometry::Quadric.check_k(k)?;
    let model = QuadricModel::new(field)?;
    let d = Duality::identity(&field, k);
    for _ in 0..QUADRIC_ATTEMPTS {
        let a = if k <= GREEDY_MAX_K {
            match greedy_rows(&field, &model.spin, k, &d, Vec::new(), true, rng) {
                Some(a) => a,
                None => continue,
            }
        } else {
            let lines = random_lines(&field, &model.spin, k, None, rng);
            let m = MonadData::new(Geometry::Quadric, k, field, lines_monad(&field, k, &lines, rng), d.clone())?;
            let (xi, eta) = random_group_element(&m, rng);
            group_act(&m, &xi, &eta)?.a
        };
        debug_assert!(tensor::project_condition(&field, &model.spin, &a, &d)?
            .iter()
            .all(|x| *x == 0));
        if invariants::dd_invariant(&field, &a, &d, &model.spin)? == 0 {
            continue;
        }
        return MonadData::new(Geometry::Quadric, k, field, a, d);
    }
    Err(Error::Exhausted { attempts: QUADRIC_ATTEMPTS, reason: format!("quadric sampler at k = {k}") })
}

/// `k` vectors of `U` with `ω(u_w, u_w') ≠ 0` for `w ≠ w'`, i.e. `k`
/// pairwise disjoint lines on the quadric. With `meeting = Some(P)` the
/// first two lie in the Lagrangian plane `P`, so those two lines meet.
fn random_lines<R: Rng + ?Sized>(
    f: &PrimeField,
    spin: &SpinSplit<u64>,
    k: usize,
    meeting: Option<&[Vec<u64>; 2]>,
    rng: &mut R,
) -> Vec<Vec<u64>> {
    let om = &spin.omega_gram;
    let mut out: Vec<Vec<u64>> = Vec::with_capacity(k);
    if let Some(p) = meeting {
        for _ in 0..2 {
            let (s, t) = (f.random_nonzero(rng), f.random(rng));
            out.push((0..4).map(|u| f.add(&f.mul(&s, &p[0][u]), &f.mul(&t, &p[1][u]))).collect());
        }
    }
    while out.len() < k {
        let u: Vec<u64> = (0..4).map(|_| f.random(rng)).collect();
        if out.iter().all(|v| matrix::bilinear(f, om, v, &u) != 0) {
            out.push(u);
        }
    }
    out
}

/// The monad `a_i^w = c_{iw} u_w` of the lines `u_w`, with a random
/// `(k−1) × k` matrix `c` whose maximal minors are nonzero.
fn lines_monad<R: Rng + ?Sized>(
    f: &PrimeField,
    k: usize,
    lines: &[Vec<u64>],
    rng: &mut R,
) -> Tensor3<u64> {
    let c = loop {
        let c = matrix::random(f, k - 1, k, rng);
        let all_minors = (0..k).all(|skip| {
            let cols: Vec<usize> = (0..k).filter(|w| *w != skip).collect();
            matrix::det(f, &c.select_cols(&cols)).map(|x| x != 0).unwrap_or(false)
        });
        if all_minors {
            break c;
        }
    };
    Tensor3::from_fn(k - 1, k, 4, |i, w, u| f.mul(&c[(i, w)], &lines[w][u]))
}

/// Dimension of the solution space for row `i` at a generic sample.
pub fn greedy_expected_dim(k: usize, i: usize) -> i64 {
    4 * k as i64 - 5 * i as i64
}

/// Fills the rows after `prefix`. With `strict`, a row whose solution
/// space is not of the generic dimension aborts the draw.
fn greedy_rows<R: Rng + ?Sized>(
    f: &PrimeField,
    spin: &SpinSplit<u64>,
    k: usize,
    d: &Duality<u64>,
    prefix: Vec<Matrix<u64>>,
    strict: bool,
    rng: &mut R,
) -> Option<Tensor3<u64>> {
    let mut rows = prefix;
    let n = 4 * k;
    while rows.len() < k - 1 {
        let i = rows.len();
        let sol = if i == 0 {
            matrix::identity(f, n)
        } else {
            let cond = rows
                .iter()
                .map(|aj| tensor::pair_condition_matrix(f, spin, aj, d.matrix()))
                .reduce(|acc, m| acc.vstack(&m))
                .expect("nonempty");
            matrix::kernel_basis(f, &cond)
        };
        if strict && sol.cols() as i64 != greedy_expected_dim(k, i) {
            return None;
        }
        if sol.cols() == 0 {
            return None;
        }
        let c: Vec<u64> = (0..sol.cols()).map(|_| f.random(rng)).collect();
        rows.push(Matrix::new(k, 4, matrix::mul_vec(f, &sol, &c)));
    }
    Some(Tensor3::from_rows(&rows))
}

/// A point `P` and a monad in `Q_k` with `A_P` not surjective. Within
/// greedy reach the first row lies in `W ⊗ P`; beyond it two of the lines
/// meet in `P`.
pub fn sample_degenerate_quadric_monad<R: Rng + ?Sized>(
    k: usize,
    field: PrimeField,
    rng: &mut R,
) -> Result<(MonadData, XPoint)> {
    Geometry::Quadric.check_k(k)?;
    let model = QuadricModel::new(field)?;
    let d = Duality::identity(&field, k);
    for _ in 0..QUADRIC_ATTEMPTS {
        let x = model.sample_point(rng);
        let XPoint::Quadric { p } = &x else { unreachable!() };
        let a = if k <= GREEDY_MAX_K {
            let mut a0 = matrix::zeros(&field, k, 4);
            for w in 0..k {
                let (s, t) = (field.random(rng), field.random(rng));
                for u in 0..4 {
                    a0[(w, u)] = field.add(&field.mul(&s, &p[0][u]), &field.mul(&t, &p[1][u]));
                }
            }
            match greedy_rows(&field, &model.spin, k, &d, vec![a0], false, rng) {
                Some(a) => a,
                None => continue,
            }
        } else {
            let lines = random_lines(&field, &model.spin, k, Some(p), rng);
            lines_monad(&field, k, &lines, rng)
        };
        return Ok((MonadData::new(Geometry::Quadric, k, field, a, d)?, x));
    }
    Err(Error::Exhausted { attempts: QUADRIC_ATTEMPTS, reason: "degenerate quadric sampler".into() })
}

/// A sampled net together with the root counts of rejected pencils.
#[derive(Clone, Debug)]
pub struct NetSample {
    pub net: Net<u64>,
    pub rejected_pencils: Vec<usize>,
}

/// Target rank of `ambient(net)`: `dim W` of the monad.
pub fn target_rank(geometry: Geometry, k: usize) -> usize {
    geometry.dims(k).dim_w
}

/// A net on `V5` whose ambient skew form has rank `4k + 2`.
pub fn sample_v5_net<R: Rng + ?Sized>(
    k: usize,
    model: &V5Model,
    rng: &mut R,
) -> Result<NetSample> {
    Geometry::V5.check_k(k)?;
    sample_net(Geometry::V5, k, &model.field, &model.grams, rng)
}

/// A net on `V22` whose ambient symmetric form has rank `3k + 1`.
pub fn sample_v22_net<R: Rng + ?Sized>(
    k: usize,
    model: &V22Model,
    rng: &mut R,
) -> Result<NetSample> {
    Geometry::V22.check_k(k)?;
    sample_net(Geometry::V22, k, &model.field, &model.grams, rng)
}

fn sample_net<R: Rng + ?Sized>(
    geometry: Geometry,
    k: usize,
    f: &PrimeField,
    grams: &[Matrix<u64>],
    rng: &mut R,
) -> Result<NetSample> {
    let target = target_rank(geometry, k);
    let full = k * geometry.dim_u();
    let mut rejected = Vec::new();
    if target == full || (geometry == Geometry::V5 && full % 2 == 1 && target == full - 1) {
        // the generic net already has the target rank
        for _ in 0..PENCIL_ATTEMPTS {
            let net = tensor::random_net(f, geometry, k, grams, rng)?;
            if matrix::rank(f, &net.ambient(f)) == target {
                return Ok(NetSample { net, rejected_pencils: rejected });
            }
            rejected.push(0);
        }
    } else {
        // corank-one stratum: a root of the pencil's determinant or pfaffian
        for _ in 0..PENCIL_ATTEMPTS {
            let n0 = tensor::random_net(f, geometry, k, grams, rng)?;
            let n1 = tensor::random_net(f, geometry, k, grams, rng)?;
            let eval = |t: u64| -> u64 {
                let m = n0.add_scaled(f, &t, &n1).ambient(f);
                match geometry {
                    Geometry::V5 => matrix::pfaffian(f, &m).expect("skew"),
                    _ => matrix::det(f, &m).expect("square"),
                }
            };
            let degree = match geometry {
                Geometry::V5 => full / 2,
                _ => full,
            };
            let roots = pencil_roots(f, degree, eval, rng);
            let hit = roots.iter().find_map(|t| {
                let net = n0.add_scaled(f, t, &n1);
                (matrix::rank(f, &net.ambient(f)) == target).then_some(net)
            });
            match hit {
                Some(net) => return Ok(NetSample { net, rejected_pencils: rejected }),
                None => rejected.push(roots.len()),
            }
        }
    }
    Err(Error::Exhausted {
        attempts: PENCIL_ATTEMPTS,
        reason: format!("no {geometry} net of rank {target} at k = {k}; root counts {rejected:?}"),
    })
}

/// Roots in `F_p` of a polynomial of degree at most `degree` given by
/// evaluation. Small fields are scanned directly.
pub fn pencil_roots<R: Rng + ?Sized>(
    f: &PrimeField,
    degree: usize,
    eval: impl Fn(u64) -> u64,
    rng: &mut R,
) -> Vec<u64> {
    if f.modulus() <= degree as u64 + 1 {
        return (0..f.modulus()).filter(|t| eval(*t) == 0).collect();
    }
    let xs: Vec<u64> = (0..=degree as u64).collect();
    let ys: Vec<u64> = xs.iter().map(|t| eval(*t)).collect();
    let poly = UniPoly::interpolate(f, &xs, &ys);
    if poly.is_zero() {
        return Vec::new();
    }
    poly.roots(f, rng)
}

/// Factors `ambient(net) = C·G·Cᵗ` with `C` a basis of the column space
/// and returns `A = Cᵗ`, `D = G`.
pub fn net_to_monad(f: &PrimeField, net: &Net<u64>) -> Result<MonadData> {
    let geometry = net.geometry();
    let k = net.k();
    let target = target_rank(geometry, k);
    let m = net.ambient(f);
    let ech = matrix::echelon(f, &m);
    if ech.rank() != target {
        return Err(Error::RankMismatch { expected: target, found: ech.rank() });
    }
    let p = ech.pivots;
    let c = m.select_cols(&p);
    let g = matrix::inverse(f, &m.select(&p, &p).transpose())?;
    let parity = geometry.parity();
    let d = Duality::new(f, g, parity)?;
    let du = net.dim_u();
    let a = Tensor3::from_fn(k, target, du, |i, w, u| c[(i * du + u, w)]);
    let monad = MonadData::new(geometry, k, *f, a, d)?;
    if monad.reassemble() != m {
        return Err(Error::Degenerate("reassembly does not reproduce the net".into()));
    }
    Ok(monad)
}

/// Fiber matrix `A_x`: `(dim I · rk 𝓔₃) × (dim W · rk 𝓔₂)`.
pub fn fiber_matrix(f: &PrimeField, a: &Tensor3<u64>, fd: &FiberData) -> Matrix<u64> {
    let (r3, r2) = (fd.rank_e3, fd.rank_e2);
    let mut m = matrix::zeros(f, a.dim_i() * r3, a.dim_w() * r2);
    for i in 0..a.dim_i() {
        for w in 0..a.dim_w() {
            for u in 0..a.dim_u() {
                let c = *a.get(i, w, u);
                if c == 0 {
                    continue;
                }
                let ev = &fd.ev[u];
                for r in 0..r3 {
                    for s in 0..r2 {
                        let idx = (i * r3 + r, w * r2 + s);
                        m[idx] = f.add(&m[idx], &f.mul(&c, &ev[(r, s)]));
                    }
                }
            }
        }
    }
    m
}

/// `D ⊗ J`.
pub fn kron(f: &PrimeField, x: &Matrix<u64>, y: &Matrix<u64>) -> Matrix<u64> {
    Matrix::from_fn(x.rows() * y.rows(), x.cols() * y.cols(), |r, c| {
        f.mul(&x[(r / y.rows(), c / y.cols())], &y[(r % y.rows(), c % y.cols())])
    })
}

/// Fiber checks at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCheck {
    pub composite_zero: bool,
    pub rank_a: usize,
    pub rank_dat: usize,
    pub expected_rank: usize,
    pub cohomology: i64,
}

impl PointCheck {
    pub fn passed(&self) -> bool {
        self.composite_zero
            && self.rank_a == self.expected_rank
            && self.rank_dat == self.expected_rank
            && self.cohomology == 2
    }
}

pub fn check_point(m: &MonadData, fd: &FiberData) -> PointCheck {
    let f = &m.field;
    let ax = fiber_matrix(f, &m.a, fd);
    let dat = matrix::mul(f, &kron(f, m.d.matrix(), &fd.j), &ax.transpose());
    let comp = matrix::mul(f, &ax, &dat);
    let rank_a = matrix::rank(f, &ax);
    let rank_dat = matrix::rank(f, &dat);
    PointCheck {
        composite_zero: matrix::is_zero(f, &comp),
        rank_a,
        rank_dat,
        expected_rank: m.a.dim_i() * fd.rank_e3,
        cohomology: (ax.cols() - rank_a) as i64 - rank_dat as i64,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointFailure {
    pub index: usize,
    pub check: PointCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub geometry: Geometry,
    pub k: usize,
    pub dim_i: usize,
    pub dim_w: usize,
    pub dims_match: bool,
    pub composite_zero: bool,
    pub points_checked: usize,
    pub expected_cohomology: i64,
    pub failures: Vec<PointFailure>,
    pub passed: bool,
}

/// Whether `A·D·Aᵗ` lies in the structural subspace: `∧²I ⊗ V` vanishes
/// for the quadric, and for nets every `U`-block is in `B` and the block
/// matrix is symmetric in `I`.
pub fn structural_condition(m: &MonadData, model: &Model) -> Result<bool> {
    let f = &m.field;
    match model {
        Model::Quadric(q) => {
            Ok(tensor::project_condition(f, &q.spin, &m.a, &m.d)?.iter().all(|x| *x == 0))
        }
        Model::V5(_) | Model::V22(_) => {
            let full = m.reassemble();
            let du = m.a.dim_u();
            let k = m.a.dim_i();
            let span = Matrix::from_rows(
                &model.grams().iter().map(|g| g.data().to_vec()).collect::<Vec<_>>(),
            );
            let base = matrix::rank(f, &span);
            for i in 0..k {
                for j in 0..k {
                    let rows: Vec<usize> = (i * du..(i + 1) * du).collect();
                    let cols: Vec<usize> = (j * du..(j + 1) * du).collect();
                    let blk = full.select(&rows, &cols);
                    let blk_t = full.select(&cols, &rows);
                    let sym_ok = match m.geometry.parity() {
                        Parity::Skew => blk_t == matrix::neg(f, &blk.transpose()),
                        Parity::Symmetric => blk_t == blk.transpose(),
                    };
                    let block_ji: Matrix<u64> = full.select(
                        &(j * du..(j + 1) * du).collect::<Vec<_>>(),
                        &(i * du..(i + 1) * du).collect::<Vec<_>>(),
                    );
                    let in_b = matrix::rank(
                        f,
                        &span.vstack(&Matrix::new(1, du * du, blk.data().to_vec())),
                    ) == base;
                    if !(sym_ok && in_b && block_ji == blk) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Structural condition plus fiber checks at `npoints` sampled points.
pub fn validate_monad<R: Rng + ?Sized>(
    m: &MonadData,
    model: &Model,
    npoints: usize,
    rng: &mut R,
) -> Result<ValidationReport> {
    let mut points = Vec::with_capacity(npoints);
    for _ in 0..npoints {
        points.push(model.sample_point(rng)?);
    }
    validate_at(m, model, &points)
}

/// Validation at the given points.
pub fn validate_at(m: &MonadData, model: &Model, points: &[XPoint]) -> Result<ValidationReport> {
    if model.geometry() != m.geometry {
        return Err(Error::Dimension("model and monad live on different threefolds".into()));
    }
    let dims = m.dims();
    let dims_match = (m.a.dim_i(), m.a.dim_w()) == (dims.dim_i, dims.dim_w);
    let composite_zero = structural_condition(m, model)?;
    let mut failures = Vec::new();
    for (index, x) in points.iter().enumerate() {
        let fd = model.fiber_eval(x)?;
        let check = check_point(m, &fd);
        if !check.passed() {
            failures.push(PointFailure { index, check });
        }
    }
    Ok(ValidationReport {
        geometry: m.geometry,
        k: m.k,
        dim_i: m.a.dim_i(),
        dim_w: m.a.dim_w(),
        dims_match,
        composite_zero,
        points_checked: points.len(),
        expected_cohomology: dims.cohomology_rank(),
        passed: dims_match && composite_zero && failures.is_empty(),
        failures,
    })
}

/// `(ξ, η)·A = ξ⁻¹ A ηᵗ`, for `η` preserving `D`.
pub fn group_act(m: &MonadData, xi: &Matrix<u64>, eta: &Matrix<u64>) -> Result<MonadData> {
    let f = &m.field;
    let d = m.d.matrix();
    if eta.rows() != d.rows() || eta.cols() != d.cols() {
        return Err(Error::Dimension("eta must act on W".into()));
    }
    if matrix::mul(f, &matrix::mul(f, &eta.transpose(), d), eta) != *d {
        return Err(Error::NotInGroup);
    }
    let xi_inv = matrix::inverse(f, xi)?;
    let (di, dw, du) = (m.a.dim_i(), m.a.dim_w(), m.a.dim_u());
    if xi.rows() != di {
        return Err(Error::Dimension("xi must act on I".into()));
    }
    let mut a = Tensor3::from_fn(di, dw, du, |_, _, _| 0u64);
    for u in 0..du {
        let slice = Matrix::from_fn(di, dw, |i, w| *m.a.get(i, w, u));
        let out = matrix::mul(f, &matrix::mul(f, &xi_inv, &slice), &eta.transpose());
        for i in 0..di {
            for w in 0..dw {
                a.set(i, w, u, out[(i, w)]);
            }
        }
    }
    MonadData::new(m.geometry, m.k, m.field, a, m.d.clone())
}

/// A random element of the isometry group of `D`: a product of
/// reflections (symmetric `D`) or transvections (skew `D`).
pub fn random_isometry<R: Rng + ?Sized>(f: &PrimeField, d: &Duality<u64>, rng: &mut R) -> Matrix<u64> {
    let n = d.dim();
    let dm = d.matrix();
    let mut g = matrix::identity(f, n);
    let factors = 2 * n + 1;
    let mut made = 0;
    while made < factors {
        let v: Vec<u64> = (0..n).map(|_| f.random(rng)).collect();
        let vd = matrix::mul_vec(f, &dm.transpose(), &v); // vᵗ D as a vector
        let outer = Matrix::from_fn(n, n, |r, c| f.mul(&v[r], &vd[c]));
        let step = match d.parity() {
            Parity::Symmetric => {
                let q = matrix::dot(f, &v, &vd);
                let Some(inv) = f.inv(&q) else { continue };
                let s = f.neg(&f.mul(&2, &inv));
                matrix::add(f, &matrix::identity(f, n), &matrix::scale(f, &s, &outer))
            }
            Parity::Skew => {
                let c = f.random_nonzero(rng);
                matrix::add(f, &matrix::identity(f, n), &matrix::scale(f, &c, &outer))
            }
        };
        g = matrix::mul(f, &g, &step);
        made += 1;
    }
    g
}

/// A random element `(ξ, η)` of `GL(I) × G(W, D)`.
pub fn random_group_element<R: Rng + ?Sized>(
    m: &MonadData,
    rng: &mut R,
) -> (Matrix<u64>, Matrix<u64>) {
    let xi = matrix::random_invertible(&m.field, m.a.dim_i(), rng);
    let eta = random_isometry(&m.field, &m.d, rng);
    (xi, eta)
}
