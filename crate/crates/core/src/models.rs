//! Coordinate models of the quadric threefold, `V5` and `V22`, with point
//! sampling over `F_p` and the fiber data of the monad bundles.
//!
//! * Quadric: points are ω-isotropic 2-planes `P ⊂ U`, `dim U = 4`.
//! * `V5`: points are 2-planes `Λ ⊂ U*`, `dim U = 5`, on which the three
//!   2-forms spanning `B ⊂ ∧²U` vanish.
//! * `V22`: points are twisted cubics `T = g·T₀` whose quadric ideal is
//!   orthogonal to the net `B* ⊂ S²U`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::geometry::Geometry;
use crate::matrix::{self, Matrix};
use crate::tensor::{self, SpinSplit};
use crate::univariate::UniPoly;

/// Attempts allowed to point samplers before they give up.
pub const POINT_ATTEMPTS: usize = 100;

/// A point of one of the threefolds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XPoint {
    /// Isotropic plane spanned by `p[0], p[1]`.
    Quadric { p: [Vec<u64>; 2] },
    /// Plane `Λ ⊂ U*` spanned by `lambda[0], lambda[1]`.
    V5 { lambda: [Vec<u64>; 2] },
    /// Twisted cubic `g·T₀`; `h = g⁻¹`; `ideal` holds the Gram matrices of
    /// its three quadrics.
    V22 { g: Matrix<u64>, h: Matrix<u64>, ideal: Vec<Matrix<u64>> },
}

impl XPoint {
    pub fn geometry(&self) -> Geometry {
        match self {
            XPoint::Quadric { .. } => Geometry::Quadric,
            XPoint::V5 { .. } => Geometry::V5,
            XPoint::V22 { .. } => Geometry::V22,
        }
    }
}

/// Fiber data at a point: for each basis vector `e_u` of `U`, the matrix of
/// the induced map `𝓔₂ → 𝓔₃` (`rank_e3 × rank_e2`), and the form `J` on
/// `𝓔₂` through which the duality acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberData {
    pub rank_e2: usize,
    pub rank_e3: usize,
    pub ev: Vec<Matrix<u64>>,
    pub j: Matrix<u64>,
}

impl FiberData {
    /// `(dim U · rank_e3) × rank_e2` stacking of the evaluation maps.
    pub fn stacked(&self) -> Matrix<u64> {
        let mut rows = Vec::new();
        for m in &self.ev {
            for r in 0..m.rows() {
                rows.push(m.row(r).to_vec());
            }
        }
        Matrix::from_rows(&rows)
    }
}

fn symplectic2(f: &PrimeField) -> Matrix<u64> {
    Matrix::new(2, 2, vec![0, 1, f.neg(&1), 0])
}

fn random_vec<R: Rng + ?Sized>(f: &PrimeField, n: usize, rng: &mut R) -> Vec<u64> {
    (0..n).map(|_| f.random(rng)).collect()
}

fn independent(f: &PrimeField, a: &[u64], b: &[u64]) -> bool {
    matrix::rank(f, &Matrix::from_rows(&[a.to_vec(), b.to_vec()])) == 2
}

#[derive(Clone, Debug)]
pub struct QuadricModel {
    pub field: PrimeField,
    pub spin: SpinSplit<u64>,
}

impl QuadricModel {
    pub fn new(field: PrimeField) -> Result<Self> {
        field.require_odd()?;
        Ok(QuadricModel { field, spin: tensor::build_spin_split(&field)? })
    }

    /// Random `p₁`, then `p₂` in `ω(p₁, ·)^⊥` independent of `p₁`.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> XPoint {
        let f = &self.field;
        loop {
            let p1 = random_vec(f, 4, rng);
            if p1.iter().all(|x| *x == 0) {
                continue;
            }
            if let Some(p2) = self.complete_plane(&p1, rng) {
                return XPoint::Quadric { p: [p1, p2] };
            }
        }
    }

    /// A random vector of `ω(p₁, ·)^⊥` independent of `p₁`.
    pub fn complete_plane<R: Rng + ?Sized>(&self, p1: &[u64], rng: &mut R) -> Option<Vec<u64>> {
        let f = &self.field;
        let row = matrix::mul_vec(f, &self.spin.omega_gram.transpose(), p1);
        let ker = matrix::kernel_basis(f, &Matrix::new(1, 4, row));
        for _ in 0..POINT_ATTEMPTS {
            let c = random_vec(f, ker.cols(), rng);
            let p2 = matrix::mul_vec(f, &ker, &c);
            if independent(f, p1, &p2) {
                return Some(p2);
            }
        }
        None
    }

    pub fn contains(&self, x: &XPoint) -> bool {
        match x {
            XPoint::Quadric { p } => {
                independent(&self.field, &p[0], &p[1])
                    && self.spin.omega_form(&self.field, &p[0], &p[1]) == 0
            }
            _ => false,
        }
    }

    /// Plücker coordinates of the plane in `∧²U`.
    pub fn plucker(&self, x: &XPoint) -> Result<Vec<u64>> {
        let XPoint::Quadric { p } = x else {
            return Err(Error::Dimension("not a quadric point".into()));
        };
        let f = &self.field;
        let c = Matrix::from_fn(4, 4, |a, b| f.mul(&p[0][a], &p[1][b]));
        Ok(tensor::alternate(f, &c))
    }

    /// `e_u ↦ [ω(e_u, p₁), ω(e_u, p₂)]`: sections of `𝒮*` restricted to `P`.
    pub fn fiber_eval(&self, x: &XPoint) -> Result<FiberData> {
        let XPoint::Quadric { p } = x else {
            return Err(Error::Dimension("not a quadric point".into()));
        };
        let f = &self.field;
        let om = &self.spin.omega_gram;
        let c0 = matrix::mul_vec(f, om, &p[0]);
        let c1 = matrix::mul_vec(f, om, &p[1]);
        let ev = (0..4).map(|u| Matrix::new(1, 2, vec![c0[u], c1[u]])).collect();
        Ok(FiberData { rank_e2: 2, rank_e3: 1, ev, j: symplectic2(f) })
    }
}

#[derive(Clone, Debug)]
pub struct V5Model {
    pub field: PrimeField,
    /// Three skew `5 × 5` Gram matrices spanning `B ⊂ ∧²U`.
    pub grams: Vec<Matrix<u64>>,
}

impl V5Model {
    pub fn new(field: PrimeField, grams: Vec<Matrix<u64>>) -> Result<Self> {
        field.require_odd()?;
        if grams.len() != 3 {
            return Err(Error::Dimension(format!("B must have dimension 3, got {}", grams.len())));
        }
        for g in &grams {
            if g.rows() != 5 || g.cols() != 5 {
                return Err(Error::Dimension("V5 Gram matrices are 5x5".into()));
            }
            if !matrix::is_skew(&field, g) {
                return Err(Error::NotSkew);
            }
        }
        let span = Matrix::from_rows(&grams.iter().map(|g| g.data().to_vec()).collect::<Vec<_>>());
        if matrix::rank(&field, &span) != 3 {
            return Err(Error::Degenerate("B is not three-dimensional".into()));
        }
        Ok(V5Model { field, grams })
    }

    /// Random `B`, accepted once a point can be sampled with a solution
    /// space of the expected dimension two.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Result<Self> {
        for _ in 0..POINT_ATTEMPTS {
            let grams = (0..3)
                .map(|_| tensor::wedge2_gram(&field, 5, &random_vec(&field, 10, rng)))
                .collect();
            let Ok(model) = V5Model::new(field, grams) else { continue };
            let l1 = random_vec(&field, 5, rng);
            if model.condition_matrix(&l1).cols() == 5
                && matrix::rank(&field, &model.condition_matrix(&l1)) == 3
                && model.sample_point(rng).is_ok()
            {
                return Ok(model);
            }
        }
        Err(Error::Exhausted { attempts: POINT_ATTEMPTS, reason: "no generic V5 net".into() })
    }

    /// The `3 × 5` matrix of `λ₂ ↦ (λ₁ᵗ G_b λ₂)_b`.
    pub fn condition_matrix(&self, l1: &[u64]) -> Matrix<u64> {
        let f = &self.field;
        let rows: Vec<Vec<u64>> = self
            .grams
            .iter()
            .map(|g| matrix::mul_vec(f, &g.transpose(), l1))
            .collect();
        Matrix::from_rows(&rows)
    }

    /// One draw of the sampler; `None` on a degenerate draw.
    pub fn try_sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<XPoint> {
        let f = &self.field;
        let l1 = random_vec(f, 5, rng);
        if l1.iter().all(|x| *x == 0) {
            return None;
        }
        let ker = matrix::kernel_basis(f, &self.condition_matrix(&l1));
        if ker.cols() < 2 {
            return None;
        }
        let c = random_vec(f, ker.cols(), rng);
        let l2 = matrix::mul_vec(f, &ker, &c);
        independent(f, &l1, &l2).then_some(XPoint::V5 { lambda: [l1, l2] })
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<XPoint> {
        for _ in 0..POINT_ATTEMPTS {
            if let Some(x) = self.try_sample_point(rng) {
                return Ok(x);
            }
        }
        Err(Error::Exhausted { attempts: POINT_ATTEMPTS, reason: "degenerate B".into() })
    }

    pub fn contains(&self, x: &XPoint) -> bool {
        match x {
            XPoint::V5 { lambda } => {
                independent(&self.field, &lambda[0], &lambda[1])
                    && self
                        .grams
                        .iter()
                        .all(|g| matrix::bilinear(&self.field, g, &lambda[0], &lambda[1]) == 0)
            }
            _ => false,
        }
    }

    /// `e_u ↦ [λ₁(e_u); λ₂(e_u)]`.
    pub fn fiber_eval(&self, x: &XPoint) -> Result<FiberData> {
        let XPoint::V5 { lambda } = x else {
            return Err(Error::Dimension("not a V5 point".into()));
        };
        let ev = (0..5)
            .map(|u| Matrix::new(2, 1, vec![lambda[0][u], lambda[1][u]]))
            .collect();
        Ok(FiberData { rank_e2: 1, rank_e3: 2, ev, j: Matrix::new(1, 1, vec![1]) })
    }
}

/// Gram matrices of `xz − y²`, `yw − z²`, `xw − yz`, the ideal of the
/// standard twisted cubic `(s³, s²t, st², t³)`.
pub fn standard_cubic_ideal(f: &PrimeField) -> Vec<Matrix<u64>> {
    let mono = |a: usize, b: usize| tensor::sym2_index(4, a.min(b), a.max(b));
    let form = |plus: (usize, usize), minus: (usize, usize)| {
        let mut x = vec![0u64; 10];
        x[mono(plus.0, plus.1)] = 1;
        x[mono(minus.0, minus.1)] = f.neg(&1);
        tensor::sym2_gram(f, 4, &x)
    };
    vec![form((0, 2), (1, 1)), form((1, 3), (2, 2)), form((0, 3), (1, 2))]
}

/// Quadrics vanishing at the given points of `P³`, as Gram matrices.
pub fn quadric_ideal_by_evaluation(f: &PrimeField, points: &[Vec<u64>]) -> Vec<Matrix<u64>> {
    let pairs = tensor::sym2_pairs(4);
    let rows: Vec<Vec<u64>> = points
        .iter()
        .map(|p| pairs.iter().map(|&(a, b)| f.mul(&p[a], &p[b])).collect())
        .collect();
    let ker = matrix::kernel_basis(f, &Matrix::from_rows(&rows));
    (0..ker.cols()).map(|c| tensor::sym2_gram(f, 4, &ker.col(c))).collect()
}

/// The point `(s³, s²t, st², t³)` of the standard curve.
pub fn standard_cubic_point(f: &PrimeField, s: u64, t: u64) -> Vec<u64> {
    vec![f.pow(&s, 3), f.mul(&f.mul(&s, &s), &t), f.mul(&s, &f.mul(&t, &t)), f.pow(&t, 3)]
}

/// The cubic `g·T₀`. Its ideal is `{hᵗ F h : F ∈ I(T₀)}` with `h = g⁻¹`.
pub fn twisted_cubic(f: &PrimeField, g: Matrix<u64>) -> Result<XPoint> {
    let h = matrix::inverse(f, &g)?;
    let ideal = standard_cubic_ideal(f)
        .iter()
        .map(|q| matrix::mul(f, &matrix::mul(f, &h.transpose(), q), &h))
        .collect();
    Ok(XPoint::V22 { g, h, ideal })
}

#[derive(Clone, Debug)]
pub struct V22Model {
    pub field: PrimeField,
    /// Three symmetric `4 × 4` Gram matrices spanning `B* ⊂ S²U`.
    pub grams: Vec<Matrix<u64>>,
    /// Seven Gram matrices spanning the annihilator `V ⊂ S²U*` of `B*`.
    pub annihilator: Vec<Matrix<u64>>,
    /// Cubics the model was built from.
    pub seeded: Vec<XPoint>,
}

impl V22Model {
    pub fn new(field: PrimeField, grams: Vec<Matrix<u64>>, seeded: Vec<XPoint>) -> Result<Self> {
        field.require_odd()?;
        if grams.len() != 3 {
            return Err(Error::Dimension(format!("B* must have dimension 3, got {}", grams.len())));
        }
        for g in &grams {
            if g.rows() != 4 || g.cols() != 4 {
                return Err(Error::Dimension("V22 Gram matrices are 4x4".into()));
            }
            if !matrix::is_symmetric(&field, g) {
                return Err(Error::NotSymmetric);
            }
        }
        let annihilator = annihilator(&field, &grams);
        if annihilator.len() != 7 {
            return Err(Error::Degenerate(format!(
                "annihilator of B* has dimension {}",
                annihilator.len()
            )));
        }
        let model = V22Model { field, grams, annihilator, seeded };
        if !model.seeded.iter().all(|x| model.contains(x)) {
            return Err(Error::Degenerate("seeded cubic does not annihilate B*".into()));
        }
        Ok(model)
    }

    /// `B*` is a random 3-dimensional subspace of `(Q_{T₀} + Q_{T₁})^⊥`
    /// for the standard cubic `T₀` and a random `T₁ = g·T₀`.
    pub fn build<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Result<Self> {
        field.require_odd()?;
        let f = &field;
        for _ in 0..POINT_ATTEMPTS {
            let t0 = twisted_cubic(f, matrix::identity(f, 4))?;
            let t1 = twisted_cubic(f, matrix::random_invertible(f, 4, rng))?;
            let (XPoint::V22 { ideal: q0, .. }, XPoint::V22 { ideal: q1, .. }) = (&t0, &t1) else {
                unreachable!()
            };
            let all: Vec<Matrix<u64>> = q0.iter().chain(q1.iter()).cloned().collect();
            let rows: Vec<Vec<u64>> = all.iter().map(|q| pairing_row(f, q)).collect();
            let m = Matrix::from_rows(&rows);
            if matrix::rank(f, &m) != 6 {
                continue;
            }
            let perp = matrix::kernel_basis(f, &m);
            if perp.cols() != 4 {
                continue;
            }
            let mix = matrix::random(f, 4, 3, rng);
            if matrix::rank(f, &mix) != 3 {
                continue;
            }
            let b = matrix::mul(f, &perp, &mix);
            let grams = (0..3).map(|c| gram_from_pairing_coords(f, &b.col(c))).collect();
            if let Ok(model) = V22Model::new(field, grams, vec![t0, t1]) {
                return Ok(model);
            }
        }
        Err(Error::Exhausted { attempts: POINT_ATTEMPTS, reason: "no admissible V22 net".into() })
    }

    pub fn contains(&self, x: &XPoint) -> bool {
        let f = &self.field;
        match x {
            XPoint::V22 { g, h, ideal } => {
                matrix::mul(f, g, h) == matrix::identity(f, 4)
                    && ideal.len() == 3
                    && ideal
                        .iter()
                        .all(|q| self.grams.iter().all(|b| tensor::trace_pairing(f, b, q) == 0))
            }
            _ => false,
        }
    }

    /// `e_u ↦ S₀(h e_u)`, where `S₀ = [[x, y], [y, z], [z, w]]` is the
    /// Hilbert–Burch matrix of the standard cubic.
    pub fn fiber_eval(&self, x: &XPoint) -> Result<FiberData> {
        let XPoint::V22 { h, .. } = x else {
            return Err(Error::Dimension("not a V22 point".into()));
        };
        let ev = (0..4)
            .map(|u| {
                let y = h.col(u);
                hilbert_burch(&y)
            })
            .collect();
        Ok(FiberData { rank_e2: 2, rank_e3: 3, ev, j: symplectic2(&self.field) })
    }

    /// Samples a point on a random slice of the cubics through the model.
    ///
    /// Write `h = g⁻¹` with rows `h₀..h₃`; `g·T₀` lies on `X` iff for every
    /// `b`: `h₀Q_bh₂ = h₁Q_bh₁`, `h₀Q_bh₃ = h₁Q_bh₂`, `h₁Q_bh₃ = h₂Q_bh₂`.
    /// Fix `h₀` and put `h₁` on a random line `h₁(ν)`. The first two
    /// groups are linear in `h₂`, `h₃` up to a common kernel vector `z`,
    /// leaving unknowns `λ, μ` with `h₂ = p + λz`, `h₃ = R r + μz`. The last
    /// group is linear in `(1, λ, λ², μ)`; it has a solution of that shape
    /// exactly at the roots of a polynomial in `ν` of degree at most ten.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<XPoint> {
        for _ in 0..POINT_ATTEMPTS {
            if let Some(x) = self.try_slice(rng) {
                return Ok(x);
            }
        }
        Err(Error::Exhausted { attempts: POINT_ATTEMPTS, reason: "no cubic on the sampled slices".into() })
    }

    /// Points on one random slice (possibly none).
    pub fn try_slice<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<XPoint> {
        let f = &self.field;
        let h0 = random_vec(f, 4, rng);
        let h1a = random_vec(f, 4, rng);
        let h1b = random_vec(f, 4, rng);
        let n = Matrix::from_rows(
            &self
                .grams
                .iter()
                .map(|q| matrix::mul_vec(f, &q.transpose(), &h0))
                .collect::<Vec<_>>(),
        );
        let ech = matrix::echelon(f, &n);
        if ech.rank() != 3 {
            return None;
        }
        let z = matrix::kernel_basis(f, &n).col(0);
        // right inverse supported on the pivot columns
        let pivots = ech.pivots.clone();
        let sub_inv = matrix::inverse(f, &n.select_cols(&pivots)).ok()?;
        let mut r = matrix::zeros(f, 4, 3);
        for (a, &pc) in pivots.iter().enumerate() {
            for c in 0..3 {
                r[(pc, c)] = sub_inv[(a, c)];
            }
        }
        let slice = Slice { model: self, h0, h1a, h1b, z, r };
        let candidates: Vec<u64> = if f.modulus() <= 11 {
            (0..f.modulus()).filter(|nu| slice.condition(*nu) == 0).collect()
        } else {
            let xs: Vec<u64> = (0..=10).collect();
            let ys: Vec<u64> = xs.iter().map(|nu| slice.condition(*nu)).collect();
            let poly = UniPoly::interpolate(f, &xs, &ys);
            if poly.is_zero() {
                return None;
            }
            poly.roots(f, rng)
        };
        candidates.into_iter().find_map(|nu| slice.point_at(nu))
    }
}

struct Slice<'a> {
    model: &'a V22Model,
    h0: Vec<u64>,
    h1a: Vec<u64>,
    h1b: Vec<u64>,
    z: Vec<u64>,
    r: Matrix<u64>,
}

impl Slice<'_> {
    fn h1(&self, nu: u64) -> Vec<u64> {
        let f = &self.model.field;
        self.h1a.iter().zip(&self.h1b).map(|(a, b)| f.add(a, &f.mul(&nu, b))).collect()
    }

    /// Columns `(c₀, c₁, c₂, c₃)` of the last group of equations in the
    /// monomials `(1, λ, λ², μ)`, plus `p` and the `h₁`-row.
    fn system(&self, nu: u64) -> (Matrix<u64>, Vec<u64>, Vec<u64>) {
        let f = &self.model.field;
        let qs = &self.model.grams;
        let h1 = self.h1(nu);
        let s: Vec<u64> = qs.iter().map(|q| matrix::bilinear(f, q, &h1, &h1)).collect();
        let p = matrix::mul_vec(f, &self.r, &s);
        let r0: Vec<u64> = qs.iter().map(|q| matrix::bilinear(f, q, &h1, &p)).collect();
        let r1: Vec<u64> = qs.iter().map(|q| matrix::bilinear(f, q, &h1, &self.z)).collect();
        let mut m = matrix::zeros(f, 3, 4);
        for (b, q) in qs.iter().enumerate() {
            let t = matrix::mul_vec(f, &matrix::mul(f, &self.r.transpose(), q), &h1);
            let pqp = matrix::bilinear(f, q, &p, &p);
            let pqz = matrix::bilinear(f, q, &p, &self.z);
            m[(b, 0)] = f.sub(&matrix::dot(f, &t, &r0), &pqp);
            m[(b, 1)] = f.sub(&matrix::dot(f, &t, &r1), &f.add(&pqz, &pqz));
            m[(b, 2)] = f.neg(&matrix::bilinear(f, q, &self.z, &self.z));
            m[(b, 3)] = matrix::bilinear(f, q, &h1, &self.z);
        }
        (m, p, h1)
    }

    /// Signed maximal minors `(m₀, m₁, m₂, m₃)` spanning the kernel.
    fn kernel_minors(&self, m: &Matrix<u64>) -> [u64; 4] {
        let f = &self.model.field;
        let mut out = [0; 4];
        for (j, slot) in out.iter_mut().enumerate() {
            let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
            let d = matrix::det(f, &m.select_cols(&cols)).expect("square");
            *slot = if j % 2 == 0 { d } else { f.neg(&d) };
        }
        out
    }

    /// `m₀ m₂ − m₁²`, vanishing where the kernel has the shape `(1, λ, λ², μ)`.
    fn condition(&self, nu: u64) -> u64 {
        let f = &self.model.field;
        let (m, _, _) = self.system(nu);
        let k = self.kernel_minors(&m);
        f.sub(&f.mul(&k[0], &k[2]), &f.mul(&k[1], &k[1]))
    }

    fn point_at(&self, nu: u64) -> Option<XPoint> {
        let f = &self.model.field;
        let (m, p, h1) = self.system(nu);
        let k = self.kernel_minors(&m);
        if k[0] == 0 {
            return None;
        }
        let inv = f.inv(&k[0])?;
        let lambda = f.mul(&k[1], &inv);
        if f.mul(&k[2], &inv) != f.mul(&lambda, &lambda) {
            return None;
        }
        let mu = f.mul(&k[3], &inv);
        let h2: Vec<u64> = p.iter().zip(&self.z).map(|(a, z)| f.add(a, &f.mul(&lambda, z))).collect();
        let rr: Vec<u64> = self.model.grams.iter().map(|q| matrix::bilinear(f, q, &h1, &h2)).collect();
        let h3: Vec<u64> = matrix::mul_vec(f, &self.r, &rr)
            .iter()
            .zip(&self.z)
            .map(|(a, z)| f.add(a, &f.mul(&mu, z)))
            .collect();
        let h = Matrix::from_rows(&[self.h0.clone(), h1, h2, h3]);
        let g = matrix::inverse(f, &h).ok()?;
        let x = twisted_cubic(f, g).ok()?;
        self.model.contains(&x).then_some(x)
    }
}

/// `[[y₀, y₁], [y₁, y₂], [y₂, y₃]]`.
fn hilbert_burch(y: &[u64]) -> Matrix<u64> {
    Matrix::new(3, 2, vec![y[0], y[1], y[1], y[2], y[2], y[3]])
}

/// Row of the trace pairing against `q`, in [`tensor::sym2_pairs`]
/// coordinates of the `S²U` side (entries of its Gram matrix).
fn pairing_row(f: &PrimeField, q: &Matrix<u64>) -> Vec<u64> {
    tensor::sym2_pairs(4)
        .into_iter()
        .map(|(a, b)| if a == b { q[(a, a)] } else { f.add(&q[(a, b)], &q[(b, a)]) })
        .collect()
}

/// Symmetric matrix whose upper-triangular entries are `x`.
fn gram_from_pairing_coords(f: &PrimeField, x: &[u64]) -> Matrix<u64> {
    let mut m = matrix::zeros(f, 4, 4);
    for (idx, (a, b)) in tensor::sym2_pairs(4).into_iter().enumerate() {
        m[(a, b)] = x[idx];
        m[(b, a)] = x[idx];
    }
    m
}

/// Basis of `{F ∈ S²U* : tr(G F) = 0 for all G}` as Gram matrices.
pub fn annihilator(f: &PrimeField, grams: &[Matrix<u64>]) -> Vec<Matrix<u64>> {
    let rows: Vec<Vec<u64>> = grams.iter().map(|g| pairing_row(f, g)).collect();
    let ker = matrix::kernel_basis(f, &Matrix::from_rows(&rows));
    (0..ker.cols()).map(|c| gram_from_pairing_coords(f, &ker.col(c))).collect()
}

/// One of the three models.
#[derive(Clone, Debug)]
pub enum Model {
    Quadric(QuadricModel),
    V5(V5Model),
    V22(V22Model),
}

impl Model {
    pub fn geometry(&self) -> Geometry {
        match self {
            Model::Quadric(_) => Geometry::Quadric,
            Model::V5(_) => Geometry::V5,
            Model::V22(_) => Geometry::V22,
        }
    }

    pub fn field(&self) -> PrimeField {
        match self {
            Model::Quadric(m) => m.field,
            Model::V5(m) => m.field,
            Model::V22(m) => m.field,
        }
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<XPoint> {
        match self {
            Model::Quadric(m) => Ok(m.sample_point(rng)),
            Model::V5(m) => m.sample_point(rng),
            Model::V22(m) => m.sample_point(rng),
        }
    }

    pub fn contains(&self, x: &XPoint) -> bool {
        match self {
            Model::Quadric(m) => m.contains(x),
            Model::V5(m) => m.contains(x),
            Model::V22(m) => m.contains(x),
        }
    }

    pub fn fiber_eval(&self, x: &XPoint) -> Result<FiberData> {
        match self {
            Model::Quadric(m) => m.fiber_eval(x),
            Model::V5(m) => m.fiber_eval(x),
            Model::V22(m) => m.fiber_eval(x),
        }
    }

    /// Gram matrices of `B` (`V5`) or `B*` (`V22`); empty for the quadric.
    pub fn grams(&self) -> &[Matrix<u64>] {
        match self {
            Model::Quadric(_) => &[],
            Model::V5(m) => &m.grams,
            Model::V22(m) => &m.grams,
        }
    }

    /// Builds a model for `geometry` from `rng`.
    pub fn build<R: Rng + ?Sized>(geometry: Geometry, field: PrimeField, rng: &mut R) -> Result<Self> {
        Ok(match geometry {
            Geometry::Quadric => Model::Quadric(QuadricModel::new(field)?),
            Geometry::V5 => Model::V5(V5Model::random(field, rng)?),
            Geometry::V22 => Model::V22(V22Model::build(field, rng)?),
        })
    }

    /// The model carrying the given `B` Gram matrices.
    pub fn from_grams(geometry: Geometry, field: PrimeField, grams: Vec<Matrix<u64>>) -> Result<Self> {
        Ok(match geometry {
            Geometry::Quadric => Model::Quadric(QuadricModel::new(field)?),
            Geometry::V5 => Model::V5(V5Model::new(field, grams)?),
            Geometry::V22 => Model::V22(V22Model::new(field, grams, Vec::new())?),
        })
    }
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
    fn quadric_points_are_isotropic() {
        let m = QuadricModel::new(fp()).unwrap();
        let f = &m.field;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = m.sample_point(&mut rng);
            assert!(m.contains(&x));
            let v = m.plucker(&x).unwrap();
            assert_eq!(tensor::wedge4(f, &v, &m.spin.omega), 0);
            assert_eq!(tensor::wedge4(f, &v, &v), 0);
            // v ∈ V: the ω-component vanishes
            assert_eq!(matrix::mul_vec(f, &m.spin.p_omega, &v), vec![0]);
        }
    }

    #[test]
    fn quadric_plane_through_e1() {
        // ω(e₀, x) = x₂, so p₂ ∈ span(e₀, e₁, e₃)
        let m = QuadricModel::new(fp()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let p2 = m.complete_plane(&[1, 0, 0, 0], &mut rng).unwrap();
            assert_eq!(p2[2], 0);
        }
    }

    #[test]
    fn quadric_fiber_kills_the_plane() {
        let m = QuadricModel::new(fp()).unwrap();
        let f = &m.field;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = m.sample_point(&mut rng);
        let fd = m.fiber_eval(&x).unwrap();
        let st = fd.stacked();
        assert_eq!((st.rows(), st.cols()), (4, 2));
        assert_eq!(matrix::rank(f, &st), 2);
        let XPoint::Quadric { p } = &x else { unreachable!() };
        for pv in p {
            // Σ_u p_u ev(e_u) = 0
            let img = matrix::mul_vec(f, &st.transpose(), pv);
            assert_eq!(img, vec![0, 0]);
        }
    }

    #[test]
    fn v5_sampling() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = V5Model::random(f, &mut rng).unwrap();
        let mut accepted = 0;
        for _ in 0..1000 {
            if let Some(x) = m.try_sample_point(&mut rng) {
                assert!(m.contains(&x));
                accepted += 1;
            }
        }
        assert!(accepted >= 990, "acceptance {accepted}/1000");
        let l1: Vec<u64> = (0..5).map(|_| f.random(&mut rng)).collect();
        assert_eq!(matrix::rank(&f, &m.condition_matrix(&l1)), 3);
    }

    #[test]
    fn v5_sampler_is_reproducible() {
        let f = PrimeField::new(5).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = V5Model::random(f, &mut rng).unwrap();
            let x = m.sample_point(&mut rng).unwrap();
            (m.grams, x)
        };
        assert_eq!(run(11), run(11));
    }

    #[test]
    fn standard_ideal_matches_evaluation_oracle() {
        let f = fp();
        let pts: Vec<Vec<u64>> = (1..=7).map(|t| standard_cubic_point(&f, 1, t)).collect();
        let by_eval = quadric_ideal_by_evaluation(&f, &pts);
        assert_eq!(by_eval.len(), 3);
        let known = standard_cubic_ideal(&f);
        let span = |qs: &[Matrix<u64>]| {
            Matrix::from_rows(&qs.iter().map(|q| q.data().to_vec()).collect::<Vec<_>>())
        };
        let both = span(&by_eval).vstack(&span(&known));
        assert_eq!(matrix::rank(&f, &both), 3);
    }

    #[test]
    fn transformed_ideal_vanishes_on_the_curve() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = matrix::random_invertible(&f, 4, &mut rng);
        let XPoint::V22 { ideal, .. } = twisted_cubic(&f, g.clone()).unwrap() else { unreachable!() };
        for t in 0..10 {
            let pt = matrix::mul_vec(&f, &g, &standard_cubic_point(&f, 3, t));
            for q in &ideal {
                assert_eq!(matrix::bilinear(&f, q, &pt, &pt), 0);
            }
        }
    }

    #[test]
    fn hilbert_burch_composite_is_zero() {
        // minors of S₀ are the ideal generators, so (ideal row)·syzygy = 0
        let f = fp();
        let q = standard_cubic_ideal(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let y: Vec<u64> = (0..4).map(|_| f.random(&mut rng)).collect();
        let s = hilbert_burch(&y);
        let vals: Vec<u64> = q.iter().map(|g| matrix::bilinear(&f, g, &y, &y)).collect();
        // generators ordered (xz−y², yw−z², xw−yz) = minors (01, 12, 02)
        let row = [vals[1], f.neg(&vals[2]), vals[0]];
        for c in 0..2 {
            let s_col = s.col(c);
            let acc = (0..3).fold(0, |acc, r| f.add(&acc, &f.mul(&row[r], &s_col[r])));
            assert_eq!(acc, 0);
        }
    }

    #[test]
    fn v22_model_and_slice_sampler() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = V22Model::build(f, &mut rng).unwrap();
        assert_eq!(m.annihilator.len(), 7);
        assert_eq!(m.seeded.len(), 2);
        for x in &m.seeded {
            assert!(m.contains(x));
        }
        for _ in 0..20 {
            let x = m.sample_point(&mut rng).unwrap();
            assert!(m.contains(&x));
        }
    }

    #[test]
    fn v22_fiber_composite_vanishes_on_b_star() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = V22Model::build(f, &mut rng).unwrap();
        let x = m.sample_point(&mut rng).unwrap();
        let fd = m.fiber_eval(&x).unwrap();
        for g in &m.grams {
            // Σ G_uv ev(u) J ev(v)ᵗ = 0
            let mut acc = matrix::zeros(&f, 3, 3);
            for u in 0..4 {
                for v in 0..4 {
                    let t = matrix::mul(&f, &matrix::mul(&f, &fd.ev[u], &fd.j), &fd.ev[v].transpose());
                    acc = matrix::add(&f, &acc, &matrix::scale(&f, &g[(u, v)], &t));
                }
            }
            assert!(matrix::is_zero(&f, &acc));
        }
    }
}
