//! Tensors in `I ⊗ W ⊗ U`, dualities on `W`, nets of quadrics and the
//! invariant splitting of `∧²U` for the four-dimensional spin space.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geometry::{Geometry, Parity};
use crate::matrix::{self, Matrix};

/// Basis of `∧²` of an `n`-dimensional space: pairs `a < b` in lex order.
pub fn wedge2_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Basis of `S²` of an `n`-dimensional space: pairs `a ≤ b` in lex order.
pub fn sym2_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
}

/// Position of `e_a ∧ e_b` (`a < b`) in [`wedge2_pairs`].
pub fn wedge2_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// Position of `e_a · e_b` (`a ≤ b`) in [`sym2_pairs`].
pub fn sym2_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a <= b && b < n);
    a * n - a * a.saturating_sub(1) / 2 + (b - a)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Alternation `c ↦ Σ_{a<b} (c_ab − c_ba) e_a∧e_b` of a square matrix.
pub fn alternate<F: Field>(f: &F, c: &Matrix<F::Elem>) -> Vec<F::Elem> {
    let n = c.rows();
    wedge2_pairs(n)
        .into_iter()
        .map(|(a, b)| f.sub(&c[(a, b)], &c[(b, a)]))
        .collect()
}

/// Skew Gram matrix of a 2-form given in [`wedge2_pairs`] coordinates.
pub fn wedge2_gram<F: Field>(f: &F, n: usize, v: &[F::Elem]) -> Matrix<F::Elem> {
    let mut m = matrix::zeros(f, n, n);
    for (idx, (a, b)) in wedge2_pairs(n).into_iter().enumerate() {
        m[(a, b)] = v[idx].clone();
        m[(b, a)] = f.neg(&v[idx]);
    }
    m
}

/// Gram matrix of an element of `S²` given in [`sym2_pairs`] coordinates,
/// with `e_a·e_b` having entries `½` off the diagonal.
pub fn sym2_gram<F: Field>(f: &F, n: usize, x: &[F::Elem]) -> Matrix<F::Elem> {
    let half = f.inv(&f.from_i64(2)).expect("odd characteristic");
    let mut m = matrix::zeros(f, n, n);
    for (idx, (a, b)) in sym2_pairs(n).into_iter().enumerate() {
        if a == b {
            m[(a, a)] = x[idx].clone();
        } else {
            let v = f.mul(&half, &x[idx]);
            m[(a, b)] = v.clone();
            m[(b, a)] = v;
        }
    }
    m
}

/// Inverse of [`sym2_gram`]: the monomial coefficients of a quadratic form.
pub fn gram_to_sym2<F: Field>(f: &F, g: &Matrix<F::Elem>) -> Vec<F::Elem> {
    sym2_pairs(g.rows())
        .into_iter()
        .map(|(a, b)| if a == b { g[(a, a)].clone() } else { f.add(&g[(a, b)], &g[(b, a)]) })
        .collect()
}

/// The trace pairing `tr(G F)` between `S²U` and `S²U*`.
pub fn trace_pairing<F: Field>(f: &F, g: &Matrix<F::Elem>, q: &Matrix<F::Elem>) -> F::Elem {
    let mut acc = f.zero();
    for a in 0..g.rows() {
        for b in 0..g.cols() {
            acc = f.add(&acc, &f.mul(&g[(a, b)], &q[(b, a)]));
        }
    }
    acc
}

/// Coefficient of `e₀∧e₁∧e₂∧e₃` in `x ∧ y` for `x, y ∈ ∧²` of a
/// four-dimensional space.
pub fn wedge4<F: Field>(f: &F, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    // basis 01 02 03 12 13 23
    let t = |i: usize, j: usize| f.mul(&x[i], &y[j]);
    let plus = f.add(&f.add(&t(0, 5), &t(5, 0)), &f.add(&t(2, 3), &t(3, 2)));
    let minus = f.add(&t(1, 4), &t(4, 1));
    f.sub(&plus, &minus)
}

/// An element of `I ⊗ W ⊗ U`, stored row by row: for each `i`, a
/// `dim W × dim U` matrix `a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor3<T> {
    dim_i: usize,
    dim_w: usize,
    dim_u: usize,
    data: Vec<T>,
}

impl<T: Clone> Tensor3<T> {
    pub fn new(dim_i: usize, dim_w: usize, dim_u: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), dim_i * dim_w * dim_u, "tensor data length");
        Tensor3 { dim_i, dim_w, dim_u, data }
    }

    pub fn from_fn(
        dim_i: usize,
        dim_w: usize,
        dim_u: usize,
        mut g: impl FnMut(usize, usize, usize) -> T,
    ) -> Self {
        let mut data = Vec::with_capacity(dim_i * dim_w * dim_u);
        for i in 0..dim_i {
            for w in 0..dim_w {
                for u in 0..dim_u {
                    data.push(g(i, w, u));
                }
            }
        }
        Tensor3 { dim_i, dim_w, dim_u, data }
    }

    pub fn from_rows(rows: &[Matrix<T>]) -> Self {
        let (dw, du) = rows.first().map_or((0, 0), |m| (m.rows(), m.cols()));
        assert!(rows.iter().all(|m| m.rows() == dw && m.cols() == du));
        let data = rows.iter().flat_map(|m| m.data().iter().cloned()).collect();
        Tensor3::new(rows.len(), dw, du, data)
    }

    pub fn dim_i(&self) -> usize {
        self.dim_i
    }
    pub fn dim_w(&self) -> usize {
        self.dim_w
    }
    pub fn dim_u(&self) -> usize {
        self.dim_u
    }
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, w: usize, u: usize) -> &T {
        &self.data[(i * self.dim_w + w) * self.dim_u + u]
    }

    #[inline]
    pub fn set(&mut self, i: usize, w: usize, u: usize, x: T) {
        self.data[(i * self.dim_w + w) * self.dim_u + u] = x;
    }

    /// The slice `a_i ∈ W ⊗ U`.
    pub fn row(&self, i: usize) -> Matrix<T> {
        let n = self.dim_w * self.dim_u;
        Matrix::new(self.dim_w, self.dim_u, self.data[i * n..(i + 1) * n].to_vec())
    }

    pub fn rows(&self) -> Vec<Matrix<T>> {
        (0..self.dim_i).map(|i| self.row(i)).collect()
    }

    /// Nested `[i][w][u]` form.
    pub fn to_nested(&self) -> Vec<Vec<Vec<T>>> {
        (0..self.dim_i)
            .map(|i| {
                (0..self.dim_w)
                    .map(|w| (0..self.dim_u).map(|u| self.get(i, w, u).clone()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn from_nested(n: &[Vec<Vec<T>>]) -> Result<Self> {
        let di = n.len();
        let dw = n.first().map_or(0, Vec::len);
        let du = n.first().and_then(|r| r.first()).map_or(0, Vec::len);
        if n.iter().any(|r| r.len() != dw || r.iter().any(|c| c.len() != du)) {
            return Err(Error::Dimension("ragged tensor".into()));
        }
        Ok(Tensor3::new(di, dw, du, n.iter().flatten().flatten().cloned().collect()))
    }

    /// The `(dim I · dim U) × dim W` matrix with entry `A[i][w][u]` at row
    /// `i·dim U + u`.
    pub fn as_iu_by_w(&self) -> Matrix<T> {
        Matrix::from_fn(self.dim_i * self.dim_u, self.dim_w, |r, w| {
            self.get(r / self.dim_u, w, r % self.dim_u).clone()
        })
    }
}

pub fn random_tensor<F: Field, R: rand::Rng + ?Sized>(
    f: &F,
    dim_i: usize,
    dim_w: usize,
    dim_u: usize,
    rng: &mut R,
) -> Tensor3<F::Elem> {
    Tensor3::from_fn(dim_i, dim_w, dim_u, |_, _, _| f.random(rng))
}

/// A nondegenerate symmetric or skew form `D` on `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Duality<T> {
    matrix: Matrix<T>,
    parity: Parity,
}

impl<T: Clone> Duality<T> {
    pub fn new<F: Field<Elem = T>>(f: &F, matrix: Matrix<T>, parity: Parity) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        match parity {
            Parity::Symmetric if !matrix::is_symmetric(f, &matrix) => return Err(Error::NotSymmetric),
            Parity::Skew if !matrix::is_skew(f, &matrix) => return Err(Error::NotSkew),
            _ => {}
        }
        if matrix::rank(f, &matrix) < matrix.rows() {
            return Err(Error::Degenerate("duality is singular".into()));
        }
        Ok(Duality { matrix, parity })
    }

    pub fn identity<F: Field<Elem = T>>(f: &F, n: usize) -> Self {
        Duality { matrix: matrix::identity(f, n), parity: Parity::Symmetric }
    }

    /// Standard symplectic form with blocks `[[0, 1], [−1, 0]]` on
    /// consecutive pairs.
    pub fn standard_symplectic<F: Field<Elem = T>>(f: &F, n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::Dimension(format!("odd symplectic dimension {n}")));
        }
        let mut m = matrix::zeros(f, n, n);
        for p in 0..n / 2 {
            m[(2 * p, 2 * p + 1)] = f.one();
            m[(2 * p + 1, 2 * p)] = f.neg(&f.one());
        }
        Ok(Duality { matrix: m, parity: Parity::Skew })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// The splitting `∧²U = V ⊕ ⟨ω⟩` for `dim U = 4` and
/// `ω = e₀∧e₂ + e₁∧e₃`.
#[derive(Clone, Debug)]
pub struct SpinSplit<T> {
    /// `ω` in [`wedge2_pairs`] coordinates.
    pub omega: Vec<T>,
    /// Gram matrix of `ω` as a bilinear form on `U`.
    pub omega_gram: Matrix<T>,
    /// Columns: a basis of `V` in `∧²U`.
    pub v_basis: Matrix<T>,
    /// `5 × 6`: coordinates in `v_basis` of the projection along `ω`.
    pub p_v: Matrix<T>,
    /// `1 × 6`: the `ω`-coordinate.
    pub p_omega: Matrix<T>,
}

pub fn build_spin_split<F: Field>(f: &F) -> Result<SpinSplit<F::Elem>> {
    if f.characteristic() == 2 {
        return Err(Error::InvalidField("the spin splitting needs odd characteristic".into()));
    }
    let mut omega = vec![f.zero(); 6];
    omega[wedge2_index(4, 0, 2)] = f.one();
    omega[wedge2_index(4, 1, 3)] = f.one();
    let omega_gram = wedge2_gram(f, 4, &omega);
    // v ↦ v∧ω as a 1×6 row
    let row: Vec<F::Elem> = (0..6)
        .map(|j| {
            let mut e = vec![f.zero(); 6];
            e[j] = f.one();
            wedge4(f, &e, &omega)
        })
        .collect();
    let v_basis = matrix::kernel_basis(f, &Matrix::new(1, 6, row));
    debug_assert_eq!(v_basis.cols(), 5);
    let frame = v_basis.hstack(&Matrix::new(6, 1, omega.clone()));
    let inv = matrix::inverse(f, &frame)?;
    let p_v = inv.select_rows(&[0, 1, 2, 3, 4]);
    let p_omega = inv.select_rows(&[5]);
    Ok(SpinSplit { omega, omega_gram, v_basis, p_v, p_omega })
}

impl<T: Clone> SpinSplit<T> {
    /// Coordinates in `V` of the projection of `x ∈ ∧²U` along `ω`.
    pub fn project_v<F: Field<Elem = T>>(&self, f: &F, x: &[T]) -> Vec<T> {
        matrix::mul_vec(f, &self.p_v, x)
    }

    /// The quadratic form `v ↦ v∧v` restricted to `V`, as a Gram matrix.
    pub fn v_gram<F: Field<Elem = T>>(&self, f: &F) -> Matrix<T> {
        let cols: Vec<Vec<T>> = (0..5).map(|j| self.v_basis.col(j)).collect();
        Matrix::from_fn(5, 5, |a, b| wedge4(f, &cols[a], &cols[b]))
    }

    /// `ω(x, y) = xᵗ Ω y`.
    pub fn omega_form<F: Field<Elem = T>>(&self, f: &F, x: &[T], y: &[T]) -> T {
        matrix::bilinear(f, &self.omega_gram, x, y)
    }
}

/// `p_V(alt(a_iᵗ D a_j))`: the five obstruction coordinates of the pair
/// `(a_i, a_j)`.
pub fn pair_condition<F: Field>(
    f: &F,
    spin: &SpinSplit<F::Elem>,
    ai: &Matrix<F::Elem>,
    aj: &Matrix<F::Elem>,
    d: &Matrix<F::Elem>,
) -> Vec<F::Elem> {
    let c = matrix::mul(f, &matrix::mul(f, &ai.transpose(), d), aj);
    spin.project_v(f, &alternate(f, &c))
}

/// The linear map `a_j ↦ pair_condition(a_i, a_j)` as a `5 × (dim W · dim U)`
/// matrix, columns indexed `w·dim U + u`.
pub fn pair_condition_matrix<F: Field>(
    f: &F,
    spin: &SpinSplit<F::Elem>,
    ai: &Matrix<F::Elem>,
    d: &Matrix<F::Elem>,
) -> Matrix<F::Elem> {
    let (dw, du) = (ai.rows(), ai.cols());
    // a_iᵗ D is fixed; alt(c)_{ab} = Σ_w (a_iᵗD)[a][w] a_j[w][b] − (a↔b)
    let left = matrix::mul(f, &ai.transpose(), d);
    let pairs = wedge2_pairs(du);
    let mut m = matrix::zeros(f, 5, dw * du);
    for w in 0..dw {
        for v in 0..du {
            let mut alt = vec![f.zero(); pairs.len()];
            for (idx, &(a, b)) in pairs.iter().enumerate() {
                // coefficient of a_j[w][v] in c_ab − c_ba
                let mut x = f.zero();
                if v == b {
                    x = f.add(&x, &left[(a, w)]);
                }
                if v == a {
                    x = f.sub(&x, &left[(b, w)]);
                }
                alt[idx] = x;
            }
            let col = spin.project_v(f, &alt);
            for (r, val) in col.into_iter().enumerate() {
                m[(r, w * du + v)] = val;
            }
        }
    }
    m
}

/// Coordinates of `A·D·Aᵗ` in `∧²I ⊗ V` for the quadric: five values per
/// pair `i < j`.
pub fn project_condition<F: Field>(
    f: &F,
    spin: &SpinSplit<F::Elem>,
    a: &Tensor3<F::Elem>,
    d: &Duality<F::Elem>,
) -> Result<Vec<F::Elem>> {
    check_quadric_dims(a, d)?;
    let rows = a.rows();
    let mut out = Vec::with_capacity(5 * binomial(a.dim_i(), 2));
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            out.extend(pair_condition(f, spin, &rows[i], &rows[j], d.matrix()));
        }
    }
    Ok(out)
}

pub(crate) fn check_quadric_dims<T: Clone>(a: &Tensor3<T>, d: &Duality<T>) -> Result<()> {
    if a.dim_u() != 4 {
        return Err(Error::Dimension(format!("dim U = {} (expected 4)", a.dim_u())));
    }
    if a.dim_w() != a.dim_i() + 1 {
        return Err(Error::Dimension(format!(
            "dim W = {} with dim I = {} (expected dim W = dim I + 1)",
            a.dim_w(),
            a.dim_i()
        )));
    }
    if d.dim() != a.dim_w() {
        return Err(Error::Dimension(format!("duality of size {} on W of dim {}", d.dim(), a.dim_w())));
    }
    if d.parity() != Parity::Symmetric {
        return Err(Error::Dimension("quadric duality must be symmetric".into()));
    }
    Ok(())
}

/// A net of quadrics: a symmetric `k × k` matrix `c[i][j] ∈ B`, with `B`
/// given by Gram matrices inside `∧²U` (`V5`) or `S²U` (`V22`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Net<T> {
    geometry: Geometry,
    k: usize,
    grams: Vec<Matrix<T>>,
    coeffs: Vec<Vec<Vec<T>>>,
}

impl<T: Clone + PartialEq> Net<T> {
    pub fn new<F: Field<Elem = T>>(
        f: &F,
        geometry: Geometry,
        grams: Vec<Matrix<T>>,
        coeffs: Vec<Vec<Vec<T>>>,
    ) -> Result<Self> {
        let parity = match geometry {
            Geometry::V5 => Parity::Skew,
            Geometry::V22 => Parity::Symmetric,
            Geometry::Quadric => {
                return Err(Error::Unsupported("nets live on V5 or V22".into()));
            }
        };
        let du = geometry.dim_u();
        for g in &grams {
            if g.rows() != du || g.cols() != du {
                return Err(Error::Dimension(format!("Gram matrix must be {du}x{du}")));
            }
            let ok = match parity {
                Parity::Skew => matrix::is_skew(f, g),
                Parity::Symmetric => matrix::is_symmetric(f, g),
            };
            if !ok {
                return Err(match parity {
                    Parity::Skew => Error::NotSkew,
                    Parity::Symmetric => Error::NotSymmetric,
                });
            }
        }
        let k = coeffs.len();
        let nb = grams.len();
        for i in 0..k {
            if coeffs[i].len() != k || coeffs[i].iter().any(|c| c.len() != nb) {
                return Err(Error::Dimension("net coefficients must be k x k x dim B".into()));
            }
            for j in 0..i {
                if coeffs[i][j] != coeffs[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Net { geometry, k, grams, coeffs })
    }

    /// Net from coordinates ordered by `(i ≤ j)` in lex order, then `b`.
    pub fn from_coordinates<F: Field<Elem = T>>(
        f: &F,
        geometry: Geometry,
        k: usize,
        grams: Vec<Matrix<T>>,
        coords: &[T],
    ) -> Result<Self> {
        let nb = grams.len();
        let pairs = sym2_pairs(k);
        if coords.len() != pairs.len() * nb {
            return Err(Error::Dimension("net coordinate count".into()));
        }
        let mut c = vec![vec![vec![f.zero(); nb]; k]; k];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            for b in 0..nb {
                c[i][j][b] = coords[p * nb + b].clone();
                c[j][i][b] = coords[p * nb + b].clone();
            }
        }
        Net::new(f, geometry, grams, c)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn dim_u(&self) -> usize {
        self.geometry.dim_u()
    }
    pub fn dim_b(&self) -> usize {
        self.grams.len()
    }
    pub fn grams(&self) -> &[Matrix<T>] {
        &self.grams
    }
    pub fn coeffs(&self) -> &[Vec<Vec<T>>] {
        &self.coeffs
    }

    pub fn coordinates(&self) -> Vec<T> {
        sym2_pairs(self.k)
            .into_iter()
            .flat_map(|(i, j)| self.coeffs[i][j].clone())
            .collect()
    }

    /// Number of net coordinates, `dim B · C(k+1, 2)`.
    pub fn space_dim(&self) -> usize {
        self.dim_b() * binomial(self.k + 1, 2)
    }

    /// The `U`-block `Σ_b c[i][j][b] G_b`.
    pub fn block<F: Field<Elem = T>>(&self, f: &F, i: usize, j: usize) -> Matrix<T> {
        let du = self.dim_u();
        let mut m = matrix::zeros(f, du, du);
        for (b, g) in self.grams.iter().enumerate() {
            let c = &self.coeffs[i][j][b];
            if !f.is_zero(c) {
                m = matrix::add(f, &m, &matrix::scale(f, c, g));
            }
        }
        m
    }

    /// The `(k·dim U) × (k·dim U)` matrix of the net as a bilinear form on
    /// `I ⊗ U`, rows indexed `i·dim U + u`.
    pub fn ambient<F: Field<Elem = T>>(&self, f: &F) -> Matrix<T> {
        let du = self.dim_u();
        let n = self.k * du;
        let mut m = matrix::zeros(f, n, n);
        for i in 0..self.k {
            for j in 0..self.k {
                let blk = self.block(f, i, j);
                for a in 0..du {
                    for b in 0..du {
                        m[(i * du + a, j * du + b)] = blk[(a, b)].clone();
                    }
                }
            }
        }
        m
    }

    /// `self + t·other`, for pencils of nets with the same `B`.
    pub fn add_scaled<F: Field<Elem = T>>(&self, f: &F, t: &T, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let coeffs = (0..self.k)
            .map(|i| {
                (0..self.k)
                    .map(|j| {
                        (0..self.dim_b())
                            .map(|b| f.add(&self.coeffs[i][j][b], &f.mul(t, &other.coeffs[i][j][b])))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Net { geometry: self.geometry, k: self.k, grams: self.grams.clone(), coeffs }
    }

    /// The same `B` with new coefficients.
    pub fn with_coeffs(&self, coeffs: Vec<Vec<Vec<T>>>) -> Self {
        Net { geometry: self.geometry, k: coeffs.len(), grams: self.grams.clone(), coeffs }
    }
}

/// A net with random coefficients over the given `B`.
pub fn random_net<F: Field, R: rand::Rng + ?Sized>(
    f: &F,
    geometry: Geometry,
    k: usize,
    grams: &[Matrix<F::Elem>],
    rng: &mut R,
) -> Result<Net<F::Elem>> {
    let nb = grams.len();
    let coords: Vec<F::Elem> = (0..binomial(k + 1, 2) * nb).map(|_| f.random(rng)).collect();
    Net::from_coordinates(f, geometry, k, grams.to_vec(), &coords)
}
