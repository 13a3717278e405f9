//! Sparse multivariate polynomials with graded-lex term order, and exact
//! determinants of polynomial matrices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::matrix::{self, Matrix};

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly<T> {
    nvars: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Clone + PartialEq> MultiPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&T> {
        self.terms.get(m)
    }
}

impl<T: Clone + PartialEq> MultiPoly<T> {
    pub fn constant<F: Field<Elem = T>>(f: &F, nvars: usize, c: T) -> Self {
        Self::monomial(f, Monomial::one(nvars), c)
    }

    pub fn var<F: Field<Elem = T>>(f: &F, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::monomial(f, Monomial::var(nvars, i), f.one())
    }

    pub fn monomial<F: Field<Elem = T>>(f: &F, m: Monomial, c: T) -> Self {
        let nvars = m.0.len();
        let mut p = Self::zero(nvars);
        if !f.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    /// The linear form `Σ coeffs[i]·x_i`.
    pub fn linear<F: Field<Elem = T>>(f: &F, coeffs: &[T]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !f.is_zero(c) {
                p.terms.insert(Monomial::var(n, i), c.clone());
            }
        }
        p
    }

    /// Builds a polynomial from raw terms, summing duplicates and dropping zeros.
    pub fn from_terms<F: Field<Elem = T>>(
        f: &F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, T)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "exponent vector length");
            p.add_term(f, m, c);
        }
        p
    }

    fn add_term<F: Field<Elem = T>>(&mut self, f: &F, m: Monomial, c: T) {
        if f.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = f.add(old, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add<F: Field<Elem = T>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(f, m.clone(), c.clone());
        }
        out
    }

    pub fn neg<F: Field<Elem = T>>(&self, f: &F) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub<F: Field<Elem = T>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn scale<F: Field<Elem = T>>(&self, f: &F, s: &T) -> Self {
        if f.is_zero(s) {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.mul(s, c))).collect(),
        }
    }

    pub fn mul<F: Field<Elem = T>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(f, m1.mul(m2), f.mul(c1, c2));
            }
        }
        out
    }

    pub fn eval<F: Field<Elem = T>>(&self, f: &F, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars);
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `x_var = value`, keeping the variable count.
    pub fn substitute<F: Field<Elem = T>>(&self, f: &F, var: usize, value: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out.add_term(f, m2, f.mul(c, &f.pow(value, e as u64)));
        }
        out
    }

    /// Formal partial derivative.
    pub fn derivative<F: Field<Elem = T>>(&self, f: &F, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(f, m2, f.mul(c, &f.from_i64(e as i64)));
        }
        out
    }

    /// Coefficients of a linear form, `None` if some term is not of degree 1.
    pub fn linear_coefficients<F: Field<Elem = T>>(&self, f: &F) -> Option<Vec<T>> {
        let mut out = vec![f.zero(); self.nvars];
        for (m, c) in &self.terms {
            if m.degree() != 1 {
                return None;
            }
            let i = m.0.iter().position(|&e| e == 1).expect("degree one");
            out[i] = c.clone();
        }
        Some(out)
    }
}

/// JSON shape of a polynomial: `{nvars, degree, terms: [[exponents], coeff]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson<T> {
    pub nvars: usize,
    pub degree: Option<u32>,
    pub terms: Vec<(Vec<u32>, T)>,
}

impl<T: Clone + PartialEq> MultiPoly<T> {
    /// Terms are emitted in descending graded-lex order.
    pub fn to_json(&self) -> PolyJson<T> {
        PolyJson {
            nvars: self.nvars,
            degree: self.degree(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| (m.0.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn from_json<F: Field<Elem = T>>(f: &F, j: &PolyJson<T>) -> Self {
        Self::from_terms(f, j.nvars, j.terms.iter().map(|(e, c)| (Monomial(e.clone()), c.clone())))
    }
}

/// Largest size for which `poly_det` expands by minors instead of
/// interpolating.
pub const EXPANSION_LIMIT: usize = 6;

/// Exact determinant of a square matrix of polynomials.
pub fn poly_det<F: Field>(f: &F, m: &Matrix<MultiPoly<F::Elem>>) -> MultiPoly<F::Elem> {
    assert!(m.is_square(), "poly_det needs a square matrix");
    let nvars = nvars_of(m);
    if m.rows() == 0 {
        return MultiPoly::constant(f, nvars, f.one());
    }
    if m.rows() <= EXPANSION_LIMIT {
        det_by_expansion(f, m)
    } else {
        det_by_interpolation(f, m)
    }
}

fn nvars_of<T: Clone + PartialEq>(m: &Matrix<MultiPoly<T>>) -> usize {
    let n = m.data().first().map_or(0, MultiPoly::nvars);
    assert!(m.data().iter().all(|p| p.nvars() == n), "mixed variable counts");
    n
}

/// Laplace expansion along rows, memoized over column subsets.
pub fn det_by_expansion<F: Field>(f: &F, m: &Matrix<MultiPoly<F::Elem>>) -> MultiPoly<F::Elem> {
    let n = m.rows();
    let nvars = nvars_of(m);
    assert!(n < 32, "expansion size");
    // minors[mask] = det of the last popcount(mask) rows on columns `mask`
    let mut minors: HashMap<u32, MultiPoly<F::Elem>> = HashMap::new();
    minors.insert(0, MultiPoly::constant(f, nvars, f.one()));
    for size in 1..=n {
        let row = n - size;
        let mut next = HashMap::new();
        for mask in masks_of_size(n, size) {
            let mut acc = MultiPoly::zero(nvars);
            let mut pos = 0;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = &m[(row, col)];
                let sub = &minors[&(mask & !(1 << col))];
                if !entry.is_zero() && !sub.is_zero() {
                    let t = entry.mul(f, sub);
                    acc = if pos % 2 == 0 { acc.add(f, &t) } else { acc.sub(f, &t) };
                }
                pos += 1;
            }
            next.insert(mask, acc);
        }
        minors = next;
    }
    minors.remove(&((1u32 << n) - 1)).expect("full minor")
}

fn masks_of_size(n: usize, size: usize) -> Vec<u32> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == size).collect()
}

/// Evaluation at enough values of each variable in turn, then Lagrange
/// interpolation with polynomial coefficients. Requires more than
/// `Σ row degrees` distinct field elements.
pub fn det_by_interpolation<F: Field>(
    f: &F,
    m: &Matrix<MultiPoly<F::Elem>>,
) -> MultiPoly<F::Elem> {
    let nvars = nvars_of(m);
    let bound: u32 = (0..m.rows())
        .map(|r| m.row(r).iter().filter_map(MultiPoly::degree).max().unwrap_or(0))
        .sum();
    let ch = f.characteristic();
    assert!(
        ch == 0 || ch > bound as u64,
        "field too small for interpolation"
    );
    interpolate_rec(f, m, nvars, bound)
}

fn interpolate_rec<F: Field>(
    f: &F,
    m: &Matrix<MultiPoly<F::Elem>>,
    nvars: usize,
    bound: u32,
) -> MultiPoly<F::Elem> {
    // find the highest variable still present
    let live = (0..nvars).rev().find(|&v| {
        m.data()
            .iter()
            .any(|p| p.terms().any(|(mon, _)| mon.0[v] > 0))
    });
    let Some(var) = live else {
        let scalars = m.map(|p| p.eval(f, &vec![f.zero(); nvars]));
        let d = matrix::det(f, &scalars).expect("square");
        return MultiPoly::constant(f, nvars, d);
    };
    let nodes: Vec<F::Elem> = (0..=bound as i64).map(|i| f.from_i64(i)).collect();
    let values: Vec<MultiPoly<F::Elem>> = nodes
        .iter()
        .map(|t| interpolate_rec(f, &m.map(|p| p.substitute(f, var, t)), nvars, bound))
        .collect();
    // Lagrange basis in x_var
    let x = MultiPoly::var(f, nvars, var);
    let mut out = MultiPoly::zero(nvars);
    for (j, tj) in nodes.iter().enumerate() {
        if values[j].is_zero() {
            continue;
        }
        let mut basis = MultiPoly::constant(f, nvars, f.one());
        let mut denom = f.one();
        for (l, tl) in nodes.iter().enumerate() {
            if l == j {
                continue;
            }
            basis = basis.mul(f, &x.sub(f, &MultiPoly::constant(f, nvars, tl.clone())));
            denom = f.mul(&denom, &f.sub(tj, tl));
        }
        let inv = f.inv(&denom).expect("distinct nodes");
        out = out.add(f, &basis.mul(f, &values[j]).scale(f, &inv));
    }
    out
}

impl<T: Clone + PartialEq> Matrix<MultiPoly<T>> {
    /// Evaluates every entry at `point`.
    pub fn eval_at<F: Field<Elem = T>>(&self, f: &F, point: &[T]) -> Matrix<T> {
        self.map(|p| p.eval(f, point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![0, 3]);
        let c = Monomial(vec![1, 1]);
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn diagonal_and_symmetric_2x2() {
        let f = fp();
        let x = MultiPoly::var(&f, 2, 0);
        let y = MultiPoly::var(&f, 2, 1);
        let z = MultiPoly::zero(2);
        let d = poly_det(&f, &Matrix::new(2, 2, vec![x.clone(), z.clone(), z, y.clone()]));
        assert_eq!(d, x.mul(&f, &y));
        let s = poly_det(&f, &Matrix::new(2, 2, vec![x.clone(), y.clone(), y.clone(), x.clone()]));
        assert_eq!(s, x.mul(&f, &x).sub(&f, &y.mul(&f, &y)));
    }

    fn random_linear_matrix(f: &PrimeField, n: usize, nvars: usize, seed: u64) -> Matrix<MultiPoly<u64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(n, n, |_, _| {
            let c: Vec<u64> = (0..nvars).map(|_| f.random(&mut rng)).collect();
            MultiPoly::linear(f, &c)
        })
    }

    #[test]
    fn determinant_commutes_with_evaluation() {
        let f = fp();
        let m = random_linear_matrix(&f, 4, 3, 1);
        let d = poly_det(&f, &m);
        assert!(d.is_homogeneous());
        assert_eq!(d.degree(), Some(4));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let pt: Vec<u64> = (0..3).map(|_| f.random(&mut rng)).collect();
            let lhs = d.eval(&f, &pt);
            let rhs = matrix::det(&f, &m.eval_at(&f, &pt)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn expansion_and_interpolation_agree() {
        let f = fp();
        for n in 1..=5 {
            let m = random_linear_matrix(&f, n, 3, 10 + n as u64);
            assert_eq!(det_by_expansion(&f, &m), det_by_interpolation(&f, &m));
        }
    }

    #[test]
    fn large_matrix_uses_interpolation() {
        let f = fp();
        let m = random_linear_matrix(&f, 7, 2, 5);
        let d = poly_det(&f, &m);
        assert_eq!(d.degree(), Some(7));
        assert!(d.is_homogeneous());
        let pt = [f.from_i64(3), f.from_i64(-8)];
        assert_eq!(d.eval(&f, &pt), matrix::det(&f, &m.eval_at(&f, &pt)).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let f = fp();
        let p = random_linear_matrix(&f, 3, 3, 4);
        let d = poly_det(&f, &p);
        let j = d.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: PolyJson<u64> = serde_json::from_str(&s).unwrap();
        assert_eq!(MultiPoly::from_json(&f, &back), d);
    }

    #[test]
    fn substitution_and_derivative() {
        let f = fp();
        let x = MultiPoly::var(&f, 2, 0);
        let y = MultiPoly::var(&f, 2, 1);
        let p = x.mul(&f, &x).mul(&f, &y); // x^2 y
        assert_eq!(p.derivative(&f, 0), x.mul(&f, &y).scale(&f, &2));
        assert_eq!(p.substitute(&f, 0, &3), y.scale(&f, &9));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn poly_det_commutes_with_evaluation(seed in any::<u64>(), n in 1usize..5, pt in proptest::collection::vec(0u64..32003, 3)) {
                let f = fp();
                let m = random_linear_matrix(&f, n, 3, seed);
                let d = poly_det(&f, &m);
                prop_assert_eq!(d.eval(&f, &pt), matrix::det(&f, &m.eval_at(&f, &pt)).unwrap());
            }
        }
    }
}
