//! Dense univariate polynomials: interpolation, gcd, squarefree tests and
//! root finding over prime fields.

use rand::Rng;

use crate::field::{Field, PrimeField};

/// Coefficients from low to high degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + PartialEq> UniPoly<T> {
    pub fn new<F: Field<Elem = T>>(f: &F, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn x<F: Field<Elem = T>>(f: &F) -> Self {
        UniPoly { coeffs: vec![f.zero(), f.one()] }
    }

    pub fn constant<F: Field<Elem = T>>(f: &F, c: T) -> Self {
        Self::new(f, vec![c])
    }

    pub fn eval<F: Field<Elem = T>>(&self, f: &F, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add<F: Field<Elem = T>>(&self, f: &F, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| f.add(self.coeffs.get(i).unwrap_or(&z), o.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::new(f, c)
    }

    pub fn sub<F: Field<Elem = T>>(&self, f: &F, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| f.sub(self.coeffs.get(i).unwrap_or(&z), o.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::new(f, c)
    }

    pub fn scale<F: Field<Elem = T>>(&self, f: &F, s: &T) -> Self {
        Self::new(f, self.coeffs.iter().map(|c| f.mul(s, c)).collect())
    }

    pub fn mul<F: Field<Elem = T>>(&self, f: &F, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, c)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem<F: Field<Elem = T>>(&self, f: &F, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.leading().unwrap()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(&r[i + dd], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(&r[i + j], &f.mul(&c, dc));
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(f, q), Self::new(f, r))
    }

    pub fn rem<F: Field<Elem = T>>(&self, f: &F, d: &Self) -> Self {
        self.divrem(f, d).1
    }

    pub fn monic<F: Field<Elem = T>>(&self, f: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(f, &f.inv(l).expect("nonzero")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd<F: Field<Elem = T>>(&self, f: &F, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative<F: Field<Elem = T>>(&self, f: &F) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Self::new(f, c)
    }

    /// True when the polynomial has no repeated factor over the algebraic
    /// closure, tested as `gcd(g, g') = 1`. Nonzero constants count as
    /// squarefree.
    pub fn is_squarefree<F: Field<Elem = T>>(&self, f: &F) -> bool {
        if self.is_zero() {
            return false;
        }
        let d = self.derivative(f);
        if d.is_zero() {
            return self.degree() == Some(0);
        }
        self.gcd(f, &d).degree() == Some(0)
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`.
    pub fn interpolate<F: Field<Elem = T>>(f: &F, xs: &[T], ys: &[T]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let mut out = Self::zero();
        for (j, xj) in xs.iter().enumerate() {
            if f.is_zero(&ys[j]) {
                continue;
            }
            let mut basis = Self::constant(f, f.one());
            let mut denom = f.one();
            for (l, xl) in xs.iter().enumerate() {
                if l != j {
                    basis = basis.mul(f, &Self::new(f, vec![f.neg(xl), f.one()]));
                    denom = f.mul(&denom, &f.sub(xj, xl));
                }
            }
            let s = f.div(&ys[j], &denom).expect("distinct nodes");
            out = out.add(f, &basis.scale(f, &s));
        }
        out
    }

    /// `self^e mod m`.
    pub fn powmod<F: Field<Elem = T>>(&self, f: &F, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(f, m);
        let mut acc = Self::constant(f, f.one()).rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            base = base.mul(f, &base).rem(f, m);
            e >>= 1;
        }
        acc
    }
}

impl UniPoly<u64> {
    /// Distinct roots in `F_p`, sorted. Uses `gcd(g, x^p − x)` and then
    /// equal-degree splitting with random shifts.
    pub fn roots<R: Rng + ?Sized>(&self, f: &PrimeField, rng: &mut R) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        let g = self.monic(f);
        if g.degree() == Some(0) {
            return Vec::new();
        }
        let x = Self::x(f);
        let xp = x.powmod(f, f.modulus(), &g);
        let split = g.gcd(f, &xp.sub(f, &x));
        let mut roots = Vec::new();
        split_linear(f, &split, rng, &mut roots);
        roots.sort_unstable();
        roots
    }
}

/// Splits a squarefree product of distinct linear factors.
fn split_linear<R: Rng + ?Sized>(
    f: &PrimeField,
    g: &UniPoly<u64>,
    rng: &mut R,
    out: &mut Vec<u64>,
) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic(f);
            out.push(f.neg(&m.coeffs[0]));
        }
        Some(d) => {
            if f.modulus() == 2 {
                // both elements of F_2 by direct evaluation
                for a in 0..2 {
                    if g.eval(f, &a) == 0 {
                        out.push(a);
                    }
                }
                return;
            }
            loop {
                let a = f.random(rng);
                let shifted = UniPoly::new(f, vec![a, 1]);
                let h = shifted.powmod(f, (f.modulus() - 1) / 2, g);
                let h = h.sub(f, &UniPoly::constant(f, 1));
                let c = g.gcd(f, &h);
                let dc = c.degree().unwrap_or(0);
                if dc > 0 && dc < d {
                    let (q, _) = g.divrem(f, &c);
                    split_linear(f, &c, rng, out);
                    split_linear(f, &q, rng, out);
                    return;
                }
            }
        }
    }
}
