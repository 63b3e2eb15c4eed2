//! The polynomial ring `R = Sym(V*)` of a realization, with its Weyl group
//! action and Demazure operators.
//!
//! Each variable has internal degree 2. Monomials are packed into a `u64`
//! with eight bits per exponent, so at most eight variables are supported.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::coxeter::{CoxeterSystem, Element};
use crate::linalg::Matrix;
use crate::scalar::{Coeff, Field, Q};

pub const MAX_VARS: usize = 8;
const BITS: u32 = 8;
const MASK: u64 = (1 << BITS) - 1;

/// Packed exponent vector.
pub type Monomial = u64;

pub fn exponent(m: Monomial, j: usize) -> u32 {
    ((m >> (BITS * j as u32)) & MASK) as u32
}

pub fn var_monomial(j: usize) -> Monomial {
    1 << (BITS * j as u32)
}

/// Total degree in the variables (half the internal degree).
pub fn total_degree(m: Monomial, nvars: usize) -> u32 {
    (0..nvars).map(|j| exponent(m, j)).sum()
}

fn mono_mul(a: Monomial, b: Monomial) -> Monomial {
    debug_assert!((0..MAX_VARS).all(|j| exponent(a, j) + exponent(b, j) <= MASK as u32), "exponent overflow");
    a + b
}

/// All monomials of the given total degree in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, total: u32) -> Vec<Monomial> {
    fn rec(j: usize, nvars: usize, left: u32, acc: Monomial, out: &mut Vec<Monomial>) {
        if j + 1 == nvars {
            out.push(acc + ((left as u64) << (BITS * j as u32)));
            return;
        }
        for e in 0..=left {
            rec(j + 1, nvars, left - e, acc + ((e as u64) << (BITS * j as u32)), out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if total == 0 {
            out.push(0);
        }
        return out;
    }
    rec(0, nvars, total, 0, &mut out);
    out
}

/// Number of monomials of total degree `total` in `nvars` variables.
pub fn count_monomials(nvars: usize, total: u32) -> usize {
    if nvars == 0 {
        return (total == 0) as usize;
    }
    // C(total + nvars − 1, nvars − 1)
    let (n, k) = (total as u128 + nvars as u128 - 1, nvars as u128 - 1);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r as usize
}

/// A polynomial with coefficients in ℚ(√5).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(0, c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Coeff::from_i64(n))
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn var(j: usize) -> Self {
        Self::term(var_monomial(j), Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    /// `Σ c_j x_j`.
    pub fn linear(coeffs: &[Coeff]) -> Self {
        let mut p = Poly::zero();
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(var_monomial(j), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Coeff)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Monomial) -> Coeff {
        self.terms.get(&m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(0)
    }

    /// Internal degree of a homogeneous polynomial (`None` for zero).
    pub fn degree(&self, nvars: usize) -> Option<i32> {
        self.terms.keys().next().map(|&m| 2 * total_degree(m, nvars) as i32)
    }

    pub fn is_homogeneous(&self, nvars: usize) -> bool {
        let mut degs = self.terms.keys().map(|&m| total_degree(m, nvars));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (&m, c) in &o.terms {
            r.add_term(m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (&m, c) in &o.terms {
            r.add_term(m, c.neg());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (&m1, c1) in &self.terms {
            for (&m2, c2) in &o.terms {
                r.add_term(mono_mul(m1, m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn mul_monomial(&self, m: Monomial, c: &Coeff) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, x)| (mono_mul(*k, m), x.mul(c))).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Homogeneous component of total degree `t`.
    pub fn component(&self, t: u32, nvars: usize) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| total_degree(**m, nvars) == t).map(|(m, c)| (*m, c.clone())).collect() }
    }

    /// Substitute `x_j ↦ Σ_i mat[i][j] x_i`.
    pub fn substitute(&self, mat: &Matrix<Coeff>) -> Poly {
        let n = mat.rows();
        let images: Vec<Poly> = (0..n).map(|j| Poly::linear(&mat.col(j))).collect();
        let mut r = Poly::zero();
        for (&m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (j, img) in images.iter().enumerate() {
                let e = exponent(m, j);
                if e > 0 {
                    t = t.mul(&img.pow(e));
                }
            }
            r = r.add(&t);
        }
        r
    }

    pub fn to_string_with(&self, nvars: usize) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = (0..nvars)
                .filter_map(|j| match exponent(m, j) {
                    0 => None,
                    1 => Some(format!("x{}", j + 1)),
                    e => Some(format!("x{}^{e}", j + 1)),
                })
                .collect();
            let mono = mono.join("*");
            let cs = c.to_string();
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(MAX_VARS))
    }
}

/// A dense matrix of polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.data[i * self.cols + j]
    }
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Poly::one();
        }
        m
    }

    pub fn scalar(n: usize, p: &Poly) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = p.clone();
        }
        m
    }

    pub fn from_constant(m: &Matrix<Coeff>) -> Self {
        let mut r = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                r[(i, j)] = Poly::constant(m[(i, j)].clone());
            }
        }
        r
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in polynomial matrix product");
        let mut r = PolyMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let prod = a.mul(b);
                        r[(i, j)] = r[(i, j)].add(&prod);
                    }
                }
            }
        }
        r
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn scale_poly(&self, p: &Poly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(p)).collect() }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &PolyMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn direct_sum(&self, o: &PolyMatrix) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(self.rows + o.rows, self.cols + o.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, o);
        m
    }

    /// Constant terms.
    pub fn at_zero(&self) -> Matrix<Coeff> {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].constant_term();
            }
        }
        m
    }

    /// Inverse of a matrix `C + N` whose constant part `C` is invertible and
    /// whose non-constant part `N` makes `C⁻¹N` nilpotent (true for degree-0
    /// maps between graded free modules).
    pub fn inverse_unipotent(&self) -> Option<PolyMatrix> {
        let c = self.at_zero();
        let cinv = c.inverse()?;
        let cinv_p = PolyMatrix::from_constant(&cinv);
        let n = self.sub(&PolyMatrix::from_constant(&c));
        let step = cinv_p.mul(&n).scale(&Coeff::from_i64(-1));
        let mut term = PolyMatrix::identity(self.rows);
        let mut sum = PolyMatrix::identity(self.rows);
        for _ in 0..=self.rows {
            term = term.mul(&step);
            if term.is_zero() {
                return Some(sum.mul(&cinv_p));
            }
            sum = sum.add(&term);
        }
        None
    }
}

/// The polynomial ring of a Coxeter system's realization, with cached
/// reflections and Demazure operators.
pub struct Ring {
    sys: Arc<CoxeterSystem>,
    nvars: usize,
    roots: Vec<Poly>,
    demazure_cache: Vec<Mutex<HashMap<Monomial, Poly>>>,
    reflect_cache: Vec<Mutex<HashMap<Monomial, Poly>>>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({}, {} variables)", self.sys.name(), self.nvars)
    }
}

static RINGS: OnceLock<Mutex<HashMap<u64, Arc<Ring>>>> = OnceLock::new();

impl Ring {
    /// The ring attached to a system; one shared instance per system.
    pub fn of(sys: &Arc<CoxeterSystem>) -> Arc<Ring> {
        let cache = RINGS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("ring cache");
        guard
            .entry(sys.id())
            .or_insert_with(|| {
                let r = sys.realization();
                assert!(r.rank <= MAX_VARS, "at most {MAX_VARS} variables are supported");
                Arc::new(Ring {
                    sys: sys.clone(),
                    nvars: r.rank,
                    roots: r.roots.iter().map(|a| Poly::linear(a)).collect(),
                    demazure_cache: (0..sys.rank()).map(|_| Mutex::new(HashMap::new())).collect(),
                    reflect_cache: (0..sys.rank()).map(|_| Mutex::new(HashMap::new())).collect(),
                })
            })
            .clone()
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn same(&self, o: &Ring) -> bool {
        self.sys.id() == o.sys.id()
    }

    /// `α_s`.
    pub fn root(&self, s: usize) -> &Poly {
        &self.roots[s]
    }

    fn pairing(&self, s: usize, j: usize) -> &Coeff {
        &self.sys.realization().coroots[s][j]
    }

    /// `s(x_j) = x_j − ⟨x_j, α_s^∨⟩ α_s`.
    fn reflect_var(&self, s: usize, j: usize) -> Poly {
        Poly::var(j).sub(&self.roots[s].scale(self.pairing(s, j)))
    }

    fn reflect_monomial(&self, s: usize, m: Monomial) -> Poly {
        if m == 0 {
            return Poly::one();
        }
        if let Some(p) = self.reflect_cache[s].lock().expect("cache").get(&m) {
            return p.clone();
        }
        let j = (0..self.nvars).find(|&j| exponent(m, j) > 0).expect("nonconstant monomial");
        let rest = m - var_monomial(j);
        let p = self.reflect_var(s, j).mul(&self.reflect_monomial(s, rest));
        self.reflect_cache[s].lock().expect("cache").insert(m, p.clone());
        p
    }

    /// The simple reflection `s` applied to `f`.
    pub fn reflect(&self, s: usize, f: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in f.terms() {
            r = r.add(&self.reflect_monomial(s, m).scale(c));
        }
        r
    }

    /// `w · f`, by linear substitution with the reflection matrix of `w`.
    pub fn act(&self, w: Element, f: &Poly) -> Poly {
        self.sys.word(w).iter().rev().fold(f.clone(), |acc, &s| self.reflect(s, &acc))
    }

    fn demazure_monomial(&self, s: usize, m: Monomial) -> Poly {
        if m == 0 {
            return Poly::zero();
        }
        if let Some(p) = self.demazure_cache[s].lock().expect("cache").get(&m) {
            return p.clone();
        }
        // ∂(x_j·m') = ⟨x_j, α_s^∨⟩·m' + s(x_j)·∂(m')
        let j = (0..self.nvars).find(|&j| exponent(m, j) > 0).expect("nonconstant monomial");
        let rest = m - var_monomial(j);
        let p = Poly::term(rest, self.pairing(s, j).clone())
            .add(&self.reflect_var(s, j).mul(&self.demazure_monomial(s, rest)));
        self.demazure_cache[s].lock().expect("cache").insert(m, p.clone());
        p
    }

    /// The Demazure operator `∂_s f = (f − s f)/α_s`.
    pub fn demazure(&self, s: usize, f: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in f.terms() {
            r = r.add(&self.demazure_monomial(s, m).scale(c));
        }
        r
    }

    /// The s-invariant pair `(A, B)` with `f = A + B·α_s`.
    pub fn split(&self, s: usize, f: &Poly) -> (Poly, Poly) {
        let half = Coeff::rational(Q::new(1, 2));
        let a = f.add(&self.reflect(s, f)).scale(&half);
        let b = self.demazure(s, f).scale(&half);
        (a, b)
    }

    /// Dimension of the degree-`d` piece (internal degree).
    pub fn dim(&self, d: i32) -> usize {
        if d < 0 || d % 2 != 0 {
            0
        } else {
            count_monomials(self.nvars, (d / 2) as u32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(count_monomials(3, 2), 6);
        assert_eq!(monomials_of_degree(1, 0), vec![0]);
    }

    #[test]
    fn demazure_examples() {
        let sys = CoxeterSystem::named("A2").unwrap();
        let r = Ring::of(&sys);
        assert!(r.demazure(0, &Poly::one()).is_zero());
        assert_eq!(r.demazure(0, r.root(0)), Poly::int(2));
        // ∂_s f · α_s = f − s f
        let f = Poly::var(0).pow(2).mul(&Poly::var(1)).add(&Poly::var(1).pow(3));
        let d = r.demazure(0, &f);
        assert_eq!(d.mul(r.root(0)), f.sub(&r.reflect(0, &f)));
        assert_eq!(r.reflect(0, &d), d);
    }

    #[test]
    fn dihedral_five_demazure_is_exact() {
        let sys = CoxeterSystem::named("I2(5)").unwrap();
        let r = Ring::of(&sys);
        let f = Poly::var(0).mul(&Poly::var(1)).mul(&Poly::var(1));
        for s in 0..2 {
            let d = r.demazure(s, &f);
            assert_eq!(d.mul(r.root(s)), f.sub(&r.reflect(s, &f)));
        }
    }

    #[test]
    fn act_matches_matrix_substitution() {
        let sys = CoxeterSystem::named("B2").unwrap();
        let r = Ring::of(&sys);
        let f = Poly::var(0).pow(2).add(&Poly::var(0).mul(&Poly::var(1)));
        for w in sys.enumerate() {
            assert_eq!(r.act(w, &f), f.substitute(sys.matrix(w)));
        }
        assert_eq!(r.reflect(0, r.root(0)), r.root(0).neg());
    }

    #[test]
    fn unipotent_inverse() {
        let mut m = PolyMatrix::identity(2);
        m[(0, 1)] = Poly::var(0);
        let inv = m.inverse_unipotent().unwrap();
        assert_eq!(m.mul(&inv), PolyMatrix::identity(2));
    }
}
