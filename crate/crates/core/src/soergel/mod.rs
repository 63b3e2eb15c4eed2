//! Soergel bimodules as free left modules with explicit right actions.
//!
//! A bimodule has a left basis `b_1, …, b_r` with internal degrees `d_i` and,
//! for every ring variable `x_k`, a matrix `P_k` with `b_i · x_k = Σ_l (P_k)_{il} b_l`
//! (coefficients acting from the left). Maps are stored the same way:
//! `f(b_i) = Σ_l F_{il} c_l`, so the composite "first `f`, then `g`" has
//! matrix `F·G` and `f` is a bimodule map iff `P_k F = F Q_k` for all `k`.
//!
//! Degree conventions: `B⟨k⟩` lowers every basis degree by `k`, the character
//! satisfies `ch(B⟨1⟩) = v·ch(B)`, and a degree-`d` map raises degrees by `d`.

mod decompose;
mod hom;

use std::fmt;
use std::sync::Arc;

use crate::coxeter::CoxeterSystem;
use crate::hecke::{Basis, HeckeElement};
use crate::laurent::LaurentPoly;
use crate::poly::{var_monomial, Monomial, Poly, PolyMatrix, Ring};
use crate::scalar::Coeff;

pub use decompose::{
    canonical_indecomposable, character_via_hom, decompose, Decomposition, Indecomposable, SplitPiece, Summand,
};
pub use hom::{graded_hom_rank, graded_hom_rank_with_window, hom_degree, hom_dimension, HomWindow, WINDOW_ENV};
pub(crate) use hom::{coeff_rank, kernel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SoergelError {
    #[error("bimodules live over different rings")]
    RingMismatch,
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("bimodule data is inconsistent: {0}")]
    Invalid(String),
    #[error("Hilbert series division left a remainder within degree window {window}")]
    WindowTooSmall { window: i32 },
    #[error("idempotent splitting did not exhaust the bimodule: {0}")]
    NonSemiperfect(String),
}

/// A graded bimodule, free as a left module.
#[derive(Clone)]
pub struct Bimodule {
    ring: Arc<Ring>,
    labels: Vec<String>,
    degrees: Vec<i32>,
    action: Vec<PolyMatrix>,
    character: Option<HeckeElement>,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bimodule(rank {}, degrees {:?})", self.rank(), self.degrees)
    }
}

impl PartialEq for Bimodule {
    fn eq(&self, o: &Self) -> bool {
        self.ring.same(&o.ring) && self.degrees == o.degrees && self.action == o.action
    }
}

impl Bimodule {
    /// Validate and build. Checks shapes, homogeneity and that the right
    /// actions commute.
    pub fn new(
        ring: Arc<Ring>,
        labels: Vec<String>,
        degrees: Vec<i32>,
        action: Vec<PolyMatrix>,
    ) -> Result<Self, SoergelError> {
        let r = degrees.len();
        let n = ring.nvars();
        if labels.len() != r || action.len() != n {
            return Err(SoergelError::Invalid("label, degree or action count".into()));
        }
        for (k, p) in action.iter().enumerate() {
            if p.rows() != r || p.cols() != r {
                return Err(SoergelError::Invalid(format!("action of x{} has the wrong shape", k + 1)));
            }
            for i in 0..r {
                for l in 0..r {
                    let e = &p[(i, l)];
                    if !e.is_zero() && (!e.is_homogeneous(n) || e.degree(n) != Some(degrees[i] + 2 - degrees[l])) {
                        return Err(SoergelError::Invalid(format!("action of x{} is not homogeneous at ({i}, {l})", k + 1)));
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if action[a].mul(&action[b]) != action[b].mul(&action[a]) {
                    return Err(SoergelError::Invalid(format!("actions of x{} and x{} do not commute", a + 1, b + 1)));
                }
            }
        }
        Ok(Bimodule { ring, labels, degrees, action, character: None })
    }

    /// The regular bimodule `R`.
    pub fn unit(ring: &Arc<Ring>) -> Self {
        let action = (0..ring.nvars()).map(|k| PolyMatrix::scalar(1, &Poly::var(k))).collect();
        let sys = ring.system().clone();
        Bimodule {
            ring: ring.clone(),
            labels: vec!["1".into()],
            degrees: vec![0],
            action,
            character: Some(HeckeElement::one(&sys)),
        }
    }

    /// The zero bimodule.
    pub fn zero(ring: &Arc<Ring>) -> Self {
        let action = (0..ring.nvars()).map(|_| PolyMatrix::zeros(0, 0)).collect();
        let sys = ring.system().clone();
        Bimodule { ring: ring.clone(), labels: vec![], degrees: vec![], action, character: Some(HeckeElement::zero(&sys, Basis::Standard)) }
    }

    /// `B_s = R ⊗_{R^s} R ⟨1⟩` with basis `1⊗1` (degree −1) and `1⊗α_s` (degree 1).
    pub fn b_s(ring: &Arc<Ring>, s: usize) -> Self {
        let n = ring.nvars();
        let alpha = ring.root(s).clone();
        let mut action = Vec::with_capacity(n);
        for k in 0..n {
            let xk = Poly::var(k);
            let mut p = PolyMatrix::zeros(2, 2);
            let (a0, b0) = ring.split(s, &xk);
            let (a1, b1) = ring.split(s, &alpha.mul(&xk));
            p[(0, 0)] = a0;
            p[(0, 1)] = b0;
            p[(1, 0)] = a1;
            p[(1, 1)] = b1;
            action.push(p);
        }
        let sys = ring.system().clone();
        Bimodule {
            ring: ring.clone(),
            labels: vec!["1".into(), "α".into()],
            degrees: vec![-1, 1],
            action,
            character: Some(HeckeElement::kl(&sys, sys.generator(s))),
        }
    }

    /// `BS(s_1 ⋯ s_k) = B_{s_1} ⊗_R ⋯ ⊗_R B_{s_k}`.
    pub fn bott_samelson(ring: &Arc<Ring>, word: &[usize]) -> Result<Self, SoergelError> {
        let sys = ring.system();
        if let Some(&s) = word.iter().find(|&&s| s >= sys.rank()) {
            return Err(SoergelError::UnknownGenerator(format!("index {s}")));
        }
        let mut b = Bimodule::unit(ring);
        for &s in word {
            b = b.tensor(&Bimodule::b_s(ring, s))?;
        }
        if !word.is_empty() {
            b.labels = (0..b.rank())
                .map(|i| (0..word.len()).rev().map(|p| if (i >> p) & 1 == 1 { 'α' } else { '1' }).collect())
                .collect();
        }
        Ok(b)
    }

    /// Parse a word for the ring's system and build its Bott–Samelson bimodule.
    pub fn bott_samelson_str(ring: &Arc<Ring>, word: &str) -> Result<Self, SoergelError> {
        let w = ring.system().parse_word(word).map_err(|e| SoergelError::UnknownGenerator(e.to_string()))?;
        Self::bott_samelson(ring, &w)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        self.ring.system()
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn action(&self, k: usize) -> &PolyMatrix {
        &self.action[k]
    }

    /// The character recorded while building (Bott–Samelson, shifts, sums, tensors).
    pub fn character(&self) -> Option<&HeckeElement> {
        self.character.as_ref()
    }

    pub(crate) fn with_character(mut self, ch: Option<HeckeElement>) -> Self {
        self.character = ch;
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rank());
        self.labels = labels;
        self
    }

    /// Graded left rank `Σ v^{−d_i}`.
    pub fn graded_rank(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.degrees.iter().map(|&d| (-d, 1)))
    }

    /// `B⟨k⟩`.
    pub fn shift(&self, k: i32) -> Bimodule {
        let mut b = self.clone();
        for d in b.degrees.iter_mut() {
            *d -= k;
        }
        b.character = self.character.as_ref().map(|c| c.scale(&LaurentPoly::monomial(1, k)));
        b
    }

    pub fn direct_sum(&self, o: &Bimodule) -> Result<Bimodule, SoergelError> {
        if !self.ring.same(&o.ring) {
            return Err(SoergelError::RingMismatch);
        }
        let mut labels = self.labels.clone();
        labels.extend(o.labels.iter().cloned());
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&o.degrees);
        let action = self.action.iter().zip(&o.action).map(|(a, b)| a.direct_sum(b)).collect();
        let character = match (&self.character, &o.character) {
            (Some(a), Some(b)) => a.add(b).ok(),
            _ => None,
        };
        Ok(Bimodule { ring: self.ring.clone(), labels, degrees, action, character })
    }

    /// Right action matrix of an arbitrary polynomial.
    pub fn right_action(&self, f: &Poly) -> PolyMatrix {
        let mut cache: std::collections::HashMap<Monomial, PolyMatrix> = std::collections::HashMap::new();
        let mut r = PolyMatrix::zeros(self.rank(), self.rank());
        for (m, c) in f.terms() {
            let pm = self.monomial_action(m, &mut cache);
            r = r.add(&pm.scale(c));
        }
        r
    }

    fn monomial_action(&self, m: Monomial, cache: &mut std::collections::HashMap<Monomial, PolyMatrix>) -> PolyMatrix {
        if m == 0 {
            return PolyMatrix::identity(self.rank());
        }
        if let Some(p) = cache.get(&m) {
            return p.clone();
        }
        let n = self.ring.nvars();
        let j = (0..n).find(|&j| crate::poly::exponent(m, j) > 0).expect("nonconstant monomial");
        let rest = self.monomial_action(m - var_monomial(j), cache);
        let p = self.action[j].mul(&rest);
        cache.insert(m, p.clone());
        p
    }

    /// `B ⊗_R C` with basis `b_i ⊗ c_j` (index `i·rank(C) + j`).
    pub fn tensor(&self, c: &Bimodule) -> Result<Bimodule, SoergelError> {
        if !self.ring.same(&c.ring) {
            return Err(SoergelError::RingMismatch);
        }
        let (rb, rc) = (self.rank(), c.rank());
        let mut labels = Vec::with_capacity(rb * rc);
        let mut degrees = Vec::with_capacity(rb * rc);
        for i in 0..rb {
            for j in 0..rc {
                labels.push(format!("{}⊗{}", self.labels[i], c.labels[j]));
                degrees.push(self.degrees[i] + c.degrees[j]);
            }
        }
        let mut cache = std::collections::HashMap::new();
        let mut action = Vec::with_capacity(self.ring.nvars());
        for q in &c.action {
            let mut p = PolyMatrix::zeros(rb * rc, rb * rc);
            for j in 0..rc {
                for l in 0..rc {
                    let e = &q[(j, l)];
                    if e.is_zero() {
                        continue;
                    }
                    // (b_i ⊗ c_j)·x = Σ_l (b_i · q_jl) ⊗ c_l
                    let mut rho = PolyMatrix::zeros(rb, rb);
                    for (m, coef) in e.terms() {
                        rho = rho.add(&self.monomial_action(m, &mut cache).scale(coef));
                    }
                    for i in 0..rb {
                        for mm in 0..rb {
                            let x = &rho[(i, mm)];
                            if !x.is_zero() {
                                p[(i * rc + j, mm * rc + l)] = x.clone();
                            }
                        }
                    }
                }
            }
            action.push(p);
        }
        let character = match (&self.character, &c.character) {
            (Some(a), Some(b)) => a.mul(b).ok(),
            _ => None,
        };
        Ok(Bimodule { ring: self.ring.clone(), labels, degrees, action, character })
    }
}

/// `B ⊗_R C`.
pub fn tensor_bimod(b: &Bimodule, c: &Bimodule) -> Result<Bimodule, SoergelError> {
    b.tensor(c)
}

/// `BS(word)` for a system, using the system's shared ring.
pub fn bott_samelson(sys: &Arc<CoxeterSystem>, word: &[usize]) -> Result<Bimodule, SoergelError> {
    Bimodule::bott_samelson(&Ring::of(sys), word)
}

/// `∂_s f` in the system's ring.
pub fn demazure(sys: &Arc<CoxeterSystem>, s: usize, f: &Poly) -> Poly {
    Ring::of(sys).demazure(s, f)
}

/// A homogeneous bimodule map; `matrix` has `rank(source)` rows.
#[derive(Clone, Debug, PartialEq)]
pub struct BimoduleMap {
    pub degree: i32,
    pub matrix: PolyMatrix,
}

impl BimoduleMap {
    pub fn identity(b: &Bimodule) -> Self {
        BimoduleMap { degree: 0, matrix: PolyMatrix::identity(b.rank()) }
    }

    /// First `self`, then `then`.
    pub fn then(&self, then: &BimoduleMap) -> BimoduleMap {
        BimoduleMap { degree: self.degree + then.degree, matrix: self.matrix.mul(&then.matrix) }
    }

    /// Whether this is a homogeneous bimodule map `b → c` of its degree.
    pub fn is_map(&self, b: &Bimodule, c: &Bimodule) -> bool {
        let n = b.ring.nvars();
        if self.matrix.rows() != b.rank() || self.matrix.cols() != c.rank() {
            return false;
        }
        for i in 0..b.rank() {
            for l in 0..c.rank() {
                let e = &self.matrix[(i, l)];
                if !e.is_zero() && (!e.is_homogeneous(n) || e.degree(n) != Some(b.degrees[i] + self.degree - c.degrees[l])) {
                    return false;
                }
            }
        }
        b.action.iter().zip(&c.action).all(|(p, q)| p.mul(&self.matrix) == self.matrix.mul(q))
    }
}

/// Coefficient of the identity in an endomorphism known to be a scalar multiple of an idempotent `e`.
pub(crate) fn scalar_part(f: &PolyMatrix, e: &PolyMatrix) -> Coeff {
    use crate::scalar::Field;
    let te = e.at_zero().trace();
    f.at_zero().trace().div(&te)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Field, Q};

    fn a1() -> Arc<Ring> {
        Ring::of(&CoxeterSystem::named("A1").unwrap())
    }

    #[test]
    fn bott_samelson_shapes() {
        let r = a1();
        let b0 = Bimodule::bott_samelson(&r, &[]).unwrap();
        assert_eq!(b0, Bimodule::unit(&r));
        let b1 = Bimodule::bott_samelson(&r, &[0]).unwrap();
        assert_eq!(b1.degrees(), &[-1, 1]);
        assert_eq!(b1.graded_rank(), LaurentPoly::from_terms([(-1, 1), (1, 1)]));
        let b2 = Bimodule::bott_samelson(&r, &[0, 0]).unwrap();
        assert_eq!(b2.rank(), 4);
        assert_eq!(b2.graded_rank(), LaurentPoly::from_terms([(-1, 1), (1, 1)]).pow(2));
        assert!(Bimodule::bott_samelson(&r, &[1]).is_err());
    }

    #[test]
    fn right_action_of_root() {
        // 1⊗α = −α·(1⊗1) + 2δ with δ = (α⊗1 + 1⊗α)/2
        let r = a1();
        let b = Bimodule::b_s(&r, 0);
        let act = b.right_action(r.root(0));
        assert_eq!(act[(0, 0)], Poly::zero());
        assert_eq!(act[(0, 1)], Poly::one());
        let half = Coeff::rational(Q::new(1, 2));
        let delta = [r.root(0).scale(&half), Poly::constant(half.clone())];
        let combo = [r.root(0).neg().add(&delta[0].scale(&Coeff::from_i64(2))), delta[1].scale(&Coeff::from_i64(2))];
        assert_eq!(combo[0], act[(0, 0)]);
        assert_eq!(combo[1], act[(0, 1)]);
    }

    #[test]
    fn constructed_bimodules_validate() {
        for name in ["A2", "B2", "I2(5)"] {
            let sys = CoxeterSystem::named(name).unwrap();
            let r = Ring::of(&sys);
            let b = Bimodule::bott_samelson(&r, &[0, 1, 0]).unwrap();
            let checked = Bimodule::new(r.clone(), b.labels.clone(), b.degrees.clone(), b.action.clone());
            assert!(checked.is_ok(), "{name}");
        }
    }

    #[test]
    fn tensor_unit_and_characters() {
        let sys = CoxeterSystem::named("A2").unwrap();
        let r = Ring::of(&sys);
        let b = Bimodule::bott_samelson(&r, &[0, 1]).unwrap();
        assert_eq!(Bimodule::unit(&r).tensor(&b).unwrap(), b);
        let ss = Bimodule::bott_samelson(&r, &[0, 0]).unwrap();
        let bs = HeckeElement::kl(&sys, sys.generator(0));
        let expect = bs.scale(&LaurentPoly::from_terms([(-1, 1), (1, 1)]));
        assert_eq!(ss.character().unwrap(), &expect);
    }
}
