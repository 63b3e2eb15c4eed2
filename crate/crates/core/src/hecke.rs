//! The Hecke algebra of a finite Coxeter system over `ℤ[v, v⁻¹]`.
//!
//! Normalization: `H_s² = 1 + (v⁻¹ − v) H_s`, so `H_s⁻¹ = H_s + v − v⁻¹`, and
//! the Kazhdan–Lusztig generator is `b_s = H_s + v`. A grading shift `⟨1⟩` of
//! bimodules corresponds to multiplication by `v`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::coxeter::{CoxeterSystem, Element};
use crate::laurent::{Laurent2, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("operands are expressed in different bases")]
    BasisMismatch,
    #[error("operands belong to different Coxeter systems")]
    SystemMismatch,
    #[error("the Jones–Ocneanu trace needs the type A system on {0} strands")]
    NotTypeA(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Basis {
    /// The standard basis `H_w`.
    Standard,
    /// The Kazhdan–Lusztig basis `b_w`.
    KazhdanLusztig,
}

/// A finite combination of basis elements with Laurent polynomial coefficients.
#[derive(Clone)]
pub struct HeckeElement {
    sys: Arc<CoxeterSystem>,
    basis: Basis,
    coeffs: BTreeMap<usize, LaurentPoly>,
}

impl PartialEq for HeckeElement {
    fn eq(&self, o: &Self) -> bool {
        self.sys.id() == o.sys.id() && self.basis == o.basis && self.coeffs == o.coeffs
    }
}

impl Eq for HeckeElement {}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.basis {
            Basis::Standard => "H",
            Basis::KazhdanLusztig => "b",
        };
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(&w, p)| format!("({p}){sym}_{}", self.sys.word_compact(self.sys.element(w))))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl HeckeElement {
    pub fn zero(sys: &Arc<CoxeterSystem>, basis: Basis) -> Self {
        HeckeElement { sys: sys.clone(), basis, coeffs: BTreeMap::new() }
    }

    pub fn one(sys: &Arc<CoxeterSystem>) -> Self {
        Self::standard(sys, sys.identity())
    }

    /// `H_w`.
    pub fn standard(sys: &Arc<CoxeterSystem>, w: Element) -> Self {
        Self::monomial(sys, Basis::Standard, w, LaurentPoly::one())
    }

    pub fn monomial(sys: &Arc<CoxeterSystem>, basis: Basis, w: Element, p: LaurentPoly) -> Self {
        let mut h = Self::zero(sys, basis);
        h.add_term(w.index(), &p);
        h
    }

    /// `b_w` written in the standard basis.
    pub fn kl(sys: &Arc<CoxeterSystem>, w: Element) -> Self {
        let table = kl_table(sys);
        HeckeElement { sys: sys.clone(), basis: Basis::Standard, coeffs: table[w.index()].clone() }
    }

    /// `b_{s_1} ⋯ b_{s_k}` in the standard basis.
    pub fn bs_product(sys: &Arc<CoxeterSystem>, word: &[usize]) -> Self {
        word.iter().fold(Self::one(sys), |acc, &s| acc.mul(&Self::kl(sys, sys.generator(s))).expect("same system"))
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, w: Element) -> LaurentPoly {
        self.coeffs.get(&w.index()).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Element, &LaurentPoly)> {
        self.coeffs.iter().map(|(&w, p)| (self.sys.element(w), p))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, w: usize, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.coeffs.entry(w).or_default();
        *e = &*e + p;
        if e.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    fn compatible(&self, o: &Self) -> Result<(), HeckeError> {
        if self.sys.id() != o.sys.id() {
            return Err(HeckeError::SystemMismatch);
        }
        if self.basis != o.basis {
            return Err(HeckeError::BasisMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, HeckeError> {
        self.compatible(o)?;
        let mut r = self.clone();
        for (&w, p) in &o.coeffs {
            r.add_term(w, p);
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, HeckeError> {
        self.add(&o.scale(&LaurentPoly::monomial(-1, 0)))
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut r = Self::zero(&self.sys, self.basis);
        for (&w, c) in &self.coeffs {
            r.add_term(w, &(c * p));
        }
        r
    }

    /// `H_s · self`.
    fn left_mul_gen(&self, s: usize) -> Self {
        let z = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
        let mut r = Self::zero(&self.sys, Basis::Standard);
        for (&w, p) in &self.coeffs {
            let we = self.sys.element(w);
            let sw = self.sys.left_mul(s, we);
            r.add_term(sw.index(), p);
            if self.sys.length(sw) < self.sys.length(we) {
                r.add_term(w, &(p * &z));
            }
        }
        r
    }

    /// Product in the standard basis.
    pub fn mul(&self, o: &Self) -> Result<Self, HeckeError> {
        self.compatible(o)?;
        if self.basis != Basis::Standard {
            return Err(HeckeError::BasisMismatch);
        }
        let mut r = Self::zero(&self.sys, Basis::Standard);
        for (&u, p) in &self.coeffs {
            let word = self.sys.word(self.sys.element(u)).to_vec();
            let mut acc = o.clone();
            for &s in word.iter().rev() {
                acc = acc.left_mul_gen(s);
            }
            for (&w, q) in &acc.coeffs {
                r.add_term(w, &(p * q));
            }
        }
        Ok(r)
    }

    /// The bar involution `v ↦ v⁻¹`, `H_w ↦ (H_{w⁻¹})⁻¹` (standard basis).
    pub fn bar(&self) -> Self {
        assert_eq!(self.basis, Basis::Standard, "bar is computed in the standard basis");
        let mut r = Self::zero(&self.sys, Basis::Standard);
        for (&w, p) in &self.coeffs {
            let bw = bar_standard(&self.sys, w);
            for (&x, q) in &bw {
                r.add_term(x, &(&p.bar() * q));
            }
        }
        r
    }

    /// The anti-involution `H_w ↦ H_{w⁻¹}` fixing `v`.
    pub fn anti_involution(&self) -> Self {
        let mut r = Self::zero(&self.sys, self.basis);
        for (&w, p) in &self.coeffs {
            r.add_term(self.sys.inverse(self.sys.element(w)).index(), p);
        }
        r
    }

    /// The coefficient of `H_e`.
    pub fn standard_trace(&self) -> LaurentPoly {
        assert_eq!(self.basis, Basis::Standard);
        self.coeff(self.sys.identity())
    }

    /// Rewrite a standard-basis element in the Kazhdan–Lusztig basis.
    pub fn to_kl_basis(&self) -> Self {
        assert_eq!(self.basis, Basis::Standard);
        let table = kl_table(&self.sys);
        let mut rest = self.coeffs.clone();
        let mut out = Self::zero(&self.sys, Basis::KazhdanLusztig);
        while let Some((&w, p)) = rest.iter().next_back() {
            let p = p.clone();
            out.add_term(w, &p);
            for (&x, h) in &table[w] {
                let e = rest.entry(x).or_default();
                *e = &*e - &(h * &p);
                if e.is_zero() {
                    rest.remove(&x);
                }
            }
        }
        out
    }

    /// Rewrite a Kazhdan–Lusztig-basis element in the standard basis.
    pub fn to_standard(&self) -> Self {
        if self.basis == Basis::Standard {
            return self.clone();
        }
        let table = kl_table(&self.sys);
        let mut r = Self::zero(&self.sys, Basis::Standard);
        for (&w, p) in &self.coeffs {
            for (&x, h) in &table[w] {
                r.add_term(x, &(h * p));
            }
        }
        r
    }
}

type Coeffs = BTreeMap<usize, LaurentPoly>;

fn bar_standard(sys: &Arc<CoxeterSystem>, w: usize) -> Coeffs {
    // H_w = H_s H_{sw} for the first letter s, so bar(H_w) = H_s⁻¹ bar(H_{sw})
    let word = sys.word(sys.element(w)).to_vec();
    let mut acc = HeckeElement::one(sys);
    let corr = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
    for &s in word.iter().rev() {
        let hs = acc.left_mul_gen(s);
        acc = hs.add(&acc.scale(&corr)).expect("same system");
    }
    acc.coeffs
}

static KL_TABLES: OnceLock<Mutex<HashMap<u64, Arc<Vec<Coeffs>>>>> = OnceLock::new();

/// Kazhdan–Lusztig basis of every element, in the standard basis. Computed
/// once per system and shared.
pub fn kl_table(sys: &Arc<CoxeterSystem>) -> Arc<Vec<Coeffs>> {
    let cache = KL_TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cache lock").get(&sys.id()) {
        return t.clone();
    }
    let table = Arc::new(compute_kl(sys));
    cache.lock().expect("cache lock").insert(sys.id(), table.clone());
    table
}

fn compute_kl(sys: &Arc<CoxeterSystem>) -> Vec<Coeffs> {
    let n = sys.order();
    let mut table: Vec<Coeffs> = Vec::with_capacity(n);
    table.push(BTreeMap::from([(0, LaurentPoly::one())]));
    for w in 1..n {
        let we = sys.element(w);
        let s = sys.word(we)[0];
        let wp = sys.left_mul(s, we);
        let bwp = HeckeElement { sys: sys.clone(), basis: Basis::Standard, coeffs: table[wp.index()].clone() };
        let mut b = bwp.left_mul_gen(s).add(&bwp.scale(&LaurentPoly::v())).expect("same system");
        for y in 0..wp.index() {
            let ye = sys.element(y);
            if !sys.is_left_descent(s, ye) {
                continue;
            }
            let mu = table[wp.index()].get(&y).map_or(0, |h| h.coeff(1));
            if mu != 0 {
                let by = HeckeElement { sys: sys.clone(), basis: Basis::Standard, coeffs: table[y].clone() };
                b = b.sub(&by.scale(&LaurentPoly::monomial(mu, 0))).expect("same system");
            }
        }
        table.push(b.coeffs);
    }
    table
}

/// `b_w` in the standard basis.
pub fn kl_basis(sys: &Arc<CoxeterSystem>, w: Element) -> HeckeElement {
    HeckeElement::kl(sys, w)
}

/// Graded rank of the Hom space between Soergel bimodules with characters `x`
/// and `y`: `τ(ω(x)·y)` with `τ(H_w) = δ_{w,e}` and `ω(H_w) = H_{w⁻¹}`. The
/// coefficient of `v^d` counts generators of degree-`d` maps.
pub fn hom_rank_pairing(x: &HeckeElement, y: &HeckeElement) -> Result<LaurentPoly, HeckeError> {
    let (x, y) = (x.to_standard(), y.to_standard());
    Ok(x.anti_involution().mul(&y)?.standard_trace())
}

/// Values of the Jones–Ocneanu trace as polynomials in the Markov parameter
/// `z'`: entry `k` is the coefficient of `z'^k`.
pub type TracePoly = Vec<LaurentPoly>;

fn trace_add(acc: &mut TracePoly, p: &TracePoly, scale: &LaurentPoly, shift: usize) {
    for (k, c) in p.iter().enumerate() {
        if acc.len() <= k + shift {
            acc.resize(k + shift + 1, LaurentPoly::zero());
        }
        acc[k + shift] = &acc[k + shift] + &(c * scale);
    }
    while acc.last().is_some_and(LaurentPoly::is_zero) {
        acc.pop();
    }
}

fn check_type_a(sys: &CoxeterSystem, strands: usize) -> Result<(), HeckeError> {
    if !sys.is_type_a() || sys.rank() + 1 != strands {
        return Err(HeckeError::NotTypeA(strands));
    }
    Ok(())
}

/// The Jones–Ocneanu trace: `tr(1) = 1` and `tr(x H_{n−1}) = z'·tr(x)` for `x`
/// in the subalgebra of `n − 1` strands.
pub fn jones_ocneanu_trace(x: &HeckeElement, strands: usize) -> Result<TracePoly, HeckeError> {
    let sys = x.sys.clone();
    check_type_a(&sys, strands)?;
    let x = x.to_standard();
    let mut memo: HashMap<(usize, usize), TracePoly> = HashMap::new();
    let mut out = TracePoly::new();
    for (&w, p) in &x.coeffs {
        let t = trace_element(&sys, w, strands, &mut memo);
        trace_add(&mut out, &t, p, 0);
    }
    Ok(out)
}

fn support_below(sys: &CoxeterSystem, w: usize, k: usize) -> bool {
    sys.word(sys.element(w)).iter().all(|&s| s + 1 < k)
}

fn trace_element(sys: &Arc<CoxeterSystem>, w: usize, k: usize, memo: &mut HashMap<(usize, usize), TracePoly>) -> TracePoly {
    if w == 0 {
        return vec![LaurentPoly::one()];
    }
    if support_below(sys, w, k - 1) {
        return trace_element(sys, w, k - 1, memo);
    }
    if let Some(t) = memo.get(&(w, k)) {
        return t.clone();
    }
    // w = u · s_{k−1} · u' with u, u' on k − 1 strands and lengths adding
    let top = k - 2;
    let we = sys.element(w);
    let lw = sys.length(we);
    let mut found = None;
    for u in sys.enumerate() {
        if !support_below(sys, u.index(), k - 1) {
            continue;
        }
        let rest = sys.multiply(sys.inverse(u), we).expect("same system");
        if sys.length(rest) + sys.length(u) != lw || !sys.is_left_descent(top, rest) {
            continue;
        }
        let up = sys.left_mul(top, rest);
        if support_below(sys, up.index(), k - 1) {
            found = Some((u, up));
            break;
        }
    }
    let (u, up) = found.expect("every element outside the parabolic factors through the top generator");
    let prod = HeckeElement::standard(sys, up).mul(&HeckeElement::standard(sys, u)).expect("same system");
    let mut out = TracePoly::new();
    for (&y, p) in &prod.coeffs {
        let t = trace_element(sys, y, k - 1, memo);
        trace_add(&mut out, &t, p, 1);
    }
    memo.insert((w, k), out.clone());
    out
}

/// Image of a braid word in the Hecke algebra: `σ_i ↦ H_i`, `σ_i⁻¹ ↦ H_i⁻¹`.
pub fn braid_element(sys: &Arc<CoxeterSystem>, braid: &[(usize, bool)]) -> HeckeElement {
    let inv_corr = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
    let mut acc = HeckeElement::one(sys);
    for &(s, inverse) in braid {
        let mut g = HeckeElement::standard(sys, sys.generator(s));
        if inverse {
            g = g.add(&HeckeElement::one(sys).scale(&inv_corr)).expect("same system");
        }
        acc = acc.mul(&g).expect("same system");
    }
    acc
}

/// The HOMFLY-PT polynomial of a braid closure in the variables `(a, z)`,
/// normalized by `P(unknot) = 1` and `a P(L₊) − a⁻¹ P(L₋) = z P(L₀)`.
///
/// With `c_k` the trace coefficients and `δ = (a − a⁻¹)/z`,
/// `P = a^{−writhe} Σ_k c_k a^k δ^{n−1−k}`, where each `c_k` is a polynomial
/// in `z = v⁻¹ − v`.
pub fn homfly_pt(sys: Option<&Arc<CoxeterSystem>>, strands: usize, braid: &[(usize, bool)]) -> Result<Laurent2, HeckeError> {
    let names = ("a", "z");
    let Some(sys) = sys else {
        if strands == 1 && braid.is_empty() {
            return Ok(Laurent2::one(names));
        }
        return Err(HeckeError::NotTypeA(strands));
    };
    let trace = jones_ocneanu_trace(&braid_element(sys, braid), strands)?;
    let writhe: i32 = braid.iter().map(|&(_, inv)| if inv { -1 } else { 1 }).sum();
    // δ^j = (a − a⁻¹)^j z^{−j}
    let a_diff = {
        let mut d = Laurent2::zero(names);
        d.add_term(1, 0, 1);
        d.add_term(-1, 0, -1);
        d
    };
    let mut total = Laurent2::zero(names);
    for (k, c) in trace.iter().enumerate() {
        let zc = c.to_z_poly().expect("trace coefficients are polynomials in z");
        let mut cz = Laurent2::zero(names);
        for (j, &x) in zc.iter().enumerate() {
            cz.add_term(0, j as i32, x);
        }
        let j = (strands - 1 - k) as i32;
        let term = &(&cz * &a_diff.pow(j as u32)) * &Laurent2::monomial(names, 1, k as i32 - writhe, -j);
        total = &total + &term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Arc<CoxeterSystem> {
        CoxeterSystem::named("A2").unwrap()
    }

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn quadratic_relation() {
        let w = a2();
        let hs = HeckeElement::standard(&w, w.generator(0));
        let sq = hs.mul(&hs).unwrap();
        let expect = HeckeElement::one(&w).add(&hs.scale(&lp(&[(-1, 1), (1, -1)]))).unwrap();
        assert_eq!(sq, expect);
        assert_eq!(HeckeElement::one(&w).mul(&hs).unwrap(), hs);
    }

    #[test]
    fn kl_examples() {
        let w = a2();
        assert_eq!(kl_basis(&w, w.identity()), HeckeElement::one(&w));
        let bs = kl_basis(&w, w.generator(0));
        assert_eq!(bs.coeff(w.identity()), LaurentPoly::v());
        let top = w.longest();
        let b = kl_basis(&w, top);
        for x in w.enumerate() {
            let e = (w.length(top) - w.length(x)) as i32;
            assert_eq!(b.coeff(x), LaurentPoly::monomial(1, e));
        }
    }

    #[test]
    fn kl_is_bar_invariant() {
        for name in ["A1", "A2", "B2", "I2(5)", "A3"] {
            let w = CoxeterSystem::named(name).unwrap();
            for x in w.enumerate() {
                let b = kl_basis(&w, x);
                assert_eq!(b.bar(), b, "{name} {}", w.word_compact(x));
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let w = a2();
        let (be, bs) = (kl_basis(&w, w.identity()), kl_basis(&w, w.generator(0)));
        assert_eq!(hom_rank_pairing(&be, &be).unwrap(), LaurentPoly::one());
        assert_eq!(hom_rank_pairing(&bs, &be).unwrap(), LaurentPoly::v());
        assert_eq!(hom_rank_pairing(&bs, &bs).unwrap(), lp(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn kl_basis_round_trip() {
        let w = a2();
        let x = HeckeElement::bs_product(&w, &[0, 1, 0]);
        let k = x.to_kl_basis();
        assert_eq!(k.coeff(w.longest()), LaurentPoly::one());
        assert_eq!(k.coeff(w.generator(0)), LaurentPoly::one());
        assert_eq!(k.to_standard(), x);
    }

    #[test]
    fn trace_examples() {
        let w = CoxeterSystem::named("A1").unwrap();
        let t = jones_ocneanu_trace(&HeckeElement::one(&w), 2).unwrap();
        assert_eq!(t, vec![LaurentPoly::one()]);
        let hs = HeckeElement::standard(&w, w.generator(0));
        assert_eq!(jones_ocneanu_trace(&hs, 2).unwrap(), vec![LaurentPoly::zero(), LaurentPoly::one()]);
        assert!(jones_ocneanu_trace(&hs, 3).is_err());
        assert_eq!(homfly_pt(Some(&w), 2, &[(0, false)]).unwrap(), Laurent2::one(("a", "z")));
        assert_eq!(homfly_pt(None, 1, &[]).unwrap(), Laurent2::one(("a", "z")));
    }

    #[test]
    fn trefoil() {
        let w = CoxeterSystem::named("A1").unwrap();
        let p = homfly_pt(Some(&w), 2, &[(0, false); 3]).unwrap();
        let mut expect = Laurent2::zero(("a", "z"));
        expect.add_term(-2, 0, 2);
        expect.add_term(-4, 0, -1);
        expect.add_term(-2, 2, 1);
        assert_eq!(p, expect);
    }
}
