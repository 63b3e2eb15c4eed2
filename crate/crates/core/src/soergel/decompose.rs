//! Indecomposable Soergel bimodules and explicit direct sum decompositions.
//!
//! `B_y` is realized as the image of an idempotent `e_y` on `BS(y)` for the
//! lex-least reduced word of `y`: all summands `B_z⟨j⟩` with `z < y` are split
//! off greedily, and the remaining idempotent must have a one-dimensional
//! degree-0 endomorphism ring. Splitting uses the pairing
//! `Hom(B_z⟨j⟩, T) × Hom(T, B_z⟨j⟩) → End⁰(B_z) = ℚ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::hom::{graded_hom_rank, hom_degree};
use super::{scalar_part, Bimodule, BimoduleMap, SoergelError};
use crate::coxeter::{CoxeterSystem, Element};
use crate::hecke::HeckeElement;
use crate::laurent::LaurentPoly;
use crate::linalg::{Matrix, SparseEchelon};
use crate::poly::{PolyMatrix, Ring};
use crate::scalar::Coeff;

/// `B_y` with its realization inside `BS(y)`.
#[derive(Debug)]
pub struct Indecomposable {
    pub element: Element,
    /// `BS` of the lex-least reduced word of `element`.
    pub ambient: Bimodule,
    pub idempotent: PolyMatrix,
    /// Free left module spanned by the image of the idempotent.
    pub bimodule: Bimodule,
    /// `bimodule → ambient`.
    pub inclusion: PolyMatrix,
    /// `ambient → bimodule`.
    pub projection: PolyMatrix,
}

/// One summand `B_z⟨shift⟩` with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub element: Element,
    pub shift: i32,
    pub multiplicity: usize,
}

/// One split summand with its inclusion into and projection from the source.
#[derive(Debug, Clone)]
pub struct SplitPiece {
    pub element: Element,
    pub shift: i32,
    pub bimodule: Bimodule,
    pub inclusion: PolyMatrix,
    pub projection: PolyMatrix,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
    pub pieces: Vec<SplitPiece>,
}

impl Decomposition {
    /// `Σ m·v^j·b_z`, in the standard basis.
    pub fn character(&self, sys: &Arc<CoxeterSystem>) -> HeckeElement {
        let mut acc = HeckeElement::zero(sys, crate::hecke::Basis::Standard);
        for s in &self.summands {
            let term = HeckeElement::kl(sys, s.element).scale(&LaurentPoly::monomial(s.multiplicity as i64, s.shift));
            acc = acc.add(&term).expect("same system");
        }
        acc
    }

    /// Checks that the pieces are bimodule maps, `p_a ∘ i_b = δ_ab` and `Σ i_a ∘ p_a = id`.
    pub fn verify(&self, source: &Bimodule) -> bool {
        let mut total = PolyMatrix::zeros(source.rank(), source.rank());
        for (a, pa) in self.pieces.iter().enumerate() {
            let inc = BimoduleMap { degree: 0, matrix: pa.inclusion.clone() };
            let proj = BimoduleMap { degree: 0, matrix: pa.projection.clone() };
            if !inc.is_map(&pa.bimodule, source) || !proj.is_map(source, &pa.bimodule) {
                return false;
            }
            for (b, pb) in self.pieces.iter().enumerate() {
                let comp = pa.inclusion.mul(&pb.projection);
                let want = if a == b { PolyMatrix::identity(pa.bimodule.rank()) } else { PolyMatrix::zeros(pa.bimodule.rank(), pb.bimodule.rank()) };
                if comp != want {
                    return false;
                }
            }
            total = total.add(&pa.projection.mul(&pa.inclusion));
        }
        total == PolyMatrix::identity(source.rank())
    }
}

type Cache = Mutex<HashMap<(u64, usize), Arc<Indecomposable>>>;
static INDECOMPOSABLES: OnceLock<Cache> = OnceLock::new();

/// `B_y` for an element of the system, built and cached on first use.
pub fn canonical_indecomposable(sys: &Arc<CoxeterSystem>, y: Element) -> Result<Arc<Indecomposable>, SoergelError> {
    let cache = INDECOMPOSABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("indecomposable cache").get(&(sys.id(), y.index())) {
        return Ok(b.clone());
    }
    let ring = Ring::of(sys);
    let ambient = Bimodule::bott_samelson(&ring, sys.word(y))?;
    let len = sys.length(y);
    let mut eps = PolyMatrix::identity(ambient.rank());
    let mut split_char = HeckeElement::zero(sys, crate::hecke::Basis::Standard);
    let mut lower: Vec<Element> = sys.enumerate().into_iter().filter(|&z| sys.length(z) < len).collect();
    lower.reverse();
    for z in lower {
        let bz = canonical_indecomposable(sys, z)?;
        for j in -(len as i32)..=(len as i32) {
            let found = split_off(&ambient, &eps, &bz, j)?;
            for (i, p) in &found {
                eps = eps.sub(&p.mul(i));
            }
            if !found.is_empty() {
                let ch = HeckeElement::kl(sys, z).scale(&LaurentPoly::monomial(found.len() as i64, j));
                split_char = split_char.add(&ch).expect("same system");
            }
        }
    }
    let end0 = hom_degree(&ambient, &ambient, 0)?;
    let corner: Vec<PolyMatrix> = end0.iter().map(|f| eps.mul(&f.matrix).mul(&eps)).collect();
    if span_dim(&corner) != 1 {
        return Err(SoergelError::NonSemiperfect(format!(
            "complement in BS({}) has {} degree-0 endomorphisms",
            sys.word_compact(y),
            span_dim(&corner)
        )));
    }
    let (bimodule, inclusion, projection) = realize_image(&ambient, &eps)?;
    let character = ambient.character().map(|c| c.sub(&split_char).expect("same system"));
    let labels = (0..bimodule.rank()).map(|a| format!("e{a}")).collect();
    let bimodule = bimodule.with_character(character).with_labels(labels);
    let b = Arc::new(Indecomposable { element: y, ambient, idempotent: eps, bimodule, inclusion, projection });
    cache.lock().expect("indecomposable cache").insert((sys.id(), y.index()), b.clone());
    Ok(b)
}

fn span_dim(maps: &[PolyMatrix]) -> usize {
    let mut keys: BTreeMap<(usize, usize, u64), usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for m in maps {
        let mut row = Vec::new();
        for i in 0..m.rows() {
            for l in 0..m.cols() {
                for (mono, c) in m[(i, l)].terms() {
                    let n = keys.len();
                    let k = *keys.entry((i, l, mono)).or_insert(n);
                    row.push((k, c.clone()));
                }
            }
        }
        rows.push(row);
    }
    let mut ech = SparseEchelon::new(keys.len());
    for mut r in rows {
        r.sort_by_key(|(k, _)| *k);
        ech.insert(r);
    }
    ech.rank()
}

/// Orthogonal pairs `(i_a, p_a)` with `i_a: M_z → t`, `p_a: t → M_z`,
/// `i_a p_a = e_z` and `p_a` factoring through `eps`.
fn split_off(
    t: &Bimodule,
    eps: &PolyMatrix,
    z: &Indecomposable,
    j: i32,
) -> Result<Vec<(PolyMatrix, PolyMatrix)>, SoergelError> {
    let e = &z.idempotent;
    let phis = hom_degree(&z.ambient, t, -j)?;
    if phis.is_empty() {
        return Ok(vec![]);
    }
    let psis = hom_degree(t, &z.ambient, j)?;
    if psis.is_empty() {
        return Ok(vec![]);
    }
    let a: Vec<PolyMatrix> = phis.iter().map(|f| e.mul(&f.matrix).mul(eps)).collect();
    let b: Vec<PolyMatrix> = psis.iter().map(|f| eps.mul(&f.matrix).mul(e)).collect();
    let g = Matrix::from_rows(
        a.iter().map(|x| b.iter().map(|y| scalar_part(&x.mul(y), e)).collect()).collect::<Vec<Vec<Coeff>>>(),
    );
    let (_, rows) = g.transpose().rref();
    if rows.is_empty() {
        return Ok(vec![]);
    }
    let sub = Matrix::from_rows(rows.iter().map(|&p| g.row(p).to_vec()).collect());
    let (_, cols) = sub.rref();
    let square = Matrix::from_cols(rows.len(), &cols.iter().map(|&c| sub.col(c)).collect::<Vec<_>>());
    let x = square.inverse().ok_or_else(|| SoergelError::NonSemiperfect("singular pairing".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for (ai, &p) in rows.iter().enumerate() {
        let mut proj = PolyMatrix::zeros(t.rank(), z.ambient.rank());
        for (ci, &c) in cols.iter().enumerate() {
            proj = proj.add(&b[c].scale(&x[(ci, ai)]));
        }
        let inc = a[p].clone();
        if inc.mul(&proj) != *e {
            return Err(SoergelError::NonSemiperfect("pairing is not scalar on the idempotent".into()));
        }
        out.push((inc, proj));
    }
    Ok(out)
}

/// The image of an idempotent as a bimodule, with inclusion and projection.
fn realize_image(m: &Bimodule, e: &PolyMatrix) -> Result<(Bimodule, PolyMatrix, PolyMatrix), SoergelError> {
    let e0 = e.at_zero();
    let mut ech: SparseEchelon<Coeff> = SparseEchelon::new(m.rank());
    let mut rows = Vec::new();
    for i in 0..m.rank() {
        if ech.insert_dense(e0.row(i)) {
            rows.push(i);
        }
    }
    let sub = Matrix::from_rows(rows.iter().map(|&i| e0.row(i).to_vec()).collect::<Vec<Vec<Coeff>>>());
    let cols = if rows.is_empty() { vec![] } else { sub.rref().1 };
    let all: Vec<usize> = (0..m.rank()).collect();
    let inclusion = e.select(&rows, &all);
    let square = e.select(&rows, &cols);
    let inv = square.inverse_unipotent().ok_or_else(|| SoergelError::NonSemiperfect("image basis is singular".into()))?;
    let projection = e.select(&all, &cols).mul(&inv);
    if projection.mul(&inclusion) != *e {
        return Err(SoergelError::NonSemiperfect("idempotent image is not free on the chosen rows".into()));
    }
    let action = (0..m.ring().nvars()).map(|k| inclusion.mul(m.action(k)).mul(&projection)).collect();
    let degrees = rows.iter().map(|&i| m.degrees()[i]).collect();
    let labels = rows.iter().map(|&i| m.labels()[i].clone()).collect();
    let b = Bimodule::new(m.ring().clone(), labels, degrees, action)?;
    Ok((b, inclusion, projection))
}

/// Split `t` into shifted indecomposables `B_z⟨j⟩`, with explicit maps.
pub fn decompose(t: &Bimodule) -> Result<Decomposition, SoergelError> {
    let sys = t.system().clone();
    let mut eps = PolyMatrix::identity(t.rank());
    let mut pieces = Vec::new();
    let mut counts: BTreeMap<(usize, i32), usize> = BTreeMap::new();
    let (dmin, dmax) = (t.degrees().iter().copied().min().unwrap_or(0), t.degrees().iter().copied().max().unwrap_or(0));
    let mut order = sys.enumerate();
    order.reverse();
    for z in order {
        if eps.is_zero() {
            break;
        }
        let bz = canonical_indecomposable(&sys, z)?;
        let lz = sys.length(z) as i32;
        // B_z⟨j⟩ has degrees in [−lz − j, lz − j]
        for j in (-dmax - lz)..=(lz - dmin) {
            for (i, p) in split_off(t, &eps, &bz, j)? {
                eps = eps.sub(&p.mul(&i));
                pieces.push(SplitPiece {
                    element: z,
                    shift: j,
                    bimodule: bz.bimodule.shift(j),
                    inclusion: bz.inclusion.mul(&i),
                    projection: p.mul(&bz.projection),
                });
                *counts.entry((z.index(), j)).or_default() += 1;
            }
        }
    }
    if !eps.is_zero() {
        return Err(SoergelError::NonSemiperfect("a nonzero complement remains".into()));
    }
    let summands = counts
        .into_iter()
        .map(|((z, j), m)| Summand { element: sys.element(z), shift: j, multiplicity: m })
        .collect();
    Ok(Decomposition { summands, pieces })
}

/// The character of a Soergel bimodule recovered from graded Hom ranks into
/// all Bott–Samelson bimodules `BS(y)`, solving the unitriangular system
/// `grk Hom(M, BS(y)) = Σ_x c_x · [H_x] ch BS(y)`.
pub fn character_via_hom(m: &Bimodule) -> Result<HeckeElement, SoergelError> {
    let sys = m.system().clone();
    let ring = m.ring().clone();
    let mut c: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
    for y in sys.enumerate() {
        let word = sys.word(y).to_vec();
        let by = Bimodule::bott_samelson(&ring, &word)?;
        let ch = HeckeElement::bs_product(&sys, &word);
        let mut r = graded_hom_rank(m, &by)?;
        for (x, cx) in &c {
            let g = ch.coeff(sys.element(*x));
            r = &r - &(cx * &g);
        }
        c.insert(y.index(), r);
    }
    let mut h = HeckeElement::zero(&sys, crate::hecke::Basis::Standard);
    for (x, p) in c {
        if !p.is_zero() {
            h = h.add(&HeckeElement::monomial(&sys, crate::hecke::Basis::Standard, sys.element(x), p)).expect("same system");
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indecomposables_have_kl_characters() {
        for name in ["A2", "B2"] {
            let sys = CoxeterSystem::named(name).unwrap();
            for y in sys.enumerate() {
                let b = canonical_indecomposable(&sys, y).unwrap();
                assert_eq!(b.bimodule.character().unwrap(), &HeckeElement::kl(&sys, y), "{name} {}", sys.word_compact(y));
            }
        }
    }

    #[test]
    fn decompose_ss_and_sts() {
        let sys = CoxeterSystem::named("A2").unwrap();
        let r = Ring::of(&sys);
        let ss = Bimodule::bott_samelson(&r, &[0, 0]).unwrap();
        let d = decompose(&ss).unwrap();
        let s = sys.generator(0);
        assert_eq!(
            d.summands,
            vec![Summand { element: s, shift: -1, multiplicity: 1 }, Summand { element: s, shift: 1, multiplicity: 1 }]
        );
        assert!(d.verify(&ss));
        let sts = Bimodule::bott_samelson(&r, &[0, 1, 0]).unwrap();
        let d = decompose(&sts).unwrap();
        assert!(d.verify(&sts));
        assert_eq!(d.summands.len(), 2);
        assert_eq!(&d.character(&sys), sts.character().unwrap());
    }

    #[test]
    fn character_from_hom_ranks() {
        let sys = CoxeterSystem::named("A2").unwrap();
        let r = Ring::of(&sys);
        let sts = Bimodule::bott_samelson(&r, &[0, 1, 0]).unwrap();
        assert_eq!(&character_via_hom(&sts).unwrap(), sts.character().unwrap());
    }
}
