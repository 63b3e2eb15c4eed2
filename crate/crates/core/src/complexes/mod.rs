//! Bounded chain complexes of Soergel bimodules: convolution, Gaussian
//! elimination, Rouquier complexes and their classes in the Hecke algebra.
//!
//! Differentials follow the row convention of [`BimoduleMap`]: the block
//! `d^c[a][b]` is the map from summand `a` of `C^c` to summand `b` of
//! `C^{c+1}`, and the composite "first `f`, then `g`" is the product `f·g`.
//! A term in chain degree `c` has weight `−c`.

mod maps;
mod weights;

pub use maps::{chain_maps, homotopy_classes_dimension, homotopy_equal, homotopy_equal_with, ComplexMap, DEFAULT_TRIES};
pub use weights::{
    bigraded_axiom_suite, transversality_suite, weight_axiom_suite, weight_complex, weight_complex_stupid, HeartComplex, SuiteEntry,
    SuiteReport,
};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};
use thiserror::Error;

use crate::bigraded::BigradedError;
use crate::coxeter::{CoxeterError, CoxeterSystem, Element};
use crate::hecke::{Basis, HeckeElement};
use crate::poly::{PolyMatrix, Ring};
use crate::soergel::{
    canonical_indecomposable, character_via_hom, decompose, hom_degree, Bimodule, BimoduleMap, Decomposition,
    SoergelError,
};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("complexes live over different rings")]
    RingMismatch,
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("Rouquier complexes are built over type A systems only, got {0}")]
    NotTypeA(String),
    #[error("no invertible chain map found in {tries} tries")]
    SearchExhausted { tries: usize },
    #[error("weight-{weight} quotient is not pure")]
    ImpureQuotient { weight: i32 },
    #[error(transparent)]
    Soergel(#[from] SoergelError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Bigraded(#[from] BigradedError),
}

/// What a summand is known to be.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// No decomposition known yet.
    Plain,
    /// `B_z⟨shift⟩` in the canonical basis of `B_z`; `z` is an element index.
    Indecomposable { element: usize, shift: i32 },
    /// `(B_l ⊗ B_r)⟨shift⟩` in the tensor basis of the canonical pieces.
    Product { left: usize, right: usize, shift: i32 },
}

/// One summand of a chain group.
#[derive(Debug, Clone)]
pub struct Piece {
    pub label: String,
    pub tag: Tag,
    pub bimodule: Bimodule,
}

impl Piece {
    pub fn plain(label: impl Into<String>, bimodule: Bimodule) -> Self {
        Piece { label: label.into(), tag: Tag::Plain, bimodule }
    }

    /// `B_z⟨j⟩` in its canonical basis.
    pub fn indecomposable(sys: &Arc<CoxeterSystem>, z: Element, j: i32) -> Result<Self, ComplexError> {
        let b = canonical_indecomposable(sys, z)?;
        Ok(Piece { label: indecomposable_label(sys, z, j), tag: Tag::Indecomposable { element: z.index(), shift: j }, bimodule: b.bimodule.shift(j) })
    }

    /// Character in the Hecke algebra, recovered from Hom ranks if unknown.
    pub fn character(&self) -> Result<HeckeElement, ComplexError> {
        if let Some(c) = self.bimodule.character() {
            return Ok(c.clone());
        }
        Ok(character_via_hom(&self.bimodule)?)
    }

    fn shifted(&self, k: i32) -> Piece {
        let sys = self.bimodule.system().clone();
        let (label, tag) = match self.tag {
            Tag::Plain => (format!("{}⟨{k}⟩", self.label), Tag::Plain),
            Tag::Indecomposable { element, shift } => {
                (indecomposable_label(&sys, sys.element(element), shift + k), Tag::Indecomposable { element, shift: shift + k })
            }
            Tag::Product { left, right, shift } => (format!("{}⟨{k}⟩", self.label), Tag::Product { left, right, shift: shift + k }),
        };
        Piece { label, tag, bimodule: self.bimodule.shift(k) }
    }
}

fn indecomposable_label(sys: &CoxeterSystem, z: Element, j: i32) -> String {
    let w = sys.word_compact(z);
    let name = if w.is_empty() { "R".to_string() } else { format!("B_{w}") };
    if j == 0 {
        name
    } else {
        format!("{name}⟨{j}⟩")
    }
}

/// A bounded complex `⋯ → C^c → C^{c+1} → ⋯` of bimodules.
#[derive(Debug, Clone)]
pub struct BimoduleComplex {
    ring: Arc<Ring>,
    terms: BTreeMap<i32, Vec<Piece>>,
    diffs: BTreeMap<i32, PolyMatrix>,
}

impl BimoduleComplex {
    /// Validates shapes, ring and `d∘d = 0`; missing differentials are zero.
    pub fn new(
        ring: Arc<Ring>,
        terms: BTreeMap<i32, Vec<Piece>>,
        diffs: BTreeMap<i32, PolyMatrix>,
    ) -> Result<Self, ComplexError> {
        let terms: BTreeMap<i32, Vec<Piece>> = terms.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        for p in terms.values().flatten() {
            if !p.bimodule.ring().same(&ring) {
                return Err(ComplexError::RingMismatch);
            }
        }
        let mut c = BimoduleComplex { ring, terms, diffs: BTreeMap::new() };
        for (deg, m) in diffs {
            if m.rows() != c.rank(deg) || m.cols() != c.rank(deg + 1) {
                return Err(ComplexError::NotAComplex(format!(
                    "differential from degree {deg} is {}×{}, expected {}×{}",
                    m.rows(),
                    m.cols(),
                    c.rank(deg),
                    c.rank(deg + 1)
                )));
            }
            if !m.is_zero() {
                c.diffs.insert(deg, m);
            }
        }
        for (&deg, m) in &c.diffs {
            if let Some(n) = c.diffs.get(&(deg + 1)) {
                if !m.mul(n).is_zero() {
                    return Err(ComplexError::NotAComplex(format!("d∘d ≠ 0 at degree {deg}")));
                }
            }
        }
        Ok(c)
    }

    fn raw(ring: Arc<Ring>, terms: BTreeMap<i32, Vec<Piece>>, diffs: BTreeMap<i32, PolyMatrix>) -> Self {
        let terms = terms.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let diffs = diffs.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        BimoduleComplex { ring, terms, diffs }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        BimoduleComplex { ring: ring.clone(), terms: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// `R` in chain degree 0.
    pub fn unit(ring: &Arc<Ring>) -> Self {
        let sys = ring.system().clone();
        let piece = Piece::indecomposable(&sys, sys.identity(), 0).expect("the unit is indecomposable");
        Self::single(piece, 0)
    }

    /// One summand in one chain degree.
    pub fn single(piece: Piece, degree: i32) -> Self {
        let ring = piece.bimodule.ring().clone();
        BimoduleComplex { ring, terms: BTreeMap::from([(degree, vec![piece])]), diffs: BTreeMap::new() }
    }

    /// `F_s = [B_s → R⟨1⟩]` with `B_s` in degree 0, or for `inverse` `F_s⁻¹ = [R⟨−1⟩ → B_s]`.
    pub fn elementary(ring: &Arc<Ring>, s: usize, inverse: bool) -> Result<Self, ComplexError> {
        let sys = ring.system().clone();
        if s >= sys.rank() {
            return Err(SoergelError::UnknownGenerator(s.to_string()).into());
        }
        let bs = Piece::indecomposable(&sys, sys.generator(s), 0)?;
        let (lo, hi, deg) = if !inverse {
            (bs, Piece::indecomposable(&sys, sys.identity(), 1)?, 0)
        } else {
            (Piece::indecomposable(&sys, sys.identity(), -1)?, bs, -1)
        };
        let map = hom_degree(&lo.bimodule, &hi.bimodule, 0)?
            .into_iter()
            .next()
            .ok_or_else(|| ComplexError::NotAComplex("no degree-zero map for the elementary complex".into()))?;
        Ok(BimoduleComplex {
            ring: ring.clone(),
            terms: BTreeMap::from([(deg, vec![lo]), (deg + 1, vec![hi])]),
            diffs: BTreeMap::from([(deg, map.matrix)]),
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        self.ring.system()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Chain degrees with nonzero terms, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    pub fn term(&self, c: i32) -> &[Piece] {
        self.terms.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Rank of `C^c` as a free left module.
    pub fn rank(&self, c: i32) -> usize {
        self.term(c).iter().map(|p| p.bimodule.rank()).sum()
    }

    pub fn total_rank(&self) -> usize {
        self.terms.values().flatten().map(|p| p.bimodule.rank()).sum()
    }

    /// `d^c: C^c → C^{c+1}`.
    pub fn diff(&self, c: i32) -> PolyMatrix {
        self.diffs.get(&c).cloned().unwrap_or_else(|| PolyMatrix::zeros(self.rank(c), self.rank(c + 1)))
    }

    pub fn support(&self) -> Option<(i32, i32)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    fn offsets(&self, c: i32) -> Vec<usize> {
        let mut acc = 0;
        self.term(c)
            .iter()
            .map(|p| {
                let o = acc;
                acc += p.bimodule.rank();
                o
            })
            .collect()
    }

    /// Each differential is a degree-0 bimodule map.
    pub fn differentials_are_maps(&self) -> bool {
        self.diffs.iter().all(|(&c, m)| {
            let src = sum_of(&self.ring, self.term(c));
            let tgt = sum_of(&self.ring, self.term(c + 1));
            BimoduleMap { degree: 0, matrix: m.clone() }.is_map(&src, &tgt)
        })
    }

    /// `C[k]`, with `C[k]^c = C^{c+k}` and differential negated for odd `k`.
    pub fn shift(&self, k: i32) -> Self {
        let sign = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        BimoduleComplex {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(&c, v)| (c - k, v.clone())).collect(),
            diffs: self.diffs.iter().map(|(&c, m)| (c - k, scale_int(m, sign))).collect(),
        }
    }

    /// `C⟨k⟩`, shifting every term's grading.
    pub fn grade_shift(&self, k: i32) -> Self {
        BimoduleComplex {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(&c, v)| (c, v.iter().map(|p| p.shifted(k)).collect())).collect(),
            diffs: self.diffs.clone(),
        }
    }

    /// Total complex of the termwise tensor product, with differential
    /// `d ⊗ id + (−1)^p id ⊗ d` on `C^p ⊗ D^q`.
    pub fn tensor(&self, other: &Self) -> Result<Self, ComplexError> {
        if !self.ring.same(&other.ring) {
            return Err(ComplexError::RingMismatch);
        }
        // per total degree: list of (p, a, q, b)
        let mut index: BTreeMap<i32, Vec<(i32, usize, i32, usize)>> = BTreeMap::new();
        let mut terms: BTreeMap<i32, Vec<Piece>> = BTreeMap::new();
        for (&p, left) in &self.terms {
            for (&q, right) in &other.terms {
                for (a, x) in left.iter().enumerate() {
                    for (b, y) in right.iter().enumerate() {
                        index.entry(p + q).or_default().push((p, a, q, b));
                        terms.entry(p + q).or_default().push(tensor_piece(x, y)?);
                    }
                }
            }
        }
        let mut offsets: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (&n, pieces) in &terms {
            let mut acc = 0;
            offsets.insert(
                n,
                pieces
                    .iter()
                    .map(|p| {
                        let o = acc;
                        acc += p.bimodule.rank();
                        o
                    })
                    .collect(),
            );
        }
        let rank = |n: i32| terms.get(&n).map_or(0, |v| v.iter().map(|p| p.bimodule.rank()).sum());
        let mut diffs = BTreeMap::new();
        for (&n, src) in &index {
            let Some(tgt) = index.get(&(n + 1)) else { continue };
            let mut m = PolyMatrix::zeros(rank(n), rank(n + 1));
            let so = &offsets[&n];
            let to = &offsets[&(n + 1)];
            for (u, &(p, a, q, b)) in src.iter().enumerate() {
                let x = &self.terms[&p][a].bimodule;
                let y = &other.terms[&q][b].bimodule;
                for (w, &(p2, a2, q2, b2)) in tgt.iter().enumerate() {
                    if p2 == p + 1 && q2 == q && b2 == b {
                        let (r0, c0) = block_offsets(&self.offsets(p), a, &self.offsets(p + 1), a2);
                        let blk = self.diff(p).block(r0, c0, x.rank(), self.terms[&p2][a2].bimodule.rank());
                        if !blk.is_zero() {
                            m.set_block(so[u], to[w], &map_tensor_id(&blk, y.rank()));
                        }
                    } else if p2 == p && a2 == a && q2 == q + 1 {
                        let (r0, c0) = block_offsets(&other.offsets(q), b, &other.offsets(q + 1), b2);
                        let blk = other.diff(q).block(r0, c0, y.rank(), other.terms[&q2][b2].bimodule.rank());
                        if !blk.is_zero() {
                            let t = id_tensor_map(x, &blk);
                            m.set_block(so[u], to[w], &if p.rem_euclid(2) == 1 { scale_int(&t, -1) } else { t });
                        }
                    }
                }
            }
            diffs.insert(n, m);
        }
        Ok(Self::raw(self.ring.clone(), terms, diffs))
    }

    /// Every summand replaced by its indecomposable pieces.
    pub fn decomposed(&self) -> Result<Self, ComplexError> {
        let mut terms = BTreeMap::new();
        let mut incl = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for (&c, pieces) in &self.terms {
            let old = self.rank(c);
            let mut out: Vec<Piece> = Vec::new();
            let mut blocks: Vec<(usize, PolyMatrix, PolyMatrix)> = Vec::new();
            let mut off = 0;
            for p in pieces {
                for (q, i, pr) in split_piece(p)? {
                    out.push(q);
                    blocks.push((off, i, pr));
                }
                off += p.bimodule.rank();
            }
            let new: usize = out.iter().map(|p| p.bimodule.rank()).sum();
            let mut inc = PolyMatrix::zeros(new, old);
            let mut pro = PolyMatrix::zeros(old, new);
            let mut row = 0;
            for (o, i, pr) in blocks {
                inc.set_block(row, o, &i);
                pro.set_block(o, row, &pr);
                row += i.rows();
            }
            terms.insert(c, out);
            incl.insert(c, inc);
            proj.insert(c, pro);
        }
        let mut diffs = BTreeMap::new();
        for (&c, d) in &self.diffs {
            diffs.insert(c, incl[&c].mul(d).mul(&proj[&(c + 1)]));
        }
        Ok(Self::raw(self.ring.clone(), terms, diffs))
    }

    /// Decompose, then cancel every differential block that is an invertible
    /// scalar multiple of the identity between equal indecomposables.
    pub fn gaussian_eliminate(&self) -> Result<Self, ComplexError> {
        let mut c = self.decomposed()?;
        while let Some((deg, a, b, lambda)) = c.find_cancellable() {
            c = c.cancel(deg, a, b, &lambda);
        }
        Ok(c)
    }

    fn find_cancellable(&self) -> Option<(i32, usize, usize, crate::scalar::Coeff)> {
        for (&deg, d) in &self.diffs {
            let (src, tgt) = (self.term(deg), self.term(deg + 1));
            let (so, to) = (self.offsets(deg), self.offsets(deg + 1));
            for (a, x) in src.iter().enumerate() {
                if !matches!(x.tag, Tag::Indecomposable { .. }) {
                    continue;
                }
                for (b, y) in tgt.iter().enumerate() {
                    if x.tag != y.tag {
                        continue;
                    }
                    let r = x.bimodule.rank();
                    let blk = d.block(so[a], to[b], r, r);
                    let lambda = blk[(0, 0)].constant_term();
                    if crate::scalar::Field::is_zero(&lambda) {
                        continue;
                    }
                    if blk == PolyMatrix::identity(r).scale(&lambda) {
                        return Some((deg, a, b, lambda));
                    }
                }
            }
        }
        None
    }

    /// Removes summand `a` of `C^deg` and `b` of `C^{deg+1}`, with block `λ·id`.
    fn cancel(&self, deg: i32, a: usize, b: usize, lambda: &crate::scalar::Coeff) -> Self {
        let ra: Vec<usize> = piece_range(&self.offsets(deg), a, self.term(deg)[a].bimodule.rank());
        let rb: Vec<usize> = piece_range(&self.offsets(deg + 1), b, self.term(deg + 1)[b].bimodule.rank());
        let xs: Vec<usize> = (0..self.rank(deg)).filter(|i| !ra.contains(i)).collect();
        let ys: Vec<usize> = (0..self.rank(deg + 1)).filter(|i| !rb.contains(i)).collect();
        let m = self.diff(deg);
        let inv = crate::scalar::Field::inv(lambda);
        let mid = m.select(&xs, &ys).sub(&m.select(&xs, &rb).mul(&m.select(&ra, &ys)).scale(&inv));
        let mut terms = self.terms.clone();
        terms.get_mut(&deg).expect("term").remove(a);
        terms.get_mut(&(deg + 1)).expect("term").remove(b);
        let mut diffs = self.diffs.clone();
        diffs.insert(deg, mid);
        if let Some(prev) = self.diffs.get(&(deg - 1)) {
            let all: Vec<usize> = (0..prev.rows()).collect();
            diffs.insert(deg - 1, prev.select(&all, &xs));
        }
        if let Some(next) = self.diffs.get(&(deg + 1)) {
            let all: Vec<usize> = (0..next.cols()).collect();
            diffs.insert(deg + 1, next.select(&ys, &all));
        }
        Self::raw(self.ring.clone(), terms, diffs)
    }

    /// `Σ_c (−1)^c ch(C^c)` in the standard basis.
    pub fn k_class(&self) -> Result<HeckeElement, ComplexError> {
        let sys = self.system().clone();
        let mut acc = HeckeElement::zero(&sys, Basis::Standard);
        for (&c, pieces) in &self.terms {
            for p in pieces {
                let ch = p.character()?;
                acc = if c.rem_euclid(2) == 0 { acc.add(&ch) } else { acc.sub(&ch) }.expect("same system");
            }
        }
        Ok(acc)
    }

    /// `(low, high)`: `low` keeps chain degrees `≥ −n` (weights `≤ n`) and
    /// is a subcomplex; `high` is the quotient on degrees `< −n`.
    pub fn stupid_truncate(&self, n: i32) -> (Self, Self) {
        (self.restrict(|c| c >= -n), self.restrict(|c| c < -n))
    }

    fn restrict(&self, keep: impl Fn(i32) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(&c, _)| keep(c)).map(|(&c, v)| (c, v.clone())).collect();
        let diffs = self.diffs.iter().filter(|(&c, _)| keep(c) && keep(c + 1)).map(|(&c, m)| (c, m.clone())).collect();
        Self::raw(self.ring.clone(), terms, diffs)
    }

    /// All terms of weight `≤ n`, i.e. in chain degrees `≥ −n`.
    pub fn in_weight_le(&self, n: i32) -> bool {
        self.terms.keys().all(|&c| c >= -n)
    }

    /// All terms of weight `≥ n`, i.e. in chain degrees `≤ −n`.
    pub fn in_weight_ge(&self, n: i32) -> bool {
        self.terms.keys().all(|&c| c <= -n)
    }

    /// Summand tags per chain degree, sorted; equal for isomorphic minimal complexes.
    pub fn signature(&self) -> BTreeMap<i32, Vec<Tag>> {
        self.terms
            .iter()
            .map(|(&c, v)| {
                let mut t: Vec<Tag> = v.iter().map(|p| p.tag.clone()).collect();
                t.sort();
                (c, t)
            })
            .collect()
    }

    /// Per-degree summand lists and differentials as polynomial strings.
    pub fn to_json(&self) -> Value {
        let n = self.ring.nvars();
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&c, v)| {
                json!({
                    "degree": c,
                    "summands": v.iter().map(|p| json!({"label": p.label, "rank": p.bimodule.rank()})).collect::<Vec<_>>(),
                })
            })
            .collect();
        let diffs: Vec<Value> = self
            .diffs
            .iter()
            .map(|(&c, m)| {
                let rows: Vec<Vec<String>> =
                    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string_with(n)).collect()).collect();
                json!({"from": c, "matrix": rows})
            })
            .collect();
        json!({"system": self.system().name(), "terms": terms, "differentials": diffs})
    }
}

fn sum_of(ring: &Arc<Ring>, pieces: &[Piece]) -> Bimodule {
    pieces
        .iter()
        .fold(Bimodule::zero(ring), |acc, p| acc.direct_sum(&p.bimodule).expect("same ring"))
}

fn piece_range(offsets: &[usize], a: usize, rank: usize) -> Vec<usize> {
    (offsets[a]..offsets[a] + rank).collect()
}

fn block_offsets(src: &[usize], a: usize, tgt: &[usize], b: usize) -> (usize, usize) {
    (src[a], tgt[b])
}

fn scale_int(m: &PolyMatrix, k: i64) -> PolyMatrix {
    if k == 1 {
        m.clone()
    } else {
        m.scale(&crate::scalar::Field::from_i64(k))
    }
}

fn tensor_piece(x: &Piece, y: &Piece) -> Result<Piece, ComplexError> {
    let bimodule = x.bimodule.tensor(&y.bimodule)?;
    let tag = match (&x.tag, &y.tag) {
        (Tag::Indecomposable { element: l, shift: i }, Tag::Indecomposable { element: r, shift: j }) => {
            Tag::Product { left: *l, right: *r, shift: i + j }
        }
        _ => Tag::Plain,
    };
    Ok(Piece { label: format!("{}·{}", x.label, y.label), tag, bimodule })
}

/// `f ⊗ id_C` for `f: B → B'`, in the basis `i·rank(C) + j`.
fn map_tensor_id(f: &PolyMatrix, rc: usize) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(f.rows() * rc, f.cols() * rc);
    for i in 0..f.rows() {
        for l in 0..f.cols() {
            if f[(i, l)].is_zero() {
                continue;
            }
            for j in 0..rc {
                m[(i * rc + j, l * rc + j)] = f[(i, l)].clone();
            }
        }
    }
    m
}

/// `id_B ⊗ g` for `g: C → C'`: the entry `g_jm` acts on `B` from the right.
fn id_tensor_map(b: &Bimodule, g: &PolyMatrix) -> PolyMatrix {
    let (rc, rc2) = (g.rows(), g.cols());
    let mut m = PolyMatrix::zeros(b.rank() * rc, b.rank() * rc2);
    for j in 0..rc {
        for l in 0..rc2 {
            if g[(j, l)].is_zero() {
                continue;
            }
            let rho = b.right_action(&g[(j, l)]);
            for i in 0..b.rank() {
                for i2 in 0..b.rank() {
                    if !rho[(i, i2)].is_zero() {
                        m[(i * rc + j, i2 * rc2 + l)] = rho[(i, i2)].clone();
                    }
                }
            }
        }
    }
    m
}

type ProductCache = Mutex<HashMap<(u64, usize, usize), Arc<Decomposition>>>;
static PRODUCTS: OnceLock<ProductCache> = OnceLock::new();

fn product_decomposition(sys: &Arc<CoxeterSystem>, l: usize, r: usize) -> Result<Arc<Decomposition>, ComplexError> {
    let cache = PRODUCTS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().expect("product cache").get(&(sys.id(), l, r)) {
        return Ok(d.clone());
    }
    let bl = canonical_indecomposable(sys, sys.element(l))?;
    let br = canonical_indecomposable(sys, sys.element(r))?;
    let d = Arc::new(decompose(&bl.bimodule.tensor(&br.bimodule)?)?);
    cache.lock().expect("product cache").insert((sys.id(), l, r), d.clone());
    Ok(d)
}

/// Indecomposable pieces of one summand with inclusion and projection blocks.
fn split_piece(p: &Piece) -> Result<Vec<(Piece, PolyMatrix, PolyMatrix)>, ComplexError> {
    let sys = p.bimodule.system().clone();
    let (d, extra) = match p.tag {
        Tag::Indecomposable { .. } => {
            let id = PolyMatrix::identity(p.bimodule.rank());
            return Ok(vec![(p.clone(), id.clone(), id)]);
        }
        Tag::Product { left, right, shift } => (product_decomposition(&sys, left, right)?, shift),
        Tag::Plain => (Arc::new(decompose(&p.bimodule)?), 0),
    };
    d.pieces
        .iter()
        .map(|s| {
            let q = Piece::indecomposable(&sys, s.element, s.shift + extra)?;
            Ok((q, s.inclusion.clone(), s.projection.clone()))
        })
        .collect()
}

/// The Rouquier complex of a braid word (`true` marks an inverse generator),
/// reduced by Gaussian elimination after each factor.
pub fn rouquier(sys: &Arc<CoxeterSystem>, word: &[(usize, bool)]) -> Result<BimoduleComplex, ComplexError> {
    if !sys.is_type_a() {
        return Err(ComplexError::NotTypeA(sys.name().to_string()));
    }
    let ring = Ring::of(sys);
    let mut c = BimoduleComplex::unit(&ring);
    for &(s, inverse) in word {
        c = c.tensor(&BimoduleComplex::elementary(&ring, s, inverse)?)?.gaussian_eliminate()?;
    }
    Ok(c)
}

/// The unreduced tensor product of elementary complexes.
pub fn rouquier_unreduced(sys: &Arc<CoxeterSystem>, word: &[(usize, bool)]) -> Result<BimoduleComplex, ComplexError> {
    let ring = Ring::of(sys);
    let mut c = BimoduleComplex::unit(&ring);
    for &(s, inverse) in word {
        c = c.tensor(&BimoduleComplex::elementary(&ring, s, inverse)?)?;
    }
    Ok(c)
}

/// Hecke class of a braid word; `true` marks an inverse generator.
pub fn k_class_of_word(sys: &Arc<CoxeterSystem>, word: &[(usize, bool)]) -> HeckeElement {
    crate::hecke::braid_element(sys, word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Arc<CoxeterSystem> {
        CoxeterSystem::named("A2").unwrap()
    }

    #[test]
    fn elementary_classes() {
        let sys = a2();
        let r = Ring::of(&sys);
        let hs = HeckeElement::standard(&sys, sys.generator(0));
        let f = BimoduleComplex::elementary(&r, 0, false).unwrap();
        assert!(f.differentials_are_maps());
        assert_eq!(f.k_class().unwrap(), hs);
        let g = BimoduleComplex::elementary(&r, 0, true).unwrap();
        assert_eq!(g.k_class().unwrap().mul(&hs).unwrap(), HeckeElement::one(&sys));
    }

    #[test]
    fn tensor_ranks_and_unit() {
        let sys = a2();
        let r = Ring::of(&sys);
        let f = BimoduleComplex::elementary(&r, 0, false).unwrap();
        let g = BimoduleComplex::elementary(&r, 1, false).unwrap();
        let t = f.tensor(&g).unwrap();
        assert_eq!(t.degrees().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(t.term(1).len(), 2);
        assert!(t.differentials_are_maps());
        assert!(BimoduleComplex::new(r.clone(), t.terms.clone(), t.diffs.clone()).is_ok());
        let u = BimoduleComplex::unit(&r).tensor(&f).unwrap();
        assert_eq!(u.rank(0), f.rank(0));
        assert_eq!(u.diff(0), f.diff(0));
    }

    #[test]
    fn inverse_cancels() {
        let sys = a2();
        let c = rouquier(&sys, &[(0, true), (0, false)]).unwrap();
        assert_eq!(c.signature(), BimoduleComplex::unit(c.ring()).signature());
        let c = rouquier(&sys, &[(1, false), (1, true)]).unwrap();
        assert_eq!(c.signature(), BimoduleComplex::unit(c.ring()).signature());
    }

    #[test]
    fn elimination_keeps_class() {
        let sys = a2();
        let w = [(0, true), (1, true), (0, false)];
        let raw = rouquier_unreduced(&sys, &w).unwrap();
        let red = raw.gaussian_eliminate().unwrap();
        assert!(red.total_rank() < raw.total_rank());
        assert!(red.differentials_are_maps());
        assert_eq!(raw.k_class().unwrap(), red.k_class().unwrap());
        assert_eq!(red.k_class().unwrap(), k_class_of_word(&sys, &w));
    }

    #[test]
    fn stupid_truncation_split() {
        let sys = a2();
        let f = BimoduleComplex::elementary(&Ring::of(&sys), 0, false).unwrap();
        let (low, high) = f.stupid_truncate(0);
        assert_eq!(low.degrees().collect::<Vec<_>>(), vec![0, 1]);
        assert!(high.is_zero());
        let (low, high) = f.stupid_truncate(-1);
        assert_eq!(low.degrees().collect::<Vec<_>>(), vec![1]);
        assert_eq!(high.degrees().collect::<Vec<_>>(), vec![0]);
        assert!(low.in_weight_le(-1) && high.in_weight_ge(0));
    }

    #[test]
    fn not_type_a() {
        let sys = CoxeterSystem::named("B2").unwrap();
        assert!(matches!(rouquier(&sys, &[(0, true)]), Err(ComplexError::NotTypeA(_))));
    }
}
