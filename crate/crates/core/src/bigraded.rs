//! Bigraded rational complexes.
//!
//! An object is a finite family of vector spaces `V(g, c)` indexed by a graded
//! degree `g` and a cohomological degree `c`, with differentials
//! `d: V(g, c) → V(g, c + 1)`. The weight of a bidegree is `g − c`, so the
//! weight heart is the diagonal `g = c` and the t-heart is the row `c = 0`.
//!
//! Matrices act on column vectors: a differential out of `(g, c)` has
//! `dim V(g, c + 1)` rows and `dim V(g, c)` columns.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{Matrix, SparseEchelon};
use crate::scalar::{Field, Q};

/// A position `(g, c)`; `weight = g − c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub g: i32,
    pub c: i32,
}

impl Bidegree {
    pub const fn new(g: i32, c: i32) -> Self {
        Bidegree { g, c }
    }

    pub const fn weight(self) -> i32 {
        self.g - self.c
    }

    /// The bidegree a differential lands in.
    pub const fn next(self) -> Self {
        Bidegree { g: self.g, c: self.c + 1 }
    }

    pub const fn prev(self) -> Self {
        Bidegree { g: self.g, c: self.c - 1 }
    }

    pub const fn plus(self, o: Bidegree) -> Self {
        Bidegree { g: self.g + o.g, c: self.c + o.c }
    }

    pub const fn minus(self, o: Bidegree) -> Self {
        Bidegree { g: self.g - o.g, c: self.c - o.c }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.g, self.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BigradedError {
    #[error("differential at {at} has shape {got:?}, expected {expected:?}")]
    Shape { at: Bidegree, got: (usize, usize), expected: (usize, usize) },
    #[error("d∘d ≠ 0 starting at {0}")]
    NotAComplex(Bidegree),
    #[error("object is not pure: cohomology of dimension {dim} at {at} is off the diagonal")]
    NotPure { at: Bidegree, dim: usize },
    #[error("map component at {0} has the wrong shape or is not a chain map")]
    NotAChainMap(Bidegree),
    #[error("filtration step {0} is not a subcomplex, not increasing, or has an impure quotient")]
    ImpureQuotient(i32),
    #[error("malformed serialized complex: {0}")]
    Malformed(String),
}

/// A bounded bigraded complex of finite-dimensional rational vector spaces.
///
/// Equality compares dimensions and differentials; basis labels are ignored.
#[derive(Clone)]
pub struct Bigraded {
    labels: BTreeMap<Bidegree, Vec<String>>,
    diffs: BTreeMap<Bidegree, Matrix<Q>>,
}

impl PartialEq for Bigraded {
    fn eq(&self, other: &Self) -> bool {
        self.diffs == other.diffs
            && self.labels.len() == other.labels.len()
            && self.labels.iter().zip(&other.labels).all(|((a, x), (b, y))| a == b && x.len() == y.len())
    }
}

impl fmt::Debug for Bigraded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bigraded {{")?;
        for (bd, l) in &self.labels {
            write!(f, " {bd}:{}", l.len())?;
        }
        for (bd, m) in &self.diffs {
            write!(f, " d{bd}={m:?}")?;
        }
        write!(f, " }}")
    }
}

fn default_labels(bd: Bidegree, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{}_{}_{}", bd.g, bd.c, i)).collect()
}

impl Bigraded {
    /// Build from labelled pieces and differentials (keyed by source bidegree).
    pub fn from_labeled(
        labels: BTreeMap<Bidegree, Vec<String>>,
        diffs: BTreeMap<Bidegree, Matrix<Q>>,
    ) -> Result<Self, BigradedError> {
        let labels: BTreeMap<_, _> = labels.into_iter().filter(|(_, l)| !l.is_empty()).collect();
        let dim = |bd: &Bidegree| labels.get(bd).map_or(0, Vec::len);
        let mut kept = BTreeMap::new();
        for (bd, m) in diffs {
            let expected = (dim(&bd.next()), dim(&bd));
            if (m.rows(), m.cols()) != expected {
                if m.is_zero() && (m.rows() == 0 || m.cols() == 0) {
                    continue;
                }
                return Err(BigradedError::Shape { at: bd, got: (m.rows(), m.cols()), expected });
            }
            if !m.is_zero() {
                kept.insert(bd, m);
            }
        }
        let v = Bigraded { labels, diffs: kept };
        for (&bd, m) in &v.diffs {
            if let Some(m2) = v.diffs.get(&bd.next()) {
                if !m2.mul(m).is_zero() {
                    return Err(BigradedError::NotAComplex(bd));
                }
            }
        }
        Ok(v)
    }

    /// Build from dimensions with generated basis labels.
    pub fn new(
        dims: impl IntoIterator<Item = (Bidegree, usize)>,
        diffs: impl IntoIterator<Item = (Bidegree, Matrix<Q>)>,
    ) -> Result<Self, BigradedError> {
        let labels = dims.into_iter().map(|(bd, n)| (bd, default_labels(bd, n))).collect();
        Self::from_labeled(labels, diffs.into_iter().collect())
    }

    pub fn zero() -> Self {
        Bigraded { labels: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// The monoidal unit: a line at `(0, 0)`.
    pub fn unit() -> Self {
        Self::line(0, 0)
    }

    /// A one-dimensional space at `(g, c)`.
    pub fn line(g: i32, c: i32) -> Self {
        Self::spaces([(Bidegree::new(g, c), 1)])
    }

    /// A direct sum of spaces with zero differential.
    pub fn spaces(dims: impl IntoIterator<Item = (Bidegree, usize)>) -> Self {
        Self::new(dims, []).expect("no differentials")
    }

    pub fn dim(&self, bd: Bidegree) -> usize {
        self.labels.get(&bd).map_or(0, Vec::len)
    }

    pub fn labels(&self, bd: Bidegree) -> &[String] {
        self.labels.get(&bd).map_or(&[], Vec::as_slice)
    }

    /// Nonzero bidegrees in increasing order.
    pub fn support(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.labels.keys().copied()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.labels.is_empty()
    }

    /// The differential out of `bd` (a zero matrix when absent).
    pub fn diff(&self, bd: Bidegree) -> Matrix<Q> {
        self.diffs.get(&bd).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(bd.next()), self.dim(bd)))
    }

    pub fn diffs(&self) -> impl Iterator<Item = (Bidegree, &Matrix<Q>)> {
        self.diffs.iter().map(|(b, m)| (*b, m))
    }

    fn reindex(&self, f: impl Fn(Bidegree) -> Bidegree, sign: impl Fn(Bidegree) -> bool) -> Bigraded {
        let labels = self.labels.iter().map(|(&bd, l)| (f(bd), l.clone())).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&bd, m)| (f(bd), if sign(bd) { m.scale(&Q::int(-1)) } else { m.clone() }))
            .collect();
        Bigraded { labels, diffs }
    }

    /// `V[n]`: the piece at `(g, c)` is `V(g, c + n)`; differentials pick up `(−1)ⁿ`.
    pub fn shift_coh(&self, n: i32) -> Bigraded {
        self.reindex(|bd| Bidegree::new(bd.g, bd.c - n), |_| n.rem_euclid(2) == 1)
    }

    /// `V⟨k⟩`: the piece at graded degree `g` is `V` at `g + k`.
    pub fn shift_gr(&self, k: i32) -> Bigraded {
        self.reindex(|bd| Bidegree::new(bd.g - k, bd.c), |_| false)
    }

    /// Moves graded piece `i` from cohomological degree `c` to `c + i`.
    pub fn shear_fwd(&self) -> Bigraded {
        self.reindex(|bd| Bidegree::new(bd.g, bd.c + bd.g), |bd| bd.g.rem_euclid(2) == 1)
    }

    /// Inverse of [`Bigraded::shear_fwd`].
    pub fn shear_bwd(&self) -> Bigraded {
        self.reindex(|bd| Bidegree::new(bd.g, bd.c - bd.g), |bd| bd.g.rem_euclid(2) == 1)
    }

    pub fn direct_sum(&self, other: &Bigraded) -> Bigraded {
        let mut labels = self.labels.clone();
        for (bd, l) in &other.labels {
            labels.entry(*bd).or_default().extend(l.iter().cloned());
        }
        let mut diffs = BTreeMap::new();
        for bd in self.diffs.keys().chain(other.diffs.keys()) {
            diffs.insert(*bd, self.diff(*bd).direct_sum(&other.diff(*bd)));
        }
        Bigraded::from_labeled(labels, diffs).expect("direct sum of complexes")
    }

    /// Day convolution with the Koszul sign on the cohomological index.
    pub fn tensor(&self, other: &Bigraded) -> Bigraded {
        let layout = tensor_layout(self, other);
        let mut labels: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
        for (bd, blocks) in &layout {
            let l = labels.entry(*bd).or_default();
            for &(p, q, _) in blocks {
                for a in self.labels(p) {
                    for b in other.labels(q) {
                        l.push(format!("{a}⊗{b}"));
                    }
                }
            }
        }
        let mut diffs = BTreeMap::new();
        for (bd, blocks) in &layout {
            let tgt = bd.next();
            let Some(tblocks) = layout.get(&tgt) else { continue };
            let offset_of = |p: Bidegree, q: Bidegree| tblocks.iter().find(|b| b.0 == p && b.1 == q).map(|b| b.2);
            let src_dim: usize = blocks.iter().map(|(p, q, _)| self.dim(*p) * other.dim(*q)).sum();
            let tgt_dim: usize = tblocks.iter().map(|(p, q, _)| self.dim(*p) * other.dim(*q)).sum();
            let mut m = Matrix::zeros(tgt_dim, src_dim);
            for &(p, q, off) in blocks {
                if let (Some(dv), Some(toff)) = (self.diffs.get(&p), offset_of(p.next(), q)) {
                    m.set_block(toff, off, &dv.kron(&Matrix::identity(other.dim(q))));
                }
                if let (Some(dw), Some(toff)) = (other.diffs.get(&q), offset_of(p, q.next())) {
                    let mut blk = Matrix::identity(self.dim(p)).kron(dw);
                    if p.c.rem_euclid(2) == 1 {
                        blk = blk.scale(&Q::int(-1));
                    }
                    m.set_block(toff, off, &blk);
                }
            }
            diffs.insert(*bd, m);
        }
        Bigraded::from_labeled(labels, diffs).expect("tensor of complexes is a complex")
    }

    /// Internal Hom: the piece at `(g, c)` collects maps `V(p) → W(p + (g, c))`.
    pub fn hom_complex(&self, other: &Bigraded) -> Bigraded {
        let layout = hom_layout(self, other);
        let mut labels: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
        for (bd, blocks) in &layout {
            let l = labels.entry(*bd).or_default();
            for &(s, t, _) in blocks {
                for i in 0..other.dim(t) {
                    for j in 0..self.dim(s) {
                        l.push(format!("hom{s}->{t}[{i},{j}]"));
                    }
                }
            }
        }
        let mut diffs = BTreeMap::new();
        for (bd, blocks) in &layout {
            let Some(tblocks) = layout.get(&bd.next()) else { continue };
            let offset_of = |s: Bidegree, t: Bidegree| tblocks.iter().find(|b| b.0 == s && b.1 == t).map(|b| b.2);
            let src_dim: usize = blocks.iter().map(|(s, t, _)| self.dim(*s) * other.dim(*t)).sum();
            let tgt_dim: usize = tblocks.iter().map(|(s, t, _)| self.dim(*s) * other.dim(*t)).sum();
            let sign = if bd.c.rem_euclid(2) == 1 { Q::int(1) } else { Q::int(-1) };
            let mut m: Matrix<Q> = Matrix::zeros(tgt_dim, src_dim);
            for &(s, t, off) in blocks {
                let (ds, dt) = (self.dim(s), other.dim(t));
                // d_W ∘ f
                if let (Some(dw), Some(toff)) = (other.diffs.get(&t), offset_of(s, t.next())) {
                    let dt2 = other.dim(t.next());
                    for i in 0..dt {
                        for j in 0..ds {
                            let col = off + i * ds + j;
                            for k in 0..dt2 {
                                let a = &dw[(k, i)];
                                if !a.is_zero() {
                                    let row = toff + k * ds + j;
                                    m[(row, col)] = m[(row, col)].add(a);
                                }
                            }
                        }
                    }
                }
                // −(−1)^c f ∘ d_V, landing in the block with source s.prev()
                if let (Some(dv), Some(toff)) = (self.diffs.get(&s.prev()), offset_of(s.prev(), t)) {
                    let ds0 = self.dim(s.prev());
                    for i in 0..dt {
                        for j in 0..ds {
                            let col = off + i * ds + j;
                            for k in 0..ds0 {
                                let a = &dv[(j, k)];
                                if !a.is_zero() {
                                    let row = toff + i * ds0 + k;
                                    m[(row, col)] = m[(row, col)].add(&sign.mul(a));
                                }
                            }
                        }
                    }
                }
            }
            diffs.insert(*bd, m);
        }
        Bigraded::from_labeled(labels, diffs).expect("hom complex is a complex")
    }

    /// Split into the subcomplex of weights `≤ n` and the quotient of weights `> n`.
    pub fn weight_truncate(&self, n: i32) -> (Bigraded, Bigraded) {
        self.split_by(|bd| bd.weight() <= n)
    }

    /// Keep the bidegrees selected by `keep`; `keep` must describe a subcomplex.
    fn split_by(&self, keep: impl Fn(Bidegree) -> bool) -> (Bigraded, Bigraded) {
        let part = |want: bool| {
            let labels = self.labels.iter().filter(|(bd, _)| keep(**bd) == want).map(|(b, l)| (*b, l.clone())).collect();
            let diffs = self
                .diffs
                .iter()
                .filter(|(bd, _)| keep(**bd) == want && keep(bd.next()) == want)
                .map(|(b, m)| (*b, m.clone()))
                .collect();
            Bigraded { labels, diffs }
        };
        (part(true), part(false))
    }

    /// Cohomological truncations applied to each graded piece: `(τ≤n V, τ≥n+1 V)`.
    pub fn t_truncate(&self, n: i32) -> (Bigraded, Bigraded) {
        let gs: Vec<i32> = {
            let mut g: Vec<i32> = self.labels.keys().map(|b| b.g).collect();
            g.dedup();
            g
        };
        let mut below_l = BTreeMap::new();
        let mut below_d = BTreeMap::new();
        let mut above_l = BTreeMap::new();
        let mut above_d = BTreeMap::new();
        for g in gs {
            let at = |c| Bidegree::new(g, c);
            // τ≤n: degrees < n unchanged, degree n replaced by the cycles.
            let cyc = Kernel::of(&self.diff(at(n)));
            for (bd, l) in self.labels.range(at(i32::MIN)..at(n)) {
                below_l.insert(*bd, l.clone());
            }
            for (bd, m) in self.diffs.range(at(i32::MIN)..at(n - 1)) {
                below_d.insert(*bd, m.clone());
            }
            if cyc.dim() > 0 {
                below_l.insert(at(n), (0..cyc.dim()).map(|i| format!("z{}_{}_{}", g, n, i)).collect());
                if let Some(d) = self.diffs.get(&at(n - 1)) {
                    below_d.insert(at(n - 1), cyc.coordinates_of_columns(d));
                }
            }
            // τ≥n+1: degree n+1 replaced by the cokernel of d, higher degrees unchanged.
            let coker = Cokernel::of(&self.diff(at(n)), self.dim(at(n + 1)));
            if coker.dim() > 0 {
                above_l.insert(at(n + 1), (0..coker.dim()).map(|i| format!("h{}_{}_{}", g, n + 1, i)).collect());
                if let Some(d) = self.diffs.get(&at(n + 1)) {
                    above_d.insert(at(n + 1), coker.restrict_columns(d));
                }
            }
            for (bd, l) in self.labels.range(at(n + 2)..=at(i32::MAX)) {
                above_l.insert(*bd, l.clone());
            }
            for (bd, m) in self.diffs.range(at(n + 2)..=at(i32::MAX)) {
                above_d.insert(*bd, m.clone());
            }
        }
        (
            Bigraded::from_labeled(below_l, below_d).expect("τ≤ is a complex"),
            Bigraded::from_labeled(above_l, above_d).expect("τ≥ is a complex"),
        )
    }

    /// Cohomology dimensions per bidegree (zeros omitted).
    pub fn cohomology(&self) -> BTreeMap<Bidegree, usize> {
        let mut out = BTreeMap::new();
        for (&bd, l) in &self.labels {
            let out_rank = self.diffs.get(&bd).map_or(0, Matrix::rank);
            let in_rank = self.diffs.get(&bd.prev()).map_or(0, Matrix::rank);
            let h = l.len() - out_rank - in_rank;
            if h > 0 {
                out.insert(bd, h);
            }
        }
        out
    }

    /// Equal cohomology in every bidegree; over a field this is homotopy equivalence.
    pub fn homotopy_equivalent(&self, other: &Bigraded) -> bool {
        self.cohomology() == other.cohomology()
    }

    /// The complex with the same cohomology and zero differential.
    pub fn minimal_model(&self) -> Bigraded {
        Bigraded::spaces(self.cohomology())
    }

    /// Diagonal cohomology dimensions `(g, c, dim)` of an object in the weight heart.
    pub fn decompose_pure(&self) -> Result<Vec<(i32, i32, usize)>, BigradedError> {
        let h = self.cohomology();
        if let Some((&at, &dim)) = h.iter().find(|(bd, _)| bd.weight() != 0) {
            return Err(BigradedError::NotPure { at, dim });
        }
        Ok(h.into_iter().map(|(bd, d)| (bd.g, bd.c, d)).collect())
    }

    /// Smallest and largest weight of a nonzero piece.
    pub fn weight_range(&self) -> Option<(i32, i32)> {
        range_of(self.labels.keys().map(|b| b.weight()))
    }

    /// Smallest and largest weight carrying cohomology.
    pub fn cohomology_weight_range(&self) -> Option<(i32, i32)> {
        range_of(self.cohomology().keys().map(|b| b.weight()))
    }

    pub fn in_weight_le(&self, n: i32) -> bool {
        self.weight_range().is_none_or(|(_, hi)| hi <= n)
    }

    pub fn in_weight_ge(&self, n: i32) -> bool {
        self.weight_range().is_none_or(|(lo, _)| lo >= n)
    }

    /// Poincaré polynomial data: `Σ (−1)^c dim` per graded degree.
    pub fn euler_by_grade(&self) -> BTreeMap<i32, i64> {
        let mut out = BTreeMap::new();
        for (bd, l) in &self.labels {
            let s = if bd.c.rem_euclid(2) == 0 { 1 } else { -1 };
            *out.entry(bd.g).or_insert(0) += s * l.len() as i64;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Two-variable Euler data `Σ (−1)^c dim` per `(g, c)` is just the signed dimension table.
    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.labels.iter().map(|(b, l)| (*b, l.len())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BigradedJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, BigradedError> {
        let j: BigradedJson = serde_json::from_value(v.clone()).map_err(|e| BigradedError::Malformed(e.to_string()))?;
        j.try_into()
    }
}

fn range_of(it: impl Iterator<Item = i32>) -> Option<(i32, i32)> {
    it.fold(None, |acc, w| match acc {
        None => Some((w, w)),
        Some((lo, hi)) => Some((lo.min(w), hi.max(w))),
    })
}

pub(crate) type Layout = BTreeMap<Bidegree, Vec<(Bidegree, Bidegree, usize)>>;

pub(crate) fn tensor_layout(v: &Bigraded, w: &Bigraded) -> Layout {
    let mut layout: Layout = BTreeMap::new();
    for p in v.support() {
        for q in w.support() {
            layout.entry(p.plus(q)).or_default().push((p, q, 0));
        }
    }
    for blocks in layout.values_mut() {
        let mut off = 0;
        for b in blocks.iter_mut() {
            b.2 = off;
            off += v.dim(b.0) * w.dim(b.1);
        }
    }
    layout
}

pub(crate) fn hom_layout(v: &Bigraded, w: &Bigraded) -> Layout {
    let mut layout: Layout = BTreeMap::new();
    for s in v.support() {
        for t in w.support() {
            layout.entry(t.minus(s)).or_default().push((s, t, 0));
        }
    }
    for blocks in layout.values_mut() {
        blocks.sort();
        let mut off = 0;
        for b in blocks.iter_mut() {
            b.2 = off;
            off += v.dim(b.0) * w.dim(b.1);
        }
    }
    layout
}

/// Kernel of a matrix with the basis produced by back substitution: the basis
/// vector attached to free column `f` has a one there and zeros at the other
/// free columns, so coordinates are read off the free columns.
pub(crate) struct Kernel {
    basis: Vec<Vec<Q>>,
    free: Vec<usize>,
}

impl Kernel {
    pub(crate) fn of(m: &Matrix<Q>) -> Kernel {
        let mut e = SparseEchelon::new(m.cols());
        for i in 0..m.rows() {
            e.insert_dense(m.row(i));
        }
        let pivots: Vec<usize> = e.pivot_columns().collect();
        let free = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
        Kernel { basis: e.nullspace(), free }
    }

    pub(crate) fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of each column of `m` (assumed to lie in the kernel).
    pub(crate) fn coordinates_of_columns(&self, m: &Matrix<Q>) -> Matrix<Q> {
        let mut out = Matrix::zeros(self.dim(), m.cols());
        for j in 0..m.cols() {
            for (k, &f) in self.free.iter().enumerate() {
                out[(k, j)] = m[(f, j)].clone();
            }
        }
        out
    }
}

/// Cokernel of a matrix, with the standard basis vectors at non-pivot columns
/// of the image as complement.
pub(crate) struct Cokernel {
    complement: Vec<usize>,
}

impl Cokernel {
    pub(crate) fn of(m: &Matrix<Q>, target_dim: usize) -> Cokernel {
        let mut image = SparseEchelon::new(target_dim);
        if m.rows() == target_dim {
            for j in 0..m.cols() {
                image.insert_dense(&m.col(j));
            }
        }
        let pivots: Vec<usize> = image.pivot_columns().collect();
        let complement = (0..target_dim).filter(|c| !pivots.contains(c)).collect();
        Cokernel { complement }
    }

    pub(crate) fn dim(&self) -> usize {
        self.complement.len()
    }

    /// The matrix `m` restricted to the complement basis vectors.
    pub(crate) fn restrict_columns(&self, m: &Matrix<Q>) -> Matrix<Q> {
        let mut out = Matrix::zeros(m.rows(), self.dim());
        for (k, &f) in self.complement.iter().enumerate() {
            for i in 0..m.rows() {
                out[(i, k)] = m[(i, f)].clone();
            }
        }
        out
    }
}

/// A degree-preserving map of bigraded complexes.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub source: Bigraded,
    pub target: Bigraded,
    /// Component at each bidegree: `dim target × dim source`.
    pub components: BTreeMap<Bidegree, Matrix<Q>>,
}

impl ChainMap {
    pub fn new(
        source: Bigraded,
        target: Bigraded,
        components: BTreeMap<Bidegree, Matrix<Q>>,
    ) -> Result<Self, BigradedError> {
        let f = ChainMap { source, target, components };
        for bd in f.source.support().chain(f.target.support()) {
            let m = f.component(bd);
            if (m.rows(), m.cols()) != (f.target.dim(bd), f.source.dim(bd)) {
                return Err(BigradedError::NotAChainMap(bd));
            }
            let lhs = f.target.diff(bd).mul(&m);
            let rhs = f.component(bd.next()).mul(&f.source.diff(bd));
            if lhs != rhs {
                return Err(BigradedError::NotAChainMap(bd));
            }
        }
        Ok(f)
    }

    pub fn component(&self, bd: Bidegree) -> Matrix<Q> {
        self.components
            .get(&bd)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(bd), self.source.dim(bd)))
    }

    pub fn identity(v: &Bigraded) -> ChainMap {
        let components = v.support().map(|bd| (bd, Matrix::identity(v.dim(bd)))).collect();
        ChainMap { source: v.clone(), target: v.clone(), components }
    }

    pub fn compose(&self, after: &ChainMap) -> ChainMap {
        let mut components = BTreeMap::new();
        for bd in self.source.support() {
            components.insert(bd, after.component(bd).mul(&self.component(bd)));
        }
        ChainMap { source: self.source.clone(), target: after.target.clone(), components }
    }

    /// `f ⊗ g` on Day convolutions; no signs since both maps have degree zero.
    pub fn tensor(&self, g: &ChainMap) -> ChainMap {
        let source = self.source.tensor(&g.source);
        let target = self.target.tensor(&g.target);
        let sl = tensor_layout(&self.source, &g.source);
        let tl = tensor_layout(&self.target, &g.target);
        let mut components = BTreeMap::new();
        for (bd, blocks) in &sl {
            let mut m = Matrix::zeros(target.dim(*bd), source.dim(*bd));
            if let Some(tblocks) = tl.get(bd) {
                for &(p, q, off) in blocks {
                    if let Some(&(_, _, toff)) = tblocks.iter().find(|b| b.0 == p && b.1 == q) {
                        m.set_block(toff, off, &self.component(p).kron(&g.component(q)));
                    }
                }
            }
            components.insert(*bd, m);
        }
        ChainMap { source, target, components }
    }

    /// `cone(f)` with piece `X(g, c+1) ⊕ Y(g, c)` and differential `[[−d_X, 0], [f, d_Y]]`.
    pub fn cone(&self) -> Bigraded {
        let x = &self.source;
        let y = &self.target;
        let xs = x.shift_coh(1);
        let mut labels: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
        for bd in xs.support() {
            labels.entry(bd).or_default().extend(xs.labels(bd).iter().cloned());
        }
        for bd in y.support() {
            labels.entry(bd).or_default().extend(y.labels(bd).iter().cloned());
        }
        let mut diffs = BTreeMap::new();
        let keys: Vec<Bidegree> = labels.keys().copied().collect();
        for bd in keys {
            let tgt = bd.next();
            let (a, b) = (xs.dim(bd), y.dim(bd));
            let (a2, b2) = (xs.dim(tgt), y.dim(tgt));
            if a + b == 0 || a2 + b2 == 0 {
                continue;
            }
            let mut m = Matrix::zeros(a2 + b2, a + b);
            m.set_block(0, 0, &xs.diff(bd));
            // X(g, c+1) sits at cone degree c; f maps it to Y(g, c+1) = cone degree c+1.
            let f = self.component(Bidegree::new(bd.g, bd.c + 1));
            if f.rows() == b2 && f.cols() == a {
                m.set_block(a2, 0, &f);
            }
            m.set_block(a2, a, &y.diff(bd));
            diffs.insert(bd, m);
        }
        Bigraded::from_labeled(labels, diffs).expect("cone is a complex")
    }
}

/// The inclusion of the weight `≤ n` part.
pub fn weight_inclusion(v: &Bigraded, n: i32) -> ChainMap {
    let (low, _) = v.weight_truncate(n);
    let mut components = BTreeMap::new();
    for bd in low.support() {
        components.insert(bd, Matrix::identity(v.dim(bd)));
    }
    ChainMap::new(low, v.clone(), components).expect("subcomplex inclusion")
}

/// The projection onto the weight `> n` quotient.
pub fn weight_projection(v: &Bigraded, n: i32) -> ChainMap {
    let (_, high) = v.weight_truncate(n);
    let mut components = BTreeMap::new();
    for bd in high.support() {
        components.insert(bd, Matrix::identity(v.dim(bd)));
    }
    ChainMap::new(v.clone(), high, components).expect("quotient projection")
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    g: i32,
    c: i32,
    dim: usize,
    basis_labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DiffJson {
    g: i32,
    c: i32,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct BigradedJson {
    entries: Vec<EntryJson>,
    differentials: Vec<DiffJson>,
}

pub(crate) fn matrix_to_strings(m: &Matrix<Q>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

pub(crate) fn matrix_from_strings(rows: &[Vec<String>], shape: (usize, usize)) -> Result<Matrix<Q>, BigradedError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(BigradedError::Malformed(format!("matrix does not have shape {shape:?}")));
    }
    let mut m = Matrix::zeros(shape.0, shape.1);
    for (i, r) in rows.iter().enumerate() {
        for (j, s) in r.iter().enumerate() {
            m[(i, j)] = s.parse().map_err(|e: crate::scalar::ParseQError| BigradedError::Malformed(e.to_string()))?;
        }
    }
    Ok(m)
}

impl From<&Bigraded> for BigradedJson {
    fn from(v: &Bigraded) -> Self {
        BigradedJson {
            entries: v
                .labels
                .iter()
                .map(|(bd, l)| EntryJson { g: bd.g, c: bd.c, dim: l.len(), basis_labels: l.clone() })
                .collect(),
            differentials: v
                .diffs
                .iter()
                .map(|(bd, m)| DiffJson { g: bd.g, c: bd.c, matrix: matrix_to_strings(m) })
                .collect(),
        }
    }
}

impl TryFrom<BigradedJson> for Bigraded {
    type Error = BigradedError;
    fn try_from(j: BigradedJson) -> Result<Self, Self::Error> {
        let mut labels = BTreeMap::new();
        for e in j.entries {
            if e.basis_labels.len() != e.dim {
                return Err(BigradedError::Malformed(format!("entry ({}, {}) has {} labels for dim {}", e.g, e.c, e.basis_labels.len(), e.dim)));
            }
            if labels.insert(Bidegree::new(e.g, e.c), e.basis_labels).is_some() {
                return Err(BigradedError::Malformed(format!("duplicate entry ({}, {})", e.g, e.c)));
            }
        }
        let dim = |bd: Bidegree| labels.get(&bd).map_or(0, Vec::len);
        let mut diffs = BTreeMap::new();
        for d in j.differentials {
            let bd = Bidegree::new(d.g, d.c);
            let m = matrix_from_strings(&d.matrix, (dim(bd.next()), dim(bd)))?;
            diffs.insert(bd, m);
        }
        Bigraded::from_labeled(labels, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bd(g: i32, c: i32) -> Bidegree {
        Bidegree::new(g, c)
    }

    fn two_term(g: i32, c: i32) -> Bigraded {
        Bigraded::new([(bd(g, c), 1), (bd(g, c + 1), 1)], [(bd(g, c), Matrix::identity(1))]).unwrap()
    }

    #[test]
    fn shift_coh_examples() {
        let u = Bigraded::unit();
        assert_eq!(u.shift_coh(0), u);
        let s = u.shift_coh(1);
        assert_eq!(s.dim(bd(0, -1)), 1);
        assert_eq!(s.weight_range(), Some((1, 1)));
        let t = two_term(0, 0).shift_coh(2);
        assert_eq!(t.dims(), BTreeMap::from([(bd(0, -2), 1), (bd(0, -1), 1)]));
        assert_eq!(t.diff(bd(0, -2)).rank(), 1);
    }

    #[test]
    fn shift_gr_example() {
        let v = Bigraded::line(2, 0).shift_gr(2);
        assert_eq!(v.dims(), BTreeMap::from([(bd(0, 0), 1)]));
    }

    #[test]
    fn tensor_examples() {
        let v = Bigraded::line(1, 0).tensor(&Bigraded::line(2, 3));
        assert_eq!(v.dims(), BTreeMap::from([(bd(3, 3), 1)]));
        let w = two_term(1, 0);
        assert_eq!(Bigraded::unit().tensor(&w).dims(), w.dims());
        assert_eq!(Bigraded::unit().tensor(&w).diff(bd(1, 0)), w.diff(bd(1, 0)));
    }

    #[test]
    fn hom_examples() {
        let w = two_term(0, 0).direct_sum(&Bigraded::line(2, 1));
        let h = Bigraded::unit().hom_complex(&w);
        assert_eq!(h.dims(), w.dims());
        assert_eq!(h.diff(bd(0, 0)).rank(), 1);
        let d = Bigraded::line(3, 1).hom_complex(&Bigraded::unit());
        assert_eq!(d.dims(), BTreeMap::from([(bd(-3, -1), 1)]));
    }

    #[test]
    fn weight_truncation_examples() {
        let (lo, hi) = Bigraded::unit().weight_truncate(0);
        assert_eq!(lo, Bigraded::unit());
        assert!(hi.is_zero());
        let (lo, hi) = Bigraded::line(2, 0).weight_truncate(0);
        assert!(lo.is_zero());
        assert_eq!(hi, Bigraded::line(2, 0));
        let ac = two_term(0, 0);
        let (lo, hi) = ac.weight_truncate(0);
        assert_eq!(lo, ac);
        assert!(hi.is_zero());
    }

    #[test]
    fn t_truncation_of_acyclic_is_acyclic() {
        let ac = two_term(0, 0);
        let (b, a) = ac.t_truncate(0);
        assert!(b.cohomology().is_empty());
        assert!(a.cohomology().is_empty());
    }

    #[test]
    fn decompose_pure_examples() {
        assert_eq!(Bigraded::line(1, 1).decompose_pure().unwrap(), vec![(1, 1, 1)]);
        assert!(matches!(Bigraded::line(0, 1).decompose_pure(), Err(BigradedError::NotPure { .. })));
        // heart object with a differential between off-diagonal pieces that cancel
        let v = Bigraded::new(
            [(bd(1, 1), 2), (bd(1, 0), 1)],
            [(bd(1, 0), Matrix::from_rows(vec![vec![Q::int(1)], vec![Q::int(1)]]))],
        )
        .unwrap();
        assert_eq!(v.decompose_pure().unwrap(), vec![(1, 1, 1)]);
    }

    #[test]
    fn shear_examples() {
        assert_eq!(Bigraded::line(2, 0).shear_fwd().dims(), BTreeMap::from([(bd(2, 2), 1)]));
        let w = two_term(3, -1);
        assert_eq!(w.shear_fwd().shear_bwd(), w);
    }

    #[test]
    fn cone_of_weight_inclusion_matches_quotient() {
        let v = two_term(1, 0).direct_sum(&two_term(0, 0)).direct_sum(&Bigraded::line(2, 1));
        let inc = weight_inclusion(&v, 0);
        let (_, high) = v.weight_truncate(0);
        assert!(inc.cone().homotopy_equivalent(&high));
    }

    #[test]
    fn json_roundtrip() {
        let v = two_term(0, 0).direct_sum(&Bigraded::line(1, 2));
        let j = v.to_json();
        assert_eq!(Bigraded::from_json(&j).unwrap(), v);
        let bad = serde_json::json!({"entries": [{"g": 0, "c": 0, "dim": 1, "basis_labels": ["x"]},
            {"g": 0, "c": 1, "dim": 1, "basis_labels": ["y"]}, {"g": 0, "c": 2, "dim": 1, "basis_labels": ["z"]}],
            "differentials": [{"g": 0, "c": 0, "matrix": [["1"]]}, {"g": 0, "c": 1, "matrix": [["1/2"]]}]});
        assert!(matches!(Bigraded::from_json(&bad), Err(BigradedError::NotAComplex(_))));
    }
}
