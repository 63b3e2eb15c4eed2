//! Mixed complexes over a finite-field point.
//!
//! Frobenius on an object over `pt_n` is stored as a pair: the naive weight,
//! which is the graded degree `g` of the underlying [`Bigraded`], and a
//! quasi-unipotent rational matrix `θ` on each bidegree (the unit part). The
//! prime power `q` is never evaluated.
//!
//! Objects obtained by extension of scalars from a finer level live on several
//! geometric points at once. Each basis vector records the point ("sheet") it
//! sits on; differentials preserve sheets and `θ` permutes them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bigraded::{hom_layout, tensor_layout, Bidegree, Bigraded, BigradedError, ChainMap};
use crate::linalg::Matrix;
use crate::scalar::{Field, Q};

/// Largest period tried when certifying that `θ` is quasi-unipotent.
pub const MAX_PERIOD: u32 = 120;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MixedError {
    #[error("Tate twist by {0} is not a half-integer")]
    NonHalfIntegerTwist(Q),
    #[error("objects live over pt_{0} and pt_{1}")]
    LevelMismatch(u32, u32),
    #[error("objects live on {0} and {1} geometric points")]
    SheetMismatch(usize, usize),
    #[error("cannot induce from pt_{from} to pt_{to}")]
    BadLevels { from: u32, to: u32 },
    #[error("theta at {0} is not an invertible matrix of the right size")]
    ThetaShape(Bidegree),
    #[error("theta does not commute with the differential at {0}")]
    ThetaNotChainMap(Bidegree),
    #[error("theta at {0} is not quasi-unipotent with period at most {MAX_PERIOD}")]
    NotQuasiUnipotent(Bidegree),
    #[error("sheet data at {0} is inconsistent with the differential or theta")]
    BadSheets(Bidegree),
    #[error("tensor products are only defined for objects on a single geometric point")]
    MultiSheetTensor,
    #[error(transparent)]
    Bigraded(#[from] BigradedError),
}

/// An object of the mixed category over `pt_level`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedObject {
    underlying: Bigraded,
    theta: BTreeMap<Bidegree, Matrix<Q>>,
    level: u32,
    sheets: usize,
    sheet_of: BTreeMap<Bidegree, Vec<usize>>,
    period: u32,
}

fn is_nilpotent(m: &Matrix<Q>) -> bool {
    m.pow(m.rows() as u32).is_zero()
}

/// Smallest `r ≤ MAX_PERIOD` with `θ^r − 1` nilpotent.
fn period_of(theta: &Matrix<Q>) -> Option<u32> {
    let n = theta.rows();
    let id = Matrix::identity(n);
    let mut p = theta.clone();
    for r in 1..=MAX_PERIOD {
        if is_nilpotent(&p.sub(&id)) {
            return Some(r);
        }
        p = p.mul(theta);
    }
    None
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

impl MixedObject {
    /// Build an object on a single geometric point. Missing `θ` blocks are the identity.
    pub fn new(underlying: Bigraded, theta: BTreeMap<Bidegree, Matrix<Q>>, level: u32) -> Result<Self, MixedError> {
        let sheet_of = underlying.support().map(|bd| (bd, vec![0; underlying.dim(bd)])).collect();
        Self::with_sheets(underlying, theta, level, 1, sheet_of)
    }

    /// Build an object whose basis vectors are spread over `sheets` geometric points.
    pub fn with_sheets(
        underlying: Bigraded,
        mut theta: BTreeMap<Bidegree, Matrix<Q>>,
        level: u32,
        sheets: usize,
        sheet_of: BTreeMap<Bidegree, Vec<usize>>,
    ) -> Result<Self, MixedError> {
        if level == 0 {
            return Err(MixedError::BadLevels { from: 0, to: 0 });
        }
        theta.retain(|bd, _| underlying.dim(*bd) > 0);
        for bd in underlying.support() {
            let n = underlying.dim(bd);
            let t = theta.entry(bd).or_insert_with(|| Matrix::identity(n));
            if t.rows() != n || t.cols() != n || t.inverse().is_none() {
                return Err(MixedError::ThetaShape(bd));
            }
        }
        let mut period = 1;
        for (&bd, t) in &theta {
            let r = period_of(t).ok_or(MixedError::NotQuasiUnipotent(bd))?;
            period = lcm(period, r);
        }
        let m = MixedObject { underlying, theta, level, sheets: sheets.max(1), sheet_of, period };
        for bd in m.underlying.support() {
            let d = m.underlying.diff(bd);
            if m.theta_at(bd.next()).mul(&d) != d.mul(&m.theta_at(bd)) {
                return Err(MixedError::ThetaNotChainMap(bd));
            }
            m.check_sheets(bd)?;
        }
        Ok(m)
    }

    fn check_sheets(&self, bd: Bidegree) -> Result<(), MixedError> {
        let s = self.sheets_at(bd);
        if s.len() != self.underlying.dim(bd) || s.iter().any(|&k| k >= self.sheets) {
            return Err(MixedError::BadSheets(bd));
        }
        let t = self.sheets_at(bd.next());
        let d = self.underlying.diff(bd);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if !d[(i, j)].is_zero() && t[i] != s[j] {
                    return Err(MixedError::BadSheets(bd));
                }
            }
        }
        // θ must carry each sheet onto a single sheet
        let th = self.theta_at(bd);
        let mut image = vec![None; self.sheets];
        for j in 0..th.cols() {
            for i in 0..th.rows() {
                if !th[(i, j)].is_zero() {
                    match image[s[j]] {
                        None => image[s[j]] = Some(s[i]),
                        Some(k) if k == s[i] => {}
                        Some(_) => return Err(MixedError::BadSheets(bd)),
                    }
                }
            }
        }
        Ok(())
    }

    /// The unit over `pt_level`.
    pub fn unit(level: u32) -> Self {
        Self::new(Bigraded::unit(), BTreeMap::new(), level).expect("unit is valid")
    }

    /// A pure object of weight `g` in cohomological degree 0 with the given `θ`.
    pub fn pure(g: i32, theta: Matrix<Q>, level: u32) -> Result<Self, MixedError> {
        let bd = Bidegree::new(g, 0);
        let v = Bigraded::spaces([(bd, theta.rows())]);
        Self::new(v, BTreeMap::from([(bd, theta)]), level)
    }

    /// The weight-0 plane over `pt_1` whose Frobenius swaps the two basis vectors.
    pub fn swap() -> Self {
        let s = Matrix::from_rows(vec![vec![Q::int(0), Q::int(1)], vec![Q::int(1), Q::int(0)]]);
        Self::pure(0, s, 1).expect("swap is quasi-unipotent")
    }

    pub fn underlying(&self) -> &Bigraded {
        &self.underlying
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn sheets(&self) -> usize {
        self.sheets
    }

    /// The witnessed period `r`: `θ^r − 1` is nilpotent in every bidegree.
    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn theta_at(&self, bd: Bidegree) -> Matrix<Q> {
        self.theta.get(&bd).cloned().unwrap_or_else(|| Matrix::identity(self.underlying.dim(bd)))
    }

    pub fn sheets_at(&self, bd: Bidegree) -> &[usize] {
        self.sheet_of.get(&bd).map_or(&[], Vec::as_slice)
    }

    /// Replace `θ` while keeping everything else.
    pub fn with_theta(&self, theta: BTreeMap<Bidegree, Matrix<Q>>) -> Result<Self, MixedError> {
        Self::with_sheets(self.underlying.clone(), theta, self.level, self.sheets, self.sheet_of.clone())
    }

    fn same_base(&self, other: &MixedObject) -> Result<(), MixedError> {
        if self.level != other.level {
            return Err(MixedError::LevelMismatch(self.level, other.level));
        }
        if self.sheets != other.sheets {
            return Err(MixedError::SheetMismatch(self.sheets, other.sheets));
        }
        Ok(())
    }

    /// Tensor product; only objects on a single geometric point.
    pub fn tensor(&self, other: &MixedObject) -> Result<MixedObject, MixedError> {
        self.same_base(other)?;
        if self.sheets != 1 {
            return Err(MixedError::MultiSheetTensor);
        }
        let v = self.underlying.tensor(&other.underlying);
        let mut theta = BTreeMap::new();
        for (bd, blocks) in tensor_layout(&self.underlying, &other.underlying) {
            let mut t = Matrix::zeros(v.dim(bd), v.dim(bd));
            for (p, q, off) in blocks {
                t.set_block(off, off, &self.theta_at(p).kron(&other.theta_at(q)));
            }
            theta.insert(bd, t);
        }
        MixedObject::new(v, theta, self.level)
    }
}

/// `gr`: forget Frobenius, keeping the naive weight as graded degree.
pub fn gr(m: &MixedObject) -> Bigraded {
    m.underlying.clone()
}

/// `M(k)`: weights move by `−2k`; `2k` must be an integer.
pub fn tate_twist(m: &MixedObject, k: &Q) -> Result<MixedObject, MixedError> {
    let two_k = k.mul(&Q::int(2));
    let shift = two_k
        .to_i64()
        .filter(|_| two_k.is_integer())
        .and_then(|x| i32::try_from(x).ok())
        .ok_or_else(|| MixedError::NonHalfIntegerTwist(k.clone()))?;
    let move_bd = |bd: Bidegree| Bidegree::new(bd.g - shift, bd.c);
    Ok(MixedObject {
        underlying: m.underlying.shift_gr(shift),
        theta: m.theta.iter().map(|(bd, t)| (move_bd(*bd), t.clone())).collect(),
        level: m.level,
        sheets: m.sheets,
        sheet_of: m.sheet_of.iter().map(|(bd, s)| (move_bd(*bd), s.clone())).collect(),
        period: m.period,
    })
}

/// The enriched Hom: graded degree is relative weight and `θ` acts by
/// `f ↦ θ_N f θ_M⁻¹`. Only sheet-preserving maps are kept.
pub fn hom_enriched(m: &MixedObject, n: &MixedObject) -> Result<MixedObject, MixedError> {
    m.same_base(n)?;
    let (v, w) = (&m.underlying, &n.underlying);
    let full = v.hom_complex(w);
    let layout = hom_layout(v, w);
    // indices of sheet-preserving basis maps in each bidegree of `full`
    let mut keep: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
    for (bd, blocks) in &layout {
        let k = keep.entry(*bd).or_default();
        for &(s, t, off) in blocks {
            let (ss, ts) = (m.sheets_at(s), n.sheets_at(t));
            for i in 0..w.dim(t) {
                for j in 0..v.dim(s) {
                    if ts[i] == ss[j] {
                        k.push(off + i * v.dim(s) + j);
                    }
                }
            }
        }
    }
    let mut labels = BTreeMap::new();
    for (bd, idx) in &keep {
        let all = full.labels(*bd);
        labels.insert(*bd, idx.iter().map(|&i| all[i].clone()).collect::<Vec<_>>());
    }
    let mut diffs = BTreeMap::new();
    for (bd, d) in full.diffs() {
        let (src, tgt) = (&keep[&bd], &keep[&bd.next()]);
        let mut sub = Matrix::zeros(tgt.len(), src.len());
        for (a, &i) in tgt.iter().enumerate() {
            for (b, &j) in src.iter().enumerate() {
                sub[(a, b)] = d[(i, j)].clone();
            }
        }
        diffs.insert(bd, sub);
    }
    let hom = Bigraded::from_labeled(labels, diffs)?;

    let mut theta = BTreeMap::new();
    for (bd, blocks) in &layout {
        let idx = &keep[bd];
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let mut t: Matrix<Q> = Matrix::zeros(idx.len(), idx.len());
        for &(s, tb, off) in blocks {
            let ds = v.dim(s);
            let tn = n.theta_at(tb);
            let tm_inv = m.theta_at(s).inverse().expect("theta is invertible");
            for i in 0..w.dim(tb) {
                for j in 0..ds {
                    let Some(&col) = pos.get(&(off + i * ds + j)) else { continue };
                    // θ_N E_ij θ_M⁻¹ has entry (k, l) = θ_N[k, i] · θ_M⁻¹[j, l]
                    for k in 0..w.dim(tb) {
                        if tn[(k, i)].is_zero() {
                            continue;
                        }
                        for l in 0..ds {
                            let x = tn[(k, i)].mul(&tm_inv[(j, l)]);
                            if x.is_zero() {
                                continue;
                            }
                            let row = pos.get(&(off + k * ds + l)).ok_or(MixedError::BadSheets(*bd))?;
                            t[(*row, col)] = t[(*row, col)].add(&x);
                        }
                    }
                }
            }
        }
        theta.insert(*bd, t);
    }
    MixedObject::new(hom, theta, m.level)
}

fn weight_zero_part(h: &MixedObject) -> (Bigraded, BTreeMap<Bidegree, Matrix<Q>>) {
    let v = &h.underlying;
    let labels = v.support().filter(|bd| bd.g == 0).map(|bd| (bd, v.labels(bd).to_vec())).collect();
    let diffs = v.diffs().filter(|(bd, _)| bd.g == 0).map(|(bd, d)| (bd, d.clone())).collect();
    let theta = h.theta.iter().filter(|(bd, _)| bd.g == 0).map(|(bd, t)| (*bd, t.clone())).collect();
    (Bigraded::from_labeled(labels, diffs).expect("graded piece of a complex"), theta)
}

/// Hom in the graded category: the weight-0 piece of the enriched Hom.
pub fn hom_graded(m: &MixedObject, n: &MixedObject) -> Result<Bigraded, MixedError> {
    Ok(weight_zero_part(&hom_enriched(m, n)?).0)
}

/// Hom in the mixed category: the total complex of `1 − θ` acting on the
/// weight-0 piece `H`. Degree `c` is `H^c ⊕ H^{c−1}` with
/// `D(a, b) = (d a, (1 − θ) a − d b)`.
pub fn hom_mixed(m: &MixedObject, n: &MixedObject) -> Result<Bigraded, MixedError> {
    let (h, theta) = weight_zero_part(&hom_enriched(m, n)?);
    let mut cs: Vec<i32> = h.support().map(|bd| bd.c).collect();
    cs.extend(h.support().map(|bd| bd.c + 1));
    cs.sort_unstable();
    cs.dedup();
    let at = |c| Bidegree::new(0, c);
    let mut labels = BTreeMap::new();
    for &c in &cs {
        let mut l: Vec<String> = h.labels(at(c)).to_vec();
        l.extend(h.labels(at(c - 1)).iter().map(|s| format!("coinv:{s}")));
        labels.insert(at(c), l);
    }
    let mut diffs = BTreeMap::new();
    for &c in &cs {
        let (a0, b0) = (h.dim(at(c)), h.dim(at(c - 1)));
        let (a1, b1) = (h.dim(at(c + 1)), h.dim(at(c)));
        if a0 + b0 == 0 || a1 + b1 == 0 {
            continue;
        }
        let mut d = Matrix::zeros(a1 + b1, a0 + b0);
        d.set_block(0, 0, &h.diff(at(c)));
        let t = theta.get(&at(c)).cloned().unwrap_or_else(|| Matrix::identity(a0));
        d.set_block(a1, 0, &Matrix::identity(a0).sub(&t));
        d.set_block(a1, a0, &h.diff(at(c - 1)).scale(&Q::int(-1)));
        diffs.insert(at(c), d);
    }
    Ok(Bigraded::from_labeled(labels, diffs)?)
}

/// Extension of scalars from `pt_m` (the level of `m`) to `pt_n`, `n | m`.
pub fn induce(m: &MixedObject, n: u32) -> Result<MixedObject, MixedError> {
    if n == 0 || m.level % n != 0 {
        return Err(MixedError::BadLevels { from: m.level, to: n });
    }
    let e = (m.level / n) as usize;
    if e == 1 {
        let mut out = m.clone();
        out.level = n;
        return Ok(out);
    }
    let v = &m.underlying;
    let mut labels = BTreeMap::new();
    let mut sheet_of = BTreeMap::new();
    let mut theta = BTreeMap::new();
    for bd in v.support() {
        let dim = v.dim(bd);
        let mut l = Vec::with_capacity(e * dim);
        let mut s = Vec::with_capacity(e * dim);
        for k in 0..e {
            l.extend(v.labels(bd).iter().map(|x| format!("{x}@{k}")));
            s.extend(m.sheets_at(bd).iter().map(|&x| k * m.sheets + x));
        }
        labels.insert(bd, l);
        sheet_of.insert(bd, s);
        // T(x_0, …, x_{e−1}) = (θ x_{e−1}, x_0, …, x_{e−2})
        let mut t = Matrix::zeros(e * dim, e * dim);
        t.set_block(0, (e - 1) * dim, &m.theta_at(bd));
        for k in 1..e {
            t.set_block(k * dim, (k - 1) * dim, &Matrix::identity(dim));
        }
        theta.insert(bd, t);
    }
    let mut diffs = BTreeMap::new();
    for (bd, d) in v.diffs() {
        let mut big = Matrix::zeros(e * d.rows(), e * d.cols());
        for k in 0..e {
            big.set_block(k * d.rows(), k * d.cols(), d);
        }
        diffs.insert(bd, big);
    }
    let under = Bigraded::from_labeled(labels, diffs)?;
    MixedObject::with_sheets(under, theta, n, e * m.sheets, sheet_of)
}

/// Both sides of the sum-over-shifts identity, as cohomology dimensions per
/// cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OblvGrSum {
    pub shifted_graded: BTreeMap<i32, usize>,
    pub forgotten: BTreeMap<i32, usize>,
    pub pass: bool,
}

/// Compare `⊕_k Hom_gr(M, N⟨k⟩)` with the Hom complex of the underlying
/// objects with Frobenius forgotten.
pub fn oblv_gr_sum(m: &MixedObject, n: &MixedObject) -> Result<OblvGrSum, MixedError> {
    let full = hom_enriched(m, n)?;
    let mut forgotten = BTreeMap::new();
    for (bd, d) in full.underlying.cohomology() {
        *forgotten.entry(bd.c).or_insert(0) += d;
    }
    let weights = |x: &MixedObject| x.underlying.support().map(|bd| bd.g).collect::<Vec<_>>();
    let (wm, wn) = (weights(m), weights(n));
    let mut shifted_graded = BTreeMap::new();
    if let (Some(lo), Some(hi)) = (wn.iter().min().zip(wm.iter().max()).map(|(a, b)| a - b), wn.iter().max().zip(wm.iter().min()).map(|(a, b)| a - b)) {
        for k in lo..=hi {
            // N⟨k⟩ is the half-integral twist N(k/2)
            let twisted = tate_twist(n, &Q::new(k as i64, 2))?;
            for (bd, d) in hom_graded(m, &twisted)?.cohomology() {
                *shifted_graded.entry(bd.c).or_insert(0) += d;
            }
        }
    }
    let pass = shifted_graded == forgotten;
    Ok(OblvGrSum { shifted_graded, forgotten, pass })
}

/// The weight-0 piece as a direct summand of the forgotten Hom complex:
/// returns the inclusion and the projection, whose composite is the identity.
pub fn graded_summand(m: &MixedObject, n: &MixedObject) -> Result<(ChainMap, ChainMap), MixedError> {
    let full = hom_enriched(m, n)?.underlying;
    let (zero, _) = weight_zero_part(&hom_enriched(m, n)?);
    let comps: BTreeMap<Bidegree, Matrix<Q>> =
        zero.support().map(|bd| (bd, Matrix::identity(zero.dim(bd)))).collect();
    let inc = ChainMap::new(zero.clone(), full.clone(), comps.clone())?;
    let proj = ChainMap::new(full, zero, comps)?;
    Ok((inc, proj))
}

#[derive(Serialize, Deserialize)]
struct ThetaJson {
    g: i32,
    c: i32,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct MixedJson {
    complex: serde_json::Value,
    theta: Vec<ThetaJson>,
    level: u32,
}

impl MixedObject {
    /// JSON form; only objects on a single geometric point round-trip.
    pub fn to_json(&self) -> serde_json::Value {
        let theta = self
            .theta
            .iter()
            .map(|(bd, t)| ThetaJson { g: bd.g, c: bd.c, matrix: crate::bigraded::matrix_to_strings(t) })
            .collect();
        serde_json::to_value(MixedJson { complex: self.underlying.to_json(), theta, level: self.level })
            .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, MixedError> {
        let j: MixedJson =
            serde_json::from_value(v.clone()).map_err(|e| BigradedError::Malformed(e.to_string()))?;
        let under = Bigraded::from_json(&j.complex)?;
        let mut theta = BTreeMap::new();
        for t in j.theta {
            let bd = Bidegree::new(t.g, t.c);
            let n = under.dim(bd);
            theta.insert(bd, crate::bigraded::matrix_from_strings(&t.matrix, (n, n))?);
        }
        MixedObject::new(under, theta, j.level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bd(g: i32, c: i32) -> Bidegree {
        Bidegree::new(g, c)
    }

    #[test]
    fn gr_forgets_theta() {
        assert_eq!(gr(&MixedObject::unit(1)), Bigraded::unit());
        assert_eq!(gr(&MixedObject::swap()).dims(), BTreeMap::from([(bd(0, 0), 2)]));
        let jordan = Matrix::from_rows(vec![vec![Q::int(1), Q::int(1)], vec![Q::int(0), Q::int(1)]]);
        let j = MixedObject::pure(0, jordan, 1).unwrap();
        assert_eq!(gr(&j), gr(&MixedObject::pure(0, Matrix::identity(2), 1).unwrap()));
    }

    #[test]
    fn rejects_bad_theta() {
        let two = Matrix::from_rows(vec![vec![Q::int(2)]]);
        assert!(matches!(MixedObject::pure(0, two, 1), Err(MixedError::NotQuasiUnipotent(_))));
        let sing = Matrix::from_rows(vec![vec![Q::int(0)]]);
        assert!(matches!(MixedObject::pure(0, sing, 1), Err(MixedError::ThetaShape(_))));
    }

    #[test]
    fn tate_twist_moves_weight() {
        let t = tate_twist(&MixedObject::unit(1), &Q::new(-1, 2)).unwrap();
        assert_eq!(gr(&t).dims(), BTreeMap::from([(bd(1, 0), 1)]));
        assert_eq!(tate_twist(&MixedObject::swap(), &Q::int(0)).unwrap(), MixedObject::swap());
        assert!(matches!(tate_twist(&MixedObject::unit(1), &Q::new(1, 3)), Err(MixedError::NonHalfIntegerTwist(_))));
    }

    #[test]
    fn enriched_hom_examples() {
        let u = MixedObject::unit(1);
        assert_eq!(hom_enriched(&u, &u).unwrap(), u);
        let s = MixedObject::swap();
        let h = hom_enriched(&s, &s).unwrap();
        assert_eq!(h.underlying().dims(), BTreeMap::from([(bd(0, 0), 4)]));
        let t = h.theta_at(bd(0, 0));
        assert_eq!(t.mul(&t), Matrix::identity(4));
        // eigenvalue +1 with multiplicity 2 (centralizer) and −1 with multiplicity 2
        assert_eq!(t.sub(&Matrix::identity(4)).rank(), 2);
        let a = tate_twist(&u, &Q::new(-1, 2)).unwrap();
        let b = tate_twist(&u, &Q::int(-2)).unwrap();
        assert_eq!(hom_enriched(&a, &b).unwrap().underlying().dims(), BTreeMap::from([(bd(3, 0), 1)]));
        assert!(matches!(hom_enriched(&u, &MixedObject::unit(2)), Err(MixedError::LevelMismatch(1, 2))));
    }

    #[test]
    fn graded_hom_examples() {
        let u = MixedObject::unit(1);
        assert_eq!(hom_graded(&u, &u).unwrap(), Bigraded::unit());
        let u2 = MixedObject::unit(2);
        let i = induce(&u2, 1).unwrap();
        assert_eq!(hom_graded(&i, &i).unwrap().total_dim(), 2);
        assert_eq!(hom_graded(&u2, &u2).unwrap().total_dim(), 1);
        let w2 = tate_twist(&u, &Q::int(-1)).unwrap();
        assert!(hom_graded(&u, &w2).unwrap().is_zero());
    }

    #[test]
    fn mixed_hom_examples() {
        let u = MixedObject::unit(1);
        let h = hom_mixed(&u, &u).unwrap().cohomology();
        assert_eq!(h, BTreeMap::from([(bd(0, 0), 1), (bd(0, 1), 1)]));
        let w2 = tate_twist(&u, &Q::int(-1)).unwrap();
        assert!(hom_mixed(&u, &w2).unwrap().cohomology().is_empty());
        let s = MixedObject::swap();
        assert_eq!(hom_mixed(&s, &s).unwrap().cohomology().get(&bd(0, 0)), Some(&2));
    }

    #[test]
    fn induce_examples() {
        let i = induce(&MixedObject::unit(2), 1).unwrap();
        assert_eq!(i.theta_at(bd(0, 0)), MixedObject::swap().theta_at(bd(0, 0)));
        assert_eq!(i.sheets(), 2);
        let s = MixedObject::swap();
        assert_eq!(induce(&s, 1).unwrap(), s);
        assert!(matches!(induce(&MixedObject::unit(3), 2), Err(MixedError::BadLevels { .. })));
        let six = induce(&MixedObject::unit(6), 2).unwrap();
        let t = six.theta_at(bd(0, 0));
        assert_eq!(t.pow(3), Matrix::identity(3));
        let nested = induce(&six, 1).unwrap();
        assert_eq!(nested.sheets(), 6);
        assert_eq!(hom_graded(&nested, &nested).unwrap().total_dim(), 6);
    }

    #[test]
    fn oblv_examples() {
        let u = MixedObject::unit(1);
        let r = oblv_gr_sum(&u, &u).unwrap();
        assert!(r.pass);
        assert_eq!(r.forgotten, BTreeMap::from([(0, 1)]));
        let r = oblv_gr_sum(&MixedObject::swap(), &u).unwrap();
        assert!(r.pass);
        assert_eq!(r.shifted_graded, BTreeMap::from([(0, 2)]));
    }

    #[test]
    fn summand_splits() {
        let s = MixedObject::swap();
        let a = tate_twist(&s, &Q::new(1, 2)).unwrap().tensor(&s).unwrap();
        let m = s.tensor(&MixedObject::unit(1)).unwrap();
        let n = m.underlying().direct_sum(a.underlying());
        let n = MixedObject::new(n, BTreeMap::new(), 1).unwrap();
        let (i, p) = graded_summand(&m, &n).unwrap();
        assert_eq!(i.compose(&p), ChainMap::identity(&i.source));
    }

    #[test]
    fn json_roundtrip() {
        let s = MixedObject::swap();
        assert_eq!(MixedObject::from_json(&s.to_json()).unwrap(), s);
    }
}
