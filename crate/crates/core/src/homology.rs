//! Hochschild homology of bimodules through the Koszul complex, and triply
//! graded homology of braid closures.
//!
//! Gradings: `h` is the Hochschild degree, `g` the internal degree and `c`
//! the chain degree. Each Koszul generator `θ_k` sits in `(g, h) = (2, 1)`
//! and each polynomial generator in `(2, 0)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complexes::{rouquier, BimoduleComplex, ComplexError};
use crate::coxeter::{CoxeterError, CoxeterSystem};
use crate::hecke::{braid_element, jones_ocneanu_trace, HeckeError};
use crate::laurent::{Laurent2, LaurentPoly};
use crate::poly::{monomials_of_degree, var_monomial, Monomial, PolyMatrix};
use crate::scalar::{Coeff, Field};
use crate::soergel::{coeff_rank, kernel, Bimodule, HomWindow};

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("Hilbert series did not stabilize within an internal-degree window of {window}")]
    WindowTooSmall { window: i32 },
    #[error("a braid on {strands} strands cannot use generator {generator}")]
    BadBraid { strands: usize, generator: usize },
    #[error("braid closures need at least one strand")]
    NoStrands,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// Basis `(θ-subset, left basis index, monomial)` of one Koszul chain space.
struct Space {
    basis: Vec<(u32, usize, Monomial)>,
    index: HashMap<(u32, usize, Monomial), usize>,
}

impl Space {
    fn new(b: &Bimodule, h: usize, g: i32) -> Space {
        let m = b.ring().nvars();
        let mut basis = Vec::new();
        for mask in 0u32..(1u32 << m) {
            if mask.count_ones() as usize != h {
                continue;
            }
            for (i, &d) in b.degrees().iter().enumerate() {
                let e = g - 2 * h as i32 - d;
                if e < 0 || e % 2 != 0 {
                    continue;
                }
                for mono in monomials_of_degree(m, (e / 2) as u32) {
                    basis.push((mask, i, mono));
                }
            }
        }
        let index = basis.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        Space { basis, index }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }
}

fn push(acc: &mut BTreeMap<usize, Coeff>, k: usize, c: &Coeff) {
    let e = acc.entry(k).or_insert_with(Coeff::zero);
    *e = e.add(c);
}

fn finish(acc: BTreeMap<usize, Coeff>) -> Vec<(usize, Coeff)> {
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// Images of the basis of `src = C_h` under the Koszul differential
/// `∂(u θ_S) = Σ_j (−1)^j (x_{k_j} u − u x_{k_j}) θ_{S∖k_j}`.
fn boundary(b: &Bimodule, src: &Space, tgt: &Space) -> Vec<Vec<(usize, Coeff)>> {
    let m = b.ring().nvars();
    src.basis
        .iter()
        .map(|&(mask, i, mono)| {
            let mut acc = BTreeMap::new();
            let mut j = 0;
            for k in 0..m {
                if mask & (1 << k) == 0 {
                    continue;
                }
                let sign = if j % 2 == 0 { Coeff::one() } else { Coeff::one().neg() };
                j += 1;
                let rest = mask & !(1 << k);
                if let Some(&t) = tgt.index.get(&(rest, i, mono + var_monomial(k))) {
                    push(&mut acc, t, &sign);
                }
                let p = b.action(k);
                for l in 0..b.rank() {
                    for (nu, c) in p[(i, l)].terms() {
                        let t = tgt.index[&(rest, l, mono + nu)];
                        push(&mut acc, t, &sign.mul(c).neg());
                    }
                }
            }
            finish(acc)
        })
        .collect()
}

fn transpose(rows: &[Vec<(usize, Coeff)>], cols: usize) -> Vec<Vec<(usize, Coeff)>> {
    let mut out = vec![Vec::new(); cols];
    for (r, row) in rows.iter().enumerate() {
        for (c, x) in row {
            out[*c].push((r, x.clone()));
        }
    }
    out.retain(|r| !r.is_empty());
    out
}

/// Applies a degree-0 bimodule map (row convention) to a Koszul chain.
fn apply(f: &PolyMatrix, v: &[Coeff], src: &Space, tgt: &Space) -> Vec<(usize, Coeff)> {
    let mut acc = BTreeMap::new();
    for (k, a) in v.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let (mask, i, mono) = src.basis[k];
        for l in 0..f.cols() {
            for (nu, c) in f[(i, l)].terms() {
                push(&mut acc, tgt.index[&(mask, l, mono + nu)], &a.mul(c));
            }
        }
    }
    finish(acc)
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `series · (1 − v²)^m` if its last `2m + 2` coefficients vanish.
fn stable_numerator(series: &[i64], low: i32, m: usize) -> Option<LaurentPoly> {
    let tail = 2 * m + 2;
    if series.len() <= tail {
        return None;
    }
    let num: Vec<i64> = (0..series.len())
        .map(|t| {
            (0..=m)
                .filter(|&j| 2 * j <= t)
                .map(|j| (if j % 2 == 0 { 1 } else { -1 }) * binomial(m, j) * series[t - 2 * j])
                .sum()
        })
        .collect();
    let cut = series.len() - tail;
    if num[cut..].iter().any(|&x| x != 0) {
        return None;
    }
    Some(LaurentPoly::from_terms(num[..cut].iter().enumerate().map(|(t, &x)| (low + t as i32, x))))
}

/// Hochschild homology dimensions `(h, g) → dim` in the window `low..=high`,
/// with each `HH_h` summarized by the numerator of its Hilbert series over
/// `(1 − v²)^{nvars}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HochschildTable {
    pub nvars: usize,
    pub low: i32,
    pub high: i32,
    pub dims: BTreeMap<(usize, i32), usize>,
    pub numerators: BTreeMap<usize, LaurentPoly>,
}

impl HochschildTable {
    pub fn dim(&self, h: usize, g: i32) -> usize {
        self.dims.get(&(h, g)).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "nvars": self.nvars,
            "window": [self.low, self.high],
            "entries": self.dims.iter().map(|(&(h, g), &d)| json!({"h": h, "g": g, "dim": d})).collect::<Vec<_>>(),
            "numerators": self.numerators.iter().map(|(h, p)| json!({"h": h, "numerator": p.to_string()})).collect::<Vec<_>>(),
        })
    }
}

fn hh_dims(b: &Bimodule, g: i32) -> Vec<usize> {
    let m = b.ring().nvars();
    let spaces: Vec<Space> = (0..=m).map(|h| Space::new(b, h, g)).collect();
    let ranks: Vec<usize> = (0..=m)
        .map(|h| if h == 0 { 0 } else { coeff_rank(&boundary(b, &spaces[h], &spaces[h - 1]), spaces[h - 1].len()) })
        .collect();
    (0..=m).map(|h| spaces[h].len() - ranks[h] - if h < m { ranks[h + 1] } else { 0 }).collect()
}

pub fn hochschild(b: &Bimodule) -> Result<HochschildTable, HomologyError> {
    hochschild_with_window(b, HomWindow::Auto)
}

pub fn hochschild_with_window(b: &Bimodule, window: HomWindow) -> Result<HochschildTable, HomologyError> {
    let m = b.ring().nvars();
    if b.rank() == 0 {
        return Ok(HochschildTable { nvars: m, low: 0, high: -1, dims: BTreeMap::new(), numerators: BTreeMap::new() });
    }
    let low = *b.degrees().iter().min().expect("nonempty");
    let spread = b.degrees().iter().max().expect("nonempty") - low;
    let base = spread + 2 * (2 * m as i32 + 2);
    let mut width = match window {
        HomWindow::Auto => base,
        HomWindow::Fixed(w) if w < spread + 2 * m as i32 + 2 => return Err(HomologyError::WindowTooSmall { window: w }),
        HomWindow::Fixed(w) => w,
    };
    let mut per_g: Vec<Vec<usize>> = Vec::new();
    loop {
        while (per_g.len() as i32) <= width {
            per_g.push(hh_dims(b, low + per_g.len() as i32));
        }
        let mut numerators = BTreeMap::new();
        let mut ok = true;
        for h in 0..=m {
            let series: Vec<i64> = per_g[..=width as usize].iter().map(|d| d[h] as i64).collect();
            match stable_numerator(&series, low, m) {
                Some(p) => {
                    numerators.insert(h, p);
                }
                None => ok = false,
            }
        }
        if ok {
            let mut dims = BTreeMap::new();
            for (t, d) in per_g[..=width as usize].iter().enumerate() {
                for (h, &x) in d.iter().enumerate() {
                    if x > 0 {
                        dims.insert((h, low + t as i32), x);
                    }
                }
            }
            numerators.retain(|_, p| !p.is_zero());
            return Ok(HochschildTable { nvars: m, low, high: low + width, dims, numerators });
        }
        match window {
            HomWindow::Fixed(w) => return Err(HomologyError::WindowTooSmall { window: w }),
            HomWindow::Auto if width >= 4 * base => return Err(HomologyError::WindowTooSmall { window: width }),
            HomWindow::Auto => width *= 2,
        }
    }
}

/// Triply graded homology of a braid closure: dimensions `(h, g, c) → dim`
/// in the window `low..=high`, and per `(h, c)` the numerator of the
/// Hilbert series over `(1 − v²)^{strands}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriplyGraded {
    pub strands: usize,
    pub low: i32,
    pub high: i32,
    pub dims: BTreeMap<(usize, i32, i32), usize>,
    pub numerators: BTreeMap<(usize, i32), LaurentPoly>,
}

impl TriplyGraded {
    pub fn dim(&self, h: usize, g: i32, c: i32) -> usize {
        self.dims.get(&(h, g, c)).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "strands": self.strands,
            "window": [self.low, self.high],
            "entries": self.dims.iter().map(|(&(h, g, c), &d)| json!({"h": h, "g": g, "c": c, "dim": d})).collect::<Vec<_>>(),
            "euler_characteristic": euler_characteristic(self).to_string(),
        })
    }
}

/// `H^c` of the complex `HH_h(C^•)` in internal degree `g`, for all `h` and `c`.
fn chain_homology(cx: &BimoduleComplex, g: i32) -> BTreeMap<(usize, i32), usize> {
    let m = cx.ring().nvars();
    let degrees: Vec<i32> = cx.degrees().collect();
    let sums: HashMap<i32, Bimodule> = degrees
        .iter()
        .map(|&c| {
            let b = cx.term(c).iter().fold(Bimodule::zero(cx.ring()), |acc, p| acc.direct_sum(&p.bimodule).expect("same ring"));
            (c, b)
        })
        .collect();
    let mut out = BTreeMap::new();
    for h in 0..=m {
        let space = |c: i32, h: usize| sums.get(&c).map(|b| Space::new(b, h, g));
        // cycles Z^c, boundaries B^c as vectors in C^c_h
        let mut cycles: HashMap<i32, Vec<Vec<Coeff>>> = HashMap::new();
        let mut bounds: HashMap<i32, Vec<Vec<(usize, Coeff)>>> = HashMap::new();
        let mut here: HashMap<i32, Space> = HashMap::new();
        for &c in &degrees {
            let b = &sums[&c];
            let s = space(c, h).expect("term");
            let z = if h == 0 {
                (0..s.len())
                    .map(|k| {
                        let mut e = vec![Coeff::zero(); s.len()];
                        e[k] = Coeff::one();
                        e
                    })
                    .collect()
            } else {
                let lower = space(c, h - 1).expect("term");
                kernel(&transpose(&boundary(b, &s, &lower), lower.len()), s.len())
            };
            let bd = if h < m { boundary(b, &space(c, h + 1).expect("term"), &s) } else { Vec::new() };
            cycles.insert(c, z);
            bounds.insert(c, bd);
            here.insert(c, s);
        }
        let rank_b: HashMap<i32, usize> = degrees.iter().map(|&c| (c, coeff_rank(&bounds[&c], here[&c].len()))).collect();
        // rank of the induced map Z^c/B^c → Z^{c+1}/B^{c+1}
        let mut induced: HashMap<i32, usize> = HashMap::new();
        for &c in &degrees {
            let Some(next) = here.get(&(c + 1)) else { continue };
            let d = cx.diff(c);
            let mut rows: Vec<Vec<(usize, Coeff)>> = cycles[&c].iter().map(|z| apply(&d, z, &here[&c], next)).collect();
            rows.extend(bounds[&(c + 1)].iter().cloned());
            induced.insert(c, coeff_rank(&rows, next.len()) - rank_b[&(c + 1)]);
        }
        for &c in &degrees {
            let q = cycles[&c].len() - rank_b[&c];
            let dim = q - induced.get(&c).copied().unwrap_or(0) - induced.get(&(c - 1)).copied().unwrap_or(0);
            if dim > 0 {
                out.insert((h, c), dim);
            }
        }
    }
    out
}

fn check_braid(strands: usize, braid: &[(usize, bool)]) -> Result<(), HomologyError> {
    if strands == 0 {
        return Err(HomologyError::NoStrands);
    }
    match braid.iter().find(|&&(s, _)| s + 1 >= strands) {
        Some(&(s, _)) => Err(HomologyError::BadBraid { strands, generator: s }),
        None => Ok(()),
    }
}

/// The type A system acting on the strands through its root realization.
pub fn strand_system(strands: usize) -> Result<std::sync::Arc<CoxeterSystem>, HomologyError> {
    Ok(CoxeterSystem::named(&format!("A{}", strands - 1))?)
}

pub fn triply_graded(strands: usize, braid: &[(usize, bool)]) -> Result<TriplyGraded, HomologyError> {
    triply_graded_with_window(strands, braid, HomWindow::Auto)
}

/// Hochschild homology of the Rouquier complex over the root realization,
/// then homology in the chain direction. The remaining variable
/// `x_1 + ⋯ + x_n` acts freely and contributes the factor
/// `HH(ℚ[e]) = ℚ[e] ⊗ Λ(θ_e)` by Künneth.
pub fn triply_graded_with_window(strands: usize, braid: &[(usize, bool)], window: HomWindow) -> Result<TriplyGraded, HomologyError> {
    check_braid(strands, braid)?;
    let base = 2 * strands as i32 * (braid.len() as i32 + 4);
    let mut width = match window {
        HomWindow::Auto => base,
        HomWindow::Fixed(w) => w,
    };
    // root part: (h, g, c) → dim
    let (cx, m) = if strands == 1 {
        (None, 0)
    } else {
        let sys = strand_system(strands)?;
        let cx = rouquier(&sys, braid)?;
        let m = cx.ring().nvars();
        (Some(cx), m)
    };
    let generator_degrees: Vec<i32> = match &cx {
        None => vec![0],
        Some(cx) => cx.degrees().flat_map(|c| cx.term(c).iter().flat_map(|p| p.bimodule.degrees().to_vec())).collect(),
    };
    let low = generator_degrees.iter().copied().min().unwrap_or(0);
    let spread = generator_degrees.iter().copied().max().unwrap_or(0) - low;
    // below this the Hilbert series cannot have stabilized
    if width < spread + 2 * m as i32 + 2 {
        match window {
            HomWindow::Fixed(w) => return Err(HomologyError::WindowTooSmall { window: w }),
            HomWindow::Auto => width = spread + 2 * m as i32 + 2,
        }
    }
    let mut per_g: Vec<BTreeMap<(usize, i32), usize>> = Vec::new();
    loop {
        while (per_g.len() as i32) <= width {
            let g = low + per_g.len() as i32;
            per_g.push(match &cx {
                None => if g == 0 { BTreeMap::from([((0, 0), 1)]) } else { BTreeMap::new() },
                Some(cx) => chain_homology(cx, g),
            });
        }
        let keys: std::collections::BTreeSet<(usize, i32)> = per_g.iter().flat_map(|t| t.keys().copied()).collect();
        let mut root = BTreeMap::new();
        let mut ok = true;
        for &(h, c) in &keys {
            let series: Vec<i64> = per_g[..=width as usize].iter().map(|t| t.get(&(h, c)).copied().unwrap_or(0) as i64).collect();
            match stable_numerator(&series, low, m) {
                Some(p) => {
                    root.insert((h, c), p);
                }
                None => ok = false,
            }
        }
        if ok {
            return Ok(assemble(strands, low, low + width, &per_g, &root));
        }
        match window {
            HomWindow::Fixed(w) => return Err(HomologyError::WindowTooSmall { window: w }),
            HomWindow::Auto if width >= 4 * base => return Err(HomologyError::WindowTooSmall { window: width }),
            HomWindow::Auto => width *= 2,
        }
    }
}

/// Künneth with `HH(ℚ[e])`: generators in `(h, g) = (0, 0)` and `(1, 2)`, times `ℚ[e]`.
fn assemble(
    strands: usize,
    low: i32,
    high: i32,
    per_g: &[BTreeMap<(usize, i32), usize>],
    root: &BTreeMap<(usize, i32), LaurentPoly>,
) -> TriplyGraded {
    let mut dims: BTreeMap<(usize, i32, i32), usize> = BTreeMap::new();
    for (t, table) in per_g[..=(high - low) as usize].iter().enumerate() {
        let g = low + t as i32;
        for (&(h, c), &d) in table {
            let mut e = g;
            while e <= high {
                *dims.entry((h, e, c)).or_default() += d;
                if e + 2 <= high {
                    *dims.entry((h + 1, e + 2, c)).or_default() += d;
                }
                e += 2;
            }
        }
    }
    let theta = LaurentPoly::monomial(1, 2);
    let mut numerators: BTreeMap<(usize, i32), LaurentPoly> = BTreeMap::new();
    for (&(h, c), p) in root {
        let e = numerators.entry((h, c)).or_insert_with(LaurentPoly::zero);
        *e = &*e + p;
        let e = numerators.entry((h + 1, c)).or_insert_with(LaurentPoly::zero);
        *e = &*e + &(p * &theta);
    }
    numerators.retain(|_, p| !p.is_zero());
    TriplyGraded { strands, low, high, dims, numerators }
}

/// `Σ (−1)^c a^h v^g dim` as a rational function `numerator / (1 − v²)^strands`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerSeries {
    pub numerator: Laurent2,
    pub denominator_power: usize,
}

impl std::fmt::Display for EulerSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.numerator.is_zero() {
            return write!(f, "0");
        }
        write!(f, "({}) / (1 - v^2)^{}", self.numerator, self.denominator_power)
    }
}

pub fn euler_characteristic(t: &TriplyGraded) -> EulerSeries {
    let mut n = Laurent2::zero(("a", "v"));
    for (&(h, c), p) in &t.numerators {
        let sign = if c.rem_euclid(2) == 0 { 1 } else { -1 };
        for (e, x) in p.terms() {
            n.add_term(h as i32, e, sign * x);
        }
    }
    EulerSeries { numerator: n, denominator_power: t.strands }
}

/// The Euler numerator predicted by the Jones–Ocneanu trace, from the two
/// anchors `N_U` (one-strand unknot) and `N_σ` (closure of `σ₁` on two
/// strands). For `tr(β) = Σ_k c_k z'^k` on `n` strands the prediction for
/// `N_β · N_U^n` is `Σ_k c̄_k N_σ^k N_U^{2n − 2k}`.
pub fn trace_prediction(
    strands: usize,
    braid: &[(usize, bool)],
    unknot: &Laurent2,
    sigma: &Laurent2,
) -> Result<Laurent2, HomologyError> {
    check_braid(strands, braid)?;
    if strands == 1 {
        return Ok(unknot.pow(2));
    }
    let sys = strand_system(strands)?;
    let trace = jones_ocneanu_trace(&braid_element(&sys, braid), strands)?;
    let mut total = Laurent2::zero(("a", "v"));
    for (k, c) in trace.iter().enumerate() {
        let ck = Laurent2::from_second(("a", "v"), &c.bar());
        let term = &(&ck * &sigma.pow(k as u32)) * &unknot.pow((2 * strands - 2 * k) as u32);
        total = &total + &term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    #[test]
    fn hochschild_of_polynomial_rings() {
        let sys = CoxeterSystem::named("A1").unwrap();
        let hh = hochschild(&Bimodule::unit(&Ring::of(&sys))).unwrap();
        assert_eq!(hh.numerators[&0], LaurentPoly::one());
        assert_eq!(hh.numerators[&1], LaurentPoly::monomial(1, 2));
        for g in (0..hh.high).step_by(2) {
            assert_eq!(hh.dim(0, g), 1);
            assert_eq!(hh.dim(1, g), usize::from(g >= 2));
        }
        let sys = CoxeterSystem::type_a_permutation(2).unwrap();
        let hh = hochschild(&Bimodule::unit(&Ring::of(&sys))).unwrap();
        assert_eq!(hh.numerators[&1], LaurentPoly::monomial(2, 2));
        assert_eq!(hh.numerators[&2], LaurentPoly::monomial(1, 4));
    }

    #[test]
    fn hochschild_is_additive() {
        let sys = CoxeterSystem::named("A1").unwrap();
        let r = Ring::of(&sys);
        let bs = Bimodule::b_s(&r, 0);
        let one = Bimodule::unit(&r);
        let sum = hochschild(&bs.direct_sum(&one).unwrap()).unwrap();
        let a = hochschild(&bs).unwrap();
        let b = hochschild(&one).unwrap();
        for (h, p) in &sum.numerators {
            let want = &a.numerators.get(h).cloned().unwrap_or_default() + &b.numerators.get(h).cloned().unwrap_or_default();
            assert_eq!(p, &want);
        }
        assert!(hochschild(&Bimodule::zero(&r)).unwrap().dims.is_empty());
    }

    #[test]
    fn unknot_is_hochschild_of_one_variable() {
        let t = triply_graded(1, &[]).unwrap();
        assert_eq!(t.numerators[&(0, 0)], LaurentPoly::one());
        assert_eq!(t.numerators[&(1, 0)], LaurentPoly::monomial(1, 2));
        assert_eq!(t.dim(0, 4, 0), 1);
        assert_eq!(t.dim(1, 4, 0), 1);
    }

    #[test]
    fn euler_matches_trace() {
        let unknot = euler_characteristic(&triply_graded(1, &[]).unwrap()).numerator;
        let sigma = euler_characteristic(&triply_graded(2, &[(0, false)]).unwrap()).numerator;
        for (n, b) in [(2, vec![]), (2, vec![(0, false); 2]), (2, vec![(0, false); 3]), (2, vec![(0, true)])] {
            let e = euler_characteristic(&triply_graded(n, &b).unwrap()).numerator;
            let lhs = &e * &unknot.pow(n as u32);
            assert_eq!(lhs, trace_prediction(n, &b, &unknot, &sigma).unwrap(), "{n} {b:?}");
        }
    }
}
