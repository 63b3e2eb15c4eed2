//! Homogeneous Hom spaces by linear algebra over monomial coefficients.

use std::collections::BTreeMap;

use super::{Bimodule, BimoduleMap, SoergelError};
use crate::laurent::LaurentPoly;
use crate::linalg::SparseEchelon;
use crate::modular;
use crate::poly::{monomials_of_degree, Monomial, PolyMatrix};
use crate::scalar::{Coeff, Field, Q};

/// Environment variable overriding the degree window of graded Hom ranks.
pub const WINDOW_ENV: &str = "GRADED_HECKE_WINDOW";

/// How far past the lowest possible degree Hom dimensions are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HomWindow {
    /// Start from the degree spread plus `2·nvars + 2` and double on failure.
    #[default]
    Auto,
    /// Exactly this many degrees; fail with `WindowTooSmall` otherwise.
    Fixed(i32),
}

impl HomWindow {
    /// `Fixed` if the window variable holds an integer, `Auto` otherwise.
    pub fn from_env() -> Self {
        match std::env::var(WINDOW_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            Some(w) => HomWindow::Fixed(w),
            None => HomWindow::Auto,
        }
    }
}

struct System {
    unknowns: Vec<(usize, usize, Monomial)>,
    rows: Vec<Vec<(usize, Coeff)>>,
}

fn build(b: &Bimodule, c: &Bimodule, d: i32) -> Result<System, SoergelError> {
    if !b.ring.same(&c.ring) {
        return Err(SoergelError::RingMismatch);
    }
    let n = b.ring.nvars();
    let mut unknowns = Vec::new();
    let mut start: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for i in 0..b.rank() {
        for l in 0..c.rank() {
            let deg = b.degrees[i] + d - c.degrees[l];
            if deg < 0 || deg % 2 != 0 {
                continue;
            }
            let monos = monomials_of_degree(n, (deg / 2) as u32);
            start.push(((i, l), (unknowns.len(), monos.len())));
            unknowns.extend(monos.into_iter().map(|m| (i, l, m)));
        }
    }
    let mut rows = Vec::new();
    if unknowns.is_empty() {
        return Ok(System { unknowns, rows });
    }
    // (P_k F − F Q_k)_{i' l'} = Σ_i (P_k)_{i'i} F_{il'} − Σ_l F_{i'l} (Q_k)_{ll'}
    for k in 0..n {
        let p = &b.action[k];
        let q = &c.action[k];
        let mut eqs: BTreeMap<(usize, usize, Monomial), Vec<(usize, Coeff)>> = BTreeMap::new();
        for &((i, l), (s, len)) in &start {
            for u in s..s + len {
                let mono = unknowns[u].2;
                for ip in 0..b.rank() {
                    for (m, coef) in p[(ip, i)].terms() {
                        eqs.entry((ip, l, m + mono)).or_default().push((u, coef.clone()));
                    }
                }
                for lp in 0..c.rank() {
                    for (m, coef) in q[(l, lp)].terms() {
                        eqs.entry((i, lp, m + mono)).or_default().push((u, coef.neg()));
                    }
                }
            }
        }
        for (_, mut row) in eqs {
            row.sort_by_key(|(u, _)| *u);
            let mut merged: Vec<(usize, Coeff)> = Vec::with_capacity(row.len());
            for (u, x) in row {
                match merged.last_mut() {
                    Some((v, y)) if *v == u => *y = y.add(&x),
                    _ => merged.push((u, x)),
                }
            }
            merged.retain(|(_, x)| !x.is_zero());
            if !merged.is_empty() {
                rows.push(merged);
            }
        }
    }
    Ok(System { unknowns, rows })
}

/// Kernel of a sparse system over ℚ(√5), via rational systems.
pub(crate) fn kernel(rows: &[Vec<(usize, Coeff)>], cols: usize) -> Vec<Vec<Coeff>> {
    if rows.iter().flatten().all(|(_, x)| x.is_rational()) {
        let q: Vec<Vec<(usize, Q)>> = rows.iter().map(|r| r.iter().map(|(c, x)| (*c, x.a.clone())).collect()).collect();
        return modular::nullspace(&q, cols)
            .into_iter()
            .map(|v| {
                let mut d = vec![Coeff::zero(); cols];
                for (c, x) in v {
                    d[c] = Coeff::rational(x);
                }
                d
            })
            .collect();
    }
    // x = x_a + x_b·√5 and c = c_a + c_b·√5 give c·x = (c_a x_a + 5 c_b x_b) + (c_b x_a + c_a x_b)·√5
    let five = Q::int(5);
    let mut q: Vec<Vec<(usize, Q)>> = Vec::with_capacity(2 * rows.len());
    for r in rows {
        let mut ra = Vec::with_capacity(2 * r.len());
        let mut rb = Vec::with_capacity(2 * r.len());
        for (c, x) in r {
            ra.push((2 * c, x.a.clone()));
            ra.push((2 * c + 1, five.mul(&x.b)));
            rb.push((2 * c, x.b.clone()));
            rb.push((2 * c + 1, x.a.clone()));
        }
        ra.retain(|(_, x)| !x.is_zero());
        rb.retain(|(_, x)| !x.is_zero());
        q.push(ra);
        q.push(rb);
    }
    let mut ech: SparseEchelon<Coeff> = SparseEchelon::new(cols);
    let mut out = Vec::new();
    for v in modular::nullspace(&q, 2 * cols) {
        let mut d = vec![Coeff::zero(); cols];
        for (c, x) in v {
            let e = &mut d[c / 2];
            if c % 2 == 0 {
                e.a = x;
            } else {
                e.b = x;
            }
        }
        if ech.insert_dense(&d) {
            out.push(d);
        }
    }
    out
}

/// Rank of a sparse row set over ℚ(√5).
pub(crate) fn coeff_rank(rows: &[Vec<(usize, Coeff)>], cols: usize) -> usize {
    if rows.iter().flatten().all(|(_, x)| x.is_rational()) {
        let q: Vec<Vec<(usize, Q)>> = rows.iter().map(|r| r.iter().map(|(c, x)| (*c, x.a.clone())).collect()).collect();
        return modular::rank(&q, cols);
    }
    let mut ech: SparseEchelon<Coeff> = SparseEchelon::new(cols);
    for r in rows {
        ech.insert(r.clone());
    }
    ech.rank()
}

/// A basis of the degree-`d` bimodule maps `b → c`.
pub fn hom_degree(b: &Bimodule, c: &Bimodule, d: i32) -> Result<Vec<BimoduleMap>, SoergelError> {
    let sys = build(b, c, d)?;
    Ok(kernel(&sys.rows, sys.unknowns.len())
        .into_iter()
        .map(|v| {
            let mut m = PolyMatrix::zeros(b.rank(), c.rank());
            for (u, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    let (i, l, mono) = sys.unknowns[u];
                    m[(i, l)].add_term(mono, x);
                }
            }
            BimoduleMap { degree: d, matrix: m }
        })
        .collect())
}

/// `dim Hom^d(b, c)`.
pub fn hom_dimension(b: &Bimodule, c: &Bimodule, d: i32) -> Result<usize, SoergelError> {
    let sys = build(b, c, d)?;
    Ok(kernel(&sys.rows, sys.unknowns.len()).len())
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Graded rank of `Hom(b, c)` as a free left module: the Hilbert series
/// times `(1 − v²)^{nvars}`.
pub fn graded_hom_rank(b: &Bimodule, c: &Bimodule) -> Result<LaurentPoly, SoergelError> {
    graded_hom_rank_with_window(b, c, HomWindow::Auto)
}

pub fn graded_hom_rank_with_window(b: &Bimodule, c: &Bimodule, window: HomWindow) -> Result<LaurentPoly, SoergelError> {
    if !b.ring.same(&c.ring) {
        return Err(SoergelError::RingMismatch);
    }
    if b.rank() == 0 || c.rank() == 0 {
        return Ok(LaurentPoly::zero());
    }
    let m = b.ring.nvars();
    let (bmin, bmax) = (*b.degrees.iter().min().unwrap(), *b.degrees.iter().max().unwrap());
    let (cmin, cmax) = (*c.degrees.iter().min().unwrap(), *c.degrees.iter().max().unwrap());
    let lo = cmin - bmax;
    let tail = 2 * m as i32 + 2;
    let mut width = match window {
        HomWindow::Auto => (cmax - bmin) - lo + tail,
        HomWindow::Fixed(w) => w,
    };
    let mut h: Vec<i64> = Vec::new();
    loop {
        while (h.len() as i32) <= width {
            let d = lo + h.len() as i32;
            h.push(hom_dimension(b, c, d)? as i64);
        }
        let num: Vec<i64> = (0..=width as usize)
            .map(|t| {
                (0..=m).filter(|&j| 2 * j <= t).map(|j| (if j % 2 == 0 { 1 } else { -1 }) * binomial(m, j) * h[t - 2 * j]).sum()
            })
            .collect();
        let cut = (width - tail + 1).max(0) as usize;
        if width >= tail && num[cut..].iter().all(|&x| x == 0) {
            return Ok(LaurentPoly::from_terms(num[..cut].iter().enumerate().map(|(t, &x)| (lo + t as i32, x))));
        }
        match window {
            HomWindow::Fixed(w) => return Err(SoergelError::WindowTooSmall { window: w }),
            HomWindow::Auto if width > 4 * ((cmax - bmin) - lo + tail) => {
                return Err(SoergelError::WindowTooSmall { window: width })
            }
            HomWindow::Auto => width *= 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSystem;
    use crate::hecke::{hom_rank_pairing, HeckeElement};
    use crate::poly::Ring;

    #[test]
    fn b_s_hom_spaces() {
        let sys = CoxeterSystem::named("A1").unwrap();
        let r = Ring::of(&sys);
        let bs = Bimodule::b_s(&r, 0);
        let one = Bimodule::unit(&r);
        assert_eq!(hom_dimension(&bs, &one, 1).unwrap(), 1);
        assert_eq!(hom_dimension(&one, &bs, 1).unwrap(), 1);
        assert_eq!(hom_dimension(&bs, &one, -1).unwrap(), 0);
        let maps = hom_degree(&bs, &bs, 0).unwrap();
        assert_eq!(maps.len(), 1);
        assert!(maps.iter().all(|f| f.is_map(&bs, &bs)));
        let g = graded_hom_rank(&bs, &bs).unwrap();
        assert_eq!(g, LaurentPoly::from_terms([(0, 1), (2, 1)]));
    }

    #[test]
    fn hom_ranks_match_pairing() {
        for (name, words) in [("A2", vec![vec![0], vec![0, 1], vec![1, 0, 1]]), ("B2", vec![vec![0, 1], vec![1, 0]]), ("I2(5)", vec![vec![0, 1], vec![0, 1, 0]])] {
            let sys = CoxeterSystem::named(name).unwrap();
            let r = Ring::of(&sys);
            for x in &words {
                for y in &words {
                    let bx = Bimodule::bott_samelson(&r, x).unwrap();
                    let by = Bimodule::bott_samelson(&r, y).unwrap();
                    let got = graded_hom_rank(&bx, &by).unwrap();
                    let want = hom_rank_pairing(&HeckeElement::bs_product(&sys, x), &HeckeElement::bs_product(&sys, y)).unwrap();
                    assert_eq!(got, want, "{name} {x:?} {y:?}");
                }
            }
        }
    }

    #[test]
    fn fixed_window_can_fail() {
        let sys = CoxeterSystem::named("A1").unwrap();
        let r = Ring::of(&sys);
        let bs = Bimodule::b_s(&r, 0);
        assert!(matches!(
            graded_hom_rank_with_window(&bs, &bs, HomWindow::Fixed(2)),
            Err(SoergelError::WindowTooSmall { .. })
        ));
    }
}
