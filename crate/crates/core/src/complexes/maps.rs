//! Degree-0 chain maps between bimodule complexes, null-homotopies, and the
//! search for chain isomorphisms between minimal complexes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BimoduleComplex, ComplexError};
use crate::poly::{Monomial, PolyMatrix};
use crate::scalar::{Coeff, Field};
use crate::soergel::{coeff_rank, hom_degree, kernel};

/// Random combinations tried before giving up on finding an isomorphism.
pub const DEFAULT_TRIES: usize = 64;

/// A family of maps `f^c: X^c → Y^c`, row convention.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMap {
    pub components: BTreeMap<i32, PolyMatrix>,
}

impl ComplexMap {
    pub fn component(&self, c: i32, rows: usize, cols: usize) -> PolyMatrix {
        self.components.get(&c).cloned().unwrap_or_else(|| PolyMatrix::zeros(rows, cols))
    }

    /// `dX·f − f·dY = 0` in every degree.
    pub fn is_chain_map(&self, x: &BimoduleComplex, y: &BimoduleComplex) -> bool {
        let lo = x.support().map_or(0, |s| s.0).min(y.support().map_or(0, |s| s.0)) - 1;
        let hi = x.support().map_or(0, |s| s.1).max(y.support().map_or(0, |s| s.1)) + 1;
        (lo..=hi).all(|c| {
            let f = self.component(c, x.rank(c), y.rank(c));
            let g = self.component(c + 1, x.rank(c + 1), y.rank(c + 1));
            x.diff(c).mul(&g) == f.mul(&y.diff(c))
        })
    }

    /// Every component is an isomorphism: its constant part is invertible.
    pub fn is_isomorphism(&self, x: &BimoduleComplex, y: &BimoduleComplex) -> bool {
        let degrees: std::collections::BTreeSet<i32> = x.degrees().chain(y.degrees()).collect();
        degrees.into_iter().all(|c| {
            let (r, s) = (x.rank(c), y.rank(c));
            r == s && self.component(c, r, s).at_zero().inverse().is_some()
        })
    }
}

/// Degree-0 maps between summands, placed into full `X^c × Y^{c+offset}` blocks.
fn block_basis(x: &BimoduleComplex, y: &BimoduleComplex, offset: i32) -> Result<Vec<(i32, PolyMatrix)>, ComplexError> {
    let mut out = Vec::new();
    for c in x.degrees() {
        let t = c + offset;
        if y.term(t).is_empty() {
            continue;
        }
        let (xo, yo) = (x.offsets(c), y.offsets(t));
        for (a, p) in x.term(c).iter().enumerate() {
            for (b, q) in y.term(t).iter().enumerate() {
                for f in hom_degree(&p.bimodule, &q.bimodule, 0)? {
                    let mut m = PolyMatrix::zeros(x.rank(c), y.rank(t));
                    m.set_block(xo[a], yo[b], &f.matrix);
                    out.push((c, m));
                }
            }
        }
    }
    Ok(out)
}

type Key = (i32, usize, usize, Monomial);

fn flatten(keys: &mut BTreeMap<Key, usize>, parts: &[(i32, PolyMatrix, bool)]) -> Vec<(usize, Coeff)> {
    let mut acc: BTreeMap<usize, Coeff> = BTreeMap::new();
    for (c, m, negate) in parts {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                for (mono, x) in m[(i, j)].terms() {
                    let n = keys.len();
                    let k = *keys.entry((*c, i, j, mono)).or_insert(n);
                    let e = acc.entry(k).or_insert_with(Coeff::zero);
                    *e = if *negate { e.sub(x) } else { e.add(x) };
                }
            }
        }
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// A basis of the degree-0 chain maps `X → Y`.
pub fn chain_maps(x: &BimoduleComplex, y: &BimoduleComplex) -> Result<Vec<ComplexMap>, ComplexError> {
    if !x.ring().same(y.ring()) {
        return Err(ComplexError::RingMismatch);
    }
    let basis = block_basis(x, y, 0)?;
    if basis.is_empty() {
        return Ok(vec![]);
    }
    // u at degree c enters dX^{c−1}·f^c at c−1 and −f^c·dY^c at c
    let mut keys = BTreeMap::new();
    let mut columns = Vec::with_capacity(basis.len());
    for (c, e) in &basis {
        let parts = [(c - 1, x.diff(c - 1).mul(e), false), (*c, e.mul(&y.diff(*c)), true)];
        columns.push(flatten(&mut keys, &parts));
    }
    let mut rows: Vec<Vec<(usize, Coeff)>> = vec![Vec::new(); keys.len()];
    for (u, col) in columns.into_iter().enumerate() {
        for (k, v) in col {
            rows[k].push((u, v));
        }
    }
    rows.retain(|r| !r.is_empty());
    Ok(kernel(&rows, basis.len())
        .into_iter()
        .map(|v| {
            let mut components: BTreeMap<i32, PolyMatrix> = BTreeMap::new();
            for (u, a) in v.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (c, e) = &basis[u];
                let term = e.scale(a);
                let slot = components.entry(*c).or_insert_with(|| PolyMatrix::zeros(e.rows(), e.cols()));
                *slot = slot.add(&term);
            }
            ComplexMap { components }
        })
        .collect())
}

/// `dim π₀ Hom⁰(X, Y)`: degree-0 chain maps modulo null-homotopic ones.
pub fn homotopy_classes_dimension(x: &BimoduleComplex, y: &BimoduleComplex) -> Result<usize, ComplexError> {
    let maps = chain_maps(x, y)?;
    if maps.is_empty() {
        return Ok(0);
    }
    // h^c: X^c → Y^{c−1} gives f^c = dX^c·h^{c+1} + h^c·dY^{c−1}
    let homotopies = block_basis(x, y, -1)?;
    let mut keys = BTreeMap::new();
    let mut null = Vec::new();
    for (c, h) in &homotopies {
        let parts = [(c - 1, x.diff(c - 1).mul(h), false), (*c, h.mul(&y.diff(c - 1)), false)];
        null.push(flatten(&mut keys, &parts));
    }
    Ok(maps.len() - coeff_rank(&null, keys.len()))
}

/// Whether `C` and `D` are homotopy equivalent, with the default search bound.
pub fn homotopy_equal(c: &BimoduleComplex, d: &BimoduleComplex, seed: u64) -> Result<bool, ComplexError> {
    homotopy_equal_with(c, d, seed, DEFAULT_TRIES)
}

/// Reduces both sides to minimal complexes, compares summands per chain
/// degree, then searches random combinations of chain maps for one whose
/// components are all invertible.
pub fn homotopy_equal_with(c: &BimoduleComplex, d: &BimoduleComplex, seed: u64, tries: usize) -> Result<bool, ComplexError> {
    if !c.ring().same(d.ring()) {
        return Err(ComplexError::RingMismatch);
    }
    let (c, d) = (c.gaussian_eliminate()?, d.gaussian_eliminate()?);
    if c.signature() != d.signature() {
        return Ok(false);
    }
    if c.is_zero() {
        return Ok(true);
    }
    let basis = chain_maps(&c, &d)?;
    if basis.is_empty() {
        return Err(ComplexError::SearchExhausted { tries: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let mut components: BTreeMap<i32, PolyMatrix> = BTreeMap::new();
        for f in &basis {
            let a = Coeff::from_i64(rng.gen_range(-9..=9));
            for (&deg, m) in &f.components {
                let slot = components.entry(deg).or_insert_with(|| PolyMatrix::zeros(m.rows(), m.cols()));
                *slot = slot.add(&m.scale(&a));
            }
        }
        if (ComplexMap { components }).is_isomorphism(&c, &d) {
            return Ok(true);
        }
    }
    Err(ComplexError::SearchExhausted { tries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::rouquier;
    use crate::coxeter::CoxeterSystem;
    use crate::poly::Ring;

    #[test]
    fn braid_relation_in_a2() {
        let sys = CoxeterSystem::named("A2").unwrap();
        let sts = rouquier(&sys, &[(0, false), (1, false), (0, false)]).unwrap();
        let tst = rouquier(&sys, &[(1, false), (0, false), (1, false)]).unwrap();
        assert!(homotopy_equal(&sts, &tst, 7).unwrap());
        let f = BimoduleComplex::elementary(&Ring::of(&sys), 0, false).unwrap();
        assert!(!homotopy_equal(&f, &BimoduleComplex::unit(f.ring()), 7).unwrap());
    }

    #[test]
    fn endomorphisms_of_f_s() {
        let sys = CoxeterSystem::named("A1").unwrap();
        let f = BimoduleComplex::elementary(&Ring::of(&sys), 0, false).unwrap();
        let maps = chain_maps(&f, &f).unwrap();
        assert!(maps.iter().all(|m| m.is_chain_map(&f, &f)));
        assert_eq!(homotopy_classes_dimension(&f, &f).unwrap(), 1);
        let shifted = f.shift(1);
        assert_eq!(homotopy_classes_dimension(&f, &shifted).unwrap(), 0);
    }
}
