//! Seeded generators of random objects for property suites.
//!
//! Every complex of vector spaces is a sum of lines and contractible pairs
//! up to a change of basis, so random objects are built exactly that way.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bigraded::{Bidegree, Bigraded};
use crate::complexes::{rouquier_unreduced, BimoduleComplex, ComplexError};
use crate::coxeter::CoxeterSystem;
use crate::linalg::Matrix;
use crate::mixed_point::MixedObject;
use crate::scalar::Q;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Box and size limits for random bigraded complexes.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub g: (i32, i32),
    pub c: (i32, i32),
    /// Number of lines and contractible pairs.
    pub pieces: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { g: (-2, 2), c: (-2, 2), pieces: 4 }
    }
}

/// `L·U` with unit diagonals and small integer entries.
fn unipotent(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Q> {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = Q::int(rng.gen_range(-2..=2));
            u[(j, i)] = Q::int(rng.gen_range(-2..=2));
        }
    }
    l.mul(&u)
}

/// Per-bidegree contents of a sum of elementary pieces, before the change of basis.
struct Sketch {
    dims: BTreeMap<Bidegree, usize>,
    diffs: BTreeMap<Bidegree, Matrix<Q>>,
    theta: BTreeMap<Bidegree, Matrix<Q>>,
}

impl Sketch {
    fn new() -> Self {
        Sketch { dims: BTreeMap::new(), diffs: BTreeMap::new(), theta: BTreeMap::new() }
    }

    fn slot(&mut self, bd: Bidegree) -> usize {
        let d = self.dims.entry(bd).or_insert(0);
        *d += 1;
        *d - 1
    }

    /// Applies the links and diagonal scalars, then conjugates everything by a
    /// random unipotent change of basis.
    fn realize(
        mut self,
        rng: &mut ChaCha8Rng,
        links: &[(Bidegree, usize, usize)],
        scalars: &[(Bidegree, usize, Q)],
    ) -> (Bigraded, BTreeMap<Bidegree, Matrix<Q>>) {
        let change: BTreeMap<Bidegree, Matrix<Q>> = self.dims.iter().map(|(&bd, &n)| (bd, unipotent(rng, n))).collect();
        let inv: BTreeMap<Bidegree, Matrix<Q>> =
            change.iter().map(|(&bd, a)| (bd, a.inverse().expect("unipotent"))).collect();
        for &(bd, i, j) in links {
            self.diffs.get_mut(&bd).expect("sized")[(j, i)] = Q::int(1);
        }
        let diffs = std::mem::take(&mut self.diffs);
        let mut theta: BTreeMap<Bidegree, Matrix<Q>> = self.dims.iter().map(|(&bd, &n)| (bd, Matrix::identity(n))).collect();
        for (bd, t) in self.theta {
            theta.insert(bd, t);
        }
        for &(bd, i, ref x) in scalars {
            theta.get_mut(&bd).expect("slot")[(i, i)] = x.clone();
        }
        let diffs: BTreeMap<Bidegree, Matrix<Q>> =
            diffs.into_iter().map(|(bd, d)| (bd, change[&bd.next()].mul(&d).mul(&inv[&bd]))).collect();
        let theta = theta.into_iter().map(|(bd, t)| (bd, change[&bd].mul(&t).mul(&inv[&bd]))).collect();
        let v = Bigraded::new(self.dims, diffs).expect("conjugated sum of elementary complexes");
        (v, theta)
    }
}

/// A random bigraded complex: lines and contractible pairs in the box, in a
/// random basis.
pub fn random_bigraded(rng: &mut ChaCha8Rng, shape: Shape) -> Bigraded {
    let mut s = Sketch::new();
    let mut links = Vec::new();
    let n = rng.gen_range(1..=shape.pieces.max(1));
    for _ in 0..n {
        let g = rng.gen_range(shape.g.0..=shape.g.1);
        let c = rng.gen_range(shape.c.0..=shape.c.1);
        let bd = Bidegree::new(g, c);
        let i = s.slot(bd);
        if rng.gen_bool(0.4) {
            let j = s.slot(bd.next());
            links.push((bd, i, j));
        }
    }
    finish_links(&mut s, &links);
    s.realize(rng, &links, &[]).0
}

/// A random object whose cohomology sits on the diagonal `c = g`.
pub fn random_pure(rng: &mut ChaCha8Rng, shape: Shape) -> Bigraded {
    let mut s = Sketch::new();
    let mut links = Vec::new();
    let n = rng.gen_range(1..=shape.pieces.max(1));
    for _ in 0..n {
        let g = rng.gen_range(shape.g.0..=shape.g.1);
        if rng.gen_bool(0.6) {
            s.slot(Bidegree::new(g, g));
        } else {
            let bd = Bidegree::new(g, rng.gen_range(shape.c.0..=shape.c.1));
            let i = s.slot(bd);
            let j = s.slot(bd.next());
            links.push((bd, i, j));
        }
    }
    finish_links(&mut s, &links);
    s.realize(rng, &links, &[]).0
}

/// Sizes the differential matrices once all slots are allocated.
fn finish_links(s: &mut Sketch, links: &[(Bidegree, usize, usize)]) {
    for &(bd, _, _) in links {
        let (r, c) = (s.dims[&bd.next()], s.dims[&bd]);
        s.diffs.insert(bd, Matrix::zeros(r, c));
    }
}

/// A random mixed object of total rank at most `max_rank`, weights in
/// `weights`, with `θ` built from signs, swaps and unipotent Jordan blocks.
pub fn random_mixed(rng: &mut ChaCha8Rng, max_rank: usize, weights: (i32, i32), level: u32) -> MixedObject {
    loop {
        let mut s = Sketch::new();
        let mut links = Vec::new();
        let mut scalars = Vec::new();
        let mut blocks: Vec<(Bidegree, usize, usize, bool)> = Vec::new();
        let mut rank = 0;
        let target = rng.gen_range(1..=max_rank.max(1));
        while rank < target {
            let g = rng.gen_range(weights.0..=weights.1);
            let bd = Bidegree::new(g, rng.gen_range(-1..=1));
            let sign = if rng.gen_bool(0.3) { Q::int(-1) } else { Q::int(1) };
            match rng.gen_range(0..4) {
                0 if rank + 2 <= target => {
                    let i = s.slot(bd);
                    let j = s.slot(bd.next());
                    links.push((bd, i, j));
                    scalars.push((bd, i, sign.clone()));
                    scalars.push((bd.next(), j, sign));
                    rank += 2;
                }
                1 if rank + 2 <= target => {
                    let i = s.slot(bd);
                    let j = s.slot(bd);
                    blocks.push((bd, i, j, rng.gen_bool(0.5)));
                    rank += 2;
                }
                _ => {
                    let i = s.slot(bd);
                    scalars.push((bd, i, sign));
                    rank += 1;
                }
            }
        }
        finish_links(&mut s, &links);
        for &(bd, i, j, swap) in &blocks {
            let n = s.dims[&bd];
            let t = s.theta.entry(bd).or_insert_with(|| Matrix::identity(n));
            if swap {
                t[(i, i)] = Q::int(0);
                t[(j, j)] = Q::int(0);
                t[(i, j)] = Q::int(1);
                t[(j, i)] = Q::int(1);
            } else {
                t[(i, j)] = Q::int(1);
            }
        }
        let (v, theta) = s.realize(rng, &links, &scalars);
        if let Ok(m) = MixedObject::new(v, theta, level) {
            return m;
        }
    }
}

/// A random braid word over `gens` generators of length `1..=max_len`.
pub fn random_braid_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Vec<(usize, bool)> {
    let len = rng.gen_range(1..=max_len.max(1));
    (0..len).map(|_| (rng.gen_range(0..gens), rng.gen_bool(0.5))).collect()
}

/// A tensor product of elementary Rouquier factors, unreduced, with a random
/// chain shift and grading shift.
pub fn random_bs_complex(
    sys: &Arc<CoxeterSystem>,
    rng: &mut ChaCha8Rng,
    max_len: usize,
) -> Result<BimoduleComplex, ComplexError> {
    let word = random_braid_word(rng, sys.rank(), max_len);
    let c = rouquier_unreduced(sys, &word)?;
    let shifts = [-1, 0, 1];
    Ok(c.shift(*shifts.choose(rng).expect("nonempty")).grade_shift(*shifts.choose(rng).expect("nonempty")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_objects_are_valid_and_seeded() {
        let mut a = rng(1);
        let mut b = rng(1);
        for _ in 0..50 {
            let x = random_bigraded(&mut a, Shape::default());
            assert_eq!(x, random_bigraded(&mut b, Shape::default()));
            let m = random_mixed(&mut a, 4, (-3, 3), 1);
            assert!(m.underlying().total_dim() <= 4);
            random_mixed(&mut b, 4, (-3, 3), 1);
            let p = random_pure(&mut a, Shape::default());
            random_pure(&mut b, Shape::default());
            assert!(p.decompose_pure().is_ok());
        }
    }
}
