//! Exact kernels of sparse rational systems by multi-modular elimination.
//!
//! Row reduction runs modulo word-size primes; the reduced echelon form is
//! lifted by Chinese remaindering and rational reconstruction, and every
//! candidate kernel vector is checked against the original rows in exact
//! arithmetic. Since the nullity over ℚ never exceeds the nullity modulo a
//! prime, a verified kernel of that size is the whole kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::SparseEchelon;
use crate::scalar::{Field, Q};

const MAX_PRIMES: usize = 64;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

fn to_mod(q: &Q, p: u64) -> Option<u64> {
    if let Q::Small(n, d) = q {
        let num = (*n as i128).rem_euclid(p as i128) as u64;
        let den = (*d as i128).rem_euclid(p as i128) as u64;
        return (den != 0).then(|| mul_mod(num, pow_mod(den, p - 2, p), p));
    }
    let b = q.to_big();
    let pb = BigInt::from(p);
    let num = b.numer().mod_floor(&pb).to_u64()?;
    let den = b.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, pow_mod(den, p - 2, p), p))
}

/// Reduced echelon form modulo `p`: pivot columns and, per pivot row, its
/// entries outside the pivot columns.
struct ModRref {
    pivots: Vec<usize>,
    rows: Vec<Vec<(usize, u64)>>,
}

fn axpy_mod(a: &[(usize, u64)], c: u64, b: &[(usize, u64)], p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, mul_mod(c, b[j].1, p)));
            j += 1;
        } else {
            let s = (a[i].1 + mul_mod(c, b[j].1, p)) % p;
            if s != 0 {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn rref_mod(rows: &[Vec<(usize, u64)>], p: u64) -> ModRref {
    let mut piv: std::collections::BTreeMap<usize, Vec<(usize, u64)>> = std::collections::BTreeMap::new();
    for r in rows {
        let mut row = r.clone();
        let mut start = 0;
        loop {
            let Some(pos) = (start..row.len()).find(|&k| piv.contains_key(&row[k].0)) else { break };
            let (col, coef) = row[pos];
            row = axpy_mod(&row, p - coef, &piv[&col], p);
            start = row.partition_point(|(c, _)| *c <= col);
        }
        if row.is_empty() {
            continue;
        }
        let inv = pow_mod(row[0].1, p - 2, p);
        for e in row.iter_mut() {
            e.1 = mul_mod(e.1, inv, p);
        }
        piv.insert(row[0].0, row);
    }
    // back substitution into full reduced form
    let mut done: std::collections::BTreeMap<usize, Vec<(usize, u64)>> = std::collections::BTreeMap::new();
    for (&pc, prow) in piv.iter().rev() {
        let mut row = prow.clone();
        let mut k = 1;
        while k < row.len() {
            let (c, coef) = row[k];
            if let Some(r2) = done.get(&c) {
                row = axpy_mod(&row, p - coef, r2, p);
                k = row.partition_point(|(cc, _)| *cc <= c);
            } else {
                k += 1;
            }
        }
        done.insert(pc, row);
    }
    let pivots: Vec<usize> = done.keys().copied().collect();
    let rows = done.into_values().map(|r| r.into_iter().skip(1).collect()).collect();
    ModRref { pivots, rows }
}

fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Q::from_big(num_rational::BigRational::new(r1, t1)))
}

fn exact_nullspace(rows: &[Vec<(usize, Q)>], cols: usize) -> Vec<Vec<(usize, Q)>> {
    let mut e: SparseEchelon<Q> = SparseEchelon::new(cols);
    for r in rows {
        e.insert(r.clone());
    }
    e.nullspace()
        .into_iter()
        .map(|v| v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
        .collect()
}

fn verify(rows: &[Vec<(usize, Q)>], cols: usize, vecs: &[Vec<(usize, Q)>]) -> bool {
    let mut dense = vec![Q::zero(); cols];
    for v in vecs {
        for (c, x) in v {
            dense[*c] = x.clone();
        }
        let ok = rows.iter().all(|r| {
            r.iter().fold(Q::zero(), |acc, (c, a)| if dense[*c].is_zero() { acc } else { acc.add(&a.mul(&dense[*c])) }).is_zero()
        });
        for (c, _) in v {
            dense[*c] = Q::zero();
        }
        if !ok {
            return false;
        }
    }
    true
}

/// A basis of `{x : r·x = 0 for every row r}` as sparse vectors sorted by
/// column. Row entries must be sorted by column.
pub fn nullspace(rows: &[Vec<(usize, Q)>], cols: usize) -> Vec<Vec<(usize, Q)>> {
    if rows.is_empty() {
        return (0..cols).map(|c| vec![(c, Q::one())]).collect();
    }
    let mut best: Option<Vec<usize>> = None;
    let mut modulus = BigInt::one();
    let mut residues: Vec<Vec<BigInt>> = Vec::new();
    let mut used = 0;
    for p in primes() {
        if used >= MAX_PRIMES {
            break;
        }
        let Some(reduced): Option<Vec<Vec<(usize, u64)>>> = rows
            .iter()
            .map(|r| r.iter().map(|(c, x)| to_mod(x, p).map(|v| (*c, v))).filter(|e| e.as_ref().map_or(true, |e| e.1 != 0)).collect())
            .collect()
        else {
            continue;
        };
        used += 1;
        let rr = rref_mod(&reduced, p);
        let replace = match &best {
            None => true,
            Some(b) => rr.pivots.len() > b.len() || (rr.pivots.len() == b.len() && rr.pivots < *b),
        };
        let keep = replace || best.as_ref() == Some(&rr.pivots);
        if !keep {
            continue;
        }
        let is_pivot: std::collections::HashSet<usize> = rr.pivots.iter().copied().collect();
        let free: Vec<usize> = (0..cols).filter(|c| !is_pivot.contains(c)).collect();
        let free_pos: std::collections::HashMap<usize, usize> = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let dense_rows: Vec<Vec<u64>> = rr
            .rows
            .iter()
            .map(|r| {
                let mut d = vec![0u64; free.len()];
                for (c, x) in r {
                    d[free_pos[c]] = *x;
                }
                d
            })
            .collect();
        let pb = BigInt::from(p);
        if replace {
            best = Some(rr.pivots.clone());
            modulus = pb;
            residues = dense_rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        } else {
            // CRT: x ≡ a (mod M), x ≡ b (mod p)
            let minv = BigInt::from(pow_mod((&modulus % &pb).to_u64().unwrap(), p - 2, p));
            for (acc_row, r) in residues.iter_mut().zip(&dense_rows) {
                for (acc, &b) in acc_row.iter_mut().zip(r) {
                    let diff = (BigInt::from(b) - &*acc).mod_floor(&pb);
                    let t = (diff * &minv).mod_floor(&pb);
                    *acc += &modulus * t;
                }
            }
            modulus *= pb;
        }
        // try to lift
        let Some(lifted) = residues
            .iter()
            .map(|r| r.iter().map(|x| rational_reconstruct(x, &modulus)).collect::<Option<Vec<Q>>>())
            .collect::<Option<Vec<Vec<Q>>>>()
        else {
            continue;
        };
        let pivots = best.as_ref().unwrap();
        let vecs: Vec<Vec<(usize, Q)>> = free
            .iter()
            .enumerate()
            .map(|(fi, &f)| {
                let mut v: Vec<(usize, Q)> = pivots
                    .iter()
                    .zip(&lifted)
                    .filter(|(_, r)| !r[fi].is_zero())
                    .map(|(&pc, r)| (pc, r[fi].neg()))
                    .collect();
                v.push((f, Q::one()));
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect();
        if verify(rows, cols, &vecs) {
            return vecs;
        }
    }
    exact_nullspace(rows, cols)
}

/// Rank of a sparse rational system.
pub fn rank(rows: &[Vec<(usize, Q)>], cols: usize) -> usize {
    cols - nullspace(rows, cols).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert!(ps.iter().all(|&p| is_prime(p) && p > (1 << 61)));
        assert!(!is_prime(1 << 40));
        assert!(is_prime(2_305_843_009_213_693_951));
    }

    #[test]
    fn matches_exact_elimination() {
        let mut seed = 7u64;
        for trial in 0..20 {
            let (nr, nc) = (5 + trial % 7, 8 + trial % 5);
            let rows: Vec<Vec<(usize, Q)>> = (0..nr)
                .map(|i| {
                    (0..nc)
                        .filter_map(|c| {
                            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                            let v = ((seed >> 33) % 9) as i64 - 4;
                            // make some rows dependent
                            (v != 0 && (i % 3 != 2 || c < 3)).then(|| (c, Q::new(v, 1 + (seed >> 50) as i64 % 5)))
                        })
                        .collect()
                })
                .collect();
            let fast = nullspace(&rows, nc);
            assert_eq!(fast.len(), exact_nullspace(&rows, nc).len());
            assert!(verify(&rows, nc, &fast));
        }
    }

    #[test]
    fn large_fractions_reconstruct() {
        let big = Q::new(1_000_000_007, 998_244_353);
        let rows = vec![vec![(0, big.clone()), (1, Q::int(-1))]];
        let ns = nullspace(&rows, 2);
        assert_eq!(ns, vec![vec![(0, big.inv()), (1, Q::one())]]);
    }
}
