//! Finite Coxeter systems with an explicit linear realization.
//!
//! A realization is a space with basis `x_1, …, x_m` (the degree-two
//! generators of the polynomial ring), simple roots `α_s` written in that
//! basis, and the coroot pairings `⟨x_j, α_s^∨⟩`. The simple reflection acts by
//! `s(x_j) = x_j − ⟨x_j, α_s^∨⟩ α_s`. Reflection matrices use the column
//! convention: column `j` holds the coordinates of the image of `x_j`, so the
//! matrix of `uw` is the product of the matrices of `u` and `w`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::linalg::Matrix;
use crate::scalar::{Coeff, Field, Q};

/// Enumeration stops with [`CoxeterError::BoundExceeded`] past this many elements.
pub const DEFAULT_ELEMENT_BOUND: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoxeterError {
    #[error("elements belong to different Coxeter systems")]
    SystemMismatch,
    #[error("group enumeration passed {0} elements")]
    BoundExceeded(usize),
    #[error("unknown Coxeter type {0:?}")]
    UnknownType(String),
    #[error("unsupported Coxeter matrix: {0}")]
    BadMatrix(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
}

/// Simple roots and coroot pairings over ℚ(√5).
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    /// Number of polynomial generators.
    pub rank: usize,
    /// `roots[s][j]`: coefficient of `x_j` in `α_s`.
    pub roots: Vec<Vec<Coeff>>,
    /// `coroots[s][j] = ⟨x_j, α_s^∨⟩`.
    pub coroots: Vec<Vec<Coeff>>,
}

impl Realization {
    /// Realization on the span of the simple roots with Cartan entries `cartan[s][t] = ⟨α_t, α_s^∨⟩`.
    pub fn from_cartan(cartan: Vec<Vec<Coeff>>) -> Self {
        let n = cartan.len();
        let roots = (0..n).map(|s| (0..n).map(|j| Coeff::from_i64((s == j) as i64)).collect()).collect();
        Realization { rank: n, roots, coroots: cartan }
    }

    /// The permutation realization of `S_n`: `α_i = x_i − x_{i+1}`.
    pub fn permutation(n: usize) -> Self {
        let mut roots = vec![vec![Coeff::zero(); n]; n - 1];
        let mut coroots = vec![vec![Coeff::zero(); n]; n - 1];
        for i in 0..n - 1 {
            roots[i][i] = Coeff::one();
            roots[i][i + 1] = Coeff::from_i64(-1);
            coroots[i][i] = Coeff::one();
            coroots[i][i + 1] = Coeff::from_i64(-1);
        }
        Realization { rank: n, roots, coroots }
    }

    /// `⟨α_t, α_s^∨⟩`.
    pub fn cartan(&self, s: usize, t: usize) -> Coeff {
        let mut acc = Coeff::zero();
        for j in 0..self.rank {
            acc = acc.add(&self.roots[t][j].mul(&self.coroots[s][j]));
        }
        acc
    }

    /// Matrix of the simple reflection `s`.
    pub fn reflection(&self, s: usize) -> Matrix<Coeff> {
        let mut m: Matrix<Coeff> = Matrix::identity(self.rank);
        for j in 0..self.rank {
            let p = &self.coroots[s][j];
            if p.is_zero() {
                continue;
            }
            for i in 0..self.rank {
                m[(i, j)] = m[(i, j)].sub(&p.mul(&self.roots[s][i]));
            }
        }
        m
    }
}

struct ElementData {
    word: Vec<usize>,
    matrix: Matrix<Coeff>,
    left: Vec<usize>,
    right: Vec<usize>,
    inverse: usize,
}

/// A finite Coxeter group, fully enumerated at construction.
pub struct CoxeterSystem {
    id: u64,
    name: String,
    gens: Vec<String>,
    coxeter_matrix: Vec<Vec<u32>>,
    realization: Realization,
    elements: Vec<ElementData>,
    below: Vec<Vec<bool>>,
    type_a: bool,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterSystem({}, |W| = {})", self.name, self.elements.len())
    }
}

/// A group element: an index into the (length, word)-sorted enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    sys: u64,
    idx: usize,
}

impl Element {
    pub fn index(self) -> usize {
        self.idx
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn dihedral_cartan(m: u32) -> Result<(Coeff, Coeff), CoxeterError> {
    let c = |x: i64| Coeff::from_i64(x);
    Ok(match m {
        2 => (c(0), c(0)),
        3 => (c(-1), c(-1)),
        4 => (c(-2), c(-1)),
        5 => (Coeff::golden().neg(), Coeff::golden().neg()),
        6 => (c(-3), c(-1)),
        _ => return Err(CoxeterError::BadMatrix(format!("m = {m} is not in 2..=6"))),
    })
}

fn letter_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

impl CoxeterSystem {
    /// Build from a Coxeter matrix using the root realization with Cartan
    /// entries chosen so that `a_st · a_ts = 4 cos²(π / m_st)`.
    pub fn from_coxeter_matrix(name: &str, m: Vec<Vec<u32>>) -> Result<Arc<Self>, CoxeterError> {
        let n = m.len();
        if n == 0 || m.iter().any(|r| r.len() != n) {
            return Err(CoxeterError::BadMatrix("matrix must be square and nonempty".into()));
        }
        let mut cartan = vec![vec![Coeff::zero(); n]; n];
        for s in 0..n {
            if m[s][s] != 1 {
                return Err(CoxeterError::BadMatrix("diagonal entries must be 1".into()));
            }
            cartan[s][s] = Coeff::from_i64(2);
            for t in s + 1..n {
                if m[s][t] != m[t][s] {
                    return Err(CoxeterError::BadMatrix("matrix must be symmetric".into()));
                }
                let (a, b) = dihedral_cartan(m[s][t])?;
                cartan[s][t] = a;
                cartan[t][s] = b;
            }
        }
        let type_a = is_type_a(&m);
        Self::build(name, m, Realization::from_cartan(cartan), type_a, DEFAULT_ELEMENT_BOUND)
    }

    /// Named systems: `A1`–`A4`, `B2`, `I2(m)` for `m ∈ 2..=6`.
    pub fn named(name: &str) -> Result<Arc<Self>, CoxeterError> {
        let t = name.trim();
        let unknown = || CoxeterError::UnknownType(name.to_string());
        if let Some(n) = t.strip_prefix('A') {
            let n: usize = n.parse().map_err(|_| unknown())?;
            if !(1..=4).contains(&n) {
                return Err(unknown());
            }
            let m = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1 } else if i.abs_diff(j) == 1 { 3 } else { 2 }).collect())
                .collect();
            return Self::from_coxeter_matrix(t, m);
        }
        if t == "B2" {
            return Self::from_coxeter_matrix(t, vec![vec![1, 4], vec![4, 1]]);
        }
        if let Some(rest) = t.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let k: u32 = rest.parse().map_err(|_| unknown())?;
            if !(2..=6).contains(&k) {
                return Err(unknown());
            }
            return Self::from_coxeter_matrix(t, vec![vec![1, k], vec![k, 1]]);
        }
        Err(unknown())
    }

    /// Parse a named type or an explicit Coxeter matrix given as JSON.
    pub fn parse(spec: &str) -> Result<Arc<Self>, CoxeterError> {
        if spec.trim_start().starts_with('[') {
            let m: Vec<Vec<u32>> =
                serde_json::from_str(spec).map_err(|e| CoxeterError::BadMatrix(e.to_string()))?;
            return Self::from_coxeter_matrix("custom", m);
        }
        Self::named(spec)
    }

    /// `S_n` acting on `n` variables by permutation (type `A_{n−1}` on the
    /// polynomial ring of `gl_n`).
    pub fn type_a_permutation(n: usize) -> Result<Arc<Self>, CoxeterError> {
        if n < 2 {
            return Err(CoxeterError::UnknownType(format!("gl{n}")));
        }
        let k = n - 1;
        let m = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1 } else if i.abs_diff(j) == 1 { 3 } else { 2 }).collect())
            .collect();
        Self::build(&format!("gl{n}"), m, Realization::permutation(n), true, DEFAULT_ELEMENT_BOUND)
    }

    /// Enumerate with an explicit element bound.
    pub fn build(
        name: &str,
        m: Vec<Vec<u32>>,
        realization: Realization,
        type_a: bool,
        bound: usize,
    ) -> Result<Arc<Self>, CoxeterError> {
        let n = m.len();
        let refl: Vec<Matrix<Coeff>> = (0..n).map(|s| realization.reflection(s)).collect();
        let key = |mat: &Matrix<Coeff>| -> Vec<Coeff> {
            (0..mat.rows()).flat_map(|i| mat.row(i).to_vec()).collect()
        };
        let mut index: HashMap<Vec<Coeff>, usize> = HashMap::new();
        let id = Matrix::identity(realization.rank);
        index.insert(key(&id), 0);
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut mats = vec![id];
        let mut frontier = vec![0usize];
        // breadth-first by length; the lex-least reduced word of a new element is
        // the least `s` followed by the word of `s·w'` over left descents
        while !frontier.is_empty() {
            let mut next: Vec<usize> = Vec::new();
            for &w in &frontier {
                for (s, r) in refl.iter().enumerate() {
                    let prod = r.mul(&mats[w]);
                    let k = key(&prod);
                    let mut cand = vec![s];
                    cand.extend_from_slice(&words[w]);
                    match index.get(&k) {
                        Some(&j) => {
                            if words[j].len() == cand.len() && cand < words[j] {
                                words[j] = cand;
                            }
                        }
                        None => {
                            let j = mats.len();
                            if j >= bound {
                                return Err(CoxeterError::BoundExceeded(bound));
                            }
                            index.insert(k, j);
                            mats.push(prod);
                            words.push(cand);
                            next.push(j);
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut order: Vec<usize> = (0..mats.len()).collect();
        order.sort_by(|&a, &b| (words[a].len(), &words[a]).cmp(&(words[b].len(), &words[b])));
        let mut rank_of = vec![0; order.len()];
        for (r, &o) in order.iter().enumerate() {
            rank_of[o] = r;
        }
        let mut elements: Vec<ElementData> = order
            .iter()
            .map(|&o| ElementData {
                word: words[o].clone(),
                matrix: mats[o].clone(),
                left: vec![],
                right: vec![],
                inverse: 0,
            })
            .collect();
        let lookup = |mat: &Matrix<Coeff>| rank_of[index[&key(mat)]];
        for e in 0..elements.len() {
            let left = refl.iter().map(|r| lookup(&r.mul(&elements[e].matrix))).collect();
            let right = refl.iter().map(|r| lookup(&elements[e].matrix.mul(r))).collect();
            let inv = lookup(&elements[e].matrix.inverse().expect("reflections are invertible"));
            elements[e].left = left;
            elements[e].right = right;
            elements[e].inverse = inv;
        }
        let mut below = vec![vec![false; elements.len()]; elements.len()];
        for b in 0..elements.len() {
            below[b][b] = true;
            if b == 0 {
                continue;
            }
            let s = elements[b].word[0];
            let bp = elements[b].left[s];
            for x in 0..elements.len() {
                if below[bp][x] {
                    below[b][x] = true;
                    below[b][elements[x].left[s]] = true;
                }
            }
        }
        Ok(Arc::new(CoxeterSystem {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name: name.to_string(),
            gens: letter_names(n),
            coxeter_matrix: m,
            realization,
            elements,
            below,
            type_a,
        }))
    }

    /// Identifier distinguishing this system from every other one built in the process.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.coxeter_matrix
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn is_type_a(&self) -> bool {
        self.type_a
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// All elements sorted by (length, lex-least reduced word).
    pub fn enumerate(&self) -> Vec<Element> {
        (0..self.elements.len()).map(|idx| Element { sys: self.id, idx }).collect()
    }

    pub fn identity(&self) -> Element {
        Element { sys: self.id, idx: 0 }
    }

    pub fn element(&self, idx: usize) -> Element {
        assert!(idx < self.elements.len(), "element index out of range");
        Element { sys: self.id, idx }
    }

    pub fn generator(&self, s: usize) -> Element {
        Element { sys: self.id, idx: self.elements[0].right[s] }
    }

    pub fn longest(&self) -> Element {
        self.element(self.elements.len() - 1)
    }

    fn check(&self, w: Element) -> Result<usize, CoxeterError> {
        if w.sys == self.id { Ok(w.idx) } else { Err(CoxeterError::SystemMismatch) }
    }

    pub fn owns(&self, w: Element) -> bool {
        w.sys == self.id
    }

    fn data(&self, w: Element) -> &ElementData {
        &self.elements[self.check(w).expect("element of another system")]
    }

    pub fn length(&self, w: Element) -> usize {
        self.data(w).word.len()
    }

    /// The lexicographically least reduced word.
    pub fn word(&self, w: Element) -> &[usize] {
        &self.data(w).word
    }

    pub fn word_string(&self, w: Element) -> String {
        let word = self.word(w);
        if word.is_empty() {
            return "e".into();
        }
        word.iter().map(|&s| self.gens[s].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// A compact word using the letters `s, t, u, r` when the rank allows it.
    pub fn word_compact(&self, w: Element) -> String {
        const LETTERS: [char; 4] = ['s', 't', 'u', 'r'];
        if self.rank() > LETTERS.len() {
            return self.word_string(w);
        }
        let word = self.word(w);
        if word.is_empty() {
            return "e".into();
        }
        word.iter().map(|&s| LETTERS[s]).collect()
    }

    pub fn matrix(&self, w: Element) -> &Matrix<Coeff> {
        &self.data(w).matrix
    }

    pub fn left_mul(&self, s: usize, w: Element) -> Element {
        Element { sys: self.id, idx: self.data(w).left[s] }
    }

    pub fn right_mul(&self, w: Element, s: usize) -> Element {
        Element { sys: self.id, idx: self.data(w).right[s] }
    }

    pub fn inverse(&self, w: Element) -> Element {
        Element { sys: self.id, idx: self.data(w).inverse }
    }

    pub fn is_left_descent(&self, s: usize, w: Element) -> bool {
        self.length(self.left_mul(s, w)) < self.length(w)
    }

    pub fn is_right_descent(&self, w: Element, s: usize) -> bool {
        self.length(self.right_mul(w, s)) < self.length(w)
    }

    pub fn left_descents(&self, w: Element) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.is_left_descent(s, w)).collect()
    }

    pub fn right_descents(&self, w: Element) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.is_right_descent(w, s)).collect()
    }

    pub fn multiply(&self, a: Element, b: Element) -> Result<Element, CoxeterError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.word(b).iter().fold(a, |acc, &s| self.right_mul(acc, s)))
    }

    /// Product of a word of generator indices.
    pub fn from_word(&self, word: &[usize]) -> Element {
        word.iter().fold(self.identity(), |acc, &s| self.right_mul(acc, s))
    }

    pub fn bruhat_leq(&self, a: Element, b: Element) -> Result<bool, CoxeterError> {
        Ok(self.below[self.check(b)?][self.check(a)?])
    }

    /// Elements `x ≤ w` in Bruhat order.
    pub fn bruhat_interval(&self, w: Element) -> Vec<Element> {
        self.check(w).expect("element of another system");
        (0..self.order()).filter(|&x| self.below[w.idx][x]).map(|idx| Element { sys: self.id, idx }).collect()
    }

    /// Number of elements of each length.
    pub fn length_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.length(self.longest()) + 1];
        for e in &self.elements {
            out[e.word.len()] += 1;
        }
        out
    }

    /// Index of a generator name: `s1, s2, …` or the letters `s, t, u, r`.
    pub fn generator_index(&self, name: &str) -> Result<usize, CoxeterError> {
        if let Some(i) = self.gens.iter().position(|g| g == name) {
            return Ok(i);
        }
        let letter = match name {
            "s" => Some(0),
            "t" => Some(1),
            "u" => Some(2),
            "r" => Some(3),
            _ => None,
        };
        letter.filter(|&i| i < self.rank()).ok_or_else(|| CoxeterError::UnknownGenerator(name.to_string()))
    }

    /// Parse a word: whitespace-separated generator names, or a run of the
    /// letters `s, t, u, r` such as `sts`. `e` and the empty string denote the identity.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, CoxeterError> {
        let signed = self.parse_signed_word(text)?;
        if signed.iter().any(|(_, inv)| *inv) {
            return Err(CoxeterError::UnknownGenerator(text.to_string()));
        }
        Ok(signed.into_iter().map(|(s, _)| s).collect())
    }

    /// Parse a braid word: like [`CoxeterSystem::parse_word`] with an optional
    /// leading `-` on each token marking an inverse generator.
    pub fn parse_signed_word(&self, text: &str) -> Result<Vec<(usize, bool)>, CoxeterError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let (neg, body) = match tok.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, tok.strip_prefix('+').unwrap_or(tok)),
            };
            if let Ok(i) = self.generator_index(body) {
                out.push((i, neg));
                continue;
            }
            if neg || body.is_empty() {
                return Err(CoxeterError::UnknownGenerator(tok.to_string()));
            }
            for ch in body.chars() {
                out.push((self.generator_index(&ch.to_string())?, false));
            }
        }
        Ok(out)
    }
}

fn is_type_a(m: &[Vec<u32>]) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..n).all(|j| m[i][j] == if i == j { 1 } else if i.abs_diff(j) == 1 { 3 } else { 2 }))
}

/// The rational Cartan entry as a [`Q`], if it is rational.
pub fn rational_cartan(sys: &CoxeterSystem, s: usize, t: usize) -> Option<Q> {
    sys.realization().cartan(s, t).as_rational().cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_oracle(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn orders_and_longest_lengths() {
        for (name, order, l0) in [("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("B2", 8, 4), ("I2(4)", 8, 4), ("I2(5)", 10, 5), ("I2(6)", 12, 6), ("I2(2)", 4, 2)] {
            let w = CoxeterSystem::named(name).unwrap();
            assert_eq!(w.order(), order, "{name}");
            assert_eq!(w.length(w.longest()), l0, "{name}");
        }
        assert_eq!(CoxeterSystem::named("A4").unwrap().order(), perm_oracle(5));
        assert_eq!(CoxeterSystem::type_a_permutation(3).unwrap().order(), 6);
    }

    #[test]
    fn words_are_lex_least_and_reduced() {
        let w = CoxeterSystem::named("A2").unwrap();
        let words: Vec<String> = w.enumerate().into_iter().map(|x| w.word_compact(x)).collect();
        assert_eq!(words, vec!["e", "s", "t", "st", "ts", "sts"]);
        for x in w.enumerate() {
            assert_eq!(w.from_word(w.word(x)), x);
        }
    }

    #[test]
    fn multiply_examples() {
        let w = CoxeterSystem::named("A2").unwrap();
        let (s, t) = (w.generator(0), w.generator(1));
        assert_eq!(w.multiply(s, s).unwrap(), w.identity());
        assert_eq!(w.length(w.multiply(s, t).unwrap()), 2);
        for x in w.enumerate() {
            assert_eq!(w.multiply(x, w.inverse(x)).unwrap(), w.identity());
        }
        let other = CoxeterSystem::named("A2").unwrap();
        assert_eq!(w.multiply(s, other.generator(0)), Err(CoxeterError::SystemMismatch));
    }

    #[test]
    fn bruhat_examples() {
        let w = CoxeterSystem::named("A2").unwrap();
        let sts = w.longest();
        assert!(w.bruhat_leq(w.generator(0), sts).unwrap());
        assert!(w.bruhat_leq(w.generator(1), sts).unwrap());
        assert!(!w.bruhat_leq(w.generator(0), w.generator(1)).unwrap());
        assert_eq!(w.bruhat_interval(sts).len(), 6);
    }

    #[test]
    fn parse_words() {
        let w = CoxeterSystem::named("A2").unwrap();
        assert_eq!(w.parse_word("sts").unwrap(), vec![0, 1, 0]);
        assert_eq!(w.parse_word("s1 s2 s1").unwrap(), vec![0, 1, 0]);
        assert_eq!(w.parse_signed_word("s1 -s2").unwrap(), vec![(0, false), (1, true)]);
        assert!(w.parse_word("s3").is_err());
        assert!(w.parse_word("-s1").is_err());
        assert_eq!(w.parse_word("e").unwrap(), Vec::<usize>::new());
        let j = CoxeterSystem::parse("[[1,3],[3,1]]").unwrap();
        assert_eq!(j.order(), 6);
        assert!(CoxeterSystem::parse("[[1,7],[7,1]]").is_err());
        assert!(CoxeterSystem::named("E8").is_err());
    }
}
