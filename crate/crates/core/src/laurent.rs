//! Integer Laurent polynomials in one and two variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

/// A Laurent polynomial in `v` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c·v^e`.
    pub fn monomial(c: i64, e: i32) -> Self {
        let mut p = Self::default();
        p.add_term(e, c);
        p
    }

    /// `v`.
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::default();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, x)| (e, x * c)))
    }

    /// The bar involution `v ↦ v⁻¹`.
    pub fn bar(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Keep only the terms of degree `≤ max`.
    pub fn truncate_above(&self, max: i32) -> Self {
        LaurentPoly { coeffs: self.coeffs.range(..=max).map(|(&e, &c)| (e, c)).collect() }
    }

    /// Evaluate at `v = 1`.
    pub fn at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Rewrite as a polynomial in `z = v⁻¹ − v`; entry `k` is the coefficient
    /// of `zᵏ`. Fails unless the polynomial is invariant under `v ↦ −v⁻¹`.
    pub fn to_z_poly(&self) -> Option<Vec<i64>> {
        let mut rest = self.clone();
        let mut out: Vec<i64> = Vec::new();
        let z = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
        while let Some(lo) = rest.min_degree() {
            if lo > 0 {
                return None;
            }
            let k = (-lo) as usize;
            let c = rest.coeff(lo);
            if out.len() <= k {
                out.resize(k + 1, 0);
            }
            out[k] += c;
            rest = &rest - &z.pow(k as u32).scale(c);
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Some(out)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, c);
        }
        r
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, -c);
        }
        r
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        &self + &o
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        &self - &o
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

fn write_terms<K, I>(f: &mut fmt::Formatter<'_>, terms: I, mono: impl Fn(&K) -> String) -> fmt::Result
where
    I: Iterator<Item = (K, i64)>,
{
    let mut first = true;
    for (k, c) in terms {
        let m = mono(&k);
        let sign = if c < 0 { "-" } else { "+" };
        if first {
            if c < 0 {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let a = c.abs();
        if m.is_empty() {
            write!(f, "{a}")?;
        } else if a == 1 {
            write!(f, "{m}")?;
        } else {
            write!(f, "{a}{m}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn power(var: &str, e: i32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms(), |e| power("v", *e))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A Laurent polynomial in two variables with integer coefficients. The
/// variable names are only used for printing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent2 {
    coeffs: BTreeMap<(i32, i32), i64>,
    names: (&'static str, &'static str),
}

impl Laurent2 {
    pub fn zero(names: (&'static str, &'static str)) -> Self {
        Laurent2 { coeffs: BTreeMap::new(), names }
    }

    pub fn monomial(names: (&'static str, &'static str), c: i64, i: i32, j: i32) -> Self {
        let mut p = Self::zero(names);
        p.add_term(i, j, c);
        p
    }

    pub fn one(names: (&'static str, &'static str)) -> Self {
        Self::monomial(names, 1, 0, 0)
    }

    /// Embed a one-variable polynomial as the second variable.
    pub fn from_second(names: (&'static str, &'static str), p: &LaurentPoly) -> Self {
        let mut r = Self::zero(names);
        for (e, c) in p.terms() {
            r.add_term(0, e, c);
        }
        r
    }

    pub fn names(&self) -> (&'static str, &'static str) {
        self.names
    }

    pub fn add_term(&mut self, i: i32, j: i32, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry((i, j)).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: i32, j: i32) -> i64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut r = Self::zero(self.names);
        for ((i, j), x) in self.terms() {
            r.add_term(i, j, x * c);
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.names);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Apply `y ↦ y⁻¹` to the second variable.
    pub fn bar_second(&self) -> Self {
        let mut r = Self::zero(self.names);
        for ((i, j), c) in self.terms() {
            r.add_term(i, -j, c);
        }
        r
    }
}

impl Add for &Laurent2 {
    type Output = Laurent2;
    fn add(self, o: &Laurent2) -> Laurent2 {
        let mut r = self.clone();
        for ((i, j), c) in o.terms() {
            r.add_term(i, j, c);
        }
        r
    }
}

impl Sub for &Laurent2 {
    type Output = Laurent2;
    fn sub(self, o: &Laurent2) -> Laurent2 {
        let mut r = self.clone();
        for ((i, j), c) in o.terms() {
            r.add_term(i, j, -c);
        }
        r
    }
}

impl Mul for &Laurent2 {
    type Output = Laurent2;
    fn mul(self, o: &Laurent2) -> Laurent2 {
        let mut r = Laurent2::zero(self.names);
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in o.terms() {
                r.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        r
    }
}

impl fmt::Display for Laurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.names;
        write_terms(f, self.terms(), |(i, j)| {
            let a = power(x, *i);
            let b = power(y, *j);
            match (a.is_empty(), b.is_empty()) {
                (true, _) => b,
                (_, true) => a,
                _ => format!("{a}*{b}"),
            }
        })
    }
}

impl fmt::Debug for Laurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Laurent2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_stable() {
        let p = LaurentPoly::from_terms([(-1, 1), (0, -2), (2, 3)]);
        assert_eq!(p.to_string(), "v^-1 - 2 + 3v^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        let q = Laurent2::monomial(("a", "v"), -1, 2, 1);
        assert_eq!(q.to_string(), "-a^2*v");
    }

    #[test]
    fn z_conversion() {
        // (v^-1 - v)^2 + 1 = v^-2 - 1 + v^2
        let p = LaurentPoly::from_terms([(-2, 1), (0, -1), (2, 1)]);
        assert_eq!(p.to_z_poly(), Some(vec![1, 0, 1]));
        assert_eq!(LaurentPoly::v().to_z_poly(), None);
    }
}
