//! Sparse multivariate polynomials over [`Rat`].
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic (total degree first, then lexicographic with
//! variable 0 most significant). The leading term is the last entry.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use smallvec::SmallVec;

use super::rat::{content_parts, Rat};

/// An exponent vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// A polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} variables"
        );
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rat::one());
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs; like terms
    /// are combined and zeros dropped.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Rat, Vec<u16>)>,
    {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial(SmallVec::from_vec(e)), &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// Degree in a single variable (0 for the zero polynomial).
    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_monomial(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Rat> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|e| *e += &prod)
                    .or_insert(prod);
            }
        }
        MPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        assert!(var < self.nvars, "variable index out of range");
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] = e - 1;
            out.terms.insert(m2, c * &Rat::from_int(e as i64));
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    ///
    /// Division by a single polynomial under a monomial order leaves a zero
    /// remainder exactly when the divisor divides, so the loop can stop at
    /// the first leading term that `lt(d)` fails to divide.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        let (dm, dc) = d.leading_term().unwrap();
        let dc_inv = dc.recip().unwrap();
        if d.terms.len() == 1 {
            let mut out = Self::zero(self.nvars);
            for (m, c) in &self.terms {
                out.terms.insert(m.div(dm)?, c * &dc_inv);
            }
            return Some(out);
        }
        let tail: Vec<(Monomial, Rat)> = d
            .terms
            .iter()
            .rev()
            .skip(1)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let mut rem = self.terms.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.pop_last() {
            let qm = rm.div(dm)?;
            let qc = &rc * &dc_inv;
            for (tm, tc) in &tail {
                let m = qm.mul(tm);
                let sub = &qc * tc;
                match rem.entry(m) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-sub);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = o.get() - &sub;
                        if s.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    /// Splits `self = c · p` with `p` integral, primitive and with positive
    /// leading coefficient. Returns `(c, p)`; the zero polynomial yields
    /// `(0, 0)`.
    pub fn primitive_part(&self) -> (Rat, MPoly) {
        if self.is_zero() {
            return (Rat::zero(), self.clone());
        }
        let (l, g) = content_parts(self.terms.values());
        let mut c = Rat::from_bigints(g, l);
        if self.leading_term().unwrap().1.is_negative() {
            c = -c;
        }
        if c.is_one() {
            return (c, self.clone());
        }
        let inv = c.recip().unwrap();
        (c, self.scale(&inv))
    }

    /// Rewrites the polynomial into `new_nvars` variables, sending variable
    /// `i` to `mapping[i]`.
    pub fn remap(&self, new_nvars: usize, mapping: &[usize]) -> MPoly {
        assert_eq!(mapping.len(), self.nvars, "mapping length mismatch");
        let mut out = Self::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(new_nvars);
            for (i, &x) in m.0.iter().enumerate() {
                e.0[mapping[i]] += x;
            }
            out.add_term(e, c);
        }
        out
    }

    /// Substitutes polynomials (all in a common ring) for each variable.
    pub fn compose(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(0, MPoly::nvars);
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e as u32));
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    t = &t * x;
                }
            }
            acc += &t;
        }
        acc
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Rat::is_integer)
    }

    /// Common denominator of the coefficients.
    pub fn coeff_denominator(&self) -> BigInt {
        content_parts(self.terms.values()).0
    }

    /// Sparse text encoding: space-separated `coeff:e1,e2,...,eN` terms in
    /// ascending monomial order, or `0`.
    pub fn to_sparse_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let exps: Vec<String> = m.0.iter().map(u16::to_string).collect();
                format!("{c}:{}", exps.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn from_sparse_text(nvars: usize, s: &str) -> Result<MPoly, String> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(nvars));
        }
        let mut p = Self::zero(nvars);
        for tok in s.split_whitespace() {
            let (c, e) = tok
                .split_once(':')
                .ok_or_else(|| format!("term `{tok}` lacks `:`"))?;
            let c: Rat = c.parse().map_err(|e| format!("{e}"))?;
            let exps: Vec<u16> = if nvars == 0 {
                if !e.is_empty() {
                    return Err(format!("term `{tok}` has exponents for zero variables"));
                }
                Vec::new()
            } else {
                e.split(',')
                    .map(|x| {
                        x.parse::<u16>()
                            .map_err(|_| format!("bad exponent in `{tok}`"))
                    })
                    .collect::<Result<_, _>>()?
            };
            if exps.len() != nvars {
                return Err(format!(
                    "term `{tok}` has {} exponents, expected {nvars}",
                    exps.len()
                ));
            }
            p.add_term(Monomial(SmallVec::from_vec(exps)), &c);
        }
        Ok(p)
    }

    /// Formats with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(a.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                let name = names.get(i).copied().unwrap_or("?");
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(2, 0)
    }
    fn y() -> MPoly {
        MPoly::var(2, 1)
    }

    #[test]
    fn grlex_leading_term() {
        let p = x()
            .add(&y().pow(2))
            .add(&MPoly::constant(2, Rat::from_int(3)));
        let (m, _) = p.leading_term().unwrap();
        assert_eq!(m.exps(), &[0, 2]);
        let q = x().mul(&y()).add(&y().pow(2));
        assert_eq!(q.leading_term().unwrap().0.exps(), &[1, 1]);
    }

    #[test]
    fn exact_division() {
        let a = x().sub(&y());
        let b = x().add(&y()).pow(2);
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(p.div_exact(&x()).is_none());
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn primitive_part_sign_and_content() {
        let p = x()
            .scale(&Rat::new(-2, 3))
            .add(&MPoly::constant(2, Rat::new(4, 9)));
        let (c, q) = p.primitive_part();
        assert_eq!(q.scale(&c), p);
        assert!(q.is_integral());
        assert!(!q.leading_term().unwrap().1.is_negative());
        assert!(content_parts(q.terms.values()).1 == BigInt::from(1));
    }

    #[test]
    fn sparse_text_roundtrip() {
        let p = x().scale(&Rat::new(3, 2)).sub(&y().pow(2));
        let s = p.to_sparse_text();
        assert_eq!(s, "3/2:1,0 -1:0,2");
        assert_eq!(MPoly::from_sparse_text(2, &s).unwrap(), p);
        assert!(MPoly::from_sparse_text(2, "1:1").is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let p = x().pow(2).mul(&y());
        assert_eq!(p.derivative(0), x().mul(&y()).scale(&Rat::from_int(2)));
        assert_eq!(p.eval(&[Rat::from_int(3), Rat::new(1, 2)]), Rat::new(9, 2));
    }
}
