//! Rational differential operators `Σ_α f_α(z) ∂^α` in `N` variables.
//!
//! Coefficients sit to the left of the derivatives. Composition uses the
//! multi-index Leibniz rule
//!
//! ```text
//! (a ∂^α)(b ∂^β) = Σ_{γ ≤ α} C(α, γ) a (∂^γ b) ∂^{α−γ+β}
//! ```

mod family;

use std::collections::BTreeMap;
use std::fmt;

pub use family::{
    check_construction_agreement, check_symbol_matches_classical, classical_family,
    closed_form_basis, hamiltonians_from_basis, index_convention_factor, rational_hamiltonians,
    OpFamilySpec,
};

use crate::error::{Error, Result};
use crate::exact::{MPoly, Rat, RatFunc};
use crate::verdict::Verdict;

pub type MultiIndex = Vec<u16>;

/// A differential operator with rational-function coefficients.
#[derive(Clone, PartialEq)]
pub struct RatDiffOp {
    n: usize,
    terms: BTreeMap<MultiIndex, RatFunc>,
}

fn binomial(n: u16, k: u16) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = &acc * &Rat::new((n - i) as i64, (i + 1) as i64);
    }
    acc
}

/// All `γ` with `γ ≤ α` componentwise.
fn below(alpha: &[u16]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|g| {
                (0..=a).map(move |k| {
                    let mut g = g.clone();
                    g.push(k);
                    g
                })
            })
            .collect();
    }
    out
}

fn differentiate(f: &RatFunc, gamma: &[u16]) -> RatFunc {
    let mut g = f.clone();
    for (var, &k) in gamma.iter().enumerate() {
        for _ in 0..k {
            if g.is_zero() {
                return g;
            }
            g = g.partial_derivative(var);
        }
    }
    g
}

impl RatDiffOp {
    pub fn zero(n: usize) -> Self {
        RatDiffOp {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: RatFunc) -> Self {
        let n = f.nvars();
        Self::from_terms(n, [(vec![0; n], f)])
    }

    pub fn identity(n: usize) -> Self {
        Self::multiplication(RatFunc::one(n))
    }

    /// `∂_var^order`.
    pub fn partial(n: usize, var: usize, order: u16) -> Self {
        let mut alpha = vec![0; n];
        alpha[var] = order;
        Self::from_terms(n, [(alpha, RatFunc::one(n))])
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, RatFunc)>,
    {
        let mut op = Self::zero(n);
        for (alpha, f) in terms {
            assert_eq!(alpha.len(), n, "multi-index length mismatch");
            assert_eq!(f.nvars(), n, "coefficient variable count mismatch");
            op.add_term(alpha, f);
        }
        op
    }

    fn add_term(&mut self, alpha: MultiIndex, f: RatFunc) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&f);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &[u16]) -> RatFunc {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.n))
    }

    /// Largest `|α|` with a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|a| a.iter().map(|&x| x as u32).sum())
            .max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "variable count mismatch");
        let mut out = self.clone();
        for (a, f) in &other.terms {
            out.add_term(a.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        RatDiffOp {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, f)| (a.clone(), f.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `f ∘ self`.
    pub fn left_mul(&self, f: &RatFunc) -> Self {
        let mut out = Self::zero(self.n);
        for (a, g) in &self.terms {
            out.add_term(a.clone(), f.mul(g));
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.left_mul(&RatFunc::constant(self.n, c.clone()))
    }

    /// Applies the operator to a function.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero(self.n);
        for (a, g) in &self.terms {
            acc = acc.add(&g.mul(&differentiate(f, a)));
        }
        acc
    }

    /// Rewrites a one-variable operator in variable `var` of `n`.
    pub fn in_variable(&self, var: usize, n: usize) -> Self {
        assert_eq!(self.n, 1, "only one-variable operators can be relocated");
        let mut out = Self::zero(n);
        for (a, f) in &self.terms {
            let mut alpha = vec![0; n];
            alpha[var] = a[0];
            out.add_term(alpha, f.remap(n, &[var]));
        }
        out
    }

    /// Text form: one line per term, `α_1 … α_N | num | den`, with
    /// polynomials in sparse text.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return String::new();
        }
        self.terms
            .iter()
            .map(|(a, f)| {
                let idx: Vec<String> = a.iter().map(u16::to_string).collect();
                format!(
                    "{} | {} | {}",
                    idx.join(" "),
                    f.num().to_sparse_text(),
                    f.den().to_sparse_text()
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn from_text(n: usize, s: &str) -> std::result::Result<Self, String> {
        let mut op = Self::zero(n);
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            let [idx, num, den] = parts[..] else {
                return Err(format!("expected `α | num | den`, got `{line}`"));
            };
            let alpha: MultiIndex = idx
                .split_whitespace()
                .map(|x| x.parse::<u16>().map_err(|_| format!("bad index `{x}`")))
                .collect::<std::result::Result<_, _>>()?;
            if alpha.len() != n {
                return Err(format!(
                    "multi-index `{idx}` has length {}, expected {n}",
                    alpha.len()
                ));
            }
            let num = MPoly::from_sparse_text(n, num)?;
            let den = MPoly::from_sparse_text(n, den)?;
            if den.is_zero() {
                return Err("zero denominator".into());
            }
            op.add_term(alpha, RatFunc::new(num, den));
        }
        Ok(op)
    }

    /// Parses a one-variable operator such as `z^2*d2 - z*d1 + 3/2`, where
    /// `dk` stands for `∂^k`. Coefficients are polynomial in `z`.
    pub fn parse_one_var(s: &str) -> std::result::Result<Self, String> {
        let mut op = Self::zero(1);
        let cleaned = s.replace(' ', "");
        if cleaned.is_empty() {
            return Err("empty operator".into());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let mut coeff = Rat::one();
            let mut zpow = 0u16;
            let mut order = 0u16;
            for factor in body.split('*') {
                if let Some(k) = factor.strip_prefix('d') {
                    order += k
                        .parse::<u16>()
                        .map_err(|_| format!("bad derivative `{factor}`"))?;
                } else if let Some(rest) = factor.strip_prefix('z') {
                    zpow += match rest.strip_prefix('^') {
                        Some(e) => e
                            .parse::<u16>()
                            .map_err(|_| format!("bad power `{factor}`"))?,
                        None if rest.is_empty() => 1,
                        None => return Err(format!("bad factor `{factor}`")),
                    };
                } else {
                    let c: Rat = factor
                        .parse()
                        .map_err(|_| format!("bad factor `{factor}`"))?;
                    coeff = &coeff * &c;
                }
            }
            if neg {
                coeff = -coeff;
            }
            let f = RatFunc::from_poly(MPoly::from_terms(1, [(coeff, vec![zpow])]));
            op.add_term(vec![order], f);
        }
        Ok(op)
    }
}

/// `A ∘ B` by the Leibniz rule.
pub fn do_compose(a: &RatDiffOp, b: &RatDiffOp) -> RatDiffOp {
    assert_eq!(a.n, b.n, "variable count mismatch");
    let n = a.n;
    let mut out = RatDiffOp::zero(n);
    let mut deriv_cache: BTreeMap<(MultiIndex, MultiIndex), RatFunc> = BTreeMap::new();
    for (alpha, fa) in &a.terms {
        for gamma in below(alpha) {
            let c = alpha
                .iter()
                .zip(&gamma)
                .fold(Rat::one(), |acc, (&x, &y)| &acc * &binomial(x, y));
            let scaled = fa.scale(&c);
            for (beta, fb) in &b.terms {
                let db = deriv_cache
                    .entry((beta.clone(), gamma.clone()))
                    .or_insert_with(|| differentiate(fb, &gamma));
                if db.is_zero() {
                    continue;
                }
                let idx: MultiIndex = (0..n).map(|j| alpha[j] - gamma[j] + beta[j]).collect();
                out.add_term(idx, scaled.mul(db));
            }
        }
    }
    out
}

/// `A∘B − B∘A`.
pub fn do_commutator(a: &RatDiffOp, b: &RatDiffOp) -> RatDiffOp {
    do_compose(a, b).sub(&do_compose(b, a))
}

/// A polynomial in `ξ_1..ξ_N` with coefficients rational in `z_1..z_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolPoly {
    n: usize,
    coeffs: BTreeMap<MultiIndex, RatFunc>,
}

impl SymbolPoly {
    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, RatFunc> {
        &self.coeffs
    }

    /// As a rational function in `(z_1, ξ_1, …, z_N, ξ_N)`.
    pub fn to_phase_space(&self) -> RatFunc {
        let n = self.n;
        let mapping: Vec<usize> = (0..n).map(|j| 2 * j).collect();
        let mut acc = RatFunc::zero(2 * n);
        for (alpha, f) in &self.coeffs {
            let mut exps = vec![0u16; 2 * n];
            for (j, &a) in alpha.iter().enumerate() {
                exps[2 * j + 1] = a;
            }
            let mono = MPoly::from_terms(2 * n, [(Rat::one(), exps)]);
            acc = acc.add(&f.remap(2 * n, &mapping).mul_poly(&mono));
        }
        acc
    }

    /// Splits a phase-space function by `ξ`-monomials. Returns `None` when
    /// the denominator depends on some `ξ_j` or `n` is odd.
    pub fn from_phase_space(f: &RatFunc) -> Option<SymbolPoly> {
        let nv = f.nvars();
        if !nv.is_multiple_of(2) {
            return None;
        }
        let n = nv / 2;
        let den = f.den();
        if (0..n).any(|j| den.degree_in(2 * j + 1) > 0) {
            return None;
        }
        let zmap: Vec<usize> = (0..nv)
            .map(|v| if v % 2 == 0 { v / 2 } else { 0 })
            .collect();
        let den_z = den.remap(n, &zmap);
        let mut split: BTreeMap<MultiIndex, Vec<(Rat, Vec<u16>)>> = BTreeMap::new();
        for (m, c) in f.num().terms() {
            let e = m.exps();
            let xi: MultiIndex = (0..n).map(|j| e[2 * j + 1]).collect();
            let z: Vec<u16> = (0..n).map(|j| e[2 * j]).collect();
            split.entry(xi).or_default().push((c.clone(), z));
        }
        let coeffs = split
            .into_iter()
            .map(|(xi, terms)| (xi, RatFunc::new(MPoly::from_terms(n, terms), den_z.clone())))
            .collect();
        Some(SymbolPoly { n, coeffs })
    }
}

/// Top-order part of `A` with `∂_j ↦ ξ_j`.
pub fn symbol(a: &RatDiffOp) -> Result<SymbolPoly> {
    let top = a.order().ok_or(Error::ZeroOperator)?;
    let coeffs = a
        .terms
        .iter()
        .filter(|(alpha, _)| alpha.iter().map(|&x| x as u32).sum::<u32>() == top)
        .map(|(alpha, f)| (alpha.clone(), f.clone()))
        .collect();
    Ok(SymbolPoly { n: a.n, coeffs })
}

/// `[H_k, H_l] = 0` for every pair.
pub fn check_operators_commute(hs: &[RatDiffOp]) -> Verdict {
    let mut v = Verdict::default();
    for k in 0..hs.len() {
        for l in k + 1..hs.len() {
            let c = do_commutator(&hs[k], &hs[l]);
            v.record(
                c.is_zero(),
                format!("[H_{}, H_{}] = 0", k + 1, l + 1),
                || c.to_text(),
            );
        }
    }
    v
}

pub(crate) fn z_names(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("z{j}")).collect()
}

impl fmt::Display for RatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = z_names(self.n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                let mut s = format!("({})", c.display_with(&refs));
                for (j, &k) in a.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("∂{}", j + 1)),
                        _ => s.push_str(&format!("∂{}^{k}", j + 1)),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for RatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, j: usize) -> RatFunc {
        RatFunc::var(n, j)
    }

    fn zd() -> RatDiffOp {
        RatDiffOp::partial(1, 0, 1).left_mul(&z(1, 0))
    }

    #[test]
    fn canonical_commutation() {
        let d = RatDiffOp::partial(1, 0, 1);
        let zm = RatDiffOp::multiplication(z(1, 0));
        let want = zd().add(&RatDiffOp::identity(1));
        assert_eq!(do_compose(&d, &zm), want);
        assert_eq!(do_commutator(&d, &zm), RatDiffOp::identity(1));
        assert!(do_commutator(&d, &d).is_zero());
    }

    #[test]
    fn euler_operator_square() {
        // (z∂)(z∂) = z²∂² + z∂; on z^k both sides give k² z^k
        let sq = do_compose(&zd(), &zd());
        let want = RatDiffOp::partial(1, 0, 2)
            .left_mul(&z(1, 0).mul(&z(1, 0)))
            .add(&zd());
        assert_eq!(sq, want);
        for k in 0..5 {
            let zk = z(1, 0).pow(k).unwrap();
            assert_eq!(sq.apply(&zk), zk.scale(&Rat::from_int((k * k) as i64)));
        }
        assert_eq!(
            do_commutator(&zd(), &RatDiffOp::multiplication(z(1, 0))),
            RatDiffOp::multiplication(z(1, 0))
        );
    }

    #[test]
    fn multiplication_operators_compose_pointwise() {
        let f = RatFunc::new(MPoly::var(2, 0), MPoly::var(2, 1));
        let g = z(2, 1).add(&RatFunc::one(2));
        let c = do_compose(
            &RatDiffOp::multiplication(f.clone()),
            &RatDiffOp::multiplication(g.clone()),
        );
        assert_eq!(c, RatDiffOp::multiplication(f.mul(&g)));
    }

    #[test]
    fn compose_agrees_with_application() {
        let a = RatDiffOp::from_text(2, "1 1 | 1:1,0 | 1:0,1 1:0,0\n0 2 | 2:0,0 | 1:1,0").unwrap();
        let b = RatDiffOp::from_text(2, "2 0 | 1:0,2 | 1:0,0\n0 0 | 1:1,1 | 1:1,0 -1:0,1").unwrap();
        let f = RatFunc::new(
            MPoly::from_sparse_text(2, "1:3,1 -2:0,2").unwrap(),
            MPoly::from_sparse_text(2, "1:1,0 1:0,0").unwrap(),
        );
        assert_eq!(do_compose(&a, &b).apply(&f), a.apply(&b.apply(&f)));
    }

    #[test]
    fn symbol_of_euler_plus_one() {
        let op = zd().add(&RatDiffOp::identity(1));
        let s = symbol(&op).unwrap();
        assert_eq!(s.coeffs().len(), 1);
        assert_eq!(s.coeffs()[&vec![1]], z(1, 0));
        let f = RatDiffOp::multiplication(z(1, 0));
        assert_eq!(symbol(&f).unwrap().coeffs()[&vec![0]], z(1, 0));
        assert!(matches!(
            symbol(&RatDiffOp::zero(1)),
            Err(Error::ZeroOperator)
        ));
    }

    #[test]
    fn phase_space_roundtrip() {
        let op = RatDiffOp::from_text(2, "1 1 | 1:1,0 | 1:0,1 1:0,0\n0 2 | 2:0,0 | 1:1,0").unwrap();
        let s = symbol(&op).unwrap();
        let back = SymbolPoly::from_phase_space(&s.to_phase_space()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn text_roundtrip() {
        let op =
            RatDiffOp::from_text(2, "1 0 | 3/2:1,1 | 1:1,0 -1:0,1\n0 0 | 1:0,0 | 1:0,0").unwrap();
        assert_eq!(RatDiffOp::from_text(2, &op.to_text()).unwrap(), op);
        assert!(RatDiffOp::from_text(2, "1 | 1:0,0 | 1:0,0").is_err());
        assert!(RatDiffOp::from_text(1, "1 | 1:0 | 0").is_err());
    }

    #[test]
    fn parse_operator_specs() {
        assert_eq!(
            RatDiffOp::parse_one_var("d1").unwrap(),
            RatDiffOp::partial(1, 0, 1)
        );
        let op = RatDiffOp::parse_one_var("z^2*d2 - z*d1 + 3/2").unwrap();
        assert_eq!(op.order(), Some(2));
        assert_eq!(op.coeff(&[1]), z(1, 0).neg());
        assert_eq!(op.coeff(&[0]), RatFunc::constant(1, Rat::new(3, 2)));
        assert!(RatDiffOp::parse_one_var("q*d1").is_err());
    }
}
