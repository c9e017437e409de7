//! Truncated Rees algebra of one-variable differential operators and its
//! localization at an element `f` with invertible classical part.
//!
//! An [`HElem`] is `Σ ℏ^p a_{j,p}(z) ∂^j` with `p ≥ j`. Writing `D = ℏ∂`,
//! a term is `ℏ^{p−j} a D^j`, and `v = p − j` is its valuation. Elements are
//! kept modulo valuation `≥ M`, so `D` survives truncation while `ℏ` does
//! not.
//!
//! A [`LocalSeries`] is `Σ_k a_k X^k` with `a_k` on the left, where `X`
//! stands for `f⁻¹`. Products follow
//!
//! ```text
//! (a X^n)(b X^m) = Σ_α (−1)^α C(n+α−1, α) a ad(f)^α(b) X^{n+m+α}
//! ```
//!
//! and equality is decided after rewriting `a X^k = a f^{K−k} X^K` for a
//! common `K`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{MPoly, Rat, RatFunc};
use crate::poisson::canonical_bracket;
use crate::verdict::Verdict;
use crate::weyl::{do_compose, RatDiffOp};

/// Sign `s` with `[a, b] = s ℏ {σa, σb} + O(ℏ²)`, where `σ` replaces `D` by
/// `ξ` and `{z, ξ} = 1`. From `[z, D] = −ℏ`.
pub const HBAR_BRACKET_SIGN: i64 = -1;

fn binomial(n: u32, k: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = &acc * &Rat::new((n - i) as i64, (i + 1) as i64);
    }
    acc
}

/// `Σ ℏ^p a_{j,p}(z) ∂^j`, keyed by `(j, p)`, truncated at valuation `M`.
#[derive(Clone, PartialEq)]
pub struct HElem {
    m: u32,
    terms: BTreeMap<(u16, u32), RatFunc>,
}

impl HElem {
    pub fn zero(m: u32) -> Self {
        assert!(m >= 1, "truncation order must be positive");
        HElem {
            m,
            terms: BTreeMap::new(),
        }
    }

    /// `ℏ^p a ∂^j`; requires `p ≥ j`.
    pub fn term(m: u32, j: u16, p: u32, a: RatFunc) -> Self {
        let mut e = Self::zero(m);
        e.add_term(j, p, a);
        e
    }

    pub fn function(m: u32, a: RatFunc) -> Self {
        Self::term(m, 0, 0, a)
    }

    pub fn one(m: u32) -> Self {
        Self::function(m, RatFunc::one(1))
    }

    pub fn hbar(m: u32) -> Self {
        Self::term(m, 0, 1, RatFunc::one(1))
    }

    /// `D = ℏ∂`.
    pub fn d(m: u32) -> Self {
        Self::term(m, 1, 1, RatFunc::one(1))
    }

    fn add_term(&mut self, j: u16, p: u32, a: RatFunc) {
        assert!(p >= j as u32, "ℏ-power {p} below derivative order {j}");
        assert_eq!(a.nvars(), 1, "coefficients are functions of z");
        if a.is_zero() || p - j as u32 >= self.m {
            return;
        }
        match self.terms.entry((j, p)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(a);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&a);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn truncation(&self) -> u32 {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u16, u32), &RatFunc)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest `p − j` among nonzero terms.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|&(j, p)| p - j as u32).min()
    }

    /// Terms of valuation exactly `v`.
    pub fn part(&self, v: u32) -> HElem {
        HElem {
            m: self.m,
            terms: self
                .terms
                .iter()
                .filter(|(&(j, p), _)| p - j as u32 == v)
                .map(|(k, a)| (*k, a.clone()))
                .collect(),
        }
    }

    /// The valuation-`v` part with `D ↦ ξ`, as a function of `(z, ξ)`.
    pub fn symbol_part(&self, v: u32) -> RatFunc {
        let xi = RatFunc::var(2, 1);
        let mut acc = RatFunc::zero(2);
        for (&(j, _), a) in &self.part(v).terms {
            acc = acc.add(&a.remap(2, &[0]).mul(&xi.pow(j as i32).expect("ξ ≠ 0")));
        }
        acc
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.m, other.m, "truncation orders differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        for (&(j, p), a) in &other.terms {
            out.add_term(j, p, a.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        HElem {
            m: self.m,
            terms: self.terms.iter().map(|(k, a)| (*k, a.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.m);
        for (&(j, p), a) in &self.terms {
            out.add_term(j, p, a.scale(c));
        }
        out
    }

    /// `(ℏ^p a ∂^j)(ℏ^q b ∂^l) = Σ_r C(j, r) ℏ^{p+q} a b^{(r)} ∂^{j−r+l}`.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = Self::zero(self.m);
        for (&(j, p), a) in &self.terms {
            for (&(l, q), b) in &other.terms {
                let base = (p - j as u32) + (q - l as u32);
                let mut db = b.clone();
                for r in 0..=j {
                    if base + r as u32 >= self.m || db.is_zero() {
                        break;
                    }
                    let c = a.mul(&db).scale(&binomial(j as u32, r as u32));
                    out.add_term(j - r + l, p + q, c);
                    db = db.partial_derivative(0);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.m);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Random element with polynomial coefficients of degree `≤ 2`, integer
    /// entries in `[−bound, bound]`, and derivative order `≤ max_order`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, m: u32, max_order: u16, bound: i64) -> Self {
        let mut e = Self::zero(m);
        for v in 0..m {
            for j in 0..=max_order {
                if rng.gen_bool(0.5) {
                    continue;
                }
                let terms: Vec<(Rat, Vec<u16>)> = (0..=2u16)
                    .map(|k| (Rat::from_int(rng.gen_range(-bound..=bound)), vec![k]))
                    .collect();
                e.add_term(
                    j,
                    v + j as u32,
                    RatFunc::from_poly(MPoly::from_terms(1, terms)),
                );
            }
        }
        e
    }

    /// Image in operators on functions of `(z, h)`, with `ℏ ↦ h` and `∂ ↦ ∂_z`.
    pub fn to_operator(&self) -> RatDiffOp {
        RatDiffOp::from_terms(
            2,
            self.terms.iter().map(|(&(j, p), a)| {
                let hp = MPoly::from_terms(2, [(Rat::one(), vec![0, p as u16])]);
                (vec![j, 0], a.remap(2, &[0]).mul_poly(&hp))
            }),
        )
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(j, p), a)| {
                let mut s = format!("({})", a.display_with(&["z"]));
                if p > 0 {
                    s.push_str(&format!("ℏ^{p}"));
                }
                if j > 0 {
                    s.push_str(&format!("∂^{j}"));
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Σ_k a_k X^k` in the localization at `f`.
#[derive(Clone)]
pub struct LocalSeries {
    f: HElem,
    coeffs: BTreeMap<u32, HElem>,
}

impl LocalSeries {
    /// Zero in the localization at `f`. The valuation-0 part of `f` must be
    /// a nonzero function of `z`.
    pub fn zero(f: &HElem) -> Result<Self> {
        let body = f.part(0);
        if body.is_zero() {
            return Err(Error::ZeroBody);
        }
        if body.terms.keys().any(|&(j, _)| j > 0) {
            return Err(Error::InvalidInput(
                "classical part of f must not involve ∂".into(),
            ));
        }
        Ok(LocalSeries {
            f: f.clone(),
            coeffs: BTreeMap::new(),
        })
    }

    /// `a X^k`.
    pub fn monomial(f: &HElem, a: HElem, k: u32) -> Result<Self> {
        if a.m != f.m {
            return Err(Error::TruncationMismatch);
        }
        let mut s = Self::zero(f)?;
        s.add_coeff(k, a);
        Ok(s)
    }

    pub fn elem(f: &HElem, a: HElem) -> Result<Self> {
        Self::monomial(f, a, 0)
    }

    /// `X = f⁻¹`.
    pub fn x(f: &HElem) -> Result<Self> {
        Self::monomial(f, HElem::one(f.m), 1)
    }

    pub fn localizer(&self) -> &HElem {
        &self.f
    }

    pub fn truncation(&self) -> u32 {
        self.f.m
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, HElem> {
        &self.coeffs
    }

    fn add_coeff(&mut self, k: u32, a: HElem) {
        if a.is_zero() {
            return;
        }
        let s = match self.coeffs.remove(&k) {
            Some(b) => b.add(&a),
            None => a,
        };
        if !s.is_zero() {
            self.coeffs.insert(k, s);
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.f != other.f {
            return Err(Error::TruncationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (&k, a) in &other.coeffs {
            out.add_coeff(k, a.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LocalSeries {
            f: self.f.clone(),
            coeffs: self.coeffs.iter().map(|(&k, a)| (k, a.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        localize_product(self, other)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::elem(&self.f, HElem::one(self.f.m))?;
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `c` with `self = c X^K`, where `K` is at least every exponent present.
    pub fn normal_form(&self, k_top: u32) -> HElem {
        let mut acc = HElem::zero(self.f.m);
        let mut fpow: Vec<HElem> = vec![HElem::one(self.f.m)];
        for (&k, a) in &self.coeffs {
            assert!(k <= k_top, "exponent {k} above normal-form degree {k_top}");
            let e = (k_top - k) as usize;
            while fpow.len() <= e {
                let next = fpow.last().expect("nonempty").mul(&self.f);
                fpow.push(next);
            }
            acc = acc.add(&a.mul(&fpow[e]));
        }
        acc
    }

    fn top(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form(self.top()).is_zero()
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Image as an operator on functions of `(z, h)`, with `X ↦ f⁻¹`.
    /// Requires `f` to be an `ℏ`-free function of `z`.
    pub fn to_operator(&self) -> Result<RatDiffOp> {
        let f = match self.f.terms.iter().collect::<Vec<_>>()[..] {
            [(&(0, 0), a)] => a.remap(2, &[0]),
            _ => return Err(Error::InvalidInput("operator image needs f = f(z)".into())),
        };
        let mut acc = RatDiffOp::zero(2);
        for (&k, a) in &self.coeffs {
            let finv = f.pow(-(k as i32)).ok_or(Error::ZeroBody)?;
            acc = acc.add(&do_compose(
                &a.to_operator(),
                &RatDiffOp::multiplication(finv),
            ));
        }
        Ok(acc)
    }
}

impl fmt::Display for LocalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, a)| format!("[{a}]X^{k}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for LocalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product in the localization. Both factors must share `f` and `M`.
pub fn localize_product(u: &LocalSeries, v: &LocalSeries) -> Result<LocalSeries> {
    u.compatible(v)?;
    let f = &u.f;
    let mut out = LocalSeries {
        f: f.clone(),
        coeffs: BTreeMap::new(),
    };
    for (&m, b) in &v.coeffs {
        // ad(f)^α(b); valuation grows by at least one per step
        let mut ads = vec![b.clone()];
        while !ads.last().expect("nonempty").is_zero() && ads.len() < f.m as usize + 1 {
            let next = f.commutator(ads.last().expect("nonempty"));
            ads.push(next);
        }
        for (&n, a) in &u.coeffs {
            for (alpha, ad) in ads.iter().enumerate() {
                let alpha = alpha as u32;
                if n == 0 && alpha > 0 {
                    break;
                }
                let mut c = if alpha == 0 {
                    Rat::one()
                } else {
                    binomial(n + alpha - 1, alpha)
                };
                if alpha % 2 == 1 {
                    c = -c;
                }
                out.add_coeff(n + m + alpha, a.mul(ad).scale(&c));
            }
        }
    }
    Ok(out)
}

/// Drops terms `h^p c(z) ∂^j` with `p − j ≥ m`. Coefficient denominators
/// must not involve `h`.
pub fn truncate_operator(op: &RatDiffOp, m: u32) -> RatDiffOp {
    let mut terms = Vec::new();
    for (alpha, c) in op.terms() {
        assert_eq!(c.den().degree_in(1), 0, "denominator depends on ℏ");
        let j = alpha[0] as u32;
        let kept: Vec<(Rat, Vec<u16>)> = c
            .num()
            .terms()
            .filter(|(mono, _)| (mono.exps()[1] as u32) < m + j)
            .map(|(mono, k)| (k.clone(), mono.exps().to_vec()))
            .collect();
        terms.push((
            alpha.clone(),
            RatFunc::new(MPoly::from_terms(2, kept), c.den().clone()),
        ));
    }
    RatDiffOp::from_terms(2, terms)
}

/// `image(u·v) = image(u) ∘ image(v)` modulo valuation `M`.
pub fn check_product_against_operators(u: &LocalSeries, v: &LocalSeries) -> Result<Verdict> {
    let m = u.truncation();
    let lhs = truncate_operator(&localize_product(u, v)?.to_operator()?, m);
    let rhs = truncate_operator(&do_compose(&u.to_operator()?, &v.to_operator()?), m);
    let d = lhs.sub(&rhs);
    let mut v = Verdict::default();
    v.record(
        d.is_zero(),
        "localized product matches operator composition",
        || d.to_text(),
    );
    Ok(v)
}

fn record_eq(v: &mut Verdict, a: &LocalSeries, b: &LocalSeries, what: String) -> Result<()> {
    let d = a.sub(b)?;
    v.record(d.is_zero(), what, || {
        let top = d.coeffs().keys().max().copied().unwrap_or(0);
        match d.normal_form(top).valuation() {
            Some(low) => format!("{d} (lowest ℏ-order {low})"),
            None => d.to_string(),
        }
    });
    Ok(())
}

/// `f·X = X·f = 1`, `X·(f·u) = u`, `(u·f)·X = u` for each sample, and
/// associativity on consecutive sample triples.
pub fn check_localization_axioms(f: &HElem, samples: &[LocalSeries]) -> Result<Verdict> {
    let one = LocalSeries::elem(f, HElem::one(f.m))?;
    let fl = LocalSeries::elem(f, f.clone())?;
    let x = LocalSeries::x(f)?;
    let mut v = Verdict::default();
    record_eq(&mut v, &fl.mul(&x)?, &one, "f·X = 1".into())?;
    record_eq(&mut v, &x.mul(&fl)?, &one, "X·f = 1".into())?;
    for (i, u) in samples.iter().enumerate() {
        record_eq(
            &mut v,
            &x.mul(&fl.mul(u)?)?,
            u,
            format!("X·(f·u_{i}) = u_{i}"),
        )?;
        record_eq(
            &mut v,
            &u.mul(&fl)?.mul(&x)?,
            u,
            format!("(u_{i}·f)·X = u_{i}"),
        )?;
    }
    for (i, w) in samples.windows(3).enumerate() {
        let l = w[0].mul(&w[1])?.mul(&w[2])?;
        let r = w[0].mul(&w[1].mul(&w[2])?)?;
        record_eq(
            &mut v,
            &l,
            &r,
            format!("associativity on samples {i}..{}", i + 2),
        )?;
    }
    Ok(v)
}

/// `X·D = D·X + ℏX²` in the localization at `z`.
pub fn check_xd_relation(m: u32) -> Result<Verdict> {
    let f = HElem::function(m, RatFunc::var(1, 0));
    let x = LocalSeries::x(&f)?;
    let d = LocalSeries::elem(&f, HElem::d(m))?;
    let lhs = x.mul(&d)?;
    let rhs = d
        .mul(&x)?
        .add(&LocalSeries::monomial(&f, HElem::hbar(m), 2)?)?;
    let mut v = Verdict::default();
    record_eq(&mut v, &lhs, &rhs, "X·D = D·X + ℏX²".into())?;
    Ok(v)
}

/// Sends `X′ = (f + ℏg)⁻¹` to `Σ_k (−1)^k (X ℏg)^k X` in the localization
/// at `f` and checks that products and `f′X′ = X′f′ = 1` are preserved.
pub fn check_lift_independence(f: &HElem, g: &HElem, samples: &[LocalSeries]) -> Result<Verdict> {
    let m = f.m;
    let hg = HElem::hbar(m).mul(g);
    let f2 = f.add(&hg);
    let x = LocalSeries::x(f)?;
    let xhg = x.mul(&LocalSeries::elem(f, hg)?)?;
    let mut image_x2 = LocalSeries::zero(f)?;
    let mut p = x.clone();
    for k in 0..m {
        image_x2 = if k % 2 == 0 {
            image_x2.add(&p)?
        } else {
            image_x2.sub(&p)?
        };
        p = xhg.mul(&p)?;
    }
    let phi = |u: &LocalSeries| -> Result<LocalSeries> {
        let mut acc = LocalSeries::zero(f)?;
        for (&k, a) in &u.coeffs {
            let t = LocalSeries::elem(f, a.clone())?.mul(&image_x2.pow(k)?)?;
            acc = acc.add(&t)?;
        }
        Ok(acc)
    };
    let one = LocalSeries::elem(f, HElem::one(m))?;
    let f2l = LocalSeries::elem(f, f2.clone())?;
    let mut v = Verdict::default();
    record_eq(&mut v, &f2l.mul(&image_x2)?, &one, "f′·φ(X′) = 1".into())?;
    record_eq(&mut v, &image_x2.mul(&f2l)?, &one, "φ(X′)·f′ = 1".into())?;
    for (i, w) in samples.windows(2).enumerate() {
        if w[0].f != f2 || w[1].f != f2 {
            return Err(Error::TruncationMismatch);
        }
        let l = phi(&w[0].mul(&w[1])?)?;
        let r = phi(&w[0])?.mul(&phi(&w[1])?)?;
        record_eq(
            &mut v,
            &l,
            &r,
            format!("φ(u_{i} u_{}) = φ(u_{i}) φ(u_{})", i + 1, i + 1),
        )?;
    }
    Ok(v)
}

/// The valuation-1 part of `[a, b]` is `HBAR_BRACKET_SIGN · {σa, σb}`.
pub fn check_commutator_degeneration(a: &HElem, b: &HElem) -> Verdict {
    let c = a.commutator(b);
    let lhs = c.symbol_part(1);
    let rhs = canonical_bracket(&a.symbol_part(0), &b.symbol_part(0))
        .scale(&Rat::from_int(HBAR_BRACKET_SIGN));
    let d = lhs.sub(&rhs);
    let mut v = Verdict::default();
    v.record(
        c.valuation().is_none_or(|x| x >= 1),
        "[a, b] = 0 mod ℏ",
        || c.to_string(),
    );
    v.record(d.is_zero(), "ℏ¹ part of [a, b] = −{σa, σb}", || {
        d.to_string()
    });
    v
}
