//! Rational functions `num / den` over [`Rat`].
//!
//! The denominator is stored as a product of powers of primitive integer
//! polynomials with positive leading coefficient (under grlex). Factors are
//! never factored further; they are just the polynomials that showed up as
//! denominators. Common denominators are formed factor-wise (maximum of
//! exponents), and after every operation the numerator is trial-divided by
//! each stored factor. This keeps expression size in check without a
//! multivariate GCD. Equality is decided by cross-multiplication, so none
//! of this affects correctness.

use std::collections::BTreeMap;
use std::fmt;

use super::mpoly::{default_names, MPoly};
use super::rat::Rat;

type Factors = BTreeMap<MPoly, u32>;

#[derive(Clone)]
pub struct RatFunc {
    num: MPoly,
    den: Factors,
}

fn expand(nvars: usize, f: &Factors) -> MPoly {
    f.iter()
        .fold(MPoly::one(nvars), |acc, (p, &e)| acc.mul(&p.pow(e)))
}

/// Factor-wise `lcm / f` as a polynomial.
fn cofactor(nvars: usize, lcm: &Factors, f: &Factors) -> MPoly {
    let mut acc = MPoly::one(nvars);
    for (p, &e) in lcm {
        let have = f.get(p).copied().unwrap_or(0);
        if e > have {
            acc = acc.mul(&p.pow(e - have));
        }
    }
    acc
}

fn lcm(a: &Factors, b: &Factors) -> Factors {
    let mut out = a.clone();
    for (p, &e) in b {
        let slot = out.entry(p.clone()).or_insert(0);
        *slot = (*slot).max(e);
    }
    out
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, i))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc {
            num: p,
            den: Factors::new(),
        }
    }

    /// `num / den`. Panics if `den` is the zero polynomial.
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        assert_eq!(num.nvars(), den.nvars(), "variable count mismatch");
        let mut r = Self::from_poly(num);
        r.push_factor(den, 1);
        r.cancel();
        r
    }

    /// Multiplies the denominator by `p^e`, normalizing `p` first.
    fn push_factor(&mut self, p: MPoly, e: u32) {
        if e == 0 {
            return;
        }
        let (c, q) = p.primitive_part();
        let cinv = c.recip().expect("zero factor").pow(e as i32).unwrap();
        self.num = self.num.scale(&cinv);
        if q.is_constant() {
            return;
        }
        let mut q = q;
        let nv = q.nvars();
        let content: Vec<u16> = (0..nv)
            .map(|v| q.terms().map(|(m, _)| m.exps()[v]).min().unwrap_or(0))
            .collect();
        if content.iter().any(|&c| c > 0) {
            let mono = MPoly::from_terms(nv, [(Rat::one(), content.clone())]);
            q = q.div_exact(&mono).expect("monomial content divides");
            for (v, &c) in content.iter().enumerate() {
                if c > 0 {
                    *self.den.entry(MPoly::var(nv, v)).or_insert(0) += e * c as u32;
                }
            }
            if q.is_constant() {
                return;
            }
        }
        // Split the new factor against known ones so keys stay small.
        let keys: Vec<MPoly> = self.den.keys().cloned().collect();
        for k in keys {
            if k.num_terms() < q.num_terms() || k.total_degree() < q.total_degree() {
                while let Some(rest) = q.div_exact(&k) {
                    *self.den.get_mut(&k).unwrap() += e;
                    let (c2, r2) = rest.primitive_part();
                    self.num = self.num.scale(&c2.recip().unwrap().pow(e as i32).unwrap());
                    q = r2;
                    if q.is_constant() {
                        return;
                    }
                }
            }
        }
        *self.den.entry(q).or_insert(0) += e;
    }

    fn merge_den(&mut self, other: &Factors) {
        for (p, &e) in other {
            if let Some(slot) = self.den.get_mut(p) {
                *slot += e;
            } else {
                self.push_factor(p.clone(), e);
            }
        }
    }

    /// Trial-divides the numerator by each denominator factor.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<MPoly> = self.den.keys().cloned().collect();
        for k in keys {
            let mut e = self.den[&k];
            while e > 0 {
                match self.num.div_exact(&k) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e == 0 {
                self.den.remove(&k);
            } else {
                *self.den.get_mut(&k).unwrap() = e;
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    /// The expanded denominator. Its leading coefficient is positive.
    pub fn den(&self) -> MPoly {
        expand(self.nvars(), &self.den)
    }

    /// The stored denominator factors with multiplicities.
    pub fn den_factors(&self) -> impl Iterator<Item = (&MPoly, u32)> {
        self.den.iter().map(|(p, &e)| (p, e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&MPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Size measure: numerator terms plus denominator factor terms.
    pub fn num_terms(&self) -> usize {
        self.num.num_terms() + self.den.keys().map(MPoly::num_terms).sum::<usize>()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.combine(other, true)
    }

    fn combine(&self, other: &RatFunc, negate: bool) -> RatFunc {
        assert_eq!(self.nvars(), other.nvars(), "variable count mismatch");
        let rhs_num = if negate {
            other.num.neg()
        } else {
            other.num.clone()
        };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return RatFunc {
                num: rhs_num,
                den: other.den.clone(),
            };
        }
        if self.den == other.den {
            let mut r = RatFunc {
                num: self.num.add(&rhs_num),
                den: self.den.clone(),
            };
            r.cancel();
            return r;
        }
        let n = self.nvars();
        let l = lcm(&self.den, &other.den);
        let num = self
            .num
            .mul(&cofactor(n, &l, &self.den))
            .add(&rhs_num.mul(&cofactor(n, &l, &other.den)));
        let mut r = RatFunc { num, den: l };
        r.cancel();
        r
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        assert_eq!(self.nvars(), other.nvars(), "variable count mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut r = RatFunc {
            num: self.num.mul(&other.num),
            den: self.den.clone(),
        };
        r.merge_den(&other.den);
        r.cancel();
        r
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &MPoly) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        let mut r = RatFunc::from_poly(self.den());
        r.push_factor(self.num.clone(), 1);
        r.cancel();
        Some(r)
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Option<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        let mut r = RatFunc {
            num: base.num.pow(k),
            den: base.den.clone(),
        };
        for v in r.den.values_mut() {
            *v *= k;
        }
        if k == 0 {
            r.den.clear();
        }
        Some(r)
    }

    /// Quotient-rule partial derivative.
    pub fn partial_derivative(&self, var: usize) -> RatFunc {
        assert!(var < self.nvars(), "variable index out of range");
        let n = self.nvars();
        let moving: Vec<(&MPoly, u32, MPoly)> = self
            .den
            .iter()
            .filter_map(|(p, &e)| {
                let dp = p.derivative(var);
                (!dp.is_zero()).then_some((p, e, dp))
            })
            .collect();
        let dnum = self.num.derivative(var);
        if moving.is_empty() {
            let mut r = RatFunc {
                num: dnum,
                den: self.den.clone(),
            };
            r.cancel();
            return r;
        }
        // (n / prod p^e)' = (n' * P - n * sum_p e_p p' P/p) / (D * P), P = prod of moving p
        let all: MPoly = moving.iter().fold(MPoly::one(n), |a, (p, _, _)| a.mul(p));
        let mut num = dnum.mul(&all);
        for (i, (_, e, dp)) in moving.iter().enumerate() {
            let others = moving
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(MPoly::one(n), |a, (_, (q, _, _))| a.mul(q));
            let t = self
                .num
                .mul(dp)
                .mul(&others)
                .scale(&Rat::from_int(*e as i64));
            num = num.sub(&t);
        }
        let mut den = self.den.clone();
        for (p, _, _) in &moving {
            *den.get_mut(*p).unwrap() += 1;
        }
        let mut r = RatFunc { num, den };
        r.cancel();
        r
    }

    /// Brings `self` and `other` over a common factored denominator and
    /// returns `(a, b, common)` with `self = a / common`, `other = b / common`.
    pub fn common_denominator(&self, other: &RatFunc) -> (MPoly, MPoly, MPoly) {
        let n = self.nvars();
        let l = lcm(&self.den, &other.den);
        (
            self.num.mul(&cofactor(n, &l, &self.den)),
            other.num.mul(&cofactor(n, &l, &other.den)),
            expand(n, &l),
        )
    }

    /// `num / common^k`, where `common` is the factored denominator used by
    /// [`RatFunc::common_denominator`] for `a` and `b`.
    pub(crate) fn over_common_power(a: &RatFunc, b: &RatFunc, num: MPoly, k: u32) -> RatFunc {
        let den = lcm(&a.den, &b.den)
            .into_iter()
            .map(|(p, e)| (p, e * k))
            .collect();
        let mut r = RatFunc { num, den };
        r.cancel();
        r
    }

    /// Exact equality by cross-multiplication over a shared denominator.
    pub fn equals(&self, other: &RatFunc) -> bool {
        if self.nvars() != other.nvars() {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        let n = self.nvars();
        let l = lcm(&self.den, &other.den);
        self.num.mul(&cofactor(n, &l, &self.den)) == other.num.mul(&cofactor(n, &l, &other.den))
    }

    pub fn remap(&self, new_nvars: usize, mapping: &[usize]) -> RatFunc {
        let num = self.num.remap(new_nvars, mapping);
        let mut r = RatFunc::from_poly(num);
        for (p, &e) in &self.den {
            r.push_factor(p.remap(new_nvars, mapping), e);
        }
        r.cancel();
        r
    }

    /// Evaluates at a rational point; `None` if the denominator vanishes.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.iter().try_fold(Rat::one(), |acc, (p, &e)| {
            let v = p.eval(point);
            if v.is_zero() {
                None
            } else {
                Some(&acc * &v.pow(e as i32).unwrap())
            }
        })?;
        Some(&self.num.eval(point) / &d)
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        let n = self.num.display_with(names);
        if self.den.is_empty() {
            return n;
        }
        let d: Vec<String> = self
            .den
            .iter()
            .map(|(p, &e)| {
                let s = p.display_with(names);
                let s = if p.num_terms() > 1 {
                    format!("({s})")
                } else {
                    s
                };
                if e > 1 {
                    format!("{s}^{e}")
                } else {
                    s
                }
            })
            .collect();
        let n = if self.num.num_terms() > 1 {
            format!("({n})")
        } else {
            n
        };
        format!("{n}/({})", d.join("*"))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
