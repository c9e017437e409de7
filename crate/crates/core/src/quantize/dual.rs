//! First-order deformation: pairs `body + ε soul` with `ε² = 0` and the
//! product `f · g = fg + ε{f, g}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Rat, RatFunc};
use crate::perm::Permutations;
use crate::poisson::{classical_hamiltonians, on_leg, poisson_bracket, PoissonElem};
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq)]
pub struct DualNum {
    pub body: PoissonElem,
    pub soul: PoissonElem,
}

impl DualNum {
    pub fn new(body: PoissonElem, soul: PoissonElem) -> Self {
        assert_eq!(
            body.legs(),
            soul.legs(),
            "body and soul on different phase spaces"
        );
        DualNum { body, soul }
    }

    /// `body + ε·0`.
    pub fn lift(body: PoissonElem) -> Self {
        let soul = PoissonElem::constant(body.legs(), Rat::zero());
        DualNum { body, soul }
    }

    pub fn one(n: usize) -> Self {
        Self::lift(PoissonElem::constant(n, Rat::one()))
    }

    pub fn add(&self, other: &Self) -> Self {
        DualNum::new(self.body.add(&other.body), self.soul.add(&other.soul))
    }

    pub fn sub(&self, other: &Self) -> Self {
        DualNum::new(self.body.sub(&other.body), self.soul.sub(&other.soul))
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero() && self.soul.is_zero()
    }
}

impl fmt::Display for DualNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ε·({})", self.body, self.soul)
    }
}

/// body `ab`, soul `a·b′ + a′·b + {a, b}`.
pub fn dual_mul(a: &DualNum, b: &DualNum) -> DualNum {
    let body = a.body.mul(&b.body);
    let soul = a
        .body
        .mul(&b.soul)
        .add(&a.soul.mul(&b.body))
        .add(&poisson_bracket(&a.body, &b.body));
    DualNum::new(body, soul)
}

/// body `1/a`, soul `−a′/a²`.
pub fn dual_inverse(a: &DualNum) -> Result<DualNum> {
    if a.body.is_zero() {
        return Err(Error::ZeroBody);
    }
    let n = a.body.legs();
    let one = PoissonElem::constant(n, Rat::one());
    let inv = one.div(&a.body).ok_or(Error::ZeroBody)?;
    let soul = PoissonElem::constant(n, Rat::zero()).sub(&a.soul.mul(&inv).mul(&inv));
    Ok(DualNum::new(inv, soul))
}

pub fn dual_commutator(a: &DualNum, b: &DualNum) -> DualNum {
    dual_mul(a, b).sub(&dual_mul(b, a))
}

/// Builds `Δ_i` and `H_i = Δ_0⁻¹ Δ_i` inside the dual numbers, with `f_α`
/// placed on disjoint symplectic blocks, and checks:
///
/// - `H_i H_j − H_j H_i = 0` in body and soul;
/// - the bodies equal the classical Hamiltonians;
/// - the soul of the commutator of the lifted classical Hamiltonians is
///   `2{H_i, H_j}`, which vanishes.
pub fn dual_commuting_family(fs: &[RatFunc]) -> Result<Verdict> {
    let classical = classical_hamiltonians(fs)?;
    let n = fs.len() - 1;
    let entries: Vec<Vec<DualNum>> = fs
        .iter()
        .map(|f| {
            (1..=n)
                .map(|j| DualNum::lift(PoissonElem::new(n, on_leg(f, j, n)).expect("2n variables")))
                .collect()
        })
        .collect();
    let delta = |skip: usize| -> DualNum {
        let rows: Vec<&Vec<DualNum>> = entries
            .iter()
            .enumerate()
            .filter(|&(a, _)| a != skip)
            .map(|(_, r)| r)
            .collect();
        let mut acc = DualNum::lift(PoissonElem::constant(n, Rat::zero()));
        for (perm, sign) in Permutations::new(n) {
            let mut t = DualNum::one(n);
            for (leg, &r) in perm.iter().enumerate() {
                t = dual_mul(&t, &rows[r][leg]);
            }
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        acc
    };
    let d0_inv = dual_inverse(&delta(0)).map_err(|_| Error::ZeroDelta0)?;
    let hs: Vec<DualNum> = (1..=n).map(|i| dual_mul(&d0_inv, &delta(i))).collect();

    let mut v = Verdict::default();
    for (i, (h, cl)) in hs.iter().zip(&classical).enumerate() {
        let d = h.body.sub(cl);
        v.record(
            d.is_zero(),
            format!("body(H_{}) = H_{}^cl", i + 1, i + 1),
            || d.to_string(),
        );
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = dual_commutator(&hs[i], &hs[j]);
            v.record(
                c.is_zero(),
                format!(
                    "H_{} H_{} = H_{} H_{} in dual numbers",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                ),
                || c.to_string(),
            );
            let lifted = dual_commutator(
                &DualNum::lift(classical[i].clone()),
                &DualNum::lift(classical[j].clone()),
            );
            let two_bracket = poisson_bracket(&classical[i], &classical[j])
                .mul(&PoissonElem::constant(n, Rat::from_int(2)));
            let d = lifted.soul.sub(&two_bracket);
            v.record(
                d.is_zero() && lifted.body.is_zero(),
                format!(
                    "soul of lifted [H_{}, H_{}] = 2{{H_{}, H_{}}}",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                ),
                || d.to_string(),
            );
            v.record(
                two_bracket.is_zero(),
                format!("{{H_{}, H_{}}} = 0", i + 1, j + 1),
                || two_bracket.to_string(),
            );
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::random_plane_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(n: usize, v: i64) -> PoissonElem {
        PoissonElem::constant(n, Rat::from_int(v))
    }

    #[test]
    fn canonical_pair_products() {
        let x = DualNum::lift(PoissonElem::x(1, 1));
        let xi = DualNum::lift(PoissonElem::xi(1, 1));
        let a = dual_mul(&x, &xi);
        assert_eq!(a.body, PoissonElem::x(1, 1).mul(&PoissonElem::xi(1, 1)));
        assert_eq!(a.soul, c(1, 1));
        let b = dual_mul(&xi, &x);
        assert_eq!(b.soul, c(1, -1));
        assert_eq!(dual_mul(&x, &DualNum::one(1)), x);
    }

    #[test]
    fn inverses() {
        let x = PoissonElem::x(1, 1);
        let xi = PoissonElem::xi(1, 1);
        let inv = dual_inverse(&DualNum::lift(x.clone())).unwrap();
        assert_eq!(inv.body, c(1, 1).div(&x).unwrap());
        assert!(inv.soul.is_zero());
        let a = DualNum::new(x.clone(), xi.clone());
        let inv = dual_inverse(&a).unwrap();
        assert_eq!(inv.soul, c(1, 0).sub(&xi.div(&x.mul(&x)).unwrap()));
        assert_eq!(dual_mul(&a, &inv), DualNum::one(1));
        assert_eq!(dual_mul(&inv, &a), DualNum::one(1));
        assert!(matches!(
            dual_inverse(&DualNum::new(c(1, 0), xi)),
            Err(Error::ZeroBody)
        ));
    }

    #[test]
    fn commutator_soul_is_twice_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = PoissonElem::new(1, random_plane_polynomial(&mut rng, 2, 3)).unwrap();
        let b = PoissonElem::new(1, random_plane_polynomial(&mut rng, 2, 3)).unwrap();
        let comm = dual_commutator(&DualNum::lift(a.clone()), &DualNum::lift(b.clone()));
        assert!(comm.body.is_zero());
        assert_eq!(comm.soul, poisson_bracket(&a, &b).mul(&c(1, 2)));
    }

    #[test]
    fn linear_family() {
        let fs = vec![RatFunc::one(2), RatFunc::var(2, 0), RatFunc::var(2, 1)];
        assert!(dual_commuting_family(&fs).unwrap().passed());
    }

    #[test]
    fn random_quadratic_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let fs: Vec<RatFunc> = (0..3)
            .map(|_| random_plane_polynomial(&mut rng, 2, 5))
            .collect();
        let v = dual_commuting_family(&fs).unwrap();
        assert!(v.passed(), "{v}");
        assert!(v.checked() >= 4);
    }

    #[test]
    fn single_leg_family() {
        let fs = vec![RatFunc::one(2), RatFunc::var(2, 1)];
        let v = dual_commuting_family(&fs).unwrap();
        assert!(v.passed());
    }
}
