//! Rational differentials `f(z)(dz)^i` on the projective line and the
//! bracket `{ω, ω′} = i ω ∇^α(ω′) − i′ ω′ ∇^α(ω)`.
//!
//! With `α = a dz` and `ω = f (dz)^i`, `∇^α(ω) = a^i (f / a^i)′ (dz)^{i+1}`,
//! and the bracket reduces to `(i f g′ − i′ f′ g)(dz)^{i+i′+1}`, which does
//! not involve `a`.

use std::fmt;

use super::{canonical_bracket, PoissonElem};
use crate::error::{Error, Result};
use crate::exact::{MPoly, RatFunc};
use crate::verdict::Verdict;

/// Sign `s` with `{F(ω), F(ω′)} = s · F({ω, ω′})`, where
/// `F(f (dz)^i) = f(x) ξ^{−i}` and `{x, ξ} = 1`.
pub const CONE_SIGN: i64 = 1;

/// `f(z) (dz)^weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeDifferential {
    pub f: RatFunc,
    pub weight: i32,
}

impl ConeDifferential {
    pub fn new(f: RatFunc, weight: i32) -> Result<Self> {
        if f.nvars() != 1 {
            return Err(Error::Shape(
                "differentials are functions of z alone".into(),
            ));
        }
        Ok(ConeDifferential { f, weight })
    }

    /// `dz`.
    pub fn dz() -> Self {
        ConeDifferential {
            f: RatFunc::one(1),
            weight: 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    fn combine(&self, other: &Self, sub: bool) -> Self {
        assert_eq!(
            self.weight, other.weight,
            "adding differentials of different weight"
        );
        let f = if sub {
            self.f.sub(&other.f)
        } else {
            self.f.add(&other.f)
        };
        ConeDifferential {
            f,
            weight: self.weight,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    /// `f(x) ξ^{−i}` on the symplectic plane.
    pub fn to_symplectic(&self) -> PoissonElem {
        let fx = self.f.remap(2, &[0]);
        let xi = RatFunc::var(2, 1);
        let pow = xi.pow(-self.weight).expect("ξ is nonzero");
        PoissonElem::new(1, fx.mul(&pow)).expect("two variables")
    }
}

impl fmt::Display for ConeDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·(dz)^{}", self.f.display_with(&["z"]), self.weight)
    }
}

/// `∇^α(ω) = a^i (f / a^i)′ (dz)^{i+1}` for `α = a dz`.
pub fn nabla(alpha: &ConeDifferential, omega: &ConeDifferential) -> Result<ConeDifferential> {
    if alpha.weight != 1 {
        return Err(Error::InvalidInput(format!(
            "α must have weight 1, got {}",
            alpha.weight
        )));
    }
    if alpha.f.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    let ai = alpha.f.pow(omega.weight).ok_or(Error::ZeroAlpha)?;
    let quotient = omega.f.div(&ai).ok_or(Error::ZeroAlpha)?;
    let f = ai.mul(&quotient.partial_derivative(0));
    Ok(ConeDifferential {
        f,
        weight: omega.weight + 1,
    })
}

/// `{ω, ω′} = i ω ∇^α(ω′) − i′ ω′ ∇^α(ω)`.
pub fn cone_bracket(
    omega: &ConeDifferential,
    omega2: &ConeDifferential,
    alpha: &ConeDifferential,
) -> Result<ConeDifferential> {
    let (i, i2) = (omega.weight, omega2.weight);
    let n2 = nabla(alpha, omega2)?;
    let n1 = nabla(alpha, omega)?;
    let a = omega.f.mul(&n2.f).scale(&(i as i64).into());
    let b = omega2.f.mul(&n1.f).scale(&(i2 as i64).into());
    Ok(ConeDifferential {
        f: a.sub(&b),
        weight: i + i2 + 1,
    })
}

/// `{ω, ω′} + {ω′, ω} = 0`.
pub fn check_cone_antisymmetry(
    omega: &ConeDifferential,
    omega2: &ConeDifferential,
    alpha: &ConeDifferential,
) -> Result<Verdict> {
    let s = cone_bracket(omega, omega2, alpha)?.add(&cone_bracket(omega2, omega, alpha)?);
    let mut v = Verdict::default();
    v.record(s.is_zero(), "{ω, ω′} + {ω′, ω} = 0", || {
        s.to_string()
    });
    Ok(v)
}

/// `{ω_1, {ω_2, ω_3}} + cyclic = 0`.
pub fn check_cone_jacobi(ws: [&ConeDifferential; 3], alpha: &ConeDifferential) -> Result<Verdict> {
    let term = |a: &ConeDifferential, b: &ConeDifferential, c: &ConeDifferential| {
        cone_bracket(a, &cone_bracket(b, c, alpha)?, alpha)
    };
    let [a, b, c] = ws;
    let s = term(a, b, c)?.add(&term(b, c, a)?).add(&term(c, a, b)?);
    let mut v = Verdict::default();
    v.record(
        s.is_zero(),
        "cyclic sum of nested cone brackets = 0",
        || s.to_string(),
    );
    Ok(v)
}

/// Compares the cone bracket with the canonical bracket of the images
/// `f(x) ξ^{−i}`, up to [`CONE_SIGN`].
pub fn check_symplectic_correspondence(
    omega: &ConeDifferential,
    omega2: &ConeDifferential,
    alpha: &ConeDifferential,
) -> Result<Verdict> {
    let cone = cone_bracket(omega, omega2, alpha)?.to_symplectic();
    let canon = canonical_bracket(
        omega.to_symplectic().value(),
        omega2.to_symplectic().value(),
    );
    let diff = canon.sub(&cone.value().scale(&CONE_SIGN.into()));
    let mut v = Verdict::default();
    v.record(
        diff.is_zero(),
        "canonical bracket of images = image of cone bracket",
        || diff.to_string(),
    );
    Ok(v)
}

/// Parses a one-variable rational function written `num/den` in sparse
/// text, e.g. `1:2 -1:0/1:1`.
pub fn parse_z_function(s: &str) -> std::result::Result<RatFunc, String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1:0"));
    let num = MPoly::from_sparse_text(1, n)?;
    let den = MPoly::from_sparse_text(1, d)?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(RatFunc::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rat;

    fn z() -> RatFunc {
        RatFunc::var(1, 0)
    }

    fn w(f: RatFunc, i: i32) -> ConeDifferential {
        ConeDifferential::new(f, i).unwrap()
    }

    #[test]
    fn nabla_with_dz_is_derivative() {
        let omega = w(z(), 1);
        let r = nabla(&ConeDifferential::dz(), &omega).unwrap();
        assert_eq!(r, w(RatFunc::one(1), 2));
        let f = parse_z_function("1:2 3:0/1:1 -2:0").unwrap();
        let r = nabla(&ConeDifferential::dz(), &w(f.clone(), 3)).unwrap();
        assert_eq!(r, w(f.partial_derivative(0), 4));
    }

    #[test]
    fn nabla_depends_on_alpha() {
        // z·(z/z)′ = 0
        let r = nabla(&w(z(), 1), &w(z(), 1)).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.weight, 2);
    }

    #[test]
    fn bracket_example_is_alpha_free() {
        let want = w(RatFunc::constant(1, Rat::from_int(-1)), 3);
        let b1 =
            cone_bracket(&w(z(), 1), &ConeDifferential::dz(), &ConeDifferential::dz()).unwrap();
        let b2 = cone_bracket(&w(z(), 1), &ConeDifferential::dz(), &w(z(), 1)).unwrap();
        assert_eq!(b1, want);
        assert_eq!(b2, want);
    }

    #[test]
    fn self_bracket_vanishes() {
        let f = parse_z_function("2:3 -1:0/1:1 1:0").unwrap();
        let b = cone_bracket(&w(f.clone(), 2), &w(f, 2), &w(z(), 1)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn zero_alpha_rejected() {
        assert!(matches!(
            nabla(&w(RatFunc::zero(1), 1), &w(z(), 1)),
            Err(Error::ZeroAlpha)
        ));
        assert!(nabla(&w(z(), 2), &w(z(), 1)).is_err());
    }

    #[test]
    fn correspondence_and_laws() {
        let f = parse_z_function("1:2 1:0/1:1 -3:0").unwrap();
        let g = parse_z_function("-2:1 5:0").unwrap();
        let h = parse_z_function("1:0/1:2 1:0").unwrap();
        let (a, b, c) = (w(f, 2), w(g, -1), w(h, 0));
        let alpha = w(parse_z_function("1:1 1:0").unwrap(), 1);
        assert!(check_symplectic_correspondence(&a, &b, &alpha)
            .unwrap()
            .passed());
        assert!(check_cone_antisymmetry(&a, &b, &alpha).unwrap().passed());
        assert!(check_cone_jacobi([&a, &b, &c], &alpha).unwrap().passed());
    }
}
