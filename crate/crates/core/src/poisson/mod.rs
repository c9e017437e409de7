//! Canonical Poisson brackets on rational functions of symplectic powers of
//! the plane, and the classical determinant Hamiltonians.
//!
//! Variables are ordered `(x_1, ξ_1, …, x_n, ξ_n)`, so `x_j` is variable
//! `2(j−1)` and `ξ_j` is `2(j−1)+1`. The bracket is normalized by
//! `{x_j, ξ_j} = 1`:
//!
//! ```text
//! {f, g} = Σ_j ∂f/∂x_j · ∂g/∂ξ_j − ∂f/∂ξ_j · ∂g/∂x_j
//! ```

mod cone;
mod grassmann;
mod hyperplane;

use std::fmt;

use rand::Rng;

pub use cone::{
    check_cone_antisymmetry, check_cone_jacobi, check_symplectic_correspondence, cone_bracket,
    nabla, parse_z_function, ConeDifferential, CONE_SIGN,
};
pub use grassmann::{check_grassmann, grassmann_expression, WedgeForm};
pub use hyperplane::{check_hyperplane_incidence, hyperplane_coefficients};

use crate::error::{Error, Result};
use crate::exact::{MPoly, QMatrix, Rat, RatFunc};
use crate::verdict::Verdict;

/// A rational function on the `n`-th symplectic power of the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonElem {
    n: usize,
    value: RatFunc,
}

impl PoissonElem {
    pub fn new(n: usize, value: RatFunc) -> Result<Self> {
        if value.nvars() != 2 * n {
            return Err(Error::Shape(format!(
                "expected {} variables, got {}",
                2 * n,
                value.nvars()
            )));
        }
        Ok(PoissonElem { n, value })
    }

    /// `x_j`, 1-based.
    pub fn x(n: usize, j: usize) -> Self {
        PoissonElem {
            n,
            value: RatFunc::var(2 * n, 2 * (j - 1)),
        }
    }

    /// `ξ_j`, 1-based.
    pub fn xi(n: usize, j: usize) -> Self {
        PoissonElem {
            n,
            value: RatFunc::var(2 * n, 2 * (j - 1) + 1),
        }
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        PoissonElem {
            n,
            value: RatFunc::constant(2 * n, c),
        }
    }

    pub fn legs(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> &RatFunc {
        &self.value
    }

    pub fn into_value(self) -> RatFunc {
        self.value
    }

    fn wrap(&self, value: RatFunc) -> Self {
        PoissonElem { n: self.n, value }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.wrap(self.value.add(&other.value))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.wrap(self.value.sub(&other.value))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.wrap(self.value.mul(&other.value))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        self.value.div(&other.value).map(|v| self.wrap(v))
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn bracket(&self, other: &Self) -> Self {
        poisson_bracket(self, other)
    }
}

impl fmt::Display for PoissonElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = symplectic_names(self.n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.value.display_with(&refs))
    }
}

/// `x1, ξ1, x2, ξ2, …`
pub fn symplectic_names(n: usize) -> Vec<String> {
    (1..=n)
        .flat_map(|j| [format!("x{j}"), format!("ξ{j}")])
        .collect()
}

fn poly_bracket(a: &MPoly, b: &MPoly) -> MPoly {
    let mut acc = MPoly::zero(a.nvars());
    if a.is_constant() || b.is_constant() {
        return acc;
    }
    for j in 0..a.nvars() / 2 {
        let (x, xi) = (2 * j, 2 * j + 1);
        let t = a.derivative(x).mul(&b.derivative(xi));
        let u = a.derivative(xi).mul(&b.derivative(x));
        acc = acc.add(&t.sub(&u));
    }
    acc
}

/// The canonical bracket of two rational functions in an even number of
/// variables.
///
/// Both arguments are put over a common denominator `L`, and
/// `{a/L, b/L} = ({a,b}L − a{L,b} − b{a,L}) / L³`.
pub fn canonical_bracket(f: &RatFunc, g: &RatFunc) -> RatFunc {
    assert_eq!(f.nvars(), g.nvars(), "variable count mismatch");
    assert!(
        f.nvars().is_multiple_of(2),
        "symplectic variables come in pairs"
    );
    let (a, b, l) = f.common_denominator(g);
    if l.is_constant() {
        let c = l.as_constant().unwrap();
        let num = poly_bracket(&a, &b);
        return RatFunc::from_poly(num.scale(&(&c * &c).recip().unwrap()));
    }
    let num = poly_bracket(&a, &b)
        .mul(&l)
        .sub(&a.mul(&poly_bracket(&l, &b)))
        .sub(&b.mul(&poly_bracket(&a, &l)));
    RatFunc::over_common_power(f, g, num, 3)
}

pub fn poisson_bracket(f: &PoissonElem, g: &PoissonElem) -> PoissonElem {
    assert_eq!(
        f.n, g.n,
        "bracket of elements on different symplectic powers"
    );
    f.wrap(canonical_bracket(&f.value, &g.value))
}

/// Places a function of `(x, ξ)` on leg `j` (1-based) of the `n`-th power.
pub fn on_leg(f: &RatFunc, j: usize, n: usize) -> RatFunc {
    assert_eq!(f.nvars(), 2, "leg functions live on the plane");
    f.remap(2 * n, &[2 * (j - 1), 2 * (j - 1) + 1])
}

/// Whether `fs` are linearly independent over ℚ, decided by the rank of
/// their coefficient vectors after clearing a common denominator.
pub fn linearly_independent(fs: &[RatFunc]) -> bool {
    let Some(first) = fs.first() else {
        return true;
    };
    let nv = first.nvars();
    let common = fs.iter().fold(MPoly::one(nv), |acc, f| acc.mul(&f.den()));
    let polys: Vec<MPoly> = fs
        .iter()
        .map(|f| {
            f.mul_poly(&common)
                .as_polynomial()
                .cloned()
                .expect("common denominator clears every fraction")
        })
        .collect();
    let mut monos: Vec<_> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    if monos.len() < fs.len() {
        return false;
    }
    let rows: Vec<Vec<Rat>> = polys
        .iter()
        .map(|p| monos.iter().map(|m| p.coeff(m)).collect())
        .collect();
    QMatrix::from_rows(rows).rank() == fs.len()
}

/// `Δ_i^cl`: the determinant with entries `f_α` on leg `j`, rows
/// `α ∈ {0..n}∖{i}`.
pub fn classical_deltas(fs: &[RatFunc]) -> Result<Vec<RatFunc>> {
    if fs.len() < 2 {
        return Err(Error::InvalidInput("need at least f_0 and f_1".into()));
    }
    if fs.iter().any(|f| f.nvars() != 2) {
        return Err(Error::Shape("each f_i must be a function of (x, ξ)".into()));
    }
    let n = fs.len() - 1;
    let placed: Vec<Vec<RatFunc>> = fs
        .iter()
        .map(|f| (1..=n).map(|j| on_leg(f, j, n)).collect())
        .collect();
    Ok((0..=n)
        .map(|i| {
            let rows: Vec<Vec<RatFunc>> = placed
                .iter()
                .enumerate()
                .filter(|&(a, _)| a != i)
                .map(|(_, r)| r.clone())
                .collect();
            QMatrix::from_rows(rows).leibniz_determinant()
        })
        .collect())
}

/// `H_i^cl = Δ_i^cl / Δ_0^cl` for `i = 1..n`.
pub fn classical_hamiltonians(fs: &[RatFunc]) -> Result<Vec<PoissonElem>> {
    if fs.len() >= 2 && fs.iter().all(|f| f.nvars() == 2) && !linearly_independent(fs) {
        return Err(Error::DependentFamily);
    }
    let deltas = classical_deltas(fs)?;
    let n = fs.len() - 1;
    if deltas[0].is_zero() {
        return Err(Error::ZeroDelta0);
    }
    deltas[1..]
        .iter()
        .map(|d| PoissonElem::new(n, d.div(&deltas[0]).expect("Δ_0 is nonzero")))
        .collect()
}

/// A polynomial in `(x, ξ)` of total degree at most `degree` with integer
/// coefficients in `[-bound, bound]`.
pub fn random_plane_polynomial<R: Rng + ?Sized>(rng: &mut R, degree: u16, bound: i64) -> RatFunc {
    let mut terms = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            terms.push((Rat::from_int(rng.gen_range(-bound..=bound)), vec![a, b]));
        }
    }
    RatFunc::from_poly(MPoly::from_terms(2, terms))
}

/// `{H_i, H_j} = 0` for every pair.
pub fn check_poisson_commute(hs: &[PoissonElem]) -> Verdict {
    let mut v = Verdict::default();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let b = poisson_bracket(&hs[i], &hs[j]);
            v.record(
                b.is_zero(),
                format!("{{H_{}, H_{}}} = 0", i + 1, j + 1),
                || b.to_string(),
            );
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(nv: usize, num: &str, den: &str) -> RatFunc {
        RatFunc::new(
            MPoly::from_sparse_text(nv, num).unwrap(),
            MPoly::from_sparse_text(nv, den).unwrap(),
        )
    }

    /// Bracket through quotient-rule partial derivatives, independent of the
    /// common-denominator formula.
    fn naive_bracket(f: &RatFunc, g: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero(f.nvars());
        for j in 0..f.nvars() / 2 {
            let t = f
                .partial_derivative(2 * j)
                .mul(&g.partial_derivative(2 * j + 1));
            let u = f
                .partial_derivative(2 * j + 1)
                .mul(&g.partial_derivative(2 * j));
            acc = acc.add(&t.sub(&u));
        }
        acc
    }

    #[test]
    fn canonical_pairs() {
        let n = 2;
        assert_eq!(
            poisson_bracket(&PoissonElem::x(n, 1), &PoissonElem::xi(n, 1)).value(),
            &RatFunc::one(4)
        );
        assert!(poisson_bracket(&PoissonElem::x(n, 1), &PoissonElem::x(n, 2)).is_zero());
        assert!(poisson_bracket(&PoissonElem::x(n, 1), &PoissonElem::xi(n, 2)).is_zero());
        let f = PoissonElem::x(n, 1).mul(&PoissonElem::xi(n, 2));
        assert!(poisson_bracket(&f, &f).is_zero());
    }

    #[test]
    fn reciprocal_rule() {
        let inv = PoissonElem::constant(1, Rat::one())
            .div(&PoissonElem::x(1, 1))
            .unwrap();
        let b = poisson_bracket(&inv, &PoissonElem::xi(1, 1));
        assert_eq!(b.value(), &rf(2, "-1:0,0", "1:2,0"));
    }

    #[test]
    fn matches_naive_bracket() {
        let f = rf(4, "1:1,1,0,0 -2:0,0,2,0 3:0,0,0,0", "1:1,0,0,0 1:0,0,0,1");
        let g = rf(4, "1:0,1,1,0 1:0,2,0,0", "1:0,0,1,0 -1:0,1,0,0 2:0,0,0,0");
        assert_eq!(canonical_bracket(&f, &g), naive_bracket(&f, &g));
        let p = rf(4, "1:2,1,0,1", "1:0,0,0,0");
        assert_eq!(canonical_bracket(&f, &p), naive_bracket(&f, &p));
    }

    #[test]
    fn linear_example() {
        // f_0 = 1, f_1 = x, f_2 = ξ
        let fs = vec![RatFunc::one(2), RatFunc::var(2, 0), RatFunc::var(2, 1)];
        let deltas = classical_deltas(&fs).unwrap();
        assert_eq!(deltas[0], rf(4, "1:1,0,0,1 -1:0,1,1,0", "1:0,0,0,0"));
        let hs = classical_hamiltonians(&fs).unwrap();
        assert_eq!(
            hs[0].value(),
            &rf(4, "1:0,0,0,1 -1:0,1,0,0", "1:1,0,0,1 -1:0,1,1,0")
        );
        assert_eq!(
            hs[1].value(),
            &rf(4, "1:0,0,1,0 -1:1,0,0,0", "1:1,0,0,1 -1:0,1,1,0")
        );
        assert!(check_poisson_commute(&hs).passed());
    }

    #[test]
    fn quadratic_in_x_example() {
        // f_0 = 1, f_1 = x, f_2 = x²: Δ_0 = x_1 x_2 (x_2 − x_1)
        let x = RatFunc::var(2, 0);
        let fs = vec![RatFunc::one(2), x.clone(), x.mul(&x)];
        let deltas = classical_deltas(&fs).unwrap();
        assert_eq!(deltas[0], rf(4, "1:1,0,2,0 -1:2,0,1,0", "1:0,0,0,0"));
        let hs = classical_hamiltonians(&fs).unwrap();
        assert!(check_poisson_commute(&hs).passed());
    }

    #[test]
    fn dependent_family_rejected() {
        let x = RatFunc::var(2, 0);
        let fs = vec![RatFunc::one(2), x.clone(), x.clone()];
        assert!(matches!(
            classical_hamiltonians(&fs),
            Err(Error::DependentFamily)
        ));
        let half = rf(2, "1:0,0", "2:1,0");
        let fs = vec![RatFunc::one(2), rf(2, "1:0,0", "1:1,0"), half];
        assert!(!linearly_independent(&fs));
    }

    #[test]
    fn random_quadratic_families_commute() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for n in 2..=3 {
            let fs: Vec<RatFunc> = (0..=n)
                .map(|_| random_plane_polynomial(&mut rng, 2, 5))
                .collect();
            let hs = classical_hamiltonians(&fs).unwrap();
            assert!(check_poisson_commute(&hs).passed());
        }
    }

    #[test]
    fn lagrangian_functions_commute() {
        let n = 2;
        let a = PoissonElem::x(n, 1).mul(&PoissonElem::x(n, 2));
        let b = PoissonElem::x(n, 2).add(&PoissonElem::constant(n, Rat::from_int(4)));
        assert!(check_poisson_commute(&[a, b]).passed());
        let v = check_poisson_commute(&[PoissonElem::x(1, 1), PoissonElem::xi(1, 1)]);
        assert!(!v.passed());
        assert_eq!(v.failures().next().unwrap().witness.as_deref(), Some("1"));
    }
}
