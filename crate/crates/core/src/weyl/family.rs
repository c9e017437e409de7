//! Commuting operator families on `(ℙ¹)^N` built from a seed operator `T`
//! and distinct points `P_1..P_N`.
//!
//! Two constructions are provided. [`rational_hamiltonians`] is the closed
//! form
//!
//! ```text
//! H_k = Σ_i [Π_{k′}(z_i − P_{k′}) Π_{i′≠i}(z_{i′} − P_k) / Π_{i′≠i}(z_i − z_{i′})] T_{z_i}
//! ```
//!
//! and [`hamiltonians_from_basis`] is the cofactor form
//! `H_k = Σ_j (−1)^{j+1} (D_{kj} / Φ) T_{z_j}`, where `Φ = det(f_i(z_j))`
//! and `D_{kj}` is the minor omitting row `k` and column `j`.
//!
//! On the basis `f_k = 1/(z − P_k)` the cofactor form equals `c_k` times
//! the closed form, with
//! `c_k = (−1)^{N+k} / Π_{k′≠k}(P_k − P_{k′})` (see
//! [`index_convention_factor`]). Equivalently, the closed form is the
//! cofactor form on the rescaled basis `c_k / (z − P_k)`.

use super::{symbol, RatDiffOp, SymbolPoly};
use crate::error::{Error, Result};
use crate::exact::{MPoly, QMatrix, Rat, RatFunc};
use crate::poisson::{canonical_bracket, classical_hamiltonians};
use crate::verdict::Verdict;

/// Distinct points on the line and a one-variable seed operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OpFamilySpec {
    points: Vec<Rat>,
    t: RatDiffOp,
}

impl OpFamilySpec {
    pub fn new(points: Vec<Rat>, t: RatDiffOp) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("need at least one point".into()));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::InvalidInput(format!("point {} repeated", points[i])));
                }
            }
        }
        if t.nvars() != 1 || t.is_zero() {
            return Err(Error::InvalidInput(
                "T must be a nonzero one-variable operator".into(),
            ));
        }
        Ok(OpFamilySpec { points, t })
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn seed_operator(&self) -> &RatDiffOp {
        &self.t
    }
}

fn linear(n: usize, var: usize, shift: &Rat) -> MPoly {
    MPoly::var(n, var).sub(&MPoly::constant(n, shift.clone()))
}

/// The closed-form family, built term by term from the displayed product.
pub fn rational_hamiltonians(spec: &OpFamilySpec) -> Vec<RatDiffOp> {
    let n = spec.size();
    let p = &spec.points;
    let ts: Vec<RatDiffOp> = (0..n).map(|i| spec.t.in_variable(i, n)).collect();
    (0..n)
        .map(|k| {
            let mut h = RatDiffOp::zero(n);
            for i in 0..n {
                let mut num = MPoly::one(n);
                for pk in p {
                    num = num.mul(&linear(n, i, pk));
                }
                let mut den = MPoly::one(n);
                for i2 in (0..n).filter(|&i2| i2 != i) {
                    num = num.mul(&linear(n, i2, &p[k]));
                    den = den.mul(&MPoly::var(n, i).sub(&MPoly::var(n, i2)));
                }
                h = h.add(&ts[i].left_mul(&RatFunc::new(num, den)));
            }
            h
        })
        .collect()
}

/// `c_k = (−1)^{N+k} / Π_{k′≠k}(P_k − P_{k′})`, with `k` 0-based here and
/// 1-based in the formula.
pub fn index_convention_factor(spec: &OpFamilySpec, k: usize) -> Rat {
    let n = spec.size();
    let p = &spec.points;
    let prod = (0..n)
        .filter(|&k2| k2 != k)
        .fold(Rat::one(), |acc, k2| &acc * &(&p[k] - &p[k2]));
    let c = prod.recip().expect("points are distinct");
    if (n + k + 1).is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// `c_k / (z − P_k)`, the basis on which the cofactor form reproduces the
/// closed form exactly.
pub fn closed_form_basis(spec: &OpFamilySpec) -> Vec<RatFunc> {
    (0..spec.size())
        .map(|k| {
            RatFunc::new(
                MPoly::constant(1, index_convention_factor(spec, k)),
                linear(1, 0, &spec.points[k]),
            )
        })
        .collect()
}

fn minor(rows: &[Vec<RatFunc>], skip_row: usize, skip_col: usize) -> RatFunc {
    let n = rows.len();
    if n == 1 {
        return RatFunc::one(rows[0][0].nvars());
    }
    let kept: Vec<Vec<RatFunc>> = rows
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(c, _)| c != skip_col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect();
    QMatrix::from_rows(kept).leibniz_determinant()
}

/// `H_k = Σ_j (−1)^{j+1} (D_{kj} / Φ) T_{z_j}` for `f_1..f_N` in one
/// variable.
pub fn hamiltonians_from_basis(fs: &[RatFunc], t: &RatDiffOp) -> Result<Vec<RatDiffOp>> {
    let n = fs.len();
    if n == 0 || fs.iter().any(|f| f.nvars() != 1) {
        return Err(Error::InvalidInput(
            "basis functions must be functions of z".into(),
        ));
    }
    if t.nvars() != 1 {
        return Err(Error::InvalidInput(
            "T must be a one-variable operator".into(),
        ));
    }
    let rows: Vec<Vec<RatFunc>> = fs
        .iter()
        .map(|f| (0..n).map(|j| f.remap(n, &[j])).collect())
        .collect();
    let phi = QMatrix::from_rows(rows.clone()).leibniz_determinant();
    if phi.is_zero() {
        return Err(Error::ZeroPhi);
    }
    let ts: Vec<RatDiffOp> = (0..n).map(|j| t.in_variable(j, n)).collect();
    Ok((0..n)
        .map(|k| {
            let mut h = RatDiffOp::zero(n);
            for j in 0..n {
                // j is 0-based: (−1)^{(j+1)+1} = (−1)^j
                let mut c = minor(&rows, k, j).div(&phi).expect("Φ is nonzero");
                if j % 2 == 1 {
                    c = c.neg();
                }
                h = h.add(&ts[j].left_mul(&c));
            }
            h
        })
        .collect())
}

/// Compares the two constructions: the cofactor form on `1/(z − P_k)`
/// equals `c_k H_k`, and on `c_k/(z − P_k)` it equals `H_k`.
pub fn check_construction_agreement(spec: &OpFamilySpec) -> Result<Verdict> {
    let closed = rational_hamiltonians(spec);
    let plain: Vec<RatFunc> = spec
        .points
        .iter()
        .map(|p| RatFunc::new(MPoly::one(1), linear(1, 0, p)))
        .collect();
    let from_plain = hamiltonians_from_basis(&plain, &spec.t)?;
    let from_scaled = hamiltonians_from_basis(&closed_form_basis(spec), &spec.t)?;
    let mut v = Verdict::default();
    for k in 0..spec.size() {
        let c = index_convention_factor(spec, k);
        let d1 = from_plain[k].sub(&closed[k].scale(&c));
        v.record(
            d1.is_zero(),
            format!("basis 1/(z−P) gives c_{} H_{}", k + 1, k + 1),
            || d1.to_text(),
        );
        let d2 = from_scaled[k].sub(&closed[k]);
        v.record(
            d2.is_zero(),
            format!("basis c/(z−P) gives H_{}", k + 1),
            || d2.to_text(),
        );
    }
    Ok(v)
}

/// `f_0 = 1` and `f_k = c_k / ((x − P_k) t(x) ξ^d)` on the plane, where
/// `t ∂^d` is the top-order term of `T`.
pub fn classical_family(spec: &OpFamilySpec) -> Vec<RatFunc> {
    let d = spec.t.order().expect("T is nonzero") as u16;
    let t_top = spec.t.coeff(&[d]).remap(2, &[0]);
    let xi_d = RatFunc::from_poly(MPoly::from_terms(2, [(Rat::one(), vec![0, d])]));
    let base = t_top.mul(&xi_d);
    std::iter::once(RatFunc::one(2))
        .chain((0..spec.size()).map(|k| {
            let shift = RatFunc::from_poly(linear(2, 0, &spec.points[k]));
            RatFunc::constant(2, index_convention_factor(spec, k))
                .div(&shift.mul(&base))
                .expect("nonzero")
        }))
        .collect()
}

/// Matches `symbol(H_k)` against the classical determinant Hamiltonians of
/// [`classical_family`], one `ξ`-monomial at a time, and checks that the
/// symbols Poisson-commute.
pub fn check_symbol_matches_classical(hs: &[RatDiffOp], spec: &OpFamilySpec) -> Result<Verdict> {
    let classical = classical_hamiltonians(&classical_family(spec))?;
    let mut v = Verdict::default();
    let mut phase = Vec::with_capacity(hs.len());
    for (k, (h, cl)) in hs.iter().zip(&classical).enumerate() {
        let s = symbol(h)?;
        phase.push(s.to_phase_space());
        let Some(cl) = SymbolPoly::from_phase_space(cl.value()) else {
            v.record(
                false,
                format!("classical H_{} is polynomial in ξ", k + 1),
                || cl.to_string(),
            );
            continue;
        };
        let keys: std::collections::BTreeSet<_> = s
            .coeffs()
            .keys()
            .chain(cl.coeffs().keys())
            .cloned()
            .collect();
        for alpha in keys {
            let zero = RatFunc::zero(spec.size());
            let a = s.coeffs().get(&alpha).unwrap_or(&zero);
            let b = cl.coeffs().get(&alpha).unwrap_or(&zero);
            v.record(
                a == b,
                format!("symbol(H_{}) coefficient of ξ^{alpha:?}", k + 1),
                || format!("operator {a} vs classical {b}"),
            );
        }
    }
    for k in 0..phase.len() {
        for l in k + 1..phase.len() {
            let b = canonical_bracket(&phase[k], &phase[l]);
            v.record(
                b.is_zero(),
                format!("{{σ(H_{}), σ(H_{})}} = 0", k + 1, l + 1),
                || b.to_string(),
            );
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::check_operators_commute;

    fn pts(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_int(x)).collect()
    }

    fn rf(n: usize, num: &str, den: &str) -> RatFunc {
        RatFunc::new(
            MPoly::from_sparse_text(n, num).unwrap(),
            MPoly::from_sparse_text(n, den).unwrap(),
        )
    }

    #[test]
    fn one_point() {
        let t = RatDiffOp::parse_one_var("z*d2 + d1").unwrap();
        let spec = OpFamilySpec::new(pts(&[3]), t.clone()).unwrap();
        let h = rational_hamiltonians(&spec);
        assert_eq!(h[0], t.left_mul(&rf(1, "1:1 -3:0", "1:0")));
        let s = symbol(&h[0]).unwrap();
        assert_eq!(s.coeffs()[&vec![2]], rf(1, "1:2 -3:1", "1:0"));
        assert!(check_construction_agreement(&spec).unwrap().passed());
        assert!(check_symbol_matches_classical(&h, &spec).unwrap().passed());
    }

    #[test]
    fn two_points_first_order() {
        // P = (0, 1), T = ∂
        let spec =
            OpFamilySpec::new(pts(&[0, 1]), RatDiffOp::parse_one_var("d1").unwrap()).unwrap();
        let h = rational_hamiltonians(&spec);
        let h1 = RatDiffOp::from_terms(
            2,
            [
                (vec![1, 0], rf(2, "1:2,1 -1:1,1", "1:1,0 -1:0,1")),
                (vec![0, 1], rf(2, "1:1,2 -1:1,1", "1:0,1 -1:1,0")),
            ],
        );
        let h2 = RatDiffOp::from_terms(
            2,
            [
                (
                    vec![1, 0],
                    rf(2, "1:2,1 -1:2,0 -1:1,1 1:1,0", "1:1,0 -1:0,1"),
                ),
                (
                    vec![0, 1],
                    rf(2, "1:1,2 -1:0,2 -1:1,1 1:0,1", "1:0,1 -1:1,0"),
                ),
            ],
        );
        assert_eq!(h[0], h1);
        assert_eq!(h[1], h2);
        assert!(check_operators_commute(&h).passed());
        assert!(check_construction_agreement(&spec).unwrap().passed());
        let v = check_symbol_matches_classical(&h, &spec).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn convention_factor_two_points() {
        let spec =
            OpFamilySpec::new(pts(&[0, 1]), RatDiffOp::parse_one_var("d1").unwrap()).unwrap();
        // −1/(P_1 − P_2) for both k
        assert_eq!(index_convention_factor(&spec, 0), Rat::one());
        assert_eq!(index_convention_factor(&spec, 1), Rat::one());
        let spec =
            OpFamilySpec::new(pts(&[2, 5]), RatDiffOp::parse_one_var("d1").unwrap()).unwrap();
        assert_eq!(index_convention_factor(&spec, 0), Rat::new(1, 3));
        assert_eq!(index_convention_factor(&spec, 1), Rat::new(1, 3));
    }

    #[test]
    fn three_points_second_order() {
        let spec =
            OpFamilySpec::new(pts(&[-1, 2, 4]), RatDiffOp::parse_one_var("d2").unwrap()).unwrap();
        let h = rational_hamiltonians(&spec);
        assert!(check_operators_commute(&h).passed());
        assert!(check_construction_agreement(&spec).unwrap().passed());
        assert!(check_symbol_matches_classical(&h, &spec).unwrap().passed());
    }

    #[test]
    fn repeated_basis_function() {
        let f = rf(1, "1:0", "1:1 -2:0");
        let t = RatDiffOp::parse_one_var("d1").unwrap();
        assert!(matches!(
            hamiltonians_from_basis(&[f.clone(), f], &t),
            Err(Error::ZeroPhi)
        ));
    }

    #[test]
    fn repeated_points_rejected() {
        assert!(OpFamilySpec::new(pts(&[1, 1]), RatDiffOp::parse_one_var("d1").unwrap()).is_err());
    }
}
