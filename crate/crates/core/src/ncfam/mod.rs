//! Commuting families in `M_d(ℚ)^{⊗n}` built from antisymmetrized leg
//! placements.
//!
//! A [`LegFamily`] is an `(n+1) × n` array of `d × d` matrices `f_{i,j}`
//! (row `i ∈ 0..=n`, leg `j ∈ 1..=n`). For row set `I` and leg set `J` of
//! equal size,
//!
//! ```text
//! Δ_{I,J} = Σ_{σ: I → J} ε(σ) Π_{i ∈ I} f_{i,σ(i)}^{(σ(i))}
//! ```
//!
//! where `ε` is the sign of `σ` read against the increasing enumerations of
//! `I` and `J`. The Hamiltonians are `H_i = Δ_0⁻¹ Δ_i` with
//! `Δ_i = Δ_{{0..n}∖{i}, {1..n}}`; they commute pairwise.
//!
//! In this matrix realization a bracket `[f_1..f_n]` with `n ≥ 2` is never
//! invertible: conjugating by a transposition of legs negates it, so it
//! exchanges the trivial and sign isotypic parts of `(ℚ^d)^{⊗n}`, which have
//! different dimensions. Leg-uniform families therefore always report
//! [`Error::ZeroDelta0`], and the inverse-sum checks report
//! [`Error::Singular`]; families whose entries vary with the leg do not have
//! this obstruction.

mod tensor;

use rand::Rng;

pub use tensor::{bracket, leg_embed, leg_swap, place, TensorElem, MAX_LEGS};

use crate::error::{Error, Result};
use crate::exact::{QMatrix, Rat};
use crate::perm::Permutations;
use crate::verdict::Verdict;

/// An `(n+1) × n` array of `d × d` rational matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct LegFamily {
    n: usize,
    d: usize,
    entries: Vec<Vec<QMatrix<Rat>>>,
}

impl LegFamily {
    /// `entries[i][j-1]` is `f_{i,j}`.
    pub fn new(entries: Vec<Vec<QMatrix<Rat>>>) -> Result<Self> {
        let rows = entries.len();
        if rows < 2 {
            return Err(Error::InvalidInput(
                "a family needs at least two rows".into(),
            ));
        }
        let n = rows - 1;
        if n > MAX_LEGS {
            return Err(Error::InvalidInput(format!(
                "at most {MAX_LEGS} legs supported"
            )));
        }
        let d = entries[0].first().map_or(0, QMatrix::rows);
        if d == 0 {
            return Err(Error::Shape("empty leg entry".into()));
        }
        for row in &entries {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|m| m.rows() != d || m.cols() != d) {
                return Err(Error::Shape(format!("all entries must be {d}×{d}")));
            }
        }
        Ok(LegFamily { n, d, entries })
    }

    /// The family `f_{i,j} = f_i` that does not depend on the leg.
    pub fn uniform(fs: Vec<QMatrix<Rat>>) -> Result<Self> {
        let n = fs.len().saturating_sub(1);
        Self::new(fs.into_iter().map(|f| vec![f; n]).collect())
    }

    /// Independent entries drawn uniformly from `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize, bound: i64) -> Result<Self> {
        let entries = (0..=n)
            .map(|_| (0..n).map(|_| random_matrix(rng, d, bound)).collect())
            .collect();
        Self::new(entries)
    }

    /// A uniform family with `n + 1` random matrices.
    pub fn random_uniform<R: Rng + ?Sized>(
        rng: &mut R,
        n: usize,
        d: usize,
        bound: i64,
    ) -> Result<Self> {
        Self::uniform((0..=n).map(|_| random_matrix(rng, d, bound)).collect())
    }

    pub fn legs(&self) -> usize {
        self.n
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    /// `f_{i,j}` with `j` 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &QMatrix<Rat> {
        &self.entries[i][j - 1]
    }

    /// `Δ_{I,J}`; both index lists must be strictly increasing.
    pub fn delta(&self, rows: &[usize], legs: &[usize]) -> Result<TensorElem> {
        if rows.len() != legs.len() {
            return Err(Error::InvalidInput(
                "row and leg sets differ in size".into(),
            ));
        }
        if !strictly_increasing(rows) || !strictly_increasing(legs) {
            return Err(Error::InvalidInput(
                "index sets must be strictly increasing".into(),
            ));
        }
        if rows.last().is_some_and(|&r| r > self.n) || legs.first() == Some(&0) {
            return Err(Error::InvalidInput("index out of range".into()));
        }
        let mut acc = TensorElem::zero(self.n, self.d);
        for (perm, sign) in Permutations::new(rows.len()) {
            let factors: Vec<(usize, &QMatrix<Rat>)> = rows
                .iter()
                .zip(&perm)
                .map(|(&i, &p)| (legs[p], self.entry(i, legs[p])))
                .collect();
            let term = place(&factors, self.n, self.d)?;
            acc = if sign > 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        Ok(acc)
    }

    /// `Δ_i`, the determinant with row `i` removed, over all legs.
    pub fn delta_omitting(&self, i: usize) -> Result<TensorElem> {
        let rows: Vec<usize> = (0..=self.n).filter(|&r| r != i).collect();
        let legs: Vec<usize> = (1..=self.n).collect();
        self.delta(&rows, &legs)
    }

    /// `H_1, …, H_n` with `H_i = Δ_0⁻¹ Δ_i`.
    ///
    /// Fails with [`Error::ZeroDelta0`] when `Δ_0` is not invertible.
    pub fn hamiltonians(&self) -> Result<Vec<TensorElem>> {
        let d0_inv = self
            .delta_omitting(0)?
            .inverse()
            .map_err(|_| Error::ZeroDelta0)?;
        (1..=self.n)
            .map(|i| Ok(d0_inv.mul(&self.delta_omitting(i)?)))
            .collect()
    }

    /// `Δ_i Δ_0⁻¹ Δ_j = Δ_j Δ_0⁻¹ Δ_i` for all `0 ≤ i < j ≤ n`.
    pub fn check_exchange_identity(&self) -> Result<Verdict> {
        let deltas: Vec<TensorElem> = (0..=self.n)
            .map(|i| self.delta_omitting(i))
            .collect::<Result<_>>()?;
        let d0_inv = deltas[0].inverse().map_err(|_| Error::ZeroDelta0)?;
        let mut v = Verdict::default();
        for i in 0..=self.n {
            for j in i + 1..=self.n {
                let lhs = deltas[i].mul(&d0_inv).mul(&deltas[j]);
                let rhs = deltas[j].mul(&d0_inv).mul(&deltas[i]);
                let diff = lhs.sub(&rhs);
                v.record(
                    diff.is_zero(),
                    format!("Δ_{i} Δ_0⁻¹ Δ_{j} = Δ_{j} Δ_0⁻¹ Δ_{i}"),
                    || diff.witness(),
                );
            }
        }
        Ok(v)
    }
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// A `d × d` matrix with entries uniform in `[-bound, bound]`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize, bound: i64) -> QMatrix<Rat> {
    let data = (0..d * d)
        .map(|_| Rat::from_int(rng.gen_range(-bound..=bound)))
        .collect();
    QMatrix::from_vec(d, d, data)
}

/// `[H_i, H_j] = 0` for every pair.
pub fn check_pairwise_commute(hs: &[TensorElem]) -> Verdict {
    let mut v = Verdict::default();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let c = hs[i].commutator(&hs[j]);
            v.record(
                c.is_zero(),
                format!("[H_{}, H_{}] = 0", i + 1, j + 1),
                || c.witness(),
            );
        }
    }
    v
}

fn legs_upto(k: usize) -> Vec<usize> {
    (1..=k).collect()
}

fn without(fs: &[QMatrix<Rat>], i: usize) -> Vec<QMatrix<Rat>> {
    fs.iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, f)| f.clone())
        .collect()
}

fn local_dim(fs: &[QMatrix<Rat>]) -> Result<usize> {
    let d = fs
        .first()
        .map(QMatrix::rows)
        .ok_or_else(|| Error::InvalidInput("empty matrix list".into()))?;
    if fs.iter().any(|f| f.rows() != d || f.cols() != d) || d == 0 {
        return Err(Error::Shape(
            "all matrices must share one square size".into(),
        ));
    }
    if fs.len() > MAX_LEGS {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_LEGS} legs supported"
        )));
    }
    Ok(d)
}

/// `Σ_i (−1)^i [f̌_i]^{(1..n−1)} [f_1..f_n]⁻¹ f_i^{(leg)}` for `i = 1..n`.
fn inverse_sum(fs: &[QMatrix<Rat>], leg: usize) -> Result<TensorElem> {
    let d = local_dim(fs)?;
    let n = fs.len();
    let full_inv = bracket(fs, &legs_upto(n), n, d)?.inverse()?;
    let mut acc = TensorElem::zero(n, d);
    for (k, f) in fs.iter().enumerate() {
        let minor = bracket(&without(fs, k), &legs_upto(n - 1), n, d)?;
        let term = minor.mul(&full_inv).mul(&leg_embed(f, leg, n)?);
        // k is 0-based, so i = k + 1
        acc = if k % 2 == 1 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    Ok(acc)
}

/// `Σ_{i=1}^n (−1)^i [f̌_i]^{(1..n−1)} [f_1..f_n]⁻¹ f_i^{(n)} = (−1)^n`.
///
/// Fails with [`Error::Singular`] when the full bracket is not invertible.
pub fn check_inverse_sum_identity(fs: &[QMatrix<Rat>]) -> Result<Verdict> {
    let n = fs.len();
    let d = local_dim(fs)?;
    let lhs = inverse_sum(fs, n)?;
    let mut want = TensorElem::identity(n, d);
    if n % 2 == 1 {
        want = want.neg();
    }
    let diff = lhs.sub(&want);
    let mut v = Verdict::default();
    v.record(
        diff.is_zero(),
        format!("inverse sum on leg {n} = (−1)^{n}"),
        || diff.witness(),
    );
    Ok(v)
}

/// `Σ_{i=1}^n (−1)^i [f̌_i]^{(1..n−1)} [f_1..f_n]⁻¹ f_i^{(a)} = 0` for
/// every leg `a` in `1..n`.
pub fn check_inverse_sum_vanishing(fs: &[QMatrix<Rat>]) -> Result<Verdict> {
    let n = fs.len();
    local_dim(fs)?;
    if n < 2 {
        return Err(Error::InvalidInput(
            "vanishing needs at least two matrices".into(),
        ));
    }
    let mut v = Verdict::default();
    for a in 1..n {
        let lhs = inverse_sum(fs, a)?;
        v.record(lhs.is_zero(), format!("inverse sum on leg {a} = 0"), || {
            lhs.witness()
        });
    }
    Ok(v)
}

/// `[f_1..f_n] = Σ_j (−1)^{j+n} f_j^{(n)} [f̌_j]^{(1..n−1)}`.
pub fn laplace_expansion(fs: &[QMatrix<Rat>]) -> Result<TensorElem> {
    let d = local_dim(fs)?;
    let n = fs.len();
    let mut acc = TensorElem::zero(n, d);
    for (k, f) in fs.iter().enumerate() {
        let j = k + 1;
        let term = leg_embed(f, n, n)?.mul(&bracket(&without(fs, k), &legs_upto(n - 1), n, d)?);
        acc = if (j + n).is_multiple_of(2) {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    Ok(acc)
}

/// Compares [`laplace_expansion`] with the bracket itself.
pub fn check_laplace_expansion(fs: &[QMatrix<Rat>]) -> Result<Verdict> {
    let n = fs.len();
    let d = local_dim(fs)?;
    let diff = laplace_expansion(fs)?.sub(&bracket(fs, &legs_upto(n), n, d)?);
    let mut v = Verdict::default();
    v.record(
        diff.is_zero(),
        format!("last-leg expansion of [f_1..f_{n}]"),
        || diff.witness(),
    );
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(v: &[i64]) -> QMatrix<Rat> {
        let d = (v.len() as f64).sqrt() as usize;
        QMatrix::from_ints(d, d, v)
    }

    #[test]
    fn n1_hamiltonian_is_quotient() {
        // H_1 = f_{1,1}⁻¹ · f_{0,1}
        let f0 = m(&[1, 2, 0, 1]);
        let f1 = m(&[2, 0, 1, 1]);
        let fam = LegFamily::new(vec![vec![f0.clone()], vec![f1.clone()]]).unwrap();
        let h = fam.hamiltonians().unwrap();
        let want = f1.inverse().unwrap().mul(&f0);
        assert_eq!(h[0].matrix(), &want);
    }

    #[test]
    fn scalar_family_reduces_to_cramer() {
        // d = 1: Δ's are ordinary minors; H_i = ±det(minor_i)/det(minor_0)
        let ints = [[3, 1], [1, 2], [4, -1]];
        let entries = ints
            .iter()
            .map(|r| r.iter().map(|&x| m(&[x])).collect())
            .collect();
        let fam = LegFamily::new(entries).unwrap();
        let h = fam.hamiltonians().unwrap();
        // Δ_0 = det[[1,2],[4,-1]] = -9, Δ_1 = det[[3,1],[4,-1]] = -7,
        // Δ_2 = det[[3,1],[1,2]] = 5
        assert_eq!(*h[0].matrix().get(0, 0), Rat::new(7, 9));
        assert_eq!(*h[1].matrix().get(0, 0), Rat::new(-5, 9));
    }

    #[test]
    fn uniform_delta0_is_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fam = LegFamily::random_uniform(&mut rng, 2, 2, 3).unwrap();
        let fs = vec![fam.entry(1, 1).clone(), fam.entry(2, 1).clone()];
        assert_eq!(
            fam.delta_omitting(0).unwrap(),
            bracket(&fs, &[1, 2], 2, 2).unwrap()
        );
    }

    #[test]
    fn hamiltonians_commute_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            let fam = LegFamily::random(&mut rng, n, 2, 5).unwrap();
            let hs = fam.hamiltonians().unwrap();
            assert!(check_pairwise_commute(&hs).passed());
            assert!(fam.check_exchange_identity().unwrap().passed());
        }
    }

    #[test]
    fn noncommuting_inputs_are_detected() {
        let a = TensorElem::from_matrix(1, 2, m(&[0, 1, 0, 0]));
        let b = TensorElem::from_matrix(1, 2, m(&[0, 0, 1, 0]));
        let v = check_pairwise_commute(&[a, b]);
        assert!(!v.passed());
        assert!(v.witness().is_some());
    }

    #[test]
    fn singular_delta0_reported() {
        let z = m(&[0, 0, 0, 0]);
        let fam = LegFamily::new(vec![vec![m(&[1, 0, 0, 1])], vec![z]]).unwrap();
        assert!(matches!(fam.hamiltonians(), Err(Error::ZeroDelta0)));
    }

    #[test]
    fn one_leg_identities() {
        let f = vec![m(&[2, 1, 1, 1])];
        assert!(check_inverse_sum_identity(&f).unwrap().passed());
        assert!(check_laplace_expansion(&f).unwrap().passed());
    }

    #[test]
    fn two_leg_laplace_matches_hand_expansion() {
        // [f,g] = g^{(2)} f^{(1)} − f^{(2)} g^{(1)}
        let f = m(&[1, 2, 3, 4]);
        let g = m(&[0, 1, -1, 2]);
        let lhs = laplace_expansion(&[f.clone(), g.clone()]).unwrap();
        let rhs = leg_embed(&g, 2, 2)
            .unwrap()
            .mul(&leg_embed(&f, 1, 2).unwrap())
            .sub(
                &leg_embed(&f, 2, 2)
                    .unwrap()
                    .mul(&leg_embed(&g, 1, 2).unwrap()),
            );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn opposite_expansion_sign_negates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fs: Vec<_> = (0..3).map(|_| random_matrix(&mut rng, 2, 5)).collect();
        let br = bracket(&fs, &[1, 2, 3], 3, 2).unwrap();
        // the sign (−1)^{j+n+1} yields −[f_1..f_n], which differs since br ≠ 0
        assert!(!br.is_zero());
        assert_ne!(laplace_expansion(&fs).unwrap().neg(), br);
    }

    #[test]
    fn brackets_are_singular_for_two_or_more_legs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, d) in [(2, 2), (3, 2), (2, 3)] {
            let fs: Vec<_> = (0..n).map(|_| random_matrix(&mut rng, d, 5)).collect();
            let br = bracket(&fs, &legs_upto(n), n, d).unwrap();
            let swap = leg_swap(n, d, 1, 2);
            assert_eq!(swap.mul(&br).mul(&swap), br.neg());
            assert!(br.rank() < d.pow(n as u32));
            assert!(matches!(
                check_inverse_sum_identity(&fs),
                Err(Error::Singular)
            ));
            assert!(matches!(
                check_inverse_sum_vanishing(&fs),
                Err(Error::Singular)
            ));
        }
        let fam = LegFamily::random_uniform(&mut rng, 2, 2, 5).unwrap();
        assert!(matches!(fam.hamiltonians(), Err(Error::ZeroDelta0)));
    }

    #[test]
    fn leg_swap_is_involution() {
        let p = leg_swap(3, 2, 1, 3);
        assert_eq!(p.mul(&p), TensorElem::identity(3, 2));
        let f = m(&[1, 2, 3, 4]);
        assert_eq!(
            p.mul(&leg_embed(&f, 1, 3).unwrap()).mul(&p),
            leg_embed(&f, 3, 3).unwrap()
        );
    }

    #[test]
    fn delta_rejects_unsorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fam = LegFamily::random(&mut rng, 2, 2, 2).unwrap();
        assert!(fam.delta(&[1, 0], &[1, 2]).is_err());
        assert!(fam.delta(&[0], &[1, 2]).is_err());
    }
}
