//! Elements of `M_d(ℚ)^{⊗n}` as `dⁿ × dⁿ` matrices, and leg placement.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{QMatrix, Rat};
use crate::perm::Permutations;

/// Largest number of tensor legs accepted by the permutation sums.
pub const MAX_LEGS: usize = 6;

/// An element of `M_d(ℚ)^{⊗n}`.
#[derive(Clone, PartialEq)]
pub struct TensorElem {
    n: usize,
    d: usize,
    mat: QMatrix<Rat>,
}

impl TensorElem {
    pub fn from_matrix(n: usize, d: usize, mat: QMatrix<Rat>) -> Self {
        let size = d.pow(n as u32);
        assert!(
            mat.rows() == size && mat.cols() == size,
            "tensor element of M_{d}^⊗{n} must be {size}×{size}"
        );
        TensorElem { n, d, mat }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        Self::from_matrix(n, d, QMatrix::identity(d.pow(n as u32)))
    }

    pub fn zero(n: usize, d: usize) -> Self {
        let s = d.pow(n as u32);
        Self::from_matrix(n, d, QMatrix::zeros(s, s))
    }

    pub fn legs(&self) -> usize {
        self.n
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &QMatrix<Rat> {
        &self.mat
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(
            (self.n, self.d),
            (other.n, other.d),
            "tensor shape mismatch"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        TensorElem {
            n: self.n,
            d: self.d,
            mat: self.mat.add(&other.mat),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_shape(other);
        TensorElem {
            n: self.n,
            d: self.d,
            mat: self.mat.sub(&other.mat),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        TensorElem {
            n: self.n,
            d: self.d,
            mat: self.mat.mul(&other.mat),
        }
    }

    pub fn neg(&self) -> Self {
        TensorElem {
            n: self.n,
            d: self.d,
            mat: self.mat.neg(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TensorElem {
            n: self.n,
            d: self.d,
            mat: self.mat.scale(c),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(TensorElem {
            n: self.n,
            d: self.d,
            mat: self.mat.inverse()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn rank(&self) -> usize {
        self.mat.rank()
    }

    /// `(row, col, value)` of the first nonzero entry, formatted.
    pub fn witness(&self) -> String {
        match self.mat.first_nonzero() {
            Some((i, j, v)) => format!("entry ({i},{j}) = {v}"),
            None => "zero".to_string(),
        }
    }
}

impl fmt::Debug for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElem(n={}, d={}, {})", self.n, self.d, self.mat)
    }
}

fn check_local(b: &QMatrix<Rat>) -> usize {
    assert!(
        b.is_square() && b.rows() > 0,
        "leg entries must be square and nonempty"
    );
    b.rows()
}

/// Product of matrices placed on pairwise distinct legs (1-based), with the
/// identity on all other legs. Factors on distinct legs commute, so the
/// order of `factors` is immaterial.
pub fn place(factors: &[(usize, &QMatrix<Rat>)], n: usize, d: usize) -> Result<TensorElem> {
    let mut slots: Vec<Option<&QMatrix<Rat>>> = vec![None; n];
    for &(leg, m) in factors {
        if leg == 0 || leg > n {
            return Err(Error::InvalidInput(format!("leg {leg} outside 1..={n}")));
        }
        if check_local(m) != d {
            return Err(Error::Shape(format!(
                "expected {d}×{d} leg entry, got {}×{}",
                m.rows(),
                m.cols()
            )));
        }
        if slots[leg - 1].replace(m).is_some() {
            return Err(Error::InvalidInput(format!("leg {leg} used twice")));
        }
    }
    let id = QMatrix::identity(d);
    let mut acc = QMatrix::identity(1);
    for slot in slots {
        acc = acc.kron(slot.unwrap_or(&id));
    }
    Ok(TensorElem { n, d, mat: acc })
}

/// `I_{d^{j−1}} ⊗ b ⊗ I_{d^{n−j}}`, the image of `b` on leg `j` (1-based).
pub fn leg_embed(b: &QMatrix<Rat>, leg: usize, n: usize) -> Result<TensorElem> {
    let d = check_local(b);
    place(&[(leg, b)], n, d)
}

/// Antisymmetrized placement `Σ_σ ε(σ) Π_m (ms[σ(m)] on legs[m])`.
///
/// With `ms = [f_1, …, f_k]` and `legs = [1, …, k]` this is the bracket
/// `[f_1, …, f_k] = Σ_σ ε(σ) f_{σ(1)} ⊗ ⋯ ⊗ f_{σ(k)}`. An empty list gives
/// the identity.
pub fn bracket(ms: &[QMatrix<Rat>], legs: &[usize], n: usize, d: usize) -> Result<TensorElem> {
    if ms.len() != legs.len() {
        return Err(Error::InvalidInput(format!(
            "{} matrices but {} legs",
            ms.len(),
            legs.len()
        )));
    }
    if ms.len() > n {
        return Err(Error::InvalidInput(format!(
            "{} factors on {n} legs",
            ms.len()
        )));
    }
    if n > MAX_LEGS {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_LEGS} legs supported"
        )));
    }
    let mut acc = TensorElem::zero(n, d);
    for (perm, sign) in Permutations::new(ms.len()) {
        let factors: Vec<(usize, &QMatrix<Rat>)> = legs
            .iter()
            .zip(&perm)
            .map(|(&leg, &p)| (leg, &ms[p]))
            .collect();
        let term = place(&factors, n, d)?;
        acc = if sign > 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    Ok(acc)
}

/// The permutation of `(ℚ^d)^{⊗n}` exchanging legs `a` and `b` (1-based).
pub fn leg_swap(n: usize, d: usize, a: usize, b: usize) -> TensorElem {
    assert!(a >= 1 && a <= n && b >= 1 && b <= n, "legs out of range");
    let size = d.pow(n as u32);
    let mut mat = QMatrix::zeros(size, size);
    for idx in 0..size {
        let mut digits: Vec<usize> = (0..n)
            .map(|k| idx / d.pow((n - 1 - k) as u32) % d)
            .collect();
        digits.swap(a - 1, b - 1);
        let target = digits.iter().fold(0, |acc, &x| acc * d + x);
        mat.set(target, idx, Rat::one());
    }
    TensorElem::from_matrix(n, d, mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(d: usize, i: usize, j: usize) -> QMatrix<Rat> {
        let mut m = QMatrix::zeros(d, d);
        m.set(i, j, Rat::one());
        m
    }

    #[test]
    fn identity_embeds_to_identity() {
        for j in 1..=3 {
            assert_eq!(
                leg_embed(&QMatrix::identity(2), j, 3).unwrap(),
                TensorElem::identity(3, 2)
            );
        }
    }

    #[test]
    fn single_leg_is_itself() {
        let b = QMatrix::from_ints(2, 2, &[1, 2, 3, 4]);
        assert_eq!(leg_embed(&b, 1, 1).unwrap().matrix(), &b);
    }

    #[test]
    fn distinct_legs_commute() {
        let a = leg_embed(&e(2, 0, 0), 1, 2).unwrap();
        let b = leg_embed(&e(2, 1, 1), 2, 2).unwrap();
        assert!(a.commutator(&b).is_zero());
        let c = leg_embed(&e(2, 0, 1), 1, 2).unwrap();
        let dd = leg_embed(&e(2, 1, 0), 1, 2).unwrap();
        assert!(!c.commutator(&dd).is_zero());
    }

    #[test]
    fn bracket_e11_e22() {
        // f⊗g − g⊗f in the basis e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2
        let br = bracket(&[e(2, 0, 0), e(2, 1, 1)], &[1, 2], 2, 2).unwrap();
        let want = QMatrix::from_ints(4, 4, &[0, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0]);
        assert_eq!(br.matrix(), &want);
    }

    #[test]
    fn scalar_bracket_collapses() {
        let f = QMatrix::from_ints(1, 1, &[3]);
        let g = QMatrix::from_ints(1, 1, &[-7]);
        assert!(bracket(&[f, g], &[1, 2], 2, 1).unwrap().is_zero());
    }

    #[test]
    fn one_factor_bracket_is_embedding() {
        let f = QMatrix::from_ints(2, 2, &[1, 2, 3, 4]);
        assert_eq!(
            bracket(std::slice::from_ref(&f), &[2], 3, 2).unwrap(),
            leg_embed(&f, 2, 3).unwrap()
        );
    }

    #[test]
    fn bad_legs_rejected() {
        let f = QMatrix::from_ints(2, 2, &[1, 0, 0, 1]);
        assert!(leg_embed(&f, 0, 2).is_err());
        assert!(leg_embed(&f, 3, 2).is_err());
        assert!(place(&[(1, &f), (1, &f)], 2, 2).is_err());
    }
}
