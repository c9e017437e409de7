//! Rational matrix kernels that work on integer matrices and normalize
//! once per entry.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::QMatrix;
use super::rat::Rat;
use crate::error::{Error, Result};

fn lcm_of<'a>(xs: impl Iterator<Item = &'a Rat>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| {
        let d = x.denom();
        if d.is_one() {
            acc
        } else {
            acc.lcm(&d)
        }
    })
}

/// `x · scale` for a denominator dividing `scale`.
fn scaled(x: &Rat, scale: &BigInt) -> BigInt {
    x.numer() * (scale / x.denom())
}

pub(crate) fn mul(a: &QMatrix<Rat>, b: &QMatrix<Rat>) -> QMatrix<Rat> {
    assert_eq!(a.cols(), b.rows(), "inner dimension mismatch");
    let (n, m, p) = (a.rows(), a.cols(), b.cols());
    let row_scale: Vec<BigInt> = (0..n).map(|i| lcm_of(a.row(i).iter())).collect();
    let col_scale: Vec<BigInt> = (0..p)
        .map(|j| lcm_of((0..m).map(|k| b.get(k, j))))
        .collect();
    let ai: Vec<BigInt> = (0..n * m)
        .map(|idx| scaled(&a.entries()[idx], &row_scale[idx / m]))
        .collect();
    // column-major copy of B for locality
    let bi: Vec<BigInt> = (0..p * m)
        .map(|idx| {
            let (j, k) = (idx / m, idx % m);
            scaled(b.get(k, j), &col_scale[j])
        })
        .collect();
    let mut data = Vec::with_capacity(n * p);
    for i in 0..n {
        let arow = &ai[i * m..(i + 1) * m];
        for j in 0..p {
            let bcol = &bi[j * m..(j + 1) * m];
            let mut acc = BigInt::zero();
            for (x, y) in arow.iter().zip(bcol) {
                if !x.is_zero() && !y.is_zero() {
                    acc += x * y;
                }
            }
            data.push(if acc.is_zero() {
                Rat::zero()
            } else {
                Rat::from_bigints(acc, &row_scale[i] * &col_scale[j])
            });
        }
    }
    QMatrix::from_vec(n, p, data)
}

/// Fraction-free Gauss–Jordan on `[S·A | I]`, where `S` clears row
/// denominators. Every division is exact; at the end the left block is
/// `d·I` and the right block is `d·(S·A)⁻¹` with `d = det(S·A)`.
pub(crate) fn inverse(a: &QMatrix<Rat>) -> Result<QMatrix<Rat>> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "cannot invert a {}×{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(a.clone());
    }
    let w = 2 * n;
    let scale: Vec<BigInt> = (0..n).map(|i| lcm_of(a.row(i).iter())).collect();
    let mut m: Vec<BigInt> = vec![BigInt::zero(); n * w];
    for i in 0..n {
        for j in 0..n {
            m[i * w + j] = scaled(a.get(i, j), &scale[i]);
        }
        m[i * w + n + i] = BigInt::one();
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !m[r * w + k].is_zero())
            .min_by_key(|&r| m[r * w + k].bits())
            .ok_or(Error::Singular)?;
        if pivot != k {
            for j in 0..w {
                m.swap(pivot * w + j, k * w + j);
            }
        }
        let pk = m[k * w + k].clone();
        let pivot_row: Vec<BigInt> = m[k * w..(k + 1) * w].to_vec();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i * w + k].clone();
            let row = &mut m[i * w..(i + 1) * w];
            for j in 0..w {
                if j == k {
                    continue;
                }
                let v = &pk * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[k] = BigInt::zero();
        }
        prev = pk;
    }
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        let di = &m[i * w + i];
        for j in 0..n {
            // A⁻¹ = (S·A)⁻¹ S
            let r = &m[i * w + n + j];
            data.push(if r.is_zero() {
                Rat::zero()
            } else {
                Rat::from_bigints(r * &scale[j], di.clone())
            });
        }
    }
    Ok(QMatrix::from_vec(n, n, data))
}
