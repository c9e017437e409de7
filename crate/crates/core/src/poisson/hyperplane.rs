//! The hyperplane through `g` points of affine `g`-space, in the
//! determinant coordinates `h_i = Δ_i / Δ_0`.
//!
//! Rows are indexed by `α = 0..g` with row 0 all ones and row `α` holding
//! the `α`-th coordinates of the points; `Δ_i` omits row `i`. The hyperplane
//! is `1 + Σ_i (−1)^i h_i x_i = 0`.

use crate::error::{Error, Result};
use crate::exact::{QMatrix, Rat};
use crate::verdict::Verdict;

pub fn hyperplane_coefficients(points: &[Vec<Rat>]) -> Result<Vec<Rat>> {
    let g = points.len();
    if g == 0 {
        return Err(Error::InvalidInput("no points".into()));
    }
    if points.iter().any(|p| p.len() != g) {
        return Err(Error::Shape(format!("{g} points must lie in {g}-space")));
    }
    let rows: Vec<Vec<Rat>> = std::iter::once(vec![Rat::one(); g])
        .chain((0..g).map(|a| points.iter().map(|p| p[a].clone()).collect()))
        .collect();
    let minor = |i: usize| -> Rat {
        let kept: Vec<Vec<Rat>> = rows
            .iter()
            .enumerate()
            .filter(|&(a, _)| a != i)
            .map(|(_, r)| r.clone())
            .collect();
        QMatrix::from_rows(kept).determinant().expect("square")
    };
    let d0 = minor(0);
    let d0_inv = d0.recip().ok_or(Error::ZeroDelta0)?;
    Ok((1..=g).map(|i| &minor(i) * &d0_inv).collect())
}

/// `1 + Σ_i (−1)^i h_i x_i^{(j)} = 0` for every point.
pub fn check_hyperplane_incidence(points: &[Vec<Rat>], hs: &[Rat]) -> Verdict {
    let mut v = Verdict::default();
    for (j, p) in points.iter().enumerate() {
        let mut acc = Rat::one();
        for (i, (h, x)) in hs.iter().zip(p).enumerate() {
            let t = h * x;
            if i % 2 == 0 {
                acc -= &t;
            } else {
                acc += &t;
            }
        }
        v.record(
            acc.is_zero(),
            format!("point {} on hyperplane", j + 1),
            || acc.to_string(),
        );
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter()
            .map(|p| p.iter().map(|&x| Rat::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn one_point_on_line() {
        let p = vec![vec![Rat::from_int(4)]];
        let h = hyperplane_coefficients(&p).unwrap();
        assert_eq!(h, vec![Rat::new(1, 4)]);
        assert!(check_hyperplane_incidence(&p, &h).passed());
    }

    #[test]
    fn unit_points_in_plane() {
        // Δ_0 = 1, Δ_1 = det[[1,1],[0,1]] = 1, Δ_2 = det[[1,1],[1,0]] = −1
        let p = pts(&[&[1, 0], &[0, 1]]);
        let h = hyperplane_coefficients(&p).unwrap();
        assert_eq!(h, vec![Rat::one(), Rat::from_int(-1)]);
        assert!(check_hyperplane_incidence(&p, &h).passed());
        assert!(!check_hyperplane_incidence(&p, &[Rat::one(), Rat::one()]).passed());
    }

    #[test]
    fn collinear_with_origin() {
        let p = pts(&[&[1, 1], &[2, 2]]);
        assert!(matches!(
            hyperplane_coefficients(&p),
            Err(Error::ZeroDelta0)
        ));
    }

    #[test]
    fn three_points_in_space() {
        let p = vec![
            vec![Rat::new(1, 2), Rat::from_int(3), Rat::from_int(-1)],
            vec![Rat::from_int(2), Rat::new(-5, 3), Rat::from_int(0)],
            vec![Rat::from_int(1), Rat::from_int(1), Rat::new(7, 4)],
        ];
        let h = hyperplane_coefficients(&p).unwrap();
        assert!(check_hyperplane_incidence(&p, &h).passed());
    }
}
