//! Alternating forms and the quadratic and cubic Grassmann identities they
//! satisfy when decomposable.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{QMatrix, Rat};
use crate::verdict::Verdict;

/// An alternating `k`-form on `ℚ^m`, stored by its coefficients on
/// increasing index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeForm {
    arity: usize,
    dim: usize,
    coeffs: BTreeMap<Vec<usize>, Rat>,
}

fn increasing_tuples(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, k, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, m, &mut Vec::with_capacity(k), &mut out);
    out
}

fn det(rows: Vec<Vec<Rat>>) -> Rat {
    QMatrix::from_rows(rows).determinant().expect("square")
}

impl WedgeForm {
    pub fn new(arity: usize, dim: usize, coeffs: BTreeMap<Vec<usize>, Rat>) -> Result<Self> {
        if !(2..=4).contains(&arity) {
            return Err(Error::InvalidInput(format!("arity {arity} not in 2..=4")));
        }
        for idx in coeffs.keys() {
            let ok = idx.len() == arity
                && idx.windows(2).all(|w| w[0] < w[1])
                && idx.last().is_some_and(|&l| l < dim);
            if !ok {
                return Err(Error::InvalidInput(format!("bad index tuple {idx:?}")));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(WedgeForm { arity, dim, coeffs })
    }

    /// `φ_1 ∧ ⋯ ∧ φ_k` for covectors `φ_i ∈ (ℚ^m)*`, i.e.
    /// `Λ(v_1..v_k) = det(φ_i(v_j))`.
    pub fn decomposable(covectors: &[Vec<Rat>]) -> Result<Self> {
        let k = covectors.len();
        let m = covectors.first().map_or(0, Vec::len);
        if covectors.iter().any(|c| c.len() != m) {
            return Err(Error::Shape("covectors differ in length".into()));
        }
        if m < k {
            return Err(Error::Shape(format!("{k} covectors in dimension {m}")));
        }
        let coeffs = increasing_tuples(k, m)
            .into_iter()
            .map(|idx| {
                let rows = covectors
                    .iter()
                    .map(|c| idx.iter().map(|&i| c[i].clone()).collect())
                    .collect();
                (idx, det(rows))
            })
            .collect();
        Self::new(k, m, coeffs)
    }

    /// A form with every coefficient drawn from `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        arity: usize,
        dim: usize,
        bound: i64,
    ) -> Result<Self> {
        let coeffs = increasing_tuples(arity, dim)
            .into_iter()
            .map(|idx| (idx, Rat::from_int(rng.gen_range(-bound..=bound))))
            .collect();
        Self::new(arity, dim, coeffs)
    }

    /// A decomposable form built from random integer covectors.
    pub fn random_decomposable<R: Rng + ?Sized>(
        rng: &mut R,
        arity: usize,
        dim: usize,
        bound: i64,
    ) -> Result<Self> {
        let covectors: Vec<Vec<Rat>> = (0..arity)
            .map(|_| {
                (0..dim)
                    .map(|_| Rat::from_int(rng.gen_range(-bound..=bound)))
                    .collect()
            })
            .collect();
        Self::decomposable(&covectors)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Λ(v_1, …, v_k) = Σ_I c_I det(v_j[I_r])`.
    pub fn eval(&self, vectors: &[&[Rat]]) -> Rat {
        assert_eq!(vectors.len(), self.arity, "wrong number of arguments");
        assert!(
            vectors.iter().all(|v| v.len() == self.dim),
            "argument dimension mismatch"
        );
        let mut acc = Rat::zero();
        for (idx, c) in &self.coeffs {
            let rows = idx
                .iter()
                .map(|&i| vectors.iter().map(|v| v[i].clone()).collect())
                .collect();
            let d = det(rows);
            if !d.is_zero() {
                acc += &(c * &d);
            }
        }
        acc
    }
}

/// Left-hand side of the Grassmann identity for the form's arity.
///
/// Argument order: arity 2 takes `(a, b, c, d)`, arity 3 takes
/// `(a, b, c, b′, c′)` and arity 4 takes `(a, b, c, a′, b′, c′)`.
pub fn grassmann_expression(form: &WedgeForm, vectors: &[Vec<Rat>]) -> Result<Rat> {
    let want = form.arity + 2;
    if vectors.len() != want {
        return Err(Error::InvalidInput(format!(
            "arity {} takes {want} vectors, got {}",
            form.arity,
            vectors.len()
        )));
    }
    if vectors.iter().any(|v| v.len() != form.dim) {
        return Err(Error::Shape(format!(
            "vectors must have dimension {}",
            form.dim
        )));
    }
    let l = |args: &[&Vec<Rat>]| {
        let refs: Vec<&[Rat]> = args.iter().map(|v| v.as_slice()).collect();
        form.eval(&refs)
    };
    let v = vectors;
    let out = match form.arity {
        2 => {
            let (a, b, c, d) = (&v[0], &v[1], &v[2], &v[3]);
            &(&(&l(&[a, b]) * &l(&[c, d])) - &(&l(&[a, c]) * &l(&[b, d])))
                + &(&l(&[a, d]) * &l(&[b, c]))
        }
        3 => {
            let (a, b, c, b2, c2) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
            let t1 = &(&l(&[b, c, c2]) * &l(&[a, c, b2])) * &l(&[b, b2, c2]);
            let t2 = &(&l(&[b, c, b2]) * &l(&[c, b2, c2])) * &l(&[a, b, c2]);
            let t3 = &(&l(&[b, c, b2]) * &l(&[a, c, c2])) * &l(&[b, b2, c2]);
            let t4 = &(&l(&[b, c, c2]) * &l(&[c, b2, c2])) * &l(&[a, b, b2]);
            &(&(&t1 + &t2) - &t3) - &t4
        }
        4 => {
            let (a, b, c, a2, b2, c2) = (&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]);
            let p = |x: [&Vec<Rat>; 4], y: [&Vec<Rat>; 4], z: [&Vec<Rat>; 4]| {
                &(&l(&x) * &l(&y)) * &l(&z)
            };
            let plus = [
                p([b, c, b2, c2], [a, c, a2, c2], [a, b, a2, b2]),
                p([b, c, a2, c2], [a, c, a2, b2], [a, b, b2, c2]),
                p([b, c, a2, b2], [a, c, b2, c2], [a, b, a2, c2]),
            ];
            let minus = [
                p([b, c, b2, c2], [a, c, a2, b2], [a, b, a2, c2]),
                p([b, c, a2, b2], [a, c, a2, c2], [a, b, b2, c2]),
                p([b, c, a2, c2], [a, c, b2, c2], [a, b, a2, b2]),
            ];
            let mut acc = Rat::zero();
            for t in &plus {
                acc += t;
            }
            for t in &minus {
                acc -= t;
            }
            acc
        }
        _ => unreachable!("arity validated on construction"),
    };
    Ok(out)
}

/// Evaluates the identity for the form's arity; it must vanish.
pub fn check_grassmann(form: &WedgeForm, vectors: &[Vec<Rat>]) -> Result<Verdict> {
    let value = grassmann_expression(form, vectors)?;
    let mut v = Verdict::default();
    v.record(
        value.is_zero(),
        format!("arity-{} Grassmann identity", form.arity),
        || value.to_string(),
    );
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(m: usize, i: usize) -> Vec<Rat> {
        (0..m)
            .map(|k| if k == i { Rat::one() } else { Rat::zero() })
            .collect()
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_int(x)).collect()
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(
            increasing_tuples(2, 3),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(increasing_tuples(4, 6).len(), 15);
    }

    #[test]
    fn e1_wedge_e2() {
        let form = WedgeForm::decomposable(&[e(2, 0), e(2, 1)]).unwrap();
        assert_eq!(form.eval(&[&e(2, 0), &e(2, 1)]), Rat::one());
        assert_eq!(form.eval(&[&e(2, 1), &e(2, 0)]), Rat::from_int(-1));
        let vs = vec![e(2, 0), e(2, 1), e(2, 0), e(2, 1)];
        assert_eq!(grassmann_expression(&form, &vs).unwrap(), Rat::zero());
    }

    #[test]
    fn decomposable_matches_determinant() {
        let phis = vec![ints(&[1, 2, 0]), ints(&[0, 1, -1])];
        let form = WedgeForm::decomposable(&phis).unwrap();
        let (u, w) = (ints(&[3, -1, 2]), ints(&[1, 1, 1]));
        // det [[φ1(u), φ1(w)], [φ2(u), φ2(w)]] = det [[1, 3], [-3, 0]] = 9
        assert_eq!(form.eval(&[&u, &w]), Rat::from_int(9));
    }

    #[test]
    fn low_rank_arity_three() {
        // b, c, b', c' inside a plane: every a-free factor vanishes
        let form = WedgeForm::decomposable(&[e(3, 0), e(3, 1), e(3, 2)]).unwrap();
        let vs = vec![
            ints(&[4, -2, 7]),
            ints(&[1, 0, 0]),
            ints(&[0, 1, 0]),
            ints(&[2, 3, 0]),
            ints(&[-1, 5, 0]),
        ];
        assert!(check_grassmann(&form, &vs).unwrap().passed());
    }

    #[test]
    fn random_decomposable_forms_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for arity in 2..=4 {
            for _ in 0..10 {
                let dim = rng.gen_range(arity..=6);
                let form = WedgeForm::random_decomposable(&mut rng, arity, dim, 4).unwrap();
                let vs: Vec<Vec<Rat>> = (0..arity + 2)
                    .map(|_| {
                        (0..dim)
                            .map(|_| Rat::from_int(rng.gen_range(-4..=4)))
                            .collect()
                    })
                    .collect();
                assert!(check_grassmann(&form, &vs).unwrap().passed());
            }
        }
    }

    #[test]
    fn indecomposable_two_form_fails() {
        // e1∧e2 + e3∧e4 on (e1, e2, e3, e4): 1·1 − 0 + 0 = 1
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0, 1], Rat::one());
        coeffs.insert(vec![2, 3], Rat::one());
        let form = WedgeForm::new(2, 4, coeffs).unwrap();
        let vs = (0..4).map(|i| e(4, i)).collect::<Vec<_>>();
        let v = check_grassmann(&form, &vs).unwrap();
        assert!(!v.passed());
        assert_eq!(v.failures().next().unwrap().witness.as_deref(), Some("1"));
    }

    #[test]
    fn wrong_vector_count() {
        let form = WedgeForm::decomposable(&[e(2, 0), e(2, 1)]).unwrap();
        assert!(check_grassmann(&form, &[e(2, 0)]).is_err());
    }
}
