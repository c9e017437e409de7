//! Scenario execution.
//!
//! Each trial draws from its own generator `trial_rng(seed, trial)`, so
//! trials can run in any order and on any number of threads; records are
//! assembled in trial order.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use beauville_core::exact::{MPoly, QMatrix, Rat, RatFunc};
use beauville_core::ncfam::{
    bracket, check_inverse_sum_identity, check_inverse_sum_vanishing, check_laplace_expansion,
    check_pairwise_commute, random_matrix, LegFamily,
};
use beauville_core::poisson::{
    canonical_bracket, check_cone_antisymmetry, check_cone_jacobi, check_grassmann,
    check_hyperplane_incidence, check_poisson_commute, check_symplectic_correspondence,
    classical_hamiltonians, cone_bracket, hyperplane_coefficients, random_plane_polynomial,
    ConeDifferential, PoissonElem, WedgeForm,
};
use beauville_core::quantize::{
    check_commutator_degeneration, check_lift_independence, check_localization_axioms,
    check_product_against_operators, check_xd_relation, dual_commutator, dual_commuting_family,
    dual_mul, DualNum, HElem, LocalSeries,
};
use beauville_core::rng::trial_rng;
use beauville_core::weyl::{
    check_construction_agreement, check_operators_commute, check_symbol_matches_classical,
    rational_hamiltonians, OpFamilySpec, RatDiffOp,
};
use beauville_core::{Error, Verdict};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{CheckRecord, Report, ScenarioEcho, Status};
use crate::scenario::{Params, Scenario, ScenarioKind};

pub mod anchors {
    pub const DELTA0_INVERTIBLE: &str = "Δ_0 = [f_1,…,f_n] invertible";
    pub const NC_COMMUTE: &str = "H_i H_j = H_j H_i with H_i = (Δ_0)^{−1} Δ_i";
    pub const EXCHANGE: &str = "Δ_i (Δ_0)^{−1} Δ_j = Δ_j (Δ_0)^{−1} Δ_i";
    pub const BRACKET_INVERTIBLE: &str = "[f_1,…,f_n] invertible";
    pub const INV_SUM_ID: &str =
        "Σ_{i=1}^n (−1)^i [f_1,…,f̌_i,…,f_n]^{(1,…,n−1)} [f_1,…,f_n]^{−1} (f_i)^{(n)} = (−1)^n";
    pub const INV_SUM_ZERO: &str =
        "Σ_{i=1}^n (−1)^i [f_1,…,f̌_i,…,f_n]^{(1,…,n−1)} [f_1,…,f_n]^{−1} (f_i)^{(a)} = 0";
    pub const LAPLACE: &str = "[f_1,…,f_n] = Σ_j ± (f_j)^{(n)} [f_1,…,f̌_j,…,f_n]^{(1,…,n−1)}";
    pub const FAMILY_ADMISSIBLE: &str = "f_0,…,f_n independent and Δ_0^cl ≠ 0";
    pub const POISSON_COMMUTE: &str = "{H_i^cl, H_j^cl} = 0 with H_i^cl = Δ_i^cl / Δ_0^cl";
    pub const INVERSE_BRACKET: &str = "{1/f, g} = −{f,g}/f²";
    pub const INVERSE_BOTH: &str = "{1/f, 1/g} = {f,g}/(f²g²)";
    pub const GRASSMANN2: &str = "Λ(a,b)Λ(c,d) − Λ(a,c)Λ(b,d) + Λ(a,d)Λ(b,c) = 0";
    pub const GRASSMANN3: &str = "five-vector quadratic relation for Λ ∈ ∧³V";
    pub const GRASSMANN4: &str = "Λ(b,c,b′,c′)Λ(a,c,a′,c′)Λ(a,b,a′,b′) + … = 0 for Λ ∈ ∧⁴V";
    pub const POINTS_SPAN: &str = "Δ_0(P_1,…,P_g) ≠ 0";
    pub const HYPERPLANE: &str = "1 + Σ_i (−1)^i h_i x_i^{(j)} = 0";
    pub const CONE_ALPHA: &str = "{ω,ω′} = i ω ∇^α(ω′) − i′ ω′ ∇^α(ω) is independent of α";
    pub const CONE_ANTISYM: &str = "{ω,ω′} = −{ω′,ω}";
    pub const CONE_JACOBI: &str = "{ω,{ω′,ω″}} + {ω′,{ω″,ω}} + {ω″,{ω,ω′}} = 0";
    pub const CONE_SYMPLECTIC: &str = "f(dz)^i ↦ f(x)ξ^{−i} carries the cone bracket to {x, ξ} = 1";
    pub const DUAL_ASSOC: &str = "(a·b)·c = a·(b·c) for a·b = ab + ε{a,b}";
    pub const DUAL_SOUL: &str = "a·b − b·a = 2ε{a,b}";
    pub const DUAL_FAMILY: &str = "H_i H_j = H_j H_i over k[ε]/(ε²)";
    pub const WEYL_COMMUTE: &str = "[H_k, H_l] = 0";
    pub const WEYL_SYMBOL: &str = "σ(H_k) = H_k^cl and {σ(H_k), σ(H_l)} = 0";
    pub const WEYL_BASIS: &str = "H_k = Σ_j (−1)^{j+1} D_{kj}/Φ · T_{z_j} on f_i = 1/(z − P_i)";
    pub const HBAR_AXIOMS: &str = "f·X = X·f = 1 and (uv)w = u(vw) mod ℏ^M";
    pub const HBAR_XD: &str = "X·D = D·X + ℏX²";
    pub const HBAR_ORACLE: &str = "X ↦ f^{−1}: products agree with operator composition mod ℏ^M";
    pub const HBAR_LIFT: &str = "X′ ↦ Σ_k (−1)^k (X ℏg)^k X is multiplicative";
    pub const HBAR_DEGENERATION: &str = "[a, b] = −ℏ{σa, σb} + O(ℏ²)";
}

use anchors as A;

struct Trial {
    index: u64,
    seed: u64,
    records: Vec<CheckRecord>,
}

impl Trial {
    fn name(&self, what: &str) -> String {
        format!("trial {}: {what}", self.index)
    }

    fn verdict(&mut self, v: &Verdict, anchor: &str, note: Option<String>) {
        for o in &v.outcomes {
            let name = self.name(&o.what);
            let rec = match &o.witness {
                None => CheckRecord::pass(name, anchor),
                Some(w) => CheckRecord::fail(name, anchor, w.clone()),
            };
            self.records.push(rec.with_note(note.clone()));
        }
    }

    /// A verdict-producing check whose precondition may fail.
    fn result(
        &mut self,
        what: &str,
        anchor: &str,
        r: Result<Verdict, Error>,
        note: Option<String>,
    ) {
        match r {
            Ok(v) => self.verdict(&v, anchor, note),
            Err(e) => {
                let rec = CheckRecord::fail(self.name(what), anchor, format!("{e}"));
                self.records.push(rec.with_note(note));
            }
        }
    }

    fn pass(&mut self, what: &str, anchor: &str, note: Option<String>) {
        let rec = CheckRecord::pass(self.name(what), anchor).with_note(note);
        self.records.push(rec);
    }

    fn fail(&mut self, what: &str, anchor: &str, witness: String) {
        self.records
            .push(CheckRecord::fail(self.name(what), anchor, witness));
    }

    fn skip(&mut self, what: &str, anchor: &str, reason: &str) {
        self.records
            .push(CheckRecord::skipped(self.name(what), anchor, reason));
    }

    fn exhausted(&self, rejections: &[String]) -> String {
        format!(
            "all {} draws rejected (seed {}, trial {}): {}",
            rejections.len(),
            self.seed,
            self.index,
            summarize_rejections(rejections)
        )
    }
}

/// `draw 1: a; draws 2–4: b`, merging consecutive identical reasons.
fn summarize_rejections(reasons: &[String]) -> String {
    let mut parts = Vec::new();
    let mut start = 0;
    for i in 1..=reasons.len() {
        if i == reasons.len() || reasons[i] != reasons[start] {
            parts.push(if i - start == 1 {
                format!("draw {}: {}", start + 1, reasons[start])
            } else {
                format!("draws {}–{}: {}", start + 1, i, reasons[start])
            });
            start = i;
        }
    }
    parts.join("; ")
}

/// Draws until `draw` accepts, at most `retries + 1` times. On success the
/// note lists the rejected draws; on failure the rejections are returned.
fn resample<T>(
    rng: &mut ChaCha8Rng,
    retries: u32,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<T, String>,
) -> Result<(T, Option<String>), Vec<String>> {
    let mut rejected = Vec::new();
    for _ in 0..=retries {
        match draw(rng) {
            Ok(v) => {
                let note = (!rejected.is_empty()).then(|| {
                    format!(
                        "resampled {} time(s): {}",
                        rejected.len(),
                        summarize_rejections(&rejected)
                    )
                });
                return Ok((v, note));
            }
            Err(reason) => rejected.push(reason),
        }
    }
    Err(rejected)
}

fn random_rat(rng: &mut ChaCha8Rng, bound: i64) -> Rat {
    Rat::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> Vec<Rat> {
    (0..dim).map(|_| random_rat(rng, bound)).collect()
}

fn random_z_poly(rng: &mut ChaCha8Rng, degree: u16, bound: i64) -> MPoly {
    MPoly::from_terms(
        1,
        (0..=degree).map(|k| (Rat::from_int(rng.gen_range(-bound..=bound)), vec![k])),
    )
}

fn random_z_function(rng: &mut ChaCha8Rng, degree: u16, bound: i64) -> RatFunc {
    let num = random_z_poly(rng, degree, bound);
    let mut den = random_z_poly(rng, degree, bound);
    while den.is_zero() {
        den = random_z_poly(rng, degree, bound);
    }
    RatFunc::new(num, den)
}

fn nonzero_plane_polynomial(rng: &mut ChaCha8Rng, degree: u16, bound: i64) -> RatFunc {
    loop {
        let f = random_plane_polynomial(rng, degree, bound);
        if !f.is_zero() {
            return f;
        }
    }
}

fn singular_reason(what: &str, rank: usize, size: usize) -> String {
    format!("{what} singular (rank {rank} of {size})")
}

fn trial_matrix(
    t: &mut Trial,
    rng: &mut ChaCha8Rng,
    kind: ScenarioKind,
    n: usize,
    d: usize,
    bound: i64,
    retries: u32,
) {
    let size = d.pow(n as u32);
    let corollary = kind == ScenarioKind::CorollaryLegs;
    let drawn = resample(rng, retries, |rng| {
        let fam = if corollary {
            LegFamily::random(rng, n, d, bound)
        } else {
            LegFamily::random_uniform(rng, n, d, bound)
        }
        .map_err(|e| e.to_string())?;
        match fam.hamiltonians() {
            Ok(hs) => Ok((fam, hs)),
            Err(Error::ZeroDelta0) => {
                let rank = fam.delta_omitting(0).map(|x| x.rank()).unwrap_or(0);
                Err(singular_reason("Δ_0", rank, size))
            }
            Err(e) => Err(e.to_string()),
        }
    });
    match drawn {
        Ok(((fam, hs), note)) => {
            t.pass("Δ_0 invertible", A::DELTA0_INVERTIBLE, note.clone());
            t.verdict(&check_pairwise_commute(&hs), A::NC_COMMUTE, note.clone());
            if corollary {
                t.result(
                    "exchange identity",
                    A::EXCHANGE,
                    fam.check_exchange_identity(),
                    note,
                );
            }
        }
        Err(rej) => {
            let w = t.exhausted(&rej);
            t.fail("Δ_0 invertible", A::DELTA0_INVERTIBLE, w);
            t.skip("[H_i, H_j] = 0", A::NC_COMMUTE, "Δ_0 not invertible");
            if corollary {
                t.skip("exchange identity", A::EXCHANGE, "Δ_0 not invertible");
            }
        }
    }
}

fn trial_identities(
    t: &mut Trial,
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    bound: i64,
    retries: u32,
) {
    let size = d.pow(n as u32);
    let legs: Vec<usize> = (1..=n).collect();
    let mut last: Vec<QMatrix<Rat>> = Vec::new();
    let drawn = resample(rng, retries, |rng| {
        let fs: Vec<QMatrix<Rat>> = (0..n).map(|_| random_matrix(rng, d, bound)).collect();
        let b = bracket(&fs, &legs, n, d).map_err(|e| e.to_string())?;
        last = fs.clone();
        if b.inverse().is_ok() {
            Ok(fs)
        } else {
            Err(singular_reason("[f_1,…,f_n]", b.rank(), size))
        }
    });
    let laplace_input = match &drawn {
        Ok((fs, _)) => fs.clone(),
        Err(_) => last.clone(),
    };
    match drawn {
        Ok((fs, note)) => {
            t.pass("bracket invertible", A::BRACKET_INVERTIBLE, note.clone());
            t.result(
                "inverse sum = (−1)^n",
                A::INV_SUM_ID,
                check_inverse_sum_identity(&fs),
                note.clone(),
            );
            if n >= 2 {
                t.result(
                    "inverse sums vanish",
                    A::INV_SUM_ZERO,
                    check_inverse_sum_vanishing(&fs),
                    note,
                );
            } else {
                t.skip(
                    "inverse sums vanish",
                    A::INV_SUM_ZERO,
                    "no leg a < n when n = 1",
                );
            }
        }
        Err(rej) => {
            let w = t.exhausted(&rej);
            t.fail("bracket invertible", A::BRACKET_INVERTIBLE, w);
            t.skip(
                "inverse sum = (−1)^n",
                A::INV_SUM_ID,
                "bracket not invertible",
            );
            t.skip(
                "inverse sums vanish",
                A::INV_SUM_ZERO,
                "bracket not invertible",
            );
        }
    }
    t.result(
        "last-leg expansion",
        A::LAPLACE,
        check_laplace_expansion(&laplace_input),
        None,
    );

    let drawn = resample(rng, retries, |rng| {
        let fam = LegFamily::random_uniform(rng, n, d, bound).map_err(|e| e.to_string())?;
        let d0 = fam.delta_omitting(0).map_err(|e| e.to_string())?;
        if d0.inverse().is_ok() {
            Ok(fam)
        } else {
            Err(singular_reason("Δ_0", d0.rank(), size))
        }
    });
    match drawn {
        Ok((fam, note)) => t.result(
            "exchange identity",
            A::EXCHANGE,
            fam.check_exchange_identity(),
            note,
        ),
        Err(rej) => {
            let w = t.exhausted(&rej);
            t.fail("exchange identity: Δ_0 invertible", A::DELTA0_INVERTIBLE, w);
            t.skip("exchange identity", A::EXCHANGE, "Δ_0 not invertible");
        }
    }
}

fn trial_poisson(
    t: &mut Trial,
    rng: &mut ChaCha8Rng,
    n: usize,
    degree: u16,
    bound: i64,
    retries: u32,
) {
    let drawn = resample(rng, retries, |rng| {
        let fs: Vec<RatFunc> = (0..=n)
            .map(|_| random_plane_polynomial(rng, degree, bound))
            .collect();
        classical_hamiltonians(&fs).map_err(|e| e.to_string())
    });
    match drawn {
        Ok((hs, note)) => {
            t.pass("family admissible", A::FAMILY_ADMISSIBLE, note.clone());
            t.verdict(&check_poisson_commute(&hs), A::POISSON_COMMUTE, note);
        }
        Err(rej) => {
            let w = t.exhausted(&rej);
            t.fail("family admissible", A::FAMILY_ADMISSIBLE, w);
            t.skip("{H_i, H_j} = 0", A::POISSON_COMMUTE, "no admissible family");
        }
    }
    let f = nonzero_plane_polynomial(rng, degree, bound);
    let g = nonzero_plane_polynomial(rng, degree, bound);
    let one = RatFunc::one(2);
    let finv = one.div(&f).expect("f ≠ 0");
    let ginv = one.div(&g).expect("g ≠ 0");
    let fg = canonical_bracket(&f, &g);
    let d1 = canonical_bracket(&finv, &g).add(&fg.mul(&finv).mul(&finv));
    let mut v = Verdict::new();
    v.record(d1.is_zero(), "{1/f, g} = −{f,g}/f²", || d1.to_string());
    let d2 = canonical_bracket(&finv, &ginv).sub(&fg.mul(&finv).mul(&finv).mul(&ginv).mul(&ginv));
    t.verdict(&v, A::INVERSE_BRACKET, None);
    let mut v = Verdict::new();
    v.record(d2.is_zero(), "{1/f, 1/g} = {f,g}/(f²g²)", || {
        d2.to_string()
    });
    t.verdict(&v, A::INVERSE_BOTH, None);
}

fn trial_grassmann(t: &mut Trial, rng: &mut ChaCha8Rng, arity: usize, dim: usize, bound: i64) {
    let anchor = match arity {
        2 => A::GRASSMANN2,
        3 => A::GRASSMANN3,
        _ => A::GRASSMANN4,
    };
    let form = match WedgeForm::random_decomposable(rng, arity, dim, bound) {
        Ok(f) => f,
        Err(e) => return t.fail("form", anchor, e.to_string()),
    };
    let vectors: Vec<Vec<Rat>> = (0..arity + 2)
        .map(|_| random_vector(rng, dim, bound))
        .collect();
    t.result(
        "quadratic relation",
        anchor,
        check_grassmann(&form, &vectors),
        None,
    );
}

fn trial_hyperplane(t: &mut Trial, rng: &mut ChaCha8Rng, g: usize, bound: i64, retries: u32) {
    let drawn = resample(rng, retries, |rng| {
        let points: Vec<Vec<Rat>> = (0..g).map(|_| random_vector(rng, g, bound)).collect();
        let hs = hyperplane_coefficients(&points).map_err(|e| e.to_string())?;
        Ok((points, hs))
    });
    match drawn {
        Ok(((points, hs), note)) => {
            t.pass("points span a hyperplane", A::POINTS_SPAN, note.clone());
            t.verdict(
                &check_hyperplane_incidence(&points, &hs),
                A::HYPERPLANE,
                note,
            );
        }
        Err(rej) => {
            let w = t.exhausted(&rej);
            t.fail("points span a hyperplane", A::POINTS_SPAN, w);
            t.skip("incidence", A::HYPERPLANE, "points do not span");
        }
    }
}

fn trial_cone(t: &mut Trial, rng: &mut ChaCha8Rng, degree: u16, bound: i64) {
    let diff = |rng: &mut ChaCha8Rng| {
        let w = rng.gen_range(-2..=3);
        ConeDifferential::new(random_z_function(rng, degree, bound), w).expect("one variable")
    };
    let (a, b, c) = (diff(rng), diff(rng), diff(rng));
    let shift = Rat::from_int(rng.gen_range(-bound..=bound));
    let alpha1 = ConeDifferential::dz();
    let alpha2 = ConeDifferential::new(RatFunc::var(1, 0).add(&RatFunc::constant(1, shift)), 1)
        .expect("one variable");
    let alpha_free = (|| -> Result<Verdict, Error> {
        let b1 = cone_bracket(&a, &b, &alpha1)?;
        let b2 = cone_bracket(&a, &b, &alpha2)?;
        let d = b1.sub(&b2);
        let mut v = Verdict::new();
        v.record(
            d.is_zero(),
            "bracket under dz = bracket under (z + c)dz",
            || d.to_string(),
        );
        Ok(v)
    })();
    t.result("α-independence", A::CONE_ALPHA, alpha_free, None);
    t.result(
        "antisymmetry",
        A::CONE_ANTISYM,
        check_cone_antisymmetry(&a, &b, &alpha2),
        None,
    );
    t.result(
        "Jacobi",
        A::CONE_JACOBI,
        check_cone_jacobi([&a, &b, &c], &alpha2),
        None,
    );
    t.result(
        "symplectic image",
        A::CONE_SYMPLECTIC,
        check_symplectic_correspondence(&a, &b, &alpha1),
        None,
    );
}

fn trial_dual(
    t: &mut Trial,
    rng: &mut ChaCha8Rng,
    n: usize,
    degree: u16,
    bound: i64,
    retries: u32,
) {
    let elem = |rng: &mut ChaCha8Rng| {
        PoissonElem::new(1, random_plane_polynomial(rng, degree, bound)).expect("two variables")
    };
    let x = DualNum::new(elem(rng), elem(rng));
    let y = DualNum::new(elem(rng), elem(rng));
    let z = DualNum::new(elem(rng), elem(rng));
    let d = dual_mul(&dual_mul(&x, &y), &z).sub(&dual_mul(&x, &dual_mul(&y, &z)));
    let mut v = Verdict::new();
    v.record(d.is_zero(), "(a·b)·c = a·(b·c)", || d.to_string());
    t.verdict(&v, A::DUAL_ASSOC, None);

    let (a, b) = (elem(rng), elem(rng));
    let c = dual_commutator(&DualNum::lift(a.clone()), &DualNum::lift(b.clone()));
    let two = PoissonElem::constant(1, Rat::from_int(2));
    let s = c.soul.sub(&a.bracket(&b).mul(&two));
    let mut v = Verdict::new();
    v.record(
        c.body.is_zero() && s.is_zero(),
        "soul(a·b − b·a) = 2{a,b}",
        || format!("body {}, soul − 2{{a,b}} = {s}", c.body),
    );
    t.verdict(&v, A::DUAL_SOUL, None);

    let drawn = resample(rng, retries, |rng| {
        let fs: Vec<RatFunc> = (0..=n)
            .map(|_| random_plane_polynomial(rng, degree, bound))
            .collect();
        classical_hamiltonians(&fs).map_err(|e| e.to_string())?;
        Ok(fs)
    });
    match drawn {
        Ok((fs, note)) => t.result(
            "dual family",
            A::DUAL_FAMILY,
            dual_commuting_family(&fs),
            note,
        ),
        Err(rej) => {
            let w = t.exhausted(&rej);
            t.fail("family admissible", A::FAMILY_ADMISSIBLE, w);
            t.skip("dual family", A::DUAL_FAMILY, "no admissible family");
        }
    }
}

fn weyl_spec(
    rng: &mut ChaCha8Rng,
    size: usize,
    t: &RatDiffOp,
    points: &Option<Vec<Rat>>,
    bound: i64,
) -> Result<OpFamilySpec, Error> {
    let pts = match points {
        Some(p) => p.clone(),
        None => {
            let mut all: Vec<i64> = (-bound..=bound).collect();
            all.shuffle(rng);
            all.into_iter().take(size).map(Rat::from_int).collect()
        }
    };
    OpFamilySpec::new(pts, t.clone())
}

fn trial_weyl(
    t: &mut Trial,
    rng: &mut ChaCha8Rng,
    kind: ScenarioKind,
    size: usize,
    op: &RatDiffOp,
    points: &Option<Vec<Rat>>,
    bound: i64,
) {
    let spec = match weyl_spec(rng, size, op, points, bound) {
        Ok(s) => s,
        Err(e) => return t.fail("family specification", A::WEYL_COMMUTE, e.to_string()),
    };
    let pts: Vec<String> = spec.points().iter().map(Rat::to_string).collect();
    let note = Some(format!("points [{}]", pts.join(", ")));
    if kind == ScenarioKind::WeylBasis {
        t.result(
            "cofactor form",
            A::WEYL_BASIS,
            check_construction_agreement(&spec),
            note,
        );
        return;
    }
    let hs = rational_hamiltonians(&spec);
    t.verdict(&check_operators_commute(&hs), A::WEYL_COMMUTE, note.clone());
    t.result(
        "symbols",
        A::WEYL_SYMBOL,
        check_symbol_matches_classical(&hs, &spec),
        note,
    );
}

fn random_series(
    rng: &mut ChaCha8Rng,
    f: &HElem,
    order: u16,
    bound: i64,
) -> Result<LocalSeries, Error> {
    let mut s = LocalSeries::zero(f)?;
    for k in 0..3 {
        let a = HElem::random(rng, f.truncation(), order, bound);
        s = s.add(&LocalSeries::monomial(f, a, k)?)?;
    }
    Ok(s)
}

fn trial_hbar(t: &mut Trial, rng: &mut ChaCha8Rng, f: &HElem, order: u16, bound: i64) {
    let m = f.truncation();
    let samples: Result<Vec<LocalSeries>, Error> = (0..3)
        .map(|_| random_series(rng, f, order, bound))
        .collect();
    let samples = match samples {
        Ok(s) => s,
        Err(e) => return t.fail("samples", A::HBAR_AXIOMS, e.to_string()),
    };
    t.result(
        "localization axioms",
        A::HBAR_AXIOMS,
        check_localization_axioms(f, &samples),
        None,
    );
    t.result("X·D relation", A::HBAR_XD, check_xd_relation(m), None);
    t.result(
        "operator oracle",
        A::HBAR_ORACLE,
        check_product_against_operators(&samples[0], &samples[1]),
        None,
    );

    let g = HElem::random(rng, m, order.min(1), bound);
    let f2 = f.add(&HElem::hbar(m).mul(&g));
    let lifted: Result<Vec<LocalSeries>, Error> = (0..2)
        .map(|_| random_series(rng, &f2, order.min(1), bound))
        .collect();
    let r = lifted.and_then(|s| check_lift_independence(f, &g, &s));
    t.result("lift independence", A::HBAR_LIFT, r, None);

    if m >= 2 {
        let a = HElem::random(rng, m, order, bound);
        let b = HElem::random(rng, m, order, bound);
        t.verdict(
            &check_commutator_degeneration(&a, &b),
            A::HBAR_DEGENERATION,
            None,
        );
    } else {
        t.skip("ℏ¹ part of [a, b]", A::HBAR_DEGENERATION, "needs M ≥ 2");
    }
}

fn run_trial(s: &Scenario, index: u64) -> Vec<CheckRecord> {
    let mut t = Trial {
        index,
        seed: s.seed,
        records: Vec::new(),
    };
    let mut rng = trial_rng(s.seed, index);
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        match &s.params {
            Params::Matrix {
                n,
                d,
                bound,
                retries,
            } => match s.kind {
                ScenarioKind::IdentitySuite => {
                    trial_identities(&mut t, &mut rng, *n, *d, *bound, *retries)
                }
                k => trial_matrix(&mut t, &mut rng, k, *n, *d, *bound, *retries),
            },
            Params::Poisson {
                n,
                degree,
                bound,
                retries,
            } => match s.kind {
                ScenarioKind::DualNumber => {
                    trial_dual(&mut t, &mut rng, *n, *degree, *bound, *retries)
                }
                _ => trial_poisson(&mut t, &mut rng, *n, *degree, *bound, *retries),
            },
            Params::Grassmann { arity, dim, bound } => {
                trial_grassmann(&mut t, &mut rng, *arity, *dim, *bound)
            }
            Params::Hyperplane { g, bound, retries } => {
                trial_hyperplane(&mut t, &mut rng, *g, *bound, *retries)
            }
            Params::Cone { degree, bound } => trial_cone(&mut t, &mut rng, *degree, *bound),
            Params::Weyl {
                size,
                t: op,
                points,
                bound,
            } => trial_weyl(&mut t, &mut rng, s.kind, *size, op, points, *bound),
            Params::Hbar {
                f, order, bound, ..
            } => trial_hbar(&mut t, &mut rng, f, *order, *bound),
        }
        t.records
    }));
    outcome.unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        vec![CheckRecord::fail(
            format!("trial {index}: internal error"),
            "",
            msg,
        )]
    })
}

/// Runs every trial of `s`. With `jobs`, a dedicated pool of that many
/// threads is used; otherwise the global pool.
pub fn run_scenario(s: &Scenario, jobs: Option<usize>) -> Report {
    let start = Instant::now();
    let work = || -> Vec<CheckRecord> {
        let per_trial: Vec<Vec<CheckRecord>> = (0..s.trials)
            .into_par_iter()
            .map(|i| run_trial(s, i))
            .collect();
        per_trial.into_iter().flatten().collect()
    };
    let checks = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    };
    Report {
        scenario: ScenarioEcho {
            kind: s.kind.name().into(),
            params: s.echo.clone(),
        },
        seed: s.seed,
        checks,
        duration_ms: start.elapsed().as_millis() as u64,
        version: crate::VERSION.into(),
    }
}

/// One line: `kind: pass (12 pass, 0 fail, 0 skipped)` or the first failure.
pub fn summary_line(r: &Report) -> String {
    let counts = format!(
        "{} pass, {} fail, {} skipped",
        r.count(Status::Pass),
        r.count(Status::Fail),
        r.count(Status::Skipped)
    );
    match r.failures().next() {
        None => format!("{}: pass ({counts})", r.scenario.kind),
        Some(f) => format!(
            "{}: FAIL ({counts}); first: {}: {}",
            r.scenario.kind,
            f.name,
            f.witness.as_deref().unwrap_or("")
        ),
    }
}
