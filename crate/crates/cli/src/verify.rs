//! The acceptance suite: eleven criteria, each a set of scenarios plus a
//! few fixed instances. A criterion passes when no check fails.

use std::time::{Duration, Instant};

use beauville_core::exact::QMatrix;
use beauville_core::ncfam::{bracket, check_inverse_sum_identity, check_inverse_sum_vanishing};

use crate::report::{CheckRecord, Report, Status};
use crate::run::{anchors, run_scenario};
use crate::scenario::{Scenario, ScenarioKind};

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    /// Wall-clock budget for the whole criterion, if any.
    pub budget: Option<Duration>,
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        title: "leg-uniform matrix families commute",
        budget: Some(Duration::from_secs(120)),
    },
    Criterion {
        id: 2,
        title: "inverse-sum, exchange and expansion identities",
        budget: None,
    },
    Criterion {
        id: 3,
        title: "per-leg matrix families commute",
        budget: Some(Duration::from_secs(120)),
    },
    Criterion {
        id: 4,
        title: "classical Hamiltonians Poisson-commute",
        budget: Some(Duration::from_secs(60)),
    },
    Criterion {
        id: 5,
        title: "Grassmann quadratic relations",
        budget: None,
    },
    Criterion {
        id: 6,
        title: "hyperplane incidence",
        budget: None,
    },
    Criterion {
        id: 7,
        title: "dual-number deformation",
        budget: None,
    },
    Criterion {
        id: 8,
        title: "commuting rational differential operators",
        budget: None,
    },
    Criterion {
        id: 9,
        title: "cofactor and closed-form constructions agree",
        budget: None,
    },
    Criterion {
        id: 10,
        title: "ℏ-localization modulo ℏ^M",
        budget: None,
    },
    Criterion {
        id: 11,
        title: "cone bracket on the projective line",
        budget: None,
    },
];

/// The operator `z∂ + c` used in the operator criteria.
pub const EULER_T: &str = "z*d1 + 3/2";

fn sc(kind: ScenarioKind, seed: u64, pairs: &[(&str, &str)]) -> Scenario {
    Scenario::build(kind, seed, pairs).expect("built-in scenario is valid")
}

/// Scenarios run for criterion `id`.
pub fn scenarios(id: u8) -> Vec<Scenario> {
    use ScenarioKind::*;
    let matrix_regime = [("2", "2"), ("3", "2"), ("4", "2"), ("2", "3"), ("3", "3")];
    let ts = ["d1", "d2", EULER_T];
    match id {
        1 | 3 => {
            let kind = if id == 1 { SkewMatrix } else { CorollaryLegs };
            matrix_regime
                .iter()
                .enumerate()
                .map(|(i, (n, d))| {
                    sc(
                        kind,
                        100 * id as u64 + i as u64,
                        &[("n", n), ("d", d), ("trials", "30")],
                    )
                })
                .collect()
        }
        2 => ["2", "3", "4"]
            .iter()
            .enumerate()
            .map(|(i, n)| {
                sc(
                    IdentitySuite,
                    200 + i as u64,
                    &[("n", n), ("d", "2"), ("trials", "10")],
                )
            })
            .collect(),
        4 => ["2", "3"]
            .iter()
            .enumerate()
            .map(|(i, n)| {
                sc(
                    PoissonClassical,
                    400 + i as u64,
                    &[("n", n), ("degree", "2"), ("trials", "20")],
                )
            })
            .collect(),
        5 => ["2", "3", "4"]
            .iter()
            .enumerate()
            .map(|(i, a)| {
                sc(
                    Grassmann,
                    500 + i as u64,
                    &[("arity", a), ("dim", "6"), ("trials", "100")],
                )
            })
            .collect(),
        6 => ["1", "2", "3", "4"]
            .iter()
            .enumerate()
            .map(|(i, g)| sc(Hyperplane, 600 + i as u64, &[("g", g), ("trials", "20")]))
            .collect(),
        7 => vec![
            sc(DualNumber, 700, &[("n", "2"), ("trials", "50")]),
            sc(DualNumber, 701, &[("n", "3"), ("trials", "10")]),
        ],
        8 => {
            let mut out = Vec::new();
            for (i, n) in ["2", "3"].iter().enumerate() {
                for (j, t) in ts.iter().enumerate() {
                    let seed = 800 + 10 * i as u64 + j as u64;
                    out.push(sc(
                        WeylRational,
                        seed,
                        &[("N", n), ("T", t), ("trials", "10")],
                    ));
                }
            }
            out
        }
        9 => {
            let mut out = Vec::new();
            for (i, n) in ["2", "3"].iter().enumerate() {
                for (j, t) in ts.iter().enumerate() {
                    let seed = 900 + 10 * i as u64 + j as u64;
                    out.push(sc(WeylBasis, seed, &[("N", n), ("T", t), ("trials", "5")]));
                }
            }
            out
        }
        10 => {
            let mut out = Vec::new();
            for (i, m) in ["3", "4", "5"].iter().enumerate() {
                for (j, f) in ["x", "x^2 + 1"].iter().enumerate() {
                    let seed = 1000 + 10 * i as u64 + j as u64;
                    out.push(sc(
                        HbarLocalization,
                        seed,
                        &[("M", m), ("f", f), ("trials", "20")],
                    ));
                }
            }
            out
        }
        11 => vec![sc(ConeP1, 1100, &[("trials", "20")])],
        _ => Vec::new(),
    }
}

/// Fixed instances checked alongside the random scenarios.
fn fixed_checks(id: u8) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    if id == 2 {
        // f = [[1,1],[0,1]], g = [[1,0],[1,1]]
        let f = QMatrix::from_ints(2, 2, &[1, 1, 0, 1]);
        let g = QMatrix::from_ints(2, 2, &[1, 0, 1, 1]);
        let fs = [f, g];
        let rank = bracket(&fs, &[1, 2], 2, 2).map(|b| b.rank()).unwrap_or(0);
        let cases = [
            (
                "fixed pair: inverse sum = 1",
                anchors::INV_SUM_ID,
                check_inverse_sum_identity(&fs),
            ),
            (
                "fixed pair: inverse sum on leg 1 = 0",
                anchors::INV_SUM_ZERO,
                check_inverse_sum_vanishing(&fs),
            ),
        ];
        for (name, anchor, r) in cases {
            out.push(match r {
                Ok(v) if v.passed() => CheckRecord::pass(name, anchor),
                Ok(v) => CheckRecord::fail(name, anchor, v.to_string()),
                Err(e) => {
                    CheckRecord::fail(name, anchor, format!("{e}: [f, g] has rank {rank} of 4"))
                }
            });
        }
    }
    out
}

pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub reports: Vec<Report>,
    pub extra: Vec<CheckRecord>,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    fn all_checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.reports
            .iter()
            .flat_map(|r| r.checks.iter())
            .chain(self.extra.iter())
    }

    pub fn passed(&self) -> bool {
        self.all_checks().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.all_checks().filter(|c| c.status == s).count()
    }

    /// Notes about resampled draws, one per affected check group.
    pub fn resample_notes(&self) -> Vec<String> {
        let mut notes: Vec<String> = Vec::new();
        for r in &self.reports {
            for c in &r.checks {
                if let Some(n) = c.note.as_ref().filter(|n| n.starts_with("resampled")) {
                    let line = format!("{} seed {}: {}", r.scenario.kind, r.seed, n);
                    if notes.last() != Some(&line) {
                        notes.push(line);
                    }
                }
            }
        }
        notes
    }

    pub fn first_failure(&self) -> Option<String> {
        for r in &self.reports {
            if let Some(c) = r.failures().next() {
                return Some(format!(
                    "{} seed {}: {}: {}",
                    r.scenario.kind,
                    r.seed,
                    c.name,
                    c.witness.as_deref().unwrap_or("")
                ));
            }
        }
        self.extra
            .iter()
            .find(|c| c.status == Status::Fail)
            .map(|c| format!("{}: {}", c.name, c.witness.as_deref().unwrap_or("")))
    }

    /// `criterion N [PASS|FAIL] title: counts; first failure`.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {:>2} [{verdict}] {}: {} pass, {} fail, {} skipped in {:.1}s",
            self.id,
            self.title,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped),
            self.elapsed.as_secs_f64()
        );
        if let Some(f) = self.first_failure() {
            s.push_str(&format!("; first failure: {f}"));
        }
        s
    }
}

pub fn run_criterion(id: u8, jobs: Option<usize>) -> CriterionOutcome {
    let c = CRITERIA
        .iter()
        .find(|c| c.id == id)
        .expect("criterion id in 1..=11");
    let start = Instant::now();
    let reports: Vec<Report> = scenarios(id)
        .iter()
        .map(|s| run_scenario(s, jobs))
        .collect();
    let mut extra = fixed_checks(id);
    let elapsed = start.elapsed();
    if let Some(budget) = c.budget {
        let name = format!("completes within {}s", budget.as_secs());
        extra.push(if elapsed <= budget {
            CheckRecord::pass(name, "runtime budget")
        } else {
            CheckRecord::fail(
                name,
                "runtime budget",
                format!("took {:.1}s", elapsed.as_secs_f64()),
            )
        });
    }
    // the largest operator case carries its own budget
    if id == 8 {
        if let Some(r) = reports.iter().find(|r| {
            r.scenario.params.get("N").map(|v| v.to_string()) == Some("3".into())
                && r.scenario.params.get("T").map(|v| v.to_string()) == Some("d2".into())
        }) {
            let name = "N = 3, T = d2 completes within 300s";
            extra.push(if r.duration_ms <= 300_000 {
                CheckRecord::pass(name, "runtime budget")
            } else {
                CheckRecord::fail(name, "runtime budget", format!("took {} ms", r.duration_ms))
            });
        }
    }
    CriterionOutcome {
        id,
        title: c.title,
        reports,
        extra,
        elapsed,
    }
}

/// All criteria in order.
pub fn verify_all(jobs: Option<usize>) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.id, jobs)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_criterion_has_work() {
        for c in &CRITERIA {
            assert!(
                !scenarios(c.id).is_empty() || !fixed_checks(c.id).is_empty(),
                "criterion {}",
                c.id
            );
        }
    }

    #[test]
    fn fixed_pair_reports_rank() {
        let recs = fixed_checks(2);
        assert_eq!(recs.len(), 2);
        for r in recs {
            assert_eq!(r.status, Status::Fail);
            assert!(r.witness.unwrap().contains("rank 2 of 4"));
        }
    }
}
