//! Scenario kinds, their parameters and validation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use beauville_core::exact::Rat;
use beauville_core::quantize::HElem;
use beauville_core::weyl::RatDiffOp;
use beauville_core::RatFunc;

use crate::config::{Config, ConfigError, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScenarioKind {
    SkewMatrix,
    CorollaryLegs,
    IdentitySuite,
    PoissonClassical,
    Grassmann,
    Hyperplane,
    ConeP1,
    DualNumber,
    WeylRational,
    WeylBasis,
    HbarLocalization,
}

type ParamTable = &'static [(&'static str, &'static str)];

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 11] = [
        ScenarioKind::SkewMatrix,
        ScenarioKind::CorollaryLegs,
        ScenarioKind::IdentitySuite,
        ScenarioKind::PoissonClassical,
        ScenarioKind::Grassmann,
        ScenarioKind::Hyperplane,
        ScenarioKind::ConeP1,
        ScenarioKind::DualNumber,
        ScenarioKind::WeylRational,
        ScenarioKind::WeylBasis,
        ScenarioKind::HbarLocalization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::SkewMatrix => "skew-matrix",
            ScenarioKind::CorollaryLegs => "corollary-legs",
            ScenarioKind::IdentitySuite => "identity-suite",
            ScenarioKind::PoissonClassical => "poisson-classical",
            ScenarioKind::Grassmann => "grassmann",
            ScenarioKind::Hyperplane => "hyperplane",
            ScenarioKind::ConeP1 => "cone-p1",
            ScenarioKind::DualNumber => "dual-number",
            ScenarioKind::WeylRational => "weyl-rational",
            ScenarioKind::WeylBasis => "weyl-basis",
            ScenarioKind::HbarLocalization => "hbar-localization",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            ScenarioKind::SkewMatrix => "leg-uniform matrix families: H_i = Δ_0⁻¹ Δ_i commute",
            ScenarioKind::CorollaryLegs => {
                "per-leg matrix families: commutation and Δ_i Δ_0⁻¹ Δ_j symmetry"
            }
            ScenarioKind::IdentitySuite => {
                "inverse-sum identities, exchange identity, last-leg expansion"
            }
            ScenarioKind::PoissonClassical => {
                "classical Hamiltonians Poisson-commute; fraction rules"
            }
            ScenarioKind::Grassmann => {
                "quadratic relations for decomposable forms of arity 2, 3, 4"
            }
            ScenarioKind::Hyperplane => "hyperplane through g points passes through each point",
            ScenarioKind::ConeP1 => {
                "bracket of differentials on the line: α-free, antisymmetric, Jacobi"
            }
            ScenarioKind::DualNumber => {
                "first-order deformation: associativity and commuting family"
            }
            ScenarioKind::WeylRational => {
                "commuting rational differential operators and their symbols"
            }
            ScenarioKind::WeylBasis => "cofactor construction agrees with the closed form",
            ScenarioKind::HbarLocalization => "localization of the Rees algebra at f, modulo ℏ^M",
        }
    }

    /// Accepted parameters with defaults; `trials` and `seed` are common.
    pub fn params(self) -> ParamTable {
        match self {
            ScenarioKind::SkewMatrix | ScenarioKind::CorollaryLegs => &[
                ("n", "2"),
                ("d", "2"),
                ("bound", "5"),
                ("retries", "20"),
                ("trials", "30"),
            ],
            ScenarioKind::IdentitySuite => &[
                ("n", "2"),
                ("d", "2"),
                ("bound", "5"),
                ("retries", "20"),
                ("trials", "10"),
            ],
            ScenarioKind::PoissonClassical | ScenarioKind::DualNumber => &[
                ("n", "2"),
                ("degree", "2"),
                ("bound", "5"),
                ("retries", "20"),
                ("trials", "20"),
            ],
            ScenarioKind::Grassmann => &[
                ("arity", "2"),
                ("dim", "6"),
                ("bound", "5"),
                ("trials", "100"),
            ],
            ScenarioKind::Hyperplane => &[
                ("g", "2"),
                ("bound", "5"),
                ("retries", "20"),
                ("trials", "20"),
            ],
            ScenarioKind::ConeP1 => &[("degree", "2"), ("bound", "5"), ("trials", "20")],
            ScenarioKind::WeylRational | ScenarioKind::WeylBasis => &[
                ("N", "2"),
                ("T", "d1"),
                ("points", "[]"),
                ("bound", "5"),
                ("trials", "10"),
            ],
            ScenarioKind::HbarLocalization => &[
                ("M", "5"),
                ("f", "x"),
                ("order", "2"),
                ("bound", "3"),
                ("trials", "20"),
            ],
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|k| k.name()).collect();
                ConfigError::field(
                    "kind",
                    format!("unknown kind `{s}`; expected one of {}", names.join(", ")),
                )
            })
    }
}

/// Typed parameters, one variant per kind.
#[derive(Debug, Clone)]
pub enum Params {
    Matrix {
        n: usize,
        d: usize,
        bound: i64,
        retries: u32,
    },
    Poisson {
        n: usize,
        degree: u16,
        bound: i64,
        retries: u32,
    },
    Grassmann {
        arity: usize,
        dim: usize,
        bound: i64,
    },
    Hyperplane {
        g: usize,
        bound: i64,
        retries: u32,
    },
    Cone {
        degree: u16,
        bound: i64,
    },
    Weyl {
        size: usize,
        t: RatDiffOp,
        points: Option<Vec<Rat>>,
        bound: i64,
    },
    Hbar {
        m: u32,
        f: HElem,
        order: u16,
        bound: i64,
    },
}

/// A validated scenario. `echo` holds every parameter, defaults included.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub seed: u64,
    pub trials: u64,
    pub params: Params,
    pub echo: BTreeMap<String, Value>,
}

fn scalar<'a>(vals: &'a BTreeMap<String, Value>, key: &str) -> Result<&'a str, ConfigError> {
    match vals.get(key) {
        Some(Value::Scalar(s)) => Ok(s),
        Some(Value::List(_)) => Err(ConfigError::field(key, "expected a scalar, got a list")),
        None => Err(ConfigError::field(key, "missing")),
    }
}

fn int<T: FromStr + PartialOrd + fmt::Display>(
    vals: &BTreeMap<String, Value>,
    key: &str,
    lo: T,
    hi: T,
) -> Result<T, ConfigError> {
    let s = scalar(vals, key)?;
    let v: T = s
        .parse()
        .map_err(|_| ConfigError::field(key, format!("`{s}` is not an integer")))?;
    if v < lo || v > hi {
        return Err(ConfigError::field(key, format!("{v} outside {lo}..={hi}")));
    }
    Ok(v)
}

/// Parses a one-variable operator such as `z*d1 + 2`; `x` is accepted for `z`.
pub fn parse_operator(key: &str, s: &str) -> Result<RatDiffOp, ConfigError> {
    let op =
        RatDiffOp::parse_one_var(&s.replace('x', "z")).map_err(|e| ConfigError::field(key, e))?;
    if op.is_zero() {
        return Err(ConfigError::field(key, "operator is zero"));
    }
    Ok(op)
}

fn parse_localizer(key: &str, s: &str, m: u32) -> Result<HElem, ConfigError> {
    let op = parse_operator(key, s)?;
    if op.order() != Some(0) {
        return Err(ConfigError::field(
            key,
            "f must be a polynomial in x without derivatives",
        ));
    }
    let f: RatFunc = op.coeff(&[0]);
    Ok(HElem::function(m, f))
}

impl Scenario {
    pub fn from_config(cfg: &Config) -> Result<Scenario, ConfigError> {
        let kind: ScenarioKind = match cfg.get("kind") {
            Some(Value::Scalar(s)) => s.parse()?,
            Some(_) => return Err(ConfigError::field("kind", "expected a scalar")),
            None => return Err(ConfigError::field("kind", "missing")),
        };
        let table = kind.params();
        let mut vals: BTreeMap<String, Value> = BTreeMap::new();
        for (k, v) in &cfg.entries {
            if k == "kind" || k == "seed" {
                continue;
            }
            if !table.iter().any(|(name, _)| name == k) {
                return Err(ConfigError::field(k, format!("not a parameter of {kind}")));
            }
            vals.insert(k.clone(), v.clone());
        }
        for (name, default) in table {
            if !vals.contains_key(*name) {
                let v = Config::parse(&format!("{name} = {default}"))
                    .expect("defaults parse")
                    .entries
                    .remove(*name)
                    .expect("default present");
                vals.insert(name.to_string(), v);
            }
        }
        let seed: u64 = match cfg.get("seed") {
            Some(Value::Scalar(s)) => s
                .parse()
                .map_err(|_| ConfigError::field("seed", format!("`{s}` is not a u64")))?,
            Some(_) => return Err(ConfigError::field("seed", "expected a scalar")),
            None => return Err(ConfigError::field("seed", "missing")),
        };
        let trials = int(&vals, "trials", 1u64, 100_000)?;
        let params = match kind {
            ScenarioKind::SkewMatrix
            | ScenarioKind::CorollaryLegs
            | ScenarioKind::IdentitySuite => Params::Matrix {
                n: int(&vals, "n", 1, beauville_core::ncfam::MAX_LEGS)?,
                d: int(&vals, "d", 1, 4)?,
                bound: int(&vals, "bound", 1, 1_000_000)?,
                retries: int(&vals, "retries", 0, 1000)?,
            },
            ScenarioKind::PoissonClassical | ScenarioKind::DualNumber => Params::Poisson {
                n: int(&vals, "n", 1, 4)?,
                degree: int(&vals, "degree", 1, 4)?,
                bound: int(&vals, "bound", 1, 1_000_000)?,
                retries: int(&vals, "retries", 0, 1000)?,
            },
            ScenarioKind::Grassmann => {
                let arity = int(&vals, "arity", 2, 4)?;
                Params::Grassmann {
                    arity,
                    dim: int(&vals, "dim", arity, 8)?,
                    bound: int(&vals, "bound", 1, 1_000_000)?,
                }
            }
            ScenarioKind::Hyperplane => Params::Hyperplane {
                g: int(&vals, "g", 1, 8)?,
                bound: int(&vals, "bound", 1, 1_000_000)?,
                retries: int(&vals, "retries", 0, 1000)?,
            },
            ScenarioKind::ConeP1 => Params::Cone {
                degree: int(&vals, "degree", 0, 4)?,
                bound: int(&vals, "bound", 1, 1_000_000)?,
            },
            ScenarioKind::WeylRational | ScenarioKind::WeylBasis => {
                let size = int(&vals, "N", 1, 4)?;
                let t = parse_operator("T", scalar(&vals, "T")?)?;
                let points = match vals.get("points") {
                    Some(Value::List(items)) if items.is_empty() => None,
                    Some(Value::List(items)) => {
                        let pts = items
                            .iter()
                            .map(|p| {
                                p.parse::<Rat>().map_err(|_| {
                                    ConfigError::field("points", format!("`{p}` is not rational"))
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        if pts.len() != size {
                            return Err(ConfigError::field(
                                "points",
                                format!("{} points given, N = {size}", pts.len()),
                            ));
                        }
                        Some(pts)
                    }
                    _ => return Err(ConfigError::field("points", "expected a list")),
                };
                let bound: i64 = int(&vals, "bound", 1, 1_000_000)?;
                if points.is_none() && (2 * bound + 1) < size as i64 {
                    return Err(ConfigError::field(
                        "bound",
                        "too small to draw distinct points",
                    ));
                }
                Params::Weyl {
                    size,
                    t,
                    points,
                    bound,
                }
            }
            ScenarioKind::HbarLocalization => {
                let m = int(&vals, "M", 1, 12)?;
                Params::Hbar {
                    m,
                    f: parse_localizer("f", scalar(&vals, "f")?, m)?,
                    order: int(&vals, "order", 0, 6)?,
                    bound: int(&vals, "bound", 1, 1_000_000)?,
                }
            }
        };
        Ok(Scenario {
            kind,
            seed,
            trials,
            params,
            echo: vals,
        })
    }

    /// Convenience constructor from `key = value` pairs.
    pub fn build(
        kind: ScenarioKind,
        seed: u64,
        pairs: &[(&str, &str)],
    ) -> Result<Scenario, ConfigError> {
        let mut text = format!("kind = {kind}\nseed = {seed}\n");
        for (k, v) in pairs {
            text.push_str(&format!("{k} = {v}\n"));
        }
        Self::from_config(&Config::parse(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let s = Scenario::build(ScenarioKind::Grassmann, 7, &[("arity", "4")]).unwrap();
        assert_eq!(s.trials, 100);
        assert!(matches!(
            s.params,
            Params::Grassmann {
                arity: 4,
                dim: 6,
                bound: 5
            }
        ));
        assert_eq!(s.echo["dim"], Value::Scalar("6".into()));
    }

    #[test]
    fn field_errors() {
        let e = Scenario::build(ScenarioKind::Grassmann, 1, &[("arity", "5")]).unwrap_err();
        assert!(matches!(e, ConfigError::Field { ref field, .. } if field == "arity"));
        let e = Scenario::build(ScenarioKind::Hyperplane, 1, &[("n", "2")]).unwrap_err();
        assert!(matches!(e, ConfigError::Field { ref field, .. } if field == "n"));
        let e = Scenario::from_config(&Config::parse("kind = grassmann").unwrap()).unwrap_err();
        assert!(matches!(e, ConfigError::Field { ref field, .. } if field == "seed"));
        let e =
            Scenario::from_config(&Config::parse("kind = nope\nseed = 1").unwrap()).unwrap_err();
        assert!(matches!(e, ConfigError::Field { ref field, .. } if field == "kind"));
        let e =
            Scenario::build(ScenarioKind::WeylRational, 1, &[("points", "[0, 1, 2]")]).unwrap_err();
        assert!(matches!(e, ConfigError::Field { ref field, .. } if field == "points"));
        let e = Scenario::build(ScenarioKind::HbarLocalization, 1, &[("f", "x*d1")]).unwrap_err();
        assert!(matches!(e, ConfigError::Field { ref field, .. } if field == "f"));
    }

    #[test]
    fn weyl_points_and_operator() {
        let s = Scenario::build(
            ScenarioKind::WeylRational,
            3,
            &[("points", "[0, 1]"), ("T", "z*d1 + 2")],
        )
        .unwrap();
        let Params::Weyl {
            size, t, points, ..
        } = s.params
        else {
            panic!()
        };
        assert_eq!(size, 2);
        assert_eq!(t.order(), Some(1));
        assert_eq!(points.unwrap(), vec![Rat::zero(), Rat::one()]);
    }

    #[test]
    fn every_kind_builds_with_defaults() {
        for k in ScenarioKind::ALL {
            assert_eq!(k.name().parse::<ScenarioKind>().unwrap(), k);
            Scenario::build(k, 0, &[]).unwrap();
        }
    }
}
