//! Named colored Tverberg statements, run against concrete configurations.

use std::time::Instant;

use serde_json::{json, Map, Value};

use super::certificate::{certified, IntersectionCertificate};
use super::config::{random_config, ColoredConfig};
use super::partition::{PartitionMode, RainbowPartition, RainbowPartitions};
use super::search::stochastic_search;
use crate::degree::is_prime;
use crate::error::{Error, Result};

/// Coordinates of seeded configurations lie in `[-1000, 1000]`.
pub const DEFAULT_COORD_BOUND: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// `d + 3` points in `R^d`: one class of 3, `d` singletons; `r = 2`.
    ColoredRadon,
    /// `d` classes of `r - 1` and one class of `2r - 1` in `R^d`, `r` prime.
    K1,
    /// `l` classes of `r - 1` and `k` of `2r - 1`, with
    /// `(r-1)(d-l+1) + 1 <= rk`, `r` prime.
    MixedA,
    /// `l` classes of `r - 1` and `k` of `p`, `r = 2p - 1` prime, with
    /// `(r-1)(d-l+1) + 1 <= pk`.
    MixedB,
    /// `K_{3,3}` in the plane: two crossing rainbow edges.
    K33,
    /// `K_{3,3,3}` in the plane: three rainbow triangles with a common point.
    K333,
    /// `K_{5,5,5}` in space: three rainbow triangles with a common point.
    K555,
    /// `K_{4,4,4,4}` in space: four rainbow tetrahedra with a common point.
    K4444,
    /// `(r-1)(d+1) + 1` points of distinct colors: Tverberg's theorem.
    ClassicTverberg,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 9] = [
        ScenarioKind::ColoredRadon,
        ScenarioKind::K1,
        ScenarioKind::MixedA,
        ScenarioKind::MixedB,
        ScenarioKind::K33,
        ScenarioKind::K333,
        ScenarioKind::K555,
        ScenarioKind::K4444,
        ScenarioKind::ClassicTverberg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::ColoredRadon => "colored_radon",
            ScenarioKind::K1 => "k1",
            ScenarioKind::MixedA => "mixed_A",
            ScenarioKind::MixedB => "mixed_B",
            ScenarioKind::K33 => "K33",
            ScenarioKind::K333 => "K333",
            ScenarioKind::K555 => "K555",
            ScenarioKind::K4444 => "K4444",
            ScenarioKind::ClassicTverberg => "classic_tverberg",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        let key = name.to_ascii_lowercase().replace('-', "_");
        Self::ALL.into_iter().find(|k| k.name().to_ascii_lowercase() == key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
}

/// Evaluates `(r-1)(d-l+1) + 1 <= rk` (variant A) or `<= pk` (variant B,
/// which requires `r = 2p - 1`).
pub fn scenario_inequality(variant: Variant, r: u64, k: u64, l: u64, d: u64, p: u64) -> Result<bool> {
    if r == 0 || k == 0 || d == 0 {
        return Err(Error::Parameter("r, k and d must be positive".into()));
    }
    let lhs = (r as i128 - 1) * (d as i128 - l as i128 + 1) + 1;
    let rhs = match variant {
        Variant::A => r as i128 * k as i128,
        Variant::B => {
            if p == 0 || r != 2 * p - 1 {
                return Err(Error::Parameter(format!("variant B needs r = 2p - 1, got r = {r}, p = {p}")));
            }
            p as i128 * k as i128
        }
    };
    Ok(lhs <= rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Stochastic,
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Stochastic => "stochastic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub r: usize,
    pub d: usize,
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub mode: SearchMode,
    /// Maximum number of LP evaluations.
    pub budget: u64,
}

impl ScenarioSpec {
    fn base(kind: ScenarioKind, r: usize, d: usize) -> Self {
        ScenarioSpec { kind, r, d, k: 0, l: 0, p: 0, mode: SearchMode::Exhaustive, budget: u64::MAX }
    }

    pub fn colored_radon(d: usize) -> Self {
        Self::base(ScenarioKind::ColoredRadon, 2, d)
    }

    pub fn k1(r: usize, d: usize) -> Self {
        ScenarioSpec { k: 1, l: d, ..Self::base(ScenarioKind::K1, r, d) }
    }

    pub fn mixed_a(r: usize, d: usize, l: usize, k: usize) -> Self {
        ScenarioSpec { k, l, ..Self::base(ScenarioKind::MixedA, r, d) }
    }

    pub fn mixed_b(p: usize, d: usize, l: usize, k: usize) -> Self {
        ScenarioSpec { k, l, p, ..Self::base(ScenarioKind::MixedB, (2 * p).saturating_sub(1), d) }
    }

    pub fn k33() -> Self {
        Self::base(ScenarioKind::K33, 2, 2)
    }

    pub fn k333() -> Self {
        Self::base(ScenarioKind::K333, 3, 2)
    }

    pub fn k555() -> Self {
        Self::base(ScenarioKind::K555, 3, 3)
    }

    pub fn k4444() -> Self {
        Self::base(ScenarioKind::K4444, 4, 3)
    }

    pub fn classic_tverberg(r: usize, d: usize) -> Self {
        Self::base(ScenarioKind::ClassicTverberg, r, d)
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Class sizes required by the statement, in color order.
    pub fn class_plan(&self) -> Vec<usize> {
        let r = self.r;
        match self.kind {
            ScenarioKind::ColoredRadon => std::iter::once(3).chain(std::iter::repeat(1).take(self.d)).collect(),
            ScenarioKind::K1 => std::iter::repeat(r.saturating_sub(1)).take(self.d).chain([2 * r - 1]).collect(),
            ScenarioKind::MixedA => std::iter::repeat(r.saturating_sub(1))
                .take(self.l)
                .chain(std::iter::repeat(2 * r - 1).take(self.k))
                .collect(),
            ScenarioKind::MixedB => std::iter::repeat(r.saturating_sub(1))
                .take(self.l)
                .chain(std::iter::repeat(self.p).take(self.k))
                .collect(),
            ScenarioKind::K33 => vec![3, 3],
            ScenarioKind::K333 => vec![3, 3, 3],
            ScenarioKind::K555 => vec![5, 5, 5],
            ScenarioKind::K4444 => vec![4, 4, 4, 4],
            ScenarioKind::ClassicTverberg => vec![1; (r.saturating_sub(1)) * (self.d + 1) + 1],
        }
    }

    /// Checks the hypotheses of the statement before anything is searched.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(format!("{}: {msg}", self.kind.name())));
        if self.budget == 0 {
            return bad("budget must be positive".into());
        }
        if self.d == 0 {
            return bad("dimension must be positive".into());
        }
        if self.r < 2 {
            return bad(format!("need r >= 2, got {}", self.r));
        }
        let (r, k, l, d, p) = (self.r as u64, self.k as u64, self.l as u64, self.d as u64, self.p as u64);
        match self.kind {
            ScenarioKind::K1 | ScenarioKind::MixedA | ScenarioKind::MixedB if !is_prime(r) => {
                bad(format!("r = {r} is not prime"))
            }
            ScenarioKind::K1 | ScenarioKind::MixedA if self.r == 2 && self.l == 0 && self.k == 0 => {
                bad("no color classes".into())
            }
            ScenarioKind::MixedA | ScenarioKind::MixedB if self.k == 0 => bad("need k >= 1".into()),
            ScenarioKind::MixedA if !scenario_inequality(Variant::A, r, k, l, d, p)? => {
                bad(format!("(r-1)(d-l+1)+1 <= rk fails for r={r}, d={d}, l={l}, k={k}"))
            }
            ScenarioKind::MixedB if !scenario_inequality(Variant::B, r, k, l, d, p)? => {
                bad(format!("(r-1)(d-l+1)+1 <= pk fails for r={r}, p={p}, d={d}, l={l}, k={k}"))
            }
            _ => Ok(()),
        }
    }

    pub fn params_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("r".into(), json!(self.r));
        m.insert("d".into(), json!(self.d));
        match self.kind {
            ScenarioKind::K1 => {}
            ScenarioKind::MixedA => {
                m.insert("l".into(), json!(self.l));
                m.insert("k".into(), json!(self.k));
            }
            ScenarioKind::MixedB => {
                m.insert("p".into(), json!(self.p));
                m.insert("l".into(), json!(self.l));
                m.insert("k".into(), json!(self.k));
            }
            _ => {}
        }
        m.insert("classes".into(), json!(self.class_plan()));
        m.insert("mode".into(), json!(self.mode.name()));
        if self.budget != u64::MAX {
            m.insert("budget".into(), json!(self.budget));
        }
        Value::Object(m)
    }
}

/// Where the configuration comes from; the seed also drives stochastic
/// search.
#[derive(Debug, Clone)]
pub enum ScenarioInput {
    Seed(u64),
    Config(ColoredConfig, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// A verified certificate was found.
    Found,
    /// Exhaustive search found no intersecting partition.
    Refuted,
    /// The budget ran out first.
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Found => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub spec: ScenarioSpec,
    pub outcome: Outcome,
    pub config: ColoredConfig,
    pub partition: Option<RainbowPartition>,
    pub certificate: Option<IntersectionCertificate>,
    pub lp_calls: u64,
    pub elapsed_ms: u64,
    pub seed: u64,
}

impl ScenarioReport {
    /// `Some(true)` found, `Some(false)` refuted, `None` inconclusive.
    pub fn found(&self) -> Option<bool> {
        match self.outcome {
            Outcome::Found => Some(true),
            Outcome::Refuted => Some(false),
            Outcome::Inconclusive => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("scenario".into(), json!(self.spec.kind.name()));
        m.insert("params".into(), self.spec.params_json());
        m.insert("found".into(), json!(self.found()));
        m.insert("partition".into(), json!(self.partition.as_ref().map(|p| p.blocks().to_vec())));
        m.insert("point".into(), self.certificate.as_ref().map_or(Value::Null, |c| c.point_json()));
        m.insert("weights".into(), self.certificate.as_ref().map_or(Value::Null, |c| c.weights_json()));
        m.insert("lp_calls".into(), json!(self.lp_calls));
        m.insert("elapsed_ms".into(), json!(self.elapsed_ms));
        m.insert("seed".into(), json!(self.seed));
        if self.outcome == Outcome::Refuted {
            m.insert("counterexample".into(), serde_json::to_value(self.config.to_document()).expect("config serializes"));
        }
        Value::Object(m)
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Searches `config` (or a seeded random configuration of the right shape)
/// for `r` rainbow blocks whose hulls meet.
///
/// Exhaustive mode walks maximal rainbow partitions in canonical order and
/// reports the first certified one; if none exists the instance is a
/// counterexample. Stochastic mode may only report found or inconclusive.
pub fn run_scenario(spec: &ScenarioSpec, input: ScenarioInput) -> Result<ScenarioReport> {
    let start = Instant::now();
    spec.validate()?;
    let plan = spec.class_plan();
    let (config, seed) = match input {
        ScenarioInput::Seed(seed) => (random_config(spec.d, &plan, seed, DEFAULT_COORD_BOUND)?, seed),
        ScenarioInput::Config(config, seed) => (config, seed),
    };
    if config.dim() != spec.d {
        return Err(Error::Parameter(format!(
            "{} expects dimension {}, config has {}",
            spec.kind.name(),
            spec.d,
            config.dim()
        )));
    }
    if sorted(config.class_sizes().to_vec()) != sorted(plan.clone()) {
        return Err(Error::Parameter(format!(
            "{} expects class sizes {plan:?}, config has {:?}",
            spec.kind.name(),
            config.class_sizes()
        )));
    }

    let mut lp_calls = 0u64;
    let mut hit = None;
    let mut outcome = Outcome::Refuted;
    match spec.mode {
        SearchMode::Exhaustive => {
            for partition in RainbowPartitions::new(&config, spec.r, PartitionMode::Maximal) {
                if lp_calls >= spec.budget {
                    outcome = Outcome::Inconclusive;
                    break;
                }
                lp_calls += 1;
                if let Some(cert) = certified(&config, &partition)? {
                    hit = Some((partition, cert));
                    break;
                }
            }
        }
        SearchMode::Stochastic => {
            let out = stochastic_search(&config, spec.r, spec.budget, seed)?;
            lp_calls = out.lp_calls;
            hit = out.found;
            outcome = Outcome::Inconclusive;
        }
    }
    let (partition, certificate) = match hit {
        Some((p, c)) => {
            outcome = Outcome::Found;
            (Some(p), Some(c))
        }
        None => (None, None),
    };
    Ok(ScenarioReport {
        spec: spec.clone(),
        outcome,
        config,
        partition,
        certificate,
        lp_calls,
        elapsed_ms: start.elapsed().as_millis() as u64,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{parse_config, parse_rational, verify_certificate};

    #[test]
    fn inequality_examples() {
        assert!(scenario_inequality(Variant::A, 3, 1, 2, 2, 0).unwrap());
        // With l = 0 the inequality is r <= d / (d - k + 1): 3 <= 2 fails.
        assert!(!scenario_inequality(Variant::A, 3, 2, 0, 2, 0).unwrap());
        assert!(scenario_inequality(Variant::A, 2, 1, 2, 2, 0).unwrap());
        assert!(scenario_inequality(Variant::B, 5, 7, 0, 4, 3).unwrap());
        assert!(!scenario_inequality(Variant::B, 5, 6, 0, 4, 3).unwrap());
        assert!(matches!(scenario_inequality(Variant::B, 5, 7, 0, 4, 2), Err(Error::Parameter(_))));
    }

    #[test]
    fn plans() {
        assert_eq!(ScenarioSpec::colored_radon(2).class_plan(), vec![3, 1, 1]);
        assert_eq!(ScenarioSpec::k1(2, 3).class_plan(), vec![1, 1, 1, 3]);
        assert_eq!(ScenarioSpec::k1(3, 2).class_plan(), vec![2, 2, 5]);
        assert_eq!(ScenarioSpec::mixed_a(3, 2, 2, 1).class_plan(), vec![2, 2, 5]);
        assert_eq!(ScenarioSpec::mixed_b(3, 4, 0, 7).class_plan(), vec![3; 7]);
        assert_eq!(ScenarioSpec::classic_tverberg(3, 2).class_plan().len(), 7);
        for kind in ScenarioKind::ALL {
            assert_eq!(ScenarioKind::from_name(kind.name()), Some(kind));
        }
        assert_eq!(ScenarioKind::from_name("colored-radon"), Some(ScenarioKind::ColoredRadon));
        assert_eq!(ScenarioKind::from_name("mixed-a"), Some(ScenarioKind::MixedA));
    }

    #[test]
    fn validation() {
        assert!(ScenarioSpec::mixed_b(3, 4, 0, 7).validate().is_ok());
        assert!(ScenarioSpec::mixed_b(3, 4, 0, 6).validate().is_err());
        assert!(ScenarioSpec::mixed_b(4, 4, 0, 9).validate().is_ok());
        assert!(ScenarioSpec::mixed_b(5, 4, 0, 9).validate().is_err());
        assert!(ScenarioSpec::k1(4, 2).validate().is_err());
        assert!(ScenarioSpec::mixed_a(3, 2, 0, 2).validate().is_err());
        assert!(ScenarioSpec::k333().with_budget(0).validate().is_err());
        let wrong = parse_config(r#"{"dim":2,"points":[{"x":["0","0"],"color":0},{"x":["1","0"],"color":1}]}"#).unwrap();
        assert!(run_scenario(&ScenarioSpec::k333(), ScenarioInput::Config(wrong, 0)).is_err());
    }

    #[test]
    fn documented_radon_instance() {
        let c = parse_config(r#"{"dim":1,"points":[{"x":["0"],"color":0},{"x":["1"],"color":0},{"x":["2"],"color":0},{"x":["5"],"color":1}]}"#).unwrap();
        let report = run_scenario(&ScenarioSpec::colored_radon(1), ScenarioInput::Config(c.clone(), 0)).unwrap();
        assert_eq!(report.found(), Some(true));
        let p = report.partition.as_ref().unwrap();
        let cert = report.certificate.as_ref().unwrap();
        assert!(verify_certificate(&c, p, cert));
        assert_eq!(p.blocks(), [vec![1, 3], vec![2]]);
        assert_eq!(cert.point, vec![parse_rational("2").unwrap()]);
        let json = report.to_json();
        assert_eq!(json["found"], json!(true));
        assert_eq!(json["point"], json!(["2"]));
        assert_eq!(json["scenario"], json!("colored_radon"));
    }

    #[test]
    fn seeded_classics() {
        for seed in 0..20 {
            for spec in [ScenarioSpec::k33(), ScenarioSpec::k333(), ScenarioSpec::colored_radon(3)] {
                let report = run_scenario(&spec, ScenarioInput::Seed(seed)).unwrap();
                assert_eq!(report.outcome, Outcome::Found, "{} seed {seed}", spec.kind.name());
                assert!(verify_certificate(
                    &report.config,
                    report.partition.as_ref().unwrap(),
                    report.certificate.as_ref().unwrap()
                ));
            }
        }
    }

    #[test]
    fn stochastic_never_refutes() {
        let spec = ScenarioSpec::k333().with_mode(SearchMode::Stochastic).with_budget(1);
        let report = run_scenario(&spec, ScenarioInput::Seed(1)).unwrap();
        assert_ne!(report.outcome, Outcome::Refuted);
        let spec = ScenarioSpec::k333().with_mode(SearchMode::Exhaustive).with_budget(1);
        let report = run_scenario(&spec, ScenarioInput::Seed(1)).unwrap();
        assert_ne!(report.outcome, Outcome::Refuted);
    }
}

