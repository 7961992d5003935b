use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{parse_bitstring, HammingSet, IsoPart};
use crate::error::{Error, Result};
use crate::graphs::{generate_graph, GenerationRecord, GraphKind, InteractionGraph};
use crate::hamiltonian::Schedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    LrCheck,
    Concentration,
    Isoperimetry,
    Layers,
    MaxcutAnneal,
    Ensemble,
    Gamma2,
    Bounds,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::LrCheck,
        Experiment::Concentration,
        Experiment::Isoperimetry,
        Experiment::Layers,
        Experiment::MaxcutAnneal,
        Experiment::Ensemble,
        Experiment::Gamma2,
        Experiment::Bounds,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::LrCheck => "lr-check",
            Experiment::Concentration => "concentration",
            Experiment::Isoperimetry => "isoperimetry",
            Experiment::Layers => "layers",
            Experiment::MaxcutAnneal => "maxcut-anneal",
            Experiment::Ensemble => "ensemble",
            Experiment::Gamma2 => "gamma2",
            Experiment::Bounds => "bounds",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::config("experiment", format!("unknown experiment {s:?}")))
    }
}

/// Flat key-value experiment description. Unused keys for the chosen
/// experiment are ignored; unknown keys are rejected at parse time.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,

    /// `path`, `cycle`, `complete_bipartite`, `random_regular`,
    /// `random_regular_bipartite` or `edge_list`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_list: Option<PathBuf>,

    /// Ramp breakpoints `[[t, u], ...]`; a linear ramp when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<[f64; 2]>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,

    /// Vertices of `A` for the Lieb-Robinson check.
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<usize>>,
    /// `z`, `x` (on the first vertex of `A`) or `cut` (on the first two).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<String>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    /// `i` or `ii`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ghz_contrast: Option<bool>,

    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<String>>,
    #[serde(rename = "F1", default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<Vec<String>>,
    #[serde(rename = "F2", default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<Vec<String>>,
    /// Radius of the Hamming balls used when sets are given by centres.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_limit: Option<usize>,

    /// `chebyshev` or `smoothing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly_degree: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub card_a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_o: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<usize>,
    /// Degree for the Ramanujan ratio in `bounds`; `degree` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramanujan_degree: Option<usize>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub const DEFAULT_TOL: f64 = 1e-8;

fn positive(field: &str, v: Option<f64>) -> Result<()> {
    match v {
        Some(x) if !(x > 0.0) || !x.is_finite() => Err(Error::config(field, format!("must be positive, got {x}"))),
        _ => Ok(()),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Pins `experiment` to `which`, rejecting a conflicting value.
    pub fn for_experiment(mut self, which: Experiment) -> Result<Self> {
        match self.experiment {
            Some(e) if e != which => Err(Error::config(
                "experiment",
                format!("config names {} but {} was requested", e.name(), which.name()),
            )),
            _ => {
                self.experiment = Some(which);
                Ok(self)
            }
        }
    }

    pub fn experiment(&self) -> Result<Experiment> {
        self.experiment.ok_or_else(|| Error::config("experiment", "missing"))
    }

    pub fn require<T: Clone>(&self, field: &str, value: &Option<T>) -> Result<T> {
        value.clone().ok_or_else(|| Error::config(field, "required for this experiment"))
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    pub fn t(&self) -> Result<f64> {
        self.require("T", &self.t)
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::config("seed", "a seed is required for randomized steps"))
    }

    fn graph_is_random(&self) -> bool {
        matches!(self.graph.as_deref(), Some("random_regular" | "random_regular_bipartite"))
    }

    /// Checks every field that the selected experiment reads.
    pub fn validate(&self) -> Result<()> {
        let which = self.experiment()?;
        if let Some(t) = self.t {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(Error::config("T", format!("must be a non-negative number, got {t}")));
            }
        }
        positive("tol", self.tol)?;
        positive("c", self.c)?;
        positive("kappa1", self.kappa1)?;
        positive("kappa2", self.kappa2)?;
        positive("g", self.g)?;
        if let Some(theta) = self.theta {
            if !(0.0..=0.5).contains(&theta) {
                return Err(Error::config("theta", format!("must lie in [0, 1/2], got {theta}")));
            }
        }
        if let Some(ls) = &self.l {
            if ls.is_empty() || ls.iter().any(|&l| l < 2) {
                return Err(Error::config("L", "need a non-empty list of values >= 2"));
            }
        }
        if let Some(part) = &self.part {
            self.iso_part_from(part)?;
        }
        let needs_graph = matches!(
            which,
            Experiment::LrCheck
                | Experiment::Concentration
                | Experiment::Isoperimetry
                | Experiment::Layers
                | Experiment::MaxcutAnneal
        );
        if needs_graph {
            self.graph_kind()?;
            self.schedule()?;
            self.t()?;
            if self.graph_is_random() {
                self.seed()?;
            }
        }
        match which {
            Experiment::LrCheck => {
                if self.t()? == 0.0 {
                    return Err(Error::config("T", "the Lieb-Robinson bound needs T > 0"));
                }
                self.require("L", &self.l)?;
                self.observable_name()?;
            }
            Experiment::Concentration => {
                self.require("kappa1", &self.kappa1)?;
                self.require("kappa2", &self.kappa2)?;
                self.require("c", &self.c)?;
            }
            Experiment::Isoperimetry => {
                self.require("kappa1", &self.kappa1)?;
                self.require("kappa2", &self.kappa2)?;
                if self.f.is_none() {
                    return Err(Error::config("F", "required for this experiment"));
                }
            }
            Experiment::Layers => {
                self.require("kappa1", &self.kappa1)?;
                self.require("kappa2", &self.kappa2)?;
                if self.f1.is_some() != self.f2.is_some() {
                    return Err(Error::config("F2", "give both F1 and F2 or neither"));
                }
            }
            Experiment::MaxcutAnneal => {
                if self.alpha.is_some() || self.epsilon.is_some() {
                    self.require("alpha", &self.alpha)?;
                    self.require("epsilon", &self.epsilon)?;
                    self.require("kappa1", &self.kappa1)?;
                }
            }
            Experiment::Ensemble => {
                self.require("n", &self.n)?;
                self.require("degree", &self.degree)?;
                self.require("n_samples", &self.n_samples)?;
                self.t()?;
                self.schedule()?;
                let ls = self.require("L", &self.l)?;
                if ls.len() != 1 {
                    return Err(Error::config("L", "the ensemble takes a single L"));
                }
                self.seed()?;
            }
            Experiment::Gamma2 => {
                self.family()?;
                self.require("poly_degree", &self.poly_degree)?;
                self.seed()?;
            }
            Experiment::Bounds => {}
        }
        Ok(())
    }

    pub fn graph_kind(&self) -> Result<Option<GraphKind>> {
        let name = self.require("graph", &self.graph)?;
        let n = || self.require("n", &self.n);
        let degree = || self.require("degree", &self.degree);
        Ok(Some(match name.as_str() {
            "path" => GraphKind::Path { n: n()? },
            "cycle" => GraphKind::Cycle { n: n()? },
            "complete_bipartite" => GraphKind::CompleteBipartite {
                left: self.require("left", &self.left)?,
                right: self.require("right", &self.right)?,
            },
            "random_regular" => GraphKind::RandomRegular {
                n: n()?,
                degree: degree()?,
                simple: self.simple.unwrap_or(true),
            },
            "random_regular_bipartite" => GraphKind::RandomRegularBipartite {
                n: n()?,
                degree: degree()?,
                simple: self.simple.unwrap_or(true),
            },
            "edge_list" => {
                self.require("edge_list", &self.edge_list)?;
                return Ok(None);
            }
            other => return Err(Error::config("graph", format!("unknown graph family {other:?}"))),
        }))
    }

    pub fn build_graph(&self) -> Result<(InteractionGraph, Option<GenerationRecord>)> {
        match self.graph_kind()? {
            Some(kind) => {
                let seed = if self.graph_is_random() { self.seed()? } else { self.seed.unwrap_or(0) };
                let (g, record) = generate_graph(&kind, seed)?;
                Ok((g, Some(record)))
            }
            None => {
                let path = self.require("edge_list", &self.edge_list)?;
                Ok((InteractionGraph::read_edge_list(path)?, None))
            }
        }
    }

    /// Ramp shape on `[0, 1]`; stretched to `[0, T]` by the runners.
    pub fn schedule(&self) -> Result<Schedule> {
        let ramp = match &self.schedule {
            None => Schedule::linear_ramp(1.0)?,
            Some(points) => Schedule::piecewise_linear(points.iter().map(|p| (p[0], p[1])).collect())
                .map_err(|e| Error::config("schedule", e.to_string()))?,
        };
        if !ramp.is_annealing_ramp() {
            return Err(Error::config("schedule", "ramp must start at 0, end at 1 and stay in [0, 1]"));
        }
        Ok(ramp)
    }

    pub fn observable_name(&self) -> Result<&str> {
        match self.observable.as_deref().unwrap_or("z") {
            name @ ("z" | "x" | "cut") => Ok(name),
            other => Err(Error::config("observable", format!("unknown observable {other:?}"))),
        }
    }

    fn iso_part_from(&self, part: &str) -> Result<IsoPart> {
        match part {
            "i" => Ok(IsoPart::I),
            "ii" => Ok(IsoPart::Ii),
            other => Err(Error::config("part", format!("expected \"i\" or \"ii\", got {other:?}"))),
        }
    }

    pub fn iso_part(&self) -> Result<IsoPart> {
        self.iso_part_from(self.part.as_deref().unwrap_or("ii"))
    }

    pub fn family(&self) -> Result<&str> {
        match self.family.as_deref().unwrap_or("chebyshev") {
            name @ ("chebyshev" | "smoothing") => Ok(name),
            other => Err(Error::config("family", format!("unknown family {other:?}"))),
        }
    }

    /// Union of Hamming balls of radius `radius` (default 0) around the
    /// listed bitstrings.
    pub fn hamming_set(&self, field: &str, centres: &[String], n0: usize) -> Result<HammingSet> {
        let radius = self.radius.unwrap_or(0);
        let mut mask = vec![false; 1usize << n0.min(crate::distributions::HAMMING_LIMIT)];
        for s in centres {
            if s.len() != n0 {
                return Err(Error::config(field, format!("bitstring {s:?} does not have length {n0}")));
            }
            let x = parse_bitstring(s).map_err(|e| Error::config(field, e.to_string()))?;
            for y in HammingSet::ball(n0, x, radius)?.members() {
                mask[y] = true;
            }
        }
        HammingSet::from_mask(n0, mask)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_toml() {
        let cfg = ExperimentConfig::from_toml("graph = \"cycle\"\nn = 8\nT = 0.5\nL = [2, 3]\n").unwrap();
        let cfg = cfg.for_experiment(Experiment::LrCheck).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.l, Some(vec![2, 3]));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::from_toml("graph = \"cycle\"\nbogus = 1\n").is_err());
        let cfg = ExperimentConfig::from_toml("graph = \"cycle\"\nn = 8\nT = -1.0\nL = [2]\n")
            .unwrap()
            .for_experiment(Experiment::LrCheck)
            .unwrap();
        match cfg.validate() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "T"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn random_graph_needs_seed() {
        let cfg = ExperimentConfig::from_toml(
            "graph = \"random_regular\"\nn = 10\ndegree = 3\nT = 0.1\nkappa1 = 0.5\nkappa2 = 0.3\nc = 1.0\n",
        )
        .unwrap()
        .for_experiment(Experiment::Concentration)
        .unwrap();
        match cfg.validate() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "seed"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn experiment_names() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        let cfg = ExperimentConfig {
            experiment: Some(Experiment::Bounds),
            ..Default::default()
        };
        assert!(cfg.for_experiment(Experiment::Gamma2).is_err());
    }
}
