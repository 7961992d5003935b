//! Exact output distributions and the bound reports built on them.
//!
//! Bitstrings are written with qubit 0 first: character `k` of the string is
//! bit `k` of the basis index.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::StateVector;

/// Largest cube handled by the exhaustive set operations.
pub const HAMMING_LIMIT: usize = 20;
/// Slack on every reported inequality.
pub const BOUND_SLACK: f64 = 1e-9;

pub fn bitstring(x: usize, n0: usize) -> String {
    (0..n0).map(|k| if (x >> k) & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str) -> Result<usize> {
    s.chars().enumerate().try_fold(0usize, |acc, (k, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << k)),
        _ => Err(Error::Parse(format!("bitstring {s:?} contains {ch:?}"))),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputDistribution {
    n0: usize,
    probs: Vec<f64>,
}

impl OutputDistribution {
    pub fn from_probs(n0: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1 << n0 {
            return Err(Error::DimensionMismatch {
                expected: 1 << n0,
                got: probs.len(),
            });
        }
        if let Some(bad) = probs.iter().find(|&&p| !(p >= 0.0)) {
            return Err(Error::domain("probability", format!("negative or NaN entry {bad}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain("probability", format!("sums to {total}")));
        }
        Ok(OutputDistribution { n0, probs })
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: usize) -> f64 {
        self.probs[x]
    }

    pub fn mass(&self, set: &HammingSet) -> f64 {
        set.members().map(|x| self.probs[x]).fold(0.0, |acc, p| acc + p)
    }

    /// Marginal on the first `n0` bits.
    pub fn marginal(&self, n0: usize) -> Result<Self> {
        if n0 > self.n0 {
            return Err(Error::domain("n0", format!("{n0} exceeds {}", self.n0)));
        }
        let mut probs = vec![0.0; 1 << n0];
        let mask = (1 << n0) - 1;
        for (x, p) in self.probs.iter().enumerate() {
            probs[x & mask] += p;
        }
        Ok(OutputDistribution { n0, probs })
    }

    /// `max_x |p(x) - p(x̄)|`.
    pub fn flip_asymmetry(&self) -> f64 {
        let all = (1usize << self.n0) - 1;
        (0..self.probs.len())
            .map(|x| (self.probs[x] - self.probs[x ^ all]).abs())
            .fold(0.0, f64::max)
    }

    /// Seeded shot counts, for illustration only.
    pub fn sample(&self, shots: usize, seed: u64) -> Result<BTreeMap<String, u64>> {
        let index = WeightedIndex::new(&self.probs).map_err(|e| Error::domain("probability", e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(bitstring(index.sample(&mut rng), self.n0)).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// CSV with header `bitstring,probability`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,probability\n");
        for (x, p) in self.probs.iter().enumerate() {
            let _ = writeln!(out, "{},{}", bitstring(x, self.n0), p);
        }
        out
    }
}

/// Exact distribution of the first `n0` qubits.
pub fn output_distribution(psi: &StateVector, n0: usize) -> Result<OutputDistribution> {
    let n = psi.n_qubits();
    if n0 > n {
        return Err(Error::domain("n0", format!("{n0} exceeds the register size {n}")));
    }
    let mask = (1usize << n0) - 1;
    let mut probs = vec![0.0; 1 << n0];
    for (x, a) in psi.amplitudes().iter().enumerate() {
        probs[x & mask] += a.norm_sqr();
    }
    Ok(OutputDistribution { n0, probs })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HammingStats {
    pub mean_weight: f64,
    pub var_weight: f64,
    /// `Σ_i ⟨Z_i⟩`.
    pub magnetization_sum: f64,
}

pub fn hamming_stats(p: &OutputDistribution, psi: &StateVector) -> Result<HammingStats> {
    let n = psi.n_qubits();
    if p.n0 != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.n0 });
    }
    let mut mean = 0.0;
    let mut second = 0.0;
    for (x, &q) in p.probs.iter().enumerate() {
        let w = x.count_ones() as f64;
        mean += q * w;
        second += q * w * w;
    }
    let magnetization_sum: f64 = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(x, a)| a.norm_sqr() * (n as f64 - 2.0 * x.count_ones() as f64))
        .sum();
    let centre = (n as f64 - magnetization_sum) / 2.0;
    if (mean - centre).abs() > 1e-9 {
        return Err(Error::domain(
            "distribution",
            format!("mean weight {mean} disagrees with (n - m)/2 = {centre}"),
        ));
    }
    Ok(HammingStats {
        mean_weight: mean,
        var_weight: (second - mean * mean).max(0.0),
        magnetization_sum,
    })
}

/// Subset of `{0,1}^n0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingSet {
    n0: usize,
    mask: Vec<bool>,
}

fn check_cube(n0: usize) -> Result<()> {
    if n0 > HAMMING_LIMIT {
        return Err(Error::LimitExceeded {
            what: "Hamming cube dimension",
            limit: HAMMING_LIMIT,
            got: n0,
        });
    }
    Ok(())
}

impl HammingSet {
    pub fn new(n0: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_cube(n0)?;
        let mut mask = vec![false; 1 << n0];
        for x in members {
            if x >= mask.len() {
                return Err(Error::domain("bitstring", format!("{x} outside a cube of dimension {n0}")));
            }
            mask[x] = true;
        }
        Ok(HammingSet { n0, mask })
    }

    pub fn from_mask(n0: usize, mask: Vec<bool>) -> Result<Self> {
        check_cube(n0)?;
        if mask.len() != 1 << n0 {
            return Err(Error::DimensionMismatch {
                expected: 1 << n0,
                got: mask.len(),
            });
        }
        Ok(HammingSet { n0, mask })
    }

    /// Strings within Hamming distance `radius` of `center`.
    pub fn ball(n0: usize, center: usize, radius: usize) -> Result<Self> {
        check_cube(n0)?;
        Self::new(
            n0,
            (0..1usize << n0).filter(|x| ((x ^ center).count_ones() as usize) <= radius),
        )
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(x, _)| x)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    pub fn complement(&self) -> Self {
        HammingSet {
            n0: self.n0,
            mask: self.mask.iter().map(|m| !m).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &HammingSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !(a & b))
    }

    /// Multi-source breadth-first distances to the set; `None` when empty.
    pub fn distances(&self) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.mask.len()];
        let mut queue = VecDeque::new();
        for x in self.members() {
            dist[x] = Some(0);
            queue.push_back(x);
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0);
            for k in 0..self.n0 {
                let y = x ^ (1 << k);
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

/// `{x ∈ F : d(x, F^c) <= ℓ} ∪ {x ∉ F : d(x, F) <= ℓ}`.
pub fn hamming_boundary(f: &HammingSet, ell: usize) -> HammingSet {
    let to_f = f.distances();
    let to_complement = f.complement().distances();
    let mask = (0..f.mask.len())
        .map(|x| {
            let witness = if f.mask[x] { to_complement[x] } else { to_f[x] };
            matches!(witness, Some(d) if d as usize <= ell)
        })
        .collect();
    HammingSet { n0: f.n0, mask }
}

/// `min_{x ∈ A, y ∈ B} d_H(x, y)`; `None` if either set is empty.
pub fn hamming_set_distance(a: &HammingSet, b: &HammingSet) -> Option<u32> {
    let dist = a.distances();
    b.members().filter_map(|y| dist[y]).min()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Ge,
    Lt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Counts towards the exit status.
    Check,
    /// Deliberately outside the hypotheses; expected to violate the bound.
    Contrast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem_id: String,
    #[serde(with = "crate::floats::scalar")]
    pub lhs: f64,
    #[serde(with = "crate::floats::scalar")]
    pub rhs: f64,
    pub relation: Relation,
    #[serde(with = "crate::floats::map")]
    pub params: BTreeMap<String, f64>,
    /// Roundings, logarithm base and other conventions.
    pub records: BTreeMap<String, String>,
    pub vacuous: bool,
    pub satisfied: bool,
    /// `None` when the report has no time premise.
    pub premise_holds: Option<bool>,
    pub role: Role,
}

impl BoundReport {
    pub fn new(theorem_id: &str, lhs: f64, rhs: f64, relation: Relation) -> Self {
        let satisfied = match relation {
            Relation::Le => lhs <= rhs + BOUND_SLACK,
            Relation::Ge => lhs >= rhs - BOUND_SLACK,
            Relation::Lt => lhs < rhs + BOUND_SLACK,
        };
        BoundReport {
            theorem_id: theorem_id.to_string(),
            lhs,
            rhs,
            relation,
            params: BTreeMap::new(),
            records: BTreeMap::from([("log".to_string(), "natural".to_string())]),
            vacuous: false,
            satisfied,
            premise_holds: None,
            role: Role::Check,
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn record(mut self, name: &str, value: impl Into<String>) -> Self {
        self.records.insert(name.to_string(), value.into());
        self
    }

    /// A non-vacuous check whose premise is not known to fail and whose
    /// inequality does not hold.
    pub fn is_failure(&self) -> bool {
        self.role == Role::Check && !self.vacuous && !self.satisfied && self.premise_holds != Some(false)
    }
}

/// Time-premise inputs shared by the distribution bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Premise {
    pub kappa1: f64,
    pub kappa2: f64,
    /// Coupling bound `g`.
    pub g: f64,
    /// Maximum degree of the interaction graph (loops included).
    pub delta: usize,
    pub t: f64,
}

impl Premise {
    fn check(&self) -> Result<()> {
        if !(self.kappa1 > 0.0) {
            return Err(Error::domain("kappa1", format!("must be positive, got {}", self.kappa1)));
        }
        if !(self.kappa2 > 0.0) {
            return Err(Error::domain("kappa2", format!("must be positive, got {}", self.kappa2)));
        }
        if !(self.g > 0.0) || !self.g.is_finite() {
            return Err(Error::domain("g", format!("must be positive, got {}", self.g)));
        }
        if self.delta < 2 {
            return Err(Error::domain("delta", format!("must be at least 2, got {}", self.delta)));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::domain("T", format!("must be non-negative, got {}", self.t)));
        }
        Ok(())
    }

    fn stamp(&self, report: BoundReport, limit: f64) -> BoundReport {
        let mut report = report
            .param("kappa1", self.kappa1)
            .param("kappa2", self.kappa2)
            .param("g", self.g)
            .param("delta", self.delta as f64)
            .param("T", self.t)
            .param("T_limit", limit);
        report.premise_holds = Some(self.t <= limit);
        report
    }
}

/// `κ₁ / (8 g Δ^{(2-κ₁)/κ₁} ln Δ) · ln n`.
pub fn concentration_time_limit(kappa1: f64, g: f64, delta: usize, n: usize) -> f64 {
    let d = delta as f64;
    kappa1 / (8.0 * g * d.powf((2.0 - kappa1) / kappa1) * d.ln()) * (n as f64).ln()
}

/// `κ₁ / (4 g ln Δ Δ^{(1+2κ₁+κ₂)/κ₁}) · ln n₀`.
pub fn isoperimetry_time_limit_i(kappa1: f64, kappa2: f64, g: f64, delta: usize, n0: usize) -> f64 {
    let d = delta as f64;
    kappa1 / (4.0 * g * d.ln() * d.powf((1.0 + 2.0 * kappa1 + kappa2) / kappa1)) * (n0 as f64).ln()
}

/// `κ₁ / (4 g (Δ-1)) · ln n`.
pub fn isoperimetry_time_limit_ii(kappa1: f64, g: f64, delta: usize, n: usize) -> f64 {
    kappa1 / (4.0 * g * (delta as f64 - 1.0)) * (n as f64).ln()
}

/// `3/(2c²) · n^{-(2κ₂-κ₁)}`.
pub fn concentration_rhs(c: f64, kappa1: f64, kappa2: f64, n: usize) -> f64 {
    1.5 / (c * c) * (n as f64).powf(-(2.0 * kappa2 - kappa1))
}

/// `κ₃ = κ₁(1+κ₂) ln(1+κ₂) - 1`.
pub fn kappa3(kappa1: f64, kappa2: f64) -> f64 {
    kappa1 * (1.0 + kappa2) * (1.0 + kappa2).ln() - 1.0
}

fn rounded_up(x: f64) -> (usize, String) {
    let k = (x - 1e-12).ceil().max(0.0) as usize;
    (k, format!("ceil({x:.6}) = {k}"))
}

/// `ℓ = ⌈κ₁(1+κ₂)/2 · ln n · √n⌉`.
pub fn ell_full_register(kappa1: f64, kappa2: f64, n: usize) -> (usize, f64) {
    let nf = n as f64;
    let real = kappa1 * (1.0 + kappa2) / 2.0 * nf.ln() * nf.sqrt();
    (rounded_up(real).0, real)
}

/// `ℓ = ⌈κ₁/(√2 ln Δ) · ln n₀ · n₀^{(½-θ)(1+κ₁)}⌉`.
pub fn ell_partial_register(kappa1: f64, theta: f64, delta: usize, n0: usize) -> (usize, f64) {
    let nf = n0 as f64;
    let real = kappa1 / (std::f64::consts::SQRT_2 * (delta as f64).ln()) * nf.ln() * nf.powf((0.5 - theta) * (1.0 + kappa1));
    (rounded_up(real).0, real)
}

fn full_register(p: &OutputDistribution, psi: &StateVector) -> Result<HammingStats> {
    if p.n0 != psi.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: psi.n_qubits(),
            got: p.n0,
        });
    }
    hamming_stats(p, psi)
}

/// `Pr[|w_H(x) - (n/2 - m/2)| >= c n^{½+κ₂}] <= 3/(2c²) n^{-(2κ₂-κ₁)}`.
pub fn concentration_report(p: &OutputDistribution, psi: &StateVector, c: f64, premise: &Premise) -> Result<BoundReport> {
    premise.check()?;
    let (k1, k2) = (premise.kappa1, premise.kappa2);
    if !(c > 0.0) {
        return Err(Error::domain("c", format!("must be positive, got {c}")));
    }
    if !(k1 < 1.0) {
        return Err(Error::domain("kappa1", format!("must be below 1, got {k1}")));
    }
    if !(k2 > k1 / 2.0 && k2 < 0.5) {
        return Err(Error::domain("kappa2", format!("must lie in (kappa1/2, 1/2), got {k2}")));
    }
    let stats = full_register(p, psi)?;
    let n = p.n0;
    let nf = n as f64;
    let centre = nf / 2.0 - stats.magnetization_sum / 2.0;
    let threshold = c * nf.powf(0.5 + k2);
    let lhs: f64 = p
        .probs
        .iter()
        .enumerate()
        .filter(|(x, _)| (x.count_ones() as f64 - centre).abs() >= threshold - 1e-12)
        .map(|(_, q)| q)
        .fold(0.0, |acc, q| acc + q);
    let rhs = concentration_rhs(c, k1, k2, n);
    let mut report = BoundReport::new("concentration", lhs, rhs, Relation::Le)
        .param("c", c)
        .param("n", nf)
        .param("threshold", threshold)
        .param("centre", centre);
    report.vacuous = rhs >= 1.0;
    Ok(premise.stamp(report, concentration_time_limit(k1, premise.g, premise.delta, n)))
}

/// `E[(⟨x|ζ|x⟩ - m)²] = 4 Var(w_H) <= 6 n^{1+κ₁}`.
pub fn variance_report(p: &OutputDistribution, psi: &StateVector, premise: &Premise) -> Result<BoundReport> {
    premise.check()?;
    let stats = full_register(p, psi)?;
    let nf = p.n0 as f64;
    let lhs = 4.0 * stats.var_weight;
    let rhs = 6.0 * nf.powf(1.0 + premise.kappa1);
    let mut report = BoundReport::new("variance", lhs, rhs, Relation::Le)
        .param("n", nf)
        .param("magnetization_sum", stats.magnetization_sum);
    report.vacuous = rhs >= nf * nf;
    let limit = concentration_time_limit(premise.kappa1, premise.g, premise.delta, p.n0);
    Ok(premise.stamp(report, limit))
}

/// Concentration report on the GHZ distribution, which no short anneal can
/// produce; the tail mass is expected to exceed the bound.
pub fn ghz_contrast_report(n: usize, c: f64, kappa1: f64, kappa2: f64) -> Result<BoundReport> {
    let psi = StateVector::ghz(n);
    let p = output_distribution(&psi, n)?;
    let premise = Premise {
        kappa1,
        kappa2,
        g: 1.0,
        delta: 2,
        t: 0.0,
    };
    let mut report = concentration_report(&p, &psi, c, &premise)?.record("state", "ghz");
    for key in ["g", "delta", "T", "T_limit"] {
        report.params.remove(key);
    }
    report.premise_holds = None;
    report.role = Role::Contrast;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoPart {
    /// Partial register, θ-dependent.
    I,
    /// Full register.
    Ii,
}

/// `p(∂_ℓ F) >= rhs` with `ℓ` and `rhs` from the chosen part.
pub fn isoperimetry_report(
    p: &OutputDistribution,
    f: &HammingSet,
    theta: f64,
    premise: &Premise,
    part: IsoPart,
) -> Result<BoundReport> {
    premise.check()?;
    if f.n0 != p.n0 {
        return Err(Error::DimensionMismatch {
            expected: p.n0,
            got: f.n0,
        });
    }
    if !(0.0..=0.5).contains(&theta) {
        return Err(Error::domain("theta", format!("must lie in [0, 1/2], got {theta}")));
    }
    let pf = p.mass(f);
    if pf > 0.5 + 1e-12 {
        return Err(Error::domain("F", format!("p(F) = {pf} exceeds 1/2")));
    }
    let n0 = p.n0;
    let nf = n0 as f64;
    let (k1, k2) = (premise.kappa1, premise.kappa2);
    let (ell, ell_real, rhs, limit) = match part {
        IsoPart::I => {
            let (ell, real) = ell_partial_register(k1, theta, premise.delta, n0);
            let rhs = 0.125 * (2.0 * nf.powf(1.0 + k1)).powf(-2.0 * theta) * pf - 2.0 * nf.powf(-k2);
            (ell, real, rhs, isoperimetry_time_limit_i(k1, k2, premise.g, premise.delta, n0))
        }
        IsoPart::Ii => {
            let (ell, real) = ell_full_register(k1, k2, n0);
            let rhs = 0.125 * pf - 1.25 * nf.powf(-kappa3(k1, k2));
            (ell, real, rhs, isoperimetry_time_limit_ii(k1, premise.g, premise.delta, n0))
        }
    };
    let lhs = p.mass(&hamming_boundary(f, ell));
    let mut report = BoundReport::new(
        match part {
            IsoPart::I => "isoperimetry_i",
            IsoPart::Ii => "isoperimetry_ii",
        },
        lhs,
        rhs,
        Relation::Ge,
    )
    .param("theta", theta)
    .param("n0", nf)
    .param("p_F", pf)
    .param("ell", ell as f64)
    .param("kappa3", kappa3(k1, k2))
    .record("ell_rounding", rounded_up(ell_real).1);
    report.vacuous = rhs <= 0.0 || ell >= n0;
    Ok(premise.stamp(report, limit))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerDiagnostics {
    pub ell: usize,
    /// `p(K_d)` for `d = 0, 1, ...` where `K_d = {x : (d-1)ℓ < d_H(x, F₁) <= dℓ}`.
    pub shell_masses: Vec<f64>,
    /// Odd `d` with `1 <= d < D/ℓ - 1` minimising `p(K_d) + p(K_{d+1})`.
    pub d0: Option<usize>,
    pub pair_mass: Option<f64>,
    /// `(1 - 2μ) / #pairs`.
    pub pigeonhole_bound: Option<f64>,
    /// `(1 - 2μ) / (D/(2ℓ) - 2)` when the denominator is positive.
    pub layered_bound: Option<f64>,
    pub holds: bool,
}

impl LayerDiagnostics {
    /// CSV with header `d,mass`.
    pub fn shells_csv(&self) -> String {
        let mut out = String::from("d,mass\n");
        for (d, m) in self.shell_masses.iter().enumerate() {
            let _ = writeln!(out, "{d},{m}");
        }
        out
    }
}

fn layer_diagnostics(p: &OutputDistribution, f1: &HammingSet, d: u32, mu: f64, ell: usize) -> LayerDiagnostics {
    let dist = f1.distances();
    let ell = ell.max(1);
    let max_dist = dist.iter().flatten().copied().max().unwrap_or(0) as usize;
    let mut shell_masses = vec![0.0; max_dist.div_ceil(ell) + 1];
    for (x, q) in p.probs.iter().enumerate() {
        if let Some(r) = dist[x] {
            shell_masses[(r as usize).div_ceil(ell)] += q;
        }
    }
    let ratio = d as f64 / ell as f64;
    let pairs: Vec<usize> = (1..).step_by(2).take_while(|&k| (k as f64) < ratio - 1.0).collect();
    let best = pairs
        .iter()
        .map(|&k| (k, shell_masses[k] + shell_masses.get(k + 1).copied().unwrap_or(0.0)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    let pigeonhole_bound = (!pairs.is_empty()).then(|| (1.0 - 2.0 * mu) / pairs.len() as f64);
    let denom = ratio / 2.0 - 2.0;
    let layered_bound = (denom > 0.0).then(|| (1.0 - 2.0 * mu) / denom);
    let holds = match (best, pigeonhole_bound) {
        (Some((_, mass)), Some(bound)) => {
            mass <= bound + BOUND_SLACK && layered_bound.is_none_or(|b| mass <= b + BOUND_SLACK)
        }
        _ => true,
    };
    LayerDiagnostics {
        ell,
        shell_masses,
        d0: best.map(|b| b.0),
        pair_mass: best.map(|b| b.1),
        pigeonhole_bound,
        layered_bound,
        holds,
    }
}

/// `D < 16ℓ/μ + (10/μ) n^{-(κ₁(1+κ₂)ln(1+κ₂) - 2)}`.
pub fn layers_report(
    p: &OutputDistribution,
    f1: &HammingSet,
    f2: &HammingSet,
    premise: &Premise,
) -> Result<(BoundReport, LayerDiagnostics)> {
    premise.check()?;
    for f in [f1, f2] {
        if f.n0 != p.n0 {
            return Err(Error::DimensionMismatch {
                expected: p.n0,
                got: f.n0,
            });
        }
    }
    if !f1.is_disjoint(f2) {
        return Err(Error::domain("F2", "F1 and F2 must be disjoint"));
    }
    let d = hamming_set_distance(f1, f2).ok_or_else(|| Error::domain("F1", "both sets must be non-empty"))?;
    let n = p.n0;
    let nf = n as f64;
    let (k1, k2) = (premise.kappa1, premise.kappa2);
    let mu = p.mass(f1).min(p.mass(f2));
    let (ell, ell_real) = ell_full_register(k1, k2, n);
    let rhs = if mu > 0.0 {
        16.0 * ell as f64 / mu + 10.0 / mu * nf.powf(-(kappa3(k1, k2) - 1.0))
    } else {
        f64::INFINITY
    };
    let mut report = BoundReport::new("layers", d as f64, rhs, Relation::Lt)
        .param("n", nf)
        .param("D", d as f64)
        .param("mu", mu)
        .param("ell", ell as f64)
        .record("ell_rounding", rounded_up(ell_real).1);
    report.vacuous = mu == 0.0 || rhs >= nf;
    let report = premise.stamp(report, isoperimetry_time_limit_ii(k1, premise.g, premise.delta, n));
    Ok((report, layer_diagnostics(p, f1, d, mu, ell)))
}
