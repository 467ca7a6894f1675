//! Monte Carlo learning curves, exponential-rate fits, distinguishing sets
//! and the exact lower-bound constructions.
//!
//! Trials draw from the fixture's canonical valid distribution (or the
//! labeled base `2^{-x}` for labeled identifiers) with a generator derived
//! from `(seed, n, trial)`, so curves are reproducible and independent of
//! thread scheduling. Identifiers receive `t = n`; the critical-language
//! generators receive `t = |distinct(S)|`. A trial that fails at runtime
//! (a cap, an exhausted language) counts as an error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::generate::{
    best_of_both_generate, breadth_error, breadth_via_index_unseen, consistency_error, km_membership_generate,
    km_subset_generate, trivial_generate, Generator, KmState, Proposal, DEFAULT_WINDOW,
};
use crate::identify::{
    batch_majority_identify, canonicalize_index, finite_collection_identify, finlang_identify, gold_pos_neg,
    pos_neg_exponential_identify, subset_oracle_identify, BatchSchedule, PositiveIdentifier, MAJORITY_THRESHOLD,
};
use crate::language::{Cardinality, Collection, Elem, LabeledSample, Language, Sample};
use crate::reductions::unambiguity_report;
use crate::sampling::{geometric_position, trial_rng, LabeledDistribution, ValidDistribution};

/// Proposal used by the rejection-sampled generators in experiments. Its
/// slower decay keeps acceptance rates workable once small elements are
/// seen.
pub const EXPERIMENT_PROPOSAL: Proposal = Proposal::Geometric { q: 0.9 };

/// Every algorithm the harness and the CLI can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    GoldPn,
    Finlang,
    Finite,
    SubsetId,
    Batch,
    PosNegExp,
    KmSubset,
    KmMembership,
    Trivial,
    BestOfBoth,
    /// Rejection sampler over `K ∖ S`, knowing the target.
    Breadth,
}

pub const ALGORITHM_NAMES: &[&str] = &[
    "gold-pn",
    "finlang",
    "finite",
    "subset-id",
    "batch",
    "posneg-exp",
    "km-subset",
    "km-membership",
    "trivial",
    "best-of-both",
    "breadth",
];

impl Algorithm {
    pub const ALL: [Algorithm; 11] = [
        Algorithm::GoldPn,
        Algorithm::Finlang,
        Algorithm::Finite,
        Algorithm::SubsetId,
        Algorithm::Batch,
        Algorithm::PosNegExp,
        Algorithm::KmSubset,
        Algorithm::KmMembership,
        Algorithm::Trivial,
        Algorithm::BestOfBoth,
        Algorithm::Breadth,
    ];

    pub fn name(self) -> &'static str {
        ALGORITHM_NAMES[Self::ALL.iter().position(|&a| a == self).expect("listed")]
    }

    pub fn is_generator(self) -> bool {
        matches!(
            self,
            Algorithm::KmSubset | Algorithm::KmMembership | Algorithm::Trivial | Algorithm::BestOfBoth | Algorithm::Breadth
        )
    }

    /// Trained on labeled examples.
    pub fn is_labeled(self) -> bool {
        matches!(self, Algorithm::GoldPn | Algorithm::PosNegExp)
    }

    pub fn identifiers() -> impl Iterator<Item = Algorithm> {
        Self::ALL.into_iter().filter(|a| !a.is_generator())
    }

    pub fn generators() -> impl Iterator<Item = Algorithm> {
        Self::ALL.into_iter().filter(|a| a.is_generator())
    }

    /// Guess from positive examples, with `t = max(1, |S|)`.
    pub fn identify_positive(self, c: &Collection, s: &Sample) -> Result<usize> {
        let t = s.len().max(1);
        match self {
            Algorithm::Finlang => Ok(finlang_identify(c, s)),
            Algorithm::Finite => Ok(finite_collection_identify(c, s, t)),
            Algorithm::SubsetId => subset_oracle_identify(c, s, t),
            Algorithm::Batch => {
                let base = if c.has_subset_oracle() {
                    PositiveIdentifier::SubsetOracle
                } else {
                    PositiveIdentifier::FiniteCollection
                };
                batch_majority_identify(c, s, &base, &BatchSchedule::logarithmic(), MAJORITY_THRESHOLD)
            }
            _ => Err(Error::Config(format!("`{}` is not a positive-example identifier", self.name()))),
        }
    }

    /// Guess from labeled examples. Below two examples the exponential
    /// identifier falls back to its base.
    pub fn identify_labeled(self, c: &Collection, s: &LabeledSample) -> Result<usize> {
        let h = c.meta().index_horizon;
        match self {
            Algorithm::GoldPn => Ok(gold_pos_neg(c, s, h)),
            Algorithm::PosNegExp if s.len() < 2 => Ok(gold_pos_neg(c, s, h)),
            Algorithm::PosNegExp => pos_neg_exponential_identify(c, s),
            _ => Err(Error::Config(format!("`{}` is not a labeled identifier", self.name()))),
        }
    }

    /// The generator trained on `s`; point masses for the element-emitting
    /// algorithms.
    pub fn generator(self, c: &Collection, s: &Sample) -> Result<Generator> {
        let d = s.distinct().max(1);
        match self {
            Algorithm::KmSubset => km_subset_generate(c, s, d).map(Generator::point),
            Algorithm::KmMembership => km_membership_generate(c, s, d, &mut KmState::default()).map(Generator::point),
            Algorithm::Trivial => trivial_generate(c, s, s.len()).map(Generator::point),
            Algorithm::BestOfBoth => best_of_both_generate(c, s, d, EXPERIMENT_PROPOSAL),
            Algorithm::Breadth => Ok(breadth_via_index_unseen(c, c.target(), s, EXPERIMENT_PROPOSAL)),
            _ => Err(Error::Config(format!("`{}` is not a generator", self.name()))),
        }
    }

    /// One emitted element.
    pub fn emit(self, c: &Collection, s: &Sample, rng: &mut dyn RngCore) -> Result<Elem> {
        self.generator(c, s)?.sample(rng)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALGORITHM_NAMES
            .iter()
            .position(|&n| n == s)
            .map(|k| Algorithm::ALL[k])
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`; valid: {}", ALGORITHM_NAMES.join(", "))))
    }
}

/// What a trial scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorMode {
    Identify,
    GenerateConsistency,
    GenerateBreadth,
    Unambiguous,
}

impl FromStr for ErrorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identify" => Ok(ErrorMode::Identify),
            "generate-consistency" => Ok(ErrorMode::GenerateConsistency),
            "generate-breadth" => Ok(ErrorMode::GenerateBreadth),
            "unambiguous" => Ok(ErrorMode::Unambiguous),
            _ => Err(Error::Config(format!(
                "unknown error mode `{s}`; valid: identify, generate-consistency, generate-breadth, unambiguous"
            ))),
        }
    }
}

impl ErrorMode {
    /// Identification for identifiers, consistency for generators.
    pub fn default_for(algorithm: Algorithm) -> Self {
        if algorithm.is_generator() {
            ErrorMode::GenerateConsistency
        } else {
            ErrorMode::Identify
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub fixture: String,
    pub algorithm: Algorithm,
    pub grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub mode: ErrorMode,
    pub window: usize,
}

impl ExperimentConfig {
    /// Grid `1..=40`, 2000 trials, seed 0, window 200.
    pub fn new(fixture: impl Into<String>, algorithm: Algorithm) -> Self {
        ExperimentConfig {
            fixture: fixture.into(),
            algorithm,
            grid: (1..=40).collect(),
            trials: 2000,
            seed: 0,
            mode: ErrorMode::default_for(algorithm),
            window: DEFAULT_WINDOW,
        }
    }

    pub fn grid(mut self, grid: impl IntoIterator<Item = usize>) -> Self {
        self.grid = grid.into_iter().collect();
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn mode(mut self, mode: ErrorMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.grid.is_empty() || self.grid[0] == 0 || self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n grid must be non-empty, positive and strictly increasing".into()));
        }
        if self.window == 0 {
            return Err(Error::Config("window must be at least 1".into()));
        }
        let wants_generator = self.mode != ErrorMode::Identify;
        if wants_generator != self.algorithm.is_generator() {
            return Err(Error::Config(format!(
                "algorithm `{}` cannot be scored in mode {:?}",
                self.algorithm.name(),
                self.mode
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    pub trials: usize,
    pub errors: usize,
    pub error_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Curve {
    pub rows: Vec<CurveRow>,
}

impl Curve {
    pub fn from_counts(rows: impl IntoIterator<Item = (usize, usize, usize)>) -> Self {
        Curve {
            rows: rows
                .into_iter()
                .map(|(n, trials, errors)| CurveRow {
                    n,
                    trials,
                    errors,
                    error_rate: errors as f64 / trials as f64,
                })
                .collect(),
        }
    }

    pub fn rate_at(&self, n: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.error_rate)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,trials,errors,error_rate\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.n, r.trials, r.errors, r.error_rate).expect("string write");
        }
        out
    }
}

/// A gnuplot script plotting the CSV at `csv_path` on a log scale.
pub fn gnuplot_script(csv_path: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set logscale y\n\
         set xlabel 'n'\n\
         set ylabel 'error rate'\n\
         set title '{title}'\n\
         plot '{csv_path}' using 1:4 with linespoints title 'error rate'\n"
    )
}

/// Scores one trial; runtime failures count as errors.
fn trial_error(c: &Collection, cfg: &ExperimentConfig, data: &TrialData, n: usize, rng: &mut dyn RngCore) -> u8 {
    let k = c.target_language();
    let outcome = match (data, cfg.mode) {
        (TrialData::Labeled(s), ErrorMode::Identify) => cfg
            .algorithm
            .identify_labeled(c, s)
            .map(|g| !c.equality_oracle(canonicalize_index(c, g, n)) as u8),
        (TrialData::Positive(s), ErrorMode::Identify) => cfg
            .algorithm
            .identify_positive(c, s)
            .map(|g| !c.equality_oracle(canonicalize_index(c, g, n)) as u8),
        (TrialData::Positive(s), ErrorMode::GenerateConsistency) => cfg
            .algorithm
            .generator(c, s)
            .and_then(|g| g.sample(rng))
            .map(|x| consistency_error(&k, x, s)),
        (TrialData::Positive(s), ErrorMode::GenerateBreadth) => cfg
            .algorithm
            .generator(c, s)
            .map(|g| breadth_error(&k, &g, s, cfg.window)),
        (TrialData::Positive(s), ErrorMode::Unambiguous) => cfg
            .algorithm
            .generator(c, s)
            .map(|g| unambiguity_report(&g, c, cfg.window, c.meta().index_horizon).error()),
        (TrialData::Labeled(_), _) => Err(Error::Config("labeled data cannot score a generator".into())),
    };
    outcome.unwrap_or(1)
}

enum TrialData {
    Positive(Sample),
    Labeled(LabeledSample),
}

/// Runs the experiment on the named fixture.
pub fn estimate_curve(cfg: &ExperimentConfig) -> Result<Curve> {
    let c = fixtures::by_name(&cfg.fixture)?;
    estimate_curve_on(&c, cfg)
}

/// Runs the experiment on an explicit collection, ignoring `cfg.fixture`.
pub fn estimate_curve_on(c: &Collection, cfg: &ExperimentConfig) -> Result<Curve> {
    cfg.validate()?;
    let valid = ValidDistribution::for_fixture(c);
    let labeled = LabeledDistribution::for_fixture(c);
    let rows = cfg.grid.iter().map(|&n| {
        let errors: usize = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(cfg.seed, n, trial);
                let data = if cfg.algorithm.is_labeled() {
                    labeled.sample_n(n, &mut rng).map(TrialData::Labeled)
                } else {
                    valid.sample_n(n, &mut rng).map(TrialData::Positive)
                };
                match data {
                    Ok(d) => trial_error(c, cfg, &d, n, &mut rng) as usize,
                    Err(_) => 1,
                }
            })
            .sum();
        (n, cfg.trials, errors)
    });
    Ok(Curve::from_counts(rows.collect::<Vec<_>>()))
}

/// `error_rate ≈ C · exp(-c · n)` fitted on the positive rows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub big_c: f64,
    pub c: f64,
    /// Root-mean-square residual of the log-linear fit.
    pub residual: f64,
    pub used_rows: usize,
    pub zero_rows: usize,
}

/// Least squares of `ln(error_rate)` on `n` over rows with positive error.
pub fn fit_exponential(curve: &Curve) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = curve
        .rows
        .iter()
        .filter(|r| r.error_rate > 0.0)
        .map(|r| (r.n as f64, r.error_rate.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(pts.len()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(RateFit {
        big_c: intercept.exp(),
        c: -slope,
        residual: (sse / k).sqrt(),
        used_rows: pts.len(),
        zero_rows: curve.rows.len() - pts.len(),
    })
}

/// Search window for `L_z ∖ L_i` when no subset oracle settles it.
const SEARCH_WINDOW: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishingSet {
    pub target: usize,
    /// For each `i < z` with `L_z ⊄ L_i`: the smallest element of `L_z ∖ L_i`.
    pub elements: BTreeSet<Elem>,
    pub n0: usize,
}

fn members_up_to(l: &Language, bound: u64) -> Vec<Elem> {
    match l.cardinality() {
        Cardinality::Finite(m) => m,
        Cardinality::Infinite { .. } => l.restrict(bound).into_iter().collect(),
    }
}

pub fn distinguishing_set(c: &Collection, z: usize) -> Result<DistinguishingSet> {
    let k = c.language(z);
    let members = members_up_to(&k, SEARCH_WINDOW);
    let mut elements = BTreeSet::new();
    for i in 1..z {
        if c.has_subset_oracle() && c.subset(z, i)? {
            continue;
        }
        if let Some(&x) = members.iter().find(|&&x| !c.contains(i, x)) {
            elements.insert(x);
        }
    }
    Ok(DistinguishingSet {
        target: z,
        elements,
        n0: z,
    })
}

/// Elements whose presence forces the critical-language identifier onto the
/// target: the distinguishing set plus the target's tell-tale when known.
pub fn identification_set(c: &Collection) -> Result<BTreeSet<Elem>> {
    let mut set = distinguishing_set(c, c.target())?.elements;
    if c.has_telltale_oracle() {
        set.extend(c.telltale(c.target())?);
    }
    Ok(set)
}

/// Largest position at which some `L_i`, `i < z`, first disagrees with `K`.
pub fn labeled_distinguishing_bound(c: &Collection) -> u64 {
    let z = c.target();
    (1..z)
        .map(|i| {
            (1..=SEARCH_WINDOW)
                .find(|&x| c.contains(i, Elem::new(x)) != c.contains(z, Elem::new(x)))
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// A sample containing `required`, padded to `size` elements with random
/// unseen members of the target (geometrically weighted by rank), and with
/// repeated draws once a finite target is exhausted.
pub fn padded_sample(c: &Collection, required: &BTreeSet<Elem>, size: usize, rng: &mut dyn RngCore) -> Result<Sample> {
    let k = c.target_language();
    let dist = ValidDistribution::for_fixture(c);
    let mut items: Vec<Elem> = required.iter().copied().collect();
    let mut seen = required.clone();
    while items.len() < size {
        let j = geometric_position(rng)?;
        let x = match k.cardinality() {
            Cardinality::Finite(members) => {
                let rest: Vec<Elem> = members.into_iter().filter(|x| !seen.contains(x)).collect();
                if rest.is_empty() {
                    dist.sample(rng)?
                } else {
                    rest[(j - 1) % rest.len()]
                }
            }
            Cardinality::Infinite { .. } => (1..)
                .map(Elem::new)
                .filter(|x| k.contains(*x) && !seen.contains(x))
                .nth(j - 1)
                .expect("infinite target"),
        };
        seen.insert(x);
        items.push(x);
    }
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
    Ok(Sample::new(items))
}

/// Exact evaluation on the all-`x` sample for a two-language collection.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentificationLowerBound {
    pub n: usize,
    pub guess: usize,
    /// Error conditioned on the all-`x` sample, for targets 1 and 2.
    pub conditional_error: [u8; 2],
    /// `2^{-n} ×` the conditional error.
    pub unconditional_bound: [f64; 2],
    /// Some target is missed with certainty.
    pub pigeonhole: bool,
}

pub fn lower_bound_identification(pair: &Collection, x: Elem, algorithm: Algorithm, n: usize) -> Result<IdentificationLowerBound> {
    if pair.size() != Some(2) || !pair.contains(1, x) || !pair.contains(2, x) {
        return Err(Error::Config("need two languages sharing the element".into()));
    }
    let guess = if algorithm.is_labeled() {
        algorithm.identify_labeled(pair, &LabeledSample::new(vec![(x, true); n])?)?
    } else {
        algorithm.identify_positive(pair, &Sample::new(vec![x; n]))?
    };
    let hit = |k: usize| guess <= 2 && pair.first_occurrence(guess) == pair.first_occurrence(k);
    let conditional_error = [(!hit(1)) as u8, (!hit(2)) as u8];
    let p = 0.5f64.powi(n as i32);
    Ok(IdentificationLowerBound {
        n,
        guess,
        conditional_error,
        unconditional_bound: conditional_error.map(|e| p * e as f64),
        pigeonhole: conditional_error.contains(&1),
    })
}

/// Emission statistics on the all-intersection sample.
#[derive(Clone, Debug, PartialEq)]
pub struct GenerationLowerBound {
    pub n: usize,
    pub draws: usize,
    /// Fraction of emissions inside the intersection set.
    pub intersection_mass: f64,
    /// Probability of missing `L_k ∖ S`, per target `k`.
    pub target_error: Vec<f64>,
    /// Mass ≥ 1/2 on the intersection, or some target errs with
    /// probability ≥ 1/(2k).
    pub dichotomy: bool,
}

/// The intersection of all languages of a finite collection, on a window.
pub fn finite_intersection(c: &Collection, window: u64) -> Vec<Elem> {
    let k = c.size().unwrap_or(c.meta().index_horizon);
    (1..=window)
        .map(Elem::new)
        .filter(|&x| (1..=k).all(|i| c.contains(i, x)))
        .collect()
}

/// Feeds the cycled intersection elements to `emit` and measures the
/// per-target error over `draws` independent emissions. A failed emission
/// counts as an error for every target.
pub fn lower_bound_generation<F>(c: &Collection, intersection: &[Elem], emit: F, n: usize, draws: usize, seed: u64) -> GenerationLowerBound
where
    F: Fn(&Sample, &mut dyn RngCore) -> Result<Elem> + Sync,
{
    let k = c.size().expect("finite collection");
    let sample = Sample::new(intersection.iter().copied().cycle().take(n.max(intersection.len())).collect());
    let outcomes: Vec<Option<Elem>> = (0..draws)
        .into_par_iter()
        .map(|d| emit(&sample, &mut trial_rng(seed, n, d)).ok())
        .collect();
    let seen = sample.as_set();
    let inter: BTreeSet<Elem> = intersection.iter().copied().collect();
    let intersection_mass = outcomes.iter().filter(|o| o.is_some_and(|x| inter.contains(&x))).count() as f64 / draws as f64;
    let target_error: Vec<f64> = (1..=k)
        .map(|t| {
            outcomes
                .iter()
                .filter(|o| match o {
                    Some(x) => !c.contains(t, *x) || seen.contains(x),
                    None => true,
                })
                .count() as f64
                / draws as f64
        })
        .collect();
    let worst = target_error.iter().copied().fold(0.0, f64::max);
    GenerationLowerBound {
        n,
        draws,
        intersection_mass,
        dichotomy: intersection_mass >= 0.5 || worst >= 1.0 / (2.0 * k as f64),
        target_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert!("nope".parse::<Algorithm>().is_err());
        assert_eq!("unambiguous".parse(), Ok(ErrorMode::Unambiguous));
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new("evens", Algorithm::GoldPn);
        assert!(ok.validate().is_ok());
        assert!(ok.clone().trials(0).validate().is_err());
        assert!(ok.clone().grid([3, 2]).validate().is_err());
        assert!(ok.clone().mode(ErrorMode::GenerateBreadth).validate().is_err());
        assert!(estimate_curve(&ExperimentConfig::new("nowhere", Algorithm::GoldPn)).is_err());
    }

    #[test]
    fn fit_on_exact_curves() {
        let rows: Vec<CurveRow> = (1..=20)
            .map(|n| CurveRow {
                n,
                trials: 1,
                errors: 0,
                error_rate: (-0.5 * n as f64).exp(),
            })
            .collect();
        let f = fit_exponential(&Curve { rows }).unwrap();
        assert!((f.c - 0.5).abs() < 1e-9 && (f.big_c - 1.0).abs() < 1e-9);
        let flat = Curve::from_counts((1..=5).map(|n| (n, 2, 1)));
        let f = fit_exponential(&flat).unwrap();
        assert!(f.c.abs() < 1e-9);
        let sparse = Curve::from_counts([(1, 10, 1), (2, 10, 0), (3, 10, 2)]);
        assert_eq!(fit_exponential(&sparse), Err(Error::InsufficientData(2)));
    }

    #[test]
    fn distinguishing_examples() {
        let e = fixtures::evens();
        let d = distinguishing_set(&e, 2).unwrap();
        assert!(d.elements.is_empty());
        assert_eq!(d.n0, 2);
        let f = fixtures::finlang();
        let d = distinguishing_set(&f, 3).unwrap();
        assert_eq!(d.elements, BTreeSet::from([Elem::new(2), Elem::new(3)]));
        assert_eq!(d.n0, 3);
        let d = distinguishing_set(&f, 1).unwrap();
        assert!(d.elements.is_empty() && d.n0 == 1);
    }

    #[test]
    fn singleton_generation_never_errs() {
        for a in [Algorithm::KmSubset, Algorithm::KmMembership, Algorithm::Trivial, Algorithm::BestOfBoth] {
            let cfg = ExperimentConfig::new("singleton", a).grid([1]).trials(200);
            assert_eq!(estimate_curve(&cfg).unwrap().rate_at(1), Some(0.0), "{a:?}");
        }
    }

    #[test]
    fn curves_are_reproducible() {
        let cfg = ExperimentConfig::new("evens", Algorithm::GoldPn).grid(1..=5).trials(300).seed(9);
        let a = estimate_curve(&cfg).unwrap();
        let b = estimate_curve(&cfg).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with("n,trials,errors,error_rate\n1,300,"));
    }

    #[test]
    fn lower_bound_identification_example() {
        let pair = fixtures::evens().restrict(&[1, 2], 2);
        for n in [1, 5] {
            let lb = lower_bound_identification(&pair, Elem::new(2), Algorithm::Finlang, n).unwrap();
            assert_eq!(lb.guess, 1);
            assert_eq!(lb.conditional_error, [0, 1]);
            assert!(lb.pigeonhole);
        }
        let lb = lower_bound_identification(&pair, Elem::new(2), Algorithm::Finlang, 5).unwrap();
        assert!(lb.unconditional_bound[1] >= 1.0 / 32.0);
    }

    #[test]
    fn lower_bound_generation_examples() {
        let c = fixtures::genlb();
        let inter = finite_intersection(&c, 200);
        assert_eq!(inter, vec![Elem::new(1)]);
        let two = lower_bound_generation(&c, &inter, |_, _| Ok(Elem::new(2)), 3, 100, 0);
        assert_eq!(two.target_error, vec![0.0, 1.0]);
        assert!(two.dichotomy);
        let one = lower_bound_generation(&c, &inter, |_, _| Ok(Elem::new(1)), 3, 100, 0);
        assert_eq!(one.target_error, vec![1.0, 1.0]);
        assert_eq!(one.intersection_mass, 1.0);
    }

    #[test]
    fn gnuplot_mentions_csv() {
        assert!(gnuplot_script("c.csv", "evens").contains("plot 'c.csv' using 1:4"));
    }
}
