//! Identifiers: in-the-limit guessers, index canonicalization and the
//! boosted statistical identifiers.
//!
//! Every identifier is a pure function of the collection, the sample and
//! its parameters. "Output anything" fallbacks are fixed to index 1.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::language::{Collection, Elem, LabeledSample, Sample};

/// Smallest `j ≤ horizon` whose membership agrees with every label, or 1.
pub fn gold_pos_neg(collection: &Collection, sample: &LabeledSample, horizon: usize) -> usize {
    collection
        .indices(horizon)
        .find(|&j| sample.items().iter().all(|&(x, y)| collection.contains(j, x) == y))
        .unwrap_or(1)
}

/// First language containing every observed element, or 1.
pub fn finlang_identify(collection: &Collection, sample: &Sample) -> usize {
    collection
        .indices(usize::MAX)
        .find(|&j| collection.is_consistent(j, sample))
        .unwrap_or(1)
}

/// Smallest index in `V'_t`: consistent languages `L` such that every
/// `x_j ∈ L` with `j ≤ t` lies in every other consistent language.
pub fn finite_collection_identify(collection: &Collection, sample: &Sample, t: usize) -> usize {
    let consistent: Vec<usize> = collection
        .indices(usize::MAX)
        .filter(|&i| collection.is_consistent(i, sample))
        .collect();
    consistent
        .iter()
        .copied()
        .find(|&i| {
            (1..=t as u64).map(Elem::new).all(|x| {
                !collection.contains(i, x) || consistent.iter().all(|&j| collection.contains(j, x))
            })
        })
        .unwrap_or(1)
}

/// Indices `≤ t` that are critical for the sample: consistent and contained
/// in every lower-index consistent language. Ascending.
pub fn critical_indices(collection: &Collection, sample: &Sample, t: usize) -> Result<Vec<usize>> {
    let consistent: Vec<usize> = collection
        .indices(t)
        .filter(|&i| collection.is_consistent(i, sample))
        .collect();
    let mut critical = Vec::new();
    for (pos, &i) in consistent.iter().enumerate() {
        let mut ok = true;
        for &j in &consistent[..pos] {
            if !collection.subset(i, j)? {
                ok = false;
                break;
            }
        }
        if ok {
            critical.push(i);
        }
    }
    Ok(critical)
}

/// Largest critical index `≤ t`, or 1 when nothing is consistent.
pub fn subset_oracle_identify(collection: &Collection, sample: &Sample, t: usize) -> Result<usize> {
    Ok(critical_indices(collection, sample, t)?.last().copied().unwrap_or(1))
}

/// `min { ℓ ≤ i : L_ℓ[n] = L_i[n] }`.
pub fn canonicalize_index(collection: &Collection, i: usize, n: usize) -> usize {
    let target = collection.project(i, n);
    (1..i)
        .find(|&l| collection.project(l, n) == target)
        .unwrap_or(i)
}

type PositiveFn = dyn Fn(&Collection, &Sample) -> usize + Send + Sync;
type LabeledFn = dyn Fn(&Collection, &LabeledSample) -> usize + Send + Sync;

/// An in-the-limit identifier from positive examples. Step-indexed
/// algorithms receive `t = max(1, |sample|)`.
#[derive(Clone)]
pub enum PositiveIdentifier {
    Finlang,
    FiniteCollection,
    SubsetOracle,
    Custom(Arc<PositiveFn>),
}

impl PositiveIdentifier {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(&Collection, &Sample) -> usize + Send + Sync + 'static,
    {
        PositiveIdentifier::Custom(Arc::new(f))
    }

    pub fn guess(&self, collection: &Collection, sample: &Sample) -> Result<usize> {
        let t = sample.len().max(1);
        match self {
            PositiveIdentifier::Finlang => Ok(finlang_identify(collection, sample)),
            PositiveIdentifier::FiniteCollection => Ok(finite_collection_identify(collection, sample, t)),
            PositiveIdentifier::SubsetOracle => subset_oracle_identify(collection, sample, t),
            PositiveIdentifier::Custom(f) => Ok(f(collection, sample)),
        }
    }
}

impl fmt::Debug for PositiveIdentifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PositiveIdentifier::Finlang => "Finlang",
            PositiveIdentifier::FiniteCollection => "FiniteCollection",
            PositiveIdentifier::SubsetOracle => "SubsetOracle",
            PositiveIdentifier::Custom(_) => "Custom",
        })
    }
}

/// An identifier from labeled examples.
#[derive(Clone)]
pub enum LabeledIdentifier {
    /// [`gold_pos_neg`] with the collection's index horizon.
    GoldPosNeg,
    Custom(Arc<LabeledFn>),
}

impl LabeledIdentifier {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(&Collection, &LabeledSample) -> usize + Send + Sync + 'static,
    {
        LabeledIdentifier::Custom(Arc::new(f))
    }

    pub fn guess(&self, collection: &Collection, sample: &LabeledSample) -> usize {
        match self {
            LabeledIdentifier::GoldPosNeg => {
                gold_pos_neg(collection, sample, collection.meta().index_horizon)
            }
            LabeledIdentifier::Custom(f) => f(collection, sample),
        }
    }
}

impl fmt::Debug for LabeledIdentifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabeledIdentifier::GoldPosNeg => "GoldPosNeg",
            LabeledIdentifier::Custom(_) => "Custom",
        })
    }
}

/// Tracks a positive identifier along a stream.
#[derive(Clone, Debug)]
pub struct IdentifierState {
    algorithm: PositiveIdentifier,
    collection: Collection,
    sample: Sample,
    guess: usize,
}

impl IdentifierState {
    pub fn new(algorithm: PositiveIdentifier, collection: Collection) -> Self {
        IdentifierState {
            algorithm,
            collection,
            sample: Sample::default(),
            guess: 1,
        }
    }

    /// Observes one element and recomputes the guess from scratch.
    pub fn observe(&mut self, x: Elem) -> Result<usize> {
        self.sample.push(x);
        self.guess = self.algorithm.guess(&self.collection, &self.sample)?;
        Ok(self.guess)
    }

    pub fn guess(&self) -> usize {
        self.guess
    }

    pub fn step(&self) -> usize {
        self.sample.len()
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }
}

/// Batch sizes `f(n)` for boosting.
#[derive(Clone)]
pub struct BatchSchedule {
    f: Arc<dyn Fn(usize) -> usize + Send + Sync>,
}

impl BatchSchedule {
    /// `f(n) = ⌈log₂(n + 2)⌉`.
    pub fn logarithmic() -> Self {
        BatchSchedule::new(|n| {
            let v = (n + 2) as u64;
            (64 - (v - 1).leading_zeros()) as usize
        })
    }

    /// A fixed batch size. Not unbounded, so only useful for inspection.
    pub fn constant(k: usize) -> Self {
        BatchSchedule::new(move |_| k)
    }

    pub fn new<F: Fn(usize) -> usize + Send + Sync + 'static>(f: F) -> Self {
        BatchSchedule { f: Arc::new(f) }
    }

    pub fn batch_size(&self, n: usize) -> usize {
        (self.f)(n).max(1)
    }

    /// `g(n) = ⌊n / f(n)⌋`, at least one.
    pub fn batches(&self, n: usize) -> usize {
        (n / self.batch_size(n)).max(1)
    }
}

impl Default for BatchSchedule {
    fn default() -> Self {
        BatchSchedule::logarithmic()
    }
}

impl fmt::Debug for BatchSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BatchSchedule").finish_non_exhaustive()
    }
}

/// Default vote share for [`batch_majority_identify`].
pub const MAJORITY_THRESHOLD: f64 = 5.0 / 7.0;

fn tally(votes: &[usize]) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for &v in votes {
        *counts.entry(v).or_insert(0) += 1;
    }
    counts
}

/// Smallest index among those with the most votes.
fn plurality(counts: &BTreeMap<usize, usize>) -> usize {
    let best = counts.values().copied().max().unwrap_or(0);
    counts
        .iter()
        .find(|&(_, &c)| c == best)
        .map(|(&i, _)| i)
        .unwrap_or(1)
}

/// Runs `base` on consecutive batches of size `f(n)`, canonicalizes each
/// vote on the prefix of length `n`, and returns the index with at least a
/// `threshold` share of the votes, else the smallest most-voted index.
pub fn batch_majority_identify(
    collection: &Collection,
    sample: &Sample,
    base: &PositiveIdentifier,
    schedule: &BatchSchedule,
    threshold: f64,
) -> Result<usize> {
    let n = sample.len();
    let size = schedule.batch_size(n);
    let votes = if n < size {
        vec![base.guess(collection, sample)?]
    } else {
        (0..n / size)
            .map(|b| base.guess(collection, &sample.slice(b * size, (b + 1) * size)))
            .collect::<Result<Vec<_>>>()?
    };
    let prefix = n.max(1);
    let votes: Vec<usize> = votes
        .into_iter()
        .map(|i| canonicalize_index(collection, i, prefix))
        .collect();
    let counts = tally(&votes);
    let total = votes.len() as f64;
    if let Some((&i, _)) = counts.iter().find(|&(_, &c)| c as f64 >= threshold * total) {
        return Ok(i);
    }
    Ok(plurality(&counts))
}

/// Outputs and held-out error for one batch size.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchRound {
    pub t: usize,
    pub outputs: Vec<usize>,
    pub error: f64,
}

/// Result of the stopping-time search. Rounds stop at the first batch size
/// whose held-out error is below 1/4.
#[derive(Clone, Debug, PartialEq)]
pub struct StoppingTimeState {
    pub n: usize,
    pub rounds: Vec<BatchRound>,
    /// `None` when no batch size qualifies.
    pub t_hat: Option<usize>,
}

/// Estimates the stopping time of `base` from a labeled sample: the first
/// half trains, the second half scores.
pub fn stopping_time_estimate(
    collection: &Collection,
    sample: &LabeledSample,
    base: &LabeledIdentifier,
) -> Result<StoppingTimeState> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::SampleTooSmall { need: 2, got: n });
    }
    let half = n / 2;
    let held_out = &sample.items()[half..];
    let mut rounds = Vec::new();
    for t in 1..=half {
        let outputs: Vec<usize> = (0..half / t)
            .map(|b| base.guess(collection, &sample.slice(b * t, (b + 1) * t)))
            .collect();
        let wrong = outputs
            .iter()
            .filter(|&&i| held_out.iter().any(|&(x, y)| collection.contains(i, x) != y))
            .count();
        let error = wrong as f64 / outputs.len() as f64;
        rounds.push(BatchRound { t, outputs, error });
        if error < 0.25 {
            return Ok(StoppingTimeState {
                n,
                rounds,
                t_hat: Some(t),
            });
        }
    }
    Ok(StoppingTimeState {
        n,
        rounds,
        t_hat: None,
    })
}

/// Exponential-rate identifier from labeled examples: majority of
/// [`gold_pos_neg`] over first-half batches of the estimated stopping time.
pub fn pos_neg_exponential_identify(collection: &Collection, sample: &LabeledSample) -> Result<usize> {
    let base = LabeledIdentifier::GoldPosNeg;
    let state = stopping_time_estimate(collection, sample, &base)?;
    let Some(t) = state.t_hat else {
        return Ok(base.guess(collection, sample));
    };
    let n = sample.len();
    let votes: Vec<usize> = (0..(n / 2) / t)
        .map(|b| base.guess(collection, &sample.slice(b * t, (b + 1) * t)))
        .map(|i| canonicalize_index(collection, i, n))
        .collect();
    let counts = tally(&votes);
    if let Some((&i, _)) = counts.iter().find(|&(_, &c)| 2 * c > votes.len()) {
        return Ok(i);
    }
    Ok(plurality(&counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(xs: &[u64]) -> Sample {
        Sample::from_indices(xs)
    }

    fn ls(xs: &[(u64, bool)]) -> LabeledSample {
        LabeledSample::from_pairs(xs).unwrap()
    }

    #[test]
    fn gold_examples() {
        let c = fixtures::evens();
        assert_eq!(gold_pos_neg(&c, &ls(&[(2, true), (1, false)]), 64), 2);
        assert_eq!(gold_pos_neg(&c, &ls(&[]), 64), 1);
        assert_eq!(gold_pos_neg(&c, &ls(&[(4, true)]), 64), 1);
        assert_eq!(gold_pos_neg(&c, &ls(&[(4, false)]), 64), 1);
    }

    #[test]
    fn finlang_examples() {
        let c = fixtures::finlang();
        assert_eq!(finlang_identify(&c, &s(&[1, 3])), 3);
        assert_eq!(finlang_identify(&c, &s(&[1])), 1);
        assert_eq!(finlang_identify(&c, &s(&[2])), 2);
    }

    #[test]
    fn finite_examples() {
        let c = fixtures::evens();
        assert_eq!(finite_collection_identify(&c, &s(&[2, 6]), 3), 2);
        assert_eq!(finite_collection_identify(&c, &s(&[]), 1), 2);
        assert_eq!(finite_collection_identify(&c, &s(&[4]), 4), 3);
    }

    #[test]
    fn subset_examples() {
        let c = fixtures::evens();
        assert_eq!(subset_oracle_identify(&c, &s(&[2, 6]), 3), Ok(2));
        assert_eq!(subset_oracle_identify(&c, &s(&[4]), 3), Ok(3));
        for c in fixtures::all().into_iter().filter(Collection::has_subset_oracle) {
            assert_eq!(subset_oracle_identify(&c, &s(&[]), 1), Ok(1));
        }
    }

    #[test]
    fn canonicalize_examples() {
        let c = fixtures::dupwrap(&fixtures::evens());
        assert_eq!(canonicalize_index(&c, 4, 2), 3);
        assert_eq!(canonicalize_index(&c, 1, 5), 1);
        assert_eq!(canonicalize_index(&c, 2, 1), 1);
    }

    #[test]
    fn batch_examples() {
        let c = fixtures::thresholds();
        let min_elem = PositiveIdentifier::custom(|_, s| s.iter().min().map_or(1, |x| x.index() as usize));
        let two = BatchSchedule::constant(2);
        let out = batch_majority_identify(&c, &s(&[3, 5, 3, 4, 3, 3]), &min_elem, &two, MAJORITY_THRESHOLD);
        assert_eq!(out, Ok(3));
        let out = batch_majority_identify(&c, &s(&[2]), &min_elem, &two, MAJORITY_THRESHOLD);
        assert_eq!(out, Ok(2));
        // votes 3, 3, 7: below the 5/7 share, plurality wins
        let out = batch_majority_identify(&c, &s(&[3, 4, 3, 9, 7, 8]), &min_elem, &two, MAJORITY_THRESHOLD);
        assert_eq!(out, Ok(3));
    }

    #[test]
    fn plurality_tie_prefers_smaller_index() {
        let c = fixtures::thresholds();
        let min_elem = PositiveIdentifier::custom(|_, s| s.iter().min().map_or(1, |x| x.index() as usize));
        let out = batch_majority_identify(&c, &s(&[7, 7, 4, 4]), &min_elem, &BatchSchedule::constant(2), 0.9);
        assert_eq!(out, Ok(4));
    }

    #[test]
    fn log_schedule() {
        let f = BatchSchedule::logarithmic();
        assert_eq!(f.batch_size(0), 1);
        assert_eq!(f.batch_size(1), 2);
        assert_eq!(f.batch_size(2), 2);
        assert_eq!(f.batch_size(3), 3);
        assert_eq!(f.batch_size(6), 3);
        assert_eq!(f.batch_size(7), 4);
        assert_eq!(f.batches(40), 6);
    }

    #[test]
    fn stopping_time_trivial_cases() {
        let c = fixtures::evens();
        let sample = ls(&[(2, true), (1, false), (4, true), (3, false)]);
        let always_z = LabeledIdentifier::custom(|_, _| 2);
        let st = stopping_time_estimate(&c, &sample, &always_z).unwrap();
        assert_eq!(st.t_hat, Some(1));
        assert_eq!(st.rounds[0].error, 0.0);
        let always_wrong = LabeledIdentifier::custom(|_, _| 1);
        let st = stopping_time_estimate(&c, &sample, &always_wrong).unwrap();
        assert_eq!(st.t_hat, None);
        assert_eq!(st.rounds.len(), 2);
        assert!(stopping_time_estimate(&c, &ls(&[(2, true)]), &always_z).is_err());
    }

    #[test]
    fn posneg_fallback_and_unanimity() {
        let c = fixtures::evens();
        // every prefix batch is wrong on 3, so no stopping time exists
        let sample = ls(&[(2, true), (4, true), (3, false), (1, false)]);
        let st = stopping_time_estimate(&c, &sample, &LabeledIdentifier::GoldPosNeg).unwrap();
        assert_eq!(st.t_hat, None);
        assert_eq!(pos_neg_exponential_identify(&c, &sample), Ok(2));
        let sample = ls(&[(1, false), (3, false), (2, true), (6, true)]);
        assert_eq!(pos_neg_exponential_identify(&c, &sample), Ok(2));
    }

    #[test]
    fn identifier_state_tracks_stream() {
        let mut st = IdentifierState::new(PositiveIdentifier::Finlang, fixtures::finlang());
        assert_eq!(st.observe(Elem::new(1)), Ok(1));
        assert_eq!(st.observe(Elem::new(3)), Ok(3));
        assert_eq!(st.step(), 2);
    }
}
