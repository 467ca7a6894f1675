//! Valid distributions, the sequence-induced distribution and the streams
//! that feed learners.
//!
//! The induced distribution of an enumeration `σ` gives `x` the mass
//! `Σ_{j ≥ 1, σ_j = x} 2^{-j}`. It is sampled exactly by flipping a fair
//! coin until the first head, taking the number of flips `J` and returning
//! `σ_J`. Positions are 1-indexed throughout.

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::language::{Cardinality, Collection, Elem, LabeledSample, Language, Sample};

/// Hard cap on fair-coin flips for one geometric draw.
pub const COIN_CAP: u32 = 64;

/// Positions beyond this contribute less than `2^-64` to any pmf.
const PMF_DEPTH: usize = 64;

/// Number of flips up to and including the first head (`true`).
pub fn geometric_from_coins<I: IntoIterator<Item = bool>>(coins: I) -> Result<usize> {
    for (k, heads) in coins.into_iter().take(COIN_CAP as usize).enumerate() {
        if heads {
            return Ok(k + 1);
        }
    }
    Err(Error::CoinCap(COIN_CAP))
}

/// `P[J = j] = 2^{-j}` for `j ≥ 1`, using up to 64 fair coins.
pub fn geometric_position<R: RngCore + ?Sized>(rng: &mut R) -> Result<usize> {
    let word = rng.next_u64();
    geometric_from_coins((0..64).map(|b| word >> b & 1 == 1))
}

/// A lazily evaluable sequence `σ_1, σ_2, …`.
pub trait Enumeration: Send + Sync {
    fn at(&self, j: usize) -> Elem;
}

/// `σ_j = period[(j - 1) mod len]`.
#[derive(Clone, Debug)]
pub struct Periodic(Vec<Elem>);

impl Periodic {
    pub fn new(period: Vec<Elem>) -> Self {
        assert!(!period.is_empty());
        Periodic(period)
    }

    pub fn from_indices(period: &[u64]) -> Self {
        Self::new(period.iter().map(|&x| Elem::new(x)).collect())
    }
}

impl Enumeration for Periodic {
    fn at(&self, j: usize) -> Elem {
        self.0[(j - 1) % self.0.len()]
    }
}

/// Members of a language in increasing order; a finite language is cycled.
#[derive(Clone, Debug)]
pub struct CanonicalEnumeration {
    language: Language,
    head: Vec<Elem>,
    finite: bool,
}

impl CanonicalEnumeration {
    /// # Panics
    ///
    /// If the language is empty.
    pub fn new(language: Language) -> Self {
        let (head, finite) = match language.cardinality() {
            Cardinality::Finite(members) => (members, true),
            Cardinality::Infinite { .. } => {
                let head = (1..)
                    .map(Elem::new)
                    .filter(|&x| language.contains(x))
                    .take(PMF_DEPTH)
                    .collect();
                (head, false)
            }
        };
        assert!(!head.is_empty(), "cannot enumerate the empty language");
        CanonicalEnumeration {
            language,
            head,
            finite,
        }
    }
}

impl Enumeration for CanonicalEnumeration {
    fn at(&self, j: usize) -> Elem {
        if self.finite {
            self.head[(j - 1) % self.head.len()]
        } else if j <= self.head.len() {
            self.head[j - 1]
        } else {
            self.language.nth_member(j).expect("infinite language")
        }
    }
}

/// The distribution induced by an enumeration.
#[derive(Clone)]
pub struct InducedDistribution {
    seq: Arc<dyn Enumeration>,
}

impl InducedDistribution {
    pub fn new<E: Enumeration + 'static>(seq: E) -> Self {
        InducedDistribution { seq: Arc::new(seq) }
    }

    pub fn sequence(&self) -> &dyn Enumeration {
        &*self.seq
    }

    /// Mass of `x`, truncated after position 64 (error below `2^-64`).
    pub fn pmf(&self, x: Elem) -> f64 {
        (1..=PMF_DEPTH)
            .filter(|&j| self.seq.at(j) == x)
            .map(|j| 0.5f64.powi(j as i32))
            .sum()
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<Elem> {
        Ok(self.seq.at(geometric_position(rng)?))
    }

    /// Draw with only positions `≤ revealed` accessible; deeper positions
    /// are re-drawn.
    pub fn sample_within<R: RngCore + ?Sized>(&self, revealed: usize, rng: &mut R) -> Result<Elem> {
        assert!(revealed >= 1);
        for _ in 0..10_000 {
            let j = geometric_position(rng)?;
            if j <= revealed {
                return Ok(self.seq.at(j));
            }
        }
        Err(Error::RejectionCap(10_000))
    }
}

/// `induced_distribution(σ)`.
pub fn induced_distribution<E: Enumeration + 'static>(seq: E) -> InducedDistribution {
    InducedDistribution::new(seq)
}

/// `sample_induced(σ, rng)`.
pub fn sample_induced<R: RngCore + ?Sized>(seq: &dyn Enumeration, rng: &mut R) -> Result<Elem> {
    Ok(seq.at(geometric_position(rng)?))
}

/// A distribution whose support is exactly the target language.
#[derive(Clone)]
pub struct ValidDistribution {
    target: Language,
    induced: InducedDistribution,
}

impl ValidDistribution {
    /// The induced distribution of the canonical enumeration of `target`.
    pub fn canonical(target: Language) -> Self {
        let induced = InducedDistribution::new(CanonicalEnumeration::new(target.clone()));
        ValidDistribution { target, induced }
    }

    pub fn for_fixture(collection: &Collection) -> Self {
        Self::canonical(collection.target_language())
    }

    pub fn target(&self) -> &Language {
        &self.target
    }

    pub fn induced(&self) -> &InducedDistribution {
        &self.induced
    }

    pub fn pmf(&self, x: Elem) -> f64 {
        self.induced.pmf(x)
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<Elem> {
        self.induced.sample(rng)
    }

    pub fn sample_n<R: RngCore + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        (0..n).map(|_| self.sample(rng)).collect::<Result<Vec<_>>>().map(Sample::new)
    }
}

/// Base `x ↦ 2^{-x}` over the whole domain, labels given by membership in
/// the target.
#[derive(Clone)]
pub struct LabeledDistribution {
    target: Language,
}

impl LabeledDistribution {
    pub fn new(target: Language) -> Self {
        LabeledDistribution { target }
    }

    pub fn for_fixture(collection: &Collection) -> Self {
        Self::new(collection.target_language())
    }

    pub fn base_pmf(&self, x: Elem) -> f64 {
        0.5f64.powi(x.index().min(1100) as i32)
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<(Elem, bool)> {
        let x = Elem::new(geometric_position(rng)? as u64);
        Ok((x, self.target.contains(x)))
    }

    pub fn sample_n<R: RngCore + ?Sized>(&self, n: usize, rng: &mut R) -> Result<LabeledSample> {
        let items = (0..n).map(|_| self.sample(rng)).collect::<Result<Vec<_>>>()?;
        LabeledSample::new(items)
    }
}

#[derive(Clone)]
enum Source {
    Valid(ValidDistribution),
    Labeled(LabeledDistribution),
}

/// A reproducible i.i.d. stream. Two streams with the same source and seed
/// yield identical draws.
pub struct Stream {
    source: Source,
    rng: ChaCha8Rng,
    position: usize,
}

impl Stream {
    pub fn iid(dist: ValidDistribution, seed: u64) -> Self {
        Stream {
            source: Source::Valid(dist),
            rng: ChaCha8Rng::seed_from_u64(seed),
            position: 0,
        }
    }

    pub fn labeled(dist: LabeledDistribution, seed: u64) -> Self {
        Stream {
            source: Source::Labeled(dist),
            rng: ChaCha8Rng::seed_from_u64(seed),
            position: 0,
        }
    }

    pub fn position(&self) -> usize {
        self.position
    }

    /// Next draw with its label (always `true` for a positive stream).
    pub fn next_labeled(&mut self) -> Result<(Elem, bool)> {
        self.position += 1;
        match &self.source {
            Source::Valid(d) => d.sample(&mut self.rng).map(|x| (x, true)),
            Source::Labeled(d) => d.sample(&mut self.rng),
        }
    }

    pub fn next_elem(&mut self) -> Result<Elem> {
        self.next_labeled().map(|(x, _)| x)
    }

    pub fn take_sample(&mut self, n: usize) -> Result<Sample> {
        (0..n).map(|_| self.next_elem()).collect::<Result<Vec<_>>>().map(Sample::new)
    }

    pub fn take_labeled(&mut self, n: usize) -> Result<LabeledSample> {
        let items = (0..n).map(|_| self.next_labeled()).collect::<Result<Vec<_>>>()?;
        LabeledSample::new(items)
    }
}

/// labeled_stream(dist, seed).
pub fn labeled_stream(dist: LabeledDistribution, seed: u64) -> Stream {
    Stream::labeled(dist, seed)
}

/// Order in which an adversary presents the target language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Members in increasing order.
    Canonical,
    /// Members in increasing order with `d` repetitions of the smallest
    /// member between consecutive fresh elements.
    Delayed(usize),
    /// A fixed finite presentation.
    Explicit(Vec<Elem>),
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "canonical" {
            return Ok(Schedule::Canonical);
        }
        if let Some(d) = s.strip_prefix("delayed:") {
            return d
                .parse()
                .map(Schedule::Delayed)
                .map_err(|_| Error::Config(format!("bad delay `{d}`")));
        }
        if let Some(list) = s.strip_prefix("explicit:") {
            return parse_elems(list).map(Schedule::Explicit);
        }
        Err(Error::Config(format!(
            "unknown schedule `{s}`; valid: canonical, delayed:<d>, explicit:<x,y,…>"
        )))
    }
}

/// Parses `2,6,4` into elements.
pub fn parse_elems(list: &str) -> Result<Vec<Elem>> {
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim().parse::<u64>() {
            Ok(x) if x >= 1 => Ok(Elem::new(x)),
            _ => Err(Error::Config(format!("bad element `{t}`"))),
        })
        .collect()
}

/// An oblivious presentation of a language.
pub struct EnumerationStream {
    inner: Box<dyn Iterator<Item = Elem> + Send>,
}

impl Iterator for EnumerationStream {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        self.inner.next()
    }
}

/// adversarial_enumeration(language, schedule).
pub fn adversarial_enumeration(language: &Language, schedule: &Schedule) -> Result<EnumerationStream> {
    let canonical = move |lang: Language| -> Box<dyn Iterator<Item = Elem> + Send> {
        match lang.cardinality() {
            Cardinality::Finite(members) if members.is_empty() => Box::new(std::iter::empty()),
            Cardinality::Finite(members) => Box::new(members.into_iter().cycle()),
            Cardinality::Infinite { .. } => {
                Box::new((1..).map(Elem::new).filter(move |&x| lang.contains(x)))
            }
        }
    };
    let inner: Box<dyn Iterator<Item = Elem> + Send> = match schedule {
        Schedule::Canonical => canonical(language.clone()),
        Schedule::Delayed(d) => {
            let d = *d;
            let mut fresh = canonical(language.clone()).peekable();
            match fresh.peek().copied() {
                None => Box::new(std::iter::empty()),
                Some(smallest) => {
                    let first = fresh.next();
                    Box::new(first.into_iter().chain(
                        fresh.flat_map(move |x| std::iter::repeat_n(smallest, d).chain(std::iter::once(x))),
                    ))
                }
            }
        }
        Schedule::Explicit(list) => {
            if let Some(&bad) = list.iter().find(|&&x| !language.contains(x)) {
                return Err(Error::InvalidEnumeration(bad));
            }
            Box::new(list.clone().into_iter())
        }
    };
    Ok(EnumerationStream { inner })
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for one trial, a pure function of its coordinates.
pub fn trial_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(mix(mix(seed) ^ n as u64) ^ trial as u64))
}

/// Empirical total-variation distance between draws and a reference pmf.
pub fn total_variation(draws: &[Elem], pmf: impl Fn(Elem) -> f64) -> f64 {
    let n = draws.len() as f64;
    let support: BTreeSet<Elem> = draws.iter().copied().collect();
    let mut counts = std::collections::BTreeMap::new();
    for &x in draws {
        *counts.entry(x).or_insert(0usize) += 1;
    }
    let seen: f64 = support
        .iter()
        .map(|&x| (counts[&x] as f64 / n - pmf(x)).abs())
        .sum();
    let unseen_mass = 1.0 - support.iter().map(|&x| pmf(x)).sum::<f64>();
    0.5 * (seen + unseen_mass.max(0.0))
}

/// A uniform draw from `lo..=hi`, for test and harness plumbing.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}
