//! Reductions from generators to identifiers, the statistical-to-online
//! wrapper, and the windowed unambiguity report.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::generate::{best_of_both_generate, breadth_via_index_unseen, Generator, Proposal};
use crate::identify::LabeledIdentifier;
use crate::language::{Collection, Elem, LabeledSample, Language, Sample};
use crate::sampling::{geometric_position, Enumeration};

type TrainFn = dyn Fn(&Collection, &Sample) -> Result<Generator> + Send + Sync;

/// Maps a sample to a generator.
#[derive(Clone)]
pub struct GeneratorTrainer {
    name: String,
    train: Arc<TrainFn>,
}

impl GeneratorTrainer {
    pub fn new<F>(name: impl Into<String>, train: F) -> Self
    where
        F: Fn(&Collection, &Sample) -> Result<Generator> + Send + Sync + 'static,
    {
        GeneratorTrainer {
            name: name.into(),
            train: Arc::new(train),
        }
    }

    /// Knows the target: support `L_z ∖ S`.
    pub fn cheat(z: usize) -> Self {
        GeneratorTrainer::new(format!("cheat:{z}"), move |c, s| {
            Ok(breadth_via_index_unseen(c, z, s, Proposal::default()))
        })
    }

    /// [`best_of_both_generate`] with `t = |S|`.
    pub fn km_bob() -> Self {
        GeneratorTrainer::new("km-bob", |c, s| {
            best_of_both_generate(c, s, s.len().max(1), Proposal::default())
        })
    }

    /// Parses `cheat:<z>` or `km-bob`.
    pub fn by_name(name: &str) -> Result<Self> {
        if name == "km-bob" {
            return Ok(Self::km_bob());
        }
        if let Some(z) = name.strip_prefix("cheat:") {
            if let Ok(z) = z.parse::<usize>() {
                if z >= 1 {
                    return Ok(Self::cheat(z));
                }
            }
        }
        Err(Error::Config(format!(
            "unknown trainer `{name}`; valid: cheat:<z>, km-bob"
        )))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn train(&self, collection: &Collection, sample: &Sample) -> Result<Generator> {
        (self.train)(collection, sample)
    }
}

impl fmt::Debug for GeneratorTrainer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorTrainer").field("name", &self.name).finish()
    }
}

/// Labels `x_1..=x_t` by the trained generator's support and hands them to
/// a labeled identifier. With `correct`, observed elements are forced
/// positive.
pub fn identify_via_breadth_generator(
    collection: &Collection,
    trainer: &GeneratorTrainer,
    ipn: &LabeledIdentifier,
    stream: &[Elem],
    t: usize,
    correct: bool,
) -> Result<usize> {
    let s = Sample::new(stream[..t.min(stream.len())].to_vec());
    let g = trainer.train(collection, &s)?;
    let seen = s.as_set();
    let labeled = (1..=t as u64)
        .map(Elem::new)
        .map(|x| (x, g.decide_support(x) || (correct && seen.contains(&x))))
        .collect();
    Ok(ipn.guess(collection, &LabeledSample::new(labeled)?))
}

/// Smallest `i ≤ t` with `L_i ⊇ S_t` and `L_i[t] ⊆ supp(G_t) ∪ S_t`, or 1.
pub fn identify_via_unambiguous(
    collection: &Collection,
    trainer: &GeneratorTrainer,
    stream: &[Elem],
    t: usize,
) -> Result<usize> {
    let s = Sample::new(stream[..t.min(stream.len())].to_vec());
    let g = trainer.train(collection, &s)?;
    let seen = s.as_set();
    let covered: Vec<bool> = (1..=t as u64)
        .map(Elem::new)
        .map(|x| g.decide_support(x) || seen.contains(&x))
        .collect();
    Ok(collection
        .indices(t)
        .find(|&i| {
            collection.is_consistent(i, &s)
                && (1..=t as u64).all(|x| !collection.contains(i, Elem::new(x)) || covered[x as usize - 1])
        })
        .unwrap_or(1))
}

/// Access to the enumeration in [`statistical_to_online`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnlineMode {
    /// Any position of the enumeration can be read.
    FullSequence,
    /// Only the first `revealed` positions are known; deeper draws are redone.
    Streamed { revealed: usize },
}

/// Draws `n` i.i.d. elements from the distribution induced by `seq` and
/// returns what `train` makes of them.
pub fn statistical_to_online<T>(
    seq: &dyn Enumeration,
    n: usize,
    mode: OnlineMode,
    rng: &mut dyn RngCore,
    train: impl FnOnce(&Sample) -> T,
) -> Result<T> {
    let mut items = Vec::with_capacity(n);
    while items.len() < n {
        let j = geometric_position(rng)?;
        match mode {
            OnlineMode::Streamed { revealed } if j > revealed => continue,
            _ => items.push(seq.at(j)),
        }
    }
    Ok(train(&Sample::new(items)))
}

/// Windowed comparison of a generator's support against the collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnambiguityReport {
    pub window: usize,
    /// `|supp Δ K|` on the window.
    pub self_distance: usize,
    /// Smallest `|supp Δ L|` over `L ≠ K` within the horizon.
    pub competitor_distance: Option<usize>,
    pub nearest_competitor: Option<usize>,
    /// `self_distance < competitor_distance`.
    pub verdict: bool,
}

impl UnambiguityReport {
    /// 1 when the generator is not closer to `K` than to every other language.
    pub fn error(&self) -> u8 {
        (!self.verdict) as u8
    }
}

fn windowed_distance(g: &Generator, l: &Language, window: usize) -> usize {
    (1..=window as u64)
        .map(Elem::new)
        .filter(|&x| g.decide_support(x) != l.contains(x))
        .count()
}

pub fn unambiguity_report(generator: &Generator, collection: &Collection, window: usize, horizon: usize) -> UnambiguityReport {
    let self_distance = windowed_distance(generator, &collection.target_language(), window);
    let best = collection
        .indices(horizon)
        .filter(|&i| !collection.equality_oracle(i))
        .map(|i| (windowed_distance(generator, &collection.language(i), window), i))
        .min();
    UnambiguityReport {
        window,
        self_distance,
        competitor_distance: best.map(|b| b.0),
        nearest_competitor: best.map(|b| b.1),
        verdict: best.is_none_or(|(d, _)| self_distance < d),
    }
}
