//! Generators: the critical-language algorithms with subset or membership
//! access, the generator for trivial collections, rejection-sampling
//! breadth generators, and the generation error measures.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::identify::critical_indices;
use crate::language::{Cardinality, Collection, Elem, Language, Sample};
use crate::sampling::geometric_position;

/// Default safety cap on the projection length of the membership variant.
pub const KM_ITERATION_CAP: usize = 100_000;

/// Cap on proposals per rejection-sampled draw.
pub const REJECTION_CAP: usize = 10_000;

/// Default breadth verification window.
pub const DEFAULT_WINDOW: usize = 200;

type SamplerFn = dyn Fn(&mut dyn RngCore) -> Result<Elem> + Send + Sync;
type SupportFn = dyn Fn(Elem) -> bool + Send + Sync;

/// A samplable source with a decidable support.
#[derive(Clone)]
pub struct Generator {
    tag: String,
    sampler: Arc<SamplerFn>,
    support: Arc<SupportFn>,
}

impl Generator {
    pub fn new<S, D>(tag: impl Into<String>, sampler: S, support: D) -> Self
    where
        S: Fn(&mut dyn RngCore) -> Result<Elem> + Send + Sync + 'static,
        D: Fn(Elem) -> bool + Send + Sync + 'static,
    {
        Generator {
            tag: tag.into(),
            sampler: Arc::new(sampler),
            support: Arc::new(support),
        }
    }

    /// Always emits `x`.
    pub fn point(x: Elem) -> Self {
        Generator::new(format!("point({x})"), move |_| Ok(x), move |y| y == x)
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> Result<Elem> {
        (self.sampler)(rng)
    }

    pub fn decide_support(&self, x: Elem) -> bool {
        (self.support)(x)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator").field("tag", &self.tag).finish_non_exhaustive()
    }
}

/// Smallest domain element outside `set`.
pub fn smallest_unseen(set: &BTreeSet<Elem>) -> Elem {
    (1..).map(Elem::new).find(|x| !set.contains(x)).expect("unbounded domain")
}

/// First unseen member of the highest-index critical language `≤ t`.
pub fn km_subset_generate(collection: &Collection, sample: &Sample, t: usize) -> Result<Elem> {
    let seen = sample.as_set();
    match critical_indices(collection, sample, t)?.last() {
        Some(&c) => collection.language(c).first_unseen(&seen),
        None => Ok(smallest_unseen(&seen)),
    }
}

/// Cursor of the membership-only generator, owned by one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmState {
    pub t: usize,
    /// Projection length used by the last emission.
    pub m: u64,
    pub last: Option<Elem>,
    pub cap: usize,
}

impl Default for KmState {
    fn default() -> Self {
        KmState {
            t: 0,
            m: 0,
            last: None,
            cap: KM_ITERATION_CAP,
        }
    }
}

impl KmState {
    pub fn with_cap(cap: usize) -> Self {
        KmState {
            cap,
            ..Default::default()
        }
    }
}

/// The critical-language generator with membership queries only. Grows
/// the projection length `m` until the highest-index `m`-critical
/// language has an unseen member among `x_1..=x_m`, and emits the smallest.
pub fn km_membership_generate(
    collection: &Collection,
    sample: &Sample,
    t: usize,
    state: &mut KmState,
) -> Result<Elem> {
    let seen = sample.as_set();
    let consistent: Vec<usize> = collection
        .indices(t)
        .filter(|&i| collection.is_consistent(i, sample))
        .collect();
    let start = state.m.max(sample.max_index());
    if consistent.is_empty() {
        let x = smallest_unseen(&seen);
        state.t = t;
        state.m = start.max(x.index());
        state.last = Some(x);
        return Ok(x);
    }

    // A pair (i, j), j < i, once broken by some x_k ∈ L_i ∖ L_j, stays broken.
    let k = consistent.len();
    let mut broken = vec![vec![false; k]; k];
    let mut scope = 0u64;
    let mut extend = |upto: u64, broken: &mut Vec<Vec<bool>>| {
        for xi in scope + 1..=upto {
            let x = Elem::new(xi);
            let member: Vec<bool> = consistent.iter().map(|&i| collection.contains(i, x)).collect();
            for a in 0..k {
                if member[a] {
                    for b in 0..a {
                        if !member[b] {
                            broken[a][b] = true;
                        }
                    }
                }
            }
        }
        scope = upto;
    };
    // Scan position per candidate: x_1..=x_scanned hold no unseen member.
    let mut scanned: HashMap<usize, u64> = HashMap::new();

    let mut cap_hit = true;
    let mut m = start;
    for _ in 0..state.cap {
        m += 1;
        extend(m, &mut broken);
        let top = (0..k)
            .rev()
            .find(|&a| (0..a).all(|b| !broken[a][b]))
            .expect("lowest consistent index is always critical");
        let c = consistent[top];
        let from = scanned.entry(c).or_insert(0);
        let found = (*from + 1..=m)
            .map(Elem::new)
            .find(|x| !seen.contains(x) && collection.contains(c, *x));
        match found {
            Some(x) => {
                state.t = t;
                state.m = m;
                state.last = Some(x);
                cap_hit = false;
                break;
            }
            None => *from = m,
        }
    }
    if cap_hit {
        return Err(Error::IterationCap {
            cap: state.cap,
            context: "membership-oracle generation",
        });
    }
    Ok(state.last.expect("set on success"))
}

/// The generator for collections that are trivial for generation: from the
/// first observed `x`, intersect every `L_i ∋ x` with `i ≤ n` together
/// with the first such language, and emit its smallest unseen member.
pub fn trivial_generate(collection: &Collection, sample: &Sample, n: usize) -> Result<Elem> {
    if !collection.meta().known_trivial_for_generation {
        return Err(Error::NotTrivial(collection.name().to_string()));
    }
    let x = *sample.items().first().ok_or(Error::EmptySample)?;
    let j = collection
        .indices(usize::MAX)
        .find(|&j| collection.contains(j, x))
        .ok_or(Error::IterationCap {
            cap: collection.meta().index_horizon,
            context: "trivial generation: no language contains the observed element",
        })?;
    let mut family: Vec<usize> = collection
        .indices(n)
        .filter(|&i| collection.contains(i, x))
        .collect();
    if !family.contains(&j) {
        family.push(j);
    }
    let seen = sample.as_set();
    (1..=KM_ITERATION_CAP as u64)
        .map(Elem::new)
        .find(|y| !seen.contains(y) && family.iter().all(|&i| collection.contains(i, *y)))
        .ok_or(Error::IterationCap {
            cap: KM_ITERATION_CAP,
            context: "trivial generation: intersection search",
        })
}

/// Proposal over domain positions for rejection sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Proposal {
    /// `P[n] = (1 - q) q^{n-1}`; `q = 1/2` uses the fair-coin sampler.
    Geometric { q: f64 },
}

impl Default for Proposal {
    fn default() -> Self {
        Proposal::Geometric { q: 0.5 }
    }
}

impl Proposal {
    pub fn draw(&self, rng: &mut dyn RngCore) -> Result<Elem> {
        match *self {
            Proposal::Geometric { q: 0.5 } => Ok(Elem::new(geometric_position(rng)? as u64)),
            Proposal::Geometric { q } => {
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let n = 1.0 + (u.ln() / q.ln()).floor();
                Ok(Elem::new(n.min(1e15) as u64))
            }
        }
    }
}

fn rejection_generator(tag: String, language: Language, exclude: BTreeSet<Elem>, proposal: Proposal) -> Generator {
    let accept = {
        let language = language.clone();
        let exclude = exclude.clone();
        move |x: Elem| language.contains(x) && !exclude.contains(&x)
    };
    let support = accept.clone();
    Generator::new(
        tag,
        move |rng| {
            for _ in 0..REJECTION_CAP {
                let x = proposal.draw(rng)?;
                if accept(x) {
                    return Ok(x);
                }
            }
            Err(Error::RejectionCap(REJECTION_CAP))
        },
        support,
    )
}

/// Rejection sampler with support exactly `L_z`.
pub fn breadth_via_index(collection: &Collection, z: usize, proposal: Proposal) -> Generator {
    rejection_generator(
        format!("breadth({z})"),
        collection.language(z),
        BTreeSet::new(),
        proposal,
    )
}

/// Rejection sampler over `L_z ∖ S`.
pub fn breadth_via_index_unseen(collection: &Collection, z: usize, sample: &Sample, proposal: Proposal) -> Generator {
    rejection_generator(
        format!("breadth({z})∖S"),
        collection.language(z),
        sample.as_set(),
        proposal,
    )
}

/// Breadth generator over the unseen members of the highest-index critical
/// language `≤ t`. Without a consistent language it falls back to the
/// point mass of [`km_subset_generate`].
pub fn best_of_both_generate(collection: &Collection, sample: &Sample, t: usize, proposal: Proposal) -> Result<Generator> {
    match critical_indices(collection, sample, t)?.last() {
        Some(&c) => Ok(breadth_via_index_unseen(collection, c, sample, proposal)),
        None => Ok(Generator::point(smallest_unseen(&sample.as_set()))),
    }
}

/// How a generator's output is scored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenErrorMode {
    /// 1 iff the emitted element is not an unseen target member.
    Consistency,
    /// 1 iff the support differs from `K ∖ S` on the window.
    Breadth { window: usize },
}

pub fn consistency_error(target: &Language, emitted: Elem, sample: &Sample) -> u8 {
    (!target.contains(emitted) || sample.iter().any(|x| x == emitted)) as u8
}

/// Window actually checked: `W`, extended to cover a finite target.
fn breadth_window(target: &Language, window: usize) -> u64 {
    match target.cardinality() {
        Cardinality::Finite(members) => members.last().map_or(0, |x| x.index()).max(window as u64),
        Cardinality::Infinite { .. } => window as u64,
    }
}

pub fn breadth_error(target: &Language, generator: &Generator, sample: &Sample, window: usize) -> u8 {
    let seen = sample.as_set();
    let w = breadth_window(target, window);
    (1..=w).map(Elem::new).any(|x| {
        let wanted = target.contains(x) && !seen.contains(&x);
        generator.decide_support(x) != wanted
    }) as u8
}

/// Windowed `|K ∖ supp|`.
pub fn windowed_miss_count(target: &Language, generator: &Generator, window: usize) -> usize {
    (1..=window as u64)
        .map(Elem::new)
        .filter(|&x| target.contains(x) && !generator.decide_support(x))
        .count()
}

pub fn generation_error(
    target: &Language,
    generator: &Generator,
    sample: &Sample,
    mode: GenErrorMode,
    rng: &mut dyn RngCore,
) -> Result<u8> {
    match mode {
        GenErrorMode::Consistency => Ok(consistency_error(target, generator.sample(rng)?, sample)),
        GenErrorMode::Breadth { window } => Ok(breadth_error(target, generator, sample, window)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sampling::trial_rng;

    fn s(xs: &[u64]) -> Sample {
        Sample::from_indices(xs)
    }

    fn e(x: u64) -> Elem {
        Elem::new(x)
    }

    #[test]
    fn km_subset_examples() {
        let c = fixtures::evens();
        assert_eq!(km_subset_generate(&c, &s(&[2, 6]), 3), Ok(e(4)));
        assert_eq!(km_subset_generate(&c, &s(&[4]), 3), Ok(e(8)));
        assert_eq!(km_subset_generate(&fixtures::singleton(), &s(&[1]), 1), Ok(e(2)));
    }

    #[test]
    fn km_subset_without_consistent_language() {
        let c = fixtures::evens();
        let r = c.restrict(&[3], 1);
        assert_eq!(km_subset_generate(&r, &s(&[1, 2]), 1), Ok(e(3)));
    }

    #[test]
    fn km_subset_exhausts_finite_language() {
        let c = fixtures::finlang();
        assert_eq!(km_subset_generate(&c, &s(&[1]), 1), Err(Error::Exhausted));
    }

    #[test]
    fn km_membership_examples() {
        let c = fixtures::evens();
        let mut st = KmState {
            m: 6,
            ..Default::default()
        };
        assert_eq!(km_membership_generate(&c, &s(&[2, 6]), 3, &mut st), Ok(e(4)));
        assert_eq!(st.m, 7);
        let mut st = KmState::default();
        assert_eq!(km_membership_generate(&fixtures::singleton(), &s(&[1]), 1, &mut st), Ok(e(2)));
        let mut st = KmState::default();
        assert_eq!(km_membership_generate(&c, &s(&[4]), 3, &mut st), Ok(e(8)));
        assert_eq!(st.m, 8);
    }

    #[test]
    fn km_membership_cursor_is_monotone() {
        let c = fixtures::evens();
        let mut st = KmState::default();
        let mut sample = Sample::default();
        let mut last_m = 0;
        for x in [4, 8, 2, 6] {
            sample.push(e(x));
            km_membership_generate(&c, &sample, sample.distinct(), &mut st).unwrap();
            assert!(st.m >= last_m);
            last_m = st.m;
        }
    }

    #[test]
    fn km_membership_cap() {
        // with t = 3 the superfinite language {1, 2} is critical and fully seen
        let c = fixtures::superfinite();
        let mut st = KmState::with_cap(50);
        let out = km_membership_generate(&c, &s(&[1, 2, 2]), 3, &mut st);
        assert!(matches!(out, Err(Error::IterationCap { cap: 50, .. })));
    }

    #[test]
    fn trivial_examples() {
        let c = fixtures::cosingleton();
        assert_eq!(trivial_generate(&c, &s(&[5]), 1), Ok(e(2)));
        assert_eq!(trivial_generate(&c, &s(&[2]), 1), Ok(e(3)));
        assert_eq!(trivial_generate(&c, &s(&[5, 2]), 2), Ok(e(3)));
        assert_eq!(
            trivial_generate(&fixtures::genlb(), &s(&[1]), 1),
            Err(Error::NotTrivial("genlb".into()))
        );
        assert_eq!(trivial_generate(&c, &s(&[]), 1), Err(Error::EmptySample));
    }

    #[test]
    fn breadth_examples() {
        let c = fixtures::evens();
        let g = breadth_via_index(&c, 2, Proposal::default());
        assert!(g.decide_support(e(4)));
        assert!(!g.decide_support(e(3)));
        let mut rng = trial_rng(3, 0, 0);
        for _ in 0..1000 {
            assert_eq!(g.sample(&mut rng).unwrap().index() % 2, 0);
        }
        let g = breadth_via_index(&fixtures::finlang(), 3, Proposal::default());
        let seen: BTreeSet<u64> = (0..10_000).map(|_| g.sample(&mut rng).unwrap().index()).collect();
        assert_eq!(seen, BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn non_dyadic_proposal_has_full_support() {
        let mut rng = trial_rng(4, 0, 0);
        let p = Proposal::Geometric { q: 0.9 };
        let draws: Vec<u64> = (0..1000).map(|_| p.draw(&mut rng).unwrap().index()).collect();
        assert!(draws.iter().all(|&x| x >= 1));
        assert!(draws.contains(&1) && draws.iter().any(|&x| x > 20));
    }

    #[test]
    fn best_of_both_examples() {
        let c = fixtures::evens();
        let g = best_of_both_generate(&c, &s(&[2, 6]), 3, Proposal::default()).unwrap();
        for x in 1..=20 {
            assert_eq!(g.decide_support(e(x)), x % 2 == 0 && x != 2 && x != 6, "{x}");
        }
        let g = best_of_both_generate(&fixtures::singleton(), &s(&[]), 1, Proposal::default()).unwrap();
        assert!((1..=20).all(|x| g.decide_support(e(x))));
        let g = best_of_both_generate(&c, &s(&[4]), 3, Proposal::default()).unwrap();
        for x in 1..=20 {
            assert_eq!(g.decide_support(e(x)), x % 4 == 0 && x != 4, "{x}");
        }
    }

    #[test]
    fn error_examples() {
        let c = fixtures::evens();
        let k = c.target_language();
        assert_eq!(consistency_error(&k, e(4), &s(&[2, 6])), 0);
        assert_eq!(consistency_error(&k, e(2), &s(&[2, 6])), 1);
        assert_eq!(consistency_error(&k, e(3), &s(&[2, 6])), 1);
        let g = breadth_via_index_unseen(&c, 2, &s(&[2, 6]), Proposal::default());
        assert_eq!(breadth_error(&k, &g, &s(&[2, 6]), 200), 0);
        let g = breadth_via_index(&c, 2, Proposal::default());
        assert_eq!(breadth_error(&k, &g, &s(&[2, 6]), 200), 1);
    }

    #[test]
    fn breadth_error_is_exact_on_finite_targets() {
        let c = fixtures::finlang();
        let k = c.target_language();
        let g = breadth_via_index_unseen(&c, 3, &s(&[1]), Proposal::default());
        assert_eq!(breadth_error(&k, &g, &s(&[1]), 1), 0);
        let g = breadth_via_index_unseen(&c, 2, &s(&[1]), Proposal::default());
        // the window is widened to reach 3
        assert_eq!(breadth_error(&k, &g, &s(&[1]), 1), 1);
    }

    #[test]
    fn miss_count() {
        let c = fixtures::evens();
        let g = breadth_via_index(&c, 3, Proposal::default());
        assert_eq!(windowed_miss_count(&c.target_language(), &g, 20), 5);
    }
}
