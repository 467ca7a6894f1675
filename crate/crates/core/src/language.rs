//! Domain elements, languages, indexed collections and the samples fed to
//! learners.
//!
//! The domain is the positive integers with the canonical enumeration
//! `x_i = i`. A [`Language`] is a total membership predicate together with a
//! [`Cardinality`]: either the explicit member list of a finite language, or
//! a *gap certificate* for an infinite one. The certificate promises that
//! after any element `x` there is a member in `(x, x + gap]`, which turns
//! "first unseen member" searches into terminating scans.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of the countable domain, identified with its position in the
/// canonical enumeration. Always at least 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u64);

impl Elem {
    /// # Panics
    ///
    /// If `index` is 0.
    pub fn new(index: u64) -> Self {
        assert!(index >= 1, "domain elements are 1-indexed");
        Elem(index)
    }

    pub fn index(self) -> u64 {
        self.0
    }

    /// The next element in the canonical enumeration.
    pub fn succ(self) -> Self {
        Elem(self.0 + 1)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Iterator over `x_1..=x_m`.
pub fn prefix(m: u64) -> impl Iterator<Item = Elem> {
    (1..=m).map(Elem)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cardinality {
    /// The members, sorted and deduplicated.
    Finite(Vec<Elem>),
    /// For every `x` some member lies in `(x, x + gap]`.
    Infinite { gap: u64 },
}

type Predicate = Arc<dyn Fn(Elem) -> bool + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Finite(BTreeSet<Elem>),
    Predicate { pred: Predicate, gap: u64 },
}

/// A decidable language over the domain.
#[derive(Clone)]
pub struct Language {
    repr: Repr,
}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Finite(s) => f.debug_tuple("Finite").field(s).finish(),
            Repr::Predicate { gap, .. } => f.debug_struct("Infinite").field("gap", gap).finish(),
        }
    }
}

impl Language {
    pub fn finite<I: IntoIterator<Item = u64>>(members: I) -> Self {
        Language {
            repr: Repr::Finite(members.into_iter().map(Elem::new).collect()),
        }
    }

    /// An infinite language. `gap` must certify that after every element a
    /// member occurs within `gap` positions.
    pub fn infinite<F>(gap: u64, pred: F) -> Self
    where
        F: Fn(Elem) -> bool + Send + Sync + 'static,
    {
        assert!(gap >= 1, "gap certificate must be positive");
        Language {
            repr: Repr::Predicate {
                pred: Arc::new(pred),
                gap,
            },
        }
    }

    pub fn contains(&self, x: Elem) -> bool {
        match &self.repr {
            Repr::Finite(s) => s.contains(&x),
            Repr::Predicate { pred, .. } => pred(x),
        }
    }

    pub fn cardinality(&self) -> Cardinality {
        match &self.repr {
            Repr::Finite(s) => Cardinality::Finite(s.iter().copied().collect()),
            Repr::Predicate { gap, .. } => Cardinality::Infinite { gap: *gap },
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.repr, Repr::Finite(_))
    }

    /// Members in `x_1..=x_m`.
    pub fn restrict(&self, m: u64) -> BTreeSet<Elem> {
        prefix(m).filter(|&x| self.contains(x)).collect()
    }

    /// The member with the smallest index outside `exclude`.
    pub fn first_unseen(&self, exclude: &BTreeSet<Elem>) -> Result<Elem> {
        match &self.repr {
            Repr::Finite(s) => s
                .iter()
                .find(|x| !exclude.contains(x))
                .copied()
                .ok_or(Error::Exhausted),
            Repr::Predicate { pred, gap } => {
                let after = exclude.iter().next_back().map_or(0, |x| x.index());
                let bound = after + gap;
                (1..=bound)
                    .map(Elem)
                    .find(|x| !exclude.contains(x) && pred(*x))
                    .ok_or(Error::CertificateViolated { after, gap: *gap })
            }
        }
    }

    /// The `k`-th member (1-indexed) in increasing order, or `None` when a
    /// finite language has fewer than `k` members.
    pub fn nth_member(&self, k: usize) -> Option<Elem> {
        assert!(k >= 1);
        match &self.repr {
            Repr::Finite(s) => s.iter().nth(k - 1).copied(),
            Repr::Predicate { pred, .. } => (1..).map(Elem).filter(|x| pred(*x)).nth(k - 1),
        }
    }
}

/// The membership vector of a language on `x_1..=x_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Projection {
    bits: Vec<bool>,
}

impl Projection {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Bit for `x_k`, 1-indexed.
    pub fn get(&self, k: usize) -> bool {
        self.bits[k - 1]
    }

    pub fn as_u8(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| b as u8).collect()
    }
}

/// The backing family of a [`Collection`]. Indices are 1-based.
pub trait Family: Send + Sync {
    fn contains(&self, i: usize, x: Elem) -> bool;

    fn cardinality(&self, i: usize) -> Cardinality;

    /// Number of languages, `None` for a countably infinite family.
    fn size(&self) -> Option<usize> {
        None
    }

    /// Smallest index `j` with `L_j = L_i`.
    fn first_occurrence(&self, i: usize) -> usize;

    /// Analytic subset oracle, `L_i ⊆ L_j`.
    fn subset(&self, _i: usize, _j: usize) -> Option<bool> {
        None
    }

    /// Tell-tale set of `L_i`, when the family knows one.
    fn telltale(&self, _i: usize) -> Option<Vec<Elem>> {
        None
    }
}

/// Ground truth attached to a fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureMeta {
    /// Smallest index of the target language.
    pub target: usize,
    pub known_identifiable: bool,
    pub known_trivial_for_generation: bool,
    /// Largest index any algorithm enumerates.
    pub index_horizon: usize,
}

/// An indexed countable family of languages with optional oracles and the
/// fixture's ground truth.
#[derive(Clone)]
pub struct Collection {
    name: String,
    family: Arc<dyn Family>,
    has_subset: bool,
    has_telltale: bool,
    meta: FixtureMeta,
}

impl fmt::Debug for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Collection")
            .field("name", &self.name)
            .field("size", &self.family.size())
            .field("meta", &self.meta)
            .finish()
    }
}

pub const DEFAULT_INDEX_HORIZON: usize = 64;

impl Collection {
    pub fn new<F: Family + 'static>(name: impl Into<String>, family: F, meta: FixtureMeta) -> Self {
        let has_subset = family.subset(1, 1).is_some();
        let has_telltale = family.telltale(1).is_some();
        let c = Collection {
            name: name.into(),
            family: Arc::new(family),
            has_subset,
            has_telltale,
            meta,
        };
        assert_eq!(
            c.family.first_occurrence(c.meta.target),
            c.meta.target,
            "fixture target must be the first occurrence of K"
        );
        c
    }

    /// Finite collection given by explicit member sets. Duplicated sets are
    /// allowed; the subset and tell-tale oracles are exact.
    pub fn from_finite_sets(name: impl Into<String>, sets: Vec<BTreeSet<u64>>, target: usize) -> Self {
        let sets: Vec<BTreeSet<Elem>> = sets
            .into_iter()
            .map(|s| s.into_iter().map(Elem::new).collect())
            .collect();
        let horizon = sets.len().min(DEFAULT_INDEX_HORIZON);
        Collection::new(
            name,
            ExplicitFamily { sets },
            FixtureMeta {
                target,
                known_identifiable: true,
                known_trivial_for_generation: false,
                index_horizon: horizon,
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn meta(&self) -> &FixtureMeta {
        &self.meta
    }

    pub fn target(&self) -> usize {
        self.meta.target
    }

    /// Same family with a different target (the smallest index of `K`).
    pub fn with_target(&self, target: usize) -> Result<Self> {
        if target == 0 || self.size().is_some_and(|n| target > n) {
            return Err(Error::Config(format!("target {target} out of range for `{}`", self.name)));
        }
        if self.family.first_occurrence(target) != target {
            return Err(Error::Config(format!(
                "index {target} of `{}` repeats index {}",
                self.name,
                self.family.first_occurrence(target)
            )));
        }
        let mut c = self.clone();
        c.meta.target = target;
        Ok(c)
    }

    pub fn size(&self) -> Option<usize> {
        self.family.size()
    }

    /// Indices `1..=min(t, size, horizon)`.
    pub fn indices(&self, t: usize) -> std::ops::RangeInclusive<usize> {
        let mut upper = t.min(self.meta.index_horizon);
        if let Some(n) = self.size() {
            upper = upper.min(n);
        }
        1..=upper
    }

    pub fn contains(&self, i: usize, x: Elem) -> bool {
        self.family.contains(i, x)
    }

    pub fn cardinality(&self, i: usize) -> Cardinality {
        self.family.cardinality(i)
    }

    pub fn language(&self, i: usize) -> Language {
        match self.family.cardinality(i) {
            Cardinality::Finite(members) => Language {
                repr: Repr::Finite(members.into_iter().collect()),
            },
            Cardinality::Infinite { gap } => {
                let family = Arc::clone(&self.family);
                Language {
                    repr: Repr::Predicate {
                        pred: Arc::new(move |x| family.contains(i, x)),
                        gap,
                    },
                }
            }
        }
    }

    pub fn target_language(&self) -> Language {
        self.language(self.meta.target)
    }

    /// `L_i = K`.
    pub fn equality_oracle(&self, i: usize) -> bool {
        self.family.first_occurrence(i) == self.meta.target
    }

    pub fn first_occurrence(&self, i: usize) -> usize {
        self.family.first_occurrence(i)
    }

    pub fn has_subset_oracle(&self) -> bool {
        self.has_subset
    }

    pub fn has_telltale_oracle(&self) -> bool {
        self.has_telltale
    }

    /// `L_i ⊆ L_j`, failing when the collection carries no subset oracle.
    pub fn subset(&self, i: usize, j: usize) -> Result<bool> {
        self.family.subset(i, j).ok_or_else(|| Error::MissingOracle {
            collection: self.name.clone(),
            oracle: "subset",
        })
    }

    pub fn telltale(&self, i: usize) -> Result<Vec<Elem>> {
        self.family.telltale(i).ok_or_else(|| Error::MissingOracle {
            collection: self.name.clone(),
            oracle: "tell-tale",
        })
    }

    /// Exact membership vector of `L_i` on `x_1..=x_m`.
    pub fn project(&self, i: usize, m: usize) -> Projection {
        Projection {
            bits: prefix(m as u64).map(|x| self.contains(i, x)).collect(),
        }
    }

    /// `sample ⊆ L_i`.
    pub fn is_consistent(&self, i: usize, sample: &Sample) -> bool {
        sample.iter().all(|x| self.contains(i, x))
    }

    /// The sub-collection `(L_{k_1}, L_{k_2}, …)` for the given indices, with
    /// `target` given in the new numbering.
    pub fn restrict(&self, keep: &[usize], target: usize) -> Self {
        let sets: Vec<_> = keep.iter().map(|&k| (self.clone(), k)).collect();
        let meta = FixtureMeta {
            target,
            known_identifiable: true,
            known_trivial_for_generation: false,
            index_horizon: keep.len(),
        };
        Collection::new(
            format!("{}[{:?}]", self.name, keep),
            Restricted { parts: sets },
            meta,
        )
    }
}

struct ExplicitFamily {
    sets: Vec<BTreeSet<Elem>>,
}

impl Family for ExplicitFamily {
    fn contains(&self, i: usize, x: Elem) -> bool {
        self.sets[i - 1].contains(&x)
    }

    fn cardinality(&self, i: usize) -> Cardinality {
        Cardinality::Finite(self.sets[i - 1].iter().copied().collect())
    }

    fn size(&self) -> Option<usize> {
        Some(self.sets.len())
    }

    fn first_occurrence(&self, i: usize) -> usize {
        let s = &self.sets[i - 1];
        self.sets.iter().position(|t| t == s).unwrap() + 1
    }

    fn subset(&self, i: usize, j: usize) -> Option<bool> {
        Some(self.sets[i - 1].is_subset(&self.sets[j - 1]))
    }

    fn telltale(&self, i: usize) -> Option<Vec<Elem>> {
        Some(self.sets[i - 1].iter().copied().collect())
    }
}

struct Restricted {
    parts: Vec<(Collection, usize)>,
}

impl Family for Restricted {
    fn contains(&self, i: usize, x: Elem) -> bool {
        let (c, k) = &self.parts[i - 1];
        c.contains(*k, x)
    }

    fn cardinality(&self, i: usize) -> Cardinality {
        let (c, k) = &self.parts[i - 1];
        c.cardinality(*k)
    }

    fn size(&self) -> Option<usize> {
        Some(self.parts.len())
    }

    fn first_occurrence(&self, i: usize) -> usize {
        let (c, k) = &self.parts[i - 1];
        let key = c.first_occurrence(*k);
        self.parts
            .iter()
            .position(|(c2, k2)| c2.first_occurrence(*k2) == key)
            .unwrap()
            + 1
    }

    fn subset(&self, i: usize, j: usize) -> Option<bool> {
        let (c, a) = &self.parts[i - 1];
        let (_, b) = &self.parts[j - 1];
        c.family.subset(*a, *b)
    }
}

/// Positive examples, in arrival order. Repetitions are kept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sample {
    items: Vec<Elem>,
}

impl Sample {
    pub fn new(items: Vec<Elem>) -> Self {
        Sample { items }
    }

    pub fn from_indices(items: &[u64]) -> Self {
        Sample {
            items: items.iter().map(|&i| Elem::new(i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Elem] {
        &self.items
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.items.iter().copied()
    }

    pub fn push(&mut self, x: Elem) {
        self.items.push(x);
    }

    pub fn as_set(&self) -> BTreeSet<Elem> {
        self.items.iter().copied().collect()
    }

    /// Number of distinct elements.
    pub fn distinct(&self) -> usize {
        self.as_set().len()
    }

    /// Largest element index, 0 for the empty sample.
    pub fn max_index(&self) -> u64 {
        self.items.iter().map(|x| x.index()).max().unwrap_or(0)
    }

    /// Consecutive sub-sample `items[start..end]`.
    pub fn slice(&self, start: usize, end: usize) -> Sample {
        Sample {
            items: self.items[start..end].to_vec(),
        }
    }
}

impl FromIterator<Elem> for Sample {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        Sample {
            items: iter.into_iter().collect(),
        }
    }
}

/// Labeled examples for the positive+negative setting. No element carries
/// two different labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledSample {
    items: Vec<(Elem, bool)>,
}

impl LabeledSample {
    pub fn new(items: Vec<(Elem, bool)>) -> Result<Self> {
        let mut seen = std::collections::BTreeMap::new();
        for &(x, y) in &items {
            if let Some(prev) = seen.insert(x, y) {
                if prev != y {
                    return Err(Error::ContradictoryLabel(x));
                }
            }
        }
        Ok(LabeledSample { items })
    }

    pub fn from_pairs(items: &[(u64, bool)]) -> Result<Self> {
        Self::new(items.iter().map(|&(x, y)| (Elem::new(x), y)).collect())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[(Elem, bool)] {
        &self.items
    }

    pub fn slice(&self, start: usize, end: usize) -> LabeledSample {
        LabeledSample {
            items: self.items[start..end].to_vec(),
        }
    }

    pub fn as_set(&self) -> BTreeSet<Elem> {
        self.items.iter().map(|&(x, _)| x).collect()
    }
}
