//! The fixture catalog. Each constructor returns a [`Collection`] with its
//! ground truth filled in; [`by_name`] resolves the CLI vocabulary.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::language::{Cardinality, Collection, Elem, Family, FixtureMeta, DEFAULT_INDEX_HORIZON};

/// A family described by plain functions of the index.
struct Analytic {
    size: Option<usize>,
    contains: fn(usize, u64) -> bool,
    cardinality: fn(usize) -> Cardinality,
    first: fn(usize) -> usize,
    subset: Option<fn(usize, usize) -> bool>,
    telltale: Option<fn(usize) -> Vec<u64>>,
}

impl Family for Analytic {
    fn contains(&self, i: usize, x: Elem) -> bool {
        debug_assert!(i >= 1 && self.size.is_none_or(|n| i <= n), "index {i} out of range");
        (self.contains)(i, x.index())
    }

    fn cardinality(&self, i: usize) -> Cardinality {
        (self.cardinality)(i)
    }

    fn size(&self) -> Option<usize> {
        self.size
    }

    fn first_occurrence(&self, i: usize) -> usize {
        (self.first)(i)
    }

    fn subset(&self, i: usize, j: usize) -> Option<bool> {
        self.subset.map(|f| f(i, j))
    }

    fn telltale(&self, i: usize) -> Option<Vec<Elem>> {
        self.telltale
            .map(|f| f(i).into_iter().map(Elem::new).collect())
    }
}

fn finite(members: impl IntoIterator<Item = u64>) -> Cardinality {
    Cardinality::Finite(members.into_iter().map(Elem::new).collect())
}

fn meta(target: usize, identifiable: bool, trivial: bool, size: Option<usize>) -> FixtureMeta {
    FixtureMeta {
        target,
        known_identifiable: identifiable,
        known_trivial_for_generation: trivial,
        index_horizon: size.map_or(DEFAULT_INDEX_HORIZON, |n| n.min(DEFAULT_INDEX_HORIZON)),
    }
}

/// `L_1 = ℕ`, `L_{i+1} = {1..i}`. Not identifiable from positive examples.
pub fn superfinite() -> Collection {
    let fam = Analytic {
        size: None,
        contains: |i, x| i == 1 || x < i as u64,
        cardinality: |i| {
            if i == 1 {
                Cardinality::Infinite { gap: 1 }
            } else {
                finite(1..i as u64)
            }
        },
        first: |i| i,
        subset: Some(|i, j| j == 1 || (i != 1 && i <= j)),
        telltale: None,
    };
    Collection::new("superfinite", fam, meta(1, false, false, None))
}

/// `ℕ ⊃ evens ⊃ multiples of 4`.
pub fn evens() -> Collection {
    let fam = Analytic {
        size: Some(3),
        contains: |i, x| match i {
            1 => true,
            2 => x % 2 == 0,
            _ => x % 4 == 0,
        },
        cardinality: |i| Cardinality::Infinite {
            gap: [1, 2, 4][i - 1],
        },
        first: |i| i,
        subset: Some(|i, j| i >= j),
        telltale: Some(|i| vec![[1, 2, 4][i - 1]]),
    };
    Collection::new("evens", fam, meta(2, true, true, Some(3)))
}

/// `L_i = {1..i}`.
pub fn finlang() -> Collection {
    let fam = Analytic {
        size: None,
        contains: |i, x| x <= i as u64,
        cardinality: |i| finite(1..=i as u64),
        first: |i| i,
        subset: Some(|i, j| i <= j),
        telltale: Some(|i| vec![i as u64]),
    };
    Collection::new("finlang", fam, meta(3, true, false, None))
}

/// `L_i = {i, i+1, …}`.
pub fn thresholds() -> Collection {
    let fam = Analytic {
        size: None,
        contains: |i, x| x >= i as u64,
        cardinality: |i| Cardinality::Infinite { gap: i as u64 },
        first: |i| i,
        subset: Some(|i, j| i >= j),
        telltale: Some(|i| vec![i as u64]),
    };
    Collection::new("thresholds", fam, meta(3, true, true, None))
}

/// Path of the complete binary tree encoded by index `i`: the binary digits
/// of `i + 1` after the leading one.
fn tree_path(i: usize) -> Vec<bool> {
    let code = i as u64 + 1;
    let depth = 63 - code.leading_zeros();
    (0..depth).rev().map(|b| code >> b & 1 == 1).collect()
}

fn path_index(path: &[bool]) -> usize {
    let code = path.iter().fold(1u64, |acc, &b| acc << 1 | b as u64);
    (code - 1) as usize
}

/// Nodes on the path that are labeled 1, with the root as node 1 and the
/// children of node `v` at `2v` and `2v + 1`.
fn tree_language(i: usize) -> BTreeSet<u64> {
    let mut node = 1u64;
    let mut out = BTreeSet::new();
    for b in tree_path(i) {
        if b {
            out.insert(node);
        }
        node = 2 * node + b as u64;
    }
    out
}

fn tree_first(i: usize) -> usize {
    let mut path = tree_path(i);
    while path.last() == Some(&false) {
        path.pop();
    }
    if path.is_empty() {
        1
    } else {
        path_index(&path)
    }
}

/// Finite path languages of the complete binary tree laid over the
/// canonical enumeration (breadth-first node order). Shatters an infinite
/// Littlestone tree yet is a countable family of finite languages.
pub fn littlestone() -> Collection {
    let fam = Analytic {
        size: None,
        contains: |i, x| tree_language(i).contains(&x),
        cardinality: |i| finite(tree_language(i)),
        first: tree_first,
        subset: Some(|i, j| tree_language(i).is_subset(&tree_language(j))),
        telltale: Some(|i| tree_language(i).into_iter().collect()),
    };
    // path 1,0,1 -> {1, 6}
    let target = path_index(&[true, false, true]);
    Collection::new("littlestone", fam, meta(target, true, false, None))
}

/// `L_i = ℕ ∖ {i}`. Every finite intersection is infinite.
pub fn cosingleton() -> Collection {
    let fam = Analytic {
        size: None,
        contains: |i, x| x != i as u64,
        cardinality: |_| Cardinality::Infinite { gap: 2 },
        first: |i| i,
        subset: Some(|i, j| i == j),
        telltale: Some(|_| vec![]),
    };
    Collection::new("cosingleton", fam, meta(1, true, true, None))
}

/// `L_1 = {1} ∪ evens`, `L_2 = odds`: two infinite languages meeting only in
/// `{1}`.
pub fn genlb() -> Collection {
    let fam = Analytic {
        size: Some(2),
        contains: |i, x| if i == 1 { x == 1 || x % 2 == 0 } else { x % 2 == 1 },
        cardinality: |_| Cardinality::Infinite { gap: 2 },
        first: |i| i,
        subset: Some(|i, j| i == j),
        telltale: Some(|_| vec![]),
    };
    Collection::new("genlb", fam, meta(1, true, false, Some(2)))
}

/// The one-language collection `{ℕ}`.
pub fn singleton() -> Collection {
    let fam = Analytic {
        size: Some(1),
        contains: |_, _| true,
        cardinality: |_| Cardinality::Infinite { gap: 1 },
        first: |_| 1,
        subset: Some(|_, _| true),
        telltale: Some(|_| vec![]),
    };
    Collection::new("singleton", fam, meta(1, true, true, Some(1)))
}

struct DupWrap {
    inner: Collection,
}

fn inner_index(i: usize) -> usize {
    i.div_ceil(2)
}

impl Family for DupWrap {
    fn contains(&self, i: usize, x: Elem) -> bool {
        self.inner.contains(inner_index(i), x)
    }

    fn cardinality(&self, i: usize) -> Cardinality {
        self.inner.cardinality(inner_index(i))
    }

    fn size(&self) -> Option<usize> {
        self.inner.size().map(|n| 2 * n)
    }

    fn first_occurrence(&self, i: usize) -> usize {
        2 * self.inner.first_occurrence(inner_index(i)) - 1
    }

    fn subset(&self, i: usize, j: usize) -> Option<bool> {
        self.inner.subset(inner_index(i), inner_index(j)).ok()
    }

    fn telltale(&self, i: usize) -> Option<Vec<Elem>> {
        self.inner.telltale(inner_index(i)).ok()
    }
}

/// Every language of `inner` listed twice in a row:
/// `(L_1, L_1, L_2, L_2, …)`.
pub fn dupwrap(inner: &Collection) -> Collection {
    let m = inner.meta();
    let size = inner.size().map(|n| 2 * n);
    let meta = FixtureMeta {
        target: 2 * m.target - 1,
        index_horizon: size.map_or(DEFAULT_INDEX_HORIZON, |n| n.min(DEFAULT_INDEX_HORIZON)),
        ..m.clone()
    };
    Collection::new(
        format!("dupwrap:{}", inner.name()),
        DupWrap {
            inner: inner.clone(),
        },
        meta,
    )
}

/// Base names accepted by [`by_name`]; `dupwrap` wraps `evens`, and
/// `dupwrap:<name>` wraps any other base fixture.
pub const NAMES: &[&str] = &[
    "superfinite",
    "evens",
    "finlang",
    "thresholds",
    "littlestone",
    "dupwrap",
    "cosingleton",
    "genlb",
    "singleton",
];

pub fn by_name(name: &str) -> Result<Collection> {
    if let Some(inner) = name.strip_prefix("dupwrap:") {
        return Ok(dupwrap(&by_name(inner)?));
    }
    Ok(match name {
        "superfinite" => superfinite(),
        "evens" => evens(),
        "finlang" => finlang(),
        "thresholds" => thresholds(),
        "littlestone" => littlestone(),
        "dupwrap" => dupwrap(&evens()),
        "cosingleton" => cosingleton(),
        "genlb" => genlb(),
        "singleton" => singleton(),
        other => {
            return Err(Error::Config(format!(
                "unknown fixture `{other}`; valid: {}",
                NAMES.join(", ")
            )))
        }
    })
}

/// Every shipped fixture, in catalog order.
pub fn all() -> Vec<Collection> {
    NAMES.iter().map(|n| by_name(n).unwrap()).collect()
}
