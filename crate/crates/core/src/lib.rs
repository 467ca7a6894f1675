//! Simulation of language identification and generation in the limit.
//!
//! The domain is the positive integers `x_i = i`. A [`Collection`] is an
//! indexed family of decidable languages; identifiers guess an index of the
//! target from examples, generators emit unseen members of it.
//!
//! ```
//! use limitgen::{fixtures, generate, Sample};
//!
//! let evens = fixtures::evens();
//! let s = Sample::from_indices(&[2, 6]);
//! assert_eq!(generate::km_subset_generate(&evens, &s, 3).unwrap().index(), 4);
//! ```

pub mod error;
pub mod fixtures;
pub mod generate;
pub mod harness;
pub mod identify;
pub mod language;
pub mod mop;
pub mod reductions;
pub mod sampling;

pub use error::{Error, Result};
pub use language::{
    Cardinality, Collection, Elem, Family, FixtureMeta, LabeledSample, Language, Projection, Sample,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/languages.md")]
    mod languages {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/identification.md")]
    mod identification {}
    #[doc = include_str!("../../../book/src/generation.md")]
    mod generation {}
    #[doc = include_str!("../../../book/src/token-machines.md")]
    mod token_machines {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
