//! # conjwalk
//!
//! Exact numerics for continuous-time random walks on discrete groups whose
//! jump measure is symmetric and constant on conjugacy classes.
//!
//! The walk starts at the identity and is right-multiplied by a sample of the
//! rate measure `mu` at total rate `sum(mu)`. Everything here is computed
//! exactly up to an explicit Poisson truncation, never by Monte Carlo, so the
//! inequalities below can be checked to tight tolerances:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`group`] | lattices `Z^d`/`Z_m`, symmetric groups, dihedral groups, Cayley BFS |
//! | [`measure`] | [`RateMeasure`] and the symmetry / class-function checks |
//! | [`heat`] | uniformized heat kernel, entropy, varentropy, `E[Gamma log f_t]` |
//! | [`curvature`] | carré du champ, iterated carré du champ, best curvature constant |
//! | [`trajectory`] | words, suffix-conjugation counts, insertion map, exact path laws |
//! | [`bounds`] | the `V`/`U` profiles and per-time bound tables |
//! | [`cutoff`] | relaxation time, mixing time and the cutoff diagnostics row |
//!
//! ## Quick start
//!
//! ```
//! use conjwalk::{GroupSpec, RateMeasure, heat, bounds};
//!
//! let g = GroupSpec::symmetric(4).unwrap();
//! let mu = RateMeasure::transpositions(&g).unwrap();
//! let f = heat::heat_kernel(&g, &mu, 2.0, 1e-12).unwrap();
//! let stats = heat::info_stats(&f).unwrap();
//! assert!(stats.varentropy <= 16.0 * mu.num_generators() as f64);
//! assert!(bounds::v_func(1.0) < 1.0);
//! ```

pub mod bounds;
pub mod curvature;
pub mod cutoff;
pub mod group;
pub mod heat;
pub mod measure;
pub(crate) mod poisson;
pub mod trajectory;

pub use group::{Element, GroupFamily, GroupSpec};
pub use heat::Pmf;
pub use measure::{Generator, RateMeasure, ValidationReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid element for {group}: {reason}")]
    InvalidElement { group: String, reason: String },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid rate measure: {0}")]
    InvalidMeasure(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("chain is disconnected: support generates a subgroup of {reached} out of {order} elements")]
    Disconnected { reached: usize, order: usize },

    #[error("enumeration refused: {needed} cases exceed the limit of {limit}")]
    TooLarge { needed: u128, limit: u128 },

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
