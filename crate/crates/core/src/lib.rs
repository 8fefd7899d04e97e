//! Generalized Rauzy fractals for sequences of substitutions that share one
//! unimodular Pisot incidence matrix.
//!
//! The crate is organised bottom-up:
//!
//! - [`subst`]: words, substitutions, incidence matrices, prefix-suffix tables;
//! - [`spectral`]: Perron data, Pisot/irreducibility tests, stable coordinates,
//!   the adapted norm and the lattice Γ;
//! - [`adic`]: directive sequences, limit points, minimality and balance scans;
//! - [`fractal`]: projected stepped lines, the graph-directed set equation,
//!   Hausdorff distances and the experiments built on them.
//!
//! Heavy loops go through [`par`], which uses rayon when the `parallel`
//! feature is on (the default) and plain iterators otherwise.

pub mod adic;
pub mod error;
pub mod fractal;
pub mod par;
pub mod rng;
pub mod spectral;
pub mod subst;

pub use error::{Error, Result};
