//! Exact point counting over small finite fields, weighted Frobenius statistics
//! on moduli of curves of genus at most three, and the extraction of Hecke
//! traces of elliptic and Siegel modular forms from those statistics.

pub mod error;
pub mod gf;

pub use error::{Error, Result};
pub mod curve_models;
pub mod eichler_selberg;
pub mod fqpoly;
pub mod moduli_stats;
pub mod motive_ring;
pub mod poly;
pub mod quadratic;
pub mod siegel_extract;
pub mod tables;
pub mod zeta_bounds;

// Book chapters run as doctests so their snippets track the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/zeta.md")]
    mod zeta {}
    #[doc = include_str!("../../../book/src/moduli.md")]
    mod moduli {}
    #[doc = include_str!("../../../book/src/siegel.md")]
    mod siegel {}
    #[doc = include_str!("../../../book/src/motives.md")]
    mod motives {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
