//! Exact computation of Mazur-Tate elements, Kurihara numbers, and mod-p
//! Iwasawa invariants for rational newforms.
//!
//! The crate is organized around an exact Manin-symbol engine ([`modsym`]),
//! newform eigenvalue supply and optimal-period normalization ([`eigenform`]),
//! group-ring algebra over (Z/M)^x ([`groupring`]), the Mazur-Tate layer
//! ([`mazurtate`]), the Kurihara-number layer ([`kurihara`]), and an
//! independent floating-point oracle ([`analytic`]) used only for
//! cross-checks. All arithmetic outside `analytic` is exact.

pub mod analytic;
pub mod arith;
pub mod eigenform;
pub mod error;
pub mod groupring;
pub mod kurihara;
pub mod linalg;
pub mod mazurtate;
pub mod modsym;

pub use error::{Error, Result};
