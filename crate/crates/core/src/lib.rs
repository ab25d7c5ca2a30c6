//! Ergodic quantum channels `Λₜ(ρ) = pₜρ + (1 − pₜ)τ`: their master
//! equations, divisibility, non-Markovianity diagnostics and ergotropy
//! dynamics.

pub mod channels;
pub mod divisibility;
pub mod ergotropy;
pub mod error;
pub mod lindblad;
pub mod matkernel;
pub mod nonmarkov;

pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/channels.md")]
    mod channels {}
    #[doc = include_str!("../../../book/src/master-equation.md")]
    mod master_equation {}
    #[doc = include_str!("../../../book/src/non-markovianity.md")]
    mod non_markovianity {}
    #[doc = include_str!("../../../book/src/divisibility.md")]
    mod divisibility {}
    #[doc = include_str!("../../../book/src/ergotropy.md")]
    mod ergotropy {}
}
