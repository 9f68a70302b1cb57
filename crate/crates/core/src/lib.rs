//! Exact Riemann solver and interface-tracking finite-volume scheme for
//! compressible flows of two Mie-Grüneisen materials.
//!
//! - [`eos`]: equations of state of the form `p = Γ(ρ) ρ e + h(ρ)`.
//! - [`riemann`]: the two-medium Riemann problem.
//! - [`flow1d`]: planar and spherical cut-cell solver built on it.
//! - [`problems`]: benchmark set-ups and blast-wave diagnostics.

pub mod eos;
pub mod flow1d;
pub mod problems;
pub mod riemann;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/eos.md")]
    mod eos {}
    #[doc = include_str!("../../../book/src/riemann.md")]
    mod riemann {}
    #[doc = include_str!("../../../book/src/flow1d.md")]
    mod flow1d {}
    #[doc = include_str!("../../../book/src/problems.md")]
    mod problems {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
