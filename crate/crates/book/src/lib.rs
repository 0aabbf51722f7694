//! The guide's chapters as doc modules, so `cargo test` runs every snippet.
//! Chapters are listed in the order of `book/src/SUMMARY.md`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model-language.md")]
pub mod model_language {}
#[doc = include_str!("../../../book/src/jets-and-forms.md")]
pub mod jets_and_forms {}
#[doc = include_str!("../../../book/src/euler-lagrange.md")]
pub mod euler_lagrange {}
#[doc = include_str!("../../../book/src/legendre-and-omega.md")]
pub mod legendre_and_omega {}
#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators {}
#[doc = include_str!("../../../book/src/on-shell.md")]
pub mod on_shell {}
#[doc = include_str!("../../../book/src/noether.md")]
pub mod noether {}
#[doc = include_str!("../../../book/src/gauge.md")]
pub mod gauge {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
