//! Doc-test shim: every fenced Rust block in the book compiles and runs under
//! `cargo test`, one module per chapter, so the guide cannot drift from the
//! library. mdbook itself cannot execute snippets against a dependency; this
//! crate is the standard workaround.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/prime-fields.md")]
pub mod prime_fields {}

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/groebner.md")]
pub mod groebner {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/intersection-theory.md")]
pub mod intersection_theory {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
