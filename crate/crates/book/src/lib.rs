//! Compiles the guide's snippets as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}
#[doc = include_str!("../../../book/src/projections.md")]
pub mod projections {}
#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}
#[doc = include_str!("../../../book/src/transform.md")]
pub mod transform {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
