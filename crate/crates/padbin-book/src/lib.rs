//! Each module's documentation is a chapter of the guide in `book/src/`,
//! included verbatim. `cargo test -p padbin-book --doc` therefore compiles
//! and runs every Rust code block the book displays, so the prose cannot
//! drift away from the library it describes.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/valuations.md")]
pub mod valuations {}

#[doc = include_str!("../../../book/src/modified-binomials.md")]
pub mod modified_binomials {}

#[doc = include_str!("../../../book/src/symmetric-functions.md")]
pub mod symmetric_functions {}

#[doc = include_str!("../../../book/src/bernoulli-indicators.md")]
pub mod bernoulli_indicators {}

#[doc = include_str!("../../../book/src/approximation.md")]
pub mod approximation {}

#[doc = include_str!("../../../book/src/combinations.md")]
pub mod combinations {}

#[doc = include_str!("../../../book/src/mobius-sums.md")]
pub mod mobius_sums {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
