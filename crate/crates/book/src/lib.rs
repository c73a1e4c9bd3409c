//! The chapters of the guide in `book/src`, included so that `cargo test`
//! runs their code blocks.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/stability.md")]
pub mod stability {}

#[doc = include_str!("../../../book/src/particles.md")]
pub mod particles {}

#[doc = include_str!("../../../book/src/vlasov.md")]
pub mod vlasov {}

#[doc = include_str!("../../../book/src/waves.md")]
pub mod waves {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
