//! Runs the guide chapters as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/conjugations.md")]
pub mod conjugations {}

#[doc = include_str!("../../../book/src/two-qubit.md")]
pub mod two_qubit {}

#[doc = include_str!("../../../book/src/measurability.md")]
pub mod measurability {}

#[doc = include_str!("../../../book/src/metrology.md")]
pub mod metrology {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
