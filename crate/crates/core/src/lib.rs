//! Finite-stage simulations of numberings of left-c.e. reals and effectively
//! closed classes.
//!
//! - [`dyadic`]: binary strings, exact dyadic rationals, optimal coverings.
//! - [`streams`]: scripted c.e. sets and left-c.e. approximations.
//! - [`complexity`]: scripted prefix-free machines, `K_t`, `Ω_s`, class trees.
//! - [`constructions`]: stage-by-stage constructions and their traces.
//! - [`classes`]: trees, diagonalization, measure-capped enumerations.
//! - [`coverings`]: odd coverings and the star construction.
//! - [`oracle`] and [`check`]: brute-force references and the suites
//!   comparing against them.
//!
//! ```
//! use numberings::dyadic::{bits, dy, prefix_set_measure};
//!
//! assert_eq!(prefix_set_measure(&[bits("0"), bits("10")]), dy(3, 2));
//! ```

pub mod check;
pub mod classes;
pub mod complexity;
pub mod constructions;
pub mod coverings;
pub mod dyadic;
pub mod error;
pub mod oracle;
pub mod streams;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dyadic.md")]
    mod dyadic {}
    #[doc = include_str!("../../../book/src/streams.md")]
    mod streams {}
    #[doc = include_str!("../../../book/src/complexity.md")]
    mod complexity {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/coverings.md")]
    mod coverings {}
    #[doc = include_str!("../../../book/src/checking.md")]
    mod checking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
