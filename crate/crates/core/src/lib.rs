pub mod catalog;
pub mod dsl;
pub mod error;
pub mod euler;
pub mod exterior;
pub mod jetcalc;
pub mod jetpde;
pub mod msympl;
pub mod ratpoly;
pub mod variational;

pub use error::{Error, Result};

#[cfg(test)]
mod test_support;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/effective.md")]
    mod effective {}
    #[doc = include_str!("../../../book/src/monge-ampere.md")]
    mod monge_ampere {}
    #[doc = include_str!("../../../book/src/euler.md")]
    mod euler {}
    #[doc = include_str!("../../../book/src/variational.md")]
    mod variational {}
    #[doc = include_str!("../../../book/src/multisymplectic.md")]
    mod multisymplectic {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
