pub mod census;
pub mod error;
pub mod formulas;
pub mod gf;
pub mod interp;
pub mod pg2;
pub mod poly;
pub mod rational;
pub mod reference;
pub mod smooth;
pub mod stats;

pub use error::{Error, Result};

// The guide's snippets run as doc-tests, one module per chapter so a
// failure names its chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/smoothness.md")]
    mod smoothness {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/independence.md")]
    mod independence {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
}
