pub mod bar;
pub mod fp;
pub mod series;
pub mod words;

// The guide's chapters run as doc-tests, so the book cannot drift from the code.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/bar.md")]
    mod bar {}
    #[doc = include_str!("../../../book/src/iterated_tor.md")]
    mod iterated_tor {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
