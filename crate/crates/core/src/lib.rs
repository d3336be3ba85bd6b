//! Perfect codes in the poset metric.
//!
//! A poset `P` on `[n]` turns `F^n` into a metric space: the weight of a word
//! is the size of the smallest ideal containing its support. This crate
//! enumerates the ideal families that govern balls in that metric, verifies
//! perfect codes, builds them when `r` is `m`, `m - 1` or `m - 2`, and runs the
//! nonexistence criteria that apply to everything else.
//!
//! ```
//! use posetcode::{classify::repetition, is_perfect, Poset, VerifyMode};
//!
//! let p = Poset::antichain(5)?;
//! let res = is_perfect(&p, &repetition(5), 2, VerifyMode::Fast)?;
//! assert!(res.perfect);
//! assert_eq!(res.ball_size, 16);
//! # Ok::<(), posetcode::Error>(())
//! ```

pub mod canon;
pub mod classify;
pub mod cli;
pub mod codes;
pub mod criteria;
pub mod error;
pub mod gf2;
pub mod ideals;
pub mod metric;
pub mod poset;
pub mod search;
pub mod subset;

pub use codes::{is_error_correcting, is_perfect, Code, CodeRepr, VerificationResult, VerifyMode};
pub use criteria::{reduce, run_battery, CriterionReport, Verdict};
pub use error::{Error, Result};
pub use ideals::{enumerate_ideals, IdealFamily};
pub use metric::{ball, ball_size, p_distance, p_weight};
pub use poset::{Poset, PosetKind};
pub use search::{find_perfect_code, SearchConfig, SearchOutcome};
pub use subset::Subset;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/posets.md")]
    mod posets {}
    #[doc = include_str!("../../../book/src/metric.md")]
    mod metric {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
