//! Exact Berge-cycle and Berge-biclique detection, a brute-force oracle, and
//! coloring-wide freeness checks.

mod biclique;
mod cycle;
mod incidence;
pub mod naive;
pub mod verify;

pub use biclique::contains_berge_biclique;
pub use cycle::contains_berge_cycle;
pub use naive::{naive_berge_contains, CorePattern};
pub use verify::{detect, verify_coloring_free, write_report, ClassFailure, ForbiddenFamily, FreenessReport};
