//! Edge colorings of complete uniform hypergraphs in which no color class
//! contains a Berge cycle (or Berge biclique), together with exact verifiers.

pub mod bipartite;
pub mod builder;
pub mod cli;
pub mod compositions;
pub mod detect;
pub mod enlarge;
pub mod error;
pub mod io;
pub mod model;

pub use error::{Error, Result};
