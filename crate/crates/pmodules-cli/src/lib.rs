//! Library side of the `pmod` command: graph file ingestion, the
//! verify pipeline, and the randomized fuzz harness.

#![warn(missing_docs)]

pub mod fuzz;
pub mod graphfile;
pub mod verify;

pub use fuzz::{fuzz, random_digraph, random_endpoints, FuzzParams, FuzzSummary};
pub use graphfile::{format_graph, parse_graph, GraphFileError};
pub use verify::{default_max_steps, verify_case, VerifyError, VerifyReport};
