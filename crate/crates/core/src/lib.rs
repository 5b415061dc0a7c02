//! Sensitivity oracles for Steiner minimum cuts under a single edge failure.
//!
//! Given an undirected graph with non-negative integer capacities and a
//! Steiner set `S`, the oracles answer, for any edge `e` and any reduction
//! `0 <= delta <= w(e)`:
//!
//! * `cap(e, delta)`: the Steiner mincut capacity after the reduction, from
//!   a linear-size binary tree ([`cap_tree::CapTree`]);
//! * `cut(e, delta)`: a Steiner mincut after the reduction, from
//!   [`oracle::FullOracle`], whose size is `O(n (n - |S| + 1))`.
//!
//! [`verify`] holds an exhaustive enumerator used to cross-check every
//! structure, and [`generators`] builds adversarial graph families.

pub mod bench;
pub mod cap_tree;
pub mod error;
pub mod flow;
pub mod generators;
pub mod gomory_hu;
pub mod graph;
pub mod laminar;
pub mod lca;
pub mod oracle;
pub mod persist;
pub mod steiner;
pub mod verify;

pub use error::{FlowError, GraphError, LaminarError, OracleError, ParseError, PersistError};
pub use graph::{parse_graph, Capacity, Cut, Edge, EdgeId, EdgeType, Graph, Vertex};
