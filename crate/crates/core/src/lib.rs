//! Finite combinatorics of connections: pairs of a rigid surjection and an
//! increasing choice of representatives, closed under composition.
//!
//! The crate covers the connection algebra itself, Hales-Jewett words, the
//! explicit maps used to move between words, connections and cylinders,
//! exhaustive Ramsey witness search over copy hypergraphs, and finite checks
//! of the approximation axioms of a topological Ramsey space.

pub mod axioms;
pub mod connection;
pub mod error;
pub mod exec;
pub mod maps;
pub mod search;
pub mod words;

pub use connection::{Alphabet, Connection, Mode, RigidSurjection, SpaceSpec, Token};
pub use error::{Error, Result};
pub use exec::Parallelism;
