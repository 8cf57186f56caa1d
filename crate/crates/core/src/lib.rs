//! Entanglement of bipartite superpositions of generalized coherent states.
//!
//! [`families`] defines the coherent, squeezed-vacuum, even/odd cat and
//! logarithmic families and their cat-basis parameters; [`entanglement`]
//! turns a two-mode superposition into a concurrence and an entanglement
//! in bits; [`oracle`] recomputes the same numbers by brute force in a
//! truncated photon-number space; [`analysis`] sweeps parameters and locates
//! extrema; [`table`] reads and writes the sweep CSV format.

pub mod analysis;
pub mod entanglement;
pub mod error;
pub mod families;
pub mod oracle;
pub mod parse;
pub mod special;
pub mod table;

pub use entanglement::{analyze, EntanglementReport, Superposition, Variant};
pub use error::{Error, Result};
pub use families::{Amplitude, CatBasisParams, Family, FamilySpec, SingleMode};
