//! Generators of su(2^m) and their exact change of basis to Pauli strings.
//!
//! * [`pauli`]: Pauli strings in flip-mask / z-mask form, dense
//!   materialization, D/OD form classification, canonical enumeration.
//! * [`gellmann`]: the `n^2 - 1` generators of su(n) with flat-index
//!   decoding, plus an orthogonal diagonal basis and a derivative check.
//! * [`basis`]: Pauli decomposition (projection and Walsh–Hadamard fast
//!   path), composition, the generator/string expansions, sector blocks and
//!   the form classification table.
//! * [`su`]: parameter vectors, element assembly and extraction, and
//!   exponentiation to the group.
//! * [`verify`]: randomized and exhaustive invariant suites.
//! * [`formats`], [`render`], [`cli`]: JSON files, text output and the
//!   command-line front end.

pub mod basis;
pub mod cli;
pub mod error;
pub mod formats;
pub mod gellmann;
pub mod matrix;
pub mod pauli;
pub mod render;
pub mod su;
pub mod verify;

pub use basis::{
    classification_table, compose, decompose, decompose_generators, fast_decompose,
    generator_in_pauli, pauli_in_generators, sector_block, Decomposition, GeneratorExpansion,
    SectorBlock, SectorPart,
};
pub use error::{Error, Result};
pub use gellmann::{generator, index_to_position, Family, GeneratorIndex, Position};
pub use matrix::{hs_inner, ComplexMatrix, IntMatrix};
pub use pauli::{classify_form, enumerate_strings, materialize, FormTag, PauliLabel, PauliString};
pub use su::{
    build_element, exponentiate, extract_params, free_parameter_count, Convention, SuParameters,
};
