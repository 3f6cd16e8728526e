//! Text and JSON front end for `hermlie-core`.
pub mod dsl;
pub mod io;

pub use dsl::{parse_document, parse_structure, serialize, DslDocument, DslError};
pub use io::{emit_report, load_extension, load_hermitian, HermitianFile, InputError};
