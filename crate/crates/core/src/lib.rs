//! Exact Z2 computations for Chekanov-Eliashberg algebras of Legendrians: the
//! two-copy bimodules, the Calabi-Yau map, the cyclic complexes with their
//! A-infinity operations, and windowed homology.

pub mod algebra;
pub mod bimodule;
pub mod cyclic;
pub mod dga;
pub mod fixtures;
pub mod generate;
pub mod homology;
pub mod oracle;
pub mod report;

pub use algebra::{apply_derivation, Convention, Gen, GradingContext, MarkedWord, SymbolKind, TensorPoly, Word};
pub use dga::{parse_presentation, validate, DgaPresentation, ParseDiagnostic, ValidationReport};
pub use oracle::{ChordKind, MixedChord};
pub use bimodule::BimoduleElement;
pub use cyclic::CyclicElement;
pub use homology::{ComplexSlice, SparseGf2Matrix};
pub use report::CheckReport;
