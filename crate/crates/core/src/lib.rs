//! Resistance distances in k-coalescences of complete graphs and related
//! families, with closed forms checked against a Laplacian pseudoinverse
//! oracle and the resistance-based indices built on them.

pub mod family;
pub mod graph;
pub mod indices;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod resistance;

pub use family::{build_family, Family, FamilySpec, SpecParseError};
pub use graph::{Graph, GraphError, StandardKind};
pub use indices::{verify, IndexError, IndexKind, Verdict, VerificationReport, VerifyTarget};
pub use linalg::{LinalgError, SymMatrix};
pub use resistance::{closed_form, resistance_oracle, ResistanceError, ResistanceMatrix};
