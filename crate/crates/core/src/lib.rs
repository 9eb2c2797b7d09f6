//! Exact arithmetic over small finite unital rings, additive maps between
//! them, and decision procedures for (weighted) Jordan homomorphisms and the
//! zero-Jordan-product condition.

pub mod addmap;
pub mod capelli;
pub mod checks;
pub mod error;
pub mod gallery;
pub mod linalg;
pub mod modular;
pub mod report;
pub mod search;
pub mod suites;
pub mod ring;

pub use addmap::{random_map, AdditiveMap, CompanionSolver, MapFile};
pub use checks::{CheckVerdict, PairScan, Witness};
pub use error::{Error, Result};
pub use report::{emit_report, Report, ReportFormat};
pub use ring::{build_ring, Element, Ring, RingRecipe};
