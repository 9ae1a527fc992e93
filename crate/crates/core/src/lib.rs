//! k-trees and their sub-k-trees.
//!
//! The crate models k-trees by base clique plus attachment sequence, counts
//! sub-k-trees (globally, containing a fixed k-clique, containing a fixed
//! vertex) both by brute-force enumeration and by clique decomposition
//! recursions, builds the standard extremal families, enumerates k-trees up
//! to isomorphism, and runs exact-arithmetic verification sweeps over them.
//!
//! Modules:
//! * [`ktree`]: the [`KTreeInstance`] data model, recognition and clique inventory.
//! * [`ktc`]: the `.ktc` text codec.
//! * [`canon`]: canonical codes for isomorphism rejection.
//! * [`families`]: k-stars, k-paths, k-brooms, k-caterpillars and the exhaustive generator.
//! * [`oracle`]: brute-force sub-k-tree enumeration.
//! * [`recurse`]: decomposition recursions and the 1-characteristic tree.
//! * [`verify`]: per-instance checks, sweeps and extremal search.

pub mod canon;
pub mod error;
pub mod exact;
pub mod families;
pub mod ktc;
pub mod ktree;
pub mod oracle;
pub mod recurse;
pub mod stats;
pub mod verify;

pub use canon::CanonicalCode;
pub use error::{Error, Result};
pub use families::{Family, FamilySpec};
pub use ktree::{recognize_ktree, KClique, KTreeInstance, Vertex};
pub use recurse::{CharacteristicTree, Decomposition};
pub use stats::{Scope, SubtreeStats};
pub use verify::{CheckRecord, Outcome, VerificationReport};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
