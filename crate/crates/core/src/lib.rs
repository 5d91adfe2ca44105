//! Procedural map generation from snappable mesh pieces.
//!
//! Pieces carry connectors (position, outward heading, pin count, color) and
//! box colliders. A generation method decides where the map grows; the engine
//! snaps random compatible pieces onto free connectors, rejecting placements
//! whose colliders overlap. Finished maps can be checked for navigability by
//! scattering points on walkable surfaces and measuring how well they connect.
//!
//! ```
//! use snapmesh::{bundled, generate, GenerationConfig, MethodConfig};
//!
//! let lib = bundled::library();
//! let mut config = GenerationConfig::new(bundled::piece_ids(), MethodConfig::arena(12));
//! config.matching_rules = bundled::matching_rules();
//! config.seed = 42;
//! let map = generate(&config, &lib).unwrap();
//! assert!(map.piece_count() >= 1);
//! ```

pub mod audit;
pub mod bundled;
pub mod engine;
mod error;
pub mod formats;
pub mod geometry;
pub mod methods;
pub mod pieces;
pub mod rng;
pub mod validation;

pub use engine::{
    generate, generate_with, ConnectionRecord, GeneratedMap, Generation, GenerationConfig, LogEntry, StepResult,
};
pub use error::{Error, Result};
pub use geometry::{Obb, TriMesh, Vec3, YawTransform};
pub use methods::{GenerationMethod, MethodConfig, MethodRegistry, MethodTrace};
pub use pieces::{ColorId, ColorMatrix, Connector, MapPiece, MatchMode, MatchingRules, PieceLibrary, PlacedPiece};
pub use rng::GenRng;
pub use validation::{NavConfig, Validation, ValidationReport};

/// Validates the merged world mesh of `map`.
pub fn validate_map(map: &GeneratedMap, library: &PieceLibrary, nav: &NavConfig) -> Result<Validation> {
    validation::validate_mesh(&map.world_mesh(library)?, nav)
}
