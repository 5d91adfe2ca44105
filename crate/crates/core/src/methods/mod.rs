//! Pluggable generation methods.
//!
//! A method decides which blueprint starts the map, which placed piece guides
//! each round and when generation stops. The built-in methods are `arena`,
//! `corridor`, `star` and `branch`; others can be added through
//! [`MethodRegistry`].

mod arena;
mod branch;
mod corridor;
mod registry;
mod star;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::pieces::{MapPiece, PlacedPiece};
use crate::rng::GenRng;

pub use arena::Arena;
pub use branch::{jump_base, Branch};
pub use corridor::Corridor;
pub use registry::{MethodFactory, MethodInfo, MethodRegistry};
pub use star::Star;

/// Method selection as it appears in a config file: `kind`, the shared
/// `starter_con_tol`, and kind-specific parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodConfig {
    pub kind: String,
    #[serde(default)]
    pub starter_con_tol: u32,
    #[serde(flatten)]
    pub params: Map<String, Value>,
}

impl MethodConfig {
    pub fn new(kind: impl Into<String>, starter_con_tol: u32, params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        MethodConfig {
            kind: kind.into(),
            starter_con_tol,
            params,
        }
    }

    pub fn arena(max_pieces: u32) -> Self {
        MethodConfig::new("arena", 0, serde_json::json!({ "max_pieces": max_pieces }))
    }

    pub fn corridor(max_pieces: u32) -> Self {
        MethodConfig::new("corridor", 0, serde_json::json!({ "max_pieces": max_pieces }))
    }

    pub fn star(arm_length: u32, arm_length_var: u32) -> Self {
        MethodConfig::new(
            "star",
            0,
            serde_json::json!({ "arm_length": arm_length, "arm_length_var": arm_length_var }),
        )
    }

    pub fn branch(branch_count: u32, branch_length: u32, branch_length_var: u32) -> Self {
        MethodConfig::new(
            "branch",
            0,
            serde_json::json!({
                "branch_count": branch_count,
                "branch_length": branch_length,
                "branch_length_var": branch_length_var,
            }),
        )
    }

    pub fn with_starter_con_tol(mut self, tol: u32) -> Self {
        self.starter_con_tol = tol;
        self
    }

    /// Decodes the kind-specific parameters, rejecting unknown fields.
    pub fn parse_params<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| Error::config(format!("method `{}`: {e}", self.kind)))
    }
}

/// Which end of the connector-count range the starting piece is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarterPreference {
    MostConnectors,
    FewestConnectors,
}

/// Uniform pick among candidates whose connector count is within `tolerance`
/// of the maximum (or minimum). Always consumes exactly one draw.
pub fn select_starting_piece(
    preference: StarterPreference,
    tolerance: u32,
    candidates: &[&MapPiece],
    rng: &mut GenRng,
) -> usize {
    assert!(!candidates.is_empty(), "starting piece candidates are empty");
    let counts: Vec<usize> = candidates.iter().map(|p| p.connector_count()).collect();
    let tol = tolerance as usize;
    let eligible: Vec<usize> = match preference {
        StarterPreference::MostConnectors => {
            let n_max = *counts.iter().max().unwrap();
            (0..counts.len()).filter(|&i| counts[i] + tol >= n_max).collect()
        }
        StarterPreference::FewestConnectors => {
            let n_min = *counts.iter().min().unwrap();
            (0..counts.len()).filter(|&i| counts[i] <= n_min + tol).collect()
        }
    };
    eligible[rng.index(eligible.len())]
}

/// A run of pieces grown from one root: a star arm or a branch.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SegmentTrace {
    /// Instance the segment grows from.
    pub root: usize,
    /// Drawn target length, already clamped to at least one.
    pub target_len: u32,
    /// Instances placed while this segment was open, in order.
    pub pieces: Vec<usize>,
    /// Branch jump position `j_i` after clamping; `None` for star arms and branch 0.
    pub jump: Option<usize>,
}

/// Structural record kept by a method, used for reporting and auditing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MethodTrace {
    pub segments: Vec<SegmentTrace>,
}

impl MethodTrace {
    /// Attributes instances placed since the last call to the open segment.
    pub(crate) fn absorb(&mut self, placed: &[PlacedPiece]) {
        let known: usize = self.segments.iter().map(|s| s.pieces.len()).sum::<usize>() + 1;
        if let Some(seg) = self.segments.last_mut() {
            seg.pieces.extend(known..placed.len());
        }
    }

    pub fn non_empty_segments(&self) -> usize {
        self.segments.iter().filter(|s| !s.pieces.is_empty()).count()
    }
}

/// Strategy interface driven by the generation loop.
pub trait GenerationMethod: Send {
    fn kind(&self) -> &str;

    /// Index into `candidates` of the blueprint used as the starting piece.
    fn select_starting_piece(&mut self, candidates: &[&MapPiece], rng: &mut GenRng) -> usize;

    /// Guide for the first round, once the starting piece is on the map.
    fn initial_guide(&mut self, _placed: &[PlacedPiece], _rng: &mut GenRng) -> Option<usize> {
        Some(0)
    }

    /// Guide for the next round, or `None` to stop. `current` is the guide of
    /// the round that just finished.
    fn next_guide(&mut self, placed: &[PlacedPiece], current: usize, rng: &mut GenRng) -> Option<usize>;

    fn trace(&self) -> MethodTrace {
        MethodTrace::default()
    }
}

/// Parameters shared by `arena` and `corridor`.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct MaxPiecesParams {
    pub max_pieces: u32,
}

/// Draws a segment length uniformly in `[mean - var, mean + var]`, clamped to ≥ 1.
pub(crate) fn draw_length(mean: u32, var: u32, rng: &mut GenRng) -> u32 {
    let lo = mean as i64 - var as i64;
    let hi = mean as i64 + var as i64;
    rng.int_inclusive(lo, hi).max(1) as u32
}
