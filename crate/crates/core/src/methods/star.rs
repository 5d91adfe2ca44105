use serde::Deserialize;

use super::{
    draw_length, select_starting_piece, GenerationMethod, MethodConfig, MethodTrace, SegmentTrace, StarterPreference,
};
use crate::error::{Error, Result};
use crate::pieces::{MapPiece, PlacedPiece};
use crate::rng::GenRng;

const HUB: usize = 0;

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StarParams {
    arm_length: u32,
    arm_length_var: u32,
}

/// Corridor-like arms radiating from the starting piece, which acts as a hub.
/// Each arm targets a length drawn from `arm_length ± arm_length_var` when it
/// opens; a new arm opens from the hub once the current one is complete or
/// ends in a piece with no free connectors.
#[derive(Clone, Debug)]
pub struct Star {
    starter_con_tol: u32,
    arm_length: u32,
    arm_length_var: u32,
    trace: MethodTrace,
}

impl Star {
    pub fn new(starter_con_tol: u32, arm_length: u32, arm_length_var: u32) -> Result<Self> {
        if arm_length == 0 {
            return Err(Error::config("star: arm_length must be positive"));
        }
        Ok(Star {
            starter_con_tol,
            arm_length,
            arm_length_var,
            trace: MethodTrace::default(),
        })
    }

    pub fn from_config(cfg: &MethodConfig) -> Result<Self> {
        let p: StarParams = cfg.parse_params()?;
        Star::new(cfg.starter_con_tol, p.arm_length, p.arm_length_var)
    }

    fn open_arm(&mut self, placed: &[PlacedPiece], rng: &mut GenRng) -> Option<usize> {
        if placed[HUB].free_connectors() == 0 {
            return None;
        }
        let target_len = draw_length(self.arm_length, self.arm_length_var, rng);
        self.trace.segments.push(SegmentTrace {
            root: HUB,
            target_len,
            pieces: Vec::new(),
            jump: None,
        });
        Some(HUB)
    }
}

impl GenerationMethod for Star {
    fn kind(&self) -> &str {
        "star"
    }

    fn select_starting_piece(&mut self, candidates: &[&MapPiece], rng: &mut GenRng) -> usize {
        select_starting_piece(StarterPreference::MostConnectors, self.starter_con_tol, candidates, rng)
    }

    fn initial_guide(&mut self, placed: &[PlacedPiece], rng: &mut GenRng) -> Option<usize> {
        self.open_arm(placed, rng)
    }

    fn next_guide(&mut self, placed: &[PlacedPiece], _current: usize, rng: &mut GenRng) -> Option<usize> {
        self.trace.absorb(placed);
        let arm = self.trace.segments.last().expect("an arm is always open");
        let len = arm.pieces.len();
        if len >= arm.target_len as usize {
            return self.open_arm(placed, rng);
        }
        match arm.pieces.last() {
            // the hub has not taken this arm's first piece yet
            None => Some(HUB),
            Some(&last) if placed[last].free_connectors() > 0 => Some(last),
            // premature terminal
            Some(_) => self.open_arm(placed, rng),
        }
    }

    fn trace(&self) -> MethodTrace {
        self.trace.clone()
    }
}
