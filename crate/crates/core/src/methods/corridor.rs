use super::{select_starting_piece, GenerationMethod, MaxPiecesParams, MethodConfig, StarterPreference};
use crate::error::Result;
use crate::pieces::{MapPiece, PlacedPiece};
use crate::rng::GenRng;

/// Grows a single line: the guide is always the most recently placed piece.
#[derive(Clone, Debug)]
pub struct Corridor {
    starter_con_tol: u32,
    max_pieces: u32,
}

impl Corridor {
    pub fn new(starter_con_tol: u32, max_pieces: u32) -> Self {
        Corridor {
            starter_con_tol,
            max_pieces,
        }
    }

    pub fn from_config(cfg: &MethodConfig) -> Result<Self> {
        let p: MaxPiecesParams = cfg.parse_params()?;
        Ok(Corridor::new(cfg.starter_con_tol, p.max_pieces))
    }

    fn done(&self, placed: &[PlacedPiece]) -> bool {
        placed.len() > self.max_pieces as usize
    }
}

impl GenerationMethod for Corridor {
    fn kind(&self) -> &str {
        "corridor"
    }

    fn select_starting_piece(&mut self, candidates: &[&MapPiece], rng: &mut GenRng) -> usize {
        select_starting_piece(
            StarterPreference::FewestConnectors,
            self.starter_con_tol,
            candidates,
            rng,
        )
    }

    fn initial_guide(&mut self, placed: &[PlacedPiece], _rng: &mut GenRng) -> Option<usize> {
        (!self.done(placed)).then_some(0)
    }

    fn next_guide(&mut self, placed: &[PlacedPiece], _current: usize, _rng: &mut GenRng) -> Option<usize> {
        if self.done(placed) {
            None
        } else {
            Some(placed.len() - 1)
        }
    }
}
