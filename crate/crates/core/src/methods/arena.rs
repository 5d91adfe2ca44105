use super::{select_starting_piece, GenerationMethod, MaxPiecesParams, MethodConfig, StarterPreference};
use crate::error::Result;
use crate::pieces::{MapPiece, PlacedPiece};
use crate::rng::GenRng;

/// Sprawls outward from a well-connected starting piece: a guide is kept until
/// its connectors run out, then the piece placed right after it takes over.
#[derive(Clone, Debug)]
pub struct Arena {
    starter_con_tol: u32,
    max_pieces: u32,
}

impl Arena {
    pub fn new(starter_con_tol: u32, max_pieces: u32) -> Self {
        Arena {
            starter_con_tol,
            max_pieces,
        }
    }

    pub fn from_config(cfg: &MethodConfig) -> Result<Self> {
        let p: MaxPiecesParams = cfg.parse_params()?;
        Ok(Arena::new(cfg.starter_con_tol, p.max_pieces))
    }

    fn done(&self, placed: &[PlacedPiece]) -> bool {
        placed.len() > self.max_pieces as usize
    }
}

impl GenerationMethod for Arena {
    fn kind(&self) -> &str {
        "arena"
    }

    fn select_starting_piece(&mut self, candidates: &[&MapPiece], rng: &mut GenRng) -> usize {
        select_starting_piece(StarterPreference::MostConnectors, self.starter_con_tol, candidates, rng)
    }

    fn initial_guide(&mut self, placed: &[PlacedPiece], _rng: &mut GenRng) -> Option<usize> {
        (!self.done(placed)).then_some(0)
    }

    fn next_guide(&mut self, placed: &[PlacedPiece], current: usize, _rng: &mut GenRng) -> Option<usize> {
        if self.done(placed) {
            return None;
        }
        if placed[current].free_connectors() > 0 {
            return Some(current);
        }
        let next = current + 1;
        (next < placed.len()).then_some(next)
    }
}
