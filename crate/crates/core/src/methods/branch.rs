use serde::Deserialize;

use super::{
    draw_length, select_starting_piece, GenerationMethod, MethodConfig, MethodTrace, SegmentTrace, StarterPreference,
};
use crate::error::{Error, Result};
use crate::pieces::{MapPiece, PlacedPiece};
use crate::rng::GenRng;

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchParams {
    branch_count: u32,
    branch_length: u32,
    branch_length_var: u32,
}

/// Base jump between branch roots in placement order: `max(1, ⌊count / length⌋)`.
pub fn jump_base(branch_count: u32, branch_length: u32) -> usize {
    ((branch_count / branch_length) as usize).max(1)
}

/// Instances around `center` in back-and-forth order (`c, c-1, c+1, c-2, ...`),
/// limited to `[center - radius, center + radius]` and to `0..len`.
pub(crate) fn neighborhood(center: usize, radius: usize, len: usize) -> impl Iterator<Item = usize> {
    let c = center as i64;
    std::iter::once(c)
        .chain((1..=radius as i64).flat_map(move |d| [c - d, c + d]))
        .filter(move |&j| j >= 0 && (j as usize) < len)
        .map(|j| j as usize)
}

/// Like `star`, but new branches root at previously placed pieces chosen by a
/// fixed jump through placement order instead of returning to the start.
#[derive(Clone, Debug)]
pub struct Branch {
    starter_con_tol: u32,
    branch_count: u32,
    branch_length: u32,
    branch_length_var: u32,
    trace: MethodTrace,
}

impl Branch {
    pub fn new(starter_con_tol: u32, branch_count: u32, branch_length: u32, branch_length_var: u32) -> Result<Self> {
        if branch_count == 0 || branch_length == 0 {
            return Err(Error::config("branch: branch_count and branch_length must be positive"));
        }
        Ok(Branch {
            starter_con_tol,
            branch_count,
            branch_length,
            branch_length_var,
            trace: MethodTrace::default(),
        })
    }

    pub fn from_config(cfg: &MethodConfig) -> Result<Self> {
        let p: BranchParams = cfg.parse_params()?;
        Branch::new(
            cfg.starter_con_tol,
            p.branch_count,
            p.branch_length,
            p.branch_length_var,
        )
    }

    pub fn jump_base(&self) -> usize {
        jump_base(self.branch_count, self.branch_length)
    }

    fn open_branch(&mut self, root: usize, jump: Option<usize>, rng: &mut GenRng) -> usize {
        let target_len = draw_length(self.branch_length, self.branch_length_var, rng);
        self.trace.segments.push(SegmentTrace {
            root,
            target_len,
            pieces: Vec::new(),
            jump,
        });
        root
    }

    fn next_root(&mut self, placed: &[PlacedPiece], rng: &mut GenRng) -> Option<usize> {
        let i = self.trace.segments.len();
        if i >= self.branch_count as usize {
            return None;
        }
        let base = self.jump_base();
        let jump = (i * base).min(placed.len() - 1);
        let root = neighborhood(jump, base, placed.len()).find(|&j| placed[j].free_connectors() > 0)?;
        Some(self.open_branch(root, Some(jump), rng))
    }
}

impl GenerationMethod for Branch {
    fn kind(&self) -> &str {
        "branch"
    }

    fn select_starting_piece(&mut self, candidates: &[&MapPiece], rng: &mut GenRng) -> usize {
        select_starting_piece(
            StarterPreference::FewestConnectors,
            self.starter_con_tol,
            candidates,
            rng,
        )
    }

    fn initial_guide(&mut self, placed: &[PlacedPiece], rng: &mut GenRng) -> Option<usize> {
        if placed[0].free_connectors() == 0 {
            return None;
        }
        Some(self.open_branch(0, None, rng))
    }

    fn next_guide(&mut self, placed: &[PlacedPiece], _current: usize, rng: &mut GenRng) -> Option<usize> {
        self.trace.absorb(placed);
        let branch = self.trace.segments.last().expect("a branch is always open");
        if branch.pieces.len() >= branch.target_len as usize {
            return self.next_root(placed, rng);
        }
        match branch.pieces.last() {
            None => Some(branch.root),
            Some(&last) if placed[last].free_connectors() > 0 => Some(last),
            Some(_) => self.next_root(placed, rng),
        }
    }

    fn trace(&self) -> MethodTrace {
        self.trace.clone()
    }
}
