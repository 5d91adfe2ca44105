//! The generation loop.
//!
//! A starting piece chosen by the method is placed at the origin. Each round
//! then draws tentative blueprints for the current guide, picks random
//! rule-compatible connector pairings, rejects overlapping placements and
//! snaps the first acceptable one. After `max_fails` tentative pieces without
//! a placement the round ends. The method chooses the next guide; the run
//! ends when it returns none or when the stall guard fires.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::formats;
use crate::geometry::{obb_overlap_world, transform_mesh, Obb, TriMesh, YawTransform, DEFAULT_SHRINK_EPS};
use crate::methods::{GenerationMethod, MethodConfig, MethodRegistry, MethodTrace};
use crate::pieces::{enumerate_valid_pairings, snap_transform, MapPiece, MatchingRules, PieceLibrary, PlacedPiece};
use crate::rng::GenRng;

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationConfig {
    pub pieces_list: Vec<String>,
    pub use_starter: bool,
    pub starter_list: Vec<String>,
    pub matching_rules: MatchingRules,
    pub max_fails: u32,
    pub piece_distance: f64,
    pub check_overlaps: bool,
    /// Amount every collider half-extent is shrunk before overlap tests.
    pub shrink_eps: f64,
    pub method: MethodConfig,
    pub seed: i64,
}

impl GenerationConfig {
    pub fn new(pieces_list: Vec<String>, method: MethodConfig) -> Self {
        GenerationConfig {
            pieces_list,
            use_starter: false,
            starter_list: Vec::new(),
            matching_rules: MatchingRules::unrestricted(),
            max_fails: 10,
            piece_distance: 1e-4,
            check_overlaps: true,
            shrink_eps: DEFAULT_SHRINK_EPS,
            method,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces_list.is_empty() {
            return Err(Error::config("pieces_list is empty"));
        }
        if self.use_starter && self.starter_list.is_empty() {
            return Err(Error::config("use_starter is set but starter_list is empty"));
        }
        if self.max_fails == 0 {
            return Err(Error::config("max_fails must be at least 1"));
        }
        if !(self.piece_distance >= 0.0 && self.piece_distance.is_finite()) {
            return Err(Error::config("piece_distance must be a finite non-negative number"));
        }
        if !(self.shrink_eps >= 0.0 && self.shrink_eps.is_finite()) {
            return Err(Error::config("shrink_eps must be a finite non-negative number"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConnectionRecord {
    pub guide_instance: usize,
    pub guide_connector: usize,
    pub tentative_instance: usize,
    pub tentative_connector: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndReason {
    /// The method returned no guide.
    Method,
    /// Same guide twice in a row with an unchanged free-connector count.
    Stalled,
}

impl fmt::Display for EndReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndReason::Method => "method",
            EndReason::Stalled => "stalled",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Snap {
        guide_connector: usize,
        tentative_connector: usize,
    },
    OverlapReject {
        guide_connector: usize,
        tentative_connector: usize,
    },
    Fail {
        fail_count: u32,
        max_fails: u32,
    },
    End(EndReason),
}

/// One line of the narration log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub step: usize,
    pub guide_instance: usize,
    pub guide_blueprint: String,
    pub tentative: Option<String>,
    pub pairings: usize,
    pub result: StepResult,
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "STEP {} | guide={}/{} | tentative={} | pairings={} | result=",
            self.step,
            self.guide_instance,
            self.guide_blueprint,
            self.tentative.as_deref().unwrap_or("-"),
            self.pairings
        )?;
        match &self.result {
            StepResult::Snap {
                guide_connector,
                tentative_connector,
            } => {
                write!(f, "SNAP({guide_connector}->{tentative_connector})")
            }
            StepResult::OverlapReject {
                guide_connector,
                tentative_connector,
            } => {
                write!(f, "OVERLAP_REJECT({guide_connector}->{tentative_connector})")
            }
            StepResult::Fail { fail_count, max_fails } => write!(f, "FAIL({fail_count}/{max_fails})"),
            StepResult::End(reason) => write!(f, "END({reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedMap {
    pub config_hash: String,
    pub seed: i64,
    pub placed: Vec<PlacedPiece>,
    pub connections: Vec<ConnectionRecord>,
    pub log: Vec<LogEntry>,
}

impl GeneratedMap {
    pub fn piece_count(&self) -> usize {
        self.placed.len()
    }

    /// All piece meshes merged in world space, in placement order.
    pub fn world_mesh(&self, library: &PieceLibrary) -> Result<TriMesh> {
        let mut out = TriMesh::default();
        for p in &self.placed {
            let bp = library.resolve(&p.blueprint_id)?;
            out.append(&transform_mesh(&bp.mesh, &p.pose));
        }
        Ok(out)
    }

    /// World-space colliders per placed piece.
    pub fn world_colliders(&self, library: &PieceLibrary) -> Result<Vec<Vec<Obb>>> {
        self.placed
            .iter()
            .map(|p| {
                let bp = library.resolve(&p.blueprint_id)?;
                Ok(bp.colliders.iter().map(|c| c.transformed(&p.pose)).collect())
            })
            .collect()
    }

    pub fn log_text(&self) -> String {
        let mut s = String::new();
        for e in &self.log {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }
}

/// Map plus the method's structural trace.
#[derive(Clone, Debug)]
pub struct Generation {
    pub map: GeneratedMap,
    pub trace: MethodTrace,
}

/// State captured when a guide is selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GuideSnapshot {
    pub instance: usize,
    pub free_connectors: usize,
}

/// True when `current` repeats the previous guide with the same number of free
/// connectors, meaning nothing could be attached to it.
pub fn stall_guard(previous: Option<GuideSnapshot>, current: GuideSnapshot) -> bool {
    previous == Some(current)
}

/// Uniform draw over the tentative list; consumes one draw.
pub fn select_random_tentative<'a>(rng: &mut GenRng, pieces: &[&'a MapPiece]) -> &'a MapPiece {
    pieces[rng.index(pieces.len())]
}

/// Content hash of the canonical config plus the blueprints it references.
pub fn config_hash(config: &GenerationConfig, library: &PieceLibrary) -> Result<String> {
    let mut h = Sha256::new();
    h.update(formats::config_canonical_json(config).as_bytes());
    let mut ids: Vec<&str> = config
        .pieces_list
        .iter()
        .chain(config.starter_list.iter())
        .map(String::as_str)
        .collect();
    ids.sort_unstable();
    ids.dedup();
    for id in ids {
        h.update(formats::piece_canonical_json(library.resolve(id)?).as_bytes());
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

/// Runs the generation loop with the built-in methods.
pub fn generate(config: &GenerationConfig, library: &PieceLibrary) -> Result<GeneratedMap> {
    Ok(generate_with(config, library, &MethodRegistry::with_builtins())?.map)
}

fn resolve_all<'a>(library: &'a PieceLibrary, ids: &[String]) -> Result<Vec<&'a MapPiece>> {
    ids.iter().map(|id| library.resolve(id)).collect()
}

struct Run<'a> {
    config: &'a GenerationConfig,
    library: &'a PieceLibrary,
    rng: GenRng,
    placed: Vec<PlacedPiece>,
    colliders: Vec<Obb>,
    connections: Vec<ConnectionRecord>,
    log: Vec<LogEntry>,
}

impl<'a> Run<'a> {
    fn blueprint(&self, instance: usize) -> &'a MapPiece {
        self.library
            .get(&self.placed[instance].blueprint_id)
            .expect("placed blueprints are resolved")
    }

    fn push_log(&mut self, guide: usize, tentative: Option<&str>, pairings: usize, result: StepResult) {
        self.log.push(LogEntry {
            step: self.log.len() + 1,
            guide_instance: guide,
            guide_blueprint: self.placed[guide].blueprint_id.clone(),
            tentative: tentative.map(str::to_string),
            pairings,
            result,
        });
    }

    fn place(&mut self, blueprint: &MapPiece, pose: YawTransform) -> usize {
        let id = self.placed.len();
        self.placed.push(PlacedPiece::new(id, blueprint, pose));
        self.colliders
            .extend(blueprint.colliders.iter().map(|c| c.transformed(&pose)));
        id
    }

    fn overlaps(&self, blueprint: &MapPiece, pose: &YawTransform) -> bool {
        blueprint.colliders.iter().any(|c| {
            let w = c.transformed(pose);
            self.colliders
                .iter()
                .any(|p| obb_overlap_world(&w, p, self.config.shrink_eps))
        })
    }

    /// One guide round: tentative draws until a snap or `max_fails` failures.
    fn round(&mut self, guide: usize, pieces: &[&'a MapPiece]) {
        let guide_bp = self.blueprint(guide);
        let mut fail_count = 0;
        loop {
            let tentative = select_random_tentative(&mut self.rng, pieces);
            let mut pairings =
                enumerate_valid_pairings(&self.config.matching_rules, &self.placed[guide], guide_bp, tentative);
            let total = pairings.len();
            let mut chosen = None;
            while !pairings.is_empty() {
                let k = self.rng.index(pairings.len());
                let (gc, tc) = pairings[k];
                let (pos, heading) = self.placed[guide].world_connector(guide_bp, gc);
                let pose = snap_transform(pos, heading, &tentative.connectors[tc], self.config.piece_distance);
                if self.config.check_overlaps && self.overlaps(tentative, &pose) {
                    self.push_log(
                        guide,
                        Some(&tentative.id),
                        total,
                        StepResult::OverlapReject {
                            guide_connector: gc,
                            tentative_connector: tc,
                        },
                    );
                    pairings.remove(k);
                } else {
                    chosen = Some((gc, tc, pose));
                    break;
                }
            }
            match chosen {
                Some((gc, tc, pose)) => {
                    let new = self.place(tentative, pose);
                    self.placed[guide].connector_used[gc] = true;
                    self.placed[new].connector_used[tc] = true;
                    self.connections.push(ConnectionRecord {
                        guide_instance: guide,
                        guide_connector: gc,
                        tentative_instance: new,
                        tentative_connector: tc,
                    });
                    self.push_log(
                        guide,
                        Some(&tentative.id),
                        total,
                        StepResult::Snap {
                            guide_connector: gc,
                            tentative_connector: tc,
                        },
                    );
                    return;
                }
                None => {
                    fail_count += 1;
                    self.push_log(
                        guide,
                        Some(&tentative.id),
                        total,
                        StepResult::Fail {
                            fail_count,
                            max_fails: self.config.max_fails,
                        },
                    );
                    if fail_count >= self.config.max_fails {
                        return;
                    }
                }
            }
        }
    }

    fn snapshot(&self, instance: usize) -> GuideSnapshot {
        GuideSnapshot {
            instance,
            free_connectors: self.placed[instance].free_connectors(),
        }
    }
}

/// Runs the generation loop with methods from `registry`, returning the map
/// and the method trace.
pub fn generate_with(
    config: &GenerationConfig,
    library: &PieceLibrary,
    registry: &MethodRegistry,
) -> Result<Generation> {
    config.validate()?;
    let pieces = resolve_all(library, &config.pieces_list)?;
    let starters = if config.use_starter {
        resolve_all(library, &config.starter_list)?
    } else {
        pieces.clone()
    };
    config
        .matching_rules
        .bind(pieces.iter().chain(starters.iter()).copied())?;
    if config.check_overlaps {
        for p in pieces.iter().chain(starters.iter()) {
            if p.colliders.is_empty() {
                return Err(Error::piece(
                    &p.id,
                    "check_overlaps is set but the piece has no colliders",
                ));
            }
            if p.colliders.iter().any(|c| c.min_half_extent() <= config.shrink_eps) {
                return Err(Error::piece(&p.id, "a collider is thinner than twice shrink_eps"));
            }
        }
    }
    let config_hash = config_hash(config, library)?;
    let mut method: Box<dyn GenerationMethod> = registry.build(&config.method)?;

    let mut run = Run {
        config,
        library,
        rng: GenRng::from_seed(config.seed),
        placed: Vec::new(),
        colliders: Vec::new(),
        connections: Vec::new(),
        log: Vec::new(),
    };

    let start = method.select_starting_piece(&starters, &mut run.rng);
    run.place(starters[start], YawTransform::IDENTITY);

    let mut guide = method.initial_guide(&run.placed, &mut run.rng);
    let mut last_guide = 0;
    let mut previous: Option<GuideSnapshot> = None;
    let reason = loop {
        let Some(g) = guide else {
            break EndReason::Method;
        };
        let snap = run.snapshot(g);
        if stall_guard(previous, snap) {
            break EndReason::Stalled;
        }
        previous = Some(snap);
        last_guide = g;
        run.round(g, &pieces);
        guide = method.next_guide(&run.placed, g, &mut run.rng);
    };
    run.push_log(last_guide, None, 0, StepResult::End(reason));

    Ok(Generation {
        map: GeneratedMap {
            config_hash,
            seed: config.seed,
            placed: run.placed,
            connections: run.connections,
            log: run.log,
        },
        trace: method.trace(),
    })
}
