use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{piece::load_piece_file, round_sig, to_pretty_json};
use crate::engine::GenerationConfig;
use crate::error::{Error, Result};
use crate::geometry::DEFAULT_SHRINK_EPS;
use crate::methods::MethodConfig;
use crate::pieces::{ColorId, ColorMatrix, MatchMode, MatchingRules, PieceLibrary};
use crate::validation::NavConfig;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    pieces_list: Vec<String>,
    #[serde(default)]
    use_starter: bool,
    #[serde(default)]
    starter_list: Vec<String>,
    #[serde(default)]
    matching_rules: RulesSpec,
    #[serde(default = "default_max_fails")]
    max_fails: u32,
    #[serde(default = "default_piece_distance")]
    piece_distance: f64,
    #[serde(default = "default_true")]
    check_overlaps: bool,
    #[serde(default = "default_shrink_eps")]
    shrink_eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<i64>,
    method: MethodConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nav: Option<NavConfig>,
}

fn default_max_fails() -> u32 {
    10
}

fn default_piece_distance() -> f64 {
    1e-4
}

fn default_true() -> bool {
    true
}

fn default_shrink_eps() -> f64 {
    DEFAULT_SHRINK_EPS
}

/// `color_matrix` is row-major: row = guide color, column = tentative color,
/// both in palette order.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RulesSpec {
    #[serde(default)]
    mode: MatchMode,
    #[serde(default)]
    pin_tolerance: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    color_palette: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    color_matrix: Option<Vec<Vec<bool>>>,
}

impl RulesSpec {
    fn build(self) -> Result<MatchingRules> {
        let matrix = match (self.color_palette, self.color_matrix) {
            (Some(p), Some(m)) => Some(ColorMatrix::new(p.into_iter().map(ColorId::new).collect(), m)?),
            (None, None) => None,
            _ => {
                return Err(Error::config(
                    "matching_rules: color_palette and color_matrix go together",
                ))
            }
        };
        if self.mode.uses_colors() && matrix.is_none() {
            return Err(Error::config(
                "matching_rules: color modes need color_palette and color_matrix",
            ));
        }
        Ok(MatchingRules {
            mode: self.mode,
            pin_tolerance: self.pin_tolerance,
            color_matrix: matrix,
        })
    }

    fn from_rules(r: &MatchingRules) -> Self {
        RulesSpec {
            mode: r.mode,
            pin_tolerance: r.pin_tolerance,
            color_palette: r
                .color_matrix
                .as_ref()
                .map(|m| m.palette().iter().map(|c| c.as_str().to_string()).collect()),
            color_matrix: r.color_matrix.as_ref().map(|m| m.rows().to_vec()),
        }
    }
}

/// A parsed config file. Pieces named by file pattern are loaded into
/// `pieces` and replaced by their ids in the generation config.
#[derive(Debug)]
pub struct LoadedConfig {
    pub generation: GenerationConfig,
    pub nav: Option<NavConfig>,
    /// `None` when the file has no `seed`; `generation.seed` is then 0.
    pub seed: Option<i64>,
    pub pieces: PieceLibrary,
}

fn is_file_pattern(entry: &str) -> bool {
    entry.ends_with(".json") || entry.contains(['/', '\\', '*', '?', '['])
}

fn expand_list(
    entries: &[String],
    base_dir: Option<&Path>,
    pieces: &mut PieceLibrary,
    field: &str,
) -> Result<Vec<String>> {
    let mut ids = Vec::new();
    for entry in entries {
        if !is_file_pattern(entry) {
            ids.push(entry.clone());
            continue;
        }
        let pattern = match base_dir {
            Some(d) if Path::new(entry).is_relative() => d.join(entry),
            _ => PathBuf::from(entry),
        };
        let pattern = pattern.to_string_lossy().into_owned();
        let mut files: Vec<PathBuf> = glob::glob(&pattern)
            .map_err(|e| Error::config(format!("{field}: bad pattern `{entry}`: {e}")))?
            .filter_map(|p| p.ok())
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Error::config(format!("{field}: `{entry}` matches no piece files")));
        }
        for f in files {
            let piece = load_piece_file(&f)?;
            let id = piece.id.clone();
            match pieces.get(&id) {
                Some(existing) if *existing == piece => {}
                Some(_) => return Err(Error::load(&f, format!("duplicate piece id `{id}`"))),
                None => pieces.insert(piece)?,
            }
            ids.push(id);
        }
    }
    Ok(ids)
}

/// Parses a config document; relative piece patterns resolve against `base_dir`.
pub fn parse_config(text: &str, base_dir: Option<&Path>) -> Result<LoadedConfig> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
    let mut pieces = PieceLibrary::new();
    let pieces_list = expand_list(&file.pieces_list, base_dir, &mut pieces, "pieces_list")?;
    let starter_list = expand_list(&file.starter_list, base_dir, &mut pieces, "starter_list")?;
    let generation = GenerationConfig {
        pieces_list,
        use_starter: file.use_starter,
        starter_list,
        matching_rules: file.matching_rules.build()?,
        max_fails: file.max_fails,
        piece_distance: file.piece_distance,
        check_overlaps: file.check_overlaps,
        shrink_eps: file.shrink_eps,
        method: file.method,
        seed: file.seed.unwrap_or(0),
    };
    generation.validate()?;
    if let Some(nav) = &file.nav {
        nav.validate()?;
    }
    Ok(LoadedConfig {
        generation,
        nav: file.nav,
        seed: file.seed,
        pieces,
    })
}

pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::load(path, e.to_string()))?;
    parse_config(&text, path.parent()).map_err(|e| match e {
        Error::Config(m) => Error::load(path, m),
        other => other,
    })
}

fn to_file(config: &GenerationConfig, seed: Option<i64>, nav: Option<&NavConfig>) -> ConfigFile {
    ConfigFile {
        pieces_list: config.pieces_list.clone(),
        use_starter: config.use_starter,
        starter_list: config.starter_list.clone(),
        matching_rules: RulesSpec::from_rules(&config.matching_rules),
        max_fails: config.max_fails,
        piece_distance: round_sig(config.piece_distance),
        check_overlaps: config.check_overlaps,
        shrink_eps: round_sig(config.shrink_eps),
        seed,
        method: config.method.clone(),
        nav: nav.cloned(),
    }
}

/// Pretty JSON, pieces listed by id.
pub fn config_to_json(config: &GenerationConfig, nav: Option<&NavConfig>) -> String {
    to_pretty_json(&to_file(config, Some(config.seed), nav))
}

/// Compact JSON with sorted keys and without the seed; input to the config hash.
pub fn config_canonical_json(config: &GenerationConfig) -> String {
    let value = serde_json::to_value(to_file(config, None, None)).expect("serializable");
    serde_json::to_string(&value).expect("serializable")
}
