//! Map pieces, connectors and the rules deciding which connectors may snap.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Obb, TriMesh, Vec3, YawTransform};

/// Symbolic connector color; must belong to the palette of the active [`ColorMatrix`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub String);

impl ColorId {
    pub fn new(s: impl Into<String>) -> Self {
        ColorId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ColorId {
    fn from(s: &str) -> Self {
        ColorId::new(s)
    }
}

/// Guide → tentative color compatibility over a closed palette. Rows are the
/// guide color, columns the tentative color; the matrix need not be symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorMatrix {
    palette: Vec<ColorId>,
    allowed: Vec<Vec<bool>>,
    index: HashMap<ColorId, usize>,
}

impl ColorMatrix {
    pub fn new(palette: Vec<ColorId>, allowed: Vec<Vec<bool>>) -> Result<Self> {
        let n = palette.len();
        if n == 0 {
            return Err(Error::config("color palette is empty"));
        }
        if allowed.len() != n || allowed.iter().any(|row| row.len() != n) {
            return Err(Error::config(format!(
                "color matrix must be {n}x{n} to match the palette"
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, c) in palette.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(Error::config(format!("color `{c}` declared twice in palette")));
            }
        }
        Ok(ColorMatrix {
            palette,
            allowed,
            index,
        })
    }

    /// Each color matches itself; every color listed in `wildcards` matches
    /// everything in both directions.
    pub fn same_color_with_wildcards(palette: Vec<ColorId>, wildcards: &[&str]) -> Result<Self> {
        let wild: Vec<bool> = palette.iter().map(|c| wildcards.contains(&c.as_str())).collect();
        let n = palette.len();
        let allowed = (0..n)
            .map(|g| (0..n).map(|t| g == t || wild[g] || wild[t]).collect())
            .collect();
        ColorMatrix::new(palette, allowed)
    }

    pub fn palette(&self) -> &[ColorId] {
        &self.palette
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    pub fn index_of(&self, c: &ColorId) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn contains(&self, c: &ColorId) -> bool {
        self.index.contains_key(c)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.palette.len();
        (0..n).all(|i| (0..n).all(|j| self.allowed[i][j] == self.allowed[j][i]))
    }

    pub fn allowed(&self, guide: &ColorId, tentative: &ColorId) -> Result<bool> {
        let unknown = |c: &ColorId| Error::config(format!("unknown connector color `{c}`"));
        let g = self.index_of(guide).ok_or_else(|| unknown(guide))?;
        let t = self.index_of(tentative).ok_or_else(|| unknown(tentative))?;
        Ok(self.allowed[g][t])
    }
}

/// Snap site on a piece, in the piece's local frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Connector {
    pub position: Vec3,
    heading: Vec3,
    pub pins: u32,
    pub color: ColorId,
}

impl Connector {
    /// The heading is projected onto the horizontal plane and normalized.
    /// Vertical or zero headings are rejected.
    pub fn new(position: Vec3, heading: Vec3, pins: u32, color: impl Into<ColorId>) -> Result<Self, String> {
        if !position.is_finite() || !heading.is_finite() {
            return Err("connector has non-finite coordinates".into());
        }
        let heading = heading
            .horizontal_unit()
            .ok_or_else(|| "connector heading has no horizontal component".to_string())?;
        Ok(Connector {
            position,
            heading,
            pins,
            color: color.into(),
        })
    }

    /// Unit horizontal heading.
    pub fn heading(&self) -> Vec3 {
        self.heading
    }
}

/// Designer-authored blueprint. Placed pieces are copies referencing it by id.
#[derive(Clone, Debug, PartialEq)]
pub struct MapPiece {
    pub id: String,
    pub mesh: TriMesh,
    pub connectors: Vec<Connector>,
    pub colliders: Vec<Obb>,
}

impl MapPiece {
    pub fn new(id: impl Into<String>, mesh: TriMesh, connectors: Vec<Connector>, colliders: Vec<Obb>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::piece(id, "piece id is empty"));
        }
        if connectors.is_empty() {
            return Err(Error::piece(id, "a piece needs at least one connector"));
        }
        mesh.check().map_err(|m| Error::piece(&id, m))?;
        Ok(MapPiece {
            id,
            mesh,
            connectors,
            colliders,
        })
    }

    pub fn connector_count(&self) -> usize {
        self.connectors.len()
    }
}

/// Blueprints addressable by id, kept in insertion order.
#[derive(Clone, Debug, Default)]
pub struct PieceLibrary {
    pieces: Vec<MapPiece>,
    index: HashMap<String, usize>,
}

impl PieceLibrary {
    pub fn new() -> Self {
        PieceLibrary::default()
    }

    pub fn from_pieces(pieces: impl IntoIterator<Item = MapPiece>) -> Result<Self> {
        let mut lib = PieceLibrary::new();
        for p in pieces {
            lib.insert(p)?;
        }
        Ok(lib)
    }

    pub fn insert(&mut self, piece: MapPiece) -> Result<()> {
        if self.index.contains_key(&piece.id) {
            return Err(Error::piece(&piece.id, "duplicate piece id"));
        }
        self.index.insert(piece.id.clone(), self.pieces.len());
        self.pieces.push(piece);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&MapPiece> {
        self.index.get(id).map(|&i| &self.pieces[i])
    }

    pub fn resolve(&self, id: &str) -> Result<&MapPiece> {
        self.get(id)
            .ok_or_else(|| Error::config(format!("unknown piece id `{id}`")))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.pieces.iter().map(|p| p.id.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &MapPiece> {
        self.pieces.iter()
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    #[default]
    None,
    Pins,
    Colors,
    Both,
}

impl MatchMode {
    pub fn uses_pins(self) -> bool {
        matches!(self, MatchMode::Pins | MatchMode::Both)
    }

    pub fn uses_colors(self) -> bool {
        matches!(self, MatchMode::Colors | MatchMode::Both)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingRules {
    pub mode: MatchMode,
    pub pin_tolerance: u32,
    pub color_matrix: Option<ColorMatrix>,
}

impl MatchingRules {
    pub fn unrestricted() -> Self {
        MatchingRules {
            mode: MatchMode::None,
            pin_tolerance: 0,
            color_matrix: None,
        }
    }

    pub fn pins(tolerance: u32) -> Self {
        MatchingRules {
            mode: MatchMode::Pins,
            pin_tolerance: tolerance,
            color_matrix: None,
        }
    }

    pub fn colors(matrix: ColorMatrix) -> Self {
        MatchingRules {
            mode: MatchMode::Colors,
            pin_tolerance: 0,
            color_matrix: Some(matrix),
        }
    }

    pub fn both(tolerance: u32, matrix: ColorMatrix) -> Self {
        MatchingRules {
            mode: MatchMode::Both,
            pin_tolerance: tolerance,
            color_matrix: Some(matrix),
        }
    }

    /// Same rules with a different mode; used to compare the individual rules
    /// against their conjunction.
    pub fn with_mode(&self, mode: MatchMode) -> Self {
        MatchingRules { mode, ..self.clone() }
    }

    /// Checks that a color matrix is present when needed and that every
    /// connector color of `pieces` belongs to its palette.
    pub fn bind<'a>(&self, pieces: impl IntoIterator<Item = &'a MapPiece>) -> Result<()> {
        if !self.mode.uses_colors() {
            return Ok(());
        }
        let matrix = self
            .color_matrix
            .as_ref()
            .ok_or_else(|| Error::config("color matching requires a color matrix"))?;
        for piece in pieces {
            for (i, c) in piece.connectors.iter().enumerate() {
                if !matrix.contains(&c.color) {
                    return Err(Error::piece(
                        &piece.id,
                        format!("connector {i} uses color `{}` which is not in the palette", c.color),
                    ));
                }
            }
        }
        Ok(())
    }
}

pub fn pins_compatible(pins_guide: u32, pins_tentative: u32, tolerance: u32) -> bool {
    pins_guide.abs_diff(pins_tentative) <= tolerance
}

/// Looks up `allowed[guide][tentative]`; direction matters.
pub fn colors_compatible(m: &ColorMatrix, guide: &ColorId, tentative: &ColorId) -> Result<bool> {
    m.allowed(guide, tentative)
}

/// Applies the active matching rules. Unknown colors never match; they are
/// rejected up front by [`MatchingRules::bind`].
pub fn connectors_match(rules: &MatchingRules, guide: &Connector, tentative: &Connector) -> bool {
    let pins_ok = || pins_compatible(guide.pins, tentative.pins, rules.pin_tolerance);
    let colors_ok = || {
        rules
            .color_matrix
            .as_ref()
            .and_then(|m| m.allowed(&guide.color, &tentative.color).ok())
            .unwrap_or(false)
    };
    match rules.mode {
        MatchMode::None => true,
        MatchMode::Pins => pins_ok(),
        MatchMode::Colors => colors_ok(),
        MatchMode::Both => pins_ok() && colors_ok(),
    }
}

/// Pose for a tentative piece so that its connector faces the guide connector
/// head-on, `piece_distance` away along the guide heading.
pub fn snap_transform(
    guide_world_pos: Vec3,
    guide_world_heading: Vec3,
    tentative: &Connector,
    piece_distance: f64,
) -> YawTransform {
    let yaw = (-guide_world_heading).heading_angle() - tentative.heading().heading_angle();
    let rotation = YawTransform::new(Vec3::ZERO, yaw);
    let target = guide_world_pos + guide_world_heading * piece_distance;
    YawTransform::new(target - rotation.apply(tentative.position), yaw)
}

/// A blueprint copy placed on the map.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedPiece {
    pub instance_id: usize,
    pub blueprint_id: String,
    pub pose: YawTransform,
    pub connector_used: Vec<bool>,
}

impl PlacedPiece {
    pub fn new(instance_id: usize, blueprint: &MapPiece, pose: YawTransform) -> Self {
        PlacedPiece {
            instance_id,
            blueprint_id: blueprint.id.clone(),
            pose,
            connector_used: vec![false; blueprint.connectors.len()],
        }
    }

    pub fn free_connectors(&self) -> usize {
        self.connector_used.iter().filter(|u| !**u).count()
    }

    /// World position and heading of connector `i` of `blueprint` at this pose.
    pub fn world_connector(&self, blueprint: &MapPiece, i: usize) -> (Vec3, Vec3) {
        let c = &blueprint.connectors[i];
        (self.pose.apply(c.position), self.pose.apply_vector(c.heading()))
    }
}

/// Rule-compatible `(guide connector, tentative connector)` pairs, ascending by
/// guide index then tentative index. Used guide connectors are skipped; the
/// tentative piece is a fresh copy so all of its connectors are free.
pub fn enumerate_valid_pairings(
    rules: &MatchingRules,
    guide: &PlacedPiece,
    guide_blueprint: &MapPiece,
    tentative: &MapPiece,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (gi, gc) in guide_blueprint.connectors.iter().enumerate() {
        if guide.connector_used[gi] {
            continue;
        }
        for (ti, tc) in tentative.connectors.iter().enumerate() {
            if connectors_match(rules, gc, tc) {
                out.push((gi, ti));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn palette() -> Vec<ColorId> {
        ["white", "red", "green", "blue"].iter().map(|&c| c.into()).collect()
    }

    fn default_matrix() -> ColorMatrix {
        ColorMatrix::same_color_with_wildcards(palette(), &["white"]).unwrap()
    }

    fn conn(pins: u32, color: &str) -> Connector {
        Connector::new(Vec3::ZERO, Vec3::X, pins, color).unwrap()
    }

    fn piece(id: &str, conns: Vec<Connector>) -> MapPiece {
        MapPiece::new(id, TriMesh::default(), conns, vec![]).unwrap()
    }

    #[test]
    fn pin_rule() {
        assert!(pins_compatible(3, 3, 0));
        assert!(!pins_compatible(3, 4, 0));
        assert!(pins_compatible(2, 4, 2));
        assert!(!pins_compatible(2, 5, 2));
    }

    #[test]
    fn white_is_wildcard_in_default_matrix() {
        let m = default_matrix();
        assert!(colors_compatible(&m, &"white".into(), &"red".into()).unwrap());
        assert!(colors_compatible(&m, &"red".into(), &"white".into()).unwrap());
        assert!(colors_compatible(&m, &"red".into(), &"red".into()).unwrap());
        assert!(!colors_compatible(&m, &"red".into(), &"blue".into()).unwrap());
        assert!(m.is_symmetric());
    }

    #[test]
    fn one_way_matrix() {
        let pal: Vec<ColorId> = vec!["red".into(), "blue".into()];
        let m = ColorMatrix::new(pal, vec![vec![true, true], vec![false, true]]).unwrap();
        assert!(colors_compatible(&m, &"red".into(), &"blue".into()).unwrap());
        assert!(!colors_compatible(&m, &"blue".into(), &"red".into()).unwrap());
        assert!(!m.is_symmetric());
    }

    #[test]
    fn unknown_color_is_config_error() {
        let m = default_matrix();
        let err = colors_compatible(&m, &"purple".into(), &"red".into()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn matrix_shape_checked() {
        assert!(ColorMatrix::new(palette(), vec![vec![true; 4]; 3]).is_err());
        let dup = vec!["red".into(), "red".into()];
        assert!(ColorMatrix::new(dup, vec![vec![true; 2]; 2]).is_err());
    }

    #[test]
    fn match_modes() {
        let m = default_matrix();
        let a = conn(4, "red");
        let b = conn(4, "blue");
        assert!(connectors_match(&MatchingRules::unrestricted(), &a, &b));
        assert!(connectors_match(&MatchingRules::pins(0), &a, &b));
        assert!(!connectors_match(&MatchingRules::colors(m.clone()), &a, &b));
        assert!(!connectors_match(&MatchingRules::both(0, m), &a, &b));
    }

    #[test]
    fn vertical_heading_rejected() {
        assert!(Connector::new(Vec3::ZERO, Vec3::UP, 1, "red").is_err());
        assert!(Connector::new(Vec3::ZERO, Vec3::ZERO, 1, "red").is_err());
        let c = Connector::new(Vec3::ZERO, Vec3::new(3.0, 5.0, 0.0), 1, "red").unwrap();
        assert_eq!(c.heading(), Vec3::X);
    }

    #[test]
    fn piece_needs_connector() {
        let err = MapPiece::new("empty", TriMesh::default(), vec![], vec![]).unwrap_err();
        assert!(err.to_string().contains("connector"));
    }

    #[test]
    fn bind_rejects_undeclared_color() {
        let rules = MatchingRules::both(0, default_matrix());
        let p = piece("p", vec![conn(1, "purple")]);
        assert!(rules.bind([&p]).is_err());
        assert!(MatchingRules::pins(0).bind([&p]).is_ok());
    }

    #[test]
    fn snap_facing_origin() {
        let c = conn(1, "red");
        let t = snap_transform(Vec3::ZERO, Vec3::X, &c, 0.0);
        assert!((t.yaw() - PI).abs() < 1e-12);
        assert!(t.translation.length() < 1e-12);
        let t = snap_transform(Vec3::ZERO, Vec3::X, &c, 6.0);
        assert!(t.apply(c.position).distance(Vec3::new(6.0, 0.0, 0.0)) < 1e-12);
    }

    #[test]
    fn snap_offset_connector() {
        let c = Connector::new(Vec3::new(1.0, 0.0, 0.0), -Vec3::Z, 1, "red").unwrap();
        let t = snap_transform(Vec3::ZERO, Vec3::Z, &c, 2.0);
        let pos = t.apply(c.position);
        let heading = t.apply_vector(c.heading());
        assert!((heading.dot(Vec3::Z) + 1.0).abs() < 1e-9);
        assert!(pos.distance(Vec3::new(0.0, 0.0, 2.0)) < 1e-9);
    }

    #[test]
    fn pairings_skip_used_and_follow_order() {
        let guide_bp = piece("g", vec![conn(3, "red"), conn(2, "white")]);
        let tentative = piece("t", vec![conn(3, "red")]);
        let mut placed = PlacedPiece::new(0, &guide_bp, YawTransform::IDENTITY);
        let rules = MatchingRules::both(0, default_matrix());
        // (1,0) fails on pins: 2 vs 3 with tolerance 0
        assert_eq!(
            enumerate_valid_pairings(&rules, &placed, &guide_bp, &tentative),
            vec![(0, 0)]
        );
        let loose = MatchingRules::both(1, default_matrix());
        assert_eq!(
            enumerate_valid_pairings(&loose, &placed, &guide_bp, &tentative),
            vec![(0, 0), (1, 0)]
        );
        placed.connector_used = vec![true, true];
        assert!(enumerate_valid_pairings(&loose, &placed, &guide_bp, &tentative).is_empty());
    }

    #[test]
    fn unrestricted_pairings_are_cartesian() {
        let g = piece("g", vec![conn(1, "red"), conn(2, "red")]);
        let t = piece("t", vec![conn(1, "a"), conn(2, "b"), conn(3, "c")]);
        let placed = PlacedPiece::new(0, &g, YawTransform::IDENTITY);
        let pairs = enumerate_valid_pairings(&MatchingRules::unrestricted(), &placed, &g, &t);
        assert_eq!(pairs, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]);
    }
}
