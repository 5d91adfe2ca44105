use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{obj::parse_obj, round_vec, to_pretty_json};
use crate::error::{Error, Result};
use crate::geometry::{Obb, TriMesh, Vec3};
use crate::pieces::{Connector, MapPiece, PieceLibrary};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceFile {
    id: String,
    mesh: MeshSpec,
    connectors: Vec<ConnectorSpec>,
    #[serde(default)]
    colliders: Vec<ColliderSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum MeshSpec {
    Obj(ObjMesh),
    Inline(InlineMesh),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjMesh {
    obj_path: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InlineMesh {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[u32; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConnectorSpec {
    position: [f64; 3],
    heading: [f64; 3],
    pins: u32,
    color: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColliderSpec {
    center: [f64; 3],
    half_extents: [f64; 3],
    #[serde(default)]
    yaw_deg: f64,
}

fn build_piece(file: PieceFile, base_dir: Option<&Path>, origin: &Path) -> Result<MapPiece> {
    let id = file.id;
    let mesh = match file.mesh {
        MeshSpec::Inline(m) => TriMesh::new(m.vertices.into_iter().map(Vec3::from).collect(), m.triangles),
        MeshSpec::Obj(o) => {
            let path = base_dir.map_or_else(|| PathBuf::from(&o.obj_path), |d| d.join(&o.obj_path));
            let text = std::fs::read_to_string(&path).map_err(|e| Error::load(&path, e.to_string()))?;
            parse_obj(&text).map_err(|m| Error::load(&path, m))?
        }
    };
    let connectors = file
        .connectors
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            Connector::new(c.position.into(), c.heading.into(), c.pins, c.color.as_str())
                .map_err(|m| Error::load(origin, format!("piece `{id}`: connectors[{i}]: {m}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let colliders = file
        .colliders
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            Obb::new(c.center.into(), c.half_extents.into(), c.yaw_deg.to_radians())
                .map_err(|m| Error::load(origin, format!("piece `{id}`: colliders[{i}]: {m}")))
        })
        .collect::<Result<Vec<_>>>()?;
    MapPiece::new(id, mesh, connectors, colliders).map_err(|e| Error::load(origin, e.to_string()))
}

/// Parses a piece document. OBJ mesh paths resolve against `base_dir`.
pub fn parse_piece(text: &str, base_dir: Option<&Path>) -> Result<MapPiece> {
    let origin = Path::new("<inline>");
    let file: PieceFile = serde_json::from_str(text).map_err(|e| Error::load(origin, e.to_string()))?;
    build_piece(file, base_dir, origin)
}

pub fn load_piece_file(path: &Path) -> Result<MapPiece> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::load(path, e.to_string()))?;
    let file: PieceFile = serde_json::from_str(&text).map_err(|e| Error::load(path, e.to_string()))?;
    build_piece(file, path.parent(), path)
}

/// Loads piece files; directories contribute every `*.json` inside, in name order.
pub fn load_piece_library<P: AsRef<Path>>(paths: &[P]) -> Result<PieceLibrary> {
    let mut files = Vec::new();
    for p in paths {
        let p = p.as_ref();
        if p.is_dir() {
            let mut inside: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::load(p, e.to_string()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            inside.sort();
            files.extend(inside);
        } else {
            files.push(p.to_path_buf());
        }
    }
    let mut lib = PieceLibrary::new();
    for f in files {
        let piece = load_piece_file(&f)?;
        lib.insert(piece).map_err(|e| Error::load(&f, e.to_string()))?;
    }
    Ok(lib)
}

fn to_file(piece: &MapPiece) -> PieceFile {
    PieceFile {
        id: piece.id.clone(),
        mesh: MeshSpec::Inline(InlineMesh {
            vertices: piece.mesh.vertices.iter().map(|&v| round_vec(v)).collect(),
            triangles: piece.mesh.triangles.clone(),
        }),
        connectors: piece
            .connectors
            .iter()
            .map(|c| ConnectorSpec {
                position: round_vec(c.position),
                heading: round_vec(c.heading()),
                pins: c.pins,
                color: c.color.to_string(),
            })
            .collect(),
        colliders: piece
            .colliders
            .iter()
            .map(|c| ColliderSpec {
                center: round_vec(c.center),
                half_extents: round_vec(c.half_extents),
                yaw_deg: super::yaw_to_degrees(c.yaw),
            })
            .collect(),
    }
}

/// Piece document with the mesh inlined.
pub fn piece_to_json(piece: &MapPiece) -> String {
    to_pretty_json(&to_file(piece))
}

/// Compact form used for hashing.
pub fn piece_canonical_json(piece: &MapPiece) -> String {
    serde_json::to_string(&to_file(piece)).expect("serializable")
}
