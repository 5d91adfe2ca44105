use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{round_vec, to_pretty_json, yaw_to_degrees};
use crate::engine::{ConnectionRecord, GeneratedMap};
use crate::error::{Error, Result};
use crate::geometry::YawTransform;
use crate::pieces::{PieceLibrary, PlacedPiece};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    config_hash: String,
    seed: i64,
    placed: Vec<PlacedSpec>,
    connections: Vec<ConnectionSpec>,
    summary: Summary,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacedSpec {
    instance_id: usize,
    blueprint_id: String,
    pose: PoseSpec,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseSpec {
    translation: [f64; 3],
    yaw_deg: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConnectionSpec {
    guide_instance: usize,
    guide_connector: usize,
    tentative_instance: usize,
    tentative_connector: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Summary {
    piece_count: usize,
    connection_count: usize,
}

/// Canonical map document. The narration log is not part of it.
pub fn map_to_json(map: &GeneratedMap) -> String {
    let file = MapFile {
        config_hash: map.config_hash.clone(),
        seed: map.seed,
        placed: map
            .placed
            .iter()
            .map(|p| PlacedSpec {
                instance_id: p.instance_id,
                blueprint_id: p.blueprint_id.clone(),
                pose: PoseSpec {
                    translation: round_vec(p.pose.translation),
                    yaw_deg: yaw_to_degrees(p.pose.yaw()),
                },
            })
            .collect(),
        connections: map
            .connections
            .iter()
            .map(|c| ConnectionSpec {
                guide_instance: c.guide_instance,
                guide_connector: c.guide_connector,
                tentative_instance: c.tentative_instance,
                tentative_connector: c.tentative_connector,
            })
            .collect(),
        summary: Summary {
            piece_count: map.placed.len(),
            connection_count: map.connections.len(),
        },
    };
    to_pretty_json(&file)
}

/// Rebuilds a map against `library`; connector used flags are derived from
/// the connection list.
pub fn map_from_json(text: &str, library: &PieceLibrary) -> Result<GeneratedMap> {
    let origin = Path::new("<map>");
    let file: MapFile = serde_json::from_str(text).map_err(|e| Error::load(origin, e.to_string()))?;
    let bad = |m: String| Err(Error::load(origin, m));
    if file.summary.piece_count != file.placed.len() || file.summary.connection_count != file.connections.len() {
        return bad("summary counts disagree with the content".into());
    }
    let mut placed = Vec::with_capacity(file.placed.len());
    for (i, p) in file.placed.into_iter().enumerate() {
        if p.instance_id != i {
            return bad(format!("placed[{i}]: instance ids must be 0..n in order"));
        }
        let bp = library.resolve(&p.blueprint_id)?;
        let pose = YawTransform::new(p.pose.translation.into(), p.pose.yaw_deg.to_radians());
        placed.push(PlacedPiece::new(i, bp, pose));
    }
    let mut connections = Vec::with_capacity(file.connections.len());
    for (k, c) in file.connections.into_iter().enumerate() {
        for (inst, conn) in [
            (c.guide_instance, c.guide_connector),
            (c.tentative_instance, c.tentative_connector),
        ] {
            let Some(p) = placed.get_mut(inst) else {
                return bad(format!("connections[{k}]: no instance {inst}"));
            };
            let Some(flag) = p.connector_used.get_mut(conn) else {
                return bad(format!("connections[{k}]: instance {inst} has no connector {conn}"));
            };
            *flag = true;
        }
        connections.push(ConnectionRecord {
            guide_instance: c.guide_instance,
            guide_connector: c.guide_connector,
            tentative_instance: c.tentative_instance,
            tentative_connector: c.tentative_connector,
        });
    }
    Ok(GeneratedMap {
        config_hash: file.config_hash,
        seed: file.seed,
        placed,
        connections,
        log: Vec::new(),
    })
}

pub fn load_map(path: &Path, library: &PieceLibrary) -> Result<GeneratedMap> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::load(path, e.to_string()))?;
    map_from_json(&text, library).map_err(|e| match e {
        Error::Load { message, .. } => Error::load(path, message),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{generate, GenerationConfig};
    use crate::geometry::{Obb, TriMesh, Vec3};
    use crate::methods::MethodConfig;
    use crate::pieces::{Connector, MapPiece};

    fn library() -> PieceLibrary {
        let conns = [Vec3::X, Vec3::Z, -Vec3::X, -Vec3::Z]
            .into_iter()
            .map(|h| Connector::new(h, h, 1, "white").unwrap())
            .collect();
        let mesh = TriMesh::cuboid(Vec3::new(-1.0, -0.5, -1.0), Vec3::new(1.0, 0.0, 1.0));
        let col = Obb::from_bounds(Vec3::new(-1.0, -0.5, -1.0), Vec3::new(1.0, 0.0, 1.0)).unwrap();
        PieceLibrary::from_pieces([MapPiece::new("tile", mesh, conns, vec![col]).unwrap()]).unwrap()
    }

    fn sample_map() -> GeneratedMap {
        let mut c = GenerationConfig::new(vec!["tile".into()], MethodConfig::arena(8));
        c.seed = 5;
        generate(&c, &library()).unwrap()
    }

    #[test]
    fn round_trip_is_fixed_point() {
        let lib = library();
        let map = sample_map();
        let text = map_to_json(&map);
        let back = map_from_json(&text, &lib).unwrap();
        assert_eq!(back.connections, map.connections);
        for (a, b) in back.placed.iter().zip(&map.placed) {
            assert_eq!(a.connector_used, b.connector_used);
            assert!((a.pose.translation - b.pose.translation).length() < 1e-6);
        }
        assert_eq!(map_to_json(&back), text);
    }

    #[test]
    fn equal_maps_serialize_identically() {
        assert_eq!(map_to_json(&sample_map()), map_to_json(&sample_map()));
    }

    #[test]
    fn rejects_bad_references() {
        let lib = library();
        let text = map_to_json(&sample_map());
        let broken = text.replacen("\"tentative_connector\": ", "\"tentative_connector\": 9", 1);
        assert!(map_from_json(&broken, &lib).is_err());
        let renamed = text.replace("\"tile\"", "\"nope\"");
        assert!(map_from_json(&renamed, &lib).is_err());
    }
}
