use std::fmt::Write as _;

use crate::engine::GeneratedMap;
use crate::error::Result;
use crate::geometry::{transform_mesh, TriMesh, Vec3};
use crate::pieces::PieceLibrary;

fn parse_index(tok: &str, vertex_count: usize) -> Result<u32, String> {
    let head = tok.split('/').next().unwrap_or("");
    let raw: i64 = head.parse().map_err(|_| format!("bad face index `{tok}`"))?;
    let idx = match raw {
        0 => return Err("face index 0 is invalid".into()),
        r if r > 0 => r - 1,
        r => vertex_count as i64 + r,
    };
    if idx < 0 || idx as usize >= vertex_count {
        return Err(format!("face index `{tok}` out of range"));
    }
    Ok(idx as u32)
}

/// Reads `v` and `f` records; polygons are fan-triangulated and everything
/// else is ignored.
pub fn parse_obj(text: &str) -> Result<TriMesh, String> {
    let mut mesh = TriMesh::default();
    for (line_no, line) in text.lines().enumerate() {
        let mut toks = line.split_whitespace();
        let ctx = |m: String| format!("line {}: {m}", line_no + 1);
        match toks.next() {
            Some("v") => {
                let xyz: Vec<f64> = toks
                    .take(3)
                    .map(|t| t.parse::<f64>().map_err(|_| ctx(format!("bad coordinate `{t}`"))))
                    .collect::<Result<_, _>>()?;
                if xyz.len() != 3 {
                    return Err(ctx("vertex needs three coordinates".into()));
                }
                mesh.vertices.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
            }
            Some("f") => {
                let idx: Vec<u32> = toks
                    .map(|t| parse_index(t, mesh.vertices.len()).map_err(ctx))
                    .collect::<Result<_, _>>()?;
                if idx.len() < 3 {
                    return Err(ctx("face needs at least three vertices".into()));
                }
                for k in 1..idx.len() - 1 {
                    mesh.triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    Ok(mesh)
}

fn fixed(x: f64) -> f64 {
    (x * 1e6).round() / 1e6 + 0.0
}

/// One `o` group per placed piece (`<instance>_<blueprint>`), vertices in
/// world space, faces indexing the global vertex list.
pub fn export_obj(map: &GeneratedMap, library: &PieceLibrary) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# snapmesh map {}", map.config_hash).unwrap();
    writeln!(out, "# seed {}", map.seed).unwrap();
    let mut base = 1usize;
    for p in &map.placed {
        let mesh = transform_mesh(&library.resolve(&p.blueprint_id)?.mesh, &p.pose);
        writeln!(out, "o {}_{}", p.instance_id, p.blueprint_id).unwrap();
        for v in &mesh.vertices {
            writeln!(out, "v {:.6} {:.6} {:.6}", fixed(v.x), fixed(v.y), fixed(v.z)).unwrap();
        }
        for t in &mesh.triangles {
            let [a, b, c] = t.map(|i| i as usize + base);
            writeln!(out, "f {a} {b} {c}").unwrap();
        }
        base += mesh.vertices.len();
    }
    Ok(out)
}
