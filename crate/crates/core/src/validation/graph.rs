use std::collections::HashMap;

use rayon::prelude::*;

use super::{NavConfig, NavPoint};
use crate::geometry::{TriMesh, Vec3};

/// Undirected graph over navigation points, stored as sorted adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NavGraph {
    adjacency: Vec<Vec<u32>>,
}

impl NavGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            if a == b {
                continue;
            }
            adjacency[a].push(b as u32);
            adjacency[b].push(a as u32);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        NavGraph { adjacency }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&(b as u32)).is_ok()
    }
}

type Cell = (i64, i64);

fn cell_of(p: Vec3, size: f64) -> Cell {
    ((p.x / size).floor() as i64, (p.z / size).floor() as i64)
}

/// Triangles bucketed by the horizontal grid cells their bounds cover.
struct TriangleGrid<'m> {
    mesh: &'m TriMesh,
    cell: f64,
    buckets: HashMap<Cell, Vec<u32>>,
}

impl<'m> TriangleGrid<'m> {
    fn new(mesh: &'m TriMesh, cell: f64) -> Self {
        let mut buckets: HashMap<Cell, Vec<u32>> = HashMap::new();
        for i in 0..mesh.triangles.len() {
            let [a, b, c] = mesh.triangle(i);
            let lo = cell_of(Vec3::new(a.x.min(b.x).min(c.x), 0.0, a.z.min(b.z).min(c.z)), cell);
            let hi = cell_of(Vec3::new(a.x.max(b.x).max(c.x), 0.0, a.z.max(b.z).max(c.z)), cell);
            for cx in lo.0..=hi.0 {
                for cz in lo.1..=hi.1 {
                    buckets.entry((cx, cz)).or_default().push(i as u32);
                }
            }
        }
        TriangleGrid { mesh, cell, buckets }
    }

    fn segment_blocked(&self, p: Vec3, q: Vec3) -> bool {
        let lo = cell_of(Vec3::new(p.x.min(q.x), 0.0, p.z.min(q.z)), self.cell);
        let hi = cell_of(Vec3::new(p.x.max(q.x), 0.0, p.z.max(q.z)), self.cell);
        let (ylo, yhi) = (p.y.min(q.y), p.y.max(q.y));
        let mut candidates: Vec<u32> = Vec::new();
        for cx in lo.0..=hi.0 {
            for cz in lo.1..=hi.1 {
                if let Some(b) = self.buckets.get(&(cx, cz)) {
                    candidates.extend_from_slice(b);
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        candidates.into_iter().any(|t| {
            let tri = self.mesh.triangle(t as usize);
            let tlo = tri[0].y.min(tri[1].y).min(tri[2].y);
            let thi = tri[0].y.max(tri[1].y).max(tri[2].y);
            thi >= ylo && tlo <= yhi && segment_hits_triangle(p, q, tri)
        })
    }
}

/// Möller–Trumbore restricted to the closed segment `p..q`; both faces count.
pub fn segment_hits_triangle(p: Vec3, q: Vec3, [a, b, c]: [Vec3; 3]) -> bool {
    const TOL: f64 = 1e-12;
    let dir = q - p;
    let e1 = b - a;
    let e2 = c - a;
    let h = dir.cross(e2);
    let det = e1.dot(h);
    if det.abs() < TOL {
        return false;
    }
    let inv = 1.0 / det;
    let s = p - a;
    let u = inv * s.dot(h);
    if !(0.0..=1.0).contains(&u) {
        return false;
    }
    let qv = s.cross(e1);
    let v = inv * dir.dot(qv);
    if v < 0.0 || u + v > 1.0 {
        return false;
    }
    let t = inv * e2.dot(qv);
    (0.0..=1.0).contains(&t)
}

/// Local reachability between two points, ignoring geometry.
fn within_reach(p: Vec3, q: Vec3, cfg: &NavConfig) -> bool {
    let d = q - p;
    let horizontal = d.horizontal_length();
    let rise = d.y.abs();
    if horizontal > cfg.link_radius || rise > cfg.max_step_height {
        return false;
    }
    let slope_deg = rise.atan2(horizontal).to_degrees();
    slope_deg <= cfg.max_slope_deg || rise <= cfg.max_step_height
}

/// Edge `p — q` iff the points are within `link_radius` horizontally, differ in
/// height by at most `max_step_height`, the segment between them is not too
/// steep (or is a step), and the segment lifted by `agent_radius` does not
/// cross map geometry.
pub fn build_traversability_graph(points: &[NavPoint], mesh: &TriMesh, cfg: &NavConfig) -> NavGraph {
    let cell = cfg.link_radius;
    let mut point_cells: HashMap<Cell, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        point_cells.entry(cell_of(p.position, cell)).or_default().push(i);
    }
    let grid = TriangleGrid::new(mesh, cell);
    let lift = Vec3::UP * cfg.agent_radius;

    let edges: Vec<Vec<usize>> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let p = points[i].position;
            let (cx, cz) = cell_of(p, cell);
            let mut out = Vec::new();
            for dx in -1..=1 {
                for dz in -1..=1 {
                    let Some(bucket) = point_cells.get(&(cx + dx, cz + dz)) else {
                        continue;
                    };
                    for &j in bucket {
                        if j <= i {
                            continue;
                        }
                        let q = points[j].position;
                        if within_reach(p, q, cfg) && !grid.segment_blocked(p + lift, q + lift) {
                            out.push(j);
                        }
                    }
                }
            }
            out
        })
        .collect();

    NavGraph::from_edges(
        points.len(),
        edges
            .into_iter()
            .enumerate()
            .flat_map(|(i, js)| js.into_iter().map(move |j| (i, j))),
    )
}
