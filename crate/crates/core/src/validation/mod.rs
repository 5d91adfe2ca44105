//! Navigability validation.
//!
//! Navigation points are scattered over walkable triangles, linked into an
//! undirected traversability graph by local reachability rules, and grouped
//! into connected regions. Two numbers summarize the result: the fraction of
//! point pairs joined by a path (`c_bar`) and the fraction of points in the
//! largest region (`a_r_max`).

mod graph;
mod regions;

use std::time::Instant;

use rand::distributions::{Distribution, WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{TriMesh, Vec3};
use crate::rng::GenRng;

pub use graph::{build_traversability_graph, segment_hits_triangle, NavGraph};
pub use regions::{
    compute_metrics, pairwise_connectivity_oracle, partition_regions, DisjointSets, Metrics, RegionPartition,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NavConfig {
    pub n_points: usize,
    pub agent_radius: f64,
    pub agent_height: f64,
    pub max_step_height: f64,
    pub max_slope_deg: f64,
    pub link_radius: f64,
    pub seed: i64,
}

impl Default for NavConfig {
    fn default() -> Self {
        NavConfig {
            n_points: 400,
            agent_radius: 0.4,
            agent_height: 1.8,
            max_step_height: 0.4,
            max_slope_deg: 40.0,
            link_radius: 2.5,
            seed: 0,
        }
    }
}

impl NavConfig {
    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::config(format!("nav: {m}")));
        if self.n_points < 2 {
            return bad("n_points must be at least 2");
        }
        if !(self.agent_radius > 0.0 && self.agent_height > 0.0) {
            return bad("agent dimensions must be positive");
        }
        if !(self.max_step_height >= 0.0) {
            return bad("max_step_height must be non-negative");
        }
        if !(0.0..90.0).contains(&self.max_slope_deg) {
            return bad("max_slope_deg must lie in [0, 90)");
        }
        if !(self.link_radius > self.agent_radius) {
            return bad("link_radius must exceed agent_radius");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NavPoint {
    pub position: Vec3,
    /// Filled in once regions are known.
    pub region_id: Option<usize>,
}

impl NavPoint {
    pub fn new(position: Vec3) -> Self {
        NavPoint {
            position,
            region_id: None,
        }
    }
}

/// Indices of upward-facing triangles no steeper than `max_slope_deg`.
pub fn walkable_triangles(mesh: &TriMesh, max_slope_deg: f64) -> Vec<usize> {
    let min_up = max_slope_deg.to_radians().cos();
    (0..mesh.triangles.len())
        .filter(|&i| {
            let n = mesh.face_normal(i);
            let len = n.length();
            len > 0.0 && n.y > 0.0 && n.y / len >= min_up - 1e-12
        })
        .collect()
}

/// Area-weighted uniform sampling over walkable triangles.
pub fn deploy_nav_points(mesh: &TriMesh, cfg: &NavConfig, rng: &mut GenRng) -> Result<Vec<NavPoint>> {
    let walkable = walkable_triangles(mesh, cfg.max_slope_deg);
    let areas: Vec<f64> = walkable.iter().map(|&i| mesh.triangle_area(i)).collect();
    if walkable.is_empty() || areas.iter().all(|&a| a <= 0.0) {
        return Err(Error::NoWalkableSurface);
    }
    let pick = WeightedIndex::new(&areas).map_err(|e| Error::Validation(e.to_string()))?;
    let points = (0..cfg.n_points)
        .map(|_| {
            let [a, b, c] = mesh.triangle(walkable[pick.sample(rng.inner())]);
            let r1 = rng.unit().sqrt();
            let r2 = rng.unit();
            NavPoint::new(a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2))
        })
        .collect();
    Ok(points)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub c_bar: f64,
    pub a_r_max: f64,
    pub region_count: usize,
    /// Regions consisting of a single navigation point.
    pub isolated_region_count: usize,
    pub largest_region: usize,
    pub n_points: usize,
    pub nav_seed: i64,
    pub duration_s: f64,
}

/// Full validation output: the report plus the data behind it.
#[derive(Clone, Debug)]
pub struct Validation {
    pub report: ValidationReport,
    pub points: Vec<NavPoint>,
    pub graph: NavGraph,
    pub partition: RegionPartition,
}

/// Deploys points on `mesh`, builds the traversability graph and computes the
/// navigability metrics.
pub fn validate_mesh(mesh: &TriMesh, cfg: &NavConfig) -> Result<Validation> {
    cfg.validate()?;
    let started = Instant::now();
    let mut rng = GenRng::from_seed(cfg.seed);
    let mut points = deploy_nav_points(mesh, cfg, &mut rng)?;
    let graph = build_traversability_graph(&points, mesh, cfg);
    let partition = partition_regions(&graph);
    let metrics = compute_metrics(&partition.sizes, points.len())?;
    for (p, &r) in points.iter_mut().zip(&partition.region_of) {
        p.region_id = Some(r);
    }
    let report = ValidationReport {
        c_bar: metrics.c_bar,
        a_r_max: metrics.a_r_max,
        region_count: metrics.region_count,
        isolated_region_count: metrics.isolated_region_count,
        largest_region: metrics.largest_region,
        n_points: points.len(),
        nav_seed: cfg.seed,
        duration_s: started.elapsed().as_secs_f64(),
    };
    Ok(Validation {
        report,
        points,
        graph,
        partition,
    })
}
