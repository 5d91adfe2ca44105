//! Post-hoc checks over a finished map, independent of the generation loop.

use std::collections::HashSet;

use crate::engine::{GeneratedMap, StepResult};
use crate::error::Result;
use crate::geometry::{obb_overlap, EPS};
use crate::pieces::{connectors_match, MatchingRules, PieceLibrary};

/// Every pair of placed pieces with at least one overlapping pair of colliders.
pub fn overlapping_pairs(map: &GeneratedMap, library: &PieceLibrary, shrink_eps: f64) -> Result<Vec<(usize, usize)>> {
    let blueprints = map
        .placed
        .iter()
        .map(|p| library.resolve(&p.blueprint_id))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..map.placed.len() {
        for j in i + 1..map.placed.len() {
            let (pi, pj) = (&map.placed[i], &map.placed[j]);
            let hit = blueprints[i].colliders.iter().any(|a| {
                blueprints[j]
                    .colliders
                    .iter()
                    .any(|b| obb_overlap(a, &pi.pose, b, &pj.pose, shrink_eps))
            });
            if hit {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Re-checks every connection: matching rules, facing headings, spacing,
/// endpoint exclusivity, and consistency of the per-connector used flags.
pub fn check_connections(
    map: &GeneratedMap,
    library: &PieceLibrary,
    rules: &MatchingRules,
    piece_distance: f64,
) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    if map.placed.is_empty() {
        problems.push("map has no pieces".to_string());
        return Ok(problems);
    }
    if map.connections.len() + 1 != map.placed.len() {
        problems.push(format!(
            "{} connections for {} pieces",
            map.connections.len(),
            map.placed.len()
        ));
    }
    let mut endpoints = HashSet::new();
    let mut joined = HashSet::new();
    for (k, c) in map.connections.iter().enumerate() {
        if c.guide_instance >= map.placed.len() || c.tentative_instance >= map.placed.len() {
            problems.push(format!("connection {k} references a missing instance"));
            continue;
        }
        let (g, t) = (&map.placed[c.guide_instance], &map.placed[c.tentative_instance]);
        let (gb, tb) = (library.resolve(&g.blueprint_id)?, library.resolve(&t.blueprint_id)?);
        if c.guide_connector >= gb.connectors.len() || c.tentative_connector >= tb.connectors.len() {
            problems.push(format!("connection {k} references a missing connector"));
            continue;
        }
        if !endpoints.insert((c.guide_instance, c.guide_connector))
            || !endpoints.insert((c.tentative_instance, c.tentative_connector))
        {
            problems.push(format!("connection {k} reuses a connector"));
        }
        if !joined.insert(c.tentative_instance) || c.tentative_instance == 0 {
            problems.push(format!("instance {} joined more than once", c.tentative_instance));
        }
        if !connectors_match(
            rules,
            &gb.connectors[c.guide_connector],
            &tb.connectors[c.tentative_connector],
        ) {
            problems.push(format!("connection {k} violates the matching rules"));
        }
        let (gp, gh) = g.world_connector(gb, c.guide_connector);
        let (tp, th) = t.world_connector(tb, c.tentative_connector);
        if (gh.dot(th) + 1.0).abs() > EPS {
            problems.push(format!("connection {k} headings are not facing each other"));
        }
        if ((tp - gp).length() - piece_distance).abs() > EPS || (tp - (gp + gh * piece_distance)).length() > EPS {
            problems.push(format!("connection {k} is not spaced by the piece distance"));
        }
    }
    for p in &map.placed {
        for (i, &used) in p.connector_used.iter().enumerate() {
            if used != endpoints.contains(&(p.instance_id, i)) {
                problems.push(format!(
                    "instance {} connector {i} used flag is inconsistent",
                    p.instance_id
                ));
            }
        }
    }
    Ok(problems)
}

/// Number of successful snaps recorded in the narration log.
pub fn logged_snaps(map: &GeneratedMap) -> usize {
    map.log
        .iter()
        .filter(|e| matches!(e.result, StepResult::Snap { .. }))
        .count()
}
