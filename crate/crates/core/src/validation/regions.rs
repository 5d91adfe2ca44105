use std::collections::VecDeque;

use super::NavGraph;
use crate::error::{Error, Result};

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Connected components of the traversability graph. Component ids are
/// assigned in order of each component's lowest point index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    pub region_of: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl RegionPartition {
    pub fn region_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest(&self) -> Option<usize> {
        (0..self.sizes.len()).max_by_key(|&r| (self.sizes[r], std::cmp::Reverse(r)))
    }
}

pub fn partition_regions(graph: &NavGraph) -> RegionPartition {
    let n = graph.len();
    let mut sets = DisjointSets::new(n);
    for (i, nbrs) in graph.adjacency().iter().enumerate() {
        for &j in nbrs {
            sets.union(i, j as usize);
        }
    }
    let mut id_of_root = vec![usize::MAX; n];
    let mut region_of = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    for i in 0..n {
        let root = sets.find(i);
        if id_of_root[root] == usize::MAX {
            id_of_root[root] = sizes.len();
            sizes.push(0);
        }
        let r = id_of_root[root];
        sizes[r] += 1;
        region_of.push(r);
    }
    RegionPartition { region_of, sizes }
}

/// Connectivity metrics derived from region sizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    /// Traversable point pairs.
    pub connected_pairs: u64,
    /// All point pairs, `n(n-1)/2`.
    pub all_pairs: u64,
    /// Fraction of point pairs joined by a traversable path.
    pub c_bar: f64,
    /// Fraction of points in the largest region.
    pub a_r_max: f64,
    pub region_count: usize,
    /// Regions made of a single point.
    pub isolated_region_count: usize,
    pub largest_region: usize,
}

fn pairs(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

pub fn compute_metrics(sizes: &[usize], n: usize) -> Result<Metrics> {
    if n < 2 {
        return Err(Error::Validation(format!(
            "need at least two navigation points, got {n}"
        )));
    }
    let total: usize = sizes.iter().sum();
    if total != n {
        return Err(Error::Validation(format!("region sizes sum to {total}, expected {n}")));
    }
    let connected_pairs: u64 = sizes.iter().map(|&s| pairs(s as u64)).sum();
    let all_pairs = pairs(n as u64);
    let largest_region = sizes.iter().copied().max().unwrap_or(0);
    Ok(Metrics {
        connected_pairs,
        all_pairs,
        c_bar: connected_pairs as f64 / all_pairs as f64,
        a_r_max: largest_region as f64 / n as f64,
        region_count: sizes.iter().filter(|&&s| s > 0).count(),
        isolated_region_count: sizes.iter().filter(|&&s| s == 1).count(),
        largest_region,
    })
}

fn reachable_from(graph: &NavGraph, start: usize) -> Vec<bool> {
    let mut seen = vec![false; graph.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &graph.adjacency()[u] {
            let v = v as usize;
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Quadratic all-pairs procedure: every point pair is tested for a path, and
/// connected pairs are clustered by the three-case rule (both isolated → new
/// cluster; one isolated → join the other's cluster; different clusters →
/// merge). Returns the number of connected pairs and the region sizes in
/// descending order, singletons included.
pub fn pairwise_connectivity_oracle(graph: &NavGraph) -> (u64, Vec<usize>) {
    let n = graph.len();
    let mut cluster_of: Vec<Option<usize>> = vec![None; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut connected = 0u64;
    for i in 0..n {
        let reach = reachable_from(graph, i);
        for j in i + 1..n {
            if !reach[j] {
                continue;
            }
            connected += 1;
            match (cluster_of[i], cluster_of[j]) {
                (None, None) => {
                    cluster_of[i] = Some(clusters.len());
                    cluster_of[j] = Some(clusters.len());
                    clusters.push(vec![i, j]);
                }
                (Some(c), None) => {
                    cluster_of[j] = Some(c);
                    clusters[c].push(j);
                }
                (None, Some(c)) => {
                    cluster_of[i] = Some(c);
                    clusters[c].push(i);
                }
                (Some(a), Some(b)) if a != b => {
                    let moved = std::mem::take(&mut clusters[b]);
                    for &m in &moved {
                        cluster_of[m] = Some(a);
                    }
                    clusters[a].extend(moved);
                }
                _ => {}
            }
        }
    }
    let mut sizes: Vec<usize> = clusters.iter().map(Vec::len).filter(|&s| s > 0).collect();
    sizes.extend(cluster_of.iter().filter(|c| c.is_none()).map(|_| 1));
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    (connected, sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> NavGraph {
        NavGraph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    #[test]
    fn edgeless_graph_is_all_singletons() {
        let g = NavGraph::from_edges(5, std::iter::empty());
        let p = partition_regions(&g);
        assert_eq!(p.sizes, vec![1; 5]);
        assert_eq!(p.region_of, vec![0, 1, 2, 3, 4]);
        assert_eq!(pairwise_connectivity_oracle(&g).0, 0);
    }

    #[test]
    fn path_graph_is_one_region() {
        let p = partition_regions(&path_graph(30));
        assert_eq!(p.sizes, vec![30]);
    }

    #[test]
    fn complete_graph_pairs() {
        let n = 12;
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        let g = NavGraph::from_edges(n, edges);
        assert_eq!(pairwise_connectivity_oracle(&g), (66, vec![12]));
    }

    #[test]
    fn ids_follow_lowest_member() {
        let g = NavGraph::from_edges(6, [(4, 5), (1, 3), (0, 2)]);
        let p = partition_regions(&g);
        assert_eq!(p.region_of, vec![0, 1, 0, 1, 2, 2]);
        assert_eq!(p.sizes, vec![2, 2, 2]);
    }

    #[test]
    fn single_region_metrics() {
        let m = compute_metrics(&[400], 400).unwrap();
        assert_eq!(m.c_bar, 1.0);
        assert_eq!(m.a_r_max, 1.0);
        assert_eq!(m.region_count, 1);
    }

    #[test]
    fn two_region_metrics() {
        let m = compute_metrics(&[392, 8], 400).unwrap();
        assert_eq!(m.connected_pairs, 76_664);
        assert_eq!(m.all_pairs, 79_800);
        assert_eq!(format!("{:.2}", m.c_bar * 100.0), "96.07");
        assert_eq!(format!("{:.2}", m.a_r_max * 100.0), "98.00");
        assert_eq!(m.region_count, 2);

        let m = compute_metrics(&[300, 100], 400).unwrap();
        assert_eq!(m.connected_pairs, 44_850 + 4_950);
        assert_eq!(format!("{:.2}", m.c_bar * 100.0), "62.41");
        assert_eq!(m.a_r_max, 0.75);
    }

    #[test]
    fn metric_errors() {
        assert!(compute_metrics(&[1], 1).is_err());
        assert!(compute_metrics(&[3, 3], 5).is_err());
    }
}
