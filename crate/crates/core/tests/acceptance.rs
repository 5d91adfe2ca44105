//! Acceptance criteria, one PASS/FAIL line each.

use std::path::Path;
use std::time::{Duration, Instant};

use snapmesh::methods::jump_base;
use snapmesh::validation::{compute_metrics, pairwise_connectivity_oracle, partition_regions, NavGraph};
use snapmesh::{
    audit, bundled, formats, generate, generate_with, validate_map, GenRng, GenerationConfig, MethodConfig,
    MethodRegistry, NavConfig, PieceLibrary,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn library() -> PieceLibrary {
    bundled::library()
}

fn config(method: MethodConfig, seed: i64) -> GenerationConfig {
    let mut c = GenerationConfig::new(bundled::piece_ids(), method);
    c.matching_rules = bundled::matching_rules();
    c.seed = seed;
    c
}

/// The four example configs for arena, corridor, star and branch.
fn example_configs() -> Vec<(GenerationConfig, PieceLibrary)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/configs");
    ["a-arena", "b-corridor", "c-star", "d-branch"]
        .iter()
        .map(|name| {
            let loaded = formats::load_config(&dir.join(format!("{name}.json"))).unwrap();
            (loaded.generation, loaded.pieces)
        })
        .collect()
}

/// (config, seed) pairs cycling through the example configs.
fn determinism_pairs(count: usize) -> Vec<(GenerationConfig, PieceLibrary)> {
    let examples = example_configs();
    (0..count)
        .map(|k| {
            let (mut c, lib) = examples[k % examples.len()].clone();
            c.seed = k as i64;
            (c, lib)
        })
        .collect()
}

fn metric_formula() -> Outcome {
    let started = Instant::now();
    let m = compute_metrics(&[392, 8], 400).unwrap();
    let elapsed = started.elapsed();
    let c = (m.c_bar * 1e4).round() / 100.0;
    let a = (m.a_r_max * 1e4).round() / 100.0;
    let pass = c == 96.07 && a == 98.00 && m.region_count == 2 && elapsed < Duration::from_millis(1);
    outcome(
        pass,
        format!(
            "c_bar {c:.2}%  a_r_max {a:.2}%  regions {}  {:.3} ms",
            m.region_count,
            ms(elapsed)
        ),
    )
}

fn random_graph(n: usize, p: f64, rng: &mut GenRng) -> NavGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.unit() < p {
                edges.push((i, j));
            }
        }
    }
    NavGraph::from_edges(n, edges)
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut rng = GenRng::from_seed(20_200);
    let probs = [0.001, 0.01, 0.05];
    let mut mismatches = 0;
    for k in 0..100 {
        let g = random_graph(200, probs[k % probs.len()], &mut rng);
        let sizes = partition_regions(&g).sizes;
        let formula = compute_metrics(&sizes, g.len()).unwrap().connected_pairs;
        let (oracle, _) = pairwise_connectivity_oracle(&g);
        if formula != oracle {
            mismatches += 1;
        }
    }
    let elapsed = started.elapsed();
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!("100 graphs, {mismatches} mismatches, {:.0} ms", ms(elapsed)),
    )
}

fn determinism() -> Outcome {
    let pairs = determinism_pairs(20);
    let started = Instant::now();
    let mut differing = Vec::new();
    for (c, lib) in &pairs {
        let first = formats::map_to_json(&generate(c, lib).unwrap());
        let second = formats::map_to_json(&generate(c, lib).unwrap());
        if first != second {
            differing.push(c.seed);
        }
    }
    let elapsed = started.elapsed();
    outcome(
        differing.is_empty() && elapsed < Duration::from_secs(5),
        format!("20 pairs, differing seeds {differing:?}, {:.0} ms", ms(elapsed)),
    )
}

fn overlap_audit() -> Outcome {
    let lib = library();
    let methods = [
        MethodConfig::arena(12),
        MethodConfig::corridor(30),
        MethodConfig::star(8, 2),
        MethodConfig::branch(4, 12, 4),
        MethodConfig::branch(20, 5, 2),
    ];
    let started = Instant::now();
    let (mut overlaps, mut pieces) = (0, 0);
    for k in 0..50 {
        let c = config(methods[k % methods.len()].clone(), 500 + k as i64);
        assert!(c.check_overlaps);
        let map = generate(&c, &lib).unwrap();
        pieces += map.piece_count();
        overlaps += audit::overlapping_pairs(&map, &lib, c.shrink_eps).unwrap().len();
    }
    let elapsed = started.elapsed();
    outcome(
        overlaps == 0 && elapsed < Duration::from_secs(30),
        format!(
            "50 maps, {pieces} pieces, {overlaps} overlapping pairs, {:.0} ms",
            ms(elapsed)
        ),
    )
}

/// Violations of the structural rules of one run, empty when it conforms.
fn shape_violations(method: &MethodConfig, seed: i64, lib: &PieceLibrary) -> Vec<String> {
    let c = config(method.clone(), seed);
    let g = generate_with(&c, lib, &MethodRegistry::with_builtins()).unwrap();
    let (map, trace) = (&g.map, &g.trace);
    let param = |key: &str| method.params[key].as_u64().unwrap() as usize;
    let mut bad = Vec::new();
    match method.kind.as_str() {
        "arena" | "corridor" => {
            if map.piece_count() > param("max_pieces") + 1 {
                bad.push(format!("{} pieces", map.piece_count()));
            }
        }
        "star" => {
            let hub = lib.resolve(&map.placed[0].blueprint_id).unwrap().connectors.len();
            if trace.non_empty_segments() > hub {
                bad.push(format!("{} arms on a {hub}-connector hub", trace.non_empty_segments()));
            }
            let (l, v) = (param("arm_length"), param("arm_length_var"));
            for s in &trace.segments {
                let t = s.target_len as usize;
                if s.root != 0 || t < l.saturating_sub(v).max(1) || t > l + v || s.pieces.len() > t {
                    bad.push(format!("arm {s:?}"));
                }
            }
        }
        "branch" => {
            let (count, base) = (
                param("branch_count"),
                jump_base(param("branch_count") as u32, param("branch_length") as u32),
            );
            if trace.segments.len() > count {
                bad.push(format!("{} branches", trace.segments.len()));
            }
            for (i, s) in trace.segments.iter().enumerate().skip(1) {
                let Some(jump) = s.jump else {
                    bad.push(format!("branch {i} has no jump"));
                    continue;
                };
                if jump > i * base || s.root.abs_diff(jump) > base {
                    bad.push(format!("branch {i} root {} jump {jump}", s.root));
                }
            }
        }
        other => bad.push(format!("unexpected kind {other}")),
    }
    bad.into_iter()
        .map(|b| format!("{} seed {seed}: {b}", method.kind))
        .collect()
}

fn method_shapes() -> Outcome {
    let lib = library();
    let methods = [
        MethodConfig::arena(12),
        MethodConfig::arena(3),
        MethodConfig::corridor(20),
        MethodConfig::corridor(54),
        MethodConfig::star(8, 2),
        MethodConfig::star(3, 3),
        MethodConfig::branch(4, 12, 4),
        MethodConfig::branch(20, 5, 2),
        MethodConfig::branch(7, 3, 1),
        MethodConfig::star(1, 0),
    ];
    let mut violations = Vec::new();
    for k in 0..100 {
        violations.extend(shape_violations(&methods[k % methods.len()], 900 + k as i64, &lib));
    }
    let detail = match violations.first() {
        None => "100 runs, all conform".to_string(),
        Some(v) => format!("{} violations, first: {v}", violations.len()),
    };
    outcome(violations.is_empty(), detail)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    (xs[(n - 1) / 2] + xs[n / 2]) / 2.0
}

fn navigability() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, (base, lib)) in ["arena", "corridor", "star", "branch"].iter().zip(example_configs()) {
        let (mut cs, mut as_) = (Vec::new(), Vec::new());
        for seed in 0..30 {
            let mut c = base.clone();
            c.seed = seed;
            let map = generate(&c, &lib).unwrap();
            let nav = NavConfig {
                seed,
                ..NavConfig::default()
            };
            let r = validate_map(&map, &lib, &nav).unwrap().report;
            cs.push(r.c_bar);
            as_.push(r.a_r_max);
        }
        let (c, a) = (median(cs), median(as_));
        pass &= c >= 0.85 && a >= 0.90;
        parts.push(format!("{name} {:.1}/{:.1}", c * 100.0, a * 100.0));
    }
    outcome(
        pass,
        format!("median c_bar/a_r_max % over 30 seeds: {}", parts.join(", ")),
    )
}

fn timing() -> Outcome {
    let lib = library();
    let mut corridor_worst = Duration::ZERO;
    let mut corridor_runs = 0;
    for seed in 1..200 {
        let mut c = config(MethodConfig::corridor(54), seed);
        c.max_fails = 50;
        let started = Instant::now();
        let map = generate(&c, &lib).unwrap();
        let elapsed = started.elapsed();
        if map.piece_count() == 55 {
            corridor_worst = corridor_worst.max(elapsed);
            corridor_runs += 1;
            if corridor_runs == 5 {
                break;
            }
        }
    }
    let started = Instant::now();
    let arena = generate(&config(MethodConfig::arena(12), 33), &lib).unwrap();
    let arena_time = started.elapsed();
    let started = Instant::now();
    let report = validate_map(&arena, &lib, &NavConfig::default()).unwrap().report;
    let validation_time = started.elapsed();
    let pass = corridor_runs == 5
        && corridor_worst < Duration::from_millis(500)
        && arena.piece_count() == 13
        && arena_time < Duration::from_millis(100)
        && report.n_points == 400
        && validation_time < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "55-piece corridor worst of {corridor_runs}: {:.2} ms, {}-piece arena: {:.2} ms, 400-point validation: {:.1} ms",
            ms(corridor_worst),
            arena.piece_count(),
            ms(arena_time),
            ms(validation_time)
        ),
    )
}

fn point_stability() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (c, lib) in determinism_pairs(5) {
        let map = generate(&c, &lib).unwrap();
        let at = |n_points| {
            let nav = NavConfig {
                n_points,
                seed: c.seed,
                ..NavConfig::default()
            };
            validate_map(&map, &lib, &nav).unwrap().report
        };
        let (small, large) = (at(400), at(4000));
        let dc = (small.c_bar - large.c_bar).abs() * 100.0;
        let da = (small.a_r_max - large.a_r_max).abs() * 100.0;
        worst = worst.max(dc).max(da);
        parts.push(format!("{} seed {}: {dc:.1}/{da:.1}", c.method.kind, c.seed));
    }
    outcome(worst <= 5.0, format!("|delta| pp c_bar/a_r_max: {}", parts.join(", ")))
}

fn branch_jump() -> Outcome {
    let cases = [
        (4, 12, 1),
        (20, 5, 4),
        (1, 1, 1),
        (3, 3, 1),
        (7, 3, 2),
        (9, 2, 4),
        (100, 7, 14),
        (5, 6, 1),
        (0, 4, 1),
        (12, 4, 3),
    ];
    let wrong: Vec<_> = cases.iter().filter(|&&(c, l, want)| jump_base(c, l) != want).collect();
    outcome(
        wrong.is_empty(),
        format!("{} vectors, mismatches {wrong:?}", cases.len()),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("metric formula", metric_formula),
        ("oracle equivalence", oracle_equivalence),
        ("determinism", determinism),
        ("non-overlap audit", overlap_audit),
        ("method shapes", method_shapes),
        ("navigability", navigability),
        ("timing", timing),
        ("point stability", point_stability),
        ("branch jump", branch_jump),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!(
            "{} {}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
        if !o.pass {
            failed.push(*name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
