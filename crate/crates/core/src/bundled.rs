//! A small ready-made piece set: platform, hallway, clover, ramp and bunny.
//!
//! Floors sit at `y = 0` (the ramp deck at [`RAMP_RISE`]) on slabs
//! [`SLAB`] thick. Every collider reaches [`HEADROOM`] above its floor so
//! pieces cannot be stacked with less clearance than that. The same pieces
//! ship as JSON under `assets/pieces`.

use crate::geometry::{Obb, TriMesh, Vec3};
use crate::pieces::{ColorId, ColorMatrix, Connector, MapPiece, MatchingRules, PieceLibrary};

pub const SLAB: f64 = 0.3;
pub const HEADROOM: f64 = 2.5;
pub const RAMP_RISE: f64 = 0.5;
pub const HALLWAY_WALL: f64 = 2.4;
pub const HALLWAY_ROOF: f64 = 2.6;

pub const PALETTE: [&str; 4] = ["white", "red", "green", "blue"];

const PLATFORM_JSON: &str = include_str!("../assets/pieces/platform.json");
const HALLWAY_JSON: &str = include_str!("../assets/pieces/hallway.json");
const CLOVER_JSON: &str = include_str!("../assets/pieces/clover.json");
const RAMP_JSON: &str = include_str!("../assets/pieces/ramp.json");
const BUNNY_JSON: &str = include_str!("../assets/pieces/bunny.json");

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

fn conn(position: Vec3, heading: Vec3, pins: u32, color: &str) -> Connector {
    Connector::new(position, heading, pins, color).expect("bundled connector is valid")
}

fn collider(min: Vec3, max: Vec3) -> Obb {
    Obb::from_bounds(min, max).expect("bundled collider is valid")
}

/// Extrudes a polygon in the xz-plane, star-shaped around the origin, into a
/// solid between `y0` and `y1`.
fn push_prism(mesh: &mut TriMesh, outline: &[(f64, f64)], y0: f64, y1: f64) {
    let n = outline.len();
    for i in 0..n {
        let (ax, az) = outline[i];
        let (bx, bz) = outline[(i + 1) % n];
        mesh.push_triangle(v(0.0, y1, 0.0), v(ax, y1, az), v(bx, y1, bz), Vec3::UP);
        mesh.push_triangle(v(0.0, y0, 0.0), v(ax, y0, az), v(bx, y0, bz), -Vec3::UP);
        let out = v(ax + bx, 0.0, az + bz);
        mesh.push_quad([v(ax, y0, az), v(bx, y0, bz), v(bx, y1, bz), v(ax, y1, az)], out);
    }
}

fn push_pyramid(mesh: &mut TriMesh, min: (f64, f64), max: (f64, f64), apex: Vec3) {
    let c = [
        v(min.0, 0.0, min.1),
        v(max.0, 0.0, min.1),
        v(max.0, 0.0, max.1),
        v(min.0, 0.0, max.1),
    ];
    let mid = v((min.0 + max.0) / 2.0, 0.0, (min.1 + max.1) / 2.0);
    for i in 0..4 {
        let (a, b) = (c[i], c[(i + 1) % 4]);
        mesh.push_triangle(a, b, apex, (a + b) * 0.5 - mid);
    }
}

/// Both faces of a vertical polygon, so it blocks and renders from either side.
fn push_fin_quad(mesh: &mut TriMesh, corners: [Vec3; 4], normal: Vec3) {
    mesh.push_quad(corners, normal);
    mesh.push_quad(corners, -normal);
}

/// 2 x 2 slab, one connector per side.
pub fn platform() -> MapPiece {
    let h = 1.0;
    let mesh = TriMesh::cuboid(v(-h, -SLAB, -h), v(h, 0.0, h));
    let connectors = [Vec3::X, Vec3::Z, -Vec3::X, -Vec3::Z]
        .into_iter()
        .map(|d| conn(d * h, d, 2, "white"))
        .collect();
    let colliders = vec![collider(v(-h, -SLAB, -h), v(h, HEADROOM, h))];
    MapPiece::new("platform", mesh, connectors, colliders).expect("valid piece")
}

/// 2.8 x 2 walled passage with a roof beam across the middle; open at both ends.
pub fn hallway() -> MapPiece {
    let (hx, hz) = (1.4, 1.0);
    let mut mesh = TriMesh::cuboid(v(-hx, -SLAB, -hz), v(hx, 0.0, hz));
    for z in [-hz, hz] {
        push_fin_quad(
            &mut mesh,
            [
                v(-hx, 0.0, z),
                v(hx, 0.0, z),
                v(hx, HALLWAY_WALL, z),
                v(-hx, HALLWAY_WALL, z),
            ],
            Vec3::Z,
        );
    }
    mesh.push_cuboid(v(-0.2, HALLWAY_WALL, -hz), v(0.2, HALLWAY_ROOF, hz));
    let connectors = vec![
        conn(v(hx, 0.0, 0.0), Vec3::X, 2, "red"),
        conn(v(-hx, 0.0, 0.0), -Vec3::X, 2, "red"),
    ];
    let colliders = vec![collider(v(-hx, -SLAB, -hz), v(hx, HALLWAY_ROOF, hz))];
    MapPiece::new("hallway", mesh, connectors, colliders).expect("valid piece")
}

/// 2 x 2 center with four rounded lobes, each ending in a connector.
pub fn clover() -> MapPiece {
    // one lobe in +x; the others are quarter turns of it
    let lobe = [
        (1.0, -1.0),
        (1.1, -1.0),
        (1.38, -0.88),
        (1.5, -0.6),
        (1.5, 0.6),
        (1.38, 0.88),
        (1.1, 1.0),
    ];
    let mut outline = Vec::new();
    for (c, s) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)] {
        outline.extend(lobe.iter().map(|&(x, z)| (x * c - z * s, x * s + z * c)));
    }
    let mut mesh = TriMesh::default();
    push_prism(&mut mesh, &outline, -SLAB, 0.0);
    let r = 1.5;
    let connectors = vec![
        conn(v(r, 0.0, 0.0), Vec3::X, 2, "green"),
        conn(v(0.0, 0.0, r), Vec3::Z, 1, "white"),
        conn(v(-r, 0.0, 0.0), -Vec3::X, 2, "green"),
        conn(v(0.0, 0.0, -r), -Vec3::Z, 1, "white"),
    ];
    let colliders = vec![
        collider(v(-r, -SLAB, -1.0), v(r, HEADROOM, 1.0)),
        collider(v(-1.0, -SLAB, -r), v(1.0, HEADROOM, r)),
    ];
    MapPiece::new("clover", mesh, connectors, colliders).expect("valid piece")
}

/// 2 m wide: a 1.4 m landing, a 2 m incline up [`RAMP_RISE`], and a 1.4 m
/// raised deck. Five connectors, two of them on the deck.
pub fn ramp() -> MapPiece {
    let hz = 1.0;
    let (x0, x1, x2, x3) = (-2.4, -1.0, 1.0, 2.4);
    let y = RAMP_RISE;
    let mut mesh = TriMesh::cuboid(v(x0, -SLAB, -hz), v(x1, 0.0, hz));
    mesh.push_quad([v(x1, 0.0, -hz), v(x2, y, -hz), v(x2, y, hz), v(x1, 0.0, hz)], Vec3::UP);
    mesh.push_quad(
        [v(x1, -SLAB, -hz), v(x2, -SLAB, -hz), v(x2, -SLAB, hz), v(x1, -SLAB, hz)],
        -Vec3::UP,
    );
    for z in [-hz, hz] {
        mesh.push_quad(
            [v(x1, -SLAB, z), v(x2, -SLAB, z), v(x2, y, z), v(x1, 0.0, z)],
            v(0.0, 0.0, z),
        );
    }
    mesh.push_cuboid(v(x2, -SLAB, -hz), v(x3, y, hz));
    let landing = (x0 + x1) / 2.0;
    let deck = (x2 + x3) / 2.0;
    let connectors = vec![
        conn(v(x0, 0.0, 0.0), -Vec3::X, 2, "white"),
        conn(v(landing, 0.0, hz), Vec3::Z, 2, "blue"),
        conn(v(landing, 0.0, -hz), -Vec3::Z, 2, "blue"),
        conn(v(x3, y, 0.0), Vec3::X, 2, "white"),
        conn(v(deck, y, hz), Vec3::Z, 1, "red"),
    ];
    let colliders = vec![
        collider(v(x0, -SLAB, -hz), v(x1, HEADROOM, hz)),
        collider(v(x1, -SLAB, -hz), v(x3, y + HEADROOM, hz)),
    ];
    MapPiece::new("ramp", mesh, connectors, colliders).expect("valid piece")
}

/// 2.4 x 2.4 slab with a steep-sided bunny sculpture; connectors on three sides.
pub fn bunny() -> MapPiece {
    let h = 1.2;
    // the floor is cut out under the sculpture so no points land inside it
    let (hole_min, hole_max) = ((-0.5, -0.32), (0.56, 0.32));
    let mut mesh = TriMesh::default();
    let floor = [
        ((-h, -h), (hole_min.0, h)),
        ((hole_max.0, -h), (h, h)),
        ((hole_min.0, -h), (hole_max.0, hole_min.1)),
        ((hole_min.0, hole_max.1), (hole_max.0, h)),
    ];
    for ((x0, z0), (x1, z1)) in floor {
        mesh.push_quad(
            [v(x0, 0.0, z0), v(x1, 0.0, z0), v(x1, 0.0, z1), v(x0, 0.0, z1)],
            Vec3::UP,
        );
    }
    mesh.push_quad(
        [v(-h, -SLAB, -h), v(h, -SLAB, -h), v(h, -SLAB, h), v(-h, -SLAB, h)],
        -Vec3::UP,
    );
    for d in [Vec3::X, Vec3::Z, -Vec3::X, -Vec3::Z] {
        let side = Vec3::new(d.z, 0.0, -d.x) * h;
        let c = d * h;
        mesh.push_quad(
            [
                c - side + v(0.0, -SLAB, 0.0),
                c + side + v(0.0, -SLAB, 0.0),
                c + side,
                c - side,
            ],
            d,
        );
    }
    push_pyramid(&mut mesh, (-0.5, -0.32), (0.2, 0.32), v(-0.15, 0.8, 0.0));
    push_pyramid(&mut mesh, (0.2, -0.32), (0.56, 0.32), v(0.38, 1.05, 0.0));
    for z in [-0.08, 0.08] {
        push_fin_quad(
            &mut mesh,
            [v(0.3, 0.85, z), v(0.48, 0.85, z), v(0.43, 1.5, z), v(0.37, 1.5, z)],
            Vec3::Z,
        );
    }
    let connectors = vec![
        conn(v(h, 0.0, 0.0), Vec3::X, 2, "blue"),
        conn(v(0.0, 0.0, h), Vec3::Z, 1, "white"),
        conn(v(0.0, 0.0, -h), -Vec3::Z, 2, "blue"),
    ];
    let colliders = vec![collider(v(-h, -SLAB, -h), v(h, HEADROOM, h))];
    MapPiece::new("bunny", mesh, connectors, colliders).expect("valid piece")
}

/// The five pieces as built in code, in library order.
pub fn pieces() -> Vec<MapPiece> {
    vec![platform(), hallway(), clover(), ramp(), bunny()]
}

/// The bundled library, loaded from the shipped JSON files.
pub fn library() -> PieceLibrary {
    let pieces = [PLATFORM_JSON, HALLWAY_JSON, CLOVER_JSON, RAMP_JSON, BUNNY_JSON]
        .into_iter()
        .map(|text| crate::formats::parse_piece(text, None).expect("bundled piece parses"));
    PieceLibrary::from_pieces(pieces).expect("bundled ids are unique")
}

pub fn piece_ids() -> Vec<String> {
    ["platform", "hallway", "clover", "ramp", "bunny"]
        .map(String::from)
        .to_vec()
}

/// Same color matches, white matches anything.
pub fn color_matrix() -> ColorMatrix {
    ColorMatrix::same_color_with_wildcards(PALETTE.iter().map(|&c| ColorId::new(c)).collect(), &["white"])
        .expect("bundled palette is valid")
}

/// Pins and colors, zero pin tolerance.
pub fn matching_rules() -> MatchingRules {
    MatchingRules::both(0, color_matrix())
}
