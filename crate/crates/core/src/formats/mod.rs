//! File formats: piece definitions, generation configs, map files,
//! validation reports and Wavefront OBJ.
//!
//! All structured files are UTF-8 JSON. Reals are written with at most nine
//! significant digits and angles in degrees, so that equal values always
//! produce identical bytes.

mod config;
mod map;
mod obj;
mod piece;
mod report;

pub use config::{config_canonical_json, config_to_json, load_config, parse_config, LoadedConfig};
pub use map::{load_map, map_from_json, map_to_json};
pub use obj::{export_obj, parse_obj};
pub use piece::{load_piece_file, load_piece_library, parse_piece, piece_canonical_json, piece_to_json};
pub use report::{parse_report, report_to_json};

/// Rounds to nine significant digits and folds negative zero into zero.
pub(crate) fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    r + 0.0
}

pub(crate) fn round_vec(v: crate::geometry::Vec3) -> [f64; 3] {
    [round_sig(v.x), round_sig(v.y), round_sig(v.z)]
}

/// Degrees in `[0, 360)` rounded to nine significant digits.
pub(crate) fn yaw_to_degrees(yaw: f64) -> f64 {
    let d = round_sig(yaw.to_degrees());
    if d >= 360.0 {
        0.0
    } else {
        d
    }
}

pub(crate) fn to_pretty_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_idempotent() {
        for x in [0.1, 1.0 / 3.0, -2.5e-7, 123456789.123, std::f64::consts::PI * 1e3] {
            let r = round_sig(x);
            assert_eq!(round_sig(r), r);
            assert!((r - x).abs() <= x.abs() * 1e-8);
        }
        assert!(round_sig(-0.0).is_sign_positive());
    }

    #[test]
    fn yaw_wraps_at_full_turn() {
        assert_eq!(yaw_to_degrees(std::f64::consts::TAU - 1e-13), 0.0);
        assert_eq!(yaw_to_degrees(std::f64::consts::PI), 180.0);
    }
}
