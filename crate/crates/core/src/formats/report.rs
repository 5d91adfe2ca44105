use serde::{Deserialize, Serialize};

use super::to_pretty_json;
use crate::error::Result;
use crate::validation::ValidationReport;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportFile {
    n_points: usize,
    nav_seed: i64,
    c_bar_pct: f64,
    a_r_max_pct: f64,
    region_count: usize,
    isolated_region_count: usize,
    largest_region_points: usize,
    duration_s: f64,
}

fn round_to(x: f64, decimals: i32) -> f64 {
    let k = 10f64.powi(decimals);
    (x * k).round() / k + 0.0
}

/// Percentages are written with two decimals, durations with four.
pub fn report_to_json(report: &ValidationReport) -> String {
    to_pretty_json(&ReportFile {
        n_points: report.n_points,
        nav_seed: report.nav_seed,
        c_bar_pct: round_to(report.c_bar * 100.0, 2),
        a_r_max_pct: round_to(report.a_r_max * 100.0, 2),
        region_count: report.region_count,
        isolated_region_count: report.isolated_region_count,
        largest_region_points: report.largest_region,
        duration_s: round_to(report.duration_s, 4),
    })
}

pub fn parse_report(text: &str) -> Result<ValidationReport> {
    let f: ReportFile = serde_json::from_str(text)?;
    Ok(ValidationReport {
        c_bar: f.c_bar_pct / 100.0,
        a_r_max: f.a_r_max_pct / 100.0,
        region_count: f.region_count,
        isolated_region_count: f.isolated_region_count,
        largest_region: f.largest_region_points,
        n_points: f.n_points,
        nav_seed: f.nav_seed,
        duration_s: f.duration_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(c_bar: f64) -> ValidationReport {
        ValidationReport {
            c_bar,
            a_r_max: 0.98,
            region_count: 2,
            isolated_region_count: 1,
            largest_region: 392,
            n_points: 400,
            nav_seed: 3,
            duration_s: 0.123456,
        }
    }

    #[test]
    fn percentages_use_two_decimals() {
        let text = report_to_json(&report(76_664.0 / 79_800.0));
        assert!(text.contains("\"c_bar_pct\": 96.07"), "{text}");
        assert!(text.contains("\"a_r_max_pct\": 98.0"), "{text}");
        assert!(text.contains("\"region_count\": 2"));
    }

    #[test]
    fn round_trip_within_precision() {
        let r = report(0.6241);
        let back = parse_report(&report_to_json(&r)).unwrap();
        assert!((back.c_bar - r.c_bar).abs() <= 5e-5);
        assert!((back.a_r_max - r.a_r_max).abs() <= 5e-5);
        assert_eq!(back.region_count, r.region_count);
        assert_eq!(back.n_points, r.n_points);
    }
}
