//! Finite-element spectra against the right-hand table columns and the
//! quasi-eigenvalue lists.

use std::f64::consts::PI;

use sloshing::fem::{fem_spectrum, generate_mesh, match_spectra, FemOptions, TriangleMesh};
use sloshing::spectrum::{expanded_values, merged_quasi_spectrum};
use sloshing::validate_config;

fn right_column(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .filter_map(|l| l.split(',').nth(1))
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().unwrap())
        .collect()
}

/// Rows whose right cell is blank; the table shifts its right column down
/// by this many rows.
fn blank_right(csv: &str) -> i64 {
    csv.lines()
        .skip(1)
        .take_while(|l| l.split(',').nth(1).map_or(true, |s| s.trim().is_empty()))
        .count() as i64
}

#[test]
fn quarter_sixth_low_values() {
    let cfg = validate_config(PI, PI, 2, 3).unwrap();
    let table = right_column(include_str!("data/table_q2_r3.csv"));
    let spec = fem_spectrum(&cfg, &FemOptions::for_config(&cfg), 4.0).unwrap();
    let ours = spec.values();
    let shared: Vec<_> = table.iter().take_while(|&&v| v < 3.5).collect();
    assert!(shared.len() > 20);
    for (k, (a, b)) in ours.iter().zip(shared).enumerate() {
        assert!((a - b).abs() < 1e-4, "entry {k}: {a} vs {b}");
    }
}

#[test]
fn two_tenths_offset_follows_table_shift() {
    let csv = include_str!("data/table_q5_r5.csv");
    let cfg = validate_config(PI, PI, 5, 5).unwrap();
    let top = 8.0;
    let quasi = expanded_values(&merged_quasi_spectrum(&cfg, top + 0.5));
    let spec = fem_spectrum(&cfg, &FemOptions::for_config(&cfg), top).unwrap();
    let report = match_spectra(&spec.values(), &quasi, 1e-2).unwrap();
    assert!(report.stable);
    assert_eq!(report.offset, -blank_right(csv));
    // the printed rows already carry the shift: row j holds quasi j and the
    // reference value paired with it
    let rows: Vec<(f64, Option<f64>)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let mut f = l.split(',');
            let q = f.next().unwrap().parse().unwrap();
            let r = f.next().filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse().unwrap());
            (q, r)
        })
        .collect();
    let mut checked = 0;
    for &(j, q, ours, gap) in &report.pairs {
        if !(6.0..top).contains(&q) {
            continue;
        }
        let (tq, tr) = rows[j];
        let tr = tr.unwrap();
        assert!((tq - q).abs() < 1e-4);
        assert!((ours - tr).abs() < 1e-3, "row {j}: {ours} vs {tr}");
        assert!((gap - (tq - tr).abs()).abs() < 1e-3);
        assert!(gap < 1e-2);
        checked += 1;
    }
    assert!(checked > 30);
    assert!(spec.monotone_in_n());
}

#[test]
fn mesh_file_round_trip() {
    let cfg = validate_config(PI, PI, 3, 9).unwrap();
    let mesh = generate_mesh(&cfg, PI / 20.0, 4.0).unwrap();
    let dir = std::env::temp_dir().join(format!("sloshing-mesh-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mesh.txt");
    std::fs::write(&path, mesh.to_text()).unwrap();
    let back = TriangleMesh::from_text(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(back, mesh);
}
