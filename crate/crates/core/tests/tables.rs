//! Merged quasi-eigenvalue lists against the published tables.

use std::f64::consts::PI;

use sloshing::spectrum::{expanded_values, merged_quasi_spectrum};
use sloshing::validate_config;

fn left_column(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .filter_map(|l| l.split(',').next())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().unwrap())
        .collect()
}

fn check(q: i64, r: i64, csv: &str) {
    let table = left_column(csv);
    let top = table.last().unwrap() + 0.5;
    let cfg = validate_config(PI, PI, q, r).unwrap();
    let ours = expanded_values(&merged_quasi_spectrum(&cfg, top));
    assert!(ours.len() >= table.len());
    for (k, (a, b)) in ours.iter().zip(&table).enumerate() {
        assert!(
            (a - b).abs() < 1e-4,
            "q = {q}, r = {r}, entry {k}: computed {a}, table {b}"
        );
    }
}

#[test]
fn quarter_and_sixth() {
    check(2, 3, include_str!("data/table_q2_r3.csv"));
}

#[test]
fn two_tenths() {
    check(5, 5, include_str!("data/table_q5_r5.csv"));
}

#[test]
fn sixth_and_eighteenth() {
    check(3, 9, include_str!("data/table_q3_r9.csv"));
}
