//! CSV assembly for point sets, rules, and profiles.
//!
//! One row per node, coordinates first, then the payload columns; a header
//! row is always present, lines end with `\n`, and numbers use the shortest
//! round-trip decimal form so byte output is deterministic.

use crate::domains::PointOnDomain;

/// Assemble a CSV table.
pub fn csv_table(headers: &[String], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    out
}

fn coord_headers(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("x{i}")).collect()
}

/// Points with one weight column: `x0,…,x{d−1},weight`.
pub fn weighted_points_csv(points: &[PointOnDomain], weights: &[f64], label: &str) -> String {
    let dim = points.first().map_or(0, |p| p.coords().len());
    let mut headers = coord_headers(dim);
    headers.push(label.to_string());
    csv_table(
        &headers,
        points.iter().zip(weights).map(|(p, &w)| {
            let mut row = p.coords().to_vec();
            row.push(w);
            row
        }),
    )
}

/// Points with several payload columns.
pub fn points_csv(points: &[PointOnDomain], payload: &[(&str, Vec<f64>)]) -> String {
    let dim = points.first().map_or(0, |p| p.coords().len());
    let mut headers = coord_headers(dim);
    for (name, _) in payload {
        headers.push((*name).to_string());
    }
    csv_table(
        &headers,
        (0..points.len()).map(|i| {
            let mut row = points[i].coords().to_vec();
            for (_, col) in payload {
                row.push(col[i]);
            }
            row
        }),
    )
}
