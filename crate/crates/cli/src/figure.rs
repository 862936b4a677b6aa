//! Comparison-triangle coordinates as CSV, for plotting elsewhere.

use cat0kit::comparison::{build_comparison_triangle, comparison_point, Side};

use crate::CliError;

/// Rows `side,frac,x,y`: the comparison triangle of side lengths
/// `d(x,y), d(x,z), d(y,z)` sampled at `grid` points per side, sides
/// running x→y, y→z, z→x.
pub fn comparison_csv(sides: [f64; 3], grid: usize) -> Result<String, CliError> {
    let [a, b, c] = sides;
    let tri = build_comparison_triangle(a, b, c)?;
    let grid = grid.max(2);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Config(format!("csv output: {e}"));
    w.write_record(["side", "frac", "x", "y"]).map_err(io)?;
    for (name, side, len, reversed) in [
        ("xy", Side::XY, a, false),
        ("yz", Side::YZ, c, false),
        ("zx", Side::XZ, b, true),
    ] {
        for k in 0..grid {
            let frac = k as f64 / (grid - 1) as f64;
            let along = if reversed {
                (1.0 - frac) * len
            } else {
                frac * len
            };
            let p = comparison_point(&tri, side, along)?;
            w.write_record([
                name.to_string(),
                frac.to_string(),
                p.x.to_string(),
                p.y.to_string(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Config(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
