//! CSV loading of sampled fields. Radial files hold `r,B` rows; grid files
//! hold `x,y,B` rows on a uniform lattice with equal spacing in both
//! directions. A non-numeric first row is treated as a header and `#` starts
//! a comment.

use super::MagneticField;
use crate::error::{Error, Result};
use crate::geometry::Point;
use std::path::Path;

fn rows(path: &Path, width: usize) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if v.len() == width => out.push(v),
            Err(_) if k == 0 => continue,
            _ => {
                return Err(Error::InvalidField(format!(
                    "{}: row {} is not {width} numbers",
                    path.display(),
                    k + 1
                )))
            }
        }
    }
    Ok(out)
}

pub(super) fn load_radial(path: &Path) -> Result<MagneticField> {
    let mut rows = rows(path, 2)?;
    rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
    MagneticField::radial(rows.iter().map(|r| r[0]).collect(), rows.iter().map(|r| r[1]).collect())
}

fn axis(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub(super) fn load_grid(path: &Path) -> Result<MagneticField> {
    let rows = rows(path, 3)?;
    let xs = axis(rows.iter().map(|r| r[0]).collect());
    let ys = axis(rows.iter().map(|r| r[1]).collect());
    if xs.len() < 2 || ys.len() < 2 {
        return Err(Error::InvalidField("grid field needs at least 2x2 samples".into()));
    }
    let cell = xs[1] - xs[0];
    let uniform = |v: &[f64]| v.windows(2).all(|w| ((w[1] - w[0]) - cell).abs() <= 1e-9 * cell.max(1.0));
    if !uniform(&xs) || !uniform(&ys) {
        return Err(Error::InvalidField("grid field samples are not on a uniform square lattice".into()));
    }
    let (nx, ny) = (xs.len(), ys.len());
    let mut values = vec![f64::NAN; nx * ny];
    for r in &rows {
        let i = ((r[0] - xs[0]) / cell).round() as usize;
        let j = ((r[1] - ys[0]) / cell).round() as usize;
        values[j * nx + i] = r[2];
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidField(format!("grid field is missing samples ({} expected)", nx * ny)));
    }
    MagneticField::grid(Point::new(xs[0], ys[0]), cell, nx, ny, values)
}
