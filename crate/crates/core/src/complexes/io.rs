//! Point lists as CSV: one point per row, one column per coordinate, no header.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Scalar;

pub fn write_points_csv<T: Scalar, W: Write>(points: &PointSet<T>, mut out: W) -> Result<()> {
    let mut line = String::new();
    for p in points.iter() {
        line.clear();
        for (i, x) in p.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&x.to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_points_csv<T: Scalar, R: Read>(input: R) -> Result<PointSet<T>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut set: Option<PointSet<T>> = None;
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let coords = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map(T::of)
                    .map_err(|_| Error::Config(format!("row {}: {field:?} is not a number", row + 1)))
            })
            .collect::<Result<Vec<T>>>()?;
        let set = set.get_or_insert_with(|| PointSet::new(coords.len().max(1)));
        set.try_push(&coords).map_err(|_| Error::Config(format!("row {} has {} columns, expected {}", row + 1, coords.len(), set.dim())))?;
    }
    set.ok_or_else(|| Error::Config("point file is empty".into()))
}
