//! CSV (`x,re,im`) and little-endian binary dumps of grid functions.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::grid::{Grid, GridFunction};
use crate::error::{Error, Result};

pub fn write_csv<W: Write>(f: &GridFunction, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "re", "im"])?;
    for (x, v) in f.iter() {
        w.serialize((x, v.re, v.im))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV dump. The grid is recovered from the first abscissa and the
/// row count.
pub fn read_csv<R: Read>(input: R) -> Result<GridFunction> {
    let mut r = csv::Reader::from_reader(input);
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for row in r.deserialize() {
        let (x, re, im): (f64, f64, f64) = row?;
        xs.push(x);
        values.push(Complex64::new(re, im));
    }
    let first = *xs.first().ok_or_else(|| Error::Format("empty CSV".into()))?;
    let grid = Grid::new(-first, values.len())?;
    for (k, &x) in xs.iter().enumerate() {
        if (x - grid.abscissa(k)).abs() > 1e-9 * grid.half_width() {
            return Err(Error::Format(format!(
                "row {k}: abscissa {x} is off the uniform grid"
            )));
        }
    }
    GridFunction::new(grid, values)
}

pub fn write_binary<W: Write>(f: &GridFunction, mut out: W) -> Result<()> {
    let g = f.grid();
    out.write_all(&g.half_width().to_le_bytes())?;
    out.write_all(&(g.len() as u64).to_le_bytes())?;
    for v in f.values() {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<GridFunction> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    let l = f64::from_le_bytes(b);
    input.read_exact(&mut b)?;
    let n = u64::from_le_bytes(b);
    let n = usize::try_from(n).map_err(|_| Error::Format(format!("sample count {n}")))?;
    let grid = Grid::new(l, n)?;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        input.read_exact(&mut b)?;
        let re = f64::from_le_bytes(b);
        input.read_exact(&mut b)?;
        values.push(Complex64::new(re, f64::from_le_bytes(b)));
    }
    GridFunction::new(grid, values)
}
