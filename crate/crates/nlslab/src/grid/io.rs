//! Field serialization: CSV `(x, re, im)` rows and a flat binary format
//! with header `(n: u64 LE, L: f64 LE)` followed by interleaved re/im doubles.

use std::io::{self, Read, Write};

use num_complex::Complex;

use super::scalar::Real;
use super::{Field, Grid};

pub fn write_csv<T: Real, W: Write>(f: &Field<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "x,re,im")?;
    for (i, z) in f.values().iter().enumerate() {
        let x = f.grid().node(i).to_f64().unwrap();
        writeln!(
            out,
            "{:.17e},{:.17e},{:.17e}",
            x,
            z.re.to_f64().unwrap(),
            z.im.to_f64().unwrap()
        )?;
    }
    Ok(())
}

pub fn write_binary<T: Real, W: Write>(f: &Field<T>, mut out: W) -> io::Result<()> {
    let n = f.len() as u64;
    out.write_all(&n.to_le_bytes())?;
    out.write_all(&f.grid().half_width().to_f64().unwrap().to_le_bytes())?;
    for z in f.values() {
        out.write_all(&z.re.to_f64().unwrap().to_le_bytes())?;
        out.write_all(&z.im.to_f64().unwrap().to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> io::Result<Field<f64>> {
    let mut b8 = [0u8; 8];
    input.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    input.read_exact(&mut b8)?;
    let half_width = f64::from_le_bytes(b8);
    let grid = Grid::new(half_width, n)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        input.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        input.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        values.push(Complex::new(re, im));
    }
    Ok(Field::from_values(grid, values))
}

/// Parse a CSV in the `(x, re, im)` layout back into a field on `grid`.
///
/// The x column must match the grid nodes to within half a spacing.
pub fn read_csv<R: Read>(grid: Grid<f64>, input: R) -> io::Result<Field<f64>> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text)?;
    let mut values = Vec::with_capacity(grid.n());
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 3 {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {}: expected x,re,im", lineno + 1),
            ));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
        };
        let x = parse(cols[0])?;
        let i = values.len();
        if i >= grid.n() || (x - grid.node(i)).abs() > 0.5 * grid.dx() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {}: x = {} does not match grid", lineno + 1, x),
            ));
        }
        values.push(Complex::new(parse(cols[1])?, parse(cols[2])?));
    }
    if values.len() != grid.n() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("expected {} rows, got {}", grid.n(), values.len()),
        ));
    }
    Ok(Field::from_values(grid, values))
}
