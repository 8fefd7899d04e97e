//! CSV export of subtile point sets: `letter,x1,...,x_k`, one row per point,
//! letters numbered from 1, floats with 17 significant digits.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::points::PointSet;

pub fn write_csv<W: Write>(mut w: W, tiles: &[PointSet]) -> std::io::Result<()> {
    let dim = tiles.first().map_or(0, PointSet::dim);
    let header: Vec<String> = std::iter::once("letter".to_string())
        .chain((1..=dim).map(|k| format!("x{k}")))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for (letter, tile) in tiles.iter().enumerate() {
        for p in tile.iter() {
            write!(w, "{}", letter + 1)?;
            for x in p {
                write!(w, ",{x:.16e}")?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Reads back what [`write_csv`] writes; `d` is the number of subtiles.
pub fn read_csv<R: BufRead>(r: R, d: usize) -> Result<Vec<PointSet>> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty CSV"))?;
    let header = header.map_err(|e| Error::Input(e.to_string()))?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    if cols.first() != Some(&"letter") || cols.len() < 2 {
        return Err(Error::parse(1, "header must be `letter,x1,...`"));
    }
    let dim = cols.len() - 1;
    let mut tiles = vec![PointSet::new(dim); d];
    let mut p = vec![0.0; dim];
    for (i, line) in lines {
        let line = line.map_err(|e| Error::Input(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.trim().split(',');
        let letter: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .filter(|&l| (1..=d).contains(&l))
            .ok_or_else(|| Error::parse(i + 1, format!("bad letter in `{line}`")))?;
        for x in p.iter_mut() {
            *x = fields
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(i + 1, format!("bad coordinate in `{line}`")))?;
        }
        if fields.next().is_some() {
            return Err(Error::parse(i + 1, "too many fields"));
        }
        tiles[letter - 1].push(&p);
    }
    Ok(tiles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let tiles = vec![
            PointSet::from_flat(2, vec![0.1, -1.0 / 3.0, 1e-300, 2.5e10]).unwrap(),
            PointSet::new(2),
            PointSet::from_flat(2, vec![std::f64::consts::PI, -0.0]).unwrap(),
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &tiles).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("letter,x1,x2\n1,1.0000000000000001e-1,"));
        let back = read_csv(&buf[..], 3).unwrap();
        assert_eq!(back, tiles);
        assert!(read_csv(&b"letter,x1\n4,0.0\n"[..], 3).is_err());
        assert!(read_csv(&b"id,x1\n"[..], 3).is_err());
    }
}
