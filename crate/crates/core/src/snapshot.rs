//! Field snapshot files.
//!
//! A snapshot is a short text header followed by raw binary data:
//!
//! ```text
//! MHDQ-SNAPSHOT 1
//! domain <quarter|half|periodic>
//! n <n1> <n2> <n3>
//! extent <L1> <L2> <L3>
//! time <t>
//! components p u1 u2 u3 H1 H2 H3 S
//! data f64-le <count>
//! ```
//!
//! and then exactly `count = n1 * n2 * n3 * 8` little-endian IEEE-754
//! doubles: interior cells only, row-major with x1 fastest
//! (cell index = (k3 * n2 + k2) * n1 + k1), the eight components
//! interleaved per cell in the fixed order. `extent` holds the quarter-box
//! lengths (L1, L2, L3); the half domain spans [-L3, L3].

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::{DomainKind, Grid};
use crate::state::{NCOMP};

const MAGIC: &str = "MHDQ-SNAPSHOT 1";

/// Quarter-box extents as written in the header: the half domain stores
/// L3 = extent/2 so the round trip through `Grid::new` is exact.
fn header_extents(grid: &Grid<f64>) -> [f64; 3] {
    let mut e = [grid.extent[0], grid.extent[1], grid.extent[2]];
    if grid.domain == DomainKind::Half {
        e[2] /= 2.0;
    }
    e
}

pub fn write_snapshot(path: &Path, field: &Field<f64>, time: f64) -> Result<()> {
    let g = &field.grid;
    let e = header_extents(g);
    let count = g.cell_count() * NCOMP;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "domain {}", g.domain.name())?;
    writeln!(w, "n {} {} {}", g.n[0], g.n[1], g.n[2])?;
    writeln!(w, "extent {:?} {:?} {:?}", e[0], e[1], e[2])?;
    writeln!(w, "time {time:?}")?;
    writeln!(w, "components p u1 u2 u3 H1 H2 H3 S")?;
    writeln!(w, "data f64-le {count}")?;
    for k in 0..g.n[2] as isize {
        for j in 0..g.n[1] as isize {
            for i in 0..g.n[0] as isize {
                let s = field.state(i, j, k);
                for v in s {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn read_line(r: &mut impl Read) -> Result<String> {
    let mut line = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        let n = r.read(&mut byte)?;
        if n == 0 {
            return Err(Error::Snapshot("unexpected end of header".into()));
        }
        if byte[0] == b'\n' {
            break;
        }
        line.push(byte[0]);
        if line.len() > 4096 {
            return Err(Error::Snapshot("header line too long".into()));
        }
    }
    String::from_utf8(line).map_err(|_| Error::Snapshot("header is not UTF-8".into()))
}

pub fn read_snapshot(path: &Path) -> Result<(Field<f64>, f64)> {
    let mut r = BufReader::new(File::open(path)?);
    let magic = read_line(&mut r)?;
    if magic != MAGIC {
        return Err(Error::Snapshot(format!(
            "bad magic line {magic:?}, expected {MAGIC:?}"
        )));
    }
    let mut domain = None;
    let mut n = None;
    let mut extent = None;
    let mut time = None;
    let mut count = None;
    loop {
        let line = read_line(&mut r)?;
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or("");
        let rest: Vec<&str> = parts.collect();
        match key {
            "domain" => {
                domain = Some(DomainKind::parse(rest.first().copied().unwrap_or("")).ok_or_else(
                    || Error::Snapshot(format!("unknown domain {:?}", rest.first())),
                )?);
            }
            "n" => {
                let v: Vec<usize> = rest
                    .iter()
                    .map(|s| s.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Snapshot("bad cell counts".into()))?;
                if v.len() != 3 {
                    return Err(Error::Snapshot("n needs three values".into()));
                }
                n = Some([v[0], v[1], v[2]]);
            }
            "extent" => {
                let v: Vec<f64> = rest
                    .iter()
                    .map(|s| s.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Snapshot("bad extents".into()))?;
                if v.len() != 3 {
                    return Err(Error::Snapshot("extent needs three values".into()));
                }
                extent = Some([v[0], v[1], v[2]]);
            }
            "time" => {
                time = Some(
                    rest.first()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Snapshot("bad time".into()))?,
                );
            }
            "components" => {
                if rest != ["p", "u1", "u2", "u3", "H1", "H2", "H3", "S"] {
                    return Err(Error::Snapshot(format!(
                        "unexpected component order {rest:?}"
                    )));
                }
            }
            "data" => {
                if rest.first() != Some(&"f64-le") {
                    return Err(Error::Snapshot("only f64-le data is supported".into()));
                }
                count = Some(
                    rest.get(1)
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| Error::Snapshot("bad data count".into()))?,
                );
                break;
            }
            other => {
                return Err(Error::Snapshot(format!("unknown header key {other:?}")));
            }
        }
    }
    let domain = domain.ok_or_else(|| Error::Snapshot("missing domain".into()))?;
    let n = n.ok_or_else(|| Error::Snapshot("missing n".into()))?;
    let extent = extent.ok_or_else(|| Error::Snapshot("missing extent".into()))?;
    let time = time.ok_or_else(|| Error::Snapshot("missing time".into()))?;
    let count = count.unwrap();
    let expect = n[0] * n[1] * n[2] * NCOMP;
    if count != expect {
        return Err(Error::Snapshot(format!(
            "data count {count} does not match grid ({expect})"
        )));
    }
    let grid = Grid::new(domain, extent, n)?;
    let mut field = Field::zeros(grid);
    let mut buf = vec![0u8; count * 8];
    r.read_exact(&mut buf)
        .map_err(|_| Error::Snapshot("truncated data section".into()))?;
    let mut idx = 0;
    for k in 0..n[2] as isize {
        for j in 0..n[1] as isize {
            for i in 0..n[0] as isize {
                let mut s = [0.0f64; NCOMP];
                for v in s.iter_mut() {
                    let bytes: [u8; 8] = buf[idx..idx + 8].try_into().unwrap();
                    *v = f64::from_le_bytes(bytes);
                    idx += 8;
                }
                field.set_state(i, j, k, &s);
            }
        }
    }
    Ok((field, time))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::background_vec8;

    #[test]
    fn roundtrip_is_bitwise() {
        let g = Grid::new(DomainKind::Quarter, [1.0, 0.5, 0.75], [6, 3, 4]).unwrap();
        let mut f = Field::constant(g, &background_vec8(1.0));
        let mut x = 0.2_f64;
        let gg = g;
        gg.for_each_cell(|i, j, k| {
            let mut v = f.state(i as isize, j as isize, k as isize);
            for c in v.iter_mut() {
                x = (x * 16807.0).fract();
                *c += 1e-3 * (2.0 * x - 1.0);
            }
            f.set_state(i as isize, j as isize, k as isize, &v);
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.mhdq");
        write_snapshot(&path, &f, 0.375).unwrap();
        let (back, t) = read_snapshot(&path).unwrap();
        assert_eq!(t, 0.375);
        assert_eq!(back.grid, f.grid);
        assert_eq!(back.max_abs_diff(&f), 0.0);
    }

    #[test]
    fn half_domain_roundtrip_preserves_grid() {
        let g = Grid::new(DomainKind::Half, [1.0, 1.0, 0.75], [4, 4, 8]).unwrap();
        let f = Field::constant(g, &background_vec8(2.0));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.mhdq");
        write_snapshot(&path, &f, 1.0).unwrap();
        let (back, _) = read_snapshot(&path).unwrap();
        assert_eq!(back.grid, f.grid);
    }

    #[test]
    fn rejects_corrupted_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.mhdq");
        std::fs::write(&path, b"MHDQ-SNAPSHOT 1\nbogus line\n").unwrap();
        assert!(read_snapshot(&path).is_err());
    }
}
