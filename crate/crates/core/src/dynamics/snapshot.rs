use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;

use super::diagnostics::DiagnosticRow;
use super::grid::Grid;
use super::{DynamicsError, FieldState};
use crate::clifford::Spinor;

pub const SNAPSHOT_MAGIC: &str = "NLDIRAC1";
pub const SERIES_HEADER: &str = "t,Q,s_int,p_int,residual";

fn io_err(e: std::io::Error) -> DynamicsError {
    DynamicsError::Format(e.to_string())
}

/// Writes the text header line followed by little-endian `f64` pairs
/// `(re, im)` for each component of each point.
pub fn write_snapshot(state: &FieldState, mut out: impl Write) -> Result<(), DynamicsError> {
    let (n, l) = state.grid.header_lists();
    writeln!(
        out,
        "{SNAPSHOT_MAGIC} dims={} n={n} L={l} t={:e}",
        state.grid.dims(),
        state.time
    )
    .map_err(io_err)?;
    let mut bytes = Vec::with_capacity(state.values.len() * 64);
    for v in &state.values {
        for c in &v.0 {
            bytes.extend_from_slice(&c.re.to_le_bytes());
            bytes.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    out.write_all(&bytes).map_err(io_err)
}

fn parse_list<T: std::str::FromStr>(text: &str, field: &str) -> Result<Vec<T>, DynamicsError> {
    text.split(',')
        .map(|t| {
            t.parse()
                .map_err(|_| DynamicsError::Format(format!("bad {field} entry {t:?}")))
        })
        .collect()
}

pub fn read_snapshot(input: impl Read) -> Result<FieldState, DynamicsError> {
    let mut reader = BufReader::new(input);
    let mut header = String::new();
    reader.read_line(&mut header).map_err(io_err)?;
    let mut words = header.trim_end_matches('\n').split(' ');
    if words.next() != Some(SNAPSHOT_MAGIC) {
        return Err(DynamicsError::Format("missing NLDIRAC1 magic".into()));
    }
    let mut field = |key: &str| -> Result<String, DynamicsError> {
        words
            .next()
            .and_then(|w| w.strip_prefix(key))
            .and_then(|w| w.strip_prefix('='))
            .map(str::to_owned)
            .ok_or_else(|| DynamicsError::Format(format!("header field {key} missing")))
    };
    let dims: usize = field("dims")?
        .parse()
        .map_err(|_| DynamicsError::Format("bad dims".into()))?;
    let points: Vec<usize> = parse_list(&field("n")?, "n")?;
    let lengths: Vec<f64> = parse_list(&field("L")?, "L")?;
    let time: f64 = field("t")?
        .parse()
        .map_err(|_| DynamicsError::Format("bad t".into()))?;
    if points.len() != dims {
        return Err(DynamicsError::Format(format!("dims={dims} but {} point counts", points.len())));
    }
    let grid = Grid::new(&points, &lengths).map_err(|e| DynamicsError::Format(e.to_string()))?;

    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(io_err)?;
    let expected = grid.len() * 64;
    if bytes.len() != expected {
        return Err(DynamicsError::Format(format!(
            "payload has {} bytes, expected {expected}",
            bytes.len()
        )));
    }
    let num = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().unwrap());
    let values = (0..grid.len())
        .map(|p| Spinor(std::array::from_fn(|c| Complex64::new(num(8 * p + 2 * c), num(8 * p + 2 * c + 1)))))
        .collect();
    FieldState::new(grid, time, values)
}

/// CSV writer for [`DiagnosticRow`]s with 17 significant digits per number.
pub struct SeriesWriter<W: Write> {
    out: W,
}

impl<W: Write> SeriesWriter<W> {
    pub fn new(mut out: W) -> Result<Self, DynamicsError> {
        writeln!(out, "{SERIES_HEADER}").map_err(io_err)?;
        Ok(Self { out })
    }

    pub fn write_row(&mut self, row: &DiagnosticRow) -> Result<(), DynamicsError> {
        writeln!(
            self.out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.t, row.charge, row.s_int, row.p_int, row.residual
        )
        .map_err(io_err)?;
        self.out.flush().map_err(io_err)
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{make_gaussian, Grid};

    #[test]
    fn snapshot_round_trip_1d_and_3d() {
        for grid in [
            Grid::line(32, 16.0).unwrap(),
            Grid::new(&[8, 8, 16], &[1.5, 2.0, 0.1]).unwrap(),
        ] {
            let center = vec![0.3; grid.dims()];
            let k = vec![1; grid.dims()];
            let mut s = make_gaussian(&grid, &center, 0.7, 2, &k).unwrap();
            s.time = 0.1 + 0.2;
            let mut buf = Vec::new();
            write_snapshot(&s, &mut buf).unwrap();
            let header_end = buf.iter().position(|&b| b == b'\n').unwrap();
            let header = std::str::from_utf8(&buf[..header_end]).unwrap();
            assert!(header.starts_with(&format!("NLDIRAC1 dims={} n=", grid.dims())));
            assert_eq!(buf.len() - header_end - 1, grid.len() * 64);
            assert_eq!(read_snapshot(buf.as_slice()).unwrap(), s);
        }
    }

    #[test]
    fn header_matches_format() {
        let s = FieldState::zeros(Grid::line(8, 2.5).unwrap(), 0.0);
        let mut buf = Vec::new();
        write_snapshot(&s, &mut buf).unwrap();
        assert!(buf.starts_with(b"NLDIRAC1 dims=1 n=8 L=2.5 t=0e0\n"));
    }

    #[test]
    fn truncated_snapshot_is_rejected() {
        let s = FieldState::zeros(Grid::line(8, 1.0).unwrap(), 0.0);
        let mut buf = Vec::new();
        write_snapshot(&s, &mut buf).unwrap();
        buf.pop();
        assert!(matches!(read_snapshot(buf.as_slice()), Err(DynamicsError::Format(_))));
        assert!(read_snapshot(&b"NLDIRAC2 dims=1\n"[..]).is_err());
    }

    #[test]
    fn series_rows_round_trip_exactly() {
        let row = DiagnosticRow {
            t: 0.1,
            charge: 1.0 / 3.0,
            s_int: -2.0f64.sqrt(),
            p_int: 1e-300,
            residual: 7.123456789012345e-9,
        };
        let mut w = SeriesWriter::new(Vec::new()).unwrap();
        w.write_row(&row).unwrap();
        let text = String::from_utf8(w.into_inner()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SERIES_HEADER));
        let nums: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(nums, vec![row.t, row.charge, row.s_int, row.p_int, row.residual]);
    }
}
