use std::io::{Read, Write};

use ndarray::{Array3, Array4};

use super::fmt_f64;
use crate::error::{Error, Result};
use crate::model::{AirGapFieldMap, FieldSource, Spectrum2D};
use crate::mst::SlotPathField;

pub const FIELD_HEADER: &str = "slice,itime,itheta,Br,Btheta,Bz";
pub const FIELD_HEADER_NO_BZ: &str = "slice,itime,itheta,Br,Btheta";
pub const SLOT_PATH_HEADER: &str = "slice,itime,islot,ir,Br,Btheta,Bz";
pub const SPECTRUM_HEADER: &str = "m,n,amplitude,phase";

/// Dense index grid parsed from an index-based CSV table.
struct DenseTable {
    dims: Vec<usize>,
    /// One row-major array per value column.
    columns: Vec<Vec<f64>>,
    last_column_present: bool,
}

fn read_text<R: Read>(mut source: R) -> Result<String> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    String::from_utf8(bytes).map_err(|e| Error::parse(0, format!("input is not valid UTF-8: {e}")))
}

/// Splits into numbered lines, rejecting carriage returns and tolerating a
/// single trailing newline.
fn numbered_lines(text: &str) -> Result<Vec<(usize, &str)>> {
    let mut lines: Vec<(usize, &str)> = text.split('\n').enumerate().map(|(i, l)| (i + 1, l)).collect();
    if let Some((_, last)) = lines.last() {
        if last.is_empty() {
            lines.pop();
        }
    }
    for (n, l) in &lines {
        if l.contains('\r') {
            return Err(Error::parse(*n, "carriage return found; files must use LF line endings"));
        }
    }
    Ok(lines)
}

fn parse_index(field: &str, name: &str, line: usize) -> Result<usize> {
    field
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("column `{name}` must be a non-negative integer, found `{field}`")))
}

fn parse_value(field: &str, name: &str, line: usize) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("column `{name}` is not a decimal number: `{field}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("column `{name}` is not finite: `{field}`")));
    }
    Ok(v)
}

fn read_dense(text: &str, index_names: &[&str], value_names: &[&str], last_optional: bool) -> Result<DenseTable> {
    let lines = numbered_lines(text)?;
    let full: Vec<&str> = index_names.iter().chain(value_names).copied().collect();
    let full_header = full.join(",");
    let short_header = full[..full.len() - 1].join(",");
    let Some(&(_, header)) = lines.first() else {
        return Err(Error::parse(1, format!("empty input; expected header `{full_header}`")));
    };
    let last_column_present = if header == full_header {
        true
    } else if last_optional && header == short_header {
        false
    } else {
        return Err(Error::parse(1, format!("header must be `{full_header}`, found `{header}`")));
    };
    let ni = index_names.len();
    let nv = if last_column_present { value_names.len() } else { value_names.len() - 1 };
    let names: Vec<&str> = full[..ni + nv].to_vec();

    let mut rows: Vec<(Vec<usize>, Vec<f64>, usize)> = Vec::with_capacity(lines.len());
    for &(line, text) in &lines[1..] {
        if text.is_empty() {
            return Err(Error::parse(line, "blank line inside data"));
        }
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != ni + nv {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", ni + nv, fields.len()),
            ));
        }
        let idx = fields[..ni]
            .iter()
            .zip(&names)
            .map(|(f, n)| parse_index(f, n, line))
            .collect::<Result<Vec<_>>>()?;
        let vals = fields[ni..]
            .iter()
            .zip(&names[ni..])
            .map(|(f, n)| parse_value(f, n, line))
            .collect::<Result<Vec<_>>>()?;
        rows.push((idx, vals, line));
    }
    if rows.is_empty() {
        return Err(Error::parse(2, "no data rows"));
    }

    let mut dims = vec![0usize; ni];
    for (idx, _, _) in &rows {
        for (d, &i) in dims.iter_mut().zip(idx) {
            *d = (*d).max(i + 1);
        }
    }
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    let total = match total {
        Some(t) if t <= 1 << 31 => t,
        _ => return Err(Error::parse(0, format!("index ranges {dims:?} are too large"))),
    };
    let flat = |idx: &[usize]| idx.iter().zip(&dims).fold(0usize, |acc, (&i, &d)| acc * d + i);

    let mut seen = vec![0usize; total];
    let mut columns = vec![vec![0.0; total]; nv];
    for (idx, vals, line) in &rows {
        let k = flat(idx);
        if seen[k] != 0 {
            return Err(Error::parse(
                *line,
                format!("duplicate index {} (first seen on line {})", describe(index_names, idx), seen[k]),
            ));
        }
        seen[k] = *line;
        for (c, v) in columns.iter_mut().zip(vals) {
            c[k] = *v;
        }
    }
    if rows.len() != total {
        let missing = seen.iter().position(|&s| s == 0).expect("gap exists");
        let mut idx = vec![0usize; ni];
        let mut rem = missing;
        for (slot, &d) in idx.iter_mut().zip(&dims).rev() {
            *slot = rem % d;
            rem /= d;
        }
        let end = lines.last().map(|l| l.0).unwrap_or(1);
        return Err(Error::parse(
            end,
            format!("missing row for index {}", describe(index_names, &idx)),
        ));
    }
    Ok(DenseTable {
        dims,
        columns,
        last_column_present,
    })
}

fn describe(names: &[&str], idx: &[usize]) -> String {
    let parts: Vec<String> = names.iter().zip(idx).map(|(n, i)| format!("{n}={i}")).collect();
    format!("({})", parts.join(", "))
}

/// Reads a field map. Slices receive equal axial spans summing to 1 m; call
/// [`AirGapFieldMap::with_equal_spans`] with the machine length before use.
pub fn read_field_csv<R: Read>(source: R) -> Result<AirGapFieldMap> {
    let text = read_text(source)?;
    let table = read_dense(&text, &["slice", "itime", "itheta"], &["Br", "Btheta", "Bz"], true)?;
    let shape = (table.dims[0], table.dims[1], table.dims[2]);
    let mut cols = table.columns.into_iter();
    let to_arr = |v: Vec<f64>| Array3::from_shape_vec(shape, v).expect("dense table has the grid size");
    let br = to_arr(cols.next().unwrap());
    let bt = to_arr(cols.next().unwrap());
    let bz = match cols.next() {
        Some(v) => to_arr(v),
        None => Array3::zeros(shape),
    };
    let spans = vec![1.0 / shape.0 as f64; shape.0];
    AirGapFieldMap::new(
        br,
        bt,
        bz,
        spans,
        FieldSource::Ingested {
            bz_absent: !table.last_column_present,
        },
    )
    .map_err(|e| Error::parse(1, format!("field map rejected: {e}")))
}

struct Counted<W> {
    inner: W,
    bytes: usize,
}

impl<W: Write> Counted<W> {
    fn line(&mut self, s: &str) -> Result<()> {
        self.inner.write_all(s.as_bytes())?;
        self.inner.write_all(b"\n")?;
        self.bytes += s.len() + 1;
        Ok(())
    }
}

/// Writes a field map in index order; returns the number of bytes written.
pub fn write_field_csv<W: Write>(field: &AirGapFieldMap, sink: W) -> Result<usize> {
    let mut out = Counted { inner: sink, bytes: 0 };
    out.line(FIELD_HEADER)?;
    let (br, bt, bz) = (field.br(), field.btheta(), field.bz());
    for s in 0..field.slice_count() {
        for t in 0..field.time_samples() {
            for a in 0..field.angle_samples() {
                out.line(&format!(
                    "{s},{t},{a},{},{},{}",
                    fmt_f64(br[[s, t, a]]),
                    fmt_f64(bt[[s, t, a]]),
                    fmt_f64(bz[[s, t, a]])
                ))?;
            }
        }
    }
    out.inner.flush()?;
    Ok(out.bytes)
}

pub fn read_slot_path_csv<R: Read>(source: R) -> Result<SlotPathField> {
    let text = read_text(source)?;
    let table = read_dense(
        &text,
        &["slice", "itime", "islot", "ir"],
        &["Br", "Btheta", "Bz"],
        false,
    )?;
    let shape = (table.dims[0], table.dims[1], table.dims[2], table.dims[3]);
    let mut cols = table.columns.into_iter();
    let to_arr = |v: Vec<f64>| Array4::from_shape_vec(shape, v).expect("dense table has the grid size");
    let br = to_arr(cols.next().unwrap());
    let bt = to_arr(cols.next().unwrap());
    let bz = to_arr(cols.next().unwrap());
    SlotPathField::new(br, bt, bz).map_err(|e| Error::parse(1, format!("slot paths rejected: {e}")))
}

pub fn write_slot_path_csv<W: Write>(paths: &SlotPathField, sink: W) -> Result<usize> {
    let mut out = Counted { inner: sink, bytes: 0 };
    out.line(SLOT_PATH_HEADER)?;
    let (s, t, b, r) = paths.shape();
    for is in 0..s {
        for it in 0..t {
            for ib in 0..b {
                for ir in 0..r {
                    let k = [is, it, ib, ir];
                    out.line(&format!(
                        "{is},{it},{ib},{ir},{},{},{}",
                        fmt_f64(paths.br[k]),
                        fmt_f64(paths.btheta[k]),
                        fmt_f64(paths.bz[k])
                    ))?;
                }
            }
        }
    }
    out.inner.flush()?;
    Ok(out.bytes)
}

/// One line of a spectrum table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub m: i64,
    pub n: i64,
    pub amplitude: f64,
    pub phase: f64,
}

/// Half-plane rows of a 2D spectrum with pair amplitudes.
pub fn spectrum_rows(spectrum: &Spectrum2D) -> Vec<SpectrumRow> {
    spectrum
        .half_plane_orders()
        .into_iter()
        .map(|(m, n)| SpectrumRow {
            m,
            n,
            amplitude: spectrum.pair_amplitude(m, n),
            phase: spectrum.coeff(m, n).arg(),
        })
        .collect()
}

pub fn write_spectrum_csv<W: Write>(rows: &[SpectrumRow], sink: W) -> Result<usize> {
    let mut out = Counted { inner: sink, bytes: 0 };
    out.line(SPECTRUM_HEADER)?;
    for r in rows {
        out.line(&format!("{},{},{},{}", r.m, r.n, fmt_f64(r.amplitude), fmt_f64(r.phase)))?;
    }
    out.inner.flush()?;
    Ok(out.bytes)
}

pub fn read_spectrum_csv<R: Read>(source: R) -> Result<Vec<SpectrumRow>> {
    let text = read_text(source)?;
    let lines = numbered_lines(&text)?;
    match lines.first() {
        Some(&(_, h)) if h == SPECTRUM_HEADER => {}
        Some(&(_, h)) => {
            return Err(Error::parse(1, format!("header must be `{SPECTRUM_HEADER}`, found `{h}`")))
        }
        None => return Err(Error::parse(1, "empty input")),
    }
    lines[1..]
        .iter()
        .map(|&(line, text)| {
            let f: Vec<&str> = text.split(',').collect();
            if f.len() != 4 {
                return Err(Error::parse(line, format!("expected 4 fields, found {}", f.len())));
            }
            let int = |s: &str, name: &str| {
                s.parse::<i64>()
                    .map_err(|_| Error::parse(line, format!("column `{name}` must be an integer, found `{s}`")))
            };
            Ok(SpectrumRow {
                m: int(f[0], "m")?,
                n: int(f[1], "n")?,
                amplitude: parse_value(f[2], "amplitude", line)?,
                phase: parse_value(f[3], "phase", line)?,
            })
        })
        .collect()
}
