//! File formats: field-map and slot-path CSV, spectrum CSV, the run
//! configuration text format and the JSON summary writer.
//!
//! All text is UTF-8 with LF line endings and `.` as decimal separator.
//! Floating-point values are written with 17 significant digits so every
//! `f64` survives a write/read cycle unchanged.

pub mod config;
mod field_csv;
mod summary;

pub use config::{apply_overrides, parse_config, parse_config_with, FieldInput, GridSpec, ParseOptions, RunConfig};
pub use field_csv::{
    read_field_csv, read_slot_path_csv, read_spectrum_csv, spectrum_rows, write_field_csv,
    write_slot_path_csv, write_spectrum_csv, SpectrumRow, FIELD_HEADER, FIELD_HEADER_NO_BZ,
    SLOT_PATH_HEADER, SPECTRUM_HEADER,
};
pub use summary::write_summary_json;

/// Formats an `f64` with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
