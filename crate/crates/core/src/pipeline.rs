//! Config-driven evaluation: build the (possibly skewed) field, then derive
//! torque, tooth forces, spectra and summaries from it.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::{
    peak_to_peak, spectrum_space_time, suppression_ratio, torque_spectrum, AmplitudeConvention,
    TimeSpectrum,
};
use crate::io::{read_field_csv, read_slot_path_csv, FieldInput, RunConfig};
use crate::model::{
    AirGapFieldMap, MachineGeometry, SkewConfiguration, SkewStyle, Spectrum2D,
    SpectrumNormalization, ToothForceSeries, ToothPath, TorqueSeries,
};
use crate::mst::{
    torque_total, tooth_forces_one_section, tooth_forces_three_section, SlotPathField,
    FORCE_SIGN_CONVENTION,
};
use crate::skew::{slice_schedule, SliceSchedule};
use crate::synth::{apply_slice_shifts, synthesize, ShiftOptions};

/// How rotor shifts enter the slice fields.
pub const SHIFT_MODEL: &str =
    "slice field = base field at rotor angle advanced by the slice shift; torque orders are mechanical";

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn with_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Unskewed base field: one slice spanning the full axial length.
pub fn base_field(cfg: &RunConfig) -> Result<AirGapFieldMap> {
    let geom = &cfg.geometry;
    match &cfg.input {
        FieldInput::Synthesis(harmonics) => {
            let nt = cfg.grid.time_samples.ok_or_else(|| Error::config("grid.time_samples", "missing"))?;
            let na = cfg.grid.angle_samples.ok_or_else(|| Error::config("grid.angle_samples", "missing"))?;
            synthesize(harmonics, (nt, na), 1, geom)
        }
        FieldInput::FieldMap(path) => {
            let map = with_file(path, read_field_csv(open(path)?))?;
            for (key, want, have) in [
                ("grid.time_samples", cfg.grid.time_samples, map.time_samples()),
                ("grid.angle_samples", cfg.grid.angle_samples, map.angle_samples()),
                ("grid.slices", cfg.grid.slices, map.slice_count()),
            ] {
                if let Some(w) = want {
                    if w != have {
                        return Err(Error::config(
                            key,
                            format!("is {w} but {} has {have}", path.display()),
                        ));
                    }
                }
            }
            map.with_equal_spans(geom.axial_length)
        }
    }
}

/// Field seen by every slice of `skew`.
///
/// A single-slice base is shifted per slice. A multi-slice ingested map is
/// taken as already skewed and must have one slice per schedule entry.
pub fn skewed_field(
    cfg: &RunConfig,
    base: &AirGapFieldMap,
    skew: &SkewConfiguration,
) -> Result<(AirGapFieldMap, SliceSchedule)> {
    let geom = &cfg.geometry;
    let schedule = slice_schedule(skew, geom)?;
    if base.slice_count() > 1 {
        if schedule.len() != base.slice_count() && skew.style != SkewStyle::None {
            return Err(Error::grid(format!(
                "field map has {} slices but the {} schedule has {}",
                base.slice_count(),
                skew.style.as_str(),
                schedule.len()
            )));
        }
        return Ok((base.clone(), schedule));
    }
    if skew.style == SkewStyle::None {
        if let Some(n) = cfg.grid.slices.filter(|&n| n > 1) {
            let plain = SliceSchedule {
                slices: (0..n)
                    .map(|k| crate::skew::SliceShift {
                        slice_index: k,
                        angular_shift: 0.0,
                        axial_span: geom.axial_length / n as f64,
                    })
                    .collect(),
                ..SliceSchedule::unskewed(geom.axial_length, geom.pole_pairs())
            };
            let field = apply_slice_shifts(base, &plain, ShiftOptions::default())?;
            return Ok((field, plain));
        }
    } else if let Some(n) = cfg.grid.slices {
        if n != schedule.len() {
            return Err(Error::config(
                "grid.slices",
                format!("is {n} but the {} schedule has {} slices", skew.style.as_str(), schedule.len()),
            ));
        }
    }
    let opts = ShiftOptions {
        interpolate: cfg.interpolate,
    };
    let field = apply_slice_shifts(base, &schedule, opts)?;
    Ok((field, schedule))
}

/// Everything derived from one configuration.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub field: AirGapFieldMap,
    pub schedule: SliceSchedule,
    pub torque: TorqueSeries,
    pub spectrum: TimeSpectrum,
}

pub fn evaluate(cfg: &RunConfig) -> Result<Evaluated> {
    let base = base_field(cfg)?;
    evaluate_with(cfg, &base, &cfg.skew)
}

/// The same configuration with the skew removed.
pub fn reference_config(cfg: &RunConfig) -> RunConfig {
    RunConfig {
        skew: SkewConfiguration::none(),
        ..cfg.clone()
    }
}

pub fn evaluate_reference(cfg: &RunConfig) -> Result<Evaluated> {
    evaluate(&reference_config(cfg))
}

fn evaluate_with(cfg: &RunConfig, base: &AirGapFieldMap, skew: &SkewConfiguration) -> Result<Evaluated> {
    let (field, schedule) = skewed_field(cfg, base, skew)?;
    let torque = torque_total(&field, &cfg.geometry)?;
    let spectrum = torque_spectrum(&torque)?;
    Ok(Evaluated {
        field,
        schedule,
        torque,
        spectrum,
    })
}

pub fn load_slot_paths(cfg: &RunConfig) -> Result<Option<SlotPathField>> {
    cfg.slot_paths
        .as_ref()
        .map(|p| with_file(p, read_slot_path_csv(open(p)?)))
        .transpose()
}

pub fn tooth_forces(cfg: &RunConfig, field: &AirGapFieldMap) -> Result<ToothForceSeries> {
    let include_bz = cfg.evaluation.include_bz;
    match cfg.evaluation.tooth_path {
        ToothPath::OneSection => tooth_forces_one_section(field, &cfg.geometry, include_bz),
        ToothPath::ThreeSection => {
            let paths = load_slot_paths(cfg)?;
            tooth_forces_three_section(field, paths.as_ref(), &cfg.geometry, include_bz)
        }
    }
}

pub fn tooth_force_spectrum(cfg: &RunConfig, forces: &ToothForceSeries) -> Spectrum2D {
    spectrum_space_time(forces, cfg.evaluation.spectrum_component, cfg.evaluation.spectrum_mode)
}

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SkewEcho {
    pub style: SkewStyle,
    pub segments: u32,
    pub theta_skew_rad: f64,
    pub convention: &'static str,
    pub shifts_rad: Vec<f64>,
    pub spans_m: Vec<f64>,
}

impl SkewEcho {
    fn new(skew: &SkewConfiguration, schedule: &SliceSchedule) -> Self {
        SkewEcho {
            style: skew.style,
            segments: skew.segment_count,
            theta_skew_rad: skew.total_angle,
            convention: schedule.convention(),
            shifts_rad: schedule.shifts(),
            spans_m: schedule.spans(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub force_sign: &'static str,
    pub amplitude: AmplitudeConvention,
    pub spectrum_normalization: SpectrumNormalization,
    pub torque_orders: &'static str,
    pub shift_model: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            force_sign: FORCE_SIGN_CONVENTION,
            amplitude: AmplitudeConvention::OneSided,
            spectrum_normalization: SpectrumNormalization::MeanTwoSided,
            torque_orders: "mechanical",
            shift_model: SHIFT_MODEL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TorqueSummary {
    pub mean: f64,
    pub peak_to_peak: f64,
    pub time_samples: usize,
    /// Amplitude by mechanical order, `null` when the order falls between bins.
    pub orders: BTreeMap<String, Option<f64>>,
}

fn order_key(order: u32) -> String {
    format!("order{order}")
}

fn order_value(spec: &TimeSpectrum, mech: u32) -> Option<f64> {
    spec.bin_for_mechanical(mech as usize)
        .map(|k| spec.amplitudes[k].abs())
}

impl TorqueSummary {
    pub fn new(eval: &Evaluated, orders: &[u32]) -> Self {
        TorqueSummary {
            mean: eval.spectrum.mean(),
            peak_to_peak: peak_to_peak(&eval.torque.values),
            time_samples: eval.torque.len(),
            orders: orders
                .iter()
                .map(|&o| (order_key(o), order_value(&eval.spectrum, o)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TorqueReport {
    pub geometry: MachineGeometry,
    pub skew: SkewEcho,
    pub conventions: Conventions,
    pub torque: TorqueSummary,
}

pub fn torque_report(cfg: &RunConfig, eval: &Evaluated) -> TorqueReport {
    TorqueReport {
        geometry: cfg.geometry.clone(),
        skew: SkewEcho::new(&cfg.skew, &eval.schedule),
        conventions: Conventions::default(),
        torque: TorqueSummary::new(eval, &cfg.evaluation.report_orders),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub geometry: MachineGeometry,
    pub conventions: Conventions,
    pub reference_skew: SkewEcho,
    pub skewed_skew: SkewEcho,
    pub reference: TorqueSummary,
    pub skewed: TorqueSummary,
    /// Skewed over reference amplitude per mechanical order; `null` when the
    /// reference amplitude vanishes or the order is not on a bin.
    pub suppression_ratio: BTreeMap<String, Option<f64>>,
}

/// Skewed-versus-reference comparison. Orders come from the skewed config.
pub fn compare(
    reference_cfg: &RunConfig,
    reference: &Evaluated,
    skewed_cfg: &RunConfig,
    skewed: &Evaluated,
) -> Result<CompareSummary> {
    if reference_cfg.geometry != skewed_cfg.geometry {
        return Err(Error::ConventionMismatch(
            "reference and skewed configurations describe different machines".into(),
        ));
    }
    let orders = &skewed_cfg.evaluation.report_orders;
    let mut ratios = BTreeMap::new();
    for &o in orders {
        let value = match skewed.spectrum.bin_for_mechanical(o as usize) {
            Some(k) => suppression_ratio(&skewed.spectrum, &reference.spectrum, k as i64)?.value(),
            None => None,
        };
        ratios.insert(order_key(o), value);
    }
    Ok(CompareSummary {
        geometry: skewed_cfg.geometry.clone(),
        conventions: Conventions::default(),
        reference_skew: SkewEcho::new(&reference_cfg.skew, &reference.schedule),
        skewed_skew: SkewEcho::new(&skewed_cfg.skew, &skewed.schedule),
        reference: TorqueSummary::new(reference, orders),
        skewed: TorqueSummary::new(skewed, orders),
        suppression_ratio: ratios,
    })
}
