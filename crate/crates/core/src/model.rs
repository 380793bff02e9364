//! Shared domain types: machine geometry, skew configuration, sampled
//! air-gap fields, tooth windows and the result containers produced by the
//! force and spectrum evaluations.
//!
//! All types are immutable after construction and can be shared freely
//! between worker threads.

use std::f64::consts::{PI, TAU};
use std::fmt;

use ndarray::{Array2, Array3, ArrayView2};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::synth::FieldHarmonic;

/// Vacuum permeability in H/m, fixed to the pre-2019 exact value used by FE tools.
pub const MU_0: f64 = 4.0 * PI * 1e-7;

/// Relative tolerance for grid-spacing and diameter consistency checks.
pub const GEOMETRY_RTOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Validation report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

/// Collected invariant violations. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, field: &'static str, message: impl Into<String>) {
        self.violations.push(Violation {
            field,
            message: message.into(),
        });
    }

    pub fn contains(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.message.contains(needle))
    }

    /// Turns a non-empty report into an invalid-argument error.
    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(self.to_string()))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.field, v.message))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Machine dimensions needed by the torque and force integrals. Lengths in meters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MachineGeometry {
    pub pole_count: u32,
    pub slot_count: u32,
    pub airgap_radius: f64,
    pub rotor_radius: f64,
    pub axial_length: f64,
    pub rotor_diameter: f64,
    pub slot_bottom_radius: f64,
}

impl MachineGeometry {
    pub fn pole_pairs(&self) -> u32 {
        self.pole_count / 2
    }

    pub fn slot_pitch(&self) -> f64 {
        TAU / self.slot_count as f64
    }

    pub fn validate(&self) -> ValidationReport {
        validate_geometry(self)
    }
}

/// Checks every geometry invariant and lists the ones that fail.
pub fn validate_geometry(geom: &MachineGeometry) -> ValidationReport {
    let mut report = ValidationReport::default();
    if geom.pole_count < 2 {
        report.push("pole_count", "pole count must be at least 2");
    }
    if !geom.pole_count.is_multiple_of(2) {
        report.push("pole_count", "pole count must be even");
    }
    if geom.slot_count < 1 {
        report.push("slot_count", "slot count must be at least 1");
    }
    let lengths = [
        ("airgap_radius", geom.airgap_radius),
        ("rotor_radius", geom.rotor_radius),
        ("axial_length", geom.axial_length),
        ("rotor_diameter", geom.rotor_diameter),
        ("slot_bottom_radius", geom.slot_bottom_radius),
    ];
    for (name, value) in lengths {
        if !(value.is_finite() && value > 0.0) {
            report.push(name, format!("must be a positive finite length, got {value}"));
        }
    }
    if geom.airgap_radius < geom.rotor_radius {
        report.push("airgap_radius", "air gap radius below rotor radius");
    }
    if geom.slot_bottom_radius <= geom.airgap_radius {
        report.push(
            "slot_bottom_radius",
            "slot bottom radius must exceed the air gap radius",
        );
    }
    let two_r = 2.0 * geom.rotor_radius;
    if (geom.rotor_diameter - two_r).abs() > GEOMETRY_RTOL * two_r.abs().max(f64::MIN_POSITIVE) {
        report.push(
            "rotor_diameter",
            format!(
                "rotor diameter {} disagrees with twice the rotor radius {}",
                geom.rotor_diameter, two_r
            ),
        );
    }
    report
}

/// Angular extent of one stator tooth for the one-section force evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToothWindow {
    pub tooth_index: usize,
    pub center_angle: f64,
    pub width: f64,
}

impl ToothWindow {
    pub fn start(&self) -> f64 {
        self.center_angle - 0.5 * self.width
    }

    pub fn end(&self) -> f64 {
        self.center_angle + 0.5 * self.width
    }
}

/// One window per tooth. Tooth `k` is centered at `(k + 1/2)` slot pitches so
/// that window boundaries coincide with slot centers at multiples of the pitch.
pub fn tooth_windows(geom: &MachineGeometry) -> Vec<ToothWindow> {
    let n = geom.slot_count as usize;
    let width = TAU / n as f64;
    (0..n)
        .map(|k| ToothWindow {
            tooth_index: k,
            center_angle: (k as f64 + 0.5) * TAU / n as f64,
            width,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Skew configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkewStyle {
    None,
    Step,
    Vee,
    Continuous,
}

impl SkewStyle {
    pub fn as_str(&self) -> &'static str {
        match self {
            SkewStyle::None => "none",
            SkewStyle::Step => "step",
            SkewStyle::Vee => "vee",
            SkewStyle::Continuous => "continuous",
        }
    }
}

impl std::str::FromStr for SkewStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SkewStyle::None),
            "step" => Ok(SkewStyle::Step),
            "vee" | "v" => Ok(SkewStyle::Vee),
            "continuous" => Ok(SkewStyle::Continuous),
            other => Err(Error::invalid(format!(
                "unknown skew style `{other}` (expected none, step, vee or continuous)"
            ))),
        }
    }
}

pub const DEFAULT_CONTINUOUS_RESOLUTION: u32 = 32;

/// How the rotor magnets are staggered along the axis. The total angle is a
/// rotor (mechanical) angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SkewConfiguration {
    pub style: SkewStyle,
    pub segment_count: u32,
    pub total_angle: f64,
    pub continuous_resolution: u32,
}

impl SkewConfiguration {
    pub fn none() -> Self {
        SkewConfiguration {
            style: SkewStyle::None,
            segment_count: 1,
            total_angle: 0.0,
            continuous_resolution: DEFAULT_CONTINUOUS_RESOLUTION,
        }
    }

    pub fn step(segment_count: u32, total_angle: f64) -> Self {
        SkewConfiguration {
            style: SkewStyle::Step,
            segment_count,
            total_angle,
            continuous_resolution: DEFAULT_CONTINUOUS_RESOLUTION,
        }
    }

    pub fn vee(segment_count: u32, total_angle: f64) -> Self {
        SkewConfiguration {
            style: SkewStyle::Vee,
            segment_count,
            total_angle,
            continuous_resolution: DEFAULT_CONTINUOUS_RESOLUTION,
        }
    }

    pub fn continuous(total_angle: f64, resolution: u32) -> Self {
        SkewConfiguration {
            style: SkewStyle::Continuous,
            segment_count: 1,
            total_angle,
            continuous_resolution: resolution,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.segment_count < 1 {
            report.push("segment_count", "segment count must be at least 1");
        }
        if !(self.total_angle.is_finite() && self.total_angle >= 0.0) {
            report.push("total_angle", "skew angle must be finite and non-negative");
        }
        if self.continuous_resolution < 8 {
            report.push(
                "continuous_resolution",
                "continuous resolution must be at least 8 slices",
            );
        }
        match self.style {
            SkewStyle::None => {
                if self.segment_count != 1 {
                    report.push("segment_count", "unskewed rotor must have exactly one segment");
                }
                if self.total_angle != 0.0 {
                    report.push("total_angle", "unskewed rotor must have zero skew angle");
                }
            }
            SkewStyle::Vee => {
                if self.segment_count < 2 {
                    report.push("segment_count", "V-skew needs at least two segments");
                }
            }
            SkewStyle::Step | SkewStyle::Continuous => {}
        }
        report
    }
}

// ---------------------------------------------------------------------------
// Air-gap field map
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldComponent {
    Radial,
    Tangential,
    Axial,
}

impl FieldComponent {
    pub const ALL: [FieldComponent; 3] = [
        FieldComponent::Radial,
        FieldComponent::Tangential,
        FieldComponent::Axial,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FieldComponent::Radial => "radial",
            FieldComponent::Tangential => "tangential",
            FieldComponent::Axial => "axial",
        }
    }
}

impl std::str::FromStr for FieldComponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radial" | "r" => Ok(FieldComponent::Radial),
            "tangential" | "azimuthal" | "theta" | "t" => Ok(FieldComponent::Tangential),
            "axial" | "z" => Ok(FieldComponent::Axial),
            other => Err(Error::invalid(format!(
                "unknown field component `{other}` (expected radial, tangential or axial)"
            ))),
        }
    }
}

/// Where a field map's samples came from. Synthetic maps keep their harmonic
/// table so shifts can be applied exactly in phase space.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSource {
    /// Sampled from a harmonic series; every slice holds the same unshifted field.
    Synthetic(Vec<FieldHarmonic>),
    /// Read from a file. `bz_absent` marks maps whose axial column was missing.
    Ingested { bz_absent: bool },
    /// Produced by a shift or other per-slice transformation.
    Derived { bz_absent: bool },
    /// Length-weighted mean over slices (approximation of slice-wise force sums).
    Averaged { bz_absent: bool },
}

/// A uniform periodic sample grid: `count` points spaced `period / count`
/// starting at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub count: usize,
    pub period: f64,
}

impl UniformGrid {
    pub fn new(count: usize, period: f64) -> Self {
        UniformGrid { count, period }
    }

    pub fn step(&self) -> f64 {
        self.period / self.count as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.period * i as f64 / self.count as f64
    }

    /// Largest relative deviation of successive spacings from the nominal step.
    pub fn spacing_deviation(samples: &[f64], period: f64) -> f64 {
        if samples.len() < 2 {
            return 0.0;
        }
        let step = period / samples.len() as f64;
        let mut worst: f64 = 0.0;
        for i in 0..samples.len() {
            let next = if i + 1 < samples.len() {
                samples[i + 1]
            } else {
                samples[0] + period
            };
            worst = worst.max(((next - samples[i]) - step).abs() / step);
        }
        worst
    }

    /// Accepts explicit coordinates only if they form a uniform periodic grid
    /// starting at zero.
    pub fn from_samples(samples: &[f64], period: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::grid("empty coordinate list"));
        }
        if samples[0].abs() > GEOMETRY_RTOL * period {
            return Err(Error::grid(format!(
                "grid must start at zero, first coordinate is {}",
                samples[0]
            )));
        }
        let dev = Self::spacing_deviation(samples, period);
        if dev > GEOMETRY_RTOL {
            return Err(Error::grid(format!(
                "non-uniform grid: spacing deviates by {dev:e} relative"
            )));
        }
        Ok(UniformGrid::new(samples.len(), period))
    }
}

/// Sampled air-gap flux density on a cylindrical evaluation surface.
///
/// Arrays are indexed `(slice, time, angle)`. The angle grid covers `[0, 2π)`
/// mechanically; the time grid covers one electrical period and is stored as
/// a fraction of that period.
#[derive(Debug, Clone, PartialEq)]
pub struct AirGapFieldMap {
    br: Array3<f64>,
    btheta: Array3<f64>,
    bz: Array3<f64>,
    axial_spans: Vec<f64>,
    source: FieldSource,
}

pub const MIN_TIME_SAMPLES: usize = 4;
pub const MIN_ANGLE_SAMPLES: usize = 8;

impl AirGapFieldMap {
    pub fn new(
        br: Array3<f64>,
        btheta: Array3<f64>,
        bz: Array3<f64>,
        axial_spans: Vec<f64>,
        source: FieldSource,
    ) -> Result<Self> {
        let shape = br.shape().to_vec();
        if btheta.shape() != shape.as_slice() || bz.shape() != shape.as_slice() {
            return Err(Error::grid(format!(
                "component shapes differ: Br {:?}, Btheta {:?}, Bz {:?}",
                br.shape(),
                btheta.shape(),
                bz.shape()
            )));
        }
        let (slices, nt, na) = (shape[0], shape[1], shape[2]);
        if slices < 1 {
            return Err(Error::invalid("field map needs at least one slice"));
        }
        if nt < MIN_TIME_SAMPLES {
            return Err(Error::invalid(format!(
                "field map needs at least {MIN_TIME_SAMPLES} time samples, got {nt}"
            )));
        }
        if na < MIN_ANGLE_SAMPLES {
            return Err(Error::invalid(format!(
                "field map needs at least {MIN_ANGLE_SAMPLES} angle samples, got {na}"
            )));
        }
        if axial_spans.len() != slices {
            return Err(Error::invalid(format!(
                "{} axial spans given for {} slices",
                axial_spans.len(),
                slices
            )));
        }
        if axial_spans.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::invalid("axial spans must be positive and finite"));
        }
        for (name, arr) in [("Br", &br), ("Btheta", &btheta), ("Bz", &bz)] {
            if arr.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("{name} contains non-finite samples")));
            }
        }
        Ok(AirGapFieldMap {
            br,
            btheta,
            bz,
            axial_spans,
            source,
        })
    }

    /// Builds a map from explicit angle and time coordinates, rejecting grids
    /// that are not uniform. Time coordinates are fractions of one period.
    pub fn with_coordinates(
        angles: &[f64],
        times: &[f64],
        br: Array3<f64>,
        btheta: Array3<f64>,
        bz: Array3<f64>,
        axial_spans: Vec<f64>,
        source: FieldSource,
    ) -> Result<Self> {
        let ag = UniformGrid::from_samples(angles, TAU)?;
        let tg = UniformGrid::from_samples(times, 1.0)?;
        if ag.count != br.shape()[2] || tg.count != br.shape()[1] {
            return Err(Error::grid("coordinate counts do not match the sample arrays"));
        }
        Self::new(br, btheta, bz, axial_spans, source)
    }

    pub fn slice_count(&self) -> usize {
        self.br.shape()[0]
    }

    pub fn time_samples(&self) -> usize {
        self.br.shape()[1]
    }

    pub fn angle_samples(&self) -> usize {
        self.br.shape()[2]
    }

    pub fn angle_grid(&self) -> UniformGrid {
        UniformGrid::new(self.angle_samples(), TAU)
    }

    pub fn time_grid(&self) -> UniformGrid {
        UniformGrid::new(self.time_samples(), 1.0)
    }

    pub fn angle_step(&self) -> f64 {
        TAU / self.angle_samples() as f64
    }

    pub fn component(&self, c: FieldComponent) -> &Array3<f64> {
        match c {
            FieldComponent::Radial => &self.br,
            FieldComponent::Tangential => &self.btheta,
            FieldComponent::Axial => &self.bz,
        }
    }

    pub fn br(&self) -> &Array3<f64> {
        &self.br
    }

    pub fn btheta(&self) -> &Array3<f64> {
        &self.btheta
    }

    pub fn bz(&self) -> &Array3<f64> {
        &self.bz
    }

    /// `(time, angle)` view of one component of one slice.
    pub fn slice_component(&self, slice: usize, c: FieldComponent) -> ArrayView2<'_, f64> {
        self.component(c).index_axis(ndarray::Axis(0), slice)
    }

    pub fn axial_spans(&self) -> &[f64] {
        &self.axial_spans
    }

    pub fn total_length(&self) -> f64 {
        self.axial_spans.iter().sum()
    }

    pub fn source(&self) -> &FieldSource {
        &self.source
    }

    pub fn bz_absent(&self) -> bool {
        match &self.source {
            FieldSource::Synthetic(_) => false,
            FieldSource::Ingested { bz_absent }
            | FieldSource::Derived { bz_absent }
            | FieldSource::Averaged { bz_absent } => *bz_absent,
        }
    }

    /// Replaces the axial spans with equal shares of `axial_length`.
    pub fn with_equal_spans(mut self, axial_length: f64) -> Result<Self> {
        if !(axial_length.is_finite() && axial_length > 0.0) {
            return Err(Error::invalid("axial length must be positive"));
        }
        let n = self.slice_count();
        self.axial_spans = vec![axial_length / n as f64; n];
        Ok(self)
    }

    /// Fails unless the slice spans add up to `axial_length` (1e-9 relative).
    pub fn check_spans(&self, axial_length: f64) -> Result<()> {
        let total = self.total_length();
        if (total - axial_length).abs() > 1e-9 * axial_length.abs() {
            return Err(Error::invalid(format!(
                "slice axial spans sum to {total} m but the machine length is {axial_length} m"
            )));
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn into_parts(self) -> (Array3<f64>, Array3<f64>, Array3<f64>, Vec<f64>, FieldSource) {
        (self.br, self.btheta, self.bz, self.axial_spans, self.source)
    }
}

// ---------------------------------------------------------------------------
// Result containers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToothPath {
    OneSection,
    ThreeSection,
}

impl ToothPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            ToothPath::OneSection => "one-section",
            ToothPath::ThreeSection => "three-section",
        }
    }
}

impl std::str::FromStr for ToothPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-section" | "one" => Ok(ToothPath::OneSection),
            "three-section" | "three" => Ok(ToothPath::ThreeSection),
            other => Err(Error::invalid(format!(
                "unknown tooth path `{other}` (expected one-section or three-section)"
            ))),
        }
    }
}

/// How the slices of the input field were combined before forces were taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceAggregation {
    /// Forces evaluated per slice, then summed in slice order.
    SliceWiseSum,
    /// Forces evaluated on a single length-weighted mean field.
    AveragedField,
}

/// Force components for every tooth and time step, shape `(N_s, N_t)`, in newtons.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceComponents {
    pub radial: Array2<f64>,
    pub tangential: Array2<f64>,
    pub axial: Array2<f64>,
}

impl ForceComponents {
    pub fn zeros(teeth: usize, times: usize) -> Self {
        ForceComponents {
            radial: Array2::zeros((teeth, times)),
            tangential: Array2::zeros((teeth, times)),
            axial: Array2::zeros((teeth, times)),
        }
    }

    pub fn component(&self, c: FieldComponent) -> &Array2<f64> {
        match c {
            FieldComponent::Radial => &self.radial,
            FieldComponent::Tangential => &self.tangential,
            FieldComponent::Axial => &self.axial,
        }
    }

    pub fn tooth_count(&self) -> usize {
        self.radial.nrows()
    }

    pub fn time_samples(&self) -> usize {
        self.radial.ncols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToothForceSeries {
    pub per_slice: Vec<ForceComponents>,
    /// Axial sum of `per_slice` in slice order.
    pub total: ForceComponents,
    pub path: ToothPath,
    pub aggregation: SliceAggregation,
    pub include_bz: bool,
}

/// Electromagnetic torque per time step over one electrical period.
#[derive(Debug, Clone, PartialEq)]
pub struct TorqueSeries {
    pub values: Vec<f64>,
    /// Mechanical rotor angle of each sample, radians.
    pub rotor_angles: Vec<f64>,
    pub pole_pairs: u32,
    /// Contribution of each slice, in slice order. Empty for single-slice results.
    pub per_slice: Vec<Vec<f64>>,
}

impl TorqueSeries {
    pub fn new(values: Vec<f64>, pole_pairs: u32) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("torque series contains non-finite values"));
        }
        let n = values.len();
        let p = pole_pairs.max(1) as f64;
        let rotor_angles = (0..n).map(|i| TAU * i as f64 / (n as f64 * p)).collect();
        Ok(TorqueSeries {
            values,
            rotor_angles,
            pole_pairs,
            per_slice: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Normalization applied to 2D spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumNormalization {
    /// Coefficients divided by the sample count, so a unit cosine contributes
    /// 1/2 to each of its two conjugate bins.
    MeanTwoSided,
}

impl SpectrumNormalization {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumNormalization::MeanTwoSided => "mean-two-sided",
        }
    }
}

/// Complex amplitudes over (spatial order, temporal order).
///
/// Storage follows DFT bin layout: bin `i` on an axis of length `N` holds
/// order `i` for `i <= N/2` and `i - N` above. The kernel is
/// `exp(-i(m·θ_k - n·2π·j/N_t))`, so a traveling wave `cos(mθ - nωt)` lands on
/// `(m, n)` and `(-m, -n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    coeffs: Array2<Complex64>,
    pub normalization: SpectrumNormalization,
}

impl Spectrum2D {
    pub fn new(coeffs: Array2<Complex64>, normalization: SpectrumNormalization) -> Self {
        Spectrum2D {
            coeffs,
            normalization,
        }
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    pub fn spatial_len(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn temporal_len(&self) -> usize {
        self.coeffs.ncols()
    }

    fn bin(order: i64, len: usize) -> usize {
        order.rem_euclid(len as i64) as usize
    }

    /// Signed order stored at a bin index.
    pub fn order_of(bin: usize, len: usize) -> i64 {
        if bin <= len / 2 {
            bin as i64
        } else {
            bin as i64 - len as i64
        }
    }

    /// Complex coefficient at `(m, n)`; orders wrap modulo the axis lengths.
    pub fn coeff(&self, m: i64, n: i64) -> Complex64 {
        self.coeffs[[
            Self::bin(m, self.spatial_len()),
            Self::bin(n, self.temporal_len()),
        ]]
    }

    fn self_conjugate(&self, m: i64, n: i64) -> bool {
        let (sm, sn) = (self.spatial_len() as i64, self.temporal_len() as i64);
        (2 * m).rem_euclid(sm) == 0 && (2 * n).rem_euclid(sn) == 0
    }

    /// Real amplitude of the harmonic pair `(m, n)` and `(-m, -n)`: twice the
    /// coefficient magnitude, except at self-conjugate bins (DC, Nyquist).
    pub fn pair_amplitude(&self, m: i64, n: i64) -> f64 {
        let c = self.coeff(m, n).norm();
        if self.self_conjugate(m, n) {
            c
        } else {
            2.0 * c
        }
    }

    /// Largest deviation from `c(-m,-n) = conj(c(m,n))` over all bins.
    pub fn conjugate_symmetry_error(&self) -> f64 {
        let (sm, sn) = (self.spatial_len(), self.temporal_len());
        let mut worst: f64 = 0.0;
        for i in 0..sm {
            for j in 0..sn {
                let a = self.coeffs[[i, j]];
                let b = self.coeffs[[(sm - i) % sm, (sn - j) % sn]];
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst
    }

    /// Representative bins of the half plane `n > 0` or `n == 0, m >= 0`,
    /// ordered by `n` then `m`.
    pub fn half_plane_orders(&self) -> Vec<(i64, i64)> {
        let (sm, sn) = (self.spatial_len(), self.temporal_len());
        let mut out = Vec::new();
        let mut ns: Vec<i64> = (0..sn).map(|j| Self::order_of(j, sn)).collect();
        let mut ms: Vec<i64> = (0..sm).map(|i| Self::order_of(i, sm)).collect();
        ns.sort_unstable();
        ms.sort_unstable();
        let nyquist_n = (sn % 2 == 0).then_some(sn as i64 / 2);
        for &n in &ns {
            for &m in &ms {
                // Columns n = 0 and the temporal Nyquist column are their own
                // mirrors, so only m >= 0 represents each pair there.
                let keep = if n == 0 || Some(n) == nyquist_n {
                    m >= 0
                } else {
                    n > 0
                };
                if keep {
                    out.push((m, n));
                }
            }
        }
        out
    }
}
