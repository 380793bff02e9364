//! Analytic air-gap fields built from space-time harmonic tables, per-slice
//! rotor shifts and slice superposition.
//!
//! A harmonic contributes `A·cos(m·θ - n·2π·τ + φ)` where `θ` is the
//! mechanical air-gap angle and `τ` the time as a fraction of one electrical
//! period. Shifting a slice by a rotor angle `Δ` evaluates the base field at
//! the rotor position advanced by `Δ`, i.e. at `τ + p·Δ/2π` for `p` pole pairs.

use std::f64::consts::{PI, TAU};

use ndarray::{Array2, Array3, Axis};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AirGapFieldMap, FieldComponent, FieldSource, MachineGeometry};
use crate::skew::SliceSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldHarmonic {
    pub component: FieldComponent,
    /// Spatial order, cycles per mechanical revolution.
    pub spatial_order: i64,
    /// Temporal order, cycles per electrical period.
    pub temporal_order: i64,
    /// Tesla, non-negative.
    pub amplitude: f64,
    /// Radians.
    pub phase: f64,
}

impl FieldHarmonic {
    pub fn new(component: FieldComponent, m: i64, n: i64, amplitude: f64, phase: f64) -> Self {
        FieldHarmonic {
            component,
            spatial_order: m,
            temporal_order: n,
            amplitude,
            phase,
        }
    }

    /// Same wave written with `n > 0`, or `n == 0, m >= 0`, and phase in `(-π, π]`.
    pub fn canonical(&self) -> Self {
        let flip = self.temporal_order < 0 || (self.temporal_order == 0 && self.spatial_order < 0);
        let (m, n, phase) = if flip {
            (-self.spatial_order, -self.temporal_order, -self.phase)
        } else {
            (self.spatial_order, self.temporal_order, self.phase)
        };
        FieldHarmonic {
            spatial_order: m,
            temporal_order: n,
            phase: wrap_phase(phase),
            ..*self
        }
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(TAU);
    if p > PI {
        p -= TAU;
    }
    p
}

fn check_harmonics(harmonics: &[FieldHarmonic], nt: usize, na: usize) -> Result<()> {
    for h in harmonics {
        if !(h.amplitude.is_finite() && h.amplitude >= 0.0 && h.phase.is_finite()) {
            return Err(Error::invalid(format!(
                "harmonic ({}, {}) needs a finite non-negative amplitude and finite phase",
                h.spatial_order, h.temporal_order
            )));
        }
        let need_a = 2 * h.spatial_order.unsigned_abs() as usize + 2;
        let need_t = 2 * h.temporal_order.unsigned_abs() as usize + 2;
        if na < need_a || nt < need_t {
            return Err(Error::invalid(format!(
                "grid ({nt} times, {na} angles) is below Nyquist for harmonic (m={}, n={}): \
                 needs at least ({need_t}, {need_a})",
                h.spatial_order, h.temporal_order
            )));
        }
    }
    Ok(())
}

/// Samples one `(time, angle)` component plane. `time_shift` is in electrical
/// radians and is subtracted as `n·time_shift` from each harmonic phase.
fn sample_plane(
    harmonics: &[FieldHarmonic],
    component: FieldComponent,
    nt: usize,
    na: usize,
    time_shift: f64,
) -> Array2<f64> {
    let selected: Vec<&FieldHarmonic> = harmonics.iter().filter(|h| h.component == component).collect();
    let mut plane = Array2::<f64>::zeros((nt, na));
    if selected.is_empty() {
        return plane;
    }
    let period = (na * nt) as i64;
    plane
        .axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(it, mut row)| {
            for (ia, v) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for h in &selected {
                    // Reduce the grid phase exactly in integers before scaling by 2π.
                    let k = (h.spatial_order * (ia * nt) as i64
                        - h.temporal_order * (it * na) as i64)
                        .rem_euclid(period);
                    let arg = TAU * k as f64 / period as f64 + h.phase
                        - h.temporal_order as f64 * time_shift;
                    acc += h.amplitude * arg.cos();
                }
                *v = acc;
            }
        });
    plane
}

/// Samples a harmonic table on an `(N_t, N_a)` grid, identical across
/// `slices` slices of equal axial span.
pub fn synthesize(
    harmonics: &[FieldHarmonic],
    grid: (usize, usize),
    slices: usize,
    geom: &MachineGeometry,
) -> Result<AirGapFieldMap> {
    let (nt, na) = grid;
    if slices < 1 {
        return Err(Error::invalid("at least one slice is required"));
    }
    check_harmonics(harmonics, nt, na)?;
    let mut planes = FieldComponent::ALL.iter().map(|&c| {
        let plane = sample_plane(harmonics, c, nt, na, 0.0);
        let mut out = Array3::<f64>::zeros((slices, nt, na));
        for mut s in out.axis_iter_mut(Axis(0)) {
            s.assign(&plane);
        }
        out
    });
    let (br, bt, bz) = (
        planes.next().unwrap(),
        planes.next().unwrap(),
        planes.next().unwrap(),
    );
    AirGapFieldMap::new(
        br,
        bt,
        bz,
        vec![geom.axial_length / slices as f64; slices],
        FieldSource::Synthetic(harmonics.to_vec()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ShiftOptions {
    /// Allow linear interpolation when a shift does not land on the time grid
    /// of an ingested map.
    pub interpolate: bool,
}

/// Gives each slice the base field evaluated at its shifted rotor position.
///
/// Synthetic maps are re-sampled with exact per-harmonic phase shifts;
/// other maps are rotated circularly along the time axis.
pub fn apply_slice_shifts(
    field: &AirGapFieldMap,
    schedule: &SliceSchedule,
    opts: ShiftOptions,
) -> Result<AirGapFieldMap> {
    let target = schedule.len();
    let have = field.slice_count();
    if have != target && have != 1 {
        return Err(Error::grid(format!(
            "field has {have} slices but the schedule has {target}"
        )));
    }
    let (nt, na) = (field.time_samples(), field.angle_samples());
    let spans = schedule.spans();
    let p = schedule.pole_pairs.max(1) as f64;
    let time_shifts: Vec<f64> = schedule.shifts().iter().map(|d| p * d).collect();

    if time_shifts.iter().all(|&s| s == 0.0) {
        let pick = |c: FieldComponent| replicate(field.component(c), target);
        return AirGapFieldMap::new(
            pick(FieldComponent::Radial),
            pick(FieldComponent::Tangential),
            pick(FieldComponent::Axial),
            spans,
            field.source().clone(),
        );
    }

    let mut out: Vec<Array3<f64>> = Vec::with_capacity(3);
    match field.source() {
        FieldSource::Synthetic(harmonics) => {
            for c in FieldComponent::ALL {
                let mut arr = Array3::<f64>::zeros((target, nt, na));
                for (k, &shift) in time_shifts.iter().enumerate() {
                    arr.index_axis_mut(Axis(0), k)
                        .assign(&sample_plane(harmonics, c, nt, na, shift));
                }
                out.push(arr);
            }
        }
        _ => {
            let offsets: Vec<f64> = time_shifts.iter().map(|s| s * nt as f64 / TAU).collect();
            for (k, off) in offsets.iter().enumerate() {
                if (off - off.round()).abs() > 1e-9 && !opts.interpolate {
                    return Err(Error::grid(format!(
                        "shift of slice {k} is {off} time samples, not a whole number; \
                         enable interpolation to resample"
                    )));
                }
            }
            for c in FieldComponent::ALL {
                let src = field.component(c);
                let mut arr = Array3::<f64>::zeros((target, nt, na));
                for (k, &off) in offsets.iter().enumerate() {
                    let base = src.index_axis(Axis(0), if have == 1 { 0 } else { k });
                    let mut dst = arr.index_axis_mut(Axis(0), k);
                    rotate_time(&base, &mut dst, off);
                }
                out.push(arr);
            }
        }
    }
    let bz = out.pop().unwrap();
    let bt = out.pop().unwrap();
    let br = out.pop().unwrap();
    AirGapFieldMap::new(
        br,
        bt,
        bz,
        spans,
        FieldSource::Derived {
            bz_absent: field.bz_absent(),
        },
    )
}

fn replicate(src: &Array3<f64>, target: usize) -> Array3<f64> {
    if src.shape()[0] == target {
        return src.clone();
    }
    let plane = src.index_axis(Axis(0), 0);
    let mut out = Array3::<f64>::zeros((target, plane.nrows(), plane.ncols()));
    for mut s in out.axis_iter_mut(Axis(0)) {
        s.assign(&plane);
    }
    out
}

/// `dst[j] = src[j + offset]` circularly along the time axis, linear between samples.
fn rotate_time(src: &ndarray::ArrayView2<f64>, dst: &mut ndarray::ArrayViewMut2<f64>, offset: f64) {
    let nt = src.nrows();
    let rounded = offset.round();
    if (offset - rounded).abs() <= 1e-9 {
        let s = (rounded as i64).rem_euclid(nt as i64) as usize;
        for j in 0..nt {
            dst.row_mut(j).assign(&src.row((j + s) % nt));
        }
        return;
    }
    let whole = offset.floor();
    let frac = offset - whole;
    let s = (whole as i64).rem_euclid(nt as i64) as usize;
    for j in 0..nt {
        let a = src.row((j + s) % nt);
        let b = src.row((j + s + 1) % nt);
        let mut row = dst.row_mut(j);
        for ((d, x), y) in row.iter_mut().zip(a.iter()).zip(b.iter()) {
            *d = (1.0 - frac) * x + frac * y;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollapseMode {
    /// Keep every slice for slice-wise force and torque evaluation.
    Concatenate,
    /// Length-weighted mean field on a single slice. Forces are quadratic in
    /// the field, so this only approximates the slice-wise sum.
    Average,
}

pub fn collapse_slices(field: &AirGapFieldMap, mode: CollapseMode) -> Result<AirGapFieldMap> {
    match mode {
        CollapseMode::Concatenate => Ok(field.clone()),
        CollapseMode::Average => {
            if field.slice_count() == 1 {
                return Ok(field.clone());
            }
            let spans = field.axial_spans();
            let total = field.total_length();
            let mean = |arr: &Array3<f64>| {
                let mut acc = Array2::<f64>::zeros((arr.shape()[1], arr.shape()[2]));
                for (k, plane) in arr.axis_iter(Axis(0)).enumerate() {
                    acc.scaled_add(spans[k] / total, &plane);
                }
                acc.insert_axis(Axis(0))
            };
            AirGapFieldMap::new(
                mean(field.br()),
                mean(field.btheta()),
                mean(field.bz()),
                vec![total],
                FieldSource::Averaged {
                    bz_absent: field.bz_absent(),
                },
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SkewConfiguration, SkewStyle};
    use crate::skew::{discrete_skew_factor, slice_schedule, SliceShift};

    fn geom() -> MachineGeometry {
        MachineGeometry {
            pole_count: 8,
            slot_count: 48,
            airgap_radius: 0.05,
            rotor_radius: 0.0495,
            axial_length: 0.1,
            rotor_diameter: 0.099,
            slot_bottom_radius: 0.07,
        }
    }

    fn custom_schedule(shifts: &[f64]) -> SliceSchedule {
        SliceSchedule {
            style: SkewStyle::Step,
            slices: shifts
                .iter()
                .enumerate()
                .map(|(i, &s)| SliceShift {
                    slice_index: i,
                    angular_shift: s,
                    axial_span: 0.1 / shifts.len() as f64,
                })
                .collect(),
            pole_pairs: 4,
        }
    }

    #[test]
    fn single_harmonic_has_unit_peak() {
        let h = [FieldHarmonic::new(FieldComponent::Radial, 4, 1, 1.0, 0.0)];
        let f = synthesize(&h, (64, 256), 1, &geom()).unwrap();
        let peak = f.br().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        assert!((peak - 1.0).abs() < 1e-12);
        assert!(f.btheta().iter().all(|&v| v == 0.0));
        assert!(f.bz().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn empty_table_gives_zero_map() {
        let f = synthesize(&[], (8, 16), 2, &geom()).unwrap();
        assert!(f.br().iter().chain(f.btheta()).chain(f.bz()).all(|&v| v == 0.0));
        assert_eq!(f.slice_count(), 2);
    }

    #[test]
    fn synthesis_is_linear() {
        let a = FieldHarmonic::new(FieldComponent::Tangential, 4, 1, 0.3, 0.2);
        let b = FieldHarmonic::new(FieldComponent::Tangential, 20, -5, 0.07, -1.1);
        let fa = synthesize(&[a], (32, 64), 1, &geom()).unwrap();
        let fb = synthesize(&[b], (32, 64), 1, &geom()).unwrap();
        let fab = synthesize(&[a, b], (32, 64), 1, &geom()).unwrap();
        let sum = fa.btheta() + fb.btheta();
        let err = (&sum - fab.btheta()).iter().fold(0.0f64, |x, y| x.max(y.abs()));
        assert!(err < 1e-15);
    }

    #[test]
    fn below_nyquist_is_rejected() {
        let h = [FieldHarmonic::new(FieldComponent::Radial, 48, 1, 1.0, 0.0)];
        assert!(synthesize(&h, (8, 97), 1, &geom()).is_err());
        assert!(synthesize(&h, (8, 98), 1, &geom()).is_ok());
        let h = [FieldHarmonic::new(FieldComponent::Radial, 1, -5, 1.0, 0.0)];
        assert!(synthesize(&h, (11, 16), 1, &geom()).is_err());
        let neg = [FieldHarmonic::new(FieldComponent::Radial, 1, 1, -1.0, 0.0)];
        assert!(synthesize(&neg, (8, 16), 1, &geom()).is_err());
    }

    #[test]
    fn zero_shift_is_identity() {
        let h = [FieldHarmonic::new(FieldComponent::Radial, 4, 1, 0.8, 0.4)];
        let f = synthesize(&h, (16, 32), 3, &geom()).unwrap();
        let sched = custom_schedule(&[0.0, 0.0, 0.0]);
        let g = apply_slice_shifts(&f, &sched, ShiftOptions::default()).unwrap();
        assert_eq!(f.br(), g.br());
        assert_eq!(f.btheta(), g.btheta());
    }

    #[test]
    fn shift_advances_phase_by_order_times_shift() {
        let phi = 0.3;
        let delta = 0.05;
        let h = [FieldHarmonic::new(FieldComponent::Radial, 4, 1, 1.0, phi)];
        let f = synthesize(&h, (16, 32), 1, &geom()).unwrap();
        let g = apply_slice_shifts(&f, &custom_schedule(&[delta]), ShiftOptions::default()).unwrap();
        let expected = [FieldHarmonic::new(FieldComponent::Radial, 4, 1, 1.0, phi - 4.0 * delta)];
        let e = synthesize(&expected, (16, 32), 1, &geom()).unwrap();
        let err = (g.br() - e.br()).iter().fold(0.0f64, |x, y| x.max(y.abs()));
        assert!(err < 1e-13);
    }

    #[test]
    fn slot_pitch_shift_leaves_rotor_slot_harmonic_unchanged() {
        // Rotor-bound 48th spatial harmonic: 12 electrical cycles for 4 pole pairs.
        let h = [FieldHarmonic::new(FieldComponent::Radial, 48, 12, 1.0, 0.0)];
        let f = synthesize(&h, (32, 128), 1, &geom()).unwrap();
        let g = apply_slice_shifts(&f, &custom_schedule(&[TAU / 48.0]), ShiftOptions::default()).unwrap();
        let err = (g.br() - f.br()).iter().fold(0.0f64, |x, y| x.max(y.abs()));
        assert!(err < 1e-12);
    }

    #[test]
    fn ingested_shift_rotates_or_fails() {
        let h = [FieldHarmonic::new(FieldComponent::Radial, 4, 1, 1.0, 0.0)];
        let synthetic = synthesize(&h, (16, 32), 1, &geom()).unwrap();
        let (br, bt, bz, spans, _) = synthetic.clone().into_parts();
        let ingested = AirGapFieldMap::new(br, bt, bz, spans, FieldSource::Ingested { bz_absent: false }).unwrap();
        // one time sample = 2π/16 electrical = 2π/64 mechanical
        let exact = custom_schedule(&[TAU / 64.0]);
        let a = apply_slice_shifts(&ingested, &exact, ShiftOptions::default()).unwrap();
        let b = apply_slice_shifts(&synthetic, &exact, ShiftOptions::default()).unwrap();
        let err = (a.br() - b.br()).iter().fold(0.0f64, |x, y| x.max(y.abs()));
        assert!(err < 1e-12);

        let off_grid = custom_schedule(&[TAU / 128.0]);
        assert!(matches!(
            apply_slice_shifts(&ingested, &off_grid, ShiftOptions::default()),
            Err(Error::GridMismatch(_))
        ));
        let interp = apply_slice_shifts(&ingested, &off_grid, ShiftOptions { interpolate: true }).unwrap();
        assert_eq!(interp.slice_count(), 1);
    }

    #[test]
    fn mismatched_slice_count_is_rejected() {
        let f = synthesize(&[], (8, 16), 2, &geom()).unwrap();
        assert!(apply_slice_shifts(&f, &custom_schedule(&[0.0, 0.1, 0.2]), ShiftOptions::default()).is_err());
    }

    #[test]
    fn averaging_identical_slices_is_identity() {
        let h = [FieldHarmonic::new(FieldComponent::Radial, 4, 1, 1.0, 0.0)];
        let f = synthesize(&h, (16, 32), 3, &geom()).unwrap();
        let avg = collapse_slices(&f, CollapseMode::Average).unwrap();
        let err = (&avg.br().index_axis(Axis(0), 0) - &f.br().index_axis(Axis(0), 1))
            .iter()
            .fold(0.0f64, |x, y| x.max(y.abs()));
        assert!(err < 1e-15);
        assert!((avg.total_length() - 0.1).abs() < 1e-15);
        let single = synthesize(&h, (16, 32), 1, &geom()).unwrap();
        assert_eq!(collapse_slices(&single, CollapseMode::Average).unwrap(), single);
        assert_eq!(collapse_slices(&f, CollapseMode::Concatenate).unwrap(), f);
    }

    #[test]
    fn averaging_shifted_slices_applies_discrete_factor() {
        let theta = TAU / 48.0;
        let sched = slice_schedule(&SkewConfiguration::step(3, theta), &geom()).unwrap();
        // Rotor-bound harmonic: spatial order 28 = 4 pole pairs x 7 electrical cycles.
        let h = [FieldHarmonic::new(FieldComponent::Radial, 28, 7, 1.0, 0.0)];
        let f = synthesize(&h, (32, 64), 1, &geom()).unwrap();
        let shifted = apply_slice_shifts(&f, &sched, ShiftOptions::default()).unwrap();
        let avg = collapse_slices(&shifted, CollapseMode::Average).unwrap();
        let peak = avg.br().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let kappa = discrete_skew_factor(theta, 3, 28.0).unwrap();
        // peak of a sampled cosine can fall between grid points; use the energy instead
        let energy: f64 = avg.br().iter().map(|v| v * v).sum::<f64>() / avg.br().len() as f64;
        assert!((energy.sqrt() * 2f64.sqrt() - kappa).abs() < 1e-12);
        assert!(peak <= kappa + 1e-12);
    }
}
