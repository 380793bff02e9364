//! Maxwell-stress-tensor evaluation on the air-gap surface: torque, force
//! components over arbitrary arcs, per-tooth forces and the axial force
//! estimate of a skewed rotor.
//!
//! Arc integrals integrate the piecewise-linear interpolant of the sampled
//! integrand. On the full circle this is the rectangle rule (spectrally
//! accurate for periodic data); on windows whose ends fall on grid points it
//! is the trapezoid rule, so per-tooth results add up exactly to the full
//! circle.
//!
//! Sign convention: arc stresses are the traction `T·r̂` with `r̂` pointing
//! radially outward. A positive radial force is magnetic tension across the
//! gap (the stator surface is pulled toward the rotor); a positive tangential
//! force points along increasing `θ`.

use std::f64::consts::{FRAC_PI_2, TAU};

use ndarray::{Array2, Array4, Axis};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    tooth_windows, AirGapFieldMap, FieldSource, ForceComponents, MachineGeometry,
    SliceAggregation, ToothForceSeries, ToothPath, ToothWindow, TorqueSeries, MU_0,
};

pub const FORCE_SIGN_CONVENTION: &str =
    "air-gap traction T.r_hat; F_r > 0 is radial tension across the gap, F_t > 0 along +theta";

/// Symmetric 3×3 stress tensor in pascals, cylindrical order `(r, θ, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressTensor3 {
    pub components: [[f64; 3]; 3],
}

impl StressTensor3 {
    pub fn zero() -> Self {
        StressTensor3 {
            components: [[0.0; 3]; 3],
        }
    }

    pub fn trace(&self) -> f64 {
        (0..3).map(|i| self.components[i][i]).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.components[i][j]
    }
}

/// Magnetic stress tensor for a flux density `(B_r, B_θ, B_z)` in tesla.
pub fn stress_tensor(br: f64, btheta: f64, bz: f64) -> StressTensor3 {
    let b = [br, btheta, bz];
    let sq = [br * br, btheta * btheta, bz * bz];
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = if i == j {
                let (a, c) = ((i + 1) % 3, (i + 2) % 3);
                (sq[i] - sq[a] - sq[c]) / (2.0 * MU_0)
            } else {
                b[i] * b[j] / MU_0
            };
        }
    }
    StressTensor3 { components: t }
}

/// Stress vector `T·n` for a unit normal `n`.
pub fn traction(t: &StressTensor3, n: [f64; 3]) -> Result<[f64; 3]> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if norm.is_nan() || (norm - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("normal must be a unit vector, |n| = {norm}")));
    }
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..3).map(|j| t.components[i][j] * n[j]).sum();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Arc quadrature
// ---------------------------------------------------------------------------

/// Angular integration domain on the air-gap circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcWindow {
    FullCircle,
    /// Arc starting at `start` (any real angle, wrapped) spanning `width` radians.
    Arc { start: f64, width: f64 },
}

impl From<ToothWindow> for ArcWindow {
    fn from(w: ToothWindow) -> Self {
        ArcWindow::Arc {
            start: w.start(),
            width: w.width,
        }
    }
}

fn snap(u: f64) -> f64 {
    let r = u.round();
    if (u - r).abs() < 1e-9 {
        r
    } else {
        u
    }
}

/// Sparse quadrature weights (sample index, radians) for an arc on an
/// `na`-point periodic grid.
pub fn arc_weights(na: usize, window: ArcWindow) -> Vec<(usize, f64)> {
    let step = TAU / na as f64;
    let (start, width) = match window {
        ArcWindow::FullCircle => return (0..na).map(|i| (i, step)).collect(),
        ArcWindow::Arc { start, width } => (start, width),
    };
    if width >= TAU * (1.0 - 1e-15) {
        return (0..na).map(|i| (i, step)).collect();
    }
    if width <= 0.0 {
        return Vec::new();
    }
    let u0 = snap(start / step);
    let u1 = snap(u0 + width / step);
    let mut acc: Vec<(i64, f64)> = Vec::new();
    let mut add = |j: i64, w: f64| {
        if let Some(last) = acc.iter_mut().find(|(k, _)| *k == j) {
            last.1 += w;
        } else {
            acc.push((j, w));
        }
    };
    let mut j = u0.floor() as i64;
    while (j as f64) < u1 {
        let s = u0.max(j as f64) - j as f64;
        let e = u1.min((j + 1) as f64) - j as f64;
        if e > s {
            let quad = 0.5 * (e * e - s * s);
            add(j, step * ((e - s) - quad));
            add(j + 1, step * quad);
        }
        j += 1;
    }
    let n = na as i64;
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(acc.len());
    for (j, w) in acc {
        let idx = j.rem_euclid(n) as usize;
        if let Some(slot) = out.iter_mut().find(|(k, _)| *k == idx) {
            slot.1 += w;
        } else {
            out.push((idx, w));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Torque
// ---------------------------------------------------------------------------

fn slice_torque(field: &AirGapFieldMap, slice: usize, geom: &MachineGeometry) -> Vec<f64> {
    let br = field.br().index_axis(Axis(0), slice);
    let bt = field.btheta().index_axis(Axis(0), slice);
    let step = field.angle_step();
    let r = geom.airgap_radius;
    let scale = field.axial_spans()[slice] * r * r / MU_0;
    (0..field.time_samples())
        .into_par_iter()
        .map(|it| {
            let sum: f64 = br
                .row(it)
                .iter()
                .zip(bt.row(it).iter())
                .map(|(a, b)| a * b)
                .sum();
            scale * sum * step
        })
        .collect()
}

/// Torque of a single-slice field, `(L/μ0)·r_δ²·∮B_r·B_θ dθ` per time step.
pub fn torque_2d(field: &AirGapFieldMap, geom: &MachineGeometry) -> Result<TorqueSeries> {
    if field.slice_count() != 1 {
        return Err(Error::invalid(format!(
            "torque_2d expects a single slice, got {}; use torque_total",
            field.slice_count()
        )));
    }
    TorqueSeries::new(slice_torque(field, 0, geom), geom.pole_pairs())
}

/// Torque summed over slices (each weighted by its axial span) in slice order.
pub fn torque_total(field: &AirGapFieldMap, geom: &MachineGeometry) -> Result<TorqueSeries> {
    field.check_spans(geom.axial_length)?;
    let per_slice: Vec<Vec<f64>> = (0..field.slice_count())
        .map(|k| slice_torque(field, k, geom))
        .collect();
    let mut total = vec![0.0; field.time_samples()];
    for series in &per_slice {
        for (t, v) in total.iter_mut().zip(series) {
            *t += v;
        }
    }
    let mut out = TorqueSeries::new(total, geom.pole_pairs())?;
    if per_slice.len() > 1 {
        out.per_slice = per_slice;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Surface forces
// ---------------------------------------------------------------------------

/// Force components per time step, newtons.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceForces {
    pub radial: Vec<f64>,
    pub tangential: Vec<f64>,
    pub axial: Vec<f64>,
}

/// Integrand pieces at one sample: `(rr, θr, zr)` stresses of `T·r̂`.
#[inline]
fn arc_stress(br: f64, bt: f64, bz: f64, include_bz: bool) -> (f64, f64, f64) {
    let bz2 = if include_bz { bz * bz } else { 0.0 };
    (
        (br * br - bt * bt - bz2) / (2.0 * MU_0),
        bt * br / MU_0,
        bz * br / MU_0,
    )
}

fn arc_forces_at(
    field: &AirGapFieldMap,
    slice: usize,
    it: usize,
    weights: &[(usize, f64)],
    include_bz: bool,
    scale: f64,
) -> (f64, f64, f64) {
    let br = field.br();
    let bt = field.btheta();
    let bz = field.bz();
    let (mut fr, mut ft, mut fz) = (0.0, 0.0, 0.0);
    for &(ia, w) in weights {
        let (sr, st, sz) = arc_stress(
            br[[slice, it, ia]],
            bt[[slice, it, ia]],
            bz[[slice, it, ia]],
            include_bz,
        );
        fr += w * sr;
        ft += w * st;
        fz += w * sz;
    }
    (scale * fr, scale * ft, scale * fz)
}

fn require_uniform_spans(field: &AirGapFieldMap, geom: &MachineGeometry) -> Result<()> {
    field.check_spans(geom.axial_length)
}

/// Radial, tangential and axial force on the air-gap surface over `window`,
/// summed over slices in order. `include_bz` adds the `-B_z²` term to the
/// radial stress.
pub fn surface_force_components(
    field: &AirGapFieldMap,
    geom: &MachineGeometry,
    window: ArcWindow,
    include_bz: bool,
) -> Result<SurfaceForces> {
    require_uniform_spans(field, geom)?;
    let weights = arc_weights(field.angle_samples(), window);
    let nt = field.time_samples();
    let mut out = SurfaceForces {
        radial: vec![0.0; nt],
        tangential: vec![0.0; nt],
        axial: vec![0.0; nt],
    };
    for slice in 0..field.slice_count() {
        let scale = geom.airgap_radius * field.axial_spans()[slice];
        let rows: Vec<(f64, f64, f64)> = (0..nt)
            .into_par_iter()
            .map(|it| arc_forces_at(field, slice, it, &weights, include_bz, scale))
            .collect();
        for (it, (fr, ft, fz)) in rows.into_iter().enumerate() {
            out.radial[it] += fr;
            out.tangential[it] += ft;
            out.axial[it] += fz;
        }
    }
    Ok(out)
}

fn aggregation_of(field: &AirGapFieldMap) -> SliceAggregation {
    match field.source() {
        FieldSource::Averaged { .. } => SliceAggregation::AveragedField,
        _ => SliceAggregation::SliceWiseSum,
    }
}

fn sum_slices(per_slice: &[ForceComponents], teeth: usize, nt: usize) -> ForceComponents {
    let mut total = ForceComponents::zeros(teeth, nt);
    for s in per_slice {
        total.radial += &s.radial;
        total.tangential += &s.tangential;
        total.axial += &s.axial;
    }
    total
}

fn one_section_slice(
    field: &AirGapFieldMap,
    slice: usize,
    geom: &MachineGeometry,
    tooth_weights: &[Vec<(usize, f64)>],
    include_bz: bool,
) -> ForceComponents {
    let nt = field.time_samples();
    let teeth = tooth_weights.len();
    let scale = geom.airgap_radius * field.axial_spans()[slice];
    let cols: Vec<Vec<(f64, f64, f64)>> = (0..nt)
        .into_par_iter()
        .map(|it| {
            tooth_weights
                .iter()
                .map(|w| arc_forces_at(field, slice, it, w, include_bz, scale))
                .collect()
        })
        .collect();
    let mut out = ForceComponents::zeros(teeth, nt);
    for (it, col) in cols.into_iter().enumerate() {
        for (k, (fr, ft, fz)) in col.into_iter().enumerate() {
            out.radial[[k, it]] = fr;
            out.tangential[[k, it]] = ft;
            out.axial[[k, it]] = fz;
        }
    }
    out
}

fn tooth_weight_table(field: &AirGapFieldMap, geom: &MachineGeometry) -> Result<Vec<Vec<(usize, f64)>>> {
    let na = field.angle_samples();
    let ns = geom.slot_count as usize;
    if ns == 0 || !na.is_multiple_of(ns) {
        return Err(Error::grid(format!(
            "{na} angle samples cannot be split evenly into {ns} tooth windows"
        )));
    }
    Ok(tooth_windows(geom)
        .into_iter()
        .map(|w| arc_weights(na, w.into()))
        .collect())
}

/// Per-tooth forces from the air-gap arc under each tooth.
pub fn tooth_forces_one_section(
    field: &AirGapFieldMap,
    geom: &MachineGeometry,
    include_bz: bool,
) -> Result<ToothForceSeries> {
    require_uniform_spans(field, geom)?;
    let weights = tooth_weight_table(field, geom)?;
    let per_slice: Vec<ForceComponents> = (0..field.slice_count())
        .map(|s| one_section_slice(field, s, geom, &weights, include_bz))
        .collect();
    let total = sum_slices(&per_slice, weights.len(), field.time_samples());
    Ok(ToothForceSeries {
        per_slice,
        total,
        path: ToothPath::OneSection,
        aggregation: aggregation_of(field),
        include_bz,
    })
}

/// Flux density sampled along the radial slot paths between teeth.
///
/// Arrays are indexed `(slice, time, boundary, radial sample)`. Boundary `j`
/// lies at the slot center `j·2π/N_s`; it is path C→D of tooth `j-1` and path
/// A→B of tooth `j`. Radial samples are uniform from the air-gap radius to the
/// slot-bottom radius.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotPathField {
    pub br: Array4<f64>,
    pub btheta: Array4<f64>,
    pub bz: Array4<f64>,
}

impl SlotPathField {
    pub fn new(br: Array4<f64>, btheta: Array4<f64>, bz: Array4<f64>) -> Result<Self> {
        if br.shape() != btheta.shape() || br.shape() != bz.shape() {
            return Err(Error::grid("slot path components have different shapes"));
        }
        if br.shape()[3] < 2 {
            return Err(Error::invalid("slot paths need at least two radial samples"));
        }
        if br.iter().chain(btheta.iter()).chain(bz.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("slot path samples must be finite"));
        }
        Ok(SlotPathField { br, btheta, bz })
    }

    pub fn zeros(slices: usize, times: usize, boundaries: usize, radial: usize) -> Self {
        let shape = (slices, times, boundaries, radial);
        SlotPathField {
            br: Array4::zeros(shape),
            btheta: Array4::zeros(shape),
            bz: Array4::zeros(shape),
        }
    }

    pub fn shape(&self) -> (usize, usize, usize, usize) {
        let s = self.br.shape();
        (s[0], s[1], s[2], s[3])
    }

    pub fn radial_samples(&self) -> usize {
        self.br.shape()[3]
    }
}

/// `∫ stress·L dr` along one slot path with the trapezoid rule, returning the
/// `(r, θ, z)` components of `T·θ̂`.
fn flank_integral(
    paths: &SlotPathField,
    slice: usize,
    it: usize,
    boundary: usize,
    dr: f64,
    include_bz: bool,
) -> (f64, f64, f64) {
    let nr = paths.radial_samples();
    let (mut fr, mut ft, mut fz) = (0.0, 0.0, 0.0);
    for ir in 0..nr {
        let w = if ir == 0 || ir == nr - 1 { 0.5 * dr } else { dr };
        let br = paths.br[[slice, it, boundary, ir]];
        let bt = paths.btheta[[slice, it, boundary, ir]];
        let bz = paths.bz[[slice, it, boundary, ir]];
        let bz2 = if include_bz { bz * bz } else { 0.0 };
        fr += w * br * bt / MU_0;
        ft += w * (bt * bt - br * br - bz2) / (2.0 * MU_0);
        fz += w * bz * bt / MU_0;
    }
    (fr, ft, fz)
}

/// Per-tooth forces from the closed contour A→B→C→D around each tooth.
///
/// The air-gap arc B→C contributes exactly as in the one-section path. The
/// slot paths add `T·θ̂` along A→B (boundary `k`) and subtract it along C→D
/// (boundary `k+1`), so normal stresses on the flanks feed the tangential
/// force and shear stresses feed the radial force.
pub fn tooth_forces_three_section(
    field: &AirGapFieldMap,
    slot_paths: Option<&SlotPathField>,
    geom: &MachineGeometry,
    include_bz: bool,
) -> Result<ToothForceSeries> {
    let paths = slot_paths.ok_or_else(|| {
        Error::MissingData(
            "three-section tooth forces need slot-path flux densities; \
             use the one-section path when none are available"
                .into(),
        )
    })?;
    let ns = geom.slot_count as usize;
    let (ps, pt, pb, nr) = paths.shape();
    if ps != field.slice_count() || pt != field.time_samples() || pb != ns {
        return Err(Error::MissingData(format!(
            "slot-path data has shape (slices {ps}, times {pt}, boundaries {pb}) but the field \
             needs ({}, {}, {ns})",
            field.slice_count(),
            field.time_samples()
        )));
    }
    let mut base = tooth_forces_one_section(field, geom, include_bz)?;
    let dr = (geom.slot_bottom_radius - geom.airgap_radius) / (nr - 1) as f64;
    let nt = field.time_samples();
    for (slice, forces) in base.per_slice.iter_mut().enumerate() {
        let length = field.axial_spans()[slice];
        let flanks: Vec<Vec<(f64, f64, f64)>> = (0..nt)
            .into_par_iter()
            .map(|it| {
                (0..ns)
                    .map(|b| flank_integral(paths, slice, it, b, dr, include_bz))
                    .collect()
            })
            .collect();
        for (it, row) in flanks.iter().enumerate() {
            for k in 0..ns {
                let ab = row[k];
                let cd = row[(k + 1) % ns];
                forces.radial[[k, it]] += length * (ab.0 - cd.0);
                forces.tangential[[k, it]] += length * (ab.1 - cd.1);
                forces.axial[[k, it]] += length * (ab.2 - cd.2);
            }
        }
    }
    base.total = sum_slices(&base.per_slice, ns, nt);
    base.path = ToothPath::ThreeSection;
    Ok(base)
}

/// Sum over teeth of each component of a `(N_s, N_t)` array, per time step.
pub fn sum_over_teeth(arr: &Array2<f64>) -> Vec<f64> {
    arr.sum_axis(Axis(0)).to_vec()
}

/// Axial force on a skewed rotor from its torque: `(2M/D)·tan θ_skew`.
pub fn axial_force_estimate(torque: f64, diameter: f64, theta_skew: f64) -> Result<f64> {
    if !(diameter.is_finite() && diameter > 0.0) {
        return Err(Error::invalid(format!("rotor diameter must be positive, got {diameter}")));
    }
    if !(theta_skew.is_finite() && (0.0..FRAC_PI_2).contains(&theta_skew)) {
        return Err(Error::invalid(format!(
            "skew angle must lie in [0, pi/2), got {theta_skew} rad"
        )));
    }
    if !torque.is_finite() {
        return Err(Error::invalid("torque must be finite"));
    }
    Ok(2.0 * torque / diameter * theta_skew.tan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FieldComponent;
    use crate::synth::{synthesize, FieldHarmonic};

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

    #[test]
    fn stress_tensor_examples() {
        assert_eq!(stress_tensor(0.0, 0.0, 0.0), StressTensor3::zero());
        let t = stress_tensor(1.0, 0.0, 0.0);
        let h = 1.0 / (2.0 * MU_0);
        assert_eq!(t.components, [[h, 0.0, 0.0], [0.0, -h, 0.0], [0.0, 0.0, -h]]);
        let t = stress_tensor(1.0, 1.0, 0.0);
        assert_eq!(t.get(0, 0), 0.0);
        assert_eq!(t.get(1, 1), 0.0);
        assert!((t.get(2, 2) + 1.0 / MU_0).abs() < 1e-9);
        assert_eq!(t.get(0, 1), 1.0 / MU_0);
        assert_eq!(t.get(1, 0), 1.0 / MU_0);
    }

    #[test]
    fn traction_examples() {
        assert_eq!(traction(&StressTensor3::zero(), [1.0, 0.0, 0.0]).unwrap(), [0.0; 3]);
        let d = StressTensor3 {
            components: [[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 5.0]],
        };
        assert_eq!(traction(&d, [1.0, 0.0, 0.0]).unwrap(), [2.0, 0.0, 0.0]);
        let t = stress_tensor(1.0, 1.0, 0.0);
        assert_eq!(traction(&t, [1.0, 0.0, 0.0]).unwrap(), [0.0, 1.0 / MU_0, 0.0]);
        assert!(traction(&t, [1.0, 1.0, 0.0]).is_err());
        assert!(traction(&t, [f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn arc_weights_cover_the_circle() {
        let full: f64 = arc_weights(96, ArcWindow::FullCircle).iter().map(|w| w.1).sum();
        assert!((full - TAU).abs() < 1e-13);
        let arc = arc_weights(96, ArcWindow::Arc { start: -0.3, width: 1.1 });
        let total: f64 = arc.iter().map(|w| w.1).sum();
        assert!((total - 1.1).abs() < 1e-13);
        // window wrapping past 2π is normalized
        let wrapped = arc_weights(96, ArcWindow::Arc { start: TAU - 0.3, width: 1.1 });
        let mut a = arc.clone();
        let mut b = wrapped.clone();
        a.sort_by_key(|x| x.0);
        b.sort_by_key(|x| x.0);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.0, y.0);
            assert!((x.1 - y.1).abs() < 1e-14);
        }
    }

    #[test]
    fn arc_weights_integrate_linear_functions_exactly() {
        // the interpolant of a linear function is the function itself
        let na = 64;
        let step = TAU / na as f64;
        let (start, width) = (0.37, 0.81);
        let w = arc_weights(na, ArcWindow::Arc { start, width });
        let f = |i: usize| 2.0 + 3.0 * (i as f64 * step);
        let got: f64 = w.iter().map(|&(i, wt)| wt * f(i)).sum();
        let b = start + width;
        let exact = 2.0 * width + 1.5 * (b * b - start * start);
        assert!((got - exact).abs() < 1e-12);
    }

    #[test]
    fn zero_field_gives_zero_forces() {
        let f = synthesize(&[], (8, 96), 1, &geom()).unwrap();
        let s = surface_force_components(&f, &geom(), ArcWindow::FullCircle, true).unwrap();
        assert!(s.radial.iter().chain(&s.tangential).chain(&s.axial).all(|&v| v == 0.0));
        let t = torque_2d(&f, &geom()).unwrap();
        assert!(t.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn orthogonal_orders_give_no_torque() {
        let h = [
            FieldHarmonic::new(FieldComponent::Radial, 4, 0, 1.0, 0.0),
            FieldHarmonic::new(FieldComponent::Tangential, 5, 0, 1.0, 0.0),
        ];
        let f = synthesize(&h, (8, 64), 1, &geom()).unwrap();
        let t = torque_2d(&f, &geom()).unwrap();
        assert!(t.values.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn torque_2d_rejects_multi_slice() {
        let f = synthesize(&[], (8, 96), 2, &geom()).unwrap();
        assert!(torque_2d(&f, &geom()).is_err());
    }

    #[test]
    fn span_mismatch_is_an_error() {
        let f = synthesize(&[], (8, 96), 2, &geom()).unwrap();
        let mut g = geom();
        g.axial_length = 0.2;
        assert!(torque_total(&f, &g).is_err());
        assert!(surface_force_components(&f, &g, ArcWindow::FullCircle, false).is_err());
    }

    #[test]
    fn one_section_needs_divisible_grid() {
        let f = synthesize(&[], (8, 100), 1, &geom()).unwrap();
        assert!(matches!(
            tooth_forces_one_section(&f, &geom(), false),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn three_section_without_paths_is_explicit_error() {
        let f = synthesize(&[], (8, 96), 1, &geom()).unwrap();
        assert!(matches!(
            tooth_forces_three_section(&f, None, &geom(), false),
            Err(Error::MissingData(_))
        ));
        let wrong = SlotPathField::zeros(1, 8, 47, 5);
        assert!(matches!(
            tooth_forces_three_section(&f, Some(&wrong), &geom(), false),
            Err(Error::MissingData(_))
        ));
    }

    #[test]
    fn axial_force_examples() {
        let f = axial_force_estimate(100.0, 0.2, 7.5f64.to_radians()).unwrap();
        assert!((f - 131.652_497_587_395_85).abs() < 1e-10);
        assert_eq!(axial_force_estimate(100.0, 0.2, 0.0).unwrap(), 0.0);
        assert!(axial_force_estimate(100.0, 0.2, FRAC_PI_2).is_err());
        assert!(axial_force_estimate(100.0, 0.0, 0.1).is_err());
        assert!(axial_force_estimate(100.0, 0.2, -0.1).is_err());
        let theta = 0.2;
        let ft = 2.0 * 50.0 / 0.3;
        let fz = axial_force_estimate(50.0, 0.3, theta).unwrap();
        assert!((fz / ft - theta.tan()).abs() < 1e-15);
    }
}
