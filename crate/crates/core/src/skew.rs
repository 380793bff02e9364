//! Skew angles, skew factors, slot-harmonic orders and per-slice shift
//! schedules for step, V and continuous rotor skewing.
//!
//! Angles are rotor (mechanical) radians. The skew factors only ever see the
//! product `θ·ν`, so callers pick the angle/order convention; the slice
//! machinery in [`crate::synth`] uses mechanical angles paired with
//! mechanical orders.

use std::f64::consts::TAU;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{MachineGeometry, SkewConfiguration, SkewStyle};

/// Skew angle that cancels the cogging fundamental: `2π / lcm(N_p, N_s)`.
pub fn optimal_skew_angle(pole_count: i64, slot_count: i64) -> Result<f64> {
    if pole_count < 1 || slot_count < 1 {
        return Err(Error::invalid(format!(
            "pole and slot counts must be positive, got {pole_count} and {slot_count}"
        )));
    }
    let nc = pole_count.lcm(&slot_count);
    Ok(TAU / nc as f64)
}

/// Continuous skew factor `sin(θν/2) / (θν/2)`, equal to 1 at `θν = 0`.
pub fn skew_factor(theta: f64, nu: f64) -> f64 {
    let x = 0.5 * theta * nu;
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Centered step shifts for `q` segments over a total angle `theta`:
/// `(k - (q-1)/2)·θ/q`.
pub fn step_shifts(theta: f64, q: u32) -> Vec<f64> {
    let q = q as i64;
    (0..q)
        .map(|k| (2 * k - (q - 1)) as f64 * theta / (2 * q) as f64)
        .collect()
}

/// Magnitude of the mean phasor `exp(iν·shift_k)` over the centered step
/// schedule of `q` segments. Tends to [`skew_factor`] as `q` grows.
pub fn discrete_skew_factor(theta: f64, q: u32, nu: f64) -> Result<f64> {
    if q < 1 {
        return Err(Error::invalid("segment count must be at least 1"));
    }
    Ok(mean_phasor_magnitude(&step_shifts(theta, q), nu))
}

/// `|mean_k exp(iν·shift_k)|` for an arbitrary shift list.
pub fn mean_phasor_magnitude(shifts: &[f64], nu: f64) -> f64 {
    let n = shifts.len() as f64;
    let (re, im) = shifts.iter().fold((0.0, 0.0), |(re, im), s| {
        let (sin, cos) = (nu * s).sin_cos();
        (re + cos, im + sin)
    });
    (re / n).hypot(im / n)
}

/// Discrete factors at `q_eff` and `2·q_eff` segments, used to check that a
/// staircase approximation of continuous skew has converged.
pub fn continuous_convergence(theta: f64, q_eff: u32, nu: f64) -> Result<(f64, f64)> {
    Ok((
        discrete_skew_factor(theta, q_eff, nu)?,
        discrete_skew_factor(theta, 2 * q_eff, nu)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HarmonicOrder {
    pub generator: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub order: Rational64,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl HarmonicOrder {
    pub fn as_f64(&self) -> f64 {
        *self.order.numer() as f64 / *self.order.denom() as f64
    }
}

/// Slot-harmonic orders `ν = 1 ± g·N_s/N_p`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarmonicOrderSet {
    pub entries: Vec<HarmonicOrder>,
}

impl HarmonicOrderSet {
    pub fn orders(&self) -> Vec<Rational64> {
        self.entries.iter().map(|e| e.order).collect()
    }
}

impl fmt::Display for HarmonicOrderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.order.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn harmonic_orders(pole_count: i64, slot_count: i64, g_max: u32) -> Result<HarmonicOrderSet> {
    if pole_count < 1 || slot_count < 1 {
        return Err(Error::invalid("pole and slot counts must be positive"));
    }
    let ratio = Rational64::new(slot_count, pole_count);
    let one = Rational64::from_integer(1);
    let mut entries = vec![HarmonicOrder {
        generator: 0,
        order: one,
    }];
    for g in 1..=g_max {
        let step = ratio * Rational64::from_integer(g as i64);
        entries.push(HarmonicOrder {
            generator: g,
            order: one - step,
        });
        entries.push(HarmonicOrder {
            generator: g,
            order: one + step,
        });
    }
    Ok(HarmonicOrderSet { entries })
}

/// Circumferential inclination `r_rt·θ / L` of a continuously skewed magnet.
/// This is a dimensionless slope (arc length per axial length).
pub fn continuous_inclination(geom: &MachineGeometry, theta_skew: f64) -> f64 {
    geom.rotor_radius * theta_skew / geom.axial_length
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceShift {
    pub slice_index: usize,
    /// Rotor (mechanical) angle by which this slice is advanced, radians.
    pub angular_shift: f64,
    pub axial_span: f64,
}

/// Per-slice rotor shifts for a skew configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceSchedule {
    pub style: SkewStyle,
    pub slices: Vec<SliceShift>,
    /// Pole pairs of the machine; converts rotor shifts into electrical time shifts.
    pub pole_pairs: u32,
}

impl SliceSchedule {
    /// Single unshifted slice spanning `axial_length`.
    pub fn unskewed(axial_length: f64, pole_pairs: u32) -> Self {
        SliceSchedule {
            style: SkewStyle::None,
            slices: vec![SliceShift {
                slice_index: 0,
                angular_shift: 0.0,
                axial_span: axial_length,
            }],
            pole_pairs,
        }
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn shifts(&self) -> Vec<f64> {
        self.slices.iter().map(|s| s.angular_shift).collect()
    }

    pub fn spans(&self) -> Vec<f64> {
        self.slices.iter().map(|s| s.axial_span).collect()
    }

    /// Name of the staircase construction behind the shifts.
    pub fn convention(&self) -> &'static str {
        match self.style {
            SkewStyle::None => "unshifted",
            SkewStyle::Step => "centered-step",
            SkewStyle::Vee => "mirrored-half-step",
            SkewStyle::Continuous => "centered-step-staircase",
        }
    }

    /// `|mean_k exp(iν·shift_k)|` weighted by axial span.
    pub fn attenuation(&self, nu: f64) -> f64 {
        let total: f64 = self.slices.iter().map(|s| s.axial_span).sum();
        let (re, im) = self.slices.iter().fold((0.0, 0.0), |(re, im), s| {
            let (sin, cos) = (nu * s.angular_shift).sin_cos();
            (re + s.axial_span * cos, im + s.axial_span * sin)
        });
        (re / total).hypot(im / total)
    }
}

pub fn slice_schedule(config: &SkewConfiguration, geom: &MachineGeometry) -> Result<SliceSchedule> {
    config.validate().into_result()?;
    geom.validate().into_result()?;
    let theta = config.total_angle;
    let shifts = match config.style {
        SkewStyle::None => vec![0.0],
        SkewStyle::Step => step_shifts(theta, config.segment_count),
        SkewStyle::Continuous => step_shifts(theta, config.continuous_resolution),
        SkewStyle::Vee => vee_shifts(theta, config.segment_count),
    };
    let span = geom.axial_length / shifts.len() as f64;
    Ok(SliceSchedule {
        style: config.style,
        slices: shifts
            .into_iter()
            .enumerate()
            .map(|(i, s)| SliceShift {
                slice_index: i,
                angular_shift: s,
                axial_span: span,
            })
            .collect(),
        pole_pairs: geom.pole_pairs(),
    })
}

/// Step schedule over `ceil(q/2)` segments followed by its mirror image. Odd
/// `q` shares the middle segment and is re-centered to zero mean.
fn vee_shifts(theta: f64, q: u32) -> Vec<f64> {
    let half_len = q.div_ceil(2);
    let half = step_shifts(theta, half_len);
    let mirrored = (q - half_len) as usize;
    let mut shifts = half.clone();
    shifts.extend(half[..mirrored].iter().rev());
    if q % 2 == 1 {
        let mean = shifts.iter().sum::<f64>() / shifts.len() as f64;
        for s in &mut shifts {
            *s -= mean;
        }
    }
    shifts
}
