//! Torque-ripple spectra, peak-to-peak metrics, space-time spectra of tooth
//! forces and air-gap fields, and skewed-versus-reference suppression ratios.

use std::fmt;

use ndarray::{Array2, ArrayView2, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    AirGapFieldMap, FieldComponent, Spectrum2D, SpectrumNormalization, ToothForceSeries,
    TorqueSeries,
};
use crate::synth::FieldHarmonic;

/// Reference amplitudes below this are treated as absent when forming ratios.
pub const RATIO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeConvention {
    /// `A_0` is the mean, `A_k = 2|c_k|` for `0 < k < N/2`, the Nyquist bin is `|c_k|`.
    OneSided,
}

impl AmplitudeConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            AmplitudeConvention::OneSided => "one-sided",
        }
    }
}

/// One-sided amplitude spectrum of a periodic series sampled over one
/// electrical period. Bin `k` is `k` cycles per electrical period, i.e.
/// mechanical order `k·p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSpectrum {
    /// Signed mean at index 0, non-negative amplitudes above.
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub sample_count: usize,
    pub pole_pairs: u32,
    pub convention: AmplitudeConvention,
}

impl TimeSpectrum {
    pub fn max_order(&self) -> usize {
        self.sample_count / 2
    }

    pub fn mean(&self) -> f64 {
        self.amplitudes[0]
    }

    pub fn mechanical_order(&self, k: usize) -> usize {
        k * self.pole_pairs.max(1) as usize
    }

    /// Electrical bin holding a mechanical order, if it falls on one.
    pub fn bin_for_mechanical(&self, mech: usize) -> Option<usize> {
        let p = self.pole_pairs.max(1) as usize;
        (mech.is_multiple_of(p) && mech / p <= self.max_order()).then_some(mech / p)
    }

    /// Stored amplitude at electrical order `k`; exact bin lookup.
    pub fn order_amplitude(&self, k: i64) -> Result<f64> {
        if k < 0 || k as usize > self.max_order() {
            return Err(Error::OrderOutOfRange {
                order: k,
                max: self.max_order() as i64,
            });
        }
        Ok(self.amplitudes[k as usize].abs())
    }
}

fn fft_forward(data: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

pub fn spectrum_time(series: &[f64], pole_pairs: u32) -> Result<TimeSpectrum> {
    let n = series.len();
    if n < 4 {
        return Err(Error::invalid(format!("spectrum needs at least 4 samples, got {n}")));
    }
    let coeffs = fft_forward(series);
    let inv = 1.0 / n as f64;
    let half = n / 2;
    let mut amplitudes = Vec::with_capacity(half + 1);
    let mut phases = Vec::with_capacity(half + 1);
    for (k, c) in coeffs.iter().take(half + 1).enumerate() {
        let c = c * inv;
        let amp = if k == 0 {
            c.re
        } else if n.is_multiple_of(2) && k == half {
            c.norm()
        } else {
            2.0 * c.norm()
        };
        amplitudes.push(amp);
        phases.push(c.arg());
    }
    Ok(TimeSpectrum {
        amplitudes,
        phases,
        sample_count: n,
        pole_pairs,
        convention: AmplitudeConvention::OneSided,
    })
}

pub fn torque_spectrum(torque: &TorqueSeries) -> Result<TimeSpectrum> {
    spectrum_time(&torque.values, torque.pole_pairs)
}

/// `max - min`; zero for an empty series.
pub fn peak_to_peak(series: &[f64]) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    let (lo, hi) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    hi - lo
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RippleMetrics {
    pub mean: f64,
    pub peak_to_peak: f64,
    /// One-sided amplitudes by electrical order; index 0 is the mean.
    pub amplitudes: Vec<f64>,
}

pub fn ripple_metrics(torque: &TorqueSeries) -> Result<RippleMetrics> {
    let spec = torque_spectrum(torque)?;
    Ok(RippleMetrics {
        mean: spec.mean(),
        peak_to_peak: peak_to_peak(&torque.values),
        amplitudes: spec.amplitudes,
    })
}

// ---------------------------------------------------------------------------
// 2D transforms
// ---------------------------------------------------------------------------

/// Normalized 2D DFT of a real `(space, time)` matrix with kernel
/// `exp(-i(2π·m·k/S - 2π·n·j/T)) / (S·T)`.
pub fn dft2(data: ArrayView2<f64>) -> Array2<Complex64> {
    let (s, t) = data.dim();
    let mut out = data.mapv(|x| Complex64::new(x, 0.0));
    let mut planner = FftPlanner::<f64>::new();
    let time_pass = planner.plan_fft_inverse(t);
    let space_pass = planner.plan_fft_forward(s);
    let mut buf = vec![Complex64::new(0.0, 0.0); s.max(t)];
    for mut row in out.axis_iter_mut(Axis(0)) {
        buf[..t].iter_mut().zip(row.iter()).for_each(|(b, v)| *b = *v);
        time_pass.process(&mut buf[..t]);
        row.iter_mut().zip(buf[..t].iter()).for_each(|(v, b)| *v = *b);
    }
    for mut col in out.axis_iter_mut(Axis(1)) {
        buf[..s].iter_mut().zip(col.iter()).for_each(|(b, v)| *b = *v);
        space_pass.process(&mut buf[..s]);
        col.iter_mut().zip(buf[..s].iter()).for_each(|(v, b)| *v = *b);
    }
    let norm = 1.0 / (s * t) as f64;
    out.mapv_inplace(|c| c * norm);
    out
}

/// Inverse of [`dft2`]; returns the real part.
pub fn inverse_dft2(coeffs: &Array2<Complex64>) -> Array2<f64> {
    let (s, t) = coeffs.dim();
    let mut work = coeffs.clone();
    let mut planner = FftPlanner::<f64>::new();
    let time_pass = planner.plan_fft_forward(t);
    let space_pass = planner.plan_fft_inverse(s);
    let mut buf = vec![Complex64::new(0.0, 0.0); s.max(t)];
    for mut row in work.axis_iter_mut(Axis(0)) {
        buf[..t].iter_mut().zip(row.iter()).for_each(|(b, v)| *b = *v);
        time_pass.process(&mut buf[..t]);
        row.iter_mut().zip(buf[..t].iter()).for_each(|(v, b)| *v = *b);
    }
    for mut col in work.axis_iter_mut(Axis(1)) {
        buf[..s].iter_mut().zip(col.iter()).for_each(|(b, v)| *b = *v);
        space_pass.process(&mut buf[..s]);
        col.iter_mut().zip(buf[..s].iter()).for_each(|(v, b)| *v = *b);
    }
    work.mapv(|c| c.re)
}

/// How per-tooth force series are reduced before the space-time transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToothSpectrumMode {
    /// Teeth are the spatial samples; coefficients are means over teeth and time.
    #[default]
    SpaceTime,
    /// Forces are averaged over teeth first, leaving only spatial order 0.
    ToothAveraged,
}

impl std::str::FromStr for ToothSpectrumMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "space-time" => Ok(ToothSpectrumMode::SpaceTime),
            "tooth-averaged" => Ok(ToothSpectrumMode::ToothAveraged),
            other => Err(Error::invalid(format!(
                "unknown spectrum mode `{other}` (expected space-time or tooth-averaged)"
            ))),
        }
    }
}

/// Space-time spectrum of the axially summed tooth forces. Spatial orders are
/// referenced to tooth 0 as the angular origin.
pub fn spectrum_space_time(
    forces: &ToothForceSeries,
    component: FieldComponent,
    mode: ToothSpectrumMode,
) -> Spectrum2D {
    let data = forces.total.component(component);
    let coeffs = match mode {
        ToothSpectrumMode::SpaceTime => dft2(data.view()),
        ToothSpectrumMode::ToothAveraged => {
            let mean = data.mean_axis(Axis(0)).expect("at least one tooth");
            dft2(mean.insert_axis(Axis(0)).view())
        }
    };
    Spectrum2D::new(coeffs, SpectrumNormalization::MeanTwoSided)
}

/// Space-time spectrum of one field component on one slice, spatial axis
/// over the air-gap angle grid.
pub fn field_spectrum(field: &AirGapFieldMap, slice: usize, component: FieldComponent) -> Spectrum2D {
    let plane = field.slice_component(slice, component);
    Spectrum2D::new(dft2(plane.t()), SpectrumNormalization::MeanTwoSided)
}

/// Harmonics whose pair amplitude exceeds `floor`, in canonical form and
/// ordered by temporal then spatial order.
pub fn extract_harmonics(spectrum: &Spectrum2D, component: FieldComponent, floor: f64) -> Vec<FieldHarmonic> {
    spectrum
        .half_plane_orders()
        .into_iter()
        .filter_map(|(m, n)| {
            let amp = spectrum.pair_amplitude(m, n);
            (amp > floor).then(|| {
                FieldHarmonic::new(component, m, n, amp, spectrum.coeff(m, n).arg()).canonical()
            })
        })
        .collect()
}

/// Pair amplitude at `(m, n)`; both orders must lie within the Nyquist range.
pub fn order_amplitude_2d(spectrum: &Spectrum2D, m: i64, n: i64) -> Result<f64> {
    let (sm, sn) = (spectrum.spatial_len() as i64, spectrum.temporal_len() as i64);
    if m.abs() > sm / 2 {
        return Err(Error::OrderOutOfRange { order: m, max: sm / 2 });
    }
    if n.abs() > sn / 2 {
        return Err(Error::OrderOutOfRange { order: n, max: sn / 2 });
    }
    Ok(spectrum.pair_amplitude(m, n))
}

/// Amplitude ratio, or `Undefined` when the reference bin is empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SuppressionRatio {
    Ratio(f64),
    Undefined,
}

impl SuppressionRatio {
    pub fn value(&self) -> Option<f64> {
        match self {
            SuppressionRatio::Ratio(r) => Some(*r),
            SuppressionRatio::Undefined => None,
        }
    }
}

impl fmt::Display for SuppressionRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuppressionRatio::Ratio(r) => write!(f, "{r}"),
            SuppressionRatio::Undefined => f.write_str("undefined"),
        }
    }
}

/// `amplitude(skewed) / amplitude(reference)` at electrical order `k`.
pub fn suppression_ratio(skewed: &TimeSpectrum, reference: &TimeSpectrum, k: i64) -> Result<SuppressionRatio> {
    if skewed.convention != reference.convention
        || skewed.sample_count != reference.sample_count
        || skewed.pole_pairs != reference.pole_pairs
    {
        return Err(Error::ConventionMismatch(format!(
            "spectra differ: {} vs {} samples, {} vs {} pole pairs, {} vs {}",
            skewed.sample_count,
            reference.sample_count,
            skewed.pole_pairs,
            reference.pole_pairs,
            skewed.convention.as_str(),
            reference.convention.as_str()
        )));
    }
    let r = reference.order_amplitude(k)?;
    let s = skewed.order_amplitude(k)?;
    if r < RATIO_FLOOR {
        Ok(SuppressionRatio::Undefined)
    } else {
        Ok(SuppressionRatio::Ratio(s / r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn constant_series() {
        let s = spectrum_time(&[3.0; 16], 1).unwrap();
        assert!((s.amplitudes[0] - 3.0).abs() < 1e-15);
        assert!(s.amplitudes[1..].iter().all(|a| a.abs() < 1e-14));
    }

    #[test]
    fn too_short_series_is_rejected() {
        assert!(spectrum_time(&[1.0, 2.0, 3.0], 1).is_err());
    }

    #[test]
    fn peak_to_peak_examples() {
        assert_eq!(peak_to_peak(&[2.5; 7]), 0.0);
        let cosine: Vec<f64> = (0..64).map(|j| 2.0 * (TAU * j as f64 / 64.0).cos()).collect();
        assert!((peak_to_peak(&cosine) - 4.0).abs() < 1e-12);
        assert_eq!(peak_to_peak(&[]), 0.0);
    }

    #[test]
    fn order_amplitude_range() {
        let s = spectrum_time(&[1.0; 8], 1).unwrap();
        assert!(s.order_amplitude(4).is_ok());
        assert!(matches!(s.order_amplitude(5), Err(Error::OrderOutOfRange { .. })));
        assert!(s.order_amplitude(-1).is_err());
    }

    #[test]
    fn mismatched_spectra_are_rejected() {
        let a = spectrum_time(&[1.0; 8], 1).unwrap();
        let b = spectrum_time(&[1.0; 16], 1).unwrap();
        let c = spectrum_time(&[1.0; 8], 4).unwrap();
        assert!(matches!(suppression_ratio(&a, &b, 1), Err(Error::ConventionMismatch(_))));
        assert!(matches!(suppression_ratio(&a, &c, 1), Err(Error::ConventionMismatch(_))));
        assert_eq!(suppression_ratio(&a, &a, 0).unwrap(), SuppressionRatio::Ratio(1.0));
        assert_eq!(suppression_ratio(&a, &a, 2).unwrap(), SuppressionRatio::Undefined);
    }

    #[test]
    fn mechanical_bins() {
        let s = spectrum_time(&[0.0; 32], 4).unwrap();
        assert_eq!(s.bin_for_mechanical(48), Some(12));
        assert_eq!(s.bin_for_mechanical(50), None);
        assert_eq!(s.bin_for_mechanical(68), None);
        assert_eq!(s.mechanical_order(3), 12);
    }

    #[test]
    fn dft2_of_constant_is_single_bin() {
        let data = Array2::from_elem((6, 8), 2.0);
        let c = dft2(data.view());
        assert!((c[[0, 0]].re - 2.0).abs() < 1e-15);
        let others: f64 = c.iter().skip(1).map(|z| z.norm()).sum();
        assert!(others < 1e-13);
    }
}
