//! Entropies, dispersive transmission spectra and trace post-processing.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};
use crate::hilbert::{partial_trace, DensityMatrix};

const ENTROPY_CUTOFF: f64 = 1e-12;

/// -Tr(rho ln rho) in nats. Eigenvalues below 1e-12 contribute nothing.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho
        .eigenvalues()
        .into_iter()
        .filter(|&l| l > ENTROPY_CUTOFF)
        .map(|l| -l * l.ln())
        .sum();
    s.max(0.0)
}

/// Entropy of the reduced state on the `keep` slots.
pub fn entanglement_entropy(rho: &DensityMatrix, keep: &[usize]) -> Result<f64> {
    Ok(von_neumann_entropy(&partial_trace(rho, keep)?))
}

/// Transmission magnitude on a frequency grid, normalized to peak 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub values: Vec<f64>,
}

impl Spectrum {
    /// Index of the global maximum.
    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold(0, |best, (i, &v)| if v > self.values[best] { i } else { best })
    }
}

/// Two Lorentzian lines of full width `kappa2` at omega_r - chi (qubit in
/// |0>, weight 1 - P_e) and omega_r + chi (weight P_e).
pub fn transmission_spectrum(
    omega_r: f64,
    chi_mhz: f64,
    kappa2_mhz: f64,
    p_excited: f64,
    grid: &[f64],
) -> Result<Spectrum> {
    if grid.is_empty() {
        return Err(invalid("frequency grid is empty"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) || grid.iter().any(|f| !f.is_finite()) {
        return Err(invalid("frequency grid must be finite and strictly increasing"));
    }
    if !(kappa2_mhz > 0.0 && kappa2_mhz.is_finite()) {
        return Err(invalid(format!("kappa2 must be positive, got {kappa2_mhz}")));
    }
    if !(0.0..=1.0).contains(&p_excited) {
        return Err(invalid(format!("P_e must lie in [0, 1], got {p_excited}")));
    }
    if !(omega_r > 0.0 && chi_mhz.is_finite()) {
        return Err(invalid("omega_r must be positive and chi finite"));
    }
    let half = kappa2_mhz * 1e-3 / 2.0;
    let chi = chi_mhz * 1e-3;
    let line = |f: f64, c: f64| half * half / ((f - c).powi(2) + half * half);
    let raw: Vec<f64> = grid
        .iter()
        .map(|&f| (1.0 - p_excited) * line(f, omega_r - chi) + p_excited * line(f, omega_r + chi))
        .collect();
    let peak = raw.iter().cloned().fold(0.0, f64::max);
    let values = if peak > 0.0 { raw.iter().map(|v| v / peak).collect() } else { raw };
    Ok(Spectrum { freqs: grid.to_vec(), values })
}

/// Uniform grid from `start` to `stop` inclusive with the given step.
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(invalid(format!("bad grid {start}..{stop} step {step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

fn check_uniform(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(invalid("need at least two samples"));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(dt > 0.0) {
        return Err(invalid("time grid must increase"));
    }
    for (i, &t) in times.iter().enumerate() {
        if (t - (times[0] + dt * i as f64)).abs() > 1e-6 * dt {
            return Err(invalid("time grid is not uniform"));
        }
    }
    Ok(dt)
}

/// Dominant non-DC frequency of a uniformly sampled trace, in MHz for times
/// in ns. Returns `None` when the trace has no oscillating component.
///
/// The mean is removed and a Hann window applied before a zero-padded FFT;
/// the peak bin is refined by a parabola through the log magnitudes of its
/// neighbours.
pub fn dominant_frequency(times: &[f64], trace: &[f64]) -> Result<Option<f64>> {
    if times.len() != trace.len() {
        return Err(invalid("times and trace differ in length"));
    }
    if times.len() < 16 {
        return Err(invalid("need at least 16 samples"));
    }
    let dt = check_uniform(times)?;
    let n = trace.len();
    let mean = trace.iter().sum::<f64>() / n as f64;
    let scale = trace.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    if scale <= 1e-12 * mean.abs().max(1.0) {
        return Ok(None);
    }
    let padded = (4 * n).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); padded];
    for (i, (b, v)) in buf.iter_mut().zip(trace).enumerate() {
        let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos();
        *b = Complex64::new((v - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let mag: Vec<f64> = buf[..=padded / 2].iter().map(|c| c.norm()).collect();
    // skip the DC lobe: the Hann main lobe spans two original bins
    let first = (2 * padded / n).max(1).min(mag.len() - 1);
    let mut k = first;
    for i in first..mag.len() {
        if mag[i] > mag[k] {
            k = i;
        }
    }
    if mag[k] <= 0.0 {
        return Ok(None);
    }
    let delta = if k > 0 && k + 1 < mag.len() && mag[k - 1] > 0.0 && mag[k + 1] > 0.0 {
        let (a, b, c) = (mag[k - 1].ln(), mag[k].ln(), mag[k + 1].ln());
        let den = a - 2.0 * b + c;
        if den.abs() > 0.0 {
            0.5 * (a - c) / den
        } else {
            0.0
        }
    } else {
        0.0
    };
    let f_ghz = (k as f64 + delta) / (padded as f64 * dt);
    Ok(Some(f_ghz * 1e3))
}

/// Indices of strict interior local maxima.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}

/// Full width at half maximum of the peak at `peak`, with linear
/// interpolation of the crossings. `None` if a crossing lies off the grid.
pub fn full_width_half_max(x: &[f64], y: &[f64], peak: usize) -> Option<f64> {
    let half = y.get(peak)? / 2.0;
    let mut lo = None;
    for i in (0..peak).rev() {
        if y[i] <= half {
            let t = (half - y[i]) / (y[i + 1] - y[i]);
            lo = Some(x[i] + t * (x[i + 1] - x[i]));
            break;
        }
    }
    let mut hi = None;
    for i in peak + 1..y.len() {
        if y[i] <= half {
            let t = (y[i - 1] - half) / (y[i - 1] - y[i]);
            hi = Some(x[i - 1] + t * (x[i] - x[i - 1]));
            break;
        }
    }
    Some(hi? - lo?)
}

/// max - min of the trace over samples with t in [t_start, t_end].
pub fn peak_to_peak(times: &[f64], trace: &[f64], t_start: f64, t_end: f64) -> Option<f64> {
    let window = times
        .iter()
        .zip(trace)
        .filter(|(t, _)| **t >= t_start && **t <= t_end)
        .map(|(_, v)| *v);
    let (lo, hi) = window.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    (hi >= lo).then_some(hi - lo)
}

/// Time average by the trapezoid rule.
pub fn time_average(times: &[f64], values: &[f64]) -> Option<f64> {
    if times.len() != values.len() || times.len() < 2 {
        return None;
    }
    let span = times[times.len() - 1] - times[0];
    if !(span > 0.0) {
        return None;
    }
    let area: f64 = times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (v[0] + v[1]) * (t[1] - t[0]))
        .sum();
    Some(area / span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::SpaceDescriptor;
    use nalgebra::DVector;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn entropy_examples() {
        let q = SpaceDescriptor::single(2).unwrap();
        let pure = DensityMatrix::basis_state(q.clone(), &[1]).unwrap();
        assert!(von_neumann_entropy(&pure) < 1e-9);
        let mixed = DensityMatrix::maximally_mixed(q);
        assert!((von_neumann_entropy(&mixed) - LN_2).abs() < 1e-12);
        let four = DensityMatrix::maximally_mixed(SpaceDescriptor::single(4).unwrap());
        assert!((von_neumann_entropy(&four) - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn entanglement_examples() {
        let space = SpaceDescriptor::new(vec![2, 2]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DVector::from_vec(vec![s, 0.0, 0.0, s].into_iter().map(|x| Complex64::new(x, 0.0)).collect());
        let rho = DensityMatrix::from_ket(space.clone(), &bell).unwrap();
        assert!((entanglement_entropy(&rho, &[0]).unwrap() - LN_2).abs() < 1e-9);
        assert!((entanglement_entropy(&rho, &[1]).unwrap() - LN_2).abs() < 1e-9);
        let prod = DensityMatrix::basis_state(space, &[1, 0]).unwrap();
        assert!(entanglement_entropy(&prod, &[0]).unwrap() < 1e-9);
    }

    #[test]
    fn ground_state_spectrum_is_single_line() {
        let grid = uniform_grid(6.98, 7.02, 0.0001).unwrap();
        let s = transmission_spectrum(7.0, 6.0, 0.5, 0.0, &grid).unwrap();
        let peaks: Vec<_> = local_maxima(&s.values);
        assert_eq!(peaks.len(), 1);
        assert!((s.freqs[peaks[0]] - 6.994).abs() < 1e-4);
        assert!((s.values[peaks[0]] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resolved_peaks_and_width() {
        let grid = uniform_grid(6.98, 7.02, 0.00001).unwrap();
        let s = transmission_spectrum(7.0, 6.0, 0.1, 0.157, &grid).unwrap();
        let peaks = local_maxima(&s.values);
        assert_eq!(peaks.len(), 2);
        let sep = (s.freqs[peaks[1]] - s.freqs[peaks[0]]) * 1e3;
        assert!((sep - 12.0).abs() < 0.011);
        let w = full_width_half_max(&s.freqs, &s.values, peaks[0]).unwrap() * 1e3;
        assert!((w - 0.1).abs() < 0.005, "{w}");
    }

    #[test]
    fn flipping_qubit_moves_argmax_by_two_chi() {
        let grid = uniform_grid(6.98, 7.02, 0.00005).unwrap();
        let g = transmission_spectrum(7.0, 6.0, 1.0, 0.0, &grid).unwrap();
        let e = transmission_spectrum(7.0, 6.0, 1.0, 1.0, &grid).unwrap();
        let shift = (e.freqs[e.argmax()] - g.freqs[g.argmax()]) * 1e3;
        assert!((shift - 12.0).abs() <= 0.05 + 1e-9);
    }

    #[test]
    fn spectrum_errors() {
        assert!(transmission_spectrum(7.0, 6.0, 1.0, 0.0, &[]).is_err());
        assert!(transmission_spectrum(7.0, 6.0, 0.0, 0.0, &[7.0]).is_err());
        assert!(transmission_spectrum(7.0, 6.0, 1.0, 1.5, &[7.0]).is_err());
    }

    #[test]
    fn dominant_frequency_examples() {
        let t = uniform_grid(0.0, 100.0, 0.1).unwrap();
        let s: Vec<f64> = t.iter().map(|t| (2.0 * PI * 0.1 * t).sin()).collect();
        let f = dominant_frequency(&t, &s).unwrap().unwrap();
        assert!((f - 100.0).abs() < 1.0, "{f}");

        let c = vec![0.3; t.len()];
        assert_eq!(dominant_frequency(&t, &c).unwrap(), None);

        let f0 = 0.037;
        let sq: Vec<f64> = t.iter().map(|t| (2.0 * PI * f0 * t).cos().powi(2)).collect();
        let f = dominant_frequency(&t, &sq).unwrap().unwrap();
        assert!((f - 2e3 * f0).abs() < 0.01 * 2e3 * f0, "{f}");
    }

    #[test]
    fn dominant_frequency_rejects_bad_grids() {
        let mut t = uniform_grid(0.0, 10.0, 0.5).unwrap();
        let v = vec![0.0; t.len()];
        t[3] += 0.1;
        assert!(dominant_frequency(&t, &v).is_err());
        assert!(dominant_frequency(&t[..10], &v[..10]).is_err());
    }

    #[test]
    fn averages_and_envelopes() {
        let t = uniform_grid(0.0, 1.0, 0.01).unwrap();
        let v: Vec<f64> = t.iter().map(|x| 2.0 * x).collect();
        assert!((time_average(&t, &v).unwrap() - 1.0).abs() < 1e-12);
        assert!((peak_to_peak(&t, &v, 0.0, 0.5).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(peak_to_peak(&t, &v, 2.0, 3.0), None);
    }
}
