//! Order-1 Butterworth design, zero-phase forward-backward filtering and
//! factor-2 resampling.
//!
//! The design is the bilinear transform of the analog first-order prototype:
//! with `K = tan(π·cutoff/fs)`, the lowpass is `b = [K/(1+K), K/(1+K)]`,
//! `a = [1, (K−1)/(K+1)]`, the highpass `b = [1/(1+K), −1/(1+K)]` with the
//! same denominator. A matched lowpass/highpass pair is complementary:
//! the transfer functions sum to one at every frequency, and because
//! forward-backward filtering squares the magnitude and cancels phase, the
//! pair of zero-phase filters is power-complementary as well.

use serde::{Deserialize, Serialize};

use crate::autodiff::Mat;
use crate::error::{Error, Result};
use crate::systems::Trajectory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Lowpass,
    Highpass,
}

/// First-order digital filter coefficients (a[0] = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiquadCoeffs {
    pub b: [f64; 2],
    pub a: [f64; 2],
    pub kind: FilterKind,
    pub cutoff_hz: f64,
    pub fs_hz: f64,
}

/// Bilinear-transform order-1 Butterworth design.
pub fn design_butter1(cutoff_hz: f64, fs_hz: f64, kind: FilterKind) -> Result<BiquadCoeffs> {
    if !(cutoff_hz > 0.0 && cutoff_hz < fs_hz / 2.0) {
        return Err(Error::config(format!(
            "cutoff {cutoff_hz} Hz must lie in (0, {}) for fs {fs_hz} Hz",
            fs_hz / 2.0
        )));
    }
    let k = (std::f64::consts::PI * cutoff_hz / fs_hz).tan();
    let a = [1.0, (k - 1.0) / (k + 1.0)];
    let b = match kind {
        FilterKind::Lowpass => [k / (1.0 + k), k / (1.0 + k)],
        FilterKind::Highpass => [1.0 / (1.0 + k), -1.0 / (1.0 + k)],
    };
    Ok(BiquadCoeffs { b, a, kind, cutoff_hz, fs_hz })
}

impl BiquadCoeffs {
    /// Complex frequency response H(e^{j2πf/fs}) as (re, im).
    pub fn response_at(&self, f_hz: f64) -> (f64, f64) {
        let w = 2.0 * std::f64::consts::PI * f_hz / self.fs_hz;
        let (c, s) = (w.cos(), -w.sin()); // e^{-jw}
        let num = (self.b[0] + self.b[1] * c, self.b[1] * s);
        let den = (1.0 + self.a[1] * c, self.a[1] * s);
        let d2 = den.0 * den.0 + den.1 * den.1;
        (
            (num.0 * den.0 + num.1 * den.1) / d2,
            (num.1 * den.0 - num.0 * den.1) / d2,
        )
    }

    pub fn magnitude_at(&self, f_hz: f64) -> f64 {
        let (re, im) = self.response_at(f_hz);
        re.hypot(im)
    }

    /// The single pole of the order-1 section.
    pub fn pole(&self) -> f64 {
        -self.a[1]
    }

    /// Steady-state filter state for a unit-step input (direct form II
    /// transposed); scaled by the first sample it removes startup transients.
    fn zi_unit(&self) -> f64 {
        (self.b[1] - self.b[0] * self.a[1]) / (1.0 + self.a[1])
    }

    /// Single forward pass, DF2T, with steady-state initialization.
    fn forward_pass(&self, x: &[f64]) -> Vec<f64> {
        let mut s = self.zi_unit() * x[0];
        let mut y = Vec::with_capacity(x.len());
        for &xn in x {
            let yn = self.b[0] * xn + s;
            s = self.b[1] * xn - self.a[1] * yn;
            y.push(yn);
        }
        y
    }
}

/// Edge padding length for order-1 filtfilt (3·max(len(a), len(b))).
pub const FILTFILT_PAD: usize = 6;

/// Zero-phase forward-backward filtering: odd-reflection padding, forward
/// DF2T pass, reverse, second pass, reverse again, trim. The magnitude
/// response is squared and the phase cancels.
pub fn filtfilt(c: &BiquadCoeffs, x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n <= FILTFILT_PAD {
        return Err(Error::data(format!(
            "filtfilt needs more than {FILTFILT_PAD} samples, got {n}"
        )));
    }
    let mut ext = Vec::with_capacity(n + 2 * FILTFILT_PAD);
    for i in (1..=FILTFILT_PAD).rev() {
        ext.push(2.0 * x[0] - x[i]);
    }
    ext.extend_from_slice(x);
    for i in 1..=FILTFILT_PAD {
        ext.push(2.0 * x[n - 1] - x[n - 1 - i]);
    }

    let mut y = c.forward_pass(&ext);
    y.reverse();
    let mut y = c.forward_pass(&y);
    y.reverse();
    Ok(y[FILTFILT_PAD..FILTFILT_PAD + n].to_vec())
}

/// Apply [`filtfilt`] to every channel of a trajectory.
pub fn filtfilt_traj(c: &BiquadCoeffs, traj: &Trajectory) -> Result<Trajectory> {
    let n = traj.len();
    let mut out = Mat::zeros(n, traj.dim());
    for ch in 0..traj.dim() {
        let x: Vec<f64> = (0..n).map(|i| traj.values.get(i, ch)).collect();
        let y = filtfilt(c, &x)?;
        for (i, v) in y.into_iter().enumerate() {
            out.set(i, ch, v);
        }
    }
    Ok(Trajectory { values: out, dt: traj.dt, t0: traj.t0, mask: traj.mask.clone() })
}

/// filtfilt is linear in its input; this materializes it as a `len`×`len`
/// matrix so rollout graphs can differentiate through the filter with a
/// single matmul.
pub fn filtfilt_matrix(c: &BiquadCoeffs, len: usize) -> Result<Mat> {
    let mut out = Mat::zeros(len, len);
    let mut e = vec![0.0; len];
    for k in 0..len {
        e[k] = 1.0;
        let col = filtfilt(c, &e)?;
        e[k] = 0.0;
        for (i, v) in col.into_iter().enumerate() {
            out.set(i, k, v);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResampleDirection {
    Down,
    Up,
}

/// Factor-2 style resampling. Down keeps every `factor`-th sample; up
/// linearly interpolates with each output cell sampling the interpolant at
/// its center (not corner-aligned), clamped at the edges.
pub fn resample(traj: &Trajectory, factor: usize, direction: ResampleDirection) -> Trajectory {
    assert!(factor >= 2, "resample factor must be ≥ 2, got {factor}");
    match direction {
        ResampleDirection::Down => {
            let rows: Vec<usize> = (0..traj.len()).step_by(factor).collect();
            let mut vals = Mat::zeros(rows.len(), traj.dim());
            for (i, &r) in rows.iter().enumerate() {
                for c in 0..traj.dim() {
                    vals.set(i, c, traj.values.get(r, c));
                }
            }
            Trajectory { values: vals, dt: traj.dt * factor as f64, t0: traj.t0, mask: None }
        }
        ResampleDirection::Up => {
            let n_in = traj.len();
            let n_out = n_in * factor;
            let mut vals = Mat::zeros(n_out, traj.dim());
            for j in 0..n_out {
                // cell-center position in input coordinates
                let p = (j as f64 + 0.5) / factor as f64 - 0.5;
                let p = p.clamp(0.0, (n_in - 1) as f64);
                let i0 = p.floor() as usize;
                let i1 = (i0 + 1).min(n_in - 1);
                let frac = p - i0 as f64;
                for c in 0..traj.dim() {
                    let v = traj.values.get(i0, c) * (1.0 - frac) + traj.values.get(i1, c) * frac;
                    vals.set(j, c, v);
                }
            }
            Trajectory { values: vals, dt: traj.dt / factor as f64, t0: traj.t0, mask: None }
        }
    }
}
