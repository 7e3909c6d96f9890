//! Adam with bias correction, plus the milestone learning-rate schedule.

use serde::{Deserialize, Serialize};

use super::mat::Mat;
use crate::error::{Error, Result};

/// Per-parameter first/second moment buffers and the shared scalars.
#[derive(Clone, Debug)]
pub struct AdamState {
    m: Vec<Mat>,
    v: Vec<Mat>,
    step: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    /// Zero moments shaped like the given parameters.
    pub fn new(params: &[&Mat]) -> Self {
        AdamState {
            m: params.iter().map(|p| Mat::zeros(p.rows(), p.cols())).collect(),
            v: params.iter().map(|p| Mat::zeros(p.rows(), p.cols())).collect(),
            step: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn step_count(&self) -> usize {
        self.step
    }

    /// One in-place update. `grads` must align with `params`.
    pub fn step(&mut self, params: &mut [&mut Mat], grads: &[Mat], lr: f64) -> Result<()> {
        assert_eq!(params.len(), self.m.len(), "adam: parameter count changed");
        assert_eq!(grads.len(), self.m.len(), "adam: gradient count mismatch");
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step as i32);
        let bc2 = 1.0 - self.beta2.powi(self.step as i32);
        for ((p, g), (m, v)) in params.iter_mut().zip(grads).zip(self.m.iter_mut().zip(self.v.iter_mut())) {
            assert!(p.same_shape(g), "adam: grad shape {}x{} vs param {}x{}", g.rows(), g.cols(), p.rows(), p.cols());
            if !g.is_finite() {
                return Err(Error::Numerical { step: self.step, msg: "non-finite gradient".into() });
            }
            for i in 0..p.len() {
                let gi = g.data()[i];
                let mi = self.beta1 * m.data()[i] + (1.0 - self.beta1) * gi;
                let vi = self.beta2 * v.data()[i] + (1.0 - self.beta2) * gi * gi;
                m.data_mut()[i] = mi;
                v.data_mut()[i] = vi;
                let m_hat = mi / bc1;
                let v_hat = vi / bc2;
                p.data_mut()[i] -= lr * m_hat / (v_hat.sqrt() + self.eps);
            }
        }
        Ok(())
    }
}

/// Learning-rate schedule: constant, or base·factor once `after` steps are done.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Schedule {
    Milestone { after: usize, factor: f64 },
}

/// Learning rate for optimizer step `step` (0-based).
pub fn lr_at(schedule: Option<Schedule>, step: usize, base_lr: f64) -> f64 {
    match schedule {
        None => base_lr,
        Some(Schedule::Milestone { after, factor }) => {
            if step >= after {
                base_lr * factor
            } else {
                base_lr
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_lr() {
        // bias-corrected m̂/√v̂ = 1 on the first step for any constant gradient
        let mut p = Mat::scalar(0.0);
        let mut adam = AdamState::new(&[&p]);
        adam.step(&mut [&mut p], &[Mat::scalar(1.0)], 1e-3).unwrap();
        assert!((p.item() + 1e-3).abs() < 1e-11, "Δθ = {}", p.item());
    }

    #[test]
    fn zero_gradients_are_identity() {
        let mut p = Mat::row(&[0.4, -1.7]);
        let before = p.clone();
        let mut adam = AdamState::new(&[&p]);
        for _ in 0..10 {
            adam.step(&mut [&mut p], &[Mat::zeros(1, 2)], 1e-2).unwrap();
        }
        assert_eq!(p, before);
    }

    #[test]
    fn non_finite_gradient_reports_step() {
        let mut p = Mat::scalar(0.0);
        let mut adam = AdamState::new(&[&p]);
        adam.step(&mut [&mut p], &[Mat::scalar(1.0)], 1e-3).unwrap();
        let err = adam.step(&mut [&mut p], &[Mat::scalar(f64::NAN)], 1e-3).unwrap_err();
        match err {
            Error::Numerical { step, .. } => assert_eq!(step, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    /// Independent scalar reimplementation of textbook Adam, run in lockstep.
    #[test]
    fn quadratic_descent_matches_scalar_reference() {
        let (beta1, beta2, eps, lr) = (0.9, 0.999, 1e-8, 0.1);
        let mut theta_ref = 1.0_f64;
        let (mut m, mut v) = (0.0_f64, 0.0_f64);

        let mut p = Mat::scalar(1.0);
        let mut adam = AdamState::new(&[&p]);

        for t in 1..=100 {
            let g = 2.0 * theta_ref;
            m = beta1 * m + (1.0 - beta1) * g;
            v = beta2 * v + (1.0 - beta2) * g * g;
            let m_hat = m / (1.0 - beta1.powi(t));
            let v_hat = v / (1.0 - beta2.powi(t));
            theta_ref -= lr * m_hat / (v_hat.sqrt() + eps);

            let g_mat = Mat::scalar(2.0 * p.item());
            adam.step(&mut [&mut p], &[g_mat], lr).unwrap();
            assert!((p.item() - theta_ref).abs() < 1e-12, "step {t}");
        }
        assert!(theta_ref.abs() < 0.05, "reference did not converge: {theta_ref}");
        assert!(p.item().abs() < 0.05);
    }

    #[test]
    fn milestone_schedule_switches_at_step() {
        let s = Some(Schedule::Milestone { after: 800, factor: 0.05 });
        assert_eq!(lr_at(s, 799, 1e-3), 1e-3);
        assert!((lr_at(s, 800, 1e-3) - 5e-5).abs() < 1e-18);
        assert_eq!(lr_at(None, 12345, 1e-3), 1e-3);
    }
}
