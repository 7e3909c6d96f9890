//! Reverse-mode autodiff over dense matrices, with Adam and the
//! initialization scheme shared by every trainable block.

mod mat;
mod optim;
mod tape;

pub use mat::Mat;
pub use optim::{lr_at, AdamState, Schedule};
pub use tape::{sigmoid_scalar, softplus_scalar, Tape, Value};

use rand::Rng;

/// Uniform in [−1/√fan_in, +1/√fan_in]; the default for every linear map.
pub fn init_linear(rng: &mut impl Rng, d_out: usize, d_in: usize) -> Mat {
    let bound = 1.0 / (d_in.max(1) as f64).sqrt();
    Mat::from_fn(d_out, d_in, |_, _| rng.random_range(-bound..bound))
}

/// Bias row initialized like the matching linear map.
pub fn init_bias_row(rng: &mut impl Rng, d_out: usize, d_in: usize) -> Mat {
    let bound = 1.0 / (d_in.max(1) as f64).sqrt();
    Mat::from_fn(1, d_out, |_, _| rng.random_range(-bound..bound))
}
