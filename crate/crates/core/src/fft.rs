//! Thin wrapper around `rustfft` with a per-thread plan cache.
//!
//! Only the two directions used by the crate are exposed. `synthesize`
//! computes `y_k = sum_m x_m e^{+2 pi i k m / K}` (unnormalized), which is
//! the evaluation of the polynomial with coefficients `x` at the K-th roots
//! of unity. `analyze` is its inverse, normalized by `1/K`.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn run(buf: &mut [Complex64], direction: FftDirection) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft(buf.len(), direction));
    plan.process(buf);
}

/// In-place `x_m -> sum_m x_m w^{km}` with `w = e^{2 pi i / K}`.
pub(crate) fn synthesize(buf: &mut [Complex64]) {
    run(buf, FftDirection::Inverse);
}

/// In-place inverse of [`synthesize`].
pub(crate) fn analyze(buf: &mut [Complex64]) {
    run(buf, FftDirection::Forward);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthesize_is_evaluation_at_roots_of_unity() {
        let coeffs = [
            Complex64::new(1.0, 0.5),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.25, 3.0),
        ];
        let k = 8;
        let mut buf = vec![Complex64::new(0.0, 0.0); k];
        buf[..3].copy_from_slice(&coeffs);
        synthesize(&mut buf);
        for (idx, got) in buf.iter().enumerate() {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * idx as f64 / k as f64);
            let want = coeffs[0] + coeffs[1] * z + coeffs[2] * z * z;
            assert!((got - want).norm() < 1e-13);
        }
        analyze(&mut buf);
        for (idx, c) in buf.iter().enumerate() {
            let want = coeffs.get(idx).copied().unwrap_or_default();
            assert!((c - want).norm() < 1e-14);
        }
    }
}
