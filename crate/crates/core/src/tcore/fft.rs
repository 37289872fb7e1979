//! Multi-way discrete Fourier transform over the t-scalar axes.
//!
//! Buffers are laid out as `I1 x ... x IN x batch` in row-major order, which
//! is both the layout of a single t-scalar (`batch = 1`) and of a t-matrix
//! (`batch = rows * cols`). The forward transform is unnormalized; the inverse
//! carries the `1 / (I1 * ... * IN)` factor.

use std::cell::RefCell;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Transforms `data` in place along every t-scalar axis.
///
/// # Panics
///
/// If `data.len()` differs from `dims.product() * batch`.
pub fn transform_in_place(
    data: &mut [Complex64],
    dims: &[usize],
    batch: usize,
    direction: Direction,
) {
    let count: usize = dims.iter().product();
    assert_eq!(
        data.len(),
        count * batch,
        "buffer length does not match shape {dims:?} x {batch}"
    );
    if data.is_empty() {
        return;
    }

    let mut inner = batch;
    let mut scratch = Vec::new();
    for &len in dims.iter().rev() {
        if len > 1 {
            let plan = PLANNER.with(|p| {
                let mut p = p.borrow_mut();
                match direction {
                    Direction::Forward => p.plan_fft_forward(len),
                    Direction::Inverse => p.plan_fft_inverse(len),
                }
            });
            if inner == 1 {
                plan.process(data);
            } else {
                let block = len * inner;
                scratch.resize(block, Complex64::new(0.0, 0.0));
                for chunk in data.chunks_exact_mut(block) {
                    for t in 0..len {
                        let row = &chunk[t * inner..(t + 1) * inner];
                        for (j, &v) in row.iter().enumerate() {
                            scratch[j * len + t] = v;
                        }
                    }
                    plan.process(&mut scratch);
                    for t in 0..len {
                        let row = &mut chunk[t * inner..(t + 1) * inner];
                        for (j, v) in row.iter_mut().enumerate() {
                            *v = scratch[j * len + t];
                        }
                    }
                }
            }
        }
        inner *= len;
    }

    if direction == Direction::Inverse && count > 1 {
        let scale = 1.0 / count as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

pub fn forward(data: &[Complex64], dims: &[usize], batch: usize) -> Vec<Complex64> {
    let mut out = data.to_vec();
    transform_in_place(&mut out, dims, batch, Direction::Forward);
    out
}

pub fn inverse(data: &[Complex64], dims: &[usize], batch: usize) -> Vec<Complex64> {
    let mut out = data.to_vec();
    transform_in_place(&mut out, dims, batch, Direction::Inverse);
    out
}

/// Direct `O(M^2)` evaluation of the multi-way DFT sum with the same
/// conventions as [`transform_in_place`]. Slow; meant as a reference.
pub fn transform_naive(
    data: &[Complex64],
    dims: &[usize],
    batch: usize,
    direction: Direction,
) -> Vec<Complex64> {
    let count: usize = dims.iter().product();
    assert_eq!(data.len(), count * batch);
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let coords: Vec<Vec<usize>> = (0..count).map(|k| unravel(k, dims)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for (f, fc) in coords.iter().enumerate() {
        for (s, sc) in coords.iter().enumerate() {
            let phase: f64 = fc
                .iter()
                .zip(sc)
                .zip(dims)
                .map(|((&a, &b), &n)| ((a * b) % n) as f64 / n as f64)
                .sum();
            let w = Complex64::from_polar(1.0, sign * TAU * phase);
            for b in 0..batch {
                out[f * batch + b] += w * data[s * batch + b];
            }
        }
    }
    if direction == Direction::Inverse {
        let scale = 1.0 / count as f64;
        out.iter_mut().for_each(|v| *v *= scale);
    }
    out
}

fn unravel(mut linear: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &extent) in out.iter_mut().zip(dims).rev() {
        *slot = linear % extent;
        linear /= extent;
    }
    out
}
