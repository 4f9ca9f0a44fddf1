//! Thin 1D/2D wrappers over `rustfft` (unnormalized in both directions).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

/// Smallest `n ≥ target` of the form `2^a 3^b 5^c`.
pub fn fast_len(target: usize) -> usize {
    let mut n = target.max(1);
    loop {
        let mut m = n;
        for p in [2, 3, 5] {
            while m % p == 0 {
                m /= p;
            }
        }
        if m == 1 {
            return n;
        }
        n += 1;
    }
}

/// Row-major 2D transform; rows are contiguous of length `cols`.
pub struct Fft2 {
    rows: usize,
    cols: usize,
    row_fft: Arc<dyn Fft<f64>>,
    col_fft: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(planner: &mut FftPlanner<f64>, rows: usize, cols: usize, direction: FftDirection) -> Self {
        Self {
            rows,
            cols,
            row_fft: planner.plan_fft(cols, direction),
            col_fft: planner.plan_fft(rows, direction),
        }
    }

    pub fn process(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        assert_eq!(data.len(), self.rows * self.cols);
        self.row_fft.process(data);
        scratch.resize(data.len(), Complex64::default());
        transpose(data, scratch, self.rows, self.cols);
        self.col_fft.process(scratch);
        transpose(scratch, data, self.cols, self.rows);
    }
}

/// `dst[c][r] = src[r][c]` for an `rows × cols` source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 32;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Forward or inverse 2D transform in one call.
pub fn fft2(data: &mut [Complex64], rows: usize, cols: usize, direction: FftDirection) {
    let mut planner = FftPlanner::new();
    let plan = Fft2::new(&mut planner, rows, cols, direction);
    let mut scratch = Vec::new();
    plan.process(data, &mut scratch);
}

/// Moves index `n/2` to index 0 along both axes.
pub fn ifftshift2(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let (hr, hc) = (rows / 2, cols / 2);
    let mut out = vec![Complex64::default(); data.len()];
    for r in 0..rows {
        let rr = (r + rows - hr) % rows;
        for c in 0..cols {
            out[rr * cols + (c + cols - hc) % cols] = data[r * cols + c];
        }
    }
    out
}

/// Inverse of [`ifftshift2`]: moves index 0 to index `n/2`.
pub fn fftshift2(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let (hr, hc) = (rows / 2, cols / 2);
    let mut out = vec![Complex64::default(); data.len()];
    for r in 0..rows {
        let rr = (r + hr) % rows;
        for c in 0..cols {
            out[rr * cols + (c + hc) % cols] = data[r * cols + c];
        }
    }
    out
}
