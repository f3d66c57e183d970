//! Separable multi-dimensional FFT over a row-major `[n1][n2][n3]` array
//! (last index fastest). Unnormalized in both directions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

const PARALLEL_THRESHOLD: usize = 1 << 14;

#[derive(Clone)]
pub(crate) struct Transform3 {
    dims: [usize; 3],
    fwd: [Arc<dyn Fft<f64>>; 3],
    inv: [Arc<dyn Fft<f64>>; 3],
}

impl fmt::Debug for Transform3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transform3").field("dims", &self.dims).finish()
    }
}

impl Transform3 {
    pub(crate) fn new(n1: usize, n2: usize, n3: usize) -> Self {
        let mut planner = FftPlanner::new();
        let dims = [n1, n2, n3];
        let fwd = dims.map(|n| planner.plan_fft_forward(n));
        let inv = dims.map(|n| planner.plan_fft_inverse(n));
        Self { dims, fwd, inv }
    }

    pub(crate) fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        for axis in 0..3 {
            self.axis(data, axis, true);
        }
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        for axis in 0..3 {
            self.axis(data, axis, false);
        }
    }

    /// Transform along the last axis only (the torus direction).
    pub(crate) fn forward_last(&self, data: &mut [Complex64]) {
        self.axis(data, 2, true);
    }

    pub(crate) fn inverse_last(&self, data: &mut [Complex64]) {
        self.axis(data, 2, false);
    }

    /// Transform along the first two axes only (the plane directions).
    pub(crate) fn forward_plane(&self, data: &mut [Complex64]) {
        self.axis(data, 0, true);
        self.axis(data, 1, true);
    }

    fn axis(&self, data: &mut [Complex64], axis: usize, forward: bool) {
        assert_eq!(data.len(), self.len(), "buffer does not match transform shape");
        let len = self.dims[axis];
        if len == 1 {
            return;
        }
        let fft = if forward { &self.fwd[axis] } else { &self.inv[axis] };
        let inner: usize = self.dims[axis + 1..].iter().product();
        let parallel = data.len() >= PARALLEL_THRESHOLD;

        if inner == 1 {
            let scratch_len = fft.get_inplace_scratch_len();
            if parallel {
                let lines_per_task = (PARALLEL_THRESHOLD / len).max(1) * len;
                data.par_chunks_mut(lines_per_task).for_each_init(
                    || vec![Complex64::default(); scratch_len],
                    |scratch, chunk| fft.process_with_scratch(chunk, scratch),
                );
            } else {
                let mut scratch = vec![Complex64::default(); scratch_len];
                fft.process_with_scratch(data, &mut scratch);
            }
            return;
        }

        let block = len * inner;
        let mut lines = vec![Complex64::default(); block];
        for chunk in data.chunks_mut(block) {
            strided_lines(chunk, &mut lines, fft.as_ref(), len, inner, parallel);
        }
    }
}

/// Transforms the `inner` strided lines of one `[len][inner]` block by
/// transposing into contiguous scratch and back.
fn strided_lines(
    block: &mut [Complex64],
    lines: &mut [Complex64],
    fft: &dyn Fft<f64>,
    len: usize,
    inner: usize,
    parallel: bool,
) {
    let scratch_len = fft.get_inplace_scratch_len();
    if parallel {
        {
            let src: &[Complex64] = block;
            lines.par_chunks_mut(len).enumerate().for_each_init(
                || vec![Complex64::default(); scratch_len],
                |scratch, (i, line)| {
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = src[k * inner + i];
                    }
                    fft.process_with_scratch(line, scratch);
                },
            );
        }
        let src: &[Complex64] = lines;
        block.par_chunks_mut(inner).enumerate().for_each(|(k, row)| {
            for (i, v) in row.iter_mut().enumerate() {
                *v = src[i * len + k];
            }
        });
    } else {
        for i in 0..inner {
            for k in 0..len {
                lines[i * len + k] = block[k * inner + i];
            }
        }
        let mut scratch = vec![Complex64::default(); scratch_len];
        fft.process_with_scratch(lines, &mut scratch);
        for k in 0..len {
            for i in 0..inner {
                block[k * inner + i] = lines[i * len + k];
            }
        }
    }
}

/// Signed frequency index of FFT bin `i` for a transform of length `n`.
#[inline]
pub fn freq_index(i: usize, n: usize) -> i64 {
    if 2 * i < n {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT bin holding signed frequency index `k` (taken modulo `n`).
#[inline]
pub fn bin_of(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}
