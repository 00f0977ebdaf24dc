//! Multi-dimensional complex FFT assembled from 1-D rustfft passes.

use num_complex::Complex64;
use rustfft::Fft;

use super::grid::Grid;
use crate::par;

/// In-place unnormalized transform of a full coefficient array.
pub(crate) fn transform(grid: &Grid, data: &mut [Complex64], inverse: bool) {
    let n = grid.points_per_axis();
    let plans = grid.plans();
    let fft: &dyn Fft<f64> = if inverse {
        plans.inverse.as_ref()
    } else {
        plans.forward.as_ref()
    };
    let scratch_len = fft.get_inplace_scratch_len();
    let dim = grid.dim();

    let mut buf = vec![Complex64::new(0.0, 0.0); data.len()];
    for axis in 0..dim {
        let inner = n.pow((dim - 1 - axis) as u32);
        if inner == 1 {
            par::for_each_chunk_mut_init(
                data,
                n,
                || vec![Complex64::new(0.0, 0.0); scratch_len],
                |scratch, _, line| fft.process_with_scratch(line, scratch),
            );
            continue;
        }
        // Gather strided lines into contiguous rows of `buf`.
        let src: &[Complex64] = data;
        par::for_each_chunk_mut_init(
            &mut buf,
            n,
            || vec![Complex64::new(0.0, 0.0); scratch_len],
            |scratch, line_id, line| {
                let o = line_id / inner;
                let i = line_id % inner;
                let base = o * n * inner + i;
                for (t, v) in line.iter_mut().enumerate() {
                    *v = src[base + t * inner];
                }
                fft.process_with_scratch(line, scratch);
            },
        );
        let rows: &[Complex64] = &buf;
        par::for_each_chunk_mut(data, n * inner, |o, block| {
            for t in 0..n {
                for i in 0..inner {
                    block[t * inner + i] = rows[(o * inner + i) * n + t];
                }
            }
        });
    }
}
