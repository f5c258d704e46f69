//! Small numerical helpers shared by the physics modules.

use faer::Mat;
use num_complex::Complex64;

/// `sin(x)/x` with `sinc(0) = 1` (no factor of π in the argument).
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `sinc(s)·e^{is}`: the phase-matching factor of the biphoton amplitude
/// written in terms of `s = −D·l_c/2`.
pub fn phase_matching(s: f64) -> Complex64 {
    Complex64::from_polar(sinc(s), s)
}

/// Trapezoidal quadrature weights for `n` uniform samples of spacing `h`.
pub fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    if n > 1 {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    }
    w
}

/// Smallest power of two ≥ `x` (and ≥ 1).
pub fn next_pow2(x: f64) -> usize {
    if !(x > 1.0) {
        return 1;
    }
    let mut n = 1usize;
    while (n as f64) < x {
        n <<= 1;
    }
    n
}

/// Relative L² distance `‖a − b‖ / ‖b‖` of two equally shaped matrices.
pub fn relative_l2(a: &Mat<Complex64>, b: &Mat<Complex64>) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()), "shape mismatch");
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            num += (a[(i, j)] - b[(i, j)]).norm_sqr();
            den += b[(i, j)].norm_sqr();
        }
    }
    (num / den).sqrt()
}

/// Full width at half maximum of a sampled, single-peaked profile.
///
/// Walks outward from the global maximum to the first half-maximum crossing
/// on each side and interpolates linearly between samples, so side lobes
/// beyond the first zeros never contribute.  Returns `None` if a crossing is
/// not found inside the sampled window.
pub fn fwhm(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let (peak, &ymax) = y
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    if !(ymax > 0.0) {
        return None;
    }
    let half = 0.5 * ymax;
    let cross = |a: usize, b: usize| x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
    let right = (peak..y.len() - 1).find(|&j| y[j + 1] < half).map(|j| cross(j, j + 1))?;
    let left = (1..=peak).rev().find(|&j| y[j - 1] < half).map(|j| cross(j, j - 1))?;
    Some(right - left)
}
