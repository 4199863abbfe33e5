//! Iterative radix-2 FFT and 2-D helpers for power-of-two sizes.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// In-place FFT. `inverse` applies the conjugate transform and the `1/n` factor.
pub fn fft(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * PI / len as f64;
        let half = len / 2;
        let tw: Vec<Complex64> = (0..half).map(|k| Complex64::from_polar(1.0, ang * k as f64)).collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = data[start + k];
                let v = data[start + k + half] * tw[k];
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
    if inverse {
        let s = 1.0 / n as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}

/// 2-D FFT of a row-major `rows × cols` array.
pub fn fft2(data: &mut [Complex64], rows: usize, cols: usize, inverse: bool) {
    for r in 0..rows {
        fft(&mut data[r * cols..(r + 1) * cols], inverse);
    }
    let mut col = alloc::vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            col[r] = data[r * cols + c];
        }
        fft(&mut col, inverse);
        for r in 0..rows {
            data[r * cols + c] = col[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_dft() {
        let n = 16;
        let x: Vec<Complex64> = (0..n).map(|k| Complex64::new((k as f64).sin(), (k * k) as f64 * 0.01)).collect();
        let mut y = x.clone();
        fft(&mut y, false);
        for f in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += x[k] * Complex64::from_polar(1.0, -2.0 * PI * (f * k) as f64 / n as f64);
            }
            assert!((s - y[f]).norm() < 1e-12);
        }
        fft(&mut y, true);
        for k in 0..n {
            assert!((y[k] - x[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn two_d_round_trip() {
        let (r, c) = (8, 4);
        let x: Vec<Complex64> = (0..r * c).map(|k| Complex64::new(k as f64, -(k as f64) * 0.5)).collect();
        let mut y = x.clone();
        fft2(&mut y, r, c, false);
        assert!((y[0] - x.iter().sum::<Complex64>()).norm() < 1e-10);
        fft2(&mut y, r, c, true);
        let err: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }
}
