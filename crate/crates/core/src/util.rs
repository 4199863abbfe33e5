use crate::Point;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

/// Distance from `z` to the closed segment `[a, b]`.
pub(crate) fn seg_dist(z: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / l2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// Parameter `t` in (0, 1] where `p + t (q - p)` first meets the segment `[a, b]`.
pub(crate) fn seg_hit(p: Point, q: Point, a: Point, b: Point) -> Option<f64> {
    let r = q - p;
    let s = b - a;
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let den = cross(r, s);
    let ap = a - p;
    if den == 0.0 {
        // parallel; collinear overlap counts as a hit at the nearest endpoint
        if cross(ap, r) != 0.0 {
            return None;
        }
        let rr = r.norm_sqr();
        let t0 = (ap * r.conj()).re / rr;
        let t1 = ((b - p) * r.conj()).re / rr;
        let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
        if hi <= 0.0 || lo > 1.0 {
            return None;
        }
        return Some(lo.max(0.0).max(f64::MIN_POSITIVE));
    }
    let t = cross(ap, s) / den;
    let u = cross(ap, r) / den;
    if t > 0.0 && t <= 1.0 && (0.0..=1.0).contains(&u) {
        Some(t)
    } else {
        None
    }
}

/// Smallest root `t` in (0, 1] of `|p + t (q - p) - c| = r`.
pub(crate) fn circle_hit(p: Point, q: Point, c: Point, r: f64) -> Option<f64> {
    let d = q - p;
    let f = p - c;
    let a = d.norm_sqr();
    let b = 2.0 * (f * d.conj()).re;
    let cc = f.norm_sqr() - r * r;
    let disc = b * b - 4.0 * a * cc;
    if a == 0.0 || disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // stable pair of roots
    let qv = -0.5 * (b + b.signum() * sq);
    let mut roots = [qv / a, if qv != 0.0 { cc / qv } else { f64::NAN }];
    if roots[0] > roots[1] {
        roots.swap(0, 1);
    }
    roots.into_iter().find(|&t| t > 0.0 && t <= 1.0)
}

/// splitmix64, used wherever a seed turns into a deterministic sequence.
pub(crate) struct SplitMix(pub u64);

impl SplitMix {
    pub(crate) fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub(crate) fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Recursive pairwise sum with a fixed split, so results do not depend on who calls it.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_c(xs: &[Complex64]) -> Complex64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        let mut s = Complex64::new(0.0, 0.0);
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

/// Pairwise sum of `f(i)` for `i in 0..n` without materializing the terms.
pub fn pairwise_map(n: usize, f: &impl Fn(usize) -> f64) -> f64 {
    fn go(lo: usize, hi: usize, f: &impl Fn(usize) -> f64) -> f64 {
        if hi - lo <= 16 {
            let mut s = 0.0;
            for i in lo..hi {
                s += f(i);
            }
            return s;
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, n, f)
}

pub fn pairwise_map_c(n: usize, f: &impl Fn(usize) -> Complex64) -> Complex64 {
    fn go(lo: usize, hi: usize, f: &impl Fn(usize) -> Complex64) -> Complex64 {
        if hi - lo <= 16 {
            let mut s = Complex64::new(0.0, 0.0);
            for i in lo..hi {
                s += f(i);
            }
            return s;
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, n, f)
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}
