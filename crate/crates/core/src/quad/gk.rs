//! Adaptive Gauss-Kronrod (10/21 point) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, ..., 9.
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
    /// Integral of `|f|`, used for the roundoff floor.
    pub resabs: f64,
}

/// Limits for [`integrate_with`].
#[derive(Debug, Clone, Copy)]
pub struct GkOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for GkOptions {
    fn default() -> Self {
        GkOptions { abs_tol: 1e-12, rel_tol: 0.0, max_panels: 4000 }
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    resabs: f64,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn rule<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut rk = WGK[10] * fc;
    let mut rg = 0.0;
    let mut fv = [(0.0, 0.0); 10];
    for i in 0..10 {
        let dx = h * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[i] = (f1, f2);
        rk += WGK[i] * (f1 + f2);
        if i % 2 == 1 {
            rg += WG[i / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * rk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    let mut resabs = WGK[10] * fc.abs();
    for i in 0..10 {
        resasc += WGK[i] * ((fv[i].0 - mean).abs() + (fv[i].1 - mean).abs());
        resabs += WGK[i] * (fv[i].0.abs() + fv[i].1.abs());
    }
    let value = rk * h;
    resasc *= h.abs();
    resabs *= h.abs();
    let mut err = ((rk - rg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err, resabs)
}

/// Adaptive integration returning the best estimate even when the
/// tolerance was not reached; check `error` against the request.
pub fn integrate_with<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, opts: GkOptions) -> QuadResult {
    if lo == hi {
        return QuadResult { value: 0.0, error: 0.0, evals: 0, resabs: 0.0 };
    }
    if hi < lo {
        let r = integrate_with(f, hi, lo, opts);
        return QuadResult { value: -r.value, ..r };
    }
    if hi.is_infinite() {
        let g = |t: f64| {
            let s = 1.0 - t;
            let x = lo + t / s;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        };
        return adapt(&g, 0.0, 1.0, opts);
    }
    adapt(&f, lo, hi, opts)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, opts: GkOptions) -> QuadResult {
    let (v, e, ra) = rule(f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { lo, hi, value: v, error: e, resabs: ra, seq: 0 });
    let mut total_err = e;
    let mut total_val = v;
    let mut evals = 21;
    let mut seq = 1;
    while heap.len() < opts.max_panels {
        let target = opts.abs_tol.max(opts.rel_tol * total_val.abs());
        if total_err <= target {
            break;
        }
        let p = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (p.lo + p.hi);
        if !(mid > p.lo && mid < p.hi) {
            heap.push(p);
            break;
        }
        let (v1, e1, r1) = rule(f, p.lo, mid);
        let (v2, e2, r2) = rule(f, mid, p.hi);
        evals += 42;
        total_err += e1 + e2 - p.error;
        total_val += v1 + v2 - p.value;
        // Panel already at the roundoff floor: further splitting cannot help.
        let floor = 50.0 * f64::EPSILON * (r1 + r2);
        heap.push(Panel { lo: p.lo, hi: mid, value: v1, error: e1, resabs: r1, seq });
        heap.push(Panel { lo: mid, hi: p.hi, value: v2, error: e2, resabs: r2, seq: seq + 1 });
        seq += 2;
        if e1 + e2 <= floor && p.error <= floor {
            break;
        }
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    let mut resabs = 0.0;
    for p in &panels {
        resabs += p.resabs;
        let t = value + p.value;
        if value.abs() >= p.value.abs() {
            comp += (value - t) + p.value;
        } else {
            comp += (p.value - t) + value;
        }
        value = t;
        error += p.error;
    }
    QuadResult { value: value + comp, error, evals, resabs }
}

/// Adaptive quadrature of `f` over `[lo, hi]`; `hi` may be `+inf`.
///
/// Fails when the absolute error estimate stays above `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    let r = integrate_with(f, lo, hi, GkOptions { abs_tol: tol, ..GkOptions::default() });
    if !r.value.is_finite() || r.error > tol.max(100.0 * f64::EPSILON * r.resabs) {
        return Err(Error::Quadrature { value: r.value, error: r.error, tol });
    }
    Ok(r)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simple_integrals() {
        let r = integrate_adaptive(|x| x, 0.0, 1.0, 1e-14).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        let r = integrate_adaptive(|x| (-x).exp(), 0.0, f64::INFINITY, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_adaptive(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
        let r = integrate_adaptive(|x| x, 1.0, 0.0, 1e-14).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn budget_failure_is_reported() {
        let r = integrate_adaptive(|x: f64| (1.0 / x).sin() / x, 1e-9, 1.0, 1e-15);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn legendre_exactness() {
        for n in [1usize, 2, 5, 12, 40] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}");
            let deg = 2 * n - 1;
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32 - 1)).sum();
            let want = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((q - want).abs() < 1e-13, "n={n}");
        }
        let (x, w) = gauss_legendre(30);
        let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * (PI * xi).cos()).sum();
        assert!(q.abs() < 1e-14);
    }
}
