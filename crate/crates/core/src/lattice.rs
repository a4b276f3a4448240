//! Self-similar lattice energies, Laplacians and Weierstrass-Mandelbrot
//! dispersion relations, and their fractional continuum limit.

use crate::constants::{binomial, diff_weights, factorial, sine_power_profile, DiffWeights};
use crate::dd::Dd;
use crate::error::{domain, Error, Result};
use crate::field::TestField;
use crate::quad::{integrate_with, radial_integral, FarField, GkOptions, Kernel, Profile, QuadResult, Taylor, Wave};

/// Largest one-sided index the truncation rule may ask for.
pub const MAX_TERMS: i64 = 200_000;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Sum over `s` in `[-S, S]`.
    Explicit(i64),
    /// Pick the range so both geometric tail bounds stay below the tolerance.
    Tolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarParams {
    pub delta: f64,
    pub a: f64,
    pub h: f64,
    pub m: usize,
    pub f_m: f64,
    pub truncation: Truncation,
}

impl SelfSimilarParams {
    pub fn new(delta: f64, a: f64, h: f64, m: usize) -> Result<Self> {
        diff_weights(m)?;
        if !(delta > 0.0 && delta < 2.0 * m as f64) {
            return domain(format!("delta must lie in (0, {}) for m = {m}, got {delta}", 2 * m));
        }
        if !(a > 1.0) || !a.is_finite() {
            return domain(format!("scale ratio a must exceed 1, got {a}"));
        }
        if !(h > 0.0) || !h.is_finite() {
            return domain(format!("lattice length h must be positive, got {h}"));
        }
        Ok(SelfSimilarParams { delta, a, h, m, f_m: 1.0, truncation: Truncation::Tolerance(DEFAULT_TOL) })
    }

    pub fn with_f_m(mut self, f_m: f64) -> Result<Self> {
        if !(f_m > 0.0) || !f_m.is_finite() {
            return domain(format!("spring constant must be positive, got {f_m}"));
        }
        self.f_m = f_m;
        Ok(self)
    }

    pub fn with_truncation(mut self, t: Truncation) -> Result<Self> {
        match t {
            Truncation::Explicit(s) if !(0..=MAX_TERMS).contains(&s) => {
                return domain(format!("explicit truncation must lie in [0, {MAX_TERMS}], got {s}"))
            }
            Truncation::Tolerance(tol) if !(tol > 0.0) => {
                return domain(format!("truncation tolerance must be positive, got {tol}"))
            }
            _ => {}
        }
        self.truncation = t;
        Ok(self)
    }

    pub fn with_h(mut self, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return domain(format!("lattice length h must be positive, got {h}"));
        }
        self.h = h;
        Ok(self)
    }

    /// `zeta = ln a`.
    pub fn zeta(&self) -> f64 {
        self.a.ln()
    }
}

/// A truncated self-similar sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumResult {
    pub value: f64,
    /// Certified bound on the omitted terms on both sides.
    pub tail_bound: f64,
    pub s_min: i64,
    pub s_max: i64,
}

// Smallest S >= 0 with b * e^{-rate (S+1)} / (1 - e^{-rate}) <= tol.
fn geometric_cut(b: f64, rate: f64, tol: f64) -> Option<i64> {
    if b <= 0.0 {
        return Some(0);
    }
    let denom = -(-rate).exp_m1();
    let need = (b / (tol * denom)).ln() / rate - 1.0;
    if need <= 0.0 {
        return Some(0);
    }
    let s = need.ceil();
    if s > MAX_TERMS as f64 {
        None
    } else {
        Some(s as i64)
    }
}

fn geometric_tail(b: f64, rate: f64, s: i64) -> f64 {
    if b <= 0.0 {
        return 0.0;
    }
    b * (-rate * (s + 1) as f64).exp() / -(-rate).exp_m1()
}

// Chooses [s_min, s_max] from bounds B_plus a^{-delta s} for s > 0 and
// B_minus a^{(2m - delta) s} for s < 0.
fn range(p: &SelfSimilarParams, b_plus: Option<f64>, b_minus: Option<f64>) -> Result<(i64, i64, f64)> {
    let la = p.a.ln();
    let r_plus = p.delta * la;
    let r_minus = (2.0 * p.m as f64 - p.delta) * la;
    match p.truncation {
        Truncation::Explicit(s) => {
            let t = b_plus.map_or(f64::INFINITY, |b| geometric_tail(b, r_plus, s))
                + b_minus.map_or(f64::INFINITY, |b| geometric_tail(b, r_minus, s));
            Ok((-s, s, t))
        }
        Truncation::Tolerance(tol) => {
            let (bp, bm) = match (b_plus, b_minus) {
                (Some(x), Some(y)) => (x, y),
                _ => {
                    return domain("no derivative bound for this field: use an explicit truncation");
                }
            };
            let half = 0.5 * tol;
            let sp = geometric_cut(bp, r_plus, half);
            let sm = geometric_cut(bm, r_minus, half);
            match (sp, sm) {
                (Some(sp), Some(sm)) => {
                    let t = geometric_tail(bp, r_plus, sp) + geometric_tail(bm, r_minus, sm);
                    Ok((-sm, sp, t))
                }
                _ => {
                    let t = geometric_tail(bp, r_plus, MAX_TERMS) + geometric_tail(bm, r_minus, MAX_TERMS);
                    Err(Error::Truncation { bound: t, tol, terms: MAX_TERMS })
                }
            }
        }
    }
}

struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn new() -> Self {
        Neumaier { sum: 0.0, comp: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

// Runs term(s, a^s) for s in [lo, hi] in increasing order.
fn sum_range(a: f64, lo: i64, hi: i64, mut term: impl FnMut(i64, Dd) -> f64) -> f64 {
    let ad = Dd::from_f64(a);
    let mut acc = Neumaier::new();
    for s in lo..=hi {
        acc.add(term(s, ad.powi(s)));
    }
    acc.value()
}

/// `omega^2_{m,delta}(kh) = 4^m sum_s a^{-delta s} sin^{2m}(kh a^s / 2)` with
/// truncation data.
pub fn wm_dispersion_sum(kh: f64, p: &SelfSimilarParams) -> Result<SumResult> {
    if !(kh >= 0.0) || !kh.is_finite() {
        return domain(format!("kh must be a finite non-negative number, got {kh}"));
    }
    if kh == 0.0 {
        return Ok(SumResult { value: 0.0, tail_bound: 0.0, s_min: 0, s_max: 0 });
    }
    let m = p.m as i32;
    let four_m = 4f64.powi(m);
    let (lo, hi, tail) = range(p, Some(four_m), Some(kh.powi(2 * m)))?;
    let khd = Dd::from_f64(kh);
    let v = sum_range(p.a, lo, hi, |s, as_| {
        let s2 = khd.mul(as_).mul_f64(0.5).sin();
        p.a.powf(-p.delta * s as f64) * s2.powi(2 * m)
    });
    Ok(SumResult { value: four_m * v, tail_bound: tail, s_min: lo, s_max: hi })
}

/// Weierstrass-Mandelbrot dispersion relation `omega^2(kh)`.
pub fn wm_dispersion(kh: f64, p: &SelfSimilarParams) -> Result<f64> {
    Ok(wm_dispersion_sum(kh, p)?.value)
}

fn check_1d(u: &TestField, x: f64) -> Result<()> {
    if u.dim() != 1 {
        return domain(format!("lattice operators act on one-dimensional fields, got dimension {}", u.dim()));
    }
    if !x.is_finite() {
        return domain("evaluation point must be finite");
    }
    Ok(())
}

const SMALL_SHIFT: f64 = 0.1;

// Delta_2m(t) u(x), by Taylor series when the stencil is short.
fn central_term(u: &TestField, x: f64, t: Dd, w: &DiffWeights) -> f64 {
    let m = w.order();
    let tf = t.to_f64();
    if m as f64 * tf < SMALL_SHIFT * u.scale() && u.derivative_1d(x, 0).is_some() {
        let mut acc = 0.0;
        for j in m..m + 40 {
            let d = u.derivative_1d(x, 2 * j).unwrap_or(0.0);
            let term = tf.powi(2 * j as i32) / factorial(2 * j) * w.even_moment(j as u32) * d;
            acc += term;
            if j > m + 2 && term.abs() <= 1e-18 * acc.abs() {
                break;
            }
        }
        return acc;
    }
    let mut acc = Neumaier::new();
    for (q, wq) in w.iter() {
        acc.add(wq * u.eval_shift_1d_dd(x, t.mul_f64(q as f64)));
    }
    acc.value()
}

// Stirling numbers of the second kind times m!: coefficients of (e^z - 1)^m.
fn forward_coefficients(m: usize, kmax: usize) -> Vec<f64> {
    let mut s = vec![vec![0.0f64; m + 1]; kmax + 1];
    s[0][0] = 1.0;
    for k in 1..=kmax {
        for j in 1..=m.min(k) {
            s[k][j] = j as f64 * s[k - 1][j] + s[k - 1][j - 1];
        }
    }
    (0..=kmax).map(|k| factorial(m) * s[k][m]).collect()
}

// (D(t) - 1)^m u(x)
fn forward_term(u: &TestField, x: f64, t: Dd, m: usize, coeffs: &[f64]) -> f64 {
    let tf = t.to_f64();
    if m as f64 * tf < SMALL_SHIFT * u.scale() && u.derivative_1d(x, 0).is_some() {
        let mut acc = 0.0;
        for (k, c) in coeffs.iter().enumerate().skip(m) {
            let term = tf.powi(k as i32) / factorial(k) * c * u.derivative_1d(x, k).unwrap_or(0.0);
            acc += term;
            if k > m + 4 && term.abs() <= 1e-18 * acc.abs() {
                break;
            }
        }
        return acc;
    }
    let mut acc = Neumaier::new();
    for j in 0..=m {
        let sign = if (m - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc.add(sign * binomial(m as u32, j as u32) * u.eval_shift_1d_dd(x, t.mul_f64(j as f64)));
    }
    acc.value()
}

/// Self-similar Laplacian `sum_s a^{-delta s} Delta_2m(a^s h) u(x)` with
/// truncation data.
pub fn selfsim_laplacian_sum(u: &TestField, x: f64, p: &SelfSimilarParams) -> Result<SumResult> {
    check_1d(u, x)?;
    let w = diff_weights(p.m)?;
    let m = p.m as i32;
    let b_plus = Some(4f64.powi(m) * u.sup_norm());
    let b_minus = u.derivative_bound(2 * p.m).map(|d| p.h.powi(2 * m) * d);
    let (lo, hi, tail) = range(p, b_plus, b_minus)?;
    let hd = Dd::from_f64(p.h);
    let v = sum_range(p.a, lo, hi, |s, as_| {
        p.a.powf(-p.delta * s as f64) * central_term(u, x, hd.mul(as_), &w)
    });
    Ok(SumResult { value: v, tail_bound: tail, s_min: lo, s_max: hi })
}

pub fn selfsim_laplacian(u: &TestField, x: f64, p: &SelfSimilarParams) -> Result<f64> {
    Ok(selfsim_laplacian_sum(u, x, p)?.value)
}

/// Elastic energy density `(f_m / 2) sum_s a^{-delta s} {(D(h a^s) - 1)^m u(x)}^2`
/// with truncation data.
pub fn wm_energy_density_sum(u: &TestField, x: f64, p: &SelfSimilarParams) -> Result<SumResult> {
    check_1d(u, x)?;
    let m = p.m;
    let half = 0.5 * p.f_m;
    let sup = u.sup_norm();
    let b_plus = Some(half * 4f64.powi(m as i32) * sup * sup);
    let b_minus = u.derivative_bound(m).map(|d| half * p.h.powi(2 * m as i32) * d * d);
    let (lo, hi, tail) = range(p, b_plus, b_minus)?;
    let coeffs = forward_coefficients(m, m + 60);
    let hd = Dd::from_f64(p.h);
    let v = sum_range(p.a, lo, hi, |s, as_| {
        let d = forward_term(u, x, hd.mul(as_), m, &coeffs);
        p.a.powf(-p.delta * s as f64) * d * d
    });
    Ok(SumResult { value: half * v, tail_bound: tail, s_min: lo, s_max: hi })
}

pub fn wm_energy_density(u: &TestField, x: f64, p: &SelfSimilarParams) -> Result<f64> {
    Ok(wm_energy_density_sum(u, x, p)?.value)
}

/// `sum_{s=lo}^{hi} a^{-delta s} f(a^s h)`, summed in increasing `s`.
pub fn self_similar_sum(f: impl Fn(f64) -> f64, delta: f64, a: f64, h: f64, lo: i64, hi: i64) -> f64 {
    let hd = Dd::from_f64(h);
    sum_range(a, lo, hi, |s, as_| a.powf(-delta * s as f64) * f(hd.mul(as_).to_f64()))
}

/// `h^delta int_0^inf f(tau) tau^{-delta-1} dtau` for an admissible callable.
///
/// The integral runs over dyadic panels `[h 2^k, h 2^{k+1}]` up to
/// `R = 2^14 h`; beyond `R` the mean of `f` on the last panel stands in for
/// `f`. Oscillating tails therefore limit the accuracy to about
/// `R^{-delta-1}`; structured generators should use
/// [`fractional_continuum_limit_profile`].
pub fn fractional_continuum_limit(f: impl Fn(f64) -> f64, delta: f64, h: f64) -> Result<f64> {
    Ok(fractional_continuum_limit_tol(f, delta, h, 1e-12)?.value)
}

const DYADIC_PANELS: i32 = 14;

pub fn fractional_continuum_limit_tol(f: impl Fn(f64) -> f64, delta: f64, h: f64, tol: f64) -> Result<QuadResult> {
    if !(delta > 0.0) || !delta.is_finite() {
        return domain(format!("delta must be positive, got {delta}"));
    }
    if !(h > 0.0) || !h.is_finite() {
        return domain(format!("h must be positive, got {h}"));
    }
    // tau = h t turns h^delta int f(tau) tau^{-delta-1} dtau into int f(h t) t^{-delta-1} dt
    let g = |t: f64| if t == 0.0 { 0.0 } else { f(h * t) * t.powf(-delta - 1.0) };
    let opts = GkOptions { abs_tol: tol / (2.0 * DYADIC_PANELS as f64), rel_tol: 0.0, max_panels: 8000 };
    let fail = |v: f64, e: f64| Err(Error::Quadrature { value: v, error: e, tol });
    let first = integrate_with(g, 0.0, 1.0, opts);
    let mut value = first.value;
    let mut error = first.error;
    let mut evals = first.evals;
    let mut prev = f64::INFINITY;
    let mut last = 0.0;
    for k in 0..DYADIC_PANELS {
        let (lo, hi) = (2f64.powi(k), 2f64.powi(k + 1));
        let q = integrate_with(g, lo, hi, opts);
        value += q.value;
        error += q.error;
        evals += q.evals;
        last = q.value;
        if k >= DYADIC_PANELS - 3 {
            if q.value.abs() > 0.75 * prev && q.value.abs() > tol {
                return fail(value, f64::INFINITY);
            }
            prev = q.value.abs();
        }
    }
    let r = 2f64.powi(DYADIC_PANELS);
    let mean = integrate_with(|t: f64| f(h * t), 0.5 * r, r, opts);
    evals += mean.evals;
    let tail = 2.0 * mean.value / r * r.powf(-delta) / delta;
    value += tail;
    error += tail.abs().min(last.abs()) * r.recip() + mean.error / r;
    if !value.is_finite() || error > tol.max(1e-6 * value.abs()) {
        return fail(value, error);
    }
    Ok(QuadResult { value, error, evals, resabs: 0.0 })
}

/// The same limit for a structured profile `f`.
pub fn fractional_continuum_limit_profile(f: &Profile, delta: f64, h: f64, tol: f64) -> Result<QuadResult> {
    if !(h > 0.0) {
        return domain(format!("h must be positive, got {h}"));
    }
    let q = radial_integral(f, &Kernel::Power { alpha: delta }, tol)?;
    let s = h.powf(delta);
    Ok(QuadResult { value: s * q.value, error: s * q.error, evals: q.evals, resabs: q.resabs })
}

/// Profile of `4^m sin^{2m}(tau / 2)`, the generator of the order-m dispersion.
pub fn dispersion_generator(m: usize) -> Result<Profile<'static>> {
    diff_weights(m)?;
    let base = sine_power_profile(m);
    let four_m = 4f64.powi(m as i32);
    let t = base.taylor().expect("sine power profile has Taylor data");
    let coeffs = t.coeffs.iter().enumerate().map(|(j, c)| c * four_m / 4f64.powi(j as i32)).collect();
    let far = base.far().expect("sine power profile has a far field");
    let waves = far
        .waves
        .iter()
        .map(|w| Wave { amplitude: four_m * w.amplitude, omega: 0.5 * w.omega, phase: w.phase })
        .collect();
    Ok(Profile::new(move |t: f64| four_m * (0.5 * t).sin().powi(2 * m as i32), 2.0)
        .with_taylor(Taylor { coeffs, radius: 2.0 * t.radius })
        .with_far(FarField { start: 2.0 * far.start, constant: four_m * far.constant, waves }))
}

/// `A'_delta`: the fractional continuum limit of `4^m sin^{2m}(tau/2)` at `h = 1`,
/// so that `ln(a) omega^2_a(kh) -> A'_delta (kh)^delta` as `a -> 1`.
pub fn continuum_constant(m: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 2.0 * m as f64) {
        return domain(format!("delta must lie in (0, {}) for m = {m}, got {delta}", 2 * m));
    }
    let p = dispersion_generator(m)?;
    Ok(fractional_continuum_limit_profile(&p, delta, 1.0, 1e-14)?.value)
}

/// One row of a continuum-limit study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumPoint {
    pub a: f64,
    /// `ln(a) omega^2_a(kh)`
    pub scaled: f64,
    /// `A'_delta (kh)^delta`
    pub limit: f64,
    pub error: f64,
}

/// `ln(a) omega^2_a(kh)` against its `a -> 1` limit for a sequence of ratios.
pub fn continuum_study(delta: f64, m: usize, kh: f64, a_values: &[f64], tol: f64) -> Result<Vec<ContinuumPoint>> {
    let limit = continuum_constant(m, delta)? * kh.powf(delta);
    let mut out = Vec::with_capacity(a_values.len());
    for &a in a_values {
        let p = SelfSimilarParams::new(delta, a, 1.0, m)?.with_truncation(Truncation::Tolerance(tol))?;
        let scaled = a.ln() * wm_dispersion(kh, &p)?;
        out.push(ContinuumPoint { a, scaled, limit, error: (scaled - limit).abs() });
    }
    Ok(out)
}
