//! Singular-integral engine: adaptive quadrature, the regularized kernel and
//! half-line regularized integrals extrapolated to `eps -> 0`.

mod gk;
mod kernel;
mod profile;

pub use gk::{gauss_legendre, integrate_adaptive, integrate_with, GkOptions, QuadResult};
pub use kernel::{cos_power_tail, i_reg, reg_indicator_integral, reg_kernel, reg_kernel_alt, Kernel};
pub use profile::{radial_integral, FarField, Profile, Taylor, Wave};

use crate::error::{domain, Error, Result};

/// Outer cutoff of a radial integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// Chosen from the field's decay, or infinite for bare callables.
    Auto,
    Fixed(f64),
}

/// Radial quadrature configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSpec {
    pub cutoff: Cutoff,
    /// Absolute tolerance per quadrature panel group.
    pub tol: f64,
    /// First regularization parameter, in units of the profile scale.
    pub eps0: f64,
    /// The sequence is `eps0 * 2^-j` for `j = 0..=levels`.
    pub levels: usize,
    /// Number of Neville columns; capped at `levels`.
    pub order: usize,
    /// Length scale used for bare callables.
    pub scale: f64,
    /// Discontinuities of a bare callable.
    pub breakpoints: Vec<f64>,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            cutoff: Cutoff::Auto,
            tol: 1e-13,
            eps0: 0.5,
            levels: 8,
            order: 8,
            scale: 1.0,
            breakpoints: Vec::new(),
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 > 0.0) {
            return domain(format!("eps0 must be positive, got {}", self.eps0));
        }
        if self.levels < 2 {
            return domain(format!("need at least 2 refinement levels, got {}", self.levels));
        }
        if !(self.tol > 0.0) {
            return domain(format!("tolerance must be positive, got {}", self.tol));
        }
        if !(self.scale > 0.0) {
            return domain(format!("scale must be positive, got {}", self.scale));
        }
        if let Cutoff::Fixed(r) = self.cutoff {
            if !(r > 0.0) {
                return domain(format!("cutoff must be positive, got {r}"));
            }
        }
        Ok(())
    }

    /// The regularization parameters for a profile of the given scale.
    pub fn eps_sequence(&self, scale: f64) -> Vec<f64> {
        (0..=self.levels).map(|j| self.eps0 * scale * 0.5f64.powi(j as i32)).collect()
    }
}

/// Result of an `eps -> 0` extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct RegResult {
    pub value: f64,
    pub error: f64,
    /// `(eps, integral)` pairs that entered the extrapolation.
    pub samples: Vec<(f64, f64)>,
}

/// Polynomial (Neville) extrapolation of `ys(xs)` to `x = 0`.
///
/// Returns the value and the size of the last correction.
pub fn neville(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len().min(ys.len());
    if n == 0 {
        return (f64::NAN, f64::INFINITY);
    }
    let mut t = ys[..n].to_vec();
    let mut prev_diag = t[0];
    let mut last_corr = f64::INFINITY;
    for k in 1..n {
        for i in (k..n).rev() {
            t[i] = (xs[i - k] * t[i] - xs[i] * t[i - 1]) / (xs[i - k] - xs[i]);
        }
        last_corr = (t[k] - prev_diag).abs();
        prev_diag = t[k];
    }
    (t[n - 1], last_corr)
}

/// Neville tableau diagonal: the extrapolated value after each added sample.
pub fn neville_diagonal(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len().min(ys.len());
    let mut t = ys[..n].to_vec();
    let mut diag = Vec::with_capacity(n);
    if n > 0 {
        diag.push(t[0]);
    }
    for k in 1..n {
        for i in (k..n).rev() {
            t[i] = (xs[i - k] * t[i] - xs[i] * t[i - 1]) / (xs[i - k] - xs[i]);
        }
        diag.push(t[k]);
    }
    diag
}

/// `lim_{eps->0} int_0^inf S(r) Re (eps - i r)^(-alpha-1) dr` for a profile.
pub fn reg_halfline_profile(p: &Profile, alpha: f64, spec: &QuadSpec) -> Result<RegResult> {
    spec.validate()?;
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return domain(format!("regularized integral needs alpha >= 0, got {alpha}"));
    }
    let eps = spec.eps_sequence(p.scale());
    let mut vals = Vec::with_capacity(eps.len());
    for &e in &eps {
        let r = radial_integral(p, &Kernel::Regularized { alpha, eps: e }, spec.tol)?;
        vals.push(r.value);
    }
    extrapolate(&eps, &vals, spec)
}

fn extrapolate(eps: &[f64], vals: &[f64], spec: &QuadSpec) -> Result<RegResult> {
    let cols = spec.order.clamp(1, spec.levels) + 1;
    let lo = eps.len() - cols;
    let diag = neville_diagonal(&eps[lo..], &vals[lo..]);
    let n = diag.len();
    let value = diag[n - 1];
    let last = (diag[n - 1] - diag[n - 2]).abs();
    let previous = if n >= 3 { (diag[n - 2] - diag[n - 3]).abs() } else { f64::INFINITY };
    let floor = 1e-9 * (1.0 + value.abs());
    if last > previous && last > floor {
        return Err(Error::Extrapolation { last, previous });
    }
    Ok(RegResult {
        value,
        error: last,
        samples: eps.iter().copied().zip(vals.iter().copied()).collect(),
    })
}

/// Regularized half-line integral of a bare callable.
///
/// The callable must be bounded and decay at infinity (or be cut off by
/// `spec.cutoff`); `spec.scale` and `spec.breakpoints` describe it.
pub fn reg_halfline(f: impl Fn(f64) -> f64, alpha: f64, spec: &QuadSpec) -> Result<RegResult> {
    let mut p = Profile::new(f, spec.scale).with_breakpoints(spec.breakpoints.clone());
    if let Cutoff::Fixed(r) = spec.cutoff {
        p = p.with_cutoff(r);
    }
    reg_halfline_profile(&p, alpha, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::sin_half_pi;

    #[test]
    fn neville_exact_on_polynomials() {
        let xs = [1.0, 0.5, 0.25, 0.125];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + 0.5 * x * x * x).collect();
        let (v, _) = neville(&xs, &ys);
        assert!((v - 3.0).abs() < 1e-13);
    }

    #[test]
    fn indicator_matches_i_reg() {
        for &a in &[0.5, 1.0, 1.5, 2.5] {
            let spec = QuadSpec { breakpoints: vec![1.0], ..QuadSpec::default() };
            let r = reg_halfline(|x| if x < 1.0 { 1.0 } else { 0.0 }, a, &spec).unwrap();
            let want = sin_half_pi(a) / a;
            assert!((r.value - want).abs() < 1e-9, "a={a}: {} vs {want}", r.value);
            assert!((r.value - i_reg(1.0, a).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_field_vanishes() {
        for &a in &[0.5, 1.0, 1.5, 2.5] {
            let r = reg_halfline_profile(&Profile::constant(1.0), a, &QuadSpec::default()).unwrap();
            assert!(r.value.abs() < 1e-8, "a={a}: {}", r.value);
        }
    }

    #[test]
    fn bad_spec_rejected() {
        let spec = QuadSpec { levels: 1, ..QuadSpec::default() };
        assert!(reg_halfline(|_| 0.0, 1.0, &spec).is_err());
        let spec = QuadSpec { eps0: 0.0, ..QuadSpec::default() };
        assert!(reg_halfline(|_| 0.0, 1.0, &spec).is_err());
    }
}
