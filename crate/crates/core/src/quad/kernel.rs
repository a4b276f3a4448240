//! The regularized kernel `Re (eps - i xi)^(-alpha-1)`, its exact moments and
//! oscillatory power-law tails.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gk::{integrate_with, GkOptions};
use crate::constants::{binomial, binomial_real, cos_half_pi, sin_half_pi};
use crate::error::{domain, Error, Result};

/// `Re (eps - i xi)^(-alpha-1)` on the principal branch.
pub fn reg_kernel(xi: f64, alpha: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return domain(format!("regularization parameter must be positive, got {eps}"));
    }
    Ok(reg_kernel_unchecked(xi, alpha, eps))
}

#[inline]
pub(crate) fn reg_kernel_unchecked(xi: f64, alpha: f64, eps: f64) -> f64 {
    let rho = eps.hypot(xi);
    let theta = (-xi).atan2(eps);
    rho.powf(-alpha - 1.0) * ((alpha + 1.0) * theta).cos()
}

/// The same kernel written as `Re { i^(alpha+1) (xi + i eps)^(-alpha-1) }`.
pub fn reg_kernel_alt(xi: f64, alpha: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return domain(format!("regularization parameter must be positive, got {eps}"));
    }
    let rot = Complex64::from_polar(1.0, 0.5 * PI * (alpha + 1.0));
    let z = Complex64::new(xi, eps).powf(-alpha - 1.0);
    Ok((rot * z).re)
}

/// `lim_{eps->0} int_0^xi0 Re (eps - i xi)^(-alpha-1) dxi = sin(pi alpha / 2) xi0^(-alpha) / alpha`,
/// with the value `pi/2` at `alpha = 0`.
pub fn i_reg(xi0: f64, alpha: f64) -> Result<f64> {
    if !(xi0 > 0.0) {
        return domain(format!("i_reg needs xi0 > 0, got {xi0}"));
    }
    if !(alpha >= 0.0) {
        return domain(format!("i_reg needs alpha >= 0, got {alpha}"));
    }
    if alpha == 0.0 {
        return Ok(0.5 * PI);
    }
    Ok(sin_half_pi(alpha) * xi0.powf(-alpha) / alpha)
}

/// Exact finite-eps integral `int_0^b Re (eps - i xi)^(-alpha-1) dxi`.
pub fn reg_indicator_integral(b: f64, alpha: f64, eps: f64) -> f64 {
    reg_moment(0, b, alpha, eps)
}

// Im( w^x / x ), continuous through x = 0 where it equals arg w.
fn im_power_over(w: Complex64, x: f64) -> f64 {
    let (r, th) = w.to_polar();
    if x == 0.0 {
        th
    } else {
        r.powf(x) * (x * th).sin() / x
    }
}

/// `int_0^b xi^(2j) Re (eps - i xi)^(-alpha-1) dxi`, in closed form.
pub(crate) fn reg_moment(j: u32, b: f64, alpha: f64, eps: f64) -> f64 {
    let w = Complex64::new(eps, -b);
    let mut acc = 0.0;
    for l in 0..=2 * j {
        let c = binomial(2 * j, l) * (-eps).powi((2 * j - l) as i32);
        if c != 0.0 {
            acc += c * im_power_over(w, l as f64 - alpha);
        }
    }
    if j.is_multiple_of(2) {
        -acc
    } else {
        acc
    }
}

/// Kernels accepted by the radial engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `r^(-1-alpha)`
    Power { alpha: f64 },
    /// `Re (eps - i r)^(-1-alpha)`
    Regularized { alpha: f64, eps: f64 },
}

impl Kernel {
    pub fn alpha(&self) -> f64 {
        match *self {
            Kernel::Power { alpha } | Kernel::Regularized { alpha, .. } => alpha,
        }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Kernel::Power { alpha } => r.powf(-1.0 - alpha),
            Kernel::Regularized { alpha, eps } => reg_kernel_unchecked(r, alpha, eps),
        }
    }

    /// `int_0^b r^(2j) K(r) dr`.
    pub fn even_moment(&self, j: u32, b: f64) -> Result<f64> {
        match *self {
            Kernel::Power { alpha } => {
                let e = 2.0 * j as f64 - alpha;
                if e <= 0.0 {
                    return domain(format!(
                        "r^{} is not integrable against r^(-1-{alpha}) at the origin",
                        2 * j
                    ));
                }
                Ok(b.powf(e) / e)
            }
            Kernel::Regularized { alpha, eps } => Ok(reg_moment(j, b, alpha, eps)),
        }
    }

    /// `int_R^inf K(r) dr`.
    pub fn constant_tail(&self, r: f64) -> Result<f64> {
        let alpha = self.alpha();
        if !(alpha > 0.0) {
            return domain("constant far field is not integrable at alpha = 0");
        }
        match *self {
            Kernel::Power { .. } => Ok(r.powf(-alpha) / alpha),
            Kernel::Regularized { eps, .. } => {
                let w = Complex64::new(eps, -r).powf(-alpha);
                Ok(-w.im / alpha)
            }
        }
    }

    /// `int_R^inf cos(omega r + phase) K(r) dr`; for the regularized kernel
    /// `R` must exceed `eps` by a comfortable margin.
    pub fn wave_tail(&self, omega: f64, phase: f64, r: f64) -> Result<f64> {
        match *self {
            Kernel::Power { alpha } => cos_power_tail(omega, phase, 1.0 + alpha, r),
            Kernel::Regularized { alpha, eps } => {
                let q = eps / r;
                if q > 0.25 {
                    return domain(format!("far-field start {r} too close to eps = {eps}"));
                }
                let mut acc = 0.0;
                let mut qp = 1.0;
                for l in 0..200u32 {
                    let coef = binomial_real(-alpha - 1.0, l) * cos_half_pi(alpha + 1.0 + l as f64);
                    let scale = coef * qp * r.powi(l as i32);
                    if scale != 0.0 {
                        let t = scale * cos_power_tail(omega, phase, alpha + 1.0 + l as f64, r)?;
                        acc += t;
                        if t.abs() <= 1e-18 * acc.abs().max(1e-300) && l > 2 {
                            return Ok(acc);
                        }
                    }
                    qp *= q;
                    if qp * r.powi(l as i32 + 1) < 1e-300 {
                        return Ok(acc);
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// `int_R^inf cos(omega r + phase) r^(-beta) dr` for `omega >= 0`, `beta > 0`.
///
/// Integrated numerically up to `omega r = 40 + beta`, asymptotic series beyond.
pub fn cos_power_tail(omega: f64, phase: f64, beta: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !(beta > 0.0) {
        return domain(format!("cos_power_tail needs R > 0 and beta > 0, got R = {r}, beta = {beta}"));
    }
    if omega == 0.0 {
        if beta <= 1.0 {
            return domain("non-oscillatory tail r^(-beta) with beta <= 1 diverges");
        }
        return Ok(phase.cos() * r.powf(1.0 - beta) / (beta - 1.0));
    }
    if omega < 0.0 {
        return cos_power_tail(-omega, -phase, beta, r);
    }
    let b = omega * r;
    let big = b.max(40.0 + beta);
    let mut num = 0.0;
    if big > b {
        let g = |s: f64| (s + phase).cos() * s.powf(-beta);
        let q = integrate_with(g, b, big, GkOptions { abs_tol: 1e-17 * b.powf(-beta).max(1e-300), rel_tol: 1e-15, max_panels: 2000 });
        num = q.value;
    }
    // int_B^inf e^{is} s^{-beta} ds = i e^{iB} sum_j (-i)^j (beta)_j B^{-beta-j}
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(big.powf(-beta), 0.0);
    let mut prev = f64::INFINITY;
    for j in 0..400 {
        let mag = term.norm();
        if mag > prev {
            break;
        }
        sum += term;
        if mag <= 1e-18 * sum.norm() {
            break;
        }
        prev = mag;
        term = term * Complex64::new(0.0, -1.0) * ((beta + j as f64) / big);
    }
    let tail = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, big + phase) * sum;
    let v = omega.powf(beta - 1.0) * (num + tail.re);
    if !v.is_finite() {
        return Err(Error::Domain(format!("oscillatory tail overflow at omega = {omega}, beta = {beta}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gk::integrate_adaptive;

    #[test]
    fn kernel_examples() {
        let k = reg_kernel(1.0, 1.0, 1e-9).unwrap();
        assert!((k + 1.0).abs() < 1e-8);
        assert!((reg_kernel(0.0, 1.0, 0.1).unwrap() - 100.0).abs() < 1e-12);
        let k = reg_kernel(2.0, 0.5, 1e-6).unwrap();
        let want = -(0.25 * PI).sin() / 2f64.powf(1.5);
        assert!((k - want).abs() < 1e-6);
        assert!(reg_kernel(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn kernel_forms_agree() {
        for i in 0..30 {
            let xi = -3.0 + 0.23 * i as f64;
            for &a in &[0.0, 0.3, 1.0, 1.7, 2.5, 3.9] {
                for &e in &[1e-3, 0.1, 1.0] {
                    let x = reg_kernel(xi, a, e).unwrap();
                    let y = reg_kernel_alt(xi, a, e).unwrap();
                    assert!((x - y).abs() <= 1e-13 * x.abs().max(1.0), "{xi} {a} {e}");
                }
            }
        }
    }

    #[test]
    fn i_reg_values() {
        assert_eq!(i_reg(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(i_reg(1.0, 2.0).unwrap(), 0.0);
        assert!((i_reg(1.0, 1e-6).unwrap() - 0.5 * PI).abs() < 1e-6);
        assert_eq!(i_reg(3.0, 0.0).unwrap(), 0.5 * PI);
    }

    #[test]
    fn moments_match_quadrature() {
        for &a in &[0.5, 1.0, 2.001, 2.5, 3.5] {
            for &e in &[0.02, 0.3] {
                for j in 0..4 {
                    let b = 0.7;
                    let m = reg_moment(j, b, a, e);
                    let q = integrate_adaptive(
                        |x: f64| x.powi(2 * j as i32) * reg_kernel_unchecked(x, a, e),
                        0.0,
                        b,
                        1e-13,
                    )
                    .unwrap();
                    assert!((m - q.value).abs() < 1e-9 * q.value.abs().max(1.0), "a={a} e={e} j={j}: {m} vs {}", q.value);
                }
            }
        }
    }

    #[test]
    fn tails_match_quadrature() {
        let k = Kernel::Regularized { alpha: 0.7, eps: 0.05 };
        let r = 2.0;
        let t = k.constant_tail(r).unwrap();
        let q = integrate_adaptive(|x| k.eval(x), r, f64::INFINITY, 1e-13).unwrap();
        assert!((t - q.value).abs() < 1e-10);
        // oscillatory tail against a long finite integral plus the power-law remainder
        let w = cos_power_tail(1.3, 0.4, 2.5, 0.5).unwrap();
        let g = |x: f64| (1.3 * x + 0.4).cos() * x.powf(-2.5);
        let mut acc = 0.0;
        let mut lo = 0.5;
        while lo < 400.0 {
            acc += integrate_adaptive(g, lo, lo + 1.0, 1e-16).unwrap().value;
            lo += 1.0;
        }
        assert!((w - acc).abs() < 1e-6, "{w} {acc}");
        let r2 = 3.0 + 200.0 * PI;
        let wr = k.wave_tail(1.0, 0.0, 3.0).unwrap() - k.wave_tail(1.0, 0.0, r2).unwrap();
        let mut acc = 0.0;
        let mut lo = 3.0;
        while lo < r2 - 1.0 {
            acc += integrate_adaptive(|x: f64| x.cos() * k.eval(x), lo, lo + PI, 1e-16).unwrap().value;
            lo += PI;
        }
        assert!((wr - acc).abs() < 1e-12, "{wr} {acc}");
    }

    #[test]
    fn plane_wave_identity() {
        // int_0^inf cos(k xi) Re(eps - i xi)^(-a-1) = (pi/2) k^a e^(-eps k) / Gamma(a+1)
        let (a, e, kk): (f64, f64, f64) = (1.5, 0.2, 1.7);
        let kern = Kernel::Regularized { alpha: a, eps: e };
        let r0 = 0.3;
        let mut v: f64 = (0..40).map(|j| {
            let c = (-1f64).powi(j as i32) * kk.powi(2 * j as i32) / crate::constants::factorial(2 * j as usize);
            c * kern.even_moment(j, r0).unwrap()
        }).sum();
        v += integrate_adaptive(|x: f64| (kk * x).cos() * kern.eval(x), r0, 5.0, 1e-14).unwrap().value;
        v += kern.wave_tail(kk, 0.0, 5.0).unwrap();
        let want = 0.5 * PI * kk.powf(a) * (-e * kk).exp() / crate::constants::gamma(a + 1.0).unwrap();
        assert!((v - want).abs() < 1e-11, "{v} {want}");
    }
}
