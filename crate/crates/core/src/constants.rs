//! Special functions and the closed-form normalization constants.
//!
//! Every constant that has a closed form also has a quadrature counterpart
//! (`*_quadrature`) so the two can be compared against each other.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quad::{self, FarField, Kernel, Profile, Taylor, Wave};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest difference order accepted by [`diff_weights`].
pub const MAX_ORDER: usize = 20;

/// Gamma function for real arguments.
///
/// Positive integers up to 23 are returned exactly; negative arguments go
/// through the reflection formula.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("gamma of non-finite argument {x}"));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x == x.floor() && x <= 23.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    if x < 0.5 {
        let s = sin_pi(x);
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * acc
}

/// `sin(pi * alpha / 2)` with the reduction done on `alpha`, so even
/// integers give an exact zero and odd integers give exactly +-1.
pub fn sin_half_pi(alpha: f64) -> f64 {
    let r = alpha.rem_euclid(4.0);
    if r == 0.0 || r == 2.0 {
        0.0
    } else if r == 1.0 {
        1.0
    } else if r == 3.0 {
        -1.0
    } else if r < 1.0 {
        (0.5 * PI * r).sin()
    } else if r < 2.0 {
        (0.5 * PI * (r - 1.0)).cos()
    } else if r < 3.0 {
        -(0.5 * PI * (r - 2.0)).sin()
    } else {
        -(0.5 * PI * (r - 3.0)).cos()
    }
}

/// `cos(pi * alpha / 2)`, exact at integers.
pub fn cos_half_pi(alpha: f64) -> f64 {
    sin_half_pi(alpha + 1.0)
}

/// `sin(pi * x)`, exact at integers and half integers.
pub fn sin_pi(x: f64) -> f64 {
    sin_half_pi(2.0 * x)
}

/// True when `alpha / 2` is a non-negative integer, tested exactly.
pub fn is_even_integer(alpha: f64) -> bool {
    alpha >= 0.0 && alpha.rem_euclid(2.0) == 0.0
}

/// Binomial coefficient computed in exact integer arithmetic.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k) as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n as u128 - i) / (i + 1);
    }
    c as f64
}

/// Generalized binomial coefficient `C(x, l)` for real `x`.
pub fn binomial_real(x: f64, l: u32) -> f64 {
    let mut c = 1.0;
    for i in 0..l {
        c *= (x - i as f64) / (i + 1) as f64;
    }
    c
}

/// Weights of the symmetric difference operator of order 2m.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffWeights {
    m: usize,
    w: Vec<f64>,
}

impl DiffWeights {
    pub fn order(&self) -> usize {
        self.m
    }

    /// Weight at offset `p`; zero outside `[-m, m]`.
    pub fn weight(&self, p: i64) -> f64 {
        let m = self.m as i64;
        if p.abs() > m {
            0.0
        } else {
            self.w[(p + m) as usize]
        }
    }

    /// `(offset, weight)` pairs from `-m` to `m`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let m = self.m as i64;
        self.w.iter().enumerate().map(move |(i, &w)| (i as i64 - m, w))
    }

    /// Applies the stencil to `sample(p) = u(x + p h)`.
    pub fn apply(&self, mut sample: impl FnMut(i64) -> f64) -> f64 {
        self.iter().map(|(p, w)| w * sample(p)).sum()
    }

    /// `sum_p w_p p^(2j)`, computed in exact integer arithmetic when it fits.
    pub fn even_moment(&self, j: u32) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let mut acc: i128 = 0;
        for p in 1..=self.m as i128 {
            let w = self.w[(p + self.m as i128) as usize] as i128;
            let pw = match p.checked_pow(2 * j) {
                Some(v) => v,
                None => return self.even_moment_float(j),
            };
            match w.checked_mul(pw).and_then(|t| acc.checked_add(2 * t)) {
                Some(v) => acc = v,
                None => return self.even_moment_float(j),
            }
        }
        acc as f64
    }

    fn even_moment_float(&self, j: u32) -> f64 {
        let mut acc = 0.0;
        for p in 1..=self.m {
            acc += 2.0 * self.weight(p as i64) * (p as f64).powi(2 * j as i32);
        }
        acc
    }
}

/// Stencil weights of the order-2m symmetric difference, `1 <= m <= 20`.
pub fn diff_weights(m: usize) -> Result<DiffWeights> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::OrderOutOfRange(m));
    }
    let n = 2 * m as u32;
    let mut w = vec![0.0; 2 * m + 1];
    w[m] = -binomial(n, m as u32);
    for p in 1..=m {
        let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
        let c = sign * binomial(n, (m + p) as u32);
        w[m + p] = c;
        w[m - p] = c;
    }
    Ok(DiffWeights { m, w })
}

/// `2^(1+alpha) (-1)^m sum_{p=1}^m C(2m, m+p) (-1)^p p^alpha`.
///
/// Even integer exponents are summed in exact integer arithmetic.
pub fn central_diff_power(m: usize, alpha: f64) -> Result<f64> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::OrderOutOfRange(m));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return domain(format!("central_diff_power needs alpha >= 0, got {alpha}"));
    }
    let sign_m = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    if is_even_integer(alpha) && alpha <= 2.0 * m as f64 {
        if let Some(s) = exact_alternating_sum(m, (alpha / 2.0) as u32) {
            return Ok(2f64.powf(1.0 + alpha) * sign_m * s as f64);
        }
        if alpha < 2.0 * m as f64 && alpha > 0.0 {
            return Ok(0.0);
        }
    }
    let mut acc = 0.0;
    for p in 1..=m {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(2 * m as u32, (m + p) as u32) * (p as f64).powf(alpha);
    }
    Ok(2f64.powf(1.0 + alpha) * sign_m * acc)
}

fn exact_alternating_sum(m: usize, q: u32) -> Option<i128> {
    let mut acc: i128 = 0;
    for p in 1..=m as i128 {
        let c = binomial(2 * m as u32, (m as i128 + p) as u32) as i128;
        let t = c.checked_mul(p.checked_pow(2 * q)?)?;
        acc = if p % 2 == 0 { acc.checked_add(t)? } else { acc.checked_sub(t)? };
    }
    Some(acc)
}

/// `U_{n,alpha} = int |cos theta|^alpha dOmega` over the unit sphere in n dimensions.
pub fn unit_sphere_moment(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    if !(alpha > -1.0) {
        return domain(format!("unit sphere moment needs alpha > -1, got {alpha}"));
    }
    let nf = n as f64;
    Ok(2.0 * PI.powf(0.5 * (nf - 1.0)) * gamma(0.5 * (alpha + 1.0))? / gamma(0.5 * (alpha + nf))?)
}

/// Dimension-specific simplified forms of the unit sphere moment.
pub fn unit_sphere_moment_simplified(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    if !(alpha > -1.0) {
        return domain(format!("unit sphere moment needs alpha > -1, got {alpha}"));
    }
    Ok(match n {
        1 => 2.0,
        2 => 2.0 * PI.sqrt() * gamma(0.5 * (alpha + 1.0))? / gamma(1.0 + 0.5 * alpha)?,
        _ => 4.0 * PI / (alpha + 1.0),
    })
}

/// Surface area of the unit sphere in n dimensions.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        domain(format!("dimension n = {n} outside 1..=3"))
    }
}

fn check_v_window(m: usize, alpha: f64) -> Result<()> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::OrderOutOfRange(m));
    }
    if !(alpha > 0.0 && alpha < 2.0 * m as f64) {
        return domain(format!("alpha = {alpha} outside the window (0, 2m) = (0, {})", 2 * m));
    }
    Ok(())
}

/// `V_{m,alpha} = 2^(2m-alpha) int_0^inf sin^(2m)(xi) / xi^(alpha+1) dxi`.
///
/// Closed form away from even integers, quadrature at even integers.
pub fn v_integral(m: usize, alpha: f64) -> Result<f64> {
    check_v_window(m, alpha)?;
    if is_even_integer(alpha) {
        return v_integral_quadrature(m, alpha);
    }
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * PI / (2f64.powf(alpha + 1.0) * gamma(alpha + 1.0)? * sin_half_pi(alpha))
        * central_diff_power(m, alpha)?)
}

/// Taylor coefficients `c_j` of `sin^(2m)(xi) = sum_j c_j xi^(2j)`, `j < terms`.
pub fn sine_power_taylor(m: usize, terms: usize) -> Vec<f64> {
    // (sin x / x)^(2m) by the power recurrence for series with unit constant term.
    let k_max = terms.saturating_sub(m);
    let a: Vec<f64> = (0..=k_max)
        .map(|k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s / factorial(2 * k + 1)
        })
        .collect();
    let p = 2.0 * m as f64;
    let mut b = vec![0.0; k_max + 1];
    b[0] = 1.0;
    for k in 1..=k_max {
        let mut acc = 0.0;
        for j in 1..=k {
            acc += (p * j as f64 - (k - j) as f64) * a[j] * b[k - j];
        }
        b[k] = acc / k as f64;
    }
    let mut c = vec![0.0; terms];
    for (k, bk) in b.into_iter().enumerate() {
        if m + k < terms {
            c[m + k] = bk;
        }
    }
    c
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Radial profile of `sin^(2m)(xi)`: Taylor data near the origin and its
/// cosine expansion at large arguments.
pub fn sine_power_profile(m: usize) -> Profile<'static> {
    let scale = 2f64.powi(-2 * m as i32);
    let mut waves = Vec::with_capacity(m);
    for j in 1..=m {
        let s = if j % 2 == 0 { 1.0 } else { -1.0 };
        waves.push(Wave {
            amplitude: 2.0 * s * scale * binomial(2 * m as u32, (m - j) as u32),
            omega: 2.0 * j as f64,
            phase: 0.0,
        });
    }
    Profile::new(move |x: f64| x.sin().powi(2 * m as i32), 1.0)
        .with_taylor(Taylor { coeffs: sine_power_taylor(m, m + 30), radius: 0.25 })
        .with_far(FarField {
            start: 1.0,
            constant: scale * binomial(2 * m as u32, m as u32),
            waves,
        })
}

/// Quadrature evaluation of `V_{m,alpha}`, valid on the whole window `(0, 2m)`.
pub fn v_integral_quadrature(m: usize, alpha: f64) -> Result<f64> {
    check_v_window(m, alpha)?;
    let prof = sine_power_profile(m);
    let r = quad::radial_integral(&prof, &Kernel::Power { alpha }, 1e-14)?;
    Ok(2f64.powf(2.0 * m as f64 - alpha) * r.value)
}

/// Explicit product form of `A_{m,n,alpha}` in Gamma functions and the
/// alternating binomial sum.
pub fn a_explicit(m: usize, n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    check_v_window(m, alpha)?;
    if is_even_integer(alpha) {
        return domain(format!("explicit A is undetermined at even integer alpha = {alpha}"));
    }
    let nf = n as f64;
    let pre = 2.0 * PI.powf(0.5 * (nf + 1.0)) * gamma(0.5 * (alpha + 1.0))?
        / (gamma(0.5 * (alpha + nf))? * gamma(alpha + 1.0)? * sin_half_pi(alpha));
    let mut s = 0.0;
    for p in 1..=m {
        let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
        s += sign * binomial(2 * m as u32, (m + p) as u32) * (p as f64).powf(alpha);
    }
    Ok(pre * s)
}

/// Standard normalization constant, valid for every alpha >= 0.
///
/// Returns exactly 0 at even integer alpha, where the operator is local.
pub fn c_standard(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return domain(format!("C_standard needs alpha >= 0, got {alpha}"));
    }
    let s = sin_half_pi(alpha);
    if s == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    Ok(gamma(0.5 * (alpha + nf))? * gamma(alpha + 1.0)? * s
        / (PI.powf(0.5 * (nf + 1.0)) * gamma(0.5 * (alpha + 1.0))?))
}

/// Standard normalization constant in the form restricted to `0 < alpha < 2`.
pub fn c_standard_levy(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("alpha = {alpha} outside the Levy interval (0, 2)"));
    }
    let nf = n as f64;
    Ok(2f64.powf(alpha - 1.0) * alpha * gamma(0.5 * (alpha + nf))?
        / (PI.powf(0.5 * nf) * gamma(1.0 - 0.5 * alpha)?))
}

/// All normalization constants for one `(m, n, alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConstants {
    pub m: usize,
    pub n: usize,
    pub alpha: f64,
    pub u: f64,
    pub v: f64,
    pub a: f64,
    pub c_general: f64,
    pub c_standard: f64,
    /// Set when alpha/2 is an integer; `c_standard` is then 0.
    pub distributional: bool,
}

pub fn norm_constants(m: usize, n: usize, alpha: f64) -> Result<NormConstants> {
    check_dim(n)?;
    check_v_window(m, alpha)?;
    let u = unit_sphere_moment(n, alpha)?;
    let v = v_integral(m, alpha)?;
    let a = u * v;
    Ok(NormConstants {
        m,
        n,
        alpha,
        u,
        v,
        a,
        c_general: 1.0 / a,
        c_standard: c_standard(n, alpha)?,
        distributional: is_even_integer(alpha),
    })
}

/// Prefactor of the power-law dispersion in the continuum limit.
pub fn a_delta(delta: f64, h: f64, zeta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 2.0) {
        return domain(format!("delta = {delta} outside (0, 2)"));
    }
    if !(h > 0.0) || !(zeta > 0.0) {
        return domain(format!("a_delta needs h > 0 and zeta > 0, got h = {h}, zeta = {zeta}"));
    }
    Ok(h.powf(delta) / zeta * PI / (gamma(delta + 1.0)? * sin_half_pi(delta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.5).unwrap(), 0.5 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(30.0).unwrap(), 8.841_761_993_739_701e30) < 1e-13);
        assert!(rel(gamma(49.5).unwrap(), 8.667_601_843_135_272e61) < 1e-12);
        assert!(matches!(gamma(0.0), Err(Error::Pole(_))));
        assert!(matches!(gamma(-3.0), Err(Error::Pole(_))));
    }

    #[test]
    fn gamma_recurrence() {
        for i in 1..200 {
            let x = 0.037 + 0.25 * i as f64;
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 5e-14, "x = {x}");
        }
    }

    #[test]
    fn sin_half_pi_exact() {
        assert_eq!(sin_half_pi(1.0), 1.0);
        assert_eq!(sin_half_pi(2.0), 0.0);
        assert_eq!(sin_half_pi(4.0), 0.0);
        assert_eq!(sin_half_pi(3.0), -1.0);
        assert_eq!(sin_half_pi(-2.0), 0.0);
        assert!((sin_half_pi(0.5) - 0.5f64.sqrt()).abs() < 2e-16);
        for i in 0..100 {
            let a = -7.3 + 0.173 * i as f64;
            assert!((sin_half_pi(a) - (0.5 * PI * a).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn weights_small_orders() {
        let w1 = diff_weights(1).unwrap();
        assert_eq!(w1.iter().collect::<Vec<_>>(), vec![(-1, 1.0), (0, -2.0), (1, 1.0)]);
        let w2 = diff_weights(2).unwrap();
        let got: Vec<f64> = w2.iter().map(|(_, w)| w).collect();
        assert_eq!(got, vec![-1.0, 4.0, -6.0, 4.0, -1.0]);
        assert!(diff_weights(0).is_err());
        assert!(diff_weights(21).is_err());
    }

    #[test]
    fn weights_invariants() {
        for m in 1..=MAX_ORDER {
            let w = diff_weights(m).unwrap();
            let sum: f64 = w.iter().map(|(_, x)| x).sum();
            assert_eq!(sum, 0.0, "m = {m}");
            for p in 1..=m as i64 {
                assert_eq!(w.weight(p), w.weight(-p));
            }
        }
    }

    #[test]
    fn weights_on_monomial() {
        for m in 1..=8usize {
            let w = diff_weights(m).unwrap();
            let v = w.apply(|p| (p as f64).powi(2 * m as i32));
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            assert_eq!(v, sign * factorial(2 * m), "m = {m}");
        }
    }

    #[test]
    fn central_diff_power_values() {
        assert_eq!(central_diff_power(1, 1.0).unwrap(), 4.0);
        assert_eq!(central_diff_power(2, 1.0).unwrap(), -8.0);
        assert_eq!(central_diff_power(2, 2.0).unwrap(), 0.0);
        for m in 1..=MAX_ORDER {
            for q in 1..m {
                assert_eq!(central_diff_power(m, 2.0 * q as f64).unwrap(), 0.0, "m={m} q={q}");
            }
            assert!(central_diff_power(m, 2.0 * m as f64 - 0.3).unwrap() != 0.0);
        }
        // boundary alpha = 2m: 4^m (2m)! with the sign (-1)^m folded in
        for m in 1..=5usize {
            let v = central_diff_power(m, 2.0 * m as f64).unwrap();
            assert_eq!(v.abs(), 4f64.powi(m as i32) * factorial(2 * m));
        }
    }

    #[test]
    fn sphere_moments() {
        for &a in &[0.0, 0.5, 1.0, 1.5, 2.5, 3.0, 4.5] {
            for n in 1..=3 {
                let g = unit_sphere_moment(n, a).unwrap();
                let s = unit_sphere_moment_simplified(n, a).unwrap();
                assert!(rel(g, s) < 1e-12, "n={n} a={a}");
            }
        }
        assert_eq!(unit_sphere_moment(1, 0.7).unwrap(), 2.0);
        assert!(rel(unit_sphere_moment(3, 1.0).unwrap(), 2.0 * PI) < 1e-15);
        assert!(rel(unit_sphere_moment(2, 0.0).unwrap(), 2.0 * PI) < 1e-15);
        assert!(unit_sphere_moment(2, -1.0).is_err());
        assert!(unit_sphere_moment(4, 1.0).is_err());
    }

    #[test]
    fn v_integral_values() {
        assert!(rel(v_integral(1, 1.0).unwrap(), PI) < 1e-14);
        let want = PI / (gamma(1.5).unwrap() * (0.25 * PI).sin());
        assert!(rel(v_integral(1, 0.5).unwrap(), want) < 1e-14);
        assert!((v_integral(1, 0.5).unwrap() - 5.0133).abs() < 1e-4);
        assert!(v_integral(2, 2.0).unwrap() > 0.0);
        assert!(v_integral(1, 2.0).is_err());
        assert!(v_integral(1, 0.0).is_err());
    }

    #[test]
    fn v_integral_closed_vs_quadrature() {
        for &(m, a) in &[(1, 0.5), (1, 1.0), (1, 1.7), (2, 0.3), (2, 2.5), (2, 3.9), (3, 4.5), (5, 7.7)] {
            let c = v_integral(m, a).unwrap();
            let q = v_integral_quadrature(m, a).unwrap();
            assert!(rel(c, q) < 1e-10, "m={m} a={a}: {c} vs {q}");
        }
    }

    #[test]
    fn v_integral_integer_golden() {
        // m = 2, alpha = 2: 2^2 int sin^4 / xi^3 = 4 * ln 2
        let v = v_integral(2, 2.0).unwrap();
        assert!(rel(v, 4.0 * 2f64.ln()) < 1e-11, "{v}");
    }

    #[test]
    fn sine_taylor_matches() {
        let c = sine_power_taylor(2, 30);
        let x: f64 = 0.3;
        let s: f64 = c.iter().enumerate().map(|(j, cj)| cj * x.powi(2 * j as i32)).sum();
        assert!(rel(s, x.sin().powi(4)) < 1e-15);
    }

    #[test]
    fn standard_constants() {
        let c = c_standard(1, 1.0).unwrap();
        assert!(rel(c, 1.0 / PI) < 1e-15);
        assert!(rel(c_standard(1, 3.0).unwrap(), -6.0 / PI) < 1e-14);
        assert_eq!(c_standard(2, 2.0).unwrap(), 0.0);
        for i in 1..40 {
            let a = 0.05 * i as f64;
            for n in 1..=3 {
                let x = c_standard(n, a).unwrap();
                let y = c_standard_levy(n, a).unwrap();
                assert!(rel(x, y) < 1e-12, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn norm_constants_identities() {
        let k = norm_constants(1, 1, 1.0).unwrap();
        assert!(rel(k.a, 2.0 * PI) < 1e-14);
        assert!(rel(k.c_standard, 1.0 / PI) < 1e-14);
        assert!(!k.distributional);
        let k2 = norm_constants(2, 1, 2.0).unwrap();
        assert!(k2.distributional && k2.c_standard == 0.0 && k2.a > 0.0);
        assert!(norm_constants(1, 1, 3.0).is_err());
        for &a in &[0.3, 0.9, 1.4, 1.95] {
            for n in 1..=3 {
                let k = norm_constants(1, n, a).unwrap();
                assert!(rel(k.a, 2.0 / k.c_standard) < 1e-12);
            }
        }
    }

    #[test]
    fn explicit_a_matches_factorization() {
        for m in 1..=5usize {
            for n in 1..=3 {
                let mut a = 0.1;
                while a < 2.0 * m as f64 {
                    if !is_even_integer((a * 10.0f64).round() / 10.0) {
                        let k = norm_constants(m, n, a).unwrap();
                        let e = a_explicit(m, n, a).unwrap();
                        assert!(k.a > 0.0);
                        assert!(rel(k.a, e) < 1e-10, "m={m} n={n} a={a}");
                    }
                    a += 0.1;
                }
            }
        }
    }

    #[test]
    fn a_delta_values() {
        assert!(rel(a_delta(1.0, 1.0, 1.0).unwrap(), PI) < 1e-15);
        let c = c_standard(1, 1.0).unwrap();
        assert!((a_delta(1.0, 1.0, 1.0).unwrap() * c - 1.0).abs() < 1e-15);
        assert!(a_delta(1.99, 1.0, 1.0).unwrap() > 100.0);
        assert!(a_delta(2.0, 1.0, 1.0).is_err());
        for &d in &[0.2, 0.7, 1.3, 1.8] {
            let ad = a_delta(d, 1.3, 0.1).unwrap();
            let want = 1.3f64.powf(d) / 0.1 / c_standard(1, d).unwrap();
            assert!(rel(ad, want) < 1e-13);
        }
    }
}
