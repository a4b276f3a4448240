//! Continuum representations of the fractional Laplacian `-(-Delta)^(alpha/2)`
//! applied to test fields in one to three dimensions.

use std::f64::consts::PI;
use std::fmt;

use crate::constants::{self, c_standard, diff_weights, gamma, norm_constants, sphere_area, unit_sphere_moment};
use crate::error::{domain, Error, Result};
use crate::field::{norm, Decay, TestField};
use crate::quad::{
    gauss_legendre, radial_integral, reg_halfline_profile, Cutoff, FarField, Kernel, Profile, QuadSpec,
    Taylor, Wave,
};

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Standard,
    OrderM(usize),
    Regularized,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Standard => write!(f, "standard"),
            Representation::OrderM(m) => write!(f, "order-m({m})"),
            Representation::Regularized => write!(f, "regularized"),
        }
    }
}

/// Prefactor of the order-2m representation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Normalization {
    /// `1 / A_{m,n,alpha}`: plane waves get eigenvalue `-|k|^alpha`.
    #[default]
    UnitEigenvalue,
    /// `h^alpha / (2 zeta)`, the prefactor that survives the continuum limit of a lattice.
    Physical { h: f64, zeta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FLResult {
    pub value: f64,
    pub representation: Representation,
    pub alpha: f64,
    pub n: usize,
    pub m: Option<usize>,
    /// Estimated absolute numerical error.
    pub error: f64,
    /// Set near even integer exponents where the fractional branch is stiff.
    pub warning: Option<String>,
}

const TAYLOR_TERMS: usize = 26;
const INTEGER_TOL: f64 = 1e-12;
const NEAR_INTEGER: f64 = 1e-3;

fn check_point(u: &TestField, x: &[f64], n: usize) -> Result<()> {
    constants::check_dim(n)?;
    if u.dim() != n || x.len() != n {
        return domain(format!(
            "dimension mismatch: n = {n}, field dimension {}, point dimension {}",
            u.dim(),
            x.len()
        ));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return domain("evaluation point must be finite");
    }
    Ok(())
}

// Quadrature on the unit sphere: directions and weights summing to |Omega|.
struct Sphere {
    dirs: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl Sphere {
    fn new(n: usize, c: f64) -> Sphere {
        let mut dirs = Vec::new();
        let mut weights = Vec::new();
        match n {
            1 => {
                dirs.push([1.0, 0.0, 0.0]);
                dirs.push([-1.0, 0.0, 0.0]);
                weights.extend([1.0, 1.0]);
            }
            2 => {
                let np = (1.4 * c).ceil() as usize + 48;
                for i in 0..np {
                    let phi = 2.0 * PI * i as f64 / np as f64;
                    dirs.push([phi.cos(), phi.sin(), 0.0]);
                    weights.push(2.0 * PI / np as f64);
                }
            }
            _ => {
                let nt = (0.7 * c).ceil() as usize + 24;
                let np = (1.4 * c).ceil() as usize + 48;
                let (t, w) = gauss_legendre(nt);
                for (tj, wj) in t.iter().zip(&w) {
                    let s = (1.0 - tj * tj).sqrt();
                    for i in 0..np {
                        let phi = 2.0 * PI * (i as f64 + 0.5) / np as f64;
                        dirs.push([s * phi.cos(), s * phi.sin(), *tj]);
                        weights.push(wj * 2.0 * PI / np as f64);
                    }
                }
            }
        }
        Sphere { dirs, weights }
    }

    fn average(&self, u: &TestField, x: &[f64], r: f64) -> f64 {
        let n = x.len();
        let mut acc = 0.0;
        let mut y = [0.0; 3];
        for (d, w) in self.dirs.iter().zip(&self.weights) {
            for i in 0..n {
                y[i] = x[i] + r * d[i];
            }
            acc += w * u.eval(&y[..n]);
        }
        acc
    }
}

// Radial structure of S(r) = int dOmega u(x + r n).
struct Spherical<'a> {
    u: &'a TestField,
    x: &'a [f64],
    sphere: Sphere,
    taylor: Option<Taylor>,
    far_start: Option<f64>,
}

fn spherical<'a>(u: &'a TestField, x: &'a [f64], n: usize, alpha: f64, tol: f64) -> Result<Spherical<'a>> {
    let scale = u.scale();
    let (far_start, c) = match (u, u.decay()) {
        (TestField::Gaussian { center, sigma }, _) => {
            let d: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let r = d + 8.0 * sigma;
            (Some(r), 2.0 * r * d / (sigma * sigma))
        }
        (_, Some(Decay::Exponential { length })) => (Some(norm(x) + 40.0 * length), 40.0),
        (_, Some(Decay::Algebraic { eta })) => {
            // |Omega| sup (scale/r)^eta r^(-1-alpha) integrated past R stays below tol/10
            let amp = sphere_area(n) * u.sup_norm() * scale.powf(eta) / (eta + alpha);
            let r = (10.0 * amp / tol).powf(1.0 / (eta + alpha));
            (Some(r.max(norm(x) + 10.0 * scale)), 40.0)
        }
        _ => (None, 40.0),
    };
    let taylor = if u.has_even_derivatives() {
        let mut coeffs = Vec::with_capacity(TAYLOR_TERMS);
        for j in 0..TAYLOR_TERMS {
            let lap = u.laplacian_power(x, j)?;
            coeffs.push(unit_sphere_moment(n, 2.0 * j as f64)? / constants::factorial(2 * j) * lap);
        }
        Some(Taylor { coeffs, radius: 0.25 * scale })
    } else {
        None
    };
    Ok(Spherical { u, x, sphere: Sphere::new(n, c), taylor, far_start })
}

impl Spherical<'_> {
    fn eval(&self, r: f64) -> f64 {
        self.sphere.average(self.u, self.x, r)
    }
}

fn apply_cutoff<'a>(p: Profile<'a>, cutoff: Cutoff) -> Profile<'a> {
    match cutoff {
        Cutoff::Fixed(r) => p.with_cutoff(r),
        Cutoff::Auto => p,
    }
}

fn is_plane_wave(u: &TestField) -> Option<(f64, f64)> {
    match u {
        TestField::PlaneWave { k, .. } => Some((norm(k), u.scale())),
        _ => None,
    }
}

fn cos_taylor(k: f64, weight_of_j: impl Fn(usize) -> f64) -> Vec<f64> {
    (0..TAYLOR_TERMS)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            s * k.powi(2 * j as i32) / constants::factorial(2 * j) * weight_of_j(j)
        })
        .collect()
}

/// Standard singular-integral representation, `0 < alpha < 2`.
pub fn fl_standard(u: &TestField, x: &[f64], n: usize, alpha: f64, tol: f64) -> Result<FLResult> {
    check_point(u, x, n)?;
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!(
            "standard representation needs 0 < alpha < 2, got {alpha}: the integrand diverges as r^(2-alpha) at the origin"
        ));
    }
    let c = c_standard(n, alpha)?;
    let kernel = Kernel::Power { alpha };
    let (integral, err) = if let Some((k, scale)) = is_plane_wave(u) {
        if k == 0.0 {
            (0.0, 0.0)
        } else {
            let p = Profile::new(move |r: f64| (k * r).cos() - 1.0, scale)
                .with_taylor(Taylor { coeffs: cos_taylor(k, |j| if j == 0 { 0.0 } else { 1.0 }), radius: 0.25 * scale })
                .with_far(FarField { start: 0.25 * scale, constant: -1.0, waves: vec![Wave { amplitude: 1.0, omega: k, phase: 0.0 }] });
            let q = radial_integral(&p, &kernel, tol)?;
            let uu = unit_sphere_moment(n, alpha)?;
            (uu * q.value * u.eval(x), uu * q.error)
        }
    } else {
        let s = spherical(u, x, n, alpha, tol)?;
        let u0 = sphere_area(n) * u.eval(x);
        let mut p = Profile::new(|r: f64| s.eval(r) - u0, u.scale());
        if let Some(t) = &s.taylor {
            let mut coeffs = t.coeffs.clone();
            coeffs[0] = 0.0;
            p = p.with_taylor(Taylor { coeffs, radius: t.radius });
        }
        if let Some(fs) = s.far_start {
            p = p.with_far(FarField { start: fs, constant: -u0, waves: vec![] });
        }
        let q = radial_integral(&p, &kernel, tol)?;
        (q.value, q.error)
    };
    Ok(FLResult {
        value: c * integral,
        representation: Representation::Standard,
        alpha,
        n,
        m: None,
        error: c.abs() * err,
        warning: None,
    })
}

/// Order-2m representation with the unit-eigenvalue normalization.
pub fn fl_order_m(u: &TestField, x: &[f64], n: usize, alpha: f64, m: usize, tol: f64) -> Result<FLResult> {
    fl_order_m_with(u, x, n, alpha, m, tol, Normalization::UnitEigenvalue)
}

/// Order-2m representation, `0 < alpha < 2m`, with a chosen prefactor.
pub fn fl_order_m_with(
    u: &TestField,
    x: &[f64],
    n: usize,
    alpha: f64,
    m: usize,
    tol: f64,
    norm_mode: Normalization,
) -> Result<FLResult> {
    check_point(u, x, n)?;
    let w = diff_weights(m)?;
    if !(alpha > 0.0 && alpha < 2.0 * m as f64) {
        return domain(format!("order-{m} representation needs 0 < alpha < {}, got {alpha}", 2 * m));
    }
    let pref = match norm_mode {
        Normalization::UnitEigenvalue => norm_constants(m, n, alpha)?.c_general,
        Normalization::Physical { h, zeta } => {
            if !(h > 0.0 && zeta > 0.0) {
                return domain("physical normalization needs h > 0 and zeta > 0");
            }
            h.powf(alpha) / (2.0 * zeta)
        }
    };
    let kernel = Kernel::Power { alpha };
    let mom: Vec<f64> = (0..TAYLOR_TERMS).map(|j| if j < m { 0.0 } else { w.even_moment(j as u32) }).collect();
    let (integral, err) = if let Some((k, scale)) = is_plane_wave(u) {
        if k == 0.0 {
            (0.0, 0.0)
        } else {
            let wc = w.clone();
            let f = move |r: f64| wc.apply(|p| (p as f64 * k * r).cos());
            let mut waves = Vec::with_capacity(m);
            for p in 1..=m {
                waves.push(Wave { amplitude: 2.0 * w.weight(p as i64), omega: p as f64 * k, phase: 0.0 });
            }
            let radius = 0.25 * scale / m as f64;
            let p = Profile::new(f, scale)
                .with_taylor(Taylor { coeffs: cos_taylor(k, |j| mom[j]), radius })
                .with_far(FarField { start: radius, constant: w.weight(0), waves });
            let q = radial_integral(&p, &kernel, tol)?;
            let uu = unit_sphere_moment(n, alpha)?;
            (uu * q.value * u.eval(x), uu * q.error)
        }
    } else {
        let s = spherical(u, x, n, alpha, tol)?;
        let (taylor, far_start) = (s.taylor.clone(), s.far_start);
        let c0 = w.weight(0) * sphere_area(n) * u.eval(x);
        let wc = w.clone();
        let f = move |r: f64| {
            let mut acc = c0;
            for p in 1..=m {
                acc += 2.0 * wc.weight(p as i64) * s.eval(p as f64 * r);
            }
            acc
        };
        let mut p = Profile::new(f, u.scale());
        if let Some(t) = &taylor {
            let coeffs: Vec<f64> = t.coeffs.iter().enumerate().map(|(j, c)| c * mom[j]).collect();
            p = p.with_taylor(Taylor { coeffs, radius: t.radius / m as f64 });
        }
        if let Some(fs) = far_start {
            p = p.with_far(FarField { start: fs, constant: c0, waves: vec![] });
        }
        let q = radial_integral(&p, &kernel, tol)?;
        (q.value, q.error)
    };
    Ok(FLResult {
        value: pref * integral,
        representation: Representation::OrderM(m),
        alpha,
        n,
        m: Some(m),
        error: pref.abs() * err,
        warning: None,
    })
}

/// Regularized representation, valid for every `alpha >= 0`.
///
/// At even integer `alpha = 2p` it returns `(-1)^(p+1) Delta^p u(x)` from the
/// field's analytic derivatives.
pub fn fl_regularized(u: &TestField, x: &[f64], n: usize, alpha: f64, spec: &QuadSpec) -> Result<FLResult> {
    check_point(u, x, n)?;
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return domain(format!("regularized representation needs alpha >= 0, got {alpha}"));
    }
    spec.validate()?;
    let half = 0.5 * alpha;
    let p_int = half.round();
    let mut res = FLResult {
        value: 0.0,
        representation: Representation::Regularized,
        alpha,
        n,
        m: None,
        error: 0.0,
        warning: None,
    };
    if (half - p_int).abs() < INTEGER_TOL {
        let p = p_int as usize;
        if !u.has_even_derivatives() {
            return Err(Error::MissingDerivatives(alpha));
        }
        let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
        res.value = sign * u.laplacian_power(x, p)?;
        return Ok(res);
    }
    if (half - p_int).abs() < 0.5 * NEAR_INTEGER {
        res.warning = Some(format!(
            "alpha = {alpha} is within {NEAR_INTEGER:e} of an even integer; sin(pi alpha/2) amplifies quadrature error"
        ));
    }
    let g = gamma(alpha + 1.0)?;
    if let Some((k, scale)) = is_plane_wave(u) {
        if k == 0.0 {
            return Ok(res);
        }
        let p = Profile::new(move |r: f64| (k * r).cos(), scale)
            .with_taylor(Taylor { coeffs: cos_taylor(k, |_| 1.0), radius: 0.25 * scale })
            .with_far(FarField { start: 0.25 * scale, constant: 0.0, waves: vec![Wave { amplitude: 1.0, omega: k, phase: 0.0 }] });
        let r = reg_halfline_profile(&p, alpha, spec)?;
        let pref = -2.0 * g / PI;
        let u0 = u.eval(x);
        res.value = pref * r.value * u0;
        res.error = (pref * u0).abs() * r.error;
        return Ok(res);
    }
    let s = spherical(u, x, n, alpha, spec.tol)?;
    let mut p = Profile::new(|r: f64| s.eval(r), u.scale());
    if n > 1 {
        p = p.memoized();
    }
    if let Some(t) = &s.taylor {
        p = p.with_taylor(t.clone());
    }
    match (spec.cutoff, s.far_start) {
        (Cutoff::Auto, Some(fs)) => p = p.with_far(FarField { start: fs, constant: 0.0, waves: vec![] }),
        (c, _) => p = apply_cutoff(p, c),
    }
    let r = reg_halfline_profile(&p, alpha, spec)?;
    let pref = -2.0 * g / (PI * unit_sphere_moment(n, alpha)?);
    res.value = pref * r.value;
    res.error = pref.abs() * r.error;
    Ok(res)
}

/// Eigenvalue of a representation on the plane wave `cos(k x_1)`; the
/// contract is `-k^alpha`.
pub fn fl_eigenvalue(rep: Representation, n: usize, alpha: f64, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return domain(format!("wave number must be positive, got {k}"));
    }
    constants::check_dim(n)?;
    let mut kv = vec![0.0; n];
    kv[0] = k;
    let u = TestField::plane_wave(&kv, 0.0)?;
    let x = vec![0.0; n];
    let r = match rep {
        Representation::Standard => fl_standard(&u, &x, n, alpha, 1e-14)?,
        Representation::OrderM(m) => fl_order_m(&u, &x, n, alpha, m, 1e-14)?,
        Representation::Regularized => fl_regularized(&u, &x, n, alpha, &QuadSpec::default())?,
    };
    Ok(r.value)
}

/// Convenience: the regularized representation with default quadrature settings.
pub fn fl_regularized_default(u: &TestField, x: &[f64], alpha: f64) -> Result<FLResult> {
    fl_regularized(u, x, u.dim(), alpha, &QuadSpec::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn plane_wave_eigenvalues() {
        for &a in &[0.5, 1.0, 1.5] {
            for n in 1..=3 {
                let e = fl_eigenvalue(Representation::Standard, n, a, 1.0).unwrap();
                assert!(rel(e, -1.0) < 1e-9, "std n={n} a={a}: {e}");
            }
        }
        let e = fl_eigenvalue(Representation::OrderM(2), 1, 2.5, 1.0).unwrap();
        assert!(rel(e, -1.0) < 1e-9, "{e}");
        let e = fl_eigenvalue(Representation::OrderM(3), 1, 4.5, 2.0).unwrap();
        assert!(rel(e, -2f64.powf(4.5)) < 1e-9, "{e}");
        let e = fl_eigenvalue(Representation::Regularized, 1, 2.0, 3.0).unwrap();
        assert_eq!(e, -9.0);
        for &a in &[0.5, 1.0, 3.0, 3.5] {
            let e = fl_eigenvalue(Representation::Regularized, 1, a, 2.0).unwrap();
            assert!(rel(e, -2f64.powf(a)) < 1e-9, "reg a={a}: {e}");
        }
    }

    #[test]
    fn standard_rejects_outside_levy() {
        let u = TestField::unit_gaussian();
        let e = fl_standard(&u, &[0.0], 1, 2.0, 1e-12).unwrap_err();
        assert!(e.to_string().contains("r^(2-alpha)"));
        assert!(fl_order_m(&u, &[0.0], 1, 4.0, 2, 1e-12).is_err());
    }

    #[test]
    fn integer_branch() {
        let u = TestField::unit_gaussian();
        let s = QuadSpec::default();
        assert_eq!(fl_regularized(&u, &[0.3], 1, 0.0, &s).unwrap().value, -u.eval(&[0.3]));
        assert_eq!(fl_regularized(&u, &[0.0], 1, 2.0, &s).unwrap().value, -2.0);
        assert_eq!(fl_regularized(&u, &[0.0], 1, 4.0, &s).unwrap().value, -12.0);
    }

    #[test]
    fn gaussian_representations_agree() {
        let u = TestField::unit_gaussian();
        for &a in &[0.5, 1.0, 1.5] {
            for &x in &[0.0, 0.7, 1.9] {
                let s = fl_standard(&u, &[x], 1, a, 1e-13).unwrap().value;
                let m2 = fl_order_m(&u, &[x], 1, a, 2, 1e-13).unwrap().value;
                let r = fl_regularized(&u, &[x], 1, a, &QuadSpec::default()).unwrap().value;
                assert!((s - m2).abs() < 1e-9 * s.abs().max(1e-3), "a={a} x={x}: {s} {m2}");
                assert!((s - r).abs() < 1e-9 * s.abs().max(1e-3), "a={a} x={x}: {s} {r}");
            }
        }
    }

    #[test]
    fn gaussian_alpha_one_closed_form() {
        // -(-Delta)^(1/2) e^{-x^2} at 0 = -(1/pi) int |k| sqrt(pi) e^{-k^2/4} dk = -2/sqrt(pi)
        let u = TestField::unit_gaussian();
        let v = fl_regularized(&u, &[0.0], 1, 1.0, &QuadSpec::default()).unwrap().value;
        assert!((v + 2.0 / PI.sqrt()).abs() < 1e-11, "{v}");
    }

    #[test]
    fn nd_gaussian_center_closed_form() {
        for n in 1..=3usize {
            let u = TestField::gaussian(&vec![0.0; n], 1.0).unwrap();
            let x = vec![0.0; n];
            for &a in &[0.7, 1.5, 3.3] {
                let want = -2f64.powf(a) * gamma((n as f64 + a) / 2.0).unwrap() / gamma(n as f64 / 2.0).unwrap();
                let r = fl_regularized(&u, &x, n, a, &QuadSpec::default()).unwrap().value;
                let m = fl_order_m(&u, &x, n, a, 2, 1e-13).unwrap().value;
                assert!(rel(r, want) < 1e-10, "n={n} a={a}: {r} {want}");
                assert!(rel(m, want) < 1e-10, "n={n} a={a}: {m} {want}");
            }
        }
    }

    #[test]
    fn algebraic_custom_field_uses_tail_cutoff() {
        // 1/(1+x^2): -(-Delta)^(1/2) at 0 equals -(1/2) int |k| e^{-|k|} dk / 1 = -1
        let u = TestField::custom(1, |x| 1.0 / (1.0 + x[0] * x[0]), Decay::Algebraic { eta: 2.0 }, 1.0, 1.0).unwrap();
        let v = fl_standard(&u, &[0.0], 1, 1.0, 1e-10).unwrap();
        assert!((v.value + 1.0).abs() < 1e-8, "{}", v.value);
    }

    #[test]
    fn near_integer_warns() {
        let u = TestField::unit_gaussian();
        let r = fl_regularized(&u, &[0.0], 1, 2.0005, &QuadSpec::default()).unwrap();
        assert!(r.warning.is_some());
        assert!((r.value + 2.0).abs() < 2e-2);
    }
}
