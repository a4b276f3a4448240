//! Closed-form test fields with exact shifted evaluation and analytic
//! derivatives.

use std::fmt;
use std::sync::Arc;

use crate::dd::Dd;
use crate::error::{domain, Error, Result};

/// Decay of a field at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `|u| <= c exp(-|x| / length)` far out.
    Exponential { length: f64 },
    /// `|u| <= c |x|^(-eta)` far out, `eta > 0`.
    Algebraic { eta: f64 },
}

type ScalarFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type LapFn = dyn Fn(&[f64], usize) -> f64 + Send + Sync;

/// A user supplied field.
#[derive(Clone)]
pub struct CustomField {
    dim: usize,
    f: Arc<ScalarFn>,
    decay: Decay,
    sup: f64,
    scale: f64,
    laplacian_power: Option<Arc<LapFn>>,
}

impl fmt::Debug for CustomField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomField")
            .field("dim", &self.dim)
            .field("decay", &self.decay)
            .field("sup", &self.sup)
            .field("scale", &self.scale)
            .field("laplacian_power", &self.laplacian_power.is_some())
            .finish()
    }
}

/// Scalar test field on `R^n`, `n <= 3`.
#[derive(Debug, Clone)]
pub enum TestField {
    /// `cos(k . x + phase)`
    PlaneWave { k: Vec<f64>, phase: f64 },
    /// `exp(-|x - center|^2 / sigma^2)`
    Gaussian { center: Vec<f64>, sigma: f64 },
    Custom(CustomField),
}

/// `H_k(y)`, physicists' Hermite polynomial.
pub fn hermite(k: usize, y: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * y);
    if k == 0 {
        return h0;
    }
    for i in 1..k {
        let h2 = 2.0 * y * h1 - 2.0 * i as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// `d^k/dx^k exp(-((x - c)/sigma)^2)` at `y = (x - c)/sigma`.
pub fn gaussian_derivative(y: f64, sigma: f64, k: usize) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * sigma.powi(-(k as i32)) * hermite(k, y) * (-y * y).exp()
}

/// Bound on `sup |H_k(y) exp(-y^2/2)|` (Cramer's inequality).
pub fn hermite_function_bound(k: usize) -> f64 {
    let mut v = 1.0f64;
    for i in 1..=k {
        v *= 2.0 * i as f64;
    }
    1.086_435 * v.sqrt()
}

impl TestField {
    pub fn plane_wave(k: &[f64], phase: f64) -> Result<Self> {
        check_point(k)?;
        if !phase.is_finite() {
            return domain("plane wave phase must be finite");
        }
        Ok(TestField::PlaneWave { k: k.to_vec(), phase })
    }

    pub fn gaussian(center: &[f64], sigma: f64) -> Result<Self> {
        check_point(center)?;
        if !(sigma > 0.0) || !sigma.is_finite() {
            return domain(format!("gaussian width must be positive, got {sigma}"));
        }
        Ok(TestField::Gaussian { center: center.to_vec(), sigma })
    }

    /// Unit gaussian `exp(-x^2)` in one dimension.
    pub fn unit_gaussian() -> Self {
        TestField::Gaussian { center: vec![0.0], sigma: 1.0 }
    }

    /// A user callable. `sup` bounds `|u|`, `scale` is its characteristic
    /// length. The decay must be integrable against the power kernels.
    pub fn custom(
        dim: usize,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        decay: Decay,
        sup: f64,
        scale: f64,
    ) -> Result<Self> {
        crate::constants::check_dim(dim)?;
        match decay {
            Decay::Exponential { length } if !(length > 0.0) => {
                return domain(format!("decay length must be positive, got {length}"))
            }
            Decay::Algebraic { eta } if !(eta > 0.0) => {
                return domain(format!("algebraic decay exponent must be positive, got {eta}"))
            }
            _ => {}
        }
        if !(sup >= 0.0) || !(scale > 0.0) {
            return domain("custom field needs sup >= 0 and scale > 0");
        }
        Ok(TestField::Custom(CustomField { dim, f: Arc::new(f), decay, sup, scale, laplacian_power: None }))
    }

    /// Attach `(x, p) -> Delta^p u(x)` to a custom field.
    pub fn with_laplacian_power(self, g: impl Fn(&[f64], usize) -> f64 + Send + Sync + 'static) -> Self {
        match self {
            TestField::Custom(mut c) => {
                c.laplacian_power = Some(Arc::new(g));
                TestField::Custom(c)
            }
            other => other,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TestField::PlaneWave { k, .. } => k.len(),
            TestField::Gaussian { center, .. } => center.len(),
            TestField::Custom(c) => c.dim,
        }
    }

    /// Characteristic length: the width, the wavelength over 2 pi, or the
    /// declared scale.
    pub fn scale(&self) -> f64 {
        match self {
            TestField::PlaneWave { k, .. } => {
                let n = norm(k);
                if n > 0.0 {
                    1.0 / n
                } else {
                    1.0
                }
            }
            TestField::Gaussian { sigma, .. } => *sigma,
            TestField::Custom(c) => c.scale,
        }
    }

    pub fn decay(&self) -> Option<Decay> {
        match self {
            TestField::PlaneWave { .. } => None,
            TestField::Gaussian { sigma, .. } => Some(Decay::Exponential { length: *sigma }),
            TestField::Custom(c) => Some(c.decay),
        }
    }

    /// Bound on `|u|`.
    pub fn sup_norm(&self) -> f64 {
        match self {
            TestField::PlaneWave { .. } | TestField::Gaussian { .. } => 1.0,
            TestField::Custom(c) => c.sup,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestField::PlaneWave { k, phase } => (dot(k, x) + phase).cos(),
            TestField::Gaussian { center, sigma } => {
                let d2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                (-d2 / (sigma * sigma)).exp()
            }
            TestField::Custom(c) => (c.f)(x),
        }
    }

    /// `u(x + t * dir)`.
    pub fn eval_shift(&self, x: &[f64], dir: &[f64], t: f64) -> f64 {
        match self {
            TestField::PlaneWave { k, phase } => (dot(k, x) + phase + t * dot(k, dir)).cos(),
            TestField::Gaussian { center, sigma } => {
                let d2: f64 = x
                    .iter()
                    .zip(dir)
                    .zip(center)
                    .map(|((a, d), c)| {
                        let y = a - c + t * d;
                        y * y
                    })
                    .sum();
                (-d2 / (sigma * sigma)).exp()
            }
            TestField::Custom(c) => {
                let y: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a + t * d).collect();
                (c.f)(&y)
            }
        }
    }

    /// `u(x + t)` in one dimension with the shift given in double-double;
    /// plane wave phases are reduced in extended precision.
    pub(crate) fn eval_shift_1d_dd(&self, x: f64, t: Dd) -> f64 {
        match self {
            TestField::PlaneWave { k, phase } => {
                let base = Dd::from_f64(k[0]).mul_f64(x).add(Dd::from_f64(*phase));
                base.add(t.mul_f64(k[0])).cos()
            }
            _ => self.eval_shift(&[x], &[1.0], t.to_f64()),
        }
    }

    /// `d^k u / dx^k` for one-dimensional gaussians and plane waves.
    pub fn derivative_1d(&self, x: f64, k: usize) -> Option<f64> {
        match self {
            TestField::Gaussian { center, sigma } if center.len() == 1 => {
                Some(gaussian_derivative((x - center[0]) / sigma, *sigma, k))
            }
            TestField::PlaneWave { k: kv, phase } if kv.len() == 1 => {
                let kk = kv[0];
                let arg = kk * x + phase;
                let v = match k % 4 {
                    0 => arg.cos(),
                    1 => -arg.sin(),
                    2 => -arg.cos(),
                    _ => arg.sin(),
                };
                Some(kk.powi(k as i32) * v)
            }
            _ => None,
        }
    }

    /// `sup |d^k u / dx^k|` along any unit direction, when known.
    pub fn derivative_bound(&self, k: usize) -> Option<f64> {
        match self {
            TestField::Gaussian { sigma, .. } => Some(sigma.powi(-(k as i32)) * hermite_function_bound(k)),
            TestField::PlaneWave { k: kv, .. } => Some(norm(kv).powi(k as i32)),
            TestField::Custom(_) => None,
        }
    }

    /// `Delta^p u(x)`.
    pub fn laplacian_power(&self, x: &[f64], p: usize) -> Result<f64> {
        match self {
            TestField::PlaneWave { k, .. } => {
                let k2 = dot(k, k);
                let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
                Ok(sign * k2.powi(p as i32) * self.eval(x))
            }
            TestField::Gaussian { center, sigma } => {
                let y: Vec<f64> = x.iter().zip(center).map(|(a, c)| (a - c) / sigma).collect();
                Ok(gaussian_laplacian_power(&y, *sigma, p))
            }
            TestField::Custom(c) => match &c.laplacian_power {
                Some(g) => Ok(g(x, p)),
                None if p == 0 => Ok((c.f)(x)),
                None => Err(Error::MissingDerivatives(2.0 * p as f64)),
            },
        }
    }

    /// Whether [`TestField::laplacian_power`] works for every order.
    pub fn has_even_derivatives(&self) -> bool {
        match self {
            TestField::Custom(c) => c.laplacian_power.is_some(),
            _ => true,
        }
    }
}

fn gaussian_laplacian_power(y: &[f64], sigma: f64, p: usize) -> f64 {
    if y.len() == 1 {
        return gaussian_derivative(y[0], sigma, 2 * p);
    }
    // Delta^p of a separable gaussian: multinomial sum of 1D even derivatives
    let e: f64 = (-y.iter().map(|v| v * v).sum::<f64>()).exp();
    let mut total = 0.0;
    let n = y.len();
    let mut idx = vec![0usize; n];
    loop {
        let s: usize = idx.iter().sum();
        if s == p {
            let mut coef = crate::constants::factorial(p);
            let mut prod = 1.0;
            for (i, &j) in idx.iter().enumerate() {
                coef /= crate::constants::factorial(j);
                prod *= hermite(2 * j, y[i]);
            }
            total += coef * prod;
        }
        let mut i = 0;
        loop {
            if i == n {
                return sigma.powi(-2 * p as i32) * e * total;
            }
            idx[i] += 1;
            if idx[i] <= p {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn check_point(x: &[f64]) -> Result<()> {
    crate::constants::check_dim(x.len())?;
    if x.iter().any(|v| !v.is_finite()) {
        return domain("field parameters must be finite");
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_low_orders() {
        let y = 0.7;
        assert_eq!(hermite(0, y), 1.0);
        assert_eq!(hermite(1, y), 2.0 * y);
        assert!((hermite(4, y) - (16.0 * y.powi(4) - 48.0 * y * y + 12.0)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let g = TestField::gaussian(&[0.3], 1.4).unwrap();
        let x = 0.9;
        let h = 1e-3;
        for k in 0..4 {
            let d0 = g.derivative_1d(x, k).unwrap();
            let dp = g.derivative_1d(x + h, k).unwrap();
            let dm = g.derivative_1d(x - h, k).unwrap();
            let fd = (dp - dm) / (2.0 * h);
            let d1 = g.derivative_1d(x, k + 1).unwrap();
            assert!((fd - d1).abs() < 1e-5, "k={k}");
            let _ = d0;
        }
        let u = TestField::unit_gaussian();
        assert!((u.laplacian_power(&[0.0], 1).unwrap() + 2.0).abs() < 1e-15);
        assert!((u.laplacian_power(&[0.0], 2).unwrap() - 12.0).abs() < 1e-14);
    }

    #[test]
    fn nd_laplacian_power_is_separable_sum() {
        let g2 = TestField::gaussian(&[0.0, 0.0], 1.0).unwrap();
        let x = [0.4, -0.2];
        // Delta u = (4|y|^2 - 4) e^{-|y|^2} in 2D
        let y2: f64 = x.iter().map(|v| v * v).sum();
        let want = (4.0 * y2 - 4.0) * (-y2).exp();
        assert!((g2.laplacian_power(&x, 1).unwrap() - want).abs() < 1e-14);
        let g3 = TestField::gaussian(&[0.1, 0.2, 0.3], 0.8).unwrap();
        let p = [0.5, -0.1, 0.0];
        let h = 1e-3;
        let mut fd = 0.0;
        for i in 0..3 {
            let mut a = p;
            let mut b = p;
            a[i] += h;
            b[i] -= h;
            fd += (g3.laplacian_power(&a, 1).unwrap() + g3.laplacian_power(&b, 1).unwrap()
                - 2.0 * g3.laplacian_power(&p, 1).unwrap())
                / (h * h);
        }
        assert!((fd - g3.laplacian_power(&p, 2).unwrap()).abs() < 1e-4 * fd.abs().max(1.0));
    }

    #[test]
    fn plane_wave_shift_is_exact_phase() {
        let u = TestField::plane_wave(&[1.3], 0.2).unwrap();
        let a = u.eval_shift(&[0.5], &[1.0], 2.0);
        let b = (1.3 * 2.5f64 + 0.2).cos();
        assert!((a - b).abs() < 1e-15);
        let c = u.eval_shift_1d_dd(0.5, Dd::from_f64(2.0));
        assert!((c - b).abs() < 1e-15);
    }

    #[test]
    fn custom_fields_validate_decay() {
        assert!(TestField::custom(1, |x| x[0], Decay::Algebraic { eta: 0.0 }, 1.0, 1.0).is_err());
        let f = TestField::custom(1, |x| 1.0 / (1.0 + x[0] * x[0]), Decay::Algebraic { eta: 2.0 }, 1.0, 1.0).unwrap();
        assert!(matches!(f.laplacian_power(&[0.0], 1), Err(Error::MissingDerivatives(_))));
        assert_eq!(f.laplacian_power(&[0.0], 0).unwrap(), 1.0);
    }

    #[test]
    fn cramer_bound_holds() {
        for k in 0..12 {
            let b = hermite_function_bound(k);
            for i in 0..200 {
                let y = -6.0 + 0.06 * i as f64;
                assert!((hermite(k, y) * (-0.5 * y * y).exp()).abs() <= b);
            }
        }
    }
}
