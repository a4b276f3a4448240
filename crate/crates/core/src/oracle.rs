//! Spectral reference: the multiplier `-|k|^alpha` applied to periodic grid
//! samples through a radix-2 FFT.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::field::{gaussian_derivative, TestField};

pub const MIN_POINTS: usize = 16;
pub const MAX_POINTS: usize = 65_536;
pub const PARSEVAL_TOL: f64 = 1e-12;

/// Periodic samples `u(x0 + j dx)`, `j = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    samples: Vec<f64>,
    dx: f64,
    origin: f64,
}

impl GridField {
    pub fn new(samples: Vec<f64>, dx: f64, origin: f64) -> Result<Self> {
        let n = samples.len();
        if !n.is_power_of_two() || !(MIN_POINTS..=MAX_POINTS).contains(&n) {
            return Err(Error::InvalidGrid(format!(
                "N must be a power of two in [{MIN_POINTS}, {MAX_POINTS}], got {n}"
            )));
        }
        if !(dx > 0.0) || !dx.is_finite() || !origin.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing must be positive and finite, got {dx}")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("samples must be finite".into()));
        }
        Ok(GridField { samples, dx, origin })
    }

    /// Samples `f` on `N` points of the period `[-L/2, L/2)`.
    pub fn sample(f: impl Fn(f64) -> f64, n: usize, period: f64) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::InvalidGrid(format!("period must be positive, got {period}")));
        }
        let dx = period / n as f64;
        let origin = -0.5 * period;
        GridField::new((0..n).map(|j| f(origin + j as f64 * dx)).collect(), dx, origin)
    }

    /// Samples a one-dimensional test field.
    pub fn from_field(u: &TestField, n: usize, period: f64) -> Result<Self> {
        if u.dim() != 1 {
            return domain("grid fields are one-dimensional");
        }
        GridField::sample(|x| u.eval(&[x]), n, period)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.dx
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn period(&self) -> f64 {
        self.dx * self.samples.len() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.dx
    }

    /// Signed wave number of mode `j`; the Nyquist mode is taken positive.
    pub fn wave_number(&self, j: usize) -> f64 {
        let n = self.samples.len();
        let js = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        2.0 * PI * js / self.period()
    }

    /// Trigonometric interpolant at any `x`, periodic with the grid period.
    pub fn interpolate(&self, x: f64) -> f64 {
        self.interpolant().eval(x)
    }

    /// Precomputed interpolant for repeated evaluation.
    pub fn interpolant(&self) -> Interpolant {
        Interpolant { spec: spectrum(&self.samples), dx: self.dx, origin: self.origin }
    }
}

/// Band-limited interpolant of a grid field.
#[derive(Debug, Clone)]
pub struct Interpolant {
    spec: Vec<Complex64>,
    dx: f64,
    origin: f64,
}

impl Interpolant {
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.spec.len();
        let t = x - self.origin;
        let w = 2.0 * PI / (self.dx * n as f64);
        let mut acc = self.spec[0].re;
        for (j, c) in self.spec.iter().enumerate().take(n / 2).skip(1) {
            acc += 2.0 * (c * Complex64::from_polar(1.0, w * j as f64 * t)).re;
        }
        // Nyquist mode as a real cosine
        acc += self.spec[n / 2].re * (PI * t / self.dx).cos();
        acc / n as f64
    }
}

fn bit_reverse(data: &mut [Complex64]) {
    let n = data.len();
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
}

/// In-place radix-2 transform. Forward uses `e^{-2 pi i jk/N}`; the inverse
/// carries the `1/N`.
pub fn fft(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    bit_reverse(data);
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        // twiddles computed directly to avoid drift from repeated products
        let tw: Vec<Complex64> =
            (0..half).map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / len as f64)).collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let a = data[start + k];
                let b = data[start + k + half] * tw[k];
                data[start + k] = a + b;
                data[start + k + half] = a - b;
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

/// Forward transform of real samples.
pub fn spectrum(samples: &[f64]) -> Vec<Complex64> {
    let mut d: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut d, false);
    d
}

/// `|sum |x|^2 - sum |X|^2 / N| / sum |x|^2`.
pub fn parseval_residual(samples: &[f64], spec: &[Complex64]) -> f64 {
    let e: f64 = samples.iter().map(|v| v * v).sum();
    let f: f64 = spec.iter().map(|c| c.norm_sqr()).sum::<f64>() / samples.len() as f64;
    if e == 0.0 {
        f
    } else {
        (e - f).abs() / e
    }
}

/// Fourier multiplier of the fractional Laplacian.
pub fn multiplier(k: f64, alpha: f64) -> f64 {
    -k.abs().powf(alpha)
}

/// Result of [`dft_fl_report`]: the transformed field and both Parseval residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct DftReport {
    pub field: GridField,
    pub parseval_forward: f64,
    pub parseval_inverse: f64,
}

/// `-(-Delta)^{alpha/2}` on a periodic grid.
pub fn dft_fl(g: &GridField, alpha: f64) -> Result<GridField> {
    Ok(dft_fl_report(g, alpha)?.field)
}

pub fn dft_fl_report(g: &GridField, alpha: f64) -> Result<DftReport> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return domain(format!("alpha must be a finite non-negative number, got {alpha}"));
    }
    let mut spec = spectrum(&g.samples);
    let pf = parseval_residual(&g.samples, &spec);
    for (j, c) in spec.iter_mut().enumerate() {
        *c *= multiplier(g.wave_number(j), alpha);
    }
    let out_spec = spec.clone();
    fft(&mut spec, true);
    let samples: Vec<f64> = spec.iter().map(|c| c.re).collect();
    let pi = parseval_residual(&samples, &out_spec);
    if pf > PARSEVAL_TOL || pi > PARSEVAL_TOL {
        return Err(Error::Domain(format!("Parseval check failed: {pf:e}, {pi:e}")));
    }
    Ok(DftReport {
        field: GridField { samples, dx: g.dx, origin: g.origin },
        parseval_forward: pf,
        parseval_inverse: pi,
    })
}

/// Hurwitz zeta `sum_{k>=0} (q + k)^{-s}` for `s > 1`, `q > 0`, by Euler-Maclaurin.
pub fn hurwitz_zeta(s: f64, q: f64) -> Result<f64> {
    if !(s > 1.0) || !(q > 0.0) {
        return domain(format!("hurwitz zeta needs s > 1 and q > 0, got s = {s}, q = {q}"));
    }
    // B_{2j} / (2j)!
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    let n = 12;
    let mut acc = 0.0;
    for k in 0..n {
        acc += (q + k as f64).powf(-s);
    }
    let a = q + n as f64;
    acc += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // (s)_{2j-1} a^{-s-2j+1}
    let mut rising = s;
    let mut pw = a.powf(-s - 1.0);
    for (j, b) in B.iter().enumerate() {
        acc += b * rising * pw;
        let k = 2 * j + 1;
        rising *= (s + k as f64) * (s + k as f64 + 1.0);
        pw /= a * a;
    }
    Ok(acc)
}

/// Sum over the periodic images `j != 0` of the far field of
/// `-(-Delta)^{alpha/2} exp(-(x-c)^2/sigma^2)`, from its multipole expansion
/// `C_standard sum_l binom(-1-alpha, l) (-1)^l mu_l y^{-l} |y|^{-1-alpha}`.
///
/// Subtracting it from a periodic spectral result removes the wrap-around
/// error of slowly decaying fractional tails.
pub fn gaussian_image_sum(alpha: f64, sigma: f64, center: f64, period: f64, x: f64) -> Result<f64> {
    let c = crate::constants::c_standard(1, alpha)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    let y = x - center;
    if !(y.abs() < 0.5 * period) {
        return domain("image sum needs |x - center| below half the period");
    }
    let mut acc = 0.0;
    for l in (0..24u32).step_by(2) {
        // mu_l = Gamma((l+1)/2) sigma^{l+1} for even l
        let mu = crate::constants::gamma(0.5 * (l as f64 + 1.0))? * sigma.powi(l as i32 + 1);
        let coef = crate::constants::binomial_real(-1.0 - alpha, l) * mu;
        let s = 1.0 + alpha + l as f64;
        // sum_{j>=1} (jL + y)^{-s} + (jL - y)^{-s}
        let z = period.powf(-s) * (hurwitz_zeta(s, 1.0 + y / period)? + hurwitz_zeta(s, 1.0 - y / period)?);
        let t = coef * z;
        acc += t;
        if t.abs() < 1e-18 * acc.abs() {
            break;
        }
    }
    Ok(c * acc)
}

/// `-(-Delta)^{alpha/2}` of `exp(-(x-c)^2/sigma^2)` on a periodic grid of
/// `n` points and period `period`, evaluated at `xs` by band-limited
/// interpolation; with `corrected` the image far fields are removed.
pub fn gaussian_spectral(
    alpha: f64,
    sigma: f64,
    center: f64,
    n: usize,
    period: f64,
    xs: &[f64],
    corrected: bool,
) -> Result<Vec<f64>> {
    let g = GridField::sample(|x| (-((x - center) / sigma).powi(2)).exp(), n, period)?;
    let out = dft_fl(&g, alpha)?.interpolant();
    xs.iter()
        .map(|&x| {
            let v = out.eval(x);
            if corrected {
                Ok(v - gaussian_image_sum(alpha, sigma, center, period, x)?)
            } else {
                Ok(v)
            }
        })
        .collect()
}

/// `(-1)^{p+1} Delta^p` of `exp(-x^2/sigma^2)` for `alpha = 2p`, `p <= 2`.
pub fn gaussian_reference(alpha: f64, sigma: f64, x: f64) -> Result<f64> {
    let half = 0.5 * alpha;
    let p = half.round();
    if (half - p).abs() >= 1e-12 || !(0.0..=2.0).contains(&p) {
        return domain(format!("gaussian reference supports alpha in {{0, 2, 4}}, got {alpha}"));
    }
    if !(sigma > 0.0) {
        return domain(format!("gaussian width must be positive, got {sigma}"));
    }
    let p = p as usize;
    let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * gaussian_derivative(x / sigma, sigma, 2 * p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn fft_matches_naive() {
        let x: Vec<f64> = (0..32).map(|j| ((j * j) as f64 * 0.37).sin()).collect();
        let a = spectrum(&x);
        let b = naive_dft(&x);
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).norm() < 1e-12);
        }
        let mut c = a.clone();
        fft(&mut c, true);
        for (p, q) in c.iter().zip(&x) {
            assert!((p.re - q).abs() < 1e-14 && p.im.abs() < 1e-14);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(GridField::new(vec![0.0; 24], 0.1, 0.0).is_err());
        assert!(GridField::new(vec![0.0; 8], 0.1, 0.0).is_err());
        assert!(GridField::new(vec![0.0; 16], 0.0, 0.0).is_err());
        assert!(GridField::new(vec![f64::NAN; 16], 0.1, 0.0).is_err());
    }

    #[test]
    fn cosine_eigenfunction() {
        let l = 2.0 * PI;
        let k = 3.0;
        let g = GridField::sample(|x| (k * x).cos(), 64, l).unwrap();
        let r = dft_fl(&g, 1.0).unwrap();
        for j in 0..64 {
            assert!((r.samples()[j] + k * g.samples()[j]).abs() < 1e-13);
        }
        let r0 = dft_fl(&g, 0.0).unwrap();
        for j in 0..64 {
            assert!((r0.samples()[j] + g.samples()[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn hurwitz_zeta_values() {
        // zeta(2) = pi^2/6, zeta(3, 2) = zeta(3) - 1
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(3.0, 2.0).unwrap() - 0.202_056_903_159_594_3).abs() < 1e-14);
        assert!((hurwitz_zeta(1.5, 0.25).unwrap() - (hurwitz_zeta(1.5, 1.25).unwrap() + 0.25f64.powf(-1.5))).abs() < 1e-13);
    }

    #[test]
    fn image_correction_shrinks_wrap_error() {
        // unit gaussian at alpha = 1: -(-Delta)^{1/2} e^{-x^2}(0) = -2/sqrt(pi)
        let want = -2.0 / PI.sqrt();
        let raw = gaussian_spectral(1.0, 1.0, 0.0, 1024, 16.0, &[0.0], false).unwrap()[0];
        let cor = gaussian_spectral(1.0, 1.0, 0.0, 1024, 16.0, &[0.0], true).unwrap()[0];
        assert!((raw - want).abs() > 1e-3);
        assert!((cor - want).abs() < 1e-9, "{}", cor - want);
    }

    #[test]
    fn reference_values() {
        assert_eq!(gaussian_reference(0.0, 1.0, 0.0).unwrap(), -1.0);
        assert_eq!(gaussian_reference(2.0, 1.0, 0.0).unwrap(), -2.0);
        assert_eq!(gaussian_reference(4.0, 1.0, 0.0).unwrap(), -12.0);
        assert!(gaussian_reference(6.0, 1.0, 0.0).is_err());
        assert!(gaussian_reference(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn interpolation_is_exact_on_grid_and_band_limited() {
        let g = GridField::sample(|x| (2.0 * x).sin() + 0.5 * (3.0 * x).cos(), 32, 2.0 * PI).unwrap();
        assert!((g.interpolate(g.x(5)) - g.samples()[5]).abs() < 1e-14);
        let x: f64 = 0.1234;
        let want = (2.0 * x).sin() + 0.5 * (3.0 * x).cos();
        assert!((g.interpolate(x) - want).abs() < 1e-14);
    }
}
