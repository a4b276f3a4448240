//! Radial profiles and the half-line integration engine shared by every
//! singular-integral representation.

use std::cell::RefCell;
use std::collections::HashMap;

use super::gk::{integrate_with, GkOptions, QuadResult};
use super::kernel::Kernel;
use crate::error::{Error, Result};

/// Even power series `sum_j coeffs[j] r^(2j)`, trusted for `r <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct Taylor {
    pub coeffs: Vec<f64>,
    pub radius: f64,
}

/// One cosine component `amplitude * cos(omega r + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wave {
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

/// Exact representation of a profile for `r >= start`.
#[derive(Debug, Clone, PartialEq)]
pub struct FarField {
    pub start: f64,
    pub constant: f64,
    pub waves: Vec<Wave>,
}

impl FarField {
    pub fn eval(&self, r: f64) -> f64 {
        self.constant + self.waves.iter().map(|w| w.amplitude * (w.omega * r + w.phase).cos()).sum::<f64>()
    }
}

/// A radial function `S(r)` on `[0, inf)` together with the structural data
/// the engine uses near the origin and at infinity.
pub struct Profile<'a> {
    f: Box<dyn Fn(f64) -> f64 + 'a>,
    taylor: Option<Taylor>,
    far: Option<FarField>,
    breakpoints: Vec<f64>,
    scale: f64,
    cutoff: Option<f64>,
    memo: Option<RefCell<HashMap<u64, f64>>>,
}

impl<'a> Profile<'a> {
    /// `scale` is the length on which `S` varies; it sets the Taylor panel and
    /// the default regularization parameters.
    pub fn new(f: impl Fn(f64) -> f64 + 'a, scale: f64) -> Self {
        Profile {
            f: Box::new(f),
            taylor: None,
            far: None,
            breakpoints: Vec::new(),
            scale,
            cutoff: None,
            memo: None,
        }
    }

    /// Constant profile; its far field starts at the origin.
    pub fn constant(c: f64) -> Profile<'static> {
        Profile::new(move |_| c, 1.0)
            .with_taylor(Taylor { coeffs: vec![c], radius: 0.25 })
            .with_far(FarField { start: 0.25, constant: c, waves: Vec::new() })
    }

    pub fn with_taylor(mut self, t: Taylor) -> Self {
        self.taylor = Some(t);
        self
    }

    pub fn with_far(mut self, far: FarField) -> Self {
        self.far = Some(far);
        self
    }

    pub fn with_breakpoints(mut self, mut b: Vec<f64>) -> Self {
        b.retain(|x| x.is_finite() && *x > 0.0);
        b.sort_by(|x, y| x.total_cmp(y));
        self.breakpoints = b;
        self
    }

    /// Treat the profile as zero beyond `r`.
    pub fn with_cutoff(mut self, r: f64) -> Self {
        self.cutoff = Some(r);
        self
    }

    /// Cache evaluations; useful when the same profile is integrated
    /// against several kernels.
    pub fn memoized(mut self) -> Self {
        self.memo = Some(RefCell::new(HashMap::new()));
        self
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn taylor(&self) -> Option<&Taylor> {
        self.taylor.as_ref()
    }

    pub fn far(&self) -> Option<&FarField> {
        self.far.as_ref()
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.memo {
            None => (self.f)(r),
            Some(m) => {
                let key = r.to_bits();
                if let Some(v) = m.borrow().get(&key) {
                    return *v;
                }
                let v = (self.f)(r);
                m.borrow_mut().insert(key, v);
                v
            }
        }
    }
}

struct Acc {
    value: f64,
    comp: f64,
    error: f64,
    evals: usize,
}

impl Acc {
    fn add(&mut self, v: f64) {
        let t = self.value + v;
        if self.value.abs() >= v.abs() {
            self.comp += (self.value - t) + v;
        } else {
            self.comp += (v - t) + self.value;
        }
        self.value = t;
    }
    fn add_quad(&mut self, q: QuadResult) {
        self.add(q.value);
        self.error += q.error;
        self.evals += q.evals;
    }
}

/// `int_0^inf S(r) K(r) dr` for a profile `S` and kernel `K`.
///
/// Near the origin the Taylor data (or, for the regularized kernel, a
/// subtraction of `S(0)`) is integrated exactly against the kernel; the far
/// field is integrated analytically.
pub fn radial_integral(p: &Profile, kernel: &Kernel, tol: f64) -> Result<QuadResult> {
    let mut acc = Acc { value: 0.0, comp: 0.0, error: 0.0, evals: 0 };
    let opts = GkOptions { abs_tol: tol, rel_tol: 0.0, max_panels: 4000 };
    let eps = match *kernel {
        Kernel::Regularized { eps, .. } => Some(eps),
        Kernel::Power { .. } => None,
    };

    let start = if let Some(t) = &p.taylor {
        let mut last = 0.0;
        for (j, &c) in t.coeffs.iter().enumerate() {
            if c != 0.0 {
                let v = c * kernel.even_moment(j as u32, t.radius)?;
                acc.add(v);
                last = v.abs();
            }
        }
        acc.error += last;
        t.radius
    } else {
        let b = p
            .breakpoints
            .first()
            .copied()
            .unwrap_or(p.scale)
            .min(p.cutoff.unwrap_or(f64::INFINITY));
        match eps {
            Some(e) => {
                let s0 = p.eval(0.0);
                let g = |r: f64| (p.eval(r) - s0) * kernel.eval(r);
                let e1 = e.min(b);
                acc.add_quad(integrate_with(g, 0.0, e1, opts));
                acc.add_quad(integrate_with(g, e1, b, opts));
                acc.add(s0 * kernel.even_moment(0, b)?);
            }
            None => {
                acc.add_quad(integrate_with(|r| p.eval(r) * kernel.eval(r), 0.0, b, opts));
            }
        }
        b
    };

    let integrand = |r: f64| p.eval(r) * kernel.eval(r);
    let end = match (&p.far, p.cutoff) {
        (Some(f), _) => {
            let mut e = f.start.max(start);
            if let Some(eps) = eps {
                e = e.max(16.0 * eps);
            }
            e
        }
        (None, Some(c)) => c.max(start),
        (None, None) => f64::INFINITY,
    };

    let mut cuts: Vec<f64> = vec![start];
    for &b in &p.breakpoints {
        if b > start && b < end {
            cuts.push(b);
        }
    }
    if let Some(e) = eps {
        if e > start && e < end {
            cuts.push(e);
        }
    }
    if end.is_infinite() {
        let m = start.max(4.0 * p.scale);
        if m > start {
            cuts.push(m);
        }
    }
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();
    cuts.push(end);
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            acc.add_quad(integrate_with(integrand, w[0], w[1], opts));
        }
    }

    if let Some(f) = &p.far {
        if f.constant != 0.0 {
            acc.add(f.constant * kernel.constant_tail(end)?);
        }
        for w in &f.waves {
            if w.amplitude != 0.0 {
                acc.add(w.amplitude * kernel.wave_tail(w.omega, w.phase, end)?);
            }
        }
    }

    let value = acc.value + acc.comp;
    if !value.is_finite() {
        return Err(Error::Quadrature { value, error: f64::INFINITY, tol });
    }
    Ok(QuadResult { value, error: acc.error, evals: acc.evals, resabs: 0.0 })
}
