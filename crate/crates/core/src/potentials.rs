//! Generalized self-similar potentials through stiffness matrices `V_{pq}`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::constants::{binomial, c_standard};
use crate::error::{domain, Error, Result};

pub const MAX_SITES: usize = 64;
const REL_TOL: f64 = 1e-10;

/// Symmetric coupling matrix over sites `p = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessMatrix {
    v: DMatrix<f64>,
}

impl StiffnessMatrix {
    fn check_size(m: usize) -> Result<()> {
        if !(2..=MAX_SITES).contains(&m) {
            return domain(format!("stiffness matrices need 2 <= M <= {MAX_SITES} sites, got {m}"));
        }
        Ok(())
    }

    /// `V_{pq} = g_{|p-q|}` from the generators `g_0..g_{M-1}`.
    pub fn from_toeplitz(g: &[f64]) -> Result<Self> {
        let m = g.len();
        Self::check_size(m)?;
        if g.iter().any(|x| !x.is_finite()) {
            return domain("stiffness entries must be finite");
        }
        Ok(StiffnessMatrix { v: DMatrix::from_fn(m, m, |p, q| g[p.abs_diff(q)]) })
    }

    /// A square matrix given row by row.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        Self::check_size(m)?;
        if rows.iter().any(|r| r.len() != m) {
            return domain("stiffness matrix must be square");
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return domain("stiffness entries must be finite");
        }
        Ok(StiffnessMatrix { v: DMatrix::from_fn(m, m, |p, q| rows[p][q]) })
    }

    /// `V = c c^T`, the matrix of the quadratic form `(sum_p c_p u_p)^2`.
    pub fn from_quadratic_form(c: &[f64]) -> Result<Self> {
        Self::check_size(c.len())?;
        let cv = nalgebra::DVector::from_column_slice(c);
        Ok(StiffnessMatrix { v: &cv * cv.transpose() })
    }

    /// The quadratic form of `{(D - 1)^m u}^2` on sites `0..=m`.
    pub fn from_difference_order(m: usize) -> Result<Self> {
        if m == 0 || m + 1 > MAX_SITES {
            return Err(Error::OrderOutOfRange(m));
        }
        let c: Vec<f64> = (0..=m)
            .map(|j| {
                let s = if (m - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                s * binomial(m as u32, j as u32)
            })
            .collect();
        Self::from_quadratic_form(&c)
    }

    pub fn size(&self) -> usize {
        self.v.nrows()
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.v[(p, q)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.v
    }

    /// The generator row when the matrix depends only on `|p - q|`.
    pub fn toeplitz_generator(&self) -> Option<Vec<f64>> {
        let m = self.size();
        let g: Vec<f64> = (0..m).map(|d| self.v[(0, d)]).collect();
        for p in 0..m {
            for q in 0..m {
                if self.v[(p, q)] != g[p.abs_diff(q)] {
                    return None;
                }
            }
        }
        Some(g)
    }

    /// Parses CSV: one row of Toeplitz generators, or `M` rows of `M` entries.
    /// Blank lines and `#` comments are skipped.
    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        match rows.len() {
            0 => Err(Error::Parse("empty stiffness file".into())),
            1 => Self::from_toeplitz(&rows[0]),
            _ => Self::from_rows(&rows),
        }
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_csv_str(&s)
    }

    /// Generator row for Toeplitz matrices, full rows otherwise.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let row = |out: &mut String, r: &[f64]| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        };
        match self.toeplitz_generator() {
            Some(g) => row(&mut out, &g),
            None => {
                for p in 0..self.size() {
                    let r: Vec<f64> = (0..self.size()).map(|q| self.v[(p, q)]).collect();
                    row(&mut out, &r);
                }
            }
        }
        out
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// `V u` for site values `u`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let uv = nalgebra::DVector::from_column_slice(u);
        (&self.v * uv).iter().copied().collect()
    }
}

/// Outcome of [`validate_stiffness`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub symmetric: bool,
    pub zero_sum: bool,
    pub semidefinite: bool,
    pub kernel_dim: usize,
    /// Ascending eigenvalues of the symmetric part.
    pub eigenvalues: Vec<f64>,
    pub tolerance: f64,
    pub violations: Vec<String>,
}

impl ValidationReport {
    /// Symmetric, zero-sum, semidefinite, one-dimensional kernel.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Symmetric, zero-sum and semidefinite; the kernel may be larger than
    /// the constants, as for rank-one quadratic forms.
    pub fn is_admissible(&self) -> bool {
        self.symmetric && self.zero_sum && self.semidefinite
    }
}

/// Checks symmetry, zero sum, semidefiniteness and the kernel dimension with
/// tolerance `1e-10 |V|`.
pub fn validate_stiffness(v: &StiffnessMatrix) -> ValidationReport {
    let a = &v.v;
    let m = a.nrows();
    let norm = a.norm();
    let tol = REL_TOL * norm;
    let symmetric = (0..m).all(|p| (0..m).all(|q| (a[(p, q)] - a[(q, p)]).abs() <= tol));
    let total: f64 = a.iter().sum();
    let zero_sum = total.abs() <= tol * m as f64;
    let sym = (a + a.transpose()) * 0.5;
    let mut eig: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    let semidefinite = eig.first().is_none_or(|&e| e >= -tol);
    let kernel_dim = eig.iter().filter(|e| e.abs() <= tol).count();
    let mut violations = Vec::new();
    if !symmetric {
        violations.push("not symmetric".to_string());
    }
    if !zero_sum {
        violations.push(format!("entries sum to {total}, not zero"));
    }
    if !semidefinite {
        violations.push(format!("not positive semidefinite (smallest eigenvalue {})", eig[0]));
    }
    if kernel_dim != 1 {
        violations.push(format!("kernel dimension {kernel_dim}, expected 1"));
    }
    ValidationReport { symmetric, zero_sum, semidefinite, kernel_dim, eigenvalues: eig, tolerance: tol, violations }
}

/// Errors unless the matrix is fully valid.
pub fn validate_strict(v: &StiffnessMatrix) -> Result<ValidationReport> {
    let r = validate_stiffness(v);
    if r.is_valid() {
        Ok(r)
    } else {
        Err(Error::InvalidStiffness(r.violations))
    }
}

fn require_admissible(v: &StiffnessMatrix) -> Result<()> {
    let r = validate_stiffness(v);
    if r.is_admissible() {
        Ok(())
    } else {
        let v: Vec<String> = r.violations.into_iter().filter(|s| !s.starts_with("kernel dimension")).collect();
        Err(Error::InvalidStiffness(v))
    }
}

/// `A_V = 1/2 sum_{p,q} V_{pq} |p - q|^alpha`.
pub fn scaling_factor(v: &StiffnessMatrix, alpha: f64) -> Result<f64> {
    scaling_factor_with_spacing(v, alpha, 1.0)
}

/// `A_V` with site labels rescaled by `lambda`: `1/2 sum V_{pq} |lambda (p - q)|^alpha`.
pub fn scaling_factor_with_spacing(v: &StiffnessMatrix, alpha: f64, lambda: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("scaling factor needs alpha > 0, got {alpha}"));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("label spacing must be positive, got {lambda}"));
    }
    require_admissible(v)?;
    let m = v.size();
    let mut acc = 0.0;
    for p in 0..m {
        for q in 0..m {
            acc += v.v[(p, q)] * (lambda * p.abs_diff(q) as f64).powf(alpha);
        }
    }
    Ok(0.5 * acc)
}

/// Eigenvalue of the potential Laplacian on `e^{i k.x}`: `A_V / C_standard(n, alpha) k^alpha`.
pub fn potential_eigenvalue(v: &StiffnessMatrix, n: usize, alpha: f64, k: f64) -> Result<f64> {
    let half = 0.5 * alpha;
    if (half - half.round()).abs() < 1e-12 {
        return domain(format!("alpha = {alpha} is an even integer: C_standard vanishes"));
    }
    if !(k >= 0.0) || !k.is_finite() {
        return domain(format!("wave number must be non-negative, got {k}"));
    }
    let c = c_standard(n, alpha)?;
    let a = scaling_factor(v, alpha)?;
    if k == 0.0 {
        return Ok(0.0);
    }
    Ok(a / c * k.powf(alpha))
}

/// Whether `V` also annihilates the linear site field `u_p = p`.
pub fn annihilates_linear(v: &StiffnessMatrix) -> bool {
    let m = v.size();
    let lin: Vec<f64> = (0..m).map(|p| p as f64).collect();
    let tol = REL_TOL * v.v.norm() * m as f64;
    v.apply(&lin).iter().all(|x| x.abs() <= tol)
}

/// Symmetric circulant Toeplitz generators with spectrum `lambda_0 = 0`,
/// `lambda_j = lambda_{M-j} = spectrum[j-1] > 0`: always a valid stiffness matrix.
pub fn circulant_generators(m: usize, spectrum: &[f64]) -> Result<Vec<f64>> {
    StiffnessMatrix::check_size(m)?;
    let need = m / 2;
    if spectrum.len() < need || spectrum.iter().take(need).any(|&l| !(l > 0.0)) {
        return domain(format!("need {need} positive spectral values for M = {m}"));
    }
    let lam = |j: usize| -> f64 {
        if j == 0 {
            0.0
        } else {
            spectrum[j.min(m - j) - 1]
        }
    };
    Ok((0..m)
        .map(|d| {
            let s: f64 = (0..m).map(|j| lam(j) * (2.0 * std::f64::consts::PI * (j * d) as f64 / m as f64).cos()).sum();
            s / m as f64
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::norm_constants;
    use std::f64::consts::PI;

    #[test]
    fn examples() {
        let v = StiffnessMatrix::from_toeplitz(&[1.0, -1.0]).unwrap();
        let r = validate_stiffness(&v);
        assert!(r.is_valid());
        assert!((r.eigenvalues[0]).abs() < 1e-15 && (r.eigenvalues[1] - 2.0).abs() < 1e-15);
        assert!(!validate_stiffness(&StiffnessMatrix::from_toeplitz(&[1.0, 0.0]).unwrap()).zero_sum);
        let z = validate_stiffness(&StiffnessMatrix::from_toeplitz(&[0.0, 0.0]).unwrap());
        assert_eq!(z.kernel_dim, 2);
        assert!(!z.is_valid());
        assert_eq!(scaling_factor(&v, 1.0).unwrap(), -1.0);
        assert!(scaling_factor(&v, 0.0).is_err());
        let e = potential_eigenvalue(&v, 1, 1.0, 1.0).unwrap();
        assert!((e + PI).abs() < 1e-12);
        assert!(potential_eigenvalue(&v, 1, 2.0, 1.0).is_err());
        assert_eq!(potential_eigenvalue(&v, 1, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_free_sum_agrees() {
        let g = circulant_generators(6, &[1.0, 0.5, 2.0]).unwrap();
        let v = StiffnessMatrix::from_toeplitz(&g).unwrap();
        assert!(validate_stiffness(&v).is_valid());
        let a = 1.3;
        let mut off = 0.0;
        for p in 0..6usize {
            for q in 0..6usize {
                if p != q {
                    off += v.get(p, q) * (p.abs_diff(q) as f64).powf(a);
                }
            }
        }
        assert!((scaling_factor(&v, a).unwrap() - 0.5 * off).abs() < 1e-14);
    }

    #[test]
    fn difference_order_matches_order_m_eigenvalue() {
        for m in 1..=2usize {
            let v = StiffnessMatrix::from_difference_order(m).unwrap();
            assert!(validate_stiffness(&v).is_admissible());
            for &a in &[0.5, 1.3, 1.7] {
                let e = potential_eigenvalue(&v, 1, a, 1.0).unwrap();
                let want = -0.5 * norm_constants(m, 1, a).unwrap().a;
                assert!((e - want).abs() < 1e-8 * want.abs(), "m={m} a={a}: {e} {want}");
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let v = StiffnessMatrix::from_toeplitz(&[2.0, -1.0, 0.0]).unwrap();
        let s = v.to_csv_string();
        assert_eq!(s, "2,-1,0\n");
        assert_eq!(StiffnessMatrix::from_csv_str(&s).unwrap(), v);
        let q = StiffnessMatrix::from_difference_order(2).unwrap();
        assert_eq!(StiffnessMatrix::from_csv_str(&q.to_csv_string()).unwrap(), q);
        assert!(StiffnessMatrix::from_csv_str("1,x\n").is_err());
    }
}
