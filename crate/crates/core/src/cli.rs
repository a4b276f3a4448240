//! Command line front end: argument parsing, config files, CSV tables and the
//! self-test suite.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::constants::{a_delta, c_standard, c_standard_levy, central_diff_power, norm_constants, unit_sphere_moment, v_integral, v_integral_quadrature};
use crate::error::{Error, Result};
use crate::field::TestField;
use crate::flcore::{fl_eigenvalue, fl_order_m, fl_regularized, fl_standard, Representation};
use crate::lattice::{continuum_constant, continuum_study, wm_dispersion, SelfSimilarParams, Truncation};
use crate::oracle::{dft_fl, gaussian_reference, gaussian_spectral, GridField};
use crate::potentials::{potential_eigenvalue, scaling_factor, validate_stiffness, StiffnessMatrix};
use crate::quad::{i_reg, reg_halfline, Cutoff, QuadSpec};

#[derive(Debug, Parser)]
#[command(name = "fraclap", version, about = "Fractional Laplacian representations and self-similar lattices")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` file; command line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Numerical tolerance (quadrature or lattice truncation).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalization constants U, V, A, C_general, C_standard, A_delta.
    Constants(ConstantsArgs),
    /// Weierstrass-Mandelbrot dispersion relation over a kh range.
    Dispersion(DispersionArgs),
    /// Apply a representation to a test field along a line.
    Apply(ApplyArgs),
    /// Plane-wave eigenvalues of a representation or a stiffness matrix.
    Eig(EigArgs),
    /// Continuum-limit study over a sequence of scale ratios.
    Converge(ConvergeArgs),
    /// Run the built-in property checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Lattice length entering A_delta.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// zeta = ln a entering A_delta.
    #[arg(long, default_value_t = 1.0)]
    pub zeta: f64,
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub a: f64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 0.0)]
    pub kh_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub kh_max: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Add the continuum-limit column A'_delta (kh)^delta / ln a.
    #[arg(long)]
    pub limit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldKind {
    Gaussian,
    PlaneWave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepKind {
    Standard,
    OrderM,
    Regularized,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long, value_enum, default_value_t = FieldKind::Gaussian)]
    pub field: FieldKind,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub center: f64,
    /// Wave number of the plane wave along the first axis.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, value_enum, default_value_t = RepKind::Regularized)]
    pub rep: RepKind,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = -3.0)]
    pub x_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub x_max: f64,
    #[arg(long, default_value_t = 13)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct EigArgs {
    #[arg(long, value_enum, default_value_t = RepKind::Regularized)]
    pub rep: RepKind,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 0.5)]
    pub k_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub k_max: f64,
    #[arg(long, default_value_t = 4)]
    pub samples: usize,
    /// Stiffness matrix CSV; eigenvalues then come from the potential.
    #[arg(long)]
    pub stiffness: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub kh: f64,
    /// Comma separated ratios a > 1.
    #[arg(long, default_value = "1.5,1.25,1.1,1.05,1.02")]
    pub a_values: String,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Run only checks whose group or name contains this string.
    #[arg(long)]
    pub filter: Option<String>,
    /// Perturb the expected values of one group (test hook).
    #[arg(long)]
    pub inject_fault: Option<String>,
}

/// A cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x}"),
            Cell::Text(s) => write!(f, "{s}"),
            Cell::Empty => Ok(()),
        }
    }
}

/// Header plus rows; rendered as CSV or an aligned table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_pretty(&self) -> String {
        let cols = self.header.len();
        let body: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        let mut w: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for r in &body {
            for (i, c) in r.iter().enumerate().take(cols) {
                w[i] = w[i].max(c.len());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{:>width$}", c, width = w[i])).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut s = line(&self.header);
        s.push_str(&line(&w.iter().map(|&n| "-".repeat(n)).collect::<Vec<_>>()));
        for r in &body {
            s.push_str(&line(r));
        }
        s
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Csv => self.to_csv(),
            Format::Pretty => self.to_pretty(),
        }
    }
}

/// Parses CSV emitted by [`Table::to_csv`].
pub fn parse_csv(s: &str) -> Result<Table> {
    let mut lines = s.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let header: Vec<String> = header.split(',').map(|h| h.to_string()).collect();
    let mut rows = Vec::new();
    for (i, l) in lines.enumerate() {
        let cells: Vec<Cell> = l
            .split(',')
            .map(|c| {
                if c.is_empty() {
                    Cell::Empty
                } else if let Ok(x) = c.parse::<f64>() {
                    Cell::Num(x)
                } else {
                    Cell::Text(c.to_string())
                }
            })
            .collect();
        if cells.len() != header.len() {
            return Err(Error::Parse(format!("row {} has {} cells, header has {}", i + 2, cells.len(), header.len())));
        }
        rows.push(cells);
    }
    Ok(Table { header, rows })
}

/// Reads `key = value` lines and turns them into `--key value` arguments.
pub fn config_args(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        let val = v.trim();
        if key.is_empty() || key.starts_with('-') {
            return Err(Error::Parse(format!("config line {}: bad key {:?}", i + 1, k.trim())));
        }
        if matches!(key.as_str(), "config" | "out" | "format") {
            return Err(Error::Parse(format!("config line {}: key {key} is command line only", i + 1)));
        }
        match val {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => {
                out.push(format!("--{key}"));
                out.push(val.to_string());
            }
        }
    }
    Ok(out)
}

const VALUE_FLAGS: [&str; 4] = ["--out", "--config", "--tol", "--format"];

// Inserts config-derived arguments right after the subcommand so that
// explicit flags, which come later, override them.
fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut config = None;
    let mut sub = None;
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if a == "--config" {
            config = args.get(i + 1).cloned();
            i += 2;
            continue;
        }
        if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else if VALUE_FLAGS.contains(&a.as_str()) {
            i += 2;
            continue;
        } else if sub.is_none() && !a.starts_with('-') {
            sub = Some(i);
        }
        i += 1;
    }
    let (Some(path), Some(pos)) = (config, sub) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let extra = config_args(&text)?;
    let mut out = args[..=pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

fn cmd_constants(a: &ConstantsArgs) -> Result<Table> {
    let c = norm_constants(a.m, a.n, a.alpha)?;
    let ad = if a.alpha > 0.0 && a.alpha < 2.0 { Cell::Num(a_delta(a.alpha, a.h, a.zeta)?) } else { Cell::Empty };
    let mut t = Table::new(&["n", "alpha", "m", "U", "V", "A", "C_general", "C_standard", "A_delta", "regime"]);
    t.push(vec![
        Cell::Num(a.n as f64),
        Cell::Num(a.alpha),
        Cell::Num(a.m as f64),
        Cell::Num(c.u),
        Cell::Num(c.v),
        Cell::Num(c.a),
        Cell::Num(c.c_general),
        Cell::Num(c.c_standard),
        ad,
        Cell::Text(if c.distributional { "distributional" } else { "fractional" }.into()),
    ]);
    Ok(t)
}

fn cmd_dispersion(a: &DispersionArgs, tol: Option<f64>) -> Result<Table> {
    let mut p = SelfSimilarParams::new(a.delta, a.a, 1.0, a.m)?;
    if let Some(t) = tol {
        p = p.with_truncation(Truncation::Tolerance(t))?;
    }
    if !(a.kh_min >= 0.0 && a.kh_max >= a.kh_min) {
        return Err(Error::Domain(format!("need 0 <= kh-min <= kh-max, got {} and {}", a.kh_min, a.kh_max)));
    }
    let lim = if a.limit { Some(continuum_constant(a.m, a.delta)? / a.a.ln()) } else { None };
    let mut t = if a.limit { Table::new(&["kh", "omega2", "omega2_limit"]) } else { Table::new(&["kh", "omega2"]) };
    for kh in linspace(a.kh_min, a.kh_max, a.samples) {
        let mut row = vec![Cell::Num(kh), Cell::Num(wm_dispersion(kh, &p)?)];
        if let Some(c) = lim {
            row.push(Cell::Num(c * kh.powf(a.delta)));
        }
        t.push(row);
    }
    Ok(t)
}

// Grid for the spectral column of `apply`.
const APPLY_GRID_POINTS: usize = 16_384;
const APPLY_GRID_PERIOD: f64 = 1024.0;

fn cmd_apply(a: &ApplyArgs, tol: Option<f64>) -> Result<Table> {
    let n = a.n;
    let u = match a.field {
        FieldKind::Gaussian => {
            let mut c = vec![0.0; n];
            if n > 0 {
                c[0] = a.center;
            }
            TestField::gaussian(&c, a.sigma)?
        }
        FieldKind::PlaneWave => {
            let mut k = vec![0.0; n];
            if n > 0 {
                k[0] = a.k;
            }
            TestField::plane_wave(&k, 0.0)?
        }
    };
    let xs = linspace(a.x_min, a.x_max, a.samples);
    let qtol = tol.unwrap_or(1e-13);
    let spec = QuadSpec { tol: qtol, ..QuadSpec::default() };
    let mut values = Vec::with_capacity(xs.len());
    let mut warning = None;
    for &x in &xs {
        let mut pt = vec![0.0; n];
        if n > 0 {
            pt[0] = x;
        }
        let r = match a.rep {
            RepKind::Standard => fl_standard(&u, &pt, n, a.alpha, qtol)?,
            RepKind::OrderM => fl_order_m(&u, &pt, n, a.alpha, a.m, qtol)?,
            RepKind::Regularized => fl_regularized(&u, &pt, n, a.alpha, &spec)?,
        };
        if r.warning.is_some() {
            warning = r.warning;
        }
        values.push(r.value);
    }
    let oracle: Option<Vec<f64>> = match a.field {
        FieldKind::PlaneWave => Some(xs.iter().map(|&x| -a.k.abs().powf(a.alpha) * (a.k * x).cos()).collect()),
        FieldKind::Gaussian if n == 1 => {
            let even = {
                let h = 0.5 * a.alpha;
                (h - h.round()).abs() < 1e-12
            };
            let fits = xs.iter().all(|x| (x - a.center).abs() < 0.25 * APPLY_GRID_PERIOD);
            if !fits {
                None
            } else if even {
                let g = GridField::sample(|x| (-((x - a.center) / a.sigma).powi(2)).exp(), APPLY_GRID_POINTS, APPLY_GRID_PERIOD)?;
                let it = dft_fl(&g, a.alpha)?.interpolant();
                Some(xs.iter().map(|&x| it.eval(x)).collect())
            } else {
                Some(gaussian_spectral(a.alpha, a.sigma, a.center, APPLY_GRID_POINTS, APPLY_GRID_PERIOD, &xs, true)?)
            }
        }
        _ => None,
    };
    let mut t = Table::new(&["x", "value", "oracle", "abs_diff"]);
    for (i, &x) in xs.iter().enumerate() {
        let (o, d) = match &oracle {
            Some(o) => (Cell::Num(o[i]), Cell::Num((values[i] - o[i]).abs())),
            None => (Cell::Empty, Cell::Empty),
        };
        t.push(vec![Cell::Num(x), Cell::Num(values[i]), o, d]);
    }
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    Ok(t)
}

fn cmd_eig(a: &EigArgs) -> Result<Table> {
    let ks = linspace(a.k_min, a.k_max, a.samples);
    if ks.iter().any(|&k| !(k > 0.0)) {
        return Err(Error::Domain("wave numbers must be positive".into()));
    }
    if let Some(path) = &a.stiffness {
        let v = StiffnessMatrix::load_csv(path)?;
        let av = scaling_factor(&v, a.alpha)?;
        let c = c_standard(a.n, a.alpha)?;
        let valid = validate_stiffness(&v).is_valid();
        let mut t = Table::new(&["k", "eigenvalue", "A_V", "C_standard", "valid"]);
        for k in ks {
            t.push(vec![
                Cell::Num(k),
                Cell::Num(potential_eigenvalue(&v, a.n, a.alpha, k)?),
                Cell::Num(av),
                Cell::Num(c),
                Cell::Text(valid.to_string()),
            ]);
        }
        return Ok(t);
    }
    let rep = match a.rep {
        RepKind::Standard => Representation::Standard,
        RepKind::OrderM => Representation::OrderM(a.m),
        RepKind::Regularized => Representation::Regularized,
    };
    let mut t = Table::new(&["k", "eigenvalue", "expected", "rel_err"]);
    for k in ks {
        let e = fl_eigenvalue(rep, a.n, a.alpha, k)?;
        let want = -k.powf(a.alpha);
        t.push(vec![Cell::Num(k), Cell::Num(e), Cell::Num(want), Cell::Num(((e - want) / want).abs())]);
    }
    Ok(t)
}

fn cmd_converge(a: &ConvergeArgs, tol: Option<f64>) -> Result<Table> {
    let avals = a
        .a_values
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("a-values: {e}"))))
        .collect::<Result<Vec<f64>>>()?;
    let pts = continuum_study(a.delta, a.m, a.kh, &avals, tol.unwrap_or(1e-12))?;
    let mut t = Table::new(&["a", "ln_a_omega2", "limit", "abs_error"]);
    for p in pts {
        t.push(vec![Cell::Num(p.a), Cell::Num(p.scaled), Cell::Num(p.limit), Cell::Num(p.error)]);
    }
    Ok(t)
}

/// A numeric comparison in the self-test suite.
pub struct Check {
    pub group: &'static str,
    pub name: &'static str,
    run: fn() -> Result<(f64, f64, f64)>,
}

fn rel_check(got: f64, want: f64, tol: f64) -> (f64, f64, f64) {
    (got, want, tol * want.abs().max(f64::MIN_POSITIVE))
}

/// The self-test suite: each check returns `(got, want, absolute tolerance)`.
pub fn checks() -> Vec<Check> {
    use std::f64::consts::PI;
    vec![
        Check { group: "constants", name: "c_standard_1d_alpha1", run: || Ok(rel_check(c_standard(1, 1.0)?, 1.0 / PI, 1e-12)) },
        Check {
            group: "constants",
            name: "c_standard_levy_form",
            run: || Ok(rel_check(c_standard(2, 0.7)?, c_standard_levy(2, 0.7)?, 1e-12)),
        },
        Check {
            group: "constants",
            name: "u_three_dims",
            run: || Ok(rel_check(unit_sphere_moment(3, 1.3)?, 4.0 * PI / 2.3, 1e-12)),
        },
        Check { group: "constants", name: "v_quadrature", run: || Ok(rel_check(v_integral_quadrature(1, 1.0)?, PI, 1e-8)) },
        Check { group: "constants", name: "v_closed_vs_quadrature", run: || Ok(rel_check(v_integral(3, 4.5)?, v_integral_quadrature(3, 4.5)?, 1e-9)) },
        Check { group: "constants", name: "central_diff_zero_at_even", run: || Ok((central_diff_power(3, 2.0)?, 0.0, 0.0)) },
        Check {
            group: "quad",
            name: "regularization_rule",
            run: || {
                let spec = QuadSpec { cutoff: Cutoff::Fixed(1.0), ..QuadSpec::default() };
                Ok(rel_check(reg_halfline(|_| 1.0, 1.5, &spec)?.value, i_reg(1.0, 1.5)?, 1e-6))
            },
        },
        Check { group: "quad", name: "i_reg_small_alpha", run: || Ok(rel_check(i_reg(1.0, 1e-6)?, PI / 2.0, 1e-5)) },
        Check {
            group: "flcore",
            name: "standard_eigenvalue_2d",
            run: || Ok(rel_check(fl_eigenvalue(Representation::Standard, 2, 1.5, 1.0)?, -1.0, 1e-8)),
        },
        Check {
            group: "flcore",
            name: "order_m_eigenvalue",
            run: || Ok(rel_check(fl_eigenvalue(Representation::OrderM(3), 1, 4.5, 2.0)?, -(2f64.powf(4.5)), 1e-8)),
        },
        Check {
            group: "flcore",
            name: "regularized_outside_levy",
            run: || Ok(rel_check(fl_eigenvalue(Representation::Regularized, 1, 3.0, 2.0)?, -8.0, 1e-8)),
        },
        Check {
            group: "flcore",
            name: "gaussian_alpha1",
            run: || {
                let u = TestField::unit_gaussian();
                Ok(rel_check(fl_regularized(&u, &[0.0], 1, 1.0, &QuadSpec::default())?.value, -2.0 / PI.sqrt(), 1e-9))
            },
        },
        Check {
            group: "flcore",
            name: "m_independence",
            run: || {
                let u = TestField::unit_gaussian();
                Ok(rel_check(fl_order_m(&u, &[0.6], 1, 1.2, 3, 1e-13)?.value, fl_standard(&u, &[0.6], 1, 1.2, 1e-13)?.value, 1e-8))
            },
        },
        Check {
            group: "lattice",
            name: "self_similarity",
            run: || {
                let p = SelfSimilarParams::new(0.45, 1.5, 1.0, 1)?;
                Ok(rel_check(wm_dispersion(1.5 * 2.25, &p)?, 1.5f64.powf(0.45) * wm_dispersion(2.25, &p)?, 1e-10))
            },
        },
        Check {
            group: "lattice",
            name: "wm_golden",
            run: || {
                let p = SelfSimilarParams::new(0.45, 1.5, 1.0, 1)?;
                Ok((wm_dispersion(1.0, &p)?, 12.483_331_391_146_486, 1e-11))
            },
        },
        Check { group: "lattice", name: "continuum_constant", run: || Ok(rel_check(continuum_constant(1, 1.0)?, PI, 1e-12)) },
        Check {
            group: "oracle",
            name: "cosine_eigenfunction",
            run: || {
                let g = GridField::sample(|x| (3.0 * x).cos(), 64, 2.0 * PI)?;
                let r = dft_fl(&g, 1.5)?;
                Ok(rel_check(r.samples()[0], -(3f64.powf(1.5)) * g.samples()[0], 1e-12))
            },
        },
        Check { group: "oracle", name: "gaussian_reference", run: || Ok((gaussian_reference(4.0, 1.0, 0.0)?, -12.0, 0.0)) },
        Check {
            group: "potentials",
            name: "two_site_eigenvalue",
            run: || {
                let v = StiffnessMatrix::from_toeplitz(&[1.0, -1.0])?;
                Ok(rel_check(potential_eigenvalue(&v, 1, 1.0, 1.0)?, -PI, 1e-10))
            },
        },
        Check {
            group: "potentials",
            name: "order_two_quadratic_form",
            run: || {
                let v = StiffnessMatrix::from_difference_order(2)?;
                Ok(rel_check(potential_eigenvalue(&v, 1, 1.3, 1.0)?, -0.5 * norm_constants(2, 1, 1.3)?.a, 1e-8))
            },
        },
    ]
}

fn cmd_selftest(a: &SelftestArgs, out: &mut dyn Write) -> Result<bool> {
    let mut all = true;
    let mut ran = 0;
    let mut failed = 0;
    for c in checks() {
        if let Some(f) = &a.filter {
            if !c.group.contains(f.as_str()) && !c.name.contains(f.as_str()) {
                continue;
            }
        }
        ran += 1;
        let fault = a.inject_fault.as_deref() == Some(c.group);
        let line = match (c.run)() {
            Ok((got, mut want, tol)) => {
                if fault {
                    want = if want == 0.0 { 1e-3 } else { want * (1.0 + 1e-3) };
                }
                let ok = (got - want).abs() <= tol;
                all &= ok;
                failed += usize::from(!ok);
                format!("{} {}/{}: got {got}, want {want}, tol {tol:e}", if ok { "PASS" } else { "FAIL" }, c.group, c.name)
            }
            Err(e) => {
                all = false;
                failed += 1;
                format!("FAIL {}/{}: {e}", c.group, c.name)
            }
        };
        writeln!(out, "{line}").map_err(|e| Error::Io(e.to_string()))?;
    }
    if ran == 0 {
        return Err(Error::Domain(format!("no check matches filter {:?}", a.filter.as_deref().unwrap_or(""))));
    }
    writeln!(out, "{} passed, {failed} failed", ran - failed)
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(all)
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    }
}

/// Runs the command line with explicit output streams; returns the exit code.
pub fn run_with(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Some(t) = cli.tol {
        if !(t > 0.0) {
            let _ = writeln!(err, "error: --tol must be positive, got {t}");
            return 2;
        }
    }
    let table = match &cli.command {
        Command::Constants(a) => cmd_constants(a),
        Command::Dispersion(a) => cmd_dispersion(a, cli.tol),
        Command::Apply(a) => cmd_apply(a, cli.tol),
        Command::Eig(a) => cmd_eig(a),
        Command::Converge(a) => cmd_converge(a, cli.tol),
        Command::Selftest(a) => {
            let mut buf = Vec::new();
            let r = cmd_selftest(a, &mut buf);
            let text = String::from_utf8_lossy(&buf).into_owned();
            if let Err(e) = emit(&text, cli.out.as_ref(), out) {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            return match r {
                Ok(true) => 0,
                Ok(false) => 1,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
            };
        }
    };
    match table.and_then(|t| emit(&t.render(cli.format), cli.out.as_ref(), out)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Runs the command line against the process streams.
pub fn run(args: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let mut v = vec!["fraclap".to_string()];
        v.extend(args.iter().map(|s| s.to_string()));
        let c = run_with(v, &mut o, &mut e);
        (c, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn constants_rows() {
        let (c, o, _) = call(&["constants", "--n", "1", "--alpha", "1", "--m", "1"]);
        assert_eq!(c, 0);
        assert!(o.contains("0.3183098861"));
        let (c, o, _) = call(&["constants", "--n", "1", "--alpha", "2", "--m", "2"]);
        assert_eq!(c, 0);
        assert!(o.contains(",0,,distributional"), "{o}");
        let (c, _, e) = call(&["constants", "--n", "1", "--alpha", "3", "--m", "1"]);
        assert_eq!(c, 2);
        assert!(e.contains("alpha"));
    }

    #[test]
    fn config_values_yield_to_flags() {
        let a = config_args("# comment\nalpha = 1.5\nkh_min = 0\nlimit = true\nquiet = false\n").unwrap();
        assert_eq!(a, vec!["--alpha", "1.5", "--kh-min", "0", "--limit"]);
        assert!(config_args("nonsense").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let (_, o, _) = call(&["dispersion", "--delta", "1.05", "--a", "1.5", "--kh-max", "3", "--samples", "7", "--limit"]);
        let t = parse_csv(&o).unwrap();
        assert_eq!(t.to_csv(), o);
        assert_eq!(t.rows[0][1], Cell::Num(0.0));
        assert_eq!(t.rows[0][2], Cell::Num(0.0));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["dispersion", "--delta", "2.5", "--a", "1.5"]).0, 2);
        assert_eq!(call(&["apply", "--rep", "standard", "--alpha", "2.5"]).0, 2);
        assert_eq!(call(&["constants", "--alpha", "1", "--bogus", "1"]).0, 2);
    }
}
