//! Strategy comparison, parameter sweeps and the datasets behind the
//! optimal-strategy table and the fidelity/threshold figures.

pub mod selftest;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lcdt::{averaged_fidelity, omega_thresholds, GaussianAlphabet};
use crate::telecloning::{numeric_optimal, optimal_symmetric, PhotonNumber, Regime};

/// Fidelities closer than this are reported as a tie.
pub const TIE_BAND: f64 = 1e-12;

/// Points on the `τ ∈ (0, 3]` axis of the figure datasets.
pub const FIGURE_POINTS: usize = 200;

/// Alphabet widths drawn in the fidelity figures.
pub const FIGURE_OMEGAS: [f64; 4] = [0.0, 1.0, 2.0, 3.0];

/// Clone numbers drawn in the threshold figures.
pub const THRESHOLD_MS: [usize; 4] = [2, 4, 8, 16];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Tele,
    Lcdt,
    Tie,
}

impl Winner {
    pub fn decide(f_tele: f64, f_lcdt: f64) -> Self {
        if (f_tele - f_lcdt).abs() <= TIE_BAND {
            Winner::Tie
        } else if f_tele > f_lcdt {
            Winner::Tele
        } else {
            Winner::Lcdt
        }
    }
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Tele => "tele",
            Winner::Lcdt => "lcdt",
            Winner::Tie => "tie",
        })
    }
}

/// Optimized telecloning against the local strategy (cloner at the sender)
/// for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRecord {
    pub m: usize,
    pub tau_tot: f64,
    pub mu: f64,
    pub omega: f64,
    pub f_tele: f64,
    pub f_lcdt: f64,
    pub regime: Regime,
    pub n_opt: PhotonNumber,
    pub tau0_opt: f64,
    pub winner: Winner,
}

pub const COMPARISON_COLUMNS: [&str; 10] = [
    "m", "tau_tot", "mu", "omega", "f_tele", "regime", "n_opt", "tau0_opt", "f_lcdt", "winner",
];

impl ComparisonRecord {
    pub fn to_row(&self) -> Vec<String> {
        vec![
            self.m.to_string(),
            fmt_num(self.tau_tot),
            fmt_num(self.mu),
            fmt_num(self.omega),
            fmt_num(self.f_tele),
            self.regime.to_string(),
            fmt_num(self.n_opt.value()),
            fmt_num(self.tau0_opt),
            fmt_num(self.f_lcdt),
            self.winner.to_string(),
        ]
    }
}

pub fn compare(m: usize, tau_tot: f64, mu: f64, omega: f64) -> Result<ComparisonRecord> {
    let tele = optimal_symmetric(m, tau_tot, mu)?;
    let f_lcdt = averaged_fidelity(m, tau_tot, mu, GaussianAlphabet::from_omega(omega)?)?;
    Ok(ComparisonRecord {
        m,
        tau_tot,
        mu,
        omega,
        f_tele: tele.f_max,
        f_lcdt,
        regime: tele.regime,
        n_opt: tele.n_opt,
        tau0_opt: tele.tau0_opt,
        winner: Winner::decide(tele.f_max, f_lcdt),
    })
}

/// Numbers are written with 17 significant digits so that reruns can be
/// compared byte for byte.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

/// A CSV dataset with a `#`-prefixed metadata block.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ReportTable {
    pub fn new(header: &[&str]) -> Self {
        let mut metadata = vec![(
            "generator".to_string(),
            format!("cvclone {}", env!("CARGO_PKG_VERSION")),
        )];
        metadata.push(("tie_band".into(), fmt_num(TIE_BAND)));
        Self {
            metadata,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_note(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.push((key.into(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::numerical(format!(
                "row has {} columns, table has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

/// `m ∈ {2, 3, 5}`, `μ ∈ {0, 0.2, 0.5, 2}`, `τ ∈ {0.3, 1, 2, 3}`; covers
/// every regime.
pub fn default_table1_grid() -> Vec<(usize, f64, f64)> {
    let mut grid = Vec::new();
    for m in [2, 3, 5] {
        for mu in [0.0, 0.2, 0.5, 2.0] {
            for tau in [0.3, 1.0, 2.0, 3.0] {
                grid.push((m, tau, mu));
            }
        }
    }
    grid
}

pub const TABLE1_COLUMNS: [&str; 13] = [
    "m",
    "mu",
    "tau_tot",
    "regime",
    "n_opt",
    "tau0_opt",
    "f_max",
    "n_num",
    "tau0_num",
    "f_num",
    "dev_f",
    "dev_n_rel",
    "dev_tau0_rel",
];

/// One row of the optimal-strategy table: regime formulas next to direct
/// numeric maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub m: usize,
    pub tau_tot: f64,
    pub mu: f64,
    pub regime: Regime,
    pub closed: crate::telecloning::OptimalStrategy,
    pub numeric: crate::telecloning::OptimalStrategy,
}

impl Table1Row {
    pub fn dev_f(&self) -> f64 {
        (self.closed.f_max - self.numeric.f_max).abs()
    }

    /// Relative deviation of the photon number; 0 when both are infinite.
    pub fn dev_n_rel(&self) -> f64 {
        match (self.closed.n_opt, self.numeric.n_opt) {
            (PhotonNumber::Infinite, PhotonNumber::Infinite) => 0.0,
            (PhotonNumber::Finite(a), PhotonNumber::Finite(b)) => rel_dev(a, b),
            _ => f64::INFINITY,
        }
    }

    pub fn dev_tau0_rel(&self) -> f64 {
        rel_dev(self.closed.tau0_opt, self.numeric.tau0_opt)
    }
}

fn rel_dev(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn table1_rows(grid: &[(usize, f64, f64)]) -> Result<Vec<Table1Row>> {
    if grid.is_empty() {
        return Err(Error::domain("empty parameter grid"));
    }
    grid.iter()
        .map(|&(m, tau_tot, mu)| {
            let closed = optimal_symmetric(m, tau_tot, mu)?;
            Ok(Table1Row {
                m,
                tau_tot,
                mu,
                regime: closed.regime,
                closed,
                numeric: numeric_optimal(m, tau_tot, mu)?,
            })
        })
        .collect()
}

pub fn reproduce_table1(grid: &[(usize, f64, f64)]) -> Result<ReportTable> {
    let mut table =
        ReportTable::new(&TABLE1_COLUMNS).with_note("dataset", "optimal telecloning strategy");
    for r in table1_rows(grid)? {
        table.push(vec![
            r.m.to_string(),
            fmt_num(r.mu),
            fmt_num(r.tau_tot),
            r.regime.to_string(),
            fmt_num(r.closed.n_opt.value()),
            fmt_num(r.closed.tau0_opt),
            fmt_num(r.closed.f_max),
            fmt_num(r.numeric.n_opt.value()),
            fmt_num(r.numeric.tau0_opt),
            fmt_num(r.numeric.f_max),
            fmt_num(r.dev_f()),
            fmt_num(r.dev_n_rel()),
            fmt_num(r.dev_tau0_rel()),
        ])?;
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig2a,
        Figure::Fig2b,
        Figure::Fig3a,
        Figure::Fig3b,
        Figure::Fig4a,
        Figure::Fig4b,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
        }
    }

    /// `(m, μ)` of the fidelity figures; `None` for threshold figures.
    pub fn fidelity_params(&self) -> Option<(usize, f64)> {
        match self {
            Figure::Fig2a => Some((2, 0.0)),
            Figure::Fig2b => Some((5, 0.0)),
            Figure::Fig3a => Some((2, 0.4)),
            Figure::Fig3b => Some((3, 0.4)),
            Figure::Fig4a | Figure::Fig4b => None,
        }
    }

    /// `μ` of the threshold figures.
    pub fn threshold_mu(&self) -> Option<f64> {
        match self {
            Figure::Fig4a => Some(0.0),
            Figure::Fig4b => Some(0.4),
            _ => None,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown figure '{s}'")))
    }
}

/// `τ_i = 3i/200`, `i = 1..=200`.
pub fn figure_taus() -> Vec<f64> {
    (1..=FIGURE_POINTS)
        .map(|i| 3.0 * i as f64 / FIGURE_POINTS as f64)
        .collect()
}

pub const FIDELITY_FIGURE_COLUMNS: [&str; 7] = [
    "tau",
    "f_tele",
    "regime",
    "f_lcdt_omega0",
    "f_lcdt_omega1",
    "f_lcdt_omega2",
    "f_lcdt_omega3",
];

pub const THRESHOLD_FIGURE_COLUMNS: [&str; 7] = [
    "m",
    "mu",
    "tau",
    "regime",
    "omega_a_th",
    "omega_c_th",
    "omega_th",
];

/// Curve data for one figure. Fidelity figures: optimized telecloning and
/// the averaged local strategy for each `Ω` against `τ`, with the regime
/// boundary `τ = ln m` in the metadata block. Threshold figures: `Ω_{a,th}`,
/// `Ω_{c,th}` (empty outside regime C) and the crossover with whichever
/// regime applies, per `m`.
pub fn reproduce_figure(which: Figure) -> Result<ReportTable> {
    if let Some((m, mu)) = which.fidelity_params() {
        let mut table = ReportTable::new(&FIDELITY_FIGURE_COLUMNS)
            .with_note("dataset", which.name())
            .with_note("m", m.to_string())
            .with_note("mu", fmt_num(mu))
            .with_note("marker_tau", fmt_num((m as f64).ln()));
        for tau in figure_taus() {
            let tele = optimal_symmetric(m, tau, mu)?;
            let mut row = vec![fmt_num(tau), fmt_num(tele.f_max), tele.regime.to_string()];
            for omega in FIGURE_OMEGAS {
                row.push(fmt_num(averaged_fidelity(
                    m,
                    tau,
                    mu,
                    GaussianAlphabet::from_omega(omega)?,
                )?));
            }
            table.push(row)?;
        }
        return Ok(table);
    }
    let mu = which.threshold_mu().expect("threshold figure");
    let mut table = ReportTable::new(&THRESHOLD_FIGURE_COLUMNS)
        .with_note("dataset", which.name())
        .with_note("mu", fmt_num(mu))
        .with_note("units", "omega (square roots of the thresholds on omega^2)");
    for m in THRESHOLD_MS {
        for tau in figure_taus() {
            let t = omega_thresholds(m, tau, mu)?;
            table.push(vec![
                m.to_string(),
                fmt_num(mu),
                fmt_num(tau),
                t.regime.to_string(),
                fmt_num(t.omega_sq_a.sqrt()),
                t.omega_sq_c.map(|w| fmt_num(w.sqrt())).unwrap_or_default(),
                fmt_num(t.omega_sq.sqrt()),
            ])?;
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    TauTot,
    Mu,
    Omega,
    M,
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" | "tau_tot" => Ok(SweepVariable::TauTot),
            "mu" => Ok(SweepVariable::Mu),
            "omega" => Ok(SweepVariable::Omega),
            "m" => Ok(SweepVariable::M),
            _ => Err(Error::domain(format!("unknown sweep variable '{s}'"))),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::TauTot => "tau_tot",
            SweepVariable::Mu => "mu",
            SweepVariable::Omega => "omega",
            SweepVariable::M => "m",
        })
    }
}

/// Sweep of one variable over `steps` evenly spaced values in
/// `[start, stop]`, the others held at the given values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub m: usize,
    pub tau_tot: f64,
    pub mu: f64,
    pub omega: f64,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.steps < 2 {
            return Err(Error::domain(format!(
                "a sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::domain("sweep range must be finite"));
        }
        let n = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / n)
            .collect())
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ComparisonRecord>> {
    spec.values()?
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let (mut m, mut tau, mut mu, mut omega) = (spec.m, spec.tau_tot, spec.mu, spec.omega);
            match spec.variable {
                SweepVariable::TauTot => tau = v,
                SweepVariable::Mu => mu = v,
                SweepVariable::Omega => omega = v,
                SweepVariable::M => {
                    if v < 0.0 || v.fract().abs() > 1e-9 {
                        return Err(Error::domain(format!(
                            "step {i}: m = {v} is not a whole number"
                        )));
                    }
                    m = v.round() as usize;
                }
            }
            compare(m, tau, mu, omega).map_err(|e| match e {
                Error::Domain(msg) => Error::Domain(format!("step {i}: {msg}")),
                Error::Numerical(msg) => Error::Numerical(format!("step {i}: {msg}")),
                other => other,
            })
        })
        .collect()
}

pub fn sweep_table(spec: &SweepSpec) -> Result<ReportTable> {
    let mut table = ReportTable::new(&COMPARISON_COLUMNS)
        .with_note("dataset", "sweep")
        .with_note("variable", spec.variable.to_string())
        .with_note(
            "range",
            format!(
                "{} .. {} in {} steps",
                fmt_num(spec.start),
                fmt_num(spec.stop),
                spec.steps
            ),
        );
    for r in run_sweep(spec)? {
        table.push(r.to_row())?;
    }
    Ok(table)
}

pub fn comparison_table(records: &[ComparisonRecord]) -> Result<ReportTable> {
    let mut table = ReportTable::new(&COMPARISON_COLUMNS).with_note("dataset", "comparison");
    for r in records {
        table.push(r.to_row())?;
    }
    Ok(table)
}
