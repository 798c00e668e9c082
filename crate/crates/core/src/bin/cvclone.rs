use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Complex;
use serde::Deserialize;

use cvclone::experiments::selftest::{run_all_with, SELFTEST_SEED};
use cvclone::experiments::{
    compare, comparison_table, default_table1_grid, fmt_num, reproduce_figure, reproduce_table1,
    sweep_table, Figure, ReportTable, SweepSpec, SweepVariable,
};
use cvclone::lcdt::{
    averaged_fidelity, lcdt_fidelity, lcdt_pipeline_fidelity, omega_thresholds,
    optimize_cloner_location, GaussianAlphabet, LcdtConfig,
};
use cvclone::telecloning::{
    clone_fidelity_closed, monte_carlo_protocol, optimal_symmetric, telecloning_pipeline,
    useful_time_thresholds, TelecloningConfig,
};
use cvclone::Error;

const EXIT_SELFTEST_FAILED: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "cvclone",
    version,
    about = "Telecloning versus local cloning of coherent states over noisy channels"
)]
struct Cli {
    /// TOML file with default values for the parameter flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    params: Params,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimized telecloning against the local strategy.
    Compare,
    /// Clone fidelities of telecloning for a given support and link split.
    TelecloneFidelity,
    /// Clone fidelity of local cloning, optimal placement and alphabet average.
    LcdtFidelity,
    /// Optimal support and link split, from the regime formulas and by search.
    Optimize,
    /// Useful-time thresholds and alphabet-width crossovers.
    Thresholds,
    /// Comparison over a range of one parameter.
    Sweep(SweepArgs),
    /// Datasets of the strategy table and figures.
    Reproduce {
        #[arg(value_enum)]
        which: Dataset,
    },
    /// Run the acceptance checks.
    Selftest,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Parameter to vary: tau, mu, omega or m.
    #[arg(long = "var")]
    var: String,
    #[arg(long, allow_negative_numbers = true)]
    start: f64,
    #[arg(long, allow_negative_numbers = true)]
    stop: f64,
    #[arg(long, default_value_t = 11)]
    steps: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Dataset {
    Table1,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Csv,
}

/// Parameter flags; every one may also come from the config file.
#[derive(Args, Debug, Default, Deserialize, Clone)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct Params {
    /// Number of clones.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Total effective propagation time.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Propagation time before the cloner or on the sender's support mode.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tau0: Option<f64>,
    /// Thermal photons in the channels.
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Width of the Gaussian alphabet.
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Photons per receiver mode of the support (default: optimal).
    #[arg(long, global = true, allow_negative_numbers = true)]
    n_photons: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha_re: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha_im: Option<f64>,
    /// Monte Carlo samples for teleclone-fidelity.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

impl Params {
    /// Flags take precedence over the config file.
    fn merged(self, file: Params) -> Params {
        Params {
            m: self.m.or(file.m),
            tau: self.tau.or(file.tau),
            tau0: self.tau0.or(file.tau0),
            mu: self.mu.or(file.mu),
            omega: self.omega.or(file.omega),
            n_photons: self.n_photons.or(file.n_photons),
            alpha_re: self.alpha_re.or(file.alpha_re),
            alpha_im: self.alpha_im.or(file.alpha_im),
            samples: self.samples.or(file.samples),
            seed: self.seed.or(file.seed),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
        }
    }

    fn m(&self) -> usize {
        self.m.unwrap_or(2)
    }

    fn tau(&self) -> f64 {
        self.tau.unwrap_or(1.0)
    }

    fn mu(&self) -> f64 {
        self.mu.unwrap_or(0.0)
    }

    fn omega(&self) -> f64 {
        self.omega.unwrap_or(1.0)
    }

    fn alpha(&self) -> Complex<f64> {
        Complex::new(self.alpha_re.unwrap_or(0.0), self.alpha_im.unwrap_or(0.0))
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(SELFTEST_SEED)
    }
}

#[derive(Debug)]
enum Failure {
    Model(Error),
    Usage(String),
    Io(io::Error),
    Selftest,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Model(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Selftest) => ExitCode::from(EXIT_SELFTEST_FAILED),
    }
}

fn load_config(path: &PathBuf) -> Result<Params, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => Params::default(),
    };
    let p = cli.params.merged(file);
    let table = match cli.command {
        Command::Compare => comparison_table(&[compare(p.m(), p.tau(), p.mu(), p.omega())?])?,
        Command::TelecloneFidelity => teleclone_fidelity(&p)?,
        Command::LcdtFidelity => lcdt_report(&p)?,
        Command::Optimize => reproduce_table1(&[(p.m(), p.tau(), p.mu())])?,
        Command::Thresholds => thresholds(&p)?,
        Command::Sweep(args) => {
            let variable: SweepVariable = args.var.parse()?;
            sweep_table(&SweepSpec {
                variable,
                start: args.start,
                stop: args.stop,
                steps: args.steps,
                m: p.m(),
                tau_tot: p.tau(),
                mu: p.mu(),
                omega: p.omega(),
            })?
        }
        Command::Reproduce { which } => match which {
            Dataset::Table1 => reproduce_table1(&default_table1_grid())?,
            Dataset::Fig2a => reproduce_figure(Figure::Fig2a)?,
            Dataset::Fig2b => reproduce_figure(Figure::Fig2b)?,
            Dataset::Fig3a => reproduce_figure(Figure::Fig3a)?,
            Dataset::Fig3b => reproduce_figure(Figure::Fig3b)?,
            Dataset::Fig4a => reproduce_figure(Figure::Fig4a)?,
            Dataset::Fig4b => reproduce_figure(Figure::Fig4b)?,
        },
        Command::Selftest => return selftest(&p),
    };
    emit(&table, &p)
}

fn emit(table: &ReportTable, p: &Params) -> Result<(), Failure> {
    match &p.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn teleclone_fidelity(p: &Params) -> Result<ReportTable, Failure> {
    let (m, tau, mu) = (p.m(), p.tau(), p.mu());
    let best = optimal_symmetric(m, tau, mu)?;
    let n = match p.n_photons {
        Some(n) => n,
        None if best.n_opt.is_finite() => best.n_opt.value(),
        None => {
            return Err(Failure::Usage(
                "the optimal support has N = inf here; pass --n-photons".into(),
            ))
        }
    };
    let tau0 = p.tau0.unwrap_or(best.tau0_opt);
    if tau0 > tau {
        return Err(Error::Domain(format!("tau0 = {tau0} exceeds tau = {tau}")).into());
    }
    let cfg = TelecloningConfig::symmetric(m, n, tau0, tau - tau0, mu)?;
    let alpha = p.alpha();
    let pipeline = telecloning_pipeline(&cfg, alpha)?;
    let sampled = match p.samples {
        Some(s) => Some(monte_carlo_protocol(&cfg, alpha, s, p.seed())?),
        None => None,
    };
    let mut table = ReportTable::new(&[
        "clone",
        "n_photons",
        "tau0",
        "tauc",
        "mu",
        "f_closed",
        "f_pipeline",
        "f_mc",
        "mean_q_mc",
        "mean_p_mc",
        "mean_q_se",
        "mean_p_se",
    ])
    .with_note("dataset", "telecloning fidelity")
    .with_note(
        "alpha",
        format!("{} {}", fmt_num(alpha.re), fmt_num(alpha.im)),
    );
    if let Some(s) = p.samples {
        table = table
            .with_note("samples", s.to_string())
            .with_note("seed", p.seed().to_string());
    }
    for (h, c) in pipeline.iter().enumerate() {
        let mut row = vec![
            (h + 1).to_string(),
            fmt_num(n),
            fmt_num(tau0),
            fmt_num(tau - tau0),
            fmt_num(mu),
            fmt_num(clone_fidelity_closed(&cfg, h + 1)?),
            fmt_num(c.fidelity),
        ];
        match &sampled {
            Some(mc) => {
                let s = &mc[h];
                row.extend(
                    [s.fidelity, s.mean[0], s.mean[1], s.mean_se[0], s.mean_se[1]].map(fmt_num),
                );
            }
            None => row.extend(std::iter::repeat_n(String::new(), 5)),
        }
        table.push(row)?;
    }
    Ok(table)
}

fn lcdt_report(p: &Params) -> Result<ReportTable, Failure> {
    let (m, tau, mu) = (p.m(), p.tau(), p.mu());
    let tau0 = p.tau0.unwrap_or(0.0);
    if tau0 > tau {
        return Err(Error::Domain(format!("tau0 = {tau0} exceeds tau = {tau}")).into());
    }
    let cfg = LcdtConfig::new(m, tau0, tau - tau0, mu)?;
    let alpha = p.alpha();
    let mut table = ReportTable::new(&[
        "m",
        "tau_tot",
        "tau0",
        "mu",
        "f_d",
        "f_pipeline",
        "tau_c_opt",
        "f_opt",
        "interior",
        "omega",
        "f_avg",
    ])
    .with_note("dataset", "local cloning fidelity")
    .with_note(
        "alpha",
        format!("{} {}", fmt_num(alpha.re), fmt_num(alpha.im)),
    );
    let (tc, fo, interior) = if tau > 0.0 {
        let o = optimize_cloner_location(m, tau, mu, alpha)?;
        (
            fmt_num(o.tau_c_opt),
            fmt_num(o.fidelity),
            o.interior.to_string(),
        )
    } else {
        (String::new(), String::new(), String::new())
    };
    let (omega, avg) = match p.omega {
        Some(w) => (
            fmt_num(w),
            fmt_num(averaged_fidelity(
                m,
                tau,
                mu,
                GaussianAlphabet::from_omega(w)?,
            )?),
        ),
        None => (String::new(), String::new()),
    };
    table.push(vec![
        m.to_string(),
        fmt_num(tau),
        fmt_num(tau0),
        fmt_num(mu),
        fmt_num(lcdt_fidelity(&cfg, alpha)),
        fmt_num(lcdt_pipeline_fidelity(&cfg, alpha)?),
        tc,
        fo,
        interior,
        omega,
        avg,
    ])?;
    Ok(table)
}

fn thresholds(p: &Params) -> Result<ReportTable, Failure> {
    let (m, tau, mu) = (p.m(), p.tau(), p.mu());
    let t = useful_time_thresholds(m, mu)?;
    let w = omega_thresholds(m, tau, mu)?;
    let mut table = ReportTable::new(&[
        "m",
        "mu",
        "tau_a_th",
        "tau_c_th",
        "tau",
        "regime",
        "omega_a_th",
        "omega_c_th",
        "omega_th",
    ])
    .with_note("dataset", "thresholds");
    table.push(vec![
        m.to_string(),
        fmt_num(mu),
        fmt_num(t.tau_a_th),
        fmt_num(t.tau_c_th),
        fmt_num(tau),
        w.regime.to_string(),
        fmt_num(w.omega_sq_a.sqrt()),
        w.omega_sq_c.map(|v| fmt_num(v.sqrt())).unwrap_or_default(),
        fmt_num(w.omega_sq.sqrt()),
    ])?;
    Ok(table)
}

fn selftest(p: &Params) -> Result<(), Failure> {
    let mut sink: Box<dyn Write> = match &p.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let mut io_error = None;
    let outcomes = run_all_with(|o| {
        if let Err(e) = writeln!(sink, "{}", o.line()).and_then(|_| sink.flush()) {
            io_error.get_or_insert(e);
        }
    });
    if let Some(e) = io_error {
        return Err(e.into());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    writeln!(sink, "{passed}/{} criteria passed", outcomes.len())?;
    sink.flush()?;
    if passed == outcomes.len() {
        Ok(())
    } else {
        Err(Failure::Selftest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let file: Params = toml::from_str("m = 3\ntau = 0.5\nmu = 0.2\nomega = 2.0").unwrap();
        let flags = Params {
            tau: Some(1.5),
            ..Params::default()
        };
        let p = flags.merged(file);
        assert_eq!(p.m(), 3);
        assert_eq!(p.tau(), 1.5);
        assert_eq!(p.mu(), 0.2);
        assert_eq!(p.omega(), 2.0);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(toml::from_str::<Params>("lambda = 1.0").is_err());
        let p: Params = toml::from_str("alpha-re = 1.0\nformat = \"csv\"").unwrap();
        assert_eq!(p.alpha(), Complex::new(1.0, 0.0));
        assert_eq!(p.format, Some(Format::Csv));
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from([
            "cvclone", "sweep", "--var", "mu", "--start", "0", "--stop", "1", "--m", "3",
        ])
        .unwrap();
        assert_eq!(cli.params.m, Some(3));
        assert!(matches!(
            cli.command,
            Command::Sweep(SweepArgs { steps: 11, .. })
        ));
    }
}
