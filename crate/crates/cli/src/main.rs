//! `antiwell`: spectra, seam-state catalogs, wavefunction samples and
//! finite-difference cross-checks for the well-and-barrier box.
//!
//! Exit status: 0 on success, 2 for usage or configuration errors, 3 when
//! a numerical validation fails.

mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use antiwell_core::oracle::{aligned_ladder, cross_validate, MIN_GRID_POINTS, PARTNER_TOLERANCE};
use antiwell_core::reference::reproduce_table;
use antiwell_core::spectrum::{near_coincidences, special_v0_catalog, DEFAULT_V0_CEILING};
use antiwell_core::{
    solve_spectrum, Error, Execution, PotentialGeometry, SpecialCondition, SpectrumRequest, SpectrumResult,
    StateSelection,
};
use clap::{Parser, Subcommand, ValueEnum};

use output::{render_csv, render_json, Cell, Table};

#[derive(Parser, Debug)]
#[command(
    name = "antiwell",
    version,
    about = "Bound states of an anti-symmetric well and barrier between rigid walls"
)]
struct Cli {
    /// Wall half-width (walls at -a and a).
    #[arg(long = "a", global = true, default_value_t = 6.0)]
    a: f64,
    /// Half-width of the well+barrier block.
    #[arg(long = "b", global = true, default_value_t = 2.0)]
    b: f64,
    /// Well depth and barrier height.
    #[arg(long, global = true)]
    v0: Option<f64>,
    /// Number of states to solve for.
    #[arg(long, global = true, default_value_t = 6)]
    n_states: usize,
    /// Solve every state up to this energy instead of a fixed count.
    #[arg(long, global = true, conflicts_with = "n_states")]
    e_max: Option<f64>,
    /// Finest oracle grid size.
    #[arg(long, global = true, default_value_t = 8000)]
    grid_n: usize,
    /// Wavefunction sample count.
    #[arg(long, global = true, default_value_t = 1200)]
    samples: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    /// Zero-energy states (roots of f).
    F,
    /// Barrier-top states (roots of g).
    G,
    /// Both at the same strength.
    Both,
    /// Each root of f with the nearest root of g.
    Near,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Indexed spectrum with kinds and diagnostics.
    Spectrum,
    /// Strengths at which a zero-energy and/or barrier-top state exists.
    Special {
        #[arg(value_enum)]
        which: Which,
        /// How many strengths to list.
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
    /// Normalized samples of one eigenfunction.
    Wavefunction { index: usize },
    /// Compare against the finite-difference oracle.
    Oracle,
    /// Reproduce the reference table at a = 6, b = 2.
    Table1,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGeometry(_)
            | Error::InvalidParameter(_)
            | Error::InvalidRequest(_)
            | Error::GridTooSmall { .. }
            | Error::OutOfDomain { .. }
            | Error::BelowPotentialMinimum { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

const ORACLE_LEVELS: usize = 3;

type Outcome = Result<(Table, Option<String>), Failure>;

impl Cli {
    fn geometry(&self) -> Result<PotentialGeometry, Failure> {
        let v0 = self.v0.ok_or_else(|| Failure::Usage("--v0 is required for this command".into()))?;
        Ok(PotentialGeometry::new(self.a, self.b, v0)?)
    }

    /// Geometry for commands that scan `v0` themselves.
    fn shape(&self) -> Result<PotentialGeometry, Failure> {
        Ok(PotentialGeometry::new(self.a, self.b, self.v0.unwrap_or(0.0))?)
    }

    fn request(&self) -> Result<SpectrumRequest, Failure> {
        let geom = self.geometry()?;
        Ok(match self.e_max {
            Some(e) => SpectrumRequest::max_energy(geom, e),
            None => SpectrumRequest::count(geom, self.n_states),
        })
    }
}

fn spectrum_cmd(cli: &Cli) -> Outcome {
    let result = solve_spectrum(&cli.request()?)?;
    let diag = &result.diagnostics;
    let mut t = Table::new("spectrum", &["index", "energy", "kind", "nodes", "uncertainty", "c1_residual"]);
    for (i, s) in result.states.iter().enumerate() {
        t.push(vec![
            s.index.into(),
            s.energy.into(),
            s.kind.as_str().into(),
            diag.node_counts[i].into(),
            diag.uncertainty_products[i].into(),
            diag.c1_residuals[i].into(),
        ]);
    }
    Ok((t, None))
}

fn special_cmd(cli: &Cli, which: Which, count: usize) -> Outcome {
    let geom = cli.shape()?;
    if count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    if which == Which::Near {
        let mut t = Table::new(
            "special",
            &["condition", "index", "top_index", "v0", "v0_top", "gap", "f_residual", "g_residual"],
        );
        for p in near_coincidences(count, &geom)? {
            t.push(vec![
                "near".into(),
                p.zero.state_index.into(),
                p.top.state_index.into(),
                p.zero.v0.into(),
                p.top.v0.into(),
                p.gap.into(),
                p.zero.f_residual.into(),
                p.top.g_residual.into(),
            ]);
        }
        return Ok((t, None));
    }
    let cond = match which {
        Which::F => SpecialCondition::FZero,
        Which::G => SpecialCondition::GTop,
        _ => SpecialCondition::Both,
    };
    let roots = special_v0_catalog(cond, count, &geom)?;
    let mut t = Table::new("special", &["condition", "index", "top_index", "v0", "f_residual", "g_residual"]);
    for r in &roots {
        t.push(vec![
            r.condition.as_str().into(),
            r.state_index.into(),
            r.top_index.into(),
            r.v0.into(),
            r.f_residual.into(),
            r.g_residual.into(),
        ]);
    }
    let shortfall = (roots.len() < count).then(|| {
        format!("found {} of {count} simultaneous roots with v0 <= {DEFAULT_V0_CEILING}", roots.len())
    });
    Ok((t, shortfall))
}

fn wavefunction_cmd(cli: &Cli, index: usize) -> Outcome {
    let req = cli.request()?;
    if let StateSelection::Count(n) = req.selection {
        if index >= n {
            return Err(Failure::Usage(format!("state {index} is outside the {n} requested states")));
        }
    }
    let result: SpectrumResult = solve_spectrum(&req)?;
    let Some(state) = result.states.get(index) else {
        return Err(Failure::Usage(format!(
            "state {index} is outside the {} solved states",
            result.states.len()
        )));
    };
    let psi = &state.wavefunction;
    let mut t =
        Table::new("wavefunction", &["row", "x", "psi", "energy", "kind", "nodes", "norm", "uncertainty"]);
    for (x, y) in psi.sample(cli.samples) {
        t.push(vec![
            "sample".into(),
            x.into(),
            y.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    t.push(vec![
        "meta".into(),
        Cell::Empty,
        Cell::Empty,
        state.energy.into(),
        state.kind.as_str().into(),
        result.diagnostics.node_counts[index].into(),
        psi.norm().into(),
        result.diagnostics.uncertainty_products[index].into(),
    ]);
    Ok((t, None))
}

fn oracle_cmd(cli: &Cli) -> Outcome {
    let least = MIN_GRID_POINTS << (ORACLE_LEVELS - 1);
    if cli.grid_n < least {
        return Err(Failure::Usage(format!("--grid-n must be at least {least}")));
    }
    let result = solve_spectrum(&cli.request()?)?;
    let grids = aligned_ladder(&result.geometry, cli.grid_n, ORACLE_LEVELS);
    let report = cross_validate(&result, &grids, PARTNER_TOLERANCE, Execution::default())?;
    let mut t =
        Table::new("oracle", &["row", "grid_n", "index", "eigenvalue", "analytic", "deviation", "ratio"]);
    let analytic = |i: usize| report.analytic.get(i).copied();
    for (g, values) in report.grid_sizes.iter().zip(&report.eigenvalues_per_grid) {
        for (i, &e) in values.iter().enumerate().take(report.analytic.len()) {
            t.push(vec![
                "grid".into(),
                (*g).into(),
                i.into(),
                e.into(),
                analytic(i).into(),
                analytic(i).map(|a| a - e).into(),
                Cell::Empty,
            ]);
        }
    }
    for (i, &a) in report.analytic.iter().enumerate() {
        t.push(vec![
            "extrapolated".into(),
            Cell::Empty,
            i.into(),
            report.extrapolated.get(i).copied().into(),
            a.into(),
            report.deviations[i].into(),
            report.convergence_ratios.get(i).copied().into(),
        ]);
    }
    for &o in &report.unpartnered_oracle {
        t.push(vec![
            "unpartnered-oracle".into(),
            Cell::Empty,
            Cell::Empty,
            o.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    for &a in &report.unpartnered_analytic {
        t.push(vec![
            "unpartnered-analytic".into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            a.into(),
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    let failure = (!report.is_consistent()).then(|| {
        format!(
            "unpartnered levels: analytic {:?}, oracle {:?}",
            report.unpartnered_analytic, report.unpartnered_oracle
        )
    });
    Ok((t, failure))
}

fn table1_cmd() -> Outcome {
    let entries = reproduce_table(Execution::default())?;
    let mut t = Table::new(
        "table1",
        &[
            "row",
            "v0",
            "index",
            "published",
            "computed",
            "deviation",
            "kind",
            "expected_kind",
            "starred",
            "pass",
        ],
    );
    for e in &entries {
        t.push(vec![
            (e.row as usize).into(),
            e.v0.into(),
            e.index.into(),
            e.published.into(),
            e.computed.into(),
            e.deviation.into(),
            e.kind.as_str().into(),
            e.expected_kind.as_str().into(),
            (if e.starred { "yes" } else { "no" }).into(),
            (if e.passed() { "yes" } else { "no" }).into(),
        ]);
    }
    let checked = entries.iter().filter(|e| !e.starred);
    let max_dev = checked.clone().map(|e| e.deviation.abs()).fold(0.0, f64::max);
    let failed: Vec<String> =
        checked.filter(|e| !e.passed()).map(|e| format!("row {} E{}", e.row, e.index)).collect();
    eprintln!("max |deviation| over tabulated levels: {}", output::fmt_sig(max_dev));
    let failure = (!failed.is_empty()).then(|| format!("entries outside tolerance: {}", failed.join(", ")));
    Ok((t, failure))
}

fn emit(cli: &Cli, table: &Table) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Csv => render_csv(table),
        Format::Json => render_json(table),
    };
    match &cli.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (table, failure) = match &cli.command {
        Command::Spectrum => spectrum_cmd(cli),
        Command::Special { which, count } => special_cmd(cli, *which, *count),
        Command::Wavefunction { index } => wavefunction_cmd(cli, *index),
        Command::Oracle => oracle_cmd(cli),
        Command::Table1 => table1_cmd(),
    }?;
    emit(cli, &table)?;
    match failure {
        Some(msg) => Err(Failure::Numerical(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(3)
        }
    }
}
