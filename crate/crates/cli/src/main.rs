//! `entangle-tensor`: pullback dumps, monotone tables, estimation curves and
//! figure bundles for the two-qubit Schmidt family.
//!
//! Exit codes: 0 success, 2 domain error, 3 I/O error, 4 numerical or branch
//! error. Nothing is written unless the whole command succeeds.

mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entangle_core::monotones::MonotoneKind;

use config::{parse_formats, parse_orders, ConfigFile, Format, GridSpec, RunConfig};
use error::{CliError, CliResult};
use output::Bundle;

#[derive(Parser, Debug)]
#[command(name = "entangle-tensor", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Alias so that clap parses `--orders 1,2,3` as a single value.
type Orders = Vec<u32>;

#[derive(Args, Debug, Default)]
struct Common {
    /// Lambda grid as start:stop:step.
    #[arg(long, value_parser = str::parse::<GridSpec>)]
    grid: Option<GridSpec>,
    /// Comma-separated orders n.
    #[arg(long, value_parser = parse_orders)]
    orders: Option<Orders>,
    /// Relative error for measurement counts.
    #[arg(long)]
    delta: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, value_parser = parse_formats)]
    formats: Option<BTreeSet<Format>>,
    /// Distance kept from lambda = 0 and 1/2 in estimation grids.
    #[arg(long)]
    margin: Option<f64>,
    /// JSON run configuration; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump kappa, eta, omega, the eta spectrum and rank at one lambda.
    Pullback {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate epsilon_n, mu_n and symmetric invariants over a grid.
    Monotones {
        /// Comma-separated subset of epsilon,mu,sym.
        #[arg(long)]
        kinds: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Measurement-count curves on the branch 0 < lambda < 1/2.
    Estimate {
        /// Comma-separated measures: linear-entropy, negativity, purity,
        /// epsilon, mu, epsilon:N, mu:N.
        #[arg(long)]
        kinds: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Data and plots for figure 1, 2 or 3.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[command(flatten)]
        common: Common,
    },
}

fn resolve(common: Common, grid: GridSpec, formats: &[Format]) -> CliResult<RunConfig> {
    let file = common.config.as_deref().map(ConfigFile::load).transpose()?;
    let flags = ConfigFile {
        lambda_grid: common.grid,
        orders: common.orders,
        delta: common.delta,
        output_dir: common.out,
        formats: common.formats,
        endpoint_margin: common.margin,
    };
    RunConfig::defaults(grid, formats).resolve(file, flags)
}

fn parse_monotone_kinds(list: &str) -> CliResult<Vec<MonotoneKind>> {
    let kinds = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<MonotoneKind>().map_err(CliError::from))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(kinds)
}

fn run(cli: Cli) -> CliResult<(Bundle, PathBuf)> {
    use Format::*;
    let (bundle, cfg) = match cli.command {
        Command::Pullback { lambda, common } => {
            let cfg = resolve(common, GridSpec::MONOTONES, &[Json])?;
            (commands::pullback(lambda, &cfg)?, cfg)
        }
        Command::Monotones { kinds, common } => {
            let cfg = resolve(common, GridSpec::MONOTONES, &[Csv, Svg])?;
            let kinds = match kinds {
                Some(list) => parse_monotone_kinds(&list)?,
                None => MonotoneKind::ALL.to_vec(),
            };
            (commands::monotones(&cfg, &kinds)?, cfg)
        }
        Command::Estimate { kinds, common } => {
            let cfg = resolve(common, GridSpec::ESTIMATION, &[Csv, Svg])?;
            let kinds = match kinds {
                Some(list) => commands::parse_measure_kinds(&list, &cfg.orders)?,
                None => commands::default_measure_kinds(&cfg.orders),
            };
            (commands::estimate(&cfg, &kinds)?, cfg)
        }
        Command::Figure { which, common } => {
            let grid = if which == 3 {
                GridSpec::ESTIMATION
            } else {
                GridSpec::MONOTONES
            };
            let cfg = resolve(common, grid, &[Csv, Json, Svg])?;
            (commands::figure(which, &cfg)?, cfg)
        }
    };
    Ok((bundle, cfg.output_dir))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(bundle, dir)| bundle.write(&dir));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("entangle-tensor: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
