//! The four subcommands. Each one computes its whole bundle in memory and
//! returns it; the caller writes it out.

use std::collections::BTreeMap;

use entangle_core::estimation::{measurements_parametric, EstimationCurve, MeasureKind};
use entangle_core::monotones::{
    sym_invariant_polynomial, EtaSpectrum, MonotoneKind, MonotoneTable,
};
use entangle_core::pullback::{eta_rank, omega_blocks, schmidt_pullback, RANK_TOL};
use nalgebra::{DMatrix, Matrix3};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_num, round_sig, Bundle, Csv};
use crate::svg::{Plot, Series};

const MONOTONE_HEADER: [&str; 4] = ["lambda", "kind", "n", "value"];
const ESTIMATE_HEADER: [&str; 5] = ["kind", "n", "lambda", "measure", "measurements"];

/// Orders with a reference polynomial for the symmetric invariants.
const SYM_REFERENCE_ORDERS: [u32; 3] = [1, 2, 3];

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter()
        .map(|r| r.iter().map(|&x| round_sig(x)).collect())
        .collect()
}

fn rows_of3(m: &Matrix3<f64>) -> Vec<Vec<f64>> {
    (0..3)
        .map(|i| (0..3).map(|j| round_sig(m[(i, j)])).collect())
        .collect()
}

#[derive(Serialize)]
struct PullbackDump {
    lambda: f64,
    kappa_re: Vec<Vec<f64>>,
    kappa_im: Vec<Vec<f64>>,
    eta: Vec<Vec<f64>>,
    omega: Vec<Vec<f64>>,
    eta_eigenvalues: Vec<f64>,
    rank: usize,
    omega_block_a: Vec<Vec<f64>>,
    omega_block_b: Vec<Vec<f64>>,
}

pub fn pullback(lambda: f64, cfg: &RunConfig) -> CliResult<Bundle> {
    if !cfg.wants(Format::Json) {
        return Err(CliError::domain(
            "pullback output is JSON only; add json to --formats",
        ));
    }
    let t = schmidt_pullback(lambda)?;
    let blocks = omega_blocks(t.omega())?;
    let spectrum = EtaSpectrum::from_eta(t.eta())?;
    let dump = PullbackDump {
        lambda,
        kappa_re: rows_of(&t.kappa().map(|z| z.re)),
        kappa_im: rows_of(&t.kappa().map(|z| z.im)),
        eta: rows_of(t.eta()),
        omega: rows_of(t.omega()),
        eta_eigenvalues: spectrum
            .eigenvalues()
            .iter()
            .map(|&d| round_sig(d))
            .collect(),
        rank: eta_rank(t.eta(), RANK_TOL),
        omega_block_a: rows_of3(&blocks.block_a),
        omega_block_b: rows_of3(&blocks.block_b),
    };
    let mut bundle = Bundle::new();
    bundle.add(format!("pullback_{}.json", fmt_num(lambda)), to_json(&dump));
    Ok(bundle)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn monotone_csv(table: &MonotoneTable) -> String {
    let mut csv = Csv::new(&MONOTONE_HEADER);
    for r in table.rows() {
        csv.row(&[
            fmt_num(r.lambda),
            r.kind.to_string(),
            r.n.to_string(),
            fmt_num(r.value),
        ]);
    }
    csv.finish()
}

fn symbol(kind: MonotoneKind) -> &'static str {
    match kind {
        MonotoneKind::Epsilon => "ε",
        MonotoneKind::Mu => "μ",
        MonotoneKind::Sym => "S",
    }
}

fn monotone_plot(table: &MonotoneTable, kind: MonotoneKind, title: &str) -> String {
    let sym = symbol(kind);
    let mut plot = Plot::new(title, "λ", &format!("{sym}_n"));
    for (i, &n) in table.orders().iter().enumerate() {
        plot.push(Series::new(format!("{sym}_{n}"), table.series(kind, n), i));
    }
    match kind {
        MonotoneKind::Sym => plot.fit(1.0),
        _ => plot.x_range(0.0, 1.0).y_range(0.0, 1.0),
    }
    .render()
}

pub fn monotones(cfg: &RunConfig, kinds: &[MonotoneKind]) -> CliResult<Bundle> {
    if kinds.is_empty() {
        return Err(CliError::domain("no monotone kinds selected"));
    }
    let lambdas = cfg.lambda_grid.points()?;
    let table = MonotoneTable::compute(&lambdas, &cfg.orders, kinds)?;
    let mut bundle = Bundle::new();
    if cfg.wants(Format::Csv) {
        bundle.add("monotones.csv", monotone_csv(&table));
    }
    if cfg.wants(Format::Svg) {
        for &kind in kinds {
            let title = format!("{kind} monotones");
            bundle.add(
                format!("monotones_{kind}.svg"),
                monotone_plot(&table, kind, &title),
            );
        }
    }
    if bundle.is_empty() {
        return Err(CliError::domain("monotones writes csv and svg only"));
    }
    Ok(bundle)
}

/// Expands a comma list of measure names. Bare `epsilon` and `mu` stand for
/// every order in `orders`.
pub fn parse_measure_kinds(list: &str, orders: &[u32]) -> CliResult<Vec<MeasureKind>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "epsilon" => out.extend(orders.iter().map(|&n| MeasureKind::Epsilon(n))),
            "mu" => out.extend(orders.iter().map(|&n| MeasureKind::Mu(n))),
            other => out.push(other.parse()?),
        }
    }
    if out.is_empty() {
        return Err(CliError::domain("no measure kinds selected"));
    }
    Ok(out)
}

pub fn default_measure_kinds(orders: &[u32]) -> Vec<MeasureKind> {
    let mut kinds = vec![
        MeasureKind::LinearEntropy,
        MeasureKind::Negativity,
        MeasureKind::Purity,
    ];
    kinds.extend(orders.iter().map(|&n| MeasureKind::Epsilon(n)));
    kinds.extend(orders.iter().map(|&n| MeasureKind::Mu(n)));
    kinds
}

fn curves(cfg: &RunConfig, kinds: &[MeasureKind]) -> CliResult<Vec<EstimationCurve>> {
    let grid = cfg.branch_points()?;
    kinds
        .iter()
        .map(|&k| measurements_parametric(k, cfg.delta, &grid).map_err(CliError::from))
        .collect()
}

fn estimate_csv(curves: &[EstimationCurve]) -> String {
    let mut csv = Csv::new(&ESTIMATE_HEADER);
    for c in curves {
        let n = c.kind.order().map(|n| n.to_string()).unwrap_or_default();
        for p in &c.points {
            csv.row(&[
                c.kind.tag().to_string(),
                n.clone(),
                fmt_num(p.lambda),
                fmt_num(p.measure),
                fmt_num(p.measurements),
            ]);
        }
    }
    csv.finish()
}

fn curve_label(kind: MeasureKind) -> String {
    match kind {
        MeasureKind::Epsilon(n) => format!("ε_{n}"),
        MeasureKind::Mu(n) => format!("μ_{n}"),
        other => other.tag().to_string(),
    }
}

fn curve_points(c: &EstimationCurve) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = c
        .points
        .iter()
        .map(|p| (p.measure, p.measurements))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

pub fn estimate(cfg: &RunConfig, kinds: &[MeasureKind]) -> CliResult<Bundle> {
    if kinds.is_empty() {
        return Err(CliError::domain("no measure kinds selected"));
    }
    let curves = curves(cfg, kinds)?;
    let mut bundle = Bundle::new();
    if cfg.wants(Format::Csv) {
        bundle.add("estimate.csv", estimate_csv(&curves));
    }
    if cfg.wants(Format::Svg) {
        let mut by_tag: BTreeMap<&str, Vec<&EstimationCurve>> = BTreeMap::new();
        for c in &curves {
            by_tag.entry(c.kind.tag()).or_default().push(c);
        }
        for (tag, group) in by_tag {
            let mut plot = Plot::new(
                &format!("measurements for {tag}, δ = {}", fmt_num(cfg.delta)),
                tag,
                "M",
            );
            for (i, c) in group.iter().enumerate() {
                plot.push(Series::new(curve_label(c.kind), curve_points(c), i));
            }
            bundle.add(format!("estimate_{tag}.svg"), plot.fit(0.5).render());
        }
    }
    if bundle.is_empty() {
        return Err(CliError::domain("estimate writes csv and svg only"));
    }
    Ok(bundle)
}

pub fn figure(which: u8, cfg: &RunConfig) -> CliResult<Bundle> {
    match which {
        1 => figure_monotones(cfg),
        2 => figure_symmetric(cfg),
        3 => figure_estimation(cfg),
        other => Err(CliError::domain(format!(
            "no figure {other}; expected 1, 2 or 3"
        ))),
    }
}

fn figure_monotones(cfg: &RunConfig) -> CliResult<Bundle> {
    let orders: Vec<u32> = (1..=5).collect();
    let kinds = [MonotoneKind::Epsilon, MonotoneKind::Mu];
    let table = MonotoneTable::compute(&cfg.lambda_grid.points()?, &orders, &kinds)?;
    let mut bundle = Bundle::new();
    if cfg.wants(Format::Csv) {
        bundle.add("figure1.csv", monotone_csv(&table));
    }
    if cfg.wants(Format::Svg) {
        bundle.add(
            "figure1_epsilon.svg",
            monotone_plot(&table, MonotoneKind::Epsilon, "entanglement monotones ε_n"),
        );
        bundle.add(
            "figure1_mu.svg",
            monotone_plot(&table, MonotoneKind::Mu, "purity monotones μ_n"),
        );
    }
    Ok(bundle)
}

/// Scale constant of `S_n` against its reference polynomial, fitted as the
/// mean ratio over the grid.
#[derive(Debug, Clone, Serialize)]
pub struct ScaleFit {
    pub constant: f64,
    pub coefficient_of_variation: f64,
    pub points: usize,
}

#[derive(Serialize)]
struct SymmetricSidecar {
    orders: Vec<u32>,
    scale_constants: BTreeMap<String, f64>,
    fits: BTreeMap<String, ScaleFit>,
    orders_without_reference: Vec<u32>,
}

pub fn fit_scale(table: &MonotoneTable, n: u32) -> CliResult<ScaleFit> {
    let mut ratios = Vec::new();
    for (l, s) in table.series(MonotoneKind::Sym, n) {
        let p = sym_invariant_polynomial(n, l)?;
        if p.abs() > 1e-12 {
            ratios.push(s / p);
        }
    }
    if ratios.is_empty() {
        return Err(CliError::Numerical(format!(
            "no usable points to fit S_{n}"
        )));
    }
    let k = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / k;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / k;
    Ok(ScaleFit {
        constant: mean,
        coefficient_of_variation: var.sqrt() / mean.abs(),
        points: ratios.len(),
    })
}

fn figure_symmetric(cfg: &RunConfig) -> CliResult<Bundle> {
    let orders: Vec<u32> = (1..=4).collect();
    let lambdas = cfg.lambda_grid.points()?;
    let table = MonotoneTable::compute(&lambdas, &orders, &[MonotoneKind::Sym])?;
    let mut bundle = Bundle::new();
    if cfg.wants(Format::Csv) {
        bundle.add("figure2.csv", monotone_csv(&table));
    }
    if cfg.wants(Format::Svg) {
        let mut plot = Plot::new(
            "symmetric invariants, scaled to max 1",
            "λ",
            "S_n / max S_n",
        )
        .x_range(0.0, 1.0)
        .y_range(0.0, 1.0);
        for (i, &n) in orders.iter().enumerate() {
            let pts = table.series(MonotoneKind::Sym, n);
            let peak = pts.iter().map(|p| p.1).fold(0.0, f64::max);
            let scaled = pts.iter().map(|&(l, v)| (l, v / peak)).collect();
            plot.push(Series::new(format!("S_{n}"), scaled, i));
        }
        bundle.add("figure2.svg", plot.render());
    }
    if cfg.wants(Format::Json) {
        let mut scale_constants = BTreeMap::new();
        let mut fits = BTreeMap::new();
        for n in SYM_REFERENCE_ORDERS {
            let mut fit = fit_scale(&table, n)?;
            fit.constant = round_sig(fit.constant);
            fit.coefficient_of_variation = round_sig(fit.coefficient_of_variation);
            scale_constants.insert(n.to_string(), fit.constant);
            fits.insert(n.to_string(), fit);
        }
        let sidecar = SymmetricSidecar {
            orders: orders.clone(),
            scale_constants,
            fits,
            orders_without_reference: orders
                .iter()
                .copied()
                .filter(|n| !SYM_REFERENCE_ORDERS.contains(n))
                .collect(),
        };
        bundle.add("figure2_scale.json", to_json(&sidecar));
    }
    Ok(bundle)
}

fn figure_estimation(cfg: &RunConfig) -> CliResult<Bundle> {
    let mut kinds: Vec<MeasureKind> = (1..=5).map(MeasureKind::Epsilon).collect();
    kinds.extend((1..=5).map(MeasureKind::Mu));
    kinds.extend([MeasureKind::LinearEntropy, MeasureKind::Purity]);
    let curves = curves(cfg, &kinds)?;
    let mut bundle = Bundle::new();
    if cfg.wants(Format::Csv) {
        bundle.add("figure3.csv", estimate_csv(&curves));
    }
    if cfg.wants(Format::Svg) {
        let find = |k: MeasureKind| curves.iter().find(|c| c.kind == k).expect("computed above");
        let delta = fmt_num(cfg.delta);
        let mut eps = Plot::new(&format!("estimation of ε_n, δ = {delta}"), "ε_n", "M");
        let mut mu = Plot::new(&format!("estimation of μ_n, δ = {delta}"), "μ_n", "M");
        for n in 1..=5u32 {
            let i = n as usize - 1;
            eps.push(Series::new(
                format!("ε_{n}"),
                curve_points(find(MeasureKind::Epsilon(n))),
                i,
            ));
            mu.push(Series::new(
                format!("μ_{n}"),
                curve_points(find(MeasureKind::Mu(n))),
                i,
            ));
        }
        eps.push(
            Series::new(
                "linear entropy",
                curve_points(find(MeasureKind::LinearEntropy)),
                0,
            )
            .dashed("#000000"),
        );
        mu.push(
            Series::new("purity", curve_points(find(MeasureKind::Purity)), 0).dashed("#000000"),
        );
        bundle.add(
            "figure3_epsilon.svg",
            eps.fit(1.0).x_range(0.0, 1.0).render(),
        );
        // M diverges as mu -> 0; the median keeps the bulk of the curves visible
        bundle.add("figure3_mu.svg", mu.fit(0.5).x_range(0.0, 1.0).render());
    }
    Ok(bundle)
}
