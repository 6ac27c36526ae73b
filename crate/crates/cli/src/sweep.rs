//! Sweep drivers. Parameter points run in parallel and are reassembled in
//! grid order.

use rayon::prelude::*;

use rabi_core::approx::{aa_energy, grwa_block, gvm_ground_energy, gvm_lambda, rwa_ground_energy, rwa_spectrum};
use rabi_core::exact::{mean_photon, solve_exact, ExactSolution};
use rabi_core::optimize::linspace;
use rabi_core::varexcited::{excited_mean_photon, excited_solve, excited_trial, ExcitedResult};
use rabi_core::varground::{ground_solve, scan_landscape, LandscapeResult};
use rabi_core::{ModelParams, Sign};

use crate::config::{Label, Method, SweepConfig};
use crate::table::Row;
use crate::CliError;

/// Truncation tolerance for the exact reference.
pub const EXACT_TOL: f64 = 1e-10;

pub const EXPERIMENT_OMEGA: f64 = 12.16;
pub const EXPERIMENT_G_END: f64 = 1.5;
pub const EXPERIMENT_LABELS: [Label; 2] = [Label { sign: Sign::Minus, n: 1 }, Label { sign: Sign::Plus, n: 1 }];

fn fan_out(grid: &[f64], point: impl Fn(f64) -> Result<Vec<Row>, CliError> + Sync) -> Result<Vec<Row>, CliError> {
    let chunks: Vec<Result<Vec<Row>, CliError>> = grid.par_iter().map(|&g| point(g)).collect();
    let mut rows = Vec::new();
    for chunk in chunks {
        rows.extend(chunk?);
    }
    Ok(rows)
}

/// One row per `(g, method)` for the ground state.
pub fn ground_rows(cfg: &SweepConfig) -> Result<Vec<Row>, CliError> {
    fan_out(&cfg.g_grid(), |g| ground_point(cfg, g))
}

fn ground_point(cfg: &SweepConfig, g: f64) -> Result<Vec<Row>, CliError> {
    let params = ModelParams::new(cfg.omega, cfg.big_omega, g)?;
    let mut rows = Vec::new();
    for &method in &cfg.methods {
        let mut row = Row::new(g, cfg.omega, cfg.big_omega, method.as_str(), "ground");
        match method {
            Method::Exact => {
                let sol = solve_exact(&params, EXACT_TOL)?;
                let (state, energy) = sol.ground();
                row.energy = Some(energy);
                row.mean_photon = Some(mean_photon(&sol, state)?);
            }
            Method::Rwa => {
                row.energy = Some(rwa_ground_energy(&params));
                row.mean_photon = Some(0.0);
            }
            Method::Aa | Method::Grwa => {
                // the GRWA leaves the ground level of the AA untouched
                let l = params.lambda_aa();
                row.energy = Some(aa_energy(&params, l, Sign::Minus, 0));
                row.mean_photon = Some(l * l);
                row.lambda = Some(l);
            }
            Method::Gvm => {
                let l = gvm_lambda(&params);
                row.energy = Some(gvm_ground_energy(&params, l));
                row.mean_photon = Some(l * l);
                row.lambda = Some(l);
            }
            Method::Var => {
                let r = ground_solve(&params)?;
                row.energy = Some(r.energy);
                row.mean_photon = Some(r.mean_photon);
                row.lambda = Some(r.lambda_opt);
                row.k = Some(r.k_at_opt);
                row.p = Some(r.p_at_opt);
                row.regime = Some(r.regime);
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// One row per `(g, label, method)` for excited states. Exact rows use the
/// eigenstate of largest overlap with the variational trial. `aa` and `gvm`
/// have no excited-state form and are skipped.
pub fn excited_rows(cfg: &SweepConfig) -> Result<Vec<Row>, CliError> {
    if cfg.labels.is_empty() {
        return Err(CliError::Config("excited sweeps need at least one label".into()));
    }
    fan_out(&cfg.g_grid(), |g| excited_point(cfg, g))
}

struct ExcitedPoint {
    exact: Option<(f64, f64)>,
    var: ExcitedResult,
    grwa: (f64, f64),
}

fn excited_point_data(params: &ModelParams, sol: Option<&ExactSolution>, label: Label) -> Result<ExcitedPoint, CliError> {
    let var = excited_solve(params, label.n, label.sign, sol)?;
    let exact = match (sol, var.matched) {
        (Some(sol), Some(m)) => Some((sol.energy(m.state)?, mean_photon(sol, m.state)?)),
        _ => None,
    };
    let l = params.lambda_aa();
    let block = grwa_block(params, l, label.n)?;
    let trial = excited_trial(params, l, label.n, label.sign)?;
    Ok(ExcitedPoint { exact, var, grwa: (block.energy(label.sign), excited_mean_photon(&trial)?) })
}

fn excited_point(cfg: &SweepConfig, g: f64) -> Result<Vec<Row>, CliError> {
    let params = ModelParams::new(cfg.omega, cfg.big_omega, g)?;
    let sol = if cfg.wants(Method::Exact) { Some(solve_exact(&params, EXACT_TOL)?) } else { None };
    let mut rows = Vec::new();
    for &label in &cfg.labels {
        let data = excited_point_data(&params, sol.as_ref(), label)?;
        let name = label.to_string();
        for &method in &cfg.methods {
            let mut row = Row::new(g, cfg.omega, cfg.big_omega, method.as_str(), &name);
            match method {
                Method::Exact => {
                    let (e, n) = data.exact.expect("exact solution requested");
                    row.energy = Some(e);
                    row.mean_photon = Some(n);
                }
                Method::Rwa => row.energy = Some(rwa_spectrum(&params, label.n, label.sign)?),
                Method::Grwa => {
                    row.energy = Some(data.grwa.0);
                    row.mean_photon = Some(data.grwa.1);
                    row.lambda = Some(params.lambda_aa());
                }
                Method::Var => {
                    let r = &data.var;
                    row.energy = Some(r.energy);
                    row.mean_photon = Some(r.mean_photon);
                    row.lambda = Some(r.lambda_opt);
                    row.k = Some(r.k_at_opt);
                    row.p = Some(r.p_at_opt);
                    row.regime = Some(r.regime);
                }
                Method::Aa | Method::Gvm => continue,
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// First and second excitations at `ω = 12.16 Ω` over `g ∈ [0, 1.5 Ω]`:
/// absolute exact energies plus the `var` and `grwa` deviations from them
/// (methods `var-dev`, `grwa-dev`).
pub fn experiment_rows(g_points: usize) -> Result<Vec<Row>, CliError> {
    if g_points < 2 {
        return Err(CliError::Config("g-points must be at least 2".into()));
    }
    let grid = linspace(0.0, EXPERIMENT_G_END, g_points);
    fan_out(&grid, |g| {
        let params = ModelParams::new(EXPERIMENT_OMEGA, 1.0, g)?;
        let sol = solve_exact(&params, EXACT_TOL)?;
        let mut rows = Vec::new();
        for label in EXPERIMENT_LABELS {
            let data = excited_point_data(&params, Some(&sol), label)?;
            let (exact_e, exact_n) = data.exact.expect("exact solution supplied");
            let name = label.to_string();
            let mut row = Row::new(g, EXPERIMENT_OMEGA, 1.0, "exact", &name);
            row.energy = Some(exact_e);
            row.mean_photon = Some(exact_n);
            rows.push(row);
            let mut row = Row::new(g, EXPERIMENT_OMEGA, 1.0, "var-dev", &name);
            row.energy = Some(data.var.energy - exact_e);
            row.lambda = Some(data.var.lambda_opt);
            row.k = Some(data.var.k_at_opt);
            row.p = Some(data.var.p_at_opt);
            row.regime = Some(data.var.regime);
            rows.push(row);
            let mut row = Row::new(g, EXPERIMENT_OMEGA, 1.0, "grwa-dev", &name);
            row.energy = Some(data.grwa.0 - exact_e);
            row.lambda = Some(params.lambda_aa());
            rows.push(row);
        }
        Ok(rows)
    })
}

pub fn landscape(params: &ModelParams, lo: f64, hi: f64, points: usize) -> Result<LandscapeResult, CliError> {
    Ok(scan_landscape(params, lo, hi, points)?)
}
