use num_complex::Complex;
use pcds::capacity::{
    closed_form_dephasing_q, closed_form_dephasing_qe, q_capacity, q_capacity_pcds_with, qe_capacity_pcds_with,
    qe_capacity_with, CapacityResult, OptimizerConfig,
};
use pcds::pcds::{make_combined, make_dephasing, make_single_decay, qubit_adc};
use rayon::prelude::*;

use crate::table::{Cell, Table};
use crate::CliError;

/// Allowed disagreement between two routes to the same number.
pub const CONSISTENCY_TOL: f64 = 1e-4;
const BOUND_SLACK: f64 = 1e-9;

fn numerical(context: String) -> impl FnOnce(pcds::Error) -> CliError {
    move |e| CliError::Consistency(format!("{context}: {e}"))
}

fn status_name(r: &CapacityResult<f64>) -> String {
    format!("{:?}", r.degradability.status)
}

fn method_name(r: &CapacityResult<f64>) -> String {
    format!("{:?}", r.method)
}

fn check_bounds(context: &str, r: &CapacityResult<f64>) -> Result<(), CliError> {
    if r.value < r.lower_bound - BOUND_SLACK || r.value > r.upper_bound + BOUND_SLACK {
        return Err(CliError::Consistency(format!(
            "{context}: Q = {} outside its bounds [{}, {}]",
            r.value, r.lower_bound, r.upper_bound
        )));
    }
    Ok(())
}

fn collect(rows: Vec<Result<Vec<Cell>, CliError>>, columns: Vec<&'static str>) -> Result<Table, CliError> {
    let rows = rows.into_iter().collect::<Result<_, _>>()?;
    Ok(Table { columns, rows })
}

pub const DEPHASING_COLUMNS: [&str; 5] = ["kappa_sq", "Q", "Q_optimizer", "QE", "QE_optimizer"];

/// Capacities of the dephasing family over a grid of `|κ|²`.
pub fn dephasing(d_a: usize, d_b: usize, kappa_sq: &[f64], config: &OptimizerConfig) -> Result<Table, CliError> {
    let rows = kappa_sq
        .par_iter()
        .map(|&k2| {
            let ctx = format!("d_A={d_a} d_B={d_b} |κ|²={k2}");
            let k = k2.sqrt();
            let q = closed_form_dephasing_q(d_a, d_b, k).map_err(numerical(ctx.clone()))?;
            let qe = closed_form_dephasing_qe(d_a, d_b, k).map_err(numerical(ctx.clone()))?;
            let pc = make_dephasing(d_a, d_b, Complex::new(k, 0.0)).map_err(numerical(ctx.clone()))?;
            let q_opt = q_capacity_pcds_with(&pc, config).map_err(numerical(ctx.clone()))?;
            let qe_opt = qe_capacity_pcds_with(&pc, config).map_err(numerical(ctx.clone()))?;
            for (name, a, b) in [("Q", q, q_opt.value), ("QE", qe, qe_opt.value)] {
                if (a - b).abs() > CONSISTENCY_TOL {
                    return Err(CliError::Consistency(format!(
                        "{ctx}: {name} closed form {a} vs optimizer {b}"
                    )));
                }
            }
            Ok(vec![k2.into(), q.into(), q_opt.value.into(), qe.into(), qe_opt.value.into()])
        })
        .collect();
    collect(rows, DEPHASING_COLUMNS.to_vec())
}

pub const MAD_COLUMNS: [&str; 7] = ["gamma", "Q", "Q_lower", "Q_upper", "QE", "degradable", "method"];

/// Single-decay family over a grid of `γ`; `d_C = 2` is the qubit damping channel.
pub fn mad(d_c: usize, gammas: &[f64], config: &OptimizerConfig) -> Result<Table, CliError> {
    let rows = gammas
        .par_iter()
        .map(|&g| {
            let ctx = format!("d_C={d_c} γ={g}");
            let (q, qe) = if d_c == 2 {
                let ch = qubit_adc(g).map_err(numerical(ctx.clone()))?;
                (q_capacity(&ch).map_err(numerical(ctx.clone()))?, qe_capacity_with(&ch, config))
            } else {
                let pc = make_single_decay(d_c, g).map_err(numerical(ctx.clone()))?;
                let q = q_capacity_pcds_with(&pc, config).map_err(numerical(ctx.clone()))?;
                let qe = qe_capacity_pcds_with(&pc, config).map_err(numerical(ctx.clone()))?;
                (q, qe.value)
            };
            check_bounds(&ctx, &q)?;
            Ok(vec![
                g.into(),
                q.value.into(),
                q.lower_bound.into(),
                q.upper_bound.into(),
                qe.into(),
                status_name(&q).into(),
                method_name(&q).into(),
            ])
        })
        .collect();
    collect(rows, MAD_COLUMNS.to_vec())
}

pub const SURFACE_COLUMNS: [&str; 8] = ["gamma", "kappa", "Q", "Q_lower", "Q_upper", "gap", "QE", "method"];

/// Combined decay and dephasing family over a `(γ, |κ|)` grid, `γ` outermost.
pub fn combined(d_c: usize, gammas: &[f64], kappas: &[f64], config: &OptimizerConfig) -> Result<Table, CliError> {
    let points: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| kappas.iter().map(move |&k| (g, k))).collect();
    let rows = points
        .par_iter()
        .map(|&(g, k)| {
            let ctx = format!("d_C={d_c} γ={g} κ={k}");
            let pc = make_combined(d_c, g, Complex::new(k, 0.0)).map_err(numerical(ctx.clone()))?;
            let q = q_capacity_pcds_with(&pc, config).map_err(numerical(ctx.clone()))?;
            let qe = qe_capacity_pcds_with(&pc, config).map_err(numerical(ctx.clone()))?;
            check_bounds(&ctx, &q)?;
            Ok(vec![
                g.into(),
                k.into(),
                q.value.into(),
                q.lower_bound.into(),
                q.upper_bound.into(),
                q.gap().into(),
                qe.value.into(),
                method_name(&q).into(),
            ])
        })
        .collect();
    collect(rows, SURFACE_COLUMNS.to_vec())
}
