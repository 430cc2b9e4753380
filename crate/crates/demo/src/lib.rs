//! Browser bindings. Each export is a thin wrapper around a plain function so
//! the same code runs in native tests.

use regge_shell::bench::{reference_values, run_benchmark_against, BenchmarkConfig, BenchmarkName};
use regge_shell::elements::ReggeBasis;
use regge_shell::polynomials::{eval_integrated_jacobi, eval_jacobi};
use regge_shell::shell::MembraneReduction;
use wasm_bindgen::prelude::*;

/// Rows `[x, P_0(x), .., P_n(x)]` followed by the same for the integrated
/// family, flattened; `samples` points on [-1, 1].
pub fn jacobi_table(alpha: f64, max_degree: usize, samples: usize) -> Result<Vec<f64>, String> {
    if samples < 2 {
        return Err("need at least two samples".into());
    }
    let mut out = Vec::with_capacity(2 * samples * (max_degree + 2));
    for integrated in [false, true] {
        for i in 0..samples {
            let x = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
            out.push(x);
            for n in 0..=max_degree {
                let v = if integrated { eval_integrated_jacobi(n, alpha, x) } else { eval_jacobi(n, alpha, x) };
                out.push(v.map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(out)
}

/// Samples basis function `index` of the order-`order` Regge element on the
/// reference triangle (-1,0), (1,0), (0,1): rows `[x, y, s11, s12, s22]`.
pub fn regge_samples(order: usize, index: usize, grid: usize) -> Result<Vec<f64>, String> {
    let basis = ReggeBasis::new(order);
    if index >= basis.dim() {
        return Err(format!("order {order} has {} basis functions", basis.dim()));
    }
    let mut out = Vec::new();
    for j in 0..=grid {
        let y = j as f64 / grid.max(1) as f64;
        for i in 0..=grid - j {
            let x = -1.0 + y + 2.0 * i as f64 / grid.max(1) as f64;
            let s = basis.eval([x, y])[index];
            out.extend([x, y, s.a11, s.a12, s.a22]);
        }
    }
    Ok(out)
}

/// Relative error on the coarsest cylinder mesh for each thickness, with and
/// without the membrane reduction: rows `[t, reduced, unreduced]`.
pub fn cylinder_errors(thicknesses: &[f64], levels: usize) -> Result<Vec<f64>, String> {
    let mut config = BenchmarkConfig::new(BenchmarkName::Cylinder);
    config.thicknesses = thicknesses.to_vec();
    config.levels = levels;
    config.reference_order = 3;
    let refs = reference_values(&config).map_err(|e| e.to_string())?;
    let mut columns = Vec::new();
    for membrane in [MembraneReduction::Regge, MembraneReduction::None] {
        config.membrane = membrane;
        let table = run_benchmark_against(&config, &refs).map_err(|e| e.to_string())?;
        columns.push(table.rows.iter().filter(|r| r.level == 0).map(|r| r.rel_error).collect::<Vec<_>>());
    }
    Ok(thicknesses.iter().enumerate().flat_map(|(i, t)| [*t, columns[0][i], columns[1][i]]).collect())
}

#[wasm_bindgen]
pub fn jacobi_curves(alpha: f64, max_degree: usize, samples: usize) -> Result<Vec<f64>, JsError> {
    jacobi_table(alpha, max_degree, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn regge_shape(order: usize, index: usize, grid: usize) -> Result<Vec<f64>, JsError> {
    regge_samples(order, index, grid).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn regge_dim(order: usize) -> usize {
    ReggeBasis::new(order).dim()
}

#[wasm_bindgen]
pub fn locking_sweep(thicknesses: Vec<f64>, levels: usize) -> Result<Vec<f64>, JsError> {
    cylinder_errors(&thicknesses, levels).map_err(|e| JsError::new(&e))
}
