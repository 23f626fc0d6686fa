//! Browser bindings: three curves and numbers computed by `gibbs-core`.
//!
//! The `#[wasm_bindgen]` functions are thin wrappers over plain functions so
//! the numerics are testable natively.

use gibbs_core::hofbauer::{pressure_curve, HofbauerFamily, HofbauerPotential};
use gibbs_core::interval_maps::{bowen_dimension, PiecewiseLinearMarkovMap};
use gibbs_core::variational;
use gibbs_core::LocallyConstantPotential;
use wasm_bindgen::prelude::*;

/// Largest grid the page may request.
pub const MAX_STEPS: usize = 2000;

/// `steps + 1` evenly spaced points of `[from, to]`.
pub fn grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, String> {
    if steps == 0 || steps > MAX_STEPS || !(from < to) || !from.is_finite() || !to.is_finite() {
        return Err(format!("need finite from < to and 1..={MAX_STEPS} steps"));
    }
    Ok((0..=steps).map(|i| from + (to - from) * i as f64 / steps as f64).collect())
}

/// Spectral pressure of the nearest-neighbour Ising chain at each β of the grid.
pub fn ising_curve(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, String> {
    let (_, phi) = LocallyConstantPotential::ising();
    let betas = grid(from, to, steps)?;
    let curve = variational::pressure_curve(&phi, &betas).map_err(|e| e.to_string())?;
    Ok(curve.into_iter().map(|(_, p)| p).collect())
}

/// Renewal pressure of the power-log Hofbauer family with exponent `gamma`.
pub fn hofbauer_curve(gamma: f64, from: f64, to: f64, steps: usize) -> Result<Vec<f64>, String> {
    if from < 0.0 {
        return Err("the renewal pressure is defined for beta >= 0".into());
    }
    let pot = HofbauerPotential::new(HofbauerFamily::PowerLog { gamma }).map_err(|e| e.to_string())?;
    let betas = grid(from, to, steps)?;
    let curve = pressure_curve(&pot, &betas, 1e-10).map_err(|e| e.to_string())?;
    Ok(curve.into_iter().map(|r| r.pressure).collect())
}

/// Dimension of the repeller of the map with full branches of slopes `a` on
/// `[0, 1/a]` and `b` on `[1 − 1/b, 1]`.
pub fn two_branch_dimension(a: f64, b: f64) -> Result<f64, String> {
    if !(a > 1.0 && b > 1.0) {
        return Err("slopes must exceed 1".into());
    }
    let (la, lb) = (1.0 / a, 1.0 / b);
    let gap = 1.0 - la - lb;
    let map = if gap.abs() <= 1e-12 {
        PiecewiseLinearMarkovMap::full_branches(&[a, b])
    } else if gap > 0.0 {
        PiecewiseLinearMarkovMap::new(
            vec![0.0, la, 1.0 - lb, 1.0],
            vec![a, 0.0, b],
            vec![vec![0, 1, 2], vec![], vec![0, 1, 2]],
        )
    } else {
        return Err("branches overlap: need 1/a + 1/b <= 1".into());
    }
    .map_err(|e| e.to_string())?;
    bowen_dimension(&map).map(|d| d.dimension).map_err(|e| e.to_string())
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen(js_name = isingPressure)]
pub fn ising_pressure(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    ising_curve(from, to, steps).map_err(js)
}

#[wasm_bindgen(js_name = hofbauerPressure)]
pub fn hofbauer_pressure(gamma: f64, from: f64, to: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    hofbauer_curve(gamma, from, to, steps).map_err(js)
}

#[wasm_bindgen(js_name = dimension)]
pub fn dimension(a: f64, b: f64) -> Result<f64, JsError> {
    two_branch_dimension(a, b).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ising_matches_closed_form() {
        let p = ising_curve(0.0, 2.0, 4).unwrap();
        for (i, x) in p.iter().enumerate() {
            let beta = 0.5 * i as f64;
            assert!((x - (2.0 * beta.cosh()).ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn hofbauer_vanishes_past_the_transition() {
        let p = hofbauer_curve(3.0, 0.5, 1.5, 10).unwrap();
        assert!(p[0] > 0.0);
        assert!(p[5..].iter().all(|x| x.abs() < 1e-9));
    }

    #[test]
    fn two_branch_dimensions() {
        assert!((two_branch_dimension(3.0, 3.0).unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-10);
        assert!((two_branch_dimension(2.0, 2.0).unwrap() - 1.0).abs() < 1e-10);
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).log2();
        assert!((two_branch_dimension(2.0, 4.0).unwrap() - golden).abs() < 1e-10);
        assert!(two_branch_dimension(1.5, 1.5).is_err());
    }

    #[test]
    fn grids_are_bounded() {
        assert!(grid(0.0, 1.0, 0).is_err());
        assert!(grid(1.0, 0.0, 4).is_err());
        assert_eq!(grid(0.0, 1.0, 4).unwrap().len(), 5);
    }
}
