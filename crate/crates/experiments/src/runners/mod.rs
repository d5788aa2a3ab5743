//! Experiment runners. Each returns its table together with the list of
//! failed hard assertions; the caller decides whether to abort.

mod fibers;
mod lemma;
mod sequences;
mod validate;

pub use fibers::{added_vertices, fibers_for, run_fibers, FibersConfig};
pub use lemma::run_lemma;
pub use sequences::{run_thm1, run_thm2, run_thm3};
pub use validate::run_validation;

use crate::output::CsvTable;

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub table: CsvTable,
    /// Row-identifying messages for violated hard assertions.
    pub failures: Vec<String>,
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Ordinary least-squares slope of `y` on `x` and its standard error.
pub fn ols_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    if x.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    if x.len() < 3 {
        return (slope, f64::NAN);
    }
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    (slope, (ssr / (n - 2.0) / sxx).sqrt())
}
