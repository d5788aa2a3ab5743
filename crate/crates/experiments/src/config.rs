use std::path::PathBuf;
use std::str::FromStr;

use intvol::metrics::{Mode, SamplingPlan};

use crate::error::{ExpError, ExpResult};

pub const MAX_DIM: usize = 8;
pub const MAX_STEPS: usize = 12;
pub const MAX_SAMPLE_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub d: usize,
    pub j: usize,
    pub seed: u64,
    pub n_subspaces: usize,
    pub n_points: usize,
    pub steps: usize,
    pub l0: f64,
    pub workers: usize,
    pub out_csv: PathBuf,
    pub out_svg: Option<PathBuf>,
    pub mode: Mode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d: 3,
            j: 2,
            seed: 0,
            n_subspaces: 2000,
            n_points: 2000,
            steps: 6,
            l0: 2.0,
            workers: 1,
            out_csv: PathBuf::from("out.csv"),
            out_svg: None,
            mode: Mode::Auto,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> ExpResult<()> {
        if !(2 <= self.j && self.j <= self.d && self.d <= MAX_DIM) {
            return Err(ExpError::config(format!(
                "need 2 <= j <= d <= {MAX_DIM}, got d={}, j={}",
                self.d, self.j
            )));
        }
        if self.steps > MAX_STEPS {
            return Err(ExpError::config(format!("steps must be at most {MAX_STEPS}, got {}", self.steps)));
        }
        if self.n_subspaces == 0 || self.n_points == 0 {
            return Err(ExpError::config("subspace and point counts must be positive"));
        }
        if self.n_subspaces as u128 * self.n_points as u128 > MAX_SAMPLE_BUDGET {
            return Err(ExpError::config(format!(
                "n_subspaces * n_points = {} exceeds the budget of {MAX_SAMPLE_BUDGET}",
                self.n_subspaces as u128 * self.n_points as u128
            )));
        }
        if self.workers == 0 {
            return Err(ExpError::config("workers must be at least 1"));
        }
        if !(self.l0 > 0.0 && self.l0.is_finite()) {
            return Err(ExpError::config(format!("l0 must be positive, got {}", self.l0)));
        }
        Ok(())
    }

    /// The spindle constructions need a proper subspace dimension.
    pub fn require_proper(&self) -> ExpResult<()> {
        if self.j >= self.d {
            return Err(ExpError::config(format!("this experiment needs j < d, got d={}, j={}", self.d, self.j)));
        }
        Ok(())
    }

    pub fn plan(&self) -> SamplingPlan {
        SamplingPlan::new(self.n_subspaces, self.n_points, self.seed, self.mode)
    }

    /// Runs `f` on a pool with exactly `workers` threads.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> ExpResult<R> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| ExpError::config(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// How `a0` is obtained for the scaled spindle sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum A0Choice {
    Auto,
    Value(f64),
}

impl FromStr for A0Choice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(A0Choice::Auto);
        }
        s.parse::<f64>().map(A0Choice::Value).map_err(|_| format!("expected 'auto' or a number, got '{s}'"))
    }
}

/// Projection plane for the fiber diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneChoice {
    E1E2,
    Random(u64),
}

impl FromStr for PlaneChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "e1e2" {
            return Ok(PlaneChoice::E1E2);
        }
        match s.strip_prefix("random:") {
            Some(seed) => seed.parse().map(PlaneChoice::Random).map_err(|_| format!("bad seed in '{s}'")),
            None => Err(format!("expected 'e1e2' or 'random:<seed>', got '{s}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ok = ExperimentConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            ExperimentConfig { j: 1, ..ok.clone() },
            ExperimentConfig { j: 4, ..ok.clone() },
            ExperimentConfig { d: 9, j: 2, ..ok.clone() },
            ExperimentConfig { steps: 13, ..ok.clone() },
            ExperimentConfig { n_subspaces: 20_000, n_points: 10_000, ..ok.clone() },
            ExperimentConfig { n_points: 0, ..ok.clone() },
            ExperimentConfig { workers: 0, ..ok.clone() },
            ExperimentConfig { l0: -1.0, ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(ExpError::Config(_))), "{bad:?}");
        }
        assert!(ExperimentConfig { d: 8, j: 8, n_subspaces: 10_000, n_points: 10_000, ..ok.clone() }.validate().is_ok());
        assert!(ExperimentConfig { d: 3, j: 3, ..ok }.require_proper().is_err());
    }

    #[test]
    fn choice_parsing() {
        assert_eq!("auto".parse::<A0Choice>().unwrap(), A0Choice::Auto);
        assert_eq!("0.5".parse::<A0Choice>().unwrap(), A0Choice::Value(0.5));
        assert!("x".parse::<A0Choice>().is_err());
        assert_eq!("e1e2".parse::<PlaneChoice>().unwrap(), PlaneChoice::E1E2);
        assert_eq!("random:7".parse::<PlaneChoice>().unwrap(), PlaneChoice::Random(7));
        assert!("random:x".parse::<PlaneChoice>().is_err());
        assert!("e2e3".parse::<PlaneChoice>().is_err());
    }
}
