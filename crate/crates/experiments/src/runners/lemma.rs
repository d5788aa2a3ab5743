//! Statistics of the goodness certificate over Haar-random subspaces.

use rayon::prelude::*;

use intvol::constructions::Setting;
use intvol::grassmann::{goodness, haar_sample};
use intvol::numerics::RngStream;

use super::RunOutput;
use crate::config::ExperimentConfig;
use crate::error::ExpResult;
use crate::output::{num, CsvTable};

const NEAR_SINGULAR: f64 = 1e-8;

/// One row per Haar draw (`cfg.n_subspaces` draws), summary in the footer.
pub fn run_lemma(cfg: &ExperimentConfig) -> ExpResult<RunOutput> {
    cfg.validate()?;
    cfg.install(|| lemma(cfg))?
}

fn lemma(cfg: &ExperimentConfig) -> ExpResult<RunOutput> {
    let setting = Setting::<f64>::unit_cube(cfg.d, cfg.j)?;
    let mut e1 = vec![0.0; cfg.d];
    e1[0] = 1.0;
    let stats: Vec<[f64; 4]> = (0..cfg.n_subspaces as u64)
        .into_par_iter()
        .map(|i| {
            let h = haar_sample::<f64>(cfg.d, cfg.j, &mut RngStream::new(cfg.seed, 2 * i))?;
            let c = goodness(&h, &setting.e, &setting.u)?;
            let p = h.project_point(&e1)?;
            Ok([c.sigma_min, c.ell_h, c.jacobian, p.iter().map(|x| x * x).sum()])
        })
        .collect::<intvol::Result<_>>()?;

    let mut table = CsvTable::new(&["sample", "sigma_min", "ell_H", "jacobian", "proj_e1_sq"]);
    for (i, s) in stats.iter().enumerate() {
        table.push(vec![i.to_string(), num(s[0]), num(s[1]), num(s[2]), num(s[3])]);
    }
    let n = stats.len() as f64;
    let column = |k: usize| stats.iter().map(move |s| s[k]);
    let min = |k: usize| column(k).fold(f64::INFINITY, f64::min);
    let mean = |k: usize| column(k).sum::<f64>() / n;
    let near_singular = column(0).filter(|&s| s < NEAR_SINGULAR).count();
    let target = cfg.j as f64 / cfg.d as f64;

    table.note(format!("d={} j={} seed={} samples={}", cfg.d, cfg.j, cfg.seed, stats.len()));
    table.note(format!("sigma_min: min {} mean {}", num(min(0)), num(mean(0))));
    table.note(format!("ell_H: min {} mean {}", num(min(1)), num(mean(1))));
    table.note(format!("jacobian: min {} mean {}", num(min(2)), num(mean(2))));
    table.note(format!("near_singular (sigma_min < {NEAR_SINGULAR:e}): {near_singular}"));
    table.note(format!("mean |P_H e1|^2: {} target j/d = {}", num(mean(3)), num(target)));

    let mut failures = Vec::new();
    if near_singular > 0 {
        failures.push(format!("lemma: {near_singular} Haar draws have sigma_min < {NEAR_SINGULAR:e}"));
    }
    Ok(RunOutput { table, failures })
}
