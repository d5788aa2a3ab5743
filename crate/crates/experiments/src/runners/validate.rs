//! Cross-checks of the estimators against closed forms and exact planar
//! oracles. One row per check, each with its own pass flag.

use intvol::bodies::VPolytope;
use intvol::metrics::{hausdorff, intrinsic_volume, symdiff_volume, Mode, SamplingPlan};
use intvol::numerics::{flag_coefficient, needle_constant, RngStream, Sidedness};

use super::RunOutput;
use crate::error::ExpResult;
use crate::output::{num, CsvTable};

pub const POLYGON_PAIRS: usize = 20;
pub const POLYGON_POINTS: usize = 100_000;
pub const KUBOTA_SUBSPACES: usize = 4000;
pub const TRANSLATION_CASES: usize = 20;
pub const TRIANGLE_CASES: usize = 100;

struct Check {
    name: String,
    value: f64,
    reference: f64,
    std_error: f64,
    tolerance: String,
    pass: bool,
}

fn random_polygon(rng: &mut RngStream, k: usize) -> VPolytope<f64> {
    let (cx, cy) = (2.0 * rng.uniform(), 2.0 * rng.uniform());
    let r = 0.3 + rng.uniform();
    let pts: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let t = std::f64::consts::TAU * rng.uniform();
            let s = r * rng.uniform().sqrt();
            vec![cx + s * t.cos(), cy + s * t.sin()]
        })
        .collect();
    VPolytope::new(2, &pts).expect("finite random vertices")
}

fn random_body(rng: &mut RngStream, d: usize, n: usize) -> VPolytope<f64> {
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| 3.0 * rng.gaussian()).collect()).collect();
    VPolytope::new(d, &pts).expect("finite random vertices")
}

pub fn run_validation(seed: u64, workers: usize) -> ExpResult<RunOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| crate::error::ExpError::config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| validate(seed))
}

fn validate(seed: u64) -> ExpResult<RunOutput> {
    let mut checks = Vec::new();
    let exactly = |name: String, value: f64, reference: f64, tol: f64| Check {
        name,
        value,
        reference,
        std_error: 0.0,
        tolerance: format!("abs {tol:e}"),
        pass: (value - reference).abs() <= tol,
    };

    for d in 1..=8 {
        checks.push(exactly(format!("flag({d},{d})"), flag_coefficient(d, d)?, 1.0, 0.0));
    }
    checks.push(exactly("flag(2,1)".into(), flag_coefficient(2, 1)?, std::f64::consts::FRAC_PI_2, 1e-12));
    checks.push(exactly("flag(3,2)".into(), flag_coefficient(3, 2)?, 2.0, 1e-12));
    checks.push(exactly("needle_constant(3,2,one_sided)".into(), needle_constant(3, 2, Sidedness::OneSided)?, 4.0, 1e-12));
    checks.push(exactly("needle_constant(3,2,two_sided)".into(), needle_constant(3, 2, Sidedness::TwoSided)?, 8.0, 1e-12));

    let mut rng = RngStream::new(seed, 0);
    let mut agree = 0;
    for t in 0..POLYGON_PAIRS {
        let a = random_polygon(&mut rng, 8);
        let b = random_polygon(&mut rng, 9);
        let exact = symdiff_volume(&a, &b, &SamplingPlan::default())?.value;
        let mc = symdiff_volume(&a, &b, &SamplingPlan::new(1, POLYGON_POINTS, seed.wrapping_add(t as u64 + 1), Mode::MonteCarlo))?;
        let pass = (mc.value - exact).abs() <= 4.0 * mc.std_error;
        agree += pass as usize;
        checks.push(Check {
            name: format!("polygon_pair_{t}"),
            value: mc.value,
            reference: exact,
            std_error: mc.std_error,
            tolerance: "4 se".into(),
            pass,
        });
    }
    checks.push(Check {
        name: "polygon_pairs_agreeing".into(),
        value: agree as f64,
        reference: POLYGON_PAIRS as f64,
        std_error: 0.0,
        tolerance: format!(">= {}", POLYGON_PAIRS - 1),
        pass: agree + 1 >= POLYGON_PAIRS,
    });

    let plan = SamplingPlan::new(KUBOTA_SUBSPACES, 1, seed, Mode::Auto);
    let statistical = |name: &str, est: intvol::MetricEstimate, reference: f64, abs: Option<f64>| {
        let err = (est.value - reference).abs();
        Check {
            name: name.into(),
            value: est.value,
            reference,
            std_error: est.std_error,
            tolerance: match abs {
                Some(a) => format!("3 se and abs {a}"),
                None => "3 se".into(),
            },
            pass: err <= 3.0 * est.std_error && abs.map_or(true, |a| err < a),
        }
    };
    checks.push(statistical("kubota_cube_V2", intrinsic_volume(&VPolytope::unit_cube(3), 2, &plan)?, 3.0, Some(0.05)));
    let segment = VPolytope::new(3, &[vec![0.0, 0.0, 0.0], vec![0.0, 3.0, 4.0]])?;
    checks.push(statistical("segment_V1", intrinsic_volume(&segment, 1, &plan)?, 5.0, Some(0.05)));
    let square = VPolytope::cuboid(&[0.0, 0.0, 0.0], &[1.0, 1.0, 0.0])?;
    checks.push(statistical("embedded_square_V2", intrinsic_volume(&square, 2, &plan)?, 1.0, None));

    let unit = VPolytope::cuboid(&[0.0, 0.0], &[1.0, 1.0])?;
    let double = VPolytope::cuboid(&[0.0, 0.0], &[2.0, 2.0])?;
    checks.push(exactly("hausdorff_squares".into(), hausdorff(&unit, &double)?, 2f64.sqrt(), 1e-9));
    let mut worst_shift = 0.0f64;
    for _ in 0..TRANSLATION_CASES {
        let k = random_body(&mut rng, 3, 6);
        let t: Vec<f64> = (0..3).map(|_| rng.gaussian()).collect();
        let len = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        worst_shift = worst_shift.max((hausdorff(&k, &k.translate(&t)?)? - len).abs());
    }
    checks.push(exactly("hausdorff_translation_worst".into(), worst_shift, 0.0, 1e-9));
    let mut worst_triangle = f64::NEG_INFINITY;
    for _ in 0..TRIANGLE_CASES {
        let a = random_body(&mut rng, 3, 5);
        let b = random_body(&mut rng, 3, 5);
        let c = random_body(&mut rng, 3, 5);
        let excess = hausdorff(&a, &b)? - hausdorff(&a, &c)? - hausdorff(&c, &b)?;
        worst_triangle = worst_triangle.max(excess);
    }
    checks.push(Check {
        name: "hausdorff_triangle_worst_excess".into(),
        value: worst_triangle,
        reference: 0.0,
        std_error: 0.0,
        tolerance: "<= 3e-9".into(),
        pass: worst_triangle <= 3e-9,
    });

    let mut table = CsvTable::new(&["check", "value", "reference", "std_error", "tolerance", "pass"]);
    let mut failures = Vec::new();
    for c in &checks {
        if !c.pass {
            failures.push(format!("validate row {}: value {} vs reference {}", c.name, c.value, c.reference));
        }
        table.push(vec![
            c.name.clone(),
            num(c.value),
            num(c.reference),
            num(c.std_error),
            c.tolerance.clone(),
            if c.pass { "pass" } else { "fail" }.into(),
        ]);
    }
    table.note(format!("seed={seed}; {} of {} checks pass", checks.len() - failures.len(), checks.len()));
    // Single polygon pairs are allowed to miss; only the aggregate row is binding.
    failures.retain(|f| !f.starts_with("validate row polygon_pair_"));
    Ok(RunOutput { table, failures })
}
