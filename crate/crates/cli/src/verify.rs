use plap_core::cutoff::{self, BracketOptions};
use plap_core::plap::{self, Certificate, IndexLabel, SolverConfig, VertexFunction};
use plap_core::{tensor, SignedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::CliError;
use crate::report::{Check, GridRow};

pub const MONOTONICITY_GRID: [f64; 8] = [1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0];
pub const LIMIT_GRID: [f64; 4] = [4.0, 8.0, 16.0, 32.0];
pub const TENSOR_ORDERS: [f64; 3] = [2.0, 4.0, 6.0];

const MONOTONICITY_SLACK: f64 = 1e-8;
const LIMIT_SLACK: f64 = 1e-9;
const CONTRACTION_TOL: f64 = 1e-10;
const CORRESPONDENCE_TOL: f64 = 1e-8;

#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub rows: Vec<GridRow>,
}

pub fn monotonicity(g: &SignedGraph, seed: u64) -> Result<SuiteOutput, CliError> {
    let mut out = SuiteOutput::default();
    if g.potential().iter().any(|&k| k < 0.0) {
        out.checks.push(Check::skipped(
            "monotonicity",
            "p-monotonicity",
            "potential has negative entries",
        ));
        return Ok(out);
    }
    let cfg = SolverConfig::default().with_seed(seed);
    let d = g.structural_constants().d;

    if plap::perron_switching(g).is_some() {
        let pairs = MONOTONICITY_GRID
            .par_iter()
            .map(|&p| plap::solve_largest(g, p, &cfg))
            .collect::<Result<Vec<_>, _>>()?;
        let uncertified: Vec<f64> = pairs
            .iter()
            .filter(|x| x.certificate != Certificate::PerronCertified)
            .map(|x| x.p)
            .collect();
        out.checks.push(
            Check::new(
                "monotonicity.largest.certified",
                "perron.one-signed-certificate",
                uncertified.is_empty(),
                json!({ "grid": MONOTONICITY_GRID }),
            )
            .with_witnesses(json!({ "uncertified_p": uncertified })),
        );
        let vals: Vec<(f64, f64)> = pairs.iter().map(|x| (x.p, x.lambda)).collect();
        let rep = plap::monotonicity_functionals(g, IndexLabel::Last, &vals, MONOTONICITY_SLACK)?;
        let points = json!(rep.points);
        out.checks.push(
            Check::new(
                "monotonicity.largest.m1-non-increasing",
                "p-monotonicity.scaled-decreasing",
                rep.m1_violations.is_empty(),
                json!({ "points": points, "slack": MONOTONICITY_SLACK }),
            )
            .with_witnesses(json!({ "violations": rep.m1_violations })),
        );
        out.checks.push(
            Check::new(
                "monotonicity.largest.m2-non-decreasing",
                "p-monotonicity.root-increasing",
                rep.m2_violations.is_empty(),
                json!({ "d": d, "slack": MONOTONICITY_SLACK }),
            )
            .with_witnesses(json!({ "violations": rep.m2_violations })),
        );
        match cutoff::exact_ln(g) {
            Ok(ln) => {
                let below: Vec<f64> = pairs
                    .iter()
                    .filter(|x| 2f64.powf(-x.p) * x.lambda < ln.upper - 1e-8)
                    .map(|x| x.p)
                    .collect();
                out.checks.push(
                    Check::new(
                        "monotonicity.largest.dominates-ln",
                        "cutoff.limit-from-above",
                        below.is_empty(),
                        json!({ "exact_ln": ln.upper }),
                    )
                    .with_witnesses(json!({ "p": below })),
                );
            }
            Err(_) => out.checks.push(Check::skipped(
                "monotonicity.largest.dominates-ln",
                "cutoff.limit-from-above",
                "component above enumeration cap",
            )),
        }
        for pair in &pairs {
            out.rows.push(GridRow::new(pair.p, pair.lambda, pair.residual, d));
        }
    } else {
        out.checks.push(Check::skipped(
            "monotonicity.largest",
            "p-monotonicity",
            "largest eigenvalue is certified only on connected antibalanced graphs",
        ));
    }

    if g.classify_balance().is_balanced() && g.has_zero_potential() {
        let vals: Vec<(f64, f64)> = MONOTONICITY_GRID.iter().map(|&p| (p, 0.0)).collect();
        let rep = plap::monotonicity_functionals(g, IndexLabel::First, &vals, MONOTONICITY_SLACK)?;
        out.checks.push(Check::new(
            "monotonicity.smallest",
            "p-monotonicity",
            rep.passed(),
            json!({ "lambda": 0.0, "reason": "balanced with zero potential" }),
        ));
    } else {
        out.checks.push(Check::skipped(
            "monotonicity.smallest",
            "p-monotonicity",
            "smallest eigenvalue is certified only on balanced graphs with zero potential",
        ));
    }
    Ok(out)
}

pub fn interlacing(g: &SignedGraph, opts: &BracketOptions) -> Result<SuiteOutput, CliError> {
    let mut out = SuiteOutput::default();
    let n = g.n();
    if n < 2 {
        out.checks.push(Check::skipped("interlacing", "interlacing.vertex-removal", "fewer than two vertices"));
        return Ok(out);
    }
    if cutoff::exact_ln_with_cap(g, opts.enumeration_cap).is_err() {
        out.checks.push(Check::skipped(
            "interlacing",
            "interlacing.vertex-removal",
            "component above enumeration cap",
        ));
        return Ok(out);
    }
    let reports = (0..n)
        .into_par_iter()
        .map(|v| cutoff::interlacing_check(g, &[v], opts))
        .collect::<Result<Vec<_>, _>>()?;
    let failed: Vec<_> = reports
        .iter()
        .flat_map(|r| {
            r.entries
                .iter()
                .filter(|e| !e.passed)
                .map(move |e| json!({ "removed": r.removed, "relation": e.relation, "k": e.k, "left": e.left, "right": e.right }))
        })
        .collect();
    let ln: Vec<_> = reports
        .iter()
        .map(|r| json!({ "removed": r.removed, "ln_removed": r.ln_removed }))
        .collect();
    out.checks.push(
        Check::new(
            "interlacing.single-vertex",
            "interlacing.vertex-removal",
            failed.is_empty(),
            json!({ "ln_full": reports[0].ln_full, "ln_after_removal": ln }),
        )
        .with_witnesses(json!(failed)),
    );
    Ok(out)
}

pub fn limit(g: &SignedGraph, seed: u64) -> Result<SuiteOutput, CliError> {
    let mut out = SuiteOutput::default();
    if plap::perron_switching(g).is_none() {
        out.checks.push(Check::skipped(
            "limit",
            "limit.perron-convergence",
            "graph is not connected and antibalanced",
        ));
        return Ok(out);
    }
    let cfg = SolverConfig::default().with_seed(seed);
    let scan = cutoff::limit_scan(g, &LIMIT_GRID, &cfg)?;
    let uncertified: Vec<f64> = scan
        .grid
        .iter()
        .zip(&scan.certified)
        .filter(|(_, &c)| !c)
        .map(|(p, _)| *p)
        .collect();
    out.checks.push(
        Check::new(
            "limit.certified",
            "perron.one-signed-certificate",
            uncertified.is_empty(),
            json!({ "lambdas": scan.lambdas }),
        )
        .with_witnesses(json!({ "uncertified_p": uncertified })),
    );
    let ok = scan.non_increasing(LIMIT_SLACK);
    out.checks.push(
        Check::new(
            "limit.distance-non-increasing",
            "limit.perron-convergence",
            ok,
            json!({ "grid": scan.grid, "distances": scan.distances, "perron": scan.perron, "slack": LIMIT_SLACK }),
        )
        .with_witnesses(if ok { serde_json::Value::Null } else { json!({ "functions": scan.functions }) }),
    );
    Ok(out)
}

pub fn tensor_suite(g: &SignedGraph, seed: u64, opts: &BracketOptions) -> Result<SuiteOutput, CliError> {
    let mut out = SuiteOutput::default();
    let n = g.n();
    let cfg = SolverConfig::default().with_seed(seed);
    for &p in &TENSOR_ORDERS {
        let t = tensor::build_tensor(g, p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p as u64);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = t.apply(&f)?;
            let b = plap::apply_plap(g, p, &VertexFunction::new(f.clone()))?;
            let scale = f.iter().fold(0.0f64, |m, x| m.max(x.abs())).powf(p - 1.0).max(f64::MIN_POSITIVE);
            for (x, y) in a.iter().zip(b.values()) {
                worst = worst.max((x - y).abs() / scale);
            }
        }
        out.checks.push(Check::new(
            format!("tensor.p{p}.contraction"),
            "tensor.contraction-identity",
            worst <= CONTRACTION_TOL,
            json!({ "max_relative_defect": worst, "samples": 20, "tol": CONTRACTION_TOL }),
        ));
        let pair = plap::solve_largest(g, p, &cfg)?;
        let rep = tensor::eigen_correspondence(g, p, &pair, cfg.tol, opts.budget)?;
        out.checks.push(Check::new(
            format!("tensor.p{p}.eigenpair"),
            "tensor.eigenpair-correspondence",
            rep.defect <= CORRESPONDENCE_TOL,
            json!({ "lambda": rep.lambda, "defect": rep.defect, "tol": CORRESPONDENCE_TOL }),
        ));
        out.checks.push(
            Check::new(
                format!("tensor.p{p}.lower-bound"),
                "tensor.largest-lower-bound",
                rep.lower_bound_holds,
                json!({ "lambda": rep.lambda, "lower_bound": rep.lower_bound }),
            )
            .with_witnesses(if rep.lower_bound_holds {
                serde_json::Value::Null
            } else {
                json!({ "eigenfunction": pair.f.values() })
            }),
        );
    }
    Ok(out)
}
