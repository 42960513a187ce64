//! The seven experiment drivers. Each returns the assembled report plus a
//! pass flag (`false` = numeric tolerance breach, exit 2). Configuration
//! problems surface as `Failure::Config` (exit 1); library errors after
//! validation are internal (exit 3).
//!
//! Work is parallelized per row or per sample with results collected in
//! input order, so the numeric output is independent of the worker count.

use crate::report::{Field, Report};
use crate::sample;
use crate::{Failure, Resolved, WeightSpec};
use rayon::prelude::*;
use std::collections::HashMap;
use symdom::approx::{convergence_report, localization_profile, Space};
use symdom::curved2d::{self, CurvedWeightParams, DomainParams2};
use symdom::fullsym::proj_even;
use symdom::jet::Jet3;
use symdom::revolution::{
    ball3_weighted_jet, rev_basis_eval, rev_basis_norms, rev_diffop_apply, rev_eigenvalue,
    rev_indices, rev_kernel_eval, rev_psi, rev_psi_inv, rev_quadrature, BallWeightParams,
    RevBasisIndex, RevDomainParams,
};
use symdom::scalar::Scalar;

/// Planar parameters resolved from the run configuration.
fn planar_params(r: &Resolved) -> Result<(DomainParams2, CurvedWeightParams), Failure> {
    let (a, b, c) = r.domain;
    let dp = DomainParams2::new(a, b, c)?;
    let WeightSpec::Kappa(kappa) = r.weight_for_dim()? else {
        unreachable!("dim 2 always resolves to a kappa triple");
    };
    Ok((dp, CurvedWeightParams::new(kappa)?))
}

/// Solid parameters resolved from the run configuration.
fn solid_params(r: &Resolved) -> Result<(RevDomainParams, BallWeightParams), Failure> {
    let (a, b, c) = r.domain;
    let dp = RevDomainParams::new(a, b, c)?;
    let WeightSpec::BetaGamma(beta, gamma) = r.weight_for_dim()? else {
        unreachable!("dim 3 always resolves to an axis pair");
    };
    Ok((dp, BallWeightParams::new(beta, gamma)?))
}

fn require_quad(r: &Resolved, needed: usize) -> Result<(), Failure> {
    if r.quad_degree < needed {
        return Err(Failure::config(format!(
            "--quad-degree {} is too small for --nmax {}; it must be at least {needed}",
            r.quad_degree, r.nmax
        )));
    }
    Ok(())
}

fn internal(e: symdom::Error) -> Failure {
    Failure::internal(e.to_string())
}

/// The rev-family member as a jet-callable in solid coordinates (x1, x2, t),
/// the form the spectral operator consumes.
fn solid_member_jet(
    dp: RevDomainParams,
    bw: BallWeightParams,
    idx: RevBasisIndex,
) -> impl Fn([Jet3; 3]) -> Jet3 {
    move |y: [Jet3; 3]| {
        let rho = y[0] * y[0] + y[1] * y[1];
        let arg = (y[2] * y[2] - Jet3::cst(dp.a) - rho.scale(dp.c - dp.a)).scale(1.0 / (dp.b - dp.a));
        ball3_weighted_jet(&bw, &idx, [y[0], y[1], arg.sqrt()]).expect("member jet in the interior")
    }
}

/// Gram deviations of the orthonormalized basis, one row per degree; the
/// off-diagonal deviation of a pair is charged to the larger degree.
pub fn cmd_gram(r: &Resolved) -> Result<(Report, bool), Failure> {
    require_quad(r, 2 * r.nmax)?;
    let nmax = r.nmax;
    // Per-member values at every node, normalized; row-parallel.
    let (degrees, values, weights, mass): (Vec<usize>, Vec<Vec<f64>>, Vec<f64>, f64) =
        if r.dim == 2 {
            let (dp, wp) = planar_params(r)?;
            let rule = curved2d::lambda_quadrature(&dp, &wp, r.quad_degree).map_err(internal)?;
            let norms = curved2d::q_norms(&dp, &wp, nmax).map_err(internal)?;
            let members: Vec<(usize, usize)> = (0..=nmax)
                .flat_map(|n| (0..=n / 2).map(move |j| (j, n)))
                .collect();
            let values: Vec<Vec<f64>> = members
                .par_iter()
                .map(|&(j, n)| {
                    rule.nodes
                        .iter()
                        .map(|&pt| {
                            curved2d::q_basis_eval(&dp, &wp, j, n, pt).expect("node in domain")
                                / norms[n][j]
                        })
                        .collect()
                })
                .collect();
            let mass = rule.mass();
            (
                members.iter().map(|&(_, n)| n).collect(),
                values,
                rule.weights,
                mass,
            )
        } else {
            let (dp, bw) = solid_params(r)?;
            let rule = rev_quadrature(&dp, &bw, r.quad_degree).map_err(internal)?;
            let norms = rev_basis_norms(&dp, &bw, nmax).map_err(internal)?;
            let members: Vec<(RevBasisIndex, f64)> = norms.into_iter().flatten().collect();
            let values: Vec<Vec<f64>> = members
                .par_iter()
                .map(|(idx, nrm)| {
                    rule.nodes
                        .iter()
                        .map(|&p| {
                            rev_basis_eval(&dp, &bw, idx, p).expect("node in domain") / nrm
                        })
                        .collect()
                })
                .collect();
            let mass = rule.weights.iter().sum();
            (
                members.iter().map(|(idx, _)| idx.n).collect(),
                values,
                rule.weights,
                mass,
            )
        };

    let m = values.len();
    // Gram rows in parallel, reduced per degree serially.
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (i..m)
                .map(|k| {
                    let dot: f64 = values[i]
                        .iter()
                        .zip(&values[k])
                        .zip(&weights)
                        .map(|((a, b), w)| w * a * b)
                        .sum();
                    dot / mass
                })
                .collect()
        })
        .collect();

    let mut diag_dev = vec![0.0f64; nmax + 1];
    let mut off_dev = vec![0.0f64; nmax + 1];
    for i in 0..m {
        for (offset, &g) in rows[i].iter().enumerate() {
            let k = i + offset;
            if k == i {
                let n = degrees[i];
                diag_dev[n] = diag_dev[n].max((g - 1.0).abs());
            } else {
                let n = degrees[i].max(degrees[k]);
                off_dev[n] = off_dev[n].max(g.abs());
            }
        }
    }

    let mut out_rows = Vec::new();
    let mut pass = true;
    for n in 0..=nmax {
        let count = degrees.iter().filter(|&&d| d == n).count();
        pass &= diag_dev[n] <= r.tol && off_dev[n] <= r.tol;
        out_rows.push(vec![
            Field::Int(n as i64),
            Field::Int(count as i64),
            Field::Float(diag_dev[n]),
            Field::Float(off_dev[n]),
        ]);
    }
    Ok((
        Report {
            columns: vec!["degree", "members", "max_diag_dev", "max_offdiag_dev"],
            rows: out_rows,
        },
        pass,
    ))
}

/// Relative eigen-residuals of the spectral operator per degree at seeded
/// interior points.
pub fn cmd_eigen(r: &Resolved) -> Result<(Report, bool), Failure> {
    let mut out_rows = Vec::new();
    let mut pass = true;
    if r.dim == 2 {
        let (dp, wp) = planar_params(r)?;
        wp.spectral_valid()?;
        let mut rng = sample::rng(r.seed);
        let pts: Vec<[f64; 2]> = (0..r.samples)
            .map(|_| sample::planar_point(&mut rng, &dp))
            .collect();
        for n in 0..=r.nmax {
            let lam = curved2d::curved_eigenvalue(&wp, n);
            let worst = (0..=n / 2)
                .into_par_iter()
                .map(|j| {
                    let mut w = 0.0f64;
                    for &pt in &pts {
                        let q = curved2d::q_basis_eval(&dp, &wp, j, n, pt)
                            .expect("sampled in the interior");
                        let got = curved2d::curved_diffop_apply(&dp, &wp, &[(j, n, 1.0)], pt)
                            .expect("sampled above the operator floor");
                        w = w.max((got - lam * q).abs() / (lam * q).abs().max(1.0));
                    }
                    w
                })
                .collect::<Vec<f64>>()
                .into_iter()
                .fold(0.0f64, f64::max);
            pass &= worst <= r.tol;
            out_rows.push(vec![
                Field::Int(n as i64),
                Field::Float(lam),
                Field::Float(worst),
            ]);
        }
    } else {
        let (dp, bw) = solid_params(r)?;
        let mut rng = sample::rng(r.seed);
        let pts: Vec<[f64; 3]> = (0..r.samples)
            .map(|_| sample::solid_point(&mut rng, &dp))
            .collect();
        for n in 0..=r.nmax {
            let lam = rev_eigenvalue(&bw, n);
            let indices = rev_indices(n);
            let worst = indices
                .into_par_iter()
                .map(|idx| {
                    let member = solid_member_jet(dp, bw, idx);
                    let mut w = 0.0f64;
                    for &p in &pts {
                        let q = rev_basis_eval(&dp, &bw, &idx, p).expect("sampled in the interior");
                        let got = rev_diffop_apply(&dp, &bw, &member, p)
                            .expect("sampled above the operator floor");
                        w = w.max((got - lam * q).abs() / (lam * q).abs().max(1.0));
                    }
                    w
                })
                .collect::<Vec<f64>>()
                .into_iter()
                .fold(0.0f64, f64::max);
            pass &= worst <= r.tol;
            out_rows.push(vec![
                Field::Int(n as i64),
                Field::Float(lam),
                Field::Float(worst),
            ]);
        }
    }
    Ok((
        Report {
            columns: vec!["degree", "eigenvalue", "max_residual"],
            rows: out_rows,
        },
        pass,
    ))
}

/// Closed-form degree kernel against the orthonormal basis sum at seeded
/// point pairs, one row per degree.
pub fn cmd_kernel(r: &Resolved) -> Result<(Report, bool), Failure> {
    let mut out_rows = Vec::new();
    let mut pass = true;
    if r.dim == 2 {
        let (dp, wp) = planar_params(r)?;
        wp.spectral_valid()?;
        let norms = curved2d::q_norms(&dp, &wp, r.nmax).map_err(internal)?;
        let mut rng = sample::rng(r.seed);
        let pairs: Vec<([f64; 2], [f64; 2])> = (0..r.samples)
            .map(|_| {
                (
                    sample::planar_point(&mut rng, &dp),
                    sample::planar_point(&mut rng, &dp),
                )
            })
            .collect();
        for n in 0..=r.nmax {
            let worst = pairs
                .par_iter()
                .map(|&(p1, p2)| {
                    let closed = curved2d::curved_kernel_eval(&dp, &wp, n, p1, p2)
                        .expect("sampled in the interior");
                    let sum: f64 = (0..=n / 2)
                        .map(|j| {
                            curved2d::q_basis_eval(&dp, &wp, j, n, p1).expect("interior")
                                * curved2d::q_basis_eval(&dp, &wp, j, n, p2).expect("interior")
                                / (norms[n][j] * norms[n][j])
                        })
                        .sum();
                    (closed - sum).abs() / closed.abs().max(1.0)
                })
                .collect::<Vec<f64>>()
                .into_iter()
                .fold(0.0f64, f64::max);
            pass &= worst <= r.tol;
            out_rows.push(vec![Field::Int(n as i64), Field::Float(worst)]);
        }
    } else {
        let (dp, bw) = solid_params(r)?;
        if bw.beta != 0.0 {
            return Err(Failure::config(format!(
                "the closed kernel on the solid needs beta = 0; got beta = {}",
                bw.beta
            )));
        }
        let norms = rev_basis_norms(&dp, &bw, r.nmax).map_err(internal)?;
        let mut rng = sample::rng(r.seed);
        let pairs: Vec<([f64; 3], [f64; 3])> = (0..r.samples)
            .map(|_| {
                (
                    sample::solid_point(&mut rng, &dp),
                    sample::solid_point(&mut rng, &dp),
                )
            })
            .collect();
        for n in 0..=r.nmax {
            let worst = pairs
                .par_iter()
                .map(|&(p1, p2)| {
                    let closed = rev_kernel_eval(&dp, bw.gamma, n, p1, p2)
                        .expect("sampled in the interior");
                    let sum: f64 = norms[n]
                        .iter()
                        .map(|(idx, nrm)| {
                            rev_basis_eval(&dp, &bw, idx, p1).expect("interior")
                                * rev_basis_eval(&dp, &bw, idx, p2).expect("interior")
                                / (nrm * nrm)
                        })
                        .sum();
                    (closed - sum).abs() / closed.abs().max(1.0)
                })
                .collect::<Vec<f64>>()
                .into_iter()
                .fold(0.0f64, f64::max);
            pass &= worst <= r.tol;
            out_rows.push(vec![Field::Int(n as i64), Field::Float(worst)]);
        }
    }
    Ok((
        Report {
            columns: vec!["degree", "max_rel_dev"],
            rows: out_rows,
        },
        pass,
    ))
}

/// Kernel projection of every degree-n member back onto itself, evaluated
/// pointwise at seeded interior points; one row per degree.
pub fn cmd_project(r: &Resolved) -> Result<(Report, bool), Failure> {
    require_quad(r, 2 * r.nmax)?;
    let mut out_rows = Vec::new();
    let mut pass = true;
    if r.dim == 2 {
        let (dp, wp) = planar_params(r)?;
        wp.spectral_valid()?;
        let norms = curved2d::q_norms(&dp, &wp, r.nmax).map_err(internal)?;
        let rule = curved2d::lambda_quadrature(&dp, &wp, r.quad_degree).map_err(internal)?;
        let mut rng = sample::rng(r.seed);
        let pts: Vec<[f64; 2]> = (0..r.samples)
            .map(|_| sample::planar_point(&mut rng, &dp))
            .collect();
        let kernel = |n: usize, p1: [f64; 2], p2: [f64; 2]| {
            curved2d::curved_kernel_eval(&dp, &wp, n, p1, p2)
        };
        for n in 0..=r.nmax {
            let mut worst = 0.0f64;
            for j in 0..=n / 2 {
                let member = |pt: [f64; 2]| {
                    curved2d::q_basis_eval(&dp, &wp, j, n, pt).expect("node in domain")
                        / norms[n][j]
                };
                let devs: Vec<f64> = pts
                    .par_iter()
                    .map(|&p0| {
                        let got =
                            proj_even(&kernel, &member, n, &rule, p0).expect("resolved rule");
                        let expect = member(p0);
                        (got - expect).abs() / expect.abs().max(1.0)
                    })
                    .collect();
                worst = devs.into_iter().fold(worst, f64::max);
            }
            pass &= worst <= r.tol;
            out_rows.push(vec![Field::Int(n as i64), Field::Float(worst)]);
        }
    } else {
        let (dp, bw) = solid_params(r)?;
        if bw.beta != 0.0 {
            return Err(Failure::config(format!(
                "kernel projection on the solid needs beta = 0; got beta = {}",
                bw.beta
            )));
        }
        let norms = rev_basis_norms(&dp, &bw, r.nmax).map_err(internal)?;
        let rule = rev_quadrature(&dp, &bw, r.quad_degree).map_err(internal)?;
        let mass: f64 = rule.weights.iter().sum();
        let mut rng = sample::rng(r.seed);
        let pts: Vec<[f64; 3]> = (0..r.samples)
            .map(|_| sample::solid_point(&mut rng, &dp))
            .collect();
        for n in 0..=r.nmax {
            // Member values at the nodes are shared across evaluation points;
            // the kernel column is shared across members of the degree.
            let member_vals: Vec<Vec<f64>> = norms[n]
                .par_iter()
                .map(|(idx, nrm)| {
                    rule.nodes
                        .iter()
                        .map(|&node| {
                            rev_basis_eval(&dp, &bw, idx, node).expect("node in domain") / nrm
                        })
                        .collect()
                })
                .collect();
            let devs: Vec<f64> = pts
                .par_iter()
                .map(|&p0| {
                    let kcol: Vec<f64> = rule
                        .nodes
                        .iter()
                        .map(|&node| {
                            rev_kernel_eval(&dp, bw.gamma, n, p0, node).expect("interior")
                        })
                        .collect();
                    let mut worst = 0.0f64;
                    for ((idx, nrm), vals) in norms[n].iter().zip(&member_vals) {
                        let acc: f64 = kcol
                            .iter()
                            .zip(vals)
                            .zip(&rule.weights)
                            .map(|((k, v), w)| w * k * v)
                            .sum();
                        let got = acc / mass;
                        let expect =
                            rev_basis_eval(&dp, &bw, idx, p0).expect("interior") / nrm;
                        worst = worst.max((got - expect).abs() / expect.abs().max(1.0));
                    }
                    worst
                })
                .collect();
            let worst = devs.into_iter().fold(0.0f64, f64::max);
            pass &= worst <= r.tol;
            out_rows.push(vec![Field::Int(n as i64), Field::Float(worst)]);
        }
    }
    Ok((
        Report {
            columns: vec!["degree", "max_dev"],
            rows: out_rows,
        },
        pass,
    ))
}

/// Builds the target function for converge: a builtin by name, or a
/// tabulation covering every quadrature node.
fn resolve_target(
    r: &Resolved,
    nodes2: Option<&[[f64; 2]]>,
    nodes3: Option<&[[f64; 3]]>,
) -> Result<Box<dyn Fn(&[f64]) -> f64 + Sync>, Failure> {
    match r.f.as_str() {
        "builtin:expcos" => {
            if r.dim == 2 {
                Ok(Box::new(|p: &[f64]| p[0].exp() * (p[1] * p[1]).cos()))
            } else {
                Ok(Box::new(|p: &[f64]| p[0].exp() * (p[2] * p[2]).cos()))
            }
        }
        "builtin:poly" => {
            if r.dim == 2 {
                Ok(Box::new(|p: &[f64]| {
                    let (u, v) = (p[0], p[1]);
                    u * u * u - 0.7 * u * v * v + 0.2 * v * v * v * v + 0.3 * u + 1.0
                }))
            } else {
                Ok(Box::new(|p: &[f64]| {
                    let rho = p[0] * p[0] + p[1] * p[1];
                    let t = p[2];
                    rho * rho + t.powi(4) + p[0] * p[0] * t * t + 0.4 * p[1]
                        + 0.2 * p[0] * t * t
                        - 0.3
                }))
            }
        }
        "builtin:poly2" => {
            if r.dim == 2 {
                Ok(Box::new(|p: &[f64]| p[0] * p[0] + 2.0 * p[1] * p[1] - 0.5))
            } else {
                Ok(Box::new(|p: &[f64]| {
                    p[0] * p[0] + p[1] * p[1] - p[2] * p[2] + 0.25
                }))
            }
        }
        other => {
            let Some(path) = other.strip_prefix("table:") else {
                return Err(Failure::config(format!(
                    "--f must be builtin:expcos, builtin:poly, builtin:poly2, \
                     or table:PATH; got {other:?}"
                )));
            };
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::config(format!("cannot read table {path}: {e}")))?;
            let dim = r.dim as usize;
            let mut table: HashMap<[u64; 3], f64> = HashMap::new();
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = line
                    .split(|ch: char| ch == ',' || ch.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .collect();
                if fields.len() != dim + 1 {
                    return Err(Failure::config(format!(
                        "{path}:{}: expected {} numbers (coordinates then value), got {}",
                        lineno + 1,
                        dim + 1,
                        fields.len()
                    )));
                }
                let mut nums = [0.0f64; 4];
                for (i, s) in fields.iter().enumerate() {
                    nums[i] = s.parse::<f64>().map_err(|_| {
                        Failure::config(format!("{path}:{}: bad number {s:?}", lineno + 1))
                    })?;
                }
                let key = [
                    nums[0].to_bits(),
                    nums[1].to_bits(),
                    if dim == 3 { nums[2].to_bits() } else { 0 },
                ];
                table.insert(key, nums[dim]);
            }
            // Every quadrature node must be covered before the run starts.
            let mut missing = 0usize;
            let mut total = 0usize;
            if let Some(nodes) = nodes2 {
                for &[u, v] in nodes {
                    total += 1;
                    if !table.contains_key(&[u.to_bits(), v.to_bits(), 0]) {
                        missing += 1;
                    }
                }
            }
            if let Some(nodes) = nodes3 {
                for &[x1, x2, t] in nodes {
                    total += 1;
                    if !table.contains_key(&[x1.to_bits(), x2.to_bits(), t.to_bits()]) {
                        missing += 1;
                    }
                }
            }
            if missing > 0 {
                return Err(Failure::config(format!(
                    "table {path} misses {missing} of {total} quadrature nodes; \
                     generate the grid with --dump-grid and tabulate exactly \
                     those coordinates"
                )));
            }
            Ok(Box::new(move |p: &[f64]| {
                let key = [
                    p[0].to_bits(),
                    p[1].to_bits(),
                    if p.len() > 2 { p[2].to_bits() } else { 0 },
                ];
                *table.get(&key).expect("pre-validated grid coverage")
            }))
        }
    }
}

/// Expansion error decay: one row per degree with L² and sampled-sup
/// errors. Pass requires the L² column to decrease strictly until it hits
/// the rounding floor (1e-13); a finite --tol additionally bounds the
/// final L² error.
pub fn cmd_converge(r: &Resolved) -> Result<(Report, bool), Failure> {
    require_quad(r, 2 * r.nmax + 2)?;
    let (space, nodes2, nodes3): (Space, Option<Vec<[f64; 2]>>, Option<Vec<[f64; 3]>>) =
        if r.dim == 2 {
            let (dp, wp) = planar_params(r)?;
            let rule = curved2d::lambda_quadrature(&dp, &wp, r.quad_degree).map_err(internal)?;
            (Space::Planar { dp, wp }, Some(rule.nodes), None)
        } else {
            let (dp, bw) = solid_params(r)?;
            let rule = rev_quadrature(&dp, &bw, r.quad_degree).map_err(internal)?;
            (Space::Solid { dp, bw }, None, Some(rule.nodes))
        };

    if r.dump_grid {
        let (columns, rows): (Vec<&'static str>, Vec<Vec<Field>>) = match (&nodes2, &nodes3) {
            (Some(nodes), _) => (
                vec!["x1", "x2"],
                nodes
                    .iter()
                    .map(|&[u, v]| vec![Field::Float(u), Field::Float(v)])
                    .collect(),
            ),
            (_, Some(nodes)) => (
                vec!["x1", "x2", "t"],
                nodes
                    .iter()
                    .map(|&[x1, x2, t]| {
                        vec![Field::Float(x1), Field::Float(x2), Field::Float(t)]
                    })
                    .collect(),
            ),
            _ => unreachable!("one node set always exists"),
        };
        return Ok((Report { columns, rows }, true));
    }

    let f = resolve_target(r, nodes2.as_deref(), nodes3.as_deref())?;
    let report =
        convergence_report(&space, f.as_ref(), r.nmax, r.quad_degree).map_err(internal)?;

    // Verdict: errors must never grow while above the rounding floor (a
    // plateau is allowed — a function with no energy at some degree, e.g.
    // one with a parity symmetry, legitimately gains nothing there), the
    // run must end lower than it started, and a finite --tol bounds the
    // final error. The tiny relative slack absorbs last-ulp jitter.
    let mut pass = true;
    const FLOOR: f64 = 1e-13;
    for n in 0..r.nmax {
        if report.l2_errors[n] > FLOOR
            && report.l2_errors[n + 1] > report.l2_errors[n] * (1.0 + 1e-9)
        {
            pass = false;
        }
    }
    if report.l2_errors[0] > FLOOR {
        pass &= report.l2_errors[r.nmax] < report.l2_errors[0];
    }
    if r.tol.is_finite() {
        pass &= report.l2_errors[r.nmax] <= r.tol;
    }
    let rows = (0..=r.nmax)
        .map(|n| {
            vec![
                Field::Int(n as i64),
                Field::Float(report.l2_errors[n]),
                Field::Float(report.sup_errors[n]),
                Field::Float(report.decay_order),
            ]
        })
        .collect();
    Ok((
        Report {
            columns: vec!["degree", "l2_error", "sup_error", "decay_order"],
            rows,
        },
        pass,
    ))
}

/// Localized-kernel decay profile on the solid: one row per distance bin,
/// values normalized by the zero-distance bin. Pass requires the
/// first-to-last drop factor to reach --tol (default 100).
pub fn cmd_localize(r: &Resolved) -> Result<(Report, bool), Failure> {
    if r.dim != 3 {
        return Err(Failure::config(
            "localize profiles the solid kernel; it needs --dim 3",
        ));
    }
    let (dp, bw) = solid_params(r)?;
    if bw.beta != 0.0 {
        return Err(Failure::config(format!(
            "the localized kernel needs beta = 0; got beta = {}",
            bw.beta
        )));
    }
    let profile = localization_profile(&dp, bw.gamma, r.nmax, r.center, r.bins)?;
    let first = profile.l2_errors[0];
    let last = profile.l2_errors[r.bins - 1];
    let pass = r.bins == 1 || (last > 0.0 && first / last >= r.tol) || last == 0.0;
    let rows = (0..r.bins)
        .map(|i| {
            vec![
                Field::Int(i as i64),
                Field::Float(profile.sup_errors[i]),
                Field::Float(profile.l2_errors[i]),
                Field::Float(profile.decay_order),
            ]
        })
        .collect();
    Ok((
        Report {
            columns: vec!["bin", "upper_edge", "value", "decay_order"],
            rows,
        },
        pass,
    ))
}

/// Round-trip errors of the quadratic bijection over seeded samples, both
/// directions, one summary row.
pub fn cmd_mapcheck(r: &Resolved) -> Result<(Report, bool), Failure> {
    let worst = if r.dim == 2 {
        let (dp, _) = planar_params(r)?;
        let mut rng = sample::rng(r.seed);
        let pts: Vec<[f64; 2]> = (0..r.samples).map(|_| sample::half_disk_point(&mut rng)).collect();
        let errs: Vec<f64> = pts
            .par_iter()
            .map(|&y| {
                let p = curved2d::psi_inv(&dp, y).expect("sampled inside");
                let back = curved2d::psi(&dp, p).expect("mapped inside");
                let p2 = curved2d::psi_inv(&dp, back).expect("mapped inside");
                let mut e = 0.0f64;
                for k in 0..2 {
                    e = e.max((back[k] - y[k]).abs()).max((p2[k] - p[k]).abs());
                }
                e
            })
            .collect();
        errs.into_iter().fold(0.0f64, f64::max)
    } else {
        let (dp, _) = solid_params(r)?;
        let mut rng = sample::rng(r.seed);
        let pts: Vec<[f64; 3]> = (0..r.samples).map(|_| sample::half_ball_point(&mut rng)).collect();
        let errs: Vec<f64> = pts
            .par_iter()
            .map(|&y| {
                let p = rev_psi_inv(&dp, y).expect("sampled inside");
                let back = rev_psi(&dp, p).expect("mapped inside");
                let p2 = rev_psi_inv(&dp, back).expect("mapped inside");
                let mut e = 0.0f64;
                for k in 0..3 {
                    e = e.max((back[k] - y[k]).abs()).max((p2[k] - p[k]).abs());
                }
                e
            })
            .collect();
        errs.into_iter().fold(0.0f64, f64::max)
    };
    let pass = worst <= r.tol;
    Ok((
        Report {
            columns: vec!["samples", "max_roundtrip_error"],
            rows: vec![vec![Field::Int(r.samples as i64), Field::Float(worst)]],
        },
        pass,
    ))
}
