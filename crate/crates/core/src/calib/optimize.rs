//! Comass maximization over oriented k-planes.
//!
//! The objective w(F_1, .., F_k) is a degree-k polynomial in the entries of
//! an orthonormal frame F. Projected gradient ascent with a QR retraction
//! and backtracking line search is run from many random starts; restarts are
//! independent and run in parallel, and the reduction into the report is
//! order-fixed so results do not depend on the thread count.

use crate::error::{Error, Result};
use crate::exterior::{subsets, AltForm, Plane};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct OptimizerParams {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Frames whose value is within this distance of the best value are
    /// collected as maximizers.
    pub value_tol: f64,
    /// Planes closer than this largest principal angle (radians) are
    /// considered equal when deduplicating.
    pub dedup_angle: f64,
    pub seed: u64,
}

impl Default for OptimizerParams {
    fn default() -> Self {
        OptimizerParams {
            restarts: 200,
            max_iterations: 600,
            value_tol: 1e-7,
            dedup_angle: 1e-3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContactDiagnostics {
    pub restarts: usize,
    pub converged: usize,
    pub total_iterations: usize,
    pub deduplicated: usize,
}

/// Result of a comass search: the best value found, the deduplicated set of
/// maximizer planes, and convergence diagnostics.
#[derive(Debug, Clone)]
pub struct ContactReport {
    pub max_value: f64,
    pub maximizers: Vec<Plane>,
    pub diagnostics: ContactDiagnostics,
}

fn qr_retract(m: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..q.ncols() {
        if r[(c, c)] < 0.0 {
            for row in 0..q.nrows() {
                q[(row, c)] = -q[(row, c)];
            }
        }
    }
    q
}

/// Euclidean gradient of F -> w(F_1, .., F_k): entry (i, m) sums the
/// cofactors of the k x k minors the form contracts against.
fn euclidean_gradient(w: &AltForm, frame: &DMatrix<f64>, tuples: &[Vec<usize>]) -> DMatrix<f64> {
    let n = frame.nrows();
    let k = frame.ncols();
    let mut grad = DMatrix::zeros(n, k);
    let mut minor = DMatrix::zeros(k, k);
    let mut sub = DMatrix::zeros(k - 1, k - 1);
    for (pos, tuple) in tuples.iter().enumerate() {
        let c = w.coeffs()[pos];
        if c == 0.0 {
            continue;
        }
        for (r, &i) in tuple.iter().enumerate() {
            for col in 0..k {
                minor[(r, col)] = frame[(i, col)];
            }
        }
        // Cofactor expansion of det(minor) with respect to every entry.
        for r in 0..k {
            for col in 0..k {
                let mut sr = 0;
                for rr in 0..k {
                    if rr == r {
                        continue;
                    }
                    let mut sc = 0;
                    for cc in 0..k {
                        if cc == col {
                            continue;
                        }
                        sub[(sr, sc)] = minor[(rr, cc)];
                        sc += 1;
                    }
                    sr += 1;
                }
                let sign = if (r + col) % 2 == 0 { 1.0 } else { -1.0 };
                let cof = sign * sub.determinant();
                grad[(tuple[r], col)] += c * cof;
            }
        }
    }
    grad
}

fn objective(w: &AltForm, frame: &DMatrix<f64>, tuples: &[Vec<usize>]) -> f64 {
    let k = frame.ncols();
    let mut minor = DMatrix::zeros(k, k);
    let mut total = 0.0;
    for (pos, tuple) in tuples.iter().enumerate() {
        let c = w.coeffs()[pos];
        if c == 0.0 {
            continue;
        }
        for (r, &i) in tuple.iter().enumerate() {
            for col in 0..k {
                minor[(r, col)] = frame[(i, col)];
            }
        }
        total += c * minor.determinant();
    }
    total
}

struct RestartOutcome {
    frame: DMatrix<f64>,
    value: f64,
    converged: bool,
    iterations: usize,
}

fn run_restart(w: &AltForm, k: usize, tuples: &[Vec<usize>], seed: u64, index: u64, max_iter: usize) -> RestartOutcome {
    let n = w.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let start = DMatrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut frame = qr_retract(&start);
    let mut value = objective(w, &frame, tuples);
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let g = euclidean_gradient(w, &frame, tuples);
        // Project to the tangent space of the frame manifold.
        let ftg = frame.transpose() * &g;
        let sym = (&ftg + &ftg.transpose()) * 0.5;
        let rg = &g - &frame * sym;
        let gnorm2 = rg.norm_squared();
        if gnorm2 < 1e-24 {
            converged = true;
            break;
        }
        // Backtracking line search from a fixed initial step.
        let mut alpha = 0.1;
        let mut advanced = false;
        for _ in 0..40 {
            let candidate = qr_retract(&(&frame + &rg * alpha));
            let cval = objective(w, &candidate, tuples);
            if cval > value + 1e-4 * alpha * gnorm2 {
                let update = (&candidate - &frame).norm();
                frame = candidate;
                value = cval;
                advanced = true;
                if update < 1e-10 {
                    converged = true;
                }
                break;
            }
            alpha *= 0.5;
        }
        if !advanced {
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    RestartOutcome {
        frame,
        value,
        converged,
        iterations,
    }
}

/// Multi-start projected gradient ascent for the maximum of a degree-k form
/// over oriented orthonormal k-frames. Returns the best value, the
/// deduplicated maximizer planes (by largest principal angle), and
/// diagnostics; non-convergence of individual restarts is reported in the
/// diagnostics rather than as an error.
pub fn maximize(w: &AltForm, k: usize, params: &OptimizerParams) -> Result<ContactReport> {
    if k != w.degree() {
        return Err(Error::DegreeMismatch {
            expected: w.degree(),
            got: k,
        });
    }
    if k == 0 || k > w.dim() {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            dim: w.dim(),
        });
    }
    let tuples = subsets(w.dim(), k);
    let outcomes: Vec<RestartOutcome> = (0..params.restarts)
        .into_par_iter()
        .map(|i| run_restart(w, k, &tuples, params.seed, i as u64, params.max_iterations))
        .collect();

    let mut best = f64::NEG_INFINITY;
    for o in &outcomes {
        if o.value > best {
            best = o.value;
        }
    }
    let mut maximizers: Vec<Plane> = Vec::new();
    for o in &outcomes {
        if o.value < best - params.value_tol {
            continue;
        }
        let plane = Plane::new(o.frame.clone())?;
        let duplicate = maximizers
            .iter()
            .any(|p| p.principal_angle(&plane) < params.dedup_angle);
        if !duplicate {
            maximizers.push(plane);
        }
    }
    let diagnostics = ContactDiagnostics {
        restarts: params.restarts,
        converged: outcomes.iter().filter(|o| o.converged).count(),
        total_iterations: outcomes.iter().map(|o| o.iterations).sum(),
        deduplicated: maximizers.len(),
    };
    Ok(ContactReport {
        max_value: best,
        maximizers,
        diagnostics,
    })
}

/// Estimates the dimension of the maximizer set inside the Grassmannian.
/// Planes are embedded as projection matrices; around every maximizer the
/// differences to its 8 nearest neighbors are analyzed by principal
/// components, counting singular values of at least 10% of the largest, and
/// the modal local rank is returned. Requires at least 30 deduplicated
/// maximizers.
pub fn contact_dimension(report: &ContactReport) -> Result<usize> {
    const NEIGHBORS: usize = 8;
    const RANK_FRACTION: f64 = 0.1;
    let m = report.maximizers.len();
    if m < 30 {
        return Err(Error::TooFewMaximizers { got: m, need: 30 });
    }
    let points: Vec<DMatrix<f64>> = report.maximizers.iter().map(|p| p.projector()).collect();
    let mut rank_votes: Vec<usize> = Vec::with_capacity(m);
    for (i, base) in points.iter().enumerate() {
        let mut dists: Vec<(f64, usize)> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(j, p)| ((p - base).norm(), j))
            .collect();
        dists.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
        let k = NEIGHBORS.min(dists.len());
        let n2 = base.nrows() * base.ncols();
        let mut data = DMatrix::zeros(n2, k);
        for (col, (_, j)) in dists[..k].iter().enumerate() {
            let diff = &points[*j] - base;
            for (row, v) in diff.iter().enumerate() {
                data[(row, col)] = *v;
            }
        }
        let svd = data.svd(false, false);
        let s0 = svd.singular_values[0];
        if s0 == 0.0 {
            rank_votes.push(0);
            continue;
        }
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s >= RANK_FRACTION * s0)
            .count();
        rank_votes.push(rank);
    }
    // Modal vote.
    let max_rank = *rank_votes.iter().max().expect("nonempty");
    let mut counts = vec![0usize; max_rank + 1];
    for r in rank_votes {
        counts[r] += 1;
    }
    let mode = counts
        .iter()
        .enumerate()
        .max_by_key(|(_, c)| **c)
        .map(|(r, _)| r)
        .expect("nonempty");
    Ok(mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calib::{build_calibration, evaluate_on_plane, CalibrationKind};

    #[test]
    fn decomposable_form_has_unique_maximizer() {
        let w = AltForm::coordinate(8, &[0, 1, 2, 3]).unwrap();
        let params = OptimizerParams {
            restarts: 40,
            seed: 3,
            ..OptimizerParams::default()
        };
        let report = maximize(&w, 4, &params).unwrap();
        assert!((report.max_value - 1.0).abs() < 1e-8);
        assert_eq!(report.maximizers.len(), 1);
        let p = &report.maximizers[0];
        // The maximizer spans the first coordinate plane.
        for r in 4..8 {
            for c in 0..4 {
                assert!(p.frame()[(r, c)].abs() < 1e-6);
            }
        }
    }

    #[test]
    fn quaternionic_form_reaches_comass_one() {
        let w = build_calibration(CalibrationKind::PhiJ).unwrap();
        let params = OptimizerParams {
            restarts: 60,
            seed: 5,
            ..OptimizerParams::default()
        };
        let report = maximize(&w, 4, &params).unwrap();
        assert!(
            (report.max_value - 1.0).abs() < 1e-6,
            "max {}",
            report.max_value
        );
        // Every reported maximizer evaluates within tolerance of the max.
        for p in &report.maximizers {
            let v = evaluate_on_plane(&w, p).unwrap();
            assert!((v - report.max_value).abs() <= params.value_tol * 1.01);
        }
    }

    #[test]
    fn scaling_the_form_scales_the_maximum() {
        let w = build_calibration(CalibrationKind::PhiJ).unwrap().scale(2.0);
        let params = OptimizerParams {
            restarts: 40,
            seed: 6,
            ..OptimizerParams::default()
        };
        let report = maximize(&w, 4, &params).unwrap();
        assert!((report.max_value - 2.0).abs() < 2e-6);
    }

    #[test]
    fn maximizers_of_phi_j_are_right_invariant_planes() {
        let w = build_calibration(CalibrationKind::PhiJ).unwrap();
        let params = OptimizerParams {
            restarts: 60,
            seed: 7,
            ..OptimizerParams::default()
        };
        let report = maximize(&w, 4, &params).unwrap();
        let jt = crate::quat::right_triple(8).unwrap();
        let id = DMatrix::identity(8, 8);
        for plane in &report.maximizers {
            let p = plane.projector();
            for r in 0..3 {
                let leak = ((&id - &p) * jt.matrix(r) * &p).abs().max();
                assert!(leak < 1e-5, "maximizer not invariant: leak {leak}");
            }
        }
    }

    #[test]
    fn circle_contact_set_has_dimension_one() {
        let w = build_calibration(CalibrationKind::MixedIj).unwrap();
        let params = OptimizerParams {
            restarts: 220,
            seed: 8,
            ..OptimizerParams::default()
        };
        let report = maximize(&w, 4, &params).unwrap();
        assert!((report.max_value - 1.0).abs() < 1e-6);
        assert!(report.maximizers.len() >= 30);
        assert_eq!(contact_dimension(&report).unwrap(), 1);
    }

    #[test]
    fn too_few_maximizers_is_an_error() {
        let w = AltForm::coordinate(8, &[0, 1, 2, 3]).unwrap();
        let params = OptimizerParams {
            restarts: 40,
            seed: 9,
            ..OptimizerParams::default()
        };
        let report = maximize(&w, 4, &params).unwrap();
        assert!(matches!(
            contact_dimension(&report),
            Err(Error::TooFewMaximizers { .. })
        ));
    }
}
