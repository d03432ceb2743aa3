//! Grid driver over (alpha, lambda, N, ansatz, layers), minimal-layer
//! determination, and resource-scaling fits.
//!
//! For each cell the layer count p climbs from 1 until the total
//! entanglement error stays at or below the threshold for two consecutive
//! p (one sub-threshold point can be an optimizer fluke) or until p_max.
//! Completed records persist immediately and are skipped on rerun, so an
//! interrupted sweep resumes where it stopped.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_ansatz, cnot_count, AnsatzKind};
use crate::entanglement::{entanglement_error, negativity_profile, NegativityProfile, PairStrategy};
use crate::error::{Error, Result};
use crate::exact::{dense_matrix, ground_state, GroundSolution};
use crate::model::{build_hamiltonian, ModelParams, SpinHamiltonian};
use crate::store::{ResultStore, RunKey};
use crate::vqe::{minimize, mix_seed, OptimizerConfig};

/// Fitted points with E(p) at or below this floor sit at numerical
/// precision and are excluded from log-linear fits.
pub const ERROR_FLOOR: f64 = 1e-12;

/// The full sweep plan. `optimizer.seed` is a placeholder: run_grid derives
/// every cell seed from `base_seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub sizes: Vec<usize>,
    pub kinds: Vec<AnsatzKind>,
    pub p_max: usize,
    pub threshold: f64,
    pub strategy: PairStrategy,
    pub optimizer: OptimizerConfig,
    pub base_seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty()
            || self.lambdas.is_empty()
            || self.sizes.is_empty()
            || self.kinds.is_empty()
        {
            return Err(Error::InvalidParameter(
                "sweep grid must not be empty".into(),
            ));
        }
        if self.threshold <= 0.0 {
            return Err(Error::InvalidParameter("threshold must be > 0".into()));
        }
        if self.p_max < 1 {
            return Err(Error::InvalidParameter("p_max must be >= 1".into()));
        }
        self.optimizer.validate()?;
        let min_sites = self
            .kinds
            .iter()
            .map(|k| k.min_sites())
            .max()
            .unwrap_or(2);
        for &n in &self.sizes {
            if n < min_sites || n > crate::exact::MAX_DENSE_SITES {
                return Err(Error::InvalidParameter(format!(
                    "size {n} outside supported range [{min_sites}, {}]",
                    crate::exact::MAX_DENSE_SITES
                )));
            }
        }
        Ok(())
    }

    /// Deterministic per-cell optimizer seed.
    pub fn cell_seed(&self, alpha: f64, lambda: f64, n: usize, kind: AnsatzKind, p: usize) -> u64 {
        mix_seed(&[
            self.base_seed,
            alpha.to_bits(),
            lambda.to_bits(),
            n as u64,
            kind as u64,
            p as u64,
        ])
    }
}

/// One persisted VQE outcome at a grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub alpha: f64,
    pub lambda: f64,
    pub n: usize,
    pub kind: AnsatzKind,
    pub p: usize,
    pub seed: u64,
    pub strategy: PairStrategy,
    pub energy: f64,
    pub exact_energy: f64,
    pub fidelity: f64,
    pub ent_error: f64,
    pub n_iters_best: usize,
    pub n_iters_mean: f64,
    pub converged: bool,
    pub wall_time_s: f64,
}

impl RunRecord {
    pub fn cell(&self) -> (f64, f64, usize, AnsatzKind) {
        (self.alpha, self.lambda, self.n, self.kind)
    }
}

/// Aggregate of one cell: minimal layers and resource totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    pub alpha: f64,
    pub lambda: f64,
    pub n: usize,
    pub kind: AnsatzKind,
    /// None when no crossing was measured and the fit slope is non-negative.
    pub p_star: Option<usize>,
    pub extrapolated: bool,
    pub fit_a: Option<f64>,
    pub fit_b: Option<f64>,
    pub fit_r2: Option<f64>,
    pub rq_total: Option<usize>,
    pub params_per_layer: usize,
    pub n_iter_avg: Option<f64>,
    pub rc_total: Option<f64>,
}

/// Minimal-layer verdict for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PStar {
    /// Measured threshold crossing confirmed by the following p.
    Measured(usize),
    /// Log-linear extrapolation beyond the measured data.
    Extrapolated(usize),
    /// The error does not decay; no p* exists.
    Failed,
}

/// Smallest measured p with E(p) <= threshold whose successor (if measured)
/// also satisfies it; otherwise the log-linear extrapolation, or Failed for
/// a non-decaying fit.
pub fn find_pstar(records: &[RunRecord], threshold: f64) -> Result<PStar> {
    if records.is_empty() {
        return Err(Error::InvalidParameter(
            "find_pstar needs at least one record".into(),
        ));
    }
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.p);
    for (idx, rec) in sorted.iter().enumerate() {
        if rec.p != idx + 1 {
            return Err(Error::InvalidParameter(format!(
                "records must cover contiguous p from 1 (hole at position {idx})"
            )));
        }
    }
    for (idx, rec) in sorted.iter().enumerate() {
        if rec.ent_error <= threshold {
            let confirmed = match sorted.get(idx + 1) {
                Some(next) => next.ent_error <= threshold,
                None => true,
            };
            if confirmed {
                return Ok(PStar::Measured(rec.p));
            }
        }
    }
    let points: Vec<(f64, f64)> = sorted.iter().map(|r| (r.p as f64, r.ent_error)).collect();
    match loglinear_fit(&points) {
        Ok((a, b, _)) if a < 0.0 => {
            let crossing = ((threshold.ln() - b) / a).ceil();
            Ok(PStar::Extrapolated(crossing.max(1.0) as usize))
        }
        _ => Ok(PStar::Failed),
    }
}

/// Ordinary least squares of ln E on p, returning (slope, intercept, r^2).
/// Points with E <= [`ERROR_FLOOR`] are excluded first.
pub fn loglinear_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, e)| *e > ERROR_FLOOR)
        .map(|&(p, e)| (p, e.ln()))
        .collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "log-linear fit needs >= 3 points above the floor, got {}",
            usable.len()
        )));
    }
    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|(x, _)| x).sum();
    let sy: f64 = usable.iter().map(|(_, y)| y).sum();
    let sxx: f64 = usable.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = usable.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Err(Error::InsufficientData(
            "degenerate abscissa in log-linear fit".into(),
        ));
    }
    let a = (n * sxy - sx * sy) / denom;
    let b = (sy - a * sx) / n;
    let mean = sy / n;
    let ss_tot: f64 = usable.iter().map(|(_, y)| (y - mean).powi(2)).sum();
    let ss_res: f64 = usable.iter().map(|(x, y)| (y - (a * x + b)).powi(2)).sum();
    let r2 = if ss_tot < 1e-30 {
        if ss_res < 1e-30 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok((a, b, r2))
}

/// Total two-qubit gate cost of the minimal circuit.
pub fn resource_quantum(kind: AnsatzKind, n: usize, p_star: usize) -> Result<usize> {
    cnot_count(kind, n, p_star)
}

/// Classical optimization cost `R_C = p* x L x n_I`.
pub fn resource_classical(p_star: usize, params_per_layer: usize, n_iter_avg: f64) -> f64 {
    p_star as f64 * params_per_layer as f64 * n_iter_avg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitQuantity {
    PStar,
    Rq,
    Rc,
}

impl FitQuantity {
    pub fn token(self) -> &'static str {
        match self {
            FitQuantity::PStar => "p_star",
            FitQuantity::Rq => "rq",
            FitQuantity::Rc => "rc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Linear,
    Quadratic,
}

impl FitModel {
    pub fn token(self) -> &'static str {
        match self {
            FitModel::Linear => "linear",
            FitModel::Quadratic => "quadratic",
        }
    }

    fn degree(self) -> usize {
        match self {
            FitModel::Linear => 1,
            FitModel::Quadratic => 2,
        }
    }
}

/// Polynomial fit `value = c2 N^2 + c1 N + c0` (c2 = 0 for linear).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyFit {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    pub r2: f64,
}

/// Least-squares fit of one scaling quantity against N over a record group.
/// Records without the quantity (failed cells) are skipped.
pub fn scaling_fits(
    records: &[ScalingRecord],
    quantity: FitQuantity,
    model: FitModel,
) -> Result<PolyFit> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| {
            let value = match quantity {
                FitQuantity::PStar => r.p_star.map(|p| p as f64),
                FitQuantity::Rq => r.rq_total.map(|q| q as f64),
                FitQuantity::Rc => r.rc_total,
            };
            value.map(|v| (r.n as f64, v))
        })
        .collect();
    polyfit(&points, model)
}

/// Plain polynomial least squares over (x, y) points.
pub fn polyfit(points: &[(f64, f64)], model: FitModel) -> Result<PolyFit> {
    let degree = model.degree();
    if points.len() < degree + 1 || points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} fit needs >= {} points, got {}",
            model.token(),
            (degree + 1).max(3),
            points.len()
        )));
    }
    let rows = points.len();
    let cols = degree + 1;
    let design = nalgebra::DMatrix::from_fn(rows, cols, |r, c| points[r].0.powi(c as i32));
    let rhs = nalgebra::DVector::from_iterator(rows, points.iter().map(|(_, y)| *y));
    let svd = design.svd(true, true);
    let coeffs = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::InsufficientData(format!("singular design matrix: {e}")))?;
    let eval = |x: f64| (0..cols).map(|c| coeffs[c] * x.powi(c as i32)).sum::<f64>();
    let mean = rhs.iter().sum::<f64>() / rows as f64;
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - mean).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|&(x, y)| (y - eval(x)).powi(2)).sum();
    let r2 = if ss_tot < 1e-30 {
        if ss_res < 1e-30 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(PolyFit {
        c2: if cols > 2 { coeffs[2] } else { 0.0 },
        c1: coeffs[1],
        c0: coeffs[0],
        r2,
    })
}

/// Exact data for one (alpha, lambda, N) point, shared across ansatz kinds.
pub struct ExactCell {
    pub params: ModelParams,
    pub ham: SpinHamiltonian,
    pub solution: GroundSolution,
    pub profile: NegativityProfile,
}

impl ExactCell {
    pub fn prepare(alpha: f64, lambda: f64, n: usize, strategy: PairStrategy) -> Result<Self> {
        let params = ModelParams::new(n, alpha, lambda)?;
        let ham = build_hamiltonian(&params);
        let solution = ground_state(&dense_matrix(&ham)?)?;
        let profile = negativity_profile(&solution.state, strategy)?;
        Ok(Self {
            params,
            ham,
            solution,
            profile,
        })
    }
}

/// Everything run_grid produced or recovered, plus how many runs were new.
pub struct SweepOutcome {
    pub records: Vec<RunRecord>,
    pub new_runs: usize,
}

/// Run one cell at one layer count: minimize, score the entanglement error,
/// time it.
fn run_one(
    cfg: &SweepConfig,
    exact: &ExactCell,
    kind: AnsatzKind,
    p: usize,
) -> Result<RunRecord> {
    let n = exact.params.n_sites;
    let spec = build_ansatz(kind, n, p)?;
    let seed = cfg.cell_seed(exact.params.alpha, exact.params.lambda, n, kind, p);
    let opt_cfg = OptimizerConfig {
        seed,
        ..cfg.optimizer
    };
    let start = Instant::now();
    let result = minimize(&spec, &exact.ham, &opt_cfg, &exact.solution)?;
    let trial_profile = negativity_profile(&result.state, cfg.strategy)?;
    let ent_error = entanglement_error(&trial_profile, &exact.profile)?;
    Ok(RunRecord {
        alpha: exact.params.alpha,
        lambda: exact.params.lambda,
        n,
        kind,
        p,
        seed,
        strategy: cfg.strategy,
        energy: result.energy,
        exact_energy: exact.solution.energy,
        fidelity: result.fidelity,
        ent_error,
        n_iters_best: result.n_iters,
        n_iters_mean: result.mean_restart_iters(),
        converged: result.converged,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Walk the whole grid. Cells run in parallel; within a cell, p climbs
/// sequentially until the stopping rule fires. Existing store records are
/// loaded instead of recomputed.
pub fn run_grid<F>(cfg: &SweepConfig, store: &ResultStore, on_record: F) -> Result<SweepOutcome>
where
    F: Fn(&RunRecord, bool) + Sync,
{
    cfg.validate()?;

    let mut exact_keys = Vec::new();
    for &alpha in &cfg.alphas {
        for &lambda in &cfg.lambdas {
            for &n in &cfg.sizes {
                exact_keys.push((alpha, lambda, n));
            }
        }
    }
    let exact_cells: HashMap<(u64, u64, usize), Arc<ExactCell>> = exact_keys
        .par_iter()
        .map(|&(alpha, lambda, n)| {
            let cell = ExactCell::prepare(alpha, lambda, n, cfg.strategy)?;
            Ok(((alpha.to_bits(), lambda.to_bits(), n), Arc::new(cell)))
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for &alpha in &cfg.alphas {
        for &lambda in &cfg.lambdas {
            for &n in &cfg.sizes {
                for &kind in &cfg.kinds {
                    cells.push((alpha, lambda, n, kind));
                }
            }
        }
    }

    let outcomes: Vec<(Vec<RunRecord>, usize)> = cells
        .par_iter()
        .map(|&(alpha, lambda, n, kind)| {
            let exact = &exact_cells[&(alpha.to_bits(), lambda.to_bits(), n)];
            let mut records = Vec::new();
            let mut new_runs = 0;
            let mut below_streak = 0usize;
            for p in 1..=cfg.p_max {
                let key = RunKey {
                    alpha,
                    lambda,
                    n,
                    kind,
                    p,
                    restarts: cfg.optimizer.restarts,
                };
                let (record, fresh) = if store.has_run(&key) {
                    (store.read_run(&key)?, false)
                } else {
                    let record = run_one(cfg, exact, kind, p)?;
                    store.write_run(&key, &record)?;
                    new_runs += 1;
                    (record, true)
                };
                on_record(&record, fresh);
                let below = record.ent_error <= cfg.threshold;
                records.push(record);
                below_streak = if below { below_streak + 1 } else { 0 };
                if below_streak >= 2 {
                    break;
                }
            }
            Ok((records, new_runs))
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    let mut new_runs = 0;
    for (cell_records, cell_new) in outcomes {
        records.extend(cell_records);
        new_runs += cell_new;
    }
    Ok(SweepOutcome { records, new_runs })
}

/// Group records by cell (sorted deterministically) and aggregate each into
/// a [`ScalingRecord`].
pub fn scaling_records(records: &[RunRecord], threshold: f64) -> Result<Vec<ScalingRecord>> {
    let mut groups: Vec<((u64, u64, usize, AnsatzKind), Vec<&RunRecord>)> = Vec::new();
    for rec in records {
        let key = (rec.alpha.to_bits(), rec.lambda.to_bits(), rec.n, rec.kind);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, bucket)) => bucket.push(rec),
            None => groups.push((key, vec![rec])),
        }
    }
    groups.sort_by(|(a, _), (b, _)| {
        f64::from_bits(a.0)
            .total_cmp(&f64::from_bits(b.0))
            .then(f64::from_bits(a.1).total_cmp(&f64::from_bits(b.1)))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let mut out = Vec::with_capacity(groups.len());
    for ((_, _, n, kind), mut bucket) in groups {
        bucket.sort_by_key(|r| r.p);
        let owned: Vec<RunRecord> = bucket.iter().map(|r| (*r).clone()).collect();
        let first = &owned[0];
        let points: Vec<(f64, f64)> = owned.iter().map(|r| (r.p as f64, r.ent_error)).collect();
        let fit = loglinear_fit(&points).ok();
        let verdict = find_pstar(&owned, threshold)?;
        let (p_star, extrapolated) = match verdict {
            PStar::Measured(p) => (Some(p), false),
            PStar::Extrapolated(p) => (Some(p), true),
            PStar::Failed => (None, false),
        };
        let params_per_layer = kind.params_per_layer(n);
        // Iteration average at p* when measured, else at the deepest
        // measured p (the closest available landscape).
        let n_iter_avg = p_star.map(|p| {
            owned
                .iter()
                .find(|r| r.p == p)
                .unwrap_or_else(|| owned.last().expect("non-empty bucket"))
                .n_iters_mean
        });
        let rq_total = match p_star {
            Some(p) => Some(resource_quantum(kind, n, p)?),
            None => None,
        };
        let rc_total = p_star
            .zip(n_iter_avg)
            .map(|(p, iters)| resource_classical(p, params_per_layer, iters));
        out.push(ScalingRecord {
            alpha: first.alpha,
            lambda: first.lambda,
            n,
            kind,
            p_star,
            extrapolated,
            fit_a: fit.map(|f| f.0),
            fit_b: fit.map(|f| f.1),
            fit_r2: fit.map(|f| f.2),
            rq_total,
            params_per_layer,
            n_iter_avg,
            rc_total,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn synthetic_records(errors: &[f64]) -> Vec<RunRecord> {
        errors
            .iter()
            .enumerate()
            .map(|(idx, &e)| RunRecord {
                alpha: 0.5,
                lambda: 0.5,
                n: 6,
                kind: AnsatzKind::NN,
                p: idx + 1,
                seed: 0,
                strategy: PairStrategy::Average,
                energy: -1.0,
                exact_energy: -1.0,
                fidelity: 1.0,
                ent_error: e,
                n_iters_best: 10,
                n_iters_mean: 10.0,
                converged: true,
                wall_time_s: 0.0,
            })
            .collect()
    }

    #[test]
    fn pstar_closed_form_decay() {
        // E(p) = exp(1 - 0.3 p): E(26) ~ 1.11e-3 > 1e-3, E(27) ~ 8.3e-4.
        let errors: Vec<f64> = (1..=40).map(|p| (1.0 - 0.3 * p as f64).exp()).collect();
        let records = synthetic_records(&errors);
        assert_eq!(
            find_pstar(&records, 1e-3).unwrap(),
            PStar::Measured(27)
        );
    }

    #[test]
    fn pstar_immediate() {
        let records = synthetic_records(&[1e-5, 1e-6, 1e-7]);
        assert_eq!(find_pstar(&records, 1e-3).unwrap(), PStar::Measured(1));
    }

    #[test]
    fn pstar_requires_confirmation() {
        // A single dip at p=2 is a fluke; the real crossing is at p=4.
        let records = synthetic_records(&[1e-1, 1e-4, 1e-2, 1e-4, 1e-5]);
        assert_eq!(find_pstar(&records, 1e-3).unwrap(), PStar::Measured(4));
    }

    #[test]
    fn pstar_extrapolates_decaying_tails() {
        // Clean exponential that never crosses within the data.
        let errors: Vec<f64> = (1..=10).map(|p| (1.0 - 0.3 * p as f64).exp()).collect();
        let records = synthetic_records(&errors);
        assert_eq!(
            find_pstar(&records, 1e-3).unwrap(),
            PStar::Extrapolated(27)
        );
    }

    #[test]
    fn pstar_fails_on_non_decaying_errors() {
        let records = synthetic_records(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(find_pstar(&records, 1e-3).unwrap(), PStar::Failed);
    }

    #[test]
    fn pstar_extrapolates_weak_decay() {
        // Slightly decaying but noisy data has a negative fitted slope, so
        // the verdict is a (large) extrapolation rather than failure.
        let records = synthetic_records(&[0.5, 0.52, 0.48, 0.51]);
        assert!(matches!(
            find_pstar(&records, 1e-3).unwrap(),
            PStar::Extrapolated(_)
        ));
    }

    #[test]
    fn pstar_rejects_gaps_and_empty() {
        assert!(find_pstar(&[], 1e-3).is_err());
        let mut records = synthetic_records(&[0.5, 0.4, 0.3]);
        records.remove(1);
        assert!(find_pstar(&records, 1e-3).is_err());
    }

    #[test]
    fn pstar_monotone_in_threshold() {
        let errors: Vec<f64> = (1..=60).map(|p| (0.5 - 0.25 * p as f64).exp()).collect();
        let records = synthetic_records(&errors);
        let mut last = usize::MAX;
        for threshold in [1e-4, 1e-3, 1e-2, 1e-1] {
            if let PStar::Measured(p) = find_pstar(&records, threshold).unwrap() {
                assert!(p <= last);
                last = p;
            } else {
                panic!("expected measured crossing");
            }
        }
    }

    #[test]
    fn loglinear_exact_recovery() {
        let points: Vec<(f64, f64)> = (1..=10)
            .map(|p| (p as f64, (-0.5 * p as f64 + 2.0).exp()))
            .collect();
        let (a, b, r2) = loglinear_fit(&points).unwrap();
        assert_relative_eq!(a, -0.5, epsilon = 1e-12);
        assert_relative_eq!(b, 2.0, epsilon = 1e-12);
        assert_relative_eq!(r2, 1.0, epsilon = 1e-12);

        let points = vec![
            (1.0, (-1.0f64).exp()),
            (2.0, (-2.0f64).exp()),
            (3.0, (-3.0f64).exp()),
        ];
        let (a, b, r2) = loglinear_fit(&points).unwrap();
        assert_relative_eq!(a, -1.0, epsilon = 1e-12);
        assert_relative_eq!(b, 0.0, epsilon = 1e-12);
        assert_relative_eq!(r2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn loglinear_excludes_floor_points() {
        let mut points: Vec<(f64, f64)> = (1..=5)
            .map(|p| (p as f64, (-1.0 * p as f64).exp()))
            .collect();
        points.push((6.0, 1e-15));
        points.push((7.0, 0.0));
        let (a, _, _) = loglinear_fit(&points).unwrap();
        assert_relative_eq!(a, -1.0, epsilon = 1e-12);

        let too_few = vec![(1.0, 0.5), (2.0, 1e-14), (3.0, 1e-15)];
        assert!(loglinear_fit(&too_few).is_err());
    }

    #[test]
    fn resource_formulas() {
        assert_eq!(resource_quantum(AnsatzKind::NN, 9, 34).unwrap(), 544);
        assert_eq!(resource_quantum(AnsatzKind::NNN, 9, 13).unwrap(), 572);
        assert_eq!(resource_quantum(AnsatzKind::NNNN, 9, 8).unwrap(), 640);
        assert_relative_eq!(resource_classical(34, 17, 100.0), 57800.0);
        assert_relative_eq!(resource_classical(1, 1, 1.0), 1.0);
    }

    #[test]
    fn polyfit_recovers_synthetic_lines() {
        let points: Vec<(f64, f64)> = (4..=9).map(|n| (n as f64, 5.6 * n as f64 + 1.0)).collect();
        let fit = polyfit(&points, FitModel::Linear).unwrap();
        assert_relative_eq!(fit.c1, 5.6, epsilon = 1e-9);
        assert_relative_eq!(fit.c0, 1.0, epsilon = 1e-9);
        assert_relative_eq!(fit.r2, 1.0, epsilon = 1e-12);
        assert_eq!(fit.c2, 0.0);

        let points: Vec<(f64, f64)> = (4..=9)
            .map(|n| {
                let x = n as f64;
                (x, 2216.0 * x * x - 3.0 * x + 7.0)
            })
            .collect();
        let fit = polyfit(&points, FitModel::Quadratic).unwrap();
        assert_relative_eq!(fit.c2, 2216.0, max_relative = 1e-9);
        assert_relative_eq!(fit.r2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn scaling_records_aggregate() {
        let errors = [1e-1, 1e-2, 5e-4, 2e-4];
        let records = synthetic_records(&errors);
        let scaling = scaling_records(&records, 1e-3).unwrap();
        assert_eq!(scaling.len(), 1);
        let rec = &scaling[0];
        assert_eq!(rec.p_star, Some(3));
        assert!(!rec.extrapolated);
        assert_eq!(rec.params_per_layer, 11);
        assert_eq!(rec.rq_total, Some(cnot_count(AnsatzKind::NN, 6, 3).unwrap()));
        assert_relative_eq!(rec.rc_total.unwrap(), 3.0 * 11.0 * 10.0);
    }
}
