//! Exact benchmarks: dense diagonalization of the spin Hamiltonian and the
//! free-fermion quasiparticle dispersion.
//!
//! Dense diagonalization is the validation oracle for every VQE run; the
//! dispersion is used only for critical-field diagnostics (the momentum form
//! assumes a translational invariance the open chain lacks).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::circuit::Statevector;
use crate::error::{Error, Result};
use crate::model::{couplings, ModelParams, SpinHamiltonian};

/// Largest chain dense diagonalization accepts (dim = 4096).
pub const MAX_DENSE_SITES: usize = 12;

/// Tolerance under which eigenvalues count as one degenerate ground space.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Dense real-symmetric realization of a spin Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<f64>,
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Largest |m - m^T| entry.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in i + 1..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst
    }

    /// <v|H|v> for a normalized real vector.
    pub fn quadratic_form(&self, v: &DVector<f64>) -> f64 {
        (v.transpose() * &self.matrix * v)[(0, 0)]
    }
}

/// Realize the term list as a dense matrix in the little-endian basis.
pub fn dense_matrix(ham: &SpinHamiltonian) -> Result<DenseOperator> {
    if ham.n_sites > MAX_DENSE_SITES {
        return Err(Error::Capacity(format!(
            "dense diagonalization supports at most {MAX_DENSE_SITES} sites, got {}",
            ham.n_sites
        )));
    }
    let dim = 1usize << ham.n_sites;
    let mut matrix = DMatrix::zeros(dim, dim);
    for term in &ham.terms {
        let xm = term.x_mask as usize;
        let zm = term.z_mask as usize;
        for col in 0..dim {
            let row = col ^ xm;
            let sign = if (col & zm).count_ones() & 1 == 1 {
                -1.0
            } else {
                1.0
            };
            matrix[(row, col)] += term.coeff * sign;
        }
    }
    Ok(DenseOperator { matrix })
}

/// Lowest eigenpair plus the degenerate ground space.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundSolution {
    pub energy: f64,
    pub state: Statevector,
    /// Distance to the next distinct eigenvalue (0 when none exists).
    pub gap: f64,
    /// Orthonormal basis of all eigenvectors within [`DEGENERACY_TOL`] of the
    /// ground energy; fidelities are measured against this span.
    pub space: Vec<Statevector>,
}

/// Fix the sign of a real eigenvector: the first amplitude of significant
/// magnitude is made positive.
fn sign_normalize(column: &mut DVector<f64>) {
    if let Some(first) = column.iter().find(|x| x.abs() > 1e-8) {
        if *first < 0.0 {
            for x in column.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Full symmetric eigendecomposition; deterministic tie-break inside a
/// degenerate ground space (largest-magnitude amplitude on the lowest basis
/// index, made real-positive).
pub fn ground_state(op: &DenseOperator) -> Result<GroundSolution> {
    if op.asymmetry() > 1e-12 {
        return Err(Error::ContractViolation(format!(
            "ground_state requires a symmetric matrix (max asymmetry {:.3e})",
            op.asymmetry()
        )));
    }
    let n_qubits = op.dim().trailing_zeros() as usize;
    let eig = op.matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..op.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let energy = eig.eigenvalues[order[0]];
    let degenerate: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&i| eig.eigenvalues[i] - energy <= DEGENERACY_TOL)
        .collect();
    let gap = order
        .iter()
        .map(|&i| eig.eigenvalues[i])
        .find(|&e| e - energy > DEGENERACY_TOL)
        .map(|e| e - energy)
        .unwrap_or(0.0);

    let mut space = Vec::with_capacity(degenerate.len());
    for &i in &degenerate {
        let mut col = DVector::from_column_slice(eig.eigenvectors.column(i).as_slice());
        sign_normalize(&mut col);
        space.push(Statevector::from_real_column(n_qubits, col.as_slice())?);
    }

    // Tie-break: scan basis indices from 0 for the first with a significant
    // amplitude in any degenerate vector, then take the vector maximizing it.
    let mut pick = 0;
    'scan: for idx in 0..op.dim() {
        let best = (0..space.len())
            .max_by(|&a, &b| {
                space[a].amps()[idx]
                    .norm()
                    .total_cmp(&space[b].amps()[idx].norm())
            })
            .unwrap();
        if space[best].amps()[idx].norm() > 1e-8 {
            pick = best;
            // Re-normalize the pick so this amplitude is real-positive.
            if space[pick].amps()[idx].re < 0.0 {
                let flipped: Vec<_> = space[pick].amps().iter().map(|a| -a).collect();
                space[pick] = Statevector::from_amps(n_qubits, flipped)?;
            }
            break 'scan;
        }
    }
    let state = space[pick].clone();

    Ok(GroundSolution {
        energy,
        state,
        gap,
        space,
    })
}

/// One Bogoliubov-de Gennes dispersion sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionPoint {
    pub k: f64,
    pub eps: f64,
    pub delta: f64,
    pub energy: f64,
}

/// Quasiparticle dispersion `E(k) = sqrt(eps_k^2 + delta_k^2)` with
/// `eps_k = h - sum_r J_r cos(kr)` and `delta_k = sum_r J_r sin(kr)`.
pub fn dispersion(params: &ModelParams, k: f64) -> DispersionPoint {
    let table = couplings(params);
    let h = params.field();
    let mut eps = h;
    let mut delta = 0.0;
    for (idx, j) in table.values().iter().enumerate() {
        let r = (idx + 1) as f64;
        eps -= j * (k * r).cos();
        delta += j * (k * r).sin();
    }
    DispersionPoint {
        k,
        eps,
        delta,
        energy: eps.hypot(delta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hamiltonian, PauliTerm};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn two_site_half_coupling() -> DenseOperator {
        let params = ModelParams::new(2, 0.0, 0.5).unwrap();
        dense_matrix(&build_hamiltonian(&params)).unwrap()
    }

    #[test]
    fn single_z_matrix() {
        let ham = SpinHamiltonian {
            n_sites: 1,
            terms: vec![PauliTerm::from_letters(1.0, "Z").unwrap()],
        };
        let op = dense_matrix(&ham).unwrap();
        assert_eq!(op.matrix()[(0, 0)], 1.0);
        assert_eq!(op.matrix()[(1, 1)], -1.0);
        assert_eq!(op.matrix()[(0, 1)], 0.0);
        assert_eq!(op.matrix()[(1, 0)], 0.0);
    }

    #[test]
    fn two_site_matrix_by_hand() {
        let op = two_site_half_coupling();
        let m = op.matrix();
        let want_diag = [2.0, 0.0, 0.0, -2.0];
        for (i, want) in want_diag.iter().enumerate() {
            assert_relative_eq!(m[(i, i)], want, epsilon = 1e-14);
        }
        assert_relative_eq!(m[(0, 3)], -0.5, epsilon = 1e-14);
        assert_relative_eq!(m[(3, 0)], -0.5, epsilon = 1e-14);
        assert_relative_eq!(m[(1, 2)], -0.5, epsilon = 1e-14);
        assert_relative_eq!(m[(2, 1)], -0.5, epsilon = 1e-14);
        assert_eq!(m[(0, 1)], 0.0);
        assert_eq!(m[(0, 2)], 0.0);
    }

    #[test]
    fn matrices_are_symmetric() {
        for (n, alpha, lambda) in [(3, 0.5, 1.0), (5, 1.5, 2.0), (6, 0.0, 0.5)] {
            let params = ModelParams::new(n, alpha, lambda).unwrap();
            let op = dense_matrix(&build_hamiltonian(&params)).unwrap();
            assert!(op.asymmetry() <= 1e-14);
        }
    }

    #[test]
    fn capacity_limit() {
        let ham = SpinHamiltonian {
            n_sites: 13,
            terms: vec![],
        };
        assert!(matches!(dense_matrix(&ham), Err(Error::Capacity(_))));
    }

    #[test]
    fn analytic_two_site_ground_energy() {
        let sol = ground_state(&two_site_half_coupling()).unwrap();
        assert_relative_eq!(sol.energy, -4.25f64.sqrt(), epsilon = 1e-10);
        assert!(sol.gap > 0.0);
    }

    #[test]
    fn pure_field_ground_state() {
        let params = ModelParams::new(4, 1.0, 0.0).unwrap();
        let op = dense_matrix(&build_hamiltonian(&params)).unwrap();
        let sol = ground_state(&op).unwrap();
        assert_relative_eq!(sol.energy, -4.0 * params.field(), epsilon = 1e-12);
        // All spins flipped: basis index 2^N - 1.
        assert_relative_eq!(sol.state.amps()[15].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigenpair_residuals() {
        for (n, alpha, lambda) in [(3, 0.5, 0.7), (5, 1.5, 1.0), (6, 0.0, 2.0), (4, 10.0, 1.3)] {
            let params = ModelParams::new(n, alpha, lambda).unwrap();
            let op = dense_matrix(&build_hamiltonian(&params)).unwrap();
            let sol = ground_state(&op).unwrap();
            let v = DVector::from_iterator(op.dim(), sol.state.amps().iter().map(|a| a.re));
            let residual = (op.matrix() * &v - sol.energy * &v).norm();
            assert!(residual <= 1e-9, "residual {residual} at n={n}");
            assert_relative_eq!(sol.state.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_vectors_never_beat_ground_energy() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for n in [3usize, 4] {
            let params = ModelParams::new(n, 0.5, 1.5).unwrap();
            let op = dense_matrix(&build_hamiltonian(&params)).unwrap();
            let sol = ground_state(&op).unwrap();
            let dim = op.dim();
            let mut best = f64::INFINITY;
            for _ in 0..100_000 {
                let mut v = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
                v /= v.norm();
                best = best.min(op.quadratic_form(&v));
            }
            assert!(best >= sol.energy - 1e-12);
            assert!(best.is_finite());
        }
    }

    #[test]
    fn ground_state_is_deterministic() {
        let params = ModelParams::new(5, 0.5, 2.0).unwrap();
        let op = dense_matrix(&build_hamiltonian(&params)).unwrap();
        let a = ground_state(&op).unwrap();
        let b = ground_state(&op).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.gap.to_bits(), b.gap.to_bits());
        for (x, y) in a.state.amps().iter().zip(b.state.amps()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        let op = DenseOperator::from_matrix(m);
        assert!(matches!(
            ground_state(&op),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn dispersion_examples() {
        let params = ModelParams::new(6, 0.5, 0.5).unwrap();
        let point = dispersion(&params, 0.0);
        assert_relative_eq!(point.delta, 0.0, epsilon = 1e-15);
        assert_relative_eq!(
            point.energy,
            params.field() * (1.0 - params.lambda).abs(),
            max_relative = 1e-12
        );

        let critical = ModelParams::new(6, 0.5, 1.0).unwrap();
        assert!(dispersion(&critical, 0.0).energy <= 1e-10);

        let two = ModelParams::new(2, 0.0, 2.0).unwrap();
        let point = dispersion(&two, std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(point.eps, 1.0, epsilon = 1e-12);
        assert_relative_eq!(point.delta, 2.0, epsilon = 1e-12);
        assert_relative_eq!(point.energy, 5.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn gap_minimum_sits_at_critical_coupling() {
        for n in [4usize, 6, 9] {
            for alpha in [0.5, 1.5, 10.0] {
                let energies: Vec<f64> = [0.5, 1.0, 2.0]
                    .iter()
                    .map(|&lambda| {
                        let p = ModelParams::new(n, alpha, lambda).unwrap();
                        dispersion(&p, 0.0).energy
                    })
                    .collect();
                assert!(energies[1] < energies[0]);
                assert!(energies[1] < energies[2]);
            }
        }
    }
}
