//! Pairwise logarithmic negativity and distance-resolved entanglement
//! profiles — the ground-state success criterion.
//!
//! For a pair of sites the two-qubit reduced density matrix is partially
//! transposed on the first site and `E_N = log2 ||rho^{T_A}||_1` computed
//! from its Hermitian spectrum. The total entanglement error of a trial
//! state sums |E_N^exact - E_N^trial| over all pairwise distances.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::Statevector;
use crate::error::{Error, Result};

/// Values this close to zero (or below) report as exactly zero, so that
/// log-of-(1 + eps) noise cannot pollute converged error floors.
pub const NEGATIVITY_CLAMP: f64 = 1e-12;

/// Which pair represents a distance r on the open chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairStrategy {
    /// Mean over all N-r pairs at distance r.
    #[serde(rename = "average")]
    Average,
    /// The pair whose midpoint is closest to the chain center (lower site
    /// index on ties).
    #[serde(rename = "central")]
    Central,
    /// The pair starting at the first site.
    #[serde(rename = "first-pair")]
    FirstPair,
}

impl PairStrategy {
    pub fn token(self) -> &'static str {
        match self {
            PairStrategy::Average => "average",
            PairStrategy::Central => "central",
            PairStrategy::FirstPair => "first-pair",
        }
    }
}

impl std::str::FromStr for PairStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" => Ok(PairStrategy::Average),
            "central" => Ok(PairStrategy::Central),
            "first-pair" => Ok(PairStrategy::FirstPair),
            other => Err(Error::InvalidParameter(format!(
                "unknown pair strategy '{other}' (expected average, central or first-pair)"
            ))),
        }
    }
}

/// Two-site reduced density matrix over sites (i, j), basis |q_i q_j>.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    rho: Matrix4<Complex64>,
}

impl TwoQubitDensity {
    pub fn from_matrix(rho: Matrix4<Complex64>) -> Self {
        Self { rho }
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.rho[(r, c)] - self.rho[(c, r)].conj()).norm());
            }
        }
        worst
    }
}

/// Insert the pair bits (b_i at site i, b_j at site j) into a rest-index
/// carrying the remaining N-2 bits in ascending site order.
fn full_index(rest: usize, i: usize, j: usize, b_i: usize, b_j: usize) -> usize {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let low = rest & ((1 << lo) - 1);
    let mid = (rest >> lo) & ((1 << (hi - lo - 1)) - 1);
    let high = rest >> (hi - 1);
    let base = low | (mid << (lo + 1)) | (high << (hi + 1));
    base | (b_i << i) | (b_j << j)
}

/// Partial trace of |psi><psi| over every site except {i, j}.
pub fn reduced_density_two(psi: &Statevector, i: usize, j: usize) -> Result<TwoQubitDensity> {
    let n = psi.n_qubits();
    if i == j {
        return Err(Error::InvalidParameter(format!(
            "reduced density needs two distinct sites, got ({i}, {j})"
        )));
    }
    if i >= n || j >= n {
        return Err(Error::InvalidParameter(format!(
            "site out of range: ({i}, {j}) on {n} qubits"
        )));
    }
    let amps = psi.amps();
    let mut rho = Matrix4::zeros();
    let rest_dim = 1usize << (n - 2);
    for rest in 0..rest_dim {
        let idx = [
            full_index(rest, i, j, 0, 0),
            full_index(rest, i, j, 0, 1),
            full_index(rest, i, j, 1, 0),
            full_index(rest, i, j, 1, 1),
        ];
        for (row, &a) in idx.iter().enumerate() {
            for (col, &b) in idx.iter().enumerate() {
                rho[(row, col)] += amps[a] * amps[b].conj();
            }
        }
    }
    Ok(TwoQubitDensity { rho })
}

/// Logarithmic negativity `E_N = log2 ||rho^{T_A}||_1`, partial transpose on
/// the first qubit of the pair; the trace norm is the absolute eigenvalue
/// sum of the Hermitian partial transpose.
pub fn log_negativity(rho: &TwoQubitDensity) -> Result<f64> {
    if rho.hermiticity_defect() > 1e-10 {
        return Err(Error::ContractViolation(format!(
            "log_negativity requires a Hermitian matrix (defect {:.3e})",
            rho.hermiticity_defect()
        )));
    }
    let mut pt = Matrix4::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for ap in 0..2 {
                for bp in 0..2 {
                    pt[(2 * a + b, 2 * ap + bp)] = rho.rho[(2 * ap + b, 2 * a + bp)];
                }
            }
        }
    }
    // The partial transpose of a Hermitian matrix stays Hermitian.
    let trace_norm: f64 = pt.symmetric_eigen().eigenvalues.iter().map(|e| e.abs()).sum();
    let value = trace_norm.log2();
    if value < NEGATIVITY_CLAMP {
        Ok(0.0)
    } else {
        Ok(value)
    }
}

/// Distance-resolved negativity profile, values[r-1] = E_N at distance r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityProfile {
    pub values: Vec<f64>,
    pub strategy: PairStrategy,
}

impl NegativityProfile {
    pub fn distance(&self, r: usize) -> f64 {
        self.values[r - 1]
    }
}

/// Profile of a pure state under the given pair strategy.
pub fn negativity_profile(psi: &Statevector, strategy: PairStrategy) -> Result<NegativityProfile> {
    let n = psi.n_qubits();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "negativity profile needs at least two sites".into(),
        ));
    }
    let mut values = Vec::with_capacity(n - 1);
    for r in 1..n {
        let value = match strategy {
            PairStrategy::Average => {
                let mut sum = 0.0;
                for a in 0..n - r {
                    sum += log_negativity(&reduced_density_two(psi, a, a + r)?)?;
                }
                sum / (n - r) as f64
            }
            PairStrategy::Central => {
                // 1-based pair (i, i+r) has midpoint i + r/2; aim at (N+1)/2.
                let target = (n as f64 + 1.0) / 2.0;
                let mut best_a = 0;
                let mut best_dist = f64::INFINITY;
                for a in 0..n - r {
                    let midpoint = (a + 1) as f64 + r as f64 / 2.0;
                    let dist = (midpoint - target).abs();
                    if dist + 1e-12 < best_dist {
                        best_dist = dist;
                        best_a = a;
                    }
                }
                log_negativity(&reduced_density_two(psi, best_a, best_a + r)?)?
            }
            PairStrategy::FirstPair => log_negativity(&reduced_density_two(psi, 0, r)?)?,
        };
        values.push(value);
    }
    Ok(NegativityProfile { values, strategy })
}

/// Total absolute entanglement error between two profiles of equal shape.
pub fn entanglement_error(trial: &NegativityProfile, exact: &NegativityProfile) -> Result<f64> {
    if trial.values.len() != exact.values.len() {
        return Err(Error::InvalidParameter(format!(
            "profile lengths differ: {} vs {}",
            trial.values.len(),
            exact.values.len()
        )));
    }
    if trial.strategy != exact.strategy {
        return Err(Error::InvalidParameter(
            "profiles use different pair strategies".into(),
        ));
    }
    Ok(trial
        .values
        .iter()
        .zip(&exact.values)
        .map(|(a, b)| (a - b).abs())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_state(rng: &mut ChaCha12Rng, n: usize) -> Statevector {
        let dim = 1usize << n;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Statevector::from_amps(n, amps).unwrap()
    }

    fn bell_pair_with_spectator() -> Statevector {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::ZERO; 8];
        amps[0] = Complex64::new(inv, 0.0); // |000>
        amps[3] = Complex64::new(inv, 0.0); // |011>: qubits 0,1 set
        Statevector::from_amps(3, amps).unwrap()
    }

    fn ghz(n: usize) -> Statevector {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::new(inv, 0.0);
        amps[(1 << n) - 1] = Complex64::new(inv, 0.0);
        Statevector::from_amps(n, amps).unwrap()
    }

    /// Independent reduction: scan every full-index pair and keep those whose
    /// non-pair bits agree.
    fn reduced_by_projector(psi: &Statevector, i: usize, j: usize) -> Matrix4<Complex64> {
        let n = psi.n_qubits();
        let dim = 1usize << n;
        let pair_mask = (1usize << i) | (1usize << j);
        let mut rho = Matrix4::zeros();
        for a in 0..dim {
            for b in 0..dim {
                if a & !pair_mask != b & !pair_mask {
                    continue;
                }
                let row = (((a >> i) & 1) << 1) | ((a >> j) & 1);
                let col = (((b >> i) & 1) << 1) | ((b >> j) & 1);
                rho[(row, col)] += psi.amps()[a] * psi.amps()[b].conj();
            }
        }
        rho
    }

    #[test]
    fn product_state_reduction() {
        let psi = Statevector::computational_basis(3, 0);
        let rho = reduced_density_two(&psi, 0, 1).unwrap();
        assert_relative_eq!(rho.matrix()[(0, 0)].re, 1.0, epsilon = 1e-15);
        for k in 1..4 {
            assert!(rho.matrix()[(k, k)].norm() < 1e-15);
        }
    }

    #[test]
    fn spectator_qubit_carries_no_entanglement() {
        let psi = bell_pair_with_spectator();
        let rho = reduced_density_two(&psi, 0, 2).unwrap();
        let diag: Vec<f64> = (0..4).map(|k| rho.matrix()[(k, k)].re).collect();
        assert_relative_eq!(diag[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(diag[2], 0.5, epsilon = 1e-12);
        assert!(diag[1].abs() < 1e-12 && diag[3].abs() < 1e-12);
        assert_relative_eq!(log_negativity(&rho).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn same_site_rejected() {
        let psi = Statevector::computational_basis(3, 0);
        assert!(matches!(
            reduced_density_two(&psi, 1, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn reduction_matches_projector_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for n in 3..=5 {
            let psi = random_state(&mut rng, n);
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let fast = reduced_density_two(&psi, i, j).unwrap();
                    let slow = reduced_by_projector(&psi, i, j);
                    let dev = (fast.matrix() - slow)
                        .iter()
                        .map(|z| z.norm())
                        .fold(0.0, f64::max);
                    assert!(dev < 1e-12);
                    assert!(fast.hermiticity_defect() < 1e-12);
                    assert_relative_eq!(fast.trace().re, 1.0, epsilon = 1e-12);
                    let min_eig = fast
                        .matrix()
                        .symmetric_eigen()
                        .eigenvalues
                        .iter()
                        .cloned()
                        .fold(f64::INFINITY, f64::min);
                    assert!(min_eig >= -1e-10);
                }
            }
        }
    }

    #[test]
    fn bell_state_negativity_is_one() {
        let mut amps = vec![Complex64::ZERO; 4];
        amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[3] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = Statevector::from_amps(2, amps).unwrap();
        let rho = reduced_density_two(&psi, 0, 1).unwrap();
        assert_relative_eq!(log_negativity(&rho).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn werner_state_negativity() {
        let p = 2.0 / 3.0;
        let mut rho = Matrix4::<Complex64>::identity() * Complex64::new((1.0 - p) / 4.0, 0.0);
        let half = Complex64::new(p / 2.0, 0.0);
        rho[(0, 0)] += half;
        rho[(3, 3)] += half;
        rho[(0, 3)] += half;
        rho[(3, 0)] += half;
        let e_n = log_negativity(&TwoQubitDensity::from_matrix(rho)).unwrap();
        assert_relative_eq!(e_n, 1.5f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut rho = Matrix4::<Complex64>::zeros();
        rho[(0, 1)] = Complex64::ONE;
        assert!(matches!(
            log_negativity(&TwoQubitDensity::from_matrix(rho)),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn ghz_profile_vanishes() {
        for n in [4usize, 5] {
            for strategy in [
                PairStrategy::Average,
                PairStrategy::Central,
                PairStrategy::FirstPair,
            ] {
                let profile = negativity_profile(&ghz(n), strategy).unwrap();
                assert_eq!(profile.values.len(), n - 1);
                for v in &profile.values {
                    assert_eq!(*v, 0.0);
                }
            }
        }
    }

    #[test]
    fn profile_is_deterministic() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let psi = random_state(&mut rng, 5);
        let a = negativity_profile(&psi, PairStrategy::Average).unwrap();
        let b = negativity_profile(&psi, PairStrategy::Average).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn swap_symmetry() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let psi = random_state(&mut rng, 4);
        for (i, j) in [(0usize, 2usize), (1, 3), (0, 3)] {
            let a = log_negativity(&reduced_density_two(&psi, i, j).unwrap()).unwrap();
            let b = log_negativity(&reduced_density_two(&psi, j, i).unwrap()).unwrap();
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn local_unitaries_leave_negativity_unchanged() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let psi = random_state(&mut rng, 4);
        let before = log_negativity(&reduced_density_two(&psi, 1, 3).unwrap()).unwrap();
        // Random SU(2) on each of the pair sites via Euler angles
        // Rz(a) Rx(b) Rz(c), with Rx = H Rz H.
        let mut rotated = psi.clone();
        for q in [1usize, 3] {
            let (a, b, c) = (
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            );
            rotated.apply_rz(q, a);
            rotated.apply_h(q);
            rotated.apply_rz(q, b);
            rotated.apply_h(q);
            rotated.apply_rz(q, c);
        }
        let after = log_negativity(&reduced_density_two(&rotated, 1, 3).unwrap()).unwrap();
        assert_relative_eq!(before, after, epsilon = 1e-10);
    }

    #[test]
    fn negativity_stays_in_range() {
        let mut rng = ChaCha12Rng::seed_from_u64(53);
        for _ in 0..20 {
            let psi = random_state(&mut rng, 4);
            let profile = negativity_profile(&psi, PairStrategy::Average).unwrap();
            for v in &profile.values {
                assert!(*v >= 0.0 && *v <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn error_examples() {
        let ed = NegativityProfile {
            values: vec![0.5, 0.2],
            strategy: PairStrategy::Average,
        };
        let vqe = NegativityProfile {
            values: vec![0.4, 0.25],
            strategy: PairStrategy::Average,
        };
        assert_relative_eq!(entanglement_error(&vqe, &ed).unwrap(), 0.15, epsilon = 1e-15);
        assert_eq!(entanglement_error(&ed, &ed).unwrap(), 0.0);

        let short = NegativityProfile {
            values: vec![0.4],
            strategy: PairStrategy::Average,
        };
        assert!(entanglement_error(&short, &ed).is_err());
        let other = NegativityProfile {
            values: vec![0.4, 0.25],
            strategy: PairStrategy::Central,
        };
        assert!(entanglement_error(&other, &ed).is_err());
    }

    #[test]
    fn error_satisfies_triangle_inequality() {
        let mut rng = ChaCha12Rng::seed_from_u64(61);
        for _ in 0..50 {
            let mk = |rng: &mut ChaCha12Rng| NegativityProfile {
                values: (0..5).map(|_| rng.gen_range(0.0..1.0)).collect(),
                strategy: PairStrategy::Average,
            };
            let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let ac = entanglement_error(&a, &c).unwrap();
            let ab = entanglement_error(&a, &b).unwrap();
            let bc = entanglement_error(&b, &c).unwrap();
            assert!(ac <= ab + bc + 1e-12);
        }
    }
}
