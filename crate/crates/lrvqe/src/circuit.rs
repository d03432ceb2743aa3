//! Statevector engine and the three structure-aware ansatz families.
//!
//! Amplitudes are little-endian: qubit `q` is bit `q` of the basis index.
//! Gates act in place through bit-indexed strides; no dense circuit matrix
//! is ever formed. Each entangling block implements `exp(-i theta P)` for a
//! Pauli string P in {XX, XZX, XZZX}; the equivalent {H, CNOT, RZ} template
//! is available through [`AnsatzSpec::gate_template`] and is checked against
//! the closed form by the decomposition oracle tests.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pure state of an N-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Basis state |index> on `n_qubits` qubits.
    pub fn computational_basis(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits >= 1 && n_qubits <= 30, "unsupported qubit count");
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index out of range");
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Self { n_qubits, amps }
    }

    pub fn from_amps(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n_qubits {
            return Err(Error::InvalidParameter(format!(
                "amplitude vector of length {} does not match {} qubits",
                amps.len(),
                n_qubits
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn from_real_column(n_qubits: usize, column: &[f64]) -> Result<Self> {
        Self::from_amps(
            n_qubits,
            column.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self|other>
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_h(&mut self, q: usize) {
        let mask = 1usize << q;
        let half = self.amps.len() >> 1;
        for g in 0..half {
            let i0 = ((g & !(mask - 1)) << 1) | (g & (mask - 1));
            let i1 = i0 | mask;
            let a = self.amps[i0];
            let b = self.amps[i1];
            self.amps[i0] = (a + b) * FRAC_1_SQRT_2;
            self.amps[i1] = (a - b) * FRAC_1_SQRT_2;
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        let mask = 1usize << q;
        let half = self.amps.len() >> 1;
        for g in 0..half {
            let i0 = ((g & !(mask - 1)) << 1) | (g & (mask - 1));
            self.amps.swap(i0, i0 | mask);
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert_ne!(control, target);
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }

    /// RZ(phi) = diag(exp(-i phi/2), exp(+i phi/2)) on qubit `q`.
    pub fn apply_rz(&mut self, q: usize, phi: f64) {
        let mask = 1usize << q;
        let minus = Complex64::from_polar(1.0, -phi / 2.0);
        let plus = Complex64::from_polar(1.0, phi / 2.0);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            *amp *= if i & mask == 0 { minus } else { plus };
        }
    }

    /// exp(-i theta P) for the Pauli string with the given X/Z supports
    /// (disjoint). Valid because P^2 = I: the action is
    /// cos(theta) I - i sin(theta) P applied in a single pass.
    pub fn apply_pauli_rotation(&mut self, theta: f64, x_mask: u64, z_mask: u64) {
        debug_assert_eq!(x_mask & z_mask, 0);
        let c = theta.cos();
        let s = theta.sin();
        let ims = Complex64::new(0.0, -s);
        if x_mask == 0 {
            let zm = z_mask as usize;
            let phase_plus = Complex64::new(c, -s);
            let phase_minus = Complex64::new(c, s);
            for (i, amp) in self.amps.iter_mut().enumerate() {
                let sign_neg = (i & zm).count_ones() & 1 == 1;
                *amp *= if sign_neg { phase_minus } else { phase_plus };
            }
            return;
        }
        let xm = x_mask as usize;
        let zm = z_mask as usize;
        // Visit each (i, i^x) pair once: pivot on the highest X bit.
        let pivot = 1usize << (usize::BITS - 1 - xm.leading_zeros());
        for i in 0..self.amps.len() {
            if i & pivot != 0 {
                continue;
            }
            let j = i ^ xm;
            let sigma = if (i & zm).count_ones() & 1 == 1 {
                -1.0
            } else {
                1.0
            };
            let ai = self.amps[i];
            let aj = self.amps[j];
            self.amps[i] = c * ai + ims * sigma * aj;
            self.amps[j] = c * aj + ims * sigma * ai;
        }
    }
}

/// The three entangling-range families.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AnsatzKind {
    #[serde(rename = "nn")]
    NN,
    #[serde(rename = "nnn")]
    NNN,
    #[serde(rename = "nnnn")]
    NNNN,
}

impl AnsatzKind {
    pub const ALL: [AnsatzKind; 3] = [AnsatzKind::NN, AnsatzKind::NNN, AnsatzKind::NNNN];

    /// Smallest chain the family fits on.
    pub fn min_sites(self) -> usize {
        match self {
            AnsatzKind::NN => 2,
            AnsatzKind::NNN => 3,
            AnsatzKind::NNNN => 4,
        }
    }

    pub fn cnots_per_layer(self, n_qubits: usize) -> usize {
        let n = n_qubits;
        match self {
            AnsatzKind::NN => 2 * (n - 1),
            AnsatzKind::NNN => 2 * (3 * n - 5),
            AnsatzKind::NNNN => 4 * (3 * n - 7),
        }
    }

    pub fn params_per_layer(self, n_qubits: usize) -> usize {
        let n = n_qubits;
        match self {
            AnsatzKind::NN => 2 * n - 1,
            AnsatzKind::NNN => 3 * (n - 1),
            AnsatzKind::NNNN => 2 * (2 * n - 3),
        }
    }

    /// Lowercase token used in file names and on the command line.
    pub fn token(self) -> &'static str {
        match self {
            AnsatzKind::NN => "nn",
            AnsatzKind::NNN => "nnn",
            AnsatzKind::NNNN => "nnnn",
        }
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AnsatzKind::NN => "NN",
            AnsatzKind::NNN => "NNN",
            AnsatzKind::NNNN => "NNNN",
        };
        f.write_str(s)
    }
}

impl FromStr for AnsatzKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nn" => Ok(AnsatzKind::NN),
            "nnn" => Ok(AnsatzKind::NNN),
            "nnnn" => Ok(AnsatzKind::NNNN),
            other => Err(Error::InvalidParameter(format!(
                "unknown ansatz kind '{other}' (expected nn, nnn or nnnn)"
            ))),
        }
    }
}

/// Entangling block families and their Pauli strings.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    XX,
    XZX,
    XZZX,
}

impl BlockKind {
    pub fn arity(self) -> usize {
        match self {
            BlockKind::XX => 2,
            BlockKind::XZX => 3,
            BlockKind::XZZX => 4,
        }
    }

    pub fn cnots(self) -> usize {
        match self {
            BlockKind::XX => 2,
            BlockKind::XZX => 4,
            BlockKind::XZZX => 6,
        }
    }

    /// (x_mask, z_mask) of the block Pauli string, in block-local qubits.
    pub fn local_masks(self) -> (u64, u64) {
        match self {
            BlockKind::XX => (0b11, 0),
            BlockKind::XZX => (0b101, 0b010),
            BlockKind::XZZX => (0b1001, 0b0110),
        }
    }
}

/// Primitive gate of the hardware-level template. The RZ angle is
/// `mult * theta[slot]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Cnot { control: usize, target: usize },
    Rz { qubit: usize, slot: usize, mult: f64 },
}

/// One logical operation of a layer: an entangling block or a local phase
/// rotation, each drawing its angle from a parameter slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnsatzOp {
    Entangler {
        block: BlockKind,
        start: usize,
        slot: usize,
    },
    Rotation {
        qubit: usize,
        slot: usize,
    },
}

/// A fully laid-out ansatz: `layers` repetitions of the per-layer template.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzSpec {
    pub kind: AnsatzKind,
    pub n_qubits: usize,
    pub layers: usize,
    pub params_per_layer: usize,
    pub total_params: usize,
    ops: Vec<AnsatzOp>,
}

impl AnsatzSpec {
    pub fn ops(&self) -> &[AnsatzOp] {
        &self.ops
    }

    /// Expand the layer ops into the primitive {H, CNOT, RZ} template.
    pub fn gate_template(&self) -> Vec<Gate> {
        let mut gates = Vec::new();
        for op in &self.ops {
            match *op {
                AnsatzOp::Entangler { block, start, slot } => {
                    gates.extend(block_template(block, start, slot));
                }
                AnsatzOp::Rotation { qubit, slot } => {
                    gates.push(Gate::Rz {
                        qubit,
                        slot,
                        mult: 1.0,
                    });
                }
            }
        }
        gates
    }

    pub fn cnot_total(&self) -> usize {
        self.layers * self.kind.cnots_per_layer(self.n_qubits)
    }
}

fn check_ansatz_args(kind: AnsatzKind, n_qubits: usize, layers: usize) -> Result<()> {
    if n_qubits < kind.min_sites() {
        return Err(Error::InvalidParameter(format!(
            "{kind} ansatz needs at least {} qubits, got {n_qubits}",
            kind.min_sites()
        )));
    }
    if n_qubits > 30 {
        return Err(Error::InvalidParameter(format!(
            "statevector engine supports at most 30 qubits, got {n_qubits}"
        )));
    }
    if layers == 0 {
        return Err(Error::InvalidParameter("layers must be >= 1".into()));
    }
    Ok(())
}

/// Lay out the ansatz. Within each layer the blocks run in ascending site
/// order, families in the order XX -> XZX -> XZZX, followed by an RZ on
/// every qubit; parameter slots are allocated in the same order.
pub fn build_ansatz(kind: AnsatzKind, n_qubits: usize, layers: usize) -> Result<AnsatzSpec> {
    check_ansatz_args(kind, n_qubits, layers)?;
    let n = n_qubits;
    let mut ops = Vec::new();
    let mut slot = 0;
    for _ in 0..layers {
        for start in 0..n - 1 {
            ops.push(AnsatzOp::Entangler {
                block: BlockKind::XX,
                start,
                slot,
            });
            slot += 1;
        }
        if kind != AnsatzKind::NN {
            for start in 0..n - 2 {
                ops.push(AnsatzOp::Entangler {
                    block: BlockKind::XZX,
                    start,
                    slot,
                });
                slot += 1;
            }
        }
        if kind == AnsatzKind::NNNN {
            for start in 0..n - 3 {
                ops.push(AnsatzOp::Entangler {
                    block: BlockKind::XZZX,
                    start,
                    slot,
                });
                slot += 1;
            }
        }
        for qubit in 0..n {
            ops.push(AnsatzOp::Rotation { qubit, slot });
            slot += 1;
        }
    }
    let params_per_layer = kind.params_per_layer(n);
    debug_assert_eq!(slot, layers * params_per_layer);
    Ok(AnsatzSpec {
        kind,
        n_qubits,
        layers,
        params_per_layer,
        total_params: slot,
        ops,
    })
}

/// Total CNOT count of a `layers`-deep circuit.
pub fn cnot_count(kind: AnsatzKind, n_qubits: usize, layers: usize) -> Result<usize> {
    check_ansatz_args(kind, n_qubits, layers)?;
    Ok(layers * kind.cnots_per_layer(n_qubits))
}

/// Total variational parameter count of a `layers`-deep circuit.
pub fn param_count(kind: AnsatzKind, n_qubits: usize, layers: usize) -> Result<usize> {
    check_ansatz_args(kind, n_qubits, layers)?;
    Ok(layers * kind.params_per_layer(n_qubits))
}

/// Parity-sector initial state: |0...0> for even N, |1...1> for odd N.
pub fn initial_state(n_qubits: usize) -> Statevector {
    let index = if n_qubits % 2 == 0 {
        0
    } else {
        (1usize << n_qubits) - 1
    };
    Statevector::computational_basis(n_qubits, index)
}

/// Primitive-gate decomposition of one entangling block anchored at `start`:
/// H on the end qubits, a CNOT staircase onto the last qubit, RZ(2 theta)
/// there, and the mirror image back out.
pub fn block_template(block: BlockKind, start: usize, slot: usize) -> Vec<Gate> {
    let k = block.arity();
    let last = start + k - 1;
    let mut gates = vec![Gate::H(start), Gate::H(last)];
    for q in start..last {
        gates.push(Gate::Cnot {
            control: q,
            target: q + 1,
        });
    }
    gates.push(Gate::Rz {
        qubit: last,
        slot,
        mult: 2.0,
    });
    for q in (start..last).rev() {
        gates.push(Gate::Cnot {
            control: q,
            target: q + 1,
        });
    }
    gates.push(Gate::H(start));
    gates.push(Gate::H(last));
    gates
}

/// Apply one primitive gate, reading its angle from `theta`.
pub fn apply_gate(state: &mut Statevector, gate: &Gate, theta: &[f64]) {
    match *gate {
        Gate::H(q) => state.apply_h(q),
        Gate::X(q) => state.apply_x(q),
        Gate::Cnot { control, target } => state.apply_cnot(control, target),
        Gate::Rz { qubit, slot, mult } => state.apply_rz(qubit, mult * theta[slot]),
    }
}

/// Run the whole circuit on `init`, left to right.
pub fn apply_circuit(spec: &AnsatzSpec, theta: &[f64], init: &Statevector) -> Result<Statevector> {
    if theta.len() != spec.total_params {
        return Err(Error::InvalidParameter(format!(
            "expected {} parameters, got {}",
            spec.total_params,
            theta.len()
        )));
    }
    if init.n_qubits() != spec.n_qubits {
        return Err(Error::InvalidParameter(format!(
            "initial state has {} qubits, ansatz has {}",
            init.n_qubits(),
            spec.n_qubits
        )));
    }
    let mut state = init.clone();
    apply_ops(spec, theta, &mut state, false);
    Ok(state)
}

/// Apply the layer ops in place; `inverse` runs them right-to-left with
/// negated angles.
pub(crate) fn apply_ops(spec: &AnsatzSpec, theta: &[f64], state: &mut Statevector, inverse: bool) {
    let sign = if inverse { -1.0 } else { 1.0 };
    let mut one_op = |op: &AnsatzOp| match *op {
        AnsatzOp::Entangler { block, start, slot } => {
            let (x, z) = block.local_masks();
            state.apply_pauli_rotation(sign * theta[slot], x << start, z << start);
        }
        AnsatzOp::Rotation { qubit, slot } => {
            state.apply_rz(qubit, sign * theta[slot]);
        }
    };
    if inverse {
        for op in spec.ops.iter().rev() {
            one_op(op);
        }
    } else {
        for op in spec.ops.iter() {
            one_op(op);
        }
    }
}

/// Closed-form block unitary cos(theta) I - i sin(theta) P on the block's
/// own qubits; the reference oracle for the gate decomposition.
pub fn block_unitary(block: BlockKind, theta: f64) -> DMatrix<Complex64> {
    let k = block.arity();
    let dim = 1usize << k;
    let (x_mask, z_mask) = block.local_masks();
    let xm = x_mask as usize;
    let zm = z_mask as usize;
    let c = Complex64::new(theta.cos(), 0.0);
    let ims = Complex64::new(0.0, -theta.sin());
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        m[(col, col)] += c;
        let row = col ^ xm;
        let sigma = if (col & zm).count_ones() & 1 == 1 {
            -1.0
        } else {
            1.0
        };
        m[(row, col)] += ims * sigma;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_theta(rng: &mut ChaCha12Rng, len: usize) -> Vec<f64> {
        (0..len)
            .map(|_| rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI))
            .collect()
    }

    /// Dense unitary of a gate sequence, built column by column through the
    /// statevector engine.
    fn template_unitary(gates: &[Gate], theta: &[f64], n_qubits: usize) -> DMatrix<Complex64> {
        let dim = 1usize << n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut state = Statevector::computational_basis(n_qubits, col);
            for gate in gates {
                apply_gate(&mut state, gate, theta);
            }
            for row in 0..dim {
                m[(row, col)] = state.amps()[row];
            }
        }
        m
    }

    #[test]
    fn initial_state_even_odd() {
        let even = initial_state(4);
        assert_eq!(even.amps()[0], Complex64::ONE);
        let odd = initial_state(5);
        assert_eq!(odd.amps()[31], Complex64::ONE);
        assert_relative_eq!(initial_state(2).norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn little_endian_convention() {
        let mut state = Statevector::computational_basis(3, 0);
        state.apply_x(0);
        assert_eq!(state.amps()[1], Complex64::ONE);
    }

    #[test]
    fn table_counts() {
        assert_eq!(cnot_count(AnsatzKind::NN, 4, 1).unwrap(), 6);
        assert_eq!(param_count(AnsatzKind::NN, 4, 1).unwrap(), 7);
        assert_eq!(cnot_count(AnsatzKind::NNN, 4, 1).unwrap(), 14);
        assert_eq!(param_count(AnsatzKind::NNN, 4, 1).unwrap(), 9);
        assert_eq!(cnot_count(AnsatzKind::NNNN, 9, 8).unwrap(), 640);
        assert_eq!(cnot_count(AnsatzKind::NN, 9, 34).unwrap(), 544);
        assert_eq!(cnot_count(AnsatzKind::NNN, 9, 13).unwrap(), 572);
        assert_eq!(cnot_count(AnsatzKind::NN, 2, 1).unwrap(), 2);
        assert_eq!(param_count(AnsatzKind::NN, 9, 1).unwrap(), 17);
        assert_eq!(param_count(AnsatzKind::NNNN, 9, 1).unwrap(), 30);
        assert_eq!(param_count(AnsatzKind::NNN, 4, 2).unwrap(), 18);
    }

    #[test]
    fn ansatz_size_validation() {
        assert!(build_ansatz(AnsatzKind::NNNN, 3, 1).is_err());
        assert!(build_ansatz(AnsatzKind::NNN, 2, 1).is_err());
        assert!(build_ansatz(AnsatzKind::NN, 4, 0).is_err());
    }

    #[test]
    fn gate_census_matches_closed_form() {
        for kind in AnsatzKind::ALL {
            for n in 4..=12 {
                for layers in [1, 2, 7, 33, 60] {
                    let spec = build_ansatz(kind, n, layers).unwrap();
                    let cnots = spec
                        .gate_template()
                        .iter()
                        .filter(|g| matches!(g, Gate::Cnot { .. }))
                        .count();
                    assert_eq!(cnots, cnot_count(kind, n, layers).unwrap());
                    assert_eq!(spec.total_params, param_count(kind, n, layers).unwrap());
                }
            }
        }
    }

    #[test]
    fn slot_coverage_and_multipliers() {
        let spec = build_ansatz(AnsatzKind::NNNN, 5, 3).unwrap();
        let mut mults: Vec<Vec<f64>> = vec![Vec::new(); spec.total_params];
        for gate in spec.gate_template() {
            if let Gate::Rz { slot, mult, .. } = gate {
                mults[slot].push(mult);
            }
        }
        for (slot, m) in mults.iter().enumerate() {
            assert_eq!(m.len(), 1, "slot {slot} referenced by exactly one RZ");
        }
        for op in spec.ops() {
            match *op {
                AnsatzOp::Entangler { slot, .. } => assert_eq!(mults[slot][0], 2.0),
                AnsatzOp::Rotation { slot, .. } => assert_eq!(mults[slot][0], 1.0),
            }
        }
    }

    #[test]
    fn zero_angles_are_identity() {
        for kind in AnsatzKind::ALL {
            let spec = build_ansatz(kind, 5, 2).unwrap();
            let init = initial_state(5);
            let out = apply_circuit(&spec, &vec![0.0; spec.total_params], &init).unwrap();
            let overlap = init.inner(&out).norm();
            assert_relative_eq!(overlap, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn xx_block_at_half_pi_flips_both() {
        let spec = build_ansatz(AnsatzKind::NN, 2, 1).unwrap();
        let mut theta = vec![0.0; spec.total_params];
        theta[0] = std::f64::consts::FRAC_PI_2;
        let out = apply_circuit(&spec, &theta, &initial_state(2)).unwrap();
        assert_relative_eq!(out.amps()[3].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unitarity_preserved() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for kind in AnsatzKind::ALL {
            let spec = build_ansatz(kind, 6, 3).unwrap();
            for _ in 0..10 {
                let theta = random_theta(&mut rng, spec.total_params);
                let out = apply_circuit(&spec, &theta, &initial_state(6)).unwrap();
                assert_relative_eq!(out.norm(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn block_unitary_identity_cases() {
        let id = block_unitary(BlockKind::XX, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                assert!((id[(i, j)] - expect).norm() < 1e-15);
            }
        }
        let minus = block_unitary(BlockKind::XZX, std::f64::consts::PI);
        for i in 0..8 {
            assert!((minus[(i, i)] + Complex64::ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn decomposition_matches_block_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for block in [BlockKind::XX, BlockKind::XZX, BlockKind::XZZX] {
            let k = block.arity();
            for _ in 0..200 {
                let theta = random_theta(&mut rng, 1);
                let gates = block_template(block, 0, 0);
                let from_gates = template_unitary(&gates, &theta, k);
                let closed = block_unitary(block, theta[0]);
                let max_dev = (from_gates - closed)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                assert!(max_dev < 1e-12, "{block:?} deviates by {max_dev}");
            }
        }
    }

    #[test]
    fn fused_and_template_circuits_agree() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for kind in AnsatzKind::ALL {
            let spec = build_ansatz(kind, 5, 2).unwrap();
            let theta = random_theta(&mut rng, spec.total_params);
            let fused = apply_circuit(&spec, &theta, &initial_state(5)).unwrap();
            let mut gate_level = initial_state(5);
            for gate in spec.gate_template() {
                apply_gate(&mut gate_level, &gate, &theta);
            }
            let dev = fused
                .amps()
                .iter()
                .zip(gate_level.amps())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn kind_round_trips_through_strings() {
        for kind in AnsatzKind::ALL {
            assert_eq!(kind.token().parse::<AnsatzKind>().unwrap(), kind);
        }
        assert!("xyz".parse::<AnsatzKind>().is_err());
    }
}
