//! Long-range extended Ising chain in one dimension.
//!
//! The Hamiltonian on `N` sites combines a transverse field with
//! string-operator couplings between every pair of sites:
//!
//! ```text
//! H = sum_n [ h Z_n ] - sum_{n, r : n+r <= N} J_r ( X_n Z_{n+1} .. Z_{n+r-1} X_{n+r} )
//! ```
//!
//! Couplings decay algebraically, `J_r = (J/A) r^{-alpha}`, with the Kac
//! normalization `A = sum_r r^{-alpha}` keeping the total interaction energy
//! extensive. The field is fixed at `h = A` so that the dimensionless ratio
//! `lambda = J/h` puts the k = 0 gap closing at `lambda = 1` for every
//! `(N, alpha)`. The chain is open: only pairs with `n + r <= N` appear.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of one model instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of sites N (dense diagonalization supports N <= 12).
    pub n_sites: usize,
    /// Decay exponent alpha >= 0 of the algebraic coupling tail.
    pub alpha: f64,
    /// Dimensionless coupling ratio lambda = J/h.
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(n_sites: usize, alpha: f64, lambda: f64) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_sites must be >= 2, got {n_sites}"
            )));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self {
            n_sites,
            alpha,
            lambda,
        })
    }

    /// Transverse field h = A(N, alpha).
    pub fn field(&self) -> f64 {
        kac_norm(self.n_sites, self.alpha).expect("validated n_sites")
    }

    /// Overall interaction scale J = lambda * h.
    pub fn interaction(&self) -> f64 {
        self.lambda * self.field()
    }
}

/// Kac normalization constant `A = sum_{r=1}^{N-1} r^{-alpha}`.
pub fn kac_norm(n_sites: usize, alpha: f64) -> Result<f64> {
    if n_sites < 2 {
        return Err(Error::InvalidParameter(format!(
            "kac_norm requires n_sites >= 2, got {n_sites}"
        )));
    }
    Ok((1..n_sites).map(|r| (r as f64).powf(-alpha)).sum())
}

/// Distance-resolved couplings `J_r` for r = 1..N-1, in units where h = A.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    j: Vec<f64>,
}

impl CouplingTable {
    /// Coupling at distance r (1-based).
    pub fn at(&self, r: usize) -> f64 {
        self.j[r - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.j
    }

    pub fn len(&self) -> usize {
        self.j.len()
    }

    pub fn is_empty(&self) -> bool {
        self.j.is_empty()
    }
}

/// Kac-normalized couplings `J_r = (J/A) r^{-alpha}`. With h = A this is
/// simply `lambda * r^{-alpha}`, and `sum_r J_r = J` holds by construction.
pub fn couplings(params: &ModelParams) -> CouplingTable {
    let j = (1..params.n_sites)
        .map(|r| params.lambda * (r as f64).powf(-params.alpha))
        .collect();
    CouplingTable { j }
}

/// One weighted Pauli string. Stored in symplectic form: bit q of `x_mask`
/// (`z_mask`) marks an X (Z) letter on site q; both bits set would mean Y,
/// which this model never produces. Site q maps to bit q of the basis index
/// (little-endian).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub x_mask: u64,
    pub z_mask: u64,
    pub n_sites: usize,
}

impl PauliTerm {
    pub fn from_letters(coeff: f64, letters: &str) -> Result<Self> {
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        for (q, c) in letters.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x_mask |= 1 << q,
                'Y' => {
                    x_mask |= 1 << q;
                    z_mask |= 1 << q;
                }
                'Z' => z_mask |= 1 << q,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "invalid Pauli letter '{other}'"
                    )))
                }
            }
        }
        Ok(Self {
            coeff,
            x_mask,
            z_mask,
            n_sites: letters.chars().count(),
        })
    }

    /// Letter string, position q = site q.
    pub fn letters(&self) -> String {
        (0..self.n_sites)
            .map(|q| {
                let x = self.x_mask >> q & 1 == 1;
                let z = self.z_mask >> q & 1 == 1;
                match (x, z) {
                    (false, false) => 'I',
                    (true, false) => 'X',
                    (false, true) => 'Z',
                    (true, true) => 'Y',
                }
            })
            .collect()
    }
}

/// The full Hamiltonian as a term list: N field terms `+h Z_n` followed by
/// N(N-1)/2 string terms `-J_r X_n Z..Z X_{n+r}` ordered by (n, r).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinHamiltonian {
    pub n_sites: usize,
    pub terms: Vec<PauliTerm>,
}

impl SpinHamiltonian {
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }
}

pub fn build_hamiltonian(params: &ModelParams) -> SpinHamiltonian {
    let n = params.n_sites;
    let h = params.field();
    let table = couplings(params);
    let mut terms = Vec::with_capacity(n + n * (n - 1) / 2);
    for q in 0..n {
        terms.push(PauliTerm {
            coeff: h,
            x_mask: 0,
            z_mask: 1 << q,
            n_sites: n,
        });
    }
    // Open boundary: only pairs with n + r <= N (0-based: start + r <= N-1).
    for start in 0..n {
        for r in 1..n - start {
            let end = start + r;
            let x_mask = (1u64 << start) | (1 << end);
            let mut z_mask = 0u64;
            for q in start + 1..end {
                z_mask |= 1 << q;
            }
            terms.push(PauliTerm {
                coeff: -table.at(r),
                x_mask,
                z_mask,
                n_sites: n,
            });
        }
    }
    SpinHamiltonian { n_sites: n, terms }
}

/// Critical fields from the gap closings: `h_c(0) = sum_r J_r` and
/// `h_c(pi) = sum_r (-1)^r J_r`.
pub fn critical_fields(params: &ModelParams) -> (f64, f64) {
    let table = couplings(params);
    let h_c0 = table.values().iter().sum();
    let h_cpi = table
        .values()
        .iter()
        .enumerate()
        .map(|(idx, j)| if (idx + 1) % 2 == 0 { *j } else { -*j })
        .sum();
    (h_c0, h_cpi)
}
