//! Brute-force check of the closed forms in a truncated photon-number space.
//!
//! The two-mode state is assembled term by term from the number-state
//! expansion, traced over the second mode, and diagonalized. Nothing here
//! uses the cat basis or the closed-form `A`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::entanglement::{Superposition, Variant, NULL_NORM_FLOOR};
use crate::error::{Error, Result};
use crate::families::SingleMode;
use crate::special::CompensatedSum;

/// Tail bound used when `nmax` is chosen automatically.
pub const AUTO_TAIL_TOL: f64 = 1e-12;

/// Largest photon number per mode that auto-selection will try.
pub const MAX_AUTO_NMAX: u64 = 4096;

/// Eigenvalues below this contribute nothing to the entropy.
const EIGEN_FLOOR: f64 = 1e-14;

const PSD_TOL: f64 = 1e-12;

/// A single-mode state on photon numbers `0..=nmax`, stored on its
/// residue-class support `m, m + k, m + 2k, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeVector {
    pub nmax: u64,
    pub k: u64,
    pub m: u64,
    /// Entry `j` is the amplitude of `|jk + m⟩`.
    pub support: Vec<Complex64>,
    /// Bound on the probability discarded above `nmax`, before renormalization.
    pub tail_mass: f64,
}

impl SingleModeVector {
    /// Dense amplitude vector over `|0⟩..|nmax⟩`.
    pub fn dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.nmax as usize + 1];
        for (j, z) in self.support.iter().enumerate() {
            out[(j as u64 * self.k + self.m) as usize] = *z;
        }
        out
    }

    /// The same truncation of `|(−1)^{1/k} β⟩`: term `j` picks up `(−1)^j`.
    fn parity_flipped(&self) -> Vec<Complex64> {
        self.support
            .iter()
            .enumerate()
            .map(|(j, z)| if j % 2 == 0 { *z } else { -*z })
            .collect()
    }
}

/// Truncates the number-state expansion at photon number `nmax`.
pub fn build_single_mode(mode: &SingleMode, nmax: u64, tail_tol: f64) -> Result<SingleModeVector> {
    let spec = mode.spec();
    let (k, m) = (spec.k as u64, spec.m as u64);
    if nmax < m {
        return Err(Error::domain(format!(
            "nmax = {nmax} is below the lowest occupied photon number {m}"
        )));
    }
    let last = (nmax - m) / k;
    let tail_mass = mode.tail_after(last);
    if tail_mass.is_nan() || tail_mass > tail_tol {
        return Err(Error::Truncation {
            terms: last + 1,
            tail: tail_mass,
            tolerance: tail_tol,
            hint: "; increase nmax",
        });
    }
    let mut support: Vec<Complex64> = (0..=last).map(|n| mode.term(n)).collect();
    let norm = support.iter().map(|z| z.norm_sqr()).collect::<CompensatedSum>().value().sqrt();
    for z in &mut support {
        *z /= norm;
    }
    Ok(SingleModeVector { nmax, k, m, support, tail_mass })
}

/// Smallest `nmax` whose tail bound is below `tail_tol`, searched by
/// geometric growth and then bisection, capped at [`MAX_AUTO_NMAX`].
pub fn auto_nmax(mode: &SingleMode, tail_tol: f64) -> Result<u64> {
    let spec = mode.spec();
    let (k, m) = (spec.k as u64, spec.m as u64);
    let ok = |nmax: u64| mode.tail_after((nmax - m) / k) <= tail_tol;

    let mut hi = 16u64.max(m);
    while !ok(hi) {
        if hi >= MAX_AUTO_NMAX {
            return Err(Error::Truncation {
                terms: (MAX_AUTO_NMAX - m) / k + 1,
                tail: mode.tail_after((MAX_AUTO_NMAX - m) / k),
                tolerance: tail_tol,
                hint: "; auto nmax reached its cap of 4096 photons per mode",
            });
        }
        hi = (hi * 2).min(MAX_AUTO_NMAX);
    }
    let mut lo = m;
    if ok(lo) {
        return Ok(lo);
    }
    // invariant: !ok(lo), ok(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Two-mode state over the product of the single-mode supports.
#[derive(Debug, Clone)]
pub struct TruncatedTwoModeState {
    pub nmax: u64,
    pub k: u64,
    pub m: u64,
    /// `coefficients[(i, j)]` is the amplitude of `|ik + m, jk + m⟩`.
    pub coefficients: DMatrix<Complex64>,
    /// Single-mode tail bound.
    pub tail_mass: f64,
    /// `⟨ψ|ψ⟩` of the superposition before it was normalized.
    pub raw_norm_sq: f64,
}

impl TruncatedTwoModeState {
    /// Amplitude of `|n1, n2⟩`; zero off the residue-class support.
    pub fn amplitude(&self, n1: u64, n2: u64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        if n1 > self.nmax || n2 > self.nmax || n1 < self.m || n2 < self.m {
            return zero;
        }
        let (d1, d2) = (n1 - self.m, n2 - self.m);
        if d1 % self.k != 0 || d2 % self.k != 0 {
            return zero;
        }
        self.coefficients[((d1 / self.k) as usize, (d2 / self.k) as usize)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reduced state of mode 1, `ρ = Ψ Ψ†`.
    pub fn reduced_state(&self) -> ReducedState {
        let psi = &self.coefficients;
        ReducedState { matrix: psi * psi.adjoint() }
    }
}

/// Builds the superposition from truncated single-mode vectors.
pub fn build_superposition(
    s: &Superposition,
    nmax: u64,
    tail_tol: f64,
) -> Result<TruncatedTwoModeState> {
    let single = build_single_mode(&s.mode, nmax, tail_tol)?;
    let v = nalgebra::DVector::from_vec(single.support.clone());
    let w = nalgebra::DVector::from_vec(single.parity_flipped());
    let phase = Complex64::from_polar(1.0, s.phi);

    let mut psi = match s.variant {
        Variant::Aligned => &v * v.transpose() + (&w * w.transpose()) * phase,
        Variant::Swapped => &v * w.transpose() + (&w * v.transpose()) * phase,
    };
    let raw_norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).collect::<CompensatedSum>().value();
    if raw_norm_sq < NULL_NORM_FLOOR {
        return Err(Error::DegenerateState);
    }

    // ‖ψ‖² = 2(1 + Re(e^{iφ} ⟨v|w⟩²)) must hold for the truncated vectors too.
    let overlap: Complex64 = v.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
    let expected = match s.variant {
        Variant::Aligned => 2.0 * (1.0 + (phase * overlap * overlap).re),
        Variant::Swapped => 2.0 * (1.0 + (phase * overlap * overlap.conj()).re),
    };
    if (raw_norm_sq - expected).abs() > 1e-10 {
        return Err(Error::NumericalFailure(format!(
            "superposition norm² {raw_norm_sq} does not match overlap algebra {expected}"
        )));
    }

    psi /= Complex64::new(raw_norm_sq.sqrt(), 0.0);
    Ok(TruncatedTwoModeState {
        nmax,
        k: single.k,
        m: single.m,
        coefficients: psi,
        tail_mass: single.tail_mass,
        raw_norm_sq,
    })
}

/// Reduced density matrix of mode 1 over its support.
#[derive(Debug, Clone)]
pub struct ReducedState {
    pub matrix: DMatrix<Complex64>,
}

impl ReducedState {
    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// `Tr ρ²`, computed as the squared Frobenius norm of the Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.matrix;
        (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues sorted in decreasing order.
    ///
    /// Fails if the matrix is not Hermitian positive semidefinite with unit
    /// trace to within `1e-12`.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let defect = self.hermiticity_defect();
        if defect > PSD_TOL {
            return Err(Error::NumericalFailure(format!(
                "reduced state is not Hermitian (defect {defect:e})"
            )));
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > PSD_TOL {
            return Err(Error::NumericalFailure(format!("reduced state has trace {trace}")));
        }
        let mut eig: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        if let Some(&min) = eig.last() {
            if min < -PSD_TOL {
                return Err(Error::NumericalFailure(format!(
                    "reduced state has negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(eig)
    }
}

/// Von Neumann entropy of the mode-1 reduced state, in bits.
pub fn entanglement_entropy(state: &TruncatedTwoModeState) -> Result<f64> {
    entropy_of_spectrum(&state.reduced_state().spectrum()?)
}

pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    Ok(-eigenvalues
        .iter()
        .filter(|&&l| l >= EIGEN_FLOOR)
        .map(|&l| l * l.log2())
        .sum::<f64>())
}

/// Pure-state concurrence `√(2(1 − Tr ρ²))`.
pub fn concurrence_oracle(state: &TruncatedTwoModeState) -> Result<f64> {
    let rho = state.reduced_state();
    let purity = rho.purity();
    if !purity.is_finite() || purity > 1.0 + PSD_TOL {
        return Err(Error::NumericalFailure(format!("reduced state purity {purity}")));
    }
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// `⟨β | (−1)^{1/k} β⟩` from the truncated number-state vectors.
pub fn overlap_oracle(mode: &SingleMode, nmax: u64, tail_tol: f64) -> Result<f64> {
    let v = build_single_mode(mode, nmax, tail_tol)?;
    let w = v.parity_flipped();
    let overlap: Complex64 = v.support.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
    Ok(overlap.re)
}

/// Everything the oracle measures about one superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMeasurement {
    pub nmax: u64,
    pub tail_mass: f64,
    pub entropy: f64,
    pub concurrence: f64,
    /// Decreasing eigenvalues of the reduced state.
    pub spectrum: Vec<f64>,
}

impl OracleMeasurement {
    /// Largest eigenvalue beyond the first two; zero for rank ≤ 2.
    pub fn third_eigenvalue(&self) -> f64 {
        self.spectrum.get(2).copied().unwrap_or(0.0).max(0.0)
    }
}

/// Builds the state with an automatically chosen `nmax` and measures it.
pub fn measure(s: &Superposition, tail_tol: f64) -> Result<OracleMeasurement> {
    measure_at(s, None, tail_tol)
}

/// Like [`measure`], with an optional fixed cutoff.
pub fn measure_at(s: &Superposition, nmax: Option<u64>, tail_tol: f64) -> Result<OracleMeasurement> {
    let nmax = match nmax {
        Some(n) => n,
        None => auto_nmax(&s.mode, tail_tol)?,
    };
    let state = build_superposition(s, nmax, tail_tol)?;
    let spectrum = state.reduced_state().spectrum()?;
    Ok(OracleMeasurement {
        nmax,
        tail_mass: state.tail_mass,
        entropy: entropy_of_spectrum(&spectrum)?,
        concurrence: concurrence_oracle(&state)?,
        spectrum,
    })
}
