//! Parameter sweeps, figure presets, and location of entanglement extrema.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::{
    analyze, bell_coefficients, concurrence_closed, concurrence_from_decomposition,
    entanglement_deficit, entanglement_from_concurrence, Superposition, Variant,
};
use crate::error::{Error, Result};
use crate::families::{CatBasisParams, Family, SingleMode};
use crate::oracle;

pub const DEFAULT_STEPS: usize = 400;

/// Relative step of the central-difference derivative of E.
const DERIVATIVE_STEP: f64 = 1e-6;

/// Derivatives smaller than this are indistinguishable from rounding noise
/// when scanning for sign changes.
const DERIVATIVE_FLOOR: f64 = 1e-9;

const BISECTION_TOL: f64 = 1e-10;

/// Tolerance of the closed-form vs determinant comparison in verification.
pub const DETERMINANT_TOL: f64 = 1e-10;
/// Tolerance of closed-form vs oracle comparisons in verification.
pub const ORACLE_TOL: f64 = 1e-8;
/// Bound on the third reduced-state eigenvalue (rank ≤ 2).
pub const RANK_TOL: f64 = 1e-10;

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// One point of a sweep. `family` is `None` for family-independent sweeps
/// over `A`; `gamma` is set for logarithmic states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: Option<Family>,
    pub variant: Variant,
    pub phi: f64,
    pub sweep_param: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub p: f64,
    pub concurrence: f64,
    pub entanglement: f64,
    pub gamma: Option<f64>,
}

/// Concurrence against `A ∈ [1, √2]`, one curve per phase.
pub fn sweep_concurrence_vs_a(phis: &[f64], a_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if let Some(a) = a_grid.iter().find(|a| !(1.0..=SQRT_2).contains(*a)) {
        return Err(Error::domain(format!("A must lie in [1, sqrt 2], got {a}")));
    }
    let mut rows = Vec::with_capacity(phis.len() * a_grid.len());
    for &phi in phis {
        for &a in a_grid {
            let cat = CatBasisParams::from_a(a);
            let c = match concurrence_closed(cat.p, phi) {
                // A = 1 with φ = π is the null state; use the limit along A > 1.
                Err(Error::DegenerateState) => 1.0,
                other => other?,
            };
            rows.push(SweepRow {
                family: None,
                variant: Variant::Aligned,
                phi,
                sweep_param: a,
                a,
                p: cat.p,
                concurrence: c,
                entanglement: entanglement_from_concurrence(c)?,
                gamma: None,
            });
        }
    }
    Ok(rows)
}

/// The row `analyze` produces for one superposition.
pub fn row_for(s: &Superposition) -> Result<SweepRow> {
    let report = analyze(s)?;
    let gamma = match s.mode.amplitude() {
        crate::families::Amplitude::Log { gamma, .. } => Some(gamma.norm()),
        crate::families::Amplitude::Beta(_) => None,
    };
    Ok(SweepRow {
        family: Some(s.mode.family()),
        variant: s.variant,
        phi: s.phi,
        sweep_param: s.mode.amplitude().magnitude(),
        a: report.a,
        p: report.p,
        concurrence: report.concurrence,
        entanglement: report.entanglement_bits,
        gamma,
    })
}

fn sweep_curve(
    family: Family,
    gamma: Option<Complex64>,
    grid: &[f64],
    phi: f64,
    variant: Variant,
) -> Result<Vec<SweepRow>> {
    grid.par_iter()
        .map(|&r| {
            let mode = SingleMode::with_magnitude(family, r, gamma)?;
            row_for(&Superposition::new(mode, phi, variant)?)
        })
        .collect()
}

/// `A`, concurrence and entanglement against `|β|`, one curve per family.
pub fn sweep_amplitude(
    families: &[Family],
    grid: &[f64],
    phi: f64,
    variant: Variant,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &family in families {
        if !family.uses_beta() {
            return Err(Error::domain("ls is swept over q; use sweep_ls"));
        }
        rows.extend(sweep_curve(family, None, grid, phi, variant)?);
    }
    Ok(rows)
}

/// Logarithmic states against `|q|`, one curve per `γ`.
pub fn sweep_ls(gammas: &[f64], q_grid: &[f64], phi: f64, variant: Variant) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &g in gammas {
        rows.extend(sweep_curve(Family::Ls, Some(Complex64::new(g, 0.0)), q_grid, phi, variant)?);
    }
    Ok(rows)
}

/// `|q|` at which a logarithmic state reaches `A = √2` (and unit
/// concurrence): `√(e^{|γ|²} − 1)`, when that is below 1.
pub fn ls_peak_q(gamma: Complex64) -> Option<f64> {
    let q = gamma.norm_sqr().exp_m1().sqrt();
    (q < 1.0).then_some(q)
}

/// Largest `|γ|` for which [`ls_peak_q`] exists: `√(ln 2)`.
pub fn ls_gamma_bound() -> f64 {
    LN_2.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumReport {
    /// Amplitude magnitude (`|β|` or `|q|`) of the extremum.
    pub location: f64,
    /// Entanglement in bits at `location`.
    pub value: f64,
    pub kind: ExtremumKind,
    pub bracket: (f64, f64),
    /// `|dE/d|β||` at `location`.
    pub residual: f64,
}

/// A one-parameter family of superpositions indexed by amplitude magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeAxis {
    pub family: Family,
    /// Fixed `γ` for logarithmic states.
    pub gamma: Option<Complex64>,
    pub phi: f64,
    pub variant: Variant,
}

impl AmplitudeAxis {
    pub fn superposition(&self, r: f64) -> Result<Superposition> {
        let mode = SingleMode::with_magnitude(self.family, r, self.gamma)?;
        Superposition::new(mode, self.phi, self.variant)
    }

    pub fn entanglement(&self, r: f64) -> Result<f64> {
        Ok(analyze(&self.superposition(r)?)?.entanglement_bits)
    }

    fn deficit(&self, r: f64) -> Result<f64> {
        let s = self.superposition(r)?;
        entanglement_deficit(s.mode.a_closed_form().p, s.phi)
    }

    /// `dE/dr` by central difference with step `1e-6 r`, taken on `1 − E`
    /// so that rounding near one bit does not swamp the difference.
    pub fn derivative(&self, r: f64) -> Result<f64> {
        let h = DERIVATIVE_STEP * r.abs().max(f64::EPSILON);
        Ok((self.deficit(r - h)? - self.deficit(r + h)?) / (2.0 * h))
    }
}

/// Local extrema of `E(r)` on `[lo, hi]`: scan `steps` points for sign
/// changes of the numerical derivative, then bisect each bracket to `1e-10`.
pub fn find_extrema_e(axis: &AmplitudeAxis, lo: f64, hi: f64, steps: usize) -> Result<Vec<ExtremumReport>> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain(format!("extremum range must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let grid = linspace(lo, hi, steps.max(3));
    let derivs: Vec<f64> = grid.par_iter().map(|&r| axis.derivative(r)).collect::<Result<_>>()?;

    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for (&r, &d) in grid.iter().zip(&derivs) {
        if d.abs() <= DERIVATIVE_FLOOR {
            continue;
        }
        if let Some((r0, d0)) = last {
            if d0.signum() != d.signum() {
                out.push(bisect_extremum(axis, r0, r, d0 > 0.0)?);
            }
        }
        last = Some((r, d));
    }
    Ok(out)
}

fn bisect_extremum(axis: &AmplitudeAxis, mut lo: f64, mut hi: f64, rising_at_lo: bool) -> Result<ExtremumReport> {
    let bracket = (lo, hi);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let rising = axis.derivative(mid)? > 0.0;
        if rising == rising_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let location = 0.5 * (lo + hi);
    Ok(ExtremumReport {
        location,
        value: axis.entanglement(location)?,
        kind: if rising_at_lo { ExtremumKind::Max } else { ExtremumKind::Min },
        bracket,
        residual: axis.derivative(location)?.abs(),
    })
}

/// The four figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Concurrence vs `A`, φ from 0 to π in steps of π/4.
    ConcurrenceVsA,
    /// `A` vs `|β|` for CS, SV, ECS, OCS at φ = π/2.
    AVsAmplitude,
    /// Entanglement vs `|β|` for CS, SV, ECS, OCS at φ = π/2.
    EntanglementVsAmplitude,
    /// Logarithmic states vs `|q|`: γ = 0.1 and 0.9 at φ = π/2, γ = 0.1 at φ = π.
    Logarithmic,
}

impl Figure {
    pub const ALL: [Figure; 4] = [
        Figure::ConcurrenceVsA,
        Figure::AVsAmplitude,
        Figure::EntanglementVsAmplitude,
        Figure::Logarithmic,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            Figure::ConcurrenceVsA => "fig1.csv",
            Figure::AVsAmplitude => "fig2.csv",
            Figure::EntanglementVsAmplitude => "fig3.csv",
            Figure::Logarithmic => "fig4.csv",
        }
    }

    pub const BETA_RANGE: (f64, f64) = (0.01, 3.0);
    pub const Q_RANGE: (f64, f64) = (0.001, 0.999);

    pub fn rows(self) -> Result<Vec<SweepRow>> {
        let beta_grid = || linspace(Self::BETA_RANGE.0, Self::BETA_RANGE.1, DEFAULT_STEPS);
        let beta_families = [Family::Cs, Family::Ecs, Family::Sv, Family::Ocs];
        match self {
            Figure::ConcurrenceVsA => {
                let phis = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI];
                sweep_concurrence_vs_a(&phis, &linspace(1.0, SQRT_2, DEFAULT_STEPS))
            }
            Figure::AVsAmplitude | Figure::EntanglementVsAmplitude => {
                sweep_amplitude(&beta_families, &beta_grid(), FRAC_PI_2, Variant::Aligned)
            }
            Figure::Logarithmic => {
                let q = linspace(Self::Q_RANGE.0, Self::Q_RANGE.1, DEFAULT_STEPS);
                let mut rows = sweep_ls(&[0.1, 0.9], &q, FRAC_PI_2, Variant::Aligned)?;
                rows.extend(sweep_ls(&[0.1], &q, PI, Variant::Aligned)?);
                Ok(rows)
            }
        }
    }
}

/// Three-way comparison of one superposition: closed form, determinant,
/// and truncated number-state oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCheck {
    pub family: Family,
    pub amplitude: f64,
    pub gamma: Option<f64>,
    pub phi: f64,
    pub variant: Variant,
    pub nmax: u64,
    pub tail_mass: f64,
    pub concurrence_closed: f64,
    pub concurrence_determinant: f64,
    pub concurrence_oracle: f64,
    pub entanglement_closed: f64,
    pub entanglement_oracle: f64,
    pub third_eigenvalue: f64,
}

impl PointCheck {
    pub fn determinant_deviation(&self) -> f64 {
        (self.concurrence_closed - self.concurrence_determinant).abs()
    }

    pub fn concurrence_deviation(&self) -> f64 {
        (self.concurrence_closed - self.concurrence_oracle).abs()
    }

    pub fn entanglement_deviation(&self) -> f64 {
        (self.entanglement_closed - self.entanglement_oracle).abs()
    }

    pub fn passes(&self) -> bool {
        self.determinant_deviation() < DETERMINANT_TOL
            && self.concurrence_deviation() < ORACLE_TOL
            && self.entanglement_deviation() < ORACLE_TOL
            && self.third_eigenvalue < RANK_TOL
    }
}

pub fn check_point(s: &Superposition, tail_tol: f64) -> Result<PointCheck> {
    check_point_at(s, None, tail_tol)
}

/// [`check_point`] with an optional fixed oracle cutoff.
pub fn check_point_at(s: &Superposition, nmax: Option<u64>, tail_tol: f64) -> Result<PointCheck> {
    let cat = s.mode.a_closed_form();
    let c_closed = concurrence_closed(cat.p, s.phi)?;
    let c_det = concurrence_from_decomposition(&bell_coefficients(s, &cat)?)?;
    let meas = oracle::measure_at(s, nmax, tail_tol)?;
    let amp = s.mode.amplitude();
    Ok(PointCheck {
        family: s.mode.family(),
        amplitude: amp.magnitude(),
        gamma: match amp {
            crate::families::Amplitude::Log { gamma, .. } => Some(gamma.norm()),
            crate::families::Amplitude::Beta(_) => None,
        },
        phi: s.phi,
        variant: s.variant,
        nmax: meas.nmax,
        tail_mass: meas.tail_mass,
        concurrence_closed: c_closed,
        concurrence_determinant: c_det,
        concurrence_oracle: meas.concurrence,
        entanglement_closed: entanglement_from_concurrence(c_closed)?,
        entanglement_oracle: meas.entropy,
        third_eigenvalue: meas.third_eigenvalue(),
    })
}

/// Amplitudes of the built-in verification grid.
///
/// Squeezed vacuum stops at `|β| = 1.5`: at `|β| = 2` its number-state
/// tail needs ~24000 photons per mode, beyond the oracle's cap.
pub fn verification_amplitudes(family: Family) -> &'static [f64] {
    match family {
        Family::Sv => &[0.3, 0.7, 1.0, 1.5],
        Family::Ls => &[0.3, 0.5, 0.7, 0.9],
        _ => &[0.3, 0.7, 1.0, 1.5, 2.0],
    }
}

pub const VERIFICATION_LS_GAMMAS: [f64; 3] = [0.1, 0.5, 0.9];
pub const VERIFICATION_PHASES: [f64; 5] = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI];

/// Families × amplitudes × phases × variants covered by `verify --grid default`.
pub fn default_verification_grid() -> Vec<Superposition> {
    let mut modes = Vec::new();
    for family in Family::ALL {
        for &r in verification_amplitudes(family) {
            if family == Family::Ls {
                for g in VERIFICATION_LS_GAMMAS {
                    modes.push(SingleMode::with_magnitude(family, r, Some(Complex64::new(g, 0.0))));
                }
            } else {
                modes.push(SingleMode::with_magnitude(family, r, None));
            }
        }
    }
    let mut grid = Vec::new();
    for mode in modes {
        let mode = mode.expect("verification grid amplitudes are valid");
        for phi in VERIFICATION_PHASES {
            for variant in Variant::ALL {
                grid.push(Superposition { mode, phi, variant });
            }
        }
    }
    grid
}

/// Runs [`check_point`] over a grid in parallel, preserving order.
pub fn check_grid(grid: &[Superposition], tail_tol: f64) -> Result<Vec<PointCheck>> {
    grid.par_iter().map(|s| check_point(s, tail_tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let g = linspace(1.0, SQRT_2, 400);
        assert_eq!(g.len(), 400);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[399], SQRT_2);
        assert!(linspace(0.0, 1.0, 0).is_empty());
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }

    #[test]
    fn concurrence_vs_a_examples() {
        let rows = sweep_concurrence_vs_a(&[PI], &linspace(1.0, SQRT_2, 50)).unwrap();
        assert_eq!(rows[0].a, 1.0);
        assert!(rows.iter().all(|r| r.concurrence == 1.0));
        let rows = sweep_concurrence_vs_a(&[0.0], &[1.0, SQRT_2]).unwrap();
        assert_eq!(rows[0].concurrence, 0.0);
        assert!((rows[1].concurrence - 1.0).abs() < 1e-15);
        assert!(sweep_concurrence_vs_a(&[0.0], &[1.5]).is_err());
    }

    #[test]
    fn ls_peak_examples() {
        let q = ls_peak_q(Complex64::new(0.1, 0.0)).unwrap();
        assert!((q - 0.100_250_521_615_441_27).abs() < 1e-15);
        assert!(ls_peak_q(Complex64::new(0.9, 0.0)).is_none());
        assert!((ls_gamma_bound() - 0.832_554_611_157_697_8).abs() < 1e-15);
        let near = ls_peak_q(Complex64::new(0.832_55, 0.0)).unwrap();
        assert!(near > 0.9999 && near < 1.0);
    }

    #[test]
    fn ls_peak_gives_unit_concurrence() {
        for g in [0.1, 0.3, 0.8] {
            let gamma = Complex64::new(g, 0.0);
            let q = ls_peak_q(gamma).unwrap();
            let mode = SingleMode::with_magnitude(Family::Ls, q, Some(gamma)).unwrap();
            assert!(mode.a_closed_form().p.abs() < 1e-12, "γ = {g}");
        }
    }

    #[test]
    fn coherent_state_has_no_extrema() {
        let axis = AmplitudeAxis { family: Family::Cs, gamma: None, phi: FRAC_PI_2, variant: Variant::Aligned };
        assert!(find_extrema_e(&axis, 0.1, 4.0, DEFAULT_STEPS).unwrap().is_empty());
    }

    #[test]
    fn ecs_first_extrema() {
        let axis = AmplitudeAxis { family: Family::Ecs, gamma: None, phi: FRAC_PI_2, variant: Variant::Aligned };
        let ext = find_extrema_e(&axis, 0.5, 3.0, DEFAULT_STEPS).unwrap();
        assert_eq!(ext[0].kind, ExtremumKind::Max);
        assert!((ext[0].location - FRAC_PI_2.sqrt()).abs() < 1e-8);
        assert_eq!(ext[1].kind, ExtremumKind::Min);
        // root of tan x = −tanh x, x = |β|²
        assert!((ext[1].location - 1.537_862_273_557_470_4).abs() < 1e-8);
        for e in &ext {
            let x = e.location * e.location;
            match e.kind {
                ExtremumKind::Max => assert!(x.cos().abs() < 1e-8, "{e:?}"),
                ExtremumKind::Min => assert!((x.tan() + x.tanh()).abs() < 1e-8, "{e:?}"),
            }
        }
        // kinds alternate
        assert!(ext.windows(2).all(|w| w[0].kind != w[1].kind));
    }

    #[test]
    fn bad_extremum_range() {
        let axis = AmplitudeAxis { family: Family::Cs, gamma: None, phi: 0.0, variant: Variant::Aligned };
        assert!(find_extrema_e(&axis, 0.0, 1.0, 10).is_err());
        assert!(find_extrema_e(&axis, 2.0, 1.0, 10).is_err());
    }

    #[test]
    fn sweep_rows_reproduce_through_analyze() {
        let rows = sweep_amplitude(&[Family::Ocs], &linspace(0.2, 2.0, 7), 0.4, Variant::Swapped).unwrap();
        for row in &rows {
            let mode = SingleMode::with_magnitude(Family::Ocs, row.sweep_param, None).unwrap();
            let again = row_for(&Superposition::new(mode, 0.4, Variant::Swapped).unwrap()).unwrap();
            assert_eq!(&again, row);
        }
    }

    #[test]
    fn ls_is_not_a_beta_sweep() {
        assert!(sweep_amplitude(&[Family::Ls], &[0.5], 0.0, Variant::Aligned).is_err());
    }

    #[test]
    fn grid_has_expected_size() {
        // (5 + 4 + 5 + 5 + 4·3) modes × 5 phases × 2 variants
        assert_eq!(default_verification_grid().len(), 31 * 10);
    }
}
