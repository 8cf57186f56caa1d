//! Concurrence and entanglement of two-mode superpositions
//! `|β⟩|β⟩ + e^{iφ}|β'⟩|β'⟩` (aligned) and `|β⟩|β'⟩ + e^{iφ}|β'⟩|β⟩`
//! (swapped), where `β' = (−1)^{1/k} β`.
//!
//! Both states live in the two-qubit space spanned by the cat basis
//! `{|β+⟩, |β−⟩}` of each mode, so their entanglement follows from four
//! coefficients.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{CatBasisParams, SingleMode};
use crate::special::xlog2x;

/// Squared norms below this are treated as the null vector.
pub const NULL_NORM_FLOOR: f64 = 1e-24;

/// Allowed disagreement between the determinant and closed-form concurrence.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-10;

const CONCURRENCE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `|β⟩|β⟩ + e^{iφ}|β'⟩|β'⟩`
    #[default]
    Aligned,
    /// `|β⟩|β'⟩ + e^{iφ}|β'⟩|β⟩`
    Swapped,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Aligned, Variant::Swapped];

    pub fn id(self) -> &'static str {
        match self {
            Variant::Aligned => "aligned",
            Variant::Swapped => "swapped",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "aligned" => Ok(Variant::Aligned),
            "swapped" => Ok(Variant::Swapped),
            other => Err(Error::Parse(format!(
                "unknown variant {other:?} (expected aligned or swapped)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superposition {
    pub mode: SingleMode,
    /// Relative phase in radians, meaningful mod 2π.
    pub phi: f64,
    pub variant: Variant,
}

impl Superposition {
    pub fn new(mode: SingleMode, phi: f64, variant: Variant) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::domain("phi must be finite"));
        }
        Ok(Self { mode, phi, variant })
    }
}

/// Coefficients in the product cat basis `{|++⟩, |−−⟩, |+−⟩, |−+⟩}` and in
/// the Bell basis `G1..G4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDecomposition {
    pub a: [Complex64; 4],
    pub alpha: [Complex64; 4],
    /// Normalization constant `N` of the superposition.
    pub n: f64,
}

impl BellDecomposition {
    /// Bell-basis image of product-basis coefficients.
    pub fn from_product(a: [Complex64; 4], n: f64) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::i();
        let alpha = [
            (a[0] + a[1]) * r,
            i * (a[0] - a[1]) * r,
            i * (a[2] + a[3]) * r,
            (a[2] - a[3]) * r,
        ];
        Self { a, alpha, n }
    }

    /// `|Σ α_j²|`, the Bell-basis form of the concurrence.
    pub fn bell_concurrence(&self) -> f64 {
        self.alpha.iter().map(|z| z * z).sum::<Complex64>().norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementReport {
    #[serde(rename = "A")]
    pub a: f64,
    pub p: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub concurrence: f64,
    pub x: f64,
    pub entanglement_bits: f64,
}

/// Expands the superposition in the product cat basis.
///
/// `N` is fixed by normalizing the coefficients rather than taken from a
/// formula, so it always satisfies `Σ|a_j|² = 1`.
pub fn bell_coefficients(s: &Superposition, cat: &CatBasisParams) -> Result<BellDecomposition> {
    let phase = Complex64::from_polar(1.0, s.phi);
    let one = Complex64::new(1.0, 0.0);
    let plus = one + phase;
    let minus = one - phase;
    let even = cat.even_weight;
    let odd = cat.odd_weight;
    let cross = cat.cross_weight();

    let raw = match s.variant {
        Variant::Aligned => [plus * even, plus * odd, minus * cross, minus * cross],
        Variant::Swapped => [plus * even, -plus * odd, -minus * cross, minus * cross],
    };
    let norm_sq: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
    if norm_sq < NULL_NORM_FLOOR {
        return Err(Error::DegenerateState);
    }
    let n = norm_sq.sqrt().recip();
    Ok(BellDecomposition::from_product(raw.map(|z| z * n), n))
}

/// `2 |a₁a₂ − a₃a₄|` for normalized coefficients.
pub fn concurrence_from_decomposition(d: &BellDecomposition) -> Result<f64> {
    let [a1, a2, a3, a4] = d.a;
    let c = 2.0 * (a1 * a2 - a3 * a4).norm();
    if !c.is_finite() || c > 1.0 + CONCURRENCE_SLACK {
        return Err(Error::Inconsistent(format!(
            "determinant concurrence {c} exceeds 1; coefficients are not normalized"
        )));
    }
    Ok(c.min(1.0))
}

/// `(1 − p²) / (1 + p² cos φ)`, with `p` the parity overlap `2A⁻² − 1`.
pub fn concurrence_closed(p: f64, phi: f64) -> Result<f64> {
    if !(p > -1.0 && p <= 1.0) {
        return Err(Error::domain(format!("parity overlap must lie in (-1, 1], got {p}")));
    }
    if !phi.is_finite() {
        return Err(Error::domain("phi must be finite"));
    }
    let p2 = p * p;
    let denom = 1.0 + p2 * phi.cos();
    if denom.abs() < NULL_NORM_FLOOR {
        return Err(Error::DegenerateState);
    }
    Ok((1.0 - p2) / denom)
}

/// `x = ½ + ½√(1 − c²)`.
pub fn schmidt_weight(c: f64) -> f64 {
    0.5 + 0.5 * ((1.0 - c) * (1.0 + c)).max(0.0).sqrt()
}

/// Entanglement in bits: binary entropy of `x = ½ + ½√(1 − c²)`.
pub fn entanglement_from_concurrence(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::domain(format!("concurrence must lie in [0, 1], got {c}")));
    }
    let x = schmidt_weight(c);
    Ok(-(xlog2x(x) + xlog2x(1.0 - x)))
}

/// `1 − E` for parity overlap `p` and phase `φ`, accurate to full relative
/// precision when the state is close to one bit.
///
/// `1 − c = p²(1 + cos φ)/(1 + p² cos φ)` and, with `y = √(1 − c²)`,
/// `1 − E = [(1+y) ln(1+y) + (1−y) ln(1−y)] / (2 ln 2)`.
pub fn entanglement_deficit(p: f64, phi: f64) -> Result<f64> {
    let c = concurrence_closed(p, phi)?;
    let p2 = p * p;
    let one_minus_c = p2 * (1.0 + phi.cos()) / (1.0 + p2 * phi.cos());
    let y2 = (one_minus_c * (1.0 + c)).clamp(0.0, 1.0);
    let y = y2.sqrt();
    let sum = if y < 0.1 {
        // Σ_k y^{2k} / (k(2k − 1))
        let mut term = y2;
        let mut acc = 0.0;
        let mut k = 1.0;
        while term > 1e-18 * acc || acc == 0.0 {
            acc += term / (k * (2.0 * k - 1.0));
            term *= y2;
            k += 1.0;
            if term == 0.0 {
                break;
            }
        }
        acc
    } else {
        (1.0 + y) * y.ln_1p() + if y < 1.0 { (1.0 - y) * (-y).ln_1p() } else { 0.0 }
    };
    Ok(sum / (2.0 * std::f64::consts::LN_2))
}

/// Full report for one superposition, cross-checking the determinant and
/// closed-form concurrence.
pub fn analyze(s: &Superposition) -> Result<EntanglementReport> {
    let cat = s.mode.a_closed_form();
    let d = bell_coefficients(s, &cat)?;
    let c_det = concurrence_from_decomposition(&d)?;
    let c = concurrence_closed(cat.p, s.phi)?;
    if (c - c_det).abs() > ROUTE_AGREEMENT_TOL {
        return Err(Error::Inconsistent(format!(
            "closed-form concurrence {c} and determinant {c_det} disagree"
        )));
    }
    Ok(EntanglementReport {
        a: cat.a,
        p: cat.p,
        n: d.n,
        concurrence: c,
        x: schmidt_weight(c),
        entanglement_bits: entanglement_from_concurrence(c)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Amplitude, Family};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sup(family: Family, beta: f64, phi: f64, variant: Variant) -> Superposition {
        let mode = SingleMode::new(family, Amplitude::real_beta(beta)).unwrap();
        Superposition::new(mode, phi, variant).unwrap()
    }

    #[test]
    fn determinant_examples() {
        let product = BellDecomposition::from_product([c(1.0), c(0.0), c(0.0), c(0.0)], 1.0);
        assert_eq!(concurrence_from_decomposition(&product).unwrap(), 0.0);
        let bell = BellDecomposition::from_product(
            [c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0), c(0.0)],
            1.0,
        );
        assert!((concurrence_from_decomposition(&bell).unwrap() - 1.0).abs() < 1e-15);
        let flat = BellDecomposition::from_product([c(0.5); 4], 1.0);
        assert_eq!(concurrence_from_decomposition(&flat).unwrap(), 0.0);
    }

    #[test]
    fn unnormalized_coefficients_are_rejected() {
        let d = BellDecomposition::from_product([c(1.0), c(1.0), c(0.0), c(0.0)], 1.0);
        assert!(matches!(concurrence_from_decomposition(&d), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn phase_pi_kills_diagonal_terms() {
        let s = sup(Family::Cs, 0.8, PI, Variant::Aligned);
        let d = bell_coefficients(&s, &s.mode.a_closed_form()).unwrap();
        assert!(d.a[0].norm() < 1e-15 && d.a[1].norm() < 1e-15);
        assert!((d.a[2].norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((d.a[3].norm() - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn zero_amplitude_is_the_even_product_state() {
        for family in [Family::Cs, Family::Sv, Family::Ecs] {
            let s = sup(family, 0.0, 0.0, Variant::Aligned);
            let d = bell_coefficients(&s, &s.mode.a_closed_form()).unwrap();
            assert_eq!(d.a, [c(1.0), c(0.0), c(0.0), c(0.0)]);
        }
    }

    #[test]
    fn zero_amplitude_with_phase_pi_is_degenerate() {
        let s = sup(Family::Cs, 0.0, PI, Variant::Aligned);
        assert_eq!(bell_coefficients(&s, &s.mode.a_closed_form()), Err(Error::DegenerateState));
        assert_eq!(concurrence_closed(1.0, PI), Err(Error::DegenerateState));
        assert_eq!(analyze(&s), Err(Error::DegenerateState));
    }

    #[test]
    fn coefficients_are_normalized_and_bell_map_is_unitary() {
        for variant in Variant::ALL {
            let s = sup(Family::Cs, 1.0, 0.0, variant);
            let cat = s.mode.a_closed_form();
            let d = bell_coefficients(&s, &cat).unwrap();
            let na: f64 = d.a.iter().map(|z| z.norm_sqr()).sum();
            let nal: f64 = d.alpha.iter().map(|z| z.norm_sqr()).sum();
            assert!((na - 1.0).abs() < 1e-12 && (nal - 1.0).abs() < 1e-12);
            let det = concurrence_from_decomposition(&d).unwrap();
            assert!((det - d.bell_concurrence()).abs() < 1e-14);
            assert!((det - concurrence_closed(cat.p, 0.0).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn normalization_matches_printed_form_with_squared_overlap() {
        // N = 1/√(2[1 + p² cos φ])
        let s = sup(Family::Sv, 0.9, 1.1, Variant::Aligned);
        let cat = s.mode.a_closed_form();
        let d = bell_coefficients(&s, &cat).unwrap();
        let printed = 1.0 / (2.0 * (1.0 + cat.p * cat.p * 1.1f64.cos())).sqrt();
        assert!((d.n - printed).abs() < 1e-14);
    }

    #[test]
    fn closed_form_examples() {
        for phi in [0.0, 0.4, 2.0, PI] {
            assert_eq!(concurrence_closed(0.0, phi).unwrap(), 1.0);
        }
        for p in [-0.5, 0.1, 0.99] {
            assert_eq!(concurrence_closed(p, PI).unwrap(), 1.0);
        }
        assert_eq!(concurrence_closed(1.0, 0.0).unwrap(), 0.0);
        assert!(concurrence_closed(-1.0, 0.0).is_err());
        assert!(concurrence_closed(1.5, 0.0).is_err());
    }

    #[test]
    fn entanglement_examples() {
        assert_eq!(entanglement_from_concurrence(1.0).unwrap(), 1.0);
        assert_eq!(entanglement_from_concurrence(0.0).unwrap(), 0.0);
        assert!((schmidt_weight(0.6) - 0.9).abs() < 1e-15);
        // h(0.9) evaluated independently at high precision
        let e = entanglement_from_concurrence(0.6).unwrap();
        assert!((e - 0.468_995_593_589_281_2).abs() < 1e-14, "{e}");
        assert!(entanglement_from_concurrence(1.0 + 1e-9).is_err());
        assert!(entanglement_from_concurrence(-0.1).is_err());
        assert!(entanglement_from_concurrence(f64::NAN).is_err());
    }

    #[test]
    fn deficit_matches_one_minus_entanglement() {
        for p in [-0.6, -0.01, 0.0, 1e-6, 0.003, 0.2, 0.7, 0.999] {
            for phi in [0.0, 0.9, FRAC_PI_2, 2.8, PI] {
                let c = concurrence_closed(p, phi).unwrap();
                let direct = 1.0 - entanglement_from_concurrence(c).unwrap();
                let deficit = entanglement_deficit(p, phi).unwrap();
                assert!((deficit - direct).abs() < 1e-14, "p={p} phi={phi}");
            }
        }
        // p = 0.01, φ = π/2: 1 − h(½ + ½√(1 − (1 − 10⁻⁴)²)) at high precision
        let d = entanglement_deficit(0.01, FRAC_PI_2).unwrap();
        assert!((d - 1.442_670_995_009_774e-4).abs() < 1e-18, "{d:e}");
    }

    #[test]
    fn analyze_examples() {
        let r = analyze(&sup(Family::Ecs, FRAC_PI_2.sqrt(), 0.3, Variant::Aligned)).unwrap();
        assert!((r.concurrence - 1.0).abs() < 1e-12 && (r.entanglement_bits - 1.0).abs() < 1e-12);
        let r = analyze(&sup(Family::Cs, 1.0, PI, Variant::Aligned)).unwrap();
        assert_eq!(r.entanglement_bits, 1.0);
        // SV |β| = 1.2, φ = 0.8, against a high-precision evaluation
        let r = analyze(&sup(Family::Sv, 1.2, 0.8, Variant::Aligned)).unwrap();
        assert!((r.concurrence - 0.823_845_261_276_166_8).abs() < 1e-12);
    }

    #[test]
    fn swapped_variant_has_the_same_concurrence() {
        for family in [Family::Cs, Family::Sv, Family::Ecs, Family::Ocs] {
            for phi in [0.0, 0.7, FRAC_PI_2, 2.5, PI] {
                let a = analyze(&sup(family, 0.9, phi, Variant::Aligned)).unwrap();
                let b = analyze(&sup(family, 0.9, phi, Variant::Swapped)).unwrap();
                assert!((a.concurrence - b.concurrence).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn real_coefficients_give_parallelogram_area() {
        for phi in [0.0, PI] {
            let s = sup(Family::Ocs, 1.1, phi, Variant::Aligned);
            let d = bell_coefficients(&s, &s.mode.a_closed_form()).unwrap();
            assert!(d.a.iter().all(|z| z.im.abs() < 1e-15));
            let [a1, a2, a3, a4] = d.a.map(|z| z.re);
            // parallelogram spanned by the determinant rows (a1, a3) and (a4, a2)
            let area = (a1 * a2 - a3 * a4).abs();
            let c = concurrence_from_decomposition(&d).unwrap();
            assert!((c - 2.0 * area).abs() < 1e-14, "{c} vs {area}");
        }
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("Swapped".parse::<Variant>().unwrap(), Variant::Swapped);
        assert!("crossed".parse::<Variant>().is_err());
    }
}
