//! The five generalized coherent state families and their cat-basis
//! parameters.
//!
//! A state of family `(k, m)` with amplitude β expands as
//! `Σ_n C_{kn} β^{kn} |nk + m⟩`. Every quantity used downstream is a
//! function of the term weights `w_n = |C_{kn} β^{kn}|²`, which are
//! evaluated in the log domain.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{
    ln_central_binomial_scaled, ln_cosh, ln_factorial, ln_sinh, n_ln, CompensatedSum,
};

/// Default bound on the discarded tail mass of a series.
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;

/// Hard cap on the number of series terms before giving up.
pub const MAX_SERIES_TERMS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Coherent state.
    Cs,
    /// Squeezed vacuum.
    Sv,
    /// Even coherent (cat) state.
    Ecs,
    /// Odd coherent (cat) state.
    Ocs,
    /// Logarithmic state.
    Ls,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Cs, Family::Sv, Family::Ecs, Family::Ocs, Family::Ls];

    pub fn id(self) -> &'static str {
        match self {
            Family::Cs => "cs",
            Family::Sv => "sv",
            Family::Ecs => "ecs",
            Family::Ocs => "ocs",
            Family::Ls => "ls",
        }
    }

    pub fn spec(self) -> FamilySpec {
        let (k, m) = match self {
            Family::Cs => (1, 0),
            Family::Sv => (2, 0),
            Family::Ecs => (2, 0),
            Family::Ocs => (2, 1),
            Family::Ls => (1, 0),
        };
        FamilySpec { family: self, k, m }
    }

    /// Whether the amplitude is a complex β (everything except LS).
    pub fn uses_beta(self) -> bool {
        self != Family::Ls
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cs" => Ok(Family::Cs),
            "sv" => Ok(Family::Sv),
            "ecs" => Ok(Family::Ecs),
            "ocs" => Ok(Family::Ocs),
            "ls" => Ok(Family::Ls),
            other => Err(Error::Parse(format!(
                "unknown family {other:?} (expected one of cs, sv, ecs, ocs, ls)"
            ))),
        }
    }
}

/// Family together with its photon-number ladder: term `n` sits at `nk + m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub k: u32,
    pub m: u32,
}

impl FamilySpec {
    pub fn photon_number(&self, n: u64) -> u64 {
        n * self.k as u64 + self.m as u64
    }
}

/// State amplitude: complex β, or `(q, γ)` for logarithmic states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Amplitude {
    Beta(Complex64),
    Log { q: f64, gamma: Complex64 },
}

impl Amplitude {
    pub fn real_beta(beta: f64) -> Self {
        Amplitude::Beta(Complex64::new(beta, 0.0))
    }

    /// `|β|`, or `|q|` for logarithmic states.
    pub fn magnitude(&self) -> f64 {
        match self {
            Amplitude::Beta(beta) => beta.norm(),
            Amplitude::Log { q, .. } => q.abs(),
        }
    }
}

/// A validated single-mode generalized coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleMode {
    spec: FamilySpec,
    amp: Amplitude,
}

impl SingleMode {
    pub fn new(family: Family, amp: Amplitude) -> Result<Self> {
        match (family, amp) {
            (Family::Ls, Amplitude::Log { q, gamma }) => {
                if !q.is_finite() || !gamma.re.is_finite() || !gamma.im.is_finite() {
                    return Err(Error::domain("ls: q and gamma must be finite"));
                }
                if q.abs() >= 1.0 {
                    return Err(Error::domain(format!("ls: requires |q| < 1, got q = {q}")));
                }
                if q == 0.0 && gamma.norm_sqr() == 0.0 {
                    return Err(Error::domain("ls: q = 0 and gamma = 0 give an unnormalizable state"));
                }
            }
            (Family::Ls, Amplitude::Beta(_)) => {
                return Err(Error::domain("ls: amplitude is given by q and gamma, not beta"));
            }
            (family, Amplitude::Beta(beta)) => {
                if !beta.re.is_finite() || !beta.im.is_finite() {
                    return Err(Error::domain(format!("{family}: beta must be finite")));
                }
                if family == Family::Ocs && beta.norm_sqr() == 0.0 {
                    return Err(Error::domain("ocs: requires |beta| > 0 (normalization divides by sinh(|beta|^2))"));
                }
            }
            (family, Amplitude::Log { .. }) => {
                return Err(Error::domain(format!("{family}: amplitude is given by beta, not q/gamma")));
            }
        }
        Ok(Self { spec: family.spec(), amp })
    }

    /// State whose amplitude magnitude is `r`: real β = r, or q = r with the given γ.
    pub fn with_magnitude(family: Family, r: f64, gamma: Option<Complex64>) -> Result<Self> {
        let amp = if family.uses_beta() {
            Amplitude::real_beta(r)
        } else {
            let gamma = gamma.ok_or_else(|| Error::domain("ls: gamma is required"))?;
            Amplitude::Log { q: r, gamma }
        };
        Self::new(family, amp)
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn spec(&self) -> FamilySpec {
        self.spec
    }

    pub fn amplitude(&self) -> Amplitude {
        self.amp
    }

    /// `|β|²` for the β families.
    fn s(&self) -> f64 {
        match self.amp {
            Amplitude::Beta(beta) => beta.norm_sqr(),
            Amplitude::Log { .. } => unreachable!("s() is only defined for beta families"),
        }
    }

    /// `(q², |γ|², D)` with `D = |γ|² − ln(1 − q²)` the LS normalization.
    fn ls_parts(&self) -> (f64, f64, f64) {
        match self.amp {
            Amplitude::Log { q, gamma } => {
                let q2 = q * q;
                let g2 = gamma.norm_sqr();
                (q2, g2, g2 - (-q2).ln_1p())
            }
            Amplitude::Beta(_) => unreachable!("ls_parts() is only defined for ls"),
        }
    }

    /// `ln |C_{kn} β^{kn}|²`; `-inf` for terms that vanish exactly.
    pub fn term_log_weight(&self, n: u64) -> f64 {
        match self.spec.family {
            Family::Cs => {
                let s = self.s();
                -s + n_ln(n, s) - ln_factorial(n)
            }
            Family::Sv => {
                // w_n = C(2n,n) (tanh s / 2)^{2n} / cosh s
                let s = self.s();
                let ln_t = if s < 1.0 {
                    s.tanh().ln()
                } else {
                    // ln tanh s = ln(1 - 2/(e^{2s}+1)), accurate when tanh s ≈ 1
                    (-2.0 / ((2.0 * s).exp() + 1.0)).ln_1p()
                };
                let power = if n == 0 { 0.0 } else { 2.0 * n as f64 * ln_t };
                ln_central_binomial_scaled(n) + power - ln_cosh(s)
            }
            Family::Ecs => {
                let s = self.s();
                n_ln(2 * n, s) - ln_factorial(2 * n) - ln_cosh(s)
            }
            Family::Ocs => {
                let s = self.s();
                n_ln(2 * n + 1, s) - ln_factorial(2 * n + 1) - ln_sinh(s)
            }
            Family::Ls => {
                let (q2, g2, d) = self.ls_parts();
                if n == 0 {
                    g2.ln() - d.ln()
                } else {
                    n_ln(n, q2) - (n as f64).ln() - d.ln()
                }
            }
        }
    }

    pub fn term_weight(&self, n: u64) -> f64 {
        self.term_log_weight(n).exp()
    }

    /// The complex expansion coefficient `C_{kn} β^{kn}` of `|nk + m⟩`.
    pub fn term(&self, n: u64) -> Complex64 {
        let modulus = (0.5 * self.term_log_weight(n)).exp();
        match self.amp {
            Amplitude::Beta(beta) => {
                let angle = (self.spec.k as u64 * n) as f64 * beta.arg();
                Complex64::from_polar(modulus, angle)
            }
            Amplitude::Log { q, gamma } => {
                if n == 0 {
                    if modulus == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::from_polar(modulus, gamma.arg())
                    }
                } else if q < 0.0 && n % 2 == 1 {
                    Complex64::new(-modulus, 0.0)
                } else {
                    Complex64::new(modulus, 0.0)
                }
            }
        }
    }

    /// Upper bound on `w_{j+1} / w_j` over all `j >= from` (`from >= 1`).
    fn ratio_bound(&self, from: u64) -> f64 {
        let j = from as f64;
        match self.spec.family {
            Family::Cs => self.s() / (j + 1.0),
            Family::Ecs => {
                let s = self.s();
                s * s / ((2.0 * j + 1.0) * (2.0 * j + 2.0))
            }
            Family::Ocs => {
                let s = self.s();
                s * s / ((2.0 * j + 2.0) * (2.0 * j + 3.0))
            }
            // ratio (2j+1)/(2j+2) tanh²s, increasing toward tanh²s
            Family::Sv => self.s().tanh().powi(2),
            // ratio q² j/(j+1) for j >= 1
            Family::Ls => self.ls_parts().0,
        }
    }

    /// Bound on `Σ_{j > last} w_j`, the mass not yet included after term `last`.
    pub fn tail_after(&self, last: u64) -> f64 {
        let next = last + 1;
        let w = self.term_weight(next);
        if w == 0.0 {
            return 0.0;
        }
        let ratio = self.ratio_bound(next);
        if ratio >= 1.0 {
            f64::INFINITY
        } else {
            w / (1.0 - ratio)
        }
    }

    fn sector_sums(&self, tail_tol: f64) -> Result<SectorSums> {
        let mut even = CompensatedSum::new();
        let mut odd = CompensatedSum::new();
        let mut tail = f64::INFINITY;
        for n in 0..MAX_SERIES_TERMS {
            let w = self.term_weight(n);
            if n % 2 == 0 {
                even.add(w);
            } else {
                odd.add(w);
            }
            tail = self.tail_after(n);
            if tail < tail_tol {
                return Ok(SectorSums {
                    even: even.value(),
                    odd: odd.value(),
                });
            }
        }
        Err(Error::Truncation {
            terms: MAX_SERIES_TERMS,
            tail,
            tolerance: tail_tol,
            hint: "",
        })
    }

    /// `|1 − Σ w_n|` over the series truncated once the tail bound drops below `tail_tol`.
    pub fn normalization_residual(&self, tail_tol: f64) -> Result<f64> {
        let sums = self.sector_sums(tail_tol)?;
        Ok((1.0 - (sums.even + sums.odd)).abs())
    }

    /// Cat-basis parameters from the even/odd partial sums of the series.
    pub fn a_from_series(&self, tail_tol: f64) -> Result<CatBasisParams> {
        let sums = self.sector_sums(tail_tol)?;
        Ok(CatBasisParams::from_sector_weights(sums.even, sums.odd))
    }

    /// Cat-basis parameters from the family's closed-form `A`.
    pub fn a_closed_form(&self) -> CatBasisParams {
        let (even, odd) = match self.spec.family {
            Family::Cs => {
                let s = self.s();
                (0.5 * (1.0 + (-2.0 * s).exp()), -0.5 * (-2.0 * s).exp_m1())
            }
            Family::Sv => {
                // 1 − tanh(2s) tanh(s) = 1/cosh(2s); r is the parity overlap.
                let s = self.s();
                let c = (2.0 * s).cosh();
                let r = 1.0 / c.sqrt();
                let odd = if s < 0.5 {
                    s.sinh().powi(2) / (c.sqrt() * (c.sqrt() + 1.0))
                } else {
                    0.5 * (1.0 - r)
                };
                (0.5 * (1.0 + r), odd)
            }
            Family::Ecs => {
                let s = self.s();
                let p = s.cos() / s.cosh();
                let odd = if s < 1.0 {
                    ((0.5 * s).sinh().powi(2) + (0.5 * s).sin().powi(2)) / s.cosh()
                } else {
                    0.5 * (1.0 - p)
                };
                (0.5 * (1.0 + p), odd)
            }
            Family::Ocs => {
                let s = self.s();
                let p = s.sin() / s.sinh();
                let odd = if s < 1.0 {
                    sinh_minus_sin_half(s) / s.sinh()
                } else {
                    0.5 * (1.0 - p)
                };
                (0.5 * (1.0 + p), odd)
            }
            Family::Ls => {
                let (q2, g2, d) = self.ls_parts();
                let even = (g2 - 0.5 * (-q2 * q2).ln_1p()) / d;
                (even, q2.atanh() / d)
            }
        };
        CatBasisParams::from_sector_weights(even, odd)
    }
}

/// `(sinh s − sin s) / 2 = Σ_j s^{4j+3} / (4j+3)!` for small `s`.
fn sinh_minus_sin_half(s: f64) -> f64 {
    let s4 = s.powi(4);
    let mut term = s.powi(3) / 6.0;
    let mut acc = term;
    let mut j = 0u32;
    while term > acc * 1e-18 {
        let a = (4 * j + 4) as f64;
        term *= s4 / (a * (a + 1.0) * (a + 2.0) * (a + 3.0));
        acc += term;
        j += 1;
    }
    acc
}

#[derive(Debug, Clone, Copy)]
struct SectorSums {
    even: f64,
    odd: f64,
}

/// Parameters of the even/odd cat basis `|β±⟩` built from one amplitude.
///
/// `A⁻²` and `B⁻²` are the even- and odd-sector weights of the state;
/// `p = A⁻² − B⁻²` is the overlap `⟨β|(−1)^{1/k}β⟩`. At zero amplitude the
/// odd sector is empty, `B` is `+∞` and `p = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatBasisParams {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    /// `A⁻²`
    pub even_weight: f64,
    /// `B⁻²`
    pub odd_weight: f64,
}

impl CatBasisParams {
    pub fn from_sector_weights(even_weight: f64, odd_weight: f64) -> Self {
        let a = even_weight.sqrt().recip();
        let b = if odd_weight > 0.0 {
            odd_weight.sqrt().recip()
        } else {
            f64::INFINITY
        };
        Self {
            a,
            b,
            p: even_weight - odd_weight,
            n_plus: a / 2.0,
            n_minus: b / 2.0,
            even_weight,
            odd_weight,
        }
    }

    /// Parameters for a given `A` in `[1, √2]`-style sweeps; `p = 2A⁻² − 1`.
    pub fn from_a(a: f64) -> Self {
        let even = 1.0 / (a * a);
        Self::from_sector_weights(even, 1.0 - even)
    }

    /// `1/(AB) = √(A⁻² B⁻²)`, finite even when `B` is not.
    pub fn cross_weight(&self) -> f64 {
        (self.even_weight * self.odd_weight).sqrt()
    }
}
