//! Text forms accepted for phases and complex amplitudes.
//!
//! Phases: plain radians (`1.5708`), multiples of π (`pi`, `-pi`, `0.5pi`,
//! `0.25*pi`) and fractions of π (`pi/2`, `3pi/4`).
//! Complex numbers: `1.2`, `0.5i`, `-i`, `1+2i`, `1.5e-3-2e-2i`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

fn parse_finite(s: &str, what: &str) -> Result<f64> {
    let s = s.trim();
    // f64::from_str accepts "inf" and "nan"; neither is a usable parameter.
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("invalid {what} {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{what} must be finite, got {s:?}")));
    }
    Ok(v)
}

/// Parses a phase in radians, allowing `pi` literals.
pub fn parse_phase(input: &str) -> Result<f64> {
    let s = input.trim().to_ascii_lowercase();
    if s.is_empty() {
        return Err(Error::Parse("empty phase".into()));
    }
    let Some(idx) = s.find("pi") else {
        return parse_finite(&s, "phase");
    };
    let coef = s[..idx].trim();
    let coef = coef.strip_suffix('*').unwrap_or(coef).trim();
    let factor = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_finite(other, "phase coefficient")?,
    };
    let rest = s[idx + 2..].trim();
    let divisor = if rest.is_empty() {
        1.0
    } else if let Some(d) = rest.strip_prefix('/') {
        parse_finite(d, "phase divisor")?
    } else {
        return Err(Error::Parse(format!("invalid phase {input:?}")));
    };
    if divisor == 0.0 {
        return Err(Error::Parse(format!("phase divisor is zero in {input:?}")));
    }
    let phi = factor * PI / divisor;
    if !phi.is_finite() {
        return Err(Error::Parse(format!("phase {input:?} is not finite")));
    }
    Ok(phi)
}

/// Comma-separated list of phases.
pub fn parse_phase_list(input: &str) -> Result<Vec<f64>> {
    input.split(',').map(parse_phase).collect()
}

/// Parses `a`, `bi`, or `a±bi`.
pub fn parse_complex(input: &str) -> Result<Complex64> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty complex number".into()));
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(Complex64::new(parse_finite(&s, "real number")?, 0.0));
    };
    // The split point is the last sign that is not the leading sign and not
    // part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_finite(&body[..i], "real part")?, imaginary_part(&body[i..])?),
        None => (0.0, imaginary_part(body)?),
    };
    Ok(Complex64::new(re, im))
}

fn imaginary_part(s: &str) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        other => parse_finite(other, "imaginary part"),
    }
}
