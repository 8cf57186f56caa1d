//! Sweep CSV format.
//!
//! Columns: `family,variant,phi,sweep_param,A,p,concurrence,entanglement,gamma`.
//! `family` is `any` for family-independent sweeps over `A`; `gamma` is
//! empty except for logarithmic states. Floats are written in scientific
//! notation with 12 significant digits, so identical rows always produce
//! identical bytes.

use std::io::{Read, Write};

use crate::analysis::SweepRow;
use crate::error::{Error, Result};

pub const HEADER: [&str; 9] = [
    "family",
    "variant",
    "phi",
    "sweep_param",
    "A",
    "p",
    "concurrence",
    "entanglement",
    "gamma",
];

const ANY_FAMILY: &str = "any";

/// 12 significant digits, scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn record(row: &SweepRow) -> [String; 9] {
    [
        row.family.map_or(ANY_FAMILY.to_string(), |f| f.id().to_string()),
        row.variant.id().to_string(),
        format_float(row.phi),
        format_float(row.sweep_param),
        format_float(row.a),
        format_float(row.p),
        format_float(row.concurrence),
        format_float(row.entanglement),
        row.gamma.map(format_float).unwrap_or_default(),
    ]
}

pub fn write_rows<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::NumericalFailure(format!("csv write: {e}"));
    w.write_record(HEADER).map_err(io)?;
    for row in rows {
        w.write_record(record(row)).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::NumericalFailure(format!("csv write: {e}")))
}

pub fn to_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

fn field(rec: &csv::StringRecord, i: usize, line: u64) -> Result<&str> {
    rec.get(i)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing column {}", HEADER[i])))
}

fn float(rec: &csv::StringRecord, i: usize, line: u64) -> Result<f64> {
    let s = field(rec, i, line)?;
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: column {} is not a number: {s:?}", HEADER[i])))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("line {line}: column {} is not finite", HEADER[i])));
    }
    Ok(v)
}

/// Parses one data record (without header).
pub fn decode_record(rec: &csv::StringRecord, line: u64) -> Result<SweepRow> {
    if rec.len() != HEADER.len() {
        return Err(Error::Parse(format!(
            "line {line}: expected {} columns, found {}",
            HEADER.len(),
            rec.len()
        )));
    }
    let family = match field(rec, 0, line)? {
        ANY_FAMILY => None,
        other => Some(other.parse().map_err(|e| Error::Parse(format!("line {line}: {e}")))?),
    };
    let variant = field(rec, 1, line)?
        .parse()
        .map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
    let gamma = match field(rec, 8, line)?.trim() {
        "" => None,
        _ => Some(float(rec, 8, line)?),
    };
    Ok(SweepRow {
        family,
        variant,
        phi: float(rec, 2, line)?,
        sweep_param: float(rec, 3, line)?,
        a: float(rec, 4, line)?,
        p: float(rec, 5, line)?,
        concurrence: float(rec, 6, line)?,
        entanglement: float(rec, 7, line)?,
        gamma,
    })
}

/// Reads a sweep CSV, rejecting files whose header differs from [`HEADER`].
pub fn read_rows<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = r.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(|e| Error::Parse(format!("csv: {e}")))?,
        None => return Err(Error::Parse("empty csv: missing header".into())),
    };
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::Parse(format!(
            "unexpected header {:?}; expected {}",
            header.iter().collect::<Vec<_>>(),
            HEADER.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("csv: {e}")))?;
        rows.push(decode_record(&rec, i as u64 + 2)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::Variant;
    use crate::families::Family;
    use proptest::prelude::*;

    fn row() -> SweepRow {
        SweepRow {
            family: Some(Family::Ls),
            variant: Variant::Swapped,
            phi: std::f64::consts::FRAC_PI_2,
            sweep_param: 0.25,
            a: 1.2,
            p: -0.01,
            concurrence: 0.9,
            entanglement: 0.8,
            gamma: Some(0.1),
        }
    }

    #[test]
    fn fixed_formatting() {
        assert_eq!(format_float(1.0), "1.00000000000e0");
        assert_eq!(format_float(-0.000123456789012345), "-1.23456789012e-4");
        let text = to_string(&[row()]).unwrap();
        assert_eq!(
            text,
            "family,variant,phi,sweep_param,A,p,concurrence,entanglement,gamma\n\
             ls,swapped,1.57079632679e0,2.50000000000e-1,1.20000000000e0,-1.00000000000e-2,\
             9.00000000000e-1,8.00000000000e-1,1.00000000000e-1\n"
        );
    }

    #[test]
    fn any_family_and_missing_gamma() {
        let mut r = row();
        r.family = None;
        r.gamma = None;
        r.phi = 1.5;
        let text = to_string(&[r.clone()]).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("any,swapped,"));
        assert!(text.lines().nth(1).unwrap().ends_with(','));
        assert_eq!(read_rows(text.as_bytes()).unwrap(), vec![r]);
    }

    #[test]
    fn header_mismatch_is_rejected() {
        let err = read_rows("family,variant\ncs,aligned\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("unexpected header"));
        assert!(read_rows("".as_bytes()).is_err());
    }

    #[test]
    fn bad_records_name_the_line() {
        let text = format!("{}\ncs,aligned,0,1,1,0,nan,0,\n", HEADER.join(","));
        let err = read_rows(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let text = format!("{}\ncs,aligned,0\n", HEADER.join(","));
        assert!(read_rows(text.as_bytes()).is_err());
        let text = format!("{}\nxx,aligned,0,1,1,0,0,0,\n", HEADER.join(","));
        assert!(read_rows(text.as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn rows_survive_to_printed_precision(
            phi in -10.0f64..10.0,
            sweep in 0.0f64..5.0,
            c in 0.0f64..1.0,
        ) {
            let mut r = row();
            r.phi = phi;
            r.sweep_param = sweep;
            r.concurrence = c;
            let back = read_rows(to_string(&[r.clone()]).unwrap().as_bytes()).unwrap();
            prop_assert_eq!(back.len(), 1);
            for (x, y) in [(back[0].phi, phi), (back[0].sweep_param, sweep), (back[0].concurrence, c)] {
                prop_assert!((x - y).abs() <= 5e-12 * y.abs().max(1e-300));
            }
            // re-encoding the decoded row is byte-identical
            prop_assert_eq!(to_string(&back).unwrap(), to_string(&[r]).unwrap());
        }
    }
}
