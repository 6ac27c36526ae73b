//! CSV rows and number formatting.

use std::io::Write;

use rabi_core::varground::Regime;

use crate::CliError;

pub const HEADER: [&str; 11] =
    ["g", "omega", "Omega", "method", "label", "energy", "mean_photon", "lambda", "K", "P", "regime"];

pub const LANDSCAPE_HEADER: [&str; 6] = ["lambda", "K", "c2_+1", "c2_-2", "c2_+3", "c2_-4"];

/// Twelve significant digits, fixed notation for moderate magnitudes and
/// exponent notation otherwise. Trailing zeros are trimmed and `-0` prints
/// as `0`, so equal values always give equal text.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub g: f64,
    pub omega: f64,
    pub big_omega: f64,
    pub method: String,
    pub label: String,
    pub energy: Option<f64>,
    pub mean_photon: Option<f64>,
    pub lambda: Option<f64>,
    pub k: Option<f64>,
    pub p: Option<f64>,
    pub regime: Option<Regime>,
}

impl Row {
    pub fn new(g: f64, omega: f64, big_omega: f64, method: &str, label: &str) -> Row {
        Row {
            g,
            omega,
            big_omega,
            method: method.into(),
            label: label.into(),
            energy: None,
            mean_photon: None,
            lambda: None,
            k: None,
            p: None,
            regime: None,
        }
    }

    pub fn record(&self) -> [String; 11] {
        let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
        [
            fmt_num(self.g),
            fmt_num(self.omega),
            fmt_num(self.big_omega),
            self.method.clone(),
            self.label.clone(),
            opt(self.energy),
            opt(self.mean_photon),
            opt(self.lambda),
            opt(self.k),
            opt(self.p),
            self.regime.map(|r| r.as_str().to_string()).unwrap_or_default(),
        ]
    }

    pub fn invalid(&self) -> bool {
        self.regime == Some(Regime::MultiMinimum)
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(|e| CliError::Io("output".into(), e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(-0.5), "-0.5");
        assert_eq!(fmt_num(2.0), "2");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(-1234.5678901234567), "-1234.56789012");
        assert_eq!(fmt_num(1.5e-9), "1.5e-9");
        assert_eq!(fmt_num(6.02214076e23), "6.02214076e23");
        assert_eq!(fmt_num(0.0001), "0.0001");
    }

    #[test]
    fn empty_fields_for_missing_values() {
        let mut row = Row::new(0.5, 1.0, 1.0, "exact", "ground");
        row.energy = Some(-0.6);
        let rec = row.record();
        assert_eq!(rec[5], "-0.6");
        assert!(rec[6..].iter().all(String::is_empty));
    }
}
