//! Sweep configuration: command-line values layered over an optional
//! `key = value` file, layered over defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rabi_core::Sign;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Rwa,
    Aa,
    Grwa,
    Gvm,
    Var,
}

impl Method {
    pub const ALL: [Method; 6] = [Method::Exact, Method::Rwa, Method::Aa, Method::Grwa, Method::Gvm, Method::Var];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Rwa => "rwa",
            Method::Aa => "aa",
            Method::Grwa => "grwa",
            Method::Gvm => "gvm",
            Method::Var => "var",
        }
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| CliError::Config(format!("unknown method `{s}`")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An excited-state label such as `-1` or `+2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Label {
    pub sign: Sign,
    pub n: usize,
}

impl FromStr for Label {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        let bad = || CliError::Config(format!("bad label `{s}`, expected e.g. -1 or +2"));
        let (sign, rest) = match s.chars().next() {
            Some('+') => (Sign::Plus, &s[1..]),
            Some('-') => (Sign::Minus, &s[1..]),
            _ => return Err(bad()),
        };
        let n: usize = rest.parse().map_err(|_| bad())?;
        if n < 1 {
            return Err(bad());
        }
        Ok(Label { sign, n })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign.symbol(), self.n)
    }
}

fn parse_list<T: FromStr<Err = CliError>>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// Partially specified settings; `None` defers to the next layer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub big_omega: Option<f64>,
    pub g_start: Option<f64>,
    pub g_end: Option<f64>,
    pub g_points: Option<usize>,
    pub methods: Option<Vec<Method>>,
    pub labels: Option<Vec<Label>>,
    pub out: Option<PathBuf>,
    pub plot: Option<bool>,
}

impl Overrides {
    /// Fills unset fields from `lower`.
    pub fn or(self, lower: Overrides) -> Overrides {
        Overrides {
            omega: self.omega.or(lower.omega),
            big_omega: self.big_omega.or(lower.big_omega),
            g_start: self.g_start.or(lower.g_start),
            g_end: self.g_end.or(lower.g_end),
            g_points: self.g_points.or(lower.g_points),
            methods: self.methods.or(lower.methods),
            labels: self.labels.or(lower.labels),
            out: self.out.or(lower.out),
            plot: self.plot.or(lower.plot),
        }
    }

    /// Parses `key = value` lines; `#` starts a comment. Keys match the long
    /// flag names (`big-omega` and `big_omega` are both accepted).
    pub fn parse(text: &str) -> Result<Overrides, CliError> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let num = |v: &str| -> Result<f64, CliError> {
                v.parse().map_err(|_| CliError::Config(format!("line {}: `{v}` is not a number", lineno + 1)))
            };
            match key.as_str() {
                "omega" => o.omega = Some(num(value)?),
                "big-omega" => o.big_omega = Some(num(value)?),
                "g-start" => o.g_start = Some(num(value)?),
                "g-end" => o.g_end = Some(num(value)?),
                "g-points" => {
                    o.g_points = Some(value.parse().map_err(|_| {
                        CliError::Config(format!("line {}: `{value}` is not a count", lineno + 1))
                    })?)
                }
                "methods" => o.methods = Some(parse_list(value)?),
                "labels" => o.labels = Some(parse_list(value)?),
                "out" => o.out = Some(PathBuf::from(value)),
                "plot" => {
                    o.plot = Some(value.parse().map_err(|_| {
                        CliError::Config(format!("line {}: `{value}` is not true/false", lineno + 1))
                    })?)
                }
                other => return Err(CliError::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Overrides, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Overrides::parse(&text)
    }

    pub fn resolve(self, defaults: SweepConfig) -> Result<SweepConfig, CliError> {
        let cfg = SweepConfig {
            omega: self.omega.unwrap_or(defaults.omega),
            big_omega: self.big_omega.unwrap_or(defaults.big_omega),
            g_start: self.g_start.unwrap_or(defaults.g_start),
            g_end: self.g_end.unwrap_or(defaults.g_end),
            g_points: self.g_points.unwrap_or(defaults.g_points),
            methods: self.methods.unwrap_or(defaults.methods),
            labels: self.labels.unwrap_or(defaults.labels),
            output_path: self.out.or(defaults.output_path),
            emit_plot_script: self.plot.unwrap_or(defaults.emit_plot_script),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub omega: f64,
    pub big_omega: f64,
    pub g_start: f64,
    pub g_end: f64,
    pub g_points: usize,
    pub methods: Vec<Method>,
    pub labels: Vec<Label>,
    pub output_path: Option<PathBuf>,
    pub emit_plot_script: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            omega: 1.0,
            big_omega: 1.0,
            g_start: 0.0,
            g_end: 2.0,
            g_points: 41,
            methods: Method::ALL.to_vec(),
            labels: vec![Label { sign: Sign::Minus, n: 1 }, Label { sign: Sign::Plus, n: 1 }],
            output_path: None,
            emit_plot_script: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.omega) || !positive(self.big_omega) {
            return Err(CliError::Config("omega and big-omega must be positive".into()));
        }
        if !(self.g_start.is_finite() && self.g_start >= 0.0) || !self.g_end.is_finite() || self.g_end < self.g_start {
            return Err(CliError::Config("need 0 <= g-start <= g-end".into()));
        }
        if self.g_points < 2 {
            return Err(CliError::Config("g-points must be at least 2".into()));
        }
        if self.methods.is_empty() {
            return Err(CliError::Config("methods must not be empty".into()));
        }
        Ok(())
    }

    pub fn g_grid(&self) -> Vec<f64> {
        rabi_core::optimize::linspace(self.g_start, self.g_end, self.g_points)
    }

    pub fn wants(&self, method: Method) -> bool {
        self.methods.contains(&method)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_roundtrip() {
        for s in ["-1", "+1", "-2", "+6"] {
            assert_eq!(s.parse::<Label>().unwrap().to_string(), s);
        }
        for s in ["1", "+0", "-x", ""] {
            assert!(s.parse::<Label>().is_err());
        }
    }

    #[test]
    fn file_layer_parses_and_flags_win() {
        let file = Overrides::parse("omega = 0.5 # detuned\nbig_omega=1\n\ng-points = 5\nmethods = exact, var\n").unwrap();
        assert_eq!(file.omega, Some(0.5));
        assert_eq!(file.methods, Some(vec![Method::Exact, Method::Var]));
        let flags = Overrides { omega: Some(2.0), ..Overrides::default() };
        let cfg = flags.or(file).resolve(SweepConfig::default()).unwrap();
        assert_eq!((cfg.omega, cfg.big_omega, cfg.g_points), (2.0, 1.0, 5));
        assert!(Overrides::parse("colour = red").is_err());
        assert!(Overrides::parse("omega 3").is_err());
    }

    #[test]
    fn validation() {
        let bad = Overrides { g_points: Some(1), ..Overrides::default() };
        assert!(bad.resolve(SweepConfig::default()).is_err());
        let bad = Overrides { methods: Some(vec![]), ..Overrides::default() };
        assert!(bad.resolve(SweepConfig::default()).is_err());
        let bad = Overrides { g_start: Some(-0.1), ..Overrides::default() };
        assert!(bad.resolve(SweepConfig::default()).is_err());
    }
}
