//! Preset file for `curve`: flat `key = value` pairs in TOML syntax.
//!
//! ```toml
//! dk = [0, 1, 2, 3, "inf"]
//! xi_start = 0.0
//! xi_stop = 4.0
//! xi_step = 0.05
//! format = "csv"
//! x_axis = "xi"
//! output = "fig1.csv"
//! gnuplot = "fig1.gp"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::curve::{DkEntry, OutputFormat, XAxis};
use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub dk: Option<Vec<DkEntry>>,
    pub xi_start: Option<f64>,
    pub xi_stop: Option<f64>,
    pub xi_step: Option<f64>,
    pub format: Option<OutputFormat>,
    pub x_axis: Option<XAxis>,
    pub output: Option<PathBuf>,
    pub gnuplot: Option<PathBuf>,
}

impl CurveConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_preset() {
        let c = CurveConfig::parse(
            r#"
            dk = [0, 2, "inf"]
            xi_start = 0.5
            xi_stop = 2.0
            xi_step = 0.25
            format = "json"
            x_axis = "dalpha"
            output = "out.json"
            "#,
        )
        .unwrap();
        assert_eq!(
            c.dk,
            Some(vec![
                DkEntry::Finite(0),
                DkEntry::Finite(2),
                DkEntry::Infinite
            ])
        );
        assert_eq!(c.xi_step, Some(0.25));
        assert_eq!(c.format, Some(OutputFormat::Json));
        assert_eq!(c.x_axis, Some(XAxis::Dalpha));
        assert_eq!(c.output, Some(PathBuf::from("out.json")));
        assert_eq!(c.gnuplot, None);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_dk() {
        assert!(CurveConfig::parse("xi_begin = 1.0").is_err());
        assert!(CurveConfig::parse("dk = [-1]").is_err());
        assert!(CurveConfig::parse(r#"dk = ["many"]"#).is_err());
        assert_eq!(CurveConfig::parse("").unwrap(), CurveConfig::default());
    }
}
