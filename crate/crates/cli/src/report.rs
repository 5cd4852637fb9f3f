use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use semicross_core::representations::TruncationPolicy;

#[derive(Debug, Default, Serialize)]
pub struct Diagnostics {
    /// Truncation histories by series name.
    #[serde(rename = "K_history")]
    pub k_history: BTreeMap<String, Vec<(usize, f64)>>,
    /// Angular resolution of the lambda maximization, when one was run.
    pub lambda_resolution: Option<f64>,
    pub caps_hit: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Inputs {
    pub config: String,
    pub system: String,
    pub policy: TruncationPolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Inputs,
    pub results: serde_json::Value,
    pub diagnostics: Diagnostics,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn write(&self, out: Option<&Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        match out {
            Some(path) => std::fs::write(path, text)
                .with_context(|| format!("writing report to {}", path.display())),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }

    /// Every history as `series,k,value` rows.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut text = String::from("series,k,value\n");
        for (series, history) in &self.diagnostics.k_history {
            for (k, v) in history {
                text.push_str(&format!("{series},{k},{v}\n"));
            }
        }
        std::fs::write(path, text).with_context(|| format!("writing csv to {}", path.display()))
    }
}
