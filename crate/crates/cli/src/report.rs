use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;

/// One checked quantity. Every metric is an error-like value that passes
/// when it does not exceed its tolerance; counts of failed cases use
/// tolerance 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    /// Groups metrics for CSV output, e.g. `criterion_3`.
    pub family: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Metric {
    pub fn new(family: impl Into<String>, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            family: family.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// Number of failed cases, passing at zero.
    pub fn count(family: impl Into<String>, name: impl Into<String>, failures: usize) -> Self {
        Self::new(family, name, failures as f64, 0.0)
    }

    /// A failed metric standing for an error raised by the computation.
    pub fn error(family: impl Into<String>, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            family: family.into(),
            value: f64::NAN,
            tolerance: 0.0,
            pass: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub metrics: Vec<Metric>,
    /// Errors raised while computing, one message per failed step.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    pub artifacts: Vec<PathBuf>,
    pub pass: bool,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time: f64,
}

impl Report {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Self {
            command: command.to_string(),
            config,
            metrics: Vec::new(),
            errors: Vec::new(),
            artifacts: Vec::new(),
            pass: true,
            wall_time: 0.0,
        }
    }

    pub fn push(&mut self, m: Metric) {
        self.pass &= m.pass;
        self.metrics.push(m);
    }

    pub fn extend(&mut self, ms: impl IntoIterator<Item = Metric>) {
        for m in ms {
            self.push(m);
        }
    }

    /// Records a failed step: a failing metric and its message.
    pub fn fail(&mut self, family: &str, name: &str, message: impl Into<String>) {
        self.push(Metric::error(family, name));
        self.errors.push(message.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON document without `wall_time`.
    pub fn to_json_stable(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Some(map) = v.as_object_mut() {
            map.remove("wall_time");
        }
        serde_json::to_string_pretty(&v).expect("values serialize")
    }

    /// Columns `family, name, value, tolerance, pass`.
    pub fn write_metrics_csv<W: Write>(metrics: &[&Metric], mut out: W) -> std::io::Result<()> {
        writeln!(out, "family,name,value,tolerance,pass")?;
        for m in metrics {
            writeln!(
                out,
                "{},{},{:e},{:e},{}",
                m.family, m.name, m.value, m.tolerance, m.pass
            )?;
        }
        Ok(())
    }

    /// Metric families in first-seen order.
    pub fn families(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for m in &self.metrics {
            if !out.contains(&m.family.as_str()) {
                out.push(&m.family);
            }
        }
        out
    }

    /// `report.json`, or one `metrics_<family>.csv` per family.
    pub fn write_to(&mut self, dir: &Path, csv: bool) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        if csv {
            let families: Vec<String> = self.families().iter().map(|s| s.to_string()).collect();
            for fam in families {
                let path = dir.join(format!("metrics_{fam}.csv"));
                let rows: Vec<&Metric> = self.metrics.iter().filter(|m| m.family == fam).collect();
                Self::write_metrics_csv(&rows, std::fs::File::create(&path)?)?;
            }
        } else {
            std::fs::write(dir.join("report.json"), self.to_json())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_the_conjunction() {
        let mut r = Report::new("suite", RunConfig::default());
        r.push(Metric::new("a", "x", 1e-10, 1e-9));
        assert!(r.pass);
        r.push(Metric::count("a", "y", 1));
        assert!(!r.pass);
        let mut r = Report::new("suite", RunConfig::default());
        r.fail("a", "z", "boom");
        assert!(!r.pass && r.metrics[0].value.is_nan());
    }

    #[test]
    fn stable_json_drops_wall_time() {
        let mut r = Report::new("growth", RunConfig::default());
        r.wall_time = 1.5;
        let s = r.to_json_stable();
        assert!(!s.contains("wall_time"));
        assert!(r.to_json().contains("wall_time"));
    }
}
