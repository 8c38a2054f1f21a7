//! The one-document output format shared by every CLI subcommand.
//!
//! Key order is fixed for diff-friendliness; absent fields serialize as
//! null (JSON) or empty cells (CSV). `notes` echoes whatever configuration
//! is needed to reproduce the run.

use serde::Serialize;

pub const CSV_HEADER: &str =
    "experiment,n,k,m,trials,seed,successes,frequency,ci_low,ci_high,elapsed_s,notes";

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub m: Option<u64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub successes: Option<u64>,
    pub frequency: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub elapsed_s: f64,
    pub notes: String,
}

impl RunReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        RunReport {
            experiment: experiment.into(),
            n: None,
            k: None,
            m: None,
            trials: None,
            seed: None,
            successes: None,
            frequency: None,
            ci_low: None,
            ci_high: None,
            elapsed_s: 0.0,
            notes: String::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        fn num<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        let quoted_notes = format!("\"{}\"", self.notes.replace('"', "\"\""));
        format!(
            "{}\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
            CSV_HEADER,
            self.experiment,
            num(&self.n),
            num(&self.k),
            num(&self.m),
            num(&self.trials),
            num(&self.seed),
            num(&self.successes),
            num(&self.frequency),
            num(&self.ci_low),
            num(&self.ci_high),
            self.elapsed_s,
            quoted_notes,
        )
    }

    pub fn render(&self, csv: bool) -> String {
        if csv {
            self.to_csv()
        } else {
            self.to_json()
        }
    }
}
