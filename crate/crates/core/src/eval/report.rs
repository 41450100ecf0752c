use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scores of one classifier run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunScore {
    /// Fraction of labeled nodes used for training; empty for transfer runs.
    pub train_ratio: Option<f64>,
    pub repeat: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub micro_f1: f64,
    pub macro_f1: f64,
    /// Scores of always predicting the most frequent training class.
    pub majority_micro_f1: f64,
    pub majority_macro_f1: f64,
}

/// Means over the runs sharing one training ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub train_ratio: Option<f64>,
    pub runs: usize,
    pub micro_f1: f64,
    pub macro_f1: f64,
    pub majority_micro_f1: f64,
    pub majority_macro_f1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: String,
    pub runs: Vec<RunScore>,
    pub summary: Vec<RatioSummary>,
    pub wall_secs: f64,
    pub cpu_secs: f64,
    pub peak_rss_bytes: Option<u64>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

impl EvalReport {
    /// Group runs by training ratio, in order of first appearance.
    pub fn from_runs(protocol: &str, runs: Vec<RunScore>, wall_secs: f64, cpu_secs: f64) -> Self {
        let mut ratios: Vec<Option<f64>> = Vec::new();
        for r in &runs {
            if !ratios.contains(&r.train_ratio) {
                ratios.push(r.train_ratio);
            }
        }
        let summary = ratios
            .into_iter()
            .map(|ratio| {
                let group: Vec<&RunScore> = runs.iter().filter(|r| r.train_ratio == ratio).collect();
                RatioSummary {
                    train_ratio: ratio,
                    runs: group.len(),
                    micro_f1: mean(group.iter().map(|r| r.micro_f1)),
                    macro_f1: mean(group.iter().map(|r| r.macro_f1)),
                    majority_micro_f1: mean(group.iter().map(|r| r.majority_micro_f1)),
                    majority_macro_f1: mean(group.iter().map(|r| r.majority_macro_f1)),
                }
            })
            .collect();
        EvalReport {
            protocol: protocol.to_string(),
            runs,
            summary,
            wall_secs,
            cpu_secs,
            peak_rss_bytes: crate::resources::peak_rss_bytes(),
        }
    }

    /// Mean Micro-F1 over all runs.
    pub fn micro_f1(&self) -> f64 {
        mean(self.runs.iter().map(|r| r.micro_f1))
    }

    pub fn macro_f1(&self) -> f64 {
        mean(self.runs.iter().map(|r| r.macro_f1))
    }

    pub fn majority_micro_f1(&self) -> f64 {
        mean(self.runs.iter().map(|r| r.majority_micro_f1))
    }

    pub fn majority_macro_f1(&self) -> f64 {
        mean(self.runs.iter().map(|r| r.majority_macro_f1))
    }

    /// One row per run.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.runs {
            out.serialize(r)?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(BufWriter::new(f))
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        self.write_json(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))
    }
}
