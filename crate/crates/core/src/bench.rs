//! Runtime and memory scaling of the embedding pipeline on random graphs.

use std::io::Write;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::generate::erdos_renyi;
use crate::pipeline::{embed_graph, RunConfig};

/// What one pipeline run at a given size consumed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub edges: usize,
    pub sampling_secs: f64,
    pub training_secs: f64,
    pub est_peak_bytes: usize,
    pub peak_rss_bytes: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub edges: usize,
    /// Sampling plus training time.
    pub seconds: f64,
    pub sampling_secs: f64,
    pub training_secs: f64,
    pub est_peak_bytes: usize,
    pub peak_rss_bytes: Option<u64>,
    /// `ok`, or why the size could not be run.
    pub status: String,
}

impl BenchRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of ln(seconds) against ln(n) over successful rows.
    pub time_slope: Option<f64>,
    /// Same for the estimated peak bytes.
    pub memory_slope: Option<f64>,
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Least-squares slope of `ln y` on `ln x`. Needs two distinct positive `x`
/// and positive `y`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Run `runner` at every size. A failing size becomes a row with its error
/// as status and the remaining sizes still run.
pub fn run_bench<F>(sizes: &[usize], mut runner: F) -> BenchReport
where
    F: FnMut(usize) -> Result<Measurement>,
{
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let row = match runner(n) {
            Ok(m) => {
                info!(
                    "n = {n}: {:.2}s ({:.2}s sampling, {:.2}s training)",
                    m.sampling_secs + m.training_secs,
                    m.sampling_secs,
                    m.training_secs
                );
                BenchRow {
                    n,
                    edges: m.edges,
                    seconds: m.sampling_secs + m.training_secs,
                    sampling_secs: m.sampling_secs,
                    training_secs: m.training_secs,
                    est_peak_bytes: m.est_peak_bytes,
                    peak_rss_bytes: m.peak_rss_bytes,
                    status: "ok".into(),
                }
            }
            Err(e) => {
                warn!("n = {n} failed: {e}");
                BenchRow {
                    n,
                    edges: 0,
                    seconds: f64::NAN,
                    sampling_secs: f64::NAN,
                    training_secs: f64::NAN,
                    est_peak_bytes: 0,
                    peak_rss_bytes: None,
                    status: format!("failed: {e}"),
                }
            }
        };
        rows.push(row);
    }
    let ok: Vec<&BenchRow> = rows.iter().filter(|r| r.is_ok()).collect();
    let time_slope = loglog_slope(&ok.iter().map(|r| (r.n as f64, r.seconds)).collect::<Vec<_>>());
    let memory_slope = loglog_slope(
        &ok.iter()
            .map(|r| (r.n as f64, r.est_peak_bytes as f64))
            .collect::<Vec<_>>(),
    );
    BenchReport {
        rows,
        time_slope,
        memory_slope,
    }
}

/// Rough upper estimate of the bytes one run at `n` nodes needs.
pub fn estimate_bytes(n: usize, avg_degree: f64, cfg: &RunConfig) -> u64 {
    let n = n as f64;
    let walks = n * cfg.gamma as f64;
    let corpus = walks * (cfg.lambda as f64 * 4.0 + 8.0);
    // vocabulary: every node plus role tokens, bounded loosely
    let vocab = n * 1.1 + 4096.0;
    let model = 2.0 * vocab * cfg.dim as f64 * 4.0;
    let export = n * (cfg.dim as f64 * 4.0 + 32.0);
    let graph = n * (avg_degree * 4.0 + 72.0);
    (1.2 * (corpus + model + export + graph)) as u64
}

/// Runner that embeds a fresh Erdős–Rényi graph per size. Sizes whose
/// estimated footprint exceeds the memory currently available are refused
/// up front instead of being left to the allocator.
pub fn er_runner(avg_degree: f64, cfg: RunConfig, graph_seed: u64) -> impl FnMut(usize) -> Result<Measurement> {
    move |n| {
        let needed = estimate_bytes(n, avg_degree, &cfg);
        if let Some(available) = crate::resources::available_bytes() {
            if needed > available {
                return Err(Error::InsufficientMemory { needed, available });
            }
        }
        let g = erdos_renyi(n, avg_degree, graph_seed.wrapping_add(n as u64))?;
        crate::resources::reset_peak_rss();
        let run = embed_graph(&g, &cfg)?;
        Ok(Measurement {
            edges: g.edge_count(),
            sampling_secs: run.stats.sampling_secs,
            training_secs: run.stats.training_secs,
            est_peak_bytes: run.stats.est_peak_bytes,
            peak_rss_bytes: run.stats.peak_rss_bytes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_laws() {
        for k in [0.5, 1.0, 2.0] {
            let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(k))).collect();
            assert!((loglog_slope(&pts).unwrap() - k).abs() < 1e-12);
        }
        assert_eq!(loglog_slope(&[(10.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(10.0, 1.0), (10.0, 2.0)]), None);
    }

    #[test]
    fn quadratic_stub_fits_two() {
        let r = run_bench(&[100, 1000, 10000], |n| {
            Ok(Measurement {
                edges: n,
                sampling_secs: 1e-9 * (n * n) as f64,
                training_secs: 0.0,
                est_peak_bytes: n * 64,
                peak_rss_bytes: None,
            })
        });
        assert!((r.time_slope.unwrap() - 2.0).abs() < 1e-9);
        assert!((r.memory_slope.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn failures_become_rows() {
        let r = run_bench(&[10, 20, 30], |n| {
            if n == 20 {
                Err(Error::InsufficientMemory { needed: 2, available: 1 })
            } else {
                Ok(Measurement {
                    sampling_secs: n as f64,
                    est_peak_bytes: n,
                    ..Default::default()
                })
            }
        });
        assert_eq!(r.rows.len(), 3);
        assert!(r.rows[1].status.starts_with("failed: not enough memory"));
        assert!((r.time_slope.unwrap() - 1.0).abs() < 1e-12);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }

    #[test]
    fn tiny_er_run_gives_one_row() {
        let cfg = RunConfig {
            dim: 8,
            gamma: 2,
            epochs: 1,
            ..RunConfig::default()
        };
        let r = run_bench(&[100], er_runner(10.0, cfg, 1));
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].is_ok(), "{}", r.rows[0].status);
        assert!(r.rows[0].edges > 300);
    }
}
