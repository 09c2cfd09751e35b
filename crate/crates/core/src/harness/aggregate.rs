//! Cross-seed statistics: learning curves and induction tables.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interleave::EpisodeMetrics;

#[derive(Debug, Error)]
pub enum AggregateError {
    #[error("no runs to aggregate")]
    Empty,
    #[error("run {index} has {got} episodes, expected {expected}")]
    LengthMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("{path}: {message}")]
    Read { path: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AggregateRow {
    pub episode: usize,
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Sample mean and standard error (0 for a single value).
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let (mean, sd) = mean_std(xs);
    (
        mean,
        if xs.len() > 1 {
            sd / (xs.len() as f64).sqrt()
        } else {
            0.0
        },
    )
}

/// Sample mean and standard deviation (0 for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Per-episode mean ± stderr of the greedy reward; a timed-out run counts
/// as 0 throughout.
pub fn aggregate_rewards(
    runs: &[Vec<f64>],
    timed_out: &[bool],
) -> Result<Vec<AggregateRow>, AggregateError> {
    let first = runs.first().ok_or(AggregateError::Empty)?;
    for (index, r) in runs.iter().enumerate() {
        if r.len() != first.len() {
            return Err(AggregateError::LengthMismatch {
                index,
                got: r.len(),
                expected: first.len(),
            });
        }
    }
    Ok((0..first.len())
        .map(|episode| {
            let xs: Vec<f64> = runs
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    if timed_out.get(i).copied().unwrap_or(false) {
                        0.0
                    } else {
                        r[episode]
                    }
                })
                .collect();
            let (mean, stderr) = mean_stderr(&xs);
            AggregateRow {
                episode,
                mean,
                stderr,
                n: xs.len(),
            }
        })
        .collect())
}

pub fn format_aggregate(rows: &[AggregateRow]) -> String {
    let mut out = String::from("episode,mean_greedy_reward,stderr,n_runs\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.episode, r.mean, r.stderr, r.n));
    }
    out
}

#[derive(Deserialize)]
struct MetricsRow {
    episode: usize,
    env_index: usize,
    train_reward: f64,
    greedy_mean_reward: f64,
    steps: usize,
    automata_learned_so_far: usize,
}

pub fn format_metrics(metrics: &[EpisodeMetrics]) -> String {
    let mut out = format!("{}\n", EpisodeMetrics::CSV_HEADER);
    for m in metrics {
        out.push_str(&m.csv_row());
        out.push('\n');
    }
    out
}

pub fn parse_metrics(text: &str) -> Result<Vec<EpisodeMetrics>, String> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize::<MetricsRow>()
        .map(|r| {
            let r = r.map_err(|e| e.to_string())?;
            Ok(EpisodeMetrics {
                episode: r.episode,
                env_index: r.env_index,
                train_reward: r.train_reward,
                greedy_mean_reward: r.greedy_mean_reward,
                steps: r.steps,
                automata_learned_so_far: r.automata_learned_so_far,
            })
        })
        .collect()
}

/// Aggregates per-run metric files; a `<stem>_summary.json` next to a file
/// marks whether that run timed out.
pub fn aggregate_files<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<AggregateRow>, AggregateError> {
    let mut runs = Vec::new();
    let mut timed_out = Vec::new();
    for p in paths {
        let p = p.as_ref();
        let read_err = |message: String| AggregateError::Read {
            path: p.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(p).map_err(|e| read_err(e.to_string()))?;
        let metrics = parse_metrics(&text).map_err(read_err)?;
        runs.push(metrics.iter().map(|m| m.greedy_mean_reward).collect());
        let summary = p.with_file_name(format!(
            "{}_summary.json",
            p.file_stem().unwrap_or_default().to_string_lossy()
        ));
        let flag = match std::fs::read_to_string(&summary) {
            Ok(s) => {
                serde_json::from_str::<RunSummary>(&s)
                    .map_err(|e| read_err(e.to_string()))?
                    .timed_out
            }
            Err(_) => false,
        };
        timed_out.push(flag);
    }
    aggregate_rewards(&runs, &timed_out)
}

/// What one run leaves behind for the induction table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub timed_out: bool,
    pub automata_learned: usize,
    pub final_states: usize,
    /// Total solver wall time over the run.
    pub solver_time_s: f64,
    /// Example counts and lengths behind the last automaton.
    pub n_goal: usize,
    pub n_dead: usize,
    pub n_inc: usize,
    pub mean_len: f64,
    pub std_len: f64,
}

/// Mean (stderr) of time and example counts and mean (stddev) of example
/// length over runs that learned an automaton without timing out.
pub fn induction_table(summaries: &[RunSummary]) -> String {
    let ok: Vec<&RunSummary> = summaries
        .iter()
        .filter(|s| !s.timed_out && s.automata_learned > 0)
        .collect();
    let col = |f: &dyn Fn(&RunSummary) -> f64| ok.iter().map(|s| f(s)).collect::<Vec<f64>>();
    let se = |xs: Vec<f64>| {
        let (m, e) = mean_stderr(&xs);
        format!("{m:.2} ({e:.2})")
    };
    let (len_mean, _) = mean_std(&col(&|s| s.mean_len));
    // pooled spread of example lengths, averaged over runs
    let (len_sd, _) = mean_std(&col(&|s| s.std_len));
    let mut out = String::from("runs,excluded,time_s,n_goal,n_dead,n_inc,example_len\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{:.2} ({:.2})\n",
        ok.len(),
        summaries.len() - ok.len(),
        se(col(&|s| s.solver_time_s)),
        se(col(&|s| s.n_goal as f64)),
        se(col(&|s| s.n_dead as f64)),
        se(col(&|s| s.n_inc as f64)),
        len_mean,
        len_sd
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_run_has_no_error() {
        let rows = aggregate_rewards(&[vec![0.0, 1.0]], &[false]).unwrap();
        assert_eq!(
            rows[1],
            AggregateRow {
                episode: 1,
                mean: 1.0,
                stderr: 0.0,
                n: 1
            }
        );
    }

    #[test]
    fn two_runs() {
        let rows = aggregate_rewards(&[vec![0.0], vec![1.0]], &[false, false]).unwrap();
        assert_eq!(rows[0].mean, 0.5);
        // sd = sqrt(0.5), stderr = sd / sqrt(2) = 0.5
        assert!((rows[0].stderr - 0.5).abs() < 1e-12);
    }

    #[test]
    fn timed_out_runs_read_zero() {
        let rows = aggregate_rewards(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[false, true]).unwrap();
        assert!(rows.iter().all(|r| r.mean == 0.5));
    }

    #[test]
    fn mismatched_lengths() {
        assert!(matches!(
            aggregate_rewards(&[vec![1.0], vec![1.0, 0.0]], &[]),
            Err(AggregateError::LengthMismatch {
                index: 1,
                got: 2,
                expected: 1
            })
        ));
        assert!(matches!(
            aggregate_rewards(&[], &[]),
            Err(AggregateError::Empty)
        ));
    }

    #[test]
    fn metrics_round_trip() {
        let m = vec![EpisodeMetrics {
            episode: 0,
            env_index: 2,
            train_reward: 1.0,
            greedy_mean_reward: 0.25,
            steps: 17,
            automata_learned_so_far: 1,
        }];
        assert_eq!(parse_metrics(&format_metrics(&m)).unwrap(), m);
    }

    #[test]
    fn table_skips_failed_runs() {
        let run = |seed, timed_out, learned, t| RunSummary {
            seed,
            timed_out,
            automata_learned: learned,
            final_states: 4,
            solver_time_s: t,
            n_goal: 2,
            n_dead: 3,
            n_inc: 0,
            mean_len: 3.0,
            std_len: 1.0,
        };
        let t = induction_table(&[
            run(0, false, 2, 1.0),
            run(1, false, 2, 3.0),
            run(2, true, 1, 99.0),
            run(3, false, 0, 0.0),
        ]);
        let row = t.lines().nth(1).unwrap();
        assert!(row.starts_with("2,2,2.00 (1.00),2.00 (0.00)"), "{row}");
    }
}
