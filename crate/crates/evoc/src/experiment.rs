//! Batch experiment execution: run a manifest's replicates (in parallel),
//! write per-replicate and aggregated CSV plus grid snapshots.

use crate::engine::{self, RunLog};
use crate::error::ConfigError;
use crate::manifest::RunManifest;
use crate::metrics::{self, AggregateSeries, MetricsFrame};
use rayon::prelude::*;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Paths produced by one experiment.
#[derive(Debug)]
pub struct ExperimentOutput {
    pub per_replicate: Vec<PathBuf>,
    pub aggregated: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

/// Render a grid snapshot as one row per line, space-separated action ids,
/// -1 for empty cells.
pub fn emit_snapshot(grid: &[i32], cols: usize) -> String {
    grid.chunks(cols)
        .map(|row| {
            row.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Execute every replicate of a manifest. Replicate r is seeded with
/// `manifest.seed + r`, so a batch is reproducible run-to-run and the
/// replicates are independent of dispatch order.
pub fn run_replicates(manifest: &RunManifest) -> Result<Vec<RunLog>, ConfigError> {
    manifest.validate()?;
    let world = manifest.world_config();
    (0..manifest.replicates)
        .into_par_iter()
        .map(|r| {
            engine::run(
                &manifest.sim_config(r),
                &world,
                &manifest.borders,
                manifest.broadcasters.as_ref(),
                manifest.snapshot_every,
            )
        })
        .collect()
}

/// Run a manifest and write its outputs under `out_dir`:
/// `run_NNN.csv` per replicate, `aggregated.csv`, and
/// `snap_rNNN_tTTTT.txt` for every recorded grid.
pub fn run_experiment(manifest: &RunManifest, out_dir: &Path) -> Result<ExperimentOutput, RunError> {
    let logs = run_replicates(manifest)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let mut per_replicate = Vec::new();
    let mut snapshots = Vec::new();
    for (r, log) in logs.iter().enumerate() {
        let path = out_dir.join(format!("run_{r:03}.csv"));
        write_replicate_csv(&path, r, log.frames())?;
        per_replicate.push(path);
        for frame in log.frames() {
            if let Some(grid) = &frame.grid {
                let path = out_dir.join(format!("snap_r{r:03}_t{:04}.txt", frame.iteration));
                let mut body = emit_snapshot(grid, manifest.cols);
                body.push('\n');
                fs::write(&path, body).map_err(io_err(&path))?;
                snapshots.push(path);
            }
        }
    }

    let frame_sets: Vec<&[MetricsFrame]> = logs.iter().map(|l| l.frames()).collect();
    let agg = metrics::aggregate(&frame_sets)?;
    let aggregated = out_dir.join("aggregated.csv");
    write_aggregated_csv(&aggregated, &agg)?;

    Ok(ExperimentOutput {
        per_replicate,
        aggregated,
        snapshots,
    })
}

fn write_replicate_csv(path: &Path, run_id: usize, frames: &[MetricsFrame]) -> Result<(), RunError> {
    let mut out = String::from("run_id,iteration,mean_fitness,diversity\n");
    for f in frames {
        out.push_str(&format!(
            "{},{},{:.6},{}\n",
            run_id, f.iteration, f.mean_fitness, f.diversity
        ));
    }
    write_atomic(path, &out)
}

fn write_aggregated_csv(path: &Path, agg: &AggregateSeries) -> Result<(), RunError> {
    let mut out =
        String::from("iteration,mean_fitness_mean,mean_fitness_se,diversity_mean,diversity_se,replicates\n");
    for i in 0..agg.iterations.len() {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{:.6},{}\n",
            agg.iterations[i],
            agg.mean_fitness_mean[i],
            agg.mean_fitness_se[i],
            agg.diversity_mean[i],
            agg.diversity_se[i],
            agg.replicates
        ));
    }
    write_atomic(path, &out)
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), RunError> {
    let mut file = fs::File::create(path).map_err(io_err(path))?;
    file.write_all(contents.as_bytes()).map_err(io_err(path))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::grid_diversity;

    fn small_manifest() -> RunManifest {
        RunManifest {
            rows: 5,
            cols: 5,
            iterations: 10,
            replicates: 2,
            ..RunManifest::default()
        }
    }

    #[test]
    fn snapshot_rendering() {
        assert_eq!(emit_snapshot(&[0, 0, 0, 0], 2), "0 0\n0 0");
        assert_eq!(emit_snapshot(&[3, -1, 0, 7], 2), "3 -1\n0 7");
    }

    #[test]
    fn snapshot_diversity_matches_metrics() {
        let manifest = RunManifest {
            snapshot_every: Some(5),
            ..small_manifest()
        };
        let logs = run_replicates(&manifest).unwrap();
        for log in &logs {
            for frame in log.frames() {
                if let Some(grid) = &frame.grid {
                    assert_eq!(grid_diversity(grid), frame.diversity);
                }
            }
        }
    }

    #[test]
    fn experiment_outputs_expected_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&small_manifest(), dir.path()).unwrap();
        assert_eq!(out.per_replicate.len(), 2);
        assert!(out.snapshots.is_empty());

        let agg = fs::read_to_string(&out.aggregated).unwrap();
        let lines: Vec<&str> = agg.lines().collect();
        // header + t=0..10
        assert_eq!(lines.len(), 12);
        assert_eq!(
            lines[0],
            "iteration,mean_fitness_mean,mean_fitness_se,diversity_mean,diversity_se,replicates"
        );
        assert!(lines[1].starts_with("0,0.000000,"));

        let rep = fs::read_to_string(&out.per_replicate[1]).unwrap();
        assert!(rep.starts_with("run_id,iteration,mean_fitness,diversity\n1,0,"));
        assert!(rep.ends_with('\n'));
    }

    #[test]
    fn same_manifest_same_bytes() {
        let manifest = RunManifest {
            snapshot_every: Some(5),
            ..small_manifest()
        };
        let read_all = |dir: &Path| -> Vec<(String, Vec<u8>)> {
            let mut entries: Vec<_> = fs::read_dir(dir)
                .unwrap()
                .map(|e| e.unwrap().path())
                .collect();
            entries.sort();
            entries
                .into_iter()
                .map(|p| {
                    (
                        p.file_name().unwrap().to_string_lossy().into_owned(),
                        fs::read(&p).unwrap(),
                    )
                })
                .collect()
        };
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        run_experiment(&manifest, d1.path()).unwrap();
        run_experiment(&manifest, d2.path()).unwrap();
        assert_eq!(read_all(d1.path()), read_all(d2.path()));
    }

    #[test]
    fn unwritable_output_path_errors() {
        let manifest = small_manifest();
        let err = run_experiment(&manifest, Path::new("/proc/definitely/not/writable")).unwrap_err();
        assert!(matches!(err, RunError::Io { .. }));
    }
}
