//! Per-iteration and cross-run statistics: mean fitness, diversity (count of
//! distinct implemented actions), convergence latency, drift frequencies,
//! and replicate aggregation with standard errors.

use crate::action::{Action, ActionId, BodyPart, PartState};
use crate::cognition::AgentState;
use crate::error::ConfigError;
use crate::fitness::{evaluate, fitness_f2, NeedConfig};
use std::collections::HashSet;

/// One iteration's worth of observables, with an optional full grid of
/// implemented action ids (-1 marks an empty cell).
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsFrame {
    pub iteration: u32,
    pub mean_fitness: f64,
    pub diversity: usize,
    pub grid: Option<Vec<i32>>,
}

/// Arithmetic mean of the implemented actions' fitness.
pub fn mean_fitness(agents: &[AgentState], need: &NeedConfig) -> f64 {
    assert!(!agents.is_empty(), "empty population");
    agents
        .iter()
        .map(|a| evaluate(&a.implemented, need))
        .sum::<f64>()
        / agents.len() as f64
}

/// Number of distinct implemented actions across the population.
pub fn diversity(agents: &[AgentState]) -> usize {
    agents
        .iter()
        .map(|a| a.implemented.encode())
        .collect::<HashSet<ActionId>>()
        .len()
}

/// Diversity recomputed from a grid snapshot (distinct non-negative ids).
pub fn grid_diversity(grid: &[i32]) -> usize {
    grid.iter()
        .filter(|&&v| v >= 0)
        .collect::<HashSet<_>>()
        .len()
}

/// First iteration at which mean fitness reaches `fraction` of `optimum`,
/// or `None` if the log never gets there.
pub fn convergence_iteration(
    frames: &[MetricsFrame],
    fraction: f64,
    optimum: f64,
) -> Result<Option<u32>, ConfigError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(ConfigError::new(format!("fraction {fraction} out of (0, 1]")));
    }
    Ok(frames
        .iter()
        .find(|f| f.mean_fitness >= fraction * optimum)
        .map(|f| f.iteration))
}

/// Disjoint groups of action ids, for tracking the relative frequency of
/// equally fit variants (drift).
#[derive(Clone, Debug)]
pub struct Partition {
    cells: Vec<Vec<ActionId>>,
}

impl Partition {
    pub fn new(cells: Vec<Vec<ActionId>>) -> Result<Partition, ConfigError> {
        let mut seen = HashSet::new();
        for cell in &cells {
            for id in cell {
                if !seen.insert(*id) {
                    return Err(ConfigError::new(format!(
                        "partition cells overlap on action id {id}"
                    )));
                }
            }
        }
        Ok(Partition { cells })
    }

    pub fn cells(&self) -> &[Vec<ActionId>] {
        &self.cells
    }

    /// F2-optimal actions split by head direction: cell 0 = head up,
    /// cell 1 = head down. The two variants are equally fit, so their
    /// relative frequency is shaped by sampling alone.
    pub fn f2_optima_by_head_direction() -> Partition {
        let mut up = Vec::new();
        let mut down = Vec::new();
        for a in Action::enumerate_all() {
            if fitness_f2(&a) == 10.0 {
                match a.part(BodyPart::Head) {
                    PartState::Up => up.push(a.encode()),
                    PartState::Down => down.push(a.encode()),
                    PartState::Stationary => unreachable!("F2 optimum requires a moving head"),
                }
            }
        }
        Partition::new(vec![up, down]).unwrap()
    }
}

/// Per-iteration fraction of agents implementing an action in each partition
/// cell. Requires grid snapshots on every frame.
pub fn drift_frequencies(
    frames: &[MetricsFrame],
    partition: &Partition,
) -> Result<Vec<Vec<f64>>, ConfigError> {
    let lookup: Vec<HashSet<i32>> = partition
        .cells
        .iter()
        .map(|cell| cell.iter().map(|id| id.0 as i32).collect())
        .collect();
    frames
        .iter()
        .map(|frame| {
            let grid = frame
                .grid
                .as_ref()
                .ok_or_else(|| ConfigError::new("drift frequencies need grid snapshots"))?;
            let total = grid.iter().filter(|&&v| v >= 0).count();
            if total == 0 {
                return Err(ConfigError::new("empty population in frame"));
            }
            Ok(lookup
                .iter()
                .map(|cell| {
                    grid.iter().filter(|&&v| v >= 0 && cell.contains(&v)).count() as f64
                        / total as f64
                })
                .collect())
        })
        .collect()
}

/// Means of means across replicates, with standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateSeries {
    pub iterations: Vec<u32>,
    pub mean_fitness_mean: Vec<f64>,
    pub mean_fitness_se: Vec<f64>,
    pub diversity_mean: Vec<f64>,
    pub diversity_se: Vec<f64>,
    pub replicates: usize,
}

/// Aggregate equal-length replicate logs into per-iteration means and
/// standard errors (sample stddev / sqrt(n); zero for a single replicate).
pub fn aggregate<S: AsRef<[MetricsFrame]>>(logs: &[S]) -> Result<AggregateSeries, ConfigError> {
    let first = logs
        .first()
        .ok_or_else(|| ConfigError::new("no replicate logs to aggregate"))?
        .as_ref();
    let len = first.len();
    if logs.iter().any(|l| l.as_ref().len() != len) {
        return Err(ConfigError::new("replicate logs have mismatched lengths"));
    }
    let n = logs.len();
    let mean_se = |values: &[f64]| -> (f64, f64) {
        let mean = values.iter().sum::<f64>() / n as f64;
        if n < 2 {
            return (mean, 0.0);
        }
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (mean, var.sqrt() / (n as f64).sqrt())
    };
    let mut out = AggregateSeries {
        iterations: first.iter().map(|f| f.iteration).collect(),
        mean_fitness_mean: Vec::with_capacity(len),
        mean_fitness_se: Vec::with_capacity(len),
        diversity_mean: Vec::with_capacity(len),
        diversity_se: Vec::with_capacity(len),
        replicates: n,
    };
    for i in 0..len {
        let fit: Vec<f64> = logs.iter().map(|l| l.as_ref()[i].mean_fitness).collect();
        let div: Vec<f64> = logs.iter().map(|l| l.as_ref()[i].diversity as f64).collect();
        let (fm, fse) = mean_se(&fit);
        let (dm, dse) = mean_se(&div);
        out.mean_fitness_mean.push(fm);
        out.mean_fitness_se.push(fse);
        out.diversity_mean.push(dm);
        out.diversity_se.push(dse);
    }
    Ok(out)
}
