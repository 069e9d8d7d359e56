//! Grid geometry: topology, agent placement, Moore neighborhoods, borders
//! with permeability schedules, and broadcaster scheduling.

use crate::error::ConfigError;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Wrap-around adjacency on both axes.
    Toroidal,
    /// Neighborhoods truncate at the edges.
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Draw floor(density * rows * cols) distinct cells uniformly at random.
    Uniform,
    /// Occupy exactly the listed (row, col) cells.
    Explicit(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
    pub density: f64,
    pub placement: Placement,
}

impl WorldConfig {
    pub fn full(rows: usize, cols: usize, topology: Topology) -> WorldConfig {
        WorldConfig {
            rows,
            cols,
            topology,
            density: 1.0,
            placement: Placement::Uniform,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(ConfigError::new("world dimensions must be positive"));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(ConfigError::new(format!(
                "density {} out of (0, 1]",
                self.density
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Lies between column `index` and column `index + 1`.
    Vertical,
    /// Lies between row `index` and row `index + 1`.
    Horizontal,
}

/// A semi-permeable frontier. Imitation across it succeeds with probability
/// `permeability(t)`, which ramps linearly from `p_start` to `p_end` between
/// iterations `t_start` and `t_end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Border {
    pub orientation: Orientation,
    pub index: usize,
    pub p_start: f64,
    pub p_end: f64,
    pub t_start: u32,
    pub t_end: u32,
}

impl Border {
    pub fn permeability(&self, t: u32) -> f64 {
        if t <= self.t_start || self.t_end <= self.t_start {
            self.p_start
        } else if t >= self.t_end {
            self.p_end
        } else {
            let frac = (t - self.t_start) as f64 / (self.t_end - self.t_start) as f64;
            self.p_start + (self.p_end - self.p_start) * frac
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for p in [self.p_start, self.p_end] {
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::new(format!("border permeability {p} out of [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BroadcastSchedule {
    Constant,
    /// Active on iterations t with (t mod period) < duty.
    Intermittent { period: u32, duty: u32 },
}

/// Agents whose actions are globally visible as imitation sources.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BroadcasterConfig {
    pub agent_ids: Vec<usize>,
    pub schedule: BroadcastSchedule,
}

impl BroadcasterConfig {
    pub fn validate(&self, agent_count: usize) -> Result<(), ConfigError> {
        if self.agent_ids.is_empty() {
            return Err(ConfigError::new("broadcasting enabled with no broadcasters"));
        }
        if let Some(&id) = self.agent_ids.iter().find(|&&id| id >= agent_count) {
            return Err(ConfigError::new(format!(
                "broadcaster id {id} out of range (agents: {agent_count})"
            )));
        }
        if let BroadcastSchedule::Intermittent { period, duty } = self.schedule {
            if period == 0 || duty > period {
                return Err(ConfigError::new(format!(
                    "intermittent schedule requires 0 < duty <= period (got period={period}, duty={duty})"
                )));
            }
        }
        Ok(())
    }

    /// Ids broadcasting at iteration `t`.
    pub fn active_at(&self, t: u32) -> &[usize] {
        match self.schedule {
            BroadcastSchedule::Constant => &self.agent_ids,
            BroadcastSchedule::Intermittent { period, duty } => {
                if t % period < duty {
                    &self.agent_ids
                } else {
                    &[]
                }
            }
        }
    }
}

/// Immutable run geometry: occupancy plus configured borders.
#[derive(Clone, Debug)]
pub struct World {
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
    grid: Vec<Option<usize>>,
    positions: Vec<(usize, usize)>,
    borders: Vec<Border>,
}

impl World {
    pub fn place_agents<R: Rng>(
        cfg: &WorldConfig,
        borders: Vec<Border>,
        rng: &mut R,
    ) -> Result<World, ConfigError> {
        cfg.validate()?;
        for b in &borders {
            b.validate()?;
        }
        let cells = cfg.rows * cfg.cols;
        let positions: Vec<(usize, usize)> = match &cfg.placement {
            Placement::Uniform => {
                let count = (cfg.density * cells as f64).floor() as usize;
                if count == 0 {
                    return Err(ConfigError::new("density too low: zero agents"));
                }
                let mut chosen = rand::seq::index::sample(rng, cells, count).into_vec();
                chosen.sort_unstable();
                chosen
                    .into_iter()
                    .map(|i| (i / cfg.cols, i % cfg.cols))
                    .collect()
            }
            Placement::Explicit(list) => {
                if list.is_empty() {
                    return Err(ConfigError::new("explicit placement list is empty"));
                }
                list.clone()
            }
        };
        let mut grid = vec![None; cells];
        for (id, &(r, c)) in positions.iter().enumerate() {
            if r >= cfg.rows || c >= cfg.cols {
                return Err(ConfigError::new(format!("cell ({r}, {c}) out of bounds")));
            }
            let slot = &mut grid[r * cfg.cols + c];
            if slot.is_some() {
                return Err(ConfigError::new(format!("cell ({r}, {c}) occupied twice")));
            }
            *slot = Some(id);
        }
        Ok(World {
            rows: cfg.rows,
            cols: cfg.cols,
            topology: cfg.topology,
            grid,
            positions,
            borders,
        })
    }

    pub fn agent_count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    pub fn borders(&self) -> &[Border] {
        &self.borders
    }

    pub fn agent_at(&self, pos: (usize, usize)) -> Option<usize> {
        self.grid[pos.0 * self.cols + pos.1]
    }

    /// Occupied cells in the Moore neighborhood of `pos`, in a fixed scan
    /// order so runs stay deterministic.
    pub fn neighbors(&self, pos: (usize, usize)) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(8);
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let r = pos.0 as i64 + dr;
                let c = pos.1 as i64 + dc;
                let wrapped = match self.topology {
                    Topology::Toroidal => (
                        r.rem_euclid(self.rows as i64) as usize,
                        c.rem_euclid(self.cols as i64) as usize,
                    ),
                    Topology::Bounded => {
                        if r < 0 || c < 0 || r >= self.rows as i64 || c >= self.cols as i64 {
                            continue;
                        }
                        (r as usize, c as usize)
                    }
                };
                if wrapped == pos {
                    continue; // degenerate wrap on a 1-wide axis
                }
                if self.agent_at(wrapped).is_some() && !out.contains(&wrapped) {
                    out.push(wrapped);
                }
            }
        }
        out
    }

    /// Every configured border separating neighboring cells `a` and `b`.
    /// On a torus, wrap adjacency crosses the border at the seam index
    /// (rows-1 / cols-1) when one is configured there.
    pub fn borders_crossed(&self, a: (usize, usize), b: (usize, usize)) -> Vec<Border> {
        self.borders
            .iter()
            .filter(|border| {
                let (axis_len, xa, xb) = match border.orientation {
                    Orientation::Vertical => (self.cols, a.1, b.1),
                    Orientation::Horizontal => (self.rows, a.0, b.0),
                };
                if xa == xb {
                    return false;
                }
                let (lo, hi) = (xa.min(xb), xa.max(xb));
                let direct = hi - lo == 1 && border.index == lo;
                let wrap = self.topology == Topology::Toroidal
                    && lo == 0
                    && hi == axis_len - 1
                    && border.index == axis_len - 1;
                direct || wrap
            })
            .copied()
            .collect()
    }

    /// Whether an imitation attempt passes every border between the two
    /// agents at iteration `t`. Each crossed border blocks independently
    /// with probability 1 - permeability(t).
    pub fn imitation_permitted<R: Rng>(crossed: &[Border], t: u32, rng: &mut R) -> bool {
        crossed.iter().all(|b| {
            let p = b.permeability(t);
            p > 0.0 && rng.gen_bool(p)
        })
    }
}
