//! The iteration protocol: synchronous rounds in which every agent either
//! invents or imitates, mentally simulates the candidate, and adopts it only
//! if strictly fitter. Runs are pure functions of their configuration,
//! including the seed.

use crate::action::{Action, ACTION_COUNT};
use crate::cognition::{select_imitation_target, AgentState};
use crate::error::ConfigError;
use crate::fitness::{evaluate, NeedConfig};
use crate::metrics::{self, MetricsFrame};
use crate::world::{Border, BroadcastSchedule, BroadcasterConfig, World, WorldConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Invention-to-imitation ratio override for agents at or right of a column.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRegion {
    pub col_from: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub need: NeedConfig,
    /// Odds that an acquisition attempt is an invention rather than an
    /// imitation; p_invent = ratio / (ratio + 1).
    pub ratio: f64,
    pub ratio_region: Option<RatioRegion>,
    /// Per-part mutation probability during invention.
    pub p_change: f64,
    pub iterations: u32,
    pub seed: u64,
    pub net_enabled: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.need.validate()?;
        if !(self.ratio > 0.0 && self.ratio.is_finite()) {
            return Err(ConfigError::new(format!("ratio {} must be positive", self.ratio)));
        }
        if let Some(r) = &self.ratio_region {
            if !(r.ratio > 0.0 && r.ratio.is_finite()) {
                return Err(ConfigError::new(format!(
                    "region ratio {} must be positive",
                    r.ratio
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.p_change) {
            return Err(ConfigError::new(format!("p_change {} out of [0, 1]", self.p_change)));
        }
        Ok(())
    }
}

/// How broadcasters are picked: explicit agent ids, or drawn at random from
/// the placed population at init.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BroadcasterSelection {
    Ids(Vec<usize>),
    Random(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BroadcasterSetup {
    pub selection: BroadcasterSelection,
    pub schedule: BroadcastSchedule,
}

fn p_invent_from_ratio(ratio: f64) -> f64 {
    ratio / (ratio + 1.0)
}

/// A running simulation: world geometry, agents, and the single rng that
/// drives every stochastic decision in fixed agent-index order.
pub struct Simulation {
    iteration: u32,
    agents: Vec<AgentState>,
    world: World,
    broadcasters: Option<BroadcasterConfig>,
    need: NeedConfig,
    p_change: f64,
    fitness_table: Vec<f64>,
    rng: ChaCha8Rng,
}

impl Simulation {
    pub fn new(
        sim: &SimConfig,
        world_cfg: &WorldConfig,
        borders: &[Border],
        broadcasters: Option<&BroadcasterSetup>,
    ) -> Result<Simulation, ConfigError> {
        sim.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
        let world = World::place_agents(world_cfg, borders.to_vec(), &mut rng)?;

        let agents: Vec<AgentState> = world
            .positions()
            .iter()
            .map(|&pos| {
                let ratio = match &sim.ratio_region {
                    Some(region) if pos.1 >= region.col_from => region.ratio,
                    _ => sim.ratio,
                };
                AgentState::new(pos, &sim.need, p_invent_from_ratio(ratio), sim.net_enabled)
            })
            .collect();

        let broadcasters = match broadcasters {
            None => None,
            Some(setup) => {
                let agent_ids = match &setup.selection {
                    BroadcasterSelection::Ids(ids) => ids.clone(),
                    BroadcasterSelection::Random(count) => {
                        if *count == 0 || *count > agents.len() {
                            return Err(ConfigError::new(format!(
                                "cannot draw {count} broadcasters from {} agents",
                                agents.len()
                            )));
                        }
                        let mut ids =
                            rand::seq::index::sample(&mut rng, agents.len(), *count).into_vec();
                        ids.sort_unstable();
                        ids
                    }
                };
                let cfg = BroadcasterConfig {
                    agent_ids,
                    schedule: setup.schedule,
                };
                cfg.validate(agents.len())?;
                Some(cfg)
            }
        };

        let fitness_table: Vec<f64> = Action::enumerate_all()
            .map(|a| evaluate(&a, &sim.need))
            .collect();
        debug_assert_eq!(fitness_table.len(), ACTION_COUNT as usize);

        Ok(Simulation {
            iteration: 0,
            agents,
            world,
            broadcasters,
            need: sim.need,
            p_change: sim.p_change,
            fitness_table,
            rng,
        })
    }

    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn broadcasters(&self) -> Option<&BroadcasterConfig> {
        self.broadcasters.as_ref()
    }

    fn fitness_of(&self, action: &Action) -> f64 {
        self.fitness_table[action.encode().0 as usize]
    }

    /// One synchronous iteration. Agents observe the actions implemented at
    /// the end of the previous iteration; adoptions become visible to others
    /// only at the next step.
    pub fn step(&mut self) {
        let t = self.iteration;
        let prev: Vec<(Action, f64)> = self
            .agents
            .iter()
            .map(|a| (a.implemented, self.fitness_of(&a.implemented)))
            .collect();
        let active: Vec<usize> = self
            .broadcasters
            .as_ref()
            .map(|b| b.active_at(t).to_vec())
            .unwrap_or_default();

        let mut candidates: Vec<(Action, f64)> = Vec::with_capacity(8 + active.len());
        for i in 0..self.agents.len() {
            let inventing = self.rng.gen_bool(self.agents[i].p_invent);
            if inventing {
                let idea = self.agents[i].invent(self.p_change, &mut self.rng);
                if self.fitness_of(&idea) > self.agents[i].best_fitness {
                    self.agents[i].adopt(idea, &self.need);
                }
            } else {
                candidates.clear();
                let pos = self.agents[i].position;
                for npos in self.world.neighbors(pos) {
                    let j = self.world.agent_at(npos).expect("neighbor occupied");
                    let crossed = self.world.borders_crossed(pos, npos);
                    if World::imitation_permitted(&crossed, t, &mut self.rng) {
                        candidates.push(prev[j]);
                    }
                }
                // broadcasts penetrate borders; with several broadcasters
                // active, each attempt tunes in to one of them at random,
                // so a single leader's pull dilutes as leaders multiply
                let tuned: Vec<usize> = active.iter().copied().filter(|&b| b != i).collect();
                if !tuned.is_empty() {
                    let b = tuned[self.rng.gen_range(0..tuned.len())];
                    candidates.push(prev[b]);
                }
                if let Some((action, _)) = select_imitation_target(
                    self.agents[i].best_fitness,
                    &candidates,
                    &mut self.rng,
                ) {
                    self.agents[i].adopt(action, &self.need);
                }
            }
            self.agents[i].update_kbo();
        }
        self.iteration = t + 1;
    }

    /// Current observables, optionally with the full action-id grid.
    pub fn frame(&self, with_grid: bool) -> MetricsFrame {
        MetricsFrame {
            iteration: self.iteration,
            mean_fitness: metrics::mean_fitness(&self.agents, &self.need),
            diversity: metrics::diversity(&self.agents),
            grid: with_grid.then(|| self.grid_snapshot()),
        }
    }

    /// Row-major grid of implemented action ids, -1 for empty cells.
    pub fn grid_snapshot(&self) -> Vec<i32> {
        let mut grid = vec![-1i32; self.world.rows * self.world.cols];
        for agent in &self.agents {
            let (r, c) = agent.position;
            grid[r * self.world.cols + c] = agent.implemented.encode().0 as i32;
        }
        grid
    }
}

/// A completed run: one frame per iteration (including the initial state)
/// plus the final simulation for direct inspection.
pub struct RunLog {
    pub frames: Vec<MetricsFrame>,
    pub final_state: Simulation,
}

impl RunLog {
    pub fn frames(&self) -> &[MetricsFrame] {
        &self.frames
    }
}

/// Run to completion, recording a frame per iteration. Grids are attached to
/// frames at iterations divisible by `snapshot_every` (including t = 0).
pub fn run(
    sim: &SimConfig,
    world_cfg: &WorldConfig,
    borders: &[Border],
    broadcasters: Option<&BroadcasterSetup>,
    snapshot_every: Option<u32>,
) -> Result<RunLog, ConfigError> {
    let mut state = Simulation::new(sim, world_cfg, borders, broadcasters)?;
    let snap = |t: u32| snapshot_every.is_some_and(|k| k > 0 && t.is_multiple_of(k));
    let mut frames = Vec::with_capacity(sim.iterations as usize + 1);
    frames.push(state.frame(snap(0)));
    for _ in 0..sim.iterations {
        state.step();
        frames.push(state.frame(snap(state.iteration)));
    }
    Ok(RunLog {
        frames,
        final_state: state,
    })
}
