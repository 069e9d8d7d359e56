//! Agent cognition: trend-detecting hidden-node activations, knowledge-based
//! operators that bias invention, and imitation candidate selection.
//!
//! The autoassociative network is modeled functionally. The MOVEMENT node
//! activates with the fraction of moving parts, the SYMMETRY node with the
//! fraction of limb pairs moving in the same direction; both feed back into
//! invention. With the net disabled agents invent at random.

use crate::action::{Action, BodyPart, Idea, PartState};
use crate::fitness::{evaluate, NeedConfig};
use rand::seq::SliceRandom;
use rand::Rng;

/// Hidden-node activations detected from the agent's current best idea.
/// `left`, `right`, `forelimb` and `hindlimb` are computed for completeness
/// but have no downstream role.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrendActivations {
    pub movement: f64,
    pub symmetry: f64,
    pub left: f64,
    pub right: f64,
    pub forelimb: f64,
    pub hindlimb: f64,
}

/// Activations of the trend-detecting hidden nodes for an idea.
pub fn compute_trends(idea: &Idea) -> TrendActivations {
    let moving = |p: BodyPart| idea.part(p).is_moving();
    let frac = |parts: &[BodyPart]| {
        parts.iter().filter(|&&p| moving(p)).count() as f64 / parts.len() as f64
    };
    let same_dir = |a: BodyPart, b: BodyPart| {
        let (pa, pb) = (idea.part(a), idea.part(b));
        pa.is_moving() && pa == pb
    };
    let pairs = [
        (BodyPart::LeftArm, BodyPart::RightArm),
        (BodyPart::LeftLeg, BodyPart::RightLeg),
    ];
    let symmetry = pairs.iter().filter(|&&(a, b)| same_dir(a, b)).count() as f64 / 2.0;
    TrendActivations {
        movement: frac(&BodyPart::ALL),
        symmetry,
        left: frac(&[BodyPart::LeftArm, BodyPart::LeftLeg]),
        right: frac(&[BodyPart::RightArm, BodyPart::RightLeg]),
        forelimb: frac(&[BodyPart::LeftArm, BodyPart::RightArm]),
        hindlimb: frac(&[BodyPart::LeftLeg, BodyPart::RightLeg]),
    }
}

/// One agent: its grid position, implemented action, best idea so far, and
/// the knowledge-based operator state used to bias invention.
#[derive(Clone, Debug)]
pub struct AgentState {
    pub position: (usize, usize),
    pub implemented: Action,
    pub best_idea: Idea,
    pub best_fitness: f64,
    pub trends: TrendActivations,
    pub p_invent: f64,
    pub net_enabled: bool,
}

impl AgentState {
    /// A fresh, immobile agent.
    pub fn new(position: (usize, usize), need: &NeedConfig, p_invent: f64, net_enabled: bool) -> AgentState {
        let idea = Action::stationary();
        AgentState {
            position,
            implemented: idea,
            best_idea: idea,
            best_fitness: evaluate(&idea, need),
            trends: TrendActivations::default(),
            p_invent,
            net_enabled,
        }
    }

    /// Refresh the knowledge-based operators from the current best idea.
    /// With the net off the trends stay zeroed and invention is unbiased.
    pub fn update_kbo(&mut self) {
        self.trends = if self.net_enabled {
            compute_trends(&self.best_idea)
        } else {
            TrendActivations::default()
        };
    }

    /// Invent a candidate idea by mutating the current best idea. Each part
    /// independently mutates with probability `p_change`; a mutating part is
    /// redrawn (possibly to its current state):
    ///
    /// - net off: uniform over the three states;
    /// - net on, paired limb with a moving partner: with probability
    ///   `trends.symmetry` copy the partner's state, else fall through;
    /// - net on otherwise: moving with probability (1 + movement)/2, split
    ///   evenly between up and down, else stationary.
    pub fn invent<R: Rng>(&self, p_change: f64, rng: &mut R) -> Idea {
        let mut idea = self.best_idea;
        for part in BodyPart::ALL {
            if !rng.gen_bool(p_change) {
                continue;
            }
            let new_state = self.draw_part_state(part, rng);
            idea.set_part(part, new_state);
        }
        idea
    }

    fn draw_part_state<R: Rng>(&self, part: BodyPart, rng: &mut R) -> PartState {
        if !self.net_enabled {
            return *PartState::ALL.choose(rng).unwrap();
        }
        if let Some(partner) = part.symmetric_partner() {
            let partner_state = self.best_idea.part(partner);
            if partner_state.is_moving() && rng.gen_bool(self.trends.symmetry) {
                return partner_state;
            }
        }
        let p_move = (1.0 + self.trends.movement) / 2.0;
        if rng.gen_bool(p_move) {
            if rng.gen_bool(0.5) {
                PartState::Up
            } else {
                PartState::Down
            }
        } else {
            PartState::Stationary
        }
    }

    /// Learn and implement a strictly fitter idea. The caller must have
    /// mentally simulated the idea first; adopting a non-improving idea is a
    /// contract violation.
    pub fn adopt(&mut self, idea: Idea, need: &NeedConfig) {
        let fitness = evaluate(&idea, need);
        assert!(
            fitness > self.best_fitness,
            "adopt requires a strictly fitter idea ({} <= {})",
            fitness,
            self.best_fitness
        );
        self.best_idea = idea;
        self.implemented = idea;
        self.best_fitness = fitness;
        self.update_kbo();
    }
}

/// Visit candidate actions in a uniformly random order and return the first
/// whose fitness strictly exceeds `own_fitness`, together with that fitness.
/// Returns `None` when every candidate has been observed without improvement.
pub fn select_imitation_target<R: Rng>(
    own_fitness: f64,
    candidates: &[(Action, f64)],
    rng: &mut R,
) -> Option<(Action, f64)> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.shuffle(rng);
    order
        .into_iter()
        .map(|i| candidates[i])
        .find(|&(_, fitness)| fitness > own_fitness)
}
