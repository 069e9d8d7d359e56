//! The discrete action space: six body parts, each stationary, up, or down,
//! giving 729 possible actions. Actions and ideas share this thresholded
//! representation, and every action has a canonical integer id used in CSV
//! output and grid snapshots.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Position of a single body part after thresholding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartState {
    Stationary,
    Up,
    Down,
}

impl PartState {
    pub const ALL: [PartState; 3] = [PartState::Stationary, PartState::Up, PartState::Down];

    /// Node activation corresponding to this state.
    pub fn activation(self) -> f64 {
        match self {
            PartState::Stationary => 0.0,
            PartState::Up => 0.5,
            PartState::Down => -0.5,
        }
    }

    pub fn is_moving(self) -> bool {
        self != PartState::Stationary
    }

    fn digit(self) -> u16 {
        match self {
            PartState::Stationary => 0,
            PartState::Up => 1,
            PartState::Down => 2,
        }
    }

    fn from_digit(d: u16) -> PartState {
        match d {
            0 => PartState::Stationary,
            1 => PartState::Up,
            _ => PartState::Down,
        }
    }
}

/// Canonical ordering of the six body parts; also the digit order of the
/// integer encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyPart {
    LeftArm = 0,
    RightArm = 1,
    LeftLeg = 2,
    RightLeg = 3,
    Head = 4,
    Hips = 5,
}

impl BodyPart {
    pub const ALL: [BodyPart; 6] = [
        BodyPart::LeftArm,
        BodyPart::RightArm,
        BodyPart::LeftLeg,
        BodyPart::RightLeg,
        BodyPart::Head,
        BodyPart::Hips,
    ];

    /// The mirror-image partner for symmetry detection, if any.
    pub fn symmetric_partner(self) -> Option<BodyPart> {
        match self {
            BodyPart::LeftArm => Some(BodyPart::RightArm),
            BodyPart::RightArm => Some(BodyPart::LeftArm),
            BodyPart::LeftLeg => Some(BodyPart::RightLeg),
            BodyPart::RightLeg => Some(BodyPart::LeftLeg),
            BodyPart::Head | BodyPart::Hips => None,
        }
    }
}

/// Number of distinct actions: 3^6.
pub const ACTION_COUNT: u16 = 729;

/// Wire representation of an action: an integer in [0, 728].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionId(pub u16);

impl std::fmt::Display for ActionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("action id {0} out of range (valid: 0..=728)")]
pub struct ActionIdOutOfRange(pub u16);

/// An implemented behavior: one state per body part, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Action {
    parts: [PartState; 6],
}

/// An agent's internal representation of an action. Both fitness evaluation
/// and imitation observe only thresholded part states, so ideas live in the
/// same space as actions.
pub type Idea = Action;

impl Action {
    pub fn new(parts: [PartState; 6]) -> Action {
        Action { parts }
    }

    /// The all-stationary action (id 0); every agent starts here.
    pub fn stationary() -> Action {
        Action {
            parts: [PartState::Stationary; 6],
        }
    }

    pub fn part(&self, p: BodyPart) -> PartState {
        self.parts[p as usize]
    }

    pub fn parts(&self) -> &[PartState; 6] {
        &self.parts
    }

    pub fn set_part(&mut self, p: BodyPart, s: PartState) {
        self.parts[p as usize] = s;
    }

    /// Canonical base-3 encoding: part k contributes digit_k * 3^k, with
    /// Stationary=0, Up=1, Down=2.
    pub fn encode(&self) -> ActionId {
        let mut id = 0u16;
        for k in (0..6).rev() {
            id = id * 3 + self.parts[k].digit();
        }
        ActionId(id)
    }

    /// Inverse of [`Action::encode`].
    pub fn decode(id: ActionId) -> Result<Action, ActionIdOutOfRange> {
        if id.0 >= ACTION_COUNT {
            return Err(ActionIdOutOfRange(id.0));
        }
        let mut rem = id.0;
        let mut parts = [PartState::Stationary; 6];
        for part in parts.iter_mut() {
            *part = PartState::from_digit(rem % 3);
            rem /= 3;
        }
        Ok(Action { parts })
    }

    /// All 729 actions in ascending id order.
    pub fn enumerate_all() -> impl Iterator<Item = Action> {
        (0..ACTION_COUNT).map(|id| Action::decode(ActionId(id)).unwrap())
    }
}
