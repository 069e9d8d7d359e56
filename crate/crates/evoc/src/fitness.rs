//! Fitness functions scoring actions against needs.
//!
//! F2 (tool-making) follows c(L + R + 2H) with c = 2.5: full score for
//! planting both legs and moving the head. F1 (mate attraction) rewards
//! movement and same-direction symmetry of limb pairs, with the symmetry
//! terms making it epistatic; both functions top out at 10.

use crate::action::{Action, BodyPart};
use crate::error::ConfigError;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeedMode {
    F1Only,
    F2Only,
    Both,
}

/// Which need(s) agents evaluate actions against, with weights for the
/// combined case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeedConfig {
    pub mode: NeedMode,
    pub y: f64,
    pub z: f64,
}

impl NeedConfig {
    pub fn f1_only() -> NeedConfig {
        NeedConfig {
            mode: NeedMode::F1Only,
            y: 1.0,
            z: 1.0,
        }
    }

    pub fn f2_only() -> NeedConfig {
        NeedConfig {
            mode: NeedMode::F2Only,
            y: 1.0,
            z: 1.0,
        }
    }

    pub fn both(y: f64, z: f64) -> Result<NeedConfig, ConfigError> {
        let cfg = NeedConfig {
            mode: NeedMode::Both,
            y,
            z,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.y.is_finite() || !self.z.is_finite() || self.y < 0.0 || self.z < 0.0 {
            return Err(ConfigError::new(format!(
                "need weights must be finite and non-negative (y={}, z={})",
                self.y, self.z
            )));
        }
        if self.mode == NeedMode::Both && self.y == 0.0 && self.z == 0.0 {
            return Err(ConfigError::new(
                "combined need requires y and z not both zero",
            ));
        }
        Ok(())
    }

    /// Maximum attainable fitness under this configuration (brute force
    /// over the 729-action space).
    pub fn optimum(&self) -> f64 {
        Action::enumerate_all()
            .map(|a| evaluate(&a, self))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Mate-attraction fitness. With M = moving parts, SA/SL = same-direction
/// arm/leg pairs, H/P = head/hips moving:
/// F1 = 0.5*M + 2*SA + 2*SL + 2*H + P.
pub fn fitness_f1(action: &Action) -> f64 {
    let moving = action.parts().iter().filter(|p| p.is_moving()).count() as f64;
    let same_dir = |a: BodyPart, b: BodyPart| -> f64 {
        let (pa, pb) = (action.part(a), action.part(b));
        if pa.is_moving() && pa == pb {
            1.0
        } else {
            0.0
        }
    };
    let sym_arms = same_dir(BodyPart::LeftArm, BodyPart::RightArm);
    let sym_legs = same_dir(BodyPart::LeftLeg, BodyPart::RightLeg);
    let head = if action.part(BodyPart::Head).is_moving() {
        1.0
    } else {
        0.0
    };
    let hips = if action.part(BodyPart::Hips).is_moving() {
        1.0
    } else {
        0.0
    };
    0.5 * moving + 2.0 * sym_arms + 2.0 * sym_legs + 2.0 * head + hips
}

/// Tool-making fitness: F2 = c(L + R + 2H) with c = 2.5. L and R test the
/// legs planted (activation -0.5), H tests the head moving in either
/// direction.
pub fn fitness_f2(action: &Action) -> f64 {
    let planted = |p: BodyPart| -> f64 {
        if action.part(p).activation() == -0.5 {
            1.0
        } else {
            0.0
        }
    };
    let l = planted(BodyPart::LeftLeg);
    let r = planted(BodyPart::RightLeg);
    let h = if action.part(BodyPart::Head).activation() != 0.0 {
        1.0
    } else {
        0.0
    };
    2.5 * (l + r + 2.0 * h)
}

/// Weighted combination of both needs: 0.5*(y*F1 + z*F2).
pub fn fitness_combined(action: &Action, cfg: &NeedConfig) -> f64 {
    0.5 * (cfg.y * fitness_f1(action) + cfg.z * fitness_f2(action))
}

/// Mental simulation entry point: score an action (or the idea for one)
/// under the configured need(s).
pub fn evaluate(action: &Action, cfg: &NeedConfig) -> f64 {
    match cfg.mode {
        NeedMode::F1Only => fitness_f1(action),
        NeedMode::F2Only => fitness_f2(action),
        NeedMode::Both => fitness_combined(action, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::PartState;
    use crate::action::PartState::{Down, Stationary, Up};

    fn act(parts: [PartState; 6]) -> Action {
        Action::new(parts)
    }

    #[test]
    fn f2_examples() {
        assert_eq!(fitness_f2(&Action::stationary()), 0.0);
        // legs down, head up: maximum regardless of arms/hips
        assert_eq!(fitness_f2(&act([Up, Down, Down, Down, Up, Up])), 10.0);
        assert_eq!(
            fitness_f2(&act([Stationary, Stationary, Down, Stationary, Stationary, Stationary])),
            2.5
        );
    }

    #[test]
    fn f1_examples() {
        assert_eq!(fitness_f1(&Action::stationary()), 0.0);
        assert_eq!(fitness_f1(&act([Up, Up, Up, Up, Up, Up])), 10.0);
    }

    #[test]
    fn maximizer_counts_by_brute_force() {
        let count_max = |f: &dyn Fn(&Action) -> f64| {
            let scores: Vec<f64> = Action::enumerate_all().map(|a| f(&a)).collect();
            let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (max, scores.iter().filter(|&&s| s == max).count())
        };
        assert_eq!(count_max(&fitness_f2), (10.0, 54));
        assert_eq!(count_max(&fitness_f1), (10.0, 16));
        let both = NeedConfig::both(1.0, 1.0).unwrap();
        assert_eq!(count_max(&|a| fitness_combined(a, &both)), (10.0, 8));
    }

    #[test]
    fn combined_examples() {
        let both = NeedConfig::both(1.0, 1.0).unwrap();
        // arms up, legs down, head up, hips up: optimal under both needs
        let a = act([Up, Up, Down, Down, Up, Up]);
        assert_eq!(fitness_combined(&a, &both), 10.0);

        let f1_half = NeedConfig::both(1.0, 0.0).unwrap();
        for a in Action::enumerate_all().step_by(37) {
            assert_eq!(fitness_combined(&a, &f1_half), 0.5 * fitness_f1(&a));
        }

        assert!(NeedConfig::both(0.0, 0.0).is_err());
    }

    #[test]
    fn evaluate_dispatch() {
        assert_eq!(evaluate(&Action::stationary(), &NeedConfig::f2_only()), 0.0);
        assert_eq!(
            evaluate(&act([Up, Up, Up, Up, Up, Up]), &NeedConfig::f1_only()),
            10.0
        );
        let both = NeedConfig::both(1.0, 1.0).unwrap();
        assert_eq!(evaluate(&Action::stationary(), &both), 0.0);
    }

    #[test]
    fn bounds_over_full_space() {
        for a in Action::enumerate_all() {
            let f1 = fitness_f1(&a);
            let f2 = fitness_f2(&a);
            assert!((0.0..=10.0).contains(&f1), "F1({:?}) = {}", a, f1);
            assert!((0.0..=10.0).contains(&f2), "F2({:?}) = {}", a, f2);
        }
    }

    #[test]
    fn f2_ignores_arms_and_hips() {
        for a in Action::enumerate_all() {
            for part in [BodyPart::LeftArm, BodyPart::RightArm, BodyPart::Hips] {
                for s in PartState::ALL {
                    let mut b = a;
                    b.set_part(part, s);
                    assert_eq!(fitness_f2(&a), fitness_f2(&b));
                }
            }
        }
    }

    /// A function is additive over parts iff the fitness delta from changing
    /// one part is independent of the states of the other parts.
    fn is_additive(f: &dyn Fn(&Action) -> f64) -> bool {
        for part in BodyPart::ALL {
            for s1 in PartState::ALL {
                for s2 in PartState::ALL {
                    let mut delta: Option<f64> = None;
                    for a in Action::enumerate_all() {
                        if a.part(part) != Stationary {
                            continue;
                        }
                        let mut b1 = a;
                        b1.set_part(part, s1);
                        let mut b2 = a;
                        b2.set_part(part, s2);
                        let d = f(&b1) - f(&b2);
                        match delta {
                            None => delta = Some(d),
                            Some(prev) if (prev - d).abs() > 1e-12 => return false,
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn f1_is_epistatic_f2_is_not() {
        assert!(!is_additive(&fitness_f1));
        assert!(is_additive(&fitness_f2));
    }

    #[test]
    fn optimum_values() {
        assert_eq!(NeedConfig::f1_only().optimum(), 10.0);
        assert_eq!(NeedConfig::f2_only().optimum(), 10.0);
        assert_eq!(NeedConfig::both(1.0, 1.0).unwrap().optimum(), 10.0);
    }
}
