//! Run manifests: a single declarative description of a batch of replicate
//! runs, loadable from TOML with flag overrides, plus named experiment
//! presets.

use crate::engine::{BroadcasterSelection, BroadcasterSetup, RatioRegion, SimConfig};
use crate::error::ConfigError;
use crate::fitness::{NeedConfig, NeedMode};
use crate::world::{
    Border, BroadcastSchedule, Orientation, Placement, Topology, WorldConfig,
};
use serde::{Deserialize, Serialize};

/// Everything that determines a batch of runs and its outputs.
/// Replicate r runs with seed `seed + r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunManifest {
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
    pub density: f64,
    pub placement: Placement,
    pub need: NeedConfig,
    pub ratio: f64,
    pub ratio_region: Option<RatioRegion>,
    pub p_change: f64,
    pub iterations: u32,
    pub replicates: u32,
    pub seed: u64,
    pub net: bool,
    pub borders: Vec<Border>,
    pub broadcasters: Option<BroadcasterSetup>,
    pub snapshot_every: Option<u32>,
}

impl Default for RunManifest {
    fn default() -> RunManifest {
        RunManifest {
            rows: 10,
            cols: 10,
            topology: Topology::Toroidal,
            density: 1.0,
            placement: Placement::Uniform,
            need: NeedConfig::f2_only(),
            ratio: 1.0,
            ratio_region: None,
            p_change: 1.0 / 6.0,
            iterations: 100,
            replicates: 100,
            seed: 42,
            net: true,
            borders: Vec::new(),
            broadcasters: None,
            snapshot_every: None,
        }
    }
}

impl RunManifest {
    pub fn world_config(&self) -> WorldConfig {
        WorldConfig {
            rows: self.rows,
            cols: self.cols,
            topology: self.topology,
            density: self.density,
            placement: self.placement.clone(),
        }
    }

    /// SimConfig for one replicate.
    pub fn sim_config(&self, replicate: u32) -> SimConfig {
        SimConfig {
            need: self.need,
            ratio: self.ratio,
            ratio_region: self.ratio_region,
            p_change: self.p_change,
            iterations: self.iterations,
            seed: self.seed + replicate as u64,
            net_enabled: self.net,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.world_config().validate()?;
        self.sim_config(0).validate()?;
        for b in &self.borders {
            b.validate()?;
        }
        if self.replicates == 0 {
            return Err(ConfigError::new("replicates must be positive"));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<RunManifest, ConfigError> {
        let m: RunManifest =
            toml::from_str(text).map_err(|e| ConfigError::new(format!("manifest: {e}")))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("manifest serializes")
    }
}

/// Field-by-field overrides applied on top of a file or preset manifest;
/// `None` leaves the underlying value alone.
#[derive(Clone, Debug, Default)]
pub struct ManifestOverrides {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub topology: Option<Topology>,
    pub density: Option<f64>,
    pub need: Option<NeedMode>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub ratio: Option<f64>,
    pub ratio_region: Option<RatioRegion>,
    pub p_change: Option<f64>,
    pub iterations: Option<u32>,
    pub replicates: Option<u32>,
    pub seed: Option<u64>,
    pub net: Option<bool>,
    pub borders: Option<Vec<Border>>,
    pub broadcasters: Option<BroadcasterSetup>,
    pub snapshot_every: Option<u32>,
}

/// Build a manifest from an optional TOML body and flag overrides; flags win.
pub fn parse_manifest(
    file: Option<&str>,
    overrides: &ManifestOverrides,
) -> Result<RunManifest, ConfigError> {
    let mut m = match file {
        Some(text) => RunManifest::from_toml(text)?,
        None => RunManifest::default(),
    };
    apply_overrides(&mut m, overrides);
    m.validate()?;
    Ok(m)
}

pub fn apply_overrides(m: &mut RunManifest, o: &ManifestOverrides) {
    macro_rules! set {
        ($($field:ident),*) => {
            $(if let Some(v) = o.$field.clone() { m.$field = v; })*
        };
    }
    set!(rows, cols, topology, density, ratio, p_change, iterations, replicates, seed, net, borders);
    if let Some(k) = o.snapshot_every {
        m.snapshot_every = Some(k);
    }
    if let Some(mode) = o.need {
        m.need.mode = mode;
    }
    if let Some(y) = o.y {
        m.need.y = y;
    }
    if let Some(z) = o.z {
        m.need.z = z;
    }
    if let Some(r) = o.ratio_region {
        m.ratio_region = Some(r);
    }
    if let Some(b) = o.broadcasters.clone() {
        m.broadcasters = Some(b);
    }
}

/// Parse "a:b" odds or a bare positive number into a ratio value.
pub fn parse_ratio(s: &str) -> Result<f64, ConfigError> {
    let bad = || ConfigError::new(format!("invalid ratio '{s}' (expected 'a:b' or a number)"));
    let value = if let Some((a, b)) = s.split_once(':') {
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        if b <= 0.0 {
            return Err(bad());
        }
        a / b
    } else {
        s.trim().parse().map_err(|_| bad())?
    };
    if !(value > 0.0 && value.is_finite()) {
        return Err(bad());
    }
    Ok(value)
}

/// Parse "COL,RATIO", e.g. "4,2:1": agents at column >= COL use RATIO.
pub fn parse_ratio_region(s: &str) -> Result<RatioRegion, ConfigError> {
    let (col, ratio) = s
        .split_once(',')
        .ok_or_else(|| ConfigError::new(format!("invalid ratio region '{s}' (expected COL,RATIO)")))?;
    let col_from: usize = col
        .trim()
        .parse()
        .map_err(|_| ConfigError::new(format!("invalid region column '{col}'")))?;
    Ok(RatioRegion {
        col_from,
        ratio: parse_ratio(ratio)?,
    })
}

/// Parse "orientation,index,p_start,p_end,t_start,t_end".
pub fn parse_border(s: &str) -> Result<Border, ConfigError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(ConfigError::new(format!(
            "invalid border '{s}' (expected orientation,index,p_start,p_end,t_start,t_end)"
        )));
    }
    let orientation = match parts[0] {
        "vertical" | "v" => Orientation::Vertical,
        "horizontal" | "h" => Orientation::Horizontal,
        other => return Err(ConfigError::new(format!("invalid border orientation '{other}'"))),
    };
    let num = |s: &str| -> Result<f64, ConfigError> {
        s.parse()
            .map_err(|_| ConfigError::new(format!("invalid border number '{s}'")))
    };
    let border = Border {
        orientation,
        index: parts[1]
            .parse()
            .map_err(|_| ConfigError::new(format!("invalid border index '{}'", parts[1])))?,
        p_start: num(parts[2])?,
        p_end: num(parts[3])?,
        t_start: num(parts[4])? as u32,
        t_end: num(parts[5])? as u32,
    };
    border.validate()?;
    Ok(border)
}

/// Parse broadcasters: a bare count ("3") draws that many at random, a
/// comma list ("1,5,9") names agent ids.
pub fn parse_broadcasters(s: &str) -> Result<BroadcasterSelection, ConfigError> {
    let bad = || ConfigError::new(format!("invalid broadcasters '{s}' (expected COUNT or id,id,...)"));
    if s.contains(',') {
        let ids = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<usize>, _>>()?;
        Ok(BroadcasterSelection::Ids(ids))
    } else {
        let count: usize = s.trim().parse().map_err(|_| bad())?;
        if count == 0 {
            return Err(bad());
        }
        Ok(BroadcasterSelection::Random(count))
    }
}

/// Parse "constant" or "intermittent,PERIOD,DUTY".
pub fn parse_schedule(s: &str) -> Result<BroadcastSchedule, ConfigError> {
    let bad =
        || ConfigError::new(format!("invalid schedule '{s}' (expected constant or intermittent,PERIOD,DUTY)"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        ["constant"] => Ok(BroadcastSchedule::Constant),
        ["intermittent", period, duty] => Ok(BroadcastSchedule::Intermittent {
            period: period.parse().map_err(|_| bad())?,
            duty: duty.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

pub fn parse_need(s: &str) -> Result<NeedMode, ConfigError> {
    match s {
        "f1" => Ok(NeedMode::F1Only),
        "f2" => Ok(NeedMode::F2Only),
        "both" => Ok(NeedMode::Both),
        other => Err(ConfigError::new(format!("invalid need '{other}' (expected f1|f2|both)"))),
    }
}

/// A vertical frontier splitting a toroidal grid in two needs a border at
/// the split column and a second one on the wrap seam.
fn dividing_borders(cols: usize, split_after: usize, p_start: f64, p_end: f64, t_start: u32, t_end: u32) -> Vec<Border> {
    let at = |index: usize| Border {
        orientation: Orientation::Vertical,
        index,
        p_start,
        p_end,
        t_start,
        t_end,
    };
    vec![at(split_after), at(cols - 1)]
}

pub const PRESET_NAMES: &[&str] = &[
    "f1_baseline",
    "f2_baseline",
    "two_needs",
    "broadcast_0",
    "broadcast_1",
    "broadcast_5",
    "density_sweep",
    "shape_square_vs_toroidal",
    "ratio_sweep",
    "border_eroding",
    "fig8",
];

/// Named experiment presets. Most map to a single manifest; sweeps expand to
/// one labeled manifest per condition.
pub fn preset(name: &str) -> Result<Vec<(String, RunManifest)>, ConfigError> {
    let baseline = RunManifest {
        iterations: 500,
        ..RunManifest::default()
    };
    let with_broadcasters = |count: usize| RunManifest {
        broadcasters: Some(BroadcasterSetup {
            selection: BroadcasterSelection::Random(count),
            schedule: BroadcastSchedule::Constant,
        }),
        ..baseline.clone()
    };
    let one = |label: &str, m: RunManifest| vec![(label.to_string(), m)];

    let manifests = match name {
        "f2_baseline" => one("f2_baseline", baseline.clone()),
        "f1_baseline" => one(
            "f1_baseline",
            RunManifest {
                need: NeedConfig::f1_only(),
                ..baseline.clone()
            },
        ),
        "two_needs" => one(
            "two_needs",
            RunManifest {
                need: NeedConfig::both(1.0, 1.0)?,
                ..baseline.clone()
            },
        ),
        "broadcast_0" => one("broadcast_0", baseline.clone()),
        "broadcast_1" => one("broadcast_1", with_broadcasters(1)),
        "broadcast_5" => one("broadcast_5", with_broadcasters(5)),
        "density_sweep" => [1.0, 0.6, 0.3]
            .iter()
            .map(|&density| {
                (
                    format!("density_{density}"),
                    RunManifest {
                        density,
                        iterations: 200,
                        ..baseline.clone()
                    },
                )
            })
            .collect(),
        "shape_square_vs_toroidal" => vec![
            ("shape_toroidal".to_string(), baseline.clone()),
            (
                "shape_square".to_string(),
                RunManifest {
                    topology: Topology::Bounded,
                    ..baseline.clone()
                },
            ),
        ],
        "ratio_sweep" => [("1to2", 0.5), ("1to1", 1.0), ("2to1", 2.0), ("4to1", 4.0)]
            .iter()
            .map(|&(label, ratio)| {
                (
                    format!("ratio_{label}"),
                    RunManifest {
                        ratio,
                        ..baseline.clone()
                    },
                )
            })
            .collect(),
        "border_eroding" => {
            let permanent = dividing_borders(10, 4, 0.0, 0.0, 0, 500);
            let eroding = dividing_borders(10, 4, 0.0, 1.0, 0, 500);
            vec![
                ("border_none".to_string(), baseline.clone()),
                (
                    "border_permanent".to_string(),
                    RunManifest {
                        borders: permanent,
                        ..baseline.clone()
                    },
                ),
                (
                    "border_eroding".to_string(),
                    RunManifest {
                        borders: eroding,
                        ..baseline.clone()
                    },
                ),
            ]
        }
        "fig8" => one(
            "fig8",
            RunManifest {
                rows: 7,
                cols: 7,
                iterations: 50,
                replicates: 1,
                seed: 4,
                borders: dividing_borders(7, 3, 0.0, 1.0, 10, 40),
                ratio_region: Some(RatioRegion {
                    col_from: 4,
                    ratio: 2.0,
                }),
                snapshot_every: Some(4),
                ..RunManifest::default()
            },
        ),
        other => {
            return Err(ConfigError::new(format!(
                "unknown preset '{other}' (available: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    for (_, m) in &manifests {
        m.validate()?;
    }
    Ok(manifests)
}
