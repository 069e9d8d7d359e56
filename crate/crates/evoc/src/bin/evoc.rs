use anyhow::{Context, Result};
use clap::Parser;
use evoc::engine::{BroadcasterSetup, RatioRegion};
use evoc::manifest::{
    self, parse_border, parse_broadcasters, parse_manifest, parse_need, parse_ratio,
    parse_ratio_region, parse_schedule, ManifestOverrides, RunManifest,
};
use evoc::world::{Border, Topology};
use evoc::experiment::run_experiment;
use std::fs;
use std::path::PathBuf;

/// Run cultural-evolution experiments and write CSV / snapshot outputs.
#[derive(Parser, Debug)]
#[command(name = "evoc", version, about)]
struct Cli {
    /// Named experiment preset (sweeps expand to one run per condition)
    #[arg(long)]
    preset: Option<String>,

    /// Manifest file (TOML); flags override its values
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    rows: Option<usize>,

    #[arg(long)]
    cols: Option<usize>,

    /// toroidal | bounded
    #[arg(long)]
    topology: Option<String>,

    #[arg(long)]
    density: Option<f64>,

    /// Invention-to-imitation ratio, "a:b" or a number
    #[arg(long)]
    ratio: Option<String>,

    /// Per-region ratio override "COL,RATIO" (agents at column >= COL)
    #[arg(long)]
    ratio_region: Option<String>,

    /// Per-part mutation probability during invention
    #[arg(long)]
    p_change: Option<f64>,

    /// f1 | f2 | both
    #[arg(long)]
    need: Option<String>,

    /// Weight of F1 in the combined need
    #[arg(long)]
    y: Option<f64>,

    /// Weight of F2 in the combined need
    #[arg(long)]
    z: Option<f64>,

    #[arg(long)]
    iterations: Option<u32>,

    #[arg(long)]
    replicates: Option<u32>,

    #[arg(long)]
    seed: Option<u64>,

    /// Broadcaster count (drawn at random) or explicit ids "1,5,9"
    #[arg(long)]
    broadcasters: Option<String>,

    /// constant | intermittent,PERIOD,DUTY
    #[arg(long, default_value = "constant")]
    broadcast_schedule: String,

    /// Repeatable: "orientation,index,p_start,p_end,t_start,t_end"
    #[arg(long = "border")]
    borders: Vec<String>,

    /// on | off: trend-detecting network (off = random invention)
    #[arg(long)]
    net: Option<String>,

    /// Attach a grid snapshot every N iterations
    #[arg(long)]
    snapshot_every: Option<u32>,

    /// Output root (defaults to $EVOC_OUT_DIR, then ./out)
    #[arg(long, env = "EVOC_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
}

fn overrides_from(cli: &Cli) -> Result<ManifestOverrides> {
    let topology = match cli.topology.as_deref() {
        None => None,
        Some("toroidal") => Some(Topology::Toroidal),
        Some("bounded") | Some("square") => Some(Topology::Bounded),
        Some(other) => anyhow::bail!("invalid topology '{other}' (expected toroidal|bounded)"),
    };
    let net = match cli.net.as_deref() {
        None => None,
        Some("on") => Some(true),
        Some("off") => Some(false),
        Some(other) => anyhow::bail!("invalid net '{other}' (expected on|off)"),
    };
    let ratio = cli.ratio.as_deref().map(parse_ratio).transpose()?;
    let ratio_region: Option<RatioRegion> = cli
        .ratio_region
        .as_deref()
        .map(parse_ratio_region)
        .transpose()?;
    let need = cli.need.as_deref().map(parse_need).transpose()?;
    let borders: Option<Vec<Border>> = if cli.borders.is_empty() {
        None
    } else {
        Some(
            cli.borders
                .iter()
                .map(|s| parse_border(s))
                .collect::<Result<_, _>>()?,
        )
    };
    let broadcasters: Option<BroadcasterSetup> = cli
        .broadcasters
        .as_deref()
        .map(|s| -> Result<BroadcasterSetup> {
            Ok(BroadcasterSetup {
                selection: parse_broadcasters(s)?,
                schedule: parse_schedule(&cli.broadcast_schedule)?,
            })
        })
        .transpose()?;

    Ok(ManifestOverrides {
        rows: cli.rows,
        cols: cli.cols,
        topology,
        density: cli.density,
        need,
        y: cli.y,
        z: cli.z,
        ratio,
        ratio_region,
        p_change: cli.p_change,
        iterations: cli.iterations,
        replicates: cli.replicates,
        seed: cli.seed,
        net,
        borders,
        broadcasters,
        snapshot_every: cli.snapshot_every,
    })
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let overrides = overrides_from(&cli)?;

    let file_text = match &cli.config {
        Some(path) => Some(
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        ),
        None => None,
    };

    let jobs: Vec<(String, RunManifest)> = match &cli.preset {
        Some(name) => {
            let mut jobs = manifest::preset(name)?;
            for (_, m) in &mut jobs {
                manifest::apply_overrides(m, &overrides);
                m.validate()?;
            }
            jobs
        }
        None => {
            let m = parse_manifest(file_text.as_deref(), &overrides)?;
            vec![("run".to_string(), m)]
        }
    };

    for (label, m) in &jobs {
        let dir = if jobs.len() == 1 && cli.preset.is_none() {
            cli.out_dir.clone()
        } else {
            cli.out_dir.join(label)
        };
        let out = run_experiment(m, &dir)?;
        println!(
            "{label}: {} replicates x {} iterations -> {} ({} snapshot(s))",
            m.replicates,
            m.iterations,
            out.aggregated.display(),
            out.snapshots.len()
        );
    }
    Ok(())
}
