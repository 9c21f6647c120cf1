use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "symtile", version, about = "Symplectic tiling billiards experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Also write the resolved configuration as JSON to this path.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one orbit on the standard grid and a rotated copy.
    GridOrbit(GridOrbitArgs),
    /// Classify a grid of starts and write a PPM phase portrait.
    GridPortrait(GridPortraitArgs),
    /// Find the phase at which a sunburst pair closes every orbit.
    SunburstSolve(SunburstSolveArgs),
    /// Turn a convex equilateral polygon into its equiangular partner.
    LinkageConvert(LinkageConvertArgs),
    /// Map a polygon or an offset vector to the hyperboloid.
    ModuliEmbed(ModuliEmbedArgs),
    /// Check the area form, butterfly moves and the right-angled pentagon.
    PentagonVerify(PentagonVerifyArgs),
    /// Run a configuration saved with --save-config.
    Run {
        config: PathBuf,
    },
}

/// A complete experiment; the JSON form of every subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    GridOrbit(GridOrbitArgs),
    GridPortrait(GridPortraitArgs),
    SunburstSolve(SunburstSolveArgs),
    LinkageConvert(LinkageConvertArgs),
    ModuliEmbed(ModuliEmbedArgs),
    PentagonVerify(PentagonVerifyArgs),
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPair {
    /// Rotation of the second grid as a rational p/q, sent to the unit
    /// circle point ((1 - t^2) / (1 + t^2), 2t / (1 + t^2)).
    #[arg(long, default_value = "1/3")]
    pub t: String,
    /// Rotation angle in radians instead of --t, e.g. `pi/4` or `0.3`.
    /// Only available with --float.
    #[arg(long)]
    pub angle: Option<String>,
    /// Use floating-point arithmetic instead of exact rationals.
    #[arg(long)]
    pub float: bool,
    /// State comparison tolerance in floating mode.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridOrbitArgs {
    #[command(flatten)]
    pub grid: GridPair,
    /// Start parameter along edge V:0:0 of the standard grid.
    #[arg(long, default_value = "1/5")]
    pub ta: String,
    /// Start parameter along edge H:0:0 of the rotated grid.
    #[arg(long, default_value = "3/5")]
    pub tb: String,
    /// Start state as JSON, overriding --ta and --tb.
    #[arg(long)]
    pub start: Option<PathBuf>,
    #[arg(long, default_value_t = 2000)]
    pub max_steps: usize,
    /// Draw the grid lines behind the orbit.
    #[arg(long)]
    pub backdrop: bool,
    /// SVG drawing of both projections.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Orbit record as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPortraitArgs {
    #[command(flatten)]
    pub grid: GridPair,
    /// Edge of the standard grid carrying the first coordinate, `AXIS:LINE:CELL`.
    #[arg(long, default_value = "V:0:0")]
    pub edge_a: String,
    /// Edge of the rotated grid carrying the second coordinate.
    #[arg(long, default_value = "H:0:0")]
    pub edge_b: String,
    /// Portrait size in pixels, `WxH`.
    #[arg(long, default_value = "64x64")]
    pub resolution: String,
    #[arg(long, default_value_t = 500)]
    pub max_steps: usize,
    /// PPM (P6) image. Green periodic, red drift, blue bounded-attracted,
    /// black singular, gray inconclusive; the top row is the last start
    /// along edge B.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Verdicts as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SunburstSolveArgs {
    /// Sunburst A as a JSON list of ray angles in radians.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Sunburst B as a JSON list of ray angles; the regular one by default.
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Draw A at random instead of taking the regular sunburst.
    #[arg(long)]
    pub random: bool,
    /// With --random, draw a balanced A (unit rays summing to zero).
    #[arg(long)]
    pub balanced: bool,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bound on |log h| at the returned phase.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// SVG of both sunbursts and the closed orbit.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkageConvertArgs {
    /// Polygon as a JSON list of `[x, y]` vertices, counterclockwise.
    #[arg(long)]
    pub polygon: Option<PathBuf>,
    /// Side count of a random polygon when --polygon is absent.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// SVG of the input polygon and its equiangular partner.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuliEmbedArgs {
    /// Equilateral polygon as a JSON list of `[x, y]` vertices.
    #[arg(long)]
    pub polygon: Option<PathBuf>,
    /// Line offsets as a JSON list, used instead of a polygon.
    #[arg(long)]
    pub offsets: Option<PathBuf>,
    /// Side count of a random polygon when no input is given.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Start radius of the sunburst orbit; the embedding ignores it.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PentagonVerifyArgs {
    /// Tolerance for commutators, wall products and angles.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}
