//! Policy selection by name.
//!
//! Builders: `naive`, `paper` or `paper:C=4,eps=1/8,...`, `forced-edge`.
//! Painters: `random:<seed>` (or `random`, seeded from the run seed),
//! `greedy`, `balanced`, `minimax`, `red`, `blue`, `alternating`,
//! `replay:<transcript file>`, `remote:<session>`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::builders::{ForcedEdgeBuilder, NaiveBuilder, PaperBuilder, PaperStrategyParams};
use crate::game::{BuilderPolicy, GameConfig, PainterPolicy, Transcript};
use crate::graph::Color;
use crate::painters::{
    AlternatingPainter, BalancedPainter, ConstantPainter, GreedyPainter, MinimaxPainter,
    RandomPainter, ReplayPainter,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("unknown policy {0:?}")]
    UnknownPolicy(String),
    #[error("invalid parameters for {policy}: {msg}")]
    InvalidParameter { policy: String, msg: String },
    #[error("cannot load {path}: {msg}")]
    Load { path: String, msg: String },
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum BuilderSpec {
    Naive,
    /// Parameter overrides as written after `paper:`.
    Paper(String),
    ForcedEdge,
}

impl FromStr for BuilderSpec {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("naive", None) => Ok(BuilderSpec::Naive),
            ("forced-edge", None) => Ok(BuilderSpec::ForcedEdge),
            ("paper", arg) => {
                let overrides = arg.unwrap_or("").to_string();
                // surface bad overrides at parse time
                PaperStrategyParams::for_vertices(4)
                    .with_overrides(&overrides)
                    .map_err(|msg| PolicyError::InvalidParameter { policy: s.into(), msg })?;
                Ok(BuilderSpec::Paper(overrides))
            }
            _ => Err(PolicyError::UnknownPolicy(s.into())),
        }
    }
}

impl fmt::Display for BuilderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuilderSpec::Naive => f.write_str("naive"),
            BuilderSpec::Paper(o) if o.is_empty() => f.write_str("paper"),
            BuilderSpec::Paper(o) => write!(f, "paper:{o}"),
            BuilderSpec::ForcedEdge => f.write_str("forced-edge"),
        }
    }
}

impl BuilderSpec {
    pub fn build(&self, config: &GameConfig) -> Result<Box<dyn BuilderPolicy>, PolicyError> {
        Ok(match self {
            BuilderSpec::Naive => Box::new(NaiveBuilder::new(config)),
            BuilderSpec::ForcedEdge => Box::new(ForcedEdgeBuilder::new(config)),
            BuilderSpec::Paper(overrides) => {
                let invalid = |msg| PolicyError::InvalidParameter { policy: self.to_string(), msg };
                let params = PaperStrategyParams::for_vertices(config.vertices)
                    .with_overrides(overrides)
                    .map_err(invalid)?;
                Box::new(PaperBuilder::new(params).map_err(invalid)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PainterSpec {
    /// `None` draws the seed from the run seed's painter stream.
    Random(Option<u64>),
    Greedy,
    Balanced,
    Minimax,
    Constant(Color),
    Alternating,
    Replay(PathBuf),
    Remote(String),
}

impl FromStr for PainterSpec {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("random", None) => Ok(PainterSpec::Random(None)),
            ("random", Some(seed)) => seed
                .parse()
                .map(|v| PainterSpec::Random(Some(v)))
                .map_err(|_| PolicyError::InvalidParameter {
                    policy: s.into(),
                    msg: format!("seed must be an unsigned integer, got {seed:?}"),
                }),
            ("greedy", None) => Ok(PainterSpec::Greedy),
            ("balanced", None) => Ok(PainterSpec::Balanced),
            ("minimax", None) => Ok(PainterSpec::Minimax),
            ("red", None) => Ok(PainterSpec::Constant(Color::Red)),
            ("blue", None) => Ok(PainterSpec::Constant(Color::Blue)),
            ("alternating", None) => Ok(PainterSpec::Alternating),
            ("replay", Some(path)) if !path.is_empty() => Ok(PainterSpec::Replay(path.into())),
            ("remote", Some(id)) if !id.is_empty() => Ok(PainterSpec::Remote(id.into())),
            _ => Err(PolicyError::UnknownPolicy(s.into())),
        }
    }
}

impl fmt::Display for PainterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PainterSpec::Random(None) => f.write_str("random"),
            PainterSpec::Random(Some(seed)) => write!(f, "random:{seed}"),
            PainterSpec::Greedy => f.write_str("greedy"),
            PainterSpec::Balanced => f.write_str("balanced"),
            PainterSpec::Minimax => f.write_str("minimax"),
            PainterSpec::Constant(c) => write!(f, "{c}"),
            PainterSpec::Alternating => f.write_str("alternating"),
            PainterSpec::Replay(p) => write!(f, "replay:{}", p.display()),
            PainterSpec::Remote(id) => write!(f, "remote:{id}"),
        }
    }
}

impl PainterSpec {
    /// Instantiates the painter. `run_seed` feeds an unseeded `random`.
    /// Remote painters exist only inside the session service.
    pub fn build(&self, config: &GameConfig, run_seed: u64) -> Result<Box<dyn PainterPolicy>, PolicyError> {
        Ok(match self {
            PainterSpec::Random(seed) => {
                Box::new(RandomPainter::new(seed.unwrap_or_else(|| substream_seed(run_seed, "painter"))))
            }
            PainterSpec::Greedy => Box::new(GreedyPainter),
            PainterSpec::Balanced => Box::new(BalancedPainter),
            PainterSpec::Minimax => Box::new(MinimaxPainter::new(*config).map_err(|e| {
                PolicyError::InvalidParameter { policy: "minimax".into(), msg: e.to_string() }
            })?),
            PainterSpec::Constant(c) => Box::new(ConstantPainter::new(*c)),
            PainterSpec::Alternating => Box::new(AlternatingPainter),
            PainterSpec::Replay(path) => {
                let load = |msg: String| PolicyError::Load { path: path.display().to_string(), msg };
                let text = std::fs::read_to_string(path).map_err(|e| load(e.to_string()))?;
                let t = Transcript::from_text(&text).map_err(|e| load(e.to_string()))?;
                if t.config != *config {
                    return Err(load(format!("transcript is for {}, game is {}", t.config, config)));
                }
                Box::new(ReplayPainter::new(&t, path.display().to_string()))
            }
            PainterSpec::Remote(_) => {
                return Err(PolicyError::Unsupported(
                    "remote painters are driven through the session service".into(),
                ))
            }
        })
    }
}

/// Seed of the named sub-stream of `run_seed`, so that adding a consumer of
/// randomness does not perturb the others.
pub fn substream_seed(run_seed: u64, stream: &str) -> u64 {
    // FNV-1a keeps stream ids stable across platforms and releases
    let id = stream
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    rng.set_stream(id);
    rng.next_u64()
}
