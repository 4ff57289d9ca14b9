//! Offline corpus collection and storage: rule-based traversal videos,
//! goal-image extraction, and the on-disk dataset layout.
//!
//! Layout under a dataset root:
//!   scenes/<id>.json
//!   videos/<id>/frame_%05d.pgm + meta.json
//!   goals/<id>/<object>/view_%02d.pgm + meta.json
//!   manifest.json
//!
//! Ground-truth roamer actions are stored under an `oracle` namespace in the
//! video metadata. The training loader never reads them; only calibration
//! and decoder-accuracy scoring do.

mod goals;
mod pgm;
mod roam;
mod store;

pub use goals::extract_goal_images;
pub use pgm::{read_pgm, write_pgm};
pub(crate) use pgm::write_atomic as pgm_write_atomic;
pub use roam::roam;
pub use store::{
    load_goal_images, load_manifest, load_maze, load_video, load_video_with_oracle, save_goal_images,
    save_manifest, save_maze, save_video, DatasetRoot,
};

use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use thiserror::Error;

use crate::simworld::{Frame, Pose, PrimitiveAction};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("format version mismatch at {path}: found {found}, expected {expected}")]
    Version {
        path: PathBuf,
        found: u32,
        expected: u32,
    },
    #[error("checksum mismatch at {path} (frame data corrupted)")]
    Checksum { path: PathBuf },
    #[error("truncated or unreadable frame {index} at {path}")]
    BadFrame { path: PathBuf, index: usize },
    #[error("manifest references missing file: {0}")]
    MissingFile(PathBuf),
    #[error("goal sampling failed for object `{0}` after {1} attempts")]
    SamplingFailed(String, usize),
    #[error(transparent)]
    World(#[from] crate::simworld::WorldError),
}

impl DatasetError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DatasetError::Io {
            path: path.into(),
            source,
        }
    }
}

/// An egocentric traversal video. `poses` records where each frame was
/// rendered from (used for reward labels); `oracle_actions` carries the
/// roamer's true actions and is `None` when loaded for training.
#[derive(Debug, Clone, PartialEq)]
pub struct Video {
    pub frames: Vec<Frame>,
    pub poses: Vec<Pose>,
    pub oracle_actions: Option<Vec<PrimitiveAction>>,
    pub maze_id: String,
    pub seed: u64,
}

/// A goal frame captured from a success pose for one object.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalImage {
    pub frame: Frame,
    pub object_id: String,
    pub capture_pose: Pose,
}

/// Scene split membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    UnseenLayout,
    UnseenRoom,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::UnseenLayout => "unseen_layout",
            Split::UnseenRoom => "unseen_room",
        }
    }
}

impl std::str::FromStr for Split {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "unseen_layout" => Ok(Split::UnseenLayout),
            "unseen_room" => Ok(Split::UnseenRoom),
            other => Err(format!("unknown split `{other}`")),
        }
    }
}

/// One scene entry in the manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneEntry {
    pub id: String,
    pub split: Split,
    pub maze_file: String,
    pub video_dir: String,
    pub goals_dir: String,
    pub objects: Vec<String>,
}

/// Top-level dataset manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub scenes: Vec<SceneEntry>,
}

impl DatasetManifest {
    pub fn scenes_in(&self, split: Split) -> impl Iterator<Item = &SceneEntry> {
        self.scenes.iter().filter(move |s| s.split == split)
    }

    pub fn scene(&self, id: &str) -> Option<&SceneEntry> {
        self.scenes.iter().find(|s| s.id == id)
    }
}
