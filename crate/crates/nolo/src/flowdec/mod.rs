//! Pseudo-action labeling: estimate pixel displacement between adjacent
//! frames, filter dominant vectors (upper-decile magnitudes), and decode a
//! movement action with horizontal/vertical thresholds. A sparse
//! corner-matching decoder provides the alternative labeling route.

mod block_match;
mod calibrate;
mod dominant;
mod keypoint;
#[cfg(test)]
pub(crate) mod testutil;

pub use block_match::block_match_flow;
pub use calibrate::{calibrate_thresholds, labeling_accuracy};
pub use dominant::{decode_action, filter_dominant};
pub use keypoint::keypoint_decode;

use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

use crate::dataset::Video;
use crate::simworld::{Frame, PrimitiveAction};

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("frame dimensions differ: {0}x{1} vs {2}x{3}")]
    DimMismatch(usize, usize, usize, usize),
    #[error("block size {0} exceeds frame dimension {1}")]
    BlockTooLarge(usize, usize),
    #[error("flow field is empty")]
    EmptyField,
    #[error("video has fewer than 2 frames")]
    TooFewFrames,
}

/// Dense per-block displacement field, in pixels, frame t -> t+1.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    pub vectors: Vec<(i32, i32)>,
    pub grid_w: usize,
    pub grid_h: usize,
    pub block_size: usize,
    pub search_radius: usize,
    pub frame_w: usize,
    pub frame_h: usize,
}

/// The upper-decile subset of a displacement field.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantVectors {
    pub vectors: Vec<(i32, i32)>,
    pub source_indices: Vec<usize>,
    pub magnitude_threshold: f64,
}

impl DominantVectors {
    /// Componentwise mean displacement.
    pub fn mean(&self) -> (f64, f64) {
        let n = self.vectors.len() as f64;
        let (sx, sy) = self
            .vectors
            .iter()
            .fold((0.0, 0.0), |(ax, ay), &(dx, dy)| {
                (ax + f64::from(dx), ay + f64::from(dy))
            });
        (sx / n, sy / n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    Flow,
    Matching,
}

/// Decoder thresholds (pixels) plus the displacement-estimation settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecoderParams {
    pub tau_x: f64,
    pub tau_y: f64,
    pub kind: DecoderKind,
    pub block_size: usize,
    pub search_radius: usize,
}

impl Default for DecoderParams {
    fn default() -> Self {
        // tau values from the shipped calibration run (see calibrate module).
        DecoderParams {
            tau_x: 2.0,
            tau_y: 4.0,
            kind: DecoderKind::Flow,
            block_size: 8,
            search_radius: 36,
        }
    }
}

/// A video plus its decoded pseudo-action sequence (never Stop).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTrajectory {
    pub pseudo_actions: Vec<PrimitiveAction>,
    pub decoder: DecoderKind,
    pub tau_x: f64,
    pub tau_y: f64,
}

/// Decode one adjacent frame pair with the configured decoder.
pub fn decode_pair(f1: &Frame, f2: &Frame, params: &DecoderParams) -> Result<PrimitiveAction, FlowError> {
    match params.kind {
        DecoderKind::Flow => {
            let field = block_match_flow(f1, f2, params.block_size, params.search_radius)?;
            let dom = filter_dominant(&field)?;
            Ok(decode_action(&dom, params))
        }
        DecoderKind::Matching => Ok(keypoint_decode(f1, f2, params).0),
    }
}

/// Mean dominant displacement per adjacent pair. Displacement estimation is
/// threshold-free, so calibration computes these once and sweeps thresholds
/// on the cached means. `None` marks low-confidence matching pairs.
pub fn pair_means(video: &Video, params: &DecoderParams) -> Result<Vec<Option<(f64, f64)>>, FlowError> {
    if video.frames.len() < 2 {
        return Err(FlowError::TooFewFrames);
    }
    video
        .frames
        .windows(2)
        .map(|w| match params.kind {
            DecoderKind::Flow => {
                let field = block_match_flow(&w[0], &w[1], params.block_size, params.search_radius)?;
                Ok(Some(filter_dominant(&field)?.mean()))
            }
            DecoderKind::Matching => {
                Ok(keypoint::keypoint_vectors(&w[0], &w[1], params.search_radius)
                    .map(|v| dominant::dominant_subset(&v).expect("nonempty").mean()))
            }
        })
        .collect()
}

/// Label every adjacent pair of the video: T frames -> T-1 pseudo-actions.
pub fn label_video(video: &Video, params: &DecoderParams) -> Result<LabeledTrajectory, FlowError> {
    if video.frames.len() < 2 {
        return Err(FlowError::TooFewFrames);
    }
    let pseudo_actions = video
        .frames
        .windows(2)
        .map(|w| decode_pair(&w[0], &w[1], params))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LabeledTrajectory {
        pseudo_actions,
        decoder: params.kind,
        tau_x: params.tau_x,
        tau_y: params.tau_y,
    })
}

#[derive(Serialize, Deserialize)]
struct LabelsJson {
    video_id: String,
    decoder: DecoderKind,
    tau_x: f64,
    tau_y: f64,
    actions: Vec<String>,
}

pub fn save_labels(
    traj: &LabeledTrajectory,
    video_id: &str,
    path: &Path,
) -> Result<(), crate::dataset::DatasetError> {
    let json = LabelsJson {
        video_id: video_id.to_string(),
        decoder: traj.decoder,
        tau_x: traj.tau_x,
        tau_y: traj.tau_y,
        actions: traj
            .pseudo_actions
            .iter()
            .map(|a| a.code().to_string())
            .collect(),
    };
    let bytes = serde_json::to_vec_pretty(&json).expect("labels serialize");
    crate::dataset::pgm_write_atomic(path, &bytes)
}

pub fn load_labels(path: &Path) -> Result<LabeledTrajectory, crate::dataset::DatasetError> {
    let bytes = std::fs::read(path).map_err(|e| crate::dataset::DatasetError::io(path, e))?;
    let json: LabelsJson =
        serde_json::from_slice(&bytes).map_err(|e| crate::dataset::DatasetError::Format {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
    let actions = json
        .actions
        .iter()
        .map(|s| {
            s.chars()
                .next()
                .and_then(PrimitiveAction::from_code)
                .filter(|a| *a != PrimitiveAction::Stop)
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| crate::dataset::DatasetError::Format {
            path: path.to_path_buf(),
            msg: "bad action code in labels".into(),
        })?;
    Ok(LabeledTrajectory {
        pseudo_actions: actions,
        decoder: json.decoder,
        tau_x: json.tau_x,
        tau_y: json.tau_y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::roam;
    use crate::simworld::generate_maze;

    #[test]
    fn label_video_emits_t_minus_one_actions() {
        let maze = generate_maze(0, 9, 9, 2).unwrap();
        let video = roam(&maze, 1, 20, 64);
        let params = DecoderParams::default();
        let traj = label_video(&video, &params).unwrap();
        assert_eq!(traj.pseudo_actions.len(), 19);
        assert!(traj
            .pseudo_actions
            .iter()
            .all(|a| *a != PrimitiveAction::Stop));
    }

    #[test]
    fn labeling_is_deterministic() {
        let maze = generate_maze(0, 9, 9, 2).unwrap();
        let video = roam(&maze, 1, 12, 64);
        let params = DecoderParams::default();
        assert_eq!(
            label_video(&video, &params).unwrap(),
            label_video(&video, &params).unwrap()
        );
    }

    #[test]
    fn too_few_frames_is_an_error() {
        let maze = generate_maze(0, 9, 9, 2).unwrap();
        let mut video = roam(&maze, 1, 12, 64);
        video.frames.truncate(1);
        assert!(matches!(
            label_video(&video, &DecoderParams::default()),
            Err(FlowError::TooFewFrames)
        ));
    }

    #[test]
    fn labels_file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let maze = generate_maze(0, 9, 9, 2).unwrap();
        let video = roam(&maze, 1, 12, 64);
        let traj = label_video(&video, &DecoderParams::default()).unwrap();
        let path = dir.path().join("labels.json");
        save_labels(&traj, "vid0", &path).unwrap();
        assert_eq!(load_labels(&path).unwrap(), traj);
    }
}
