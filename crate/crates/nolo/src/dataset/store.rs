//! On-disk dataset store: scene files, video directories with PGM frames and
//! a JSON sidecar, goal-view directories, and the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::pgm::{read_pgm, write_atomic, write_pgm};
use super::{DatasetError, DatasetManifest, GoalImage, Video, FORMAT_VERSION};
use crate::simworld::{Maze, Pose, PrimitiveAction};

/// Path helper for the fixed dataset layout.
#[derive(Debug, Clone)]
pub struct DatasetRoot(pub PathBuf);

impl DatasetRoot {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DatasetRoot(root.into())
    }
    pub fn scene_file(&self, id: &str) -> PathBuf {
        self.0.join("scenes").join(format!("{id}.json"))
    }
    pub fn video_dir(&self, id: &str) -> PathBuf {
        self.0.join("videos").join(id)
    }
    pub fn goals_dir(&self, id: &str) -> PathBuf {
        self.0.join("goals").join(id)
    }
    pub fn manifest_file(&self) -> PathBuf {
        self.0.join("manifest.json")
    }
}

#[derive(Serialize, Deserialize)]
struct VideoMeta {
    format_version: u32,
    maze_id: String,
    seed: u64,
    width: usize,
    height: usize,
    n_frames: usize,
    sha256: String,
    poses: Vec<(f64, f64, i32)>,
    oracle: OracleMeta,
}

#[derive(Serialize, Deserialize)]
struct OracleMeta {
    true_actions: String,
}

fn frames_digest(frames: &[crate::simworld::Frame]) -> String {
    let mut hasher = Sha256::new();
    for f in frames {
        hasher.update(f.to_u8());
    }
    format!("{:x}", hasher.finalize())
}

fn frame_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("frame_{index:05}.pgm"))
}

pub fn save_video(video: &Video, dir: &Path) -> Result<(), DatasetError> {
    fs::create_dir_all(dir).map_err(|e| DatasetError::io(dir, e))?;
    for (i, f) in video.frames.iter().enumerate() {
        write_pgm(f, &frame_path(dir, i))?;
    }
    let meta = VideoMeta {
        format_version: FORMAT_VERSION,
        maze_id: video.maze_id.clone(),
        seed: video.seed,
        width: video.frames[0].width,
        height: video.frames[0].height,
        n_frames: video.frames.len(),
        sha256: frames_digest(&video.frames),
        poses: video.poses.iter().map(|p| (p.x, p.y, p.heading)).collect(),
        oracle: OracleMeta {
            true_actions: video
                .oracle_actions
                .as_ref()
                .map(|a| a.iter().map(|x| x.code()).collect())
                .unwrap_or_default(),
        },
    };
    let json = serde_json::to_vec_pretty(&meta).expect("meta serializes");
    write_atomic(&dir.join("meta.json"), &json)
}

fn load_video_inner(dir: &Path, with_oracle: bool) -> Result<Video, DatasetError> {
    let meta_path = dir.join("meta.json");
    let meta_bytes = fs::read(&meta_path).map_err(|e| DatasetError::io(&meta_path, e))?;
    let meta: VideoMeta =
        serde_json::from_slice(&meta_bytes).map_err(|e| DatasetError::Format {
            path: meta_path.clone(),
            msg: e.to_string(),
        })?;
    if meta.format_version != FORMAT_VERSION {
        return Err(DatasetError::Version {
            path: meta_path,
            found: meta.format_version,
            expected: FORMAT_VERSION,
        });
    }
    let mut frames = Vec::with_capacity(meta.n_frames);
    for i in 0..meta.n_frames {
        let p = frame_path(dir, i);
        let f = read_pgm(&p).map_err(|_| DatasetError::BadFrame {
            path: p.clone(),
            index: i,
        })?;
        if f.width != meta.width || f.height != meta.height {
            return Err(DatasetError::BadFrame { path: p, index: i });
        }
        frames.push(f);
    }
    if frames_digest(&frames) != meta.sha256 {
        return Err(DatasetError::Checksum { path: meta_path });
    }
    let poses = meta
        .poses
        .iter()
        .map(|&(x, y, h)| Pose::new(x, y, h))
        .collect();
    let oracle_actions = if with_oracle {
        let parsed: Option<Vec<PrimitiveAction>> = meta
            .oracle
            .true_actions
            .chars()
            .map(PrimitiveAction::from_code)
            .collect();
        Some(parsed.ok_or_else(|| DatasetError::Format {
            path: dir.join("meta.json"),
            msg: "bad action code in oracle.true_actions".into(),
        })?)
    } else {
        None
    };
    Ok(Video {
        frames,
        poses,
        oracle_actions,
        maze_id: meta.maze_id,
        seed: meta.seed,
    })
}

/// Training-path loader: the oracle action record is deliberately dropped.
pub fn load_video(dir: &Path) -> Result<Video, DatasetError> {
    load_video_inner(dir, false)
}

/// Scoring/calibration loader: includes the roamer's true actions.
pub fn load_video_with_oracle(dir: &Path) -> Result<Video, DatasetError> {
    load_video_inner(dir, true)
}

#[derive(Serialize, Deserialize)]
struct GoalsMeta {
    format_version: u32,
    object_id: String,
    width: usize,
    height: usize,
    n_views: usize,
    sha256: String,
    poses: Vec<(f64, f64, i32)>,
}

pub fn save_goal_images(views: &[GoalImage], dir: &Path) -> Result<(), DatasetError> {
    assert!(!views.is_empty());
    fs::create_dir_all(dir).map_err(|e| DatasetError::io(dir, e))?;
    for (i, v) in views.iter().enumerate() {
        write_pgm(&v.frame, &dir.join(format!("view_{i:02}.pgm")))?;
    }
    let frames: Vec<_> = views.iter().map(|v| v.frame.clone()).collect();
    let meta = GoalsMeta {
        format_version: FORMAT_VERSION,
        object_id: views[0].object_id.clone(),
        width: views[0].frame.width,
        height: views[0].frame.height,
        n_views: views.len(),
        sha256: frames_digest(&frames),
        poses: views
            .iter()
            .map(|v| (v.capture_pose.x, v.capture_pose.y, v.capture_pose.heading))
            .collect(),
    };
    let json = serde_json::to_vec_pretty(&meta).expect("meta serializes");
    write_atomic(&dir.join("meta.json"), &json)
}

pub fn load_goal_images(dir: &Path) -> Result<Vec<GoalImage>, DatasetError> {
    let meta_path = dir.join("meta.json");
    let bytes = fs::read(&meta_path).map_err(|e| DatasetError::io(&meta_path, e))?;
    let meta: GoalsMeta = serde_json::from_slice(&bytes).map_err(|e| DatasetError::Format {
        path: meta_path.clone(),
        msg: e.to_string(),
    })?;
    if meta.format_version != FORMAT_VERSION {
        return Err(DatasetError::Version {
            path: meta_path,
            found: meta.format_version,
            expected: FORMAT_VERSION,
        });
    }
    let mut views = Vec::with_capacity(meta.n_views);
    for i in 0..meta.n_views {
        let p = dir.join(format!("view_{i:02}.pgm"));
        let frame = read_pgm(&p).map_err(|_| DatasetError::BadFrame {
            path: p.clone(),
            index: i,
        })?;
        let (x, y, h) = meta.poses[i];
        views.push(GoalImage {
            frame,
            object_id: meta.object_id.clone(),
            capture_pose: Pose::new(x, y, h),
        });
    }
    let frames: Vec<_> = views.iter().map(|v| v.frame.clone()).collect();
    if frames_digest(&frames) != meta.sha256 {
        return Err(DatasetError::Checksum { path: meta_path });
    }
    Ok(views)
}

pub fn save_maze(maze: &Maze, path: &Path) -> Result<(), DatasetError> {
    let json = serde_json::to_vec_pretty(maze).expect("maze serializes");
    write_atomic(path, &json)
}

pub fn load_maze(path: &Path) -> Result<Maze, DatasetError> {
    let bytes = fs::read(path).map_err(|e| DatasetError::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| DatasetError::Format {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

pub fn save_manifest(manifest: &DatasetManifest, root: &DatasetRoot) -> Result<(), DatasetError> {
    let json = serde_json::to_vec_pretty(manifest).expect("manifest serializes");
    write_atomic(&root.manifest_file(), &json)
}

/// Load and validate: every referenced file/dir must exist.
pub fn load_manifest(root: &DatasetRoot) -> Result<DatasetManifest, DatasetError> {
    let path = root.manifest_file();
    let bytes = fs::read(&path).map_err(|e| DatasetError::io(&path, e))?;
    let manifest: DatasetManifest =
        serde_json::from_slice(&bytes).map_err(|e| DatasetError::Format {
            path: path.clone(),
            msg: e.to_string(),
        })?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(DatasetError::Version {
            path,
            found: manifest.format_version,
            expected: FORMAT_VERSION,
        });
    }
    for scene in &manifest.scenes {
        for rel in [&scene.maze_file, &scene.video_dir, &scene.goals_dir] {
            let p = root.0.join(rel);
            if !p.exists() {
                return Err(DatasetError::MissingFile(p));
            }
        }
    }
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{roam, SceneEntry, Split};
    use crate::simworld::generate_maze;

    fn sample_video() -> Video {
        let maze = generate_maze(0, 9, 9, 2).unwrap();
        let mut v = roam(&maze, 3, 12, 32);
        v.maze_id = "t0".into();
        v
    }

    #[test]
    fn video_roundtrip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let v = sample_video();
        save_video(&v, dir.path()).unwrap();
        let back = load_video_with_oracle(dir.path()).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn training_loader_refuses_oracle_actions() {
        let dir = tempfile::tempdir().unwrap();
        let v = sample_video();
        save_video(&v, dir.path()).unwrap();
        let back = load_video(dir.path()).unwrap();
        assert!(back.oracle_actions.is_none());
    }

    #[test]
    fn truncated_frame_names_the_index() {
        let dir = tempfile::tempdir().unwrap();
        let v = sample_video();
        save_video(&v, dir.path()).unwrap();
        std::fs::write(dir.path().join("frame_00003.pgm"), b"P5\n32 32\n255\nxx").unwrap();
        match load_video(dir.path()) {
            Err(DatasetError::BadFrame { index, .. }) => assert_eq!(index, 3),
            other => panic!("expected BadFrame, got {other:?}"),
        }
    }

    #[test]
    fn tampered_frame_fails_checksum() {
        let dir = tempfile::tempdir().unwrap();
        let v = sample_video();
        save_video(&v, dir.path()).unwrap();
        // Valid PGM, wrong content.
        let mut other = v.frames[0].clone();
        other.pixels[0] = (other.pixels[0] + 0.5) % 1.0;
        other.quantize_u8();
        write_pgm(&other, &dir.path().join("frame_00000.pgm")).unwrap();
        assert!(matches!(
            load_video(dir.path()),
            Err(DatasetError::Checksum { .. })
        ));
    }

    #[test]
    fn quantization_roundtrip_error_below_one_level() {
        let maze = generate_maze(0, 9, 9, 2).unwrap();
        let (cx, cy) = maze.free_cells().next().unwrap();
        let (x, y) = maze.cell_center(cx, cy);
        let raw = crate::simworld::render(&maze, &crate::simworld::Pose::new(x, y, 0), 32, 32)
            .unwrap();
        let mut q = raw.clone();
        q.quantize_u8();
        for (a, b) in raw.pixels.iter().zip(q.pixels.iter()) {
            assert!((a - b).abs() < 1.0 / 255.0);
        }
    }

    #[test]
    fn manifest_missing_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let root = DatasetRoot::new(dir.path());
        let manifest = DatasetManifest {
            format_version: FORMAT_VERSION,
            scenes: vec![SceneEntry {
                id: "s0".into(),
                split: Split::Train,
                maze_file: "scenes/s0.json".into(),
                video_dir: "videos/s0".into(),
                goals_dir: "goals/s0".into(),
                objects: vec!["obj0".into()],
            }],
        };
        save_manifest(&manifest, &root).unwrap();
        match load_manifest(&root) {
            Err(DatasetError::MissingFile(p)) => {
                assert!(p.to_string_lossy().contains("s0.json"));
            }
            other => panic!("expected MissingFile, got {other:?}"),
        }
    }

    #[test]
    fn goal_views_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let maze = generate_maze(0, 9, 9, 2).unwrap();
        let views = crate::dataset::extract_goal_images(&maze, "obj0", 2, 4, 32).unwrap();
        save_goal_images(&views, dir.path()).unwrap();
        let back = load_goal_images(dir.path()).unwrap();
        assert_eq!(views, back);
    }
}
