//! The non-explorative collection policy: move forward until a collision,
//! then turn a random direction for a random 1-3 steps, resume forward.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Video;
use crate::simworld::{render, step, Frame, Maze, Pose, PrimitiveAction};
use crate::util::derive_seed;

pub const DEFAULT_ROAM_STEPS: usize = 900;

/// Roam `steps` frames (steps - 1 actions) through the maze, recording the
/// quantized egocentric frame before each action plus the final frame.
/// Deterministic in (maze, seed, steps, resolution).
pub fn roam(maze: &Maze, seed: u64, steps: usize, res: usize) -> Video {
    assert!(steps >= 2, "a video needs at least 2 frames");
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "roam", &[]));

    let start = random_start(maze, &mut rng);
    let mut pose = start;
    let mut frames: Vec<Frame> = Vec::with_capacity(steps);
    let mut poses: Vec<Pose> = Vec::with_capacity(steps);
    let mut actions: Vec<PrimitiveAction> = Vec::with_capacity(steps - 1);

    let record = |pose: &Pose| {
        let mut f = render(maze, pose, res, res).expect("roamer pose is always valid");
        f.quantize_u8();
        f
    };

    let mut turn_burst: Option<(PrimitiveAction, usize)> = None;
    for _ in 0..steps - 1 {
        frames.push(record(&pose));
        poses.push(pose);

        let action = match turn_burst {
            Some((dir, remaining)) => {
                turn_burst = if remaining > 1 {
                    Some((dir, remaining - 1))
                } else {
                    None
                };
                dir
            }
            None => PrimitiveAction::MoveForward,
        };
        let (next, collided) = step(maze, &pose, action);
        pose = next;
        actions.push(action);
        if collided {
            let dir = if rng.gen_bool(0.5) {
                PrimitiveAction::TurnLeft
            } else {
                PrimitiveAction::TurnRight
            };
            turn_burst = Some((dir, rng.gen_range(1..=3)));
        }
    }
    frames.push(record(&pose));
    poses.push(pose);

    Video {
        frames,
        poses,
        oracle_actions: Some(actions),
        maze_id: String::new(),
        seed,
    }
}

/// Uniform free-cell center with a random 30-degree heading.
pub fn random_start(maze: &Maze, rng: &mut ChaCha8Rng) -> Pose {
    let free: Vec<(usize, usize)> = maze.free_cells().collect();
    let (cx, cy) = free[rng.gen_range(0..free.len())];
    let (x, y) = maze.cell_center(cx, cy);
    Pose::new(x, y, 30 * rng.gen_range(0..12))
}
