//! Procedural maze generation: recursive-backtracker carving on an odd
//! lattice, extra loops with probability 0.1 per removable wall, then object
//! placement on distinct free cells.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cell, Maze, MazeObject, WorldError, DEFAULT_CELL_SIZE};
use crate::util::derive_seed;

const LOOP_PROBABILITY: f64 = 0.1;

/// Generate a maze where walls and objects both derive from `seed`.
pub fn generate_maze(
    seed: u64,
    width: usize,
    height: usize,
    n_objects: usize,
) -> Result<Maze, WorldError> {
    generate_room_layout(seed, seed, width, height, n_objects)
}

/// Generate a maze as a (topology, layout) pair: `topology_seed` fixes the
/// wall grid and texture, `layout_seed` fixes object placement. Two layouts
/// of the same room share walls exactly.
pub fn generate_room_layout(
    topology_seed: u64,
    layout_seed: u64,
    width: usize,
    height: usize,
    n_objects: usize,
) -> Result<Maze, WorldError> {
    if width < 5 || height < 5 {
        return Err(WorldError::DimensionsTooSmall(width, height));
    }

    let mut cells = vec![Cell::Wall; width * height];
    let idx = |cx: usize, cy: usize| cy * width + cx;

    // Carving lattice: cells at odd coordinates, passages between them.
    let lat_w = (width - 1) / 2;
    let lat_h = (height - 1) / 2;
    let to_grid = |lx: usize, ly: usize| (2 * lx + 1, 2 * ly + 1);

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(topology_seed, "maze-carve", &[]));
    let mut visited = vec![false; lat_w * lat_h];
    let mut stack = vec![(0usize, 0usize)];
    visited[0] = true;
    let (sx, sy) = to_grid(0, 0);
    cells[idx(sx, sy)] = Cell::Free;

    while let Some(&(lx, ly)) = stack.last() {
        let mut neighbors: Vec<(usize, usize)> = Vec::with_capacity(4);
        for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
            let nx = lx as i64 + dx;
            let ny = ly as i64 + dy;
            if nx >= 0 && ny >= 0 && (nx as usize) < lat_w && (ny as usize) < lat_h {
                let (nx, ny) = (nx as usize, ny as usize);
                if !visited[ny * lat_w + nx] {
                    neighbors.push((nx, ny));
                }
            }
        }
        if let Some(&(nx, ny)) = neighbors.choose(&mut rng) {
            visited[ny * lat_w + nx] = true;
            let (gx, gy) = to_grid(lx, ly);
            let (hx, hy) = to_grid(nx, ny);
            cells[idx((gx + hx) / 2, (gy + hy) / 2)] = Cell::Free;
            cells[idx(hx, hy)] = Cell::Free;
            stack.push((nx, ny));
        } else {
            stack.pop();
        }
    }

    // Loop addition: knock out interior walls that separate two free cells.
    for cy in 1..height - 1 {
        for cx in 1..width - 1 {
            if cells[idx(cx, cy)] == Cell::Wall {
                let horizontal = cells[idx(cx - 1, cy)] == Cell::Free
                    && cells[idx(cx + 1, cy)] == Cell::Free;
                let vertical =
                    cells[idx(cx, cy - 1)] == Cell::Free && cells[idx(cx, cy + 1)] == Cell::Free;
                if (horizontal || vertical) && rng.gen_bool(LOOP_PROBABILITY) {
                    cells[idx(cx, cy)] = Cell::Free;
                }
            }
        }
    }

    let free: Vec<(usize, usize)> = (0..height)
        .flat_map(|cy| (0..width).map(move |cx| (cx, cy)))
        .filter(|&(cx, cy)| cells[idx(cx, cy)] == Cell::Free)
        .collect();
    if n_objects == 0 || n_objects > free.len() {
        return Err(WorldError::TooManyObjects {
            requested: n_objects,
            free: free.len(),
        });
    }

    let mut layout_rng = ChaCha8Rng::seed_from_u64(derive_seed(layout_seed, "maze-layout", &[]));
    let mut spots = free;
    spots.shuffle(&mut layout_rng);
    let objects = spots
        .into_iter()
        .take(n_objects)
        .enumerate()
        .map(|(k, (cx, cy))| MazeObject {
            id: format!("obj{k}"),
            cx,
            cy,
            appearance_seed: derive_seed(layout_seed, "obj-look", &[k as u64]),
        })
        .collect();

    Ok(Maze {
        width,
        height,
        cells,
        objects,
        cell_size: DEFAULT_CELL_SIZE,
        wall_texture_seed: topology_seed,
    })
}
