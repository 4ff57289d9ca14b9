//! Hand-built maze fixtures shared by unit tests.

use super::{Cell, Maze, MazeObject};

pub(crate) fn maze_from_rows(rows: &[&str], objects: Vec<(&str, usize, usize)>) -> Maze {
    let height = rows.len();
    let width = rows[0].len();
    let cells = rows
        .iter()
        .flat_map(|r| {
            r.chars().map(|c| match c {
                '#' => Cell::Wall,
                _ => Cell::Free,
            })
        })
        .collect();
    Maze {
        width,
        height,
        cells,
        objects: objects
            .into_iter()
            .map(|(id, cx, cy)| MazeObject {
                id: id.to_string(),
                cx,
                cy,
                appearance_seed: 1,
            })
            .collect(),
        cell_size: 0.5,
        wall_texture_seed: 0,
    }
}
