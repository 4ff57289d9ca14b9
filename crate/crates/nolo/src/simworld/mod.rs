//! Deterministic maze world: occupancy grid, discrete navigation kinematics,
//! egocentric raycast rendering, and geodesic/success oracles.
//!
//! One [`Maze`] instance is a (topology, layout) pair: the wall grid is the
//! topology, object placement is the layout. All operations are pure
//! functions of their inputs; a `Maze` is immutable after generation.

mod generate;
mod motion;
mod render;
#[cfg(test)]
pub(crate) mod testutil;

pub use generate::{generate_maze, generate_room_layout};
pub use motion::{geodesic_distance, is_success, pose_is_valid, step};
pub use render::render;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Meters per grid cell.
pub const DEFAULT_CELL_SIZE: f64 = 0.5;
/// Forward translation per MoveForward, in meters.
pub const STEP_LENGTH: f64 = 0.25;
/// Rotation per turn action, in degrees.
pub const TURN_DEGREES: i32 = 30;
/// Minimum clearance between the agent and any wall face, in meters.
pub const COLLISION_MARGIN: f64 = 0.1;
/// Horizontal field of view of the camera, in degrees.
pub const FOV_DEGREES: f64 = 60.0;
/// Subcells per cell side used by the geodesic BFS oracle.
pub const GEODESIC_SUBDIV: usize = 4;

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("maze dimensions {0}x{1} too small (minimum 5x5)")]
    DimensionsTooSmall(usize, usize),
    #[error("cannot place {requested} objects: only {free} free cells")]
    TooManyObjects { requested: usize, free: usize },
    #[error("unknown object id `{0}`")]
    UnknownObject(String),
    #[error("pose ({x:.3}, {y:.3}) is not inside a free cell")]
    InvalidPose { x: f64, y: f64 },
    #[error("goal `{0}` unreachable from the given pose")]
    UnreachableGoal(String),
    #[error("maze grid malformed: {0}")]
    MalformedGrid(String),
}

/// Occupancy of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Wall,
    Free,
}

/// An object placed at a free cell, identified by a stable id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MazeObject {
    pub id: String,
    pub cx: usize,
    pub cy: usize,
    pub appearance_seed: u64,
}

/// Discrete occupancy world with objects and a procedural wall texture seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Maze {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Cell>,
    pub objects: Vec<MazeObject>,
    pub cell_size: f64,
    pub wall_texture_seed: u64,
}

impl Maze {
    #[inline]
    pub fn cell(&self, cx: usize, cy: usize) -> Cell {
        self.cells[cy * self.width + cx]
    }

    #[inline]
    pub fn is_free(&self, cx: isize, cy: isize) -> bool {
        cx >= 0
            && cy >= 0
            && (cx as usize) < self.width
            && (cy as usize) < self.height
            && self.cell(cx as usize, cy as usize) == Cell::Free
    }

    /// Cell containing a world point. Points outside the grid map to walls.
    #[inline]
    pub fn cell_of(&self, x: f64, y: f64) -> (isize, isize) {
        (
            (x / self.cell_size).floor() as isize,
            (y / self.cell_size).floor() as isize,
        )
    }

    /// World coordinates of a cell center.
    #[inline]
    pub fn cell_center(&self, cx: usize, cy: usize) -> (f64, f64) {
        (
            (cx as f64 + 0.5) * self.cell_size,
            (cy as f64 + 0.5) * self.cell_size,
        )
    }

    pub fn free_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height)
            .flat_map(move |cy| (0..self.width).map(move |cx| (cx, cy)))
            .filter(|&(cx, cy)| self.cell(cx, cy) == Cell::Free)
    }

    pub fn object(&self, id: &str) -> Result<&MazeObject, WorldError> {
        self.objects
            .iter()
            .find(|o| o.id == id)
            .ok_or_else(|| WorldError::UnknownObject(id.to_string()))
    }

    /// Flood-fill connectivity check over the free subgraph.
    pub fn is_connected(&self) -> bool {
        let free_total = self.free_cells().count();
        let Some(start) = self.free_cells().next() else {
            return false;
        };
        let mut seen = vec![false; self.width * self.height];
        let mut stack = vec![start];
        seen[start.1 * self.width + start.0] = true;
        let mut count = 0usize;
        while let Some((cx, cy)) = stack.pop() {
            count += 1;
            for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let nx = cx as i64 + dx;
                let ny = cy as i64 + dy;
                if self.is_free(nx as isize, ny as isize) {
                    let idx = ny as usize * self.width + nx as usize;
                    if !seen[idx] {
                        seen[idx] = true;
                        stack.push((nx as usize, ny as usize));
                    }
                }
            }
        }
        count == free_total
    }
}

/// JSON wire form: cells as "#"/"." rows.
#[derive(Serialize, Deserialize)]
struct MazeJson {
    width: usize,
    height: usize,
    cell_size: f64,
    wall_texture_seed: u64,
    cells: Vec<String>,
    objects: Vec<MazeObject>,
}

impl Serialize for Maze {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows = (0..self.height)
            .map(|cy| {
                (0..self.width)
                    .map(|cx| match self.cell(cx, cy) {
                        Cell::Wall => '#',
                        Cell::Free => '.',
                    })
                    .collect()
            })
            .collect();
        MazeJson {
            width: self.width,
            height: self.height,
            cell_size: self.cell_size,
            wall_texture_seed: self.wall_texture_seed,
            cells: rows,
            objects: self.objects.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Maze {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = MazeJson::deserialize(d)?;
        if j.cells.len() != j.height {
            return Err(D::Error::custom(format!(
                "expected {} rows, found {}",
                j.height,
                j.cells.len()
            )));
        }
        let mut cells = Vec::with_capacity(j.width * j.height);
        for (cy, row) in j.cells.iter().enumerate() {
            if row.chars().count() != j.width {
                return Err(D::Error::custom(format!("row {cy} has wrong width")));
            }
            for ch in row.chars() {
                cells.push(match ch {
                    '#' => Cell::Wall,
                    '.' => Cell::Free,
                    other => return Err(D::Error::custom(format!("bad cell char `{other}`"))),
                });
            }
        }
        Ok(Maze {
            width: j.width,
            height: j.height,
            cells,
            objects: j.objects,
            cell_size: j.cell_size,
            wall_texture_seed: j.wall_texture_seed,
        })
    }
}

/// Continuous agent pose; heading is a multiple of 30 degrees in [0, 330].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: i32,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: i32) -> Self {
        let heading = heading.rem_euclid(360);
        debug_assert_eq!(heading % TURN_DEGREES, 0, "heading must be a 30-degree multiple");
        Pose { x, y, heading }
    }

    /// Unit direction in world coordinates (y grows southward, so the sign
    /// of the sine flips to keep headings counterclockwise-positive).
    #[inline]
    pub fn direction(&self) -> (f64, f64) {
        let r = (self.heading as f64).to_radians();
        (r.cos(), -r.sin())
    }
}

/// Grayscale image, row-major intensities in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<f64>,
}

impl Frame {
    pub fn new(width: usize, height: usize) -> Self {
        Frame {
            width,
            height,
            pixels: vec![0.0; width * height],
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.pixels[y * self.width + x] = v;
    }

    /// Snap every intensity to the 8-bit grid. Recorded datasets are always
    /// quantized so that training sees exactly what was stored on disk.
    pub fn quantize_u8(&mut self) {
        for p in &mut self.pixels {
            *p = (*p * 255.0).round().clamp(0.0, 255.0) / 255.0;
        }
    }

    pub fn to_u8(&self) -> Vec<u8> {
        self.pixels
            .iter()
            .map(|p| (p * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    pub fn from_u8(width: usize, height: usize, bytes: &[u8]) -> Self {
        assert_eq!(bytes.len(), width * height);
        Frame {
            width,
            height,
            pixels: bytes.iter().map(|&b| f64::from(b) / 255.0).collect(),
        }
    }
}

/// The fixed discrete action space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimitiveAction {
    MoveForward,
    TurnLeft,
    TurnRight,
    Stop,
}

impl PrimitiveAction {
    pub const MOVEMENT: [PrimitiveAction; 3] = [
        PrimitiveAction::MoveForward,
        PrimitiveAction::TurnLeft,
        PrimitiveAction::TurnRight,
    ];

    pub fn code(self) -> char {
        match self {
            PrimitiveAction::MoveForward => 'F',
            PrimitiveAction::TurnLeft => 'L',
            PrimitiveAction::TurnRight => 'R',
            PrimitiveAction::Stop => 'S',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'F' => Some(PrimitiveAction::MoveForward),
            'L' => Some(PrimitiveAction::TurnLeft),
            'R' => Some(PrimitiveAction::TurnRight),
            'S' => Some(PrimitiveAction::Stop),
            _ => None,
        }
    }

    /// Index into the 4-way action embedding table.
    pub fn index(self) -> usize {
        match self {
            PrimitiveAction::MoveForward => 0,
            PrimitiveAction::TurnLeft => 1,
            PrimitiveAction::TurnRight => 2,
            PrimitiveAction::Stop => 3,
        }
    }
}

/// Navigation target: reach `object_id` within `success_radius` meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalSpec {
    pub object_id: String,
    pub success_radius: f64,
}

impl GoalSpec {
    pub fn new(object_id: impl Into<String>) -> Self {
        GoalSpec {
            object_id: object_id.into(),
            success_radius: 1.0,
        }
    }
}
