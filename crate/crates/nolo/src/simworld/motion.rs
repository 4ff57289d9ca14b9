//! Kinematics and oracles: discrete stepping with collision margin,
//! success adjudication (radius + field of view + line of sight), and the
//! BFS geodesic-distance oracle on a subdivided grid.

use std::collections::VecDeque;

use super::{
    Cell, GoalSpec, Maze, Pose, PrimitiveAction, WorldError, COLLISION_MARGIN, FOV_DEGREES,
    GEODESIC_SUBDIV, STEP_LENGTH, TURN_DEGREES,
};

/// Distance from a point to the closed rectangle of cell (cx, cy).
fn point_cell_distance(maze: &Maze, x: f64, y: f64, cx: isize, cy: isize) -> f64 {
    let cs = maze.cell_size;
    let (x0, y0) = (cx as f64 * cs, cy as f64 * cs);
    let (x1, y1) = (x0 + cs, y0 + cs);
    let dx = (x0 - x).max(0.0).max(x - x1);
    let dy = (y0 - y).max(0.0).max(y - y1);
    (dx * dx + dy * dy).sqrt()
}

/// Minimum distance from (x, y) to any wall cell (out-of-bounds counts as wall).
pub(crate) fn wall_clearance(maze: &Maze, x: f64, y: f64) -> f64 {
    let (cx, cy) = maze.cell_of(x, y);
    let mut best = f64::INFINITY;
    for dy in -1..=1 {
        for dx in -1..=1 {
            let (nx, ny) = (cx + dx, cy + dy);
            if !maze.is_free(nx, ny) {
                best = best.min(point_cell_distance(maze, x, y, nx, ny));
            }
        }
    }
    best
}

/// A pose is valid when it sits inside a free cell with collision clearance.
pub fn pose_is_valid(maze: &Maze, pose: &Pose) -> bool {
    let (cx, cy) = maze.cell_of(pose.x, pose.y);
    maze.is_free(cx, cy) && wall_clearance(maze, pose.x, pose.y) >= COLLISION_MARGIN
}

/// Execute one primitive action. Blocked forward motion leaves the pose
/// unchanged and reports `collided = true`; turns and Stop never collide.
pub fn step(maze: &Maze, pose: &Pose, action: PrimitiveAction) -> (Pose, bool) {
    match action {
        PrimitiveAction::TurnLeft => (
            Pose::new(pose.x, pose.y, pose.heading + TURN_DEGREES),
            false,
        ),
        PrimitiveAction::TurnRight => (
            Pose::new(pose.x, pose.y, pose.heading - TURN_DEGREES),
            false,
        ),
        PrimitiveAction::Stop => (*pose, false),
        PrimitiveAction::MoveForward => {
            let (dx, dy) = pose.direction();
            let nx = pose.x + dx * STEP_LENGTH;
            let ny = pose.y + dy * STEP_LENGTH;
            let (cx, cy) = maze.cell_of(nx, ny);
            if !maze.is_free(cx, cy) || wall_clearance(maze, nx, ny) < COLLISION_MARGIN {
                (*pose, true)
            } else {
                (Pose::new(nx, ny, pose.heading), false)
            }
        }
    }
}

/// Walk the segment from (x0,y0) to (x1,y1) and report whether it stays in
/// free cells. Sampled at an eighth of a cell; endpoints included.
fn line_of_sight(maze: &Maze, x0: f64, y0: f64, x1: f64, y1: f64) -> bool {
    let dist = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
    let step = maze.cell_size / 8.0;
    let n = (dist / step).ceil() as usize + 1;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let (px, py) = (x0 + (x1 - x0) * t, y0 + (y1 - y0) * t);
        let (cx, cy) = maze.cell_of(px, py);
        if !maze.is_free(cx, cy) {
            return false;
        }
    }
    true
}

/// Success: within `success_radius` of the object center, the object lies
/// inside the 60-degree field of view, and no wall blocks the line of sight.
pub fn is_success(maze: &Maze, pose: &Pose, goal: &GoalSpec) -> Result<bool, WorldError> {
    let obj = maze.object(&goal.object_id)?;
    let (ox, oy) = maze.cell_center(obj.cx, obj.cy);
    let dx = ox - pose.x;
    let dy = oy - pose.y;
    let dist = (dx * dx + dy * dy).sqrt();
    if dist > goal.success_radius {
        return Ok(false);
    }
    if dist > 1e-9 {
        // Bearing in the same counterclockwise-positive convention as heading.
        let bearing = (-dy).atan2(dx).to_degrees();
        let mut delta = bearing - pose.heading as f64;
        while delta > 180.0 {
            delta -= 360.0;
        }
        while delta < -180.0 {
            delta += 360.0;
        }
        if delta.abs() > FOV_DEGREES / 2.0 {
            return Ok(false);
        }
    }
    Ok(line_of_sight(maze, pose.x, pose.y, ox, oy))
}

/// Shortest-path distance in meters from the agent to the goal object's
/// cell, via BFS on a 4-connected subdivision (4 subcells per cell side).
/// Targets are the four central subcells of the goal cell so the measure
/// approximates center-to-center distance; 0 if already in the goal cell.
pub fn geodesic_distance(maze: &Maze, from: &Pose, goal: &GoalSpec) -> Result<f64, WorldError> {
    let obj = maze.object(&goal.object_id)?;
    let (fcx, fcy) = maze.cell_of(from.x, from.y);
    if !maze.is_free(fcx, fcy) {
        return Err(WorldError::InvalidPose {
            x: from.x,
            y: from.y,
        });
    }
    if (fcx as usize, fcy as usize) == (obj.cx, obj.cy) {
        return Ok(0.0);
    }

    let s = GEODESIC_SUBDIV;
    let sub_size = maze.cell_size / s as f64;
    let sw = maze.width * s;
    let sh = maze.height * s;
    let sub_free = |sx: usize, sy: usize| maze.cell((sx / s) as usize, (sy / s) as usize) == Cell::Free;

    let start_sx = ((from.x / sub_size).floor() as isize).clamp(0, sw as isize - 1) as usize;
    let start_sy = ((from.y / sub_size).floor() as isize).clamp(0, sh as isize - 1) as usize;

    // Central 2x2 subcells of the goal cell.
    let mut targets = [(0usize, 0usize); 4];
    let mut t = 0;
    for oy in [s / 2 - 1, s / 2] {
        for ox in [s / 2 - 1, s / 2] {
            targets[t] = (obj.cx * s + ox, obj.cy * s + oy);
            t += 1;
        }
    }

    let mut dist = vec![u32::MAX; sw * sh];
    let mut queue = VecDeque::new();
    dist[start_sy * sw + start_sx] = 0;
    queue.push_back((start_sx, start_sy));
    while let Some((sx, sy)) = queue.pop_front() {
        let d = dist[sy * sw + sx];
        if targets.contains(&(sx, sy)) {
            return Ok(f64::from(d) * sub_size);
        }
        for (ddx, ddy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
            let nx = sx as i64 + ddx;
            let ny = sy as i64 + ddy;
            if nx < 0 || ny < 0 || nx >= sw as i64 || ny >= sh as i64 {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            if sub_free(nx, ny) && dist[ny * sw + nx] == u32::MAX {
                dist[ny * sw + nx] = d + 1;
                queue.push_back((nx, ny));
            }
        }
    }
    Err(WorldError::UnreachableGoal(goal.object_id.clone()))
}
