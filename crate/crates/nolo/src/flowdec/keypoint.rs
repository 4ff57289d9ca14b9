//! Sparse corner-matching decoder: Harris corners on the first frame,
//! 9x9 patch SAD matching into the second, then the same dominant-vector
//! filter and threshold rule as the dense route.

use super::dominant::{decode_action, dominant_subset};
use super::DecoderParams;
use crate::simworld::{Frame, PrimitiveAction};

const PATCH_HALF: i32 = 4; // 9x9 patches
const MAX_CORNERS: usize = 48;
const MIN_CORNERS: usize = 4;
const HARRIS_K: f64 = 0.04;

fn to_levels(frame: &Frame) -> Vec<f64> {
    frame.pixels.iter().map(|p| p * 255.0).collect()
}

#[inline]
fn at(img: &[f64], w: usize, h: usize, x: i32, y: i32) -> f64 {
    let xi = x.clamp(0, w as i32 - 1) as usize;
    let yi = y.clamp(0, h as i32 - 1) as usize;
    img[yi * w + xi]
}

/// Harris corner response over the whole image (Sobel gradients, 3x3
/// structure-tensor window), followed by 3x3 non-maximum suppression.
fn harris_corners(img: &[f64], w: usize, h: usize) -> Vec<(usize, usize)> {
    let mut ix = vec![0.0; w * h];
    let mut iy = vec![0.0; w * h];
    for y in 0..h as i32 {
        for x in 0..w as i32 {
            let gx = at(img, w, h, x + 1, y - 1) + 2.0 * at(img, w, h, x + 1, y)
                + at(img, w, h, x + 1, y + 1)
                - at(img, w, h, x - 1, y - 1)
                - 2.0 * at(img, w, h, x - 1, y)
                - at(img, w, h, x - 1, y + 1);
            let gy = at(img, w, h, x - 1, y + 1) + 2.0 * at(img, w, h, x, y + 1)
                + at(img, w, h, x + 1, y + 1)
                - at(img, w, h, x - 1, y - 1)
                - 2.0 * at(img, w, h, x, y - 1)
                - at(img, w, h, x + 1, y - 1);
            ix[y as usize * w + x as usize] = gx;
            iy[y as usize * w + x as usize] = gy;
        }
    }
    let mut response = vec![0.0; w * h];
    for y in 1..h as i32 - 1 {
        for x in 1..w as i32 - 1 {
            let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let gx = at(&ix, w, h, x + dx, y + dy);
                    let gy = at(&iy, w, h, x + dx, y + dy);
                    sxx += gx * gx;
                    syy += gy * gy;
                    sxy += gx * gy;
                }
            }
            let det = sxx * syy - sxy * sxy;
            let tr = sxx + syy;
            response[y as usize * w + x as usize] = det - HARRIS_K * tr * tr;
        }
    }

    let margin = PATCH_HALF as usize + 1;
    let mut corners: Vec<(f64, usize, usize)> = Vec::new();
    for y in margin..h - margin {
        for x in margin..w - margin {
            let r = response[y * w + x];
            if r <= 1e3 {
                continue; // reject flat/edge responses on the 0..255 scale
            }
            let is_max = (-1..=1).all(|dy: i32| {
                (-1..=1).all(|dx: i32| {
                    response[(y as i32 + dy) as usize * w + (x as i32 + dx) as usize] <= r
                        || (dx == 0 && dy == 0)
                })
            });
            if is_max {
                corners.push((r, x, y));
            }
        }
    }
    corners.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    corners
        .into_iter()
        .take(MAX_CORNERS)
        .map(|(_, x, y)| (x, y))
        .collect()
}

fn patch_sad(
    a: &[f64],
    b: &[f64],
    w: usize,
    h: usize,
    x: usize,
    y: usize,
    dx: i32,
    dy: i32,
    limit: f64,
) -> f64 {
    let mut sad = 0.0;
    for py in -PATCH_HALF..=PATCH_HALF {
        for px in -PATCH_HALF..=PATCH_HALF {
            let va = at(a, w, h, x as i32 + px, y as i32 + py);
            let vb = at(b, w, h, x as i32 + px + dx, y as i32 + py + dy);
            sad += (va - vb).abs();
        }
        if sad >= limit {
            return f64::INFINITY;
        }
    }
    sad
}

/// Sparse displacement vectors from corner matches; None when fewer than
/// 4 corners were detected.
pub(crate) fn keypoint_vectors(
    f1: &Frame,
    f2: &Frame,
    search_radius: usize,
) -> Option<Vec<(i32, i32)>> {
    assert_eq!(
        (f1.width, f1.height),
        (f2.width, f2.height),
        "frame dims must match"
    );
    let (w, h) = (f1.width, f1.height);
    let a = to_levels(f1);
    let b = to_levels(f2);
    let corners = harris_corners(&a, w, h);
    if corners.len() < MIN_CORNERS {
        return None;
    }

    let patch_area = (2 * PATCH_HALF + 1).pow(2) as f64;
    let per_unit = crate::flowdec::block_match::DRIFT_PENALTY_PER_PX * patch_area;
    let offsets = crate::flowdec::block_match::ordered_offsets(search_radius as i32, per_unit);
    Some(
        corners
            .iter()
            .map(|&(x, y)| {
                let mut best_cost = f64::INFINITY;
                let mut best_vec = (0i32, 0i32);
                for &(dx, dy, penalty) in &offsets {
                    let penalty = f64::from(penalty);
                    if penalty >= best_cost {
                        break;
                    }
                    let sad = patch_sad(&a, &b, w, h, x, y, dx, dy, best_cost - penalty);
                    let cost = sad + penalty;
                    if cost < best_cost {
                        best_cost = cost;
                        best_vec = (dx, dy);
                    }
                }
                best_vec
            })
            .collect(),
    )
}

/// Decode one frame pair from sparse corner matches. Returns the action and
/// a low-confidence flag raised when fewer than 4 corners were found.
pub fn keypoint_decode(f1: &Frame, f2: &Frame, params: &DecoderParams) -> (PrimitiveAction, bool) {
    match keypoint_vectors(f1, f2, params.search_radius) {
        None => (PrimitiveAction::MoveForward, true),
        Some(vectors) => {
            let dom = dominant_subset(&vectors).expect("corner set is nonempty");
            (decode_action(&dom, params), false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowdec::testutil::{circular_shift, textured_frame};
    use crate::flowdec::DecoderKind;

    fn params() -> DecoderParams {
        DecoderParams {
            tau_x: 2.0,
            tau_y: 4.0,
            kind: DecoderKind::Matching,
            block_size: 8,
            search_radius: 6,
        }
    }

    #[test]
    fn identical_frames_decode_forward() {
        let f = textured_frame(64, 64, 1);
        let (action, low_conf) = keypoint_decode(&f, &f, &params());
        assert_eq!(action, PrimitiveAction::MoveForward);
        assert!(!low_conf);
    }

    #[test]
    fn known_shift_decodes_turn_left() {
        let f1 = textured_frame(64, 64, 2);
        let f2 = circular_shift(&f1, 3, 0);
        let (action, low_conf) = keypoint_decode(&f1, &f2, &params());
        assert_eq!(action, PrimitiveAction::TurnLeft);
        assert!(!low_conf);
    }

    #[test]
    fn flat_frames_raise_low_confidence() {
        let f = Frame::new(64, 64);
        let (action, low_conf) = keypoint_decode(&f, &f, &params());
        assert_eq!(action, PrimitiveAction::MoveForward);
        assert!(low_conf);
    }
}
