//! Synthetic textured frames shared by flow and matching tests.

use crate::simworld::Frame;
use crate::util::hash01;

pub(crate) fn textured_frame(w: usize, h: usize, seed: u64) -> Frame {
    let mut f = Frame::new(w, h);
    for y in 0..h {
        for x in 0..w {
            f.set(x, y, hash01(&[seed, x as u64, y as u64]));
        }
    }
    f.quantize_u8();
    f
}

pub(crate) fn circular_shift(f: &Frame, sx: i32, sy: i32) -> Frame {
    let mut out = Frame::new(f.width, f.height);
    for y in 0..f.height {
        for x in 0..f.width {
            let tx = (x as i32 + sx).rem_euclid(f.width as i32) as usize;
            let ty = (y as i32 + sy).rem_euclid(f.height as i32) as usize;
            out.set(tx, ty, f.get(x, y));
        }
    }
    out
}
