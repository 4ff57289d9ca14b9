use nolo::dataset::roam;
use nolo::flowdec::{pair_means, DecoderParams};
use nolo::simworld::{generate_maze, PrimitiveAction};

fn main() {
    let (tx, ty) = (11.0, 8.0);
    let mut confusion: std::collections::HashMap<(char, char), usize> = Default::default();
    let mut fail_detail: Vec<(u64, usize, char, f64, f64)> = vec![];
    for seed in [42u64, 100, 101] {
        let maze = generate_maze(seed, 11, 11, 4).unwrap();
        let video = roam(&maze, seed * 3 + 7, 300, 64);
        let oracle = video.oracle_actions.clone().unwrap();
        let p = DecoderParams::default();
        let means = pair_means(&video, &p).unwrap();
        for (t, (m, a)) in means.iter().zip(&oracle).enumerate() {
            let (mx, my) = m.unwrap();
            let dec = if mx.abs() > tx && my.abs() <= ty {
                if mx > 0.0 { 'L' } else { 'R' }
            } else { 'F' };
            *confusion.entry((a.code(), dec)).or_default() += 1;
            if dec != a.code() && fail_detail.len() < 40 {
                fail_detail.push((seed, t, a.code(), mx, my));
            }
            let _ = PrimitiveAction::MoveForward;
        }
    }
    println!("confusion (true, decoded) -> count:");
    let mut keys: Vec<_> = confusion.keys().copied().collect();
    keys.sort();
    for k in keys { println!("  {:?} {}", k, confusion[&k]); }
    println!("sample failures (seed, t, true, mx, my):");
    for f in &fail_detail { println!("  {:?}", f); }
}
