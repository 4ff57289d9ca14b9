use nolo::dataset::roam;
use nolo::flowdec::{block_match_flow, filter_dominant, DecoderParams};
use nolo::simworld::{generate_maze, PrimitiveAction};

fn main() {
    let seed = 42u64;
    let maze = generate_maze(seed, 11, 11, 4).unwrap();
    let video = roam(&maze, seed * 3 + 7, 300, 64);
    let oracle = video.oracle_actions.clone().unwrap();
    let p = DecoderParams::default();
    // cases: t=26 (L -> ~zero flow), t=46 (L -> -32 sign flip), t=3 (L -> weak +6)
    for &t in &[26usize, 46, 3] {
        let f1 = &video.frames[t];
        let f2 = &video.frames[t + 1];
        let pose = video.poses[t];
        println!("t={t} act={:?} pose=({:.2},{:.2},{})", oracle[t], pose.x, pose.y, pose.heading);
        // block intensity ranges of f1 (texture contrast per block)
        let field = block_match_flow(f1, f2, p.block_size, p.search_radius).unwrap();
        let dom = filter_dominant(&field).unwrap();
        println!("  dom mean {:?} thr {:.1}", dom.mean(), dom.magnitude_threshold);
        for gy in 0..8 {
            let mut row = String::new();
            for gx in 0..8 {
                let mut lo = 1.0f64; let mut hi = 0.0f64;
                for y in gy*8..gy*8+8 { for x in gx*8..gx*8+8 {
                    let v = f1.get(x, y); lo = lo.min(v); hi = hi.max(v);
                }}
                let (dx, dy) = field.vectors[gy*8+gx];
                row.push_str(&format!("({dx:3},{dy:3}|{:4.2}) ", hi-lo));
            }
            println!("  {row}");
        }
        // how different are f1,f2 overall?
        let diff: f64 = f1.pixels.iter().zip(&f2.pixels).map(|(a,b)| (a-b).abs()).sum::<f64>() / 4096.0;
        println!("  mean |f1-f2| = {diff:.4}");
        let _ = PrimitiveAction::MoveForward;
    }
}
