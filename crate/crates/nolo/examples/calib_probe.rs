use nolo::dataset::roam;
use nolo::flowdec::{calibrate_thresholds, label_video, labeling_accuracy, DecoderKind, DecoderParams};
use nolo::simworld::generate_maze;

fn main() {
    let maze = generate_maze(42, 11, 11, 4).unwrap();
    let video = roam(&maze, 7, 300, 64);
    let base = DecoderParams::default();
    let t0 = std::time::Instant::now();
    let (tx, ty, acc) = calibrate_thresholds(&video, &base);
    println!("calibrated tau_x={tx} tau_y={ty} acc={acc:.4} in {:?}", t0.elapsed());

    let params = DecoderParams { tau_x: tx, tau_y: ty, ..base.clone() };
    let mparams = DecoderParams { kind: DecoderKind::Matching, ..params.clone() };
    let mut flow_accs = vec![];
    let mut mat_accs = vec![];
    for seed in [100u64, 101, 102, 103, 104] {
        let m = generate_maze(seed, 11, 11, 4).unwrap();
        let v = roam(&m, seed * 3 + 1, 300, 64);
        let oracle = v.oracle_actions.clone().unwrap();
        let flow = label_video(&v, &params).unwrap();
        let mat = label_video(&v, &mparams).unwrap();
        let fa = labeling_accuracy(&flow.pseudo_actions, &oracle);
        let ma = labeling_accuracy(&mat.pseudo_actions, &oracle);
        println!("maze {seed}: flow={fa:.4} matching={ma:.4}");
        flow_accs.push(fa);
        mat_accs.push(ma);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!("mean flow={:.4} matching={:.4}  total {:?}", mean(&flow_accs), mean(&mat_accs), t0.elapsed());
}
