//! Threshold calibration: grid-search (tau_x, tau_y) against a calibration
//! video with known actions. Displacement means are computed once; only the
//! threshold rule is swept. The shipped defaults come from running this on
//! a held-out roamer video.

use super::dominant::decode_mean;
use super::{pair_means, DecoderParams};
use crate::dataset::Video;
use crate::simworld::PrimitiveAction;

/// Fraction of pseudo-actions equal to the oracle actions.
pub fn labeling_accuracy(pseudo: &[PrimitiveAction], oracle: &[PrimitiveAction]) -> f64 {
    assert_eq!(pseudo.len(), oracle.len(), "action sequences differ in length");
    let hits = pseudo
        .iter()
        .zip(oracle)
        .filter(|(p, o)| p == o)
        .count();
    hits as f64 / pseudo.len() as f64
}

/// Grid-search tau_x in {0.5, 1.0, ..., 16.0}, tau_y in {1, ..., 8},
/// maximizing labeling accuracy on the calibration video. Ties keep the
/// first (smallest) thresholds in scan order. The tau_x grid extends well
/// past the turn/forward boundary because forward motion along a near wall
/// can produce mean horizontal displacements of 10 px or more at 64 px
/// width, while a 30-degree turn sits at 32 px.
pub fn calibrate_thresholds(video: &Video, base: &DecoderParams) -> (f64, f64, f64) {
    let oracle = video
        .oracle_actions
        .as_ref()
        .expect("calibration needs a video loaded with oracle actions");
    let means = pair_means(video, base).expect("calibration video has >= 2 frames");

    let mut best = (base.tau_x, base.tau_y, -1.0);
    for txi in 1..=32 {
        let tau_x = 0.5 * f64::from(txi);
        for tyi in 1..=8 {
            let tau_y = f64::from(tyi);
            let decoded: Vec<PrimitiveAction> = means
                .iter()
                .map(|m| match m {
                    Some((mx, my)) => decode_mean(*mx, *my, tau_x, tau_y),
                    None => PrimitiveAction::MoveForward,
                })
                .collect();
            let acc = labeling_accuracy(&decoded, oracle);
            if acc > best.2 {
                best = (tau_x, tau_y, acc);
            }
        }
    }
    best
}
