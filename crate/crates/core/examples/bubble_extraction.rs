//! Bubble extraction from two synthetic bubbles whose scales differ by 8.

use std::f64::consts::PI;

use waveguide_nls::data::{bubble_sum, BubbleSpec};
use waveguide_nls::profile::extract_bubbles;
use waveguide_nls::spectral::{make_grid, norm_l2};

fn main() -> waveguide_nls::Result<()> {
    let grid = make_grid(2.0 * PI * 16.0, 256, 4)?;
    let bubbles = [
        BubbleSpec { lambda: 0.25, xi: [-2.0, 2.0], center: [-20.0, 15.0] },
        BubbleSpec { lambda: 2.0, xi: [0.75, -0.25], center: [10.0, -7.0] },
    ];
    let f = bubble_sum(&grid, &bubbles, 4.0, 0.3);
    let e = extract_bubbles(&f, 3, 8.0)?;
    println!("|f| = {:.6}", norm_l2(&f));
    for it in &e.iterations {
        let fr = &it.frame;
        println!(
            "#{} level {:>2} lambda {:<6} xi {:?} x0 [{:.2}, {:.2}] t0 {:+.2} score {:.4} captured {:.4} remainder {:.4} defect {:.2e}",
            it.iteration, it.cube.level, fr.lambda, fr.xi, fr.x0[0], fr.x0[1], fr.t0, it.score,
            it.captured_l2, it.remainder_l2, it.decoupling_defect
        );
    }
    Ok(())
}
