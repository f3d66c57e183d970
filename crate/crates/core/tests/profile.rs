use std::f64::consts::PI;

use waveguide_nls::data::{bubble_sum, random_smooth, BubbleSpec};
use waveguide_nls::profile::{best_cube_with, extract_bubbles, linear_l4_norm, TimeWindow};
use waveguide_nls::spectral::{make_grid, norm_lx2_hys};

/// `‖e^{itΔ}f‖⁴_{L⁴} / (‖f‖³_{L²H^{7/8}} · sup_Q score)` over random data;
/// maxima over blocks of ten draws agree to within a factor of two.
#[test]
fn refined_strichartz_constant_is_stable() {
    let grid = make_grid(2.0 * PI * 4.0, 64, 4).unwrap();
    let window = TimeWindow::default_with(8.0).unwrap();
    let ratios: Vec<f64> = (0..50u64)
        .map(|seed| {
            let f = random_smooth(&grid, 1000 + seed, 3, 6.0);
            let (_, score) = best_cube_with(&f, &window).unwrap().unwrap();
            let l4 = linear_l4_norm(&f, &window).unwrap();
            l4.powi(4) / (norm_lx2_hys(&f, 0.875).powi(3) * score)
        })
        .collect();
    assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0 && *r <= 1.0), "{ratios:?}");
    let maxima: Vec<f64> = ratios.chunks(10).map(|c| c.iter().cloned().fold(0.0, f64::max)).collect();
    let (lo, hi) = maxima.iter().fold((f64::MAX, 0.0f64), |(lo, hi), m| (lo.min(*m), hi.max(*m)));
    assert!(hi / lo <= 2.0, "block maxima {maxima:?}");
}

#[test]
fn separated_bubbles_decouple() {
    let grid = make_grid(2.0 * PI * 8.0, 128, 4).unwrap();
    let specs = [
        BubbleSpec { lambda: 1.0, xi: [1.5, -0.5], center: [-10.0, 5.0] },
        BubbleSpec { lambda: 1.0, xi: [-0.5, 2.5], center: [12.0, -8.0] },
    ];
    let e = extract_bubbles(&bubble_sum(&grid, &specs, 4.0, 0.3), 2, 8.0).unwrap();
    assert_eq!(e.bubbles.len(), 2);
    for it in &e.iterations {
        assert!(it.decoupling_defect <= 0.05, "iteration {}: {}", it.iteration, it.decoupling_defect);
    }
    let captured: f64 = e.bubbles.iter().map(|b| b.captured_l2).sum();
    assert!(captured >= 0.9, "{captured}");
}
