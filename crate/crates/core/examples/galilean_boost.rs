//! Galilean covariance: boosting the data and evolving agrees with evolving
//! and boosting, when `2Tξ` is a whole number of grid cells.

use std::f64::consts::PI;

use waveguide_nls::data::gaussian_trig;
use waveguide_nls::solver::{galilean_boost, run_steps};
use waveguide_nls::spectral::{free_propagate, make_grid};

fn main() -> waveguide_nls::Result<()> {
    let n = 128;
    let grid = make_grid((4.0 * PI * n as f64).sqrt(), n, 8)?;
    let u0 = gaussian_trig(&grid, 1.0, 2.0, [0.0, 0.0], [0.0, 0.0], 0.5, 1);
    let xi = [grid.dk(), 0.0];
    let (dt, steps) = (0.005, 200);
    let t = dt * steps as f64;
    println!("shift 2Tξ = {:.6} cells", 2.0 * t * xi[0] / grid.dx());

    let linear_a = free_propagate(&galilean_boost(&u0, xi, 0.0).field, t);
    let linear_b = galilean_boost(&free_propagate(&u0, t), xi, t).field;
    println!("linear identity error    {:.3e}", linear_a.max_abs_diff(&linear_b)?);

    let a = run_steps(&galilean_boost(&u0, xi, 0.0).field, dt, steps, false);
    let b = galilean_boost(&run_steps(&u0, dt, steps, false), xi, t).field;
    println!("nonlinear covariance err {:.3e}", a.max_abs_diff(&b)?);
    Ok(())
}
