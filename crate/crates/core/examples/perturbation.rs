//! Forced versus unforced evolution: the difference stays proportional to
//! the forcing size.

use waveguide_nls::data::gaussian_trig;
use waveguide_nls::solver::{perturbation_experiment, SolverConfig};
use waveguide_nls::spectral::make_grid;

fn main() -> waveguide_nls::Result<()> {
    let grid = make_grid(32.0, 64, 8)?;
    let u0 = gaussian_trig(&grid, 0.5, 2.0, [0.0, 0.0], [0.0, 0.0], 0.3, 1);
    let cfg = SolverConfig::new(0.01, 4.0).without_slices();
    println!("{:>10} {:>14} {:>14}", "amplitude", "sup diff", "ratio");
    for amp in [1e-4, 1e-3, 1e-2] {
        let r = perturbation_experiment(&u0, amp, &cfg)?;
        println!("{:>10.0e} {:>14.6e} {:>14.6}", amp, r.sup_difference, r.ratio);
    }
    Ok(())
}
