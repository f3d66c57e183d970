//! Strang evolution of a Gaussian-times-trig datum: conserved quantities,
//! the `L²_x H¹_y` norm and the running Strichartz norm.

use waveguide_nls::data::gaussian_trig;
use waveguide_nls::solver::{evolve, SolverConfig};
use waveguide_nls::spectral::make_grid;

fn main() -> waveguide_nls::Result<()> {
    let grid = make_grid(40.0, 64, 8)?;
    let u0 = gaussian_trig(&grid, 1.0, 2.0, [0.0, 0.0], [0.5, 0.0], 0.5, 1);
    let cfg = SolverConfig::new(0.01, 5.0).with_stride(50).without_slices();
    let ev = evolve(&u0, &cfg)?;
    println!("{:>6} {:>20} {:>20} {:>14} {:>14}", "t", "mass", "energy", "L2H1", "strichartz");
    for r in &ev.diagnostics {
        println!(
            "{:>6.2} {:>20.14} {:>20.14} {:>14.8} {:>14.8}",
            r.t, r.mass, r.energy, r.lx2_hy1, r.running_strichartz
        );
    }
    println!("max relative drift {:.3e}", ev.max_conservation_drift());
    Ok(())
}
