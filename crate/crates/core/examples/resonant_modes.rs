//! Resonant mode system: resonant sets, the closed-form nonlinearity against
//! the triple sum, and an evolution with its invariants.

use waveguide_nls::data::gaussian_trig;
use waveguide_nls::resonant::{evolve_resonant, resonant_rhs, resonant_rhs_bruteforce, resonant_set, ModeVector};
use waveguide_nls::solver::SolverConfig;
use waveguide_nls::spectral::make_grid;

fn main() -> waveguide_nls::Result<()> {
    for t in resonant_set(1, 3)? {
        print!("({},{},{}) ", t.j1, t.j2, t.j3);
    }
    println!();

    let grid = make_grid(40.0, 64, 8)?;
    let u0 = gaussian_trig(&grid, 1.0, 2.0, [0.0, 0.0], [0.0, 0.0], 0.5, 1);
    let v0 = ModeVector::from_field(&u0, 3)?;
    let diff = resonant_rhs(&v0).max_abs_diff(&resonant_rhs_bruteforce(&v0))?;
    println!("closed form vs triple sum: {diff:.3e}");

    let cfg = SolverConfig::new(0.01, 5.0).with_stride(100).without_slices();
    let ev = evolve_resonant(&v0, &cfg)?;
    println!("{:>6} {:>20} {:>20} {:>20}", "t", "mass", "l2h1", "hamiltonian");
    for r in &ev.diagnostics {
        println!("{:>6.2} {:>20.14} {:>20.14} {:>20.14}", r.t, r.mass, r.l2h1, r.hamiltonian);
    }
    Ok(())
}
