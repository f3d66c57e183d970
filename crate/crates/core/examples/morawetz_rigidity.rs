//! Interaction Morawetz action along a trajectory on [-T, T], and the
//! rigidity functional against sup |M| for nested horizons.

use waveguide_nls::data::gaussian_trig;
use waveguide_nls::morawetz::{morawetz_series, summarize, MorawetzWeight};
use waveguide_nls::solver::{evolve_two_sided, SolverConfig};
use waveguide_nls::spectral::make_grid;

fn main() -> waveguide_nls::Result<()> {
    let grid = make_grid(256.0, 256, 4)?;
    let u0 = gaussian_trig(&grid, 0.5, 4.0, [1.0, -0.5], [0.1, 0.0], 0.3, 1);
    let cfg = SolverConfig::new(0.02, 20.0).with_stride(10);
    let clock = std::time::Instant::now();
    let ts = evolve_two_sided(&u0, &cfg)?.slices;
    println!("evolved {} slices in {:.1?}", ts.len(), clock.elapsed());

    let weight = MorawetzWeight::new(MorawetzWeight::DEFAULT_R0)?;
    let records = morawetz_series(&ts, &weight)?;
    println!("{:>6} {:>14} {:>14} {:>14} {:>14} {:>12}", "T", "rigidity", "sup|M|", "ratio", "M(T)-M(-T)", "max|M|/bnd");
    for horizon in [5.0, 10.0, 20.0] {
        let s = summarize(&records, horizon)?;
        println!(
            "{:>6} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>12.4}",
            horizon, s.rigidity, s.sup_abs_m, s.ratio, s.m_increment, s.max_bound_ratio
        );
    }
    Ok(())
}
