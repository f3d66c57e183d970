//! Runs an experiment config through the library, as the CLI does.
//!
//! `cargo run --example run_config -- configs/simulate.toml /tmp/out`

use std::path::PathBuf;

use waveguide_nls::experiment::{run, ExperimentConfig};

fn main() -> waveguide_nls::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "configs/simulate.toml".into()));
    let cfg = ExperimentConfig::from_path(&path)?;
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| cfg.output.clone());
    let outcome = run(&cfg, &out)?;
    let m = &outcome.manifest;
    println!("{} [{:?}] hash {}", m.experiment, m.status, m.config_hash);
    for o in &m.outputs {
        println!("  {} ({} rows)", o.file, o.rows);
    }
    Ok(())
}
