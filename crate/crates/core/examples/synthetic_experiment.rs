//! Generates two groups of delay streams and runs the full experiment:
//! three classifiers at depths 2, 3 and 4 under nested 6-fold CV.
//!
//! `cargo run --release --example synthetic_experiment -- [seed]`

use sigstream::pipeline::{run_experiment, synth_generate, PipelineConfig, SynthConfig};

fn main() -> sigstream::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let records = synth_generate(&SynthConfig {
        seed,
        ..SynthConfig::default()
    })?;
    let config = PipelineConfig {
        seed,
        ..PipelineConfig::default()
    };
    let start = std::time::Instant::now();
    let report = run_experiment(&records, &config)?;
    print!("{}", report.to_table());
    eprintln!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
