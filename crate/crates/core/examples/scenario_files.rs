// Drive the command layer from the JSON scenarios shipped next to this
// file, the same way the `netsync` binary does.

use std::error::Error;
use std::path::Path;

use netsync::cli::{run_file, Command, RunOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/scenarios");
    let out = std::env::temp_dir().join(format!("netsync-scenarios-{}", std::process::id()));
    let opts = RunOptions {
        out_dir: Some(out.clone()),
        ..Default::default()
    };

    let ok = run_file(
        Command::Synthesize,
        &dir.join("double_integrator_complete3.json"),
        &opts,
    )?;
    println!("synthesize: K = {}", ok.report["gain"]);

    let ok = run_file(
        Command::Simulate,
        &dir.join("oscillators_dual_cycle.json"),
        &opts,
    )?;
    println!(
        "simulate: e(T)/e(0) = {}, wrote {:?}",
        ok.report["error"]["ratio"], ok.written
    );

    let ok = run_file(
        Command::Spectrum,
        &dir.join("consensus_complete3.json"),
        &opts,
    )?;
    println!("spectrum: lambda2 = {}", ok.report["lambda2"]);

    for name in ["unstabilizable.json", "disconnected.json"] {
        match run_file(Command::Simulate, &dir.join(name), &opts) {
            Ok(_) => return Err(format!("{name} should have been rejected").into()),
            Err(f) => println!("{name}: exit {} ({})", f.code, f.message),
        }
    }
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
