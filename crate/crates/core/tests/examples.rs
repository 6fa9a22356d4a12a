//! Every runnable example doubles as a test.

#[allow(dead_code)]
mod riccati_gains {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/riccati_gains.rs"
    ));
}

#[test]
fn riccati_gains_runs() {
    riccati_gains::run_example().expect("riccati_gains example should run");
}

#[allow(dead_code)]
mod graph_spectrum {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/graph_spectrum.rs"
    ));
}

#[test]
fn graph_spectrum_runs() {
    graph_spectrum::run_example().expect("graph_spectrum example should run");
}

#[allow(dead_code)]
mod shifted_gain_certificate {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/shifted_gain_certificate.rs"
    ));
}

#[test]
fn shifted_gain_certificate_runs() {
    shifted_gain_certificate::run_example().expect("shifted_gain_certificate example should run");
}

#[allow(dead_code)]
mod consensus {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/consensus.rs"
    ));
}

#[test]
fn consensus_runs() {
    consensus::run_example().expect("consensus example should run");
}

#[allow(dead_code)]
mod synchronize_double_integrator {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/synchronize_double_integrator.rs"
    ));
}

#[test]
fn synchronize_double_integrator_runs() {
    synchronize_double_integrator::run_example()
        .expect("synchronize_double_integrator example should run");
}

#[allow(dead_code)]
mod output_coupling {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/output_coupling.rs"
    ));
}

#[test]
fn output_coupling_runs() {
    output_coupling::run_example().expect("output_coupling example should run");
}

#[allow(dead_code)]
mod integrator_cross_check {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/integrator_cross_check.rs"
    ));
}

#[test]
fn integrator_cross_check_runs() {
    integrator_cross_check::run_example().expect("integrator_cross_check example should run");
}

#[allow(dead_code)]
mod scenario_files {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/scenario_files.rs"
    ));
}

#[test]
fn scenario_files_runs() {
    scenario_files::run_example().expect("scenario_files example should run");
}
