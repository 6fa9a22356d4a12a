// RK4 against exact propagation by the transition matrix e^{Mh}.

use std::error::Error;

use netsync::graph::CouplingMatrix;
use netsync::linalg::RealMatrix;
use netsync::{
    build_closed_loop, integrate, synthesize, Integrator, Mode, NetworkSetup, SystemModel,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = RealMatrix::from_rows(&[[-0.1, 1.0], [-1.0, -0.1]])?;
    let b = RealMatrix::from_rows(&[[0.0], [1.0]])?;
    let system = SystemModel::new(a, b, Mode::Primal)?;
    let gains = synthesize(&system, 1.0)?;
    let x0 = vec![1.0, 0.0, 0.0, 1.0, -1.0, 0.5, 0.3, -0.7];
    let setup = NetworkSetup::new(system, CouplingMatrix::cycle(4), gains, x0.clone())?;
    let m = build_closed_loop(&setup);

    for step in [1e-1, 1e-2, 1e-3] {
        let rk = integrate(&m, &x0, 5.0, step, Integrator::Rk4)?;
        let ex = integrate(&m, &x0, 5.0, step, Integrator::Exact)?;
        let dev = rk
            .states
            .iter()
            .zip(&ex.states)
            .flat_map(|(u, v)| u.iter().zip(v).map(|(p, q)| (p - q).abs()))
            .fold(0.0, f64::max);
        println!("h = {step:.0e}: max |x_rk4 - x_exact| = {dev:.2e}");
        if step == 1e-3 && dev > 1e-8 {
            return Err("RK4 and exact propagation disagree".into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
