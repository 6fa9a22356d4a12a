// Solve the Riccati equation for a few small systems and read off the
// coupling gain.

use std::error::Error;

use netsync::linalg::RealMatrix;
use netsync::riccati::{are_residual, solve_are};
use netsync::{synthesize, Mode, SystemModel};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let systems = [
        ("scalar integrator", vec![vec![0.0]], vec![vec![1.0]]),
        ("stable scalar", vec![vec![-1.0]], vec![vec![1.0]]),
        (
            "double integrator",
            vec![vec![0.0, 1.0], vec![0.0, 0.0]],
            vec![vec![0.0], vec![1.0]],
        ),
        (
            "oscillator",
            vec![vec![0.0, 1.0], vec![-1.0, 0.0]],
            vec![vec![0.0], vec![1.0]],
        ),
    ];
    for (name, a, b) in systems {
        let a = RealMatrix::from_rows(&a)?;
        let b = RealMatrix::from_rows(&b)?;
        let sol = solve_are(&a, &b, 1e-9)?;
        let residual = are_residual(&a, &b, &sol.p)?;
        let gains = synthesize(&SystemModel::new(a, b, Mode::Primal)?, 0.5)?;
        println!("{name}");
        println!("  P = {:?}", sol.p.to_rows());
        println!(
            "  K = {:?}  (scale {} for delta 0.5)",
            gains.gain.to_rows(),
            gains.scale
        );
        println!(
            "  residual {residual:.2e}, {} Newton steps",
            sol.newton_steps
        );
        if residual > 1e-9 * (1.0 + sol.p.frobenius_norm().powi(2)) {
            return Err(format!("{name}: residual {residual:e} too large").into());
        }
    }

    // The double integrator has the closed form P = [[√3, 1], [1, √3]].
    let a = RealMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]])?;
    let b = RealMatrix::from_rows(&[[0.0], [1.0]])?;
    let p = solve_are(&a, &b, 1e-9)?.p;
    let s3 = 3f64.sqrt();
    if (p[(0, 0)] - s3).abs() > 1e-8 || (p[(0, 1)] - 1.0).abs() > 1e-8 {
        return Err("double integrator P differs from the closed form".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
