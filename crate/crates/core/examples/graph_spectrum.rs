// Build coupling matrices, check connectivity and compute lambda2 and the
// left null vector r.

use std::error::Error;

use netsync::graph::{CouplingMatrix, DEFAULT_ZERO_TOL};
use netsync::linalg::RealMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // weights[i][j] > 0 means agent i listens to agent j
    let weights = RealMatrix::from_rows(&[
        [0.0, 2.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.5, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let graphs = [
        ("directed 4-cycle", CouplingMatrix::cycle(4)),
        ("complete 3", CouplingMatrix::complete(3)),
        ("weighted digraph", CouplingMatrix::from_weights(&weights)?),
        (
            "random 8",
            CouplingMatrix::random_connected(8, 0.2, &mut rng),
        ),
    ];
    for (name, g) in &graphs {
        let s = g.spectrum(DEFAULT_ZERO_TOL)?;
        let l2 = s.lambda2.ok_or("no nonzero eigenvalue")?;
        println!("{name}: connected = {}", g.is_connected());
        println!(
            "  lambda2 = {:.6} {:+.6}j, -Re(lambda2) = {:.6}",
            l2.re, l2.im, -l2.re
        );
        println!(
            "  r = {:?}",
            s.r.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        );
    }

    // two disjoint pairs cannot synchronize
    let split =
        CouplingMatrix::from_arcs(4, &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)])?;
    println!("two components: connected = {}", split.is_connected());
    if split.is_connected() {
        return Err("split graph reported connected".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
