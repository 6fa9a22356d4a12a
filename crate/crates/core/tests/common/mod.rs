#![allow(dead_code)]

use netsync::linalg::RealMatrix;
use netsync::riccati::is_stabilizable;
use netsync::CouplingMatrix;
use rand::Rng;

pub fn uniform_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, amp: f64) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-amp..=amp))
}

/// Random `(A, B)` with `n` in `1..=max_n`, `m` in `1..=max_m`, accepted
/// only when the PBH test passes.
pub fn random_stabilizable<R: Rng>(
    rng: &mut R,
    max_n: usize,
    max_m: usize,
) -> (RealMatrix, RealMatrix) {
    loop {
        let n = rng.gen_range(1..=max_n);
        let m = rng.gen_range(1..=max_m);
        let a = uniform_matrix(rng, n, n, 1.0);
        let b = uniform_matrix(rng, n, m, 1.0);
        if is_stabilizable(&a, &b, 1e-6).unwrap() {
            return (a, b);
        }
    }
}

pub fn random_connected<R: Rng>(rng: &mut R, max_p: usize) -> CouplingMatrix {
    let p = rng.gen_range(2..=max_p);
    let density = rng.gen_range(0.0..0.4);
    CouplingMatrix::random_connected(p, density, rng)
}

pub fn max_abs_diff(a: &RealMatrix, b: &RealMatrix) -> f64 {
    a.try_sub(b).unwrap().max_abs()
}
