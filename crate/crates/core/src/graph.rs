//! Coupling matrices, directed-graph connectivity and the spectral data
//! (`lambda2`, left null vector `r`) that drive synchronization.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, Lu, RealMatrix, Spectrum};

/// Default relative threshold below which an eigenvalue of the coupling
/// matrix counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

/// Row-sum tolerance relative to `1 + max |gamma_ij|`.
const ROW_SUM_TOL: f64 = 1e-12;

/// A `p x p` coupling matrix: nonnegative off-diagonal entries and zero
/// row sums. Entry `(i, j) > 0` means agent `i` listens to agent `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    gamma: RealMatrix,
}

impl CouplingMatrix {
    /// Builds the coupling matrix whose off-diagonal entries are the given
    /// weights and whose diagonal makes every row sum vanish. The diagonal
    /// of `weights` is ignored.
    pub fn from_weights(weights: &RealMatrix) -> Result<Self> {
        let p = weights.require_square("coupling_from_weights")?;
        let mut gamma = RealMatrix::zeros(p, p);
        for i in 0..p {
            let mut row_sum = 0.0;
            for j in 0..p {
                if i == j {
                    continue;
                }
                let w = weights[(i, j)];
                if !w.is_finite() {
                    return Err(Error::NonFinite("coupling weights"));
                }
                if w < 0.0 {
                    return Err(Error::NegativeWeight { i, j, weight: w });
                }
                gamma[(i, j)] = w;
                row_sum += w;
            }
            gamma[(i, i)] = -row_sum;
        }
        Ok(CouplingMatrix { gamma })
    }

    /// Wraps an explicit matrix after checking the sign and row-sum
    /// conditions.
    pub fn from_gamma(gamma: RealMatrix) -> Result<Self> {
        let p = gamma.require_square("coupling matrix")?;
        let scale = 1.0 + gamma.max_abs();
        for i in 0..p {
            for j in 0..p {
                if i != j && gamma[(i, j)] < 0.0 {
                    return Err(Error::NegativeWeight {
                        i,
                        j,
                        weight: gamma[(i, j)],
                    });
                }
            }
            let s: f64 = gamma.row(i).iter().sum();
            if s.abs() > ROW_SUM_TOL * scale {
                return Err(Error::InvalidCoupling(format!("row {i} sums to {s:e}")));
            }
        }
        Ok(CouplingMatrix { gamma })
    }

    /// Builds from weighted arcs `(i, j, w)` with zero-based indices;
    /// repeated arcs accumulate.
    pub fn from_arcs(p: usize, arcs: &[(usize, usize, f64)]) -> Result<Self> {
        let mut w = RealMatrix::zeros(p, p);
        for &(i, j, weight) in arcs {
            if i >= p || j >= p {
                return Err(Error::InvalidInput(format!(
                    "arc ({i}, {j}) out of range for p = {p}"
                )));
            }
            if weight < 0.0 {
                return Err(Error::NegativeWeight { i, j, weight });
            }
            if i != j {
                w[(i, j)] += weight;
            }
        }
        Self::from_weights(&w)
    }

    /// Directed cycle: agent `i` listens to agent `i + 1 (mod p)`.
    pub fn cycle(p: usize) -> Self {
        let arcs: Vec<_> = (0..p)
            .filter(|_| p > 1)
            .map(|i| (i, (i + 1) % p, 1.0))
            .collect();
        Self::from_arcs(p, &arcs).expect("cycle arcs are valid")
    }

    /// Directed path: agent `i` listens to agent `i + 1`; the last agent
    /// is the root.
    pub fn path(p: usize) -> Self {
        let arcs: Vec<_> = (1..p).map(|i| (i - 1, i, 1.0)).collect();
        Self::from_arcs(p, &arcs).expect("path arcs are valid")
    }

    /// All-to-all with unit weights.
    pub fn complete(p: usize) -> Self {
        let w = RealMatrix::from_fn(p, p, |i, j| if i == j { 0.0 } else { 1.0 });
        Self::from_weights(&w).expect("unit weights are valid")
    }

    /// Random connected coupling: a random spanning in-tree toward a random
    /// root plus extra arcs with probability `density`; weights uniform in
    /// `[0.1, 1]`.
    pub fn random_connected<R: Rng>(p: usize, density: f64, rng: &mut R) -> Self {
        let mut w = RealMatrix::zeros(p, p);
        let mut order: Vec<usize> = (0..p).collect();
        order.shuffle(rng);
        for k in 1..p {
            let parent = order[rng.gen_range(0..k)];
            w[(order[k], parent)] = rng.gen_range(0.1..=1.0);
        }
        for i in 0..p {
            for j in 0..p {
                if i != j && w[(i, j)] == 0.0 && rng.gen_bool(density.clamp(0.0, 1.0)) {
                    w[(i, j)] = rng.gen_range(0.1..=1.0);
                }
            }
        }
        Self::from_weights(&w).expect("random weights are nonnegative")
    }

    pub fn p(&self) -> usize {
        self.gamma.rows()
    }

    pub fn gamma(&self) -> &RealMatrix {
        &self.gamma
    }

    /// Same graph with agents relabelled: new agent `k` is old agent
    /// `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let p = self.p();
        let mut seen = vec![false; p];
        if perm.len() != p
            || perm
                .iter()
                .any(|&k| k >= p || std::mem::replace(&mut seen[k], true))
        {
            return Err(Error::InvalidInput("not a permutation".into()));
        }
        let g = RealMatrix::from_fn(p, p, |i, j| self.gamma[(perm[i], perm[j])]);
        Ok(CouplingMatrix { gamma: g })
    }

    /// Arcs `(i, j)` with `gamma_ij > 0`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let p = self.p();
        let mut out = Vec::new();
        for i in 0..p {
            for j in 0..p {
                if i != j && self.gamma[(i, j)] > 0.0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True iff some node can be reached along arcs from every other node.
    pub fn is_connected(&self) -> bool {
        let p = self.p();
        if p == 0 {
            return false;
        }
        // reversed adjacency: incoming[j] lists i with arc (i, j)
        let mut incoming = vec![Vec::new(); p];
        for (i, j) in self.arcs() {
            incoming[j].push(i);
        }
        (0..p).any(|root| {
            let mut seen = vec![false; p];
            seen[root] = true;
            let mut reached = 1;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &u in &incoming[v] {
                    if !seen[u] {
                        seen[u] = true;
                        reached += 1;
                        queue.push_back(u);
                    }
                }
            }
            reached == p
        })
    }

    /// Eigen-data of the coupling matrix. See [`GraphSpectrum`].
    pub fn spectrum(&self, zero_tol: f64) -> Result<GraphSpectrum> {
        graph_spectrum(self, zero_tol)
    }
}

/// Spectral summary of a coupling matrix with a simple zero eigenvalue.
#[derive(Debug, Clone)]
pub struct GraphSpectrum {
    pub zero_multiplicity: usize,
    /// Nonzero eigenvalue with the largest real part; `None` when `p = 1`.
    pub lambda2: Option<Complex64>,
    pub eigenvalues: Spectrum,
    /// The eigenvalues other than the simple zero.
    pub nonzero: Vec<Complex64>,
    /// Left null vector normalized so that `r . 1 = 1`.
    pub r: Vec<f64>,
}

impl GraphSpectrum {
    /// `-Re(lambda2)`, or `None` for a single agent.
    pub fn coupling_strength(&self) -> Option<f64> {
        self.lambda2.map(|l| -l.re)
    }
}

/// Computes eigenvalues, `lambda2` and `r`. Rejects matrices whose zero
/// eigenvalue is not simple.
pub fn graph_spectrum(g: &CouplingMatrix, zero_tol: f64) -> Result<GraphSpectrum> {
    let gamma = g.gamma();
    let p = g.p();
    let scale = 1.0 + gamma.frobenius_norm();
    let spec = eigenvalues(gamma, f64::EPSILON)?;
    let zero_mult = spec
        .values()
        .iter()
        .filter(|z| z.norm() <= zero_tol * scale)
        .count();
    if zero_mult != 1 {
        return Err(Error::ZeroMultiplicity(zero_mult));
    }
    let zero_idx = spec
        .values()
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, _)| i)
        .expect("p >= 1");
    let nonzero: Vec<Complex64> = spec
        .values()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != zero_idx)
        .map(|(_, &z)| z)
        .collect();
    let lambda2 = select_lambda2(&nonzero, 1e-9 * scale);
    let r = left_null_vector(gamma)?;
    let res = null_vector_residual(gamma, &r);
    if res > 1e-10 * scale {
        return Err(Error::BadNullVector { residual: res });
    }
    debug_assert_eq!(r.len(), p);
    Ok(GraphSpectrum {
        zero_multiplicity: zero_mult,
        lambda2,
        eigenvalues: spec,
        nonzero,
        r,
    })
}

/// Largest real part; ties (within `tie`) go to the smallest `|Im|`, then
/// to nonnegative `Im`.
fn select_lambda2(nonzero: &[Complex64], tie: f64) -> Option<Complex64> {
    let max_re = nonzero
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let candidates: Vec<Complex64> = nonzero
        .iter()
        .copied()
        .filter(|z| z.re >= max_re - tie)
        .collect();
    let min_im = candidates
        .iter()
        .map(|z| z.im.abs())
        .fold(f64::INFINITY, f64::min);
    candidates
        .iter()
        .copied()
        .filter(|z| z.im.abs() <= min_im + tie)
        .max_by(|a, b| a.im.total_cmp(&b.im))
}

/// Solves `r' G = 0`, `r' 1 = 1` through the bordered system
/// `[[G', 1], [1', 0]] [r; mu] = [0; 1]`, with one refinement step.
fn left_null_vector(gamma: &RealMatrix) -> Result<Vec<f64>> {
    let p = gamma.rows();
    let mut k = RealMatrix::zeros(p + 1, p + 1);
    for i in 0..p {
        for j in 0..p {
            k[(i, j)] = gamma[(j, i)];
        }
        k[(i, p)] = 1.0;
        k[(p, i)] = 1.0;
    }
    let mut rhs = vec![0.0; p + 1];
    rhs[p] = 1.0;
    let lu = Lu::new(&k).map_err(|_| Error::NullVectorNormalization(0.0))?;
    let mut x = lu.solve_vec(&rhs);
    let kx = k.matvec(&x)?;
    let resid: Vec<f64> = rhs.iter().zip(&kx).map(|(b, a)| b - a).collect();
    for (xi, d) in x.iter_mut().zip(lu.solve_vec(&resid)) {
        *xi += d;
    }
    x.truncate(p);
    let total: f64 = x.iter().sum();
    if !total.is_finite() || total.abs() < 1e-12 {
        return Err(Error::NullVectorNormalization(total));
    }
    Ok(x)
}

/// `max(|r' G|_inf, |r' 1 - 1|)`.
pub fn null_vector_residual(gamma: &RealMatrix, r: &[f64]) -> f64 {
    let p = gamma.rows();
    let rg = (0..p)
        .map(|j| (0..p).map(|i| r[i] * gamma[(i, j)]).sum::<f64>().abs())
        .fold(0.0, f64::max);
    let sum: f64 = r.iter().sum();
    rg.max((sum - 1.0).abs())
}

/// Textual graph description: a generator shortcut or explicit arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSpec {
    /// `"cycle p"`, `"path p"`, `"complete p"` or `"random p density seed"`.
    Shortcut(String),
    /// Weighted arcs `(i, j, w)` with one-based agent indices.
    Weights {
        p: usize,
        weights: Vec<(usize, usize, f64)>,
    },
}

impl GraphSpec {
    pub fn build(&self) -> Result<CouplingMatrix> {
        match self {
            GraphSpec::Shortcut(s) => s.parse::<Generator>()?.build(),
            GraphSpec::Weights { p, weights } => {
                let mut arcs = Vec::with_capacity(weights.len());
                for &(i, j, w) in weights {
                    if i == 0 || j == 0 {
                        return Err(Error::InvalidInput(
                            "agent indices in weight triples are one-based".into(),
                        ));
                    }
                    arcs.push((i - 1, j - 1, w));
                }
                CouplingMatrix::from_arcs(*p, &arcs)
            }
        }
    }
}

/// Parsed generator shortcut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Cycle(usize),
    Path(usize),
    Complete(usize),
    Random { p: usize, density: f64, seed: u64 },
}

impl Generator {
    pub fn build(self) -> Result<CouplingMatrix> {
        Ok(match self {
            Generator::Cycle(p) => CouplingMatrix::cycle(p),
            Generator::Path(p) => CouplingMatrix::path(p),
            Generator::Complete(p) => CouplingMatrix::complete(p),
            Generator::Random { p, density, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                CouplingMatrix::random_connected(p, density, &mut rng)
            }
        })
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::InvalidInput(format!("unrecognized graph shortcut {s:?}"));
        let count = |w: &str| -> Result<usize> {
            match w.parse::<usize>() {
                Ok(p) if p >= 1 => Ok(p),
                _ => Err(bad()),
            }
        };
        match words.as_slice() {
            ["cycle", p] => Ok(Generator::Cycle(count(p)?)),
            ["path", p] => Ok(Generator::Path(count(p)?)),
            ["complete", p] => Ok(Generator::Complete(count(p)?)),
            ["random", p, density, seed] => {
                let density: f64 = density.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&density) {
                    return Err(bad());
                }
                Ok(Generator::Random {
                    p: count(p)?,
                    density,
                    seed: seed.parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Cycle(p) => write!(f, "cycle {p}"),
            Generator::Path(p) => write!(f, "path {p}"),
            Generator::Complete(p) => write!(f, "complete {p}"),
            Generator::Random { p, density, seed } => write!(f, "random {p} {density} {seed}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn weights_build_row_sums() {
        let g = CouplingMatrix::from_weights(&RealMatrix::zeros(3, 3)).unwrap();
        assert_eq!(g.gamma(), &RealMatrix::zeros(3, 3));

        let w = RealMatrix::from_rows(&[[5.0, 1.0], [1.0, 9.0]]).unwrap();
        let g = CouplingMatrix::from_weights(&w).unwrap();
        assert_eq!(g.gamma().to_rows(), vec![vec![-1.0, 1.0], vec![1.0, -1.0]]);

        let g = CouplingMatrix::complete(3);
        for i in 0..3 {
            assert_eq!(g.gamma()[(i, i)], -2.0);
        }
    }

    #[test]
    fn negative_weight_rejected() {
        let w = RealMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            CouplingMatrix::from_weights(&w),
            Err(Error::NegativeWeight { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn from_gamma_validates() {
        let bad_sum = RealMatrix::from_rows(&[[-1.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            CouplingMatrix::from_gamma(bad_sum),
            Err(Error::InvalidCoupling(_))
        ));
        let ok = RealMatrix::from_rows(&[[-1.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(CouplingMatrix::from_gamma(ok).is_ok());
    }

    #[test]
    fn connectivity_cases() {
        // a -> b -> c: c is reachable from every node
        assert!(CouplingMatrix::path(3).is_connected());
        assert!(CouplingMatrix::cycle(5).is_connected());
        assert!(CouplingMatrix::complete(4).is_connected());
        assert!(CouplingMatrix::from_weights(&RealMatrix::zeros(1, 1))
            .unwrap()
            .is_connected());
        // two disjoint 2-cycles
        let g = CouplingMatrix::from_arcs(4, &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)])
            .unwrap();
        assert!(!g.is_connected());
        // two leaders listening to nobody
        let g = CouplingMatrix::from_arcs(3, &[(0, 1, 1.0), (0, 2, 1.0)]).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn cycle_spectrum() {
        let s = CouplingMatrix::cycle(4).spectrum(DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(s.zero_multiplicity, 1);
        let ev = s.eigenvalues.values();
        for want in [
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 1.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(-1.0, -1.0),
        ] {
            assert!(ev.iter().any(|&z| near(z, want, 1e-12)), "missing {want}");
        }
        let l2 = s.lambda2.unwrap();
        assert!(near(l2, Complex64::new(-1.0, 1.0), 1e-12));
        for r in &s.r {
            assert!((r - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn complete_spectrum() {
        let s = CouplingMatrix::complete(3)
            .spectrum(DEFAULT_ZERO_TOL)
            .unwrap();
        assert!(near(s.lambda2.unwrap(), Complex64::new(-3.0, 0.0), 1e-12));
        for r in &s.r {
            assert!((r - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn path_null_vector_concentrates_on_root() {
        let s = CouplingMatrix::path(3).spectrum(DEFAULT_ZERO_TOL).unwrap();
        assert!(s.r[0].abs() < 1e-14 && s.r[1].abs() < 1e-14);
        assert!((s.r[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn disconnected_spectrum_rejected() {
        let g = CouplingMatrix::from_arcs(4, &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)])
            .unwrap();
        assert!(matches!(
            g.spectrum(DEFAULT_ZERO_TOL),
            Err(Error::ZeroMultiplicity(2))
        ));
    }

    #[test]
    fn single_agent_has_no_lambda2() {
        let g = CouplingMatrix::from_weights(&RealMatrix::zeros(1, 1)).unwrap();
        let s = g.spectrum(DEFAULT_ZERO_TOL).unwrap();
        assert!(s.lambda2.is_none());
        assert_eq!(s.r, vec![1.0]);
    }

    #[test]
    fn shortcut_parsing() {
        assert_eq!("cycle 4".parse::<Generator>().unwrap(), Generator::Cycle(4));
        assert_eq!(
            "random 10 0.3 42".parse::<Generator>().unwrap(),
            Generator::Random {
                p: 10,
                density: 0.3,
                seed: 42
            }
        );
        assert!("cycle".parse::<Generator>().is_err());
        assert!("star 3".parse::<Generator>().is_err());
        assert!("random 3 1.5 1".parse::<Generator>().is_err());
        assert!("path 0".parse::<Generator>().is_err());
    }

    #[test]
    fn weight_triples_are_one_based() {
        let spec = GraphSpec::Weights {
            p: 2,
            weights: vec![(1, 2, 1.0), (2, 1, 1.0)],
        };
        assert_eq!(spec.build().unwrap(), CouplingMatrix::complete(2));
        let bad = GraphSpec::Weights {
            p: 2,
            weights: vec![(0, 1, 1.0)],
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn random_generator_is_connected_and_deterministic() {
        for seed in 0..20 {
            let a = Generator::Random {
                p: 12,
                density: 0.1,
                seed,
            }
            .build()
            .unwrap();
            let b = Generator::Random {
                p: 12,
                density: 0.1,
                seed,
            }
            .build()
            .unwrap();
            assert_eq!(a, b);
            assert!(a.is_connected());
        }
    }
}
