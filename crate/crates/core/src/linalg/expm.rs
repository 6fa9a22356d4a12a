//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant (Higham's parameters).

use super::lu::Lu;
use super::matrix::RealMatrix;
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

/// Beyond this 1-norm of `m t` the exponential is refused outright.
const MAX_NORM: f64 = 1.0e5;

/// `e^{m t}`.
pub fn expm(m: &RealMatrix, t: f64) -> Result<RealMatrix> {
    let n = m.require_square("expm")?;
    if !t.is_finite() || !m.is_finite() {
        return Err(Error::NonFinite("expm input"));
    }
    if n == 0 || t == 0.0 {
        return Ok(RealMatrix::identity(n));
    }
    let a = m.scale(t);
    let norm = a.norm_one();
    if norm > MAX_NORM {
        return Err(Error::ExpOverflow { norm });
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let a = a.scale(0.5f64.powi(squarings as i32));

    let ident = RealMatrix::identity(n);
    let a2 = a.matmul(&a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;
    let c = &PADE13;

    let lincomb = |terms: &[(f64, &RealMatrix)]| -> RealMatrix {
        let mut acc = RealMatrix::zeros(n, n);
        for &(coef, mat) in terms {
            acc = acc.try_add(&mat.scale(coef)).expect("equal shapes");
        }
        acc
    };

    let u_inner = lincomb(&[(c[13], &a6), (c[11], &a4), (c[9], &a2)]);
    let u_tail = lincomb(&[(c[7], &a6), (c[5], &a4), (c[3], &a2), (c[1], &ident)]);
    let u = a.matmul(&a6.matmul(&u_inner)?.try_add(&u_tail)?)?;
    let v_inner = lincomb(&[(c[12], &a6), (c[10], &a4), (c[8], &a2)]);
    let v_tail = lincomb(&[(c[6], &a6), (c[4], &a4), (c[2], &a2), (c[0], &ident)]);
    let v = a6.matmul(&v_inner)?.try_add(&v_tail)?;

    let num = v.try_add(&u)?;
    let den = v.try_sub(&u)?;
    let mut r = Lu::new(&den)?.solve(&num)?;
    for _ in 0..squarings {
        r = r.matmul(&r)?;
        if !r.is_finite() {
            return Err(Error::ExpOverflow { norm });
        }
    }
    if !r.is_finite() {
        return Err(Error::ExpOverflow { norm });
    }
    Ok(r)
}
