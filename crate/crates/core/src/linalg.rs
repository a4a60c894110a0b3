//! Exact rational linear algebra: Gaussian elimination with partial
//! cleanup, enough for absorption probabilities and stationary laws.

use crate::error::{Error, Result};
use crate::exact::Rat;
use num_traits::{One, Zero};

/// Solve `A x = b` for square `A` over the rationals, exactly.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    let sols = solve_multi(a, std::slice::from_ref(&b.to_vec()))?;
    Ok(sols.into_iter().next().expect("one solution per rhs"))
}

/// Solve `A x = b` for several right-hand sides with one elimination.
pub fn solve_multi(a: &[Vec<Rat>], bs: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || bs.iter().any(|b| b.len() != n) {
        return Err(Error::Other("solve: dimension mismatch".into()));
    }
    let k = bs.len();
    // rows augmented with all right-hand sides
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut r = a[i].clone();
            r.extend(bs.iter().map(|b| b[i].clone()));
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Other("solve: singular system".into()))?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col][col..].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut m[r][col], Rat::zero());
            for c in (col + 1)..(n + k) {
                let sub = &m[col][c] * &factor;
                m[r][c] -= sub;
            }
        }
    }
    Ok((0..k)
        .map(|j| (0..n).map(|i| m[i][n + j].clone()).collect())
        .collect())
}

/// Unique probability vector `π` with `π A = 0` and `Σ π = 1`.
///
/// `A` must be the generator of an irreducible chain on its index set;
/// irreducibility makes the solution unique and strictly positive.
pub fn stationary(a: &[Vec<Rat>]) -> Result<Vec<Rat>> {
    let n = a.len();
    if n == 1 {
        return Ok(vec![Rat::one()]);
    }
    // Transpose A, replace the last equation by the normalization Σ π = 1.
    let mut sys: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| a[j][i].clone()).collect())
        .collect();
    sys[n - 1] = vec![Rat::one(); n];
    let mut rhs = vec![Rat::zero(); n];
    rhs[n - 1] = Rat::one();
    solve(&sys, &rhs)
}
