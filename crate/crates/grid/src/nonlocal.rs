//! Nonlocal operators on grid nodes, delegated to the exact finite layer.
//!
//! Grid nodes form a finite space; node weights become point masses of a
//! measure matrix and the evaluation runs through the exact nonlocal
//! operator (binary64 samples convert to dyadic rationals losslessly).

use crate::gfield::GridField;
use crate::{GridError, Result};
use descent_core::exact::Rat;
use descent_core::ops::{self, ScalingMap};
use descent_core::{FiniteSpace, MeasureMatrix, ScalarField};

fn to_rat(v: f64) -> Result<Rat> {
    Rat::from_float(v)
        .ok_or_else(|| GridError::InvalidDomain(format!("non-finite weight {v}")))
}

/// Evaluate `T[f](x) = Σ_y μ(x,y) φ(f(x) - f(y))` over the grid nodes
/// (positive part when oriented, absolute value otherwise).
pub fn nonlocal_grid_operator(
    f: &GridField,
    mu_rows: &[Vec<f64>],
    phi: &ScalingMap,
    oriented: bool,
) -> Result<Vec<f64>> {
    let n = f.domain().cell_count();
    if mu_rows.len() != n || mu_rows.iter().any(|r| r.len() != n) {
        return Err(GridError::InvalidDomain(format!("measure matrix is not {n}x{n}")));
    }
    let space = FiniteSpace::indexed(n);
    let field = ScalarField::new(
        space.clone(),
        f.values().iter().map(|&v| to_rat(v)).collect::<Result<_>>()?,
    )?;
    let mu = MeasureMatrix::new(
        space,
        mu_rows
            .iter()
            .map(|row| row.iter().map(|&w| to_rat(w)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?,
    )?;
    let out = ops::nonlocal(&mu, phi, &field, oriented)?;
    Ok(out.values().iter().map(|v| v.to_f64()).collect())
}

/// Uniform node weights `w` off the diagonal.
pub fn uniform_measure(n: usize, w: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { w }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::GridDomain;

    #[test]
    fn oriented_linear_matches_the_riemann_integral() {
        // f(t) = t on [-1, 1], uniform weights h: the oriented value at t is
        // ~ ∫ (t - s)_+ ds = (t + 1)² / 2
        let domain = GridDomain::symmetric(1, 64).unwrap();
        let n = domain.cell_count();
        let h = domain.cell_size(0);
        let f = GridField::sample(domain.clone(), |p| p[0]).unwrap();
        let mu = uniform_measure(n, h);
        let phi = ScalingMap::pow(1, 1).unwrap();
        let vals = nonlocal_grid_operator(&f, &mu, &phi, true).unwrap();
        for idx in [8, 32, 55] {
            let t = domain.center(idx)[0];
            let target = (t + 1.0) * (t + 1.0) / 2.0;
            assert!(
                (vals[idx] - target).abs() < 0.05,
                "node {idx}: {} vs {target}",
                vals[idx]
            );
        }
    }

    #[test]
    fn constants_vanish() {
        let domain = GridDomain::symmetric(1, 32).unwrap();
        let n = domain.cell_count();
        let f = GridField::sample(domain, |_| 4.25).unwrap();
        let mu = uniform_measure(n, 0.1);
        let phi = ScalingMap::pow(2, 1).unwrap();
        let vals = nonlocal_grid_operator(&f, &mu, &phi, false).unwrap();
        assert!(vals.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn oriented_is_dominated_pointwise() {
        let domain = GridDomain::symmetric(1, 32).unwrap();
        let n = domain.cell_count();
        let f = GridField::sample(domain, |p| (3.1 * p[0]).sin()).unwrap();
        let mu = uniform_measure(n, 0.03);
        let phi = ScalingMap::pow(2, 1).unwrap();
        let plus = nonlocal_grid_operator(&f, &mu, &phi, true).unwrap();
        let full = nonlocal_grid_operator(&f, &mu, &phi, false).unwrap();
        for (a, b) in plus.iter().zip(&full) {
            assert!(a <= b);
        }
    }
}
