//! Ball-averaged dispersion: midpoint quadrature of powered difference
//! quotients, and its small-radius limit surrogate.

use crate::domain::{GridDomain, RadiusSweep};
use crate::gfield::GridField;
use crate::{GridError, Result};
use descent_core::exec::Executor;

/// One ball average:
/// `n(x)/μ(B(x,ε) ∩ box) · ∫ |Δ_f(x,y)|^p dμ(y)`
/// with `Δ_f(x,y) = (f(x) - f(y)) / ‖x - y‖` (zero at `y = x`) and `μ`
/// the grid cell measure. `oriented` keeps only the positive part of the
/// numerator.
pub fn grid_dispersion(
    f: &GridField,
    x: &[f64],
    radius: f64,
    p: f64,
    oriented: bool,
) -> Result<f64> {
    let domain = f.domain();
    let min_radius = 2.0 * domain.max_cell_size();
    if radius < min_radius {
        return Err(GridError::RadiusTooSmall { radius, min: min_radius });
    }
    let cells = domain.cells_in_ball(x, radius)?;
    if cells.is_empty() {
        return Err(GridError::EmptyRegion);
    }
    let fx = f.value_at(x)?;
    let mut acc = 0.0;
    for &cell in &cells {
        let c = domain.center(cell);
        let dist2: f64 = c.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        if dist2 == 0.0 {
            continue; // Δ_f(x, x) = 0 by definition
        }
        let mut num = fx - f.sample_at(cell);
        if oriented {
            num = num.max(0.0);
        }
        if num == 0.0 {
            continue;
        }
        acc += (num.abs() / dist2.sqrt()).powf(p);
    }
    // cell volumes cancel between the integral and μ(B ∩ box)
    Ok(domain.local_dim() * acc / cells.len() as f64)
}

/// The sweep evaluation of [`grid_dispersion`] with a limsup surrogate.
#[derive(Clone, Debug)]
pub struct DispersionEstimate {
    /// `(radius, ball average)` pairs, coarsest first.
    pub by_radius: Vec<(f64, f64)>,
    /// Max over the smallest-radius tail.
    pub value: f64,
    /// Largest successive relative change inside the tail.
    pub tail_spread: f64,
    /// Whether the tail looks settled (spread at most 5%).
    pub converged: bool,
}

/// Evaluate the dispersion along a decreasing radius sweep and surrogate
/// the limit superior by the max over the finest third (at least two) of
/// the radii. A non-convergent tail is flagged, never an error.
pub fn dispersion_limit(
    f: &GridField,
    x: &[f64],
    p: f64,
    oriented: bool,
    sweep: &RadiusSweep,
) -> Result<DispersionEstimate> {
    dispersion_limit_with_exec(f, x, p, oriented, sweep, &Executor::default())
}

pub fn dispersion_limit_with_exec(
    f: &GridField,
    x: &[f64],
    p: f64,
    oriented: bool,
    sweep: &RadiusSweep,
    exec: &Executor,
) -> Result<DispersionEstimate> {
    if sweep.len() < 4 {
        return Err(GridError::SweepTooShort(4));
    }
    let radii = sweep.radii();
    let evals: Vec<Result<f64>> = exec.map_collect(radii.len() as u64, |i| {
        grid_dispersion(f, x, radii[i as usize], p, oriented)
    });
    let mut by_radius = Vec::with_capacity(radii.len());
    for (r, v) in radii.iter().zip(evals) {
        by_radius.push((*r, v?));
    }
    let tail_len = (by_radius.len() / 3).max(2);
    let tail = &by_radius[by_radius.len() - tail_len..];
    let value = tail.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    let mut tail_spread: f64 = 0.0;
    for w in tail.windows(2) {
        let denom = w[0].1.abs().max(w[1].1.abs()).max(1e-300);
        tail_spread = tail_spread.max((w[1].1 - w[0].1).abs() / denom);
    }
    // an exactly-zero tail is as converged as it gets
    if tail.iter().all(|&(_, v)| v == 0.0) {
        tail_spread = 0.0;
    }
    Ok(DispersionEstimate { by_radius, value, tail_spread, converged: tail_spread <= 0.05 })
}

/// Default sweep for a domain: start at a quarter of the shortest box side,
/// ratio 1/2, six radii, clamped at eight cells.
pub fn default_sweep(domain: &GridDomain) -> Result<RadiusSweep> {
    let side = (0..domain.dim())
        .map(|a| domain.cell_size(a) * domain.resolution()[a] as f64)
        .fold(f64::INFINITY, f64::min);
    Ok(RadiusSweep::default_for(side / 4.0)?.clamped(8.0 * domain.max_cell_size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::quadratic2;

    #[test]
    fn interior_quadratic_recovers_the_squared_gradient() {
        let domain = GridDomain::symmetric(2, 256).unwrap();
        let quad = quadratic2((1.0, -0.5, 0.3, 3.0, 4.0));
        let value = quad.value.clone();
        let grad = quad.gradient.clone();
        let f = GridField::sample_analytic(
            domain.clone(),
            move |p| value(p),
            move |p| grad(p),
        )
        .unwrap();
        let x = [0.1, -0.2];
        let sweep = default_sweep(&domain).unwrap();
        let est = dispersion_limit(&f, &x, 2.0, false, &sweep).unwrap();
        let g = f.gradient_at(&x).unwrap();
        let target: f64 = g.iter().map(|v| v * v).sum();
        let rel = (est.value - target).abs() / target;
        assert!(rel < 0.02, "relative error {rel} at target {target}");

        // oriented sits at half the value
        let est_plus = dispersion_limit(&f, &x, 2.0, true, &sweep).unwrap();
        let rel = (est_plus.value - 0.5 * target).abs() / (0.5 * target);
        assert!(rel < 0.03, "oriented relative error {rel}");
    }

    #[test]
    fn constants_give_exact_zero() {
        let domain = GridDomain::symmetric(2, 256).unwrap();
        let f = GridField::sample(domain.clone(), |_| 7.5).unwrap();
        let sweep = default_sweep(&domain).unwrap();
        let est = dispersion_limit(&f, &[0.0, 0.0], 2.0, false, &sweep).unwrap();
        assert_eq!(est.value, 0.0);
        assert!(est.converged);
    }

    #[test]
    fn interior_parabola_on_the_line() {
        // f = t² at an interior point: the limit is (2t)²
        let domain = GridDomain::symmetric(1, 512).unwrap();
        let f = GridField::sample_analytic(domain.clone(), |p| p[0] * p[0], |p| vec![2.0 * p[0]])
            .unwrap();
        let sweep = default_sweep(&domain).unwrap();
        let est = dispersion_limit(&f, &[0.5], 2.0, false, &sweep).unwrap();
        assert!((est.value - 1.0).abs() < 0.02, "got {}", est.value);
    }

    #[test]
    fn boundary_average_of_the_parabola_is_four() {
        // on [-1,1], f = t² at the right endpoint: the one-sided average of
        // ((1 - t²)/(1 - t))² = (1 + t)² tends to 4
        let domain = GridDomain::symmetric(1, 512).unwrap();
        let f = GridField::sample_analytic(domain.clone(), |p| p[0] * p[0], |p| vec![2.0 * p[0]])
            .unwrap();
        let sweep = default_sweep(&domain).unwrap();
        let est = dispersion_limit(&f, &[1.0], 2.0, false, &sweep).unwrap();
        assert!((est.value - 4.0).abs() / 4.0 < 0.05, "got {}", est.value);

        // the flipped parabola shows the same non-oriented value but a
        // vanishing oriented one: the endpoint is its global minimum
        let g = GridField::sample_analytic(domain, |p| -p[0] * p[0], |p| vec![-2.0 * p[0]])
            .unwrap();
        let est_g = dispersion_limit(&g, &[1.0], 2.0, false, &sweep).unwrap();
        assert!((est_g.value - 4.0).abs() / 4.0 < 0.05, "got {}", est_g.value);
        let est_plus = dispersion_limit(&g, &[1.0], 2.0, true, &sweep).unwrap();
        assert!(est_plus.value < 1e-6, "oriented value {} should vanish", est_plus.value);
    }

    #[test]
    fn quadrature_is_power_homogeneous_at_fixed_radius() {
        let domain = GridDomain::symmetric(2, 64).unwrap();
        let f = GridField::sample(domain, |p| p[0] * p[1] + 0.3 * p[0]).unwrap();
        let x = [0.25, 0.25];
        let base = grid_dispersion(&f, &x, 0.3, 2.0, false).unwrap();
        // doubling f scales the p = 2 quadrature by exactly 4 (powers of
        // two are exact in binary64)
        let doubled = grid_dispersion(&f.scaled(2.0), &x, 0.3, 2.0, false).unwrap();
        assert_eq!(doubled, 4.0 * base);
        let tripled = grid_dispersion(&f.scaled(3.0), &x, 0.3, 2.0, false).unwrap();
        assert!((tripled - 9.0 * base).abs() <= 1e-12 * base.abs().max(1.0));
    }

    #[test]
    fn small_radii_are_rejected() {
        let domain = GridDomain::symmetric(1, 64).unwrap();
        let f = GridField::sample(domain.clone(), |p| p[0]).unwrap();
        let h = domain.max_cell_size();
        assert!(matches!(
            grid_dispersion(&f, &[0.0], 1.5 * h, 2.0, false),
            Err(GridError::RadiusTooSmall { .. })
        ));
    }
}
