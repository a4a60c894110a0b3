//! Weighted-measure dispersion: a measure supported on the subspace
//! `W_x = x + Ker(R(x))^⊥` whose ball averages recover `‖R(x)∇f(x)‖²`.
//!
//! The construction follows the subspace route: an orthonormal basis `E`
//! of the column space of `R`, the induced trace matrix, the norm-fixing
//! isometry `Ψ(u) = (‖u‖/‖R̃u‖) R̃u`, and the density
//! `h(v) = (‖R̃u‖²/‖u‖²) / JΨ(u)` at `u = Ψ^{-1}(v)`, with the Jacobian
//! taken by central finite differences. The normalizer `κ` is the ball
//! average of `‖R̃u‖²/‖u‖²` and the local dimension is `κ·k`.

use crate::domain::RadiusSweep;
use crate::gfield::GridField;
use crate::mc::sample_ball;
use crate::{GridError, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::sync::Arc;

type MatrixFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;

/// A positive-semidefinite matrix field queried pointwise.
#[derive(Clone)]
pub struct WeightedMeasureSpec {
    r_at: MatrixFn,
}

impl WeightedMeasureSpec {
    pub fn new(r_at: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static) -> Self {
        WeightedMeasureSpec { r_at: Arc::new(r_at) }
    }

    pub fn constant(matrix: Vec<Vec<f64>>) -> Self {
        WeightedMeasureSpec { r_at: Arc::new(move |_| matrix.clone()) }
    }

    pub fn matrix_at(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (self.r_at)(x)
    }
}

/// Result of one weighted-dispersion validation.
#[derive(Clone, Debug)]
pub struct WeightedCheck {
    /// Monte-Carlo ball-average estimate along the sweep (tail max).
    pub estimate: f64,
    /// Closed-form target `‖R(x)∇f(x)‖²`.
    pub target: f64,
    /// Subspace dimension `k = rank R(x)`.
    pub rank: usize,
    /// Normalizer `κ(x)` (ball average of `‖R̃u‖²/‖u‖²`).
    pub kappa: f64,
}

/// Build the weighted measure at `x`, evaluate the `p = 2` dispersion over
/// the sweep and return it next to the closed-form target.
pub fn weighted_dispersion_check(
    spec: &WeightedMeasureSpec,
    f: &GridField,
    x: &[f64],
    sweep: &RadiusSweep,
    samples: u64,
    seed: u64,
) -> Result<WeightedCheck> {
    let n = x.len();
    let r = spec.matrix_at(x);
    if r.len() != n || r.iter().any(|row| row.len() != n) {
        return Err(GridError::MatrixField(format!("R(x) is not {n}x{n}")));
    }
    let grad = f
        .gradient_at(x)
        .ok_or_else(|| GridError::MatrixField("needs an analytic gradient".into()))?;
    let target_vec = matvec(&r, &grad);
    let target: f64 = target_vec.iter().map(|v| v * v).sum();

    // orthonormal basis of the column space
    let basis = column_space_basis(&r);
    let k = basis.len();
    if k == 0 {
        // R = 0: the measure degenerates to a point mass and both sides
        // vanish
        return Ok(WeightedCheck { estimate: 0.0, target, rank: 0, kappa: 0.0 });
    }
    // trace of R on the subspace
    let trace: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&basis[i], &matvec(&r, &basis[j]))).collect())
        .collect();
    let trace_inv = invert(&trace)
        .ok_or_else(|| GridError::MatrixField("trace matrix is singular on the subspace".into()))?;

    let psi = |u: &[f64]| -> Vec<f64> {
        let ru = matvec(&trace, u);
        scale_to_norm(&ru, norm(u))
    };
    let psi_inv = |w: &[f64]| -> Vec<f64> {
        let riw = matvec(&trace_inv, w);
        scale_to_norm(&riw, norm(w))
    };

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // κ: ball average of ‖R̃u‖²/‖u‖²
    let kappa_samples = (samples / 4).max(1000);
    let mut kappa = 0.0;
    for _ in 0..kappa_samples {
        let u = sample_ball(&mut rng, k);
        kappa += norm2(&matvec(&trace, &u)) / norm2(&u);
    }
    kappa /= kappa_samples as f64;
    let local_dim = kappa * k as f64;

    let fx = f.value_at(x)?;
    let mut best = f64::NEG_INFINITY;
    for &radius in sweep.radii() {
        let mut weighted_sum = 0.0;
        let mut weight_total = 0.0;
        for _ in 0..samples {
            let v: Vec<f64> = sample_ball(&mut rng, k).iter().map(|a| a * radius).collect();
            let u = psi_inv(&v);
            // Ψ must act as an isometry and invert cleanly
            let round = psi(&u);
            let vn = norm(&v);
            if (norm(&u) - vn).abs() > 1e-9 * vn.max(1e-12)
                || (norm(&round) - vn).abs() > 1e-9 * vn.max(1e-12)
            {
                return Err(GridError::MatrixField(
                    "norm-fixing map failed the isometry check".into(),
                ));
            }
            let jac = jacobian_det(&psi, &u);
            if !jac.is_finite() || jac <= 0.0 {
                return Err(GridError::MatrixField("vanishing Jacobian".into()));
            }
            let density = (norm2(&matvec(&trace, &u)) / norm2(&u)) / jac;
            // ambient point y = x + E v
            let mut y = x.to_vec();
            for (j, e) in basis.iter().enumerate() {
                for (yi, ei) in y.iter_mut().zip(e) {
                    *yi += v[j] * ei;
                }
            }
            let delta = if vn > 0.0 { (fx - f.value_at(&y)?) / vn } else { 0.0 };
            weighted_sum += delta * delta * density;
            weight_total += density;
        }
        if weight_total > 0.0 {
            best = best.max(local_dim * weighted_sum / weight_total);
        }
    }
    Ok(WeightedCheck { estimate: best, target, rank: k, kappa })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

fn norm(a: &[f64]) -> f64 {
    norm2(a).sqrt()
}

fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn scale_to_norm(v: &[f64], target: f64) -> Vec<f64> {
    let n = norm(v);
    if n == 0.0 {
        return vec![0.0; v.len()];
    }
    v.iter().map(|a| a * target / n).collect()
}

/// Modified Gram-Schmidt on the columns, dropping near-null directions.
fn column_space_basis(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = r.len();
    let scale = r
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for j in 0..n {
        let mut col: Vec<f64> = (0..n).map(|i| r[i][j]).collect();
        for e in &basis {
            let c = dot(&col, e);
            for (ci, ei) in col.iter_mut().zip(e) {
                *ci -= c * ei;
            }
        }
        let len = norm(&col);
        if len > 1e-10 * scale {
            basis.push(col.iter().map(|c| c / len).collect());
        }
    }
    basis
}

/// Gauss-Jordan inverse for the small trace matrices.
fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let k = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite entries")
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        let d = a[col][col];
        for v in a[col].iter_mut() {
            *v /= d;
        }
        for row in 0..k {
            if row == col {
                continue;
            }
            let f = a[row][col];
            if f == 0.0 {
                continue;
            }
            for c in 0..2 * k {
                a[row][c] -= f * a[col][c];
            }
        }
    }
    Some(a.into_iter().map(|row| row[k..].to_vec()).collect())
}

/// `|det DΨ(u)|` by central differences with step `1e-5` of the local
/// scale.
fn jacobian_det(psi: &impl Fn(&[f64]) -> Vec<f64>, u: &[f64]) -> f64 {
    let k = u.len();
    let step = 1e-5 * norm(u).max(1e-8);
    let mut cols = Vec::with_capacity(k);
    for j in 0..k {
        let mut up = u.to_vec();
        let mut dn = u.to_vec();
        up[j] += step;
        dn[j] -= step;
        let (pu, pd) = (psi(&up), psi(&dn));
        cols.push((0..k).map(|i| (pu[i] - pd[i]) / (2.0 * step)).collect::<Vec<_>>());
    }
    det(&cols).abs()
}

fn det(cols: &[Vec<f64>]) -> f64 {
    match cols.len() {
        0 => 1.0,
        1 => cols[0][0],
        2 => cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1],
        3 => {
            cols[0][0] * (cols[1][1] * cols[2][2] - cols[2][1] * cols[1][2])
                - cols[1][0] * (cols[0][1] * cols[2][2] - cols[2][1] * cols[0][2])
                + cols[2][0] * (cols[0][1] * cols[1][2] - cols[1][1] * cols[0][2])
        }
        _ => {
            // small LU fallback
            let k = cols.len();
            let mut a: Vec<Vec<f64>> = (0..k)
                .map(|i| (0..k).map(|j| cols[j][i]).collect())
                .collect();
            let mut d = 1.0;
            for col in 0..k {
                let pivot = (col..k)
                    .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                    .unwrap();
                if a[pivot][col] == 0.0 {
                    return 0.0;
                }
                if pivot != col {
                    a.swap(col, pivot);
                    d = -d;
                }
                d *= a[col][col];
                for row in col + 1..k {
                    let f = a[row][col] / a[col][col];
                    for c in col..k {
                        a[row][c] -= f * a[col][c];
                    }
                }
            }
            d
        }
    }
}
