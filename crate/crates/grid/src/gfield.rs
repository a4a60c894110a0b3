//! Sampled functions on grid domains.

use crate::domain::GridDomain;
use crate::Result;
use std::sync::Arc;

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Closed-form value and gradient, carried next to the samples for
/// validation targets and off-center queries.
#[derive(Clone)]
pub struct Analytic {
    pub value: ValueFn,
    pub gradient: GradFn,
}

impl Analytic {
    pub fn new(
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Analytic { value: Arc::new(value), gradient: Arc::new(gradient) }
    }
}

/// A function sampled at every cell center, optionally with analytic data.
#[derive(Clone)]
pub struct GridField {
    domain: GridDomain,
    values: Vec<f64>,
    analytic: Option<Analytic>,
}

impl GridField {
    pub fn from_samples(domain: GridDomain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.cell_count() {
            return Err(crate::GridError::InvalidDomain(format!(
                "{} samples for {} cells",
                values.len(),
                domain.cell_count()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(crate::GridError::InvalidDomain("non-finite sample".into()));
        }
        Ok(GridField { domain, values, analytic: None })
    }

    /// Sample a closure at every cell center.
    pub fn sample(domain: GridDomain, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..domain.cell_count()).map(|i| f(&domain.center(i))).collect();
        Self::from_samples(domain, values)
    }

    /// Sample a closure and keep it (with its gradient) for validation.
    pub fn sample_analytic(
        domain: GridDomain,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        let values = (0..domain.cell_count()).map(|i| value(&domain.center(i))).collect();
        let mut out = Self::from_samples(domain, values)?;
        out.analytic = Some(Analytic::new(value, gradient));
        Ok(out)
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sample_at(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    /// Value at an arbitrary point: analytic when available, else the
    /// nearest sample.
    pub fn value_at(&self, x: &[f64]) -> Result<f64> {
        if let Some(a) = &self.analytic {
            return Ok((a.value)(x));
        }
        Ok(self.values[self.domain.nearest_cell(x)?])
    }

    pub fn analytic(&self) -> Option<&Analytic> {
        self.analytic.as_ref()
    }

    pub fn gradient_at(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.analytic.as_ref().map(|a| (a.gradient)(x))
    }

    /// Pointwise scaling of the samples (drops analytic data).
    pub fn scaled(&self, r: f64) -> GridField {
        GridField {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| r * v).collect(),
            analytic: None,
        }
    }
}

/// A 2-D quadratic `a x² + b y² + c xy + d x + e y` with its gradient.
pub fn quadratic2((a, b, c, d, e): (f64, f64, f64, f64, f64)) -> Analytic {
    Analytic::new(
        move |p: &[f64]| {
            a * p[0] * p[0] + b * p[1] * p[1] + c * p[0] * p[1] + d * p[0] + e * p[1]
        },
        move |p: &[f64]| {
            vec![2.0 * a * p[0] + c * p[1] + d, 2.0 * b * p[1] + c * p[0] + e]
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_matches_centers() {
        let d = GridDomain::symmetric(1, 64).unwrap();
        let f = GridField::sample(d.clone(), |p| p[0] * p[0]).unwrap();
        let c = d.center(10);
        assert_eq!(f.sample_at(10), c[0] * c[0]);
        // nearest-sample fallback
        assert!((f.value_at(&c).unwrap() - c[0] * c[0]).abs() < 1e-15);
    }

    #[test]
    fn analytic_values_win_off_center() {
        let d = GridDomain::symmetric(1, 64).unwrap();
        let f = GridField::sample_analytic(d, |p| p[0], |_| vec![1.0]).unwrap();
        assert_eq!(f.value_at(&[0.123_456]).unwrap(), 0.123_456);
        assert_eq!(f.gradient_at(&[0.5]).unwrap(), vec![1.0]);
    }
}
