//! Smooth scalar, form, and metric fields on a single coordinate chart with
//! an excluded singular set, plus finite-difference exterior calculus.
//!
//! Fields are immutable evaluation rules; evaluation is pure and
//! deterministic, so fields can be shared freely across threads and sampled
//! in parallel.

use crate::error::{Error, Result};
use crate::exterior::form::AltForm;
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// Distance to the excluded (singular) locus of a chart. Fields refuse to
/// evaluate at distance zero, and finite-difference stencils require
/// clearance proportional to the step.
#[derive(Clone)]
pub struct SingularSet {
    dist: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl SingularSet {
    pub fn none() -> Self {
        SingularSet {
            dist: Arc::new(|_| f64::INFINITY),
        }
    }

    pub fn new(dist: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        SingularSet { dist: Arc::new(dist) }
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        (self.dist)(x)
    }

    pub fn check_clearance(&self, x: &[f64], required: f64) -> Result<()> {
        let d = self.distance(x);
        if d <= required {
            return Err(Error::SingularProximity {
                distance: d,
                required,
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for SingularSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SingularSet(..)")
    }
}

macro_rules! field_common {
    ($name:ident, $out:ty) => {
        impl $name {
            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn singular_set(&self) -> &SingularSet {
                &self.singular
            }

            fn check_dim(&self, x: &[f64]) -> Result<()> {
                if x.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        got: x.len(),
                    });
                }
                Ok(())
            }

            /// Evaluates at a non-excluded point.
            pub fn eval(&self, x: &[f64]) -> Result<$out> {
                self.check_dim(x)?;
                self.singular.check_clearance(x, 0.0)?;
                Ok((self.f)(x))
            }
        }
    };
}

/// A real-valued field on a chart.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    singular: SingularSet,
}

field_common!(ScalarField, f64);

impl ScalarField {
    pub fn new(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField {
            dim,
            f: Arc::new(f),
            singular: SingularSet::none(),
        }
    }

    pub fn with_singular_set(mut self, s: SingularSet) -> Self {
        self.singular = s;
        self
    }

    /// Central-difference gradient, O(step^2).
    pub fn gradient(&self, x: &[f64], step: f64) -> Result<DVector<f64>> {
        self.check_dim(x)?;
        self.singular.check_clearance(x, 2.0 * step)?;
        let mut out = DVector::zeros(self.dim);
        let mut p = x.to_vec();
        for a in 0..self.dim {
            p[a] = x[a] + step;
            let fp = (self.f)(&p);
            p[a] = x[a] - step;
            let fm = (self.f)(&p);
            p[a] = x[a];
            out[a] = (fp - fm) / (2.0 * step);
        }
        Ok(out)
    }

    /// Central-difference Hessian, O(step^2).
    pub fn hessian(&self, x: &[f64], step: f64) -> Result<DMatrix<f64>> {
        self.check_dim(x)?;
        self.singular.check_clearance(x, 3.0 * step)?;
        let n = self.dim;
        let f0 = (self.f)(x);
        let mut out = DMatrix::zeros(n, n);
        let mut p = x.to_vec();
        for a in 0..n {
            p[a] = x[a] + step;
            let fp = (self.f)(&p);
            p[a] = x[a] - step;
            let fm = (self.f)(&p);
            p[a] = x[a];
            out[(a, a)] = (fp - 2.0 * f0 + fm) / (step * step);
        }
        for a in 0..n {
            for b in (a + 1)..n {
                p[a] = x[a] + step;
                p[b] = x[b] + step;
                let fpp = (self.f)(&p);
                p[b] = x[b] - step;
                let fpm = (self.f)(&p);
                p[a] = x[a] - step;
                let fmm = (self.f)(&p);
                p[b] = x[b] + step;
                let fmp = (self.f)(&p);
                p[a] = x[a];
                p[b] = x[b];
                let v = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
                out[(a, b)] = v;
                out[(b, a)] = v;
            }
        }
        Ok(out)
    }
}

/// A field of alternating k-forms on a chart.
#[derive(Clone)]
pub struct FormField {
    dim: usize,
    degree: usize,
    f: Arc<dyn Fn(&[f64]) -> AltForm + Send + Sync>,
    singular: SingularSet,
}

field_common!(FormField, AltForm);

impl FormField {
    pub fn new(
        dim: usize,
        degree: usize,
        f: impl Fn(&[f64]) -> AltForm + Send + Sync + 'static,
    ) -> Self {
        FormField {
            dim,
            degree,
            f: Arc::new(f),
            singular: SingularSet::none(),
        }
    }

    pub fn with_singular_set(mut self, s: SingularSet) -> Self {
        self.singular = s;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Constant field with the given value.
    pub fn constant(value: AltForm) -> Self {
        let dim = value.dim();
        let degree = value.degree();
        FormField {
            dim,
            degree,
            f: Arc::new(move |_| value.clone()),
            singular: SingularSet::none(),
        }
    }

    /// Exterior derivative by central differences:
    /// (d f)(x) = sum_a dx^a ^ (f(x + h e_a) - f(x - h e_a)) / 2h.
    /// Requires clearance 2h around x.
    pub fn exterior_derivative(&self, x: &[f64], step: f64) -> Result<AltForm> {
        self.check_dim(x)?;
        self.singular.check_clearance(x, 2.0 * step)?;
        self.d_unchecked(x, step)
    }

    /// One Richardson refinement of the central-difference derivative,
    /// cancelling the O(h^2) truncation term.
    pub fn exterior_derivative_refined(&self, x: &[f64], step: f64) -> Result<AltForm> {
        self.check_dim(x)?;
        self.singular.check_clearance(x, 2.0 * step)?;
        let coarse = self.d_unchecked(x, step)?;
        let fine = self.d_unchecked(x, 0.5 * step)?;
        Ok(&fine.scale(4.0 / 3.0) - &coarse.scale(1.0 / 3.0))
    }

    fn d_unchecked(&self, x: &[f64], step: f64) -> Result<AltForm> {
        let mut out = AltForm::zero(self.dim, self.degree + 1)?;
        let mut p = x.to_vec();
        for a in 0..self.dim {
            p[a] = x[a] + step;
            let fp = (self.f)(&p);
            p[a] = x[a] - step;
            let fm = (self.f)(&p);
            p[a] = x[a];
            let diff = (&fp - &fm).scale(1.0 / (2.0 * step));
            let dxa = AltForm::coordinate(self.dim, &[a])?;
            out = &out + &dxa.wedge(&diff)?;
        }
        Ok(out)
    }
}

/// A field of symmetric positive-definite matrices on a chart.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    f: Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>,
    singular: SingularSet,
}

field_common!(MetricField, DMatrix<f64>);

impl MetricField {
    pub fn new(dim: usize, f: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> Self {
        MetricField {
            dim,
            f: Arc::new(f),
            singular: SingularSet::none(),
        }
    }

    pub fn with_singular_set(mut self, s: SingularSet) -> Self {
        self.singular = s;
        self
    }

    pub fn flat(dim: usize) -> Self {
        MetricField::new(dim, move |_| DMatrix::identity(dim, dim))
    }

    /// Central-difference partial derivative of the metric components along
    /// coordinate direction `dir`.
    pub fn partial(&self, x: &[f64], dir: usize, step: f64) -> Result<DMatrix<f64>> {
        self.check_dim(x)?;
        self.singular.check_clearance(x, 2.0 * step)?;
        let mut p = x.to_vec();
        p[dir] = x[dir] + step;
        let gp = (self.f)(&p);
        p[dir] = x[dir] - step;
        let gm = (self.f)(&p);
        Ok((gp - gm) / (2.0 * step))
    }
}

/// An oriented k-plane in R^n, represented by a matrix whose columns form an
/// orthonormal frame.
#[derive(Debug, Clone)]
pub struct Plane {
    frame: DMatrix<f64>,
}

impl Plane {
    /// Validates orthonormality of the columns to 1e-12.
    pub fn new(frame: DMatrix<f64>) -> Result<Self> {
        let k = frame.ncols();
        let gram = frame.transpose() * &frame;
        let dev = (&gram - DMatrix::identity(k, k)).abs().max();
        if dev > 1e-12 {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Plane { frame })
    }

    /// Orthonormalizes the columns by QR before constructing the plane.
    pub fn from_spanning(frame: &DMatrix<f64>) -> Result<Self> {
        let qr = frame.clone().qr();
        let q = qr.q();
        // Fix the sign so the retraction is continuous in the input.
        let r = qr.r();
        let mut q = q;
        for c in 0..q.ncols() {
            if r[(c, c)] < 0.0 {
                for rix in 0..q.nrows() {
                    q[(rix, c)] = -q[(rix, c)];
                }
            }
        }
        Plane::new(q)
    }

    pub fn dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn degree(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn columns(&self) -> Vec<DVector<f64>> {
        (0..self.frame.ncols())
            .map(|c| DVector::from(self.frame.column(c).clone_owned()))
            .collect()
    }

    /// Orthogonal projector onto the plane, forgetting orientation.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.frame * self.frame.transpose()
    }

    /// Largest principal angle between two planes of the same degree, in
    /// radians. Frame-invariant.
    pub fn principal_angle(&self, other: &Plane) -> f64 {
        let m = self.frame.transpose() * other.frame();
        let svd = m.svd(false, false);
        let smin = svd
            .singular_values
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        smin.clamp(-1.0, 1.0).acos()
    }
}
