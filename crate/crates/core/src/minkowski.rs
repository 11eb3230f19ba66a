//! Indefinite inner product, interval and causal classification on Rⁿ.
//!
//! Events carry `n - 1` spatial coordinates followed by one time coordinate.
//! The invariant signal speed `c` is a parameter of the [`Metric`]; nothing in
//! the crate normalizes it to one. The quadratic form is
//!
//! ```text
//! (r, s) = r₁s₁ + … + r₍ₙ₋₁₎s₍ₙ₋₁₎ − c² rₙsₙ
//! ```
//!
//! so that a signal travelling at speed `c` has zero interval, and the x-axis
//! boost built in [`crate::boost`] is an isometry for every `c`. With `c = 1`
//! this is the familiar `diag(+, …, +, −)` form.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default half-width of the relative null band.
pub const DEFAULT_NULL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    n: usize,
    c: f64,
}

impl Metric {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMetric(format!("dimension {n} < 2")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidMetric(format!("signal speed {c} must be positive and finite")));
        }
        Ok(Self { n, c })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Weight of the time coordinate in the quadratic form (`-c²`).
    pub fn time_weight(&self) -> f64 {
        -self.c * self.c
    }

    /// Diagonal metric matrix η.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut diag = DVector::from_element(self.n, 1.0);
        diag[self.n - 1] = self.time_weight();
        DMatrix::from_diagonal(&diag)
    }

    /// Unit rescaling `D = diag(1, …, 1, c)` with `η = D η₁ D`, where
    /// `η₁ = diag(1, …, 1, -1)`. Used to compare metric-shaped matrices
    /// entry by entry without the time entry dwarfing (or vanishing next to)
    /// the spatial ones.
    pub(crate) fn unit_scale(&self) -> DVector<f64> {
        let mut d = DVector::from_element(self.n, 1.0);
        d[self.n - 1] = self.c;
        d
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found });
        }
        Ok(())
    }

    pub fn inner_vec(&self, r: &DVector<f64>, s: &DVector<f64>) -> Result<f64> {
        self.check_dim(r.len())?;
        self.check_dim(s.len())?;
        Ok(self.inner_unchecked(r, s))
    }

    pub(crate) fn inner_unchecked(&self, r: &DVector<f64>, s: &DVector<f64>) -> f64 {
        let k = self.n - 1;
        let spatial: f64 = r.rows(0, k).dot(&s.rows(0, k));
        spatial + self.time_weight() * (r[k] * s[k])
    }

    pub fn inner(&self, r: &Event, s: &Event) -> Result<f64> {
        self.inner_vec(r.coords(), s.coords())
    }

    /// Squared interval `(r - s, r - s)`.
    pub fn interval(&self, r: &Event, s: &Event) -> Result<f64> {
        self.check_dim(r.dim())?;
        self.check_dim(s.dim())?;
        let d = r.coords() - s.coords();
        Ok(self.inner_unchecked(&d, &d))
    }

    pub fn classify(&self, r: &Event, s: &Event, tol: f64) -> Result<CausalClass> {
        self.check_dim(r.dim())?;
        self.check_dim(s.dim())?;
        Ok(self.classify_vec_unchecked(&(r.coords() - s.coords()), tol))
    }

    /// Causal class of a displacement vector.
    pub fn classify_vec(&self, d: &DVector<f64>, tol: f64) -> Result<CausalClass> {
        self.check_dim(d.len())?;
        Ok(self.classify_vec_unchecked(d, tol))
    }

    pub(crate) fn classify_vec_unchecked(&self, d: &DVector<f64>, tol: f64) -> CausalClass {
        let q = self.inner_unchecked(d, d);
        let band = tol * null_band_scale(d);
        if q.abs() <= band {
            CausalClass::Lightlike
        } else if q > 0.0 {
            CausalClass::Spacelike
        } else {
            CausalClass::Timelike
        }
    }

    pub fn on_null_cone(&self, p: &Event, vertex: &Event, tol: f64) -> Result<bool> {
        Ok(self.classify(p, vertex, tol)? == CausalClass::Lightlike)
    }
}

/// `max(1, ‖d‖²)` in the Euclidean norm.
pub(crate) fn null_band_scale(d: &DVector<f64>) -> f64 {
    d.norm_squared().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    Lightlike,
    Spacelike,
    Timelike,
}

/// A point of Rⁿ; the last coordinate is time.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    coords: DVector<f64>,
}

impl Event {
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: DVector::zeros(n) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn as_slice(&self) -> &[f64] {
        self.coords.as_slice()
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.coords
    }

    pub fn time(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    /// `self + t·dir`, for dimension-checked callers.
    pub(crate) fn offset(&self, dir: &DVector<f64>, t: f64) -> Event {
        Event { coords: &self.coords + dir * t }
    }
}

impl From<Event> for DVector<f64> {
    fn from(e: Event) -> Self {
        e.coords
    }
}
