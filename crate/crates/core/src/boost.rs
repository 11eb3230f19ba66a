//! Affine Lorentz maps `r ↦ αLr + a` and the x-axis boost.
//!
//! `L` is an isometry of the metric (`LᵀηL = η`), `α` a nonzero conformal
//! scale and `a` a translation. The boost is written in the coordinate order
//! `(x, y, z, t)`:
//!
//! ```text
//!        ⎡  γ        0  0  −vγ ⎤
//! L(v) = ⎢  0        1  0   0  ⎥        γ = 1/√(1 − v²/c²)
//!        ⎢  0        0  1   0  ⎥
//!        ⎣ −vγ/c²    0  0   γ  ⎦
//! ```
//!
//! Before the composition requirement `L(v)L(−v) = I` is imposed, the same
//! matrix appears multiplied by an undetermined factor `α(v)γ`.
//! [`general_boost`] builds that family; `α(v) = √(1 − v²/c²)` collapses it
//! back to [`boost_x`].

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{Event, Metric};

/// Relative margin below `c` at which a velocity is rejected as degenerate.
pub const VELOCITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParams {
    v: f64,
    c: f64,
}

impl BoostParams {
    pub fn new(v: f64, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidMetric(format!("signal speed {c} must be positive and finite")));
        }
        if !v.is_finite() || v.abs() >= c * (1.0 - VELOCITY_MARGIN) {
            return Err(Error::DegenerateVelocity { v, c });
        }
        Ok(Self { v, c })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn beta(&self) -> f64 {
        self.v / self.c
    }

    pub fn gamma(&self) -> f64 {
        let beta = self.beta();
        1.0 / (1.0 - beta * beta).sqrt()
    }

    /// The scale `α(v) = √(1 − v²/c²)` fixed by `L(v)L(−v) = I`.
    pub fn normalized_alpha(&self) -> f64 {
        let beta = self.beta();
        (1.0 - beta * beta).sqrt()
    }

    pub fn reversed(&self) -> Self {
        Self { v: -self.v, c: self.c }
    }
}

/// `r ↦ α·L·r + a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MapRepr", try_from = "MapRepr")]
pub struct AffineLorentzMap {
    alpha: f64,
    l: DMatrix<f64>,
    a: DVector<f64>,
}

impl AffineLorentzMap {
    pub fn new(alpha: f64, l: DMatrix<f64>, a: DVector<f64>) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::ZeroScale);
        }
        if !l.is_square() {
            return Err(Error::DimensionMismatch { expected: l.nrows(), found: l.ncols() });
        }
        if a.len() != l.nrows() {
            return Err(Error::DimensionMismatch { expected: l.nrows(), found: a.len() });
        }
        Ok(Self { alpha, l, a })
    }

    pub fn identity(n: usize) -> Self {
        Self { alpha: 1.0, l: DMatrix::identity(n, n), a: DVector::zeros(n) }
    }

    pub fn translation(a: DVector<f64>) -> Self {
        let n = a.len();
        Self { alpha: 1.0, l: DMatrix::identity(n, n), a }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn l(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn a(&self) -> &DVector<f64> {
        &self.a
    }

    /// Homogeneous part `αL`.
    pub fn linear_part(&self) -> DMatrix<f64> {
        &self.l * self.alpha
    }

    pub fn with_translation(mut self, a: DVector<f64>) -> Result<Self> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.len() });
        }
        self.a = a;
        Ok(self)
    }

    pub fn apply(&self, e: &Event) -> Result<Event> {
        Event::new(self.apply_vec(e.coords())?)
    }

    pub fn apply_vec(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok((&self.l * x) * self.alpha + &self.a)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &AffineLorentzMap) -> Result<AffineLorentzMap> {
        if inner.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: inner.dim() });
        }
        Ok(AffineLorentzMap {
            alpha: self.alpha * inner.alpha,
            l: &self.l * &inner.l,
            a: (&self.l * &inner.a) * self.alpha + &self.a,
        })
    }

    pub fn inverse(&self) -> Result<AffineLorentzMap> {
        let l_inv = self.l.clone().try_inverse().ok_or(Error::SingularMap)?;
        let alpha = 1.0 / self.alpha;
        let a = -(&l_inv * &self.a) * alpha;
        Ok(AffineLorentzMap { alpha, l: l_inv, a })
    }

    /// Largest entrywise difference to `other` across `α`, `L` and `a`.
    pub fn max_abs_diff(&self, other: &AffineLorentzMap) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let dl = (&self.l - &other.l).amax();
        let da = (&self.a - &other.a).amax();
        dl.max(da).max((self.alpha - other.alpha).abs())
    }
}

/// Boost along the x-axis in four dimensions.
pub fn boost_x(p: BoostParams) -> AffineLorentzMap {
    boost_x_in(p, 4)
}

/// Boost mixing the first spatial axis with the time axis of Rⁿ; all other
/// axes are left alone.
pub fn boost_x_in(p: BoostParams, n: usize) -> AffineLorentzMap {
    assert!(n >= 2, "boost needs at least one spatial axis");
    let gamma = p.gamma();
    let t = n - 1;
    let mut l = DMatrix::identity(n, n);
    l[(0, 0)] = gamma;
    l[(t, t)] = gamma;
    l[(0, t)] = -p.v * gamma;
    l[(t, 0)] = -p.v * gamma / (p.c * p.c);
    AffineLorentzMap { alpha: 1.0, l, a: DVector::zeros(n) }
}

/// The boost family before `α(v)` is fixed: `α·γ·core(v)`.
pub fn general_boost(p: BoostParams, alpha: f64) -> Result<DMatrix<f64>> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::ZeroScale);
    }
    let gamma = p.gamma();
    let mut core = DMatrix::identity(4, 4);
    core[(0, 0)] = gamma;
    core[(3, 3)] = gamma;
    core[(0, 3)] = -p.v * gamma;
    core[(3, 0)] = -p.v * gamma / (p.c * p.c);
    Ok(core * (alpha * gamma))
}

/// Checks `α(v)·α(−v) = 1 − v²/c²`.
pub fn scale_constraint_check(alpha_of_v: f64, alpha_of_minus_v: f64, p: BoostParams, tol: f64) -> bool {
    let beta = p.beta();
    (alpha_of_v * alpha_of_minus_v - (1.0 - beta * beta)).abs() <= tol
}

/// Largest entrywise deviation of `MᵀηM` from `λη`, measured in units where
/// the signal speed is one (time rows and columns rescaled by `c`).
pub(crate) fn conformal_deviation(m: &DMatrix<f64>, metric: &Metric, lambda: f64) -> f64 {
    let gram = m.transpose() * metric.matrix() * m;
    let d = metric.unit_scale();
    let n = metric.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let unit_eta = if i != j {
                0.0
            } else if i == n - 1 {
                -1.0
            } else {
                1.0
            };
            let dev = (gram[(i, j)] / (d[i] * d[j]) - lambda * unit_eta).abs();
            worst = worst.max(dev);
        }
    }
    worst
}

/// `LᵀηL = η` within `tol` per entry (in signal-speed units, so that the
/// check means the same thing for every `c`).
pub fn is_isometry(l: &DMatrix<f64>, metric: &Metric, tol: f64) -> bool {
    if l.nrows() != metric.dim() || l.ncols() != metric.dim() {
        return false;
    }
    conformal_deviation(l, metric, 1.0) <= tol
}

/// Splits `M = αL` with `α > 0` and `L` an isometry.
///
/// `λ = α²` is the median of the diagonal ratios `(MᵀηM)ᵢᵢ / ηᵢᵢ`; a negative
/// overall sign of `M` ends up in `L`.
pub fn decompose_conformal(m: &DMatrix<f64>, metric: &Metric, tol: f64) -> Result<(f64, DMatrix<f64>)> {
    let n = metric.dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.nrows().max(m.ncols()) });
    }
    let gram = m.transpose() * metric.matrix() * m;
    let eta = metric.matrix();
    let mut ratios: Vec<f64> = (0..n).map(|i| gram[(i, i)] / eta[(i, i)]).collect();
    ratios.sort_by(f64::total_cmp);
    let lambda = if n % 2 == 1 { ratios[n / 2] } else { 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]) };
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Signature { lambda });
    }
    let deviation = conformal_deviation(m, metric, lambda) / lambda;
    if deviation > tol {
        return Err(Error::NotConformal { deviation });
    }
    let alpha = lambda.sqrt();
    Ok((alpha, m / alpha))
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    alpha: f64,
    l: Vec<Vec<f64>>,
    a: Vec<f64>,
}

impl From<AffineLorentzMap> for MapRepr {
    fn from(m: AffineLorentzMap) -> Self {
        let l = m.l.row_iter().map(|r| r.iter().copied().collect()).collect();
        MapRepr { alpha: m.alpha, l, a: m.a.iter().copied().collect() }
    }
}

impl TryFrom<MapRepr> for AffineLorentzMap {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        let n = r.a.len();
        if r.l.len() != n || r.l.iter().any(|row| row.len() != n) {
            return Err(Error::Input("map matrix shape does not match translation".into()));
        }
        let l = DMatrix::from_fn(n, n, |i, j| r.l[i][j]);
        AffineLorentzMap::new(r.alpha, l, DVector::from_vec(r.a))
    }
}
