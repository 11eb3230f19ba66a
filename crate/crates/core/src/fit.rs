//! Hypothesis checks and recovery of `r ↦ αLr + a` from sampled pairs.
//!
//! A bijection of Rⁿ (n ≥ 3) that maps null separations to null separations
//! and back is an affine Lorentz map. On a finite sample this becomes a set of
//! checks (cone preservation, collinearity, parallelism, behaviour of the
//! induced scalar map on a line) followed by an affine least-squares fit and
//! a conformal split of its linear part.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boost::{decompose_conformal, AffineLorentzMap};
use crate::error::{Error, Result};
use crate::minkowski::{null_band_scale, Event, Metric};

/// Pairs whose interval lies between `tol` and `INDETERMINATE_FACTOR·tol`
/// (relative) are neither called null nor non-null.
pub const INDETERMINATE_FACTOR: f64 = 10.0;

/// Relative singular-value floor for the rank test in [`fit_affine`].
pub const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Relative half-width of the null band.
    pub null_tol: f64,
    /// Collinearity residual (relative) and parallelism sine bound.
    pub line_tol: f64,
    /// Fit acceptance: max residual ≤ `fit_rel` × image diameter.
    pub fit_rel: f64,
    /// Allowed relative deviation of `MᵀηM` from `λη`.
    pub conformal_tol: f64,
    /// Bound on the induced scalar map errors.
    pub field_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { null_tol: 1e-9, line_tol: 1e-8, fit_rel: 1e-6, conformal_tol: 1e-6, field_tol: 1e-8 }
    }
}

/// Points `value·axis` of a line through the origin, by sample index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldLine {
    pub axis: Vec<f64>,
    pub points: Vec<FieldPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub value: f64,
    pub index: usize,
}

/// Sampled pairs `(x, f(x))` of an unknown map, plus index markers naming
/// collinear triples and parallel segment pairs in the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    metric: Metric,
    pairs: Vec<(Event, Event)>,
    collinear: Vec<[usize; 3]>,
    parallel: Vec<[usize; 4]>,
    field_line: Option<FieldLine>,
}

impl SampleSet {
    pub fn new(metric: Metric, pairs: Vec<(Event, Event)>) -> Result<Self> {
        for (x, y) in &pairs {
            metric.check_dim(x.dim())?;
            metric.check_dim(y.dim())?;
        }
        Ok(Self { metric, pairs, collinear: Vec::new(), parallel: Vec::new(), field_line: None })
    }

    pub fn with_collinear(mut self, triples: Vec<[usize; 3]>) -> Result<Self> {
        self.check_indices(triples.iter().flatten())?;
        self.collinear = triples;
        Ok(self)
    }

    pub fn with_parallel(mut self, quads: Vec<[usize; 4]>) -> Result<Self> {
        self.check_indices(quads.iter().flatten())?;
        self.parallel = quads;
        Ok(self)
    }

    pub fn with_field_line(mut self, line: FieldLine) -> Result<Self> {
        self.check_indices(line.points.iter().map(|p| &p.index))?;
        self.metric.check_dim(line.axis.len())?;
        self.field_line = Some(line);
        Ok(self)
    }

    fn check_indices<'a>(&self, mut idx: impl Iterator<Item = &'a usize>) -> Result<()> {
        match idx.find(|&&i| i >= self.pairs.len()) {
            Some(i) => Err(Error::Input(format!("marker index {i} out of range ({} samples)", self.pairs.len()))),
            None => Ok(()),
        }
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn pairs(&self) -> &[(Event, Event)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn collinear(&self) -> &[[usize; 3]] {
        &self.collinear
    }

    pub fn parallel(&self) -> &[[usize; 4]] {
        &self.parallel
    }

    pub fn field_line(&self) -> Option<&FieldLine> {
        self.field_line.as_ref()
    }

    fn x(&self, i: usize) -> &DVector<f64> {
        self.pairs[i].0.coords()
    }

    fn y(&self, i: usize) -> &DVector<f64> {
        self.pairs[i].1.coords()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Band {
    Null,
    NonNull,
    Indeterminate,
}

fn band(metric: &Metric, d: &DVector<f64>, tol: f64) -> Band {
    let q = metric.inner_unchecked(d, d).abs();
    let scale = null_band_scale(d);
    if q <= tol * scale {
        Band::Null
    } else if q > INDETERMINATE_FACTOR * tol * scale {
        Band::NonNull
    } else {
        Band::Indeterminate
    }
}

fn coincide(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeViolation {
    pub i: usize,
    pub j: usize,
    pub domain_interval: f64,
    pub image_interval: f64,
    /// Relative size of the interval on the non-null side.
    pub severity: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConeCheck {
    pub pairs_checked: usize,
    /// Pairs null on both sides.
    pub null_pairs: usize,
    pub indeterminate: usize,
    pub violations: usize,
    pub bijectivity_violations: usize,
    pub worst: Option<ConeViolation>,
}

impl ConeCheck {
    fn merge(mut self, other: ConeCheck) -> ConeCheck {
        self.pairs_checked += other.pairs_checked;
        self.null_pairs += other.null_pairs;
        self.indeterminate += other.indeterminate;
        self.violations += other.violations;
        self.bijectivity_violations += other.bijectivity_violations;
        self.worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(worse(a, b)),
            (a, b) => a.or(b),
        };
        self
    }

    fn record(&mut self, s: &SampleSet, i: usize, j: usize, tol: f64) {
        self.pairs_checked += 1;
        let (xi, xj, yi, yj) = (s.x(i), s.x(j), s.y(i), s.y(j));
        let same_x = coincide(xi, xj, tol);
        let same_y = coincide(yi, yj, tol);
        if same_x || same_y {
            if same_x != same_y {
                self.bijectivity_violations += 1;
            }
            return;
        }
        let dx = xj - xi;
        let dy = yj - yi;
        let (bx, by) = (band(&s.metric, &dx, tol), band(&s.metric, &dy, tol));
        match (bx, by) {
            (Band::Indeterminate, _) | (_, Band::Indeterminate) => self.indeterminate += 1,
            (Band::Null, Band::Null) => self.null_pairs += 1,
            (Band::NonNull, Band::NonNull) => {}
            _ => {
                let qx = s.metric.inner_unchecked(&dx, &dx);
                let qy = s.metric.inner_unchecked(&dy, &dy);
                let severity =
                    if bx == Band::NonNull { qx.abs() / null_band_scale(&dx) } else { qy.abs() / null_band_scale(&dy) };
                self.violations += 1;
                let v = ConeViolation { i, j, domain_interval: qx, image_interval: qy, severity };
                self.worst = Some(match self.worst {
                    Some(w) => worse(w, v),
                    None => v,
                });
            }
        }
    }
}

fn worse(a: ConeViolation, b: ConeViolation) -> ConeViolation {
    match a.severity.total_cmp(&b.severity) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if (a.i, a.j) <= (b.i, b.j) {
                a
            } else {
                b
            }
        }
    }
}

/// Null in the domain ⟺ null in the image, over all unordered pairs.
pub fn check_cone_preservation(s: &SampleSet, tol: f64) -> ConeCheck {
    let n = s.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = ConeCheck::default();
            for j in i + 1..n {
                acc.record(s, i, j, tol);
            }
            acc
        })
        .reduce(ConeCheck::default, ConeCheck::merge)
}

/// Cone preservation restricted to pairs that contain `vertex`.
pub fn check_single_cone(s: &SampleSet, vertex: usize, tol: f64) -> Result<ConeCheck> {
    if vertex >= s.len() {
        return Err(Error::Input(format!("vertex index {vertex} out of range")));
    }
    let mut acc = ConeCheck::default();
    for j in (0..s.len()).filter(|&j| j != vertex) {
        let (a, b) = if j < vertex { (j, vertex) } else { (vertex, j) };
        acc.record(s, a, b, tol);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LineCheck {
    pub checked: usize,
    pub violations: usize,
    pub worst: f64,
}

fn distance_to_line(p: &DVector<f64>, base: &DVector<f64>, dir: &DVector<f64>) -> f64 {
    let rel = p - base;
    let along = rel.dot(dir) / dir.norm_squared();
    (rel - dir * along).norm()
}

/// Images of marked collinear triples must stay collinear.
pub fn check_collinearity(s: &SampleSet, tol: f64) -> Result<LineCheck> {
    let mut out = LineCheck::default();
    for (k, &[i1, i2, i3]) in s.collinear.iter().enumerate() {
        let d = s.x(i2) - s.x(i1);
        if coincide(s.x(i1), s.x(i2), 0.0) {
            return Err(Error::Input(format!("collinear marker {k} has coincident base points")));
        }
        let off = distance_to_line(s.x(i3), s.x(i1), &d);
        let scale = d.norm().max((s.x(i3) - s.x(i1)).norm()).max(1.0);
        if off > tol * scale {
            return Err(Error::Input(format!("collinear marker {k} is not collinear in the domain")));
        }

        out.checked += 1;
        let e = s.y(i2) - s.y(i1);
        if e.norm() == 0.0 {
            out.violations += 1;
            out.worst = f64::INFINITY;
            continue;
        }
        let scale = e.norm().max((s.y(i3) - s.y(i1)).norm()).max(1.0);
        let rel = distance_to_line(s.y(i3), s.y(i1), &e) / scale;
        out.worst = out.worst.max(rel);
        if rel > tol {
            out.violations += 1;
        }
    }
    Ok(out)
}

fn sine_between(u: &DVector<f64>, w: &DVector<f64>) -> f64 {
    let w_hat = w / w.norm();
    (u - &w_hat * u.dot(&w_hat)).norm() / u.norm()
}

/// Image directions of marked parallel segment pairs must stay parallel.
pub fn check_parallelism(s: &SampleSet, tol: f64) -> Result<LineCheck> {
    parallelism(s, tol, false)
}

fn parallelism(s: &SampleSet, tol: f64, zero_is_violation: bool) -> Result<LineCheck> {
    let mut out = LineCheck::default();
    for (k, &[i1, i2, i3, i4]) in s.parallel.iter().enumerate() {
        let u = s.x(i2) - s.x(i1);
        let w = s.x(i4) - s.x(i3);
        if u.norm() == 0.0 || w.norm() == 0.0 {
            return Err(Error::Input(format!("parallel marker {k} has a zero-length segment")));
        }
        if sine_between(&u, &w) > tol {
            return Err(Error::Input(format!("parallel marker {k} is not parallel in the domain")));
        }

        out.checked += 1;
        let u = s.y(i2) - s.y(i1);
        let w = s.y(i4) - s.y(i3);
        if u.norm() == 0.0 || w.norm() == 0.0 {
            if zero_is_violation {
                out.violations += 1;
                out.worst = f64::INFINITY;
                continue;
            }
            return Err(Error::ZeroImageDirection(k));
        }
        let sine = sine_between(&u, &w);
        out.worst = out.worst.max(sine);
        if sine > tol {
            out.violations += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMapReport {
    /// `false` when the images of the line's points are not collinear; the
    /// error fields are then absent.
    pub line_preserved: bool,
    /// `(x, ζ(x))` in grid order.
    pub zeta: Vec<(f64, f64)>,
    pub additivity_error: Option<f64>,
    pub multiplicativity_error: Option<f64>,
    pub identity_error: Option<f64>,
    /// ζ strictly increasing over the sorted grid.
    pub monotone: bool,
}

impl FieldMapReport {
    pub fn max_error(&self) -> f64 {
        [self.additivity_error, self.multiplicativity_error, self.identity_error]
            .into_iter()
            .flatten()
            .fold(0.0, f64::max)
    }
}

fn grid_lookup(values: &[(f64, f64)], target: f64) -> Option<f64> {
    values.iter().find(|(x, _)| (x - target).abs() <= 1e-12 * target.abs().max(1.0)).map(|&(_, z)| z)
}

/// Reads off the scalar map ζ induced on a line through the origin,
/// `(x·a)′ − 0′ = ζ(x)·((1·a)′ − 0′)`, and measures how far it is from an
/// additive, multiplicative identity on the grid.
pub fn induced_field_map_check(s: &SampleSet, line: &FieldLine, tol: f64) -> Result<FieldMapReport> {
    let axis = DVector::from_column_slice(&line.axis);
    s.metric.check_dim(axis.len())?;
    if axis.norm() == 0.0 {
        return Err(Error::Input("field line axis is zero".into()));
    }
    if let Some(p) = line.points.iter().find(|p| p.index >= s.len()) {
        return Err(Error::Input(format!("field line index {} out of range", p.index)));
    }
    for p in &line.points {
        let expected = &axis * p.value;
        if !coincide(s.x(p.index), &expected, 1e-9) {
            return Err(Error::Input(format!("sample {} is not {}·axis", p.index, p.value)));
        }
    }
    let find = |v: f64| line.points.iter().find(|p| p.value == v).map(|p| p.index);
    let (Some(i0), Some(i1)) = (find(0.0), find(1.0)) else {
        return Err(Error::Input("field line grid must contain 0 and 1".into()));
    };

    let origin = s.y(i0);
    let unit = s.y(i1) - origin;
    let mut sorted = line.points.clone();
    sorted.sort_by(|a, b| a.value.total_cmp(&b.value));

    let mut preserved = unit.norm() > 0.0;
    let mut zeta = Vec::with_capacity(sorted.len());
    if preserved {
        for p in &sorted {
            let rel = s.y(p.index) - origin;
            let z = rel.dot(&unit) / unit.norm_squared();
            if (&rel - &unit * z).norm() > tol * rel.norm().max(unit.norm()).max(1.0) {
                preserved = false;
            }
            zeta.push((p.value, z));
        }
    }
    if !preserved {
        return Ok(FieldMapReport {
            line_preserved: false,
            zeta,
            additivity_error: None,
            multiplicativity_error: None,
            identity_error: None,
            monotone: false,
        });
    }

    let mut add: Option<f64> = None;
    let mut mul: Option<f64> = None;
    for &(x, zx) in &zeta {
        for &(y, zy) in &zeta {
            if let Some(zs) = grid_lookup(&zeta, x + y) {
                add = Some(add.unwrap_or(0.0).max((zs - zx - zy).abs()));
            }
            if let Some(zp) = grid_lookup(&zeta, x * y) {
                mul = Some(mul.unwrap_or(0.0).max((zp - zx * zy).abs()));
            }
        }
    }
    let identity = zeta.iter().map(|&(x, z)| (z - x).abs()).fold(0.0, f64::max);
    let monotone = zeta.windows(2).all(|w| w[0].0 == w[1].0 || w[1].1 > w[0].1);
    Ok(FieldMapReport {
        line_preserved: true,
        zeta,
        additivity_error: add,
        multiplicativity_error: mul,
        identity_error: Some(identity),
        monotone,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineFit {
    pub m: DMatrix<f64>,
    pub a: DVector<f64>,
    pub max_residual: f64,
}

/// Least-squares affine fit `y ≈ Mx + a`.
///
/// The intercept column of the homogeneous design is eliminated by centering,
/// the remaining columns are scaled to unit norm, and the normal equations are
/// solved by Cholesky. Rank is decided on the scaled design by its singular
/// values against [`RANK_TOL`].
pub fn fit_affine(s: &SampleSet) -> Result<AffineFit> {
    let n = s.metric.dim();
    let count = s.len();
    let needed = n + 1;
    if count < needed {
        return Err(Error::Underdetermined { rank: count, needed });
    }
    let xs = DMatrix::from_fn(count, n, |r, c| s.x(r)[c]);
    let ys = DMatrix::from_fn(count, n, |r, c| s.y(r)[c]);
    let mean_x = xs.row_mean();
    let mean_y = ys.row_mean();
    let mut xc = xs.clone();
    let mut yc = ys.clone();
    for mut row in xc.row_iter_mut() {
        row -= &mean_x;
    }
    for mut row in yc.row_iter_mut() {
        row -= &mean_y;
    }
    let norms: Vec<f64> = xc.column_iter().map(|col| col.norm()).collect();
    let nonzero = norms.iter().filter(|&&x| x > 0.0).count();
    if nonzero < n {
        return Err(Error::Underdetermined { rank: nonzero + 1, needed });
    }
    for (mut col, &norm) in xc.column_iter_mut().zip(&norms) {
        col /= norm;
    }
    let sv = xc.clone().singular_values();
    let rank = sv.iter().filter(|&&x| x > RANK_TOL).count();
    if rank < n {
        return Err(Error::Underdetermined { rank: rank + 1, needed });
    }

    let gram = xc.transpose() * &xc;
    let rhs = xc.transpose() * &yc;
    let chol = gram.cholesky().ok_or(Error::Underdetermined { rank, needed })?;
    let mut w = chol.solve(&rhs);
    for (mut row, &norm) in w.row_iter_mut().zip(&norms) {
        row /= norm;
    }
    let m = w.transpose();
    let a = mean_y.transpose() - &m * mean_x.transpose();

    let max_residual = (0..count).map(|i| (&m * s.x(i) + &a - s.y(i)).norm()).fold(0.0, f64::max);
    Ok(AffineFit { m, a, max_residual })
}

/// Single-cone sufficiency: with one cone preserved and an affine model, the
/// model's linear part should carry every sampled null separation to a null
/// one. Counterexamples are pairs where it does not.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SingleConeCheck {
    pub vertex: usize,
    pub cone: ConeCheck,
    /// `None` when the premise (one cone preserved, affine fit accepted) fails.
    pub counterexamples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub samples: usize,
    pub cone: ConeCheck,
    pub single_cone: SingleConeCheck,
    pub collinearity: LineCheck,
    pub parallelism: LineCheck,
    pub field_map: Option<FieldMapReport>,
    /// Fitted linear part and translation, row-major.
    pub fitted_linear: Option<Vec<Vec<f64>>>,
    pub fitted_translation: Option<Vec<f64>>,
    pub max_residual: Option<f64>,
    pub residual_threshold: f64,
    pub recovered: Option<AffineLorentzMap>,
    /// Why recovery was refused, if it was.
    pub failure: Option<String>,
}

impl FitReport {
    pub fn cone_preservation_violations(&self) -> usize {
        self.cone.violations + self.cone.bijectivity_violations
    }

    pub fn collinearity_violations(&self) -> usize {
        self.collinearity.violations
    }

    pub fn parallelism_violations(&self) -> usize {
        self.parallelism.violations
    }

    pub fn field_map_violations(&self, tol: f64) -> usize {
        match &self.field_map {
            None => 0,
            Some(f) if !f.line_preserved => 1,
            Some(f) => usize::from(f.max_error() > tol || !f.monotone),
        }
    }

    pub fn single_cone_violations(&self) -> usize {
        self.single_cone.cone.violations + self.single_cone.counterexamples.unwrap_or(0)
    }

    /// Every hypothesis failure found on the sample.
    pub fn violations(&self, cfg: &FitConfig) -> usize {
        self.cone_preservation_violations()
            + self.collinearity_violations()
            + self.parallelism_violations()
            + self.single_cone_violations()
            + self.field_map_violations(cfg.field_tol)
    }
}

fn image_diameter(s: &SampleSet) -> f64 {
    let n = s.len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (s.y(i) - s.y(j)).norm()).fold(0.0, f64::max)
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Runs every check, fits the affine model and splits it into `(α, L, a)`.
///
/// Fit and decomposition failures are recorded in the report; only malformed
/// markers are returned as errors.
pub fn recover_lorentz(s: &SampleSet, cfg: &FitConfig) -> Result<FitReport> {
    if s.len() < 2 {
        return Err(Error::Input("need at least two samples".into()));
    }
    let cone = check_cone_preservation(s, cfg.null_tol);
    let vertex = 0;
    let single = check_single_cone(s, vertex, cfg.null_tol)?;
    let collinearity = check_collinearity(s, cfg.line_tol)?;
    let parallelism = parallelism(s, cfg.line_tol, true)?;
    let field_map = s.field_line.as_ref().map(|l| induced_field_map_check(s, l, cfg.line_tol)).transpose()?;

    let residual_threshold = cfg.fit_rel * image_diameter(s);
    let mut report = FitReport {
        samples: s.len(),
        cone,
        single_cone: SingleConeCheck { vertex, cone: single, counterexamples: None },
        collinearity,
        parallelism,
        field_map,
        fitted_linear: None,
        fitted_translation: None,
        max_residual: None,
        residual_threshold,
        recovered: None,
        failure: None,
    };

    let fit = match fit_affine(s) {
        Ok(f) => f,
        Err(e) => {
            report.failure = Some(e.to_string());
            return Ok(report);
        }
    };
    report.fitted_linear = Some(rows(&fit.m));
    report.fitted_translation = Some(fit.a.iter().copied().collect());
    report.max_residual = Some(fit.max_residual);
    let fit_ok = fit.max_residual <= residual_threshold;

    if report.single_cone.cone.violations == 0 && report.single_cone.cone.bijectivity_violations == 0 && fit_ok {
        report.single_cone.counterexamples = Some(linear_part_counterexamples(s, &fit.m, cfg.null_tol));
    }

    let decomposed = decompose_conformal(&fit.m, &s.metric, cfg.conformal_tol);
    let (alpha, l) = match decomposed {
        Ok(d) => d,
        Err(e) => {
            report.failure = Some(e.to_string());
            return Ok(report);
        }
    };
    let map = AffineLorentzMap::new(alpha, l, fit.a.clone())?;
    let residual = (0..s.len())
        .map(|i| map.apply_vec(s.x(i)).map(|y| (y - s.y(i)).norm()))
        .try_fold(0.0, |acc: f64, r| r.map(|r| acc.max(r)))?;
    report.max_residual = Some(residual.max(fit.max_residual));

    let violations = report.violations(cfg);
    if !fit_ok || residual > residual_threshold {
        report.failure = Some(format!(
            "fit residual {:e} exceeds threshold {:e}",
            residual.max(fit.max_residual),
            residual_threshold
        ));
    } else if violations > 0 {
        report.failure = Some(format!("{violations} hypothesis violation(s)"));
    } else {
        report.recovered = Some(map);
    }
    Ok(report)
}

fn linear_part_counterexamples(s: &SampleSet, m: &DMatrix<f64>, tol: f64) -> usize {
    let n = s.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            for j in i + 1..n {
                let dx = s.x(j) - s.x(i);
                let dm = m * &dx;
                let dy = s.y(j) - s.y(i);
                if band(&s.metric, &dx, tol) != Band::Null || band(&s.metric, &dy, tol) != Band::Null {
                    continue;
                }
                if band(&s.metric, &dm, tol) == Band::NonNull {
                    count += 1;
                }
            }
            count
        })
        .sum()
}
