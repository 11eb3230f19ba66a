//! Constructive light-cone geometry in R³ (two space dimensions plus time).
//!
//! Each step rebuilds a class of lines or planes from null cones alone:
//!
//! 1. a null line is the intersection of two tangent null cones;
//! 2. a null plane through a null line is the set of points lying on the line
//!    or on no null cone with vertex on the line;
//! 3. a spacelike line is the intersection of two null planes;
//! 4. a timelike plane is spanned by intersecting null and spacelike lines;
//! 5. a timelike line is the intersection of two timelike planes.
//!
//! The constructions need `n = 3`. [`Line`], [`Plane`] and [`classify_plane`]
//! work in any dimension.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::boost::AffineLorentzMap;
use crate::error::{Error, Result};
use crate::minkowski::{null_band_scale, CausalClass, Event, Metric, DEFAULT_NULL_TOL};

/// Distance tolerance for point-set comparisons of lines and planes.
pub const POINT_SET_TOL: f64 = 1e-9;

const INDEPENDENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlaneClass {
    Null,
    Timelike,
    Spacelike,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    point: Event,
    direction: DVector<f64>,
    class: CausalClass,
}

impl Line {
    pub fn new(point: Event, direction: DVector<f64>, metric: &Metric, tol: f64) -> Result<Self> {
        metric.check_dim(point.dim())?;
        metric.check_dim(direction.len())?;
        if direction.iter().all(|&x| x == 0.0) {
            return Err(Error::Degenerate("line direction is zero"));
        }
        let class = metric.classify_vec_unchecked(&direction, tol);
        Ok(Self { point, direction, class })
    }

    pub fn point(&self) -> &Event {
        &self.point
    }

    pub fn direction(&self) -> &DVector<f64> {
        &self.direction
    }

    pub fn causal_class(&self) -> CausalClass {
        self.class
    }

    pub fn point_at(&self, t: f64) -> Event {
        self.point.offset(&self.direction, t)
    }

    /// Euclidean distance from `p` to the line.
    pub fn distance_to(&self, p: &DVector<f64>) -> f64 {
        let rel = p - self.point.coords();
        let d = &self.direction;
        let along = rel.dot(d) / d.norm_squared();
        (rel - d * along).norm()
    }

    pub fn contains(&self, p: &Event, tol: f64) -> bool {
        let scale = (p.coords() - self.point.coords()).norm().max(1.0);
        self.distance_to(p.coords()) <= tol * scale
    }

    /// Same point set up to reparameterization, probed on a fixed grid.
    pub fn same_point_set(&self, other: &Line, tol: f64) -> bool {
        let probe = |a: &Line, b: &Line| {
            [-1.0, 0.0, 1.0].iter().all(|&t| {
                let p = a.point.offset(&(&a.direction / a.direction.norm()), t);
                b.distance_to(p.coords()) <= tol * p.coords().norm().max(1.0)
            })
        };
        self.point.dim() == other.point.dim() && probe(self, other) && probe(other, self)
    }

    /// Image under an affine map; the direction goes through the linear part.
    pub fn transformed(&self, map: &AffineLorentzMap, metric: &Metric, tol: f64) -> Result<Line> {
        let point = map.apply(&self.point)?;
        let direction = map.linear_part() * &self.direction;
        Line::new(point, direction, metric, tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    point: Event,
    span: [DVector<f64>; 2],
    class: PlaneClass,
}

impl Plane {
    pub fn new(point: Event, u: DVector<f64>, w: DVector<f64>, metric: &Metric, tol: f64) -> Result<Self> {
        metric.check_dim(point.dim())?;
        metric.check_dim(u.len())?;
        metric.check_dim(w.len())?;
        if !independent(&u, &w) {
            return Err(Error::Degenerate("plane span vectors are dependent"));
        }
        let class = plane_class_of_span(&u, &w, metric, tol);
        Ok(Self { point, span: [u, w], class })
    }

    pub fn point(&self) -> &Event {
        &self.point
    }

    pub fn span(&self) -> &[DVector<f64>; 2] {
        &self.span
    }

    pub fn causal_class(&self) -> PlaneClass {
        self.class
    }

    /// Euclidean distance from `p` to the plane.
    pub fn distance_to(&self, p: &DVector<f64>) -> f64 {
        let rel = p - self.point.coords();
        let basis = DMatrix::from_columns(&self.span);
        let q = basis.qr().q();
        let proj = &q * (q.transpose() * &rel);
        (rel - proj).norm()
    }

    pub fn contains(&self, p: &Event, tol: f64) -> bool {
        let scale = (p.coords() - self.point.coords()).norm().max(1.0);
        self.distance_to(p.coords()) <= tol * scale
    }

    pub fn contains_line(&self, l: &Line, tol: f64) -> bool {
        self.contains(&l.point_at(0.0), tol) && self.contains(&l.point_at(1.0), tol)
    }

    pub fn same_point_set(&self, other: &Plane, tol: f64) -> bool {
        let probe = |a: &Plane, b: &Plane| {
            let u = &a.span[0] / a.span[0].norm();
            let w = &a.span[1] / a.span[1].norm();
            [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 1.0)].iter().all(|&(s, t)| {
                let p = a.point.coords() + &u * s + &w * t;
                b.distance_to(&p) <= tol * p.norm().max(1.0)
            })
        };
        self.point.dim() == other.point.dim() && probe(self, other) && probe(other, self)
    }

    pub fn transformed(&self, map: &AffineLorentzMap, metric: &Metric, tol: f64) -> Result<Plane> {
        let lin = map.linear_part();
        let point = map.apply(&self.point)?;
        Plane::new(point, &lin * &self.span[0], &lin * &self.span[1], metric, tol)
    }

    /// Euclidean normal, R³ only.
    fn normal3(&self) -> Vector3<f64> {
        to3(&self.span[0]).cross(&to3(&self.span[1]))
    }
}

fn independent(u: &DVector<f64>, w: &DVector<f64>) -> bool {
    let uu = u.norm_squared();
    let ww = w.norm_squared();
    let uw = u.dot(w);
    uu * ww - uw * uw > INDEPENDENCE_TOL * uu * ww && uu > 0.0 && ww > 0.0
}

fn plane_class_of_span(u: &DVector<f64>, w: &DVector<f64>, metric: &Metric, tol: f64) -> PlaneClass {
    let uu = metric.inner_unchecked(u, u);
    let ww = metric.inner_unchecked(w, w);
    let uw = metric.inner_unchecked(u, w);
    let det = uu * ww - uw * uw;
    let scale = (null_band_scale(u) * null_band_scale(w)).max(1.0);
    if det.abs() <= tol * scale {
        PlaneClass::Null
    } else if det < 0.0 {
        PlaneClass::Timelike
    } else {
        PlaneClass::Spacelike
    }
}

fn to3(v: &DVector<f64>) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

fn require_r3(metric: &Metric) -> Result<()> {
    if metric.dim() != 3 {
        return Err(Error::UnsupportedDimension { required: 3, found: metric.dim() });
    }
    Ok(())
}

/// Sign of the Gram determinant of the span under the metric.
pub fn classify_plane(p: &Plane, metric: &Metric, tol: f64) -> Result<PlaneClass> {
    metric.check_dim(p.point.dim())?;
    if !independent(&p.span[0], &p.span[1]) {
        return Err(Error::Degenerate("plane span vectors are dependent"));
    }
    Ok(plane_class_of_span(&p.span[0], &p.span[1], metric, tol))
}

/// The null line shared by the cones `C(a)` and `C(b)`, which touch along it
/// when `b` lies on `C(a)`.
pub fn tangent_cone_intersection(a: &Event, b: &Event, metric: &Metric) -> Result<Line> {
    require_r3(metric)?;
    metric.check_dim(a.dim())?;
    metric.check_dim(b.dim())?;
    let d = b.coords() - a.coords();
    if d.iter().all(|&x| x == 0.0) {
        return Err(Error::Degenerate("cone vertices coincide"));
    }
    if metric.classify_vec_unchecked(&d, DEFAULT_NULL_TOL) != CausalClass::Lightlike {
        return Err(Error::ConesNotTangent { interval: metric.inner_unchecked(&d, &d) });
    }
    Line::new(a.clone(), d, metric, DEFAULT_NULL_TOL)
}

/// The null plane `{p : (p − q, d) = 0}` tangent to every cone with vertex
/// on the null line `q + t·d`.
pub fn null_plane_through(l: &Line, metric: &Metric) -> Result<Plane> {
    require_r3(metric)?;
    metric.check_dim(l.point.dim())?;
    if l.class != CausalClass::Lightlike {
        return Err(Error::NotNull);
    }
    let d = &l.direction;
    // ηd is the Euclidean normal; d itself lies in the plane because it is null.
    let eta_d = Vector3::new(d[0], d[1], metric.time_weight() * d[2]);
    let other = eta_d.cross(&to3(d));
    let w = DVector::from_column_slice(other.as_slice());
    Plane::new(l.point.clone(), d.clone(), w, metric, DEFAULT_NULL_TOL)
}

/// Parameter `t` of the vertex `q + t·d` on the null line whose cone passes
/// through `p`, if there is one.
///
/// Along a null direction the interval `(p − q − t·d)²` loses its `t²` term
/// and reduces to `Q − 2tB` with `Q = (p − q)²` and `B = (p − q, d)`.
pub fn null_cone_vertex_on_line(p: &Event, l: &Line, metric: &Metric, tol: f64) -> Result<Option<f64>> {
    let (q, b) = affine_interval_coefficients(p, l, metric)?;
    let rel = p.coords() - l.point.coords();
    if b.abs() <= tol * b_scale(&rel, &l.direction) {
        if metric.classify_vec_unchecked(&rel, tol) == CausalClass::Lightlike {
            // every vertex on the line works when p is on it; report the foot point
            return Ok(Some(rel.dot(&l.direction) / l.direction.norm_squared()));
        }
        return Ok(None);
    }
    Ok(Some(q / (2.0 * b)))
}

fn affine_interval_coefficients(p: &Event, l: &Line, metric: &Metric) -> Result<(f64, f64)> {
    metric.check_dim(p.dim())?;
    metric.check_dim(l.point.dim())?;
    if l.class != CausalClass::Lightlike {
        return Err(Error::NotNull);
    }
    let rel = p.coords() - l.point.coords();
    Ok((metric.inner_unchecked(&rel, &rel), metric.inner_unchecked(&rel, &l.direction)))
}

fn b_scale(rel: &DVector<f64>, d: &DVector<f64>) -> f64 {
    (rel.norm() * d.norm()).max(1.0)
}

/// Membership in the null plane through `l`, decided only through cones:
/// `p` is on the plane iff it is on `l` or on no null cone with vertex on `l`.
pub fn on_null_plane_by_characterization(p: &Event, l: &Line, metric: &Metric, tol: f64) -> Result<bool> {
    let (q, b) = affine_interval_coefficients(p, l, metric)?;
    let rel = p.coords() - l.point.coords();
    if b.abs() > tol * b_scale(&rel, &l.direction) {
        // Q − 2tB = 0 has a root; confirm that its cone really holds p.
        let vertex = l.point_at(q / (2.0 * b));
        return Ok(!metric.on_null_cone(p, &vertex, tol)?);
    }
    if metric.classify_vec_unchecked(&rel, tol) != CausalClass::Lightlike {
        // Q − 2tB = Q ≠ 0 for every t
        return Ok(true);
    }
    Ok(l.contains(p, tol.max(POINT_SET_TOL)))
}

/// Direct algebraic test `(p − q, d) = 0` for the null plane through `l`.
pub fn on_null_plane_algebraic(p: &Event, l: &Line, metric: &Metric, tol: f64) -> Result<bool> {
    let (_, b) = affine_interval_coefficients(p, l, metric)?;
    let rel = p.coords() - l.point.coords();
    Ok(b.abs() <= tol * b_scale(&rel, &l.direction))
}

/// Intersection of two distinct null planes; generically spacelike.
pub fn intersect_null_planes(p1: &Plane, p2: &Plane, metric: &Metric) -> Result<Line> {
    if p1.class != PlaneClass::Null || p2.class != PlaneClass::Null {
        return Err(Error::NotNull);
    }
    intersect_planes(p1, p2, metric)
}

/// The unique plane containing two lines that meet in one point.
pub fn plane_through_lines(l1: &Line, l2: &Line, metric: &Metric) -> Result<Plane> {
    metric.check_dim(l1.point.dim())?;
    metric.check_dim(l2.point.dim())?;
    let d1 = &l1.direction;
    let d2 = &l2.direction;
    if !independent(d1, d2) {
        return if l2.contains(&l1.point, POINT_SET_TOL) {
            Err(Error::NoUniquePlane("lines are identical"))
        } else {
            Err(Error::NoUniquePlane("lines are parallel"))
        };
    }
    // p₁ + s·d₁ = p₂ + t·d₂ in the least-squares sense
    let a = DMatrix::from_columns(&[d1.clone(), -d2.clone()]);
    let rhs = l2.point.coords() - l1.point.coords();
    let st =
        a.clone().svd(true, true).solve(&rhs, f64::EPSILON).map_err(|_| Error::NoUniquePlane("lines are parallel"))?;
    let meet = l1.point.offset(d1, st[0]);
    let miss = (&a * &st - &rhs).norm();
    if miss > POINT_SET_TOL * rhs.norm().max(meet.coords().norm()).max(1.0) {
        return Err(Error::NoUniquePlane("lines are skew"));
    }
    Plane::new(meet, d1.clone(), d2.clone(), metric, DEFAULT_NULL_TOL)
}

/// Intersection line of two non-parallel planes in R³.
pub fn intersect_planes(p1: &Plane, p2: &Plane, metric: &Metric) -> Result<Line> {
    require_r3(metric)?;
    metric.check_dim(p1.point.dim())?;
    metric.check_dim(p2.point.dim())?;
    let n1 = p1.normal3();
    let n2 = p2.normal3();
    let dir = n1.cross(&n2);
    if dir.norm() <= INDEPENDENCE_TOL.sqrt() * n1.norm() * n2.norm() {
        return Err(Error::NoUniqueLine);
    }
    let rows = Matrix3::from_rows(&[n1.transpose(), n2.transpose(), dir.transpose()]);
    let rhs = Vector3::new(n1.dot(&to3(p1.point.coords())), n2.dot(&to3(p2.point.coords())), 0.0);
    let point = rows.lu().solve(&rhs).ok_or(Error::NoUniqueLine)?;
    Line::new(
        Event::from_slice(point.as_slice())?,
        DVector::from_column_slice(dir.as_slice()),
        metric,
        DEFAULT_NULL_TOL,
    )
}
