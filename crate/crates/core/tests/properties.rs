//! Property tests for the geometry kernel, boosts, cone constructions,
//! radar clocks and the recoverer, each run across several signal speeds.

use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use alexandrov::boost::{boost_x, boost_x_in, decompose_conformal, AffineLorentzMap, BoostParams};
use alexandrov::cone::{classify_plane, null_plane_through, tangent_cone_intersection, Line, Plane, PlaneClass};
use alexandrov::fit::{recover_lorentz, FitConfig};
use alexandrov::generate::{generate, GenParams, Kind};
use alexandrov::minkowski::{CausalClass, Event, Metric};
use alexandrov::radar::{light_clock, RadarScenario};

const C_VALUES: [f64; 4] = [0.1, 1.0, 343.0, 2.99792458e8];
const TOL: f64 = 1e-9;

fn speed() -> impl Strategy<Value = f64> {
    prop::sample::select(C_VALUES.to_vec())
}

/// Event in a box of half-width 5 in units where the signal speed is one.
fn event(n: usize, c: f64) -> impl Strategy<Value = DVector<f64>> {
    prop::collection::vec(-5.0..5.0f64, n).prop_map(move |mut v| {
        v[n - 1] /= c;
        DVector::from_vec(v)
    })
}

fn with_speed<T: std::fmt::Debug>(f: impl Fn(f64) -> BoxedStrategy<T> + 'static) -> impl Strategy<Value = (f64, T)> {
    speed().prop_flat_map(move |c| (Just(c), f(c)))
}

/// Separation measured in units where the signal speed is one.
fn natural_norm_sq(d: &DVector<f64>, c: f64) -> f64 {
    let n = d.len();
    d.rows(0, n - 1).norm_squared() + (c * d[n - 1]).powi(2)
}

fn natural_units(m: &DMatrix<f64>, c: f64) -> DMatrix<f64> {
    let n = m.nrows();
    let d = |i: usize| if i + 1 == n { c } else { 1.0 };
    DMatrix::from_fn(n, n, |i, j| m[(i, j)] * d(i) / d(j))
}

/// Rotation of the three spatial axes of R⁴ from Euler angles.
fn rotation4(a: f64, b: f64, g: f64) -> DMatrix<f64> {
    let rz = |t: f64| {
        let mut m = DMatrix::identity(4, 4);
        m[(0, 0)] = t.cos();
        m[(0, 1)] = -t.sin();
        m[(1, 0)] = t.sin();
        m[(1, 1)] = t.cos();
        m
    };
    let ry = |t: f64| {
        let mut m = DMatrix::identity(4, 4);
        m[(0, 0)] = t.cos();
        m[(0, 2)] = t.sin();
        m[(2, 0)] = -t.sin();
        m[(2, 2)] = t.cos();
        m
    };
    rz(a) * ry(b) * rz(g)
}

/// A null direction with spatial part `u` (non-zero) pointing forward or back in time.
fn null_from(u: &[f64], forward: bool, c: f64) -> DVector<f64> {
    let len = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut d = u.to_vec();
    d.push(if forward { len / c } else { -len / c });
    DVector::from_vec(d)
}

fn spatial(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, k)
        .prop_filter("non-degenerate spatial part", |u| u.iter().map(|x| x * x).sum::<f64>() > 0.01)
}

/// Gram determinant of a span well outside the null band of `classify_plane`.
fn clear_of_band(span: &[DVector<f64>; 2], m: &Metric) -> bool {
    let [u, w] = span;
    let g = |a: &DVector<f64>, b: &DVector<f64>| m.inner_vec(a, b).unwrap();
    let det = g(u, u) * g(w, w) - g(u, w).powi(2);
    det.abs() > 10.0 * TOL * u.norm_squared().max(1.0) * w.norm_squared().max(1.0)
}

proptest! {
    #[test]
    fn inner_is_bilinear(
        (c, (r, s, t)) in with_speed(|c| (event(4, c), event(4, c), event(4, c)).boxed()),
        a in -10.0..10.0f64,
        b in -10.0..10.0f64,
    ) {
        let m = Metric::new(4, c).unwrap();
        let lhs = m.inner_vec(&(&r * a + &s * b), &t).unwrap();
        let rhs = a * m.inner_vec(&r, &t).unwrap() + b * m.inner_vec(&s, &t).unwrap();
        let scale = (a.abs() * natural_norm_sq(&r, c).sqrt() + b.abs() * natural_norm_sq(&s, c).sqrt())
            * natural_norm_sq(&t, c).sqrt();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE), "{lhs} vs {rhs}");
    }

    #[test]
    fn inner_is_symmetric((c, (r, s)) in with_speed(|c| (event(4, c), event(4, c)).boxed())) {
        let m = Metric::new(4, c).unwrap();
        prop_assert_eq!(m.inner_vec(&r, &s).unwrap(), m.inner_vec(&s, &r).unwrap());
    }

    #[test]
    fn basis_signature(c in speed(), n in 2usize..7) {
        let m = Metric::new(n, c).unwrap();
        for k in 0..n {
            let mut e = DVector::zeros(n);
            e[k] = 1.0;
            let expected = if k + 1 == n { -c * c } else { 1.0 };
            prop_assert_eq!(m.inner_vec(&e, &e).unwrap(), expected);
        }
    }

    #[test]
    fn classify_sign_is_scale_covariant(
        (c, d) in with_speed(|c| event(4, c).boxed()),
        magnitude in -3.0..3.0f64,
        negative in any::<bool>(),
    ) {
        let m = Metric::new(4, c).unwrap();
        let q = m.inner_vec(&d, &d).unwrap();
        prop_assume!(q.abs() >= 1e-3 * natural_norm_sq(&d, c));
        let lambda = if negative { -1.0 } else { 1.0 } * 10f64.powf(magnitude);
        let scaled = &d * lambda;
        let band = |v: &DVector<f64>| TOL * v.norm_squared().max(1.0);
        prop_assume!(q.abs() > 10.0 * band(&d) && (lambda * lambda * q).abs() > 10.0 * band(&scaled));
        prop_assert_eq!(m.classify_vec(&scaled, TOL).unwrap(), m.classify_vec(&d, TOL).unwrap());
    }

    #[test]
    fn boosts_preserve_intervals(
        (c, (r, s)) in with_speed(|c| (event(4, c), event(4, c)).boxed()),
        beta in -0.99..0.99f64,
    ) {
        let m = Metric::new(4, c).unwrap();
        let map = boost_x(BoostParams::new(beta * c, c).unwrap());
        let before = m.interval(&Event::new(r.clone()).unwrap(), &Event::new(s.clone()).unwrap()).unwrap();
        let (br, bs) = (map.apply_vec(&r).unwrap(), map.apply_vec(&s).unwrap());
        let after = m.inner_vec(&(&br - &bs), &(&br - &bs)).unwrap();
        prop_assert!((after - before).abs() <= 1e-9 * natural_norm_sq(&(&r - &s), c).max(before.abs()));
    }

    #[test]
    fn boost_composed_with_reverse_is_identity(c in speed(), beta in -0.99..0.99f64) {
        let p = BoostParams::new(beta * c, c).unwrap();
        let round = boost_x(p).compose(&boost_x(p.reversed())).unwrap();
        let err = (natural_units(round.l(), c) - DMatrix::<f64>::identity(4, 4)).amax();
        prop_assert!(err <= 1e-10, "{err}");
        prop_assert_eq!(round.alpha(), 1.0);
    }

    #[test]
    fn decompose_inverts_scaling(
        c in speed(),
        beta in -0.95..0.95f64,
        alpha in 0.1..10.0f64,
        angles in (0.0..6.3f64, 0.0..3.2f64, 0.0..6.3f64),
        flip in any::<bool>(),
    ) {
        let m = Metric::new(4, c).unwrap();
        let boost = boost_x(BoostParams::new(beta * c, c).unwrap()).l().clone();
        let sign = if flip { -1.0 } else { 1.0 };
        let l = rotation4(angles.0, angles.1, angles.2) * boost * sign;
        let (found_alpha, found_l) = decompose_conformal(&(&l * alpha), &m, 1e-9).unwrap();
        assert_relative_eq!(found_alpha, alpha, max_relative = 1e-10);
        let err = (natural_units(&found_l, c) - natural_units(&l, c)).amax();
        prop_assert!(err <= 1e-10, "{err}");
    }

    #[test]
    fn affine_lorentz_maps_preserve_null_separation(
        (c, (r, shift)) in with_speed(|c| (event(4, c), event(4, c)).boxed()),
        u in spatial(3),
        forward in any::<bool>(),
        beta in -0.9..0.9f64,
        alpha in 0.5..3.0f64,
        angles in (0.0..6.3f64, 0.0..3.2f64, 0.0..6.3f64),
    ) {
        let m = Metric::new(4, c).unwrap();
        let s = &r + null_from(&u, forward, c);
        let lin = rotation4(angles.0, angles.1, angles.2) * boost_x(BoostParams::new(beta * c, c).unwrap()).l();
        let map = AffineLorentzMap::new(alpha, lin, shift).unwrap();
        let (x, y) = (Event::new(r).unwrap(), Event::new(s).unwrap());
        prop_assert_eq!(m.classify(&x, &y, TOL).unwrap(), CausalClass::Lightlike);
        let (fx, fy) = (map.apply(&x).unwrap(), map.apply(&y).unwrap());
        prop_assert_eq!(m.classify(&fx, &fy, TOL).unwrap(), CausalClass::Lightlike);
        let inv = map.inverse().unwrap();
        let (bx, by) = (inv.apply(&fx).unwrap(), inv.apply(&fy).unwrap());
        prop_assert_eq!(m.classify(&bx, &by, TOL).unwrap(), CausalClass::Lightlike);
    }

    #[test]
    fn tangent_cones_recover_the_null_line(
        (c, q) in with_speed(|c| event(3, c).boxed()),
        u in spatial(2),
        forward in any::<bool>(),
        t in prop_oneof![-4.0..-0.25f64, 0.25..4.0f64],
    ) {
        let m = Metric::new(3, c).unwrap();
        let line = Line::new(Event::new(q).unwrap(), null_from(&u, forward, c), &m, TOL).unwrap();
        prop_assert_eq!(line.causal_class(), CausalClass::Lightlike);
        let rebuilt = tangent_cone_intersection(line.point(), &line.point_at(t), &m).unwrap();
        prop_assert!(rebuilt.same_point_set(&line, 1e-9));
        let plane = null_plane_through(&line, &m).unwrap();
        prop_assert_eq!(plane.causal_class(), PlaneClass::Null);
        prop_assert!(plane.contains_line(&line, 1e-9));
    }

    #[test]
    fn boosts_keep_line_and_plane_classes(
        (c, (q, a)) in with_speed(|c| (event(3, c), event(3, c)).boxed()),
        u in spatial(2),
        w in spatial(2),
        forward in any::<bool>(),
        time_factor in prop_oneof![0.0..0.8f64, 1.25..4.0f64, Just(1.0)],
        beta in -0.99..0.99f64,
        alpha in 0.5..3.0f64,
    ) {
        let m = Metric::new(3, c).unwrap();
        let mut d = null_from(&u, forward, c);
        d[2] *= time_factor;
        let line = Line::new(Event::new(q.clone()).unwrap(), d.clone(), &m, TOL).unwrap();
        let boost = boost_x_in(BoostParams::new(beta * c, c).unwrap(), 3);
        let map = AffineLorentzMap::new(alpha, boost.l().clone(), a).unwrap();
        let image = line.transformed(&map, &m, TOL).unwrap();
        prop_assert_eq!(image.causal_class(), line.causal_class());

        let other = DVector::from_vec(vec![w[0], w[1], 0.0]);
        prop_assume!(d.cross(&other).norm() > 1e-3 * d.norm() * other.norm());
        let plane = Plane::new(Event::new(q).unwrap(), d, other, &m, TOL).unwrap();
        let class = classify_plane(&plane, &m, TOL).unwrap();
        let moved = plane.transformed(&map, &m, TOL).unwrap();
        prop_assume!(clear_of_band(plane.span(), &m) && clear_of_band(moved.span(), &m));
        prop_assert_eq!(classify_plane(&moved, &m, TOL).unwrap(), class);
    }

    #[test]
    fn radar_midpoint_and_leg_ratio(
        c in speed(),
        beta in -0.9..0.9f64,
        log_dx in -3.0..3.0f64,
        t0 in -10.0..10.0f64,
    ) {
        let v = beta * c;
        let dx = 10f64.powf(log_dx);
        let tl = light_clock(&RadarScenario::new(v, c, dx, t0 * dx / c).unwrap());
        prop_assert!(tl.t0 < tl.t1 && tl.t1 < tl.t2);
        let scale = tl.tprime0.abs().max(tl.tprime1.abs()).max(tl.tprime2.abs());
        prop_assert!((tl.tprime1 - 0.5 * (tl.tprime0 + tl.tprime2)).abs() <= 1e-10 * scale);
        let ratio = (tl.t1 - tl.t0) / (tl.t2 - tl.t1);
        assert_relative_eq!(ratio, (c + v) / (c - v), max_relative = 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recovered_map_reproduces_samples(
        seed in any::<u64>(),
        c in speed(),
        beta in -0.9..0.9f64,
        alpha in 0.5..3.0f64,
        n in 3usize..6,
    ) {
        let g = generate(&GenParams {
            kind: Kind::Lorentz, n, c, v: beta * c, alpha, shift: None, count: 40, noise: 0.0, seed,
        }).unwrap();
        let cfg = FitConfig::default();
        let report = recover_lorentz(&g.samples, &cfg).unwrap();
        prop_assert_eq!(report.violations(&cfg), 0);
        let found = report.recovered.clone().expect("recovered");
        let residual = report.max_residual.unwrap();
        for (x, y) in g.samples.pairs() {
            let err = (found.apply(x).unwrap().coords() - y.coords()).norm();
            prop_assert!(err <= residual + 1e-12 * y.coords().norm().max(1.0), "{err} > {residual}");
        }
    }

    #[test]
    fn residual_grows_with_noise(seed in any::<u64>(), c in speed()) {
        let mut last = 0.0;
        for eps in [0.0, 1e-9, 1e-6, 1e-3] {
            let g = generate(&GenParams {
                kind: Kind::NoisyLorentz, n: 4, c, v: 0.5 * c, alpha: 1.5, shift: None, count: 50, noise: eps, seed,
            }).unwrap();
            let residual = recover_lorentz(&g.samples, &FitConfig::default()).unwrap().max_residual.unwrap();
            prop_assert!(residual >= last, "eps {eps}: {residual} < {last}");
            last = residual;
        }
    }
}
