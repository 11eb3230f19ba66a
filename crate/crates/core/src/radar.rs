//! Radar coordinates from a light clock.
//!
//! Frame `K′` moves with velocity `v` along the x-axis of `K`. A signal leaves
//! the comoving point `x̄ = 0` at `t₀`, bounces off a mirror at `x̄ = Δx̄` at
//! `t₁` and returns at `t₂`. Seen from `K` the mirror recedes during the
//! outbound leg and approaches during the return leg:
//!
//! ```text
//! t₁ − t₀ = (Δx̄ + v(t₁ − t₀))/c = Δx̄/(c − v)
//! t₂ − t₁ = (Δx̄ − v(t₂ − t₁))/c = Δx̄/(c + v)
//! ```
//!
//! The leg times are sometimes written as `Δx̄/(c² − v²)` and
//! `Δx̄/(c² + v²)`. Those forms have the wrong dimension and do not lead to
//! the boost matrix; this module uses `Δx̄/(c ∓ v)` throughout. Requiring
//! `t′₁ = ½(t′₀ + t′₂)` for every `Δx̄` then forces
//!
//! ```text
//! t′ = α(v)·(t − v·x̄/(c² − v²))
//! x′ = α(v)·x̄/(1 − v²/c²)
//! y′ = α(v)·y/√(1 − v²/c²)
//! ```
//!
//! and `L(v)L(−v) = I` fixes `α(v) = √(1 − v²/c²)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::boost::{AffineLorentzMap, BoostParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarScenario {
    v: f64,
    c: f64,
    delta_xbar: f64,
    t0: f64,
}

impl RadarScenario {
    pub fn new(v: f64, c: f64, delta_xbar: f64, t0: f64) -> Result<Self> {
        BoostParams::new(v, c)?;
        if !(delta_xbar.is_finite() && delta_xbar > 0.0) {
            return Err(Error::Input(format!("mirror separation {delta_xbar} must be positive")));
        }
        if !t0.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { v, c, delta_xbar, t0 })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn delta_xbar(&self) -> f64 {
        self.delta_xbar
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    fn alpha(&self) -> f64 {
        normalized_alpha(self.v, self.c)
    }
}

/// Emission, reflection and return as seen from both frames.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadarTimeline {
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
    pub tprime0: f64,
    pub tprime1: f64,
    pub tprime2: f64,
    /// K-frame positions of the three events.
    pub x: [f64; 3],
    /// K′-frame positions of the three events.
    pub xprime: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadarEvent {
    pub event: &'static str,
    pub t_k: f64,
    pub x_k: f64,
    pub t_kprime: f64,
    pub x_kprime: f64,
}

impl RadarTimeline {
    pub fn events(&self) -> [RadarEvent; 3] {
        let t = [self.t0, self.t1, self.t2];
        let tp = [self.tprime0, self.tprime1, self.tprime2];
        let names = ["emit", "reflect", "return"];
        std::array::from_fn(|i| RadarEvent {
            event: names[i],
            t_k: t[i],
            x_k: self.x[i],
            t_kprime: tp[i],
            x_kprime: self.xprime[i],
        })
    }

    /// `t′₁ − ½(t′₀ + t′₂)`.
    pub fn sync_defect(&self) -> f64 {
        self.tprime1 - 0.5 * (self.tprime0 + self.tprime2)
    }
}

fn normalized_alpha(v: f64, c: f64) -> f64 {
    (1.0 - v * v / (c * c)).sqrt()
}

/// `x̄ = x − v·t`, constant for points at rest in the moving frame.
pub fn comoving(x: f64, t: f64, v: f64) -> f64 {
    x - v * t
}

pub fn light_clock(sc: &RadarScenario) -> RadarTimeline {
    let (v, c, dx) = (sc.v, sc.c, sc.delta_xbar);
    let t0 = sc.t0;
    let t1 = t0 + dx / (c - v);
    let t2 = t1 + dx / (c + v);
    let alpha = sc.alpha();
    // velocity was validated with the scenario
    let tp = |xbar: f64, t: f64| tprime_unchecked(xbar, t, v, c, alpha);
    let xp = |xbar: f64| xprime_unchecked(xbar, v, c, alpha);
    RadarTimeline {
        t0,
        t1,
        t2,
        tprime0: tp(0.0, t0),
        tprime1: tp(dx, t1),
        tprime2: tp(0.0, t2),
        x: [v * t0, dx + v * t1, v * t2],
        xprime: [xp(0.0), xp(dx), xp(0.0)],
    }
}

/// `t′ = α(t − v·x̄/(c² − v²))`.
pub fn tprime(xbar: f64, t: f64, v: f64, c: f64, alpha: f64) -> Result<f64> {
    BoostParams::new(v, c)?;
    Ok(tprime_unchecked(xbar, t, v, c, alpha))
}

fn tprime_unchecked(xbar: f64, t: f64, v: f64, c: f64, alpha: f64) -> f64 {
    alpha * (t - v / (c * c - v * v) * xbar)
}

/// `x′ = α·x̄/(1 − v²/c²)`, from a light ray `x′ = c·t′` leaving the origin.
pub fn xprime(xbar: f64, v: f64, c: f64, alpha: f64) -> Result<f64> {
    BoostParams::new(v, c)?;
    Ok(xprime_unchecked(xbar, v, c, alpha))
}

fn xprime_unchecked(xbar: f64, v: f64, c: f64, alpha: f64) -> f64 {
    alpha * xbar / (1.0 - v * v / (c * c))
}

/// Transverse coordinate: a ray along `y′` climbs at `√(c² − v²)` in `K`.
pub fn yzprime(y_or_z: f64, v: f64, c: f64, alpha: f64) -> Result<f64> {
    BoostParams::new(v, c)?;
    let vy = (c * c - v * v).sqrt();
    // y′ = c·t′ at x̄ = 0, t = y/v_y
    Ok(c * tprime_unchecked(0.0, y_or_z / vy, v, c, alpha))
}

/// Assembles the 4×4 map `(x, y, z, t) ↦ (x′, y′, z′, t′)` column by column
/// from the radar formulas with `α = √(1 − v²/c²)`.
pub fn derive_map(v: f64, c: f64) -> Result<AffineLorentzMap> {
    BoostParams::new(v, c)?;
    let alpha = normalized_alpha(v, c);
    let image = |e: [f64; 4]| -> Result<[f64; 4]> {
        let [x, y, z, t] = e;
        let xbar = comoving(x, t, v);
        Ok([
            xprime(xbar, v, c, alpha)?,
            yzprime(y, v, c, alpha)?,
            yzprime(z, v, c, alpha)?,
            tprime(xbar, t, v, c, alpha)?,
        ])
    };
    let mut l = DMatrix::zeros(4, 4);
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let col = image(e)?;
        for (i, value) in col.into_iter().enumerate() {
            l[(i, j)] = value;
        }
    }
    AffineLorentzMap::new(1.0, l, DVector::zeros(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boost::boost_x;
    use crate::minkowski::Event;
    use approx::assert_relative_eq;

    #[test]
    fn comoving_examples() {
        assert_eq!(comoving(1.5, 3.0, 0.5), 0.0);
        assert_eq!(comoving(3.0, 2.0, 1.0), 1.0);
        assert_eq!(comoving(7.0, 100.0, 0.0), 7.0);
    }

    #[test]
    fn light_clock_at_rest() {
        let tl = light_clock(&RadarScenario::new(0.0, 1.0, 1.0, 0.0).unwrap());
        assert_eq!((tl.t0, tl.t1, tl.t2), (0.0, 1.0, 2.0));
        assert_eq!((tl.tprime0, tl.tprime1, tl.tprime2), (0.0, 1.0, 2.0));
    }

    #[test]
    fn light_clock_half_speed() {
        let tl = light_clock(&RadarScenario::new(0.5, 1.0, 1.0, 0.0).unwrap());
        assert_relative_eq!(tl.t1, 2.0, epsilon = 1e-15);
        assert_relative_eq!(tl.t2, 2.0 + 2.0 / 3.0, epsilon = 1e-15);
        assert!(tl.sync_defect().abs() < 1e-15);
        // outbound/return ratio (c + v)/(c − v) = 3
        assert_relative_eq!((tl.t1 - tl.t0) / (tl.t2 - tl.t1), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn light_clock_sound_speed() {
        let tl = light_clock(&RadarScenario::new(0.5, 343.0, 343.0, 0.0).unwrap());
        assert_relative_eq!(tl.t1, 343.0 / 342.5, max_relative = 1e-15);
        assert!(tl.sync_defect().abs() < 1e-14);
    }

    #[test]
    fn scenario_validation() {
        assert!(matches!(RadarScenario::new(1.0, 1.0, 1.0, 0.0), Err(Error::DegenerateVelocity { .. })));
        assert!(RadarScenario::new(0.1, 1.0, 0.0, 0.0).is_err());
        assert!(RadarScenario::new(0.1, 1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn tprime_examples() {
        assert_eq!(tprime(0.0, 2.5, 0.3, 1.0, 0.7).unwrap(), 0.7 * 2.5);
        assert_eq!(tprime(9.0, 2.5, 0.0, 1.0, 1.3).unwrap(), 1.3 * 2.5);
        let t = tprime(1.0, 0.0, 0.6, 1.0, 0.8).unwrap();
        assert_relative_eq!(t, -0.75, epsilon = 1e-15);
        // same event through the boost: x = x̄ + vt = 1, t = 0
        let img = boost_x(BoostParams::new(0.6, 1.0).unwrap())
            .apply(&Event::from_slice(&[1.0, 0.0, 0.0, 0.0]).unwrap())
            .unwrap();
        assert_relative_eq!(img.time(), t, epsilon = 1e-15);
        assert!(tprime(0.0, 0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn xprime_examples() {
        assert_eq!(xprime(0.0, 0.4, 1.0, 0.9).unwrap(), 0.0);
        assert_eq!(xprime(2.5, 0.0, 1.0, 1.0).unwrap(), 2.5);
        assert_relative_eq!(xprime(1.0, 0.6, 1.0, 0.8).unwrap(), 1.25, epsilon = 1e-15);
        assert!(xprime(1.0, -3.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn yzprime_examples() {
        for v in [-0.9, 0.2, 0.6] {
            let alpha = normalized_alpha(v, 1.0);
            assert_relative_eq!(yzprime(3.0, v, 1.0, alpha).unwrap(), 3.0, epsilon = 1e-14);
        }
        assert_eq!(yzprime(0.0, 0.5, 1.0, 1.0).unwrap(), 0.0);
        assert_relative_eq!(yzprime(1.0, 0.6, 1.0, 1.0).unwrap(), 1.25, epsilon = 1e-15);
    }

    #[test]
    fn derive_map_examples() {
        let rest = derive_map(0.0, 1.0).unwrap();
        assert!(rest.max_abs_diff(&AffineLorentzMap::identity(4)) < 1e-15);

        let p = BoostParams::new(0.6, 1.0).unwrap();
        let derived = derive_map(0.6, 1.0).unwrap();
        assert!(derived.max_abs_diff(&boost_x(p)) < 1e-12);

        let back = derive_map(-0.6, 1.0).unwrap();
        assert!(back.max_abs_diff(&derived.inverse().unwrap()) < 1e-12);
        assert!(derive_map(2.0, 1.0).is_err());
    }

    #[test]
    fn timeline_events_match_derived_map() {
        let sc = RadarScenario::new(-0.3, 2.0, 0.7, 1.5).unwrap();
        let tl = light_clock(&sc);
        let map = derive_map(sc.v(), sc.c()).unwrap();
        for ev in tl.events() {
            let img = map.apply(&Event::from_slice(&[ev.x_k, 0.0, 0.0, ev.t_k]).unwrap()).unwrap();
            assert_relative_eq!(img.as_slice()[0], ev.x_kprime, epsilon = 1e-12);
            assert_relative_eq!(img.time(), ev.t_kprime, epsilon = 1e-12);
        }
    }
}
