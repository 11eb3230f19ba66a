//! Seeded synthetic sample sets: maps that satisfy the cone-preservation
//! hypothesis and maps that break it.
//!
//! Every set has the same layout, so the checks always have something to
//! bite on:
//!
//! | indices  | content                                              |
//! |----------|------------------------------------------------------|
//! | 0        | cone vertex                                          |
//! | 1..=3    | points on the null cone of sample 0                  |
//! | 4, 5     | a further null pair                                  |
//! | 6..=11   | `g·axis` for `g` in [`FIELD_GRID`]                   |
//! | 12..=20  | three collinear triples                              |
//! | 21..=28  | two pairs of parallel segments                       |
//! | 29..     | uniform random events                                |

use clap::ValueEnum;
use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::boost::{boost_x_in, AffineLorentzMap, BoostParams};
use crate::error::{Error, Result};
use crate::fit::{FieldLine, FieldPoint, SampleSet, INDETERMINATE_FACTOR};
use crate::io::TruthFile;
use crate::minkowski::{null_band_scale, Event, Metric, DEFAULT_NULL_TOL};

pub const FIELD_GRID: [f64; 6] = [0.0, 1.0, 2.0, 3.0, 0.5, 1.5];

/// Number of structured samples that precede the random fill.
pub const STRUCTURED: usize = 29;

const HALF_WIDTH: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// `αL(v)x + a`.
    Lorentz,
    /// `x + a`.
    Translation,
    /// Componentwise `x³`.
    Cubing,
    /// `x + (x₁², 0, …, 0)`.
    Shear,
    /// Lorentz images with Gaussian noise.
    NoisyLorentz,
    /// Lorentz images assigned to the wrong inputs.
    Permutation,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Lorentz => "lorentz",
            Kind::Translation => "translation",
            Kind::Cubing => "cubing",
            Kind::Shear => "shear",
            Kind::NoisyLorentz => "noisy-lorentz",
            Kind::Permutation => "permutation",
        }
    }

    /// Whether samples of this kind come from an affine Lorentz map.
    pub fn satisfies_hypotheses(self) -> bool {
        matches!(self, Kind::Lorentz | Kind::Translation | Kind::NoisyLorentz)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub kind: Kind,
    pub n: usize,
    pub c: f64,
    pub v: f64,
    pub alpha: f64,
    /// Translation; drawn from the seed when absent.
    pub shift: Option<Vec<f64>>,
    pub count: usize,
    /// Standard deviation of image noise, in spatial units.
    pub noise: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self { kind: Kind::Lorentz, n: 4, c: 1.0, v: 0.6, alpha: 1.0, shift: None, count: 50, noise: 1e-9, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub samples: SampleSet,
    pub null_pairs: Vec<[usize; 2]>,
    pub truth: TruthFile,
}

struct Sampler {
    rng: ChaCha8Rng,
    metric: Metric,
}

impl Sampler {
    fn uniform(&mut self, half: f64) -> f64 {
        self.rng.random_range(-half..half)
    }

    fn point(&mut self) -> DVector<f64> {
        let n = self.metric.dim();
        let c = self.metric.c();
        DVector::from_fn(n, |i, _| if i + 1 == n { self.uniform(HALF_WIDTH / c) } else { self.uniform(HALF_WIDTH) })
    }

    fn null_direction(&mut self) -> DVector<f64> {
        let n = self.metric.dim();
        let mut u = DVector::from_fn(n - 1, |_, _| self.rng.sample::<f64, _>(StandardNormal));
        while u.norm() < 1e-3 {
            u = DVector::from_fn(n - 1, |_, _| self.rng.sample::<f64, _>(StandardNormal));
        }
        let len = self.rng.random_range(1.0..4.0);
        let u = u.normalize() * len;
        let mut d = u.insert_row(n - 1, 0.0);
        d[n - 1] = len / self.metric.c();
        d
    }

    /// Marker direction with a first component of magnitude at least 1/2.
    fn direction(&mut self) -> DVector<f64> {
        let mut d = self.point() * 0.6;
        let sign = if self.rng.random_bool(0.5) { 1.0 } else { -1.0 };
        d[0] = sign * self.rng.random_range(0.5..3.0);
        d
    }

    fn field_axis(&mut self) -> DVector<f64> {
        let mut axis = self.direction();
        let n = axis.len();
        for i in 1..n - 1 {
            let sign = if axis[i] < 0.0 { -1.0 } else { 1.0 };
            axis[i] = sign * (1.0 + axis[i].abs());
        }
        axis
    }
}

fn image_fn(kind: Kind, truth: &AffineLorentzMap) -> impl Fn(&DVector<f64>) -> DVector<f64> + '_ {
    move |x: &DVector<f64>| match kind {
        Kind::Lorentz | Kind::NoisyLorentz | Kind::Permutation | Kind::Translation => {
            truth.apply_vec(x).expect("dimension checked")
        }
        Kind::Cubing => x.map(|v| v * v * v),
        Kind::Shear => {
            let mut y = x.clone();
            y[0] += x[0] * x[0];
            y
        }
    }
}

pub fn generate(p: &GenParams) -> Result<Generated> {
    let metric = Metric::new(p.n, p.c)?;
    if p.n < 3 {
        return Err(Error::UnsupportedDimension { required: 3, found: p.n });
    }
    if p.count < STRUCTURED + 1 {
        return Err(Error::Input(format!("count {} is below the minimum {}", p.count, STRUCTURED + 1)));
    }
    if !(p.noise.is_finite() && p.noise >= 0.0) {
        return Err(Error::Input(format!("noise {} must be non-negative", p.noise)));
    }
    let params = BoostParams::new(p.v, p.c)?;
    let mut s = Sampler { rng: ChaCha8Rng::seed_from_u64(p.seed), metric };

    let shift = match &p.shift {
        Some(a) if a.len() != p.n => return Err(Error::DimensionMismatch { expected: p.n, found: a.len() }),
        Some(a) => DVector::from_column_slice(a),
        None => s.point(),
    };
    let truth_map = match p.kind {
        Kind::Translation => AffineLorentzMap::translation(shift),
        _ => AffineLorentzMap::new(p.alpha, boost_x_in(params, p.n).l().clone(), shift)?,
    };
    let f = image_fn(p.kind, &truth_map);

    let mut xs: Vec<DVector<f64>> = Vec::with_capacity(p.count);
    let mut null_pairs = Vec::new();

    let vertex = s.point();
    xs.push(vertex.clone());
    for k in 1..=3 {
        let d = s.null_direction();
        xs.push(&vertex + d);
        null_pairs.push([0, k]);
    }

    let (a, b) = witness_pair(&mut s, p.kind, &f);
    null_pairs.push([xs.len(), xs.len() + 1]);
    xs.push(a);
    xs.push(b);

    let axis = s.field_axis();
    let field_start = xs.len();
    for g in FIELD_GRID {
        xs.push(&axis * g);
    }
    let field_line = FieldLine {
        axis: axis.iter().copied().collect(),
        points: FIELD_GRID.iter().enumerate().map(|(k, &value)| FieldPoint { value, index: field_start + k }).collect(),
    };

    let mut collinear = Vec::new();
    for _ in 0..3 {
        let base = s.point();
        let d = s.direction();
        let t = s.rng.random_range(0.2..0.8);
        let i = xs.len();
        xs.push(base.clone());
        xs.push(&base + &d);
        xs.push(&base + &d * t);
        collinear.push([i, i + 1, i + 2]);
    }

    let mut parallel = Vec::new();
    for _ in 0..2 {
        let d = s.direction();
        let lambda = s.rng.random_range(0.5..1.5);
        let (b1, b2) = (s.point(), s.point());
        let i = xs.len();
        xs.push(b1.clone());
        xs.push(&b1 + &d);
        xs.push(b2.clone());
        xs.push(&b2 + &d * lambda);
        parallel.push([i, i + 1, i + 2, i + 3]);
    }
    debug_assert_eq!(xs.len(), STRUCTURED);

    while xs.len() < p.count {
        xs.push(s.point());
    }

    let mut ys: Vec<DVector<f64>> = xs.iter().map(&f).collect();
    match p.kind {
        Kind::NoisyLorentz => {
            let n = p.n;
            for y in &mut ys {
                for i in 0..n {
                    let unit = if i + 1 == n { p.c } else { 1.0 };
                    y[i] += p.noise / unit * s.rng.sample::<f64, _>(StandardNormal);
                }
            }
        }
        Kind::Permutation => {
            let mut order: Vec<usize> = (0..ys.len()).collect();
            order.shuffle(&mut s.rng);
            if order.iter().enumerate().all(|(i, &j)| i == j) {
                order.rotate_left(1);
            }
            ys = order.into_iter().map(|j| ys[j].clone()).collect();
        }
        _ => {}
    }

    let pairs =
        xs.into_iter().zip(ys).map(|(x, y)| Ok((Event::new(x)?, Event::new(y)?))).collect::<Result<Vec<_>>>()?;
    let samples = SampleSet::new(metric, pairs)?
        .with_collinear(collinear)?
        .with_parallel(parallel)?
        .with_field_line(field_line)?;

    let truth = TruthFile {
        kind: p.kind.name().to_string(),
        seed: p.seed,
        metric: metric.into(),
        v: matches!(p.kind, Kind::Lorentz | Kind::NoisyLorentz | Kind::Permutation).then_some(p.v),
        noise: (p.kind == Kind::NoisyLorentz).then_some(p.noise),
        map: p.kind.satisfies_hypotheses().then_some(truth_map.clone()),
    };
    Ok(Generated { samples, null_pairs, truth })
}

/// A null pair. For kinds that break cones, keep drawing until the image
/// pair is clearly non-null, so the sample carries a witness.
fn witness_pair(
    s: &mut Sampler,
    kind: Kind,
    f: &impl Fn(&DVector<f64>) -> DVector<f64>,
) -> (DVector<f64>, DVector<f64>) {
    let needs_witness = matches!(kind, Kind::Cubing | Kind::Shear);
    loop {
        let a = s.point();
        let b = &a + s.null_direction();
        if !needs_witness {
            return (a, b);
        }
        let dy = f(&b) - f(&a);
        let q = s.metric.inner_unchecked(&dy, &dy).abs();
        if q > 1e3 * INDETERMINATE_FACTOR * DEFAULT_NULL_TOL * null_band_scale(&dy) {
            return (a, b);
        }
    }
}
