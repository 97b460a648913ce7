//! Vectors of C² as points of the Riemann sphere.
//!
//! The sphere is `S = {x² + y² + z² = z}`, of radius 1/2 around
//! `C = (0, 0, 1/2)`. A nonzero `(z₁, z₂)` is sent to
//!
//! ```text
//! φ(z₁, z₂) = (Re(z₁ z̄₂), Im(z₁ z̄₂), |z₁|²) / (|z₁|² + |z₂|²),
//! ```
//!
//! which equals `(a, b, a² + b²) / (1 + a² + b²)` for `z₁/z₂ = a + bi` and
//! sends the line through `(1, 0)` to the pole `(0, 0, 1)`. The map only
//! depends on the complex line through the vector.
//!
//! For three vectors the following are equivalent: the triple product of
//! inner products is real and negative; `C` lies in the triangle spanned by
//! the images and no two images are antipodal; every plane through `C`
//! missing the images separates one of them from the other two. The suites
//! at the bottom of this module test these equivalences on samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::designs::Coloring;
use crate::linalg::CVector;
use crate::orthrep::{triple_product, triple_product_negative};
use crate::par::{self, Execution};
use crate::Complex64;

/// Membership tolerance of [`SpherePoint::new`].
pub const SPHERE_TOL: f64 = 1e-12;
/// Default tolerance of [`center_in_hull`].
pub const HULL_TOL: f64 = 1e-9;
/// Points within this distance of a probe plane are treated as on it.
pub const PLANE_MARGIN: f64 = 1e-9;
/// Center of `S`.
pub const CENTER: [f64; 3] = [0.0, 0.0, 0.5];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SphereError {
    #[error("zero vector has no image on the sphere")]
    ZeroVector,
    #[error("expected a vector in C², got dimension {0}")]
    WrongDimension(usize),
    #[error("point ({x}, {y}, {z}) is off the sphere by {residual:e}")]
    OffSphere { x: f64, y: f64, z: f64, residual: f64 },
    #[error("point {0} lies on the coloring plane")]
    PointOnPlane(usize),
}

/// A point of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    x: f64,
    y: f64,
    z: f64,
}

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, SphereError> {
        let residual = (x * x + y * y + z * z - z).abs();
        if residual.is_nan() || residual > SPHERE_TOL {
            return Err(SphereError::OffSphere { x, y, z, residual });
        }
        Ok(Self { x, y, z })
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// `self - C`.
    fn offset(&self) -> [f64; 3] {
        sub(self.coords(), CENTER)
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        norm(sub(self.coords(), other.coords()))
    }
}

/// A point of the complex projective line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProjectivePoint {
    /// The line through `(w, 1)`.
    Finite(Complex64),
    /// The line through `(1, 0)`.
    Infinity,
}

fn pair(u: &CVector) -> Result<(Complex64, Complex64), SphereError> {
    if u.dim() != 2 {
        return Err(SphereError::WrongDimension(u.dim()));
    }
    if u.is_zero() {
        return Err(SphereError::ZeroVector);
    }
    Ok((u[0], u[1]))
}

pub fn projectivize(u: &CVector) -> Result<ProjectivePoint, SphereError> {
    let (z1, z2) = pair(u)?;
    Ok(if z2 == Complex64::new(0.0, 0.0) { ProjectivePoint::Infinity } else { ProjectivePoint::Finite(z1 / z2) })
}

/// Stereographic image of the line through `u`.
pub fn phi(u: &CVector) -> Result<SpherePoint, SphereError> {
    let (z1, z2) = pair(u)?;
    let (a, b) = (z1.norm_sqr(), z2.norm_sqr());
    let n = a + b;
    let w = z1 * z2.conj();
    Ok(SpherePoint { x: w.re / n, y: w.im / n, z: a / n })
}

/// Reflection through `C`: `(−x, −y, 1 − z)`.
pub fn antipode(p: &SpherePoint) -> SpherePoint {
    SpherePoint { x: -p.x, y: -p.y, z: 1.0 - p.z }
}

/// Barycentric coordinates of the point of the plane through `p, q, r`
/// nearest to `C`, with the distance from `C` to that plane.
///
/// `None` when the triangle is degenerate, which on a sphere means two of
/// the points coincide.
pub fn hull_barycentric(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint) -> Option<([f64; 3], f64)> {
    let e1 = sub(p.coords(), r.coords());
    let e2 = sub(q.coords(), r.coords());
    let c = sub(CENTER, r.coords());
    let (g11, g12, g22) = (dot(e1, e1), dot(e1, e2), dot(e2, e2));
    let det = g11 * g22 - g12 * g12;
    if det.is_nan() || det <= 1e-24 * g11 * g22 || g11 == 0.0 || g22 == 0.0 {
        return None;
    }
    let (b1, b2) = (dot(e1, c), dot(e2, c));
    let l1 = (g22 * b1 - g12 * b2) / det;
    let l2 = (g11 * b2 - g12 * b1) / det;
    let fit = [l1 * e1[0] + l2 * e2[0], l1 * e1[1] + l2 * e2[1], l1 * e1[2] + l2 * e2[2]];
    Some(([l1, l2, 1.0 - l1 - l2], norm(sub(fit, c))))
}

/// Whether `C` lies in the closed triangle `p q r` with no two of the
/// points antipodal.
///
/// A degenerate triangle is a point or a chord; a chord through `C` joins
/// antipodal points, so degenerate inputs are always outside.
pub fn center_in_hull(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint, tol: f64) -> bool {
    let pts = [p, q, r];
    for i in 0..3 {
        for j in i + 1..3 {
            if pts[i].distance(&antipode(pts[j])) <= tol {
                return false;
            }
        }
    }
    match hull_barycentric(p, q, r) {
        Some((bary, offset)) => offset <= tol && bary.iter().all(|&l| l >= -tol),
        None => false,
    }
}

/// Outcome of [`separating_plane_probe`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub samples: u64,
    /// Planes with every point farther than [`PLANE_MARGIN`] from them.
    pub kept: u64,
    /// Kept planes splitting the points one against two.
    pub one_vs_two: u64,
    /// Kept planes with all three points on one side.
    pub one_side: u64,
    /// How often each point was the isolated one.
    pub isolated: [u64; 3],
    /// Every kept plane splits one against two and each point was isolated.
    pub consistent: bool,
}

const PROBE_CHUNK: u64 = 1024;

/// Samples plane normals uniformly on the unit sphere and classifies how
/// the planes through `C` split the three points. Chunk `c` of
/// [`PROBE_CHUNK`] samples uses stream `c` of a ChaCha generator seeded with
/// `seed`.
pub fn separating_plane_probe(
    p: &SpherePoint,
    q: &SpherePoint,
    r: &SpherePoint,
    samples: u64,
    seed: u64,
) -> ProbeReport {
    let pts = [p.offset(), q.offset(), r.offset()];
    let mut report = ProbeReport { samples, kept: 0, one_vs_two: 0, one_side: 0, isolated: [0; 3], consistent: false };
    let chunks = samples.div_ceil(PROBE_CHUNK);
    for c in 0..chunks {
        let mut rng = stream_rng(seed, c);
        let len = PROBE_CHUNK.min(samples - c * PROBE_CHUNK);
        for _ in 0..len {
            let n = random_unit(&mut rng);
            let s = pts.map(|x| dot(x, n));
            if s.iter().any(|v| v.abs() <= PLANE_MARGIN) {
                continue;
            }
            report.kept += 1;
            let pos = s.map(|v| v > 0.0);
            let count = pos.iter().filter(|&&b| b).count();
            match count {
                0 | 3 => report.one_side += 1,
                _ => {
                    report.one_vs_two += 1;
                    let idx = pos.iter().position(|&b| b == (count == 1)).expect("one point is alone");
                    report.isolated[idx] += 1;
                }
            }
        }
    }
    report.consistent = report.kept > 0 && report.one_side == 0 && report.isolated.iter().all(|&c| c > 0);
    report
}

/// Colors point `i` with 0 iff `(p_i − C)·normal > 0`.
pub fn hemisphere_coloring(points: &[SpherePoint], normal: [f64; 3]) -> Result<Coloring, SphereError> {
    let scale = norm(normal);
    let colors = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let s = dot(p.offset(), normal);
            if s.abs() <= PLANE_MARGIN * scale {
                Err(SphereError::PointOnPlane(i))
            } else {
                Ok(if s > 0.0 { 0 } else { 1 })
            }
        })
        .collect::<Result<Vec<u8>, _>>()?;
    Ok(Coloring::new(colors))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_unit(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = norm(v);
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

// ---------------------------------------------------------------------------
// Sampling suites.

/// Tolerance used by both decisions in the sampling suites.
pub const SUITE_TOL: f64 = 1e-9;

/// How a sampled triple was drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    /// Independent complex Gaussian coordinates.
    Generic,
    /// `(0,1), (s,1), (t,1)` with real `s, t`, moved by a random unitary and
    /// random complex scalings, so the triple product `1 + st` is real.
    Coplanar,
}

/// A sampled triple with both decisions and their distances to the
/// decision boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTriple {
    pub kind: SampleKind,
    pub vectors: [CVector; 3],
    pub algebraic: bool,
    pub geometric: bool,
    /// Inside the band where either decision is numerically ambiguous.
    pub in_band: bool,
}

/// Draws sample `index` of the suite seeded with `seed`; even indices are
/// generic, odd ones coplanar.
pub fn sample_triple(seed: u64, index: u64) -> SampledTriple {
    let mut rng = stream_rng(seed, index);
    let kind = if index.is_multiple_of(2) { SampleKind::Generic } else { SampleKind::Coplanar };
    let vectors = match kind {
        SampleKind::Generic => [(); 3].map(|_| gaussian_c2(&mut rng)),
        SampleKind::Coplanar => coplanar_triple(&mut rng),
    };
    classify(kind, vectors)
}

fn classify(kind: SampleKind, vectors: [CVector; 3]) -> SampledTriple {
    let [a, b, c] = &vectors;
    let algebraic = triple_product_negative(a, b, c, SUITE_TOL);
    let pts = [a, b, c].map(|v| phi(v).expect("sampled vectors are nonzero"));
    let geometric = center_in_hull(&pts[0], &pts[1], &pts[2], SUITE_TOL);

    let p = triple_product(a, b, c).expect("vectors share dimension 2");
    let scale = a.norm_sqr() * b.norm_sqr() * c.norm_sqr();
    let rel_im = p.im.abs() / p.norm();
    let ambiguous = |x: f64| (1e-12..1e-6).contains(&x);
    let mut in_band = p.norm() < 1e-9 * scale || ambiguous(rel_im);
    match hull_barycentric(&pts[0], &pts[1], &pts[2]) {
        Some((bary, offset)) => {
            in_band |= ambiguous(offset) || (offset < 1e-6 && bary.iter().any(|l| l.abs() < 1e-9));
        }
        None => in_band = true,
    }
    for i in 0..3 {
        for j in i + 1..3 {
            in_band |= ambiguous(pts[i].distance(&antipode(&pts[j])));
        }
    }
    SampledTriple { kind, vectors, algebraic, geometric, in_band }
}

fn gaussian_c(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_c2(rng: &mut impl Rng) -> CVector {
    loop {
        let v = CVector::new(vec![gaussian_c(rng), gaussian_c(rng)]);
        if v.norm() > 1e-12 {
            return v;
        }
    }
}

fn coplanar_triple(rng: &mut impl Rng) -> [CVector; 3] {
    let signed = |rng: &mut dyn rand::RngCore| {
        let mag: f64 = rng.sample::<f64, _>(StandardNormal).exp();
        if rng.random::<bool>() {
            mag
        } else {
            -mag
        }
    };
    let s = signed(rng);
    let t = signed(rng);
    // Haar-random unitary [[a, −b̄], [b, ā]] up to a phase.
    let (a, b) = loop {
        let (a, b) = (gaussian_c(rng), gaussian_c(rng));
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 1e-12 {
            break (a / n, b / n);
        }
    };
    let base = [(0.0, 1.0), (s, 1.0), (t, 1.0)];
    base.map(|(x, y)| {
        let z1 = a * x - b.conj() * y;
        let z2 = b * x + a.conj() * y;
        let lambda = loop {
            let l = gaussian_c(rng);
            if l.norm() > 1e-3 {
                break l;
            }
        };
        CVector::new(vec![z1 * lambda, z2 * lambda])
    })
}

/// Agreement of the algebraic and geometric conditions on sampled triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub seed: u64,
    pub samples: u64,
    pub generic: u64,
    pub coplanar: u64,
    /// Samples where both conditions hold.
    pub both_true: u64,
    pub agreements: u64,
    /// Disagreements outside the ambiguity band.
    pub disagreements: u64,
    pub in_band: u64,
    /// Indices of disagreeing samples outside the band.
    pub disagreeing: Vec<u64>,
}

impl EquivalenceReport {
    /// No disagreement outside the band and fewer than 0.1% of samples in it.
    pub fn pass(&self) -> bool {
        self.disagreements == 0 && self.in_band * 1000 < self.samples.max(1)
    }
}

pub fn equivalence_suite(samples: u64, seed: u64, exec: Execution) -> EquivalenceReport {
    let n = usize::try_from(samples).expect("sample count fits in usize");
    let rows = par::map_range(exec, n, |i| {
        let s = sample_triple(seed, i as u64);
        (s.kind, s.algebraic, s.geometric, s.in_band)
    });
    let mut report = EquivalenceReport {
        seed,
        samples,
        generic: 0,
        coplanar: 0,
        both_true: 0,
        agreements: 0,
        disagreements: 0,
        in_band: 0,
        disagreeing: Vec::new(),
    };
    for (i, (kind, alg, geo, band)) in rows.into_iter().enumerate() {
        match kind {
            SampleKind::Generic => report.generic += 1,
            SampleKind::Coplanar => report.coplanar += 1,
        }
        if band {
            report.in_band += 1;
        }
        if alg == geo {
            report.agreements += 1;
            if alg {
                report.both_true += 1;
            }
        } else if !band {
            report.disagreements += 1;
            report.disagreeing.push(i as u64);
        }
    }
    report
}

/// Probe outcomes against the hull decision on sampled triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSuiteReport {
    pub seed: u64,
    pub triples: u64,
    pub planes_per_triple: u64,
    pub hull_true: u64,
    pub hull_false: u64,
    /// Probe verdict equal to the hull decision.
    pub agreements: u64,
    /// Indices where they differ; the probe is one-sided, so these are logged.
    pub misses: Vec<u64>,
}

impl ProbeSuiteReport {
    pub fn agreement_rate(&self) -> f64 {
        if self.triples == 0 {
            1.0
        } else {
            self.agreements as f64 / self.triples as f64
        }
    }

    /// At least 99% agreement.
    pub fn pass(&self) -> bool {
        self.agreements * 100 >= self.triples * 99
    }
}

/// Probes sampled triples outside the ambiguity band. Triple `i` is the
/// `i`-th such sample of the equivalence sampler seeded with `seed`; when
/// that sample has index `k`, its probe is seeded with `seed + k + 1`.
pub fn probe_suite(triples: u64, planes: u64, seed: u64, exec: Execution) -> ProbeSuiteReport {
    let mut picked = Vec::new();
    let mut index = 0u64;
    while (picked.len() as u64) < triples {
        let s = sample_triple(seed, index);
        if !s.in_band {
            picked.push((index, s));
        }
        index += 1;
    }
    let outcomes = par::map_slice(exec, &picked, |(k, s)| {
        let pts = s.vectors.clone().map(|v| phi(&v).expect("sampled vectors are nonzero"));
        let probe = separating_plane_probe(&pts[0], &pts[1], &pts[2], planes, seed.wrapping_add(k + 1));
        (s.geometric, probe.consistent)
    });
    let mut report = ProbeSuiteReport {
        seed,
        triples,
        planes_per_triple: planes,
        hull_true: 0,
        hull_false: 0,
        agreements: 0,
        misses: Vec::new(),
    };
    for (i, (hull, consistent)) in outcomes.into_iter().enumerate() {
        if hull {
            report.hull_true += 1;
        } else {
            report.hull_false += 1;
        }
        if hull == consistent {
            report.agreements += 1;
        } else {
            report.misses.push(i as u64);
        }
    }
    report
}
