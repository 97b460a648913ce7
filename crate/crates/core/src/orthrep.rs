//! Orthogonal representations of incidence graphs of Steiner triple systems.
//!
//! For a system with `b` triples on `v` points, a representation in
//! dimension `b + n` is encoded by a `(b + n) × v` matrix whose columns are
//! the point vectors: the upper `b × v` block has the support of the
//! triple/point biadjacency matrix and the lower `n` rows hold a *tail
//! family* `u_1, …, u_v ∈ Cⁿ`. Triple vertices get the coordinate vectors
//! `e_1, …, e_b`.
//!
//! Two points share exactly one triple, so columns `i` and `j` overlap in a
//! single upper row `m` and are orthogonal iff `A_mi·conj(A_mj) = -⟨u_i, u_j⟩`.
//! Such a row exists for every triple `{i, j, k}` iff the product
//! `⟨u_i,u_j⟩⟨u_j,u_k⟩⟨u_k,u_i⟩` is real and negative, and [`complete_row`]
//! then writes it down explicitly.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, ClaimKind, FaithfulnessPayload, PairRecord, Payload, UpperBoundPayload};
use crate::designs::TripleSystem;
use crate::graphs::{biadjacency_pattern, incidence_graph, BipartitePattern, Graph};
use crate::linalg::{self, gram, inner, CMatrix, CVector, LinalgError, DEFAULT_RANK_TOL, DEFAULT_ZERO_TOL};
use crate::par::{self, Execution};
use crate::Complex64;

/// Relative tolerance of the triple condition and the column-orthogonality check.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Smallest accepted ratio between the weakest edge and the strongest non-edge.
pub const MIN_SEPARATION: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrthrepError {
    #[error("alpha = {alpha} outside the admissible open interval ({low:.6}, {high:.6})")]
    AlphaOutOfRange { alpha: f64, low: f64, high: f64 },
    #[error("tail family has {got} vectors for a system of order {expected}")]
    WrongCount { expected: usize, got: usize },
    #[error("tail vector {0} is zero")]
    ZeroVector(usize),
    #[error("triple {triple:?}: product of inner products {product} is not real and negative")]
    ConditionViolated { triple: [usize; 3], product: Complex64 },
    #[error("inner product of tail vectors {0} and {1} is zero")]
    ZeroInnerProduct(usize, usize),
    #[error("columns {i} and {j} are not orthogonal: relative residual {value:e}")]
    OrthogonalityResidual { i: usize, j: usize, value: f64 },
    #[error("representation is not faithful to the graph")]
    FaithfulnessFailure,
    #[error("representation target graph differs from the given graph")]
    GraphMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `⟨u_i,u_j⟩⟨u_j,u_k⟩⟨u_k,u_i⟩`.
pub fn triple_product(ui: &CVector, uj: &CVector, uk: &CVector) -> Result<Complex64, LinalgError> {
    Ok(inner(ui, uj)? * inner(uj, uk)? * inner(uk, ui)?)
}

/// Whether the triple product is real and negative: `|Im P| ≤ tol·|P|` and
/// `Re P < -tol·‖u_i‖²‖u_j‖²‖u_k‖²`. Mismatched dimensions count as false.
///
/// Both sides scale by `|λ|²` when one vector is multiplied by `λ ≠ 0`, so
/// the answer does not depend on the scaling of the vectors.
pub fn triple_product_negative(ui: &CVector, uj: &CVector, uk: &CVector, tol: f64) -> bool {
    match triple_product(ui, uj, uk) {
        Ok(p) => is_real_negative(p, tol * ui.norm_sqr() * uj.norm_sqr() * uk.norm_sqr(), tol),
        Err(_) => false,
    }
}

fn is_real_negative(p: Complex64, abs_tol: f64, tol: f64) -> bool {
    p.im.abs() <= tol * p.norm() && p.re < -abs_tol
}

/// Vectors `u_1, …, u_v` attached to the points of a triple system.
#[derive(Debug, Clone, PartialEq)]
pub struct TailFamily {
    system: TripleSystem,
    vectors: Vec<CVector>,
}

impl TailFamily {
    pub fn new(system: TripleSystem, vectors: Vec<CVector>) -> Result<Self, OrthrepError> {
        if vectors.len() != system.order() {
            return Err(OrthrepError::WrongCount { expected: system.order(), got: vectors.len() });
        }
        let dim = vectors[0].dim();
        if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(LinalgError::DimensionMismatch(dim, bad.dim()).into());
        }
        if dim == 0 {
            return Err(OrthrepError::ZeroVector(1));
        }
        if let Some(i) = vectors.iter().position(CVector::is_zero) {
            return Err(OrthrepError::ZeroVector(i + 1));
        }
        Ok(Self { system, vectors })
    }

    pub fn system(&self) -> &TripleSystem {
        &self.system
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    /// Vector of point `p` (1-based).
    pub fn vector(&self, p: usize) -> &CVector {
        &self.vectors[p - 1]
    }

    /// Triple products, one per triple, with points taken in ascending order.
    pub fn triple_products(&self) -> Vec<Complex64> {
        self.system
            .triples()
            .iter()
            .map(|&[i, j, k]| {
                triple_product(self.vector(i), self.vector(j), self.vector(k))
                    .expect("common dimension checked on construction")
            })
            .collect()
    }

    /// First triple violating the condition, if any.
    pub fn first_violation(&self, tol: f64) -> Option<[usize; 3]> {
        self.system
            .triples()
            .iter()
            .find(|&&[i, j, k]| !triple_product_negative(self.vector(i), self.vector(j), self.vector(k), tol))
            .copied()
    }

    pub fn satisfies_conditions(&self, tol: f64) -> bool {
        self.first_violation(tol).is_none()
    }
}

/// Open interval of admissible `α` for [`heptagonal_family`].
pub fn alpha_interval() -> (f64, f64) {
    ((3.0 * PI / 7.0).cos(), (PI / 7.0).cos())
}

/// Midpoint of [`alpha_interval`].
pub fn default_alpha() -> f64 {
    let (lo, hi) = alpha_interval();
    (lo + hi) / 2.0
}

/// `u_j = (cos(2πj/7), sin(2πj/7), √α)` over the Fano plane.
///
/// `⟨u_j, u_k⟩ = cos(2π(j−k)/7) + α` depends only on `j − k mod 7`, and
/// every Fano line has the difference set `{±1, ±4, ±5}`; inside the
/// interval the three inner products along a line have signs `+, −, +`.
pub fn heptagonal_family(alpha: f64) -> Result<TailFamily, OrthrepError> {
    let (low, high) = alpha_interval();
    if !(alpha > low && alpha < high) {
        return Err(OrthrepError::AlphaOutOfRange { alpha, low, high });
    }
    let vectors = (1..=7)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / 7.0;
            CVector::from_real(&[t.cos(), t.sin(), alpha.sqrt()])
        })
        .collect();
    TailFamily::new(TripleSystem::fano(), vectors)
}

/// Nonzero entries `(a_i, a_j, a_k)` of the upper row for the triple
/// `i < j < k`, satisfying `a_x·conj(a_y) = -⟨u_x, u_y⟩` for all three pairs.
/// `a_j` is taken positive real.
pub fn complete_row(
    ui: &CVector,
    uj: &CVector,
    uk: &CVector,
) -> Result<(Complex64, Complex64, Complex64), OrthrepError> {
    complete_row_labeled([1, 2, 3], ui, uj, uk, DEFAULT_TOL)
}

fn complete_row_labeled(
    triple: [usize; 3],
    ui: &CVector,
    uj: &CVector,
    uk: &CVector,
    tol: f64,
) -> Result<(Complex64, Complex64, Complex64), OrthrepError> {
    let [i, j, k] = triple;
    let ij = inner(ui, uj)?;
    let jk = inner(uj, uk)?;
    let ki = inner(uk, ui)?;
    for (z, a, b) in [(ij, i, j), (jk, j, k), (ki, k, i)] {
        if z == Complex64::new(0.0, 0.0) {
            return Err(OrthrepError::ZeroInnerProduct(a.min(b), a.max(b)));
        }
    }
    let product = ij * jk * ki;
    let abs_tol = tol * ui.norm_sqr() * uj.norm_sqr() * uk.norm_sqr();
    if !is_real_negative(product, abs_tol, tol) {
        return Err(OrthrepError::ConditionViolated { triple, product });
    }
    let aj = (-product.re / ki.norm_sqr()).sqrt();
    let ai = -ij / aj;
    let ak = ki / ij.conj() * aj;
    Ok((ai, Complex64::new(aj, 0.0), ak))
}

/// A verified `(b + n) × v` matrix with mutually orthogonal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationMatrix {
    a: CMatrix,
    pattern: BipartitePattern,
    system: TripleSystem,
    max_residual: f64,
}

impl RepresentationMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    pub fn pattern(&self) -> &BipartitePattern {
        &self.pattern
    }

    pub fn system(&self) -> &TripleSystem {
        &self.system
    }

    /// Largest relative column-pair residual `|⟨c_i,c_j⟩| / (‖c_i‖‖c_j‖)`.
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    /// Lower `n` rows as a tail family.
    pub fn tail(&self) -> TailFamily {
        let b = self.pattern.rows();
        let vectors =
            (0..self.a.cols()).map(|c| CVector::new((b..self.a.rows()).map(|r| self.a[(r, c)]).collect())).collect();
        TailFamily::new(self.system.clone(), vectors).expect("columns of a verified matrix are nonzero")
    }

    /// Checks a matrix against a system: shape, support of the upper block,
    /// and column orthogonality within `tol`.
    pub fn from_matrix(system: TripleSystem, a: CMatrix, tol: f64) -> Result<Self, OrthrepError> {
        let pattern = biadjacency_pattern(&system);
        let (b, v) = (pattern.rows(), pattern.cols());
        if a.cols() != v {
            return Err(LinalgError::DimensionMismatch(a.cols(), v).into());
        }
        if a.rows() <= b {
            return Err(LinalgError::DimensionMismatch(a.rows(), b + 1).into());
        }
        for r in 0..b {
            for c in 0..v {
                let nonzero = a[(r, c)] != Complex64::new(0.0, 0.0);
                if nonzero != pattern.contains(r, c) {
                    let t = system.triples()[r];
                    return Err(OrthrepError::ConditionViolated { triple: t, product: Complex64::new(f64::NAN, 0.0) });
                }
            }
        }
        let max_residual = check_orthogonal(&a, tol)?;
        Ok(Self { a, pattern, system, max_residual })
    }

    /// Rederives each triple condition from the matrix entries: with
    /// orthogonal columns the tail product equals `-|a_i|²|a_j|²|a_k|²`.
    /// Returns one `(tail product, entry product)` pair per triple after
    /// checking both agree within `tol` and are real and negative.
    pub fn rederive_conditions(&self, tol: f64) -> Result<Vec<(Complex64, f64)>, OrthrepError> {
        let tail = self.tail();
        let products = tail.triple_products();
        let mut out = Vec::with_capacity(products.len());
        for (m, (&t, p)) in self.system.triples().iter().zip(products).enumerate() {
            let entries = -t.iter().map(|&x| self.a[(m, x - 1)].norm_sqr()).product::<f64>();
            let [i, j, k] = t;
            let scale = tail.vector(i).norm_sqr() * tail.vector(j).norm_sqr() * tail.vector(k).norm_sqr();
            if (p - entries).norm() > tol * scale.max(entries.abs())
                || !triple_product_negative(tail.vector(i), tail.vector(j), tail.vector(k), tol)
            {
                return Err(OrthrepError::ConditionViolated { triple: t, product: p });
            }
            out.push((p, entries));
        }
        Ok(out)
    }
}

fn check_orthogonal(a: &CMatrix, tol: f64) -> Result<f64, OrthrepError> {
    let cols = a.columns();
    let mut worst = 0.0f64;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let scale = cols[i].norm() * cols[j].norm();
            let value = inner(&cols[i], &cols[j])?.norm() / scale;
            if value.is_nan() || value > tol {
                return Err(OrthrepError::OrthogonalityResidual { i: i + 1, j: j + 1, value });
            }
            worst = worst.max(value);
        }
    }
    Ok(worst)
}

/// Builds the matrix from a tail family satisfying every triple condition,
/// then verifies all column pairs are orthogonal within `tol` (relative).
pub fn assemble(sys: &TripleSystem, tail: &TailFamily, tol: f64) -> Result<RepresentationMatrix, OrthrepError> {
    if tail.system() != sys {
        return Err(OrthrepError::WrongCount { expected: sys.order(), got: tail.vectors().len() });
    }
    let pattern = biadjacency_pattern(sys);
    let (b, v, n) = (sys.num_triples(), sys.order(), tail.dim());
    let mut a = CMatrix::zeros(b + n, v);
    for (m, &t) in sys.triples().iter().enumerate() {
        let [i, j, k] = t;
        let (ai, aj, ak) = complete_row_labeled(t, tail.vector(i), tail.vector(j), tail.vector(k), tol)?;
        a[(m, i - 1)] = ai;
        a[(m, j - 1)] = aj;
        a[(m, k - 1)] = ak;
    }
    for (c, u) in tail.vectors().iter().enumerate() {
        for (r, &z) in u.entries().iter().enumerate() {
            a[(b + r, c)] = z;
        }
    }
    let max_residual = check_orthogonal(&a, tol)?;
    Ok(RepresentationMatrix { a, pattern, system: sys.clone(), max_residual })
}

/// One vector per vertex of a target graph.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthRepresentation {
    graph: Graph,
    vectors: Vec<CVector>,
}

impl OrthRepresentation {
    pub fn new(graph: Graph, vectors: Vec<CVector>) -> Result<Self, OrthrepError> {
        if vectors.len() != graph.n() {
            return Err(OrthrepError::WrongCount { expected: graph.n(), got: vectors.len() });
        }
        if let Some(first) = vectors.first() {
            if let Some(bad) = vectors.iter().find(|v| v.dim() != first.dim()) {
                return Err(LinalgError::DimensionMismatch(first.dim(), bad.dim()).into());
            }
        }
        Ok(Self { graph, vectors })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, CVector::dim)
    }
}

/// Point vertices get the columns, triple vertices the coordinate vectors
/// `e_1, …, e_b`, in the vertex order of [`incidence_graph`].
pub fn representation_from_matrix(m: &RepresentationMatrix) -> OrthRepresentation {
    let d = m.a.rows();
    let vectors = m.a.columns().into_iter().chain((0..m.system.num_triples()).map(|t| CVector::basis(d, t))).collect();
    OrthRepresentation { graph: incidence_graph(&m.system), vectors }
}

/// Pairwise magnitudes of the normalized vectors against the graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaithfulnessReport {
    pub pairs: Vec<PairRecord>,
    /// Weakest edge magnitude; `None` without edges.
    pub min_on: Option<f64>,
    /// Strongest non-edge magnitude; `None` without non-edges.
    pub max_off: Option<f64>,
    /// `min_on / max_off`; `None` when unbounded.
    pub separation: Option<f64>,
    pub pass: bool,
}

/// Compares `|⟨r̂(u), r̂(v)⟩|` of normalized vectors with the adjacency of
/// `graph`. Passes iff every edge exceeds `tol`, every non-edge is at most
/// `tol`, and the separation ratio is at least [`MIN_SEPARATION`].
pub fn faithfulness_report(graph: &Graph, vectors: &[CVector], tol: f64) -> FaithfulnessReport {
    let unit: Vec<CVector> = vectors.iter().map(CVector::normalized).collect();
    let n = graph.n().min(unit.len());
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    let (mut min_on, mut max_off) = (None::<f64>, None::<f64>);
    for i in 0..n {
        for j in i + 1..n {
            let magnitude = linalg::dot(unit[i].entries(), unit[j].entries()).norm();
            let edge = graph.has_edge(i, j);
            if edge {
                min_on = Some(min_on.map_or(magnitude, |m| m.min(magnitude)));
            } else {
                max_off = Some(max_off.map_or(magnitude, |m| m.max(magnitude)));
            }
            pairs.push(PairRecord { i, j, magnitude, edge });
        }
    }
    let separation = match (min_on, max_off) {
        (Some(on), Some(off)) if off > 0.0 => Some(on / off),
        _ => None,
    };
    let pass = unit.len() == graph.n()
        && unit.iter().all(|u| u.dim() == unit[0].dim())
        && min_on.is_none_or(|m| m > tol)
        && max_off.is_none_or(|m| m <= tol)
        && separation.is_none_or(|s| s >= MIN_SEPARATION);
    FaithfulnessReport { pairs, min_on, max_off, separation, pass }
}

/// Faithfulness certificate; failures are recorded as a failing verdict.
pub fn verify_faithful(rep: &OrthRepresentation, tol: f64) -> Certificate {
    let report = faithfulness_report(&rep.graph, &rep.vectors, tol);
    let pass = report.pass;
    Certificate::seal(
        ClaimKind::Faithfulness,
        rep.graph.to_graph6(),
        rep.dim(),
        tol,
        Payload::Faithfulness(FaithfulnessPayload { vectors: rep.vectors.iter().map(vector_pairs).collect(), report }),
        pass,
    )
}

pub(crate) fn vector_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.entries().iter().map(|z| [z.re, z.im]).collect()
}

/// Certificate of `msr(g) ≤ rank(gram(rep))`.
pub fn msr_upper_certificate(g: &Graph, rep: &OrthRepresentation, tol: f64) -> Result<Certificate, OrthrepError> {
    if rep.graph() != g {
        return Err(OrthrepError::GraphMismatch);
    }
    let report = faithfulness_report(g, &rep.vectors, tol);
    if !report.pass {
        return Err(OrthrepError::FaithfulnessFailure);
    }
    let gm = gram(&rep.vectors)?;
    let rank = gm.rank(DEFAULT_RANK_TOL)?;
    let psd = gm.is_psd(1e-9)?;
    Ok(Certificate::seal(
        ClaimKind::UpperBound,
        g.to_graph6(),
        rep.dim(),
        tol,
        Payload::UpperBound(UpperBoundPayload {
            vectors: rep.vectors.iter().map(vector_pairs).collect(),
            gram: gm.as_matrix().to_pairs(),
            rank_tol: DEFAULT_RANK_TOL,
            rank,
            psd,
            min_on: report.min_on,
            max_off: report.max_off,
            separation: report.separation,
            bound: rank,
        }),
        psd,
    ))
}

/// Heawood representation from the heptagonal family with parameter `alpha`.
pub fn heawood_representation(alpha: f64) -> Result<(RepresentationMatrix, OrthRepresentation), OrthrepError> {
    let tail = heptagonal_family(alpha)?;
    let m = assemble(&TripleSystem::fano(), &tail, DEFAULT_TOL)?;
    let rep = representation_from_matrix(&m);
    Ok((m, rep))
}

/// Default tolerance of [`random_tail_search`].
pub const SEARCH_TOL: f64 = 1e-9;

/// Random search for a tail family in dimension `dim`.
///
/// Trial `t` draws every coordinate uniformly from the complex unit disc
/// using stream `t` of a ChaCha generator seeded with `seed`, and the
/// lowest successful trial is returned. In dimension 1 the product is
/// `|x|²|y|²|z|² > 0`, so nothing is ever found.
pub fn random_tail_search(sys: &TripleSystem, dim: usize, trials: u64, seed: u64) -> Option<TailFamily> {
    random_tail_search_with(sys, dim, trials, seed, Execution::default())
}

pub fn random_tail_search_with(
    sys: &TripleSystem,
    dim: usize,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Option<TailFamily> {
    assert!(dim >= 1, "tail dimension must be positive");
    let trials = usize::try_from(trials).expect("trial count fits in usize");
    let (_, vectors) = par::find_map_first(exec, trials, |t| tail_trial(sys, dim, seed, t as u64))?;
    Some(TailFamily::new(sys.clone(), vectors).expect("sampled vectors are nonzero"))
}

/// Deterministic vectors of trial `trial`, returned if they satisfy every
/// triple condition.
fn tail_trial(sys: &TripleSystem, dim: usize, seed: u64, trial: u64) -> Option<Vec<CVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let vectors: Vec<CVector> =
        (0..sys.order()).map(|_| CVector::new((0..dim).map(|_| unit_disc(&mut rng)).collect())).collect();
    sys.triples()
        .iter()
        .all(|&[i, j, k]| triple_product_negative(&vectors[i - 1], &vectors[j - 1], &vectors[k - 1], SEARCH_TOL))
        .then_some(vectors)
}

fn unit_disc(rng: &mut impl Rng) -> Complex64 {
    let r = rng.random::<f64>().sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    Complex64::from_polar(r, theta)
}

/// Default zero threshold for faithfulness checks.
pub const FAITHFUL_TOL: f64 = DEFAULT_ZERO_TOL;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::graph_of_matrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn heptagonal_inner(d: i32, alpha: f64) -> f64 {
        (2.0 * PI * d as f64 / 7.0).cos() + alpha
    }

    #[test]
    fn alpha_bounds() {
        let (lo, hi) = alpha_interval();
        assert!((lo - 0.2225).abs() < 1e-4 && (hi - 0.9010).abs() < 1e-4);
        assert!((default_alpha() - 0.5617).abs() < 1e-4);
        for bad in [1.0, lo, hi, 0.0, f64::NAN] {
            assert!(matches!(heptagonal_family(bad), Err(OrthrepError::AlphaOutOfRange { .. })));
        }
        let msg = heptagonal_family(1.5).unwrap_err().to_string();
        assert!(msg.contains("0.222521") && msg.contains("0.900969"), "{msg}");
    }

    #[test]
    fn heptagonal_products() {
        let alpha = default_alpha();
        let f = heptagonal_family(alpha).unwrap();
        let u = |j| f.vector(j);
        let ip = |a, b| inner(u(a), u(b)).unwrap();
        assert!((ip(1, 2).re - heptagonal_inner(1, alpha)).abs() < 1e-12);
        assert!((ip(1, 2).re - 1.1852).abs() < 1e-4);
        assert!((ip(1, 2) - ip(2, 3)).norm() < 1e-12);
        assert!((ip(2, 6).re + 0.3392).abs() < 1e-4);
        assert!((ip(6, 1).re - 0.3392).abs() < 1e-4);
        let p = triple_product(u(1), u(2), u(6)).unwrap();
        let expect = heptagonal_inner(1, alpha) * heptagonal_inner(4, alpha) * heptagonal_inner(5, alpha);
        assert!((p.re - expect).abs() < 1e-12 && (p.re + 0.1364).abs() < 1e-4);
        assert!(f.satisfies_conditions(DEFAULT_TOL));
    }

    #[test]
    fn fano_line_differences() {
        // Up to sign, the classes ±1, ±4, ±5 are the nonzero residues mod 7.
        let class = |d: usize| [1, 4, 5].into_iter().find(|&c| d % 7 == c || (7 - d % 7) == c).unwrap();
        for t in TripleSystem::fano().triples() {
            let mut d = vec![class(t[1] - t[0]), class(t[2] - t[1]), class(t[2] - t[0])];
            d.sort_unstable();
            assert_eq!(d, vec![1, 4, 5], "line {t:?}");
        }
    }

    #[test]
    fn triple_condition_examples() {
        let e1 = CVector::basis(2, 0);
        assert!(!triple_product_negative(&e1, &e1, &e1, DEFAULT_TOL));
        let ui = CVector::from_real(&[0.0, 1.0]);
        let uj = CVector::from_real(&[1.0, 1.0]);
        let uk = CVector::from_real(&[-2.0, 1.0]);
        assert!((triple_product(&ui, &uj, &uk).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(triple_product_negative(&ui, &uj, &uk, DEFAULT_TOL));
        // Complex scalings leave the verdict unchanged.
        let s = c(0.3, -2.0);
        assert!(triple_product_negative(&ui.scaled(s), &uj, &uk.scaled(c(0.0, 5.0)), DEFAULT_TOL));
        // A non-real product fails.
        let uk = CVector::new(vec![c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(!triple_product_negative(&ui, &uj, &uk, DEFAULT_TOL));
        assert!(!triple_product_negative(&ui, &uj, &CVector::basis(3, 0), DEFAULT_TOL));
    }

    #[test]
    fn row_completion() {
        let f = heptagonal_family(default_alpha()).unwrap();
        let (a1, a2, a6) = complete_row(f.vector(1), f.vector(2), f.vector(6)).unwrap();
        assert!(a1.im == 0.0 && a2.im == 0.0 && a6.im == 0.0);
        let ip = |a, b| inner(f.vector(a), f.vector(b)).unwrap();
        assert!((a1 * a2 + ip(1, 2)).norm() < 1e-10);
        assert!((a1 * a2).re + 1.1852 < 1e-4);
        assert!((a2 * a6.conj() + ip(2, 6)).norm() < 1e-10);
        assert!((a6 * a1.conj() + ip(6, 1)).norm() < 1e-10);
        let p = triple_product(f.vector(1), f.vector(2), f.vector(6)).unwrap();
        assert!((a2.norm_sqr() + p.re / ip(1, 6).norm_sqr()).abs() < 1e-12);

        // Complex input: the three pair identities still hold.
        let ui = CVector::from_real(&[0.0, 1.0]).scaled(c(0.0, 1.0));
        let uj = CVector::from_real(&[1.0, 1.0]).scaled(c(2.0, -1.0));
        let uk = CVector::from_real(&[-2.0, 1.0]).scaled(c(0.5, 3.0));
        let (ai, aj, ak) = complete_row(&ui, &uj, &uk).unwrap();
        assert!((ai * aj.conj() + inner(&ui, &uj).unwrap()).norm() < 1e-10);
        assert!((aj * ak.conj() + inner(&uj, &uk).unwrap()).norm() < 1e-10);
        assert!((ak * ai.conj() + inner(&uk, &ui).unwrap()).norm() < 1e-10);

        let e1 = CVector::basis(2, 0);
        assert!(matches!(complete_row(&e1, &e1, &e1), Err(OrthrepError::ConditionViolated { .. })));
        let e2 = CVector::basis(2, 1);
        assert!(matches!(complete_row(&e1, &e2, &e1), Err(OrthrepError::ZeroInnerProduct(1, 2))));
    }

    #[test]
    fn heawood_assembly() {
        let (m, rep) = heawood_representation(default_alpha()).unwrap();
        assert_eq!((m.matrix().rows(), m.matrix().cols()), (10, 7));
        assert!(m.matrix().is_real());
        assert!(m.max_residual() < 1e-10);
        assert_eq!(m.tail(), heptagonal_family(default_alpha()).unwrap());
        assert_eq!(m.rederive_conditions(DEFAULT_TOL).unwrap().len(), 7);
        for c in m.matrix().columns() {
            assert!(c.norm_sqr() > 0.0);
        }
        assert_eq!(rep.dim(), 10);
        let g = gram(rep.vectors()).unwrap();
        assert_eq!(g.rank(1e-8).unwrap(), 10);
        let heawood = incidence_graph(&TripleSystem::fano());
        assert_eq!(graph_of_matrix(&g, DEFAULT_ZERO_TOL), heawood);
        assert!(verify_faithful(&rep, FAITHFUL_TOL).verdict.is_pass());
        let cert = msr_upper_certificate(&heawood, &rep, FAITHFUL_TOL).unwrap();
        match &cert.payload {
            Payload::UpperBound(p) => assert_eq!(p.bound, 10),
            other => panic!("unexpected payload {other:?}"),
        }
        let again = RepresentationMatrix::from_matrix(TripleSystem::fano(), m.matrix().clone(), DEFAULT_TOL).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn assembly_rejects_orthogonal_tail() {
        let tail = TailFamily::new(TripleSystem::fano(), (0..7).map(|i| CVector::basis(7, i)).collect()).unwrap();
        assert!(matches!(
            assemble(&TripleSystem::fano(), &tail, DEFAULT_TOL),
            Err(OrthrepError::ZeroInnerProduct(..) | OrthrepError::ConditionViolated { .. })
        ));
    }

    #[test]
    fn faithfulness_verdicts() {
        let (_, rep) = heawood_representation(default_alpha()).unwrap();
        let mut vectors = rep.vectors().to_vec();
        vectors[0] = CVector::zeros(10);
        let broken = OrthRepresentation::new(rep.graph().clone(), vectors).unwrap();
        assert!(!verify_faithful(&broken, FAITHFUL_TOL).verdict.is_pass());

        let empty = OrthRepresentation::new(Graph::empty(4), (0..4).map(|i| CVector::basis(4, i)).collect()).unwrap();
        assert!(verify_faithful(&empty, FAITHFUL_TOL).verdict.is_pass());
        let cert = msr_upper_certificate(&Graph::empty(4), &empty, FAITHFUL_TOL).unwrap();
        assert!(matches!(&cert.payload, Payload::UpperBound(p) if p.bound == 4));

        let k2 = Graph::path(2);
        let ones = OrthRepresentation::new(k2.clone(), vec![CVector::from_real(&[1.0]); 2]).unwrap();
        let cert = msr_upper_certificate(&k2, &ones, FAITHFUL_TOL).unwrap();
        assert!(matches!(&cert.payload, Payload::UpperBound(p) if p.bound == 1));
        assert_eq!(msr_upper_certificate(&k2, &broken, FAITHFUL_TOL).unwrap_err(), OrthrepError::GraphMismatch);
    }

    #[test]
    fn tail_search_small_cases() {
        let single = TripleSystem::new(3, [[1, 2, 3]]).unwrap();
        // Dimension 1: the product is |x|²|y|²|z|², never negative.
        assert!(random_tail_search(&single, 1, 2000, 7).is_none());
        // Complex samples make the product real only on a null set.
        let seq = random_tail_search_with(&single, 2, 2000, 7, Execution::Sequential);
        assert_eq!(seq, random_tail_search_with(&single, 2, 2000, 7, Execution::Parallel));
        assert!(random_tail_search(&TripleSystem::fano(), 2, 20_000, 1).is_none());
    }
}
