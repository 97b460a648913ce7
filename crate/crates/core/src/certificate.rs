//! Serializable, re-checkable records of verified claims.
//!
//! A certificate stores the inputs and results of a check together with a
//! SHA-256 digest of its canonical JSON form (the same JSON with an empty
//! `digest`). [`check`] verifies the digest, reruns the check from the
//! payload alone and compares the outcome with the stored verdict.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::designs::TripleSystem;
use crate::graphs::{incidence_graph, incidence_orbits, Graph};
use crate::linalg::{gram, graph_of_matrix, CMatrix, CVector, HermitianMatrix};
use crate::orthrep::{faithfulness_report, FaithfulnessReport};
use crate::par::Execution;
use crate::sphere::{equivalence_suite, probe_suite, EquivalenceReport, ProbeSuiteReport};
use crate::zeroforcing::{is_forcing_set, min_forcing, min_forcing_with, ForcingResult, ForcingVariant, SearchOptions};
use crate::{Complex64, TOOL_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Vectors realize a graph as an orthogonal representation.
    Faithfulness,
    /// `msr(G) ≤ rank` of a faithful Gram matrix.
    UpperBound,
    /// `msr(G) ≥ b + 3` for the incidence graph of a triple system that has
    /// no weak 2-coloring, from finitely checkable links plus proven lemmas.
    LowerBoundChain,
    /// One row of the zero forcing comparison table.
    TableRow,
    /// Minimum rank from a shifted adjacency rank and a forcing bound.
    Spectral,
}

impl std::fmt::Display for ClaimKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClaimKind::Faithfulness => "faithfulness",
            ClaimKind::UpperBound => "upper-bound",
            ClaimKind::LowerBoundChain => "lower-bound-chain",
            ClaimKind::TableRow => "table-row",
            ClaimKind::Spectral => "spectral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.is_pass() { "pass" } else { "fail" })
    }
}

/// Complex entries as `[re, im]` pairs.
pub type PairRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub magnitude: f64,
    pub edge: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaithfulnessPayload {
    /// One vector per vertex.
    pub vectors: PairRows,
    pub report: FaithfulnessReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundPayload {
    pub vectors: PairRows,
    pub gram: PairRows,
    pub rank_tol: f64,
    pub rank: usize,
    pub psd: bool,
    pub min_on: Option<f64>,
    pub max_off: Option<f64>,
    pub separation: Option<f64>,
    /// Asserted `msr(G) ≤ bound`.
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailSearchRecord {
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub found: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerChainPayload {
    pub order: usize,
    pub triples: Vec<[usize; 3]>,
    /// 2-colorings of the points examined.
    pub colorings_checked: u64,
    /// Colorings without a monochromatic triple.
    pub weak_colorings: u64,
    pub equivalence: EquivalenceReport,
    pub probes: ProbeSuiteReport,
    pub tail_search: TailSearchRecord,
    pub budget: Option<u64>,
    pub zero_forcing: ForcingResult,
    /// `n − Z₊` when the forcing number is exact.
    pub zero_forcing_bound: Option<usize>,
    /// `b + 3`: tail families in C² are ruled out.
    pub asserted_bound: usize,
    /// Links that hold by proof and are only property-tested here.
    pub assumed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemForcing {
    pub triples: Vec<[usize; 3]>,
    pub forcing: ForcingResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRowPayload {
    pub order: usize,
    pub num_triples: usize,
    pub n: usize,
    pub budget: Option<u64>,
    /// Seed of the heuristic witnesses.
    pub seed: u64,
    pub systems: Vec<SystemForcing>,
    /// Common forcing-set size; `None` when the systems differ.
    pub z_plus: Option<usize>,
    /// Every system's size is proven minimum.
    pub exact: bool,
    /// `n − Z₊`.
    pub zero_forcing_bound: Option<usize>,
    /// `b + 3`.
    pub msr_lower_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPayload {
    pub spectrum: Vec<f64>,
    pub lambda: f64,
    pub multiplicity_tol: f64,
    pub multiplicity: usize,
    pub rank_tol: f64,
    /// `rank(A − λI)`, an upper bound on the minimum rank.
    pub shifted_rank: usize,
    pub budget: Option<u64>,
    pub forcing: ForcingResult,
    /// `n − Z`, a lower bound on the minimum rank when `forcing.exact`.
    pub forcing_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum Payload {
    Faithfulness(FaithfulnessPayload),
    UpperBound(UpperBoundPayload),
    LowerBoundChain(LowerChainPayload),
    TableRow(TableRowPayload),
    Spectral(SpectralPayload),
}

impl Payload {
    pub fn kind(&self) -> ClaimKind {
        match self {
            Payload::Faithfulness(_) => ClaimKind::Faithfulness,
            Payload::UpperBound(_) => ClaimKind::UpperBound,
            Payload::LowerBoundChain(_) => ClaimKind::LowerBoundChain,
            Payload::TableRow(_) => ClaimKind::TableRow,
            Payload::Spectral(_) => ClaimKind::Spectral,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub kind: ClaimKind,
    pub graph6: String,
    pub dimension: usize,
    pub tolerance: f64,
    pub payload: Payload,
    pub verdict: Verdict,
    pub tool_version: String,
    pub digest: String,
}

/// Borrowed [`Certificate`] with an empty digest; serializes identically.
#[derive(Serialize)]
struct Unsealed<'a> {
    kind: ClaimKind,
    graph6: &'a str,
    dimension: usize,
    tolerance: f64,
    payload: &'a Payload,
    verdict: Verdict,
    tool_version: &'a str,
    digest: &'a str,
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate schema error: {0}")]
    Schema(String),
    #[error("digest mismatch: stored {stored}, computed {computed}")]
    DigestMismatch { stored: String, computed: String },
    #[error("verdict mismatch: stored {stored}, recomputed {recomputed} ({reasons})", reasons = .reasons.join("; "))]
    VerdictMismatch { stored: Verdict, recomputed: Verdict, reasons: Vec<String> },
}

/// Outcome of a successful [`check`]: the recomputed verdict equals the
/// stored one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub kind: ClaimKind,
    pub verdict: Verdict,
    /// Failed sub-checks behind a failing verdict.
    pub reasons: Vec<String>,
}

impl Certificate {
    /// Assembles a certificate and fills in its digest.
    pub fn seal(
        kind: ClaimKind,
        graph6: String,
        dimension: usize,
        tolerance: f64,
        payload: Payload,
        pass: bool,
    ) -> Self {
        debug_assert_eq!(kind, payload.kind());
        let mut cert = Self {
            kind,
            graph6,
            dimension,
            tolerance,
            payload,
            verdict: Verdict::from_bool(pass),
            tool_version: TOOL_VERSION.to_string(),
            digest: String::new(),
        };
        cert.digest = cert.compute_digest();
        cert
    }

    /// Recomputes and stores the digest.
    pub fn reseal(&mut self) {
        self.digest = self.compute_digest();
    }

    /// SHA-256 of the JSON with an empty digest field.
    pub fn compute_digest(&self) -> String {
        let blank = Unsealed {
            kind: self.kind,
            graph6: &self.graph6,
            dimension: self.dimension,
            tolerance: self.tolerance,
            payload: &self.payload,
            verdict: self.verdict,
            tool_version: &self.tool_version,
            digest: "",
        };
        let text = serde_json::to_string(&blank).expect("certificates serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let cert: Self = serde_json::from_str(text).map_err(|e| CertificateError::Schema(e.to_string()))?;
        if cert.kind != cert.payload.kind() {
            return Err(CertificateError::Schema(format!(
                "kind {} does not match a {} payload",
                cert.kind,
                cert.payload.kind()
            )));
        }
        if cert.digest.len() != 64 || !cert.digest.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(CertificateError::Schema("digest is not a SHA-256 hex string".into()));
        }
        Ok(cert)
    }
}

/// Parses and checks a certificate.
pub fn check_json(text: &str) -> Result<CheckReport, CertificateError> {
    check(&Certificate::from_json(text)?)
}

/// Verifies the digest, reruns the check from the payload and compares
/// verdicts.
pub fn check(cert: &Certificate) -> Result<CheckReport, CertificateError> {
    let computed = cert.compute_digest();
    if computed != cert.digest {
        return Err(CertificateError::DigestMismatch { stored: cert.digest.clone(), computed });
    }
    if cert.kind != cert.payload.kind() {
        return Err(CertificateError::Schema("kind does not match payload".into()));
    }
    let reasons = recheck(cert);
    let recomputed = Verdict::from_bool(reasons.is_empty());
    if recomputed != cert.verdict {
        return Err(CertificateError::VerdictMismatch { stored: cert.verdict, recomputed, reasons });
    }
    Ok(CheckReport { kind: cert.kind, verdict: recomputed, reasons })
}

/// Failed sub-checks of a certificate; empty means the claim holds.
fn recheck(cert: &Certificate) -> Vec<String> {
    let mut fails = Vec::new();
    let graph = match Graph::from_graph6(&cert.graph6) {
        Ok(g) => g,
        Err(e) => return vec![format!("graph6: {e}")],
    };
    match &cert.payload {
        Payload::Faithfulness(p) => recheck_faithfulness(cert, &graph, p, &mut fails),
        Payload::UpperBound(p) => recheck_upper(cert, &graph, p, &mut fails),
        Payload::LowerBoundChain(p) => recheck_chain(&graph, p, &mut fails),
        Payload::TableRow(p) => recheck_table_row(&graph, p, &mut fails),
        Payload::Spectral(p) => recheck_spectral(&graph, p, &mut fails),
    }
    fails
}

fn require(fails: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        fails.push(what.into());
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn close_opt(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => close(x, y, tol),
        (None, None) => true,
        _ => false,
    }
}

fn parse_vectors(rows: &PairRows) -> Vec<CVector> {
    rows.iter().map(|r| CVector::new(r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())).collect()
}

/// Recorded floating-point values must be reproduced to this relative accuracy.
const RECORD_TOL: f64 = 1e-12;

fn recheck_faithfulness(cert: &Certificate, graph: &Graph, p: &FaithfulnessPayload, fails: &mut Vec<String>) {
    let vectors = parse_vectors(&p.vectors);
    require(fails, vectors.len() == graph.n(), "one vector per vertex");
    require(fails, vectors.iter().all(|v| v.dim() == cert.dimension), "vector dimension");
    let fresh = faithfulness_report(graph, &vectors, cert.tolerance);
    require(fails, fresh.pass, "representation is faithful");
    require(fails, fresh.pass == p.report.pass, "recorded faithfulness verdict");
    require(
        fails,
        fresh.pairs.len() == p.report.pairs.len()
            && fresh.pairs.iter().zip(&p.report.pairs).all(|(a, b)| {
                a.i == b.i && a.j == b.j && a.edge == b.edge && close(a.magnitude, b.magnitude, RECORD_TOL)
            }),
        "recorded pair magnitudes",
    );
    require(
        fails,
        close_opt(fresh.min_on, p.report.min_on, RECORD_TOL)
            && close_opt(fresh.max_off, p.report.max_off, RECORD_TOL)
            && close_opt(fresh.separation, p.report.separation, 1e-6),
        "recorded separation",
    );
}

fn recheck_upper(cert: &Certificate, graph: &Graph, p: &UpperBoundPayload, fails: &mut Vec<String>) {
    let vectors = parse_vectors(&p.vectors);
    require(fails, vectors.len() == graph.n(), "one vector per vertex");
    require(fails, vectors.iter().all(|v| v.dim() == cert.dimension), "vector dimension");
    let fresh = match gram(&vectors) {
        Ok(g) => g,
        Err(e) => {
            fails.push(format!("gram: {e}"));
            return;
        }
    };
    let stored = CMatrix::from_pairs(&p.gram).ok().and_then(|m| HermitianMatrix::new(m).ok());
    let Some(stored) = stored else {
        fails.push("stored Gram matrix is not a Hermitian matrix".into());
        return;
    };
    let same = stored.n() == fresh.n()
        && (0..fresh.n()).all(|i| {
            (0..fresh.n())
                .all(|j| (stored.get(i, j) - fresh.get(i, j)).norm() <= RECORD_TOL * fresh.get(i, i).re.max(1.0))
        });
    require(fails, same, "stored Gram matrix equals the Gram matrix of the vectors");
    let report = faithfulness_report(graph, &vectors, cert.tolerance);
    require(fails, report.pass, "representation is faithful");
    require(fails, graph_of_matrix(&stored.unit_diagonal(), cert.tolerance) == *graph, "graph of the Gram matrix");
    require(
        fails,
        close_opt(report.min_on, p.min_on, RECORD_TOL)
            && close_opt(report.max_off, p.max_off, RECORD_TOL)
            && close_opt(report.separation, p.separation, 1e-6),
        "recorded separation",
    );
    match (stored.rank(p.rank_tol), stored.is_psd(1e-9)) {
        (Ok(rank), Ok(psd)) => {
            require(fails, rank == p.rank, format!("rank {rank} recorded as {}", p.rank));
            require(fails, psd && psd == p.psd, "Gram matrix is positive semidefinite");
        }
        (Err(e), _) | (_, Err(e)) => fails.push(format!("eigen solve: {e}")),
    }
    require(fails, p.bound == p.rank, "bound equals rank");
}

fn recheck_chain(graph: &Graph, p: &LowerChainPayload, fails: &mut Vec<String>) {
    let sys = match TripleSystem::new(p.order, p.triples.iter().copied()) {
        Ok(s) => s,
        Err(e) => {
            fails.push(format!("triple system: {e}"));
            return;
        }
    };
    require(fails, incidence_graph(&sys) == *graph, "graph is the incidence graph");
    require(fails, p.colorings_checked == 1u64 << p.order, "all 2-colorings examined");
    match sys.count_weak_two_colorings(Execution::default()) {
        Ok(count) => {
            require(fails, count == p.weak_colorings, "recorded weak coloring count");
            require(fails, count == 0, "every 2-coloring has a monochromatic triple");
        }
        Err(e) => fails.push(format!("coloring exhaustion: {e}")),
    }
    let eq = equivalence_suite(p.equivalence.samples, p.equivalence.seed, Execution::default());
    require(fails, eq == p.equivalence, "recorded equivalence suite");
    require(fails, eq.pass(), "algebraic and geometric conditions agree");
    let pr = probe_suite(p.probes.triples, p.probes.planes_per_triple, p.probes.seed, Execution::default());
    require(fails, pr == p.probes, "recorded probe suite");
    require(fails, pr.pass(), "plane probes agree with the hull condition");
    let t = &p.tail_search;
    let found = crate::orthrep::random_tail_search(&sys, t.dim, t.trials, t.seed).is_some();
    require(fails, found == t.found, "recorded tail search outcome");
    require(fails, !found && t.dim == 2, "no tail family found in C²");
    match min_forcing(graph, ForcingVariant::Psd, p.budget) {
        Ok(r) => {
            require(fails, r == p.zero_forcing, "recorded forcing search");
            let bound = r.exact.then(|| graph.n() - r.size);
            require(fails, bound == p.zero_forcing_bound, "recorded forcing bound");
            if let Some(b) = bound {
                require(fails, b <= p.asserted_bound, "forcing bound does not exceed the asserted bound");
            }
        }
        Err(e) => fails.push(format!("forcing search: {e}")),
    }
    require(fails, p.asserted_bound == sys.num_triples() + 3, "asserted bound is b + 3");
}

fn recheck_table_row(graph: &Graph, p: &TableRowPayload, fails: &mut Vec<String>) {
    let mut sizes = Vec::new();
    let mut all_exact = true;
    for (idx, s) in p.systems.iter().enumerate() {
        let sys = match TripleSystem::new(p.order, s.triples.iter().copied()) {
            Ok(sys) => sys,
            Err(e) => {
                fails.push(format!("system {idx}: {e}"));
                continue;
            }
        };
        let g = incidence_graph(&sys);
        if idx == 0 {
            require(fails, g == *graph, "graph is the first system's incidence graph");
        }
        let f = &s.forcing;
        require(fails, f.variant == ForcingVariant::Psd, format!("system {idx}: PSD variant"));
        require(fails, f.witness.len() == f.size, format!("system {idx}: witness size"));
        require(
            fails,
            is_forcing_set(&g, ForcingVariant::Psd, &f.witness).unwrap_or(false),
            format!("system {idx}: witness forces the graph"),
        );
        if f.exact {
            let opts = SearchOptions {
                budget: p.budget,
                seed: p.seed,
                orbits: Some(incidence_orbits(&sys)),
                ..SearchOptions::default()
            };
            match min_forcing_with(&g, ForcingVariant::Psd, opts) {
                Ok(r) => require(fails, r.exact && r.size == f.size, format!("system {idx}: exactness reproduced")),
                Err(e) => fails.push(format!("system {idx}: {e}")),
            }
        }
        all_exact &= f.exact;
        sizes.push(f.size);
    }
    let common = sizes.first().copied().filter(|&z| sizes.iter().all(|&s| s == z));
    require(fails, !p.systems.is_empty(), "at least one system");
    require(fails, common == p.z_plus, "recorded common forcing number");
    require(fails, all_exact == p.exact, "recorded exactness");
    require(fails, p.n == p.order + p.num_triples, "n = v + b");
    require(fails, p.zero_forcing_bound == common.map(|z| p.n - z), "forcing bound is n − Z₊");
    require(fails, p.msr_lower_bound == p.num_triples + 3, "b + 3");
}

fn recheck_spectral(graph: &Graph, p: &SpectralPayload, fails: &mut Vec<String>) {
    match graph.adjacency_spectrum() {
        Ok(spec) => {
            require(
                fails,
                spec.len() == p.spectrum.len() && spec.iter().zip(&p.spectrum).all(|(a, b)| close(*a, *b, 1e-9)),
                "recorded spectrum",
            );
            let mult = spec.iter().filter(|x| (*x - p.lambda).abs() <= p.multiplicity_tol).count();
            require(fails, mult == p.multiplicity, "recorded multiplicity");
        }
        Err(e) => fails.push(format!("spectrum: {e}")),
    }
    match graph.shifted_rank(p.lambda, p.rank_tol) {
        Ok(r) => require(fails, r == p.shifted_rank, "recorded shifted rank"),
        Err(e) => fails.push(format!("shifted rank: {e}")),
    }
    require(fails, p.shifted_rank + p.multiplicity == graph.n(), "rank plus nullity is n");
    match min_forcing(graph, ForcingVariant::Standard, p.budget) {
        Ok(r) => require(fails, r == p.forcing, "recorded forcing search"),
        Err(e) => fails.push(format!("forcing search: {e}")),
    }
    require(fails, p.forcing.exact, "forcing number is exact");
    require(fails, p.forcing_bound + p.forcing.size == graph.n(), "forcing bound is n − Z");
    require(fails, p.forcing_bound == p.shifted_rank, "upper and lower bounds meet");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthrep::{default_alpha, heawood_representation, msr_upper_certificate, verify_faithful, FAITHFUL_TOL};

    fn upper() -> Certificate {
        let (_, rep) = heawood_representation(default_alpha()).unwrap();
        msr_upper_certificate(rep.graph(), &rep, FAITHFUL_TOL).unwrap()
    }

    #[test]
    fn round_trip() {
        let cert = upper();
        assert!(cert.verdict.is_pass());
        let text = cert.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(check_json(&text).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn tampering_is_detected() {
        let cert = upper();
        let mut bad = cert.clone();
        if let Payload::UpperBound(p) = &mut bad.payload {
            p.gram[0][1][0] += 1e-3;
        }
        assert!(matches!(check(&bad), Err(CertificateError::DigestMismatch { .. })));
        bad.reseal();
        assert!(matches!(check(&bad), Err(CertificateError::VerdictMismatch { .. })));

        let mut bad = cert.clone();
        if let Payload::UpperBound(p) = &mut bad.payload {
            p.vectors[3][2][0] += 1e-3;
        }
        bad.reseal();
        assert!(matches!(check(&bad), Err(CertificateError::VerdictMismatch { .. })));
    }

    #[test]
    fn schema_errors() {
        let text = upper().to_json();
        assert!(matches!(check_json(&text[..text.len() / 2]), Err(CertificateError::Schema(_))));
        let swapped = text.replacen("\"kind\": \"upper-bound\"", "\"kind\": \"spectral\"", 1);
        assert!(matches!(check_json(&swapped), Err(CertificateError::Schema(_))));
    }

    #[test]
    fn failing_verdicts_recheck() {
        let (_, rep) = heawood_representation(default_alpha()).unwrap();
        let mut vectors = rep.vectors().to_vec();
        vectors[0] = CVector::zeros(10);
        let broken = crate::orthrep::OrthRepresentation::new(rep.graph().clone(), vectors).unwrap();
        let cert = verify_faithful(&broken, FAITHFUL_TOL);
        assert_eq!(cert.verdict, Verdict::Fail);
        let report = check(&cert).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(!report.reasons.is_empty());
    }
}
