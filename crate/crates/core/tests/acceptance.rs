//! Acceptance suite: one line per criterion with its runtime limit.
//!
//! Set `STEINER_MSR_LONG=1` to search the order 13 forcing numbers to
//! exactness in criterion 4. Rechecking that row repeats the search, so the
//! runtime limits of criteria 4 and 8 are lifted in that mode.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use steiner_msr::certificate::{self, Certificate, CertificateError};
use steiner_msr::commands::{self, RunConfig};
use steiner_msr::designs::Coloring;
use steiner_msr::graphs::incidence_graph;
use steiner_msr::orthrep::{alpha_interval, heptagonal_family, random_tail_search, triple_product, TailFamily};
use steiner_msr::sphere::{equivalence_suite, probe_suite};
use steiner_msr::zeroforcing::{is_forcing_set, min_forcing, ForcingVariant};
use steiner_msr::{CVector, Execution, Graph, TripleSystem};

mod common;
use common::{atlas, oracle_min, round_trip};

const SEED: u64 = 1;

type Outcome = Result<String, String>;

struct Suite {
    failed: usize,
    certificates: Vec<Certificate>,
}

impl Suite {
    fn run(&mut self, id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce(&mut Vec<Certificate>) -> Outcome) {
        let start = Instant::now();
        let outcome = f(&mut self.certificates);
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let limit_text = limit.map_or_else(|| "no limit".to_string(), |l| format!("limit {:.0} s", l.as_secs_f64()));
        let (pass, detail) = match outcome {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; over time")),
            Err(d) => (false, d),
        };
        if !pass {
            self.failed += 1;
        }
        println!(
            "[{}] {id}. {name}: {detail} ({:.2} s, {limit_text})",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn upper_bound(certs: &mut Vec<Certificate>) -> Outcome {
    let cfg = RunConfig { alpha: 0.5617, ..RunConfig::default() };
    let r = commands::heawood_upper(&cfg).map_err(|e| e.to_string())?;
    ensure(r.dimension == 10, || format!("dimension {}", r.dimension))?;
    ensure(r.rank == 10, || format!("rank {}", r.rank))?;
    ensure(r.graph_matches, || "graph of the Gram matrix differs from Heawood".into())?;
    ensure(r.max_residual < 1e-10, || format!("residual {:e}", r.max_residual))?;
    ensure(r.passed(), || "certificate verdict fail".into())?;
    let detail = format!("rank {}, graph exact, residual {:.1e}", r.rank, r.max_residual);
    certs.push(r.certificate);
    certs.push(r.faithfulness);
    Ok(detail)
}

fn coloring_exhaustion(_: &mut Vec<Certificate>) -> Outcome {
    let mut parts = Vec::new();
    for sys in [TripleSystem::fano(), TripleSystem::affine_plane_9()] {
        let v = sys.order();
        let mono = (0u32..1 << v)
            .filter(|m| {
                let c = Coloring::new((0..v).map(|p| (m >> p & 1) as u8).collect());
                !sys.monochromatic_triples(&c).is_empty()
            })
            .count();
        ensure(mono == 1 << v, || format!("order {v}: {mono} of {} colorings", 1 << v))?;
        let weak = sys.count_weak_two_colorings(Execution::default()).map_err(|e| e.to_string())?;
        ensure(weak == 0, || format!("order {v}: {weak} weak colorings"))?;
        parts.push(format!("{mono}/{mono} (order {v})"));
    }
    Ok(format!("monochromatic triple in {}", parts.join(", ")))
}

fn equivalence(_: &mut Vec<Certificate>) -> Outcome {
    let e = equivalence_suite(10_000, SEED, Execution::default());
    ensure(e.pass(), || format!("{} disagreements, {} in band", e.disagreements, e.in_band))?;
    let p = probe_suite(1_000, 10_000, SEED, Execution::default());
    ensure(p.pass(), || format!("probe agreement {:.4}", p.agreement_rate()))?;
    Ok(format!(
        "{} triples, {} disagreements outside the band, {} in band; probe agreement {:.2}% on {} triples",
        e.samples,
        e.disagreements,
        e.in_band,
        100.0 * p.agreement_rate(),
        p.triples
    ))
}

fn table(long: bool, certs: &mut Vec<Certificate>) -> Outcome {
    let cfg = RunConfig { long, budget: if long { None } else { RunConfig::default().budget }, ..RunConfig::default() };
    let rows = commands::table1(&[7, 9, 13, 15], &cfg).map_err(|e| e.to_string())?;
    let expect = [(7, 14, 5, 9, 10), (9, 21, 7, 14, 15), (13, 39, 11, 28, 29), (15, 50, 13, 37, 38)];
    for (r, &(v, n, z, bound, b3)) in rows.iter().zip(&expect) {
        let got = (r.order, r.n, r.z_plus, r.zero_forcing_bound, r.msr_lower_bound);
        ensure(got == (v, n, Some(z), Some(bound), b3), || format!("row {v}: {got:?}"))?;
        ensure(r.exact || v == 15 || (v == 13 && !long), || format!("order {v} not exact"))?;
        let certificate::Payload::TableRow(p) = &r.certificate.payload else {
            return Err("table certificate payload".into());
        };
        for s in &p.systems {
            let sys = TripleSystem::new(v, s.triples.iter().copied()).map_err(|e| e.to_string())?;
            let forcing = is_forcing_set(&incidence_graph(&sys), ForcingVariant::Psd, &s.forcing.witness)
                .map_err(|e| e.to_string())?;
            ensure(forcing && s.forcing.witness.len() == z, || format!("order {v}: bad witness"))?;
        }
    }
    let exact: Vec<String> = rows.iter().filter(|r| r.exact).map(|r| r.order.to_string()).collect();
    let detail = format!(
        "n-Z+ = 9, 14, 28, 37 and b+3 = 10, 15, 29, 38; exact for orders {}; witnesses verified for {} systems",
        exact.join(", "),
        rows.iter().map(|r| r.systems).sum::<usize>()
    );
    certs.extend(rows.into_iter().map(|r| r.certificate));
    Ok(detail)
}

fn minrank(certs: &mut Vec<Certificate>) -> Outcome {
    let r = commands::minrank_heawood(&RunConfig::default()).map_err(|e| e.to_string())?;
    let got = (r.multiplicity, r.shifted_rank, r.forcing_number, r.forcing_bound);
    ensure(got == (6, 8, 6, 8), || format!("(mult, rank, Z, bound) = {got:?}"))?;
    ensure(r.certificate.verdict.is_pass(), || "certificate verdict fail".into())?;
    certs.push(r.certificate);
    Ok("multiplicity 6, rank(A - sqrt2 I) = 8, Z = 6 exact, bound 8".into())
}

fn nonexistence(certs: &mut Vec<Certificate>) -> Outcome {
    let fano = TripleSystem::fano();
    let found = random_tail_search(&fano, 2, 1_000_000, SEED);
    ensure(found.is_none(), || "a tail family in C^2 was returned".into())?;
    // The full chain certificate carries the same search with the suites.
    let chain = commands::heawood_lower(&RunConfig::default()).map_err(|e| e.to_string())?;
    ensure(chain.verdict.is_pass(), || "lower chain verdict fail".into())?;
    certs.push(chain);
    Ok("absent after 10^6 trials; lower chain certificate asserts msr >= 10".into())
}

fn random_graphs(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(8..=10);
            let p: f64 = rng.random_range(0.15..0.7);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.random_bool(p)).collect();
            Graph::from_edges(n, edges).unwrap()
        })
        .collect()
}

fn oracles(_: &mut Vec<Certificate>) -> Outcome {
    let mut corpus: Vec<Graph> = atlas().into_iter().map(|(g, _)| g).collect();
    corpus.extend(random_graphs(300, SEED));
    for g in &corpus {
        for variant in [ForcingVariant::Standard, ForcingVariant::Psd] {
            let r = min_forcing(g, variant, None).map_err(|e| e.to_string())?;
            let want = oracle_min(g, variant);
            ensure(r.exact && r.size == want, || format!("{variant} {}: {} vs {want}", g.to_graph6(), r.size))?;
        }
    }
    let (lo, hi) = alpha_interval();
    for i in 1..=50 {
        let alpha = lo + (hi - lo) * i as f64 / 51.0;
        round_trip(&heptagonal_family(alpha).map_err(|e| e.to_string())?);
    }
    let fano = TripleSystem::fano();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut kept = 0;
    while kept < 100 {
        let vs: Vec<CVector> =
            (0..7).map(|_| CVector::from_real(&[(); 3].map(|_| rng.random_range(-1.0..1.0)))).collect();
        let ok = fano
            .triples()
            .iter()
            .all(|&[i, j, k]| triple_product(&vs[i - 1], &vs[j - 1], &vs[k - 1]).unwrap().re < -1e-3);
        if ok {
            round_trip(&TailFamily::new(fano.clone(), vs).map_err(|e| e.to_string())?);
            kept += 1;
        }
    }
    Ok(format!(
        "forcing numbers match enumeration on {} graphs (both variants); 50 alpha values and 100 filtered families round trip",
        corpus.len()
    ))
}

/// Paths of every numeric leaf.
fn numeric_leaves(v: &Value, path: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
    match v {
        Value::Number(_) => out.push(path.clone()),
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                path.push(i.to_string());
                numeric_leaves(x, path, out);
                path.pop();
            }
        }
        Value::Object(o) => {
            for (k, x) in o {
                path.push(k.clone());
                numeric_leaves(x, path, out);
                path.pop();
            }
        }
        _ => {}
    }
}

fn leaf<'a>(v: &'a mut Value, path: &[String]) -> &'a mut Value {
    path.iter().fold(v, |cur, p| match cur {
        Value::Array(a) => &mut a[p.parse::<usize>().unwrap()],
        Value::Object(o) => o.get_mut(p).unwrap(),
        _ => unreachable!("paths follow containers"),
    })
}

/// Serializes `v` with the entry at `path` moved by 1e-3, absolute below
/// one and relative above, so the stored value always changes.
fn perturbed(v: &mut Value, path: &[String]) -> String {
    let x = leaf(v, path);
    let old = x.clone();
    let f = old.as_f64().unwrap();
    *x = Value::from(f + 1e-3 * f.abs().max(1.0));
    let text = serde_json::to_string(v).unwrap();
    *leaf(v, path) = old;
    text
}

fn rejected(text: &str) -> bool {
    !matches!(certificate::check_json(text), Ok(r) if r.verdict.is_pass())
}

fn round_trips(certs: &mut [Certificate]) -> Outcome {
    let mut leaves_total = 0;
    for c in certs.iter() {
        let r = certificate::check(c).map_err(|e| format!("{}: {e}", c.kind))?;
        ensure(r.verdict.is_pass(), || format!("{} rechecks as {}", c.kind, r.verdict))?;
        let mut v = serde_json::to_value(c).unwrap();
        let mut leaves = Vec::new();
        numeric_leaves(&v, &mut Vec::new(), &mut leaves);
        for path in &leaves {
            let text = perturbed(&mut v, path);
            ensure(rejected(&text), || format!("{}: perturbing {} passed", c.kind, path.join(".")))?;
        }
        leaves_total += leaves.len();
    }
    // Perturbations re-sealed with a fresh digest must fail on content alone.
    let mut resealed = 0;
    for c in certs.iter().filter(|c| c.kind == certificate::ClaimKind::UpperBound) {
        let mut v = serde_json::to_value(c).unwrap();
        let mut leaves = Vec::new();
        numeric_leaves(&v["payload"], &mut vec!["payload".into()], &mut leaves);
        for path in leaves.iter().filter(|p| p[2] == "gram" || p[2] == "vectors") {
            let mut t = Certificate::from_json(&perturbed(&mut v, path)).map_err(|e| e.to_string())?;
            t.reseal();
            let caught = matches!(certificate::check(&t), Err(CertificateError::VerdictMismatch { .. }))
                || matches!(certificate::check(&t), Ok(r) if !r.verdict.is_pass());
            ensure(caught, || format!("resealed perturbation of {} passed", path.join(".")))?;
            resealed += 1;
        }
    }
    Ok(format!(
        "{} certificates recheck; {leaves_total} single-entry perturbations rejected, {resealed} re-sealed Gram and vector perturbations caught",
        certs.len()
    ))
}

fn main() {
    let long = std::env::var_os("STEINER_MSR_LONG").is_some();
    let mut suite = Suite { failed: 0, certificates: Vec::new() };
    suite.run(1, "Heawood upper bound", secs(1), upper_bound);
    suite.run(2, "coloring exhaustion", secs(1), coloring_exhaustion);
    suite.run(3, "condition equivalence suites", secs(30), equivalence);
    let name = if long { "forcing table (long)" } else { "forcing table" };
    suite.run(4, name, if long { None } else { secs(120) }, |c| table(long, c));
    suite.run(5, "minimum rank of Heawood", secs(10), minrank);
    suite.run(6, "nonexistence probe in C^2", secs(120), nonexistence);
    suite.run(7, "oracle equivalences", secs(120), oracles);
    let mut certs = std::mem::take(&mut suite.certificates);
    suite.run(8, "certificate round trip", if long { None } else { secs(10) }, |_| round_trips(&mut certs));
    if suite.failed > 0 {
        println!("{} criteria failed", suite.failed);
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
