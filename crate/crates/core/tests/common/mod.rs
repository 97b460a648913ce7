//! Oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use steiner_msr::graphs::incidence_graph;
use steiner_msr::orthrep::{
    assemble, faithfulness_report, representation_from_matrix, RepresentationMatrix, TailFamily, DEFAULT_TOL,
    FAITHFUL_TOL,
};
use steiner_msr::zeroforcing::ForcingVariant;
use steiner_msr::Graph;

const ATLAS: &str = include_str!("../data/atlas7.g6");

pub fn atlas() -> Vec<(Graph, String)> {
    ATLAS
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (g6, girth) = l.split_once(' ').unwrap();
            (Graph::from_graph6(g6).unwrap(), girth.to_string())
        })
        .collect()
}

/// Applies single forces one at a time until none applies.
pub fn oracle_closure(g: &Graph, variant: ForcingVariant, set: &[usize]) -> Vec<bool> {
    let n = g.n();
    let mut black = vec![false; n];
    for &v in set {
        black[v] = true;
    }
    loop {
        let mut forced = None;
        'search: for u in (0..n).filter(|&u| black[u]) {
            let white: Vec<usize> = g.neighbors(u).iter().copied().filter(|&x| !black[x]).collect();
            match variant {
                ForcingVariant::Standard => {
                    if white.len() == 1 {
                        forced = Some(white[0]);
                        break 'search;
                    }
                }
                ForcingVariant::Psd => {
                    let comps = white_components(g, &black);
                    for &x in &white {
                        let alone = white.iter().filter(|&&y| comps[y] == comps[x]).count() == 1;
                        if alone {
                            forced = Some(x);
                            break 'search;
                        }
                    }
                }
            }
        }
        match forced {
            Some(x) => black[x] = true,
            None => return black,
        }
    }
}

fn white_components(g: &Graph, black: &[bool]) -> Vec<usize> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if black[s] || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !black[w] && comp[w] == usize::MAX {
                    comp[w] = s;
                    stack.push(w);
                }
            }
        }
    }
    comp
}

pub fn oracle_min(g: &Graph, variant: ForcingVariant) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|m| {
            let set: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            oracle_closure(g, variant, &set).iter().all(|&b| b)
        })
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap()
}

pub fn as_mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

/// Assembles, re-extracts and re-checks a tail family; panics on any failure.
pub fn round_trip(tail: &TailFamily) {
    let sys = tail.system().clone();
    let m = assemble(&sys, tail, DEFAULT_TOL).unwrap();
    assert!(m.max_residual() < DEFAULT_TOL);
    let again = RepresentationMatrix::from_matrix(sys.clone(), m.matrix().clone(), DEFAULT_TOL).unwrap();
    assert_eq!(again.tail().vectors(), tail.vectors());
    for (p, e) in again.rederive_conditions(1e-9).unwrap() {
        assert!(p.re < 0.0 && (p.re - e).abs() <= 1e-9 * e.abs());
    }
    let rep = representation_from_matrix(&m);
    let report = faithfulness_report(rep.graph(), rep.vectors(), FAITHFUL_TOL);
    assert!(report.pass);
    assert_eq!(rep.graph(), &incidence_graph(&sys));
}
