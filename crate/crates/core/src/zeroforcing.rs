//! Standard and positive semidefinite (PSD) zero forcing.
//!
//! Rules, for a set of colored vertices:
//!
//! * standard: a colored vertex with exactly one uncolored neighbor forces it;
//! * PSD: for each connected component `W` of the graph induced on the
//!   uncolored vertices, a colored vertex with exactly one neighbor in `W`
//!   forces that neighbor.
//!
//! Both closures are monotone and idempotent, which is what the exact search
//! relies on: if `cl(S) != V` then every forcing set meets `V \ cl(S)`. The
//! search is a hitting-set branch and bound over such obstruction sets,
//! learned lazily from maximal non-forcing sets and run by iterative
//! deepening on the set size.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::Graph;
use crate::par::{self, Execution};

/// Vertex sets are `u128` bitmasks.
pub const MAX_FORCING_VERTICES: usize = 128;
/// Default node-expansion budget of [`min_forcing`].
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Default number of randomized restarts used for upper-bound witnesses.
pub const DEFAULT_RESTARTS: usize = 64;

type Bits = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("graph has {0} vertices; forcing routines support at most {MAX_FORCING_VERTICES}")]
    GraphTooLarge(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForcingVariant {
    Standard,
    Psd,
}

impl std::fmt::Display for ForcingVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ForcingVariant::Standard => "standard",
            ForcingVariant::Psd => "psd",
        })
    }
}

/// Outcome of a minimum forcing set search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcingResult {
    pub variant: ForcingVariant,
    /// Size of the best forcing set found.
    pub size: usize,
    /// A forcing set of that size, ascending.
    pub witness: Vec<usize>,
    /// No smaller forcing set exists (every smaller size was exhausted).
    pub exact: bool,
    /// Largest size proven infeasible, plus one.
    pub lower_bound: usize,
    /// Branch-and-bound nodes expanded.
    pub nodes: u64,
}

/// Adjacency bitmasks of a graph with at most [`MAX_FORCING_VERTICES`] vertices.
#[derive(Debug, Clone)]
pub struct ForcingGraph {
    n: usize,
    nbr: Vec<Bits>,
    full: Bits,
}

impl ForcingGraph {
    pub fn new(g: &Graph) -> Result<Self, ForcingError> {
        let n = g.n();
        if n > MAX_FORCING_VERTICES {
            return Err(ForcingError::GraphTooLarge(n));
        }
        let nbr = (0..n).map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | bit(w))).collect();
        let full = if n == 128 { Bits::MAX } else { (1 << n) - 1 };
        Ok(Self { n, nbr, full })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn mask(&self, set: &[usize]) -> Result<Bits, ForcingError> {
        set.iter().try_fold(0, |m, &v| {
            if v >= self.n {
                Err(ForcingError::VertexOutOfRange { vertex: v, n: self.n })
            } else {
                Ok(m | bit(v))
            }
        })
    }

    fn closure(&self, variant: ForcingVariant, set: Bits) -> Bits {
        match variant {
            ForcingVariant::Standard => self.standard_closure_bits(set),
            ForcingVariant::Psd => self.psd_closure_bits(set),
        }
    }

    fn is_forcing(&self, variant: ForcingVariant, set: Bits) -> bool {
        self.closure(variant, set) == self.full
    }

    fn standard_closure_bits(&self, mut colored: Bits) -> Bits {
        loop {
            let mut forced = 0;
            for u in ones(colored) {
                let open = self.nbr[u] & !colored;
                if open.count_ones() == 1 {
                    forced |= open;
                }
            }
            if forced == 0 {
                return colored;
            }
            colored |= forced;
        }
    }

    fn psd_closure_bits(&self, mut colored: Bits) -> Bits {
        let mut comps: Vec<Bits> = Vec::with_capacity(self.n);
        loop {
            let uncolored = self.full & !colored;
            if uncolored == 0 {
                return colored;
            }
            comps.clear();
            let mut rest = uncolored;
            while rest != 0 {
                let mut comp = rest & rest.wrapping_neg();
                let mut frontier = comp;
                while frontier != 0 {
                    let mut reach = 0;
                    for x in ones(frontier) {
                        reach |= self.nbr[x];
                    }
                    frontier = reach & uncolored & !comp;
                    comp |= frontier;
                }
                comps.push(comp);
                rest &= !comp;
            }
            let mut forced = 0;
            for u in ones(colored) {
                let open = self.nbr[u] & uncolored;
                if open == 0 {
                    continue;
                }
                for &c in &comps {
                    let x = open & c;
                    if x.count_ones() == 1 {
                        forced |= x;
                    }
                }
            }
            if forced == 0 {
                return colored;
            }
            colored |= forced;
        }
    }

    /// Grows `set` to a maximal non-forcing superset, adding vertices in
    /// `order`, and returns the uncolored remainder of its closure.
    fn obstruction_from(&self, variant: ForcingVariant, set: Bits, order: &[usize]) -> Bits {
        let mut closed = self.closure(variant, set);
        debug_assert_ne!(closed, self.full);
        for &v in order {
            if closed & bit(v) != 0 {
                continue;
            }
            let grown = self.closure(variant, closed | bit(v));
            if grown != self.full {
                closed = grown;
            }
        }
        self.full & !closed
    }
}

#[inline]
fn bit(v: usize) -> Bits {
    1 << v
}

fn ones(mut m: Bits) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

fn to_vec(m: Bits) -> Vec<usize> {
    ones(m).collect()
}

/// Colex order on equal-size sets: compare the largest differing element.
fn colex_less(a: Bits, b: Bits) -> bool {
    let diff = a ^ b;
    diff != 0 && {
        let top = 127 - diff.leading_zeros();
        b & (1 << top) != 0
    }
}

/// PSD closure of `set`, ascending.
pub fn psd_closure(g: &Graph, set: &[usize]) -> Result<Vec<usize>, ForcingError> {
    closure(g, ForcingVariant::Psd, set)
}

/// Standard zero forcing closure of `set`, ascending.
pub fn standard_closure(g: &Graph, set: &[usize]) -> Result<Vec<usize>, ForcingError> {
    closure(g, ForcingVariant::Standard, set)
}

pub fn closure(g: &Graph, variant: ForcingVariant, set: &[usize]) -> Result<Vec<usize>, ForcingError> {
    let fg = ForcingGraph::new(g)?;
    let m = fg.mask(set)?;
    Ok(to_vec(fg.closure(variant, m)))
}

pub fn is_forcing_set(g: &Graph, variant: ForcingVariant, set: &[usize]) -> Result<bool, ForcingError> {
    let fg = ForcingGraph::new(g)?;
    let m = fg.mask(set)?;
    Ok(fg.is_forcing(variant, m))
}

/// Smallest forcing set by plain enumeration: sizes ascending, each size in
/// colex order. Returns the colex-first minimum forcing set.
pub fn brute_force_min_forcing(
    g: &Graph,
    variant: ForcingVariant,
    exec: Execution,
) -> Result<Vec<usize>, ForcingError> {
    let fg = ForcingGraph::new(g)?;
    let n = fg.n;
    for k in 0..=n {
        let total = binomial(n, k);
        let total = usize::try_from(total).expect("enumeration space fits in usize");
        if let Some(rank) = par::find_first(exec, total, |r| fg.is_forcing(variant, colex_unrank(r as u128, k))) {
            return Ok(to_vec(colex_unrank(rank as u128, k)));
        }
    }
    unreachable!("the full vertex set is forcing")
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The `rank`-th `k`-subset of the naturals in colex order.
fn colex_unrank(mut rank: u128, k: usize) -> Bits {
    let mut set = 0;
    for i in (1..=k).rev() {
        // Largest c with C(c, i) <= rank.
        let mut c = i - 1;
        while binomial(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binomial(c, i);
        set |= bit(c);
    }
    set
}

/// Small forcing set from randomized reverse-greedy minimalisation.
///
/// Each restart starts from all vertices and drops vertices in a random
/// order whenever the rest still forces. Restart `r` draws its order from
/// stream `r` of a ChaCha generator seeded with `seed`; the smallest result
/// (colex-first among ties) is returned, independent of execution mode.
pub fn heuristic_forcing_set(
    g: &Graph,
    variant: ForcingVariant,
    restarts: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<usize>, ForcingError> {
    let fg = ForcingGraph::new(g)?;
    Ok(to_vec(heuristic_bits(&fg, variant, restarts.max(1), seed, exec)))
}

fn restart_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn heuristic_bits(fg: &ForcingGraph, variant: ForcingVariant, restarts: usize, seed: u64, exec: Execution) -> Bits {
    let results = par::map_range(exec, restarts, |r| {
        let mut rng = restart_rng(seed, r as u64);
        let mut order: Vec<usize> = (0..fg.n).collect();
        order.shuffle(&mut rng);
        let mut set = fg.full;
        for v in order {
            let smaller = set & !bit(v);
            if fg.is_forcing(variant, smaller) {
                set = smaller;
            }
        }
        set
    });
    results
        .into_iter()
        .min_by(|&a, &b| {
            a.count_ones().cmp(&b.count_ones()).then_with(|| {
                if colex_less(a, b) {
                    std::cmp::Ordering::Less
                } else if a == b {
                    std::cmp::Ordering::Equal
                } else {
                    std::cmp::Ordering::Greater
                }
            })
        })
        .unwrap_or(fg.full)
}

/// Options for [`min_forcing_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Node-expansion cap; `None` searches to completion.
    pub budget: Option<u64>,
    pub restarts: usize,
    pub seed: u64,
    pub exec: Execution,
    /// Orbit label of each vertex under some automorphism group of the
    /// graph. Only used to skip symmetric first choices, so any valid
    /// labeling (including none) gives the same size.
    pub orbits: Option<Vec<usize>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: Some(DEFAULT_BUDGET),
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            exec: Execution::default(),
            orbits: None,
        }
    }
}

/// Minimum forcing set with the default restarts, seed and execution.
pub fn min_forcing(g: &Graph, variant: ForcingVariant, budget: Option<u64>) -> Result<ForcingResult, ForcingError> {
    min_forcing_with(g, variant, SearchOptions { budget, ..SearchOptions::default() })
}

/// Minimum forcing set search.
///
/// A heuristic witness gives the initial upper bound. Sizes `k` from the
/// obstruction packing bound upwards are then searched exhaustively; each
/// exhausted size raises the lower bound. When the node budget runs out the
/// best witness is returned with `exact == false`.
pub fn min_forcing_with(
    g: &Graph,
    variant: ForcingVariant,
    opts: SearchOptions,
) -> Result<ForcingResult, ForcingError> {
    let fg = ForcingGraph::new(g)?;
    if let Some(orbits) = &opts.orbits {
        assert_eq!(orbits.len(), fg.n, "one orbit label per vertex");
    }
    let mut best = heuristic_bits(&fg, variant, opts.restarts.max(1), opts.seed, opts.exec);
    let mut search = Search::new(&fg, variant, opts.budget, opts.seed, opts.orbits.as_deref());
    search.seed_obstructions(opts.restarts.max(1));

    let mut lower = search.packing_bound(0, 0, &search.obstructions.clone());
    let mut exact = false;
    while lower < best.count_ones() as usize {
        match search.run(lower) {
            Outcome::Found(set) => {
                best = set;
                exact = true;
                break;
            }
            Outcome::Exhausted => lower += 1,
            Outcome::OutOfBudget => break,
        }
    }
    if lower >= best.count_ones() as usize || exact {
        exact = true;
        lower = best.count_ones() as usize;
    }
    Ok(ForcingResult {
        variant,
        size: best.count_ones() as usize,
        witness: to_vec(best),
        exact,
        lower_bound: lower,
        nodes: search.nodes,
    })
}

enum Outcome {
    Found(Bits),
    Exhausted,
    OutOfBudget,
}

/// Hitting-set branch and bound over obstructions: sets `F = V \ cl(S)` for
/// non-forcing `S`, which every forcing set must meet.
struct Search<'a> {
    fg: &'a ForcingGraph,
    variant: ForcingVariant,
    budget: Option<u64>,
    nodes: u64,
    /// Every obstruction learned so far, in order of discovery.
    obstructions: Vec<Bits>,
    rng: ChaCha8Rng,
    order: Vec<usize>,
    orbits: Option<&'a [usize]>,
}

impl<'a> Search<'a> {
    fn new(
        fg: &'a ForcingGraph,
        variant: ForcingVariant,
        budget: Option<u64>,
        seed: u64,
        orbits: Option<&'a [usize]>,
    ) -> Self {
        Self {
            fg,
            variant,
            budget,
            nodes: 0,
            obstructions: Vec::new(),
            rng: restart_rng(seed, u64::MAX),
            order: (0..fg.n).collect(),
            orbits,
        }
    }

    fn learn(&mut self, set: Bits) -> Bits {
        self.order.shuffle(&mut self.rng);
        let f = self.fg.obstruction_from(self.variant, set, &self.order);
        self.obstructions.push(f);
        f
    }

    fn seed_obstructions(&mut self, rounds: usize) {
        if self.fg.n == 0 {
            return;
        }
        self.obstructions.push(self.fg.full & !self.fg.closure(self.variant, 0));
        for _ in 0..rounds {
            self.learn(0);
        }
        self.obstructions.sort_by_key(|f| f.count_ones());
        self.obstructions.dedup();
    }

    /// Greedy count of pairwise disjoint obstructions in `live`, restricted
    /// to vertices not in `chosen` or `excluded`; `usize::MAX` when one of
    /// them cannot be hit at all.
    fn packing_bound(&self, chosen: Bits, excluded: Bits, live: &[Bits]) -> usize {
        let allowed = self.fg.full & !chosen & !excluded;
        let mut used = 0;
        let mut count = 0;
        for &f in live {
            if f & chosen != 0 {
                continue;
            }
            let rest = f & allowed;
            if rest == 0 {
                return usize::MAX;
            }
            if rest & used == 0 {
                used |= rest;
                count += 1;
            }
        }
        count
    }

    fn run(&mut self, k: usize) -> Outcome {
        let live = self.obstructions.clone();
        match self.dfs(0, 0, k, live) {
            Ok(Some(set)) => Outcome::Found(set),
            Ok(None) => Outcome::Exhausted,
            Err(OutOfBudget) => Outcome::OutOfBudget,
        }
    }

    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    /// `live` holds obstructions missed by `chosen`; `picks` more vertices
    /// may be added, none of them from `excluded`.
    fn dfs(
        &mut self,
        chosen: Bits,
        excluded: Bits,
        picks: usize,
        mut live: Vec<Bits>,
    ) -> Result<Option<Bits>, OutOfBudget> {
        self.tick()?;
        if live.is_empty() {
            if self.fg.is_forcing(self.variant, chosen) {
                return Ok(Some(chosen));
            }
            let f = self.learn(chosen);
            live.push(f);
        }
        if picks == 0 {
            return Ok(None);
        }
        let allowed = self.fg.full & !chosen & !excluded;
        if picks == 1 {
            let candidates = live.iter().fold(allowed, |m, &f| m & f);
            for v in ones(candidates) {
                self.tick()?;
                let set = chosen | bit(v);
                if self.fg.is_forcing(self.variant, set) {
                    return Ok(Some(set));
                }
                self.learn(set);
            }
            return Ok(None);
        }
        let need = self.packing_bound(chosen, excluded, &live);
        if need == usize::MAX || need > picks {
            return Ok(None);
        }
        let branch = live.iter().map(|&f| f & allowed).min_by_key(|f| f.count_ones()).expect("live is nonempty");
        let mut seen = self.obstructions.len();
        let mut excluded = excluded;
        let mut tried_orbits: Vec<usize> = Vec::new();
        for v in ones(branch) {
            if chosen == 0 {
                if let Some(orbits) = self.orbits {
                    // At the root a first choice symmetric to an earlier one
                    // cannot lead anywhere new.
                    if tried_orbits.contains(&orbits[v]) {
                        continue;
                    }
                    tried_orbits.push(orbits[v]);
                }
            }
            for &f in &self.obstructions[seen..] {
                if f & chosen == 0 {
                    live.push(f);
                }
            }
            seen = self.obstructions.len();
            let child: Vec<Bits> = live.iter().copied().filter(|&f| f & bit(v) == 0).collect();
            if let Some(found) = self.dfs(chosen | bit(v), excluded, picks - 1, child)? {
                return Ok(Some(found));
            }
            excluded |= bit(v);
        }
        Ok(None)
    }
}

struct OutOfBudget;

/// Lower bound `n - Z₊(G)` on the minimum semidefinite rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZfBound {
    pub n: usize,
    pub forcing: ForcingResult,
    pub bound: usize,
    /// `false` means `forcing.size` is only an upper bound on Z₊, so `bound`
    /// is a heuristic lower-bound candidate rather than a valid bound.
    pub certified: bool,
}

pub fn msr_lb_from_zf(g: &Graph, budget: Option<u64>) -> Result<ZfBound, ForcingError> {
    let forcing = min_forcing(g, ForcingVariant::Psd, budget)?;
    Ok(ZfBound { n: g.n(), bound: g.n() - forcing.size, certified: forcing.exact, forcing })
}
