//! Steiner triple systems: validation, the text catalog format, and
//! exhaustive weak 2-coloring.
//!
//! Points are labelled `1..=v`. Each triple is kept sorted ascending, and the
//! list of triples keeps its input order so that row indices of derived
//! matrices are reproducible.

use std::fmt;

use thiserror::Error;

use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("order {0} admits no Steiner triple system (need v = 1 or 3 mod 6)")]
    BadOrder(usize),
    #[error("order {0} is below 7")]
    OrderTooSmall(usize),
    #[error("triple #{index} {triple:?} is not a 3-subset of 1..={order}")]
    InvalidTriple { index: usize, triple: Vec<usize>, order: usize },
    #[error("pair {{{0},{1}}} lies in no triple")]
    PairUncovered(usize, usize),
    #[error("pair {{{0},{1}}} lies in more than one triple")]
    PairDoubled(usize, usize),
    #[error("syntax error on line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("order {0} is too large for exhaustive 2-coloring search")]
    SearchSpaceTooLarge(usize),
}

/// Largest order for which the exhaustive coloring routines are offered.
pub const MAX_EXHAUSTIVE_ORDER: usize = 40;

/// Number of triples of a Steiner triple system of order `v`, `v(v-1)/6`.
pub fn count_triples(v: usize) -> Result<usize, DesignError> {
    check_order(v)?;
    Ok(v * (v - 1) / 6)
}

/// Lower bound `b + 3 = (v² - v + 18)/6` on the minimum semidefinite rank of
/// the incidence graph of any system of order `v ≥ 7`.
pub fn msr_lower_bound(v: usize) -> Result<usize, DesignError> {
    check_order(v)?;
    if v < 7 {
        return Err(DesignError::OrderTooSmall(v));
    }
    Ok((v * v - v + 18) / 6)
}

/// Admissibility of `v` as the order of a Steiner triple system.
pub fn check_order(v: usize) -> Result<(), DesignError> {
    if v % 6 == 1 || v % 6 == 3 {
        Ok(())
    } else {
        Err(DesignError::BadOrder(v))
    }
}

/// A validated Steiner triple system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleSystem {
    order: usize,
    triples: Vec<[usize; 3]>,
}

impl TripleSystem {
    /// Validates `triples` as a Steiner triple system on points `1..=order`.
    ///
    /// Every pair of points is checked; the first doubled pair (scanning
    /// triples in order) or the lexicographically first uncovered pair is
    /// reported.
    pub fn new<T>(order: usize, triples: impl IntoIterator<Item = T>) -> Result<Self, DesignError>
    where
        T: AsRef<[usize]>,
    {
        check_order(order)?;
        let mut sorted = Vec::new();
        for (index, t) in triples.into_iter().enumerate() {
            let t = t.as_ref();
            let bad = || DesignError::InvalidTriple { index, triple: t.to_vec(), order };
            if t.len() != 3 {
                return Err(bad());
            }
            let mut s = [t[0], t[1], t[2]];
            s.sort_unstable();
            if s[0] == 0 || s[2] > order || s[0] == s[1] || s[1] == s[2] {
                return Err(bad());
            }
            sorted.push(s);
        }

        let mut seen = vec![false; order * order];
        for t in &sorted {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let slot = &mut seen[(a - 1) * order + (b - 1)];
                if *slot {
                    return Err(DesignError::PairDoubled(a, b));
                }
                *slot = true;
            }
        }
        for a in 1..=order {
            for b in a + 1..=order {
                if !seen[(a - 1) * order + (b - 1)] {
                    return Err(DesignError::PairUncovered(a, b));
                }
            }
        }
        Ok(Self { order, triples: sorted })
    }

    /// The Fano plane with its lines listed as
    /// `{1,2,6},{2,3,7},{1,3,4},{2,4,5},{3,5,6},{4,6,7},{1,5,7}`.
    pub fn fano() -> Self {
        Self::new(7, [[1, 2, 6], [2, 3, 7], [1, 3, 4], [2, 4, 5], [3, 5, 6], [4, 6, 7], [1, 5, 7]])
            .expect("Fano lines form a Steiner triple system")
    }

    /// The affine plane of order 3, the unique system on 9 points.
    pub fn affine_plane_9() -> Self {
        Self::new(
            9,
            [
                [1, 2, 3],
                [4, 5, 6],
                [7, 8, 9],
                [1, 4, 7],
                [2, 5, 8],
                [3, 6, 9],
                [1, 5, 9],
                [2, 6, 7],
                [3, 4, 8],
                [1, 6, 8],
                [2, 4, 9],
                [3, 5, 7],
            ],
        )
        .expect("lines of AG(2,3) form a Steiner triple system")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn num_triples(&self) -> usize {
        self.triples.len()
    }

    /// Index of the unique triple containing points `a != b`.
    pub fn triple_containing(&self, a: usize, b: usize) -> Option<usize> {
        self.triples.iter().position(|t| t.contains(&a) && t.contains(&b) && a != b)
    }

    /// All automorphisms as point permutations: `perm[p - 1] + 1` is the
    /// image of point `p`. The identity comes first.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let v = self.order;
        let mut third = vec![usize::MAX; v * v];
        for t in &self.triples {
            let [a, b, c] = t.map(|p| p - 1);
            for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                third[x * v + y] = z;
                third[y * v + x] = z;
            }
        }
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; v];
        extend_automorphism(v, &third, &mut image, &mut out);
        out
    }

    fn triple_masks(&self) -> Vec<u64> {
        self.triples.iter().map(|t| t.iter().fold(0u64, |m, &p| m | 1 << (p - 1))).collect()
    }

    /// Searches for a 2-coloring with no monochromatic triple.
    ///
    /// Point 1 is fixed to color 0; the remaining `2^(v-1)` colorings are
    /// scanned and the lowest-index proper one is returned, where bit `p - 2`
    /// of the index is the color of point `p`.
    pub fn weak_two_coloring(&self) -> Result<Option<Coloring>, DesignError> {
        self.weak_two_coloring_with(Execution::default())
    }

    pub fn weak_two_coloring_with(&self, exec: Execution) -> Result<Option<Coloring>, DesignError> {
        if self.order > MAX_EXHAUSTIVE_ORDER {
            return Err(DesignError::SearchSpaceTooLarge(self.order));
        }
        if self.order == 0 {
            return Ok(Some(Coloring::new(Vec::new())));
        }
        let masks = self.triple_masks();
        let space = 1usize << (self.order - 1);
        let found = par::find_first(exec, space, |c| proper_mask((c as u64) << 1, &masks));
        Ok(found.map(|c| Coloring::from_mask((c as u64) << 1, self.order)))
    }

    /// Counts, over all `2^v` colorings, those leaving no triple
    /// monochromatic.
    pub fn count_weak_two_colorings(&self, exec: Execution) -> Result<u64, DesignError> {
        if self.order > MAX_EXHAUSTIVE_ORDER {
            return Err(DesignError::SearchSpaceTooLarge(self.order));
        }
        let masks = self.triple_masks();
        let space = 1usize << self.order;
        Ok(par::count(exec, space, |c| proper_mask(c as u64, &masks)) as u64)
    }

    /// Indices of the triples whose points all share one color.
    pub fn monochromatic_triples(&self, coloring: &Coloring) -> Vec<usize> {
        self.triples
            .iter()
            .enumerate()
            .filter(|(_, t)| {
                let c = coloring.color(t[0]);
                coloring.color(t[1]) == c && coloring.color(t[2]) == c
            })
            .map(|(i, _)| i)
            .collect()
    }
}

fn proper_mask(coloring: u64, triples: &[u64]) -> bool {
    triples.iter().all(|&t| {
        let ones = coloring & t;
        ones != 0 && ones != t
    })
}

impl fmt::Display for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_sts(self))
    }
}

/// Backtracking over point images; every assignment is closed under
/// "the third point of a triple maps to the third point of the image triple".
fn extend_automorphism(v: usize, third: &[usize], image: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let Some(p) = image.iter().position(|&x| x == usize::MAX) else {
        out.push(image.clone());
        return;
    };
    for q in 0..v {
        if image.contains(&q) {
            continue;
        }
        let saved = image.clone();
        image[p] = q;
        if propagate_images(v, third, image) {
            extend_automorphism(v, third, image, out);
        }
        *image = saved;
    }
}

fn propagate_images(v: usize, third: &[usize], image: &mut [usize]) -> bool {
    loop {
        let mut changed = false;
        for a in 0..v {
            for b in a + 1..v {
                let (ia, ib) = (image[a], image[b]);
                if ia == usize::MAX || ib == usize::MAX {
                    continue;
                }
                let c = third[a * v + b];
                let want = third[ia * v + ib];
                if image[c] == usize::MAX {
                    if image.contains(&want) {
                        return false;
                    }
                    image[c] = want;
                    changed = true;
                } else if image[c] != want {
                    return false;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

/// A 2-coloring of the points `1..=v`, colors in `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<u8>,
}

impl Coloring {
    /// `colors[p - 1]` is the color of point `p`. Entries must be 0 or 1.
    pub fn new(colors: Vec<u8>) -> Self {
        assert!(colors.iter().all(|&c| c <= 1), "colors must be 0 or 1");
        Self { colors }
    }

    fn from_mask(mask: u64, order: usize) -> Self {
        Self { colors: (0..order).map(|i| ((mask >> i) & 1) as u8).collect() }
    }

    /// Color of the 1-based point `p`.
    pub fn color(&self, p: usize) -> u8 {
        self.colors[p - 1]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// Parses the STS text format: `#` comments, a `v=<order>` header per system,
/// then one line of three point labels per triple. Systems may be separated
/// by blank lines.
pub fn parse_sts(text: &str) -> Result<Vec<TripleSystem>, DesignError> {
    struct Pending {
        order: usize,
        expected: usize,
        triples: Vec<[usize; 3]>,
        header_line: usize,
    }

    let syntax = |line: usize, message: String| DesignError::SyntaxError { line, message };
    let mut out = Vec::new();
    let mut pending: Option<Pending> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("v=") {
            if let Some(p) = &pending {
                return Err(syntax(
                    lineno,
                    format!("new system starts after {} of {} triples", p.triples.len(), p.expected),
                ));
            }
            let order: usize = rest.trim().parse().map_err(|_| syntax(lineno, format!("bad order {rest:?}")))?;
            let expected = count_triples(order)?;
            let p = Pending { order, expected, triples: Vec::with_capacity(expected), header_line: lineno };
            if expected == 0 {
                out.push(TripleSystem::new(order, p.triples)?);
            } else {
                pending = Some(p);
            }
            continue;
        }

        let Some(p) = pending.as_mut() else {
            return Err(syntax(lineno, "triple outside of a system".into()));
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(syntax(lineno, format!("expected 3 points, got {}", fields.len())));
        }
        let mut t = [0usize; 3];
        for (slot, f) in t.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|_| syntax(lineno, format!("bad point {f:?}")))?;
        }
        p.triples.push(t);
        if p.triples.len() == p.expected {
            let p = pending.take().expect("pending system");
            out.push(TripleSystem::new(p.order, p.triples)?);
        }
    }

    if let Some(p) = pending {
        return Err(syntax(p.header_line, format!("system truncated: {} of {} triples", p.triples.len(), p.expected)));
    }
    Ok(out)
}

/// Serialises one system in the STS text format.
pub fn emit_sts(sys: &TripleSystem) -> String {
    let mut s = format!("v={}\n", sys.order);
    for t in &sys.triples {
        s.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
    }
    s
}

/// Serialises several systems separated by blank lines.
pub fn emit_catalog(systems: &[TripleSystem]) -> String {
    systems.iter().map(emit_sts).collect::<Vec<_>>().join("\n")
}
