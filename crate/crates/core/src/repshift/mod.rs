//! Homomorphisms from the kernel to a finite group, viewed as the points of
//! a shift of finite type.

mod group;

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rscover::ShiftPresentation;

pub use group::{FiniteGroup, GroupError};

pub const STATE_CAP: u64 = 1_000_000;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepShiftError {
    #[error("the shift presentation has {0} symbols; exactly one is supported")]
    MultiSymbolUnsupported(usize),
    #[error("{states} states exceed the cap of {cap}")]
    CapExceeded { states: u64, cap: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// States are windows `(g_0, .., g_{w-1})` encoded in base `|F|` with `g_0`
/// most significant.
#[derive(Debug, Clone)]
pub struct SftGraph {
    group: FiniteGroup,
    window: usize,
    successors: Vec<Vec<usize>>,
    essential: Vec<bool>,
}

struct CompiledTemplate {
    syllables: Vec<(usize, i64)>,
    span: usize,
}

fn evaluate(group: &FiniteGroup, t: &CompiledTemplate, window: &[usize], at: usize) -> usize {
    t.syllables
        .iter()
        .fold(0, |acc, &(off, e)| group.mul(acc, group.pow(window[at + off], e)))
}

pub fn build_sft(sp: &ShiftPresentation, group: &FiniteGroup) -> Result<SftGraph, RepShiftError> {
    if sp.symbols.len() != 1 {
        return Err(RepShiftError::MultiSymbolUnsupported(sp.symbols.len()));
    }
    let templates: Vec<CompiledTemplate> = sp
        .templates
        .iter()
        .map(|t| CompiledTemplate {
            syllables: t.syllables().iter().map(|s| (s.offset as usize, s.exponent)).collect(),
            span: t.max_offset() as usize,
        })
        .collect();
    let window = (sp.width() as usize).max(1);
    let n = group.order();
    let states = (n as u64).checked_pow(window as u32).filter(|&s| s <= STATE_CAP);
    let Some(states) = states else {
        return Err(RepShiftError::CapExceeded {
            states: (n as u64).saturating_pow(window as u32),
            cap: STATE_CAP,
        });
    };
    let states = states as usize;
    let tail = states / n;
    let mut successors = vec![Vec::new(); states];
    let mut buf = vec![0usize; window + 1];
    for (s, succ) in successors.iter_mut().enumerate() {
        let mut x = s;
        for k in (0..window).rev() {
            buf[k] = x % n;
            x /= n;
        }
        for g in 0..n {
            buf[window] = g;
            let ok = templates
                .iter()
                .all(|t| (0..=window - t.span).all(|at| evaluate(group, t, &buf, at) == 0));
            if ok {
                succ.push((s % tail) * n + g);
            }
        }
    }
    let essential = trim(&successors);
    Ok(SftGraph { group: group.clone(), window, successors, essential })
}

/// Repeatedly drops states without a surviving predecessor or successor.
fn trim(successors: &[Vec<usize>]) -> Vec<bool> {
    let n = successors.len();
    let mut alive = vec![true; n];
    let mut outdeg: Vec<usize> = successors.iter().map(Vec::len).collect();
    let mut indeg = vec![0usize; n];
    let mut preds = vec![Vec::new(); n];
    for (s, succ) in successors.iter().enumerate() {
        for &t in succ {
            indeg[t] += 1;
            preds[t].push(s);
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&s| indeg[s] == 0 || outdeg[s] == 0).collect();
    while let Some(s) = queue.pop_front() {
        if !alive[s] {
            continue;
        }
        alive[s] = false;
        for &t in &successors[s] {
            if alive[t] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        for &p in &preds[s] {
            if alive[p] {
                outdeg[p] -= 1;
                if outdeg[p] == 0 {
                    queue.push_back(p);
                }
            }
        }
    }
    alive
}

impl SftGraph {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn state_count(&self) -> usize {
        self.successors.len()
    }

    pub fn essential_count(&self) -> usize {
        self.essential.iter().filter(|&&e| e).count()
    }

    pub fn is_essential(&self, s: usize) -> bool {
        self.essential[s]
    }

    pub fn state(&self, elements: &[usize]) -> usize {
        assert_eq!(elements.len(), self.window);
        elements.iter().fold(0, |acc, &g| acc * self.group.order() + g)
    }

    pub fn state_elements(&self, s: usize) -> Vec<usize> {
        let n = self.group.order();
        let mut out = vec![0; self.window];
        let mut x = s;
        for k in (0..self.window).rev() {
            out[k] = x % n;
            x /= n;
        }
        out
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.successors[s]
    }

    /// Successors restricted to essential states.
    pub fn essential_successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.successors[s].iter().copied().filter(move |&t| self.essential[s] && self.essential[t])
    }

    fn essential_in_degree(&self) -> Vec<usize> {
        let mut indeg = vec![0; self.state_count()];
        for s in 0..self.state_count() {
            for t in self.essential_successors(s) {
                indeg[t] += 1;
            }
        }
        indeg
    }

    /// Strongly connected components of the essential graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.state_count();
        let mut order = Vec::new();
        let mut seen = vec![false; n];
        for root in (0..n).filter(|&s| self.essential[s]) {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some((s, i)) = stack.pop() {
                let succ: Vec<usize> = self.essential_successors(s).collect();
                if i < succ.len() {
                    stack.push((s, i + 1));
                    let t = succ[i];
                    if !seen[t] {
                        seen[t] = true;
                        stack.push((t, 0));
                    }
                } else {
                    order.push(s);
                }
            }
        }
        let mut preds = vec![Vec::new(); n];
        for s in 0..n {
            for t in self.essential_successors(s) {
                preds[t].push(s);
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for &root in order.iter().rev() {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![root];
            comp[root] = id;
            let mut i = 0;
            while i < members.len() {
                let s = members[i];
                for &p in &preds[s] {
                    if comp[p] == usize::MAX {
                        comp[p] = id;
                        members.push(p);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    fn internal_edges(&self, members: &[usize]) -> usize {
        members
            .iter()
            .map(|&s| self.essential_successors(s).filter(|t| members.binary_search(t).is_ok()).count())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusClass {
    OnlyTrivial,
    Finite(u64),
    InfiniteZeroEntropy,
    PositiveEntropy(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepCensus {
    pub group: String,
    pub classification: CensusClass,
    pub entropy: f64,
    pub state_count: u64,
    pub essential_count: u64,
}

impl RepCensus {
    /// Number of representations when finite; the trivial one counts as 1.
    pub fn finite_count(&self) -> Option<u64> {
        match self.classification {
            CensusClass::OnlyTrivial => Some(1),
            CensusClass::Finite(n) => Some(n),
            _ => None,
        }
    }
}

pub fn census(g: &SftGraph) -> RepCensus {
    census_with_tol(g, DEFAULT_TOL)
}

pub fn census_with_tol(g: &SftGraph, tol: f64) -> RepCensus {
    let essential_count = g.essential_count();
    let indeg = g.essential_in_degree();
    let permutation = (0..g.state_count())
        .filter(|&s| g.essential[s])
        .all(|s| indeg[s] == 1 && g.essential_successors(s).count() == 1);
    let mut entropy_value = 0.0;
    let classification = if permutation {
        if essential_count == 1 {
            CensusClass::OnlyTrivial
        } else {
            CensusClass::Finite(essential_count as u64)
        }
    } else if g.components().iter().all(|c| g.internal_edges(c) <= c.len()) {
        CensusClass::InfiniteZeroEntropy
    } else {
        entropy_value = entropy(g, tol);
        CensusClass::PositiveEntropy(entropy_value)
    };
    RepCensus {
        group: g.group.name().to_string(),
        classification,
        entropy: entropy_value,
        state_count: g.state_count() as u64,
        essential_count: essential_count as u64,
    }
}

/// Natural log of the spectral radius of the essential adjacency matrix.
/// Per component, power iteration on `A + I` with exact integer vectors
/// brackets the Perron root between Collatz–Wielandt bounds.
pub fn entropy(g: &SftGraph, tol: f64) -> f64 {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut best: f64 = 1.0;
    for members in g.components() {
        if g.internal_edges(&members) <= members.len() {
            continue;
        }
        let local: Vec<Vec<usize>> = members
            .iter()
            .map(|&s| {
                g.essential_successors(s)
                    .filter_map(|t| members.binary_search(&t).ok())
                    .collect()
            })
            .collect();
        best = best.max(perron_root(&local, tol) - 1.0);
    }
    best.ln().max(0.0)
}

/// Perron root of `A + I` for an irreducible 0/1 matrix given by adjacency
/// lists.
fn perron_root(adj: &[Vec<usize>], tol: f64) -> f64 {
    const BITS: u64 = 160;
    let n = adj.len();
    let mut x = vec![BigUint::one(); n];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..200_000 {
        let y: Vec<BigUint> = (0..n)
            .map(|s| adj[s].iter().fold(x[s].clone(), |acc, &t| acc + &x[t]))
            .collect();
        let (l, h) = (0..n).fold((f64::INFINITY, 0.0f64), |(l, h), i| {
            let r = ratio(&y[i], &x[i]);
            (l.min(r), h.max(r))
        });
        lo = lo.max(l);
        hi = hi.min(h);
        if hi - lo <= tol * lo {
            break;
        }
        let top = y.iter().map(BigUint::bits).max().unwrap_or(0);
        let shift = top.saturating_sub(BITS);
        x = y
            .into_iter()
            .map(|v| {
                // round up so that every entry stays positive
                let q: BigUint = &v >> shift;
                if (&q << shift) == v { q } else { q + 1u32 }
            })
            .collect();
    }
    (lo + hi) / 2.0
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(1000);
    let fa = (a >> shift).to_f64().unwrap_or(f64::MAX);
    let fb = (b >> shift).to_f64().unwrap_or(f64::MAX);
    if fb.is_zero() {
        f64::INFINITY
    } else {
        fa / fb
    }
}

/// One periodic point of the shift: its labels over one minimal period,
/// starting at index 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicLabeling {
    pub period: usize,
    pub labels: Vec<String>,
}

/// Every point whose period divides `n`, each phase listed separately.
pub fn enumerate_periodic(g: &SftGraph, n: usize) -> Vec<PeriodicLabeling> {
    assert!(n >= 1, "period must be positive");
    let mut out = Vec::new();
    for start in (0..g.state_count()).filter(|&s| g.essential[s]) {
        let mut path = vec![start];
        let mut iters: Vec<Vec<usize>> = vec![g.essential_successors(start).collect()];
        while let Some(options) = iters.last_mut() {
            match options.pop() {
                None => {
                    iters.pop();
                    path.pop();
                }
                Some(t) if path.len() == n => {
                    if t == start {
                        out.push(labeling(g, &path));
                    }
                }
                Some(t) => {
                    path.push(t);
                    iters.push(g.essential_successors(t).collect());
                }
            }
        }
    }
    out.sort_by(|a, b| (a.period, &a.labels).cmp(&(b.period, &b.labels)));
    out
}

fn labeling(g: &SftGraph, path: &[usize]) -> PeriodicLabeling {
    let labels: Vec<usize> = path.iter().map(|&s| g.state_elements(s)[0]).collect();
    let n = labels.len();
    let period = (1..=n)
        .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| labels[i] == labels[(i + p) % n]))
        .expect("n itself is a period");
    PeriodicLabeling {
        period,
        labels: labels[..period].iter().map(|&x| g.group.element_name(x).to_string()).collect(),
    }
}

/// Number of periodic points of period dividing `n`: the trace of `A^n`.
pub fn periodic_point_count(g: &SftGraph, n: usize) -> BigUint {
    let size = g.state_count();
    let mut total = BigUint::zero();
    for start in (0..size).filter(|&s| g.essential[s]) {
        let mut v: Vec<BigUint> = vec![BigUint::zero(); size];
        v[start] = BigUint::one();
        for _ in 0..n {
            let mut w = vec![BigUint::zero(); size];
            for (s, vs) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for t in g.essential_successors(s) {
                    w[t] += vs;
                }
            }
            v = w;
        }
        total += &v[start];
    }
    total
}
