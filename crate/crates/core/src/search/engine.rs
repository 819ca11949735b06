//! Backtracking search for colorings with no monochromatic edge.
//!
//! Vertices are colored in index order, colors ascending. A vertex may only
//! take a color at most one above the largest color used so far, which is
//! enough to make the first bad coloring found the lexicographically least
//! one. Each edge keeps a per-color counter; an edge whose counter reaches its
//! size is monochromatic and cuts the branch.
//!
//! In parallel mode the tree is cut at a fixed depth and the resulting
//! subtrees are searched concurrently; the earliest subtree that yields a
//! coloring wins, which reproduces the sequential answer exactly.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub parallelism: Parallelism,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { node_budget: DEFAULT_NODE_BUDGET, parallelism: Parallelism::default() }
    }
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig { parallelism: Parallelism::Sequential, ..Default::default() }
    }
}

/// A finite hypergraph on vertices `0..vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub vertices: usize,
    /// Each edge is a sorted, duplicate-free vertex list.
    pub edges: Vec<Vec<u32>>,
}

impl Hypergraph {
    pub fn new(vertices: usize, edges: Vec<Vec<u32>>) -> Self {
        Hypergraph { vertices, edges }
    }

    /// Index of the first monochromatic edge under `colors`, with its color.
    pub fn first_monochromatic(&self, colors: &[usize]) -> Option<(usize, usize)> {
        self.edges.iter().enumerate().find_map(|(i, e)| {
            let first = colors[*e.first()? as usize];
            e.iter().all(|&v| colors[v as usize] == first).then_some((i, first))
        })
    }
}

struct Budget<'a> {
    limit: u64,
    shared: &'a AtomicU64,
    local: u64,
}

impl Budget<'_> {
    const FLUSH: u64 = 1024;

    fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local == Self::FLUSH {
            let total = self.shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
            self.local = 0;
            if total > self.limit {
                return Err(Error::BoundExceeded { budget: self.limit });
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        let total = self.shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if total > self.limit {
            return Err(Error::BoundExceeded { budget: self.limit });
        }
        Ok(())
    }
}

struct State<'h> {
    graph: &'h Searcher,
    colors: Vec<usize>,
    // running maximum of `colors`
    maxes: Vec<usize>,
    counts: Vec<u32>,
}

struct Searcher {
    vertices: usize,
    palette: usize,
    incident: Vec<Vec<u32>>,
    sizes: Vec<u32>,
}

impl Searcher {
    fn new(graph: &Hypergraph, palette: usize) -> Self {
        let mut incident = vec![Vec::new(); graph.vertices];
        for (i, e) in graph.edges.iter().enumerate() {
            for &v in e {
                incident[v as usize].push(i as u32);
            }
        }
        Searcher {
            vertices: graph.vertices,
            palette,
            incident,
            sizes: graph.edges.iter().map(|e| e.len() as u32).collect(),
        }
    }
}

enum Step {
    Found,
    Exhausted,
    Cancelled,
}

impl<'h> State<'h> {
    fn new(graph: &'h Searcher) -> Self {
        State {
            graph,
            colors: Vec::with_capacity(graph.vertices),
            maxes: Vec::with_capacity(graph.vertices),
            counts: vec![0; graph.sizes.len() * graph.palette],
        }
    }

    fn color_limit(&self) -> usize {
        (self.maxes.last().map_or(0, |m| m + 1) + 1).min(self.graph.palette)
    }

    /// Colors the next vertex; returns false (and leaves no trace) if that
    /// completes a monochromatic edge.
    fn push(&mut self, color: usize) -> bool {
        let v = self.colors.len();
        let l = self.graph.palette;
        let incident = &self.graph.incident[v];
        for (done, &e) in incident.iter().enumerate() {
            let slot = e as usize * l + color;
            self.counts[slot] += 1;
            if self.counts[slot] == self.graph.sizes[e as usize] {
                for &undo in &incident[..=done] {
                    self.counts[undo as usize * l + color] -= 1;
                }
                return false;
            }
        }
        self.colors.push(color);
        self.maxes.push(self.maxes.last().map_or(color, |&m| m.max(color)));
        true
    }

    fn pop(&mut self) {
        let v = self.colors.len() - 1;
        let color = self.colors.pop().expect("non-empty");
        self.maxes.pop();
        let l = self.graph.palette;
        for &e in &self.graph.incident[v] {
            self.counts[e as usize * l + color] -= 1;
        }
    }

    fn search(&mut self, budget: &mut Budget<'_>, cancel: &dyn Fn() -> bool) -> Result<Step> {
        if self.colors.len() == self.graph.vertices {
            return Ok(Step::Found);
        }
        budget.tick()?;
        if budget.local == 0 && cancel() {
            return Ok(Step::Cancelled);
        }
        for color in 0..self.color_limit() {
            if self.push(color) {
                match self.search(budget, cancel)? {
                    Step::Exhausted => {}
                    done => return Ok(done),
                }
                self.pop();
            }
        }
        Ok(Step::Exhausted)
    }

    /// Every conflict-free prefix of length `depth`, in search order.
    fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<usize>>) {
        if self.colors.len() == depth {
            out.push(self.colors.clone());
            return;
        }
        for color in 0..self.color_limit() {
            if self.push(color) {
                self.prefixes(depth, out);
                self.pop();
            }
        }
    }
}

/// Searches for a coloring of `graph` with `palette` colors and no
/// monochromatic edge. Returns the lexicographically least one, or `None` if
/// every coloring has a monochromatic edge.
pub fn search_bad_coloring(
    graph: &Hypergraph,
    palette: usize,
    config: &SearchConfig,
) -> Result<Option<Vec<usize>>> {
    if palette == 0 {
        return Err(Error::domain("at least one color is required"));
    }
    let searcher = Searcher::new(graph, palette);
    let spent = AtomicU64::new(0);
    let par = config.parallelism.effective();

    if par == Parallelism::Sequential || graph.vertices < 12 {
        let mut state = State::new(&searcher);
        let mut budget = Budget { limit: config.node_budget, shared: &spent, local: 0 };
        let step = state.search(&mut budget, &|| false)?;
        budget.finish()?;
        return Ok(match step {
            Step::Found => Some(state.colors),
            Step::Exhausted | Step::Cancelled => None,
        });
    }

    let mut root = State::new(&searcher);
    let mut prefixes = Vec::new();
    let depth = split_depth(graph.vertices, palette);
    root.prefixes(depth, &mut prefixes);

    let winner = AtomicUsize::new(usize::MAX);
    let outcome = exec::find_map_first(&prefixes, par, |index, prefix| {
        if winner.load(Ordering::Relaxed) < index {
            return None;
        }
        let mut state = State::new(&searcher);
        for &c in prefix {
            let ok = state.push(c);
            debug_assert!(ok);
        }
        let mut budget = Budget { limit: config.node_budget, shared: &spent, local: 0 };
        let cancel = || winner.load(Ordering::Relaxed) < index;
        let result = state.search(&mut budget, &cancel).and_then(|step| {
            budget.finish()?;
            Ok(step)
        });
        match result {
            Ok(Step::Found) => {
                winner.fetch_min(index, Ordering::Relaxed);
                Some(Ok(state.colors))
            }
            // a cancelled subtree lies after one that already succeeded
            Ok(Step::Exhausted | Step::Cancelled) => None,
            Err(e) => Some(Err(e)),
        }
    });
    outcome.transpose()
}

// Deep enough to give each worker several subtrees.
fn split_depth(vertices: usize, palette: usize) -> usize {
    let mut depth = 1;
    let mut leaves = 1usize;
    while depth < vertices && leaves < 256 {
        leaves = leaves.saturating_mul(palette.min(depth + 1));
        depth += 1;
    }
    depth.min(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive(graph: &Hypergraph, palette: usize) -> Option<Vec<usize>> {
        let n = graph.vertices;
        let total = palette.pow(n as u32);
        (0..total).find_map(|mut code| {
            let mut colors = vec![0; n];
            for slot in colors.iter_mut().rev() {
                *slot = code % palette;
                code /= palette;
            }
            graph.first_monochromatic(&colors).is_none().then_some(colors)
        })
    }

    fn triangle_hypergraph(n: u32) -> Hypergraph {
        // vertices = pairs of {0..n}, edges = triangles
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                pairs.push((a, b));
            }
        }
        let idx = |a: u32, b: u32| pairs.iter().position(|&p| p == (a, b)).unwrap() as u32;
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    edges.push(vec![idx(a, b), idx(a, c), idx(b, c)]);
                }
            }
        }
        Hypergraph::new(pairs.len(), edges)
    }

    #[test]
    fn pentagon_and_hexagon() {
        let k5 = triangle_hypergraph(5);
        let bad = search_bad_coloring(&k5, 2, &SearchConfig::default()).unwrap().unwrap();
        assert!(k5.first_monochromatic(&bad).is_none());
        assert_eq!(Some(bad), exhaustive(&k5, 2));

        let k6 = triangle_hypergraph(6);
        for config in [SearchConfig::sequential(), SearchConfig::default()] {
            assert_eq!(search_bad_coloring(&k6, 2, &config).unwrap(), None);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let k5 = triangle_hypergraph(5);
        for palette in 1..=3 {
            let a = search_bad_coloring(&k5, palette, &SearchConfig::sequential()).unwrap();
            let b = search_bad_coloring(&k5, palette, &SearchConfig::default()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn first_found_is_lexicographically_least() {
        // A path-like hypergraph where many colorings are bad.
        let g = Hypergraph::new(6, vec![vec![0, 1], vec![1, 2, 3], vec![3, 4], vec![2, 5]]);
        for palette in 1..=3 {
            let got = search_bad_coloring(&g, palette, &SearchConfig::default()).unwrap();
            assert_eq!(got, exhaustive(&g, palette));
        }
    }

    #[test]
    fn degenerate_graphs() {
        let single = Hypergraph::new(3, vec![vec![1]]);
        assert_eq!(search_bad_coloring(&single, 4, &SearchConfig::default()).unwrap(), None);
        let none = Hypergraph::new(2, vec![]);
        assert_eq!(
            search_bad_coloring(&none, 1, &SearchConfig::default()).unwrap(),
            Some(vec![0, 0])
        );
        assert!(search_bad_coloring(&none, 0, &SearchConfig::default()).is_err());
    }

    #[test]
    fn budget_is_reported_not_swallowed() {
        let k6 = triangle_hypergraph(6);
        for parallelism in [Parallelism::Sequential, Parallelism::Parallel] {
            let config = SearchConfig { node_budget: 10, parallelism };
            assert!(matches!(
                search_bad_coloring(&k6, 2, &config),
                Err(Error::BoundExceeded { budget: 10 })
            ));
        }
    }
}
