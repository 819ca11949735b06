//! Copy hypergraphs for the finite self-dual, classical and dual Ramsey
//! statements, and the search for minimal witnesses `N`.
//!
//! For `K ≤ M ≤ N` the vertices are the elements of `F_{N,K}` (or the
//! injection / surjection reading of it) and each anchor `a ∈ F_{N,M}`
//! contributes the edge `F_{M,K} · a`. `N` is a witness for `(K, M, l)` when
//! every `l`-coloring of the vertices has a monochromatic edge.

mod engine;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::connection::{
    connections, increasing_injections, rigid_surjections, Alphabet, Mode, SpaceElement, SpaceSpec,
};
use crate::error::{Error, Result};

pub use engine::{search_bad_coloring, Hypergraph, SearchConfig, DEFAULT_NODE_BUDGET};

/// The vertex set a coloring lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ColoredSpace {
    #[serde(rename = "connection_space")]
    Space(SpaceSpec),
    /// All words of length `N` over the alphabet, in lexicographic order.
    #[serde(rename = "words")]
    Words {
        alphabet: Alphabet,
        #[serde(rename = "N")]
        length: usize,
    },
}

impl ColoredSpace {
    pub fn vertex_count(&self) -> Result<usize> {
        match *self {
            ColoredSpace::Space(spec) => Ok(crate::connection::enumerate_space(spec)?.len()),
            ColoredSpace::Words { alphabet, length } => alphabet
                .size()
                .checked_pow(length as u32)
                .ok_or_else(|| Error::domain("word space too large")),
        }
    }
}

/// A total coloring of an enumerated space, indexed by enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub space: ColoredSpace,
    #[serde(rename = "l")]
    pub palette: usize,
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn new(space: ColoredSpace, palette: usize, colors: Vec<usize>) -> Result<Self> {
        let c = Coloring { space, palette, colors };
        c.check()?;
        Ok(c)
    }

    /// Totality and range; used after deserializing a certificate.
    pub fn check(&self) -> Result<()> {
        if self.palette == 0 {
            return Err(Error::domain("a coloring needs at least one color"));
        }
        let expected = self.space.vertex_count()?;
        if self.colors.len() != expected {
            return Err(Error::domain(format!(
                "coloring has {} entries but the space has {expected} elements",
                self.colors.len()
            )));
        }
        if let Some(bad) = self.colors.iter().find(|&&c| c >= self.palette) {
            return Err(Error::domain(format!("color {bad} out of range 0..{}", self.palette)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Coloring = serde_json::from_str(text)
            .map_err(|e| Error::Parse { position: e.column(), message: e.to_string() })?;
        c.check()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyEdge {
    /// The first anchor (in enumeration order) that produced this vertex set.
    pub anchor: SpaceElement,
    pub members: Vec<u32>,
}

/// Vertices of `F_{N,K}` in some mode, with one edge per distinct copy.
#[derive(Debug, Clone)]
pub struct CopyFamily {
    pub space: SpaceSpec,
    pub inner: usize,
    pub vertices: Vec<SpaceElement>,
    pub edges: Vec<CopyEdge>,
    /// `|F_{M,K}|` in this mode: the size of each copy before deduplication.
    pub copy_size: usize,
}

impl CopyFamily {
    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph::new(self.vertices.len(), self.edges.iter().map(|e| e.members.clone()).collect())
    }
}

fn check_parameters(n: usize, k: usize, m: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("K must be positive"));
    }
    if !(k <= m && m <= n) {
        return Err(Error::domain(format!("need K ≤ M ≤ N, got K={k} M={m} N={n}")));
    }
    Ok(())
}

fn index_of<T: std::hash::Hash + Eq + Clone>(items: &[T]) -> HashMap<T, u32> {
    items.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect()
}

fn collect_edges(
    anchors: Vec<SpaceElement>,
    mut members_of: impl FnMut(&SpaceElement) -> Vec<u32>,
) -> Vec<CopyEdge> {
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for anchor in anchors {
        let mut members = members_of(&anchor);
        members.sort_unstable();
        members.dedup();
        if seen.insert(members.clone()) {
            edges.push(CopyEdge { anchor, members });
        }
    }
    edges
}

/// Builds the copy hypergraph on `F_{N,K}` for copies of `F_{M,K}`.
pub fn copy_family(n: usize, k: usize, m: usize, mode: Mode) -> Result<CopyFamily> {
    check_parameters(n, k, m)?;
    let a = Alphabet::EMPTY;
    let space = SpaceSpec::new(a, n, k, mode);
    let (vertices, edges, copy_size) = match mode {
        Mode::Connections => {
            let verts = connections(a, n, k);
            let index = index_of(&verts);
            let small = connections(a, m, k);
            let anchors = connections(a, n, m).into_iter().map(SpaceElement::Connection).collect();
            let edges = collect_edges(anchors, |anchor| {
                let SpaceElement::Connection(anchor) = anchor else { unreachable!() };
                small
                    .iter()
                    .map(|x| index[&x.compose(anchor).expect("K ≤ M ≤ N")])
                    .collect()
            });
            let size = small.len();
            (verts.into_iter().map(SpaceElement::Connection).collect(), edges, size)
        }
        Mode::InjectionsOnly => {
            let verts = increasing_injections(k, n);
            let index = index_of(&verts);
            let small = increasing_injections(k, m);
            let anchors = increasing_injections(m, n).into_iter().map(SpaceElement::Injection).collect();
            let edges = collect_edges(anchors, |anchor| {
                let SpaceElement::Injection(outer) = anchor else { unreachable!() };
                small
                    .iter()
                    .map(|j| index[&j.iter().map(|&x| outer[x]).collect::<Vec<_>>()])
                    .collect()
            });
            let size = small.len();
            (verts.into_iter().map(SpaceElement::Injection).collect(), edges, size)
        }
        Mode::SurjectionsOnly => {
            let verts = rigid_surjections(a, n, k);
            let index = index_of(&verts);
            let small = rigid_surjections(a, m, k);
            let anchors = rigid_surjections(a, n, m).into_iter().map(SpaceElement::Surjection).collect();
            let edges = collect_edges(anchors, |anchor| {
                let SpaceElement::Surjection(s0) = anchor else { unreachable!() };
                small
                    .iter()
                    .map(|u| index[&u.compose(s0).expect("K ≤ M ≤ N")])
                    .collect()
            });
            let size = small.len();
            (verts.into_iter().map(SpaceElement::Surjection).collect(), edges, size)
        }
    };
    Ok(CopyFamily { space, inner: m, vertices, edges, copy_size })
}

/// The first monochromatic copy under `coloring`, with its color.
pub fn find_mono_copy(coloring: &Coloring, family: &CopyFamily) -> Result<Option<(SpaceElement, usize)>> {
    if coloring.space != ColoredSpace::Space(family.space) {
        return Err(Error::domain("coloring and copy family live on different spaces"));
    }
    if coloring.colors.len() != family.vertices.len() {
        return Err(Error::domain("coloring is not total on the vertex set"));
    }
    Ok(family
        .hypergraph()
        .first_monochromatic(&coloring.colors)
        .map(|(edge, color)| (family.edges[edge].anchor.clone(), color)))
}

/// A coloring of `F_{N,K}` with no monochromatic copy of `F_{M,K}`, if any.
pub fn find_bad_coloring(
    n: usize,
    k: usize,
    m: usize,
    palette: usize,
    mode: Mode,
    config: &SearchConfig,
) -> Result<Option<Coloring>> {
    let family = copy_family(n, k, m, mode)?;
    let found = search_bad_coloring(&family.hypergraph(), palette, config)?;
    Ok(found.map(|colors| Coloring { space: ColoredSpace::Space(family.space), palette, colors }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    /// `n` is the least tested size with no bad coloring. `previous` is the
    /// bad coloring at `n - 1` when that size was tested.
    Minimal { n: usize, previous: Option<Coloring> },
    /// Every size up to `max_n` admits a bad coloring; the last one is kept.
    NotWithin { max_n: usize, last_bad: Option<Coloring> },
}

impl fmt::Display for WitnessOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessOutcome::Minimal { n, .. } => write!(f, "{n}"),
            WitnessOutcome::NotWithin { max_n, .. } => write!(f, "none <= {max_n}"),
        }
    }
}

/// Scans sizes upward from `start`, testing each independently, and stops at
/// the first size for which `bad_at` reports no bad coloring.
pub(crate) fn scan_sizes(
    start: usize,
    max_n: usize,
    mut bad_at: impl FnMut(usize) -> Result<Option<Coloring>>,
) -> Result<WitnessOutcome> {
    let mut last_bad: Option<(usize, Coloring)> = None;
    for n in start..=max_n {
        match bad_at(n)? {
            Some(c) => last_bad = Some((n, c)),
            None => {
                let previous = last_bad.filter(|(at, _)| at + 1 == n).map(|(_, c)| c);
                return Ok(WitnessOutcome::Minimal { n, previous });
            }
        }
    }
    Ok(WitnessOutcome::NotWithin { max_n, last_bad: last_bad.map(|(_, c)| c) })
}

/// Least `N ∈ [M, max_n]` that witnesses the finite Ramsey statement for
/// `(K, M, l)` in the given mode.
pub fn min_witness_n(
    k: usize,
    m: usize,
    palette: usize,
    mode: Mode,
    max_n: usize,
    config: &SearchConfig,
) -> Result<WitnessOutcome> {
    check_parameters(m, k, m)?;
    if palette == 0 {
        return Err(Error::domain("at least one color is required"));
    }
    scan_sizes(m, max_n, |n| find_bad_coloring(n, k, m, palette, mode, config))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subsets(n: usize, size: usize) -> HashSet<Vec<u32>> {
        increasing_injections(size, n)
            .into_iter()
            .map(|v| v.into_iter().map(|x| x as u32).collect())
            .collect()
    }

    #[test]
    fn k1_copies_are_all_m_subsets() {
        for n in 1..=7 {
            for m in 1..=3.min(n) {
                let fam = copy_family(n, 1, m, Mode::Connections).unwrap();
                // vertex index equals the chosen point for K = 1
                for (i, v) in fam.vertices.iter().enumerate() {
                    let SpaceElement::Connection(c) = v else { panic!() };
                    assert_eq!(c.choice(), &[i]);
                }
                let edges: HashSet<Vec<u32>> = fam.edges.iter().map(|e| e.members.clone()).collect();
                assert_eq!(edges, subsets(n, m), "N={n} M={m}");
            }
        }
    }

    #[test]
    fn injection_family_example() {
        let fam = copy_family(4, 2, 3, Mode::InjectionsOnly).unwrap();
        assert_eq!(fam.vertices.len(), 6);
        assert_eq!(fam.edges.len(), 4);
        assert!(fam.edges.iter().all(|e| e.members.len() == 3));
    }

    #[test]
    fn m_equal_k_gives_singletons() {
        for mode in [Mode::Connections, Mode::InjectionsOnly, Mode::SurjectionsOnly] {
            let fam = copy_family(4, 2, 2, mode).unwrap();
            assert!(fam.edges.iter().all(|e| e.members.len() == 1));
            assert_eq!(find_bad_coloring(4, 2, 2, 2, mode, &SearchConfig::default()).unwrap(), None);
        }
    }

    #[test]
    fn mono_copy_examples() {
        let fam = copy_family(3, 1, 2, Mode::Connections).unwrap();
        let space = ColoredSpace::Space(fam.space);
        let constant = Coloring::new(space, 1, vec![0; 3]).unwrap();
        let (anchor, color) = find_mono_copy(&constant, &fam).unwrap().unwrap();
        assert_eq!(anchor, fam.edges[0].anchor);
        assert_eq!(color, 0);

        let two = Coloring::new(space, 2, vec![0, 1, 0]).unwrap();
        let (anchor, color) = find_mono_copy(&two, &fam).unwrap().unwrap();
        let edge = fam.edges.iter().find(|e| e.anchor == anchor).unwrap();
        assert_eq!(edge.members, vec![0, 2]);
        assert_eq!(color, 0);

        let rainbow = Coloring::new(space, 3, vec![0, 1, 2]).unwrap();
        assert_eq!(find_mono_copy(&rainbow, &fam).unwrap(), None);

        let other = copy_family(4, 1, 2, Mode::Connections).unwrap();
        assert!(find_mono_copy(&rainbow, &other).is_err());
    }

    #[test]
    fn bad_coloring_examples() {
        let cfg = SearchConfig::default();
        let bad = find_bad_coloring(2, 1, 2, 2, Mode::Connections, &cfg).unwrap().unwrap();
        assert_eq!(bad.colors, vec![0, 1]);
        assert_eq!(find_bad_coloring(3, 1, 2, 2, Mode::Connections, &cfg).unwrap(), None);

        let pentagon = find_bad_coloring(5, 2, 3, 2, Mode::InjectionsOnly, &cfg).unwrap().unwrap();
        let fam = copy_family(5, 2, 3, Mode::InjectionsOnly).unwrap();
        assert_eq!(find_mono_copy(&pentagon, &fam).unwrap(), None);
    }

    #[test]
    fn minimal_witness_examples() {
        let cfg = SearchConfig::default();
        match min_witness_n(1, 2, 2, Mode::Connections, 8, &cfg).unwrap() {
            WitnessOutcome::Minimal { n, previous } => {
                assert_eq!(n, 3);
                assert_eq!(previous.unwrap().colors, vec![0, 1]);
            }
            other => panic!("{other:?}"),
        }
        match min_witness_n(1, 3, 2, Mode::Connections, 4, &cfg).unwrap() {
            WitnessOutcome::NotWithin { max_n: 4, last_bad: Some(c) } => {
                assert_eq!(c.colors.len(), 4)
            }
            other => panic!("{other:?}"),
        }
        assert!(min_witness_n(0, 2, 2, Mode::Connections, 4, &cfg).is_err());
        assert!(min_witness_n(3, 2, 2, Mode::Connections, 4, &cfg).is_err());
    }

    #[test]
    fn coloring_json_round_trip() {
        let space = ColoredSpace::Space(SpaceSpec::new(Alphabet(0), 3, 1, Mode::Connections));
        let c = Coloring::new(space, 2, vec![0, 1, 1]).unwrap();
        let text = c.to_json();
        assert_eq!(
            text,
            r#"{"space":{"kind":"connection_space","alphabet":0,"L":3,"K":1,"mode":"connections"},"l":2,"colors":[0,1,1]}"#
        );
        assert_eq!(Coloring::from_json(&text).unwrap(), c);
        assert!(Coloring::from_json(r#"{"space":{"kind":"words","alphabet":2,"N":1},"l":2,"colors":[0]}"#).is_err());
        assert!(Coloring::new(space, 2, vec![0, 2, 1]).is_err());
    }
}
