use std::collections::HashMap;

use proptest::prelude::*;
use proptest::sample::Index;

use selfdual_core::connection::{connections, reduct_witness, Alphabet, Connection, SpaceElement};
use selfdual_core::search::{
    copy_family, find_mono_copy, search_bad_coloring, ColoredSpace, Coloring, Hypergraph, SearchConfig,
};
use selfdual_core::{Mode, Parallelism, SpaceSpec};

/// Over the empty alphabet `F_{L,0}` is empty for `L > 0`.
fn pick(alphabet: usize, len: usize, image: usize, at: Index) -> Option<Connection> {
    let all = connections(Alphabet(alphabet), len, image);
    (!all.is_empty()).then(|| all[at.index(all.len())].clone())
}

/// A chain `z ∈ F_{N,L}`, `y ∈ F_{L,M}`, `x ∈ F_{M,K}` with `K ≤ M ≤ L ≤ N`.
fn chain() -> impl Strategy<Value = (Connection, Connection, Connection)> {
    (0usize..=1, 0usize..=6)
        .prop_flat_map(|(a, n)| (Just(a), Just(n), 0..=n))
        .prop_flat_map(|(a, n, l)| (Just(a), Just(n), Just(l), 0..=l))
        .prop_flat_map(|(a, n, l, m)| (Just(a), Just(n), Just(l), Just(m), 0..=m))
        .prop_flat_map(|(a, n, l, m, k)| (Just((a, n, l, m, k)), any::<Index>(), any::<Index>(), any::<Index>()))
        .prop_filter_map("empty space", |((a, n, l, m, k), i, j, h)| {
            Some((pick(a, m, k, i)?, pick(a, l, m, j)?, pick(a, n, l, h)?))
        })
}

fn connection() -> impl Strategy<Value = Connection> {
    (0usize..=2, 0usize..=7)
        .prop_flat_map(|(a, len)| (Just(a), Just(len), 0..=len, any::<Index>()))
        .prop_filter_map("empty space", |(a, len, k, at)| pick(a, len, k, at))
}

fn hypergraph() -> impl Strategy<Value = (Hypergraph, usize)> {
    (1usize..=3)
        .prop_flat_map(|palette| {
            let max_vertices = match palette {
                1 => 12usize,
                2 => 14,
                _ => 9,
            };
            (Just(palette), 1..=max_vertices)
        })
        .prop_flat_map(|(palette, v): (usize, usize)| {
            let edge = proptest::collection::btree_set(0..v as u32, 1..=v.min(4));
            (Just(palette), Just(v), proptest::collection::vec(edge, 0..=12))
        })
        .prop_map(|(palette, v, edges)| {
            let edges = edges.into_iter().map(|e| e.into_iter().collect()).collect();
            (Hypergraph::new(v, edges), palette)
        })
}

fn brute_force(graph: &Hypergraph, palette: usize) -> Option<Vec<usize>> {
    let total = palette.pow(graph.vertices as u32);
    (0..total).find_map(|mut code| {
        let mut colors = vec![0; graph.vertices];
        for slot in colors.iter_mut().rev() {
            *slot = code % palette;
            code /= palette;
        }
        graph.first_monochromatic(&colors).is_none().then_some(colors)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_closed_and_associative((x, y, z) in chain()) {
        let xy = x.compose(&y).unwrap();
        let yz = y.compose(&z).unwrap();
        let left = xy.compose(&z).unwrap();
        let right = x.compose(&yz).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.len(), z.len());
        prop_assert_eq!(left.image(), x.image());
        let rebuilt = Connection::new(left.alphabet(), left.tokens().to_vec(), left.choice().to_vec()).ok();
        prop_assert_eq!(rebuilt, Some(left));
    }

    #[test]
    fn segments_are_coherent(c in connection()) {
        let segs = c.segments();
        prop_assert_eq!(segs.len(), c.image() + 1);
        prop_assert_eq!(segs.last(), Some(&c));
        for (n, s) in segs.iter().enumerate() {
            prop_assert_eq!(s.image(), n);
            prop_assert!(s.is_initial_segment_of(&c));
            for (k, earlier) in segs[..=n].iter().enumerate() {
                prop_assert_eq!(&s.segment(k).unwrap(), earlier);
            }
        }
    }

    #[test]
    fn composites_are_reducts_with_recoverable_witness((x, y, _z) in chain()) {
        let xy = x.compose(&y).unwrap();
        prop_assert!(xy.is_reduct_of(&y));
        prop_assert_eq!(reduct_witness(&xy, &y).unwrap(), Some(x));
        if xy != y {
            prop_assert!(!y.is_reduct_of(&xy));
        }
    }

    #[test]
    fn engine_agrees_with_brute_force((graph, palette) in hypergraph()) {
        let expected = brute_force(&graph, palette);
        for par in [Parallelism::Sequential, Parallelism::Parallel] {
            let cfg = SearchConfig { parallelism: par, ..Default::default() };
            let got = search_bad_coloring(&graph, palette, &cfg).unwrap();
            prop_assert_eq!(&got, &expected);
        }
    }
}

fn spaces() -> (selfdual_core::search::CopyFamily, selfdual_core::search::CopyFamily, selfdual_core::search::CopyFamily) {
    (
        copy_family(5, 2, 3, Mode::Connections).unwrap(),
        copy_family(5, 2, 3, Mode::InjectionsOnly).unwrap(),
        copy_family(5, 2, 3, Mode::SurjectionsOnly).unwrap(),
    )
}

fn index_of(family: &selfdual_core::search::CopyFamily) -> HashMap<SpaceElement, usize> {
    family.vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // Pulling a coloring back along `c ↦ choice(c)` or `c ↦ surjection(c)`
    // can only create monochromatic copies, never remove them.
    #[test]
    fn pulled_back_colorings_keep_monochromatic_copies(
        inj_colors in proptest::collection::vec(0usize..2, 10),
        surj_colors in proptest::collection::vec(0usize..2, 15),
    ) {
        let (conn, inj, surj) = spaces();
        prop_assert_eq!(inj.vertices.len(), 10);
        prop_assert_eq!(surj.vertices.len(), 15);
        let inj_index = index_of(&inj);
        let surj_index = index_of(&surj);
        let pull = |f: &dyn Fn(&Connection) -> usize| -> Vec<usize> {
            conn.vertices
                .iter()
                .map(|v| match v {
                    SpaceElement::Connection(c) => f(c),
                    other => panic!("unexpected vertex {other}"),
                })
                .collect()
        };
        let by_choice = pull(&|c| inj_colors[inj_index[&SpaceElement::Injection(c.choice().to_vec())]]);
        let by_surjection = pull(&|c| surj_colors[surj_index[&SpaceElement::Surjection(c.surjection().clone())]]);

        let colored = |family: &selfdual_core::search::CopyFamily, colors: Vec<usize>| {
            Coloring::new(ColoredSpace::Space(family.space), 2, colors).unwrap()
        };
        let conn_bad_choice = find_mono_copy(&colored(&conn, by_choice), &conn).unwrap().is_none();
        let conn_bad_surj = find_mono_copy(&colored(&conn, by_surjection), &conn).unwrap().is_none();
        let inj_bad = find_mono_copy(&colored(&inj, inj_colors.clone()), &inj).unwrap().is_none();
        let surj_bad = find_mono_copy(&colored(&surj, surj_colors.clone()), &surj).unwrap().is_none();
        prop_assert!(!conn_bad_choice || inj_bad);
        prop_assert!(!conn_bad_surj || surj_bad);
    }
}

#[test]
fn copy_edges_are_sound_and_full_size() {
    for (n, k, m) in [(4, 1, 2), (4, 2, 3), (5, 2, 3), (5, 2, 4)] {
        let family = copy_family(n, k, m, Mode::Connections).unwrap();
        assert_eq!(family.copy_size, connections(Alphabet::EMPTY, m, k).len());
        let anchors = connections(Alphabet::EMPTY, n, m).len();
        assert!(family.edges.len() <= anchors);
        for edge in &family.edges {
            let SpaceElement::Connection(anchor) = &edge.anchor else { panic!("anchor kind") };
            assert_eq!(edge.members.len(), family.copy_size);
            for &v in &edge.members {
                let SpaceElement::Connection(member) = &family.vertices[v as usize] else { panic!("vertex kind") };
                let w = reduct_witness(member, anchor).unwrap().expect("member is a reduct of its anchor");
                assert_eq!(w.len(), m);
                assert_eq!(w.image(), k);
            }
        }
    }
}

#[test]
fn copy_sizes_in_restricted_modes() {
    for (mode, spec) in [
        (Mode::InjectionsOnly, SpaceSpec::new(Alphabet::EMPTY, 5, 2, Mode::InjectionsOnly)),
        (Mode::SurjectionsOnly, SpaceSpec::new(Alphabet::EMPTY, 5, 2, Mode::SurjectionsOnly)),
    ] {
        let family = copy_family(5, 2, 3, mode).unwrap();
        assert_eq!(family.space, spec);
        assert_eq!(family.copy_size, 3);
        assert!(family.edges.iter().all(|e| e.members.len() == 3));
    }
}
