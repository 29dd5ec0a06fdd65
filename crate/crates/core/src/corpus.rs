//! Fixture subbases and generators for finite domain spaces.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::finitespace::FiniteSpace;
use crate::setfam::{GroundSet, SetFamily, Subbase, SubsetMask};

fn ground(n: usize) -> GroundSet {
    GroundSet::new(n).expect("fixture ground size")
}

/// All intervals `{i..j}` of the chain `0 < 1 < .. < n-1`.
pub fn chain(n: usize) -> Subbase {
    let masks = (0..n).flat_map(|i| (i..n).map(move |j| SubsetMask::interval(i, j)));
    Subbase::van_mill(SetFamily::new(ground(n), masks).expect("chain"))
}

/// Products `I × J` of chain intervals on a `rows × cols` grid; point
/// `(r, c)` has index `r * cols + c`.
pub fn boxes(rows: usize, cols: usize) -> Subbase {
    let mut masks = Vec::new();
    for (r0, r1) in (0..rows).flat_map(|i| (i..rows).map(move |j| (i, j))) {
        for (c0, c1) in (0..cols).flat_map(|i| (i..cols).map(move |j| (i, j))) {
            masks.push(SubsetMask::from_points(
                (r0..=r1).flat_map(|r| (c0..=c1).map(move |c| r * cols + c)),
            ));
        }
    }
    Subbase::van_mill(SetFamily::new(ground(rows * cols), masks).expect("boxes"))
}

/// Vertex sets of all subtrees of a tree on `n` vertices.
pub fn subtrees(n: usize, edges: &[(usize, usize)]) -> Subbase {
    let g = ground(n);
    let connected = |s: SubsetMask| {
        let Some(start) = s.min_point() else {
            return false;
        };
        let mut seen = SubsetMask::singleton(start);
        loop {
            let mut grown = seen;
            for &(a, b) in edges {
                if s.contains(a) && s.contains(b) && (seen.contains(a) || seen.contains(b)) {
                    grown = grown.with(a).with(b);
                }
            }
            if grown == seen {
                return seen == s;
            }
            seen = grown;
        }
    };
    Subbase::van_mill(SetFamily::new(g, g.nonempty_subsets().filter(|&s| connected(s))).expect("subtrees"))
}

/// Name, vertex count and edge list.
pub type NamedTree = (&'static str, usize, Vec<(usize, usize)>);

/// Named trees with at most six vertices.
pub fn trees() -> Vec<NamedTree> {
    vec![
        ("path4", 4, vec![(0, 1), (1, 2), (2, 3)]),
        ("star3", 4, vec![(0, 1), (0, 2), (0, 3)]),
        ("star4", 5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]),
        ("fork5", 5, vec![(0, 1), (1, 2), (2, 3), (2, 4)]),
        ("star5", 6, vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]),
        ("double-star6", 6, vec![(0, 1), (1, 2), (2, 3), (1, 4), (2, 5)]),
        ("spider6", 6, vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5)]),
        ("broom6", 6, vec![(0, 1), (0, 2), (0, 3), (0, 4), (4, 5)]),
        ("caterpillar6", 6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (1, 5)]),
        ("path6", 6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]),
    ]
}

/// Sorted edge list, minimized over all relabelings.
pub fn canonical_tree(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    (0..n)
        .permutations(n)
        .map(|perm| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
}

/// One tree per isomorphism class on exactly `n` vertices, decoded from
/// Prüfer sequences.
pub fn unlabeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n <= 1 {
        return vec![Vec::new()];
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for code in (0..n.saturating_sub(2)).map(|_| 0..n).multi_cartesian_product() {
        let mut degree = vec![1usize; n];
        for &v in &code {
            degree[v] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &v in &code {
            let leaf = (0..n).find(|&u| degree[u] == 1).expect("leaf");
            edges.push((leaf, v));
            degree[leaf] -= 1;
            degree[v] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
        edges.push((rest[0], rest[1]));
        if seen.insert(canonical_tree(n, &edges)) {
            out.push(edges);
        }
    }
    out
}

/// `{{0,1},{1,2},{0,2}}`: linked with empty intersection.
pub fn tri() -> Subbase {
    Subbase::van_mill(
        SetFamily::new(
            ground(3),
            [[0, 1], [1, 2], [0, 2]].map(SubsetMask::from_points),
        )
        .expect("tri"),
    )
}

/// Every nonempty subset of `{0..n-1}`.
pub fn full_family(n: usize) -> Subbase {
    let g = ground(n);
    Subbase::van_mill(SetFamily::new(g, g.nonempty_subsets()).expect("full family"))
}

/// Named subbases that pass validation, with at most `max_points` points.
pub fn validated_fixtures(max_points: usize) -> Vec<(String, Subbase)> {
    let mut out: Vec<(String, Subbase)> = Vec::new();
    for n in 1..=max_points.min(6) {
        out.push((format!("chain{n}"), chain(n)));
    }
    for (r, c) in [(2, 2), (2, 3)] {
        if r * c <= max_points {
            out.push((format!("box{r}x{c}"), boxes(r, c)));
        }
    }
    for (name, n, edges) in trees() {
        if n <= max_points && !name.starts_with("path") {
            out.push((name.to_string(), subtrees(n, &edges)));
        }
    }
    out
}

/// All topologies on `n` points, as the up-set topologies of every preorder.
pub fn labeled_topologies(n: usize) -> Vec<FiniteSpace> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << pairs.len()) {
        let leq = |i: usize, j: usize| {
            i == j
                || pairs
                    .iter()
                    .position(|&p| p == (i, j))
                    .is_some_and(|k| bits >> k & 1 == 1)
        };
        let transitive = (0..n).all(|i| {
            (0..n).all(|j| !leq(i, j) || (0..n).all(|k| !leq(j, k) || leq(i, k)))
        });
        if transitive {
            out.push(FiniteSpace::from_preorder(n, leq));
        }
    }
    out
}

fn canonical_opens(space: &FiniteSpace) -> Vec<u32> {
    let n = space.len();
    (0..n)
        .permutations(n)
        .map(|perm| {
            let mut v: Vec<u32> = space
                .opens()
                .iter()
                .map(|o| o.image(&perm).bits())
                .collect();
            v.sort_unstable();
            v
        })
        .min()
        .unwrap_or_default()
}

/// One representative per homeomorphism class of topologies on `n` points.
pub fn topologies_up_to_homeomorphism(n: usize) -> Vec<FiniteSpace> {
    let mut seen = BTreeSet::new();
    labeled_topologies(n)
        .into_iter()
        .filter(|s| seen.insert(canonical_opens(s)))
        .collect()
}

/// Every topology on `1..=max_points` points up to homeomorphism.
pub fn domain_corpus(max_points: usize) -> Vec<FiniteSpace> {
    (1..=max_points)
        .flat_map(topologies_up_to_homeomorphism)
        .collect()
}
