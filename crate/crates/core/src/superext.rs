//! Maximal linked systems and the superextension of a finite discrete space.
//!
//! An MLS on `n ≤ 7` points is handled internally as its up-closure, a
//! 128-bit table indexed by subset masks. Up-closed linked families contain
//! exactly one side of every complementary pair once they are maximal, so
//! enumeration decides one side per pair and never revisits a pair.
//!
//! Pairs are decided in order of increasing `min(|S|, |X∖S|)`, then by the
//! mask of the smaller side. Putting `S` in forces every superset in; the
//! choice is feasible iff no current member lies inside `X∖S`. A feasible
//! partial family is linked and always extends to a maximal one, so the
//! search has no dead branches.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::setfam::{is_linked, first_disjoint_pair, GroundSet, SetFamily, Strictness, Subbase, SubsetMask};

/// Enumeration limit: up-closures must fit in 128 bits.
pub const MAX_ENUM_POINTS: usize = 7;

/// A maximal linked system, stored as its antichain of minimal members.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mls {
    minimal: SetFamily,
}

impl Mls {
    /// Validates the antichain, linkedness and maximality invariants.
    pub fn from_minimal(minimal: SetFamily) -> Result<Self> {
        let members = minimal.members();
        if members.is_empty() {
            return Err(Error::Invariant("an MLS has at least one member".into()));
        }
        if let Some((a, b)) = first_disjoint_pair(members) {
            return Err(Error::NotLinked(a, b));
        }
        for (i, &a) in members.iter().enumerate() {
            let container = members.iter().enumerate().find(|&(j, &b)| j != i && a.is_subset(b));
            if let Some((_, b)) = container {
                return Err(Error::Invariant(format!("{a} is contained in {b}; not an antichain")));
            }
        }
        let mls = Mls { minimal };
        let g = mls.ground();
        for s in g.subsets() {
            if mls.contains(s) == mls.contains(g.complement(s)) {
                return Err(Error::Invariant(format!(
                    "not maximal: exactly one of {s} and its complement must be a member"
                )));
            }
        }
        Ok(mls)
    }

    pub fn ground(&self) -> GroundSet {
        self.minimal.ground()
    }

    pub fn minimal(&self) -> &SetFamily {
        &self.minimal
    }

    /// Membership in the up-closure.
    pub fn contains(&self, s: SubsetMask) -> bool {
        self.minimal.members().iter().any(|m| m.is_subset(s))
    }

    pub fn to_point_lists(&self) -> Vec<Vec<usize>> {
        self.minimal.to_point_lists()
    }

    /// Canonical key: minimal masks in ascending order.
    pub fn key(&self) -> &[SubsetMask] {
        self.minimal.members()
    }

    fn from_upset(n: usize, up: u128) -> Self {
        let g = GroundSet::new(n).expect("ground");
        let mut minimal = Vec::new();
        let mut rest = up;
        while rest != 0 {
            let s = rest.trailing_zeros();
            rest &= rest - 1;
            let is_min = (0..n).all(|i| s >> i & 1 == 0 || up >> (s & !(1 << i)) & 1 == 0);
            if is_min {
                minimal.push(SubsetMask::from_bits(s));
            }
        }
        Mls {
            minimal: SetFamily::from_sorted(g, minimal),
        }
    }

    fn to_upset(&self) -> u128 {
        let t = tables(self.ground().len());
        self.minimal
            .members()
            .iter()
            .fold(0, |acc, m| acc | t.up[m.bits() as usize])
    }
}

pub fn mls_contains(eta: &Mls, s: SubsetMask) -> bool {
    eta.contains(s)
}

/// The principal system `η_x` of all sets containing `x`.
pub fn eta(x: usize, n: usize) -> Result<Mls> {
    let g = GroundSet::new(n)?;
    g.check_point(x)?;
    Ok(Mls {
        minimal: SetFamily::from_sorted(g, vec![SubsetMask::singleton(x)]),
    })
}

struct Tables {
    n: usize,
    /// Supersets of each subset.
    up: Vec<u128>,
    /// Subsets of each subset.
    down: Vec<u128>,
    /// Smaller side of each complementary pair, in decision order.
    pairs: Vec<u32>,
}

#[allow(clippy::needless_range_loop)]
fn build_tables(n: usize) -> Tables {
    let size = 1usize << n;
    let full = (size - 1) as u32;
    let mut up = vec![0u128; size];
    let mut down = vec![0u128; size];
    for s in 0..size {
        for t in 0..size {
            if s & t == s {
                up[s] |= 1 << t;
                down[t] |= 1 << s;
            }
        }
    }
    let mut pairs: Vec<u32> = (0..=full)
        .filter(|&s| {
            let c = full & !s;
            (s.count_ones(), s) < (c.count_ones(), c)
        })
        .collect();
    pairs.sort_by_key(|&s| (s.count_ones(), s));
    Tables { n, up, down, pairs }
}

fn tables(n: usize) -> &'static Tables {
    static CACHE: [OnceLock<Tables>; MAX_ENUM_POINTS + 1] = [const { OnceLock::new() }; MAX_ENUM_POINTS + 1];
    CACHE[n].get_or_init(|| build_tables(n))
}

#[derive(Clone, Copy, Debug)]
struct Node {
    up: u128,
    cursor: usize,
}

impl Tables {
    fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    fn root(&self) -> Node {
        Node {
            up: self.up[self.full() as usize],
            cursor: 0,
        }
    }

    /// Feasible children in branch order, or `None` at a leaf.
    fn expand(&self, node: Node) -> Option<[Option<Node>; 2]> {
        let full = self.full();
        let mut cursor = node.cursor;
        while let Some(&s) = self.pairs.get(cursor) {
            let c = full & !s;
            if node.up >> s & 1 == 0 && node.up >> c & 1 == 0 {
                let pick = |side: u32, other: u32| {
                    (node.up & self.down[other as usize] == 0).then(|| Node {
                        up: node.up | self.up[side as usize],
                        cursor: cursor + 1,
                    })
                };
                return Some([pick(s, c), pick(c, s)]);
            }
            cursor += 1;
        }
        None
    }

    fn walk(&self, node: Node, leaf: &mut impl FnMut(u128)) {
        match self.expand(node) {
            None => leaf(node.up),
            Some(children) => {
                for child in children.into_iter().flatten() {
                    self.walk(child, leaf);
                }
            }
        }
    }

    fn count(&self, node: Node) -> u64 {
        match self.expand(node) {
            None => 1,
            Some(children) => children.into_iter().flatten().map(|c| self.count(c)).sum(),
        }
    }

    /// Breadth-first split into at least `branches` subtrees where possible,
    /// in a fixed order.
    fn frontier(&self, root: Node, branches: usize) -> Vec<Node> {
        let mut level = vec![root];
        while level.len() < branches {
            let mut next = Vec::with_capacity(level.len() * 2);
            let mut grew = false;
            for node in &level {
                match self.expand(*node) {
                    None => next.push(*node),
                    Some(children) => {
                        grew = true;
                        next.extend(children.into_iter().flatten());
                    }
                }
            }
            level = next;
            if !grew {
                break;
            }
        }
        level
    }
}

fn check_enum_ground(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::BadGround(0));
    }
    if n > MAX_ENUM_POINTS {
        return Err(Error::GroundTooLarge {
            n,
            max: MAX_ENUM_POINTS,
        });
    }
    Ok(())
}

fn canonical_key(n: usize, up: u128) -> Vec<u8> {
    let mut key = Vec::with_capacity(16);
    let mut rest = up;
    while rest != 0 {
        let s = rest.trailing_zeros();
        rest &= rest - 1;
        if (0..n).all(|i| s >> i & 1 == 0 || up >> (s & !(1 << i)) & 1 == 0) {
            key.push(s as u8);
        }
    }
    key
}

fn collect_upsets(t: &Tables, root: Node, branches: Option<usize>) -> Vec<u128> {
    let mut out = match branches {
        None | Some(0) | Some(1) => {
            let mut v = Vec::new();
            t.walk(root, &mut |up| v.push(up));
            v
        }
        Some(k) => t
            .frontier(root, k)
            .into_par_iter()
            .map(|node| {
                let mut v = Vec::new();
                t.walk(node, &mut |up| v.push(up));
                v
            })
            .collect::<Vec<_>>()
            .concat(),
    };
    out.sort_by_cached_key(|&up| canonical_key(t.n, up));
    out
}

/// Number of MLS on `n` points without materializing them. `branches`
/// selects parallel partitioning of the search.
pub fn count_mls(n: usize, branches: Option<usize>) -> Result<u64> {
    check_enum_ground(n)?;
    let t = tables(n);
    let root = t.root();
    Ok(match branches {
        None | Some(0) | Some(1) => t.count(root),
        Some(k) => t
            .frontier(root, k)
            .into_par_iter()
            .map(|node| t.count(node))
            .sum(),
    })
}

/// All MLS on `n` points in canonical order, as minimal-member lists.
///
/// Meant for streaming output; [`enumerate_mls`] builds full values.
pub fn enumerate_mls_lists(n: usize, branches: Option<usize>) -> Result<Vec<Vec<Vec<usize>>>> {
    check_enum_ground(n)?;
    let t = tables(n);
    Ok(collect_upsets(t, t.root(), branches)
        .into_iter()
        .map(|up| Mls::from_upset(n, up).to_point_lists())
        .collect())
}

/// Calls `visit` on every MLS in canonical order.
pub fn for_each_mls(n: usize, branches: Option<usize>, mut visit: impl FnMut(&Mls)) -> Result<u64> {
    check_enum_ground(n)?;
    let t = tables(n);
    let ups = collect_upsets(t, t.root(), branches);
    for &up in &ups {
        visit(&Mls::from_upset(n, up));
    }
    Ok(ups.len() as u64)
}

/// The superextension `λX` of the discrete space on `n` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superextension {
    ground: GroundSet,
    elements: Vec<Mls>,
}

pub fn enumerate_mls(n: usize) -> Result<Superextension> {
    enumerate_mls_par(n, None)
}

pub fn enumerate_mls_par(n: usize, branches: Option<usize>) -> Result<Superextension> {
    check_enum_ground(n)?;
    let t = tables(n);
    let elements = collect_upsets(t, t.root(), branches)
        .into_iter()
        .map(|up| Mls::from_upset(n, up))
        .collect();
    Ok(Superextension {
        ground: GroundSet::new(n)?,
        elements,
    })
}

impl Superextension {
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn elements(&self) -> &[Mls] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, eta: &Mls) -> Option<usize> {
        self.elements.binary_search(eta).ok()
    }
}

/// Every MLS whose up-closure contains all members of `linked`.
pub fn mls_complete(linked: &SetFamily) -> Result<Vec<Mls>> {
    let n = linked.ground().len();
    check_enum_ground(n)?;
    if let Some((a, b)) = first_disjoint_pair(linked.members()) {
        return Err(Error::NotLinked(a, b));
    }
    debug_assert!(is_linked(linked));
    let t = tables(n);
    let up = linked
        .members()
        .iter()
        .fold(t.root().up, |acc, m| acc | t.up[m.bits() as usize]);
    Ok(collect_upsets(t, Node { up, cursor: 0 }, None)
        .into_iter()
        .map(|up| Mls::from_upset(n, up))
        .collect())
}

/// `F⁺`: indices of the elements of `lam` containing `f`.
pub fn plus_set(f: SubsetMask, lam: &Superextension) -> Result<SubsetMask> {
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    plus_indices(f, lam.elements())
}

fn plus_indices(f: SubsetMask, elements: &[Mls]) -> Result<SubsetMask> {
    if elements.len() > crate::setfam::MAX_POINTS {
        return Err(Error::GroundTooLarge {
            n: elements.len(),
            max: crate::setfam::MAX_POINTS,
        });
    }
    Ok(SubsetMask::from_points(
        elements.iter().enumerate().filter(|(_, e)| e.contains(f)).map(|(i, _)| i),
    ))
}

/// The family `{F⁺ : ∅ ≠ F ⊆ X}` as a subbase on the index set of `λX`.
pub fn lambda_subbase(lam: &Superextension) -> Result<Subbase> {
    let ground = GroundSet::new(lam.len())?;
    let masks = lam
        .ground()
        .nonempty_subsets()
        .map(|f| plus_indices(f, lam.elements()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subbase::new(SetFamily::new(ground, masks)?, Strictness::VanMill))
}

/// `λf(η) = {B : f⁻¹(B) ∈ η}` for `f` given as a table into `0..m`.
pub fn lambda_map(f: &[usize], m: usize, eta: &Mls) -> Result<Mls> {
    let n = eta.ground().len();
    if f.len() != n {
        return Err(Error::Invariant(format!(
            "map has {} values but the system lives on {n} points",
            f.len()
        )));
    }
    let target = GroundSet::new(m)?;
    if let Some(&bad) = f.iter().find(|&&y| y >= m) {
        return Err(Error::OutOfRangePoint {
            point: bad as i64,
            n: m,
        });
    }
    let member = |b: SubsetMask| eta.contains(b.preimage(f));
    let minimal: Vec<SubsetMask> = target
        .nonempty_subsets()
        .filter(|&b| member(b) && b.points().all(|i| !member(b - SubsetMask::singleton(i))))
        .collect();
    Ok(Mls {
        minimal: SetFamily::from_sorted(target, minimal),
    })
}

/// `r(η) = ⋂{F ∈ S : F ∈ η}`, which is a single point for validated subbases.
pub fn retract(sb: &Subbase, eta: &Mls) -> Result<usize> {
    if sb.ground() != eta.ground() {
        return Err(Error::Invariant("subbase and system live on different ground sets".into()));
    }
    let set = retract_set(sb, eta);
    set.single_point().ok_or(Error::NotSingleton(set))
}

pub fn retract_set(sb: &Subbase, eta: &Mls) -> SubsetMask {
    sb.members()
        .iter()
        .filter(|f| eta.contains(**f))
        .fold(sb.ground().full(), |acc, &f| acc & f)
}

/// Up-closures differ on exactly one complementary pair: one flip of a
/// minimal member.
pub fn adjacent(a: &Mls, b: &Mls) -> bool {
    let diff = a.to_upset() ^ b.to_upset();
    diff.count_ones() == 2 && {
        let s = diff.trailing_zeros();
        let full = a.ground().full().bits();
        diff >> (full & !s) & 1 == 1
    }
}

/// Exchanges the minimal member `s` for its complement. The result is again
/// maximal linked, and adjacent to `eta`.
pub fn flip(eta: &Mls, s: SubsetMask) -> Option<Mls> {
    let n = eta.ground().len();
    if n > MAX_ENUM_POINTS || !eta.minimal.contains(s) {
        return None;
    }
    let c = eta.ground().complement(s);
    if c.is_empty() {
        return None;
    }
    let up = eta.to_upset() & !(1u128 << s.bits()) | 1u128 << c.bits();
    Some(Mls::from_upset(n, up))
}

/// Applies a point permutation to an MLS.
pub fn permute(eta: &Mls, perm: &[usize]) -> Mls {
    let g = eta.ground();
    let masks: Vec<SubsetMask> = eta.minimal.members().iter().map(|m| m.image(perm)).collect();
    Mls {
        minimal: SetFamily::new(g, masks).expect("permuted"),
    }
}
