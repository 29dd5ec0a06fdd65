//! Ground sets, subset masks, set families and the subbase axioms.
//!
//! A finite space `X = {0..n-1}` is discrete, so every subset is closed and a
//! closed subbase is just a family of nonempty subsets. The deciders here
//! search members in ascending mask order and report the first counterexample
//! they meet, which makes every witness reproducible.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set representable by a [`SubsetMask`].
pub const MAX_POINTS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_POINTS {
            return Err(Error::BadGround(n));
        }
        Ok(GroundSet { n })
    }

    pub fn len(self) -> usize {
        self.n
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn full(self) -> SubsetMask {
        SubsetMask((1u32 << self.n) - 1)
    }

    pub fn contains(self, mask: SubsetMask) -> bool {
        mask.0 & !self.full().0 == 0
    }

    pub fn complement(self, mask: SubsetMask) -> SubsetMask {
        SubsetMask(self.full().0 & !mask.0)
    }

    pub fn check_point(self, p: usize) -> Result<()> {
        if p < self.n {
            Ok(())
        } else {
            Err(Error::OutOfRangePoint {
                point: p as i64,
                n: self.n,
            })
        }
    }

    /// Every subset, empty set first, in ascending mask order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        (0..=self.full().0).map(SubsetMask)
    }

    pub fn nonempty_subsets(self) -> impl Iterator<Item = SubsetMask> {
        (1..=self.full().0).map(SubsetMask)
    }
}

/// A subset of a ground set as a characteristic bit vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(p: usize) -> Self {
        SubsetMask(1 << p)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        SubsetMask(points.into_iter().fold(0, |acc, p| acc | (1 << p)))
    }

    /// The interval `{lo, .., hi}`; empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        Self::from_points(lo..=hi)
    }

    pub fn contains(self, p: usize) -> bool {
        p < 32 && self.0 >> p & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: SubsetMask) -> bool {
        self.0 & other.0 != 0
    }

    pub fn with(self, p: usize) -> Self {
        SubsetMask(self.0 | 1 << p)
    }

    pub fn min_point(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max_point(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// The unique point of a singleton.
    pub fn single_point(self) -> Option<usize> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn points(self) -> Points {
        Points(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.points().collect()
    }

    /// Image under a point function given as a lookup table.
    pub fn image(self, f: &[usize]) -> SubsetMask {
        SubsetMask::from_points(self.points().map(|p| f[p]))
    }

    /// Preimage `{x : f(x) ∈ self}` under a point function.
    pub fn preimage(self, f: &[usize]) -> SubsetMask {
        SubsetMask::from_points((0..f.len()).filter(|&x| self.contains(f[x])))
    }
}

pub struct Points(u32);

impl Iterator for Points {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: Self) -> Self {
        SubsetMask(self.0 & rhs.0)
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: Self) -> Self {
        SubsetMask(self.0 | rhs.0)
    }
}

impl Sub for SubsetMask {
    type Output = SubsetMask;
    fn sub(self, rhs: Self) -> Self {
        SubsetMask(self.0 & !rhs.0)
    }
}

impl Not for SubsetMask {
    type Output = SubsetMask;
    fn not(self) -> Self {
        SubsetMask(!self.0)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.points())
    }
}

/// A duplicate-free family of nonempty subsets, ascending by mask value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetFamily {
    ground: GroundSet,
    members: Vec<SubsetMask>,
}

impl SetFamily {
    /// Builds a family from masks, dropping empties and duplicates.
    pub fn new<I: IntoIterator<Item = SubsetMask>>(ground: GroundSet, masks: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for m in masks {
            if !ground.contains(m) {
                let point = (m - ground.full()).min_point().unwrap_or(0);
                return Err(Error::OutOfRangePoint {
                    point: point as i64,
                    n: ground.len(),
                });
            }
            if !m.is_empty() {
                set.insert(m);
            }
        }
        Ok(SetFamily {
            ground,
            members: set.into_iter().collect(),
        })
    }

    /// Caller guarantees the members are strictly ascending, nonempty and in range.
    pub(crate) fn from_sorted(ground: GroundSet, members: Vec<SubsetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|m| !m.is_empty() && ground.contains(*m)));
        SetFamily { ground, members }
    }

    pub fn empty(ground: GroundSet) -> Self {
        SetFamily {
            ground,
            members: Vec::new(),
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: SubsetMask) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn is_subfamily(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|m| other.contains(*m))
    }

    /// Intersection of all members; the ground set for the empty family.
    pub fn core(&self) -> SubsetMask {
        self.members
            .iter()
            .fold(self.ground.full(), |acc, &m| acc & m)
    }

    pub fn to_point_lists(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.to_vec()).collect()
    }
}

/// Normalizes raw point lists into a [`SetFamily`].
pub fn normalize_family(raw: &[Vec<i64>], ground: GroundSet) -> Result<SetFamily> {
    normalize_family_traced(raw, ground).map(|(fam, _)| fam)
}

/// Like [`normalize_family`], also returning notes about dropped input.
pub fn normalize_family_traced(
    raw: &[Vec<i64>],
    ground: GroundSet,
) -> Result<(SetFamily, Vec<String>)> {
    let mut masks = Vec::with_capacity(raw.len());
    let mut notes = Vec::new();
    let mut dropped_empty = false;
    for set in raw {
        let mut m = SubsetMask::EMPTY;
        for &p in set {
            if p < 0 || p as usize >= ground.len() {
                return Err(Error::OutOfRangePoint {
                    point: p,
                    n: ground.len(),
                });
            }
            m = m.with(p as usize);
        }
        dropped_empty |= m.is_empty();
        masks.push(m);
    }
    if dropped_empty {
        notes.push("empty set dropped from family".to_string());
    }
    let before = masks.iter().filter(|m| !m.is_empty()).count();
    let fam = SetFamily::new(ground, masks)?;
    if fam.len() < before {
        notes.push(format!("{} duplicate set(s) removed", before - fam.len()));
    }
    Ok((fam, notes))
}

/// Smallest superfamily closed under pairwise union and nonempty intersection.
pub fn lattice_close(fam: &SetFamily) -> SetFamily {
    let mut set: BTreeSet<SubsetMask> = fam.members.iter().copied().collect();
    let mut frontier: Vec<SubsetMask> = fam.members.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let snapshot: Vec<SubsetMask> = set.iter().copied().collect();
        for &a in &frontier {
            for &b in &snapshot {
                for c in [a | b, a & b] {
                    if !c.is_empty() && set.insert(c) {
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
    }
    SetFamily::from_sorted(fam.ground, set.into_iter().collect())
}

pub fn is_linked(fam: &SetFamily) -> bool {
    first_disjoint_pair(fam.members()).is_none()
}

pub(crate) fn first_disjoint_pair(members: &[SubsetMask]) -> Option<(SubsetMask, SubsetMask)> {
    members.iter().enumerate().find_map(|(i, &a)| {
        members[i + 1..]
            .iter()
            .find(|&&b| !a.intersects(b))
            .map(|&b| (a, b))
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    /// Nonempty members only.
    #[default]
    #[serde(alias = "van-mill")]
    VanMill,
    /// Additionally closed under pairwise union and nonempty intersection.
    #[serde(alias = "paper-strict", alias = "strict")]
    PaperStrict,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subbase {
    family: SetFamily,
    strictness: Strictness,
}

impl Subbase {
    pub fn new(family: SetFamily, strictness: Strictness) -> Self {
        Subbase { family, strictness }
    }

    pub fn van_mill(family: SetFamily) -> Self {
        Self::new(family, Strictness::VanMill)
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn members(&self) -> &[SubsetMask] {
        self.family.members()
    }

    pub fn ground(&self) -> GroundSet {
        self.family.ground()
    }

    pub fn strictness(&self) -> Strictness {
        self.strictness
    }

    pub fn with_strictness(mut self, strictness: Strictness) -> Self {
        self.strictness = strictness;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureOp {
    Union,
    Intersection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreimageKind {
    /// `{z : Φ(z) ∩ (X∖S) ≠ ∅}`
    Hits,
    /// `{z : Φ(z) ⊆ X∖S}`
    Contained,
}

/// Counterexamples produced by the deciders across the crate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A maximal linked subfamily with empty intersection.
    Binary { subfamily: Vec<SubsetMask> },
    /// A disjoint pair of members without a screen.
    Normal { s0: SubsetMask, s1: SubsetMask },
    /// The members through `point` do not cut down to `{point}`.
    PointSeparating { point: usize, residual: SubsetMask },
    LatticeClosure {
        op: ClosureOp,
        a: SubsetMask,
        b: SubsetMask,
        missing: SubsetMask,
    },
    NonConvex {
        x: usize,
        y: usize,
        hull: SubsetMask,
    },
    MissingOpen { set: SubsetMask },
    /// A connected component on which a map takes several values.
    NonConstantComponent { component: SubsetMask },
    NonOpenPreimage {
        open: SubsetMask,
        preimage: SubsetMask,
    },
    SContinuity {
        member: SubsetMask,
        which: PreimageKind,
        set: SubsetMask,
    },
    SemiContinuity { open: SubsetMask, set: SubsetMask },
    NonOpenImage {
        member: SubsetMask,
        image: SubsetMask,
    },
    NonConvexFiber {
        point: usize,
        fiber: SubsetMask,
        x: usize,
        y: usize,
    },
    NonConvexValue { point: usize, value: SubsetMask },
    /// A corpus entry on which a check failed.
    CorpusEntry { index: usize, reason: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Binary { subfamily } => {
                write!(f, "linked subfamily with empty intersection:")?;
                for m in subfamily {
                    write!(f, " {m}")?;
                }
                Ok(())
            }
            Witness::Normal { s0, s1 } => write!(f, "disjoint pair {s0}, {s1} has no screen"),
            Witness::PointSeparating { point, residual } => {
                write!(f, "members through {point} intersect to {residual}")
            }
            Witness::LatticeClosure { op, a, b, missing } => {
                write!(f, "{op:?} of {a} and {b} is missing: {missing}")
            }
            Witness::NonConvex { x, y, hull } => write!(f, "hull of {{{x},{y}}} is {hull}"),
            Witness::MissingOpen { set } => write!(f, "open set {set} missing"),
            Witness::NonConstantComponent { component } => {
                write!(f, "map is not constant on component {component}")
            }
            Witness::NonOpenPreimage { open, preimage } => {
                write!(f, "preimage {preimage} of open {open} is not open")
            }
            Witness::SContinuity { member, which, set } => {
                write!(f, "{which:?} set {set} for member {member} is not open")
            }
            Witness::SemiContinuity { open, set } => {
                write!(f, "set {set} for open {open} is not open")
            }
            Witness::NonOpenImage { member, image } => {
                write!(f, "image {image} of the complement of {member} is not open")
            }
            Witness::NonConvexFiber { point, fiber, x, y } => {
                write!(f, "fiber {fiber} over {point} is not convex at {{{x},{y}}}")
            }
            Witness::NonConvexValue { point, value } => {
                write!(f, "value {value} at {point} is not convex")
            }
            Witness::CorpusEntry { index, reason } => write!(f, "corpus entry {index}: {reason}"),
        }
    }
}

/// A boolean decision with the first counterexample found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    holds: bool,
    witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            holds: true,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn fails(witness: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
            notes: Vec::new(),
        }
    }

    pub fn from_witness(witness: Option<Witness>) -> Self {
        witness.map_or_else(Verdict::holds, Verdict::fails)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.holds
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Keeps the first failure.
    pub fn and_then(self, next: impl FnOnce() -> Verdict) -> Verdict {
        if self.holds {
            let mut v = next();
            let mut notes = self.notes;
            notes.append(&mut v.notes);
            v.notes = notes;
            v
        } else {
            self
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => f.write_str("holds"),
            Some(w) => write!(f, "fails: {w}"),
        }
    }
}

/// Every linked subfamily has a common point.
///
/// Only inclusion-maximal linked subfamilies are inspected: any linked
/// subfamily extends to a maximal one whose intersection is no larger.
/// They are the maximal cliques of the intersection graph, listed in
/// lexicographic order by a pivot-free Bron–Kerbosch search.
pub fn is_binary(sb: &Subbase) -> Verdict {
    let members = sb.members();
    let adj: Vec<Vec<bool>> = members
        .iter()
        .map(|a| members.iter().map(|b| a.intersects(*b)).collect())
        .collect();
    let mut clique = Vec::new();
    let cand: Vec<usize> = (0..members.len()).collect();
    let found = maximal_cliques_until(
        &adj,
        &mut clique,
        cand,
        Vec::new(),
        &mut |c: &[usize]| {
            let core = c
                .iter()
                .fold(sb.ground().full(), |acc, &i| acc & members[i]);
            core.is_empty()
        },
    );
    Verdict::from_witness(found.map(|mut c| {
        c.sort_unstable();
        Witness::Binary {
            subfamily: c.into_iter().map(|i| members[i]).collect(),
        }
    }))
}

fn maximal_cliques_until(
    adj: &[Vec<bool>],
    clique: &mut Vec<usize>,
    mut cand: Vec<usize>,
    mut excluded: Vec<usize>,
    stop: &mut impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if cand.is_empty() {
        if excluded.is_empty() && stop(clique) {
            return Some(clique.clone());
        }
        return None;
    }
    // Pivot on the vertex covering most candidates; its neighbours are
    // reached through it or through a non-neighbour branch.
    let pivot = cand
        .iter()
        .chain(&excluded)
        .copied()
        .max_by_key(|&u| cand.iter().filter(|&&w| adj[u][w]).count())
        .unwrap();
    let branches: Vec<usize> = cand.iter().copied().filter(|&v| v == pivot || !adj[pivot][v]).collect();
    for v in branches {
        cand.retain(|&u| u != v);
        let next_cand: Vec<usize> = cand.iter().copied().filter(|&u| adj[v][u]).collect();
        let next_excl: Vec<usize> = excluded.iter().copied().filter(|&u| adj[v][u]).collect();
        clique.push(v);
        let hit = maximal_cliques_until(adj, clique, next_cand, next_excl, stop);
        clique.pop();
        if hit.is_some() {
            return hit;
        }
        excluded.push(v);
    }
    None
}

/// Every disjoint pair of members has a screen `T0, T1` with
/// `S0 ∩ T1 = ∅ = T0 ∩ S1` and `T0 ∪ T1 = X`.
pub fn is_normal(sb: &Subbase) -> Verdict {
    let members = sb.members();
    let full = sb.ground().full();
    for (i, &s0) in members.iter().enumerate() {
        for &s1 in &members[i + 1..] {
            if s0.intersects(s1) {
                continue;
            }
            let t0s: Vec<SubsetMask> = members.iter().copied().filter(|t| !t.intersects(s1)).collect();
            let screened = members
                .iter()
                .filter(|t1| !t1.intersects(s0))
                .any(|&t1| t0s.iter().any(|&t0| t0 | t1 == full));
            if !screened {
                return Verdict::fails(Witness::Normal { s0, s1 });
            }
        }
    }
    Verdict::holds()
}

/// Each point is the intersection of the members containing it.
pub fn is_point_separating(sb: &Subbase) -> Verdict {
    let ground = sb.ground();
    for x in 0..ground.len() {
        let residual = sb
            .members()
            .iter()
            .filter(|m| m.contains(x))
            .fold(ground.full(), |acc, &m| acc & m);
        if residual != SubsetMask::singleton(x) {
            return Verdict::fails(Witness::PointSeparating { point: x, residual });
        }
    }
    Verdict::holds()
}

/// Closure under pairwise union and nonempty pairwise intersection.
pub fn is_lattice_closed(fam: &SetFamily) -> Verdict {
    let members = fam.members();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let u = a | b;
            if !fam.contains(u) {
                return Verdict::fails(Witness::LatticeClosure {
                    op: ClosureOp::Union,
                    a,
                    b,
                    missing: u,
                });
            }
            let m = a & b;
            if !m.is_empty() && !fam.contains(m) {
                return Verdict::fails(Witness::LatticeClosure {
                    op: ClosureOp::Intersection,
                    a,
                    b,
                    missing: m,
                });
            }
        }
    }
    Verdict::holds()
}

/// Binary, normal and point-separating; lattice-closed under `PaperStrict`.
pub fn validate_subbase(sb: &Subbase) -> Verdict {
    let v = is_binary(sb)
        .and_then(|| is_normal(sb))
        .and_then(|| is_point_separating(sb));
    match sb.strictness() {
        Strictness::VanMill => v,
        Strictness::PaperStrict => v.and_then(|| is_lattice_closed(sb.family())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn fam(n: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::new(g(n), sets.iter().map(|s| SubsetMask::from_points(s.iter().copied()))).unwrap()
    }

    fn m(points: &[usize]) -> SubsetMask {
        SubsetMask::from_points(points.iter().copied())
    }

    #[test]
    fn normalize_dedups_and_sorts() {
        let f = normalize_family(&[vec![0], vec![0], vec![1, 0]], g(2)).unwrap();
        assert_eq!(f.members(), &[m(&[0]), m(&[0, 1])]);
    }

    #[test]
    fn normalize_drops_empty_with_note() {
        let (f, notes) = normalize_family_traced(&[vec![]], g(2)).unwrap();
        assert!(f.is_empty());
        assert_eq!(notes, vec!["empty set dropped from family".to_string()]);
    }

    #[test]
    fn normalize_rejects_out_of_range() {
        assert_eq!(
            normalize_family(&[vec![2]], g(2)),
            Err(Error::OutOfRangePoint { point: 2, n: 2 })
        );
        assert!(matches!(
            normalize_family(&[vec![-1]], g(2)),
            Err(Error::OutOfRangePoint { point: -1, .. })
        ));
    }

    #[test]
    fn ground_bounds() {
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(25).is_err());
        assert_eq!(GroundSet::new(24).unwrap().full().bits(), (1 << 24) - 1);
    }

    #[test]
    fn lattice_close_examples() {
        assert_eq!(lattice_close(&fam(2, &[&[0], &[1]])), fam(2, &[&[0], &[1], &[0, 1]]));
        let one = fam(3, &[&[0, 1, 2]]);
        assert_eq!(lattice_close(&one), one);
        let closed = lattice_close(corpus::chain(3).family());
        assert_eq!(closed.len(), 7);
    }

    #[test]
    fn linked_examples() {
        assert!(is_linked(&fam(3, &[&[0, 1], &[1, 2], &[0, 2]])));
        assert!(!is_linked(&fam(2, &[&[0], &[1]])));
        assert!(is_linked(&fam(3, &[&[0, 1, 2], &[0]])));
        assert!(is_linked(&SetFamily::empty(g(3))));
    }

    #[test]
    fn binary_examples() {
        assert!(is_binary(&corpus::chain(3)).is_holds());
        let tri = corpus::tri();
        assert_eq!(
            is_binary(&tri).witness(),
            Some(&Witness::Binary {
                subfamily: tri.members().to_vec()
            })
        );
        assert!(is_binary(&corpus::full_family(2)).is_holds());
    }

    #[test]
    fn normal_examples() {
        for n in 1..=6 {
            assert!(is_normal(&corpus::chain(n)).is_holds(), "chain {n}");
        }
        let sb = Subbase::van_mill(fam(3, &[&[0], &[2], &[0, 1, 2]]));
        assert_eq!(
            is_normal(&sb).witness(),
            Some(&Witness::Normal {
                s0: m(&[0]),
                s1: m(&[2])
            })
        );
        assert!(is_normal(&Subbase::van_mill(fam(3, &[&[1]]))).is_holds());
    }

    #[test]
    fn separating_examples() {
        assert!(is_point_separating(&corpus::chain(3)).is_holds());
        let sb = Subbase::van_mill(fam(3, &[&[0, 1], &[1, 2], &[0, 1, 2]]));
        assert_eq!(
            is_point_separating(&sb).witness(),
            Some(&Witness::PointSeparating {
                point: 0,
                residual: m(&[0, 1])
            })
        );
        let singles = Subbase::van_mill(fam(4, &[&[0], &[1], &[2], &[3]]));
        assert!(is_point_separating(&singles).is_holds());
    }

    #[test]
    fn validate_examples() {
        assert!(validate_subbase(&corpus::chain(5)).is_holds());
        let strict = corpus::chain(3).with_strictness(Strictness::PaperStrict);
        assert_eq!(
            validate_subbase(&strict).witness(),
            Some(&Witness::LatticeClosure {
                op: ClosureOp::Union,
                a: m(&[0]),
                b: m(&[2]),
                missing: m(&[0, 2])
            })
        );
        assert!(matches!(
            validate_subbase(&corpus::tri()).witness(),
            Some(Witness::Binary { .. })
        ));
    }

    #[test]
    fn witnesses_are_deterministic() {
        let tri = corpus::tri();
        assert_eq!(validate_subbase(&tri), validate_subbase(&tri));
        let full = corpus::full_family(4);
        assert_eq!(is_binary(&full), is_binary(&full));
    }

    #[test]
    fn mask_helpers() {
        let s = m(&[1, 3, 4]);
        assert_eq!(s.to_vec(), vec![1, 3, 4]);
        assert_eq!(s.min_point(), Some(1));
        assert_eq!(s.max_point(), Some(4));
        assert_eq!(s.to_string(), "{1,3,4}");
        assert_eq!(g(5).complement(s), m(&[0, 2]));
        assert_eq!(m(&[0, 2]).preimage(&[0, 1, 1, 2]), m(&[0, 3]));
        assert_eq!(m(&[0, 3]).image(&[0, 1, 1, 2]), m(&[0, 2]));
    }
}
