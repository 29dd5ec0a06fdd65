//! Finite topological spaces, point maps and set-valued maps.
//!
//! A space stores its full open-set lattice. Set-valued maps land in a
//! discrete ground set `X` carrying a subbase; point maps land either in a
//! discrete ground set or in another finite space.

use std::collections::BTreeSet;

use crate::convexity;
use crate::error::{Error, Result};
use crate::setfam::{GroundSet, PreimageKind, Subbase, SubsetMask, Verdict, Witness, MAX_POINTS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    names: Vec<String>,
    opens: Vec<SubsetMask>,
}

/// Checks that `opens` is a topology on `n` points.
pub fn is_topology(n: usize, opens: &[SubsetMask]) -> Verdict {
    let full = SubsetMask::from_bits(((1u64 << n) - 1) as u32);
    let set: BTreeSet<SubsetMask> = opens.iter().copied().collect();
    for required in [SubsetMask::EMPTY, full] {
        if !set.contains(&required) {
            return Verdict::fails(Witness::MissingOpen { set: required });
        }
    }
    let mut missing: Option<SubsetMask> = None;
    for &a in &set {
        for &b in &set {
            for c in [a | b, a & b] {
                if !set.contains(&c) && missing.is_none_or(|m| c < m) {
                    missing = Some(c);
                }
            }
        }
    }
    Verdict::from_witness(missing.map(|set| Witness::MissingOpen { set }))
}

impl FiniteSpace {
    pub fn new(names: Vec<String>, opens: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_POINTS {
            return Err(Error::BadGround(n));
        }
        let full = GroundSet::new(n)?.full();
        let opens: BTreeSet<SubsetMask> = opens.into_iter().collect();
        if let Some(bad) = opens.iter().find(|o| !o.is_subset(full)) {
            return Err(Error::Invariant(format!("open set {bad} leaves the point range")));
        }
        let opens: Vec<SubsetMask> = opens.into_iter().collect();
        let verdict = is_topology(n, &opens);
        if let Some(w) = verdict.witness() {
            return Err(Error::Invariant(format!("not a topology: {w}")));
        }
        Ok(FiniteSpace { names, opens })
    }

    fn default_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("z{i}")).collect()
    }

    fn trusted(names: Vec<String>, opens: BTreeSet<SubsetMask>) -> Self {
        FiniteSpace {
            names,
            opens: opens.into_iter().collect(),
        }
    }

    pub fn discrete(n: usize) -> Self {
        let g = GroundSet::new(n).expect("space size");
        Self::trusted(Self::default_names(n), g.subsets().collect())
    }

    pub fn indiscrete(n: usize) -> Self {
        let g = GroundSet::new(n).expect("space size");
        Self::trusted(Self::default_names(n), [SubsetMask::EMPTY, g.full()].into())
    }

    /// Points `a, b` with opens `∅, {a}, {a,b}`.
    pub fn sierpinski() -> Self {
        Self::trusted(
            vec!["a".into(), "b".into()],
            [0, 1, 3].map(SubsetMask::from_bits).into(),
        )
    }

    /// The Alexandrov topology of a preorder: open sets are the up-sets,
    /// i.e. `x ∈ U` and `leq(x, y)` imply `y ∈ U`.
    pub fn from_preorder(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let g = GroundSet::new(n).expect("space size");
        let opens = g
            .subsets()
            .filter(|u| u.points().all(|x| (0..n).all(|y| !leq(x, y) || u.contains(y))))
            .collect();
        Self::trusted(Self::default_names(n), opens)
    }

    /// The coarsest topology on `n` points in which every set of `sub` is open.
    pub fn generated_by(n: usize, sub: &[SubsetMask]) -> Self {
        let g = GroundSet::new(n).expect("space size");
        let mut base: BTreeSet<SubsetMask> = [g.full()].into();
        for &s in sub {
            let snapshot: Vec<SubsetMask> = base.iter().copied().collect();
            base.extend(snapshot.into_iter().map(|b| b & s));
        }
        let mut opens: BTreeSet<SubsetMask> = [SubsetMask::EMPTY].into();
        for &b in &base {
            let snapshot: Vec<SubsetMask> = opens.iter().copied().collect();
            opens.extend(snapshot.into_iter().map(|o| o | b));
        }
        Self::trusted(Self::default_names(n), opens)
    }

    /// Disjoint sum; the points of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &FiniteSpace) -> Self {
        let shift = self.len();
        let mut names = self.names.clone();
        names.extend(other.names.iter().map(|s| format!("{s}'")));
        let mut opens = BTreeSet::new();
        for &a in &self.opens {
            for &b in &other.opens {
                opens.insert(a | SubsetMask::from_bits(b.bits() << shift));
            }
        }
        Self::trusted(names, opens)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(Error::Invariant("name count differs from point count".into()));
        }
        self.names = names;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.len()).expect("nonempty space")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn opens(&self) -> &[SubsetMask] {
        &self.opens
    }

    pub fn is_open(&self, s: SubsetMask) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: SubsetMask) -> bool {
        self.is_open(self.ground().complement(s))
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() == 1 << self.len()
    }

    /// Open sets of the subspace `a`.
    pub fn subspace_opens(&self, a: SubsetMask) -> BTreeSet<SubsetMask> {
        self.opens.iter().map(|&o| o & a).collect()
    }
}

/// Connected components: points are joined when every clopen set contains
/// both or neither, and classes are read off by reachability.
pub fn components(z: &FiniteSpace) -> Vec<SubsetMask> {
    let clopens: Vec<SubsetMask> = z.opens().iter().copied().filter(|&o| z.is_closed(o)).collect();
    let n = z.len();
    let joined = |x: usize, y: usize| clopens.iter().all(|c| c.contains(x) == c.contains(y));
    let mut assigned = SubsetMask::EMPTY;
    let mut out = Vec::new();
    for start in 0..n {
        if assigned.contains(start) {
            continue;
        }
        let mut class = SubsetMask::singleton(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if !class.contains(y) && joined(x, y) {
                    class = class.with(y);
                    stack.push(y);
                }
            }
        }
        assigned = assigned | class;
        out.push(class);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Codomain {
    Discrete(GroundSet),
    Space(FiniteSpace),
}

impl Codomain {
    pub fn len(&self) -> usize {
        match self {
            Codomain::Discrete(g) => g.len(),
            Codomain::Space(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.len()).expect("nonempty codomain")
    }

    pub fn to_space(&self) -> FiniteSpace {
        match self {
            Codomain::Discrete(g) => FiniteSpace::discrete(g.len()),
            Codomain::Space(s) => s.clone(),
        }
    }
}

/// A total single-valued map given by its value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointMap {
    values: Vec<usize>,
    codomain: Codomain,
}

impl PointMap {
    pub fn new(values: Vec<usize>, codomain: Codomain) -> Result<Self> {
        let m = codomain.len();
        if let Some(&bad) = values.iter().find(|&&v| v >= m) {
            return Err(Error::OutOfRangePoint {
                point: bad as i64,
                n: m,
            });
        }
        Ok(PointMap { values, codomain })
    }

    /// A map into the discrete space on `m` points.
    pub fn discrete(values: Vec<usize>, m: usize) -> Result<Self> {
        Self::new(values, Codomain::Discrete(GroundSet::new(m)?))
    }

    pub fn identity(n: usize) -> Self {
        Self::discrete((0..n).collect(), n).expect("identity")
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, p: usize) -> usize {
        self.values[p]
    }

    pub fn codomain(&self) -> &Codomain {
        &self.codomain
    }

    pub fn domain_len(&self) -> usize {
        self.values.len()
    }

    pub fn fiber(&self, y: usize) -> SubsetMask {
        SubsetMask::singleton(y).preimage(&self.values)
    }

    /// First codomain point with an empty fiber.
    pub fn first_missed_point(&self) -> Option<usize> {
        let image = SubsetMask::from_points(self.values.iter().copied());
        (0..self.codomain.len()).find(|&y| !image.contains(y))
    }

    pub fn compose(&self, after: &PointMap) -> PointMap {
        PointMap {
            values: self.values.iter().map(|&v| after.values[v]).collect(),
            codomain: after.codomain.clone(),
        }
    }
}

/// A map `z ↦ Φ(z)` with nonempty values in a discrete ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetValuedMap {
    ground: GroundSet,
    values: Vec<SubsetMask>,
}

impl SetValuedMap {
    pub fn new(ground: GroundSet, values: Vec<SubsetMask>) -> Result<Self> {
        for (z, &v) in values.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::EmptyValue(z));
            }
            if !ground.contains(v) {
                return Err(Error::OutOfRangePoint {
                    point: (v - ground.full()).min_point().unwrap_or(0) as i64,
                    n: ground.len(),
                });
            }
        }
        Ok(SetValuedMap { ground, values })
    }

    pub fn constant(ground: GroundSet, domain_len: usize, value: SubsetMask) -> Result<Self> {
        Self::new(ground, vec![value; domain_len])
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn values(&self) -> &[SubsetMask] {
        &self.values
    }

    pub fn get(&self, z: usize) -> SubsetMask {
        self.values[z]
    }

    pub fn domain_len(&self) -> usize {
        self.values.len()
    }

    /// `g` followed by `self`: `z ↦ self(g(z))`.
    pub fn after(&self, g: &PointMap) -> SetValuedMap {
        SetValuedMap {
            ground: self.ground,
            values: g.values().iter().map(|&y| self.values[y]).collect(),
        }
    }

    fn domain_set(&self, pred: impl Fn(SubsetMask) -> bool) -> SubsetMask {
        SubsetMask::from_points((0..self.values.len()).filter(|&z| pred(self.values[z])))
    }
}

/// Continuity of a point map on `z`. Into a discrete codomain this is
/// constancy on components; the witness is the first offending component.
pub fn is_continuous(z: &FiniteSpace, h: &PointMap) -> Verdict {
    match h.codomain() {
        Codomain::Discrete(_) => {
            let all_open = (0..h.codomain().len()).all(|y| z.is_open(h.fiber(y)));
            if all_open {
                return Verdict::holds();
            }
            let bad = components(z)
                .into_iter()
                .find(|c| c.points().map(|p| h.get(p)).dedup_count() > 1)
                .expect("a non-open fiber implies a non-constant component");
            Verdict::fails(Witness::NonConstantComponent { component: bad })
        }
        Codomain::Space(y) => {
            for &open in y.opens() {
                let preimage = open.preimage(h.values());
                if !z.is_open(preimage) {
                    return Verdict::fails(Witness::NonOpenPreimage { open, preimage });
                }
            }
            Verdict::holds()
        }
    }
}

trait DedupCount: Iterator<Item = usize> + Sized {
    fn dedup_count(self) -> usize {
        self.collect::<BTreeSet<_>>().len()
    }
}

impl<I: Iterator<Item = usize>> DedupCount for I {}

/// Continuity of a partial map defined on `a`, in the subspace topology.
pub fn is_continuous_on(z: &FiniteSpace, a: SubsetMask, values: &[Option<usize>]) -> bool {
    let opens = z.subspace_opens(a);
    let image: BTreeSet<usize> = a.points().filter_map(|p| values[p]).collect();
    image.into_iter().all(|y| {
        let fiber = SubsetMask::from_points(a.points().filter(|&p| values[p] == Some(y)));
        opens.contains(&fiber)
    })
}

/// For every member `S`, both `{z : Φ(z) ∩ (X∖S) ≠ ∅}` and
/// `{z : Φ(z) ⊆ X∖S}` must be open in `z`.
pub fn is_s_continuous(z: &FiniteSpace, phi: &SetValuedMap, sb: &Subbase) -> Verdict {
    let g = sb.ground();
    for &member in sb.members() {
        let outside = g.complement(member);
        let hits = phi.domain_set(|v| v.intersects(outside));
        if !z.is_open(hits) {
            return Verdict::fails(Witness::SContinuity {
                member,
                which: PreimageKind::Hits,
                set: hits,
            });
        }
        let contained = phi.domain_set(|v| v.is_subset(outside));
        if !z.is_open(contained) {
            return Verdict::fails(Witness::SContinuity {
                member,
                which: PreimageKind::Contained,
                set: contained,
            });
        }
    }
    Verdict::holds()
}

/// Lower semi-continuity against the topology `x` on the ground set.
pub fn is_lsc(z: &FiniteSpace, phi: &SetValuedMap, x: &FiniteSpace) -> Verdict {
    semi(z, phi, x, |v, u| v.intersects(u))
}

/// Upper semi-continuity against the topology `x` on the ground set.
pub fn is_usc(z: &FiniteSpace, phi: &SetValuedMap, x: &FiniteSpace) -> Verdict {
    semi(z, phi, x, |v, u| v.is_subset(u))
}

fn semi(
    z: &FiniteSpace,
    phi: &SetValuedMap,
    x: &FiniteSpace,
    rel: impl Fn(SubsetMask, SubsetMask) -> bool,
) -> Verdict {
    for &open in x.opens() {
        let set = phi.domain_set(|v| rel(v, open));
        if !z.is_open(set) {
            return Verdict::fails(Witness::SemiContinuity { open, set });
        }
    }
    Verdict::holds()
}

/// The images `f(X∖S)` are open. Vacuous into a discrete codomain, which the
/// verdict records in its notes.
pub fn is_s_open(f: &PointMap, sb: &Subbase) -> Result<Verdict> {
    if let Some(y) = f.first_missed_point() {
        return Err(Error::NotSurjective(y));
    }
    let space = match f.codomain() {
        Codomain::Discrete(_) => {
            return Ok(Verdict::holds().with_note("vacuous: codomain is discrete"));
        }
        Codomain::Space(s) if s.is_discrete() => {
            return Ok(Verdict::holds().with_note("vacuous: codomain is discrete"));
        }
        Codomain::Space(s) => s,
    };
    let g = sb.ground();
    for &member in sb.members() {
        let image = g.complement(member).image(f.values());
        if !space.is_open(image) {
            return Ok(Verdict::fails(Witness::NonOpenImage { member, image }));
        }
    }
    Ok(Verdict::holds().with_note("checked"))
}

/// Every fiber `f⁻¹(y)` is S-convex.
pub fn is_s_convex_map(f: &PointMap, sb: &Subbase) -> Verdict {
    for y in 0..f.codomain().len() {
        let fiber = f.fiber(y);
        if let Some(Witness::NonConvex { x, y: other, .. }) = convexity::is_convex(sb, fiber).witness() {
            return Verdict::fails(Witness::NonConvexFiber {
                point: y,
                fiber,
                x: *x,
                y: *other,
            });
        }
    }
    Verdict::holds()
}

/// `y ↦ f⁻¹(y)`, defined on the codomain of `f`.
pub fn fiber_map(f: &PointMap) -> Result<SetValuedMap> {
    if let Some(y) = f.first_missed_point() {
        return Err(Error::NotSurjective(y));
    }
    let ground = GroundSet::new(f.domain_len())?;
    SetValuedMap::new(ground, (0..f.codomain().len()).map(|y| f.fiber(y)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn m(points: &[usize]) -> SubsetMask {
        SubsetMask::from_points(points.iter().copied())
    }

    fn sierp_phi() -> SetValuedMap {
        SetValuedMap::new(GroundSet::new(3).unwrap(), vec![m(&[0, 1, 2]), m(&[0, 1])]).unwrap()
    }

    #[test]
    fn topology_examples() {
        let s = FiniteSpace::sierpinski();
        assert!(is_topology(2, s.opens()).is_holds());
        let bad = [m(&[]), m(&[0]), m(&[1]), m(&[0, 1, 2])];
        assert_eq!(
            is_topology(3, &bad).witness(),
            Some(&Witness::MissingOpen { set: m(&[0, 1]) })
        );
        assert!(is_topology(2, FiniteSpace::discrete(2).opens()).is_holds());
        assert!(FiniteSpace::new(vec!["a".into(), "b".into()], [m(&[]), m(&[0])]).is_err());
    }

    #[test]
    fn component_examples() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(components(&s), vec![m(&[0, 1])]);
        assert_eq!(components(&FiniteSpace::discrete(2)), vec![m(&[0]), m(&[1])]);
        let sum = s.disjoint_union(&FiniteSpace::discrete(1));
        assert_eq!(components(&sum), vec![m(&[0, 1]), m(&[2])]);
    }

    #[test]
    fn continuity_examples() {
        let s = FiniteSpace::sierpinski();
        assert!(is_continuous(&s, &PointMap::discrete(vec![1, 1], 3).unwrap()).is_holds());
        assert_eq!(
            is_continuous(&s, &PointMap::discrete(vec![0, 1], 3).unwrap()).witness(),
            Some(&Witness::NonConstantComponent { component: m(&[0, 1]) })
        );
        let d = FiniteSpace::discrete(3);
        assert!(is_continuous(&d, &PointMap::discrete(vec![2, 0, 1], 3).unwrap()).is_holds());
        let into_sierp = PointMap::new(vec![1, 0], Codomain::Space(s.clone())).unwrap();
        assert!(is_continuous(&s, &into_sierp).witness().is_some());
        assert!(is_continuous(&s, &PointMap::new(vec![0, 1], Codomain::Space(s.clone())).unwrap()).is_holds());
    }

    #[test]
    fn s_continuity_examples() {
        let sb = corpus::chain(3);
        let g = sb.ground();
        let phi = sierp_phi();
        assert!(is_s_continuous(&FiniteSpace::discrete(2), &phi, &sb).is_holds());
        let constant = SetValuedMap::constant(g, 2, m(&[1, 2])).unwrap();
        assert!(is_s_continuous(&FiniteSpace::sierpinski(), &constant, &sb).is_holds());
        assert_eq!(
            is_s_continuous(&FiniteSpace::sierpinski(), &phi, &sb).witness(),
            Some(&Witness::SContinuity {
                member: m(&[2]),
                which: PreimageKind::Contained,
                set: m(&[1])
            })
        );
    }

    #[test]
    fn semicontinuity_examples() {
        let s = FiniteSpace::sierpinski();
        let x = FiniteSpace::discrete(3);
        let phi = sierp_phi();
        assert!(is_lsc(&s, &phi, &x).is_holds());
        assert_eq!(
            is_usc(&s, &phi, &x).witness(),
            Some(&Witness::SemiContinuity {
                open: m(&[0, 1]),
                set: m(&[1])
            })
        );
        let constant = SetValuedMap::constant(GroundSet::new(3).unwrap(), 2, m(&[0, 2])).unwrap();
        assert!(is_lsc(&s, &constant, &x).is_holds() && is_usc(&s, &constant, &x).is_holds());
        let d = FiniteSpace::discrete(2);
        assert!(is_lsc(&d, &phi, &x).is_holds() && is_usc(&d, &phi, &x).is_holds());
    }

    #[test]
    fn s_open_examples() {
        let sb = corpus::chain(3);
        let f = PointMap::discrete(vec![0, 1, 1], 2).unwrap();
        let v = is_s_open(&f, &sb).unwrap();
        assert!(v.is_holds());
        assert_eq!(v.notes(), &["vacuous: codomain is discrete".to_string()]);
        let id = is_s_open(&PointMap::identity(3), &sb).unwrap();
        assert!(id.is_holds());
        // X = {0,1}, S = {{0},{1},{0,1}}, f(0)=a, f(1)=b into Sierpinski.
        let into_sierp = PointMap::new(vec![0, 1], Codomain::Space(FiniteSpace::sierpinski())).unwrap();
        assert_eq!(
            is_s_open(&into_sierp, &corpus::chain(2)).unwrap().witness(),
            Some(&Witness::NonOpenImage {
                member: m(&[0]),
                image: m(&[1])
            })
        );
        assert_eq!(
            is_s_open(&PointMap::discrete(vec![0, 0], 2).unwrap(), &sb),
            Err(Error::NotSurjective(1))
        );
    }

    #[test]
    fn s_convex_map_examples() {
        let sb = corpus::chain(3);
        assert!(is_s_convex_map(&PointMap::discrete(vec![0, 1, 1], 2).unwrap(), &sb).is_holds());
        assert_eq!(
            is_s_convex_map(&PointMap::discrete(vec![0, 1, 0], 2).unwrap(), &sb).witness(),
            Some(&Witness::NonConvexFiber {
                point: 0,
                fiber: m(&[0, 2]),
                x: 0,
                y: 2
            })
        );
        assert!(is_s_convex_map(&PointMap::identity(3), &sb).is_holds());
    }

    #[test]
    fn fiber_map_examples() {
        let phi = fiber_map(&PointMap::discrete(vec![0, 1, 1], 2).unwrap()).unwrap();
        assert_eq!(phi.values(), &[m(&[0]), m(&[1, 2])]);
        let id = fiber_map(&PointMap::identity(3)).unwrap();
        assert_eq!(id.values(), &[m(&[0]), m(&[1]), m(&[2])]);
        let constant = fiber_map(&PointMap::discrete(vec![0, 0, 0], 1).unwrap()).unwrap();
        assert_eq!(constant.values(), &[m(&[0, 1, 2])]);
        assert_eq!(
            fiber_map(&PointMap::discrete(vec![0, 0], 2).unwrap()),
            Err(Error::NotSurjective(1))
        );
    }

    #[test]
    fn set_valued_map_rejects_empty() {
        let g = GroundSet::new(2).unwrap();
        assert_eq!(SetValuedMap::new(g, vec![m(&[0]), m(&[])]), Err(Error::EmptyValue(1)));
    }

    #[test]
    fn preorder_and_generated() {
        let chain2 = FiniteSpace::from_preorder(2, |i, j| i <= j);
        assert_eq!(chain2.opens(), &[m(&[]), m(&[1]), m(&[0, 1])]);
        let gen = FiniteSpace::generated_by(3, &[m(&[0, 1]), m(&[1, 2])]);
        assert_eq!(
            gen.opens(),
            &[m(&[]), m(&[1]), m(&[0, 1]), m(&[1, 2]), m(&[0, 1, 2])]
        );
    }

    #[test]
    fn exhaustive_continuity_is_componentwise() {
        for z in corpus::domain_corpus(4) {
            let comps = components(&z);
            let n = z.len();
            for code in 0..3usize.pow(n as u32) {
                let values: Vec<usize> = (0..n).map(|i| code / 3usize.pow(i as u32) % 3).collect();
                let h = PointMap::discrete(values.clone(), 3).unwrap();
                let constant = comps
                    .iter()
                    .all(|c| c.points().all(|p| values[p] == values[c.min_point().unwrap()]));
                assert_eq!(is_continuous(&z, &h).is_holds(), constant);
            }
        }
    }
}
