//! Continuous selections of S-continuous convex-valued maps.
//!
//! With a validated subbase the selection is `h(z) = ξ(ḡ(z), Φ(z))`, where
//! `ḡ` extends a prescribed selection on a closed set `A` (or is the constant
//! base point when `A` is empty). Every produced map is re-checked for
//! continuity and membership before it is returned.

use crate::convexity::{is_convex, xi};
use crate::corpus;
use crate::error::{Error, Result};
use crate::finitespace::{
    components, fiber_map, is_continuous, is_s_continuous, is_s_convex_map, is_s_open, Codomain,
    FiniteSpace, PointMap, SetValuedMap,
};
use crate::setfam::{validate_subbase, GroundSet, Strictness, Subbase, SubsetMask, Verdict, Witness};
use crate::superext::{eta, lambda_map, retract, Mls};

/// A partial map on the points of a domain; `None` off its support.
pub type PartialMap = Vec<Option<usize>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionInstance {
    pub space: FiniteSpace,
    pub a: SubsetMask,
    pub g: PartialMap,
    pub phi: SetValuedMap,
    pub sb: Subbase,
}

impl SelectionInstance {
    pub fn new(space: FiniteSpace, a: SubsetMask, g: PartialMap, phi: SetValuedMap, sb: Subbase) -> Result<Self> {
        let n = space.len();
        if g.len() != n || phi.domain_len() != n {
            return Err(Error::Invariant("map sizes differ from the domain size".into()));
        }
        if phi.ground() != sb.ground() {
            return Err(Error::Invariant("set-valued map and subbase use different ground sets".into()));
        }
        if !space.is_closed(a) {
            return Err(Error::NotClosed(a));
        }
        for (z, &gz) in g.iter().enumerate() {
            match (a.contains(z), gz) {
                (true, Some(v)) if !phi.get(z).contains(v) => {
                    return Err(Error::Invariant(format!(
                        "g({}) = {v} lies outside Φ({}) = {}",
                        space.names()[z],
                        space.names()[z],
                        phi.get(z)
                    )));
                }
                (true, None) => {
                    return Err(Error::Invariant(format!("g is undefined at {} in A", space.names()[z])));
                }
                (false, Some(_)) => {
                    return Err(Error::Invariant(format!("g is defined at {} outside A", space.names()[z])));
                }
                _ => {}
            }
        }
        Ok(SelectionInstance { space, a, g, phi, sb })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoftnessInstance {
    pub space: FiniteSpace,
    pub a: SubsetMask,
    pub k: PointMap,
    pub h: PartialMap,
}

impl SoftnessInstance {
    /// Checks `f∘h = k|A`, that `A` is closed, and continuity of `k` and `h`.
    pub fn new(f: &PointMap, space: FiniteSpace, a: SubsetMask, k: PointMap, h: PartialMap) -> Result<Self> {
        let n = space.len();
        if k.domain_len() != n || h.len() != n {
            return Err(Error::Invariant("map sizes differ from the domain size".into()));
        }
        if !space.is_closed(a) {
            return Err(Error::NotClosed(a));
        }
        if !is_continuous(&space, &k).is_holds() {
            return Err(Error::Invariant("k is not continuous".into()));
        }
        for (z, &hz) in h.iter().enumerate() {
            match (a.contains(z), hz) {
                (true, Some(x)) if x >= f.domain_len() || f.get(x) != k.get(z) => {
                    return Err(Error::Invariant(format!("f(h({z})) differs from k({z})")));
                }
                (true, None) | (false, Some(_)) => {
                    return Err(Error::Invariant("h must be defined exactly on A".into()));
                }
                _ => {}
            }
        }
        if !crate::finitespace::is_continuous_on(&space, a, &h) {
            return Err(Error::Invariant("h is not continuous on A".into()));
        }
        Ok(SoftnessInstance { space, a, k, h })
    }
}

/// Extends `g` from the closed set `a` to a continuous map into the
/// discrete set `target`, constant on each component of `z`. Components
/// missing `a` take the smallest point of `target`.
pub fn extend_total(z: &FiniteSpace, a: SubsetMask, g: &[Option<usize>], target: GroundSet) -> Result<PointMap> {
    if !z.is_closed(a) {
        return Err(Error::NotClosed(a));
    }
    let mut values = vec![0usize; z.len()];
    for comp in components(z) {
        let mut seen: Option<usize> = None;
        for p in (comp & a).points() {
            let v = g[p].ok_or_else(|| Error::Invariant(format!("g is undefined at point {p} of A")))?;
            match seen {
                Some(first) if first != v => {
                    return Err(Error::NotExtendable {
                        component: comp,
                        first,
                        second: v,
                    });
                }
                _ => seen = Some(v),
            }
        }
        let value = seen.unwrap_or(0);
        for p in comp.points() {
            values[p] = value;
        }
    }
    PointMap::new(values, Codomain::Discrete(target))
}

/// Runs the selection algorithm against a subbase validated once.
#[derive(Clone, Debug)]
pub struct Selector<'a> {
    sb: &'a Subbase,
}

impl<'a> Selector<'a> {
    /// Validates `sb` under the van Mill profile.
    pub fn new(sb: &'a Subbase) -> Result<Self> {
        let verdict = validate_subbase(&sb.clone().with_strictness(Strictness::VanMill));
        if !verdict.is_holds() {
            return Err(Error::PreconditionFailed(Box::new(verdict)));
        }
        Ok(Selector { sb })
    }

    pub fn subbase(&self) -> &Subbase {
        self.sb
    }

    fn check_map(&self, z: &FiniteSpace, phi: &SetValuedMap) -> Result<()> {
        if phi.ground() != self.sb.ground() || phi.domain_len() != z.len() {
            return Err(Error::Invariant("set-valued map does not match domain and subbase".into()));
        }
        let verdict = is_s_continuous(z, phi, self.sb);
        if !verdict.is_holds() {
            return Err(Error::PreconditionFailed(Box::new(verdict)));
        }
        for (point, &value) in phi.values().iter().enumerate() {
            if !is_convex(self.sb, value).is_holds() {
                return Err(Error::PreconditionFailed(Box::new(Verdict::fails(
                    Witness::NonConvexValue { point, value },
                ))));
            }
        }
        Ok(())
    }

    fn build(&self, z: &FiniteSpace, phi: &SetValuedMap, base: impl Fn(usize) -> usize) -> Result<PointMap> {
        let values = (0..z.len())
            .map(|p| {
                let x = base(p);
                xi(self.sb, x, phi.get(p)).map_err(|e| match e {
                    Error::NotSingleton(set) => Error::InternalXiFailure { point: p, set },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let h = PointMap::new(values, Codomain::Discrete(self.sb.ground()))?;
        if let Some(p) = (0..z.len()).find(|&p| !phi.get(p).contains(h.get(p))) {
            return Err(Error::Postcondition(format!("h({p}) is not in Φ({p})")));
        }
        let cont = is_continuous(z, &h);
        if !cont.is_holds() {
            return Err(Error::Postcondition(format!("selection is not continuous: {cont}")));
        }
        Ok(h)
    }

    /// `h(z) = ξ(x0, Φ(z))`, with `x0` the smallest point of `Φ` at the
    /// first domain point.
    pub fn select(&self, z: &FiniteSpace, phi: &SetValuedMap) -> Result<PointMap> {
        self.check_map(z, phi)?;
        let x0 = phi.get(0).min_point().expect("nonempty value");
        self.build(z, phi, |_| x0)
    }

    /// `h(z) = ξ(ḡ(z), Φ(z))` with `ḡ` a continuous extension of `g` from `a`.
    pub fn select_extend(&self, z: &FiniteSpace, a: SubsetMask, g: &[Option<usize>], phi: &SetValuedMap) -> Result<PointMap> {
        self.check_map(z, phi)?;
        let extended = extend_total(z, a, g, self.sb.ground())?;
        let h = self.build(z, phi, |p| extended.get(p))?;
        if let Some(p) = a.points().find(|&p| Some(h.get(p)) != g[p]) {
            return Err(Error::Postcondition(format!("selection differs from g at {p}")));
        }
        Ok(h)
    }
}

pub fn select(z: &FiniteSpace, phi: &SetValuedMap, sb: &Subbase) -> Result<PointMap> {
    Selector::new(sb)?.select(z, phi)
}

pub fn select_extend(inst: &SelectionInstance) -> Result<PointMap> {
    Selector::new(&inst.sb)?.select_extend(&inst.space, inst.a, &inst.g, &inst.phi)
}

fn check_map_hypotheses(f: &PointMap, sb: &Subbase) -> Result<()> {
    if f.domain_len() != sb.ground().len() {
        return Err(Error::Invariant("map domain differs from the subbase ground set".into()));
    }
    let valid = validate_subbase(&sb.clone().with_strictness(Strictness::VanMill));
    if !valid.is_holds() {
        return Err(Error::HypothesisFailed(Box::new(valid)));
    }
    let open = is_s_open(f, sb)?;
    if !open.is_holds() {
        return Err(Error::HypothesisFailed(Box::new(open)));
    }
    let convex = is_s_convex_map(f, sb);
    if !convex.is_holds() {
        return Err(Error::HypothesisFailed(Box::new(convex)));
    }
    Ok(())
}

/// Lifts each `g` of the corpus through `f` by selecting from `f⁻¹∘g`.
pub fn check_invertible(f: &PointMap, sb: &Subbase, corpus: &[(FiniteSpace, PointMap)]) -> Result<Verdict> {
    check_map_hypotheses(f, sb)?;
    let selector = Selector::new(sb)?;
    let fibers = fiber_map(f)?;
    for (index, (z, g)) in corpus.iter().enumerate() {
        let reason = match lift_one(&selector, f, &fibers, z, g) {
            Ok(h) if h.compose(f).values() == g.values() => continue,
            Ok(_) => "f∘h differs from g".to_string(),
            Err(e) => e.to_string(),
        };
        return Ok(Verdict::fails(Witness::CorpusEntry { index, reason }));
    }
    Ok(Verdict::holds())
}

fn lift_one(selector: &Selector<'_>, f: &PointMap, fibers: &SetValuedMap, z: &FiniteSpace, g: &PointMap) -> Result<PointMap> {
    if g.domain_len() != z.len() || g.codomain().len() != f.codomain().len() {
        return Err(Error::Invariant("corpus map does not match its space or f".into()));
    }
    selector.select(z, &fibers.after(g))
}

/// The map `g` for one softness instance: selects from `z ↦ f⁻¹(k(z))`
/// extending `h`, so that `f∘g = k`.
pub fn soft_lift(selector: &Selector<'_>, f: &PointMap, inst: &SoftnessInstance) -> Result<PointMap> {
    let fibers = fiber_map(f)?;
    let phi = fibers.after(&inst.k);
    let g = selector.select_extend(&inst.space, inst.a, &inst.h, &phi)?;
    if g.compose(f).values() != inst.k.values() {
        return Err(Error::Postcondition("f∘g differs from k".into()));
    }
    Ok(g)
}

/// Softness of `f` on an explicit list of instances. Instances whose partial
/// map admits no continuous extension fail with a corpus witness; the map
/// hypotheses themselves fail with [`Error::HypothesisFailed`].
pub fn check_soft(f: &PointMap, sb: &Subbase, instances: &[SoftnessInstance]) -> Result<Verdict> {
    check_map_hypotheses(f, sb)?;
    let selector = Selector::new(sb)?;
    for (index, inst) in instances.iter().enumerate() {
        if let Err(e) = soft_lift(&selector, f, inst) {
            let reason = match e {
                Error::NotExtendable { .. } => format!("instance hypothesis fails: {e}"),
                other => other.to_string(),
            };
            return Ok(Verdict::fails(Witness::CorpusEntry { index, reason }));
        }
    }
    Ok(Verdict::holds())
}

/// `ḡ = r∘g1` for a lift `g1` of `g` through `λf`; checks `f∘ḡ = g`.
pub fn lift_project(f: &PointMap, sb: &Subbase, g: &PointMap, g1: &[Mls]) -> Result<PointMap> {
    if g1.len() != g.domain_len() {
        return Err(Error::Invariant("lift and map have different domains".into()));
    }
    let valid = validate_subbase(&sb.clone().with_strictness(Strictness::VanMill));
    if !valid.is_holds() {
        return Err(Error::HypothesisFailed(Box::new(valid)));
    }
    let convex = is_s_convex_map(f, sb);
    if !convex.is_holds() {
        return Err(Error::HypothesisFailed(Box::new(convex)));
    }
    let m = f.codomain().len();
    let mut values = Vec::with_capacity(g1.len());
    for (z, eta_z) in g1.iter().enumerate() {
        if lambda_map(f.values(), m, eta_z)? != eta(g.get(z), m)? {
            return Err(Error::NotALift(z));
        }
        let x = retract(sb, eta_z)?;
        if f.get(x) != g.get(z) {
            return Err(Error::Postcondition(format!("f(r(g1({z}))) differs from g({z})")));
        }
        values.push(x);
    }
    PointMap::new(values, Codomain::Discrete(sb.ground()))
}

/// Exhaustive search over all maps `z → 0..x_len`.
pub mod brute {
    use super::*;

    /// A map is continuous into a discrete set iff every fiber is open.
    pub fn continuous(z: &FiniteSpace, values: &[usize], x_len: usize) -> bool {
        (0..x_len).all(|y| z.is_open(SubsetMask::from_points((0..values.len()).filter(|&p| values[p] == y))))
    }

    /// First continuous map, in lexicographic order of value tables,
    /// satisfying `accept`.
    pub fn find_map(z: &FiniteSpace, x_len: usize, accept: impl Fn(&[usize]) -> bool) -> Option<Vec<usize>> {
        let n = z.len();
        let mut values = vec![0usize; n];
        loop {
            if continuous(z, &values, x_len) && accept(&values) {
                return Some(values);
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                values[i] += 1;
                if values[i] < x_len {
                    break;
                }
                values[i] = 0;
            }
        }
    }

    pub fn selection_exists(z: &FiniteSpace, phi: &SetValuedMap) -> bool {
        find_map(z, phi.ground().len(), |v| v.iter().enumerate().all(|(p, &x)| phi.get(p).contains(x))).is_some()
    }

    pub fn lift_exists(z: &FiniteSpace, f: &PointMap, g: &PointMap) -> bool {
        find_map(z, f.domain_len(), |v| v.iter().enumerate().all(|(p, &x)| f.get(x) == g.get(p))).is_some()
    }

    pub fn soft_lift_exists(f: &PointMap, inst: &SoftnessInstance) -> bool {
        find_map(&inst.space, f.domain_len(), |v| {
            v.iter().enumerate().all(|(p, &x)| f.get(x) == inst.k.get(p) && inst.h[p].is_none_or(|hx| hx == x))
        })
        .is_some()
    }
}

/// Every continuous `g : Z → Y` into the discrete `y_len` points, for each
/// domain with at most `max_z` points up to homeomorphism.
pub fn invertibility_corpus(max_z: usize, y_len: usize) -> Vec<(FiniteSpace, PointMap)> {
    let mut out = Vec::new();
    for z in corpus::domain_corpus(max_z) {
        for values in all_tables(z.len(), y_len) {
            if brute::continuous(&z, &values, y_len) {
                let g = PointMap::discrete(values, y_len).expect("in range");
                out.push((z.clone(), g));
            }
        }
    }
    out
}

/// All softness instances for `f` over domains with at most `max_z` points:
/// every closed `A`, continuous `k`, and continuous `h` on `A` with `f∘h = k|A`.
pub fn softness_corpus(f: &PointMap, max_z: usize) -> Vec<SoftnessInstance> {
    let x_len = f.domain_len();
    let y_len = f.codomain().len();
    let mut out = Vec::new();
    for z in corpus::domain_corpus(max_z) {
        let n = z.len();
        let closed: Vec<SubsetMask> = z.ground().subsets().filter(|&a| z.is_closed(a)).collect();
        for kv in all_tables(n, y_len) {
            if !brute::continuous(&z, &kv, y_len) {
                continue;
            }
            let k = PointMap::discrete(kv, y_len).expect("in range");
            for &a in &closed {
                let pts = a.to_vec();
                for hv in all_tables(pts.len(), x_len) {
                    let mut h: PartialMap = vec![None; n];
                    for (i, &p) in pts.iter().enumerate() {
                        h[p] = Some(hv[i]);
                    }
                    if let Ok(inst) = SoftnessInstance::new(f, z.clone(), a, k.clone(), h) {
                        out.push(inst);
                    }
                }
            }
        }
    }
    out
}

/// All value tables `0..len → 0..range` in lexicographic order.
pub fn all_tables(len: usize, range: usize) -> Vec<Vec<usize>> {
    let total = range.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0; len];
            for slot in v.iter_mut().rev() {
                *slot = code % range;
                code /= range;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superext::{enumerate_mls, Mls};
    use crate::setfam::SetFamily;

    fn m(points: &[usize]) -> SubsetMask {
        SubsetMask::from_points(points.iter().copied())
    }

    fn g3() -> GroundSet {
        GroundSet::new(3).unwrap()
    }

    #[test]
    fn extend_examples() {
        let s = FiniteSpace::sierpinski();
        let h = extend_total(&s, m(&[1]), &[None, Some(2)], g3()).unwrap();
        assert_eq!(h.values(), &[2, 2]);
        let d = FiniteSpace::discrete(2);
        assert_eq!(extend_total(&d, m(&[0]), &[Some(0), None], g3()).unwrap().values(), &[0, 0]);
        assert_eq!(extend_total(&s, SubsetMask::EMPTY, &[None, None], g3()).unwrap().values(), &[0, 0]);
        assert_eq!(extend_total(&s, m(&[0]), &[Some(1), None], g3()), Err(Error::NotClosed(m(&[0]))));
        let i2 = FiniteSpace::indiscrete(2);
        assert!(matches!(
            extend_total(&i2, m(&[0, 1]), &[Some(0), Some(1)], g3()),
            Err(Error::NotExtendable { first: 0, second: 1, .. })
        ));
    }

    #[test]
    fn select_examples() {
        let c3 = corpus::chain(3);
        let d = FiniteSpace::discrete(2);
        let phi = SetValuedMap::new(g3(), vec![m(&[0, 1]), m(&[1, 2])]).unwrap();
        assert_eq!(select(&d, &phi, &c3).unwrap().values(), &[0, 1]);
        let s = FiniteSpace::sierpinski();
        let full = SetValuedMap::constant(g3(), 2, m(&[0, 1, 2])).unwrap();
        assert_eq!(select(&s, &full, &c3).unwrap().values(), &[0, 0]);
        let bad = SetValuedMap::new(g3(), vec![m(&[0, 1, 2]), m(&[0, 1])]).unwrap();
        match select(&s, &bad, &c3) {
            Err(Error::PreconditionFailed(v)) => assert!(matches!(
                v.witness(),
                Some(Witness::SContinuity { member, .. }) if *member == m(&[2])
            )),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn select_rejects_bad_inputs() {
        let d = FiniteSpace::discrete(1);
        let phi = SetValuedMap::new(g3(), vec![m(&[0, 2])]).unwrap();
        assert!(matches!(
            select(&d, &phi, &corpus::chain(3)),
            Err(Error::PreconditionFailed(v)) if matches!(v.witness(), Some(Witness::NonConvexValue { .. }))
        ));
        let phi = SetValuedMap::new(g3(), vec![m(&[0])]).unwrap();
        assert!(matches!(
            select(&d, &phi, &corpus::tri()),
            Err(Error::PreconditionFailed(v)) if matches!(v.witness(), Some(Witness::Binary { .. }))
        ));
    }

    #[test]
    fn select_extend_examples() {
        let c3 = corpus::chain(3);
        let d = FiniteSpace::discrete(2);
        let phi = SetValuedMap::new(g3(), vec![m(&[0, 1]), m(&[1, 2])]).unwrap();
        let inst = SelectionInstance::new(d.clone(), m(&[0]), vec![Some(1), None], phi.clone(), c3.clone()).unwrap();
        assert_eq!(select_extend(&inst).unwrap().values(), &[1, 1]);
        let empty = SelectionInstance::new(d.clone(), SubsetMask::EMPTY, vec![None, None], phi.clone(), c3.clone()).unwrap();
        assert_eq!(select_extend(&empty).unwrap(), select(&d, &phi, &c3).unwrap());
        let all = SelectionInstance::new(d, m(&[0, 1]), vec![Some(1), Some(2)], phi, c3).unwrap();
        assert_eq!(select_extend(&all).unwrap().values(), &[1, 2]);
    }

    #[test]
    fn instance_rejects_g_outside_phi() {
        let phi = SetValuedMap::new(g3(), vec![m(&[0, 1])]).unwrap();
        let err = SelectionInstance::new(FiniteSpace::discrete(1), m(&[0]), vec![Some(2)], phi, corpus::chain(3));
        assert!(matches!(err, Err(Error::Invariant(_))));
    }

    #[test]
    fn invertible_examples() {
        let c3 = corpus::chain(3);
        let f = PointMap::discrete(vec![0, 1, 1], 2).unwrap();
        let corpus = invertibility_corpus(3, 2);
        assert!(check_invertible(&f, &c3, &corpus).unwrap().is_holds());
        let bad = PointMap::discrete(vec![0, 1, 0], 2).unwrap();
        assert!(matches!(
            check_invertible(&bad, &c3, &corpus),
            Err(Error::HypothesisFailed(v)) if matches!(v.witness(), Some(Witness::NonConvexFiber { .. }))
        ));
        let id = PointMap::identity(3);
        let corpus3 = invertibility_corpus(3, 3);
        assert!(check_invertible(&id, &c3, &corpus3).unwrap().is_holds());
    }

    #[test]
    fn soft_examples() {
        let c3 = corpus::chain(3);
        let f = PointMap::discrete(vec![0, 1, 1], 2).unwrap();
        let s = FiniteSpace::sierpinski();
        let inst = SoftnessInstance::new(&f, s, m(&[1]), PointMap::discrete(vec![0, 0], 2).unwrap(), vec![None, Some(0)]).unwrap();
        let selector = Selector::new(&c3).unwrap();
        assert_eq!(soft_lift(&selector, &f, &inst).unwrap().values(), &[0, 0]);
        assert!(check_soft(&f, &c3, &[inst]).unwrap().is_holds());
        let bad = PointMap::discrete(vec![0, 1, 0], 2).unwrap();
        assert!(matches!(check_soft(&bad, &c3, &[]), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn lift_project_example() {
        let c3 = corpus::chain(3);
        let f = PointMap::discrete(vec![0, 0, 1], 2).unwrap();
        let delta = Mls::from_minimal(SetFamily::new(g3(), [m(&[0, 1]), m(&[1, 2]), m(&[0, 2])]).unwrap()).unwrap();
        let g = PointMap::discrete(vec![0], 2).unwrap();
        assert_eq!(lift_project(&f, &c3, &g, std::slice::from_ref(&delta)).unwrap().values(), &[1]);
        let f2 = PointMap::discrete(vec![0, 1, 1], 2).unwrap();
        assert_eq!(lift_project(&f2, &c3, &g, &[delta]), Err(Error::NotALift(0)));
    }

    #[test]
    fn lift_project_recovers_point_lifts() {
        let c3 = corpus::chain(3);
        let f = PointMap::discrete(vec![0, 0, 1], 2).unwrap();
        for x in 0..3 {
            let g = PointMap::discrete(vec![f.get(x)], 2).unwrap();
            assert_eq!(lift_project(&f, &c3, &g, &[eta(x, 3).unwrap()]).unwrap().values(), &[x]);
        }
        let id = PointMap::identity(3);
        for e in enumerate_mls(3).unwrap().elements() {
            let r = retract(&c3, e).unwrap();
            let g = PointMap::discrete(vec![r], 3).unwrap();
            // λ(id)(e) = e is a lift of g only when e is principal.
            let res = lift_project(&id, &c3, &g, std::slice::from_ref(e));
            assert_eq!(res.is_ok(), e == &eta(r, 3).unwrap());
        }
    }

    #[test]
    fn tables_are_lexicographic() {
        assert_eq!(all_tables(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_tables(0, 3), vec![Vec::<usize>::new()]);
    }
}
