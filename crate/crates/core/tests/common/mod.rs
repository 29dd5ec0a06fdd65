//! Brute-force oracles, written independently of the library's deciders.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use supercomb::SubsetMask;

/// Searches linked subfamilies for one with empty intersection.
///
/// A member that does not shrink the running intersection can be dropped
/// from any witness, so only shrinking members are added; each step loses
/// a point and the depth stays below the ground size. The rest of the
/// search depends only on the compatible members and the intersection, so
/// repeated states are skipped.
pub fn binary_oracle(members: &[u32]) -> bool {
    let k = members.len();
    assert!(k <= 64);
    let compat: Vec<u64> = (0..k)
        .map(|i| (0..k).filter(|&j| members[i] & members[j] != 0).fold(0u64, |acc, j| acc | 1 << j))
        .collect();
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut seen = HashSet::new();
    // Each state: members still addable, and the intersection so far.
    let mut stack = vec![(all, u32::MAX)];
    while let Some((cand, core)) = stack.pop() {
        let mut rest = cand;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let next_core = core & members[j];
            if next_core == 0 {
                return false;
            }
            if next_core == core {
                continue;
            }
            let next = cand & compat[j];
            if seen.insert((next, next_core)) {
                stack.push((next, next_core));
            }
        }
    }
    true
}

/// Every disjoint pair has a screen.
pub fn normal_oracle(members: &[u32], full: u32) -> bool {
    members.iter().all(|&s0| {
        members.iter().all(|&s1| {
            s0 & s1 != 0
                || members
                    .iter()
                    .any(|&t0| t0 & s1 == 0 && members.iter().any(|&t1| s0 & t1 == 0 && t0 | t1 == full))
        })
    })
}

/// Every two distinct points are told apart by some member containing the first.
pub fn separating_oracle(members: &[u32], n: usize) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| x == y || members.iter().any(|&s| s >> x & 1 == 1 && s >> y & 1 == 0))
    })
}

pub fn clamp(x: usize, lo: usize, hi: usize) -> usize {
    x.max(lo).min(hi)
}

/// Antichains of nonempty subsets of `n` points whose members pairwise meet.
pub fn intersecting_antichains(n: usize) -> Vec<Vec<u32>> {
    fn grow(sets: &[u32], start: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(current.clone());
        for i in start..sets.len() {
            let s = sets[i];
            if current.iter().all(|&c| c & s != 0 && c & s != c && c & s != s) {
                current.push(s);
                grow(sets, i + 1, current, out);
                current.pop();
            }
        }
    }
    let sets: Vec<u32> = (1..1u32 << n).collect();
    let mut out = Vec::new();
    grow(&sets, 0, &mut Vec::new(), &mut out);
    out
}

/// Maximal linked systems by filtering antichains: exactly one of each
/// complementary pair lies above some member.
pub fn mls_by_antichains(n: usize) -> BTreeSet<Vec<u32>> {
    let full = (1u32 << n) - 1;
    intersecting_antichains(n)
        .into_iter()
        .filter(|a| {
            let above = |s: u32| a.iter().any(|&m| m & !s == 0);
            (0..=full).all(|s| above(s) != above(full ^ s))
        })
        .map(|mut a| {
            a.sort_unstable();
            a
        })
        .collect()
}

/// Truth tables of all monotone Boolean functions of `k ≤ 6` variables.
/// Bit `x` of a table is the value at the input whose set bits are `x`.
pub fn monotone_tables(k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0, 1];
    }
    let lower = monotone_tables(k - 1);
    let half = 1u32 << (k - 1);
    let mut out = Vec::new();
    for &a in &lower {
        for &b in &lower {
            if a & !b == 0 {
                out.push(a | b << half);
            }
        }
    }
    out
}

/// Self-dual monotone functions of `n` variables, counted as monotone `g`
/// on `n - 1` variables with `g(x) ∧ g(¬x)` never true.
pub fn count_self_dual_monotone(n: usize) -> u64 {
    assert!((1..=7).contains(&n));
    let k = n - 1;
    let width = 1u32 << k;
    let reverse = |g: u64| -> u64 {
        let r = g.reverse_bits();
        if width == 64 {
            r
        } else {
            r >> (64 - width)
        }
    };
    monotone_tables(k).into_iter().filter(|&g| g & reverse(g) == 0).count() as u64
}

pub fn masks(points: &[usize]) -> SubsetMask {
    SubsetMask::from_points(points.iter().copied())
}

/// A map into a discrete set is continuous iff every fiber is open.
pub fn continuous_into_discrete(z: &supercomb::FiniteSpace, values: &[usize]) -> bool {
    let top = values.iter().max().map_or(0, |m| m + 1);
    (0..top).all(|y| z.is_open(SubsetMask::from_points((0..values.len()).filter(|&p| values[p] == y))))
}

/// Whether some continuous map `z → 0..range` passes `accept`, by trying all
/// `range^|z|` value tables.
pub fn exists_map(z: &supercomb::FiniteSpace, range: usize, accept: impl Fn(&[usize]) -> bool) -> bool {
    let n = z.len();
    let total = range.pow(n as u32);
    let mut values = vec![0; n];
    (0..total).any(|mut code| {
        for slot in values.iter_mut() {
            *slot = code % range;
            code /= range;
        }
        accept(&values) && continuous_into_discrete(z, &values)
    })
}

/// `table[m]` has bit `s` set for every superset `s` of `m`, on `n ≤ 7` points.
pub fn upset_table(n: usize) -> Vec<u128> {
    (0u32..1 << n)
        .map(|m| (0u32..1 << n).filter(|s| s & m == m).fold(0u128, |acc, s| acc | 1 << s))
        .collect()
}

/// Up-closure of an antichain, one bit per subset.
pub fn upset(table: &[u128], minimal: &[SubsetMask]) -> u128 {
    minimal.iter().fold(0, |acc, m| acc | table[m.bits() as usize])
}

/// Where a point permutation sends each subset mask.
pub fn image_table(n: usize, perm: &[usize]) -> Vec<u32> {
    (0u32..1 << n)
        .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << perm[i]))
        .collect()
}

/// Relabels the subsets recorded in an up-closure.
pub fn permute_upset(up: u128, image: &[u32]) -> u128 {
    let mut out = 0u128;
    let mut rest = up;
    while rest != 0 {
        let s = rest.trailing_zeros();
        rest &= rest - 1;
        out |= 1 << image[s as usize];
    }
    out
}
