//! Bridge count, warping degree, ascending number and the search for
//! subdiagrams of least Carter genus.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::carter::{genus_of, RibbonGraph};
use crate::error::{Error, Result};
use crate::gauss::{CrossingId, Diagram, Passage};

/// Largest diagram the subdiagram search accepts by default.
pub const SUBDIAGRAM_CAP: usize = 20;
/// Largest diagram the crossing-change oracle accepts by default.
pub const ASCENDING_ORACLE_CAP: usize = 8;

/// Sum over components of the number of maximal cyclic runs of over
/// passages, counting at least one per component.
pub fn bridge_count(d: &Diagram) -> usize {
    d.components()
        .iter()
        .map(|word| {
            let n = word.len();
            let over = |i: usize| word[i].passage == Passage::Over;
            // a word made only of overs has no run start and counts once
            (0..n)
                .filter(|&i| over(i) && !over((i + n - 1) % n))
                .count()
                .max(1)
        })
        .sum()
}

/// Order in which components are traversed and where each traversal starts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AscendingContext {
    pub order: Vec<usize>,
    /// Entry index at which each component's traversal begins.
    pub basepoints: Vec<usize>,
}

impl AscendingContext {
    /// Components in index order, each starting at entry 0.
    pub fn standard(d: &Diagram) -> Self {
        let m = d.component_count();
        AscendingContext {
            order: (0..m).collect(),
            basepoints: alloc::vec![0; m],
        }
    }

    pub fn is_valid_for(&self, d: &Diagram) -> bool {
        let m = d.component_count();
        let mut seen = alloc::vec![false; m];
        self.order.len() == m
            && self.basepoints.len() == m
            && self
                .order
                .iter()
                .all(|&k| k < m && !core::mem::replace(&mut seen[k], true))
            && self
                .basepoints
                .iter()
                .enumerate()
                .all(|(k, &b)| b < d.edge_count_of(k))
    }
}

/// Number of crossings first met on an over passage.
pub fn warping_degree(d: &Diagram, ctx: &AscendingContext) -> Result<usize> {
    if !ctx.is_valid_for(d) {
        return Err(Error::DomainMismatch);
    }
    Ok(warping_unchecked(d, &ctx.order, &ctx.basepoints))
}

fn warping_unchecked(d: &Diagram, order: &[usize], basepoints: &[usize]) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &k in order {
        let word = d.component(k);
        let n = word.len();
        for t in 0..n {
            let e = word[(basepoints[k] + t) % n];
            if seen.insert(e.crossing) && e.passage == Passage::Over {
                count += 1;
            }
        }
    }
    count
}

/// Steps `v` to the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Least warping degree over all contexts, with a context attaining it.
///
/// Only components with crossings are permuted; the others trail in index
/// order since they cannot affect the count.
pub fn ascending_witness(d: &Diagram) -> (usize, AscendingContext) {
    let m = d.component_count();
    let mut busy: Vec<usize> = (0..m).filter(|&k| !d.component(k).is_empty()).collect();
    let idle: Vec<usize> = (0..m).filter(|&k| d.component(k).is_empty()).collect();
    let mut best = (usize::MAX, AscendingContext::standard(d));
    loop {
        let mut order = busy.clone();
        order.extend(&idle);
        let mut bases = alloc::vec![0usize; m];
        'bases: loop {
            let w = warping_unchecked(d, &order, &bases);
            if w < best.0 {
                best = (
                    w,
                    AscendingContext {
                        order: order.clone(),
                        basepoints: bases.clone(),
                    },
                );
                if w == 0 {
                    return best;
                }
            }
            for &k in &busy {
                bases[k] += 1;
                if bases[k] < d.component(k).len() {
                    continue 'bases;
                }
                bases[k] = 0;
            }
            break;
        }
        if !next_permutation(&mut busy) {
            break;
        }
    }
    if best.0 == usize::MAX {
        best.0 = 0;
    }
    best
}

/// The minimum number of crossing changes making the diagram ascending.
pub fn ascending_number(d: &Diagram) -> usize {
    ascending_witness(d).0
}

/// Whether some traversal meets every crossing first from below.
fn ascending_somewhere(d: &Diagram) -> bool {
    let comps: Vec<usize> = (0..d.component_count())
        .filter(|&k| !d.component(k).is_empty())
        .collect();
    let mut order = comps.clone();
    loop {
        let mut bases = alloc::vec![0usize; d.component_count()];
        loop {
            let mut below = BTreeSet::new();
            let ok = order.iter().all(|&k| {
                let word = d.component(k);
                (0..word.len()).all(|t| {
                    let e = word[(bases[k] + t) % word.len()];
                    below.contains(&e.crossing)
                        || (e.passage == Passage::Under && below.insert(e.crossing))
                })
            });
            if ok {
                return true;
            }
            let Some(&k) = order.iter().find(|&&k| bases[k] + 1 < d.component(k).len()) else {
                break;
            };
            bases[k] += 1;
            for &j in order.iter().take_while(|&&j| j != k) {
                bases[j] = 0;
            }
        }
        if !next_permutation(&mut order) {
            return false;
        }
    }
}

/// Ascending number found by trying crossing-change sets of growing size.
pub fn ascending_number_by_changes(d: &Diagram, cap: usize) -> Result<usize> {
    let ids: Vec<CrossingId> = d.crossing_ids().collect();
    let n = ids.len();
    if n > cap || n >= 64 {
        return Err(Error::CapExceeded { size: n, cap });
    }
    for size in 0..=n {
        for mask in 0u64..1 << n {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut changed = d.clone();
            for (i, &c) in ids.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    changed = changed.crossing_change(c).expect("crossing exists");
                }
            }
            if ascending_somewhere(&changed) {
                return Ok(size);
            }
        }
    }
    unreachable!("changing every crossing met first from above always works")
}

/// Least Carter genus over all subdiagrams, with the inclusion-minimal sets
/// of virtualized crossings attaining it, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusMinimum {
    pub minimum: usize,
    pub witnesses: Vec<Vec<CrossingId>>,
}

pub fn min_genus_subdiagram(d: &Diagram, cap: usize) -> Result<GenusMinimum> {
    let ids: Vec<CrossingId> = d.crossing_ids().collect();
    let n = ids.len();
    if n > cap || n >= usize::BITS as usize {
        return Err(Error::CapExceeded { size: n, cap });
    }
    let subset = |mask: usize| -> BTreeSet<CrossingId> {
        ids.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &c)| c)
            .collect()
    };
    let genera: Vec<usize> = (0..1usize << n)
        .map(|mask| {
            let sub = d.without(&subset(mask));
            genus_of(&sub, &RibbonGraph::new(&sub)).total
        })
        .collect();
    let minimum = *genera.iter().min().expect("the empty set is a candidate");
    let mut minimal: Vec<usize> = Vec::new();
    for size in 0..=n {
        for (mask, &g) in genera.iter().enumerate() {
            // skip supersets of a witness already found
            if mask.count_ones() as usize == size
                && g == minimum
                && !minimal.iter().any(|&w| w & !mask == 0)
            {
                minimal.push(mask);
            }
        }
    }
    let mut witnesses: Vec<Vec<CrossingId>> = minimal
        .into_iter()
        .map(|m| subset(m).into_iter().collect())
        .collect();
    witnesses.sort();
    Ok(GenusMinimum { minimum, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carter::total_genus;
    use crate::gauss::parse;
    use alloc::vec;

    const TREFOIL: &str = "O1+U2+O3+U1+O2+U3+";
    const VIRTUAL_TREFOIL: &str = "O1+U2+U1+O2+";

    fn d(s: &str) -> Diagram {
        parse(s).unwrap()
    }

    #[test]
    fn bridges() {
        assert_eq!(bridge_count(&d(TREFOIL)), 3);
        assert_eq!(bridge_count(&d(VIRTUAL_TREFOIL)), 1);
        assert_eq!(bridge_count(&d("")), 1);
        assert_eq!(bridge_count(&d(";")), 2);
        assert_eq!(bridge_count(&d("O1+O2-U1+U2-")), 1);
        assert_eq!(bridge_count(&d("O1+;U1+")), 2);
    }

    #[test]
    fn warping_examples() {
        let vt = d(VIRTUAL_TREFOIL);
        let at = |b| AscendingContext {
            order: vec![0],
            basepoints: vec![b],
        };
        assert_eq!(warping_degree(&vt, &at(1)).unwrap(), 0);
        assert_eq!(warping_degree(&vt, &at(0)).unwrap(), 1);
        assert_eq!(
            warping_degree(&d(""), &AscendingContext::standard(&d(""))).unwrap(),
            0
        );
        assert_eq!(warping_degree(&vt, &at(4)), Err(Error::DomainMismatch));
        let bad = AscendingContext {
            order: vec![0, 0],
            basepoints: vec![0, 0],
        };
        assert_eq!(warping_degree(&d(";"), &bad), Err(Error::DomainMismatch));
    }

    #[test]
    fn ascending_values_match_the_change_oracle() {
        for (code, expect) in [(TREFOIL, 1), (VIRTUAL_TREFOIL, 0), ("", 0), ("O1+U1+", 0)] {
            let dg = d(code);
            assert_eq!(ascending_number(&dg), expect, "{code}");
            assert_eq!(
                ascending_number_by_changes(&dg, 8).unwrap(),
                expect,
                "{code}"
            );
        }
        let hopf = d("O1+U2+;U1+O2+");
        assert_eq!(
            ascending_number(&hopf),
            ascending_number_by_changes(&hopf, 8).unwrap()
        );
    }

    #[test]
    fn witness_context_attains_the_minimum() {
        for code in [
            TREFOIL,
            VIRTUAL_TREFOIL,
            "O1+U2+;U1+O2+",
            "O1-U2-O3+U4+O2-U1-O4+U3+",
        ] {
            let dg = d(code);
            let (a, ctx) = ascending_witness(&dg);
            assert_eq!(warping_degree(&dg, &ctx).unwrap(), a);
        }
    }

    #[test]
    fn oracle_refuses_large_input() {
        let big = d("O1+U2+O3+U1+O2+U3+");
        assert_eq!(
            ascending_number_by_changes(&big, 2),
            Err(Error::CapExceeded { size: 3, cap: 2 })
        );
        assert_eq!(
            min_genus_subdiagram(&big, 2),
            Err(Error::CapExceeded { size: 3, cap: 2 })
        );
    }

    #[test]
    fn classical_diagrams_are_already_minimal() {
        let r = min_genus_subdiagram(&d(TREFOIL), SUBDIAGRAM_CAP).unwrap();
        assert_eq!(
            r,
            GenusMinimum {
                minimum: 0,
                witnesses: vec![vec![]]
            }
        );
    }

    #[test]
    fn virtual_trefoil_drops_one_crossing() {
        let r = min_genus_subdiagram(&d(VIRTUAL_TREFOIL), SUBDIAGRAM_CAP).unwrap();
        assert_eq!(r.minimum, 0);
        assert_eq!(r.witnesses, vec![vec![CrossingId(1)], vec![CrossingId(2)]]);
        assert_eq!(total_genus(&d("U2+O2+")), 0);
    }

    #[test]
    fn permutations_in_order() {
        let mut v = vec![0, 1, 2];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], [0, 2, 1]);
        assert_eq!(seen[5], [2, 1, 0]);
    }
}
