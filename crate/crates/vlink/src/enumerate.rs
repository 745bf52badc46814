//! Every Gauss code up to a crossing bound, one per isomorphism class.
//!
//! Two codes are identified when they differ by relabelling crossings,
//! rotating components, or reordering components of equal length.

use std::collections::HashSet;

use vlink_core::{Diagram, GaussEntry, Passage, Sign};

/// Chord patterns on `2n` slots: each label `0..n` appears twice, labels
/// first appear in increasing order.
fn matchings(n: usize) -> Vec<Vec<u8>> {
    fn grow(word: &mut Vec<u8>, used: &mut Vec<u8>, opened: u8, n: u8, out: &mut Vec<Vec<u8>>) {
        if word.len() == 2 * n as usize {
            out.push(word.clone());
            return;
        }
        for c in 0..opened {
            if used[c as usize] == 1 {
                used[c as usize] = 2;
                word.push(c);
                grow(word, used, opened, n, out);
                word.pop();
                used[c as usize] = 1;
            }
        }
        if opened < n {
            used[opened as usize] = 1;
            word.push(opened);
            grow(word, used, opened + 1, n, out);
            word.pop();
            used[opened as usize] = 0;
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), &mut vec![0; n], 0, n as u8, &mut out);
    out
}

/// Non-increasing lengths of `parts` components summing to `total`.
fn compositions(total: usize, parts: usize, cap: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total.min(cap)).rev() {
        for mut rest in compositions(total - first, parts - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A byte per entry (`label * 4 + passage * 2 + sign`, labels by first
/// visit), components separated by `0xff`.
fn encode(comps: &[&[GaussEntry]], rotations: &[usize], labels: &mut [u8]) -> Vec<u8> {
    labels.fill(u8::MAX);
    let mut next = 0u8;
    let mut out = Vec::with_capacity(comps.iter().map(|c| c.len() + 1).sum());
    for (word, &r) in comps.iter().zip(rotations) {
        for t in 0..word.len() {
            let e = word[(r + t) % word.len()];
            let l = &mut labels[e.crossing.0 as usize];
            if *l == u8::MAX {
                *l = next;
                next += 1;
            }
            out.push(
                *l * 4 + (e.passage == Passage::Under) as u8 * 2 + (e.sign == Sign::Minus) as u8,
            );
        }
        out.push(0xff);
    }
    out
}

/// Smallest encoding over rotations and over orders of equal-length
/// components; components must already be sorted by decreasing length.
fn class_key(d: &Diagram) -> Vec<u8> {
    let m = d.component_count();
    let mut best: Option<Vec<u8>> = None;
    let mut order: Vec<usize> = (0..m).collect();
    let mut labels = vec![0u8; d.max_label() as usize + 1];
    loop {
        let sorted = order
            .windows(2)
            .all(|p| d.component(p[0]).len() >= d.component(p[1]).len());
        if sorted {
            let comps: Vec<&[GaussEntry]> = order.iter().map(|&k| d.component(k)).collect();
            let mut rot = vec![0usize; m];
            'rot: loop {
                let code = encode(&comps, &rot, &mut labels);
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
                for k in 0..m {
                    rot[k] += 1;
                    if rot[k] < comps[k].len() {
                        continue 'rot;
                    }
                    rot[k] = 0;
                }
                break;
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    best.expect("at least one ordering is sorted")
}

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

/// One representative per class, with at most `max_crossings` crossings and
/// between 1 and `max_components` components, in generation order.
pub fn all_diagrams(max_crossings: usize, max_components: usize) -> Vec<Diagram> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 0..=max_crossings {
        for chords in matchings(n) {
            for over_first in 0u32..1 << n {
                for minus in 0u32..1 << n {
                    let mut met = vec![false; n];
                    let word: Vec<GaussEntry> = chords
                        .iter()
                        .map(|&c| {
                            let c = c as usize;
                            let first = !std::mem::replace(&mut met[c], true);
                            let over = (over_first >> c & 1 == 1) == first;
                            let passage = if over { Passage::Over } else { Passage::Under };
                            let sign = if minus >> c & 1 == 1 {
                                Sign::Minus
                            } else {
                                Sign::Plus
                            };
                            GaussEntry::new(c as u32 + 1, passage, sign)
                        })
                        .collect();
                    for m in 1..=max_components.max(1) {
                        for lens in compositions(2 * n, m, 2 * n) {
                            let mut comps = Vec::with_capacity(m);
                            let mut start = 0;
                            for len in lens {
                                comps.push(word[start..start + len].to_vec());
                                start += len;
                            }
                            let d = Diagram::new(comps)
                                .expect("every chord has one over and one under end");
                            if seen.insert(class_key(&d)) {
                                out.push(d);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_counts_are_double_factorials() {
        let counts: Vec<usize> = (0..5).map(|n| matchings(n).len()).collect();
        assert_eq!(counts, [1, 1, 3, 15, 105]);
    }

    #[test]
    fn compositions_are_sorted() {
        assert_eq!(compositions(2, 2, 2), [vec![2, 0], vec![1, 1]]);
        assert_eq!(compositions(0, 3, 0), [vec![0, 0, 0]]);
    }

    #[test]
    fn small_classes() {
        // "", O1+U1+, O1-U1- (a curl read from its other end is a rotation)
        let one = all_diagrams(1, 1);
        assert_eq!(one.len(), 3);
        // adds ";", O1±;U1± and O1±U1±;
        let two = all_diagrams(1, 2);
        assert_eq!(two.len(), 3 + 1 + 2 + 2);
    }

    #[test]
    fn rotations_and_relabels_collapse() {
        let a = vlink_core::parse("O1+U2-U1+O2-").unwrap();
        let b = vlink_core::parse("U5-U3+O5-O3+").unwrap();
        assert_eq!(class_key(&a), class_key(&b));
        let c = vlink_core::parse("O1+;U1+").unwrap();
        let e = vlink_core::parse("U1+;O1+").unwrap();
        assert_eq!(class_key(&c), class_key(&e));
    }
}
