//! Curve weightings, two-colourings and the crossing parity they induce.
//!
//! A closed curve on the Carter surface is recorded only by how often it
//! meets each semi-arc, mod 2. Such a [`Weighting`] is *admissible* when
//! every face boundary has even weight (the curve enters and leaves each
//! capped disc) and every link component has even weight (so colours close
//! up). A [`Colouring`] fixes a base colour at position 0 of each component
//! and flips colour across every weighted edge; the colour is constant
//! through a crossing. A crossing is odd exactly when its over- and
//! under-strand carry different colours. Projection deletes the odd chords.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::carter::{Face, RibbonGraph};
use crate::error::{Error, Result};
use crate::gauss::{CrossingId, Diagram, EdgeId, Position};
use crate::gf2::{self, BitVec, Span};

/// Intersection parity of the curve with each semi-arc.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weighting {
    bits: Vec<Vec<bool>>,
}

impl Weighting {
    pub fn zero(d: &Diagram) -> Self {
        Weighting {
            bits: (0..d.component_count())
                .map(|k| alloc::vec![false; d.edge_count_of(k)])
                .collect(),
        }
    }

    /// Weight 1 on exactly the listed edges.
    pub fn from_support<I>(d: &Diagram, support: I) -> Result<Self>
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut w = Self::zero(d);
        for e in support {
            if !d.has_edge(e) {
                return Err(Error::DomainMismatch);
            }
            w.bits[e.component][e.position] = true;
        }
        Ok(w)
    }

    pub(crate) fn from_bits(bits: Vec<Vec<bool>>) -> Self {
        Weighting { bits }
    }

    pub(crate) fn component_bits(&self, k: usize) -> &[bool] {
        &self.bits[k]
    }

    pub fn get(&self, e: EdgeId) -> bool {
        self.bits[e.component][e.position]
    }

    pub fn set(&mut self, e: EdgeId, value: bool) {
        self.bits[e.component][e.position] = value;
    }

    pub fn flip(&mut self, e: EdgeId) {
        self.bits[e.component][e.position] ^= true;
    }

    /// Does this weighting have exactly one value per edge of `d`?
    pub fn fits(&self, d: &Diagram) -> bool {
        self.bits.len() == d.component_count()
            && self
                .bits
                .iter()
                .enumerate()
                .all(|(k, b)| b.len() == d.edge_count_of(k))
    }

    pub fn support(&self) -> Vec<EdgeId> {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(k, b)| {
                b.iter()
                    .enumerate()
                    .filter(|(_, &w)| w)
                    .map(move |(i, _)| EdgeId::new(k, i))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().flatten().all(|&b| !b)
    }

    /// Total weight of component `k`, mod 2.
    pub fn component_weight(&self, k: usize) -> bool {
        self.bits[k].iter().fold(false, |acc, &b| acc ^ b)
    }

    pub fn to_bitvec(&self) -> BitVec {
        let flat: Vec<bool> = self.bits.iter().flatten().copied().collect();
        BitVec::from_bools(&flat)
    }

    fn from_bitvec(d: &Diagram, v: &BitVec) -> Self {
        let mut w = Self::zero(d);
        let mut i = 0;
        for row in &mut w.bits {
            for b in row.iter_mut() {
                *b = v.get(i);
                i += 1;
            }
        }
        w
    }
}

/// Faces and components whose weight is odd.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub odd_faces: Vec<Face>,
    pub odd_components: Vec<usize>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.odd_faces.is_empty() && self.odd_components.is_empty()
    }
}

pub fn is_admissible(d: &Diagram, w: &Weighting) -> Result<AdmissibilityReport> {
    if !w.fits(d) {
        return Err(Error::DomainMismatch);
    }
    let g = RibbonGraph::new(d);
    let odd_faces = g
        .faces()
        .into_iter()
        .filter(|f| f.edges.iter().fold(false, |acc, &e| acc ^ w.get(e)))
        .collect();
    let odd_components = (0..d.component_count())
        .filter(|&k| w.component_weight(k))
        .collect();
    Ok(AdmissibilityReport {
        odd_faces,
        odd_components,
    })
}

/// Admissibility without building a report; `w` must fit `d`.
pub(crate) fn admissible_on(d: &Diagram, g: &RibbonGraph, w: &Weighting) -> bool {
    if (0..d.component_count()).any(|k| w.component_weight(k)) {
        return false;
    }
    // free loops are single-edge faces
    if g.free_loops().iter().any(|&k| w.bits[k][0]) {
        return false;
    }
    let n = g.half_edge_count();
    let mut seen = alloc::vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut sum = false;
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            sum ^= w.get(g.edge_of(h));
            h = g.face_successor(h);
        }
        if sum {
            return false;
        }
    }
    true
}

/// All admissible weightings of a diagram, as a GF(2) subspace.
#[derive(Clone, Debug)]
pub struct WeightingSpace {
    template: Diagram,
    edge_count: usize,
    basis: Vec<BitVec>,
}

impl WeightingSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<Weighting> {
        self.basis
            .iter()
            .map(|b| Weighting::from_bitvec(&self.template, b))
            .collect()
    }

    /// Every element, lazily, in binary-counter order over the basis.
    pub fn iter(&self) -> impl Iterator<Item = Weighting> + '_ {
        Span::new(&self.basis, self.edge_count).map(|v| Weighting::from_bitvec(&self.template, &v))
    }

    /// The element with the given coordinates (bit `i` of `coords` selects
    /// basis vector `i`).
    pub fn combination(&self, coords: &[bool]) -> Weighting {
        let mut v = BitVec::zeros(self.edge_count);
        for (b, &on) in self.basis.iter().zip(coords) {
            if on {
                v.xor_assign(b);
            }
        }
        Weighting::from_bitvec(&self.template, &v)
    }

    pub fn contains(&self, w: &Weighting) -> bool {
        gf2::in_span(&self.basis, &w.to_bitvec())
    }
}

/// Edge index in component-major order.
fn edge_offsets(d: &Diagram) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(d.component_count());
    let mut acc = 0;
    for k in 0..d.component_count() {
        offsets.push(acc);
        acc += d.edge_count_of(k);
    }
    offsets
}

/// Solves the face and component conditions over GF(2).
pub fn admissible_weightings(d: &Diagram) -> WeightingSpace {
    let offsets = edge_offsets(d);
    let n = d.edge_count();
    let idx = |e: EdgeId| offsets[e.component] + e.position;
    let g = RibbonGraph::new(d);
    let mut rows = Vec::new();
    for face in g.faces() {
        let mut row = BitVec::zeros(n);
        for &e in &face.edges {
            row.flip(idx(e));
        }
        if !row.is_zero() {
            rows.push(row);
        }
    }
    for (k, &start) in offsets.iter().enumerate() {
        let mut row = BitVec::zeros(n);
        for i in 0..d.edge_count_of(k) {
            row.set(start + i, true);
        }
        rows.push(row);
    }
    WeightingSpace {
        template: d.clone(),
        edge_count: n,
        basis: gf2::nullspace(&rows, n),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Parity of every crossing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParityMap(BTreeMap<CrossingId, Parity>);

impl ParityMap {
    pub fn get(&self, c: CrossingId) -> Option<Parity> {
        self.0.get(&c).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CrossingId, Parity)> + '_ {
        self.0.iter().map(|(&c, &p)| (c, p))
    }

    pub fn odd(&self) -> impl Iterator<Item = CrossingId> + '_ {
        self.iter().filter(|(_, p)| p.is_odd()).map(|(c, _)| c)
    }

    pub fn all_even(&self) -> bool {
        self.odd().next().is_none()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A curve weighting together with a base colour per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Colouring {
    base: Vec<bool>,
    weighting: Weighting,
    colours: Vec<Vec<bool>>,
    parity: ParityMap,
}

impl Colouring {
    /// Walks each component from position 0, starting at its base colour and
    /// flipping after every weighted edge.
    pub fn new(d: &Diagram, w: Weighting, base: Vec<bool>) -> Result<Self> {
        if !w.fits(d) || base.len() != d.component_count() {
            return Err(Error::DomainMismatch);
        }
        if let Some(k) = (0..d.component_count()).find(|&k| w.component_weight(k)) {
            return Err(Error::OddComponent(k));
        }
        let colours: Vec<Vec<bool>> = d
            .components()
            .iter()
            .enumerate()
            .map(|(k, word)| {
                let mut c = base[k];
                let mut out = Vec::with_capacity(word.len());
                for i in 0..word.len() {
                    out.push(c);
                    c ^= w.bits[k][i];
                }
                out
            })
            .collect();
        let parity = ParityMap(
            d.crossings()
                .map(|x| {
                    let over = colours[x.over.component][x.over.index];
                    let under = colours[x.under.component][x.under.index];
                    (x.id, Parity::from_odd(over ^ under))
                })
                .collect(),
        );
        Ok(Colouring {
            base,
            weighting: w,
            colours,
            parity,
        })
    }

    /// Zero weighting with every base colour 0.
    pub fn trivial(d: &Diagram) -> Self {
        Self::new(
            d,
            Weighting::zero(d),
            alloc::vec![false; d.component_count()],
        )
        .expect("zero weighting is always colourable")
    }

    pub fn base(&self) -> &[bool] {
        &self.base
    }

    pub fn weighting(&self) -> &Weighting {
        &self.weighting
    }

    /// Colour of the strand at an entry.
    pub fn colour(&self, pos: Position) -> bool {
        self.colours[pos.component][pos.index]
    }

    pub fn component_colours(&self, k: usize) -> &[bool] {
        &self.colours[k]
    }

    pub fn parity(&self, c: CrossingId) -> Result<Parity> {
        self.parity.get(c).ok_or(Error::UnknownCrossing(c))
    }

    pub fn parities(&self) -> &ParityMap {
        &self.parity
    }

    /// The colouring with every base colour flipped.
    pub fn swapped(&self, d: &Diagram) -> Colouring {
        let base = self.base.iter().map(|b| !b).collect();
        Colouring::new(d, self.weighting.clone(), base).expect("same weighting stays colourable")
    }
}

/// `f_C(c)`: 0 when both strands at `c` share a colour, 1 otherwise.
pub fn crossing_parity(col: &Colouring, c: CrossingId) -> Result<Parity> {
    col.parity(c)
}

/// All colourings for `w`: none if a component has odd weight, otherwise
/// one per base-colour vector in lexicographic order.
pub fn enumerate_colourings(d: &Diagram, w: &Weighting) -> Result<Vec<Colouring>> {
    if !w.fits(d) {
        return Err(Error::DomainMismatch);
    }
    let m = d.component_count();
    if (0..m).any(|k| w.component_weight(k)) {
        return Ok(Vec::new());
    }
    let count = 1usize
        .checked_shl(m as u32)
        .expect("too many components to enumerate");
    Ok((0..count)
        .map(|bits| {
            let base = (0..m).map(|k| bits >> (m - 1 - k) & 1 == 1).collect();
            Colouring::new(d, w.clone(), base).expect("even components")
        })
        .collect())
}

/// Deletes chords and carries the colouring along: merged edges take the XOR
/// of their parts and every surviving entry keeps its colour.
pub fn subdiagram_with_colouring(
    d: &Diagram,
    col: &Colouring,
    virtualize: &BTreeSet<CrossingId>,
) -> (Diagram, Colouring) {
    let sub = d.without(virtualize);
    let mut bits = Vec::with_capacity(d.component_count());
    let mut base = Vec::with_capacity(d.component_count());
    for (k, word) in d.components().iter().enumerate() {
        let kept: Vec<usize> = (0..word.len())
            .filter(|&i| !virtualize.contains(&word[i].crossing))
            .collect();
        let w = col.weighting.component_bits(k);
        if kept.is_empty() {
            bits.push(alloc::vec![w.iter().fold(false, |a, &b| a ^ b)]);
            base.push(col.base[k]);
            continue;
        }
        let n = word.len();
        let merged = (0..kept.len())
            .map(|j| {
                let from = kept[j];
                let to = if j + 1 < kept.len() {
                    kept[j + 1]
                } else {
                    kept[0] + n
                };
                (from..to).fold(false, |a, i| a ^ w[i % n])
            })
            .collect();
        bits.push(merged);
        base.push(col.colours[k][kept[0]]);
    }
    let col = Colouring::new(&sub, Weighting::from_bits(bits), base)
        .expect("merging keeps component weights");
    (sub, col)
}

/// Parity projection: the subdiagram without odd crossings.
pub fn project(d: &Diagram, col: &Colouring) -> Diagram {
    let odd: BTreeSet<CrossingId> = col.parity.odd().collect();
    d.without(&odd)
}

/// Projection together with the induced colouring.
pub fn project_with_colouring(d: &Diagram, col: &Colouring) -> (Diagram, Colouring) {
    let odd: BTreeSet<CrossingId> = col.parity.odd().collect();
    subdiagram_with_colouring(d, col, &odd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::parse;
    use alloc::vec;

    fn d(s: &str) -> Diagram {
        parse(s).unwrap()
    }

    /// Every weighting of `d`, by brute force over all edge subsets.
    fn brute_admissible(d: &Diagram) -> Vec<Weighting> {
        let edges: Vec<EdgeId> = d.edges().collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << edges.len()) {
            let w = Weighting::from_support(
                d,
                (0..edges.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| edges[i]),
            )
            .unwrap();
            if is_admissible(d, &w).unwrap().is_admissible() {
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn zero_weighting_is_admissible() {
        for s in ["", ";", "O1+U2+O3+U1+O2+U3+", "O1+U2+U1+O2+", "O1+;U1+"] {
            let x = d(s);
            assert!(is_admissible(&x, &Weighting::zero(&x))
                .unwrap()
                .is_admissible());
        }
    }

    #[test]
    fn single_edge_weight_is_inadmissible_on_trefoil() {
        let t = d("O1+U2+O3+U1+O2+U3+");
        for e in t.edges() {
            let r = is_admissible(&t, &Weighting::from_support(&t, [e]).unwrap()).unwrap();
            assert!(!r.odd_faces.is_empty());
            assert_eq!(r.odd_components, [0]);
        }
    }

    #[test]
    fn domain_mismatch() {
        let t = d("O1+U1+");
        assert_eq!(
            is_admissible(&t, &Weighting::zero(&d(""))),
            Err(Error::DomainMismatch)
        );
        assert_eq!(
            Weighting::from_support(&t, [EdgeId::new(0, 2)]),
            Err(Error::DomainMismatch)
        );
    }

    #[test]
    fn unknot_only_has_zero_weighting() {
        let u = d("");
        let space = admissible_weightings(&u);
        assert_eq!(space.dimension(), 0);
        assert_eq!(space.iter().collect::<Vec<_>>(), [Weighting::zero(&u)]);
    }

    #[test]
    fn solver_matches_brute_force() {
        // frozen from brute_admissible: trefoil 2^2, virtual trefoil 2^2
        for (s, dim) in [
            ("O1+U2+O3+U1+O2+U3+", 2),
            ("O1+U2+U1+O2+", 2),
            ("O1+;U1+", 0),
            ("O1+U2+;U1+O2+", 1),
        ] {
            let x = d(s);
            let brute = brute_admissible(&x);
            let space = admissible_weightings(&x);
            assert_eq!(1 << space.dimension(), brute.len(), "{s}");
            assert_eq!(space.dimension(), dim, "{s}");
            let mut listed: Vec<Weighting> = space.iter().collect();
            listed.sort_by_key(|w| w.support());
            let mut brute = brute;
            brute.sort_by_key(|w| w.support());
            assert_eq!(listed, brute, "{s}");
        }
    }

    #[test]
    fn virtual_trefoil_has_nonzero_admissible_weighting() {
        let vt = d("O1+U2+U1+O2+");
        assert!(admissible_weightings(&vt).iter().any(|w| !w.is_zero()));
    }

    #[test]
    fn colouring_counts() {
        let vt = d("O1+U2+U1+O2+");
        for w in admissible_weightings(&vt).iter() {
            assert_eq!(enumerate_colourings(&vt, &w).unwrap().len(), 2);
        }
        let h = d("O1+U2+;U1+O2+");
        assert_eq!(
            enumerate_colourings(&h, &Weighting::zero(&h))
                .unwrap()
                .len(),
            4
        );
        let odd = Weighting::from_support(&vt, [EdgeId::new(0, 0)]).unwrap();
        assert!(enumerate_colourings(&vt, &odd).unwrap().is_empty());
        assert_eq!(
            Colouring::new(&vt, odd, vec![false]),
            Err(Error::OddComponent(0))
        );
    }

    #[test]
    fn constant_colours_make_everything_even() {
        let t = d("O1+U2+O3+U1+O2+U3+");
        assert!(Colouring::trivial(&t).parities().all_even());
    }

    #[test]
    fn distinct_component_colours() {
        let x = d("O1+U2+O3+U3+;U1+O2+");
        let col = Colouring::new(&x, Weighting::zero(&x), vec![false, true]).unwrap();
        assert_eq!(col.parity(CrossingId(1)).unwrap(), Parity::Odd);
        assert_eq!(col.parity(CrossingId(2)).unwrap(), Parity::Odd);
        assert_eq!(col.parity(CrossingId(3)).unwrap(), Parity::Even);
        assert_eq!(
            crossing_parity(&col, CrossingId(9)),
            Err(Error::UnknownCrossing(CrossingId(9)))
        );
    }

    /// Colour of every entry recomputed walking backwards from the last
    /// entry, whose colour is fixed by closing the cycle.
    fn rewalk(d: &Diagram, col: &Colouring) -> ParityMap {
        let mut colours: Vec<Vec<bool>> = Vec::new();
        for (k, word) in d.components().iter().enumerate() {
            let n = word.len();
            let mut c = vec![false; n];
            if n > 0 {
                c[n - 1] = col.base()[k] ^ col.weighting().get(EdgeId::new(k, n - 1));
                for i in (0..n - 1).rev() {
                    c[i] = c[i + 1] ^ col.weighting().get(EdgeId::new(k, i));
                }
            }
            colours.push(c);
        }
        ParityMap(
            d.crossings()
                .map(|x| {
                    let o = colours[x.over.component][x.over.index];
                    let u = colours[x.under.component][x.under.index];
                    (x.id, Parity::from_odd(o ^ u))
                })
                .collect(),
        )
    }

    #[test]
    fn virtual_trefoil_parity_matches_rewalk() {
        let vt = d("O1+U2+U1+O2+");
        let mut saw_odd = false;
        for w in admissible_weightings(&vt).iter() {
            for col in enumerate_colourings(&vt, &w).unwrap() {
                assert_eq!(col.parities(), &rewalk(&vt, &col));
                assert_eq!(col.swapped(&vt).parities(), col.parities());
                saw_odd |= !col.parities().all_even();
            }
        }
        assert!(saw_odd);
    }

    #[test]
    fn projection_examples() {
        let h = d("O1+U2+;U1+O2+");
        let col = Colouring::new(&h, Weighting::zero(&h), vec![false, true]).unwrap();
        assert_eq!(project(&h, &col).serialize(), ";");
        let t = d("O1+U2+O3+U1+O2+U3+");
        assert_eq!(project(&t, &Colouring::trivial(&t)), t);
    }

    #[test]
    fn projection_is_idempotent_on_virtual_trefoil() {
        let vt = d("O1+U2+U1+O2+");
        for w in admissible_weightings(&vt).iter() {
            for col in enumerate_colourings(&vt, &w).unwrap() {
                let (p, pcol) = project_with_colouring(&vt, &col);
                assert!(pcol.parities().all_even());
                assert_eq!(project(&p, &pcol), p);
                assert_eq!(p, project(&vt, &col));
            }
        }
    }

    #[test]
    fn merged_weights_xor() {
        let vt = d("O1+U2+U1+O2+");
        let w = Weighting::from_support(&vt, [EdgeId::new(0, 0), EdgeId::new(0, 1)]).unwrap();
        let col = Colouring::new(&vt, w, vec![true]).unwrap();
        let (sub, scol) =
            subdiagram_with_colouring(&vt, &col, &[CrossingId(2)].into_iter().collect());
        assert_eq!(sub.serialize(), "O1+U1+");
        // edges 0 and 1 merge into the new edge 0
        assert_eq!(scol.weighting().support(), []);
        assert_eq!(scol.base(), [true]);
        assert_eq!(
            scol.colour(Position {
                component: 0,
                index: 1
            }),
            col.colour(Position {
                component: 0,
                index: 2
            })
        );
    }
}
