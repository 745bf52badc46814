//! Carter surfaces as ribbon graphs.
//!
//! Each classical crossing is a 4-valent vertex whose half-edges are the
//! strand ends `OverIn`, `OverOut`, `UnderIn`, `UnderOut`. Semi-arcs pair an
//! outgoing end with the next incoming end along the component. The cyclic
//! order of ends at a vertex (counterclockwise, starting at the outgoing
//! over end) is
//!
//! * positive crossing: `OverOut, UnderOut, OverIn, UnderIn`
//! * negative crossing: `OverOut, UnderIn, OverIn, UnderOut`
//!
//! Boundary circles of the thickened graph are the orbits of
//! `h -> rotation_successor(pairing(h))`; capping each with a disc gives the
//! Carter surface. Crossing-free components are free loops, each capping to a
//! sphere with two faces.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::dsu::Dsu;
use crate::gauss::{CrossingId, Diagram, EdgeId, Passage, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    OverIn,
    OverOut,
    UnderIn,
    UnderOut,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::OverIn, Slot::OverOut, Slot::UnderIn, Slot::UnderOut];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn incoming(passage: Passage) -> Slot {
        match passage {
            Passage::Over => Slot::OverIn,
            Passage::Under => Slot::UnderIn,
        }
    }

    pub fn outgoing(passage: Passage) -> Slot {
        match passage {
            Passage::Over => Slot::OverOut,
            Passage::Under => Slot::UnderOut,
        }
    }

    pub fn passage(self) -> Passage {
        match self {
            Slot::OverIn | Slot::OverOut => Passage::Over,
            Slot::UnderIn | Slot::UnderOut => Passage::Under,
        }
    }

    pub fn is_incoming(self) -> bool {
        matches!(self, Slot::OverIn | Slot::UnderIn)
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            Slot::OverIn => "OI",
            Slot::OverOut => "OO",
            Slot::UnderIn => "UI",
            Slot::UnderOut => "UO",
        }
    }
}

/// Counterclockwise order of strand ends at a crossing of the given sign.
pub fn rotation(sign: Sign) -> [Slot; 4] {
    match sign {
        Sign::Plus => [Slot::OverOut, Slot::UnderOut, Slot::OverIn, Slot::UnderIn],
        Sign::Minus => [Slot::OverOut, Slot::UnderIn, Slot::OverIn, Slot::UnderOut],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HalfEdge {
    Strand {
        crossing: CrossingId,
        slot: Slot,
    },
    /// One side of the free loop of an empty component.
    FreeLoop {
        component: usize,
        side: u8,
    },
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HalfEdge::Strand { crossing, slot } => write!(f, "{crossing}{}", slot.abbrev()),
            HalfEdge::FreeLoop { component, side } => write!(f, "L{component}.{side}"),
        }
    }
}

/// A boundary circle, listed by the half-edges it leaves through and the
/// edges it runs along (with multiplicity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub half_edges: Vec<HalfEdge>,
    pub edges: Vec<EdgeId>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.half_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_edges.is_empty()
    }
}

/// Rotation system of a diagram's 4-valent graph.
///
/// Half-edge `4 * v + slot.index()` belongs to vertex `v`; vertices are the
/// crossings in increasing label order.
#[derive(Clone, Debug)]
pub struct RibbonGraph {
    ids: Vec<CrossingId>,
    index: BTreeMap<CrossingId, usize>,
    signs: Vec<Sign>,
    next: Vec<usize>,
    pair: Vec<usize>,
    edge: Vec<EdgeId>,
    free_loops: Vec<usize>,
    edge_count: usize,
}

impl RibbonGraph {
    pub fn new(d: &Diagram) -> Self {
        let ids: Vec<CrossingId> = d.crossing_ids().collect();
        let index: BTreeMap<CrossingId, usize> =
            ids.iter().enumerate().map(|(v, &c)| (c, v)).collect();
        let signs: Vec<Sign> = d.crossings().map(|c| c.sign).collect();
        let n = 4 * ids.len();

        let mut next = alloc::vec![0; n];
        for (v, &sign) in signs.iter().enumerate() {
            let rot = rotation(sign);
            for j in 0..4 {
                next[4 * v + rot[j].index()] = 4 * v + rot[(j + 1) % 4].index();
            }
        }

        let mut pair = alloc::vec![usize::MAX; n];
        let mut edge = alloc::vec![EdgeId::new(0, 0); n];
        let mut free_loops = Vec::new();
        for (k, word) in d.components().iter().enumerate() {
            if word.is_empty() {
                free_loops.push(k);
                continue;
            }
            let len = word.len();
            for i in 0..len {
                let a = &word[i];
                let b = &word[(i + 1) % len];
                let out = 4 * index[&a.crossing] + Slot::outgoing(a.passage).index();
                let inc = 4 * index[&b.crossing] + Slot::incoming(b.passage).index();
                pair[out] = inc;
                pair[inc] = out;
                edge[out] = EdgeId::new(k, i);
                edge[inc] = EdgeId::new(k, i);
            }
        }
        debug_assert!(pair.iter().all(|&p| p != usize::MAX));

        RibbonGraph {
            ids,
            index,
            signs,
            next,
            pair,
            edge,
            free_loops,
            edge_count: d.edge_count(),
        }
    }

    /// The same graph with every rotation reversed (the mirror surface).
    pub fn mirrored(&self) -> Self {
        let mut next = self.next.clone();
        for (h, &s) in self.next.iter().enumerate() {
            next[s] = h;
        }
        RibbonGraph {
            next,
            ..self.clone()
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    /// Edges including free loops.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn half_edge_count(&self) -> usize {
        self.pair.len()
    }

    pub fn free_loops(&self) -> &[usize] {
        &self.free_loops
    }

    pub fn vertex_of(&self, c: CrossingId) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn crossing(&self, v: usize) -> CrossingId {
        self.ids[v]
    }

    pub fn sign(&self, v: usize) -> Sign {
        self.signs[v]
    }

    pub fn half_edge_index(&self, c: CrossingId, slot: Slot) -> Option<usize> {
        self.vertex_of(c).map(|v| 4 * v + slot.index())
    }

    pub fn half_edge(&self, h: usize) -> HalfEdge {
        HalfEdge::Strand {
            crossing: self.ids[h / 4],
            slot: Slot::ALL[h % 4],
        }
    }

    pub fn pairing(&self, h: usize) -> usize {
        self.pair[h]
    }

    pub fn rotation_successor(&self, h: usize) -> usize {
        self.next[h]
    }

    /// The end straight across the crossing.
    pub fn opposite(&self, h: usize) -> usize {
        self.next[self.next[h]]
    }

    pub fn edge_of(&self, h: usize) -> EdgeId {
        self.edge[h]
    }

    pub fn face_successor(&self, h: usize) -> usize {
        self.next[self.pair[h]]
    }

    /// Orbits of the face-successor map over strand half-edges, as index lists.
    pub fn face_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.pair.len();
        let mut seen = alloc::vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                orbit.push(h);
                h = self.face_successor(h);
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn faces(&self) -> Vec<Face> {
        let mut faces: Vec<Face> = self
            .face_orbits()
            .into_iter()
            .map(|orbit| Face {
                edges: orbit.iter().map(|&h| self.edge[h]).collect(),
                half_edges: orbit.into_iter().map(|h| self.half_edge(h)).collect(),
            })
            .collect();
        for &k in &self.free_loops {
            for side in 0..2 {
                faces.push(Face {
                    half_edges: alloc::vec![HalfEdge::FreeLoop { component: k, side }],
                    edges: alloc::vec![EdgeId::new(k, 0)],
                });
            }
        }
        faces
    }
}

pub fn build_ribbon_graph(d: &Diagram) -> RibbonGraph {
    RibbonGraph::new(d)
}

pub fn trace_faces(g: &RibbonGraph) -> Vec<Face> {
    g.faces()
}

/// Groups link components that share crossings. Classes are sorted and
/// ordered by their smallest member.
pub fn connected_components(d: &Diagram) -> Vec<Vec<usize>> {
    let (class, count) = component_classes(d);
    let mut out = alloc::vec![Vec::new(); count];
    for (k, &c) in class.iter().enumerate() {
        out[c].push(k);
    }
    out
}

/// Class index per link component and the number of classes.
pub(crate) fn component_classes(d: &Diagram) -> (Vec<usize>, usize) {
    let mut dsu = Dsu::new(d.component_count());
    for c in d.crossings() {
        dsu.union(c.over.component, c.under.component);
    }
    dsu.classes()
}

/// One connected piece of the Carter surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComponent {
    pub link_components: Vec<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
}

impl SurfaceComponent {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusReport {
    pub components: Vec<SurfaceComponent>,
    pub total: usize,
}

impl GenusReport {
    /// Per-piece genera, sorted; equal lists mean homeomorphic surfaces.
    pub fn signature(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.components.iter().map(|c| c.genus).collect();
        g.sort_unstable();
        g
    }
}

pub fn genus(d: &Diagram) -> GenusReport {
    genus_of(d, &RibbonGraph::new(d))
}

pub(crate) fn genus_of(d: &Diagram, g: &RibbonGraph) -> GenusReport {
    let (class, count) = component_classes(d);
    let mut pieces: Vec<SurfaceComponent> = (0..count)
        .map(|_| SurfaceComponent {
            link_components: Vec::new(),
            vertices: 0,
            edges: 0,
            faces: 0,
            genus: 0,
        })
        .collect();
    for (k, &c) in class.iter().enumerate() {
        pieces[c].link_components.push(k);
        // a free loop counts as (V, E, F) = (0, 0, 2)
        pieces[c].edges += d.component(k).len();
    }
    for c in d.crossings() {
        pieces[class[c.over.component]].vertices += 1;
    }
    for orbit in g.face_orbits() {
        pieces[class[g.edge_of(orbit[0]).component]].faces += 1;
    }
    for &k in g.free_loops() {
        pieces[class[k]].faces += 2;
    }
    let mut total = 0;
    for p in &mut pieces {
        let two_g = 2 - p.euler_characteristic();
        debug_assert!(two_g >= 0 && two_g % 2 == 0, "odd Euler characteristic");
        p.genus = (two_g / 2) as usize;
        total += p.genus;
    }
    GenusReport {
        components: pieces,
        total,
    }
}

/// Total Carter genus.
pub fn total_genus(d: &Diagram) -> usize {
    genus(d).total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::parse;

    fn g(s: &str) -> usize {
        total_genus(&parse(s).unwrap())
    }

    #[test]
    fn counts_for_trefoils() {
        let t = RibbonGraph::new(&parse("O1+U2+O3+U1+O2+U3+").unwrap());
        assert_eq!((t.vertex_count(), t.edge_count()), (3, 6));
        assert_eq!(t.faces().len(), 5);
        let vt = RibbonGraph::new(&parse("O1+U2+U1+O2+").unwrap());
        assert_eq!((vt.vertex_count(), vt.edge_count()), (2, 4));
        assert_eq!(vt.faces().len(), 2);
    }

    #[test]
    fn free_loop() {
        let u = RibbonGraph::new(&parse("").unwrap());
        assert_eq!(u.vertex_count(), 0);
        assert_eq!(u.free_loops(), &[0]);
        assert_eq!(u.faces().len(), 2);
        assert_eq!(g(""), 0);
        assert_eq!(genus(&parse(";;").unwrap()).components.len(), 3);
    }

    #[test]
    fn genus_anchors() {
        assert_eq!(g("O1+U2+O3+U1+O2+U3+"), 0);
        assert_eq!(g("O1+U2+U1+O2+"), 1);
        assert_eq!(g("O1+;U1+"), 1);
        assert_eq!(g("O1+U2+;U1+O2+"), 0);
        // the other classical Hopf and both curls
        assert_eq!(g("O1-U2-;U1-O2-"), 0);
        for curl in ["O1+U1+", "O1-U1-", "U1+O1+", "U1-O1-"] {
            assert_eq!(g(curl), 0, "{curl}");
        }
    }

    #[test]
    fn figure_eight_and_mixed_sign_is_planar() {
        // only this sign pattern and its mirror are planar for this word
        assert_eq!(g("O1-U2-O3+U4+O2-U1-O4+U3+"), 0);
        assert_eq!(g("O1+U2+O3-U4-O2+U1+O4-U3-"), 0);
        assert_eq!(g("O1+U2+O3+U4+O2+U1+O4+U3+"), 1);
    }

    #[test]
    fn split_pieces_add() {
        let r = genus(&parse("O1+U2+U1+O2+;O3+;U3+;").unwrap());
        assert_eq!(r.components.len(), 3);
        assert_eq!(r.total, 2);
        assert_eq!(r.signature(), [0, 1, 1]);
    }

    #[test]
    fn connected_components_examples() {
        assert_eq!(connected_components(&parse(";").unwrap()), [[0], [1]]);
        assert_eq!(connected_components(&parse("O1+;U1+").unwrap()), [[0, 1]]);
        assert_eq!(
            connected_components(&parse("O1+U2+O3+U1+O2+U3+").unwrap()),
            [[0]]
        );
    }

    #[test]
    fn face_listing_is_deterministic() {
        let faces = trace_faces(&build_ribbon_graph(&parse("O1+U1+").unwrap()));
        let lens: Vec<usize> = faces.iter().map(Face::len).collect();
        assert_eq!(lens, [1, 1, 2]);
        assert_eq!(
            faces[0].half_edges[0],
            HalfEdge::Strand {
                crossing: CrossingId(1),
                slot: Slot::OverIn
            }
        );
    }
}
