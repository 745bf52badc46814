//! The double cover of the Carter surface cut out by a weighting.
//!
//! Every strand half-edge `h` of the base ribbon graph has two lifts `(h, 0)`
//! and `(h, 1)`, stored at index `2 * h + sheet`. Rotations are copied sheet
//! by sheet; pairing crosses sheets along edges of weight 1. For an admissible
//! weighting each face boundary has even weight, so every base face lifts to
//! two faces and the cover is unbranched.

use alloc::vec::Vec;

use crate::carter::{genus, RibbonGraph, Slot};
use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::gauss::{CrossingId, Diagram, GaussEntry, Passage};
use crate::parity::{admissible_on, project, Colouring, Weighting};

#[derive(Clone, Debug)]
pub struct CoverGraph {
    base: RibbonGraph,
    weight: Vec<bool>,
    /// `(component, sheet)` for each lifted free loop.
    free_loops: Vec<(usize, u8)>,
    edge_count: usize,
}

/// Size data of a cover; Euler characteristic counts a free loop as a sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub components: usize,
    pub euler_characteristic: i64,
}

impl CoverGraph {
    pub fn base(&self) -> &RibbonGraph {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.base.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.edge_count
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.base.half_edge_count()
    }

    pub fn lift(h: usize, sheet: u8) -> usize {
        2 * h + sheet as usize
    }

    /// `(base half-edge, sheet)` of a lifted half-edge.
    pub fn project(lh: usize) -> (usize, u8) {
        (lh / 2, (lh % 2) as u8)
    }

    pub fn pairing(&self, lh: usize) -> usize {
        let (h, s) = Self::project(lh);
        Self::lift(self.base.pairing(h), s ^ self.weight[h] as u8)
    }

    pub fn rotation_successor(&self, lh: usize) -> usize {
        let (h, s) = Self::project(lh);
        Self::lift(self.base.rotation_successor(h), s)
    }

    pub fn opposite(&self, lh: usize) -> usize {
        self.rotation_successor(self.rotation_successor(lh))
    }

    pub fn face_successor(&self, lh: usize) -> usize {
        self.rotation_successor(self.pairing(lh))
    }

    pub fn face_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.half_edge_count();
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

    pub fn free_loops(&self) -> &[(usize, u8)] {
        &self.free_loops
    }

    pub fn stats(&self) -> CoverStats {
        let v = self.vertex_count();
        let mut dsu = Dsu::new(v + self.free_loops.len());
        for lh in 0..self.half_edge_count() {
            dsu.union(Self::vertex_of(lh), Self::vertex_of(self.pairing(lh)));
        }
        let (_, components) = dsu.classes();
        let faces = self.face_orbits().len() + 2 * self.free_loops.len();
        CoverStats {
            vertices: v,
            edges: self.edge_count(),
            faces,
            components,
            // free loops count as spheres, not as circles with two caps
            euler_characteristic: v as i64 - (self.edge_count() - self.free_loops.len()) as i64
                + faces as i64,
        }
    }

    /// Lifted vertex index of a lifted half-edge: `2 * v + sheet`.
    fn vertex_of(lh: usize) -> usize {
        let (h, s) = Self::project(lh);
        2 * (h / 4) + s as usize
    }
}

/// Builds the cover; `w` must be admissible.
pub fn build_double_cover(d: &Diagram, w: &Weighting) -> Result<CoverGraph> {
    if !w.fits(d) {
        return Err(Error::DomainMismatch);
    }
    let base = RibbonGraph::new(d);
    if !admissible_on(d, &base, w) {
        return Err(Error::Inadmissible);
    }
    Ok(cover_on(d, base, w))
}

fn cover_on(d: &Diagram, base: RibbonGraph, w: &Weighting) -> CoverGraph {
    let weight = (0..base.half_edge_count())
        .map(|h| w.get(base.edge_of(h)))
        .collect();
    let mut free_loops = Vec::new();
    for &k in base.free_loops() {
        // admissible, so the loop has weight 0 and lifts to two loops
        free_loops.push((k, 0));
        free_loops.push((k, 1));
    }
    CoverGraph {
        base,
        weight,
        free_loops,
        edge_count: d.edge_count(),
    }
}

/// Follows one component upstairs from `start` (a lifted incoming end),
/// returning the lifted incoming ends in order.
fn trace(cover: &CoverGraph, start: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut lh = start;
    loop {
        out.push(lh);
        lh = cover.pairing(cover.opposite(lh));
        if lh == start {
            return out;
        }
    }
}

/// Gauss code of the cover components starting on the given sheets.
///
/// Component `k` is traced from the lift of its entry 0 on sheet
/// `sheets[k]`. A lifted crossing survives iff both of its passages lie on
/// traced components. Labels come out canonical.
pub fn lift_with_sheets(d: &Diagram, w: &Weighting, sheets: &[bool]) -> Result<Diagram> {
    if sheets.len() != d.component_count() {
        return Err(Error::DomainMismatch);
    }
    let cover = build_double_cover(d, w)?;
    let g = cover.base();
    let traces: Vec<Vec<usize>> = d
        .components()
        .iter()
        .zip(sheets)
        .map(|(word, &s)| match word.first() {
            None => Vec::new(),
            Some(e) => {
                let h = g
                    .half_edge_index(e.crossing, Slot::incoming(e.passage))
                    .expect("crossing in graph");
                trace(&cover, CoverGraph::lift(h, s as u8))
            }
        })
        .collect();

    let mut visited = alloc::vec![false; cover.half_edge_count()];
    for t in &traces {
        for &lh in t {
            debug_assert!(!visited[lh], "chosen components overlap");
            visited[lh] = true;
        }
    }
    let survives = |lv: usize| {
        let (v, s) = (lv / 2, (lv % 2) as u8);
        visited[CoverGraph::lift(4 * v + Slot::OverIn.index(), s)]
            && visited[CoverGraph::lift(4 * v + Slot::UnderIn.index(), s)]
    };
    let components = traces
        .iter()
        .map(|t| {
            t.iter()
                .filter(|&&lh| survives(CoverGraph::vertex_of(lh)))
                .map(|&lh| {
                    let (h, _) = CoverGraph::project(lh);
                    let lv = CoverGraph::vertex_of(lh);
                    let passage = if h % 4 == Slot::OverIn.index() {
                        Passage::Over
                    } else {
                        Passage::Under
                    };
                    GaussEntry {
                        crossing: CrossingId(lv as u32 + 1),
                        passage,
                        sign: g.sign(h / 4),
                    }
                })
                .collect()
        })
        .collect();
    Ok(Diagram::from_valid(components).canonical())
}

/// The lift through the base colours of `col`.
pub fn preferred_lift(d: &Diagram, col: &Colouring) -> Result<Diagram> {
    lift_with_sheets(d, col.weighting(), col.base())
}

/// Outcome of comparing the preferred lift against parity projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub lift: Diagram,
    pub projection: Diagram,
    pub lift_genus: usize,
    pub projection_genus: usize,
}

impl LiftReport {
    pub fn agrees(&self) -> bool {
        self.lift == self.projection && self.lift_genus == self.projection_genus
    }
}

/// Lifts and projects; fails only when the colouring is inadmissible.
pub fn verify_lift_oracle(d: &Diagram, col: &Colouring) -> Result<LiftReport> {
    let lift = preferred_lift(d, col)?;
    let projection = project(d, col).canonical();
    Ok(LiftReport {
        lift_genus: genus(&lift).total,
        projection_genus: genus(&projection).total,
        lift,
        projection,
    })
}
