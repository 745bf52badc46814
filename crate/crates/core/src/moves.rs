//! Reidemeister moves on Gauss codes, with colourings carried across.
//!
//! Moves happen in a small disc. New semi-arcs inside the disc get weight 0;
//! the outer pieces of a subdivided semi-arc share its old weight; semi-arcs
//! joined by a removal take the XOR of their weights. When the weighting runs
//! through an R3 triangle, it is first pushed off across the corner where its
//! two weighted sides meet, which flips both colours at that crossing and
//! nothing else.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::fmt;

use crate::carter::{genus_of, GenusReport, RibbonGraph};
use crate::error::{Error, Result};
use crate::gauss::{CrossingId, Diagram, EdgeId, GaussEntry, Passage, Position, Sign};
use crate::parity::{admissible_on, subdiagram_with_colouring, Colouring, Parity, Weighting};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] = [
        MoveKind::R1Add,
        MoveKind::R1Remove,
        MoveKind::R2Add,
        MoveKind::R2Remove,
        MoveKind::R3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Add => "r1-add",
            MoveKind::R1Remove => "r1-remove",
            MoveKind::R2Add => "r2-add",
            MoveKind::R2Remove => "r2-remove",
            MoveKind::R3 => "r3",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveEvent {
    /// A curl on `edge`; the new crossing is met first with passage `first`.
    R1Add {
        edge: EdgeId,
        first: Passage,
        sign: Sign,
    },
    R1Remove {
        crossing: CrossingId,
    },
    /// Pushes the strand on `over_edge` across the strand on `under_edge`.
    ///
    /// The crossing met first along the over strand gets `first_sign`, the
    /// other the opposite sign. With `parallel` the under strand meets them
    /// in the same order. `over_leads` only matters when both edges are the
    /// same, and says which pair of passages comes first along it.
    R2Add {
        over_edge: EdgeId,
        under_edge: EdgeId,
        first_sign: Sign,
        parallel: bool,
        over_leads: bool,
    },
    R2Remove {
        first: CrossingId,
        second: CrossingId,
    },
    /// Slides the middle strand across the crossing of top and bottom. The
    /// edges are the three sides of a triangular face.
    R3 {
        top: EdgeId,
        middle: EdgeId,
        bottom: EdgeId,
    },
}

impl MoveEvent {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveEvent::R1Add { .. } => MoveKind::R1Add,
            MoveEvent::R1Remove { .. } => MoveKind::R1Remove,
            MoveEvent::R2Add { .. } => MoveKind::R2Add,
            MoveEvent::R2Remove { .. } => MoveKind::R2Remove,
            MoveEvent::R3 { .. } => MoveKind::R3,
        }
    }
}

impl fmt::Display for MoveEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MoveEvent::R1Add { edge, first, sign } => {
                write!(f, "r1-add {edge} {}{}", first.letter(), sign.symbol())
            }
            MoveEvent::R1Remove { crossing } => write!(f, "r1-remove {crossing}"),
            MoveEvent::R2Add {
                over_edge,
                under_edge,
                first_sign,
                parallel,
                over_leads,
            } => {
                write!(
                    f,
                    "r2-add {over_edge} {under_edge} {}{}",
                    first_sign.symbol(),
                    if parallel {
                        " parallel"
                    } else {
                        " antiparallel"
                    }
                )?;
                if over_edge == under_edge {
                    f.write_str(if over_leads {
                        " over-first"
                    } else {
                        " under-first"
                    })?;
                }
                Ok(())
            }
            MoveEvent::R2Remove { first, second } => write!(f, "r2-remove {first} {second}"),
            MoveEvent::R3 {
                top,
                middle,
                bottom,
            } => write!(f, "r3 {top} {middle} {bottom}"),
        }
    }
}

fn cyclically_adjacent(a: Position, b: Position, len: usize) -> bool {
    a.component == b.component && ((a.index + 1) % len == b.index || (b.index + 1) % len == a.index)
}

fn is_curl(d: &Diagram, c: CrossingId) -> bool {
    d.crossing(c)
        .is_some_and(|x| cyclically_adjacent(x.over, x.under, d.component(x.over.component).len()))
}

fn is_bigon(d: &Diagram, a: CrossingId, b: CrossingId) -> bool {
    let (Some(x), Some(y)) = (d.crossing(a), d.crossing(b)) else {
        return false;
    };
    a != b
        && x.sign != y.sign
        && cyclically_adjacent(x.over, y.over, d.component(x.over.component).len())
        && cyclically_adjacent(x.under, y.under, d.component(x.under.component).len())
}

/// Triangular faces with one over-over side, one under-under side and one
/// mixed side, as `[top, middle, bottom]`.
fn triangles(d: &Diagram, g: &RibbonGraph) -> Vec<[EdgeId; 3]> {
    let mut out = Vec::new();
    for orbit in g.face_orbits() {
        if orbit.len() != 3 {
            continue;
        }
        let corners: BTreeSet<usize> = orbit.iter().map(|&h| h / 4).collect();
        let sides: BTreeSet<EdgeId> = orbit.iter().map(|&h| g.edge_of(h)).collect();
        if corners.len() != 3 || sides.len() != 3 {
            continue;
        }
        let mut role: [Option<EdgeId>; 3] = [None; 3];
        for &e in &sides {
            let (a, b) = d.edge_ends(e).expect("face edge exists");
            let slot = match (d.entry(a).passage, d.entry(b).passage) {
                (Passage::Over, Passage::Over) => 0,
                (Passage::Under, Passage::Under) => 2,
                _ => 1,
            };
            role[slot] = Some(e);
        }
        if let [Some(t), Some(m), Some(b)] = role {
            out.push([t, m, b]);
        }
    }
    out.sort();
    out
}

fn edge_crossings(d: &Diagram, e: EdgeId) -> [CrossingId; 2] {
    let (a, b) = d.edge_ends(e).expect("edge exists");
    [d.entry(a).crossing, d.entry(b).crossing]
}

fn triangle_crossings(d: &Diagram, sides: [EdgeId; 3]) -> BTreeSet<CrossingId> {
    sides.iter().flat_map(|&e| edge_crossings(d, e)).collect()
}

/// Every applicable move: removals and R3 first, then additions by edge.
pub fn available_moves(d: &Diagram) -> Vec<MoveEvent> {
    moves_on(d, &RibbonGraph::new(d))
}

fn moves_on(d: &Diagram, g: &RibbonGraph) -> Vec<MoveEvent> {
    let mut out = Vec::new();
    for c in d.crossing_ids() {
        if is_curl(d, c) {
            out.push(MoveEvent::R1Remove { crossing: c });
        }
    }
    let mut pairs = BTreeSet::new();
    for word in d.components() {
        let n = word.len();
        for i in 0..n {
            let (x, y) = (word[i], word[(i + 1) % n]);
            if x.passage == Passage::Over
                && y.passage == Passage::Over
                && is_bigon(d, x.crossing, y.crossing)
            {
                let key = (x.crossing.min(y.crossing), x.crossing.max(y.crossing));
                if pairs.insert(key) {
                    out.push(MoveEvent::R2Remove {
                        first: x.crossing,
                        second: y.crossing,
                    });
                }
            }
        }
    }
    for [top, middle, bottom] in triangles(d, g) {
        out.push(MoveEvent::R3 {
            top,
            middle,
            bottom,
        });
    }
    let edges: Vec<EdgeId> = d.edges().collect();
    for &edge in &edges {
        for first in [Passage::Over, Passage::Under] {
            for sign in [Sign::Plus, Sign::Minus] {
                out.push(MoveEvent::R1Add { edge, first, sign });
            }
        }
    }
    for &over_edge in &edges {
        for &under_edge in &edges {
            let leads: &[bool] = if over_edge == under_edge {
                &[true, false]
            } else {
                &[true]
            };
            for &over_leads in leads {
                for first_sign in [Sign::Plus, Sign::Minus] {
                    for parallel in [true, false] {
                        out.push(MoveEvent::R2Add {
                            over_edge,
                            under_edge,
                            first_sign,
                            parallel,
                            over_leads,
                        });
                    }
                }
            }
        }
    }
    out
}

/// New entries on one edge; `outer` lists the segments outside the disc.
struct Insertion {
    edge: EdgeId,
    entries: Vec<GaussEntry>,
    outer: Vec<usize>,
}

/// Ways to spread `w` over `n` outer segments, the old weight on the first
/// segment coming first.
fn splits(w: bool, n: usize) -> Vec<Vec<bool>> {
    let mut out: Vec<Vec<bool>> = Vec::new();
    let mut default = alloc::vec![false; n];
    default[0] = w;
    out.push(default);
    for bits in 0..1usize << n {
        let s: Vec<bool> = (0..n).map(|j| bits >> j & 1 == 1).collect();
        if s.iter().fold(false, |a, &b| a ^ b) == w && s != out[0] {
            out.push(s);
        }
    }
    out
}

/// Inserts entries after the start of each target edge. `segments[j]` holds
/// the weights of the `entries.len() + 1` pieces of insertion `j`.
fn splice(
    d: &Diagram,
    w: &Weighting,
    ins: &[Insertion],
    segments: &[Vec<bool>],
) -> (Vec<Vec<GaussEntry>>, Vec<Vec<bool>>) {
    let mut comps = Vec::with_capacity(d.component_count());
    let mut bits = Vec::with_capacity(d.component_count());
    for (k, word) in d.components().iter().enumerate() {
        let old = w.component_bits(k);
        let here = |i: usize| ins.iter().position(|x| x.edge == EdgeId::new(k, i));
        if word.is_empty() {
            let Some(j) = here(0) else {
                comps.push(Vec::new());
                bits.push(old.to_vec());
                continue;
            };
            let (new, seg) = (&ins[j].entries, &segments[j]);
            let n = new.len();
            // the first and last pieces close up into one semi-arc
            let mut b: Vec<bool> = seg[1..n].to_vec();
            b.push(seg[n] ^ seg[0]);
            comps.push(new.clone());
            bits.push(b);
            continue;
        }
        let mut c = Vec::with_capacity(word.len() + 4);
        let mut b = Vec::with_capacity(word.len() + 4);
        for (i, &e) in word.iter().enumerate() {
            c.push(e);
            match here(i) {
                None => b.push(old[i]),
                Some(j) => {
                    b.push(segments[j][0]);
                    for (t, &x) in ins[j].entries.iter().enumerate() {
                        c.push(x);
                        b.push(segments[j][t + 1]);
                    }
                }
            }
        }
        comps.push(c);
        bits.push(b);
    }
    (comps, bits)
}

/// Result of a move before any checking: the new diagram, its colouring and
/// its ribbon graph.
struct Moved {
    diagram: Diagram,
    colouring: Colouring,
    graph: RibbonGraph,
}

fn insert(d: &Diagram, col: &Colouring, ins: Vec<Insertion>) -> Moved {
    let w = col.weighting();
    let options: Vec<Vec<Vec<bool>>> = ins
        .iter()
        .map(|x| splits(w.get(x.edge), x.outer.len()))
        .collect();
    let lay = |choice: &[usize]| -> Vec<Vec<bool>> {
        ins.iter()
            .zip(choice)
            .enumerate()
            .map(|(j, (x, &c))| {
                let mut seg = alloc::vec![false; x.entries.len() + 1];
                for (&slot, &v) in x.outer.iter().zip(&options[j][c]) {
                    seg[slot] = v;
                }
                seg
            })
            .collect()
    };
    let mut choice = alloc::vec![0usize; ins.len()];
    let (comps, bits) = splice(d, w, &ins, &lay(&choice));
    let diagram = Diagram::from_valid(comps);
    let graph = RibbonGraph::new(&diagram);
    let mut chosen = bits;
    'search: loop {
        let (_, bits) = splice(d, w, &ins, &lay(&choice));
        if admissible_on(&diagram, &graph, &Weighting::from_bits(bits.clone())) {
            chosen = bits;
            break;
        }
        for j in (0..choice.len()).rev() {
            choice[j] += 1;
            if choice[j] < options[j].len() {
                continue 'search;
            }
            choice[j] = 0;
        }
        // nothing admissible: keep the default so the audit reports it
        break;
    }
    let colouring = Colouring::new(&diagram, Weighting::from_bits(chosen), col.base().to_vec())
        .expect("insertion keeps component weights");
    Moved {
        diagram,
        colouring,
        graph,
    }
}

fn remove(d: &Diagram, col: &Colouring, set: BTreeSet<CrossingId>) -> Moved {
    let (diagram, colouring) = subdiagram_with_colouring(d, col, &set);
    let graph = RibbonGraph::new(&diagram);
    Moved {
        diagram,
        colouring,
        graph,
    }
}

fn slide_r3(d: &Diagram, col: &Colouring, sides: [EdgeId; 3]) -> Moved {
    let w = col.weighting();
    let mut bits: Vec<Vec<bool>> = (0..d.component_count())
        .map(|k| w.component_bits(k).to_vec())
        .collect();
    let mut base = col.base().to_vec();
    let weighted: Vec<EdgeId> = sides.iter().copied().filter(|&e| w.get(e)).collect();
    if let [e, f] = weighted[..] {
        let [a, b] = edge_crossings(d, e);
        let v = if edge_crossings(d, f).contains(&a) {
            a
        } else {
            b
        };
        let x = d.crossing(v).expect("corner exists");
        for p in [x.over, x.under] {
            let n = d.component(p.component).len();
            bits[p.component][p.index] ^= true;
            bits[p.component][(p.index + n - 1) % n] ^= true;
            if p.index == 0 {
                base[p.component] ^= true;
            }
        }
    }
    let mut comps: Vec<Vec<GaussEntry>> = d.components().to_vec();
    for e in sides {
        let n = comps[e.component].len();
        comps[e.component].swap(e.position, (e.position + 1) % n);
        debug_assert!(!bits[e.component][e.position]);
    }
    let diagram = Diagram::from_valid(comps);
    let graph = RibbonGraph::new(&diagram);
    let colouring = Colouring::new(&diagram, Weighting::from_bits(bits), base)
        .expect("sliding keeps component weights");
    Moved {
        diagram,
        colouring,
        graph,
    }
}

fn checked_colouring(d: &Diagram, col: &Colouring, g: &RibbonGraph) -> Result<()> {
    if !col.weighting().fits(d) || col.base().len() != d.component_count() {
        return Err(Error::DomainMismatch);
    }
    if !admissible_on(d, g, col.weighting()) {
        return Err(Error::Inadmissible);
    }
    Ok(())
}

fn apply_on(d: &Diagram, g: &RibbonGraph, col: &Colouring, m: &MoveEvent) -> Result<Moved> {
    let moved = apply_unchecked(d, g, col, m)?;
    if !admissible_on(&moved.diagram, &moved.graph, moved.colouring.weighting()) {
        return Err(Error::CurveBlocksMove);
    }
    Ok(moved)
}

fn apply_unchecked(d: &Diagram, g: &RibbonGraph, col: &Colouring, m: &MoveEvent) -> Result<Moved> {
    let label = d.max_label();
    match *m {
        MoveEvent::R1Add { edge, first, sign } => {
            if !d.has_edge(edge) {
                return Err(Error::InapplicableMove);
            }
            let c = label + 1;
            let entries = alloc::vec![
                GaussEntry::new(c, first, sign),
                GaussEntry::new(c, first.flipped(), sign)
            ];
            Ok(insert(
                d,
                col,
                alloc::vec![Insertion {
                    edge,
                    entries,
                    outer: alloc::vec![0, 2]
                }],
            ))
        }
        MoveEvent::R2Add {
            over_edge,
            under_edge,
            first_sign,
            parallel,
            over_leads,
        } => {
            if !d.has_edge(over_edge) || !d.has_edge(under_edge) {
                return Err(Error::InapplicableMove);
            }
            let (a, b) = (label + 1, label + 2);
            let second_sign = first_sign.negated();
            let over = [
                GaussEntry::new(a, Passage::Over, first_sign),
                GaussEntry::new(b, Passage::Over, second_sign),
            ];
            let mut under = [
                GaussEntry::new(a, Passage::Under, first_sign),
                GaussEntry::new(b, Passage::Under, second_sign),
            ];
            if !parallel {
                under.swap(0, 1);
            }
            let ins = if over_edge == under_edge {
                let entries = if over_leads {
                    [over, under].concat()
                } else {
                    [under, over].concat()
                };
                alloc::vec![Insertion {
                    edge: over_edge,
                    entries,
                    outer: alloc::vec![0, 2, 4]
                }]
            } else {
                alloc::vec![
                    Insertion {
                        edge: over_edge,
                        entries: over.to_vec(),
                        outer: alloc::vec![0, 2]
                    },
                    Insertion {
                        edge: under_edge,
                        entries: under.to_vec(),
                        outer: alloc::vec![0, 2]
                    },
                ]
            };
            Ok(insert(d, col, ins))
        }
        MoveEvent::R1Remove { crossing } => {
            if !is_curl(d, crossing) {
                return Err(Error::InapplicableMove);
            }
            Ok(remove(d, col, [crossing].into_iter().collect()))
        }
        MoveEvent::R2Remove { first, second } => {
            if !is_bigon(d, first, second) {
                return Err(Error::InapplicableMove);
            }
            Ok(remove(d, col, [first, second].into_iter().collect()))
        }
        MoveEvent::R3 {
            top,
            middle,
            bottom,
        } => {
            let sides = [top, middle, bottom];
            if !triangles(d, g).contains(&sides) {
                return Err(Error::InapplicableMove);
            }
            Ok(slide_r3(d, col, sides))
        }
    }
}

/// Applies `m` and carries the colouring across. Refuses with
/// [`Error::CurveBlocksMove`] when the carried weighting would not be
/// admissible on the result.
pub fn apply_move(d: &Diagram, col: &Colouring, m: &MoveEvent) -> Result<(Diagram, Colouring)> {
    let g = RibbonGraph::new(d);
    checked_colouring(d, col, &g)?;
    let moved = apply_on(d, &g, col, m)?;
    Ok((moved.diagram, moved.colouring))
}

/// A broken parity axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// A crossing outside the move, or one of an R3 triangle, changed parity.
    Changed {
        axiom: u8,
        crossing: CrossingId,
        before: Parity,
        after: Parity,
    },
    /// The crossing of a curl is odd.
    OddCurl { crossing: CrossingId },
    /// The two crossings of a bigon differ in parity.
    UnevenBigon {
        first: CrossingId,
        second: CrossingId,
    },
    /// An R3 triangle with exactly one odd crossing.
    SingleOddInTriangle { crossing: CrossingId },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Changed {
                axiom,
                crossing,
                before,
                after,
            } => {
                write!(
                    f,
                    "axiom {axiom}: crossing {crossing} went from {before} to {after}"
                )
            }
            AxiomViolation::OddCurl { crossing } => {
                write!(f, "axiom 1: curl crossing {crossing} is odd")
            }
            AxiomViolation::UnevenBigon { first, second } => {
                write!(
                    f,
                    "axiom 2: bigon crossings {first} and {second} differ in parity"
                )
            }
            AxiomViolation::SingleOddInTriangle { crossing } => {
                write!(
                    f,
                    "axiom 3: crossing {crossing} is the only odd one in its triangle"
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Crossings created, destroyed or rearranged by the move.
fn involved(before: &Diagram, after: &Diagram, m: &MoveEvent) -> BTreeSet<CrossingId> {
    match *m {
        MoveEvent::R3 {
            top,
            middle,
            bottom,
        } => triangle_crossings(before, [top, middle, bottom]),
        _ => {
            let b: BTreeSet<CrossingId> = before.crossing_ids().collect();
            let a: BTreeSet<CrossingId> = after.crossing_ids().collect();
            b.symmetric_difference(&a).copied().collect()
        }
    }
}

/// Checks the parity axioms across a move; `after` must come from
/// [`apply_move`] on `before`.
pub fn check_axioms(
    before: (&Diagram, &Colouring),
    after: (&Diagram, &Colouring),
    m: &MoveEvent,
) -> AxiomReport {
    let (bd, bc) = before;
    let (ad, ac) = after;
    let inv = involved(bd, ad, m);
    let parity = |c: CrossingId| {
        bc.parities()
            .get(c)
            .or_else(|| ac.parities().get(c))
            .expect("crossing on one side")
    };
    let mut violations = Vec::new();
    for (c, p) in bc.parities().iter() {
        if inv.contains(&c) {
            continue;
        }
        if let Some(q) = ac.parities().get(c) {
            if p != q {
                violations.push(AxiomViolation::Changed {
                    axiom: 0,
                    crossing: c,
                    before: p,
                    after: q,
                });
            }
        }
    }
    match m.kind() {
        MoveKind::R1Add | MoveKind::R1Remove => {
            for &c in &inv {
                if parity(c).is_odd() {
                    violations.push(AxiomViolation::OddCurl { crossing: c });
                }
            }
        }
        MoveKind::R2Add | MoveKind::R2Remove => {
            let pair: Vec<CrossingId> = inv.iter().copied().collect();
            if let [x, y] = pair[..] {
                if parity(x) != parity(y) {
                    violations.push(AxiomViolation::UnevenBigon {
                        first: x,
                        second: y,
                    });
                }
            }
        }
        MoveKind::R3 => {
            let mut odd = Vec::new();
            for &c in &inv {
                let (p, q) = (bc.parities().get(c), ac.parities().get(c));
                if let (Some(p), Some(q)) = (p, q) {
                    if p != q {
                        violations.push(AxiomViolation::Changed {
                            axiom: 3,
                            crossing: c,
                            before: p,
                            after: q,
                        });
                    }
                    if p.is_odd() {
                        odd.push(c);
                    }
                }
            }
            if let [c] = odd[..] {
                violations.push(AxiomViolation::SingleOddInTriangle { crossing: c });
            }
        }
    }
    AxiomReport { violations }
}

/// How the projected-genus rule applies to one move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionClause {
    /// Not an R2 move on an even pair.
    NotApplicable,
    Holds,
    Fails,
}

/// Everything the property suite checks about one move.
#[derive(Clone, Debug)]
pub struct MoveAudit {
    pub event: MoveEvent,
    pub after: Diagram,
    pub after_colouring: Colouring,
    pub axioms: AxiomReport,
    pub genus_before: GenusReport,
    pub genus_after: GenusReport,
    pub projected_genus_before: usize,
    pub projected_genus_after: usize,
    /// Away from the move, the two projections agree.
    pub projections_agree_outside: bool,
    /// For R2 moves, whether the pair is even.
    pub even_pair: Option<bool>,
}

impl MoveAudit {
    pub fn surface_preserved(&self) -> bool {
        self.genus_before.signature() == self.genus_after.signature()
    }

    /// R1 and R3 keep the total genus; R2 moves it by at most one.
    pub fn genus_ok(&self) -> bool {
        let (b, a) = (self.genus_before.total, self.genus_after.total);
        match self.event.kind() {
            MoveKind::R2Add | MoveKind::R2Remove => b.abs_diff(a) <= 1,
            _ => b == a,
        }
    }

    pub fn projection_clause(&self) -> ProjectionClause {
        match self.even_pair {
            Some(true) if self.projected_genus_before == self.projected_genus_after => {
                ProjectionClause::Holds
            }
            Some(true) => ProjectionClause::Fails,
            _ => ProjectionClause::NotApplicable,
        }
    }

    /// Axioms, genus bounds and agreement of the projections
    /// away from the move. The projected-genus rule is reported separately.
    pub fn passed(&self) -> bool {
        self.axioms.holds() && self.genus_ok() && self.projections_agree_outside
    }
}

/// A coloured diagram with the data shared by every move out of it.
#[derive(Clone, Debug)]
pub struct MoveContext<'a> {
    diagram: &'a Diagram,
    colouring: &'a Colouring,
    graph: RibbonGraph,
    genus: OnceCell<GenusReport>,
    projected_genus: OnceCell<usize>,
}

impl<'a> MoveContext<'a> {
    pub fn new(diagram: &'a Diagram, colouring: &'a Colouring) -> Result<Self> {
        let graph = RibbonGraph::new(diagram);
        checked_colouring(diagram, colouring, &graph)?;
        Ok(MoveContext {
            diagram,
            colouring,
            graph,
            genus: OnceCell::new(),
            projected_genus: OnceCell::new(),
        })
    }

    /// Moves of the diagram that the colouring can follow. Only an R2
    /// removal can be blocked, when it cuts a handle the curve crosses.
    pub fn moves(&self) -> Vec<MoveEvent> {
        let mut moves = moves_on(self.diagram, &self.graph);
        moves.retain(|m| {
            m.kind() != MoveKind::R2Remove
                || !matches!(
                    apply_on(self.diagram, &self.graph, self.colouring, m),
                    Err(Error::CurveBlocksMove)
                )
        });
        moves
    }

    pub fn apply(&self, m: &MoveEvent) -> Result<(Diagram, Colouring)> {
        let moved = apply_on(self.diagram, &self.graph, self.colouring, m)?;
        Ok((moved.diagram, moved.colouring))
    }

    /// Only the parity axioms.
    pub fn check(&self, m: &MoveEvent) -> Result<AxiomReport> {
        let Moved {
            diagram, colouring, ..
        } = apply_on(self.diagram, &self.graph, self.colouring, m)?;
        Ok(check_axioms(
            (self.diagram, self.colouring),
            (&diagram, &colouring),
            m,
        ))
    }

    pub fn audit(&self, m: &MoveEvent) -> Result<MoveAudit> {
        let Moved {
            diagram,
            colouring,
            graph,
        } = apply_on(self.diagram, &self.graph, self.colouring, m)?;
        let axioms = check_axioms((self.diagram, self.colouring), (&diagram, &colouring), m);
        let genus_after = genus_of(&diagram, &graph);
        let projected_after = crate::parity::project(&diagram, &colouring);
        let inv = involved(self.diagram, &diagram, m);
        let hide = |d: &Diagram, col: &Colouring| {
            let mut set: BTreeSet<CrossingId> = col.parities().odd().collect();
            set.extend(inv.iter().copied());
            d.without(&set)
        };
        let projections_agree_outside =
            hide(self.diagram, self.colouring) == hide(&diagram, &colouring);
        let even_pair = matches!(m.kind(), MoveKind::R2Add | MoveKind::R2Remove).then(|| {
            inv.iter().all(|&c| {
                let p = self
                    .colouring
                    .parities()
                    .get(c)
                    .or_else(|| colouring.parities().get(c));
                p == Some(Parity::Even)
            })
        });
        Ok(MoveAudit {
            event: *m,
            projected_genus_before: *self.projected_genus.get_or_init(|| {
                crate::carter::total_genus(&crate::parity::project(self.diagram, self.colouring))
            }),
            projected_genus_after: crate::carter::total_genus(&projected_after),
            after: diagram,
            after_colouring: colouring,
            axioms,
            genus_before: self
                .genus
                .get_or_init(|| genus_of(self.diagram, &self.graph))
                .clone(),
            genus_after,
            projections_agree_outside,
            even_pair,
        })
    }
}

/// Applies `m` and runs every check on it.
pub fn audit_move(d: &Diagram, col: &Colouring, m: &MoveEvent) -> Result<MoveAudit> {
    MoveContext::new(d, col)?.audit(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carter::total_genus;
    use crate::gauss::parse;
    use crate::parity::{admissible_weightings, enumerate_colourings, is_admissible};
    use alloc::vec;

    fn d(s: &str) -> Diagram {
        parse(s).unwrap()
    }

    fn count(moves: &[MoveEvent], kind: MoveKind) -> usize {
        moves.iter().filter(|m| m.kind() == kind).count()
    }

    #[test]
    fn curl_is_removable() {
        let c = d("O1+U1+");
        let moves = available_moves(&c);
        assert!(moves.contains(&MoveEvent::R1Remove {
            crossing: CrossingId(1)
        }));
        let (after, col) = apply_move(
            &c,
            &Colouring::trivial(&c),
            &MoveEvent::R1Remove {
                crossing: CrossingId(1),
            },
        )
        .unwrap();
        assert_eq!(after.serialize(), "");
        assert!(col.weighting().is_zero());
    }

    #[test]
    fn virtual_trefoil_has_no_removals() {
        let moves = available_moves(&d("O1+U2+U1+O2+"));
        assert_eq!(count(&moves, MoveKind::R1Remove), 0);
        assert_eq!(count(&moves, MoveKind::R2Remove), 0);
    }

    #[test]
    fn unknot_only_grows() {
        let moves = available_moves(&d(""));
        assert!(moves
            .iter()
            .all(|m| matches!(m.kind(), MoveKind::R1Add | MoveKind::R2Add)));
        // 4 curls, and 2 leads x 2 signs x 2 directions on the single edge
        assert_eq!(
            (
                count(&moves, MoveKind::R1Add),
                count(&moves, MoveKind::R2Add)
            ),
            (4, 8)
        );
    }

    #[test]
    fn classical_trefoil_has_no_removal_or_r3_sites() {
        // the standard trefoil has no monogon or bigon faces, and its two
        // triangles have a cyclic pattern
        let moves = available_moves(&d("O1+U2+O3+U1+O2+U3+"));
        assert_eq!(count(&moves, MoveKind::R1Remove), 0);
        assert_eq!(count(&moves, MoveKind::R2Remove), 0);
        assert_eq!(count(&moves, MoveKind::R3), 0);
    }

    #[test]
    fn r3_site_after_building_one() {
        // three strands of the unlink pushed into a braid-like triangle
        let code = "O1+O2+;U1+O3+;U2+U3+";
        let dg = d(code);
        let moves = available_moves(&dg);
        let r3: Vec<&MoveEvent> = moves.iter().filter(|m| m.kind() == MoveKind::R3).collect();
        assert!(!r3.is_empty(), "{moves:?}");
        for m in r3 {
            let (after, _) = apply_move(&dg, &Colouring::trivial(&dg), m).unwrap();
            assert_eq!(total_genus(&after), total_genus(&dg));
            let back = available_moves(&after);
            assert!(back.iter().any(|x| x.kind() == MoveKind::R3), "{after}");
        }
    }

    #[test]
    fn add_then_remove_is_identity() {
        for code in ["", "O1+U2+U1+O2+", "O1+U2+O3+U1+O2+U3+", "O1+;U1+", ";"] {
            let dg = d(code);
            for w in admissible_weightings(&dg).iter() {
                for col in enumerate_colourings(&dg, &w).unwrap() {
                    for m in available_moves(&dg) {
                        let label = dg.max_label();
                        let undo = match m {
                            MoveEvent::R1Add { .. } => MoveEvent::R1Remove {
                                crossing: CrossingId(label + 1),
                            },
                            MoveEvent::R2Add { .. } => MoveEvent::R2Remove {
                                first: CrossingId(label + 1),
                                second: CrossingId(label + 2),
                            },
                            _ => continue,
                        };
                        let (mid, mc) = apply_move(&dg, &col, &m).unwrap();
                        assert!(
                            is_admissible(&mid, mc.weighting()).unwrap().is_admissible(),
                            "{code} {m}"
                        );
                        let (back, bc) = apply_move(&mid, &mc, &undo).unwrap();
                        assert_eq!(back, dg, "{code} {m}");
                        assert_eq!(bc, col, "{code} {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn inapplicable_and_inadmissible() {
        let t = d("O1+U2+O3+U1+O2+U3+");
        let triv = Colouring::trivial(&t);
        assert_eq!(
            apply_move(
                &t,
                &triv,
                &MoveEvent::R1Remove {
                    crossing: CrossingId(1)
                }
            ),
            Err(Error::InapplicableMove)
        );
        let bad = MoveEvent::R2Remove {
            first: CrossingId(1),
            second: CrossingId(2),
        };
        assert_eq!(apply_move(&t, &triv, &bad), Err(Error::InapplicableMove));
        // a weighting with odd faces but even component weight
        let w = Weighting::from_support(&t, [EdgeId::new(0, 0), EdgeId::new(0, 1)]).unwrap();
        let col = Colouring::new(&t, w, vec![false]).unwrap();
        let m = MoveEvent::R1Add {
            edge: EdgeId::new(0, 0),
            first: Passage::Over,
            sign: Sign::Plus,
        };
        assert_eq!(apply_move(&t, &col, &m), Err(Error::Inadmissible));
    }

    #[test]
    fn r2_on_one_edge_makes_bigon_and_two_crossing_patterns() {
        let u = d("");
        let m = MoveEvent::R2Add {
            over_edge: EdgeId::new(0, 0),
            under_edge: EdgeId::new(0, 0),
            first_sign: Sign::Plus,
            parallel: false,
            over_leads: true,
        };
        let (after, _) = apply_move(&u, &Colouring::trivial(&u), &m).unwrap();
        assert_eq!(after.serialize(), "O1+O2-U2-U1+");
        assert!(available_moves(&after).contains(&MoveEvent::R2Remove {
            first: CrossingId(1),
            second: CrossingId(2)
        }));
    }

    #[test]
    fn every_move_on_small_diagrams_passes_audit() {
        for code in [
            "O1+U1+",
            "O1+U2+U1+O2+",
            "O1+U2+;U1+O2+",
            "O1-O2+U1-U2+",
            "O1+O2+;U1+O3+;U2+U3+",
        ] {
            let dg = d(code);
            for w in admissible_weightings(&dg).iter() {
                for col in enumerate_colourings(&dg, &w).unwrap() {
                    let ctx = MoveContext::new(&dg, &col).unwrap();
                    for m in ctx.moves() {
                        let a = ctx.audit(&m).unwrap();
                        assert!(a.passed(), "{code} {m}: {:?}", a.axioms);
                    }
                }
            }
        }
    }

    #[test]
    fn even_r2_inside_a_face_can_raise_projected_genus() {
        // both crossings odd, so the projection is the unknot
        let vt = d("O1+U2+U1+O2+");
        let w = Weighting::from_support(&vt, [EdgeId::new(0, 0), EdgeId::new(0, 2)]).unwrap();
        let col = Colouring::new(&vt, w, vec![false]).unwrap();
        let m = MoveEvent::R2Add {
            over_edge: EdgeId::new(0, 0),
            under_edge: EdgeId::new(0, 1),
            first_sign: Sign::Plus,
            parallel: true,
            over_leads: true,
        };
        let a = audit_move(&vt, &col, &m).unwrap();
        assert!(a.passed());
        assert!(a.surface_preserved());
        assert_eq!(a.even_pair, Some(true));
        assert_eq!(
            crate::parity::project(&a.after, &a.after_colouring).serialize(),
            "O3+O4-U3+U4-"
        );
        assert_eq!((a.projected_genus_before, a.projected_genus_after), (0, 1));
        assert_eq!(a.projection_clause(), ProjectionClause::Fails);
    }

    #[test]
    fn curve_can_block_a_destabilizing_removal() {
        let d = parse("U1-U2+U3+O1-O2+O3+").unwrap();
        let m = MoveEvent::R2Remove {
            first: CrossingId(1),
            second: CrossingId(2),
        };
        let w = Weighting::from_support(&d, [EdgeId::new(0, 1), EdgeId::new(0, 2)]).unwrap();
        let col = Colouring::new(&d, w, vec![false]).unwrap();
        assert!(is_admissible(&d, col.weighting()).unwrap().is_admissible());
        assert_eq!(apply_move(&d, &col, &m), Err(Error::CurveBlocksMove));
        assert!(!MoveContext::new(&d, &col).unwrap().moves().contains(&m));
        let plain = Colouring::trivial(&d);
        assert!(MoveContext::new(&d, &plain).unwrap().moves().contains(&m));
        assert_eq!(
            total_genus(&apply_move(&d, &plain, &m).unwrap().0) + 1,
            total_genus(&d)
        );
    }
}
