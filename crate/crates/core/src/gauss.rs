//! Signed multi-component Gauss codes.
//!
//! A [`Diagram`] is an ordered list of cyclic words, one per link component.
//! Every classical crossing is visited exactly twice, once over and once
//! under, and carries a single sign. Virtual crossings are not recorded, so a
//! diagram is automatically invariant under detour moves.
//!
//! Text form: `code := component (';' component)*`, `component := entry*`,
//! `entry := ('O'|'U') digits ('+'|'-')`, whitespace ignored. An empty
//! component is a crossing-free circle.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::error::{Error, ParseErrorKind, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossingId(pub u32);

impl fmt::Display for CrossingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Passage {
    Over,
    Under,
}

impl Passage {
    pub fn flipped(self) -> Passage {
        match self {
            Passage::Over => Passage::Under,
            Passage::Under => Passage::Over,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Passage::Over => 'O',
            Passage::Under => 'U',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn negated(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One visit of a component to a classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussEntry {
    pub crossing: CrossingId,
    pub passage: Passage,
    pub sign: Sign,
}

impl GaussEntry {
    pub fn new(crossing: u32, passage: Passage, sign: Sign) -> Self {
        GaussEntry {
            crossing: CrossingId(crossing),
            passage,
            sign,
        }
    }
}

impl fmt::Display for GaussEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.passage.letter(),
            self.crossing,
            self.sign.symbol()
        )
    }
}

/// Location of an entry: component index and offset within its word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub component: usize,
    pub index: usize,
}

/// The semi-arc leaving entry `position` of `component` and ending at the
/// next entry (cyclically). An empty component has the single loop edge at
/// position 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    pub component: usize,
    pub position: usize,
}

impl EdgeId {
    pub fn new(component: usize, position: usize) -> Self {
        EdgeId {
            component,
            position,
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component, self.position)
    }
}

/// Both visits of a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub id: CrossingId,
    pub sign: Sign,
    pub over: Position,
    pub under: Position,
}

impl Crossing {
    pub fn position(&self, passage: Passage) -> Position {
        match passage {
            Passage::Over => self.over,
            Passage::Under => self.under,
        }
    }
}

/// A broken structural rule, named by crossing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// Labels must be positive.
    ZeroLabel,
    /// A crossing must be visited exactly twice.
    Multiplicity { crossing: CrossingId, count: usize },
    /// A crossing lacks its over or its under visit.
    MissingPassage {
        crossing: CrossingId,
        passage: Passage,
    },
    /// The two visits carry different signs.
    SignMismatch { crossing: CrossingId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroLabel => f.write_str("crossing label 0 is not positive"),
            Violation::Multiplicity { crossing, count } => {
                write!(f, "crossing {crossing} occurs {count} times (expected 2)")
            }
            Violation::MissingPassage { crossing, passage } => {
                let name = match passage {
                    Passage::Over => "Over",
                    Passage::Under => "Under",
                };
                write!(f, "crossing {crossing} lacks an {name} passage")
            }
            Violation::SignMismatch { crossing } => {
                write!(f, "sign mismatch at crossing {crossing}")
            }
        }
    }
}

/// Checks raw component words against the diagram invariants.
pub fn validate(components: &[Vec<GaussEntry>]) -> Vec<Violation> {
    let mut seen: BTreeMap<CrossingId, Vec<GaussEntry>> = BTreeMap::new();
    let mut zero = false;
    for entry in components.iter().flatten() {
        if entry.crossing.0 == 0 {
            zero = true;
        }
        seen.entry(entry.crossing).or_default().push(*entry);
    }
    let mut out = Vec::new();
    if zero {
        out.push(Violation::ZeroLabel);
    }
    for (&crossing, visits) in &seen {
        if visits.len() != 2 {
            out.push(Violation::Multiplicity {
                crossing,
                count: visits.len(),
            });
        }
        for passage in [Passage::Over, Passage::Under] {
            if !visits.iter().any(|v| v.passage == passage) {
                out.push(Violation::MissingPassage { crossing, passage });
            }
        }
        if visits.iter().any(|v| v.sign != visits[0].sign) {
            out.push(Violation::SignMismatch { crossing });
        }
    }
    out
}

/// A virtual link diagram as a signed Gauss code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    components: Vec<Vec<GaussEntry>>,
    crossings: BTreeMap<CrossingId, Crossing>,
}

impl Diagram {
    /// Builds a diagram, rejecting words that break the invariants.
    pub fn new(components: Vec<Vec<GaussEntry>>) -> Result<Self> {
        let violations = validate(&components);
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Ok(Self::from_valid(components))
    }

    /// The crossing-free diagram with `m` circles.
    pub fn unlink(m: usize) -> Self {
        Self::from_valid(alloc::vec![Vec::new(); m])
    }

    /// Caller guarantees `validate(&components)` is empty.
    pub(crate) fn from_valid(components: Vec<Vec<GaussEntry>>) -> Self {
        debug_assert!(validate(&components).is_empty());
        let mut crossings: BTreeMap<CrossingId, Crossing> = BTreeMap::new();
        for (k, word) in components.iter().enumerate() {
            for (i, e) in word.iter().enumerate() {
                let pos = Position {
                    component: k,
                    index: i,
                };
                let c = crossings.entry(e.crossing).or_insert(Crossing {
                    id: e.crossing,
                    sign: e.sign,
                    over: pos,
                    under: pos,
                });
                match e.passage {
                    Passage::Over => c.over = pos,
                    Passage::Under => c.under = pos,
                }
            }
        }
        Diagram {
            components,
            crossings,
        }
    }

    pub fn components(&self) -> &[Vec<GaussEntry>] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &[GaussEntry] {
        &self.components[k]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> impl Iterator<Item = &Crossing> + '_ {
        self.crossings.values()
    }

    pub fn crossing_ids(&self) -> impl Iterator<Item = CrossingId> + '_ {
        self.crossings.keys().copied()
    }

    pub fn crossing(&self, id: CrossingId) -> Option<&Crossing> {
        self.crossings.get(&id)
    }

    pub fn contains(&self, id: CrossingId) -> bool {
        self.crossings.contains_key(&id)
    }

    pub fn entry(&self, pos: Position) -> &GaussEntry {
        &self.components[pos.component][pos.index]
    }

    /// Largest label in use, or 0 for a crossing-free diagram.
    pub fn max_label(&self) -> u32 {
        self.crossings.keys().next_back().map_or(0, |c| c.0)
    }

    /// Number of edges in component `k` (at least one).
    pub fn edge_count_of(&self, k: usize) -> usize {
        self.components[k].len().max(1)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.components.len())
            .map(|k| self.edge_count_of(k))
            .sum()
    }

    /// All edges, component-major.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.components.len())
            .flat_map(move |k| (0..self.edge_count_of(k)).map(move |i| EdgeId::new(k, i)))
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        e.component < self.components.len() && e.position < self.edge_count_of(e.component)
    }

    /// Start and end entries of an edge; `None` for the loop of an empty component.
    pub fn edge_ends(&self, e: EdgeId) -> Option<(Position, Position)> {
        let n = self.components[e.component].len();
        if n == 0 {
            return None;
        }
        let start = Position {
            component: e.component,
            index: e.position,
        };
        let end = Position {
            component: e.component,
            index: (e.position + 1) % n,
        };
        Some((start, end))
    }

    /// Deletes the chords of `virtualize`, turning those crossings virtual.
    pub fn subdiagram<I>(&self, virtualize: I) -> Result<Diagram>
    where
        I: IntoIterator<Item = CrossingId>,
    {
        let set = self.checked_set(virtualize)?;
        Ok(self.without(&set))
    }

    pub(crate) fn checked_set<I>(&self, ids: I) -> Result<BTreeSet<CrossingId>>
    where
        I: IntoIterator<Item = CrossingId>,
    {
        let mut set = BTreeSet::new();
        for c in ids {
            if !self.contains(c) {
                return Err(Error::UnknownCrossing(c));
            }
            set.insert(c);
        }
        Ok(set)
    }

    pub(crate) fn without(&self, set: &BTreeSet<CrossingId>) -> Diagram {
        let components = self
            .components
            .iter()
            .map(|w| {
                w.iter()
                    .filter(|e| !set.contains(&e.crossing))
                    .copied()
                    .collect()
            })
            .collect();
        Diagram::from_valid(components)
    }

    /// Swaps over and under at crossing `c` and negates its sign.
    pub fn crossing_change(&self, c: CrossingId) -> Result<Diagram> {
        if !self.contains(c) {
            return Err(Error::UnknownCrossing(c));
        }
        let components = self
            .components
            .iter()
            .map(|w| {
                w.iter()
                    .map(|e| {
                        if e.crossing == c {
                            GaussEntry {
                                crossing: c,
                                passage: e.passage.flipped(),
                                sign: e.sign.negated(),
                            }
                        } else {
                            *e
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Diagram::from_valid(components))
    }

    /// Relabels crossings 1, 2, ... in order of first visit.
    pub fn canonical(&self) -> Diagram {
        let mut map: BTreeMap<CrossingId, CrossingId> = BTreeMap::new();
        let mut next = 1;
        for e in self.components.iter().flatten() {
            map.entry(e.crossing).or_insert_with(|| {
                let id = CrossingId(next);
                next += 1;
                id
            });
        }
        let components = self
            .components
            .iter()
            .map(|w| {
                w.iter()
                    .map(|e| GaussEntry {
                        crossing: map[&e.crossing],
                        ..*e
                    })
                    .collect()
            })
            .collect();
        Diagram::from_valid(components)
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for (k, word) in self.components.iter().enumerate() {
            if k > 0 {
                s.push(';');
            }
            for e in word {
                let _ = write!(s, "{e}");
            }
        }
        s
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl core::str::FromStr for Diagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Parses and validates a Gauss code.
pub fn parse(text: &str) -> Result<Diagram> {
    Diagram::new(parse_components(text)?)
}

/// Parses the grammar only; invariants are not checked.
pub fn parse_components(text: &str) -> Result<Vec<Vec<GaussEntry>>> {
    let mut chars = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .peekable();
    let mut components = alloc::vec![Vec::new()];
    let err = |position, kind| Error::Parse { position, kind };
    while let Some((pos, c)) = chars.next() {
        let passage = match c {
            ';' => {
                components.push(Vec::new());
                continue;
            }
            'O' => Passage::Over,
            'U' => Passage::Under,
            other => return Err(err(pos, ParseErrorKind::UnexpectedChar(other))),
        };
        let mut label: Option<u32> = None;
        while let Some(&(dpos, d)) = chars.peek() {
            let Some(digit) = d.to_digit(10) else { break };
            let v = label
                .unwrap_or(0)
                .checked_mul(10)
                .and_then(|v| v.checked_add(digit))
                .ok_or_else(|| err(dpos, ParseErrorKind::LabelOverflow))?;
            label = Some(v);
            chars.next();
        }
        let next_pos = chars.peek().map_or(text.len(), |&(p, _)| p);
        let label = label.ok_or_else(|| err(next_pos, ParseErrorKind::MissingLabel))?;
        let sign = match chars.next() {
            Some((_, '+')) => Sign::Plus,
            Some((_, '-')) => Sign::Minus,
            Some((p, _)) => return Err(err(p, ParseErrorKind::MissingSign)),
            None => return Err(err(text.len(), ParseErrorKind::MissingSign)),
        };
        components
            .last_mut()
            .expect("at least one component")
            .push(GaussEntry::new(label, passage, sign));
    }
    Ok(components)
}
