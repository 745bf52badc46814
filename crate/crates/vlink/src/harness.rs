//! Drivers for the exhaustive sweep, the seeded move fuzzer and the lift
//! oracle run. Reports are plain counters plus a few sample findings, and
//! do not depend on the number of threads.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use vlink_core::carter::total_genus;
use vlink_core::cover::verify_lift_oracle;
use vlink_core::moves::{
    available_moves, MoveAudit, MoveContext, MoveEvent, MoveKind, ProjectionClause,
};
use vlink_core::parity::{
    admissible_weightings, enumerate_colourings, project, project_with_colouring, Colouring,
    Weighting,
};
use vlink_core::{CrossingId, Diagram, Error};

use crate::enumerate::all_diagrams;
use crate::random::{random_colouring, random_diagram_with};
use crate::weights::{weighting_edges, EdgeRef};

/// Sample findings kept per report.
pub const MAX_FINDINGS: usize = 16;

/// Runs `f` on a pool capped by `VLINK_THREADS` when it is set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("VLINK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: String,
    pub weights: Vec<EdgeRef>,
    pub base: String,
    pub event: Option<String>,
    pub detail: String,
}

impl Finding {
    fn new(d: &Diagram, col: &Colouring, event: Option<&MoveEvent>, detail: String) -> Self {
        Finding {
            code: d.serialize(),
            weights: weighting_edges(col.weighting()),
            base: bits(col.base()),
            event: event.map(|m| m.to_string()),
            detail,
        }
    }
}

pub fn bits(base: &[bool]) -> String {
    base.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn keep(findings: &mut Vec<Finding>, more: impl IntoIterator<Item = Finding>) {
    for f in more {
        if findings.len() < MAX_FINDINGS {
            findings.push(f);
        }
    }
}

/// Whether a move stays within `cap` crossings.
pub fn fits(m: &MoveEvent, crossings: usize, cap: usize) -> bool {
    match m.kind() {
        MoveKind::R1Add => crossings < cap,
        MoveKind::R2Add => crossings + 2 <= cap,
        _ => true,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_crossings: usize,
    pub max_components: usize,
    pub diagrams: usize,
    /// Every edge vector of every diagram, admissible or not.
    pub weightings_counted: usize,
    pub admissible_weightings: usize,
    pub colourings: usize,
    pub moves_checked: usize,
    /// Removals the curve prevents; these are not moves of the coloured
    /// diagram and are not checked further.
    pub blocked: usize,
    pub axiom_violations: usize,
    pub move_errors: usize,
    pub colouring_count_failures: usize,
    pub projection_failures: usize,
    pub findings: Vec<Finding>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.axiom_violations == 0
            && self.move_errors == 0
            && self.colouring_count_failures == 0
            && self.projection_failures == 0
    }

    fn absorb(&mut self, o: SweepReport) {
        self.diagrams += o.diagrams;
        self.weightings_counted += o.weightings_counted;
        self.admissible_weightings += o.admissible_weightings;
        self.colourings += o.colourings;
        self.moves_checked += o.moves_checked;
        self.blocked += o.blocked;
        self.axiom_violations += o.axiom_violations;
        self.move_errors += o.move_errors;
        self.colouring_count_failures += o.colouring_count_failures;
        self.projection_failures += o.projection_failures;
        keep(&mut self.findings, o.findings);
    }
}

/// Every diagram up to the bounds, every admissible colouring, every move
/// that stays within `max_crossings`. Also counts colourings of every edge
/// vector and checks the two projection identities.
pub fn sweep(max_crossings: usize, max_components: usize) -> SweepReport {
    let diagrams = all_diagrams(max_crossings, max_components);
    let parts: Vec<SweepReport> = with_pool(|| {
        diagrams
            .par_iter()
            .map(|d| sweep_diagram(d, max_crossings))
            .collect()
    });
    let mut report = SweepReport {
        max_crossings,
        max_components,
        ..SweepReport::default()
    };
    for p in parts {
        report.absorb(p);
    }
    report
}

pub fn sweep_diagram(d: &Diagram, max_crossings: usize) -> SweepReport {
    let mut r = SweepReport {
        diagrams: 1,
        ..SweepReport::default()
    };
    let m = d.component_count();
    let trivial = Colouring::trivial(d);

    let edges: Vec<_> = d.edges().collect();
    for mask in 0u64..1 << edges.len() {
        let support = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        let w = Weighting::from_support(d, support).expect("edges of d");
        let count = enumerate_colourings(d, &w).expect("fits d").len();
        let odd = (0..m).any(|k| w.component_weight(k));
        let expected = if odd { 0 } else { 1 << m };
        r.weightings_counted += 1;
        if count != expected {
            r.colouring_count_failures += 1;
            keep(
                &mut r.findings,
                [Finding::new(
                    d,
                    &trivial,
                    None,
                    format!("{count} colourings, expected {expected}"),
                )],
            );
        }
    }

    if project(d, &trivial) != *d {
        r.projection_failures += 1;
        keep(
            &mut r.findings,
            [Finding::new(
                d,
                &trivial,
                None,
                "trivial projection changed the diagram".into(),
            )],
        );
    }

    let moves: Vec<MoveEvent> = available_moves(d)
        .into_iter()
        .filter(|mv| fits(mv, d.crossing_count(), max_crossings))
        .collect();
    for w in admissible_weightings(d).iter() {
        r.admissible_weightings += 1;
        for col in enumerate_colourings(d, &w).expect("fits d") {
            r.colourings += 1;
            let (p, pc) = project_with_colouring(d, &col);
            if project(&p, &pc) != p {
                r.projection_failures += 1;
                keep(
                    &mut r.findings,
                    [Finding::new(
                        d,
                        &col,
                        None,
                        "projection is not idempotent".into(),
                    )],
                );
            }
            let ctx = MoveContext::new(d, &col).expect("admissible colouring");
            for mv in &moves {
                match ctx.check(mv) {
                    Ok(axioms) => {
                        r.moves_checked += 1;
                        r.axiom_violations += axioms.violations.len();
                        keep(
                            &mut r.findings,
                            axioms
                                .violations
                                .iter()
                                .map(|v| Finding::new(d, &col, Some(mv), v.to_string())),
                        );
                    }
                    Err(Error::CurveBlocksMove) if mv.kind() == MoveKind::R2Remove => {
                        r.blocked += 1
                    }
                    Err(e) => {
                        r.move_errors += 1;
                        keep(
                            &mut r.findings,
                            [Finding::new(d, &col, Some(mv), e.to_string())],
                        );
                    }
                }
            }
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub steps: usize,
    pub max_crossings: usize,
    pub max_components: usize,
    /// Steps before a fresh random diagram and colouring.
    pub restart_every: usize,
}

impl FuzzConfig {
    pub fn new(seed: u64, steps: usize, max_crossings: usize) -> Self {
        FuzzConfig {
            seed,
            steps,
            max_crossings,
            max_components: 2,
            restart_every: 64,
        }
    }
}

/// Steps handled by one random stream.
const STREAM_STEPS: usize = 1000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KindTally {
    pub applied: usize,
    /// Moves whose total genus differs from before.
    pub genus_changed: usize,
    /// R1 or R3 changing the genus, or R2 changing it by more than one.
    pub genus_violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProjectionTally {
    /// R2 moves on an even pair.
    pub applicable: usize,
    pub holds: usize,
    pub fails: usize,
    /// Failures where the Carter surface kept its topology.
    pub fails_surface_preserved: usize,
    /// Failures where removing the pair from the larger projection gives
    /// the smaller one, the projected genus moved by exactly one, and the
    /// lift oracle agrees on both sides.
    pub fails_confirmed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub config: Option<FuzzConfig>,
    pub steps: usize,
    pub restarts: usize,
    pub r1_add: KindTally,
    pub r1_remove: KindTally,
    pub r2_add: KindTally,
    pub r2_remove: KindTally,
    pub r3: KindTally,
    pub axiom_violations: usize,
    pub move_errors: usize,
    pub outside_disagreements: usize,
    pub lift_mismatches: usize,
    pub projection: ProjectionTally,
    pub findings: Vec<Finding>,
    /// Sample projected-genus failures.
    pub projection_examples: Vec<Finding>,
}

impl FuzzReport {
    pub fn tally(&self, kind: MoveKind) -> &KindTally {
        match kind {
            MoveKind::R1Add => &self.r1_add,
            MoveKind::R1Remove => &self.r1_remove,
            MoveKind::R2Add => &self.r2_add,
            MoveKind::R2Remove => &self.r2_remove,
            MoveKind::R3 => &self.r3,
        }
    }

    fn tally_mut(&mut self, kind: MoveKind) -> &mut KindTally {
        match kind {
            MoveKind::R1Add => &mut self.r1_add,
            MoveKind::R1Remove => &mut self.r1_remove,
            MoveKind::R2Add => &mut self.r2_add,
            MoveKind::R2Remove => &mut self.r2_remove,
            MoveKind::R3 => &mut self.r3,
        }
    }

    pub fn genus_violations(&self) -> usize {
        MoveKind::ALL
            .iter()
            .map(|&k| self.tally(k).genus_violations)
            .sum()
    }

    /// Axioms, admissibility, local agreement and the genus bounds.
    pub fn axioms_clean(&self) -> bool {
        self.axiom_violations == 0
            && self.move_errors == 0
            && self.outside_disagreements == 0
            && self.lift_mismatches == 0
    }

    fn absorb(&mut self, o: FuzzReport) {
        self.steps += o.steps;
        self.restarts += o.restarts;
        for k in MoveKind::ALL {
            let (a, b) = (self.tally_mut(k), o.tally(k));
            a.applied += b.applied;
            a.genus_changed += b.genus_changed;
            a.genus_violations += b.genus_violations;
        }
        self.axiom_violations += o.axiom_violations;
        self.move_errors += o.move_errors;
        self.outside_disagreements += o.outside_disagreements;
        self.lift_mismatches += o.lift_mismatches;
        let (p, q) = (&mut self.projection, &o.projection);
        p.applicable += q.applicable;
        p.holds += q.holds;
        p.fails += q.fails;
        p.fails_surface_preserved += q.fails_surface_preserved;
        p.fails_confirmed += q.fails_confirmed;
        keep(&mut self.findings, o.findings);
        keep(&mut self.projection_examples, o.projection_examples);
    }
}

/// A random walk through coloured diagrams. At each step a move kind is
/// drawn uniformly among those with a site, then a site uniformly; additions
/// that would exceed `max_crossings` are not offered.
pub fn fuzz(cfg: FuzzConfig) -> FuzzReport {
    let streams = cfg.steps.div_ceil(STREAM_STEPS);
    let parts: Vec<FuzzReport> = with_pool(|| {
        (0..streams)
            .into_par_iter()
            .map(|s| {
                let mut rng = crate::random::rng(cfg.seed);
                rng.set_stream(s as u64);
                fuzz_stream(
                    &mut rng,
                    &cfg,
                    STREAM_STEPS.min(cfg.steps - s * STREAM_STEPS),
                )
            })
            .collect()
    });
    let mut report = FuzzReport {
        config: Some(cfg),
        ..FuzzReport::default()
    };
    for p in parts {
        report.absorb(p);
    }
    report
}

fn fuzz_stream(rng: &mut ChaCha8Rng, cfg: &FuzzConfig, steps: usize) -> FuzzReport {
    let mut r = FuzzReport::default();
    let fresh = |rng: &mut ChaCha8Rng| {
        let d = random_diagram_with(rng, cfg.max_crossings, cfg.max_components);
        let col = random_colouring(rng, &d);
        (d, col)
    };
    let (mut d, mut col) = fresh(rng);
    let mut since_restart = 0;
    while r.steps < steps {
        let ctx = MoveContext::new(&d, &col).expect("walk keeps colourings admissible");
        let moves: Vec<MoveEvent> = ctx
            .moves()
            .into_iter()
            .filter(|m| fits(m, d.crossing_count(), cfg.max_crossings))
            .collect();
        let kinds: Vec<MoveKind> = MoveKind::ALL
            .into_iter()
            .filter(|&k| moves.iter().any(|m| m.kind() == k))
            .collect();
        if kinds.is_empty() || since_restart == cfg.restart_every {
            (d, col) = fresh(rng);
            r.restarts += 1;
            since_restart = 0;
            continue;
        }
        let kind = *kinds.choose(rng).expect("nonempty");
        let sites: Vec<&MoveEvent> = moves.iter().filter(|m| m.kind() == kind).collect();
        let m = **sites.choose(rng).expect("nonempty");
        r.steps += 1;
        since_restart += 1;
        let audit = match ctx.audit(&m) {
            Ok(a) => a,
            Err(e) => {
                r.move_errors += 1;
                keep(
                    &mut r.findings,
                    [Finding::new(&d, &col, Some(&m), e.to_string())],
                );
                (d, col) = fresh(rng);
                since_restart = 0;
                continue;
            }
        };
        record(&mut r, &d, &col, &audit);
        // an occasional fresh base colour keeps both sheets in play
        let mut next_col = audit.after_colouring;
        if rng.random_ratio(1, 8) {
            let base: Vec<bool> = (0..audit.after.component_count())
                .map(|_| rng.random())
                .collect();
            next_col = Colouring::new(&audit.after, next_col.weighting().clone(), base)
                .expect("same weighting");
        }
        (d, col) = (audit.after, next_col);
    }
    r
}

fn record(r: &mut FuzzReport, d: &Diagram, col: &Colouring, a: &MoveAudit) {
    let kind = a.event.kind();
    let t = r.tally_mut(kind);
    t.applied += 1;
    if a.genus_before.total != a.genus_after.total {
        t.genus_changed += 1;
    }
    if !a.genus_ok() {
        t.genus_violations += 1;
        let detail = format!("genus {} -> {}", a.genus_before.total, a.genus_after.total);
        keep(
            &mut r.findings,
            [Finding::new(d, col, Some(&a.event), detail)],
        );
    }
    r.axiom_violations += a.axioms.violations.len();
    keep(
        &mut r.findings,
        a.axioms
            .violations
            .iter()
            .map(|v| Finding::new(d, col, Some(&a.event), v.to_string())),
    );
    if !a.projections_agree_outside {
        r.outside_disagreements += 1;
        keep(
            &mut r.findings,
            [Finding::new(
                d,
                col,
                Some(&a.event),
                "projections differ away from the move".into(),
            )],
        );
    }
    if !verify_lift_oracle(&a.after, &a.after_colouring)
        .map(|l| l.agrees())
        .unwrap_or(false)
    {
        r.lift_mismatches += 1;
        keep(
            &mut r.findings,
            [Finding::new(
                &a.after,
                &a.after_colouring,
                None,
                "lift differs from projection".into(),
            )],
        );
    }
    match a.projection_clause() {
        ProjectionClause::NotApplicable => {}
        ProjectionClause::Holds => {
            r.projection.applicable += 1;
            r.projection.holds += 1;
        }
        ProjectionClause::Fails => {
            r.projection.applicable += 1;
            r.projection.fails += 1;
            if a.surface_preserved() {
                r.projection.fails_surface_preserved += 1;
            }
            if confirm_projection_failure(d, col, a) {
                r.projection.fails_confirmed += 1;
            }
            let detail = format!(
                "projected genus {} -> {}, Carter genus {} -> {}",
                a.projected_genus_before,
                a.projected_genus_after,
                a.genus_before.total,
                a.genus_after.total
            );
            keep(
                &mut r.projection_examples,
                [Finding::new(d, col, Some(&a.event), detail)],
            );
        }
    }
}

/// Rebuilds a projected-genus failure from scratch: the projections differ
/// by exactly the even pair, their genera by one, and on both sides the
/// lift through the double cover reproduces the projection.
pub fn confirm_projection_failure(d: &Diagram, col: &Colouring, a: &MoveAudit) -> bool {
    let before = project(d, col);
    let after = project(&a.after, &a.after_colouring);
    let (small, large) = match a.event {
        MoveEvent::R2Add { .. } => (&before, &after),
        _ => (&after, &before),
    };
    let pair: Vec<CrossingId> = large
        .crossing_ids()
        .filter(|&c| !small.contains(c))
        .collect();
    let reduces = pair.len() == 2
        && large
            .subdiagram(pair.iter().copied())
            .map(|s| s.canonical())
            == Ok(small.canonical());
    let lifts = [(d, col), (&a.after, &a.after_colouring)]
        .into_iter()
        .all(|(dd, cc)| {
            verify_lift_oracle(dd, cc)
                .map(|l| l.agrees())
                .unwrap_or(false)
        });
    reduces && lifts && total_genus(&before).abs_diff(total_genus(&after)) == 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub instances: usize,
    pub max_crossings: usize,
    pub agreements: usize,
    pub findings: Vec<Finding>,
}

/// Lift against projection on random coloured diagrams.
pub fn oracle_run(seed: u64, instances: usize, max_crossings: usize) -> OracleReport {
    let chunks = instances.div_ceil(STREAM_STEPS);
    let parts: Vec<(usize, Vec<Finding>)> = with_pool(|| {
        (0..chunks)
            .into_par_iter()
            .map(|s| {
                let mut rng = crate::random::rng(seed);
                rng.set_stream(s as u64);
                let mut ok = 0;
                let mut bad = Vec::new();
                for _ in 0..STREAM_STEPS.min(instances - s * STREAM_STEPS) {
                    let d = random_diagram_with(&mut rng, max_crossings, 3);
                    let col = random_colouring(&mut rng, &d);
                    match verify_lift_oracle(&d, &col) {
                        Ok(l) if l.agrees() => ok += 1,
                        Ok(l) => keep(
                            &mut bad,
                            [Finding::new(
                                &d,
                                &col,
                                None,
                                format!("lift {} vs {}", l.lift, l.projection),
                            )],
                        ),
                        Err(e) => keep(&mut bad, [Finding::new(&d, &col, None, e.to_string())]),
                    }
                }
                (ok, bad)
            })
            .collect()
    });
    let mut report = OracleReport {
        seed,
        instances,
        max_crossings,
        ..OracleReport::default()
    };
    for (ok, bad) in parts {
        report.agreements += ok;
        keep(&mut report.findings, bad);
    }
    report
}
