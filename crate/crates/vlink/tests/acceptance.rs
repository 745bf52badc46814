//! One line per acceptance criterion. Runs as a plain binary so the lines
//! show up in `cargo test` output.
//!
//! Criterion 4's projected-genus clause is reported but does not fail the
//! run: its counterexamples are each rebuilt and confirmed independently,
//! and the run fails if any of them cannot be. Every other check asserts.

use std::time::{Duration, Instant};

use rand::Rng;
use vlink::enumerate::all_diagrams;
use vlink::harness::{fuzz, oracle_run, sweep, FuzzConfig, FuzzReport, SweepReport};
use vlink::random::{random_colouring, random_diagram_with, rng};
use vlink_core::carter::total_genus;
use vlink_core::invariants::{
    ascending_number, ascending_number_by_changes, bridge_count, min_genus_subdiagram,
    ASCENDING_ORACLE_CAP, SUBDIAGRAM_CAP,
};
use vlink_core::moves::{audit_move, MoveEvent, ProjectionClause};
use vlink_core::parity::{
    enumerate_colourings, project, project_with_colouring, Colouring, Weighting,
};
use vlink_core::{parse, CrossingId, EdgeId, Sign};

const TREFOIL: &str = "O1+U2+O3+U1+O2+U3+";
const VIRTUAL_TREFOIL: &str = "O1+U2+U1+O2+";
const FUZZ_SEED: u64 = 20_240_601;
const FUZZ_STEPS: usize = 20_000;

struct Tally {
    failed: Vec<u8>,
}

impl Tally {
    fn line(&mut self, n: u8, pass: bool, what: &str, detail: String) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} {what}: {detail}");
        if !pass {
            self.failed.push(n);
        }
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn genus_anchors(t: &mut Tally) {
    let start = Instant::now();
    let cases = [
        (TREFOIL, 0),
        (VIRTUAL_TREFOIL, 1),
        ("O1+;U1+", 1),
        ("O1+U2+;U1+O2+", 0),
    ];
    let got: Vec<usize> = cases
        .iter()
        .map(|(c, _)| total_genus(&parse(c).unwrap()))
        .collect();
    let elapsed = start.elapsed();
    let pass = cases.iter().zip(&got).all(|((_, e), g)| e == g) && elapsed < Duration::from_secs(1);
    t.line(
        1,
        pass,
        "genus anchors",
        format!("genera {got:?} in {}", secs(elapsed)),
    );
}

fn axiom_suite(t: &mut Tally, s: &SweepReport, sweep_time: Duration, f: &FuzzReport) {
    let pass = s.axiom_violations == 0
        && s.move_errors == 0
        && f.axioms_clean()
        && f.steps >= 10_000
        && sweep_time < Duration::from_secs(300);
    let detail = format!(
        "sweep of {} diagrams (<= {} crossings, <= {} components), {} admissible weightings, {} colourings, \
         {} moves, {} violations, {} errors, {} removals blocked by the curve, {}; \
         fuzz {} steps (<= {} crossings), {} violations, {} errors, {} local disagreements, {} lift mismatches",
        s.diagrams,
        s.max_crossings,
        s.max_components,
        s.admissible_weightings,
        s.colourings,
        s.moves_checked,
        s.axiom_violations,
        s.move_errors,
        s.blocked,
        secs(sweep_time),
        f.steps,
        f.config.map_or(0, |c| c.max_crossings),
        f.axiom_violations,
        f.move_errors,
        f.outside_disagreements,
        f.lift_mismatches,
    );
    t.line(2, pass, "parity axioms", detail);
    assert!(
        s.findings.is_empty() && f.findings.is_empty(),
        "{:?} {:?}",
        s.findings,
        f.findings
    );
}

fn lift_oracle(t: &mut Tally) {
    let r = oracle_run(FUZZ_SEED, 2_000, 8);
    let pass = r.agreements == r.instances && r.instances >= 1_000;
    t.line(
        3,
        pass,
        "lift equals projection",
        format!(
            "{} of {} instances (<= 8 crossings) agree",
            r.agreements, r.instances
        ),
    );
    assert!(r.findings.is_empty(), "{:?}", r.findings);
}

/// The smallest counterexample to the projected-genus clause, rebuilt from
/// scratch.
fn frozen_counterexample() -> (usize, usize, usize, usize) {
    let d = parse(VIRTUAL_TREFOIL).unwrap();
    let w = Weighting::from_support(&d, [EdgeId::new(0, 0), EdgeId::new(0, 2)]).unwrap();
    let col = Colouring::new(&d, w, vec![false]).unwrap();
    let m = MoveEvent::R2Add {
        over_edge: EdgeId::new(0, 0),
        under_edge: EdgeId::new(0, 1),
        first_sign: Sign::Plus,
        parallel: true,
        over_leads: true,
    };
    let a = audit_move(&d, &col, &m).unwrap();
    assert!(a.passed() && a.surface_preserved());
    assert_eq!(a.projection_clause(), ProjectionClause::Fails);
    (
        a.genus_before.total,
        a.genus_after.total,
        a.projected_genus_before,
        a.projected_genus_after,
    )
}

fn genus_under_moves(t: &mut Tally, f: &FuzzReport) {
    let r1_r3 = [&f.r1_add, &f.r1_remove, &f.r3];
    let fixed = r1_r3.iter().all(|k| k.genus_changed == 0);
    let r2 = f.r2_add.genus_violations + f.r2_remove.genus_violations == 0;
    let p = &f.projection;
    let pass = fixed && r2 && p.fails == 0;
    let (g0, g1, p0, p1) = frozen_counterexample();
    let detail = format!(
        "R1/R3 genus changes {} of {} moves; R2 moves changing genus by more than 1: {} of {}; \
         even R2 moves keeping projected genus {} of {}, {} exceptions ({} with the Carter surface unchanged, \
         {} confirmed independently); e.g. {} with edges 0:0 and 0:2 weighted, r2-add 0:0 0:1 + parallel: \
         Carter genus {} -> {}, projected genus {} -> {}",
        r1_r3.iter().map(|k| k.genus_changed).sum::<usize>(),
        r1_r3.iter().map(|k| k.applied).sum::<usize>(),
        f.r2_add.genus_violations + f.r2_remove.genus_violations,
        f.r2_add.applied + f.r2_remove.applied,
        p.holds,
        p.applicable,
        p.fails,
        p.fails_surface_preserved,
        p.fails_confirmed,
        VIRTUAL_TREFOIL,
        g0,
        g1,
        p0,
        p1,
    );
    t.line(4, pass, "genus under moves", detail);
    assert!(fixed && r2, "R1/R3 or R2 genus clause broken");
    assert_eq!(
        p.fails_confirmed, p.fails,
        "an unexplained projected-genus failure"
    );
}

fn colouring_counts(t: &mut Tally, s: &SweepReport) {
    let mut r = rng(FUZZ_SEED ^ 5);
    let (mut tested, mut bad) = (0usize, 0usize);
    for _ in 0..5_000 {
        let d = random_diagram_with(&mut r, 8, 3);
        let edges: Vec<EdgeId> = d.edges().collect();
        let w = Weighting::from_support(&d, edges.iter().copied().filter(|_| r.random())).unwrap();
        let count = enumerate_colourings(&d, &w).unwrap().len();
        let odd = (0..d.component_count()).any(|k| w.component_weight(k));
        tested += 1;
        if count != if odd { 0 } else { 1 << d.component_count() } {
            bad += 1;
        }
    }
    let pass = bad == 0 && s.colouring_count_failures == 0;
    let detail = format!(
        "{} exceptions over every edge weighting of the {} swept diagrams ({} weightings), \
         {bad} over {tested} random weightings (<= 8 crossings, <= 3 components)",
        s.colouring_count_failures, s.diagrams, s.weightings_counted
    );
    t.line(5, pass, "colouring count", detail);
}

fn monotonicity(t: &mut Tally) {
    let start = Instant::now();
    let diagrams = all_diagrams(5, 2);
    let (mut subsets, mut bridge_bad, mut ascending_bad, mut minsub_bad) = (0usize, 0, 0, 0);
    let mut oracle_bad = 0usize;
    for d in &diagrams {
        let ids: Vec<CrossingId> = d.crossing_ids().collect();
        let (b, a) = (bridge_count(d), ascending_number(d));
        for mask in 0u32..1 << ids.len() {
            let picked = ids
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c);
            let sub = d.subdiagram(picked).unwrap();
            subsets += 1;
            bridge_bad += (bridge_count(&sub) > b) as usize;
            ascending_bad += (ascending_number(&sub) > a) as usize;
        }
        let min = min_genus_subdiagram(d, SUBDIAGRAM_CAP).unwrap().minimum;
        minsub_bad += (min > total_genus(d)) as usize;
        oracle_bad += (ascending_number_by_changes(d, ASCENDING_ORACLE_CAP).unwrap() != a) as usize;
    }
    let pass = bridge_bad + ascending_bad + minsub_bad + oracle_bad == 0;
    let detail = format!(
        "{} diagrams (<= 5 crossings, <= 2 components), {subsets} subdiagrams: \
         {bridge_bad} bridge, {ascending_bad} ascending, {minsub_bad} minimal-genus exceptions, \
         {oracle_bad} disagreements with the crossing-change oracle, in {}",
        diagrams.len(),
        secs(start.elapsed())
    );
    t.line(6, pass, "monotonicity", detail);
}

fn desk_values(t: &mut Tally) {
    let trefoil = parse(TREFOIL).unwrap();
    let vt = parse(VIRTUAL_TREFOIL).unwrap();
    let min = min_genus_subdiagram(&vt, SUBDIAGRAM_CAP).unwrap();
    let got = (
        bridge_count(&trefoil),
        bridge_count(&vt),
        ascending_number(&trefoil),
        ascending_number(&vt),
        min.minimum,
        min.witnesses.first().map(Vec::len),
    );
    let pass = got == (3, 1, 1, 0, 0, Some(1));
    let detail = format!(
        "bridge {} and {}, ascending {} and {}, minimal genus {} with witnesses {:?}",
        got.0,
        got.1,
        got.2,
        got.3,
        got.4,
        min.witnesses
            .iter()
            .map(|w| w.iter().map(|c| c.0).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );
    t.line(7, pass, "desk values", detail);
}

fn projection_identities(t: &mut Tally, s: &SweepReport) {
    let mut r = rng(FUZZ_SEED ^ 8);
    let (mut tested, mut bad) = (0usize, 0usize);
    for _ in 0..5_000 {
        let d = random_diagram_with(&mut r, 8, 3);
        let col = random_colouring(&mut r, &d);
        let (p, pc) = project_with_colouring(&d, &col);
        tested += 1;
        if project(&p, &pc) != p || project(&d, &Colouring::trivial(&d)) != d {
            bad += 1;
        }
    }
    let pass = bad == 0 && s.projection_failures == 0;
    let detail = format!(
        "{} exceptions over {} swept diagrams and {} colourings, {bad} over {tested} random coloured diagrams (<= 8 crossings)",
        s.projection_failures, s.diagrams, s.colourings
    );
    t.line(8, pass, "projection identities", detail);
}

fn main() {
    let mut t = Tally { failed: Vec::new() };
    genus_anchors(&mut t);

    let start = Instant::now();
    let s = sweep(4, 2);
    let sweep_time = start.elapsed();
    let f = fuzz(FuzzConfig::new(FUZZ_SEED, FUZZ_STEPS, 8));
    axiom_suite(&mut t, &s, sweep_time, &f);
    lift_oracle(&mut t);
    genus_under_moves(&mut t, &f);
    colouring_counts(&mut t, &s);
    monotonicity(&mut t);
    desk_values(&mut t);
    projection_identities(&mut t, &s);

    // criterion 4 fails on a false claim, see the header
    let strict: Vec<u8> = t.failed.iter().copied().filter(|&n| n != 4).collect();
    assert!(strict.is_empty(), "criteria {strict:?} failed");
}
