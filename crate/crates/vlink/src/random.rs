//! Seeded random diagrams and colourings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vlink_core::parity::{admissible_weightings, Colouring};
use vlink_core::{Diagram, GaussEntry, Passage, Sign};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_crossings` crossings spread over 1 to `max_components`
/// components (at least one). The `2n` passages are shuffled and cut at
/// uniform points; signs and over/under are uniform.
pub fn random_diagram_with<R: Rng>(
    rng: &mut R,
    max_crossings: usize,
    max_components: usize,
) -> Diagram {
    let n = rng.random_range(0..=max_crossings);
    let m = rng.random_range(1..=max_components.max(1));
    let mut entries: Vec<GaussEntry> = (1..=n as u32)
        .flat_map(|c| {
            let sign = if rng.random() {
                Sign::Plus
            } else {
                Sign::Minus
            };
            [
                GaussEntry::new(c, Passage::Over, sign),
                GaussEntry::new(c, Passage::Under, sign),
            ]
        })
        .collect();
    entries.shuffle(rng);
    let mut cuts: Vec<usize> = (1..m)
        .map(|_| rng.random_range(0..=entries.len()))
        .collect();
    cuts.sort_unstable();
    cuts.push(entries.len());
    let mut start = 0;
    let comps = cuts
        .into_iter()
        .map(|cut| {
            let word = entries[start..cut].to_vec();
            start = cut;
            word
        })
        .collect();
    Diagram::new(comps).expect("one over and one under per crossing")
}

pub fn random_diagram(seed: u64, max_crossings: usize, max_components: usize) -> Diagram {
    random_diagram_with(&mut rng(seed), max_crossings, max_components)
}

/// A uniform admissible weighting with uniform base colours.
pub fn random_colouring<R: Rng>(rng: &mut R, d: &Diagram) -> Colouring {
    let space = admissible_weightings(d);
    let coords: Vec<bool> = (0..space.dimension()).map(|_| rng.random()).collect();
    let base: Vec<bool> = (0..d.component_count()).map(|_| rng.random()).collect();
    Colouring::new(d, space.combination(&coords), base)
        .expect("admissible weightings are even on components")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        for seed in 0..20 {
            assert_eq!(random_diagram(seed, 6, 3), random_diagram(seed, 6, 3));
        }
    }

    #[test]
    fn zero_crossings_gives_circles() {
        for seed in 0..20 {
            let d = random_diagram(seed, 0, 3);
            assert_eq!(d.crossing_count(), 0);
            assert!(d.serialize().chars().all(|c| c == ';'));
        }
    }

    #[test]
    fn respects_bounds_and_validates() {
        let mut r = rng(7);
        for _ in 0..10_000 {
            let d = random_diagram_with(&mut r, 8, 3);
            assert!(d.crossing_count() <= 8 && (1..=3).contains(&d.component_count()));
            assert!(vlink_core::gauss::validate(d.components()).is_empty());
        }
    }
}
