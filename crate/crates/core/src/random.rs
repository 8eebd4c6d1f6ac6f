//! Seeded random transition systems for property testing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lts::{LabelId, Lts, StateId, Transition};

#[derive(Clone, Debug, PartialEq)]
pub struct RandomLtsParams {
    pub max_states: usize,
    /// Upper bound on distinct labels, counting the silent action when
    /// `tau_probability > 0`.
    pub max_labels: usize,
    pub tau_probability: f64,
    /// Fraction of the `states^2 * labels` possible transitions that bounds
    /// the transition count.
    pub density: f64,
}

impl Default for RandomLtsParams {
    fn default() -> Self {
        RandomLtsParams { max_states: 7, max_labels: 3, tau_probability: 0.0, density: 0.25 }
    }
}

/// Produces a reproducible stream of random LTSs from a seed.
pub struct LtsGenerator {
    params: RandomLtsParams,
    rng: ChaCha8Rng,
}

impl LtsGenerator {
    pub fn new(params: RandomLtsParams, seed: u64) -> Self {
        LtsGenerator { params, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn generate(&mut self) -> Lts {
        let p = &self.params;
        let rng = &mut self.rng;
        let n = rng.gen_range(1..=p.max_states.max(1));
        let with_tau = p.tau_probability > 0.0;
        let visible_max = if with_tau { p.max_labels.saturating_sub(1).max(1) } else { p.max_labels.max(1) };
        let visible = rng.gen_range(1..=visible_max);

        let mut label_names: Vec<String> = (0..visible).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let tau = with_tau.then(|| {
            label_names.push("tau".to_string());
            LabelId(visible)
        });

        let total_labels = label_names.len();
        let cap = ((n * n * total_labels) as f64 * p.density).floor() as usize;
        let m = rng.gen_range(0..=cap);
        let transitions = (0..m)
            .map(|_| {
                let source = StateId(rng.gen_range(0..n));
                let target = StateId(rng.gen_range(0..n));
                let label = match tau {
                    Some(t) if rng.gen_bool(p.tau_probability.clamp(0.0, 1.0)) => t,
                    _ => LabelId(rng.gen_range(0..visible)),
                };
                Transition { source, label, target }
            })
            .collect();

        let state_names = (0..n).map(|i| format!("s{i}")).collect();
        Lts::from_parts(state_names, label_names, tau, Some(StateId(0)), transitions)
            .expect("generated transitions stay in range")
    }
}

impl Iterator for LtsGenerator {
    type Item = Lts;

    fn next(&mut self) -> Option<Lts> {
        Some(self.generate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_bounds() {
        let params = RandomLtsParams { max_states: 6, max_labels: 3, tau_probability: 0.3, density: 0.25 };
        for lts in LtsGenerator::new(params, 7).take(200) {
            assert!((1..=6).contains(&lts.num_states()));
            assert!(lts.num_labels() <= 3);
            assert!(lts.tau().is_some());
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<Lts> = LtsGenerator::new(RandomLtsParams::default(), 1).take(20).collect();
        let b: Vec<Lts> = LtsGenerator::new(RandomLtsParams::default(), 1).take(20).collect();
        assert_eq!(a, b);
    }
}
