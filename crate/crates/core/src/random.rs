//! Seeded random automata for property tests and campaigns.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fsa::{Fsa, FsaBuilder, StateId};
use crate::verify::Specification;

#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub min_states: usize,
    pub max_states: usize,
    pub max_events: usize,
    pub max_unobservable: usize,
    pub symbols: usize,
    /// Probability that a given state has a transition on a given event.
    pub density: f64,
    pub faulty_prob: f64,
    pub controllable_prob: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            min_states: 1,
            max_states: 5,
            max_events: 6,
            max_unobservable: 2,
            symbols: 2,
            density: 0.3,
            faulty_prob: 0.25,
            controllable_prob: 0.5,
        }
    }
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_fsa<R: Rng>(rng: &mut R, p: &RandomParams) -> Fsa {
    let hi = p.max_states.max(1);
    let n = rng.random_range(p.min_states.clamp(1, hi)..=hi);
    let m = rng.random_range(1..=p.max_events.max(1));
    let unobservable = rng.random_range(0..=p.max_unobservable.min(m));
    let mut silent: Vec<bool> = (0..m).map(|i| i < unobservable).collect();
    silent.shuffle(rng);

    let mut b = FsaBuilder::new();
    let states: Vec<StateId> = (0..n)
        .map(|i| b.state(&format!("q{i}")).expect("fresh"))
        .collect();
    let symbols: Vec<String> = (0..p.symbols.max(1))
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    for s in &symbols {
        b.symbol(s).expect("valid");
    }
    let mut events = Vec::new();
    for (i, &quiet) in silent.iter().enumerate() {
        let label = (!quiet).then(|| symbols[rng.random_range(0..symbols.len())].as_str());
        let e = b.event(&format!("t{i}"), label).expect("fresh");
        if rng.random_bool(p.controllable_prob) {
            b.set_controllable(e);
        }
        if rng.random_bool(p.faulty_prob) {
            b.set_faulty(e);
        }
        events.push(e);
    }
    b.initial(states[0]);
    if n > 1 && rng.random_bool(0.3) {
        b.initial(states[rng.random_range(1..n)]);
    }
    for &s in &states {
        for &e in &events {
            while rng.random_bool(p.density) {
                let t = states[rng.random_range(0..n)];
                if b.transition(s, e, t).is_err() {
                    break;
                }
            }
        }
    }
    b.build()
}

/// Each ordered pair of distinct states is included with probability `prob`.
pub fn random_spec<R: Rng>(rng: &mut R, a: &Fsa, prob: f64) -> Specification {
    let pairs: Vec<_> = a
        .states()
        .flat_map(|x| a.states().map(move |y| (x, y)))
        .filter(|(x, y)| x != y)
        .filter(|_| rng.random_bool(prob))
        .collect();
    Specification::new(a, pairs).expect("irreflexive by construction")
}
