//! Where generation gets its choices from: a seeded RNG for tree-based GP,
//! or a codon sequence for grammatical evolution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every non-deterministic step of tree generation goes through this trait.
pub trait DecisionSource {
    /// An index in `0..n`. `weights`, when given, has length `n`; sources may
    /// ignore it. `choose(1, _)` must return 0.
    fn choose(&mut self, n: usize, weights: Option<&[f64]>) -> usize;

    /// A real in `[0, 1)`.
    fn random_real(&mut self) -> f64;
}

const CODON_SPAN: f64 = 4_294_967_296.0; // 2^32

/// Seeded, platform-independent random decisions.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn seeded(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// True with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        p >= 1.0 || (p > 0.0 && self.rng.gen::<f64>() < p)
    }

    /// A fresh codon in `[0, 2^32)`.
    pub fn codon(&mut self) -> u64 {
        u64::from(self.rng.gen::<u32>())
    }
}

impl DecisionSource for RandomSource {
    fn choose(&mut self, n: usize, weights: Option<&[f64]>) -> usize {
        assert!(n > 0, "choose from an empty set");
        if n == 1 {
            return 0;
        }
        match weights {
            None => self.rng.gen_range(0..n),
            Some(weights) => {
                debug_assert_eq!(weights.len(), n);
                let total: f64 = weights.iter().sum();
                let mut target = self.rng.gen::<f64>() * total;
                for (i, w) in weights.iter().enumerate() {
                    if target < *w {
                        return i;
                    }
                    target -= w;
                }
                weights.iter().rposition(|w| *w > 0.0).unwrap_or(n - 1)
            }
        }
    }

    fn random_real(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }
}

/// Decisions read from a genome with the modulo rule.
///
/// Weights are ignored. When the codons run out the reader wraps back to the
/// start up to `max_wraps` times; after that it keeps returning zeros and
/// reports [`CodonSource::exhausted`], which the caller treats as a failed
/// mapping.
#[derive(Debug, Clone)]
pub struct CodonSource<'a> {
    codons: &'a [u64],
    position: usize,
    wraps: usize,
    max_wraps: usize,
    used: usize,
    exhausted: bool,
}

impl<'a> CodonSource<'a> {
    pub fn new(codons: &'a [u64], max_wraps: usize) -> Self {
        CodonSource {
            codons,
            position: 0,
            wraps: 0,
            max_wraps,
            used: 0,
            exhausted: codons.is_empty(),
        }
    }

    pub fn next_codon(&mut self) -> u64 {
        if self.exhausted {
            return 0;
        }
        if self.position == self.codons.len() {
            if self.wraps == self.max_wraps {
                self.exhausted = true;
                return 0;
            }
            self.wraps += 1;
            self.position = 0;
        }
        let codon = self.codons[self.position];
        self.position += 1;
        self.used += 1;
        codon
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn wraps(&self) -> usize {
        self.wraps
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }
}

impl DecisionSource for CodonSource<'_> {
    fn choose(&mut self, n: usize, _weights: Option<&[f64]>) -> usize {
        assert!(n > 0, "choose from an empty set");
        if n == 1 {
            return 0;
        }
        (self.next_codon() % n as u64) as usize
    }

    fn random_real(&mut self) -> f64 {
        (self.next_codon() % (1u64 << 32)) as f64 / CODON_SPAN
    }
}

/// Replays a fixed list of choices; handy in tests.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    choices: Vec<usize>,
    reals: Vec<f64>,
    next_choice: usize,
    next_real: usize,
}

impl ScriptedSource {
    pub fn new(choices: Vec<usize>, reals: Vec<f64>) -> Self {
        ScriptedSource {
            choices,
            reals,
            next_choice: 0,
            next_real: 0,
        }
    }
}

impl DecisionSource for ScriptedSource {
    fn choose(&mut self, n: usize, _weights: Option<&[f64]>) -> usize {
        if n == 1 {
            return 0;
        }
        let c = self.choices.get(self.next_choice).copied().unwrap_or(0);
        self.next_choice += 1;
        c % n
    }

    fn random_real(&mut self) -> f64 {
        let r = self.reals.get(self.next_real).copied().unwrap_or(0.0);
        self.next_real += 1;
        r
    }
}
