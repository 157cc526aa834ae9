//! Generic rank of interpolation matrices by random specialization.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{random_prime, Integers, PrimeField};
use super::interpolation::build_matrix;

/// Sampling parameters; `seed` fixes every random choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankConfig {
    pub prime_bits: u32,
    pub trials: u32,
    pub seed: u64,
    /// Rank over `Q` at random integer points instead of over prime fields.
    pub exact: bool,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig { prime_bits: 61, trials: 5, seed: 0, exact: false }
    }
}

impl RankConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        RankConfig { seed, ..self }
    }
}

/// Coordinates of exact-mode points are drawn from `[-EXACT_RANGE, EXACT_RANGE] \ {0}`.
pub const EXACT_RANGE: i64 = 1000;

/// One specialization: the field (`None` for `Q`), its seed and the observed rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialEvidence {
    pub prime: Option<u64>,
    pub seed: u64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOutcome {
    pub rank: usize,
    pub samples: Vec<TrialEvidence>,
    /// Total degree bound of a maximal minor in the point coordinates.
    pub degree_bound: u64,
    /// Upper bound on the chance that a single trial underestimates the rank.
    pub per_trial_failure_bound: f64,
}

/// SplitMix64 step; derives independent child seeds from a parent seed and an index.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Row-echelon rank over `Z/pZ`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, field: &PrimeField) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][c]);
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| field.mul_mod(x, inv)).collect();
        for row in rows[rank + 1..].iter_mut() {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = field.sub(*x, field.mul_mod(factor, y));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Fraction-free (Bareiss) rank over `Z`, equal to the rank over `Q`.
pub fn rank_integer(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            for j in c + 1..ncols {
                row[j] = (&row[j] * &pivot_row[c] - &row[c] * &pivot_row[j]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Maximum rank over `cfg.trials` random specializations of the point coordinates.
pub fn generic_rank(n: usize, columns: &[Vec<i64>], multiplicities: &[u32], cfg: &RankConfig) -> RankOutcome {
    let max_degree = columns.iter().map(|m| m.iter().sum::<i64>()).max().unwrap_or(0).max(0) as u64;
    let nrows: usize = multiplicities.iter().map(|&mu| super::interpolation::derivative_orders(n, mu).len()).sum();
    if columns.is_empty() || nrows == 0 {
        return RankOutcome { rank: 0, samples: Vec::new(), degree_bound: 0, per_trial_failure_bound: 0.0 };
    }
    let trials = cfg.trials.max(1);
    let mut samples = Vec::with_capacity(trials as usize);
    let mut smallest_field = u64::MAX;
    for t in 0..trials {
        let seed = derive_seed(cfg.seed, t as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (prime, rank) = if cfg.exact {
            let points: Vec<Vec<BigInt>> = multiplicities
                .iter()
                .map(|_| (0..n).map(|_| BigInt::from(nonzero_small(&mut rng))).collect())
                .collect();
            smallest_field = smallest_field.min(2 * EXACT_RANGE as u64);
            (None, rank_integer(build_matrix(&Integers, columns, multiplicities, &points)))
        } else {
            let p = random_prime(cfg.prime_bits, &mut rng);
            let field = PrimeField::new(p).expect("sampled modulus is prime");
            let points: Vec<Vec<u64>> =
                multiplicities.iter().map(|_| (0..n).map(|_| field.random_nonzero(&mut rng)).collect()).collect();
            smallest_field = smallest_field.min(p - 1);
            (Some(p), rank_mod_p(build_matrix(&field, columns, multiplicities, &points), &field))
        };
        samples.push(TrialEvidence { prime, seed, rank });
    }
    let rank = samples.iter().map(|s| s.rank).max().unwrap_or(0);
    let degree_bound = rank as u64 * max_degree;
    RankOutcome {
        rank,
        samples,
        degree_bound,
        per_trial_failure_bound: (degree_bound as f64 / smallest_field as f64).min(1.0),
    }
}

fn nonzero_small<R: Rng>(rng: &mut R) -> i64 {
    let x = rng.gen_range(1..=EXACT_RANGE);
    if rng.gen_bool(0.5) { x } else { -x }
}
