use std::collections::HashSet;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CorpusError;

pub const DEFAULT_N_VALID: usize = 2000;
pub const DEFAULT_N_TEST: usize = 4000;

/// Which corpus positions go to validation and test; everything else is
/// training data. Index lists are sorted, so each part keeps corpus order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub total: usize,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
}

impl SplitPlan {
    pub fn new(total: usize, n_valid: usize, n_test: usize, seed: u64) -> Result<Self, CorpusError> {
        let requested = n_valid + n_test;
        if requested > total {
            return Err(CorpusError::CorpusTooSmall {
                available: total,
                requested,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picked = index::sample(&mut rng, total, requested).into_vec();
        let mut valid = picked[..n_valid].to_vec();
        let mut test = picked[n_valid..].to_vec();
        valid.sort_unstable();
        test.sort_unstable();
        Ok(SplitPlan { total, valid, test })
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        let held = self.valid.len() + self.test.len();
        (self.total - held, self.valid.len(), self.test.len())
    }

    /// Partitions `items` (which must have `total` elements) into
    /// `(train, valid, test)`.
    pub fn apply<T>(&self, items: Vec<T>) -> (Vec<T>, Vec<T>, Vec<T>) {
        assert_eq!(items.len(), self.total, "split plan built for a different corpus size");
        let valid: HashSet<usize> = self.valid.iter().copied().collect();
        let test: HashSet<usize> = self.test.iter().copied().collect();
        let (mut train_v, mut valid_v, mut test_v) = (Vec::new(), Vec::new(), Vec::new());
        for (i, item) in items.into_iter().enumerate() {
            if valid.contains(&i) {
                valid_v.push(item);
            } else if test.contains(&i) {
                test_v.push(item);
            } else {
                train_v.push(item);
            }
        }
        (train_v, valid_v, test_v)
    }
}

pub fn split_corpus<T>(
    items: Vec<T>,
    n_valid: usize,
    n_test: usize,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>, Vec<T>), CorpusError> {
    Ok(SplitPlan::new(items.len(), n_valid, n_test, seed)?.apply(items))
}
