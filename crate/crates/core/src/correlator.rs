use std::sync::Arc;

use crate::memo::MemoStore;
use crate::rational::{int, Rational};

/// Default cap on the correlation order handled by [`Correlator`].
pub const DEFAULT_MAX_ORDER: usize = 8;

/// Exact evaluator for balanced correlations of every order.
///
/// All values are derived from the renormalisation recursions, anchored at
/// the single seed `η(0) = η(0,…,0)` (1 for the Thue–Morse system). The
/// pair and n-point evaluators live in [`crate::pair`] and
/// [`crate::npoint`] and share one [`MemoStore`].
#[derive(Clone, Debug)]
pub struct Correlator {
    pub(crate) memo: Arc<MemoStore>,
    pub(crate) seed: Rational,
    pub(crate) max_order: usize,
}

impl Default for Correlator {
    fn default() -> Self {
        Self::new()
    }
}

impl Correlator {
    pub fn new() -> Self {
        Self::with_memo(Arc::new(MemoStore::new()))
    }

    pub fn with_memo(memo: Arc<MemoStore>) -> Self {
        Correlator {
            memo,
            seed: int(1),
            max_order: DEFAULT_MAX_ORDER,
        }
    }

    /// An evaluator whose even-order seed `η(0,…,0)` is `seed` instead of 1.
    ///
    /// Values from such an evaluator are not Thue–Morse correlations, so it
    /// always gets a private memo.
    pub fn with_seed(seed: Rational) -> Self {
        Correlator {
            memo: Arc::new(MemoStore::new()),
            seed,
            max_order: DEFAULT_MAX_ORDER,
        }
    }

    pub fn max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn memo(&self) -> &Arc<MemoStore> {
        &self.memo
    }

    pub fn seed(&self) -> &Rational {
        &self.seed
    }

    /// Seed for order `n`: the closed corner subsystem forces `η(0,…,0) = 0`
    /// for odd `n`.
    pub(crate) fn seed_for_order(&self, n: usize) -> Rational {
        if n.is_multiple_of(2) {
            self.seed.clone()
        } else {
            int(0)
        }
    }
}
