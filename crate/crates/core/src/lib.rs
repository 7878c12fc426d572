//! Exact correlation coefficients of the Thue–Morse system.
//!
//! The balanced `n`-point correlations
//! `η(m₁,…,m_{n-1}) = lim (1/N) Σ_k t_k t_{k+m₁} ⋯ t_{k+m_{n-1}}`
//! satisfy exact renormalisation recursions, so every value is a rational
//! number of the form `m / (3·2^r)` obtained from a single seed.
//!
//! * [`sequence`]: the sequence on the integers and its period-doubling
//!   factor.
//! * [`pair`], [`npoint`]: exact pair and `n`-point values through a shared
//!   [`Correlator`].
//! * [`matrix`]: the matrix form of the recursion and the associated
//!   regular sequence.
//! * [`weighted`]: correlations for arbitrary letter weights.
//! * [`asymptotics`]: means over growing ranges and exponent bounds.
//! * [`oracle`]: brute-force prefix averages used for validation.
//!
//! ```
//! use tmcorr::{Correlator, rational::ratio};
//!
//! let c = Correlator::new();
//! assert_eq!(c.eta_pair(1), ratio(-1, 3));
//! assert_eq!(c.eta(&[1, 2, 3]).unwrap(), ratio(1, 3));
//! ```

pub mod asymptotics;
mod correlator;
pub mod error;
pub mod hiprec;
pub mod lags;
pub mod matrix;
pub mod memo;
pub mod npoint;
pub mod oracle;
pub mod pair;
pub mod rational;
pub mod sequence;
pub mod weighted;

pub use correlator::{Correlator, DEFAULT_MAX_ORDER};
pub use error::{Error, Result};
pub use lags::{canonicalize, CornerTuple, LagTuple};
pub use memo::MemoStore;
pub use rational::Rational;
pub use weighted::WeightPair;
