//! Extended Fano inequality and finite-blocklength converse bounds.
//!
//! Classical Fano bounds the equivocation `H(X|Y)` through a single error
//! probability. For length-`n` words this is loose: it charges every
//! erroneous block for all `q^n - 1` alternatives. The extended bound
//! instead uses the distribution `p = (p_0, ..., p_n)` of the Hamming
//! distance between sent and received words, and for a word at distance
//! `k` counts only the `C(n,k) (q-1)^k` candidates. On the q-ary symmetric
//! channel it is exact.
//!
//! The crate is organised as:
//!
//! - [`numerics`]: log-domain binomials, entropy and relative entropy in bits
//! - [`error_model`]: Hamming-distance distributions, reference laws, `P_b`, `P_s`
//! - [`bounds`]: classical and extended bounds on `H(X|Y)`, `I(X;Y)` and `log2 M`
//! - [`oracle`]: exhaustive enumeration and seeded Monte Carlo for memoryless channels
//! - [`sweep`]: bound sweeps and their CSV format
//! - [`verify`]: oracle-versus-formula checks
//!
//! ```
//! use fano_ext::bounds::{ext_fano_ub, fano_conditional_entropy_ub, qsc_exact_conditional_entropy};
//! use fano_ext::error_model::{block_error_probability, qsc_error_distribution};
//!
//! let (n, q, eps) = (30, 7, 0.001);
//! let d = qsc_error_distribution(n, q, eps).unwrap();
//! let extended = ext_fano_ub(&d, q).unwrap();
//! let classical =
//!     fano_conditional_entropy_ub(block_error_probability(&d), n as f64 * 7f64.log2()).unwrap();
//! let exact = qsc_exact_conditional_entropy(n, q, eps).unwrap();
//!
//! assert!((extended - exact).abs() < 1e-9);
//! assert!(classical > extended);
//! ```

pub mod bounds;
pub mod error;
pub mod error_model;
pub mod numerics;
pub mod oracle;
pub mod parallel;
pub mod sweep;
pub mod verify;

pub use bounds::{BoundReport, ComparisonProtocol};
pub use error::{Error, Result};
pub use error_model::{ErrorDistribution, Qsc, ReferenceDistribution, ReferenceKind};
pub use numerics::ProbVector;
pub use oracle::{DmcSpec, EnumerationBudget};
pub use sweep::SweepTable;
