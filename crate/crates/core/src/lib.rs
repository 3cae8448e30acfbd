//! Selection of `k` representative columns of a wide matrix by greedy volume
//! maximization with column exchange.
//!
//! The usual pipeline is an initializer from [`init`] followed by one of the
//! exchange loops in [`exchange`]:
//!
//! ```
//! use subsel_core::{dominant_split, gaussian_matrix, init_greedy, pinv_product_norms, ExchangeConfig};
//!
//! let x = gaussian_matrix(5, 40, 7).unwrap();
//! let start = init_greedy(&x, 8).unwrap();
//! let out = dominant_split(&x, &start, &ExchangeConfig::default()).unwrap();
//! let norms = pinv_product_norms(&x, &out.selection).unwrap();
//! assert!(norms.frob_sq >= 5.0 - 1e-9);
//! ```

pub mod error;
pub mod exchange;
pub mod factorize;
pub mod generate;
pub mod init;
mod linalg;
pub mod matrix;
pub mod metrics;
pub mod oracle;
pub mod ssel;
pub mod state;
pub mod subset;

pub use error::{Result, SelectError};
pub use exchange::{dominant_full, dominant_split, ExchangeConfig, ExchangeOutcome, SwapRecord, Termination};
pub use factorize::{cpqr_pivots, lq_orthonormalize, CpqrResult};
pub use generate::{gaussian_matrix, graph_singular_matrix, GraphSpec, WeightedGraph};
pub use init::{advanced_init, greedy_append, greedy_remove, init_cpqr, init_greedy, InitKind, InitStrategy};
pub use matrix::Matrix;
pub use metrics::{bound_report, evaluate_bounds, log_volume, pinv_product_norms, BoundReport, PinvNorms, TheoreticalBounds};
pub use state::ExchangeState;
pub use subset::{subset_complement, IndexSubset};
