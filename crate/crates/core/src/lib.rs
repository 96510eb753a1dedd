//! Exact enumeration, bijections and identity checks for two families of
//! `1 x n` board tilings whose plus classes are counted by the binomial sums
//!
//! ```text
//! S(m,r) = sum_{i=r+1}^{floor(m/2)} C(m,2i) C(i-1,r)
//! T(n,r) = sum_{j=r+1}^{n} C(n,j) C(j-1,r)
//! U(n,r) = sum_{j=r+1}^{n} C(j-1,r) 2^{j-1-r}
//! V(n,r) = sum_{j=1}^{n-r} C(n-1-j,r-1) 2^{n-r-j} (2^j - 1)
//! W(n,r) = 2^{n-r} sum_{k=0}^{floor(r/2)} C(n-2-2k,r-2k) + (-1)^{r+1}
//! ```
//!
//! with `S(m,r) = T(m-1-r,r) = U(m-1-r,r) = V(m-1-r,r) = W(m-1-r,r)` for
//! `0 <= r <= m/2 - 1`.
//!
//! * [`arrangements`]: the domino family `D` and the square family `B`.
//! * [`enumeration`]: brute-force generation and stratified counts.
//! * [`formulas`]: exact evaluation of the sums and related identities.
//! * [`bijections`]: the board, domino/square and conjugation maps.
//! * [`verify`]: cross-checks with structured reports.
//! * [`cli`]: the `lastsq` command-line front end.

pub mod arrangements;
pub mod bijections;
pub mod cli;
pub mod enumeration;
mod error;
pub mod formulas;
pub mod verify;

pub use error::{Error, Result};

/// Arbitrary-precision count.
pub type BigCount = num_bigint::BigUint;
