//! Exact potential theory on the Berkovich projective line over `Q_p`.
//!
//! Points, kernels and measures use arbitrary-precision rationals, and every
//! logarithm is taken to base `p`. Start with [`BerkPoint`] and
//! [`PrimeContext`] for kernels, [`equilibrium::equilibrium`] for capacities,
//! and [`GreenFunction`] for Green functions. The [`plane`] module is a
//! floating-point companion for compact sets in the complex plane.
//!
//! ```
//! use berkpot::equilibrium::{equilibrium, Ball};
//! use berkpot::rational::rat;
//! use berkpot::{BerkPoint, CompactSet, LogScalar, PrimeContext};
//!
//! let ctx = PrimeContext::new(2)?;
//! let e = CompactSet::new(
//!     BerkPoint::Infinity,
//!     vec![Ball::new("I:0/1".parse()?, rat(1, 1)), Ball::new("I:1/1".parse()?, rat(1, 1))],
//!     vec![],
//! );
//! assert_eq!(equilibrium(&e, &ctx)?.robin, LogScalar::Finite(rat(1, 2)));
//! # Ok::<(), berkpot::Error>(())
//! ```

pub mod equilibrium;
pub mod error;
pub mod green;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod measure;
pub mod plane;
pub mod point;
pub mod random;
pub mod rational;
pub mod tree;

pub use equilibrium::{Ball, CompactSet, EquilibriumResult};
pub use error::{Error, Result};
pub use green::{GreenFunction, LCandidate};
pub use measure::DiscreteMeasure;
pub use point::{BerkPoint, PrimeContext};
pub use rational::{LogScalar, Rational};

/// Guide chapters, compiled so their examples run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/points.md")]
    pub mod points {}
    #[doc = include_str!("../../../book/src/trees.md")]
    pub mod trees {}
    #[doc = include_str!("../../../book/src/capacity.md")]
    pub mod capacity {}
    #[doc = include_str!("../../../book/src/green.md")]
    pub mod green {}
    #[doc = include_str!("../../../book/src/extremal.md")]
    pub mod extremal {}
    #[doc = include_str!("../../../book/src/plane.md")]
    pub mod plane {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
