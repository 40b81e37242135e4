//! Exact counting of planar point triples `(p, q, r)` with `p·q = α` and
//! `p·r = β`, together with the constructions, incidence statistics and
//! scaling experiments built around that count.
//!
//! ```
//! use dotpairs::{constructions::sharp_set, counting::{incidence_profile, DotPair}, Rational};
//!
//! let set = sharp_set(11, &Rational::one(), &Rational::new(3, 2)).unwrap();
//! let pair = DotPair::new(Rational::one(), Rational::new(3, 2));
//! assert!(incidence_profile(&set, &pair).total_triples >= 25);
//! ```

pub mod adaptability;
pub mod cli;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod experiments;
mod frame;
pub mod geometry;
pub mod incidence;
pub mod io;
pub mod rational;

pub use counting::DotPair;
pub use error::{Error, Result};
pub use geometry::{Point, PointSet};
pub use rational::Rational;
