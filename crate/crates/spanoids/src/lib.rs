//! Abstract spanning structures over a finite ground set.
//!
//! The central type is [`Spanoid`]: a ground set together with inference
//! rules `(S, i)` meaning "the set S spans the element i". Everything else
//! builds on its closure operator: rank search, closed-set families,
//! set-system representations, exact LP relaxations of rank, consistent
//! codes, product constructions, and sampling experiments for locally
//! correctable spanning structures.
//!
//! Elements are 0-based everywhere in this API. The text formats and the
//! command-line front end are 1-based; conversion happens at the IO
//! boundary and nowhere else.

pub mod code;
pub mod cover;
pub mod entropy;
pub mod error;
pub mod family;
pub mod graph;
pub mod io;
pub mod lcs;
pub mod lp;
pub mod product;
pub mod rank;
pub mod represent;
pub mod repro;
pub mod spanoid;
pub mod spread;
pub mod subset;
pub mod transversal;

pub use error::{Error, Result};
pub use family::{frankl_max_frequency, SetFamily, FAMILY_GROUND_MAX};
pub use spanoid::{Rule, Spanoid, ENUM_BOUND_DEFAULT, ENUM_BOUND_MAX};
pub use subset::Subset;
