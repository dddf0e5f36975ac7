//! Dynamic sum-of-radii clustering in metrics of bounded doubling dimension.
//!
//! Facilities with opening costs live in a metric space; clients arrive and
//! depart. The goal is a set of balls `B(j, R_j)` covering every live client
//! that minimizes `sum(f_j + R_j)`.
//!
//! Preprocessing ([`preprocess`]) builds a tree of `(facility, logradius)`
//! pairs whose areas ([`areas`]) form a laminar family. Restricted to those
//! areas, the optimum is a constant factor (in the doubling dimension) from
//! the true optimum, and [`dynamic::DynamicClustering`] maintains it exactly
//! with work proportional to the tree height per update. [`oracle`] holds
//! exhaustive solvers used to check all of this on small inputs.
//!
//! ```
//! use radii::metric::{load_instance, Point};
//! use radii::preprocess::build;
//! use radii::dynamic::DynamicClustering;
//!
//! let inst = load_instance("metric euclidean 1 W 30\nfacility 0 0 cost 1\nfacility 30 30 cost 1\n")?;
//! let (_, tree) = build(&inst)?;
//! let mut dc = DynamicClustering::new(&tree, &inst);
//! dc.insert("a", Point::Coords(vec![2.0]))?;
//! dc.insert("b", Point::Coords(vec![29.0]))?;
//! assert_eq!(dc.cost(), 16);
//! # Ok::<(), radii::Error>(())
//! ```

pub mod areas;
pub mod cli;
pub mod dynamic;
pub mod error;
pub mod events;
pub mod gen;
pub mod metric;
pub mod oracle;
pub mod preprocess;

pub use error::{Error, Result};
