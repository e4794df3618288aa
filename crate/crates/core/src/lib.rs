//! Ocean-front detection and tracking on gridded scalar fields.
//!
//! The pipeline turns a field such as sea surface temperature into vector
//! fronts and then links fronts across days:
//!
//! 1. **Gradient**: Sobel components, magnitude and direction ([`gradient`]).
//! 2. **Frontal zone**: percentile double thresholds, then a Bayesian decision
//!    for the undetermined band using local degree of edge (LDE) and block
//!    deviation (BD) statistics ([`bayes`]).
//! 3. **Thinning**: maximum-disk skeleton and discrete skeleton evolution
//!    pruning ([`morphology`]).
//! 4. **Vectorization**: tracing into ordered polylines, merging nearby
//!    fragments, deleting rings, and per-front metrics ([`fronts`]).
//! 5. **Tracking**: length-ratio gate, averaged nearest-point distance and the
//!    distance-width rule ([`tracking`]).
//!
//! [`stats`] aggregates daily metrics, [`synth`] generates fields with known
//! fronts, and [`pipeline`] wires everything together for the CLI.
//!
//! Data-parallel kernels run on rayon when the `parallel` feature is enabled
//! (the default); see [`exec::Exec`].

pub mod bayes;
pub mod config;
pub mod error;
pub mod exec;
pub mod fronts;
pub mod gradient;
pub mod grid;
pub mod io;
pub mod morphology;
pub mod pipeline;
pub mod stats;
pub mod synth;
pub mod tracking;

pub use bayes::{detect_frontal_zone, Thresholds, Zone, ZoneMask};
pub use config::{Config, Method};
pub use error::{Error, Result};
pub use exec::Exec;
pub use fronts::{FrontRecord, FrontSet, Pixel};
pub use gradient::{sobel_gradient, GradientField};
pub use grid::ScalarGrid;
pub use morphology::BitMask;
pub use tracking::TrackSet;
