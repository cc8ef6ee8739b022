//! Exact state-cutting model of two-party redistricting.
//!
//! The state is `[0, 1]`; a district is a finite union of closed intervals;
//! each party holds a piecewise-constant belief about its own support. This
//! crate computes each party's best and worst achievable seat counts, the
//! resulting geometric targets, and constructs a partition that meets both
//! parties' targets simultaneously.

pub mod cutting;
pub mod density;
pub mod error;
pub mod interval;
pub mod oracle;
pub mod protocol;
pub mod targets;

pub use cutting::{austin_cut, iterated_cut, CutResult};
pub use density::{Density, Instance, Party, Piece};
pub use error::{CutError, OracleError, ParseError, PartitionError};
pub use interval::{format_rational, parse_rational, District, Interval, Rational};
pub use oracle::{brute_max_competitive, brute_minmax_seats, AtomInstance};
pub use protocol::{build_gt_partition, ChooserBranch, ProtocolError, ProtocolTrace};
pub use targets::{
    battleground, best_partition, count_seats, geometric_target, is_competitive, target_bounds, verify_gt,
    worst_partition, Battleground, LabeledPartition, TargetBounds, TargetReport,
};
