//! Colored Motzkin walks and their combinatorics.

mod ensemble;
mod moves;
mod partitions;
mod step;
mod walk;

pub use ensemble::{count, enumerate, enumerate_with_cap, WalkEnsemble, DEFAULT_MAX_WALKS};
pub use moves::{LocalMove, MoveEdge, MoveGraph};
pub use partitions::{hardy_ramanujan, partition_count, PartitionTable};
pub use step::{format_steps, parse_steps, Step};
pub use walk::Walk;
