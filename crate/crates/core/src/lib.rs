//! Ordered sorting of cluttered disc objects.
//!
//! A clutter of labeled discs must be delivered onto per-group depot stacks
//! in priority order. Occluded objects may force temporary buffer
//! relocations (the nonmonotone case). This crate provides:
//!
//! - [`geometry`]: disc primitives and angular-interval occlusion algebra;
//! - [`accessibility`]: which objects admit a collision-free approach;
//! - [`relocation`]: minimum relocation sets for occluded targets;
//! - [`planner`]: the sorting-sequence search under four frontier
//!   strategies (BFS, DFS, best-first, A*);
//! - [`executor`]: greedy task allocation and a discrete-event multi-robot
//!   execution simulation;
//! - [`instance`]: seeded random instance generation and the file format;
//! - [`metrics`]: benchmark harness and the exhaustive optimality oracle.

pub mod accessibility;
pub mod executor;
pub mod geometry;
pub mod instance;
pub mod metrics;
pub mod planner;
pub mod relocation;
pub mod scene;

pub use accessibility::{free_directions, get_accessible_objects, Catalog, Configuration};
pub use executor::{assign_next, simulate, ExecutionTrace, TimingParams};
pub use geometry::{blocked_interval, free_gaps, union_covers_circle, AngularInterval, Disc, Point};
pub use instance::{generate_instance, parse_instance, serialize_instance, GenParams, Instance};
pub use metrics::{
    brute_force_min_sequence, is_nonmonotone, repetitiveness, run_benchmark, BenchConfig, BenchRow,
};
pub use planner::{
    expand, get_next_objs, penalty, replay_validate, sort_objects, Destination, Outcome,
    PlanResult, SearchNode, Step, Strategy,
};
pub use relocation::{choose_buffer_slot, reloc_objs, RelocationPlan};
pub use scene::{ObjectId, Rect, RobotParams, SceneObject};
