//! Lattice-surgery simulation of one SELECT application.

pub mod engine;
pub mod floorplan;
pub mod program;

pub use engine::{simulate, SimOptions, SimResult, StallReason, TraceEvent};
pub use floorplan::{build_floor_plan, CellRole, FloorPlan, Registers};
pub use program::{synthesize_select, Op, Program};
