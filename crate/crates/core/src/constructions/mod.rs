//! Partition grids, threshold ladders, excursion windows, monotone bridges and the
//! window-local expansion of the integral.

mod bridge;
mod events;
mod grid;
mod ladder;
mod split;
mod windows;

pub use bridge::{
    adapted_monotone_step, bridge_error, is_monotone_on, monotone_bridge, AdaptedStep, Bridge, BridgeVariant,
};
pub use events::{event_a, event_gamma, EventLevels};
pub use grid::PartitionGrid;
pub use ladder::{limit_jump_times, LimitJumpTimes, ThresholdLadder, LADDER_NUDGE};
pub use split::{
    decompose_integrand, decompose_integrand_adapted, decompose_integrator, remainder_split, scaling_term_y,
    AdaptedIntegrandSplit, IntegrandSplit, IntegratorSplit, RemainderTerms, SplitOptions, WindowSplit,
};
pub use windows::{corrected_integrand, excursion_windows, Window};
