//! Proof generators for the classic knowledge puzzles.

pub mod muddy;
pub mod wisemen;

pub use muddy::{at_least, exactly, muddy_final, progress, Variant};
pub use wisemen::{wisemen_corollary, wisemen_first, wisemen_second};
