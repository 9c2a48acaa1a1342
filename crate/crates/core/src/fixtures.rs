//! Small built-in games used by tests, examples and the CLI.

use crate::arena::{parse_arena, ReachGame};

/// The seven-vertex example arena with target `t` and initial vertex `v`.
pub const FIG1: &str = include_str!("../tests/fixtures/fig1.pga");

pub fn fig1() -> ReachGame {
    parse_arena(FIG1).expect("built-in fixture parses")
}
