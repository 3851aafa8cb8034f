//! Bundled PDDL fixtures.

pub const TIREWORLD_DOMAIN: &str = include_str!("../data/tireworld_domain.pddl");
/// The map used by the running recognition example; start at 11.
pub const TIREWORLD_GRID: &str = include_str!("../data/tireworld_grid.pddl");
/// A map without spares, where any flat tire is a dead end.
pub const TIREWORLD_TRAP: &str = include_str!("../data/tireworld_trap.pddl");
pub const BLOCKS_DOMAIN: &str = include_str!("../data/blocks_domain.pddl");
pub const BLOCKS_PROBLEM: &str = include_str!("../data/blocks_problem.pddl");
pub const LOGISTICS_DOMAIN: &str = include_str!("../data/logistics_domain.pddl");
pub const LOGISTICS_PROBLEM: &str = include_str!("../data/logistics_problem.pddl");

/// Goals of the running recognition example, intended goal at index 1.
pub const GRID_GOALS: [&str; 3] = ["F vAt_51", "F vAt_33", "F vAt_15"];
pub const GRID_OBS: [&str; 2] = ["(move 11 21)", "(changetire 22)"];

/// Directory holding the example recognition bundle.
pub fn grid_bundle_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/grid_bundle")
}
