pub mod automata;
pub mod compile;
pub mod data;
pub mod fond;
pub mod logic;
pub mod executions;
pub mod planner;
pub mod par;
pub mod recognizer;
pub mod bench;
