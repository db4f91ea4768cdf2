pub mod chambers;
pub mod combinatorics;
pub mod error;
pub mod parallel;
pub mod projection;
pub mod simulation;
pub mod output;
pub mod suites;
