pub mod commands;
pub mod formats;
pub mod random;
pub mod suites;
