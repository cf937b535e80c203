//! Recipes, check suites, reports and plots for the `cohepow` tool.

pub mod config;
pub mod orders;
pub mod plot;
pub mod recipe;
pub mod report;
pub mod suites;

pub use recipe::{run_recipe, Recipe, Report, RunOptions, Status};
