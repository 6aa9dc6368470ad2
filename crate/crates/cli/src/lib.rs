//! Command-line harness: group files, corpora, verification suites and
//! reports.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod files;
pub mod render;
pub mod report;
pub mod suites;
