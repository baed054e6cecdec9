//! Problem-file front end for `farkas-core`.

pub mod commands;
pub mod problem;
pub mod report;
pub mod selftest;
