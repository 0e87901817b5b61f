//! Independent oracles and seeded property suites shared by the core tests
//! and the acceptance target.

#![allow(dead_code)]

pub mod cycles;
pub mod suites;
