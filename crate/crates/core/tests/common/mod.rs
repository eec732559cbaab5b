//! Checks shared by the test targets and the acceptance runner.
#![allow(dead_code)]

pub mod adjoint;
pub mod oracles;
pub mod properties;
