//! The two worked decision problems: portfolio choice with derivative
//! supplements and self-protection with background risk.

pub mod portfolio;
pub mod protection;
