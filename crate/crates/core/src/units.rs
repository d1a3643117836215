//! Frequency unit conversions.
//!
//! Internally every energy is an angular frequency in rad/ns and every time is
//! in ns. Wire formats and the CLI quote ordinary frequencies `f = ω/2π` in MHz
//! or GHz; conversion happens only here.

use std::f64::consts::TAU;

pub fn mhz_to_rad_per_ns(f_mhz: f64) -> f64 {
    TAU * f_mhz * 1e-3
}

pub fn rad_per_ns_to_mhz(omega: f64) -> f64 {
    omega / TAU * 1e3
}

pub fn ghz_to_rad_per_ns(f_ghz: f64) -> f64 {
    TAU * f_ghz
}

pub fn rad_per_ns_to_ghz(omega: f64) -> f64 {
    omega / TAU
}

/// Default common qubit frequency used when none is given: 5 GHz.
pub const DEFAULT_EPSILON_BASE_GHZ: f64 = 5.0;
