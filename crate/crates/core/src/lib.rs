//! Quantum computation in the single-excitation subspace (SES) of a fully,
//! tunably coupled qubit array.
//!
//! * [`densecx`]: Hermitian eigendecomposition and exact propagators.
//! * [`hwmodel`]: the hardware Hamiltonian and its closed-form SES matrix.
//! * [`fullspace`]: brute-force `2^n` evolution, SES projection and leakage.
//! * [`grover`]: single-pulse Grover operators and the full search.
//! * [`schedule`]: piecewise-constant control schedules and their documents.
//! * [`resources`]: SES versus gate-model resource comparison.
//! * [`cli`]: the `ses` command-line front end.
//!
//! Energies are angular frequencies in rad/ns and times are in ns throughout;
//! see [`units`] for conversions from MHz/GHz.

pub mod cli;
pub mod densecx;
pub mod fullspace;
pub mod grover;
pub mod hwmodel;
pub mod resources;
pub mod schedule;
pub mod units;
