//! Analysis toolkit for a triple-symmetric Bricard reconfigurable palm.
//!
//! * [`topo`]: mobility counting, basic-link compositions, contracted graphs
//!   and isomorphism classification.
//! * [`palm_kinematics`]: closed-loop condition, angle/length
//!   parameterization, forward and inverse kinematics.
//! * [`screw`]: joint screw system, transmission wrench and transmission
//!   indices.
//! * [`performance`]: Jacobian, stiffness transmission and workspace sweeps.
//! * [`cli`]: the `bricard-kit` command-line front end.

pub mod cli;
pub mod palm_kinematics;
pub mod performance;
mod roots;
pub mod screw;
pub mod topo;
