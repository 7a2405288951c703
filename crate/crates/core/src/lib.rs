//! Ramification of rank-2 Drinfeld F_q[t]-modules.
//!
//! Everything is exact: valuations of division points, Herbrand ψ-functions,
//! the wild inertia group, local and global conductors, the J-height and the
//! Szpiro-type inequality, plus a Newton–Puiseux oracle that recomputes the
//! valuation data from actual roots.

pub mod algebra;
pub mod drinfeld;
pub mod newton;
pub mod valtower;
pub mod herbrand;
pub mod wildgroup;
pub mod conductor;
pub mod oracle;
pub mod cli;
