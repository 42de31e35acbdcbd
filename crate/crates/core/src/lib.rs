//! Exact analysis of planar polynomial vector fields.

pub mod compactify;
pub mod darboux;
pub mod equilibria;
pub mod exactalg;
pub mod integrability;
pub mod modelio;
pub mod portrait;
pub mod report;
