//! Exact arithmetic: integer and finite-field polynomials, truncated
//! unramified rings, Hensel lifting and local Smith normal form.

pub mod ff;
pub mod hensel;
pub mod intpoly;
pub mod matrix;
pub mod ring;
pub mod snf;
pub mod upoly;
pub mod witt;
