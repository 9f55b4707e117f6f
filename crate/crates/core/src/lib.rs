//! Sturmian Kari-Culik tilings: exact parameter dynamics, the row-by-row
//! construction of tile windows, validation, and return-time bounds.

pub mod numerics;
pub mod torus;
pub mod sturmian;
pub mod tiles;
pub mod construction;
pub mod bounds;
