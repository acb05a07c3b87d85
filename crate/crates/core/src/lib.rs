//! Fox colorings, region colorings and coboundary obstructions for oriented
//! link diagrams, with certified lower bounds on type-III Reidemeister moves.

pub mod cochain;
pub mod coloring;
pub mod diagram;
pub mod invariant;
pub mod reference;
pub mod reproduce;
