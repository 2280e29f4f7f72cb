//! Two-bridge banding calculus, lens-space surgery bookkeeping, and a
//! certified pipeline for hyperbolic structures on triangulated 3-manifolds.

pub mod fixtures;
pub mod gluing;
pub mod interval;
pub mod linalg;
pub mod report;
pub mod surgery;
pub mod sweep;
pub mod symmetric;
pub mod tangle;
pub mod tri;
