//! Reference triangulations compiled into the library.
//!
//! `APPENDIX_A` is a closed manifold presented as the (1, 0) filling of a
//! one-cusped triangulation; `APPENDIX_B` is the complement of a knot in it,
//! presented with six filled cusps and one complete cusp.

use crate::tri::{parse_triangulation, ParseError, Triangulation};

pub const APPENDIX_A: &str = include_str!("../fixtures/appendix_a.tri");
pub const APPENDIX_B: &str = include_str!("../fixtures/appendix_b.tri");

/// Volumes recorded in the fixture headers.
pub const APPENDIX_A_VOLUME: f64 = 10.01776364;
pub const APPENDIX_B_VOLUME: f64 = 17.66121174;

pub fn by_name(name: &str) -> Option<&'static str> {
    match name {
        "A" | "a" => Some(APPENDIX_A),
        "B" | "b" => Some(APPENDIX_B),
        _ => None,
    }
}

pub fn appendix_a() -> Result<Triangulation, ParseError> {
    parse_triangulation(APPENDIX_A)
}

pub fn appendix_b() -> Result<Triangulation, ParseError> {
    parse_triangulation(APPENDIX_B)
}
