//! Kinetic Voronoi diagrams under convex polygonal distance functions.

pub mod rational;
pub mod realroots;
pub mod polygon;
pub mod motion;
pub mod placements;
pub mod frame;
pub mod topology;
pub mod static_oracle;
pub mod diagram;
pub mod engine;

/// The guide in `book/`, compiled so that its examples run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/polygon.md")]
    pub struct Polygon;
    #[doc = include_str!("../../../book/src/bisectors.md")]
    pub struct Bisectors;
    #[doc = include_str!("../../../book/src/time.md")]
    pub struct Time;
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub struct Oracle;
    #[doc = include_str!("../../../book/src/engine.md")]
    pub struct Engine;
    #[doc = include_str!("../../../book/src/singular.md")]
    pub struct Singular;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
}
