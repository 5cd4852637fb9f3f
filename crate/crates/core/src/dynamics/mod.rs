//! One-sided shifts of finite type: the transition graph, points,
//! periodic orbits and locally constant functions.

mod cycles;
mod cylinder;
mod graph;
mod point;
mod word;

pub use cycles::{enumerate_cycles, Cycle, DEFAULT_CYCLE_CAP};
pub use cylinder::CylinderFunction;
pub use graph::SftGraph;
pub use point::{Coordinates, ItineraryStream, LassoPoint, Point, PointClass, StreamKind};
pub use word::{
    format_word, is_primitive, least_rotation, parse_word, primitive_root, rotate_left, Symbol,
    Word,
};
