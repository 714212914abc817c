//! Reduced plabic graphs, their face labels, moves and quivers.

pub mod build;
pub mod graph;
pub mod io;
pub mod labels;
pub mod moves;
pub mod quiver;

pub use build::{build_regular, build_regular_star, RegularGraph};
pub use graph::{Color, Edge, Face, FaceId, PlabicGraph, Vertex};
pub use io::{graph_from_json, graph_to_dot, graph_to_json};
pub use labels::{compute_face_labels, trip_permutation, trips, FaceLabeling, Trip};
pub use moves::{
    blow_down, blow_up, canonical_form, quad_move, quad_move_at_label, quad_move_candidates,
    random_blow_up, random_quad_moves, remove_degree_two, search_by_quad_moves, CanonicalForm,
    MoveResult, QuadMoveResult,
};
pub use quiver::{extract_quiver, Quiver};
