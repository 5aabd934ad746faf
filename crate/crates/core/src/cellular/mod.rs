//! Stellar simplexes, duals and cellular maps, and the constructions that turn
//! hereditarily cellular maps into compositions of elementary selections.

pub mod connection;
pub mod domination;
pub mod duals;
pub mod simplex;

pub use connection::{
    choose_connection_vertex, connection_map, contraction_order, factor_through_connection, family_membership,
    star_contraction, Lift, LiftPolicy, ZigZagStep,
};
pub use domination::{
    cellular_connection, connection_factorization, connection_to_dual_poset, dominate, dominate_via_dual_poset,
    domination_factors, domination_witness, dual_cells, dual_poset_complex, face_system_route, joint_projection,
    lift_along, peel_selections, selection_on, zigzag_along, CellularBudget, CellularConnection,
    ConnectionFactorization, Domination, DominationRoute, DualCell, JointProjection, LiftedPath,
};
pub use duals::{
    chains_of, check_cellular, check_hereditarily_cellular, dual_in_complex, dual_of_map, fiber_of_map, CellularReport,
    FaceReport, HereditaryReport, Verdict,
};
pub use simplex::{index_faces, FacePreservingMap, StellarSimplex};
