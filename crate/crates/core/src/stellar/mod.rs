//! Stellar subdivisions and welds, collapses, ball certificates and starrings.

mod collapse;
mod commute;
mod manifold;
mod moves;
mod starring;
mod upgrade;

pub use collapse::{
    elementary_collapse_search, guided_collapse, verify_collapse, CollapseWitness, DEFAULT_COLLAPSE_BUDGET,
};
pub use commute::{commute_subdivision, commute_subdivision_avoiding};
pub use manifold::{certify_ball, manifold_boundary, BallCertificate, BallStatus, BallWitness};
pub use moves::{
    apply_move, classify_in, classify_move, weld_factorization, Applied, MoveClass, MoveKind, MoveSequence, StellarMove,
};
pub use starring::{is_cone_over, star_ball, SearchBudget};
pub use upgrade::{upgrade_starring, upgrade_starring_traced};
