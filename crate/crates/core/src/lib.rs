//! Exact lattice-point geometry, affine semigroups and stratifications, with
//! solvers for lattice games and their misère quotients.

pub mod arith;
pub mod arrangement;
pub mod error;
pub mod fibers;
pub mod games;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod quotient;
pub mod semigroup;
pub mod strata;

pub use arith::{IntVec, Rat};
pub use error::{Error, Result};
pub use fibers::{
    fiber_stratify, game_stratify, periodicity_profile, semigroup_fiber_stratify, FiniteCommMonoid,
    GameStratification, MonoidMorphism, PeriodicityProfile,
};
pub use games::{
    check_defining_equation, solve_p_positions, validate_ruleset, EquationVerdict, GameBoard, LatticeGame,
    PositionSet, RuleSet,
};
pub use geometry::{Halfspace, Polyhedron, Relation};
pub use lattice::{hilbert_basis, module_generators, Coset, HilbertBasis, Lattice};
pub use quotient::{
    build_quotient, indistinguishable, monoid_structure, purity_check, MisereQuotient, QuotientPolicy,
};
pub use semigroup::{saturation, saturation_with, AffineSemigroup, ConductorSearch, Piece, SaturationData};
pub use strata::{
    certify_disjoint, convert, disjointify, map_image, union, verify, AffineStratification, Form, Stratum,
    VerifyReport, Window,
};
