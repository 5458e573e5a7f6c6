//! Minimum-weight proper colorings for color-counting locally checkable
//! problems on graphs given together with a clique-width expression.
//!
//! A problem is a [`ProblemModel`]: colors, per-vertex color lists and
//! weights, a check that sees only a vertex's color and how many neighbors
//! it has of each color, and optional per-color class-size constraints
//! expressed as unary automata. [`solve`] runs the count-matrix dynamic
//! program over a validated [`CwExpression`]; [`oracle`] is an independent
//! brute-force path used to cross-check it.
//!
//! ```
//! use cwcolor::{build_family, instantiate_builtin, solve, Builtin, Family, WeightValue};
//!
//! let e = build_family(Family::Path, 5, None).unwrap();
//! let (g, _) = e.realize();
//! let m = instantiate_builtin(&Builtin::MaxIndependentSet, &g).unwrap();
//! assert_eq!(solve(&m, &e, false).unwrap().weight, WeightValue::Finite(3));
//! ```

pub mod checkmodel;
pub mod cwexpr;
pub mod dpcore;
pub mod drivers;
pub mod graph;
pub mod oracle;
pub mod sizedfa;
pub mod weights;

pub use checkmodel::{
    evaluate_check, instantiate_builtin, Builtin, Check, DegreeConstraintMatrix, DegreeSet, ModelBuilder, ModelError,
    ProblemModel, Ratio, RomanVariant,
};
pub use cwexpr::{
    build_family, parse_expression, trivial_expression, validate, CwExpression, Family, ValidationReport, ViolationKind,
};
pub use dpcore::{
    reachable_profiles, solve, solve_with, CountMatrix, Solution, SolveError, SolveOptions, Solver, Tracker,
};
pub use drivers::{
    enumerate_compositions, solve_global_k_roman, solve_k_community, solve_max_pds, solve_max_quasi_clique,
    DriverError, DriverSolution,
};
pub use graph::{connected_graphs, parse_graph, Graph, GraphError};
pub use oracle::{brute_force_solve, verify_coloring, OracleError, VerifyFailure};
pub use sizedfa::{dfa_from_finite_set, CountingAutomaton, StatePredicate};
pub use weights::{WeightSet, WeightValue};
