//! Classification of ℓ-torsion group schemes in isogeny classes of abelian
//! varieties over finite fields, computed from the Weil polynomial.

pub mod algebra;
pub mod error;
pub mod kummer;
pub mod lattice;
pub mod mf;
pub mod polygon;
pub mod surface;
pub mod tables;
pub mod torsion;

pub use algebra::ff::{ff_factor, FFPoly, Fq, FqElem, PrimeField};
pub use algebra::hensel::{hensel_lift, hensel_lift_grouped};
pub use algebra::intpoly::IntPoly;
pub use algebra::matrix::Matrix;
pub use algebra::snf::{smith_normal_form_local, LocalSnf};
pub use algebra::witt::{
    teichmueller_lift, valuation, ExtVal, WittElem, WittMatrix, WittPoly, WittRing,
};
pub use error::{Error, Result};
pub use kummer::{
    enumerate_kummer_zetas, exterior_square_poly, kummer_point_count, kummer_zeta, zeta_abelian,
    BVector, ZetaFactored,
};
pub use lattice::{
    cokernel_group, construct_lift, enumerate_invariant_sublattices, frobenius_matrix,
    nilpotent_jordan_type, LatticeModel,
};
pub use mf::{
    cokernel_module_type, factorization_from_generators, swap_partner, verify_factorization,
    MatrixFactorization,
};
pub use polygon::{
    admissible_partitions, clamp, dominates, newton_polygon, newton_polygon_int, partitions,
    NewtonPolygon, Slope, YoungPolygon,
};
pub use surface::{classify_surface, regularity_test, SurfaceCase, SurfaceCaseId};
pub use tables::{generate_tables, Table, TableRow};
pub use torsion::{
    classify_torsion, dual_polygon_map, dual_weil, local_decomposition, scheme_point_counts,
    validate_weil, DistinguishedScheme, LocalFactor, TorsionClass, WeilPolynomial,
};
