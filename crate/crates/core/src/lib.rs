//! Exact optimal experimental designs for linear regression on compact Lie
//! groups and homogeneous spaces.
//!
//! The regression functions are Laplace-Beltrami eigenfunctions on the circle,
//! tori, `S^2`, `S^3 = SU(2)`, `SO(3)` and `S^2 x SO(3)`. Equal-weight point
//! sets that integrate enough eigenfunctions exactly (lambda-designs) have the
//! Haar information matrix and are therefore optimal for every Kiefer `Phi_p`
//! criterion and every `Phi_{E_s}` criterion.

pub mod criteria;
pub mod designs;
pub mod error;
pub mod geometry;
pub mod harmonics;
pub mod linalg;
pub mod rounding;
pub mod specialfn;

pub use criteria::{
    caratheodory_bounds, equivalence_certificate, es_certificate, information_matrix,
    phi_es, phi_p, required_strength, s3_design_lower_bound, verify_lambda, CertificateReport,
    Criterion, Efficiency, LambdaReport, SelectionSet, StrengthMode, StrengthRequirement,
};
pub use designs::{Design, GridConvention, IntervalDesign};
pub use error::{Error, Result};
pub use geometry::{Euler, Manifold, Point};
pub use harmonics::ModelSpec;
pub use linalg::CMatrix;
pub use rounding::{efficient_round, Apportionment};
