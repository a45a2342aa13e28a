//! Special functions, quadrature, and the contour-integral checks.

mod contour;
mod quad;
mod special;

pub use contour::{
    circle_identity_report, log_f_on_line, log_zeta_along_path, perron_truncated, BranchTracker,
    CircleIdentityReport, ContourSpec, IdentityCheck, LogOnLine, PerronReport, CIRCLE_MAX_W,
    DEFAULT_CIRCLE_CONSTANT, PERRON_MAX_X,
};
pub use quad::{gauss_legendre, AdaptiveSimpson, GaussLegendre, Quadrature};
pub use special::{
    digamma, dirichlet_l1, dirichlet_l_em, ein, exp_integral_e1, gamma_euler, hurwitz_em,
    zeta_em, EULER_GAMMA, L1_MAX_DISCRIMINANT, ZETA_MAX_MODULUS,
};
