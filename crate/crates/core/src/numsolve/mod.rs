//! Finite-difference eigensolvers used as independent oracles for the
//! closed forms.

pub mod channel;
pub mod grid;
pub mod hd3d;
pub mod lanczos;
pub mod tridiag;

pub use channel::{
    discretize, discretize_scaled, expectation, richardson, solve_channel, solve_extrapolated,
    ChannelError, ChannelKind, ChannelSpec, EigenResult, Extrapolated, HALF_LINE_EXTENT,
    HO_HALF_WIDTH,
};
pub use grid::{Centering, Grid1D, GridError};
pub use hd3d::{
    default_lanczos_options, solve_hd_3d, solve_hd_3d_with, HdError, HdOperator, HdSpectrum,
    MAX_LEVELS as MAX_3D_LEVELS,
};
pub use lanczos::{
    lowest_eigenpairs, LanczosError, LanczosOptions, LanczosOutcome, LinearOperator,
};
pub use tridiag::{eigen_tridiag, EigenError, TridiagEigen, TridiagonalMatrix};
