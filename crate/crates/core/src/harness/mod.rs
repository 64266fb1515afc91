//! Experiments built on the library: convergence of Q^h to Q with an error
//! budget, figure point sets, the maximal circle point count, and a
//! space-homogeneous relaxation run.

mod converge;
mod figure;
mod maxr;
mod relax;

pub use converge::{
    angular_fourier, converge_study, equid_sums, equid_term, AngularFourier, ConvergeConfig,
    ConvergeRow, ConvergeStudy, ErrorBudget, DEFAULT_M_DIAG,
};
pub use figure::{figure_data, Comparison, FigureData, FigurePoint, FigureQuery, FIGURE_COORD_MAX};
pub use maxr::{max_r_exhaustive, max_r_search, MaxR, MAX_R_BOUND};
pub use relax::{h_functional, relax_simulate, Moments, RelaxState, POSITIVITY_TOL};
