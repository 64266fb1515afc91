//! Integer points on circles x^2 + y^2 = n and the exponential sums
//! S(n, k) = sum exp(i k theta_u) over those points.
//!
//! Angles are atan2(y, x). Every quantity exported here (|S|, angular
//! discrepancy mod pi/2, angle differences) is unchanged by a fixed rotation
//! or reflection of the angle origin.

mod expsum;
mod points;
mod stats;

pub use expsum::{
    exp_sum_closed, exp_sum_direct, exp_sum_direct_with, AngleConvention, ExpSumValue,
};
pub use points::{circle_points, lattice_angle, r2, CirclePointSet};
pub use stats::{
    angular_discrepancy, avg_abs_s, landau_count, mertens_check, prime_angle_sum, AngleStatistics,
    AVG_S_MAX, EULER_GAMMA,
};

pub(crate) use stats::{abs_s_sieved, PrimeAngles};
