//! Non-Markovianity diagnostics: the RHP divisibility rate and the BLP
//! information-backflow rate.

mod blp;
mod rhp;

pub use blp::{
    backflow_windows, blp_rate, distance_rate, fibonacci_sphere, integrated_blp, trapezoid,
    BlpResult, DEFAULT_BLP_SAMPLES, HAAR_PAIRS, WINDOW_GRID,
};
pub use rhp::{
    choi_matrix, rhp_at, rhp_closed, rhp_closed_qubit, rhp_rate, RhpResult, DEFAULT_DELTA,
    MAX_DELTA, RHP_DIVERGENCE_P,
};
