//! Probability schedules and the ergodic channel family, with Weyl and
//! mutually-unbiased-basis operators used to cross-check operator-sum forms.

mod ergodic;
mod schedule;
mod weyl;

pub use ergodic::{
    apply_ergodic_kraus_qubit, apply_ergodic_mub, ErgodicChannel, FrameRotation, DIAGONAL_TOL,
};
pub use schedule::{ProbabilitySchedule, SINGULAR_P};
pub use weyl::{is_prime, mub_bases, mub_unitaries, weyl_operator};
