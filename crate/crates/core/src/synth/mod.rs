mod approx;
mod castle;
mod euler;
mod fundamental;
mod overlap;

pub use crate::homeo::canonical_clopen_homeo;
pub use approx::{
    aperiodize_periodic, periodic_approx_odometer, rank1_in_uniform_neighborhood, truncation, ApproxCertificate, ApproxMode,
    ApproxOutcome, Aperiodization, PeriodicApprox, Rank1, APPROX_DEPTH_CAP, RANK1_SEPARATION_CAP,
};
pub use castle::{rokhlin_castle, Castle, Tower, COVER_DEPTH_CAP};
pub use euler::{odometer_in_weak_neighborhood, periodic_in_weak_neighborhood, OdometerSynthesis, PeriodicSynthesis, Synthesis};
pub use fundamental::{fundamental_domain, is_fundamental, separation};
pub use overlap::{min_circulation, overlap_graph, OverlapGraph};

use crate::error::Result;
use crate::homeo::TowerSystem;
use crate::space::ClopenSet;

/// The odometer whose cycle visits `parts` in order.
pub fn extend_cyclic_partition_to_odometer(parts: Vec<ClopenSet>) -> Result<TowerSystem> {
    TowerSystem::from_cycle(parts)
}

impl<T> Synthesis<T> {
    pub fn witness(&self) -> Option<ClopenSet> {
        match self {
            Synthesis::Witness(f) => Some(f.clone()),
            Synthesis::Success(_) => None,
        }
    }

    pub fn success(self) -> Option<T> {
        match self {
            Synthesis::Success(t) => Some(t),
            Synthesis::Witness(_) => None,
        }
    }
}
