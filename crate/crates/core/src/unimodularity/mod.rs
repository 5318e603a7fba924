//! Statistical checks of the mass transport principle and of declared root laws.

mod mtp;
mod root_law;
mod transport;

pub use mtp::{mtp_battery, mtp_test, MtpReport};
pub use root_law::{root_law_check, RootLawReport, RootStatistic};
pub use transport::{
    layers, standard_battery, transport_by_name, BallWeighted, BoundaryCounter, DistanceK, EdgeIndicator,
    ParentIndicator, PiecePairs, TransportFunction, PIECE_CAP,
};
