//! Discrete-time energy flows between PV, load and storage, plus the
//! series generators and CSV ingestion that feed them.
//!
//! Energy integrates with the left-rectangle rule (`sample * step`).

mod csv_io;
mod profiles;
mod series;
mod split;

pub use csv_io::{
    parse_series_csv, parse_timestamp, read_series_csv, write_series_csv, GapPolicy,
    TIMESTAMP_FORMAT,
};
pub use profiles::{
    clear_sky_profile, clear_sky_profile_on, pv_power_from_irradiance, synthetic_load_profile,
    SyntheticYear,
};
pub use series::{reference_day, PowerTimeSeries, SeriesKind, DEFAULT_STEP_MINUTES};
pub use split::{mean_daily, split_energy, split_energy_daily, DispatchResult, StorageLimits};
