//! Volatility-spillover connectedness for panels of financial time series.
//!
//! The pipeline runs from daily OHLC bars to network summaries:
//!
//! 1. [`ingest`] loads and aligns OHLC panels and turns every bar into a
//!    Garman-Klass variance estimate.
//! 2. [`var`] fits a VAR(p) by least squares and expands it into its
//!    moving-average coefficients.
//! 3. [`fevd`] computes the generalized forecast-error variance
//!    decomposition and its row-normalized form.
//! 4. [`connect`] aggregates the decomposition into from/to/net/total
//!    connectedness and the net-pairwise matrix.
//! 5. [`rolling`] repeats the static analysis over sliding windows and
//!    parameter grids.
//! 6. [`netgraph`] builds spillover networks and ranks nodes with PageRank.
//!
//! Public connectedness measures are in percent; the decomposition layer
//! works in fractions.

pub mod cli;
pub mod config;
pub mod connect;
pub mod error;
pub mod export;
pub mod fevd;
pub mod ingest;
mod eigen;
mod linalg;
pub mod netgraph;
pub mod rolling;
pub mod synthetic;
pub mod var;

pub use error::{Error, Result};

/// Common imports for library users.
pub mod prelude {
    pub use crate::connect::{connectedness, net_pairwise, rank, ConnectednessTable, Measure, NetPairwiseMatrix};
    pub use crate::error::{Error, Result};
    pub use crate::fevd::{gfevd, FevdMatrix};
    pub use crate::ingest::stats::{describe, DescriptiveStats};
    pub use crate::ingest::volatility::{garman_klass, panel_volatility, VolatilityPanel};
    pub use crate::ingest::{load_panel, IngestConfig, LoadReport, OhlcBar, OhlcPanel, SeriesInfo};
    pub use crate::netgraph::{build_network, max_out_subgraph, pagerank, PageRankScores, SpilloverNetwork};
    pub use crate::rolling::{roll, sweep, RollingConfig, RollingResult, SweepGrid, SweepResult};
    pub use crate::var::{fit_var, ma_coefficients, MaCoefficients, VarModel, VarSpec};
}
