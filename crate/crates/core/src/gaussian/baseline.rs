//! Reference scenarios for the channel with common interference only:
//! cooperating or non-cooperating encoders, with the interference either
//! cancelled by dirty-paper coding or treated as noise.

use core::fmt;
use core::str::FromStr;

use super::{CodingParams, GaussianChannel, ModelError};
use crate::geometry::RateRegion2D;
use crate::sweep::{trace_boundary, Model, Serial, SweepError, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// Cooperating encoders, interference cancelled.
    GmacCsit,
    /// Classical MAC, interference cancelled.
    MacCsit,
    /// Cooperating encoders, interference treated as noise everywhere
    /// (receiver and both feedback links).
    GmacNoCsit,
    /// Classical MAC, interference treated as noise.
    MacNoCsit,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::GmacCsit, Scenario::MacCsit, Scenario::GmacNoCsit, Scenario::MacNoCsit];

    pub fn tag(self) -> &'static str {
        match self {
            Scenario::GmacCsit => "gmac-csit",
            Scenario::MacCsit => "mac-csit",
            Scenario::GmacNoCsit => "gmac-no-csit",
            Scenario::MacNoCsit => "mac-no-csit",
        }
    }

    pub fn cooperative(self) -> bool {
        matches!(self, Scenario::GmacCsit | Scenario::GmacNoCsit)
    }

    /// The equivalent interference-free channel.
    pub fn effective_channel(self, ch: &GaussianChannel) -> GaussianChannel {
        let mut out = ch.remove_common_state();
        if matches!(self, Scenario::GmacNoCsit | Scenario::MacNoCsit) {
            out.n1 += ch.q0;
            out.n2 += ch.q0;
            out.n3 += ch.q0;
        }
        out
    }

    /// Parameters of the classical MAC: no cooperation, all power direct.
    pub fn mac_params(ch: &GaussianChannel) -> CodingParams {
        CodingParams::split([0.0; 2], [ch.p1, ch.p2])
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownScenario;

impl fmt::Display for UnknownScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown scenario; expected gmac-csit, mac-csit, gmac-no-csit or mac-no-csit")
    }
}

impl FromStr for Scenario {
    type Err = UnknownScenario;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL.into_iter().find(|sc| sc.tag() == s).ok_or(UnknownScenario)
    }
}

/// Region of a scenario with the default sweep for the cooperative ones.
pub fn baseline_region(ch: &GaussianChannel, scenario: Scenario) -> Result<RateRegion2D, ModelError> {
    match trace_boundary(ch, &SweepSpec::default(), Model::Baseline(scenario), &Serial) {
        Ok(r) => Ok(r.region),
        Err(SweepError::Model(e)) => Err(e),
        Err(SweepError::Spec(_)) => unreachable!("default sweep spec is valid"),
    }
}
