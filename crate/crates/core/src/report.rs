//! Report types shared by the verification tasks and the CLI.

use serde::{Deserialize, Serialize};

/// Task verdicts. `exit 0` statuses are `Verified` and `OutsideRegime`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "failed")]
    Failed,
    #[serde(rename = "degenerate")]
    Degenerate,
    #[serde(rename = "outside-regime")]
    OutsideRegime,
}

impl Status {
    pub fn is_acceptable(&self) -> bool {
        matches!(self, Status::Verified | Status::OutsideRegime)
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
            Status::Degenerate => "degenerate",
            Status::OutsideRegime => "outside-regime",
        };
        write!(f, "{s}")
    }
}
