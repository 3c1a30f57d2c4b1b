//! Structured check reports, serialized deterministically.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A count comparison that is informative rather than normative.
    Flagged,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub check: String,
    /// The identity or property the check verifies, written out.
    pub identity: String,
    pub params: serde_json::Value,
    pub status: Status,
    pub dims: serde_json::Value,
    pub witness: serde_json::Value,
}

impl Report {
    pub fn new(check: &str, identity: &str, params: serde_json::Value) -> Report {
        Report {
            check: check.into(),
            identity: identity.into(),
            params,
            status: Status::Pass,
            dims: serde_json::Value::Null,
            witness: serde_json::Value::Null,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn fail(&mut self, witness: serde_json::Value) {
        self.status = Status::Fail;
        self.witness = witness;
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "check": self.check,
            "identity": self.identity,
            "params": self.params,
            "status": match self.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Flagged => "flagged",
            },
            "dims": self.dims,
            "witness": self.witness,
        })
    }
}
