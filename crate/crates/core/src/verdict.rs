use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactlin::Mat;
use crate::repcat::{Rep, RepMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Holds,
    Skipped,
    Unknown,
    Fails,
    Inconsistent,
}

impl Status {
    /// Severity used when aggregating: INCONSISTENT > FAILS > UNKNOWN > (HOLDS, SKIPPED).
    pub fn severity(self) -> u8 {
        match self {
            Status::Holds | Status::Skipped => 0,
            Status::Unknown => 1,
            Status::Fails => 2,
            Status::Inconsistent => 3,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Holds => "HOLDS",
            Status::Skipped => "SKIPPED",
            Status::Unknown => "UNKNOWN",
            Status::Fails => "FAILS",
            Status::Inconsistent => "INCONSISTENT",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedRep {
    pub label: String,
    pub rep: Rep,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedMap {
    pub label: String,
    pub comps: Vec<Mat>,
}

/// Structured counterexample or evidence attached to a verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<NamedRep>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<NamedMap>,
}

impl Witness {
    pub fn new(message: impl Into<String>) -> Self {
        Witness {
            message: message.into(),
            ..Default::default()
        }
    }

    pub fn with_object(mut self, label: impl Into<String>, rep: &Rep) -> Self {
        self.objects.push(NamedRep {
            label: label.into(),
            rep: rep.clone(),
        });
        self
    }

    pub fn with_map(mut self, label: impl Into<String>, map: &RepMap) -> Self {
        self.maps.push(NamedMap {
            label: label.into(),
            comps: map.comps.clone(),
        });
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caps_hit: Vec<String>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            status: Status::Holds,
            witness: None,
            caps_hit: Vec::new(),
        }
    }

    pub fn holds_with(w: Witness) -> Self {
        Verdict {
            status: Status::Holds,
            witness: Some(w),
            caps_hit: Vec::new(),
        }
    }

    pub fn fails(w: Witness) -> Self {
        Verdict {
            status: Status::Fails,
            witness: Some(w),
            caps_hit: Vec::new(),
        }
    }

    pub fn unknown(cap: impl Into<String>) -> Self {
        Verdict {
            status: Status::Unknown,
            witness: None,
            caps_hit: vec![cap.into()],
        }
    }

    pub fn skipped(w: Witness) -> Self {
        Verdict {
            status: Status::Skipped,
            witness: Some(w),
            caps_hit: Vec::new(),
        }
    }

    pub fn inconsistent(w: Witness) -> Self {
        Verdict {
            status: Status::Inconsistent,
            witness: Some(w),
            caps_hit: Vec::new(),
        }
    }

    pub fn from_bool(ok: bool, w: impl FnOnce() -> Witness) -> Self {
        if ok {
            Verdict::holds()
        } else {
            Verdict::fails(w())
        }
    }

    /// Maps a cap error to UNKNOWN; any other error becomes a failure witness.
    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::CapReached(c) => Verdict::unknown(c.clone()),
            other => Verdict::fails(Witness::new(other.to_string())),
        }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    /// Conjunction: first failure wins, otherwise UNKNOWN if any, otherwise HOLDS.
    pub fn all<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        let mut out = Verdict::holds();
        for v in items {
            match v.status {
                Status::Holds | Status::Skipped => {}
                Status::Unknown => {
                    if out.status == Status::Holds {
                        out.status = Status::Unknown;
                    }
                    for c in v.caps_hit {
                        if !out.caps_hit.contains(&c) {
                            out.caps_hit.push(c);
                        }
                    }
                }
                Status::Fails | Status::Inconsistent => {
                    if out.status.severity() < v.status.severity() {
                        out.status = v.status;
                        out.witness = v.witness;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if let Some(w) = &self.witness {
            if !w.message.is_empty() {
                write!(f, " ({})", w.message)?;
            }
        }
        if !self.caps_hit.is_empty() {
            write!(f, " [caps: {}]", self.caps_hit.join(", "))?;
        }
        Ok(())
    }
}
