use std::time::Duration;

use serde::Serialize;

/// Reports keep at most this many witnesses; the total count is kept separately.
pub const WITNESS_CAP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One failing instance of an identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// Identity label, e.g. `pre-lie` or `rb[right]` or `ldend1[AAV]`.
    pub identity: String,
    /// 1-based basis indices of the failing tuple.
    pub indices: Vec<usize>,
    /// The nonzero residual, rendered in the basis.
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub status: Status,
    pub witnesses: Vec<Witness>,
    /// Number of failing instances, including those beyond the witness cap.
    pub failures: usize,
    /// Number of identity instances evaluated.
    pub checked: usize,
    pub timing_ms: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn first(&self) -> Option<&Witness> {
        self.witnesses.first()
    }

    /// Concatenate several reports, as when one check consists of stages.
    pub fn merge(parts: impl IntoIterator<Item = CheckReport>) -> CheckReport {
        let mut out = ReportBuilder::new();
        let mut timing = 0.0;
        for p in parts {
            out.checked += p.checked;
            out.failures += p.failures;
            timing += p.timing_ms;
            for w in p.witnesses {
                if out.witnesses.len() < WITNESS_CAP {
                    out.witnesses.push(w);
                }
            }
        }
        let mut r = out.finish(Duration::ZERO);
        r.timing_ms = timing;
        r
    }
}

/// Accumulates witnesses while a check runs.
#[derive(Default)]
pub struct ReportBuilder {
    witnesses: Vec<Witness>,
    failures: usize,
    checked: usize,
}

impl ReportBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&mut self) {
        self.checked += 1;
    }

    pub fn count_many(&mut self, n: usize) {
        self.checked += n;
    }

    pub fn fail(&mut self, identity: impl Into<String>, indices: Vec<usize>, residual: String) {
        self.failures += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(Witness { identity: identity.into(), indices, residual });
        }
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn finish(self, elapsed: Duration) -> CheckReport {
        CheckReport {
            status: if self.failures == 0 { Status::Pass } else { Status::Fail },
            witnesses: self.witnesses,
            failures: self.failures,
            checked: self.checked,
            timing_ms: elapsed.as_secs_f64() * 1e3,
        }
    }
}
