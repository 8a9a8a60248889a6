use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// Stable identifier of the property being checked.
    pub anchor: &'static str,
    pub status: Status,
    pub values: Value,
    pub witnesses: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &'static str, ok: bool, values: Value) -> Self {
        Check {
            name: name.into(),
            anchor,
            status: Status::from_bool(ok),
            values,
            witnesses: Value::Null,
        }
    }

    pub fn skipped(name: impl Into<String>, anchor: &'static str, reason: &str) -> Self {
        Check {
            name: name.into(),
            anchor,
            status: Status::Skipped,
            values: serde_json::json!({ "reason": reason }),
            witnesses: Value::Null,
        }
    }

    pub fn with_witnesses(mut self, witnesses: Value) -> Self {
        self.witnesses = witnesses;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub values: Value,
}

impl Report {
    pub fn new(command: Vec<String>, input_sha256: Option<String>, seed: Option<u64>) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            input_sha256,
            seed,
            status: Status::Pass,
            checks: Vec::new(),
            values: Value::Null,
        }
    }

    pub fn push(&mut self, check: Check) {
        if check.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.status == Status::Fail {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One row of a p-grid table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub p: f64,
    pub lambda: f64,
    pub residual: f64,
    pub m1: f64,
    pub m2: f64,
}

impl GridRow {
    /// `m1 = 2^{-p} λ`, `m2 = p (λ/D)^{1/p}` (zero when `λ ≤ 0` or `D ≤ 0`).
    pub fn new(p: f64, lambda: f64, residual: f64, d: f64) -> Self {
        let m2 = if lambda > 0.0 && d > 0.0 {
            p * (lambda / d).powf(1.0 / p)
        } else {
            0.0
        };
        GridRow {
            p,
            lambda,
            residual,
            m1: 2f64.powf(-p) * lambda,
            m2,
        }
    }
}

pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("p,lambda,residual,m1,m2");
    for r in rows {
        out.push('\n');
        let cells = [r.p, r.lambda, r.residual, r.m1, r.m2].map(|x| format!("{x:.16e}"));
        out.push_str(&cells.join(","));
    }
    out
}
