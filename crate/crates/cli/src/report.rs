use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl From<vps_core::selftest::Status> for Status {
    fn from(s: vps_core::selftest::Status) -> Self {
        use vps_core::selftest::Status as S;
        match s {
            S::Pass => Status::Pass,
            S::Fail => Status::Fail,
            S::Inconclusive => Status::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<String>>,
    /// Computed values are printed bare in text mode.
    #[serde(skip)]
    pub value: bool,
}

impl Item {
    pub fn value(name: impl Into<String>, witness: String) -> Self {
        Self {
            name: name.into(),
            status: Status::Pass,
            witness: Some(witness),
            certificate: None,
            value: true,
        }
    }

    pub fn check(name: impl Into<String>, status: Status) -> Self {
        Self {
            name: name.into(),
            status,
            witness: None,
            certificate: None,
            value: false,
        }
    }

    pub fn with_witness(mut self, w: String) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_certificate(mut self, c: Vec<String>) -> Self {
        self.certificate = Some(c);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub status: Status,
    pub items: Vec<Item>,
    pub ms: u64,
}

impl Report {
    pub fn new(command: &str, model: &str, items: Vec<Item>, ms: u64) -> Self {
        let status = items.iter().map(|i| i.status).max().unwrap_or(Status::Pass);
        Self {
            command: command.to_string(),
            model: model.to_string(),
            status,
            items,
            ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let values: Vec<&Item> = self.items.iter().filter(|i| i.value).collect();
        let bare = values.len() == 1;
        for item in &values {
            let w = item.witness.as_deref().unwrap_or_default();
            if bare {
                writeln!(out, "{w}").unwrap();
            } else if w.contains('\n') {
                writeln!(out, "{}:\n{}", item.name, indent(w)).unwrap();
            } else {
                writeln!(out, "{} = {w}", item.name).unwrap();
            }
        }
        let checks: Vec<&Item> = self.items.iter().filter(|i| !i.value).collect();
        for item in &checks {
            writeln!(out, "{:<12} {}", item.status.label(), item.name).unwrap();
            if let Some(w) = &item.witness {
                writeln!(out, "    witness: {}", w.replace('\n', "\n             ")).unwrap();
            }
            if let Some(c) = &item.certificate {
                if !c.is_empty() {
                    writeln!(out, "    certificate: {}", c.join(" + ")).unwrap();
                }
            }
        }
        if !checks.is_empty() {
            writeln!(out, "status: {}", self.status.label()).unwrap();
        }
        out
    }
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}")).collect::<Vec<_>>().join("\n")
}
