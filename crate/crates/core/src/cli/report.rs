use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exact_abelian::FpAbGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passes: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub data: String,
}

/// A computed group in canonical form `Z^r ⊕ Z/t1 ⊕ …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupEntry {
    pub name: String,
    pub group: String,
}

/// The machine-readable result of one command. Nothing time-dependent goes
/// in here, so the serialized form is byte-stable for a fixed input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the manifest bytes and the normalized options.
    pub inputs_digest: String,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Witness>,
    pub groups: Vec<GroupEntry>,
}

impl Report {
    pub fn new(command: &str, inputs_digest: String) -> Self {
        Report { command: command.to_string(), inputs_digest, verdicts: Vec::new(), witnesses: Vec::new(), groups: Vec::new() }
    }

    pub fn verdict(&mut self, name: impl Into<String>, passes: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { name: name.into(), passes, detail: detail.into() });
    }

    pub fn witness(&mut self, name: impl Into<String>, data: impl Into<String>) {
        self.witnesses.push(Witness { name: name.into(), data: data.into() });
    }

    pub fn group(&mut self, name: impl Into<String>, g: &FpAbGroup) {
        self.groups.push(GroupEntry { name: name.into(), group: g.describe() });
    }

    pub fn passes(&self) -> bool {
        self.verdicts.iter().all(|v| v.passes)
    }

    /// 0 when every verdict passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passes() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Plain-text table for terminals.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command  {}", self.command);
        let _ = writeln!(out, "digest   {}", self.inputs_digest);
        let width = |names: &mut dyn Iterator<Item = usize>| names.max().unwrap_or(0).max(8);
        if !self.verdicts.is_empty() {
            let w = width(&mut self.verdicts.iter().map(|v| v.name.chars().count()));
            let _ = writeln!(out, "\n{:<w$}  {:<6}  DETAIL", "VERDICT", "RESULT");
            for v in &self.verdicts {
                let _ = writeln!(out, "{:<w$}  {:<6}  {}", v.name, if v.passes { "PASS" } else { "FAIL" }, v.detail);
            }
        }
        if !self.groups.is_empty() {
            let w = width(&mut self.groups.iter().map(|g| g.name.chars().count()));
            let _ = writeln!(out, "\n{:<w$}  VALUE", "GROUP");
            for g in &self.groups {
                let _ = writeln!(out, "{:<w$}  {}", g.name, g.group);
            }
        }
        if !self.witnesses.is_empty() {
            let w = width(&mut self.witnesses.iter().map(|x| x.name.chars().count()));
            let _ = writeln!(out, "\n{:<w$}  DATA", "WITNESS");
            for x in &self.witnesses {
                let _ = writeln!(out, "{:<w$}  {}", x.name, x.data);
            }
        }
        let passed = self.verdicts.iter().filter(|v| v.passes).count();
        let _ = writeln!(out, "\n{passed}/{} verdicts pass", self.verdicts.len());
        out
    }
}
