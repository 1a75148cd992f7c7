//! One report structure, two renderings.
//!
//! Humans get sectioned text; the harness gets flat `key value` records.
//! Both render the same entry list.

use std::fmt::Write as _;

/// Report section, printed in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Section {
    Verdict,
    Covering,
    Disjuncts,
    Certificates,
    States,
    Table,
}

impl Section {
    fn title(self) -> &'static str {
        match self {
            Section::Verdict => "VERDICT",
            Section::Covering => "COVERING",
            Section::Disjuncts => "DISJUNCTS",
            Section::Certificates => "CERTIFICATES",
            Section::States => "STATES",
            Section::Table => "TABLE",
        }
    }
}

/// An ordered list of (section, key, value) entries.
#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<(Section, String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, section: Section, key: impl Into<String>, value: impl ToString) {
        self.entries.push((section, key.into(), value.to_string()));
    }

    pub fn entries(&self) -> &[(Section, String, String)] {
        &self.entries
    }

    /// Entries grouped by section (canonical section order, entry order
    /// within a section).
    fn grouped(&self) -> Vec<&(Section, String, String)> {
        let mut out: Vec<&(Section, String, String)> = self.entries.iter().collect();
        out.sort_by_key(|(section, _, _)| *section);
        out
    }

    /// Sectioned human rendering.
    pub fn human(&self) -> String {
        let mut out = String::new();
        let mut current: Option<Section> = None;
        for (section, key, value) in self.grouped() {
            if current != Some(*section) {
                writeln!(out, "{}", section.title()).unwrap();
                current = Some(*section);
            }
            writeln!(out, "  {key} {value}").unwrap();
        }
        out
    }

    /// Flat machine rendering: one `key value` pair per line, in the
    /// same grouped order as the human form.
    pub fn records(&self) -> String {
        let mut out = String::new();
        for (_, key, value) in self.grouped() {
            writeln!(out, "{key} {value}").unwrap();
        }
        out
    }

    pub fn render(&self, records: bool) -> String {
        if records {
            self.records()
        } else {
            self.human()
        }
    }
}
