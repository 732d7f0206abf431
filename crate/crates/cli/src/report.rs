use std::fmt::Write;

use serde::{Deserialize, Serialize};

use extricat_core::recollement::Item;
use extricat_core::{Caps, Status, Verdict};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Section {
    Table {
        title: String,
        header: Vec<String>,
        rows: Vec<Vec<String>>,
    },
    Verdicts {
        title: String,
        items: Vec<Item>,
    },
    Lines {
        title: String,
        lines: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub scenario_hash: String,
    pub command: Vec<String>,
    pub caps: Caps,
    pub status: Status,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(scenario: &str, hash: &str, command: Vec<String>, caps: Caps) -> Self {
        Report {
            schema: SCHEMA,
            tool: "extricat".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario: scenario.into(),
            scenario_hash: hash.into(),
            command,
            caps,
            status: Status::Holds,
            sections: Vec::new(),
        }
    }

    pub fn table(&mut self, title: &str, header: Vec<String>, rows: Vec<Vec<String>>) {
        self.sections.push(Section::Table {
            title: title.into(),
            header,
            rows,
        });
    }

    pub fn verdicts(&mut self, title: &str, items: Vec<Item>) {
        self.sections.push(Section::Verdicts {
            title: title.into(),
            items,
        });
    }

    pub fn lines(&mut self, title: &str, lines: Vec<String>) {
        self.sections.push(Section::Lines {
            title: title.into(),
            lines,
        });
    }

    /// Folds `v` into the overall status.
    pub fn absorb(&mut self, v: &Verdict) {
        let s = match v.status {
            Status::Skipped => Status::Holds,
            s => s,
        };
        if s.severity() > self.status.severity() {
            self.status = s;
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.status)
    }
}

pub fn exit_code(s: Status) -> i32 {
    match s {
        Status::Holds | Status::Skipped => 0,
        Status::Fails => 1,
        Status::Unknown => 2,
        Status::Inconsistent => 4,
    }
}

/// Turns FAILS into INCONSISTENT, for checks that are theorems once their
/// hypotheses hold.
pub fn escalate_failures(items: &mut [Item]) {
    for i in items.iter_mut().filter(|i| i.verdict.status == Status::Fails) {
        i.verdict.status = Status::Inconsistent;
    }
}

pub fn to_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

fn pad(s: &str, w: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(w.saturating_sub(n)))
}

fn render_table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let cols = header.len().max(rows.iter().map(Vec::len).max().unwrap_or(0));
    let mut widths = vec![0; cols];
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (i, c) in row.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let line = |row: &[String]| {
        let cells: Vec<String> = row.iter().enumerate().map(|(i, c)| pad(c, widths[i])).collect();
        format!("  {}", cells.join("  ").trim_end())
    };
    if !header.is_empty() {
        let _ = writeln!(out, "{}", line(header));
    }
    for r in rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

pub fn render_verdict(v: &Verdict) -> String {
    let mut s = v.status.to_string();
    if !v.caps_hit.is_empty() {
        let _ = write!(s, " [caps: {}]", v.caps_hit.join("; "));
    }
    if let Some(w) = &v.witness {
        let _ = write!(s, " - {}", w.message);
    }
    s
}

pub fn to_human(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} on {}", r.tool, r.command.join(" "), r.scenario);
    for sec in &r.sections {
        match sec {
            Section::Table { title, header, rows } => {
                let _ = writeln!(out, "\n{title}");
                render_table(&mut out, header, rows);
            }
            Section::Verdicts { title, items } => {
                let _ = writeln!(out, "\n{title}");
                let w = items.iter().map(|i| i.id.chars().count()).max().unwrap_or(0);
                for i in items {
                    let _ = writeln!(out, "  {}  {}", pad(&i.id, w), render_verdict(&i.verdict));
                }
            }
            Section::Lines { title, lines } => {
                let _ = writeln!(out, "\n{title}");
                for l in lines {
                    let _ = writeln!(out, "  {l}");
                }
            }
        }
    }
    let _ = writeln!(out, "\nstatus: {}", r.status);
    out
}
