use serde::Serialize;

use crate::checks::Record;
use crate::spec::SuiteSpec;
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecEcho {
    pub families: Vec<String>,
    pub checks: Vec<String>,
    pub oracle_rank: usize,
    pub oracle_seeds: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub flagged: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub version: &'static str,
    pub spec: SpecEcho,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(spec: &SuiteSpec, records: Vec<Record>) -> Self {
        let matched = records.iter().filter(|r| r.matched).count();
        let summary = Summary {
            total: records.len(),
            matched,
            mismatched: records.len() - matched,
            flagged: records.iter().filter(|r| !r.flags.is_empty()).count(),
        };
        let spec = SpecEcho {
            families: spec.families.iter().map(|f| f.name().to_string()).collect(),
            checks: spec.checks.iter().map(|c| c.name().to_string()).collect(),
            oracle_rank: spec.oracle_rank,
            oracle_seeds: spec.oracle_seeds,
            seed: spec.seed,
        };
        VerificationReport { version: SCHEMA_VERSION, spec, records, summary }
    }

    pub fn all_match(&self) -> bool {
        self.summary.mismatched == 0
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# Verification report ({})\n\n", self.version));
        s.push_str(&format!(
            "Families: {}. Checks: {}. Oracle rank {}, {} seeds from {}.\n\n",
            self.spec.families.join(", "),
            self.spec.checks.join(", "),
            self.spec.oracle_rank,
            self.spec.oracle_seeds,
            self.spec.seed
        ));
        s.push_str(&format!(
            "**{} of {} records match**, {} mismatched, {} flagged.\n\n",
            self.summary.matched, self.summary.total, self.summary.mismatched, self.summary.flagged
        ));
        s.push_str("| record | match | anchor | flags |\n|---|---|---|---|\n");
        for r in &self.records {
            s.push_str(&format!(
                "| `{}` | {} | {} | {} |\n",
                r.name,
                if r.matched { "yes" } else { "NO" },
                cell(&r.anchor),
                cell(&r.flags.join("; "))
            ));
        }
        let bad: Vec<&Record> = self.records.iter().filter(|r| !r.matched).collect();
        if !bad.is_empty() {
            s.push_str("\n## Mismatches\n");
            for r in bad {
                s.push_str(&format!("\n### `{}`\n\ncomputed:\n\n    {}\n\nexpected:\n\n    {}\n", r.name, r.computed, r.expected));
            }
        }
        s
    }
}

fn cell(t: &str) -> String {
    t.replace('|', "\\|")
}
