use std::fmt::Write as _;

use super::config::ExperimentSpec;
use super::engine::{TraceReport, Verdict};
use crate::error::{Error, Result};

const MAGIC: &str = "# prodlab trace v1";
const HEADER: &str = "## header";
const STEPS: &str = "## steps";
const VERDICT: &str = "## verdict";

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl TraceReport {
    /// Line-oriented trace. The header block is the canonical TOML of the
    /// spec, so [`parse_trace_header`] recovers it exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&self.spec.to_toml());
        out.push_str(STEPS);
        out.push('\n');
        let _ = writeln!(out, "z={}", self.multiplier);
        for s in &self.steps {
            let _ = writeln!(
                out,
                "m={} probe={} value={} rendered={}",
                s.m, s.probe, s.value, s.rendered
            );
        }
        out.push_str(VERDICT);
        out.push('\n');
        let c = &self.cauchy;
        let _ = writeln!(out, "cauchy={} margin={}", c.cauchy, c.margin);
        let _ = writeln!(out, "k_table={}", join(c.k_table()));
        let _ = writeln!(
            out,
            "settled={}",
            join(self.stabilization.settled.iter().map(|(i, s)| format!("{i}@{s}")))
        );
        let _ = writeln!(out, "unsettled={}", join(&self.stabilization.unsettled));
        let _ = writeln!(out, "verdict={}", self.verdict.name());
        match &self.verdict {
            Verdict::CauchyInWindow => {}
            Verdict::ConvergedInWindow { limit } => {
                let _ = writeln!(out, "limit={}", limit.replace('\n', "; "));
            }
            Verdict::DivergenceWitness { probe, note, table } => {
                let _ = writeln!(out, "probe={probe}");
                let _ = writeln!(out, "note={note}");
                let _ = writeln!(out, "table={}", join(table.iter().map(|(i, v)| format!("{i}:{v}"))));
            }
            Verdict::Inconclusive { reason } => {
                let _ = writeln!(out, "reason={reason}");
            }
        }
        let _ = writeln!(
            out,
            "spectrum={}",
            self.spectrum_tag.map_or("none".to_string(), |t| format!("{t:?}"))
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// The spec stored in a text trace.
pub fn parse_trace_header(text: &str) -> Result<ExperimentSpec> {
    let bad = |message: &str| Error::Config {
        line: 1,
        message: message.to_string(),
    };
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) || lines.next() != Some(HEADER) {
        return Err(bad("not a prodlab trace"));
    }
    let mut header = String::new();
    for line in lines {
        if line == STEPS {
            return ExperimentSpec::from_toml(&header).map_err(|e| match e {
                Error::Config { line, message } => Error::Config {
                    line: line + 2,
                    message,
                },
                other => other,
            });
        }
        header.push_str(line);
        header.push('\n');
    }
    Err(bad("trace has no steps section"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::run_experiment;

    const SPEC: &str = "group = \"padic\"\nsequence = \"powers\"\nhorizon = 12\ndepth = 4\n\
                        multiplier = { random = { bound = 50, support = 6 } }\n\n[padic]\np = 5\n";

    #[test]
    fn header_round_trip() {
        let spec = ExperimentSpec::from_toml(SPEC).unwrap();
        let t = run_experiment(&spec).unwrap();
        let text = t.to_text();
        assert_eq!(parse_trace_header(&text).unwrap(), spec);
        let again = run_experiment(&parse_trace_header(&text).unwrap()).unwrap();
        assert_eq!(again.to_text(), text);
        assert!(text.contains("verdict=ConvergedInWindow"));
        assert_eq!(TraceReport::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn rejects_foreign_text() {
        assert!(parse_trace_header("hello\n").is_err());
        assert!(parse_trace_header(&format!("{MAGIC}\n{HEADER}\ngroup = 1\n")).is_err());
    }
}
