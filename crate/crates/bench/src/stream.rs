//! Update-stream replay against the dynamic engine.
//!
//! One command per line: `+ u v` inserts, `- u v` deletes, `? u` prints
//! `u <cluster>`, and `!` audits the whole state against a from-scratch
//! run, printing `ok` or the mismatched nodes. Blank lines and `#`
//! comments are skipped.

use std::io::Write;

use pruned_pivot::dynamic::DynState;
use pruned_pivot::Error;

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Insert(usize, usize),
    Delete(usize, usize),
    Query(usize),
    Audit,
}

/// Parses the whole stream up front so a bad line is reported before any
/// command runs.
pub fn parse_stream(text: &str) -> Result<Vec<Command>, Error> {
    let mut cmds = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let mut parts = line.split_whitespace();
        let op = parts.next().unwrap_or_default();
        let mut label = || -> Result<usize, Error> {
            let tok = parts
                .next()
                .ok_or_else(|| err(format!("missing node label in {line:?}")))?;
            tok.parse()
                .map_err(|_| err(format!("bad node label {tok:?}")))
        };
        let cmd = match op {
            "+" => Command::Insert(label()?, label()?),
            "-" => Command::Delete(label()?, label()?),
            "?" => Command::Query(label()?),
            "!" => Command::Audit,
            _ => return Err(err(format!("unknown command {op:?}"))),
        };
        if parts.next().is_some() {
            return Err(err(format!("trailing tokens in {line:?}")));
        }
        cmds.push(cmd);
    }
    Ok(cmds)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReplaySummary {
    pub updates: usize,
    pub audits: usize,
    pub failed_audits: usize,
}

impl ReplaySummary {
    pub fn ok(&self) -> bool {
        self.failed_audits == 0
    }
}

/// Executes `cmds` in order. With `audit_every = Some(n)` an extra silent
/// audit runs after every `n`-th update; only failures are printed. An
/// invalid update stops the replay with an error.
pub fn replay<W: Write>(
    state: &mut DynState,
    cmds: &[Command],
    audit_every: Option<usize>,
    out: &mut W,
) -> Result<ReplaySummary, BenchError> {
    let mut summary = ReplaySummary::default();
    for &cmd in cmds {
        match cmd {
            Command::Insert(u, v) | Command::Delete(u, v) => {
                if matches!(cmd, Command::Insert(..)) {
                    state.insert(u, v)?;
                } else {
                    state.delete(u, v)?;
                }
                summary.updates += 1;
                if audit_every.is_some_and(|n| n > 0 && summary.updates % n == 0) {
                    summary.audits += 1;
                    if let Err(diff) = state.audit() {
                        summary.failed_audits += 1;
                        writeln!(out, "audit after update {}: {diff}", summary.updates)?;
                    }
                }
            }
            Command::Query(u) => {
                let n = state.graph().n();
                if u >= n {
                    return Err(Error::LabelOutOfRange { label: u, n }.into());
                }
                writeln!(out, "{u} {}", state.cluster_of(u))?;
            }
            Command::Audit => {
                summary.audits += 1;
                match state.audit() {
                    Ok(()) => writeln!(out, "ok")?,
                    Err(diff) => {
                        summary.failed_audits += 1;
                        writeln!(out, "{diff}")?;
                    }
                }
            }
        }
    }
    Ok(summary)
}
