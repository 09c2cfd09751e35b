//! Observation traces, their classification and compression, and the
//! plain-text trace file format (`KIND;obs|obs|...`, empty observation `_`).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automaton::{Alphabet, AutomatonError, Observation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct StepFlags {
    pub terminal: bool,
    pub goal: bool,
}

impl StepFlags {
    pub const RUNNING: StepFlags = StepFlags {
        terminal: false,
        goal: false,
    };
    pub const GOAL: StepFlags = StepFlags {
        terminal: true,
        goal: true,
    };
    pub const DEAD_END: StepFlags = StepFlags {
        terminal: true,
        goal: false,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TraceKind {
    Goal,
    DeadEnd,
    Incomplete,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::Goal => "goal",
            TraceKind::DeadEnd => "dead-end",
            TraceKind::Incomplete => "incomplete",
        })
    }
}

impl FromStr for TraceKind {
    type Err = TraceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "goal" | "g" => Ok(TraceKind::Goal),
            "dead-end" | "deadend" | "dead" | "d" => Ok(TraceKind::DeadEnd),
            "incomplete" | "inc" | "i" => Ok(TraceKind::Incomplete),
            other => Err(TraceError::BadKind(other.to_string())),
        }
    }
}

pub fn classify(flags: StepFlags) -> TraceKind {
    if flags.goal {
        TraceKind::Goal
    } else if flags.terminal {
        TraceKind::DeadEnd
    } else {
        TraceKind::Incomplete
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("unknown trace kind {0:?}")]
    BadKind(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Alphabet(#[from] AutomatonError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObservationTrace {
    observations: Vec<Observation>,
    kind: TraceKind,
    compressed: bool,
}

impl ObservationTrace {
    pub fn new(observations: Vec<Observation>, kind: TraceKind) -> Self {
        ObservationTrace {
            observations,
            kind,
            compressed: false,
        }
    }

    pub fn empty(compressed: bool) -> Self {
        ObservationTrace {
            observations: Vec::new(),
            kind: TraceKind::Incomplete,
            compressed,
        }
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn kind(&self) -> TraceKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: TraceKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn is_compressed(&self) -> bool {
        self.compressed
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn last(&self) -> Option<Observation> {
        self.observations.last().copied()
    }

    /// Drops empty observations, then collapses runs of equal ones.
    pub fn compress(&self) -> ObservationTrace {
        let mut out: Vec<Observation> = Vec::with_capacity(self.observations.len());
        for &o in self.observations.iter().filter(|o| !o.is_empty()) {
            if out.last() != Some(&o) {
                out.push(o);
            }
        }
        ObservationTrace {
            observations: out,
            kind: self.kind,
            compressed: true,
        }
    }

    /// Whether an observation would be recorded in compressed mode.
    pub fn accepts_compressed(&self, o: Observation) -> bool {
        !o.is_empty() && self.observations.last() != Some(&o)
    }

    /// Returns whether `o` was recorded.
    pub fn append_observation(&mut self, o: Observation, compressed_mode: bool) -> bool {
        if compressed_mode && !self.accepts_compressed(o) {
            return false;
        }
        self.observations.push(o);
        true
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        let obs: Vec<String> = self
            .observations
            .iter()
            .map(|&o| alphabet.format_observation(o))
            .collect();
        format!("{};{}", self.kind, obs.join("|"))
    }

    pub fn parse(line: &str, alphabet: &Alphabet) -> Result<Self, TraceError> {
        let (kind, rest) = line.split_once(';').ok_or_else(|| TraceError::Parse {
            line: 0,
            msg: "missing ';'".into(),
        })?;
        let kind: TraceKind = kind.parse()?;
        let rest = rest.trim();
        let observations = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split('|')
                .map(|o| alphabet.parse_observation(o))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(ObservationTrace::new(observations, kind))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceSet {
    goal: Vec<ObservationTrace>,
    dead_end: Vec<ObservationTrace>,
    incomplete: Vec<ObservationTrace>,
}

impl TraceSet {
    pub fn new() -> Self {
        Self::default()
    }

    fn bucket_mut(&mut self, kind: TraceKind) -> &mut Vec<ObservationTrace> {
        match kind {
            TraceKind::Goal => &mut self.goal,
            TraceKind::DeadEnd => &mut self.dead_end,
            TraceKind::Incomplete => &mut self.incomplete,
        }
    }

    /// Adds a trace to the bucket of its kind; returns false on duplicates.
    pub fn insert(&mut self, trace: ObservationTrace) -> bool {
        let bucket = self.bucket_mut(trace.kind());
        if bucket
            .iter()
            .any(|t| t.observations() == trace.observations())
        {
            return false;
        }
        bucket.push(trace);
        true
    }

    pub fn goal(&self) -> &[ObservationTrace] {
        &self.goal
    }

    pub fn dead_end(&self) -> &[ObservationTrace] {
        &self.dead_end
    }

    pub fn incomplete(&self) -> &[ObservationTrace] {
        &self.incomplete
    }

    pub fn iter(&self) -> impl Iterator<Item = &ObservationTrace> {
        self.goal
            .iter()
            .chain(&self.dead_end)
            .chain(&self.incomplete)
    }

    pub fn len(&self) -> usize {
        self.goal.len() + self.dead_end.len() + self.incomplete.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Population mean and standard deviation of trace lengths.
    pub fn length_stats(&self) -> (f64, f64) {
        let n = self.len();
        if n == 0 {
            return (0.0, 0.0);
        }
        let mean = self.iter().map(|t| t.len() as f64).sum::<f64>() / n as f64;
        let var = self
            .iter()
            .map(|t| (t.len() as f64 - mean).powi(2))
            .sum::<f64>()
            / n as f64;
        (mean, var.sqrt())
    }

    pub fn compress(&self) -> TraceSet {
        let mut out = TraceSet::new();
        for t in self.iter() {
            out.insert(t.compress());
        }
        out
    }

    /// One trace per line; blank lines and `#` comments are skipped.  A
    /// comment of the form `# alphabet: a,b,c` fixes the observable order;
    /// otherwise names are taken in order of first appearance.
    pub fn parse_file(
        text: &str,
        alphabet: Option<&Alphabet>,
    ) -> Result<(Alphabet, TraceSet), TraceError> {
        let mut declared: Option<Alphabet> = alphabet.cloned();
        let mut seen: Vec<String> = Vec::new();
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(names) = comment.trim().strip_prefix("alphabet:") {
                    if declared.is_none() {
                        let names: Vec<&str> = names
                            .split(',')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .collect();
                        declared = Some(Alphabet::new(names)?);
                    }
                }
                continue;
            }
            let (_, rest) = line.split_once(';').ok_or_else(|| TraceError::Parse {
                line: i + 1,
                msg: "expected KIND;obs|obs|...".into(),
            })?;
            for name in rest.split(['|', ',']).map(str::trim) {
                if !name.is_empty() && name != "_" && !seen.iter().any(|s| s == name) {
                    seen.push(name.to_string());
                }
            }
            lines.push((i + 1, line));
        }
        let alphabet = match declared {
            Some(a) => a,
            None => Alphabet::new(seen)?,
        };
        let mut set = TraceSet::new();
        for (no, line) in lines {
            let t = ObservationTrace::parse(line, &alphabet).map_err(|e| match e {
                TraceError::Parse { msg, .. } => TraceError::Parse { line: no, msg },
                other => TraceError::Parse {
                    line: no,
                    msg: other.to_string(),
                },
            })?;
            set.insert(t);
        }
        Ok((alphabet, set))
    }

    pub fn format_file(&self, alphabet: &Alphabet) -> String {
        let mut s = format!("# alphabet: {}\n", alphabet.names().join(","));
        for t in self.iter() {
            s.push_str(&t.format(alphabet));
            s.push('\n');
        }
        s
    }
}
