//! Round-based series archive format: parsing and serialization.
//!
//! Simulated and real measurement series flow through the same canonical
//! text format, one block per round:
//!
//! ```text
//! # round <round_id> <timestamp_s> <monitor_label>
//! <parent_label> <child_label>
//! ...
//! ```
//!
//! Labels are opaque whitespace-free strings (IP addresses in real
//! archives, decimal ids in simulated ones) and are interned to dense
//! integer ids in first-seen order across the whole file. Edge lines are
//! emitted in ascending `(parent, child)` label order (lexicographic),
//! with single `\n` endings and no trailing blank line, so serialization
//! is byte-reproducible.
//!
//! Rounds whose edges do not form a tree rooted at the monitor are dropped
//! from the series and reported, never repaired: real measurement data is
//! dirty and silent repair would bias the dynamics metrics.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::measurement::{EgoView, RoundSeries};
use crate::topology::NodeId;

/// Bijection between string labels and dense integer ids, in first-seen
/// order.
#[derive(Debug, Clone, Default)]
pub struct LabelTable {
    by_id: Vec<String>,
    by_label: HashMap<String, NodeId>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Id for `label`, assigning the next dense id on first sight.
    pub fn intern(&mut self, label: &str) -> NodeId {
        match self.by_label.entry(label.to_string()) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = self.by_id.len() as NodeId;
                self.by_id.push(label.to_string());
                e.insert(id);
                id
            }
        }
    }

    pub fn id(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.by_id[id as usize]
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }
}

/// Original identifiers of one kept round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundMeta {
    pub round_id: u64,
    pub timestamp_s: u64,
}

/// A label-resolved series: what parsing produces and serialization
/// consumes. `views[i]` pairs with `meta[i]`; round indices are dense from
/// 0 regardless of the original round ids.
#[derive(Debug, Clone)]
pub struct TreeSeries {
    pub monitor: NodeId,
    pub views: Vec<EgoView>,
    pub meta: Vec<RoundMeta>,
    pub labels: LabelTable,
}

impl TreeSeries {
    /// View a simulation result as a serializable series. Node labels are
    /// the decimal ids; timestamps are `round * round_period_s`.
    pub fn from_simulation(series: &RoundSeries) -> TreeSeries {
        // Intern 0..=max so the table id of every observed node equals its
        // simulation id and views can be serialized unchanged.
        let mut max_id = series.monitor;
        for view in &series.views {
            if let Some(&m) = view.nodes_sorted().last() {
                max_id = max_id.max(m);
            }
        }
        let mut labels = LabelTable::new();
        for id in 0..=max_id {
            labels.intern(&id.to_string());
        }
        let meta = (0..series.views.len() as u64)
            .map(|t| RoundMeta {
                round_id: t,
                timestamp_s: t * series.round_period_s,
            })
            .collect();
        TreeSeries {
            monitor: series.monitor,
            views: series.views.clone(),
            meta,
            labels,
        }
    }
}

/// A dropped round and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedRound {
    pub round_id: u64,
    /// 1-based line of the round header.
    pub line: usize,
    pub reason: String,
}

struct PendingRound {
    round_id: u64,
    timestamp_s: u64,
    monitor: NodeId,
    header_line: usize,
    edges: Vec<(NodeId, NodeId)>,
}

impl PendingRound {
    /// Turn the raw edge list into a validated view, or say why not.
    fn into_view(self, round_index: u32) -> std::result::Result<EgoView, String> {
        let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        for &(p, c) in &self.edges {
            if p == c {
                return Err(format!("self-loop at node '{p}'"));
            }
            match parent.entry(c) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(p);
                }
                std::collections::btree_map::Entry::Occupied(e) => {
                    return Err(if *e.get() == p {
                        format!("duplicate edge ({p}, {c})")
                    } else {
                        format!("node {c} has multiple parents")
                    });
                }
            }
        }
        let view = EgoView::new(round_index, self.monitor, parent);
        view.validate()?;
        Ok(view)
    }
}

/// Parse a round-based archive.
///
/// Returns the kept rounds (renumbered from 0, original ids preserved in
/// the metadata) plus a report of the rounds dropped for violating the
/// tree invariant. Syntactically broken lines are a hard error carrying the
/// 1-based line number; an input without a single round header is a
/// parameter error.
pub fn parse_series<R: BufRead>(reader: R) -> Result<(TreeSeries, Vec<MalformedRound>)> {
    let mut labels = LabelTable::new();
    let mut views: Vec<EgoView> = Vec::new();
    let mut meta: Vec<RoundMeta> = Vec::new();
    let mut malformed: Vec<MalformedRound> = Vec::new();
    let mut pending: Option<PendingRound> = None;
    let mut series_monitor: Option<NodeId> = None;
    let mut saw_header = false;

    let finalize = |p: PendingRound,
                    series_monitor: &mut Option<NodeId>,
                    views: &mut Vec<EgoView>,
                    meta: &mut Vec<RoundMeta>,
                    malformed: &mut Vec<MalformedRound>| {
        let round_id = p.round_id;
        let header_line = p.header_line;
        let timestamp_s = p.timestamp_s;
        let monitor = p.monitor;
        if let Some(expected) = *series_monitor {
            if monitor != expected {
                malformed.push(MalformedRound {
                    round_id,
                    line: header_line,
                    reason: "monitor differs from the first kept round".to_string(),
                });
                return;
            }
        }
        match p.into_view(views.len() as u32) {
            Ok(view) => {
                *series_monitor = Some(monitor);
                views.push(view);
                meta.push(RoundMeta {
                    round_id,
                    timestamp_s,
                });
            }
            Err(reason) => malformed.push(MalformedRound {
                round_id,
                line: header_line,
                reason,
            }),
        }
    };

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(Error::Io)?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first() == Some(&"#") {
            if tokens.len() != 5 || tokens[1] != "round" {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("malformed round header '{line}'"),
                });
            }
            let round_id: u64 = tokens[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid round id '{}'", tokens[2]),
            })?;
            let timestamp_s: u64 = tokens[3].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid timestamp '{}'", tokens[3]),
            })?;
            let monitor = labels.intern(tokens[4]);
            saw_header = true;
            if let Some(prev) = pending.replace(PendingRound {
                round_id,
                timestamp_s,
                monitor,
                header_line: line_no,
                edges: Vec::new(),
            }) {
                finalize(
                    prev,
                    &mut series_monitor,
                    &mut views,
                    &mut meta,
                    &mut malformed,
                );
            }
        } else if tokens.len() == 2 {
            let parent = labels.intern(tokens[0]);
            let child = labels.intern(tokens[1]);
            match pending.as_mut() {
                Some(p) => p.edges.push((parent, child)),
                None => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "edge line before any round header".to_string(),
                    })
                }
            }
        } else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected a round header or an edge line, got '{line}'"),
            });
        }
    }
    if let Some(prev) = pending.take() {
        finalize(
            prev,
            &mut series_monitor,
            &mut views,
            &mut meta,
            &mut malformed,
        );
    }
    if !saw_header {
        return Err(Error::invalid("empty series file".to_string()));
    }

    Ok((
        TreeSeries {
            monitor: series_monitor.unwrap_or(0),
            views,
            meta,
            labels,
        },
        malformed,
    ))
}

/// Write a series in the canonical format. `parse_series` of the output
/// reproduces the views, round ids, timestamps and monitor exactly.
pub fn serialize_series<W: Write>(series: &TreeSeries, mut w: W) -> io::Result<()> {
    for (view, meta) in series.views.iter().zip(&series.meta) {
        writeln!(
            w,
            "# round {} {} {}",
            meta.round_id,
            meta.timestamp_s,
            series.labels.label(series.monitor)
        )?;
        let mut edges: Vec<(&str, &str)> = view
            .edges()
            .map(|(p, c)| (series.labels.label(p), series.labels.label(c)))
            .collect();
        edges.sort_unstable();
        for (p, c) in edges {
            writeln!(w, "{p} {c}")?;
        }
    }
    Ok(())
}

/// Serialize to an in-memory string; convenience for tests and the CLI.
pub fn serialize_series_to_string(series: &TreeSeries) -> String {
    let mut buf = Vec::new();
    serialize_series(series, &mut buf).expect("in-memory write cannot fail");
    String::from_utf8(buf).expect("canonical format is UTF-8")
}
