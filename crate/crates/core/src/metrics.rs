//! Dynamics statistics over a series of ego-centered views.
//!
//! All statistics are computed over node identities; tree edges only decide
//! view membership. Churn is measured between consecutive rounds. Curves
//! from different experiments are compared after normalizing each by its
//! own final value, so series of different scales stay comparable.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measurement::EgoView;
use crate::topology::NodeId;

/// Exact header of the per-round metrics CSV.
pub const METRICS_CSV_HEADER: &str =
    "round,nodes_observed,new_nodes,cumulative_distinct,appeared,disappeared";

/// Exact header of the duration histogram CSVs.
pub const HISTOGRAM_CSV_HEADER: &str = "duration,count";

/// Per-round and cumulative dynamics statistics of one series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsReport {
    /// Observed node count per round.
    pub nodes_observed: Vec<u64>,
    /// Count of nodes first seen at each round; equals the full view size at
    /// round 0.
    pub new_nodes: Vec<u64>,
    /// Size of the union of all views up to each round.
    pub cumulative_distinct: Vec<u64>,
    /// |view_t \ view_{t-1}|; 0 at round 0.
    pub appeared: Vec<u64>,
    /// |view_{t-1} \ view_t|; 0 at round 0.
    pub disappeared: Vec<u64>,
    /// run length (consecutive rounds a node stays present) -> node-run count
    pub presence_duration_histogram: BTreeMap<u64, u64>,
    /// gap length between two sightings of the same node -> gap count
    pub absence_duration_histogram: BTreeMap<u64, u64>,
}

impl MetricsReport {
    pub fn rounds(&self) -> usize {
        self.nodes_observed.len()
    }

    /// The named per-round curve as floats.
    pub fn curve(&self, field: CurveField) -> Vec<f64> {
        let ints = match field {
            CurveField::NodesObserved => &self.nodes_observed,
            CurveField::CumulativeDistinct => &self.cumulative_distinct,
            CurveField::Appeared => &self.appeared,
            CurveField::Disappeared => &self.disappeared,
        };
        ints.iter().map(|&v| v as f64).collect()
    }

    /// Emit the per-round CSV (header above, one row per round).
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{METRICS_CSV_HEADER}")?;
        for t in 0..self.rounds() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                t,
                self.nodes_observed[t],
                self.new_nodes[t],
                self.cumulative_distinct[t],
                self.appeared[t],
                self.disappeared[t]
            )?;
        }
        Ok(())
    }
}

/// Emit a duration histogram as `duration,count`, ascending.
pub fn write_histogram_csv<W: Write>(hist: &BTreeMap<u64, u64>, mut w: W) -> io::Result<()> {
    writeln!(w, "{HISTOGRAM_CSV_HEADER}")?;
    for (duration, count) in hist {
        writeln!(w, "{duration},{count}")?;
    }
    Ok(())
}

/// Compute all dynamics statistics for a series of views.
pub fn compute_metrics(views: &[EgoView]) -> Result<MetricsReport> {
    if views.is_empty() {
        return Err(Error::invalid("series has no rounds".to_string()));
    }
    let rounds = views.len();
    let sets: Vec<HashSet<NodeId>> = views
        .iter()
        .map(|v| v.nodes_sorted().into_iter().collect())
        .collect();

    let mut nodes_observed = Vec::with_capacity(rounds);
    let mut new_nodes = Vec::with_capacity(rounds);
    let mut cumulative_distinct = Vec::with_capacity(rounds);
    let mut appeared = Vec::with_capacity(rounds);
    let mut disappeared = Vec::with_capacity(rounds);

    let mut seen: HashSet<NodeId> = HashSet::new();
    // rounds at which each node was present, ascending
    let mut presence: HashMap<NodeId, Vec<u64>> = HashMap::new();

    for (t, set) in sets.iter().enumerate() {
        nodes_observed.push(set.len() as u64);
        let fresh = set.iter().filter(|v| !seen.contains(*v)).count() as u64;
        new_nodes.push(fresh);
        seen.extend(set.iter().copied());
        cumulative_distinct.push(seen.len() as u64);
        if t == 0 {
            appeared.push(0);
            disappeared.push(0);
        } else {
            let prev = &sets[t - 1];
            appeared.push(set.iter().filter(|v| !prev.contains(*v)).count() as u64);
            disappeared.push(prev.iter().filter(|v| !set.contains(*v)).count() as u64);
        }
        for &v in set {
            presence.entry(v).or_default().push(t as u64);
        }
    }

    let mut presence_duration_histogram = BTreeMap::new();
    let mut absence_duration_histogram = BTreeMap::new();
    for rounds_present in presence.values() {
        let mut run = 1u64;
        for w in rounds_present.windows(2) {
            let gap = w[1] - w[0];
            if gap == 1 {
                run += 1;
            } else {
                *presence_duration_histogram.entry(run).or_insert(0) += 1;
                *absence_duration_histogram.entry(gap - 1).or_insert(0) += 1;
                run = 1;
            }
        }
        *presence_duration_histogram.entry(run).or_insert(0) += 1;
    }

    Ok(MetricsReport {
        nodes_observed,
        new_nodes,
        cumulative_distinct,
        appeared,
        disappeared,
        presence_duration_histogram,
        absence_duration_histogram,
    })
}

/// The comparable per-round curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveField {
    NodesObserved,
    CumulativeDistinct,
    Appeared,
    Disappeared,
}

impl CurveField {
    pub fn name(&self) -> &'static str {
        match self {
            CurveField::NodesObserved => "nodes_observed",
            CurveField::CumulativeDistinct => "cumulative_distinct",
            CurveField::Appeared => "appeared",
            CurveField::Disappeared => "disappeared",
        }
    }
}

impl FromStr for CurveField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nodes_observed" => Ok(CurveField::NodesObserved),
            "cumulative_distinct" => Ok(CurveField::CumulativeDistinct),
            "appeared" => Ok(CurveField::Appeared),
            "disappeared" => Ok(CurveField::Disappeared),
            other => Err(Error::invalid(format!("unknown curve field '{other}'"))),
        }
    }
}

/// Distance between two normalized curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveDistance {
    /// Compared length (the shorter of the two).
    pub length: usize,
    pub mean_abs_diff: f64,
    pub max_abs_diff: f64,
}

/// Compare a named curve of two reports; see [`compare_values`].
pub fn compare_curves(
    a: &MetricsReport,
    b: &MetricsReport,
    field: CurveField,
) -> Result<CurveDistance> {
    compare_values(&a.curve(field), &b.curve(field))
}

/// Truncate both curves to the shorter length L, normalize each by its own
/// value at L-1 (falling back to its maximum when that value is 0), and
/// return mean and max absolute difference.
pub fn compare_values(a: &[f64], b: &[f64]) -> Result<CurveDistance> {
    let length = a.len().min(b.len());
    if length == 0 {
        return Err(Error::invalid("cannot compare empty curves".to_string()));
    }
    let na = normalize(&a[..length]);
    let nb = normalize(&b[..length]);
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for (x, y) in na.iter().zip(&nb) {
        let d = (x - y).abs();
        sum += d;
        max = max.max(d);
    }
    Ok(CurveDistance {
        length,
        mean_abs_diff: sum / length as f64,
        max_abs_diff: max,
    })
}

fn normalize(curve: &[f64]) -> Vec<f64> {
    let mut denom = *curve.last().expect("non-empty");
    if denom == 0.0 {
        denom = curve.iter().cloned().fold(0.0, f64::max);
    }
    if denom == 0.0 {
        return curve.to_vec(); // identically zero stays zero
    }
    curve.iter().map(|v| v / denom).collect()
}

/// The four comparable columns of a metrics CSV.
#[derive(Debug, Clone, Default)]
pub struct CurveSet {
    pub nodes_observed: Vec<f64>,
    pub cumulative_distinct: Vec<f64>,
    pub appeared: Vec<f64>,
    pub disappeared: Vec<f64>,
}

impl CurveSet {
    pub fn curve(&self, field: CurveField) -> &[f64] {
        match field {
            CurveField::NodesObserved => &self.nodes_observed,
            CurveField::CumulativeDistinct => &self.cumulative_distinct,
            CurveField::Appeared => &self.appeared,
            CurveField::Disappeared => &self.disappeared,
        }
    }

    /// Read a metrics CSV produced by [`MetricsReport::write_csv`]. The
    /// header must match exactly.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<CurveSet> {
        let mut out = CurveSet::default();
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "empty metrics file".to_string(),
            })?
            .map_err(Error::Io)?;
        if header != METRICS_CSV_HEADER {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header '{METRICS_CSV_HEADER}', got '{header}'"),
            });
        }
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            let line = line.map_err(Error::Io)?;
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 6 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 6 columns, got {}", cols.len()),
                });
            }
            let field = |idx: usize| -> Result<f64> {
                cols[idx].parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid number '{}'", cols[idx]),
                })
            };
            out.nodes_observed.push(field(1)?);
            out.cumulative_distinct.push(field(3)?);
            out.appeared.push(field(4)?);
            out.disappeared.push(field(5)?);
        }
        Ok(out)
    }
}
