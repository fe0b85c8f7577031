//! Plain-text point, graph and metric formats, and JSON run reports.
//!
//! Points: optional `dim d` header, then one point per line with coordinates
//! separated by whitespace and/or commas. `#` starts a comment.
//!
//! Graphs: header `oriented n m`, then `m` lines `u v` (0-based) sorted by
//! `(u, v)`.
//!
//! Metric matrices: optional `metric n` header, then `n` rows of `n`
//! nonnegative reals with a zero diagonal.
//!
//! Reals are written in Rust's shortest round-trip form.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Metric, PointSet};
use crate::orientation::OrientedGraph;

pub const REPORT_SCHEMA: u32 = 1;

/// Serializes a real, writing the string `"unbounded"` for infinity.
pub fn ser_real<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("unbounded")
    }
}

/// Text form of a real: shortest round-trip digits, `unbounded` for infinity.
pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        "unbounded".to_string()
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn fields(body: &str) -> impl Iterator<Item = &str> {
    body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut dim: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    for (line, body) in content_lines(text) {
        let toks: Vec<&str> = fields(body).collect();
        if toks[0] == "dim" {
            if dim.is_some() || !rows.is_empty() {
                return Err(parse_err(line, "dim header must come first"));
            }
            let d = match toks.as_slice() {
                [_, d] => d.parse::<usize>().map_err(|_| parse_err(line, "bad dimension"))?,
                _ => return Err(parse_err(line, "expected `dim d`")),
            };
            if d == 0 {
                return Err(parse_err(line, "dimension must be at least 1"));
            }
            dim = Some((d, line));
            continue;
        }
        let row = toks
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(line, format!("not a number: {t}"))))
            .collect::<Result<Vec<f64>>>()?;
        if row.iter().any(|c| !c.is_finite()) {
            return Err(parse_err(line, "non-finite coordinate"));
        }
        match dim {
            Some((d, _)) if d != row.len() => {
                return Err(parse_err(line, format!("expected {d} coordinates, found {}", row.len())))
            }
            None => dim = Some((row.len(), line)),
            _ => {}
        }
        let key: Vec<u64> = row.iter().map(|c| (c + 0.0).to_bits()).collect();
        if let Some(&first) = seen.get(&key) {
            return Err(Error::DuplicatePoint { line, first });
        }
        seen.insert(key, line);
        rows.push(row);
    }
    let d = dim.map(|(d, _)| d).ok_or(Error::EmptyPointSet)?;
    PointSet::new(d, rows)
}

pub fn write_points(ps: &PointSet) -> String {
    let mut out = format!("dim {}\n", ps.dim());
    for p in ps.iter() {
        let row: Vec<String> = p.iter().map(|&c| format_real(c)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// `oriented n m` followed by one `u v` line per edge, without a trailing
/// newline.
pub fn write_graph(g: &OrientedGraph) -> String {
    let mut lines = vec![format!("oriented {} {}", g.len(), g.edge_count())];
    lines.extend(g.edges().map(|(u, v)| format!("{u} {v}")));
    lines.join("\n")
}

pub fn parse_graph(text: &str) -> Result<OrientedGraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `oriented n m` header"))?;
    let h: Vec<&str> = fields(header).collect();
    let (n, m) = match h.as_slice() {
        ["oriented", n, m] => (
            n.parse::<usize>().map_err(|_| parse_err(hline, "bad vertex count"))?,
            m.parse::<usize>().map_err(|_| parse_err(hline, "bad edge count"))?,
        ),
        _ => return Err(parse_err(hline, "expected `oriented n m`")),
    };
    let mut g = OrientedGraph::empty(n);
    let mut count = 0;
    for (line, body) in lines {
        let t: Vec<&str> = fields(body).collect();
        let (u, v) = match t.as_slice() {
            [u, v] => (
                u.parse::<usize>().map_err(|_| parse_err(line, "bad vertex"))?,
                v.parse::<usize>().map_err(|_| parse_err(line, "bad vertex"))?,
            ),
            _ => return Err(parse_err(line, "expected `u v`")),
        };
        if g.has_edge(u, v) {
            return Err(parse_err(line, format!("repeated edge {u} {v}")));
        }
        g.add_edge(u, v).map_err(|e| parse_err(line, e.to_string()))?;
        count += 1;
    }
    if count != m {
        return Err(parse_err(hline, format!("header announces {m} edges, found {count}")));
    }
    Ok(g)
}

/// A validated finite metric given by its distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    n: usize,
    d: Vec<f64>,
}

/// Relative tolerance for the symmetry and triangle-inequality checks.
pub const METRIC_TOLERANCE: f64 = 1e-9;
/// Above this size the triangle inequality is checked on random triples.
pub const FULL_CHECK_LIMIT: usize = 500;
const SAMPLED_TRIPLES: usize = 2_000_000;

impl MetricMatrix {
    /// Validates a row-major `n x n` matrix. The upper triangle is kept, so the
    /// resulting metric is exactly symmetric.
    pub fn new(n: usize, mut d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::InvalidParameter(format!("expected {} entries, got {}", n * n, d.len())));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!("diagonal entry {i} is not zero")));
            }
            for j in i + 1..n {
                let (a, b) = (d[i * n + j], d[j * n + i]);
                if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "entry ({i}, {j}) must be a positive finite distance"
                    )));
                }
                if (a - b).abs() > METRIC_TOLERANCE * a.max(b) {
                    return Err(Error::Asymmetric(i, j));
                }
                d[j * n + i] = a;
            }
        }
        let m = MetricMatrix { n, d };
        m.check_triangles()?;
        Ok(m)
    }

    pub fn from_metric<M: Metric + ?Sized>(metric: &M) -> Result<Self> {
        let n = metric.len();
        let d = (0..n * n).map(|k| metric.dist(k / n, k % n)).collect();
        MetricMatrix::new(n, d)
    }

    fn violates(&self, i: usize, j: usize, k: usize) -> bool {
        let direct = self.dist(i, k);
        let detour = self.dist(i, j) + self.dist(j, k);
        direct > detour * (1.0 + METRIC_TOLERANCE)
    }

    fn check_triangles(&self) -> Result<()> {
        let n = self.n;
        if n <= FULL_CHECK_LIMIT {
            for i in 0..n {
                for k in i + 1..n {
                    for j in 0..n {
                        if j != i && j != k && self.violates(i, j, k) {
                            return Err(Error::TriangleInequality { i, j, k });
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_7472_6963);
            for _ in 0..SAMPLED_TRIPLES {
                let (i, j, k) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if i != j && j != k && i != k && self.violates(i, j, k) {
                    return Err(Error::TriangleInequality { i, j, k });
                }
            }
        }
        Ok(())
    }
}

impl Metric for MetricMatrix {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

pub fn parse_metric_matrix(text: &str) -> Result<MetricMatrix> {
    let mut announced = None;
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (line, body) in content_lines(text) {
        let toks: Vec<&str> = fields(body).collect();
        if toks[0] == "metric" {
            if announced.is_some() || !rows.is_empty() {
                return Err(parse_err(line, "metric header must come first"));
            }
            announced = match toks.as_slice() {
                [_, n] => Some(n.parse::<usize>().map_err(|_| parse_err(line, "bad size"))?),
                _ => return Err(parse_err(line, "expected `metric n`")),
            };
            continue;
        }
        let row = toks
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(line, format!("not a number: {t}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push((line, row));
    }
    let n = announced.unwrap_or(rows.len());
    if rows.len() != n {
        return Err(parse_err(rows.last().map_or(1, |r| r.0), format!("expected {n} rows, found {}", rows.len())));
    }
    for (line, row) in &rows {
        if row.len() != n {
            return Err(parse_err(*line, format!("expected {n} entries, found {}", row.len())));
        }
        if row.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(parse_err(*line, "entries must be finite and nonnegative"));
        }
    }
    MetricMatrix::new(n, rows.into_iter().flat_map(|(_, r)| r).collect())
}

/// Hex SHA-256 of the concatenated inputs.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

/// A serializable record of one tool invocation. Timing data goes in
/// `timings` and is the only part allowed to differ between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport<R: Serialize, C: Serialize> {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input_digest: String,
    pub seed: Option<u64>,
    pub config: C,
    pub result: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<serde_json::Value>,
}

impl<R: Serialize, C: Serialize> RunReport<R, C> {
    pub fn new(command: &'static str, input_digest: String, config: C, result: R) -> Self {
        RunReport {
            schema: REPORT_SCHEMA,
            tool: "ospanner",
            version: env!("CARGO_PKG_VERSION"),
            command,
            input_digest,
            seed: None,
            config,
            result,
            timings: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Digest of the report with timings left out.
    pub fn content_digest(&self) -> String {
        let v = serde_json::json!({
            "schema": self.schema,
            "version": self.version,
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "config": serde_json::to_value(&self.config).expect("config serializes"),
            "result": serde_json::to_value(&self.result).expect("result serializes"),
        });
        digest(&[v.to_string().as_bytes()])
    }

    /// `key: value` lines of the flattened report.
    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        flatten("", &v, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut String) {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn points_examples() {
        let ps = parse_points("0 0\n1 0\n0 1").unwrap();
        assert_eq!((ps.len(), ps.dim()), (3, 2));
        assert_eq!(ps.point(2), &[0.0, 1.0]);
        assert_eq!(
            parse_points("0 0\n0 0").unwrap_err(),
            Error::DuplicatePoint { line: 2, first: 1 }
        );
        assert!(matches!(
            parse_points("dim 3\n1 2").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
    }

    #[test]
    fn points_comments_commas_and_errors() {
        let ps = parse_points("# header\ndim 2\n1.5, 2   # trailing\n\n-3,4\n").unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.point(1), &[-3.0, 4.0]);
        assert!(matches!(parse_points("1 2\n3").unwrap_err(), Error::Parse { line: 2, .. }));
        assert!(matches!(parse_points("1 x").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse_points("1 inf").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse_points("1 2\ndim 2").unwrap_err(), Error::Parse { line: 2, .. }));
        assert_eq!(parse_points("# nothing\n").unwrap_err(), Error::EmptyPointSet);
    }

    #[test]
    fn graph_examples() {
        let g = OrientedGraph::from_edges(3, [(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(write_graph(&g), "oriented 3 3\n0 1\n1 2\n2 0");
        assert_eq!(write_graph(&OrientedGraph::empty(4)), "oriented 4 0");
        assert_eq!(parse_graph("oriented 3 3\n0 1\n1 2\n2 0\n").unwrap(), g);
    }

    #[test]
    fn graph_errors() {
        assert!(parse_graph("oriented 2 1\n0 1\n1 0").is_err());
        assert!(parse_graph("oriented 2 2\n0 1").is_err());
        assert!(parse_graph("oriented 2 1\n0 5").is_err());
        assert!(parse_graph("directed 2 1\n0 1").is_err());
        assert!(parse_graph("oriented 3 2\n0 1\n0 1").is_err());
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn metric_examples() {
        let ok = parse_metric_matrix("0 1 1\n1 0 1\n1 1 0").unwrap();
        assert_eq!(ok.len(), 3);
        let bad = parse_metric_matrix("0 1 3\n1 0 1\n3 1 0").unwrap_err();
        assert!(matches!(bad, Error::TriangleInequality { i: 0, j: 1, k: 2 }));
        assert!(matches!(
            parse_metric_matrix("0 1 1\n2 0 1\n1 1 0").unwrap_err(),
            Error::Asymmetric(0, 1)
        ));
        assert!(parse_metric_matrix("metric 3\n0 1 1\n1 0 1").is_err());
        assert!(parse_metric_matrix("0 1\n1 1").is_err());
    }

    #[test]
    fn euclidean_distances_form_a_metric() {
        let ps = crate::gen::uniform(60, 3, 4);
        let m = MetricMatrix::from_metric(&ps).unwrap();
        assert_eq!(m.dist(3, 7), ps.dist(3, 7));
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.1), "0.1");
        assert_eq!(format_real(1.0), "1.0");
        assert_eq!(format_real(f64::INFINITY), "unbounded");
        assert_eq!(format_real(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    proptest! {
        #[test]
        fn points_round_trip(rows in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..40)) {
            let rows: Vec<Vec<f64>> = rows.into_iter().map(|(a, b)| vec![a, b]).collect();
            if let Ok(ps) = PointSet::new(2, rows) {
                prop_assert_eq!(parse_points(&write_points(&ps)).unwrap(), ps);
            }
        }

        #[test]
        fn graph_round_trip(n in 1usize..30, raw in prop::collection::vec((0usize..30, 0usize..30), 0..80)) {
            let mut g = OrientedGraph::empty(n);
            for (u, v) in raw {
                let _ = g.add_edge(u % n, v % n);
            }
            prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        }
    }
}
