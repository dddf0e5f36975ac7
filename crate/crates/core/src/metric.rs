//! Problem instances: facilities with opening costs over a metric space.
//!
//! Three metric kinds are supported. Euclidean instances accept client
//! points anywhere in `R^D`; graph and matrix instances are finite
//! universes and clients must be one of their points.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::preprocess::LogradiusRange;

/// Caller-chosen facility identifier. Facilities are ordered by id, and every
/// tie in the hierarchy construction is broken towards the smaller id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacilityId(pub u64);

impl fmt::Display for FacilityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the universe.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    /// Coordinate vector of a euclidean instance.
    Coords(Vec<f64>),
    /// Dense vertex index of a graph instance.
    Vertex(usize),
    /// Row index of a matrix instance.
    Index(usize),
}

#[derive(Debug, Clone)]
pub enum Metric {
    Euclidean {
        dim: usize,
    },
    /// Shortest-path metric; all pairs are computed when the metric is built.
    Graph {
        names: Vec<String>,
        index: HashMap<String, usize>,
        edges: Vec<(usize, usize, f64)>,
        dist: Vec<f64>,
    },
    Matrix {
        n: usize,
        dist: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct HeapEntry(f64, usize);

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Metric {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPoint(
                "euclidean dimension must be >= 1".into(),
            ));
        }
        Ok(Metric::Euclidean { dim })
    }

    /// Builds a graph metric from vertex names and weighted undirected edges,
    /// running Dijkstra from every vertex.
    pub fn graph(names: Vec<String>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidPoint(format!("duplicate vertex {name}")));
            }
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(a, b, w) in &edges {
            if a >= n || b >= n {
                return Err(Error::InvalidPoint(format!("edge ({a},{b}) out of range")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidPoint(format!("bad edge weight {w}")));
            }
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        let mut dist = vec![f64::INFINITY; n * n];
        let mut heap = BinaryHeap::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0.0;
            heap.push(HeapEntry(0.0, s));
            while let Some(HeapEntry(d, u)) = heap.pop() {
                if d > row[u] {
                    continue;
                }
                for &(v, w) in &adj[u] {
                    let nd = d + w;
                    if nd < row[v] {
                        row[v] = nd;
                        heap.push(HeapEntry(nd, v));
                    }
                }
            }
        }
        Ok(Metric::Graph {
            names,
            index,
            edges,
            dist,
        })
    }

    /// Builds an explicit distance matrix over `0..n`. Every unordered pair
    /// must be given; repeated entries must agree.
    pub fn matrix(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut dist = vec![f64::NAN; n * n];
        for i in 0..n {
            dist[i * n + i] = 0.0;
        }
        for &(i, j, d) in entries {
            if i >= n || j >= n {
                return Err(Error::InvalidPoint(format!("dist ({i},{j}) out of range")));
            }
            if !(d >= 0.0 && d.is_finite()) || (i == j && d != 0.0) {
                return Err(Error::NotAMetric(format!("bad entry d({i},{j}) = {d}")));
            }
            for (a, b) in [(i, j), (j, i)] {
                let slot = &mut dist[a * n + b];
                if !slot.is_nan() && *slot != d {
                    return Err(Error::NotAMetric(format!(
                        "conflicting entries for d({i},{j})"
                    )));
                }
                *slot = d;
            }
        }
        if let Some(k) = dist.iter().position(|d| d.is_nan()) {
            return Err(Error::InvalidPoint(format!(
                "missing distance d({},{})",
                k / n,
                k % n
            )));
        }
        Ok(Metric::Matrix { n, dist })
    }

    /// Number of points in a finite universe; `None` for euclidean space.
    pub fn universe_size(&self) -> Option<usize> {
        match self {
            Metric::Euclidean { .. } => None,
            Metric::Graph { names, .. } => Some(names.len()),
            Metric::Matrix { n, .. } => Some(*n),
        }
    }

    /// All points of a finite universe.
    pub fn universe(&self) -> Option<Vec<Point>> {
        match self {
            Metric::Euclidean { .. } => None,
            Metric::Graph { names, .. } => Some((0..names.len()).map(Point::Vertex).collect()),
            Metric::Matrix { n, .. } => Some((0..*n).map(Point::Index).collect()),
        }
    }

    /// Largest pairwise distance of a finite universe.
    pub fn finite_diameter(&self) -> Option<f64> {
        match self {
            Metric::Euclidean { .. } => None,
            Metric::Graph { dist, .. } | Metric::Matrix { dist, .. } => {
                Some(dist.iter().copied().fold(0.0, f64::max))
            }
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match (self, p) {
            (Metric::Euclidean { dim }, Point::Coords(c)) => {
                if c.len() != *dim {
                    return Err(Error::InvalidPoint(format!(
                        "expected {dim} coordinates, got {}",
                        c.len()
                    )));
                }
                if c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidPoint("non-finite coordinate".into()));
                }
                Ok(())
            }
            (Metric::Graph { names, .. }, Point::Vertex(v)) if *v < names.len() => Ok(()),
            (Metric::Matrix { n, .. }, Point::Index(i)) if *i < *n => Ok(()),
            _ => Err(Error::InvalidPoint(format!(
                "{p:?} does not belong to this metric"
            ))),
        }
    }

    /// Distance between two points already validated by `check_point`.
    pub(crate) fn dist(&self, a: &Point, b: &Point) -> f64 {
        match (self, a, b) {
            (Metric::Euclidean { .. }, Point::Coords(x), Point::Coords(y)) => x
                .iter()
                .zip(y)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt(),
            (Metric::Graph { names, dist, .. }, Point::Vertex(u), Point::Vertex(v)) => {
                dist[u * names.len() + v]
            }
            (Metric::Matrix { n, dist }, Point::Index(i), Point::Index(j)) => dist[i * n + j],
            _ => unreachable!("points were validated against the metric"),
        }
    }

    /// Parses the coordinate tokens of a point for this metric kind.
    pub fn parse_point(&self, tokens: &[&str]) -> Result<Point> {
        let p = match self {
            Metric::Euclidean { .. } => {
                let coords = tokens
                    .iter()
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| Error::InvalidPoint(format!("bad coordinate {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Point::Coords(coords)
            }
            Metric::Graph { index, .. } => match tokens {
                [name] => Point::Vertex(
                    *index
                        .get(*name)
                        .ok_or_else(|| Error::InvalidPoint(format!("unknown vertex {name}")))?,
                ),
                _ => return Err(Error::InvalidPoint("expected one vertex name".into())),
            },
            Metric::Matrix { .. } => match tokens {
                [i] => Point::Index(
                    i.parse()
                        .map_err(|_| Error::InvalidPoint(format!("bad index {i:?}")))?,
                ),
                _ => return Err(Error::InvalidPoint("expected one matrix index".into())),
            },
        };
        self.check_point(&p)?;
        Ok(p)
    }

    /// Renders a point in the token form accepted by `parse_point`.
    pub fn format_point(&self, p: &Point) -> String {
        match (self, p) {
            (Metric::Graph { names, .. }, Point::Vertex(v)) => names[*v].clone(),
            (_, Point::Coords(c)) => c
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            (_, Point::Vertex(v)) | (_, Point::Index(v)) => v.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Facility {
    pub id: FacilityId,
    pub point: Point,
    pub cost: u64,
}

/// A validated problem instance. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Instance {
    metric: Metric,
    facilities: Vec<Facility>,
    diameter_bound: f64,
    kappa_hint: Option<u32>,
    f_min: u64,
    range: LogradiusRange,
}

impl Instance {
    /// Validates and assembles an instance. Facilities are sorted by id.
    pub fn new(
        metric: Metric,
        mut facilities: Vec<Facility>,
        diameter_bound: f64,
        kappa_hint: Option<u32>,
    ) -> Result<Self> {
        if facilities.is_empty() {
            return Err(Error::parse(0, "at least one facility is required"));
        }
        if !(diameter_bound >= 0.0 && diameter_bound.is_finite()) {
            return Err(Error::InstanceTooLarge(format!(
                "diameter bound {diameter_bound} is not a finite nonnegative number"
            )));
        }
        facilities.sort_by_key(|f| f.id);
        for w in facilities.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::parse(
                    0,
                    format!("duplicate facility id {}", w[0].id),
                ));
            }
        }
        for f in &facilities {
            if f.cost < 1 {
                return Err(Error::InvalidCost {
                    facility: f.id.0,
                    cost: f.cost.to_string(),
                });
            }
            metric.check_point(&f.point)?;
        }
        let f_min = facilities.iter().map(|f| f.cost).min().unwrap_or(1);
        let range = LogradiusRange::from_bounds(f_min, diameter_bound)?;
        let inst = Instance {
            metric,
            facilities,
            diameter_bound,
            kappa_hint,
            f_min,
            range,
        };
        inst.validate_diameter()?;
        if matches!(inst.metric, Metric::Matrix { .. }) {
            if let Some(v) = inst.metric_violations().into_iter().next() {
                return Err(Error::NotAMetric(v));
            }
        }
        Ok(inst)
    }

    fn validate_diameter(&self) -> Result<()> {
        let w = self.diameter_bound;
        let violation = |a: String, b: String, d: f64| Error::DiameterViolation {
            a,
            b,
            distance: d,
            bound: w,
        };
        if let Some(universe) = self.metric.universe() {
            for (i, p) in universe.iter().enumerate() {
                for q in &universe[i + 1..] {
                    let d = self.metric.dist(p, q);
                    if !(d <= w) {
                        return Err(violation(
                            self.metric.format_point(p),
                            self.metric.format_point(q),
                            d,
                        ));
                    }
                }
            }
        } else {
            for (i, a) in self.facilities.iter().enumerate() {
                for b in &self.facilities[i + 1..] {
                    let d = self.metric.dist(&a.point, &b.point);
                    if !(d <= w) {
                        return Err(violation(
                            format!("facility {}", a.id),
                            format!("facility {}", b.id),
                            d,
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Metric-axiom violations over the finite universe (or the facility
    /// points of a euclidean instance). Triangle inequality is checked
    /// exactly for graph and matrix metrics and to 1e-9 relative for
    /// euclidean distances.
    pub fn metric_violations(&self) -> Vec<String> {
        let points: Vec<Point> = self
            .metric
            .universe()
            .unwrap_or_else(|| self.facilities.iter().map(|f| f.point.clone()).collect());
        let tol = match self.metric {
            Metric::Euclidean { .. } => 1e-9,
            _ => 0.0,
        };
        let mut out = Vec::new();
        for a in &points {
            if self.metric.dist(a, a) != 0.0 {
                out.push(format!("d({a:?},{a:?}) != 0"));
            }
            for b in &points {
                let ab = self.metric.dist(a, b);
                if ab != self.metric.dist(b, a) {
                    out.push(format!("asymmetric d({a:?},{b:?})"));
                }
                for c in &points {
                    let ac = self.metric.dist(a, c);
                    let bound = ab + self.metric.dist(b, c);
                    if ac > bound * (1.0 + tol) {
                        out.push(format!("triangle violated at {a:?},{b:?},{c:?}"));
                    }
                }
            }
        }
        out
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn facilities(&self) -> &[Facility] {
        &self.facilities
    }

    pub fn facility(&self, idx: usize) -> &Facility {
        &self.facilities[idx]
    }

    pub fn diameter_bound(&self) -> f64 {
        self.diameter_bound
    }

    pub fn kappa_hint(&self) -> Option<u32> {
        self.kappa_hint
    }

    pub fn f_min(&self) -> u64 {
        self.f_min
    }

    pub fn logradius_range(&self) -> LogradiusRange {
        self.range
    }

    /// `d(a, b)`, rejecting points that do not belong to this metric.
    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        self.metric.check_point(a)?;
        self.metric.check_point(b)?;
        Ok(self.metric.dist(a, b))
    }

    pub(crate) fn dist(&self, a: &Point, b: &Point) -> f64 {
        self.metric.dist(a, b)
    }

    /// Facilities whose opening cost exceeds `5^rho_max`; they never enter
    /// the pair hierarchy.
    pub fn unusable_facilities(&self) -> Vec<FacilityId> {
        let top = self.range.radius(self.range.rho_max);
        self.facilities
            .iter()
            .filter(|f| f.cost > top)
            .map(|f| f.id)
            .collect()
    }

    /// Serializes the instance in the line-based instance file format.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        match &self.metric {
            Metric::Euclidean { dim } => s.push_str(&format!(
                "metric euclidean {dim} W {}\n",
                self.diameter_bound
            )),
            Metric::Graph { .. } => {
                s.push_str(&format!("metric graph W {}\n", self.diameter_bound))
            }
            Metric::Matrix { .. } => {
                s.push_str(&format!("metric matrix W {}\n", self.diameter_bound))
            }
        }
        if let Some(k) = self.kappa_hint {
            s.push_str(&format!("kappa {k}\n"));
        }
        match &self.metric {
            Metric::Graph { names, edges, .. } => {
                for name in names {
                    s.push_str(&format!("vertex {name}\n"));
                }
                for &(a, b, w) in edges {
                    s.push_str(&format!("edge {} {} {w}\n", names[a], names[b]));
                }
            }
            Metric::Matrix { n, dist } => {
                for i in 0..*n {
                    for j in i + 1..*n {
                        s.push_str(&format!("dist {i} {j} {}\n", dist[i * n + j]));
                    }
                }
            }
            Metric::Euclidean { .. } => {}
        }
        for f in &self.facilities {
            s.push_str(&format!(
                "facility {} {} cost {}\n",
                f.id,
                self.metric.format_point(&f.point),
                f.cost
            ));
        }
        s
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

enum Kind {
    Euclidean(usize),
    Graph,
    Matrix,
}

/// Parses an instance file.
///
/// ```text
/// metric euclidean 1 W 30
/// facility 0 0 cost 1
/// facility 30 30 cost 1
/// ```
pub fn load_instance(text: &str) -> Result<Instance> {
    let mut kind = None;
    let mut w = 0.0;
    let mut kappa = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut edges_raw: Vec<(usize, String, String, f64)> = Vec::new();
    let mut dists: Vec<(usize, usize, f64)> = Vec::new();
    let mut facilities_raw: Vec<(usize, u64, Vec<String>, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::parse(lineno, msg);
        if kind.is_none() {
            if toks[0] != "metric" {
                return Err(bad("first line must be the `metric` header"));
            }
            let (k, rest) = match toks.get(1).copied() {
                Some("euclidean") => {
                    let d: usize = toks
                        .get(2)
                        .and_then(|t| t.parse().ok())
                        .filter(|d| *d >= 1)
                        .ok_or_else(|| bad("euclidean needs a positive dimension"))?;
                    (Kind::Euclidean(d), &toks[3..])
                }
                Some("graph") => (Kind::Graph, &toks[2..]),
                Some("matrix") => (Kind::Matrix, &toks[2..]),
                _ => return Err(bad("unknown metric kind")),
            };
            match rest {
                ["W", v] => {
                    w = v
                        .parse::<f64>()
                        .ok()
                        .filter(|w| w.is_finite() && *w >= 0.0)
                        .ok_or_else(|| bad("W must be a nonnegative decimal"))?;
                }
                _ => return Err(bad("header must end with `W <decimal>`")),
            }
            kind = Some(k);
            continue;
        }
        match toks[0] {
            "kappa" => {
                kappa = Some(
                    toks.get(1)
                        .and_then(|t| t.parse().ok())
                        .filter(|_| toks.len() == 2)
                        .ok_or_else(|| bad("kappa needs one nonnegative integer"))?,
                );
            }
            "vertex" if matches!(kind, Some(Kind::Graph)) => {
                if toks.len() != 2 {
                    return Err(bad("vertex needs one id"));
                }
                vertices.push(toks[1].to_string());
            }
            "edge" if matches!(kind, Some(Kind::Graph)) => {
                if toks.len() != 4 {
                    return Err(bad("edge needs two ids and a weight"));
                }
                let wt: f64 = toks[3]
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite() && *x >= 0.0)
                    .ok_or_else(|| bad("edge weight must be a nonnegative decimal"))?;
                edges_raw.push((lineno, toks[1].to_string(), toks[2].to_string(), wt));
            }
            "dist" if matches!(kind, Some(Kind::Matrix)) => {
                if toks.len() != 4 {
                    return Err(bad("dist needs two indices and a distance"));
                }
                let a = toks[1].parse().map_err(|_| bad("bad matrix index"))?;
                let b = toks[2].parse().map_err(|_| bad("bad matrix index"))?;
                let d: f64 = toks[3]
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite() && *x >= 0.0)
                    .ok_or_else(|| bad("distance must be a nonnegative decimal"))?;
                dists.push((a, b, d));
            }
            "facility" => {
                let n = toks.len();
                if n < 5 || toks[n - 2] != "cost" {
                    return Err(bad("expected `facility <id> <coords...> cost <int>`"));
                }
                let id = toks[1]
                    .parse()
                    .map_err(|_| bad("facility id must be an integer"))?;
                let coords = toks[2..n - 2].iter().map(|s| s.to_string()).collect();
                facilities_raw.push((lineno, id, coords, toks[n - 1].to_string()));
            }
            other => return Err(bad(&format!("unexpected record `{other}`"))),
        }
    }

    let metric = match kind {
        None => return Err(Error::parse(0, "missing `metric` header")),
        Some(Kind::Euclidean(d)) => Metric::euclidean(d)?,
        Some(Kind::Graph) => {
            let index: HashMap<&str, usize> = vertices
                .iter()
                .enumerate()
                .map(|(i, v)| (v.as_str(), i))
                .collect();
            let mut edges = Vec::with_capacity(edges_raw.len());
            for (lineno, a, b, wt) in &edges_raw {
                let lookup = |v: &String| {
                    index
                        .get(v.as_str())
                        .copied()
                        .ok_or_else(|| Error::parse(*lineno, format!("unknown vertex {v}")))
                };
                edges.push((lookup(a)?, lookup(b)?, *wt));
            }
            Metric::graph(vertices, edges).map_err(|e| Error::parse(0, e.to_string()))?
        }
        Some(Kind::Matrix) => {
            let n = dists
                .iter()
                .flat_map(|&(a, b, _)| [a, b])
                .chain(
                    facilities_raw
                        .iter()
                        .filter_map(|(_, _, c, _)| c.first().and_then(|t| t.parse::<usize>().ok())),
                )
                .max()
                .map_or(0, |m| m + 1);
            Metric::matrix(n, &dists).map_err(|e| match e {
                Error::NotAMetric(_) => e,
                other => Error::parse(0, other.to_string()),
            })?
        }
    };

    if facilities_raw.is_empty() {
        return Err(Error::parse(0, "at least one facility is required"));
    }
    let mut facilities = Vec::with_capacity(facilities_raw.len());
    for (lineno, id, coords, cost) in facilities_raw {
        let toks: Vec<&str> = coords.iter().map(String::as_str).collect();
        let point = metric
            .parse_point(&toks)
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
        let cost = match cost.parse::<i64>() {
            Ok(c) if c >= 1 => c as u64,
            Ok(_) => return Err(Error::InvalidCost { facility: id, cost }),
            Err(_) => match cost.parse::<f64>() {
                Ok(c) if c < 1.0 => return Err(Error::InvalidCost { facility: id, cost }),
                _ => return Err(Error::parse(lineno, "cost must be an integer")),
            },
        };
        facilities.push(Facility {
            id: FacilityId(id),
            point,
            cost,
        });
    }
    Instance::new(metric, facilities, w, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = "metric euclidean 1 W 30\nfacility 0 0 cost 1\nfacility 30 30 cost 1\n";

    #[test]
    fn euclidean_distances() {
        let inst = load_instance(LINE).unwrap();
        let a = Point::Coords(vec![0.0]);
        let b = Point::Coords(vec![30.0]);
        assert_eq!(inst.distance(&a, &a).unwrap(), 0.0);
        assert_eq!(inst.distance(&a, &b).unwrap(), 30.0);
        assert_eq!(inst.f_min(), 1);
        assert_eq!(inst.facilities().len(), 2);
    }

    #[test]
    fn graph_path_distance() {
        let text = "metric graph W 5\nvertex a\nvertex b\nvertex c\n\
                    edge a b 2\nedge b c 3\nfacility 1 a cost 1\n";
        let inst = load_instance(text).unwrap();
        let p = inst.metric().parse_point(&["a"]).unwrap();
        let q = inst.metric().parse_point(&["c"]).unwrap();
        assert_eq!(inst.distance(&p, &q).unwrap(), 5.0);
    }

    #[test]
    fn wrong_point_kind_is_rejected() {
        let inst = load_instance(LINE).unwrap();
        let err = inst
            .distance(&Point::Vertex(0), &Point::Coords(vec![0.0]))
            .unwrap_err();
        assert!(matches!(err, Error::InvalidPoint(_)));
        let err = inst
            .distance(&Point::Coords(vec![0.0, 1.0]), &Point::Coords(vec![0.0]))
            .unwrap_err();
        assert!(matches!(err, Error::InvalidPoint(_)));
    }

    #[test]
    fn zero_cost_is_invalid() {
        let err = load_instance("metric euclidean 1 W 30\nfacility 0 0 cost 0\n").unwrap_err();
        assert!(matches!(err, Error::InvalidCost { facility: 0, .. }));
        let err = load_instance("metric euclidean 1 W 30\nfacility 0 0 cost -3\n").unwrap_err();
        assert!(matches!(err, Error::InvalidCost { .. }));
    }

    #[test]
    fn empty_facility_list_is_parse_error() {
        let err = load_instance("metric euclidean 1 W 30\n# nothing\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err =
            load_instance("metric euclidean 1 W 30\nfacility 0 0 cost 1\nbogus 1\n").unwrap_err();
        assert_eq!(err, Error::parse(3, "unexpected record `bogus`"));
    }

    #[test]
    fn diameter_violation() {
        let err =
            load_instance("metric euclidean 1 W 10\nfacility 0 0 cost 1\nfacility 1 30 cost 1\n")
                .unwrap_err();
        assert!(matches!(err, Error::DiameterViolation { .. }));
        let err = load_instance(
            "metric graph W 4\nvertex a\nvertex b\nvertex c\nedge a b 2\nedge b c 3\nfacility 1 a cost 1\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::DiameterViolation { .. }));
    }

    #[test]
    fn huge_diameter_is_rejected() {
        let err = load_instance("metric euclidean 1 W 1e30\nfacility 0 0 cost 1\n").unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge(_)));
    }

    #[test]
    fn matrix_must_be_metric() {
        let ok = "metric matrix W 3\ndist 0 1 1\ndist 1 2 2\ndist 0 2 3\nfacility 0 0 cost 1\n";
        assert!(load_instance(ok).is_ok());
        let bad = "metric matrix W 9\ndist 0 1 1\ndist 1 2 2\ndist 0 2 9\nfacility 0 0 cost 1\n";
        assert!(matches!(
            load_instance(bad).unwrap_err(),
            Error::NotAMetric(_)
        ));
        let missing = "metric matrix W 9\ndist 0 1 1\ndist 1 2 2\nfacility 0 0 cost 1\n";
        assert!(matches!(
            load_instance(missing).unwrap_err(),
            Error::Parse { .. }
        ));
    }

    #[test]
    fn unusable_facilities_are_flagged() {
        let inst =
            load_instance("metric euclidean 1 W 4\nfacility 0 0 cost 1\nfacility 1 4 cost 100\n")
                .unwrap();
        assert_eq!(inst.unusable_facilities(), vec![FacilityId(1)]);
    }

    #[test]
    fn file_round_trip() {
        let text = "metric graph W 5\nkappa 2\nvertex a\nvertex b\nvertex c\n\
                    edge a b 2\nedge b c 3\nfacility 4 c cost 2\nfacility 1 a cost 1\n";
        let inst = load_instance(text).unwrap();
        let again = load_instance(&inst.to_file_string()).unwrap();
        assert_eq!(inst.to_file_string(), again.to_file_string());
        assert_eq!(again.kappa_hint(), Some(2));
        assert_eq!(again.facilities()[0].id, FacilityId(1));
    }
}
