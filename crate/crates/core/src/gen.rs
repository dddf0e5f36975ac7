//! Seeded instance and workload generators.
//!
//! Randomness comes from [`XorShift64Star`], a fully specified generator, so
//! the same spec file yields byte-identical instance and event files on every
//! platform.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::events::Event;
use crate::metric::{Facility, FacilityId, Instance, Metric, Point};

/// xorshift64* (Vigna 2016) with a SplitMix64-scrambled seed.
///
/// `below(n)` is `next_u64() % n`; `unit()` takes the top 53 bits.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        XorShift64Star {
            state: if z == 0 { 0x2545_F491_4F6C_DD1D } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricChoice {
    Euclidean,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Integer points uniform in `[0, extent]^dim`.
    Uniform,
    /// Integer points around `blobs` uniform centers, within `blob_radius`
    /// per coordinate.
    Blobs,
    /// `rows x cols` grid graph.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaChoice {
    /// 1 for the line, 3 for the plane, none otherwise.
    Auto,
    None,
    Fixed(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub seed: u64,
    pub metric: MetricChoice,
    pub dim: usize,
    pub layout: Layout,
    pub extent: u64,
    pub blobs: usize,
    pub blob_radius: u64,
    pub rows: usize,
    pub cols: usize,
    /// 1 gives unit edge weights; otherwise weights are uniform in `1..=max_weight`.
    pub max_weight: u64,
    pub facilities: usize,
    pub cost_min: u64,
    pub cost_max: u64,
    pub events: usize,
    /// Relative weights of insert, delete and query events.
    pub mix: [f64; 3],
    /// Fraction of queries that ask for the full solution.
    pub solution_rate: f64,
    pub kappa: KappaChoice,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        WorkloadSpec {
            seed: 1,
            metric: MetricChoice::Euclidean,
            dim: 2,
            layout: Layout::Uniform,
            extent: 1000,
            blobs: 4,
            blob_radius: 50,
            rows: 8,
            cols: 8,
            max_weight: 1,
            facilities: 20,
            cost_min: 1,
            cost_max: 20,
            events: 100,
            mix: [0.6, 0.3, 0.1],
            solution_rate: 0.25,
            kappa: KappaChoice::Auto,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidSpec(format!("bad value {v:?} for {key}")))
}

impl WorkloadSpec {
    /// Parses `key=value` lines; unset keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = WorkloadSpec::default();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidSpec(format!("expected key=value, got {line:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "seed" => s.seed = parse_num(k, v)?,
                "metric" => {
                    s.metric = match v {
                        "euclidean" => MetricChoice::Euclidean,
                        "graph" => MetricChoice::Graph,
                        _ => return Err(Error::InvalidSpec(format!("unknown metric {v}"))),
                    }
                }
                "dim" => s.dim = parse_num(k, v)?,
                "layout" => {
                    s.layout = match v {
                        "uniform" => Layout::Uniform,
                        "blobs" => Layout::Blobs,
                        "grid" => Layout::Grid,
                        _ => return Err(Error::InvalidSpec(format!("unknown layout {v}"))),
                    }
                }
                "extent" => s.extent = parse_num(k, v)?,
                "blobs" => s.blobs = parse_num(k, v)?,
                "blob_radius" => s.blob_radius = parse_num(k, v)?,
                "rows" => s.rows = parse_num(k, v)?,
                "cols" => s.cols = parse_num(k, v)?,
                "max_weight" => s.max_weight = parse_num(k, v)?,
                "facilities" => s.facilities = parse_num(k, v)?,
                "cost_min" => s.cost_min = parse_num(k, v)?,
                "cost_max" => s.cost_max = parse_num(k, v)?,
                "events" => s.events = parse_num(k, v)?,
                "mix" => {
                    let parts: Vec<f64> = v
                        .split(',')
                        .map(|p| parse_num(k, p.trim()))
                        .collect::<Result<_>>()?;
                    s.mix = parts
                        .try_into()
                        .map_err(|_| Error::InvalidSpec("mix needs three weights".into()))?;
                }
                "solution_rate" => s.solution_rate = parse_num(k, v)?,
                "kappa" => {
                    s.kappa = match v {
                        "auto" => KappaChoice::Auto,
                        "none" => KappaChoice::None,
                        _ => KappaChoice::Fixed(parse_num(k, v)?),
                    }
                }
                _ => return Err(Error::InvalidSpec(format!("unknown key {k}"))),
            }
        }
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        let metric = match self.metric {
            MetricChoice::Euclidean => "euclidean",
            MetricChoice::Graph => "graph",
        };
        let layout = match self.layout {
            Layout::Uniform => "uniform",
            Layout::Blobs => "blobs",
            Layout::Grid => "grid",
        };
        let kappa = match self.kappa {
            KappaChoice::Auto => "auto".to_string(),
            KappaChoice::None => "none".to_string(),
            KappaChoice::Fixed(k) => k.to_string(),
        };
        format!(
            "seed={}\nmetric={metric}\ndim={}\nlayout={layout}\nextent={}\nblobs={}\n\
             blob_radius={}\nrows={}\ncols={}\nmax_weight={}\nfacilities={}\ncost_min={}\n\
             cost_max={}\nevents={}\nmix={},{},{}\nsolution_rate={}\nkappa={kappa}\n",
            self.seed,
            self.dim,
            self.extent,
            self.blobs,
            self.blob_radius,
            self.rows,
            self.cols,
            self.max_weight,
            self.facilities,
            self.cost_min,
            self.cost_max,
            self.events,
            self.mix[0],
            self.mix[1],
            self.mix[2],
            self.solution_rate,
        )
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.into()));
        if self.facilities == 0 {
            return bad("at least one facility is required");
        }
        if self.cost_min < 1 || self.cost_min > self.cost_max {
            return bad("costs need 1 <= cost_min <= cost_max");
        }
        if self.mix.iter().any(|w| !(*w >= 0.0)) || self.mix.iter().sum::<f64>() <= 0.0 {
            return bad("mix weights must be nonnegative with a positive sum");
        }
        if !(0.0..=1.0).contains(&self.solution_rate) {
            return bad("solution_rate must lie in [0, 1]");
        }
        match (self.metric, self.layout) {
            (MetricChoice::Euclidean, Layout::Grid) => bad("grid layout needs metric=graph"),
            (MetricChoice::Graph, Layout::Uniform | Layout::Blobs) => {
                bad("graph metric needs layout=grid")
            }
            (MetricChoice::Euclidean, _) if self.dim == 0 => bad("dim must be >= 1"),
            (MetricChoice::Euclidean, Layout::Blobs) if self.blobs == 0 => {
                bad("blobs must be >= 1")
            }
            (MetricChoice::Graph, _) if self.rows == 0 || self.cols == 0 => {
                bad("grid needs rows, cols >= 1")
            }
            (MetricChoice::Graph, _) if self.max_weight == 0 => bad("max_weight must be >= 1"),
            (MetricChoice::Graph, _) if self.facilities > self.rows * self.cols => {
                bad("more facilities than grid vertices")
            }
            _ => Ok(()),
        }
    }

    fn kappa_hint(&self) -> Option<u32> {
        match (self.kappa, self.metric, self.dim) {
            (KappaChoice::Fixed(k), _, _) => Some(k),
            (KappaChoice::Auto, MetricChoice::Euclidean, 1) => Some(1),
            (KappaChoice::Auto, MetricChoice::Euclidean, 2) => Some(3),
            _ => None,
        }
    }

    fn centers(&self) -> Vec<Vec<u64>> {
        let mut rng = XorShift64Star::new(self.seed ^ 0xC3A5_C85C_97CB_3127);
        (0..self.blobs)
            .map(|_| (0..self.dim).map(|_| rng.range(0, self.extent)).collect())
            .collect()
    }

    fn sample_coords(&self, rng: &mut XorShift64Star, centers: &[Vec<u64>]) -> Point {
        let coords = match self.layout {
            Layout::Blobs => {
                let c = &centers[rng.below(centers.len() as u64) as usize];
                c.iter()
                    .map(|&x| {
                        let lo = x.saturating_sub(self.blob_radius);
                        let hi = (x + self.blob_radius).min(self.extent);
                        rng.range(lo, hi) as f64
                    })
                    .collect()
            }
            _ => (0..self.dim)
                .map(|_| rng.range(0, self.extent) as f64)
                .collect(),
        };
        Point::Coords(coords)
    }
}

fn grid_metric(spec: &WorkloadSpec, rng: &mut XorShift64Star) -> Result<Metric> {
    let (rows, cols) = (spec.rows, spec.cols);
    let names = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| format!("v{r}_{c}")))
        .collect();
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1, rng.range(1, spec.max_weight) as f64));
            }
            if r + 1 < rows {
                edges.push((v, v + cols, rng.range(1, spec.max_weight) as f64));
            }
        }
    }
    Metric::graph(names, edges)
}

/// Generates an instance. Euclidean instances use the diameter of the
/// `[0, extent]^dim` box as `W`; grid instances use the exact graph diameter.
pub fn gen_instance(spec: &WorkloadSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = XorShift64Star::new(spec.seed);
    let (metric, w, points) = match spec.metric {
        MetricChoice::Euclidean => {
            let centers = spec.centers();
            let points: Vec<Point> = (0..spec.facilities)
                .map(|_| spec.sample_coords(&mut rng, &centers))
                .collect();
            let e = spec.extent as f64;
            (
                Metric::euclidean(spec.dim)?,
                (e * e * spec.dim as f64).sqrt(),
                points,
            )
        }
        MetricChoice::Graph => {
            let metric = grid_metric(spec, &mut rng)?;
            let w = metric.finite_diameter().unwrap_or(0.0);
            let mut pool: Vec<usize> = (0..spec.rows * spec.cols).collect();
            let mut points = Vec::with_capacity(spec.facilities);
            for i in 0..spec.facilities {
                let j = i + rng.below((pool.len() - i) as u64) as usize;
                pool.swap(i, j);
                points.push(Point::Vertex(pool[i]));
            }
            (metric, w, points)
        }
    };
    let facilities = points
        .into_iter()
        .enumerate()
        .map(|(i, point)| Facility {
            id: FacilityId(i as u64),
            point,
            cost: rng.range(spec.cost_min, spec.cost_max),
        })
        .collect();
    Instance::new(metric, facilities, w, spec.kappa_hint())
}

/// Generates an event stream. Deletes only name live clients; a delete drawn
/// while nobody is live becomes an insert.
pub fn gen_events(spec: &WorkloadSpec, instance: &Instance) -> Result<Vec<Event>> {
    spec.validate()?;
    let mut rng = XorShift64Star::new(spec.seed.wrapping_add(0xD1B5_4A32_D192_ED03));
    let centers = spec.centers();
    let total: f64 = spec.mix.iter().sum();
    let mut live: Vec<String> = Vec::new();
    let mut next_id = 0usize;
    let mut out = Vec::with_capacity(spec.events);
    for _ in 0..spec.events {
        let u = rng.unit() * total;
        let kind = if u < spec.mix[0] {
            0
        } else if u < spec.mix[0] + spec.mix[1] {
            1
        } else {
            2
        };
        let ev = match kind {
            1 if !live.is_empty() => {
                let i = rng.below(live.len() as u64) as usize;
                Event::Delete {
                    id: live.swap_remove(i),
                }
            }
            2 => {
                if rng.unit() < spec.solution_rate {
                    Event::SolutionQuery
                } else {
                    Event::CostQuery
                }
            }
            _ => {
                let point = match instance.metric() {
                    Metric::Euclidean { .. } => spec.sample_coords(&mut rng, &centers),
                    m => Point::Vertex(rng.below(m.universe_size().unwrap_or(1) as u64) as usize),
                };
                let id = format!("c{next_id}");
                next_id += 1;
                live.push(id.clone());
                Event::Insert { id, point }
            }
        };
        out.push(ev);
    }
    Ok(out)
}

/// Instance file text with the seed recorded in a header comment.
pub fn instance_file(spec: &WorkloadSpec, instance: &Instance) -> String {
    format!("# seed {}\n{}", spec.seed, instance.to_file_string())
}

pub fn events_file(spec: &WorkloadSpec, instance: &Instance, events: &[Event]) -> String {
    let mut s = format!("# seed {}\n", spec.seed);
    for e in events {
        s.push_str(&e.to_line(instance.metric()));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::parse_events;
    use crate::metric::load_instance;

    #[test]
    fn xorshift_reference_values() {
        let mut a = XorShift64Star::new(7);
        let mut b = XorShift64Star::new(7);
        let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs[0], xs[1]);
        let mut c = XorShift64Star::new(7);
        for _ in 0..1000 {
            let u = c.unit();
            assert!((0.0..1.0).contains(&u));
            assert!(c.range(3, 5) >= 3);
        }
    }

    #[test]
    fn seed_stable_files() {
        let spec = WorkloadSpec {
            seed: 1,
            dim: 1,
            facilities: 2,
            ..WorkloadSpec::default()
        };
        let a = gen_instance(&spec).unwrap();
        let b = gen_instance(&spec).unwrap();
        assert_eq!(instance_file(&spec, &a), instance_file(&spec, &b));
        let ea = gen_events(&spec, &a).unwrap();
        let eb = gen_events(&spec, &b).unwrap();
        assert_eq!(events_file(&spec, &a, &ea), events_file(&spec, &b, &eb));
        assert!(instance_file(&spec, &a).starts_with("# seed 1\nmetric euclidean 1 W 1000\n"));
        let reloaded = load_instance(&instance_file(&spec, &a)).unwrap();
        assert_eq!(reloaded.to_file_string(), a.to_file_string());
    }

    #[test]
    fn grid_diameter() {
        let spec = WorkloadSpec {
            metric: MetricChoice::Graph,
            layout: Layout::Grid,
            rows: 4,
            cols: 4,
            facilities: 3,
            ..WorkloadSpec::default()
        };
        let inst = gen_instance(&spec).unwrap();
        assert_eq!(inst.diameter_bound(), 6.0);
        assert_eq!(inst.kappa_hint(), None);
    }

    #[test]
    fn blobs_carry_kappa_hint() {
        let spec = WorkloadSpec {
            layout: Layout::Blobs,
            dim: 2,
            ..WorkloadSpec::default()
        };
        assert_eq!(gen_instance(&spec).unwrap().kappa_hint(), Some(3));
    }

    #[test]
    fn pure_insert_stream() {
        let spec = WorkloadSpec {
            mix: [1.0, 0.0, 0.0],
            events: 50,
            ..WorkloadSpec::default()
        };
        let inst = gen_instance(&spec).unwrap();
        let evs = gen_events(&spec, &inst).unwrap();
        assert!(evs.iter().all(|e| matches!(e, Event::Insert { .. })));
    }

    #[test]
    fn deletes_never_outnumber_inserts() {
        let spec = WorkloadSpec {
            mix: [0.3, 0.6, 0.1],
            events: 300,
            ..WorkloadSpec::default()
        };
        let inst = gen_instance(&spec).unwrap();
        let evs = gen_events(&spec, &inst).unwrap();
        let (mut ins, mut del) = (0, 0);
        for e in &evs {
            match e {
                Event::Insert { .. } => ins += 1,
                Event::Delete { .. } => del += 1,
                _ => {}
            }
            assert!(del <= ins);
        }
        assert!(del > 0);
        let text = events_file(&spec, &inst, &evs);
        assert_eq!(parse_events(&text, inst.metric()).unwrap(), evs);
    }

    #[test]
    fn invalid_specs() {
        let zero = WorkloadSpec {
            facilities: 0,
            ..WorkloadSpec::default()
        };
        assert!(matches!(
            gen_instance(&zero).unwrap_err(),
            Error::InvalidSpec(_)
        ));
        assert!(WorkloadSpec::parse("bogus=1").is_err());
        assert!(WorkloadSpec::parse("mix=1,2").is_err());
    }

    #[test]
    fn spec_text_round_trip() {
        let spec = WorkloadSpec {
            seed: 99,
            metric: MetricChoice::Graph,
            layout: Layout::Grid,
            kappa: KappaChoice::Fixed(2),
            mix: [0.5, 0.25, 0.25],
            ..WorkloadSpec::default()
        };
        assert_eq!(WorkloadSpec::parse(&spec.to_text()).unwrap(), spec);
    }
}
