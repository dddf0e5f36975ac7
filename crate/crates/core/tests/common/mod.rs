#![allow(dead_code)]

use std::collections::BTreeSet;

use radii::areas::{ball_radius, AreaExtent};
use radii::gen::{KappaChoice, Layout, MetricChoice, WorkloadSpec};
use radii::metric::{Instance, Point};
use radii::preprocess::{NodeId, PairTree};

/// Workload used by the equivalence sweep: seeds rotate through the line,
/// clustered points in the plane, and weighted grid graphs.
pub fn sweep_spec(seed: u64) -> WorkloadSpec {
    let base = WorkloadSpec {
        seed,
        facilities: 5 + (seed % 46) as usize,
        cost_min: 1,
        cost_max: 1 + seed % 60,
        events: 100 + (seed % 201) as usize,
        mix: [0.55, 0.3, 0.15],
        solution_rate: 0.3,
        kappa: KappaChoice::Auto,
        ..WorkloadSpec::default()
    };
    match seed % 3 {
        0 => WorkloadSpec {
            dim: 1,
            layout: Layout::Uniform,
            extent: 50 + seed * 7,
            ..base
        },
        1 => WorkloadSpec {
            dim: 2,
            layout: Layout::Blobs,
            extent: 500,
            blobs: 1 + (seed % 5) as usize,
            blob_radius: 10 + seed % 40,
            ..base
        },
        _ => WorkloadSpec {
            metric: MetricChoice::Graph,
            layout: Layout::Grid,
            rows: 4 + (seed % 7) as usize,
            cols: 5 + (seed % 5) as usize,
            max_weight: 1 + seed % 4,
            facilities: (5 + (seed % 46) as usize).min(20),
            ..base
        },
    }
}

/// Home node found by scanning all pairs, independent of the tree descent.
pub fn scan_home(p: &Point, tree: &PairTree, inst: &Instance) -> Option<NodeId> {
    tree.node_ids()
        .filter_map(|v| {
            let n = tree.node(v);
            let f = inst.facility(n.facility);
            let d = inst.distance(p, &f.point).unwrap();
            (d <= ball_radius(n.logradius)).then_some((n.logradius, d, f.id, v))
        })
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)))
        .map(|t| t.3)
}

/// Areas built level by level: at each logradius the points newly inside the
/// union of balls go to the nearest level member, then each node absorbs its
/// children's areas.
pub fn voronoi_areas(universe: &[Point], tree: &PairTree, inst: &Instance) -> Vec<BTreeSet<usize>> {
    let mut areas = vec![BTreeSet::new(); tree.len()];
    let mut covered = vec![false; universe.len()];
    let range = tree.range();
    for r in range.levels() {
        let members: Vec<NodeId> = tree.level(r).collect();
        let mut now_covered = covered.clone();
        for (i, p) in universe.iter().enumerate() {
            let dists: Vec<(f64, NodeId)> = members
                .iter()
                .map(|&v| {
                    let f = inst.facility(tree.node(v).facility);
                    (inst.distance(p, &f.point).unwrap(), v)
                })
                .collect();
            let inside = dists.iter().any(|(d, _)| *d <= ball_radius(r));
            if inside {
                now_covered[i] = true;
            }
            if inside && !covered[i] {
                let &(_, v) = dists
                    .iter()
                    .min_by(|a, b| {
                        a.0.total_cmp(&b.0).then(
                            inst.facility(tree.node(a.1).facility)
                                .id
                                .cmp(&inst.facility(tree.node(b.1).facility).id),
                        )
                    })
                    .unwrap();
                areas[v.0].insert(i);
            }
        }
        for &v in &members {
            let absorbed: Vec<usize> = tree
                .node(v)
                .children
                .iter()
                .flat_map(|c| areas[c.0].iter().copied().collect::<Vec<_>>())
                .collect();
            areas[v.0].extend(absorbed);
        }
        covered = now_covered;
    }
    areas
}

/// Laminarity, ancestor-consistent containment and ball containment of a
/// materialized area family. Returns violation messages.
pub fn area_violations(
    areas: &[AreaExtent],
    universe: &[Point],
    tree: &PairTree,
    inst: &Instance,
) -> Vec<String> {
    let sets: Vec<BTreeSet<usize>> = areas
        .iter()
        .map(|a| a.members.iter().copied().collect())
        .collect();
    let mut out = Vec::new();
    for (u, a) in sets.iter().enumerate() {
        let n = tree.node(NodeId(u));
        let center = &inst.facility(n.facility).point;
        for &m in a {
            if inst.distance(&universe[m], center).unwrap() > ball_radius(n.logradius) {
                out.push(format!("containment: point {m} outside ball of node {u}"));
            }
        }
        for (v, b) in sets.iter().enumerate().skip(u + 1) {
            if a.is_disjoint(b) {
                continue;
            }
            let (uu, vv) = (NodeId(u), NodeId(v));
            let nested = (a.is_subset(b) && tree.is_ancestor_or_self(vv, uu))
                || (b.is_subset(a) && tree.is_ancestor_or_self(uu, vv));
            if !nested {
                out.push(format!(
                    "laminarity: nodes {u} and {v} overlap without nesting"
                ));
            }
        }
    }
    out
}

/// A finite sample universe for euclidean instances: facility locations plus
/// seeded points in the box.
pub fn sample_universe(inst: &Instance, extent: u64, count: usize, seed: u64) -> Vec<Point> {
    if let Some(u) = inst.metric().universe() {
        return u;
    }
    let dim = match inst.metric() {
        radii::metric::Metric::Euclidean { dim } => *dim,
        _ => unreachable!(),
    };
    let mut rng = radii::gen::XorShift64Star::new(seed);
    let mut pts: Vec<Point> = inst.facilities().iter().map(|f| f.point.clone()).collect();
    for _ in 0..count {
        pts.push(Point::Coords(
            (0..dim).map(|_| rng.range(0, extent) as f64).collect(),
        ));
    }
    pts
}
