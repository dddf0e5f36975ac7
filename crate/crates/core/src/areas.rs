//! The laminar area family, realized implicitly.
//!
//! A point's home pair is the smallest-logradius pair whose ball
//! `B(j, 7 * 5^r)` contains it, nearest facility first. The point belongs to
//! the area of its home pair and of every ancestor. Areas are only
//! materialized by [`enumerate_areas`], for checks on finite universes.

use crate::error::{Error, Result};
use crate::metric::{FacilityId, Instance, Point};
use crate::preprocess::{pow5, NodeId, PairTree, AREA_FACTOR};

/// Closed-ball radius of the area of a pair at logradius `r`.
pub fn ball_radius(r: u32) -> f64 {
    (AREA_FACTOR * pow5(r)) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HomePair {
    pub node: NodeId,
    pub facility: FacilityId,
    pub logradius: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringPairs {
    /// Every pair whose ball contains the point, with its distance, in
    /// descent order.
    pub pairs: Vec<(NodeId, f64)>,
    /// Ball tests performed during the descent.
    pub visited: usize,
}

fn check_reach(p: &Point, tree: &PairTree, instance: &Instance) -> Result<()> {
    instance.metric().check_point(p)?;
    let root = &instance.facility(tree.node(tree.root()).facility).point;
    let d = instance.dist(p, root);
    if !(d <= instance.diameter_bound()) {
        return Err(Error::OutOfDiameter {
            distance: d,
            bound: instance.diameter_bound(),
        });
    }
    Ok(())
}

/// All pairs `(j, r)` with `d(p, j) <= 7 * 5^r`, found by descending from the
/// root and pruning at the first ball that misses `p`. A child ball lies
/// inside its parent ball, so no covering pair is skipped.
pub fn find_pairs(p: &Point, tree: &PairTree, instance: &Instance) -> Result<CoveringPairs> {
    check_reach(p, tree, instance)?;
    let mut pairs = Vec::new();
    let mut visited = 0;
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        visited += 1;
        let node = tree.node(v);
        let d = instance.dist(p, &instance.facility(node.facility).point);
        if d <= ball_radius(node.logradius) {
            pairs.push((v, d));
            stack.extend(node.children.iter().rev());
        }
    }
    Ok(CoveringPairs { pairs, visited })
}

/// Picks the home pair out of the covering pairs: minimum logradius, then
/// minimum distance, then minimum facility id.
pub fn select_home(covering: &CoveringPairs, tree: &PairTree, instance: &Instance) -> HomePair {
    let &(node, _) = covering
        .pairs
        .iter()
        .min_by(|(u, du), (v, dv)| {
            let (nu, nv) = (tree.node(*u), tree.node(*v));
            nu.logradius.cmp(&nv.logradius).then(du.total_cmp(dv)).then(
                instance
                    .facility(nu.facility)
                    .id
                    .cmp(&instance.facility(nv.facility).id),
            )
        })
        .expect("the root ball covers every point within W");
    let n = tree.node(node);
    HomePair {
        node,
        facility: instance.facility(n.facility).id,
        logradius: n.logradius,
    }
}

pub fn home_pair(p: &Point, tree: &PairTree, instance: &Instance) -> Result<HomePair> {
    Ok(home_pair_with_visits(p, tree, instance)?.0)
}

/// Like [`home_pair`], also returning the number of ball tests.
pub fn home_pair_with_visits(
    p: &Point,
    tree: &PairTree,
    instance: &Instance,
) -> Result<(HomePair, usize)> {
    let covering = find_pairs(p, tree, instance)?;
    Ok((select_home(&covering, tree, instance), covering.visited))
}

/// Members of one area, as indices into the enumerated universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaExtent {
    pub node: NodeId,
    pub members: Vec<usize>,
}

/// Materializes every area over a finite universe, in node order.
pub fn enumerate_areas(
    universe: &[Point],
    tree: &PairTree,
    instance: &Instance,
) -> Result<Vec<AreaExtent>> {
    let mut areas: Vec<AreaExtent> = tree
        .node_ids()
        .map(|node| AreaExtent {
            node,
            members: Vec::new(),
        })
        .collect();
    for (i, p) in universe.iter().enumerate() {
        let home = home_pair(p, tree, instance)?;
        for v in tree.root_path(home.node) {
            areas[v.0].members.push(i);
        }
    }
    Ok(areas)
}
