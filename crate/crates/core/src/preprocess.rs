//! Logradius discretization, per-level separated facility sets and the pair
//! tree over them.
//!
//! Level `r` keeps a maximal subset `J_r` of the facilities with `f_j <= 5^r`
//! whose members are pairwise more than `5^(r+1)` apart. Each pair `(j, r)`
//! with `j` in `J_r` becomes a node whose parent is the member of `J_{r+1}`
//! nearest to `j`.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::metric::{FacilityId, Instance};

/// Largest supported logradius. `5^22` is the largest power of five that
/// `f64` holds exactly, and level `r` compares against `5^(r+1)`.
pub const MAX_LOGRADIUS: u32 = 21;

/// Multiplier of `5^r` in the area ball radius and in the area cost.
pub const AREA_FACTOR: u64 = 7;

pub fn pow5(r: u32) -> u64 {
    5u64.pow(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogradiusRange {
    pub rho_min: u32,
    pub rho_max: u32,
}

impl LogradiusRange {
    /// `rho_min` is the least `r` with `5^r >= f_min`; `rho_max` is the least
    /// `r >= rho_min` with `5^r >= w`.
    pub fn from_bounds(f_min: u64, w: f64) -> Result<Self> {
        let too_large = || {
            Error::InstanceTooLarge(format!(
                "logradius range for f_min={f_min}, W={w} exceeds {MAX_LOGRADIUS}"
            ))
        };
        let rho_min = (0..=MAX_LOGRADIUS)
            .find(|&r| pow5(r) >= f_min)
            .ok_or_else(too_large)?;
        let rho_max = (rho_min..=MAX_LOGRADIUS)
            .find(|&r| pow5(r) as f64 >= w)
            .ok_or_else(too_large)?;
        Ok(LogradiusRange { rho_min, rho_max })
    }

    pub fn levels(&self) -> RangeInclusive<u32> {
        self.rho_min..=self.rho_max
    }

    /// Number of logradii, which is also the height of the pair tree.
    pub fn height(&self) -> usize {
        (self.rho_max - self.rho_min + 1) as usize
    }

    /// `5^r`.
    pub fn radius(&self, r: u32) -> u64 {
        pow5(r)
    }

    fn slot(&self, r: u32) -> usize {
        (r - self.rho_min) as usize
    }
}

/// Computes the logradius range of an instance.
pub fn compute_logradius_range(instance: &Instance) -> Result<LogradiusRange> {
    LogradiusRange::from_bounds(instance.f_min(), instance.diameter_bound())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub logradius: u32,
    /// Facility indices with `f_j <= 5^r`, ascending.
    pub candidates: Vec<usize>,
    /// The admitted separated subset, ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSets {
    pub range: LogradiusRange,
    pub levels: Vec<Level>,
}

impl LevelSets {
    pub fn level(&self, r: u32) -> &Level {
        &self.levels[self.range.slot(r)]
    }
}

/// Greedy maximal separated subsets, scanning candidates in ascending
/// facility id.
pub fn build_level_sets(instance: &Instance, range: LogradiusRange) -> Result<LevelSets> {
    let mut levels = Vec::with_capacity(range.height());
    for r in range.levels() {
        let cap = pow5(r);
        let sep = pow5(r + 1) as f64;
        let candidates: Vec<usize> = instance
            .facilities()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.cost <= cap)
            .map(|(i, _)| i)
            .collect();
        let mut members: Vec<usize> = Vec::new();
        for &c in &candidates {
            let p = &instance.facility(c).point;
            if members
                .iter()
                .all(|&m| instance.dist(p, &instance.facility(m).point) > sep)
            {
                members.push(c);
            }
        }
        levels.push(Level {
            logradius: r,
            candidates,
            members,
        });
    }
    if levels.last().is_none_or(|l| l.members.is_empty()) {
        return Err(Error::NoUsableFacility);
    }
    Ok(LevelSets { range, levels })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// A pair `(facility, logradius)` of the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub facility: FacilityId,
    pub logradius: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    /// Index into `Instance::facilities`.
    pub facility: usize,
    pub logradius: u32,
    pub parent: Option<NodeId>,
    /// Sorted by facility id.
    pub children: Vec<NodeId>,
}

/// The pair tree. Nodes are stored by ascending logradius, then ascending
/// facility id, so index order is a valid bottom-up order and the root is
/// the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTree {
    range: LogradiusRange,
    nodes: Vec<Node>,
    /// First node index of each level, plus a final sentinel.
    level_start: Vec<usize>,
}

pub fn build_pair_tree(instance: &Instance, level_sets: &LevelSets) -> Result<PairTree> {
    let range = level_sets.range;
    let mut nodes = Vec::new();
    let mut level_start = Vec::with_capacity(range.height() + 1);
    for level in &level_sets.levels {
        level_start.push(nodes.len());
        for &f in &level.members {
            nodes.push(Node {
                facility: f,
                logradius: level.logradius,
                parent: None,
                children: Vec::new(),
            });
        }
    }
    level_start.push(nodes.len());

    let top = &level_sets.levels[range.height() - 1];
    if top.members.len() != 1 {
        return Err(Error::InstanceTooLarge(format!(
            "top level holds {} facilities; the diameter bound is inconsistent",
            top.members.len()
        )));
    }

    for slot in 0..range.height() - 1 {
        let (lo, hi) = (level_start[slot + 1], level_start[slot + 2]);
        for v in level_start[slot]..level_start[slot + 1] {
            let p = &instance.facility(nodes[v].facility).point;
            // Candidates are in ascending id, so a strict comparison keeps the
            // smallest id among equidistant parents.
            let mut best = lo;
            let mut best_d = f64::INFINITY;
            for u in lo..hi {
                let d = instance.dist(p, &instance.facility(nodes[u].facility).point);
                if d < best_d {
                    best = u;
                    best_d = d;
                }
            }
            nodes[v].parent = Some(NodeId(best));
            nodes[best].children.push(NodeId(v));
        }
    }
    Ok(PairTree {
        range,
        nodes,
        level_start,
    })
}

/// Runs the full preprocessing pipeline.
pub fn build(instance: &Instance) -> Result<(LevelSets, PairTree)> {
    let range = compute_logradius_range(instance)?;
    let levels = build_level_sets(instance, range)?;
    let tree = build_pair_tree(instance, &levels)?;
    Ok((levels, tree))
}

impl PairTree {
    pub fn range(&self) -> LogradiusRange {
        self.range
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        NodeId(self.nodes.len() - 1)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_ids(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.nodes.len()).map(NodeId)
    }

    /// Nodes of one logradius, ascending facility id.
    pub fn level(&self, r: u32) -> impl Iterator<Item = NodeId> {
        let slot = self.range.slot(r);
        (self.level_start[slot]..self.level_start[slot + 1]).map(NodeId)
    }

    pub fn height(&self) -> usize {
        self.range.height()
    }

    pub fn max_degree(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.children.len())
            .max()
            .unwrap_or(0)
    }

    pub fn pair(&self, instance: &Instance, id: NodeId) -> Pair {
        let n = &self.nodes[id.0];
        Pair {
            facility: instance.facility(n.facility).id,
            logradius: n.logradius,
        }
    }

    /// Area cost `f_j + 7 * 5^r`.
    pub fn cost(&self, instance: &Instance, id: NodeId) -> u64 {
        let n = &self.nodes[id.0];
        instance.facility(n.facility).cost + AREA_FACTOR * pow5(n.logradius)
    }

    /// True when `ancestor` is `node` or lies on its path to the root.
    pub fn is_ancestor_or_self(&self, ancestor: NodeId, node: NodeId) -> bool {
        let target = self.nodes[ancestor.0].logradius;
        let mut cur = node;
        while self.nodes[cur.0].logradius < target {
            match self.nodes[cur.0].parent {
                Some(p) => cur = p,
                None => return false,
            }
        }
        cur == ancestor
    }

    /// `node` followed by its ancestors up to the root.
    pub fn root_path(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(node), move |v| self.nodes[v.0].parent)
    }

    /// One `pair <facility> <logradius> parent <facility|-> children <k>`
    /// record per node, root first, then by descending logradius and
    /// ascending facility id.
    pub fn dump(&self, instance: &Instance) -> String {
        let mut out = String::new();
        for r in self.range.levels().rev() {
            for v in self.level(r) {
                let n = &self.nodes[v.0];
                let parent = n
                    .parent
                    .map(|p| instance.facility(self.nodes[p.0].facility).id.to_string())
                    .unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    out,
                    "pair {} {} parent {} children {}",
                    instance.facility(n.facility).id,
                    r,
                    parent,
                    n.children.len()
                );
            }
        }
        out
    }

    /// Number of internal nodes per child count.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for n in self.nodes.iter().filter(|n| !n.children.is_empty()) {
            *hist.entry(n.children.len()).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }
}

/// Checks Separating, Covering, singleton top level, parent choice and the
/// ball nesting inequality. Returns one message per violation.
pub fn structural_violations(
    instance: &Instance,
    levels: &LevelSets,
    tree: &PairTree,
) -> Vec<String> {
    let mut out = Vec::new();
    let pt = |i: usize| &instance.facility(i).point;
    let id = |i: usize| instance.facility(i).id;
    for level in &levels.levels {
        let r = level.logradius;
        let sep = pow5(r + 1) as f64;
        for (a, &i) in level.members.iter().enumerate() {
            if instance.facility(i).cost > pow5(r) {
                out.push(format!("level {r}: facility {} too expensive", id(i)));
            }
            for &j in &level.members[a + 1..] {
                let d = instance.dist(pt(i), pt(j));
                if !(d > sep) {
                    out.push(format!(
                        "separating: level {r}: d({},{}) = {d} <= {sep}",
                        id(i),
                        id(j)
                    ));
                }
            }
        }
        for &c in &level.candidates {
            if !level
                .members
                .iter()
                .any(|&m| instance.dist(pt(c), pt(m)) <= sep)
            {
                out.push(format!("covering: level {r}: facility {} uncovered", id(c)));
            }
        }
    }
    let top = &levels.levels[levels.levels.len() - 1];
    if top.members.len() != 1 {
        out.push(format!("top level has {} members", top.members.len()));
    }
    for v in tree.node_ids() {
        let n = tree.node(v);
        let Some(p) = n.parent else {
            if v != tree.root() {
                out.push(format!(
                    "node {} {} has no parent",
                    id(n.facility),
                    n.logradius
                ));
            }
            continue;
        };
        let pn = tree.node(p);
        if pn.logradius != n.logradius + 1 {
            out.push(format!(
                "node {} {}: parent level mismatch",
                id(n.facility),
                n.logradius
            ));
        }
        let d = instance.dist(pt(n.facility), pt(pn.facility));
        let nearest = tree
            .level(pn.logradius)
            .map(|u| instance.dist(pt(n.facility), pt(tree.node(u).facility)))
            .fold(f64::INFINITY, f64::min);
        if d > nearest {
            out.push(format!(
                "node {} {}: parent is not nearest",
                id(n.facility),
                n.logradius
            ));
        }
        let r = n.logradius;
        if d > pow5(r + 2) as f64 {
            out.push(format!(
                "node {} {}: parent farther than 5^(r+2)",
                id(n.facility),
                r
            ));
        }
        if d + (AREA_FACTOR * pow5(r)) as f64 > (AREA_FACTOR * pow5(r + 1)) as f64 {
            out.push(format!("nesting: node {} {}", id(n.facility), r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::load_instance;

    fn line() -> Instance {
        load_instance("metric euclidean 1 W 30\nfacility 0 0 cost 1\nfacility 30 30 cost 1\n")
            .unwrap()
    }

    /// Smallest exponent with `5^r >= x`, by walking powers in floating point.
    fn enumerate_exponent(x: f64, floor: u32) -> u32 {
        (floor..).find(|&r| 5f64.powi(r as i32) >= x).unwrap()
    }

    #[test]
    fn logradius_ranges() {
        for (f_min, w, expect) in [(1, 30.0, (0, 3)), (1, 1.0, (0, 0)), (5, 4.0, (1, 1))] {
            let r = LogradiusRange::from_bounds(f_min, w).unwrap();
            assert_eq!((r.rho_min, r.rho_max), expect);
            let lo = enumerate_exponent(f_min as f64, 0);
            assert_eq!(r.rho_min, lo);
            assert_eq!(r.rho_max, enumerate_exponent(w, lo));
        }
        let r = LogradiusRange::from_bounds(26, 0.0).unwrap();
        assert_eq!((r.rho_min, r.rho_max), (3, 3));
        assert!(LogradiusRange::from_bounds(1, 1e20).is_err());
    }

    #[test]
    fn level_sets_of_line() {
        let inst = line();
        let levels = build_level_sets(&inst, inst.logradius_range()).unwrap();
        let ids = |r| -> Vec<u64> {
            levels
                .level(r)
                .members
                .iter()
                .map(|&i| inst.facility(i).id.0)
                .collect()
        };
        assert_eq!(ids(0), vec![0, 30]);
        assert_eq!(ids(1), vec![0, 30]);
        assert_eq!(ids(2), vec![0]);
        assert_eq!(ids(3), vec![0]);
    }

    #[test]
    fn pair_tree_of_line() {
        let inst = line();
        let (levels, tree) = build(&inst).unwrap();
        assert_eq!(tree.len(), 6);
        assert_eq!(tree.height(), 4);
        assert_eq!(
            tree.dump(&inst),
            "pair 0 3 parent - children 1\n\
             pair 0 2 parent 0 children 2\n\
             pair 0 1 parent 0 children 1\n\
             pair 30 1 parent 0 children 1\n\
             pair 0 0 parent 0 children 0\n\
             pair 30 0 parent 30 children 0\n"
        );
        assert!(structural_violations(&inst, &levels, &tree).is_empty());
    }

    #[test]
    fn single_facility_is_a_path() {
        let inst = load_instance("metric euclidean 1 W 25\nfacility 7 3 cost 1\n").unwrap();
        let (_, tree) = build(&inst).unwrap();
        assert_eq!(
            tree.range(),
            LogradiusRange {
                rho_min: 0,
                rho_max: 2
            }
        );
        assert_eq!(tree.len(), 3);
        let path: Vec<u32> = tree
            .root_path(NodeId(0))
            .map(|v| tree.node(v).logradius)
            .collect();
        assert_eq!(path, vec![0, 1, 2]);
        assert_eq!(tree.degree_histogram(), vec![(1, 2)]);
    }

    #[test]
    fn expensive_facilities_join_late() {
        let inst = load_instance(
            "metric euclidean 1 W 100\nfacility 0 0 cost 1\nfacility 1 90 cost 30\nfacility 2 50 cost 1000\n",
        )
        .unwrap();
        let (levels, tree) = build(&inst).unwrap();
        assert_eq!(levels.level(0).candidates, vec![0]);
        assert_eq!(levels.level(2).candidates, vec![0]);
        assert_eq!(levels.level(3).candidates, vec![0, 1]);
        assert!(tree.nodes().iter().all(|n| n.facility != 2));
        assert_eq!(inst.unusable_facilities(), vec![FacilityId(2)]);
    }

    #[test]
    fn equidistant_parent_prefers_smaller_id() {
        // Facility 5 at 0 sits exactly between 1 (at -20) and 9 (at 20) on level 1.
        let inst = load_instance(
            "metric euclidean 1 W 40\nfacility 9 20 cost 1\nfacility 1 -20 cost 1\nfacility 5 0 cost 1\n",
        )
        .unwrap();
        let (levels, tree) = build(&inst).unwrap();
        assert!(structural_violations(&inst, &levels, &tree).is_empty());
        let five = tree
            .level(0)
            .find(|&v| inst.facility(tree.node(v).facility).id == FacilityId(5))
            .unwrap();
        let parent = tree.node(five).parent.unwrap();
        assert_eq!(inst.facility(tree.node(parent).facility).id, FacilityId(1));
    }

    #[test]
    fn rebuild_is_identical() {
        let inst = line();
        let (l1, t1) = build(&inst).unwrap();
        let (l2, t2) = build(&inst).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(t1, t2);
    }
}
