//! The annotated dependency tree.
//!
//! Every pair node carries its area cost `c`, the number `n` of live clients
//! homed there, the optimal cover cost `x` of its subtree's clients and the
//! sum `y` of its children's `x`. The recurrence is
//!
//! ```text
//! x = c            if n > 0
//! x = min(c, y)    otherwise
//! ```
//!
//! An update changes `n` at one node and repairs `x`/`y` along its root
//! path, so the optimal restricted cost is always `x` at the root.

use std::collections::BTreeMap;

use crate::areas::{home_pair, home_pair_with_visits, HomePair};
use crate::error::{Error, Result};
use crate::metric::{Instance, Point};
use crate::preprocess::{NodeId, Pair, PairTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Annotation {
    pub c: u64,
    pub n: u64,
    pub x: u64,
    pub y: u64,
}

impl Annotation {
    fn settle(&self) -> u64 {
        if self.n > 0 {
            self.c
        } else {
            self.c.min(self.y)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClientEntry {
    pub point: Point,
    pub home: HomePair,
}

/// Node-touch counts of one update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UpdateStats {
    /// Ball tests spent locating the home pair; zero for deletions.
    pub search_visits: usize,
    /// Nodes repaired on the way to the root.
    pub path_len: usize,
}

impl UpdateStats {
    pub fn touched(&self) -> usize {
        self.search_visits + self.path_len
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Solution {
    /// Sorted by logradius, then facility id.
    pub pairs: Vec<Pair>,
    pub total_cost: u64,
}

impl Solution {
    /// `solution <cost> <k> (<facility>,<logradius>)...`
    pub fn to_line(&self) -> String {
        let mut s = format!("solution {} {}", self.total_cost, self.pairs.len());
        for p in &self.pairs {
            s.push_str(&format!(" ({},{})", p.facility, p.logradius));
        }
        s
    }
}

/// Walks down from the root: a node with `x == 0` contributes nothing, a node
/// with `x == c` contributes its own area, anything else defers to its
/// children. Returns the chosen nodes and the number of nodes inspected.
pub(crate) fn extract(tree: &PairTree, ann: &[Annotation]) -> (Vec<NodeId>, usize) {
    let mut chosen = Vec::new();
    let mut touched = 0;
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        touched += 1;
        let a = &ann[v.0];
        if a.x == 0 {
            continue;
        }
        if a.x == a.c {
            chosen.push(v);
        } else {
            stack.extend(tree.node(v).children.iter().rev());
        }
    }
    (chosen, touched)
}

fn to_solution(
    tree: &PairTree,
    instance: &Instance,
    ann: &[Annotation],
    nodes: &[NodeId],
) -> Solution {
    let mut pairs: Vec<Pair> = nodes.iter().map(|&v| tree.pair(instance, v)).collect();
    pairs.sort_by_key(|p| (p.logradius, p.facility));
    Solution {
        pairs,
        total_cost: ann[tree.root().0].x,
    }
}

/// Fully dynamic sum-of-radii clustering restricted to the pair areas.
#[derive(Debug, Clone)]
pub struct DynamicClustering<'a> {
    instance: &'a Instance,
    tree: &'a PairTree,
    ann: Vec<Annotation>,
    clients: BTreeMap<String, ClientEntry>,
}

impl<'a> DynamicClustering<'a> {
    pub fn new(tree: &'a PairTree, instance: &'a Instance) -> Self {
        let ann = tree
            .node_ids()
            .map(|v| Annotation {
                c: tree.cost(instance, v),
                ..Annotation::default()
            })
            .collect();
        DynamicClustering {
            instance,
            tree,
            ann,
            clients: BTreeMap::new(),
        }
    }

    pub fn tree(&self) -> &PairTree {
        self.tree
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    pub fn node_count(&self) -> usize {
        self.ann.len()
    }

    pub fn annotation(&self, v: NodeId) -> Annotation {
        self.ann[v.0]
    }

    pub fn annotations(&self) -> &[Annotation] {
        &self.ann
    }

    pub fn clients(&self) -> impl Iterator<Item = (&str, &ClientEntry)> {
        self.clients.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn client_count(&self) -> usize {
        self.clients.len()
    }

    fn repair_path(&mut self, start: NodeId) -> usize {
        let mut len = 0;
        let mut cur = Some(start);
        while let Some(v) = cur {
            len += 1;
            let old = self.ann[v.0].x;
            let new = self.ann[v.0].settle();
            self.ann[v.0].x = new;
            cur = self.tree.node(v).parent;
            if let Some(p) = cur {
                let y = &mut self.ann[p.0].y;
                *y = *y - old + new;
            }
        }
        len
    }

    pub fn insert(&mut self, id: &str, point: Point) -> Result<UpdateStats> {
        if self.clients.contains_key(id) {
            return Err(Error::DuplicateClient(id.to_string()));
        }
        let (home, search_visits) = home_pair_with_visits(&point, self.tree, self.instance)?;
        self.ann[home.node.0].n += 1;
        let path_len = self.repair_path(home.node);
        self.clients
            .insert(id.to_string(), ClientEntry { point, home });
        Ok(UpdateStats {
            search_visits,
            path_len,
        })
    }

    /// Removes a client using the home pair recorded at insertion.
    pub fn delete(&mut self, id: &str) -> Result<UpdateStats> {
        let entry = self
            .clients
            .remove(id)
            .ok_or_else(|| Error::NoSuchClient(id.to_string()))?;
        self.ann[entry.home.node.0].n -= 1;
        let path_len = self.repair_path(entry.home.node);
        Ok(UpdateStats {
            search_visits: 0,
            path_len,
        })
    }

    /// Cost of the optimal restricted cover of the live clients.
    pub fn cost(&self) -> u64 {
        self.ann[self.tree.root().0].x
    }

    /// `cost()` together with the number of nodes it read.
    pub fn cost_traced(&self) -> (u64, usize) {
        (self.cost(), 1)
    }

    pub fn solution(&self) -> Solution {
        self.solution_traced().0
    }

    /// `solution()` together with the number of nodes inspected.
    pub fn solution_traced(&self) -> (Solution, usize) {
        let (nodes, touched) = extract(self.tree, &self.ann);
        (
            to_solution(self.tree, self.instance, &self.ann, &nodes),
            touched,
        )
    }

    /// Recomputes every annotation from the registry and reports the first
    /// node whose stored values differ.
    pub fn check_annotations(&self) -> std::result::Result<(), String> {
        let points: Vec<NodeId> = self.clients.values().map(|e| e.home.node).collect();
        let fresh = annotate_homes(self.tree, self.instance, &points);
        for v in self.tree.node_ids() {
            if fresh[v.0] != self.ann[v.0] {
                let p = self.tree.pair(self.instance, v);
                return Err(format!(
                    "node ({},{}): stored {:?}, recomputed {:?}",
                    p.facility, p.logradius, self.ann[v.0], fresh[v.0]
                ));
            }
        }
        Ok(())
    }

    /// Adds `delta` to the stored `x` of a node without repairing anything.
    /// Only for exercising divergence detection.
    #[doc(hidden)]
    pub fn corrupt_annotation(&mut self, v: NodeId, delta: u64) {
        self.ann[v.0].x += delta;
    }
}

/// Bottom-up annotation for clients with known home nodes.
fn annotate_homes(tree: &PairTree, instance: &Instance, homes: &[NodeId]) -> Vec<Annotation> {
    let mut ann: Vec<Annotation> = tree
        .node_ids()
        .map(|v| Annotation {
            c: tree.cost(instance, v),
            ..Annotation::default()
        })
        .collect();
    for h in homes {
        ann[h.0].n += 1;
    }
    // Node order is ascending logradius, so children precede parents.
    for v in tree.node_ids() {
        let y: u64 = tree.node(v).children.iter().map(|u| ann[u.0].x).sum();
        ann[v.0].y = y;
        ann[v.0].x = ann[v.0].settle();
    }
    ann
}

/// Offline restricted optimum for a client list, computed bottom-up from
/// scratch. Home pairs are recomputed for every client.
pub fn offline_dp(
    clients: &[Point],
    tree: &PairTree,
    instance: &Instance,
) -> Result<(u64, Solution)> {
    let homes = clients
        .iter()
        .map(|p| home_pair(p, tree, instance).map(|h| h.node))
        .collect::<Result<Vec<_>>>()?;
    let ann = annotate_homes(tree, instance, &homes);
    let (nodes, _) = extract(tree, &ann);
    let sol = to_solution(tree, instance, &ann, &nodes);
    Ok((sol.total_cost, sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{load_instance, FacilityId};
    use crate::preprocess::build;

    fn line() -> (Instance, PairTree) {
        let inst =
            load_instance("metric euclidean 1 W 30\nfacility 0 0 cost 1\nfacility 30 30 cost 1\n")
                .unwrap();
        let (_, tree) = build(&inst).unwrap();
        (inst, tree)
    }

    fn at(x: f64) -> Point {
        Point::Coords(vec![x])
    }

    fn pair(f: u64, r: u32) -> Pair {
        Pair {
            facility: FacilityId(f),
            logradius: r,
        }
    }

    #[test]
    fn fresh_structure() {
        let (inst, tree) = line();
        let dc = DynamicClustering::new(&tree, &inst);
        assert_eq!(dc.cost(), 0);
        assert_eq!(dc.solution(), Solution::default());
        assert_eq!(dc.node_count(), tree.len());
    }

    #[test]
    fn two_clients_on_a_line() {
        let (inst, tree) = line();
        let mut dc = DynamicClustering::new(&tree, &inst);
        let s = dc.insert("a", at(2.0)).unwrap();
        assert_eq!(dc.cost(), 8);
        assert!(s.path_len <= tree.height());
        assert_eq!(s.path_len, 4);
        dc.insert("b", at(29.0)).unwrap();
        assert_eq!(dc.cost(), 16);
        let sol = dc.solution();
        assert_eq!(sol.pairs, vec![pair(0, 0), pair(30, 0)]);
        assert_eq!(sol.total_cost, 16);
        assert_eq!(sol.to_line(), "solution 16 2 (0,0) (30,0)");
        assert_eq!(dc.annotation(tree.root()).c, 1 + 7 * 125);
        dc.check_annotations().unwrap();

        dc.delete("b").unwrap();
        assert_eq!(dc.cost(), 8);
        dc.delete("a").unwrap();
        assert_eq!(dc.cost(), 0);
        assert!(dc
            .annotations()
            .iter()
            .all(|a| a.n == 0 && a.x == 0 && a.y == 0));
    }

    #[test]
    fn errors() {
        let (inst, tree) = line();
        let mut dc = DynamicClustering::new(&tree, &inst);
        dc.insert("a", at(2.0)).unwrap();
        assert_eq!(
            dc.insert("a", at(3.0)).unwrap_err(),
            Error::DuplicateClient("a".into())
        );
        assert_eq!(
            dc.delete("zz").unwrap_err(),
            Error::NoSuchClient("zz".into())
        );
        assert!(matches!(
            dc.insert("far", at(45.0)).unwrap_err(),
            Error::OutOfDiameter { .. }
        ));
        assert_eq!(dc.client_count(), 1);
        dc.check_annotations().unwrap();
    }

    #[test]
    fn single_client_takes_path_minimum() {
        let (inst, tree) = line();
        let mut dc = DynamicClustering::new(&tree, &inst);
        dc.insert("a", at(15.0)).unwrap();
        let home = home_pair(&at(15.0), &tree, &inst).unwrap();
        let cheapest = tree
            .root_path(home.node)
            .map(|v| tree.cost(&inst, v))
            .min()
            .unwrap();
        assert_eq!(dc.cost(), cheapest);
        assert_eq!(dc.solution().pairs.len(), 1);
    }

    #[test]
    fn colocated_clients_count_multiplicity() {
        let (inst, tree) = line();
        let mut dc = DynamicClustering::new(&tree, &inst);
        dc.insert("a", at(2.0)).unwrap();
        dc.insert("b", at(2.0)).unwrap();
        let home = dc.clients().next().unwrap().1.home.node;
        assert_eq!(dc.annotation(home).n, 2);
        dc.delete("a").unwrap();
        assert_eq!(dc.cost(), 8);
    }

    #[test]
    fn offline_matches_examples() {
        let (inst, tree) = line();
        assert_eq!(offline_dp(&[], &tree, &inst).unwrap().0, 0);
        let (cost, sol) = offline_dp(&[at(2.0), at(29.0)], &tree, &inst).unwrap();
        assert_eq!(cost, 16);
        assert_eq!(sol.pairs, vec![pair(0, 0), pair(30, 0)]);
        assert_eq!(offline_dp(&[at(2.0)], &tree, &inst).unwrap().0, 8);
    }

    #[test]
    fn corrupted_annotation_is_detected() {
        let (inst, tree) = line();
        let mut dc = DynamicClustering::new(&tree, &inst);
        dc.insert("a", at(2.0)).unwrap();
        dc.corrupt_annotation(tree.root(), 3);
        assert!(dc.check_annotations().is_err());
    }

    #[test]
    fn many_clients_fall_back_to_root() {
        // Clients spread over the line need areas from more than one level.
        let (inst, tree) = line();
        let mut dc = DynamicClustering::new(&tree, &inst);
        for (i, x) in [0.0, 10.0, 20.0, 30.0].into_iter().enumerate() {
            dc.insert(&format!("c{i}"), at(x)).unwrap();
        }
        let (cost, _) = offline_dp(&[at(0.0), at(10.0), at(20.0), at(30.0)], &tree, &inst).unwrap();
        assert_eq!(dc.cost(), cost);
        let sol = dc.solution();
        assert_eq!(sol.total_cost, cost);
        let sum: u64 = sol
            .pairs
            .iter()
            .map(|p| {
                let v = tree
                    .node_ids()
                    .find(|&v| tree.pair(&inst, v) == *p)
                    .unwrap();
                tree.cost(&inst, v)
            })
            .sum();
        assert_eq!(sum, cost);
    }
}
