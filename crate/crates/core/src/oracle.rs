//! Exact solvers for small instances, used to certify the DP and to measure
//! how far the restricted optimum sits from the true sum-of-radii optimum.
//!
//! Both solvers refuse inputs beyond their guards instead of sampling.

use crate::areas::ball_radius;
use crate::dynamic::offline_dp;
use crate::error::{Error, Result};
use crate::metric::{FacilityId, Instance, Point};
use crate::preprocess::{pow5, NodeId, Pair, PairTree};

pub const MAX_EXHAUSTIVE_PAIRS: usize = 20;
pub const MAX_EXHAUSTIVE_CLIENTS: usize = 12;
pub const MAX_EXHAUSTIVE_FACILITIES: usize = 8;

/// `80 * 2^(2 kappa)`: a factor 10 for rounding radii to powers of five
/// times `2^(2 kappa)` replacement pairs of cost at most `8 (f_j + 5^r)`.
pub fn approximation_bound(kappa: u32) -> f64 {
    80.0 * 4f64.powi(kappa as i32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedCover {
    pub pairs: Vec<Pair>,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub facility: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallCover {
    pub balls: Vec<Ball>,
    pub cost: f64,
}

impl BallCover {
    pub fn covers(&self, clients: &[Point], instance: &Instance) -> bool {
        clients.iter().all(|c| {
            self.balls
                .iter()
                .any(|b| instance.dist(c, &instance.facility(b.facility).point) <= b.radius)
        })
    }

    pub fn facility_ids(&self, instance: &Instance) -> Vec<FacilityId> {
        self.balls
            .iter()
            .map(|b| instance.facility(b.facility).id)
            .collect()
    }
}

/// Home node by scanning every pair: least logradius whose ball holds `p`,
/// then nearest facility, then smallest id.
fn scan_home(p: &Point, tree: &PairTree, instance: &Instance) -> Result<NodeId> {
    instance.metric().check_point(p)?;
    let mut best: Option<(u32, f64, FacilityId, NodeId)> = None;
    for v in tree.node_ids() {
        let n = tree.node(v);
        let f = instance.facility(n.facility);
        let d = instance.dist(p, &f.point);
        if d > ball_radius(n.logradius) {
            continue;
        }
        let key = (n.logradius, d, f.id, v);
        let better = match &best {
            None => true,
            Some(b) => (key.0, key.1, key.2)
                .partial_cmp(&(b.0, b.1, b.2))
                .is_some_and(|o| o.is_lt()),
        };
        if better {
            best = Some(key);
        }
    }
    best.map(|b| b.3).ok_or_else(|| Error::OutOfDiameter {
        distance: instance.dist(p, &instance.facility(tree.node(tree.root()).facility).point),
        bound: instance.diameter_bound(),
    })
}

/// Cheapest subset of pairs whose areas contain every client, by trying all
/// `2^|pairs|` subsets. A client lies in exactly the areas of its home pair
/// and the home pair's ancestors.
pub fn restricted_exhaustive(
    clients: &[Point],
    tree: &PairTree,
    instance: &Instance,
) -> Result<RestrictedCover> {
    let m = tree.len();
    if m > MAX_EXHAUSTIVE_PAIRS {
        return Err(Error::TooLargeForExhaustive(format!(
            "{m} pairs (limit {MAX_EXHAUSTIVE_PAIRS})"
        )));
    }
    let mut needs: Vec<u32> = Vec::with_capacity(clients.len());
    for p in clients {
        let home = scan_home(p, tree, instance)?;
        let mask = tree
            .node_ids()
            .filter(|&v| tree.is_ancestor_or_self(v, home))
            .fold(0u32, |acc, v| acc | (1 << v.0));
        needs.push(mask);
    }
    let costs: Vec<u64> = tree.node_ids().map(|v| tree.cost(instance, v)).collect();
    let full = 1usize << m;
    let mut subset_cost = vec![0u64; full];
    let mut best: Option<(u64, u32, usize)> = None;
    for mask in 0..full {
        if mask > 0 {
            let low = mask.trailing_zeros() as usize;
            subset_cost[mask] = subset_cost[mask & (mask - 1)] + costs[low];
        }
        if needs.iter().all(|&n| n as usize & mask != 0) {
            let key = (subset_cost[mask], mask.count_ones(), mask);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    let (cost, _, mask) = best.expect("the full set always covers");
    let mut pairs: Vec<Pair> = tree
        .node_ids()
        .filter(|v| mask & (1 << v.0) != 0)
        .map(|v| tree.pair(instance, v))
        .collect();
    pairs.sort_by_key(|p| (p.logradius, p.facility));
    Ok(RestrictedCover { pairs, cost })
}

/// Exact sum-of-radii optimum over balls centered at any facility.
///
/// Radii range over `0` and the facility's distances to clients, which is
/// complete since an optimal ball can always shrink to its farthest client.
/// Opening one facility twice never helps, so the search is a set-cover
/// recursion over client subsets: the lowest uncovered client must be
/// covered by one of the candidate balls.
pub fn unrestricted_opt(clients: &[Point], instance: &Instance) -> Result<BallCover> {
    let k = clients.len();
    let nf = instance.facilities().len();
    if k > MAX_EXHAUSTIVE_CLIENTS || nf > MAX_EXHAUSTIVE_FACILITIES {
        return Err(Error::TooLargeForExhaustive(format!(
            "{k} clients, {nf} facilities (limits {MAX_EXHAUSTIVE_CLIENTS}, {MAX_EXHAUSTIVE_FACILITIES})"
        )));
    }
    for c in clients {
        instance.metric().check_point(c)?;
    }
    // (facility, radius, cost, covered mask)
    let mut candidates: Vec<(usize, f64, f64, usize)> = Vec::new();
    for (j, f) in instance.facilities().iter().enumerate() {
        let dists: Vec<f64> = clients.iter().map(|c| instance.dist(c, &f.point)).collect();
        let mut radii: Vec<f64> = std::iter::once(0.0).chain(dists.iter().copied()).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        for r in radii {
            let mask = dists
                .iter()
                .enumerate()
                .filter(|(_, d)| **d <= r)
                .fold(0usize, |acc, (i, _)| acc | (1 << i));
            candidates.push((j, r, f.cost as f64 + r, mask));
        }
    }
    let full = 1usize << k;
    let mut best = vec![f64::INFINITY; full];
    let mut choice = vec![usize::MAX; full];
    best[0] = 0.0;
    for mask in 1..full {
        let low = 1usize << mask.trailing_zeros();
        for (ci, &(_, _, cost, cover)) in candidates.iter().enumerate() {
            if cover & low == 0 {
                continue;
            }
            let total = best[mask & !cover] + cost;
            if total < best[mask] {
                best[mask] = total;
                choice[mask] = ci;
            }
        }
    }
    let mut balls = Vec::new();
    let mut mask = full - 1;
    while mask != 0 {
        let (j, r, _, cover) = candidates[choice[mask]];
        balls.push(Ball {
            facility: j,
            radius: r,
        });
        mask &= !cover;
    }
    balls.sort_by_key(|b| b.facility);
    Ok(BallCover {
        balls,
        cost: best[full - 1],
    })
}

/// Rounds a ball cover to radii that are powers of five no smaller than the
/// facility cost. If any ball has cost or radius above `W`, the whole cover
/// is replaced by one ball around the cheapest facility.
pub fn normalize_cover(cover: &BallCover, instance: &Instance) -> BallCover {
    let w = instance.diameter_bound();
    let round_up = |x: f64| -> f64 {
        let mut r = 0;
        while (pow5(r) as f64) < x {
            r += 1;
        }
        pow5(r) as f64
    };
    let balls: Vec<Ball> = if cover
        .balls
        .iter()
        .any(|b| (instance.facility(b.facility).cost as f64).max(b.radius) > w)
    {
        let cheapest = (0..instance.facilities().len())
            .min_by_key(|&j| (instance.facility(j).cost, instance.facility(j).id))
            .expect("instances have at least one facility");
        let f = instance.facility(cheapest).cost as f64;
        vec![Ball {
            facility: cheapest,
            radius: round_up(w.max(f)),
        }]
    } else {
        cover
            .balls
            .iter()
            .map(|b| Ball {
                facility: b.facility,
                radius: round_up(b.radius.max(instance.facility(b.facility).cost as f64)),
            })
            .collect()
    };
    let cost = balls
        .iter()
        .map(|b| instance.facility(b.facility).cost as f64 + b.radius)
        .sum();
    BallCover { balls, cost }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub restricted_cost: u64,
    pub opt_cost: f64,
    /// `restricted_cost / opt_cost`, or 1 for an empty client set.
    pub ratio: f64,
    pub bound: Option<f64>,
}

/// Compares the restricted optimum with the unrestricted one. Fails with
/// `BoundViolated` when the instance carries a doubling-dimension hint and
/// the ratio exceeds [`approximation_bound`].
pub fn ratio_report(
    clients: &[Point],
    tree: &PairTree,
    instance: &Instance,
) -> Result<RatioReport> {
    let opt = unrestricted_opt(clients, instance)?;
    let (restricted_cost, _) = offline_dp(clients, tree, instance)?;
    let ratio = if clients.is_empty() {
        1.0
    } else {
        restricted_cost as f64 / opt.cost
    };
    let bound = instance.kappa_hint().map(approximation_bound);
    if let Some(b) = bound {
        if ratio > b {
            return Err(Error::BoundViolated { ratio, bound: b });
        }
    }
    Ok(RatioReport {
        restricted_cost,
        opt_cost: opt.cost,
        ratio,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::load_instance;
    use crate::preprocess::build;

    fn line() -> (Instance, PairTree) {
        let inst = load_instance(
            "metric euclidean 1 W 30\nkappa 1\nfacility 0 0 cost 1\nfacility 30 30 cost 1\n",
        )
        .unwrap();
        let (_, tree) = build(&inst).unwrap();
        (inst, tree)
    }

    fn at(x: f64) -> Point {
        Point::Coords(vec![x])
    }

    #[test]
    fn restricted_two_clients() {
        let (inst, tree) = line();
        let cover = restricted_exhaustive(&[at(2.0), at(29.0)], &tree, &inst).unwrap();
        assert_eq!(cover.cost, 16);
        assert_eq!(cover.pairs.len(), 2);
        let empty = restricted_exhaustive(&[], &tree, &inst).unwrap();
        assert_eq!(
            empty,
            RestrictedCover {
                pairs: vec![],
                cost: 0
            }
        );
    }

    #[test]
    fn unrestricted_two_clients() {
        let (inst, _) = line();
        let opt = unrestricted_opt(&[at(2.0), at(29.0)], &inst).unwrap();
        assert_eq!(opt.cost, 5.0);
        assert_eq!(
            opt.balls,
            vec![
                Ball {
                    facility: 0,
                    radius: 2.0
                },
                Ball {
                    facility: 1,
                    radius: 1.0
                }
            ]
        );
        assert!(opt.covers(&[at(2.0), at(29.0)], &inst));
    }

    #[test]
    fn colocated_client_costs_opening_only() {
        let (inst, _) = line();
        assert_eq!(unrestricted_opt(&[at(30.0)], &inst).unwrap().cost, 1.0);
        assert_eq!(unrestricted_opt(&[], &inst).unwrap().cost, 0.0);
    }

    #[test]
    fn ratio_of_two_clients() {
        let (inst, tree) = line();
        let r = ratio_report(&[at(2.0), at(29.0)], &tree, &inst).unwrap();
        assert_eq!(r.restricted_cost, 16);
        assert_eq!(r.opt_cost, 5.0);
        assert!((r.ratio - 3.2).abs() < 1e-12);
        assert_eq!(r.bound, Some(320.0));
        assert_eq!(ratio_report(&[], &tree, &inst).unwrap().ratio, 1.0);
    }

    #[test]
    fn colocated_with_cheapest_ratio() {
        let (inst, tree) = line();
        let r = ratio_report(&[at(0.0)], &tree, &inst).unwrap();
        // f_min = 1, rho_min = 0: restricted cost 1 + 7, optimum 1.
        assert_eq!(r.ratio, 8.0);
        assert!(r.ratio <= 8.0 * 1.0 / 1.0 + 1.0);
    }

    #[test]
    fn guards() {
        let (inst, tree) = line();
        let many: Vec<Point> = (0..13).map(|i| at(i as f64)).collect();
        assert!(matches!(
            unrestricted_opt(&many, &inst).unwrap_err(),
            Error::TooLargeForExhaustive(_)
        ));
        let text: String = std::iter::once("metric euclidean 1 W 120\n".to_string())
            .chain((0..20).map(|i| format!("facility {i} {} cost 1\n", i * 6)))
            .collect();
        let big = load_instance(&text).unwrap();
        let (_, big_tree) = build(&big).unwrap();
        assert!(big_tree.len() > MAX_EXHAUSTIVE_PAIRS);
        assert!(matches!(
            restricted_exhaustive(&[], &big_tree, &big).unwrap_err(),
            Error::TooLargeForExhaustive(_)
        ));
        assert!(restricted_exhaustive(&[at(1.0)], &tree, &inst).is_ok());
    }

    #[test]
    fn normalized_cover_is_within_factor_ten() {
        let (inst, _) = line();
        let clients = [at(2.0), at(29.0), at(14.0)];
        let opt = unrestricted_opt(&clients, &inst).unwrap();
        let norm = normalize_cover(&opt, &inst);
        assert!(norm.covers(&clients, &inst));
        assert!(norm.cost <= 10.0 * opt.cost);
        for b in &norm.balls {
            let r = b.radius.log(5.0).round() as u32;
            assert_eq!(pow5(r) as f64, b.radius);
        }
    }
}
