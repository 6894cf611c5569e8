use serde::{Deserialize, Serialize};

use super::{csv_table, plot_rows};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::{partition_function_uniform, OracleConfig};

/// Routes through a network; each route is a nonempty list of links.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RouteSet {
    pub network: Graph,
    pub routes: Vec<Vec<[usize; 2]>>,
    /// Uniform call activity ν > 0.
    pub activity: f64,
}

impl RouteSet {
    pub fn validate(&self) -> Result<()> {
        if !(self.activity > 0.0 && self.activity.is_finite()) {
            return Err(Error::input(format!("activity must be positive, got {}", self.activity)));
        }
        for (r, links) in self.routes.iter().enumerate() {
            if links.is_empty() {
                return Err(Error::input(format!("route {r} uses no links")));
            }
            for &[u, v] in links {
                if u >= self.network.n() || v >= self.network.n() || !self.network.has_edge(u, v) {
                    return Err(Error::input(format!("route {r} uses unknown link [{u}, {v}]")));
                }
            }
        }
        Ok(())
    }

    pub fn with_activity(&self, activity: f64) -> RouteSet {
        RouteSet {
            activity,
            ..self.clone()
        }
    }
}

/// One vertex per route, an edge when two routes share a link.
pub fn route_interaction_graph(rs: &RouteSet) -> Result<Graph> {
    rs.validate()?;
    let links: Vec<Vec<(usize, usize)>> = rs
        .routes
        .iter()
        .map(|r| {
            let mut l: Vec<(usize, usize)> = r.iter().map(|&[u, v]| (u.min(v), u.max(v))).collect();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..links.len() {
        for b in a + 1..links.len() {
            if links[a].iter().any(|l| links[b].binary_search(l).is_ok()) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(links.len(), &edges)
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteResult {
    pub route: usize,
    /// Probability that a new call on the route connects:
    /// `Z(G − N[r]) / Z(G)`.
    pub success: f64,
    pub blocking: f64,
    /// Probability that the route carries no call: `Z(G − r) / Z(G)`.
    pub idle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LossReport {
    pub activity: f64,
    pub z: f64,
    pub routes: Vec<RouteResult>,
}

/// Per-route success probability `P(r) = Z(G∖r)/Z(G)` on the route
/// interaction graph.
///
/// A call on `r` connects only if no active route shares one of its links,
/// `r` included, so `G∖r` removes `r` together with every route it
/// conflicts with. Under the product-form law `P(I) ∝ ν^|I|` this is the
/// probability that `N[r]` is empty.
pub fn blocking_probabilities(rs: &RouteSet, cfg: &OracleConfig) -> Result<LossReport> {
    let g = route_interaction_graph(rs)?;
    let nu = rs.activity;
    let z = partition_function_uniform(&g, nu, cfg)?.z;
    let routes = (0..g.n())
        .map(|r| {
            let single = VertexSet::new(&g, [r])?;
            let closed = g.delete_vertices(&single, true)?;
            let open = g.delete_vertices(&single, false)?;
            let success = partition_function_uniform(&closed.graph, nu, cfg)?.z / z;
            let idle = partition_function_uniform(&open.graph, nu, cfg)?.z / z;
            if !(success > 0.0 && success <= 1.0 + 1e-12) {
                return Err(Error::invariant(format!("route {r} success probability {success} outside (0, 1]")));
            }
            Ok(RouteResult {
                route: r,
                success,
                blocking: 1.0 - success,
                idle,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LossReport {
        activity: nu,
        z,
        routes,
    })
}

impl LossReport {
    pub fn to_csv(&self) -> String {
        csv_table(
            &["route", "activity", "success", "blocking", "idle"],
            self.routes.iter().map(|r| {
                vec![
                    r.route.to_string(),
                    self.activity.to_string(),
                    r.success.to_string(),
                    r.blocking.to_string(),
                    r.idle.to_string(),
                ]
            }),
        )
    }

    pub fn plot_data(&self) -> String {
        plot_rows(
            self.routes
                .iter()
                .map(|r| (format!("route_{}", r.route), self.activity, r.success)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_routes(routes: Vec<Vec<[usize; 2]>>, activity: f64) -> RouteSet {
        // network: path 0-1-2-3-4
        RouteSet {
            network: Graph::path(5),
            routes,
            activity,
        }
    }

    #[test]
    fn interaction_graph_examples() {
        let rs = grid_routes(vec![vec![[0, 1]], vec![[1, 2]], vec![[2, 3]]], 1.0);
        assert_eq!(route_interaction_graph(&rs).unwrap().edge_count(), 0);
        let rs = grid_routes(vec![vec![[0, 1], [1, 2]], vec![[2, 1]]], 1.0);
        assert_eq!(route_interaction_graph(&rs).unwrap().edges(), vec![(0, 1)]);
        let rs = grid_routes(vec![vec![[0, 1], [1, 2]], vec![[1, 2], [2, 3]], vec![[3, 4]]], 1.0);
        assert_eq!(route_interaction_graph(&rs).unwrap().edges(), vec![(0, 1)]);
        let rs = grid_routes(vec![vec![[0, 1], [1, 2]], vec![[1, 2], [2, 3]], vec![[2, 3], [3, 4]]], 1.0);
        assert_eq!(route_interaction_graph(&rs).unwrap().edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_bad_routes() {
        assert!(route_interaction_graph(&grid_routes(vec![vec![[0, 2]]], 1.0)).is_err());
        assert!(route_interaction_graph(&grid_routes(vec![vec![]], 1.0)).is_err());
        assert!(route_interaction_graph(&grid_routes(vec![vec![[0, 1]]], 0.0)).is_err());
        assert!(route_interaction_graph(&grid_routes(vec![vec![[0, 9]]], 1.0)).is_err());
    }

    #[test]
    fn blocking_examples() {
        let cfg = OracleConfig::default();
        for nu in [0.1, 1.0, 7.5] {
            let r = blocking_probabilities(&grid_routes(vec![vec![[0, 1]]], nu), &cfg).unwrap();
            assert!((r.routes[0].success - 1.0 / (1.0 + nu)).abs() < 1e-15);
        }
        let r = blocking_probabilities(&grid_routes(vec![vec![[0, 1]], vec![[2, 3]]], 1.0), &cfg).unwrap();
        assert_eq!(r.z, 4.0);
        assert_eq!(r.routes[0].success, 0.5);
        assert_eq!(r.routes[1].success, 0.5);
        let r = blocking_probabilities(&grid_routes(vec![vec![[0, 1], [1, 2]], vec![[1, 2]]], 1e-9), &cfg).unwrap();
        assert!(r.routes.iter().all(|x| x.success > 1.0 - 1e-8));
        // path of three routes: the middle one conflicts with both ends
        let rs = grid_routes(vec![vec![[0, 1], [1, 2]], vec![[1, 2], [2, 3]], vec![[2, 3], [3, 4]]], 1.0);
        let r = blocking_probabilities(&rs, &cfg).unwrap();
        assert_eq!(r.z, 5.0);
        assert_eq!(r.routes[1].success, 1.0 / 5.0);
        assert_eq!(r.routes[1].idle, 4.0 / 5.0);
        assert_eq!(r.routes[0].success, 2.0 / 5.0);
        let r = blocking_probabilities(&grid_routes(vec![vec![[0, 1], [1, 2]], vec![[1, 2]]], 1e-9), &cfg).unwrap();
        assert!(r.to_csv().starts_with("route,activity,success,blocking,idle\n"));
    }
}
