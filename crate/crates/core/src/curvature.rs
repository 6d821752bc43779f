use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::transport::w1;
use crate::weight::Weight;

/// Cap on hypercube graph dimension; adjacency is materialized.
pub const MAX_GRAPH_CUBE_DIM: usize = 16;

/// Finite connected simple graph with 0-based dense vertex ids and an
/// optional ambient vertex weighting (uniform when absent). Ambient weights
/// are plain f64 values; they convert exactly into rational mode because
/// every float is dyadic.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    ambient: Option<Vec<f64>>,
}

impl Graph {
    pub fn from_edges(edges: &[(u32, u32)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap();
        let mut seen = BTreeSet::new();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u as usize));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(key.0 as usize, key.1 as usize));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (i, nb) in adj.iter_mut().enumerate() {
            if nb.is_empty() {
                return Err(Error::MissingVertex(i));
            }
            nb.sort_unstable();
        }
        let g = Graph { adj, ambient: None };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Parse a plain-text edge list: one "u v" pair per line, `#` starts a
    /// comment, blank lines are skipped. Errors carry 1-based line numbers.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::GraphFormat {
                    line: line_no,
                    msg: format!("expected two vertex ids, got {}", tokens.len()),
                });
            }
            let parse = |t: &str| {
                t.parse::<u32>().map_err(|_| Error::GraphFormat {
                    line: line_no,
                    msg: format!("bad vertex id {t:?}"),
                })
            };
            edges.push((parse(tokens[0])?, parse(tokens[1])?));
            lines.push(line_no);
        }
        Graph::from_edges(&edges).map_err(|e| match e {
            Error::SelfLoop(u) => {
                let line = edges
                    .iter()
                    .position(|&(a, b)| a == b && a as usize == u)
                    .map(|i| lines[i])
                    .unwrap_or(0);
                Error::GraphFormat { line, msg: format!("self loop at vertex {u}") }
            }
            Error::DuplicateEdge(u, v) => {
                let key = (u.min(v) as u32, u.max(v) as u32);
                let line = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| (a.min(b), a.max(b)) == key)
                    .nth(1)
                    .map(|(i, _)| lines[i])
                    .unwrap_or(0);
                Error::GraphFormat { line, msg: format!("duplicate edge {u} {v}") }
            }
            other => other,
        })
    }

    /// The N-dimensional hypercube on vertex ids 0..2^N; kept small because
    /// adjacency is explicit.
    pub fn hypercube(dim: usize) -> Result<Self> {
        if dim < 1 || dim > MAX_GRAPH_CUBE_DIM {
            return Err(Error::DimensionOutOfRange(dim, MAX_GRAPH_CUBE_DIM));
        }
        let n = 1u32 << dim;
        let adj = (0..n)
            .map(|u| (0..dim).map(|b| u ^ (1 << b)).collect())
            .collect();
        Ok(Graph { adj, ambient: None })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooLarge(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let edges: Vec<(u32, u32)> =
            (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Graph::from_edges(&edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooLarge(format!("path needs at least 2 vertices, got {n}")));
        }
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(&edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooLarge(format!("complete graph needs at least 2 vertices")));
        }
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::from_edges(&edges)
    }

    pub fn with_ambient(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.order() {
            return Err(Error::DimensionMismatch(weights.len(), self.order()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMeasure("ambient weights must be finite and >= 0".into()));
        }
        self.ambient = Some(weights);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(|nb| nb.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: u32) -> Result<&[u32]> {
        self.adj
            .get(u as usize)
            .map(|v| v.as_slice())
            .ok_or(Error::VertexOutOfRange(u as usize, self.order()))
    }

    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.size());
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    fn is_connected(&self) -> bool {
        let d = self.distances_from(0, None);
        d.iter().all(|&x| x != u32::MAX)
    }

    /// BFS distances from `src`; nodes beyond `cap` keep u32::MAX.
    pub fn distances_from(&self, src: u32, cap: Option<u32>) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.order()];
        let mut queue = std::collections::VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if let Some(c) = cap {
                if du >= c {
                    continue;
                }
            }
            for &v in &self.adj[u as usize] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Normalized restriction of the ambient measure to the closed ball
/// B(x, radius). With uniform ambient this is the uniform measure on the
/// ball; a Dirac ambient stays a Dirac whatever the radius.
pub fn ball_measure<W: Weight>(
    g: &Graph,
    x: u32,
    radius: u32,
) -> Result<DiscreteMeasure<u32, W>> {
    if x as usize >= g.order() {
        return Err(Error::VertexOutOfRange(x as usize, g.order()));
    }
    let dist = g.distances_from(x, Some(radius));
    let mut weighted = Vec::new();
    for (v, &d) in dist.iter().enumerate() {
        if d <= radius {
            let w = match &g.ambient {
                Some(a) => W::ingest_f64(a[v])?,
                None => W::one(),
            };
            if !w.is_zero() {
                weighted.push((v as u32, w));
            }
        }
    }
    if weighted.is_empty() {
        return Err(Error::EmptyBall(x as usize));
    }
    DiscreteMeasure::from_weights(weighted)
}

/// Coarse curvature along one pair: kappa(x, y) = 1 - W1(mu_x, mu_y)/d(x, y)
/// with mu_z the unit-radius ball measure at z.
#[derive(Clone, Debug)]
pub struct PairCurvature<W: Weight> {
    pub x: u32,
    pub y: u32,
    pub distance: u32,
    pub w1: W,
    pub kappa: W,
}

pub fn kappa<W: Weight>(g: &Graph, x: u32, y: u32) -> Result<PairCurvature<W>> {
    if x as usize >= g.order() || y as usize >= g.order() {
        return Err(Error::VertexOutOfRange(x.max(y) as usize, g.order()));
    }
    if x == y {
        return Err(Error::Unsupported("curvature needs two distinct vertices".into()));
    }
    let dx = g.distances_from(x, None);
    let d = dx[y as usize];
    debug_assert!(d != u32::MAX, "graph is connected by construction");
    let mu: DiscreteMeasure<u32, W> = ball_measure(g, x, 1)?;
    let nu: DiscreteMeasure<u32, W> = ball_measure(g, y, 1)?;
    // Support points sit within d + 2 of any ball member; truncated BFS per
    // source row covers every needed distance exactly.
    let mut rows: std::collections::BTreeMap<u32, Vec<u32>> = std::collections::BTreeMap::new();
    for p in mu.support() {
        rows.insert(*p, g.distances_from(*p, Some(d + 2)));
    }
    let metric = |p: &u32, q: &u32| rows[p][*q as usize] as f64;
    let r = w1(&mu, &nu, metric)?;
    let kappa = W::one() - r.value.clone() / W::from_int(d as i64);
    Ok(PairCurvature { x, y, distance: d, w1: r.value, kappa })
}

#[derive(Clone, Debug)]
pub struct CurvatureReport<W: Weight> {
    pub edges: Vec<PairCurvature<W>>,
    pub pairs: Vec<PairCurvature<W>>,
    pub min_edge_kappa: W,
    pub min_pair_kappa: Option<W>,
    /// Pair curvatures never undercut the edge minimum on 1-geodesic
    /// graphs; true vacuously when no pairs beyond edges were requested.
    pub locality_ok: bool,
}

/// Curvature along every edge, and optionally along all vertex pairs at
/// distance 2..=max_pair_distance.
pub fn edge_curvature_sweep<W: Weight>(
    g: &Graph,
    max_pair_distance: Option<u32>,
) -> Result<CurvatureReport<W>> {
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        edges.push(kappa::<W>(g, u, v)?);
    }
    let min_edge_kappa = edges
        .iter()
        .map(|p| p.kappa.clone())
        .min_by(|a, b| a.partial_cmp(b).expect("kappa values are ordered"))
        .ok_or(Error::EmptySet)?;

    let mut pairs = Vec::new();
    if let Some(bound) = max_pair_distance {
        for u in 0..g.order() as u32 {
            let du = g.distances_from(u, Some(bound));
            for v in u + 1..g.order() as u32 {
                let d = du[v as usize];
                if d >= 2 && d <= bound {
                    pairs.push(kappa::<W>(g, u, v)?);
                }
            }
        }
    }
    let min_pair_kappa = pairs
        .iter()
        .map(|p| p.kappa.clone())
        .min_by(|a, b| a.partial_cmp(b).expect("kappa values are ordered"));
    let locality_ok = match &min_pair_kappa {
        None => true,
        Some(mp) => mp.to_f64() >= min_edge_kappa.to_f64() - 1e-9,
    };
    Ok(CurvatureReport { edges, pairs, min_edge_kappa, min_pair_kappa, locality_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Exact;

    #[test]
    fn hypercube_edge_curvature_closed_form() {
        // Floating mode carries the 1e-9 mass quantization of the solver;
        // rational mode below is on the nose.
        for n in 2..=6 {
            let g = Graph::hypercube(n).unwrap();
            let want = 2.0 / (n as f64 + 1.0);
            let p: PairCurvature<f64> = kappa(&g, 0, 1).unwrap();
            assert!((p.kappa - want).abs() < 1e-8, "n={n}: {} vs {want}", p.kappa);
        }
    }

    #[test]
    fn hypercube_edge_curvature_exact() {
        for n in 2..=7usize {
            let g = Graph::hypercube(n).unwrap();
            let p: PairCurvature<Exact> = kappa(&g, 0, 1 << (n - 1)).unwrap();
            assert_eq!(p.kappa, Exact::from_ratio(2, n as i64 + 1), "n={n}");
        }
        let g = Graph::hypercube(7).unwrap();
        let p: PairCurvature<Exact> = kappa(&g, 0, 64).unwrap();
        assert_eq!(p.w1, Exact::from_ratio(3, 4));
    }

    #[test]
    fn cycle_six_has_flat_edges() {
        let g = Graph::cycle(6).unwrap();
        let rep: CurvatureReport<Exact> = edge_curvature_sweep(&g, None).unwrap();
        for e in &rep.edges {
            assert_eq!(e.kappa, Exact::from_ratio(0, 1), "edge ({}, {})", e.x, e.y);
        }
    }

    #[test]
    fn complete_graph_curvature_is_one() {
        let g = Graph::complete(5).unwrap();
        let rep: CurvatureReport<f64> = edge_curvature_sweep(&g, Some(1)).unwrap();
        for e in &rep.edges {
            assert!(e.kappa >= 0.0);
            assert!((e.kappa - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn path_endpoint_edge() {
        // Ball(0) = {0, 1} at mass 1/2, ball(1) = {0, 1, 2} at mass 1/3:
        // keep 1/3 + 1/6 in place, move 1/6 from 1 to 2 and 1/6 from 0 past
        // it, total 1/2. The dual side: f = (1, 0, -1, -1) achieves it.
        let g = Graph::path(4).unwrap();
        let p: PairCurvature<Exact> = kappa(&g, 0, 1).unwrap();
        assert_eq!(p.w1, Exact::from_ratio(1, 2));
        assert_eq!(p.kappa, Exact::from_ratio(1, 2));
    }

    #[test]
    fn hypercube_locality() {
        let g = Graph::hypercube(4).unwrap();
        let rep: CurvatureReport<f64> = edge_curvature_sweep(&g, Some(3)).unwrap();
        assert!(rep.locality_ok);
        assert!(!rep.pairs.is_empty());
    }

    #[test]
    fn dirac_ambient_pins_ball() {
        let g = Graph::cycle(5).unwrap().with_ambient(vec![0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let m: DiscreteMeasure<u32, f64> = ball_measure(&g, 1, 1).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.mass_of(&1), 1.0);
        assert!(matches!(ball_measure::<f64>(&g, 3, 1), Err(Error::EmptyBall(3))));
    }

    #[test]
    fn parser_reports_line_numbers() {
        let ok = Graph::parse_edge_list("# square\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(ok.order(), 4);
        assert_eq!(ok.size(), 4);

        let e = Graph::parse_edge_list("0 1\n1 x\n").unwrap_err();
        assert!(matches!(e, Error::GraphFormat { line: 2, .. }), "{e}");

        let e = Graph::parse_edge_list("0 1\n\n1 1\n").unwrap_err();
        assert!(matches!(e, Error::GraphFormat { line: 3, .. }), "{e}");

        let e = Graph::parse_edge_list("0 1\n1 0\n").unwrap_err();
        assert!(matches!(e, Error::GraphFormat { line: 2, .. }), "{e}");

        let e = Graph::parse_edge_list("0 1 2\n").unwrap_err();
        assert!(matches!(e, Error::GraphFormat { line: 1, .. }), "{e}");
    }

    #[test]
    fn disconnected_and_missing_rejected() {
        assert!(matches!(
            Graph::parse_edge_list("0 1\n2 3\n"),
            Err(Error::Disconnected)
        ));
        assert!(matches!(
            Graph::parse_edge_list("0 2\n"),
            Err(Error::MissingVertex(1))
        ));
    }
}
