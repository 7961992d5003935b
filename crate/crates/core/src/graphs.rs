//! Interaction graphs: multigraphs with loops, graph metrics, two-sided
//! boundaries, Cheeger constants and short-cycle census.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest graph for which the Cheeger constant is computed by enumeration.
pub const CHEEGER_EXHAUSTIVE_LIMIT: usize = 20;

/// Unordered vertex pair; `u <= v`, a loop has `u == v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        Edge {
            u: a.min(b),
            v: a.max(b),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn endpoints(&self) -> Vec<usize> {
        if self.is_loop() {
            vec![self.u]
        } else {
            vec![self.u, self.v]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct InteractionGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl TryFrom<GraphRepr> for InteractionGraph {
    type Error = Error;

    fn try_from(repr: GraphRepr) -> Result<Self> {
        InteractionGraph::new(repr.n_vertices, repr.edges.into_iter().map(|e| (e.u, e.v)))
    }
}

impl From<InteractionGraph> for GraphRepr {
    fn from(g: InteractionGraph) -> Self {
        GraphRepr {
            n_vertices: g.n_vertices,
            edges: g.edges,
        }
    }
}

impl InteractionGraph {
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n_vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        n_vertices,
                    });
                }
            }
            list.push(Edge::new(a, b));
        }
        let mut graph = InteractionGraph {
            n_vertices,
            edges: list,
            adjacency: Vec::new(),
        };
        graph.rebuild_adjacency();
        Ok(graph)
    }

    fn rebuild_adjacency(&mut self) {
        let mut adjacency = vec![Vec::new(); self.n_vertices];
        for (id, e) in self.edges.iter().enumerate() {
            adjacency[e.u].push((e.v, id));
            if !e.is_loop() {
                adjacency[e.v].push((e.u, id));
            }
        }
        self.adjacency = adjacency;
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Incident edges, each loop counted once.
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n_vertices).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `(neighbor, edge id)` pairs; a loop appears once with itself as neighbor.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_loop()).count()
    }

    /// Copy of the graph with one loop appended at every vertex.
    pub fn with_vertex_loops(&self) -> Self {
        let mut edges = self.edges.clone();
        edges.extend((0..self.n_vertices).map(|v| Edge::new(v, v)));
        let mut graph = InteractionGraph {
            n_vertices: self.n_vertices,
            edges,
            adjacency: Vec::new(),
        };
        graph.rebuild_adjacency();
        graph
    }

    /// Same graph with loops removed.
    pub fn without_loops(&self) -> Self {
        let mut graph = InteractionGraph {
            n_vertices: self.n_vertices,
            edges: self.edges.iter().copied().filter(|e| !e.is_loop()).collect(),
            adjacency: Vec::new(),
        };
        graph.rebuild_adjacency();
        graph
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n_vertices {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n_vertices: self.n_vertices,
            })
        } else {
            Ok(())
        }
    }

    /// Multi-source breadth-first distances; `None` marks unreachable vertices.
    pub fn distances_from(&self, sources: impl IntoIterator<Item = usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n_vertices];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0);
            for &(y, _) in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Vertices within distance `radius` of any source.
    pub fn ball(&self, sources: impl IntoIterator<Item = usize>, radius: usize) -> VertexSet {
        let dist = self.distances_from(sources);
        VertexSet {
            members: (0..self.n_vertices)
                .filter(|&v| matches!(dist[v], Some(d) if d <= radius))
                .collect(),
        }
    }

    /// Edge-list text: header `n m`, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n_vertices, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(out, "{} {}", e.u, e.v);
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `n m` header".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            edges.push(parse_pair(line)?);
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        InteractionGraph::new(n, edges)
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_edge_list(&std::fs::read_to_string(path)?)
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// A proper two-colouring if one exists (loops make it impossible).
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n_vertices];
        for start in 0..self.n_vertices {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let cx = color[x].unwrap_or(false);
                for &(y, _) in &self.adjacency[x] {
                    match color[y] {
                        None => {
                            color[y] = Some(!cx);
                            queue.push_back(y);
                        }
                        Some(cy) if cy == cx => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse(format!("expected two integers in `{line}`")))?
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("`{line}`: {e}")))
    };
    let a = next()?;
    let b = next()?;
    Ok((a, b))
}

/// Sorted set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>, n_vertices: usize) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.iter().find(|&&v| v >= n_vertices) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n_vertices,
            });
        }
        Ok(VertexSet { members })
    }

    pub fn all(n_vertices: usize) -> Self {
        VertexSet {
            members: (0..n_vertices).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn complement(&self, n_vertices: usize) -> Self {
        VertexSet {
            members: (0..n_vertices).filter(|v| !self.contains(*v)).collect(),
        }
    }

    pub fn union(&self, other: &VertexSet) -> Self {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|v| other.contains(*v))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Path { n: usize },
    Cycle { n: usize },
    CompleteBipartite { left: usize, right: usize },
    /// Pairing (configuration) model on `n` vertices.
    RandomRegular { n: usize, degree: usize, simple: bool },
    /// Union of `degree` random perfect matchings between two sides of `n/2`.
    RandomRegularBipartite { n: usize, degree: usize, simple: bool },
}

/// How a generated graph was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub kind: GraphKind,
    pub seed: u64,
    /// Number of draws, including the accepted one.
    pub attempts: usize,
    /// Whether loops/parallel edges were rejected.
    pub simple: bool,
}

const MAX_GENERATION_ATTEMPTS: usize = 10_000;

pub fn generate_graph(kind: &GraphKind, seed: u64) -> Result<(InteractionGraph, GenerationRecord)> {
    let record = |attempts, simple| GenerationRecord {
        kind: kind.clone(),
        seed,
        attempts,
        simple,
    };
    match *kind {
        GraphKind::Path { n } => {
            let g = InteractionGraph::new(n, (1..n).map(|i| (i - 1, i)))?;
            Ok((g, record(1, true)))
        }
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidGraph(format!("cycle needs n >= 3, got {n}")));
            }
            let g = InteractionGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?;
            Ok((g, record(1, true)))
        }
        GraphKind::CompleteBipartite { left, right } => {
            if left == 0 || right == 0 {
                return Err(Error::InvalidGraph("both sides must be non-empty".into()));
            }
            let edges = (0..left).flat_map(|a| (0..right).map(move |b| (a, left + b)));
            Ok((InteractionGraph::new(left + right, edges)?, record(1, true)))
        }
        GraphKind::RandomRegular { n, degree, simple } => {
            if n == 0 {
                return Err(Error::InvalidGraph("zero vertices".into()));
            }
            if (n * degree) % 2 != 0 {
                return Err(Error::InvalidGraph(format!(
                    "n * degree must be even (n = {n}, degree = {degree})"
                )));
            }
            if simple && degree >= n {
                return Err(Error::InvalidGraph(format!(
                    "no simple {degree}-regular graph on {n} vertices"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
            for attempt in 1..=MAX_GENERATION_ATTEMPTS {
                points.shuffle(&mut rng);
                let pairs: Vec<(usize, usize)> = points.chunks(2).map(|p| (p[0], p[1])).collect();
                if !simple || is_simple(&pairs) {
                    return Ok((InteractionGraph::new(n, pairs)?, record(attempt, simple)));
                }
            }
            Err(Error::InvalidGraph(format!(
                "no simple pairing found in {MAX_GENERATION_ATTEMPTS} attempts"
            )))
        }
        GraphKind::RandomRegularBipartite { n, degree, simple } => {
            if n == 0 {
                return Err(Error::InvalidGraph("zero vertices".into()));
            }
            if n % 2 != 0 {
                return Err(Error::InvalidGraph(format!("bipartite sides must be equal, n = {n} is odd")));
            }
            let side = n / 2;
            if simple && degree > side {
                return Err(Error::InvalidGraph(format!(
                    "no simple {degree}-regular bipartite graph with sides of {side}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..side).collect();
            for attempt in 1..=MAX_GENERATION_ATTEMPTS {
                let mut pairs = Vec::with_capacity(side * degree);
                for _ in 0..degree {
                    perm.shuffle(&mut rng);
                    pairs.extend(perm.iter().enumerate().map(|(a, &b)| (a, side + b)));
                }
                if !simple || is_simple(&pairs) {
                    return Ok((InteractionGraph::new(n, pairs)?, record(attempt, simple)));
                }
            }
            Err(Error::InvalidGraph(format!(
                "no simple matching union found in {MAX_GENERATION_ATTEMPTS} attempts"
            )))
        }
    }
}

fn is_simple(pairs: &[(usize, usize)]) -> bool {
    let mut seen = HashSet::with_capacity(pairs.len());
    pairs
        .iter()
        .all(|&(a, b)| a != b && seen.insert(Edge::new(a, b)))
}

/// Shortest-path distance; `Ok(None)` when `u` and `v` are disconnected.
pub fn graph_distance(g: &InteractionGraph, u: usize, v: usize) -> Result<Option<usize>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    Ok(g.distances_from([u])[v])
}

/// Two-sided `L`-boundary: vertices of `A` within `L` of `A^c`, together with
/// vertices of `A^c` within `L` of `A`.
pub fn l_boundary(g: &InteractionGraph, a: &VertexSet, l: usize) -> VertexSet {
    let n = g.n_vertices();
    let complement = a.complement(n);
    let to_a = g.distances_from(a.members().iter().copied());
    let to_complement = g.distances_from(complement.members().iter().copied());
    let members = (0..n)
        .filter(|&x| {
            let witness = if a.contains(x) { to_complement[x] } else { to_a[x] };
            matches!(witness, Some(d) if d <= l)
        })
        .collect();
    VertexSet { members }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cheeger {
    /// Exact minimum of `|∂S| / |S|`.
    pub h: Ratio<u64>,
    pub witness: VertexSet,
}

impl Cheeger {
    pub fn value(&self) -> f64 {
        *self.h.numer() as f64 / *self.h.denom() as f64
    }
}

/// Number of non-loop edges with exactly one endpoint in `S` (bitmask).
pub fn edge_boundary_size(g: &InteractionGraph, mask: u64) -> u64 {
    g.edges()
        .iter()
        .filter(|e| !e.is_loop() && (((mask >> e.u) ^ (mask >> e.v)) & 1) == 1)
        .count() as u64
}

pub fn cheeger_constant(g: &InteractionGraph) -> Result<Cheeger> {
    cheeger_constant_with_limit(g, CHEEGER_EXHAUSTIVE_LIMIT)
}

pub fn cheeger_constant_with_limit(g: &InteractionGraph, limit: usize) -> Result<Cheeger> {
    let n = g.n_vertices();
    if n > limit || n >= 64 {
        return Err(Error::LimitExceeded {
            what: "exhaustive Cheeger enumeration (vertices)",
            limit: limit.min(63),
            got: n,
        });
    }
    if n < 2 {
        return Err(Error::InvalidGraph("Cheeger constant needs at least two vertices".into()));
    }
    let pairs: Vec<(u64, u64)> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| (1u64 << e.u, 1u64 << e.v))
        .collect();
    let half = n / 2;
    let mut best: Option<(u64, u64, u64)> = None;
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as u64;
        if size as usize > half {
            continue;
        }
        let cut = pairs
            .iter()
            .filter(|&&(a, b)| ((mask & a) != 0) != ((mask & b) != 0))
            .count() as u64;
        let better = match best {
            None => true,
            Some((bc, bs, _)) => cut * bs < bc * size,
        };
        if better {
            best = Some((cut, size, mask));
        }
    }
    let (cut, size, mask) = best.expect("n >= 2 gives at least one candidate set");
    Ok(Cheeger {
        h: Ratio::new(cut, size),
        witness: VertexSet {
            members: (0..n).filter(|&v| (mask >> v) & 1 == 1).collect(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleCensus {
    pub max_length: usize,
    /// Simple cycles of length at most `2L + 1` (loops are 1-cycles, a parallel
    /// pair is a 2-cycle).
    pub n_short_cycles: usize,
    /// Ids of edges whose `L`-neighbourhood contains a cycle.
    pub r_l_edges: Vec<usize>,
}

/// Vertices within distance `l` of either endpoint of edge `edge_id`.
pub fn edge_neighborhood(g: &InteractionGraph, edge_id: usize, l: usize) -> VertexSet {
    let e = g.edges()[edge_id];
    g.ball([e.u, e.v], l)
}

/// Whether the subgraph induced on `region` contains a cycle.
pub fn induced_has_cycle(g: &InteractionGraph, region: &VertexSet) -> bool {
    let mut parent: Vec<usize> = (0..g.n_vertices()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in g.edges() {
        if !(region.contains(e.u) && region.contains(e.v)) {
            continue;
        }
        let (ru, rv) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if ru == rv {
            return true;
        }
        parent[ru] = rv;
    }
    false
}

pub fn cycle_census(g: &InteractionGraph, l: usize) -> CycleCensus {
    let max_length = 2 * l + 1;
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    for (id, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            found.insert(vec![id]);
        }
    }
    let mut path_vertices = Vec::new();
    let mut path_edges = Vec::new();
    for s in 0..g.n_vertices() {
        path_vertices.clear();
        path_edges.clear();
        path_vertices.push(s);
        extend_cycles(g, s, s, max_length, &mut path_vertices, &mut path_edges, &mut found);
    }
    let r_l_edges = (0..g.n_edges())
        .filter(|&id| induced_has_cycle(g, &edge_neighborhood(g, id, l)))
        .collect();
    CycleCensus {
        max_length,
        n_short_cycles: found.len(),
        r_l_edges,
    }
}

fn extend_cycles(
    g: &InteractionGraph,
    start: usize,
    current: usize,
    max_length: usize,
    path_vertices: &mut Vec<usize>,
    path_edges: &mut Vec<usize>,
    found: &mut HashSet<Vec<usize>>,
) {
    let depth = path_edges.len();
    for &(next, eid) in g.incident(current) {
        if next == current {
            continue;
        }
        if next == start {
            if depth >= 1 && eid != path_edges[0] && depth < max_length {
                let mut key = path_edges.clone();
                key.push(eid);
                key.sort_unstable();
                found.insert(key);
            }
            continue;
        }
        if next < start || path_vertices.contains(&next) || depth + 1 >= max_length {
            continue;
        }
        path_vertices.push(next);
        path_edges.push(eid);
        extend_cycles(g, start, next, max_length, path_vertices, path_edges, found);
        path_vertices.pop();
        path_edges.pop();
    }
}
