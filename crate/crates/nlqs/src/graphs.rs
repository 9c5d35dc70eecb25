//! Graph families, strongly-regular parameter checks, and collapse onto the
//! subspace of identically-evolving vertex classes.
//!
//! A search Hamiltonian on a vertex-transitive-enough graph never mixes
//! vertices that relate identically to the marked set, so the dynamics live in
//! the quotient over the coarsest equitable partition refining
//! {marked, complement}. [`collapse`] computes that quotient from an explicit
//! graph; [`collapse_analytic`] builds it directly from family parameters.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Strongly regular graph parameters (N, k, λ, μ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub n_vertices: usize,
    pub degree: usize,
    pub lambda_common: usize,
    pub mu_common: usize,
}

impl SrgParams {
    pub fn new(n: usize, k: usize, lambda: usize, mu: usize) -> Self {
        SrgParams { n_vertices: n, degree: k, lambda_common: lambda, mu_common: mu }
    }
}

/// Parameter-set classification: conference graphs vs the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SrgType {
    TypeI,
    TypeII,
    Neither,
}

/// Result of [`srg_check`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub srg_type: SrgType,
    pub violations: Vec<String>,
}

/// Checks the pair-counting identity k(k−λ−1) = (N−k−1)μ and the basic bounds,
/// and classifies feasible sets as conference (Type I, (N−1)(λ−μ)+2k = 0) or
/// Type II (feasible and not conference).
pub fn srg_check(params: &SrgParams) -> FeasibilityReport {
    let n = params.n_vertices as i64;
    let k = params.degree as i64;
    let lambda = params.lambda_common as i64;
    let mu = params.mu_common as i64;
    let mut violations = Vec::new();

    if !(0 < k && k < n) {
        violations.push(format!("degree out of range: need 0 < k < N, got k={k}, N={n}"));
    }
    if lambda > k - 1 {
        violations.push(format!("lambda too large: need λ ≤ k−1, got λ={lambda}, k={k}"));
    }
    if mu > k {
        violations.push(format!("mu too large: need μ ≤ k, got μ={mu}, k={k}"));
    }
    let lhs = k * (k - lambda - 1);
    let rhs = (n - k - 1) * mu;
    if lhs != rhs {
        violations.push(format!("pair count mismatch: k(k−λ−1)={lhs} but (N−k−1)μ={rhs}"));
    }

    let feasible = violations.is_empty();
    let srg_type = if !feasible {
        SrgType::Neither
    } else if (n - 1) * (lambda - mu) + 2 * k == 0 {
        SrgType::TypeI
    } else {
        SrgType::TypeII
    };
    FeasibilityReport { feasible, srg_type, violations }
}

/// Named graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Complete,
    Paley,
    SquareLattice,
    LatinSquare,
    Triangular,
    Hypercube,
    Petersen,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Paley => "paley",
            Family::SquareLattice => "square_lattice",
            Family::LatinSquare => "latin_square",
            Family::Triangular => "triangular",
            Family::Hypercube => "hypercube",
            Family::Petersen => "petersen",
        }
    }
}

/// A family plus its size parameter: N for complete, prime q ≡ 1 (mod 4) for
/// Paley, t for L₂/L₃/T, n for the hypercube, nothing for Petersen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub size_param: Option<usize>,
}

impl FamilySpec {
    pub fn new(family: Family, size_param: usize) -> Self {
        FamilySpec { family, size_param: Some(size_param) }
    }

    pub fn petersen() -> Self {
        FamilySpec { family: Family::Petersen, size_param: None }
    }

    fn size(&self) -> Result<usize, GraphError> {
        self.size_param.ok_or_else(|| {
            GraphError::InvalidSpec(format!("family {} requires a size parameter", self.family.name()))
        })
    }

    /// Validates the size parameter against the family's constraints.
    pub fn validate(&self) -> Result<(), GraphError> {
        match self.family {
            Family::Complete => {
                let n = self.size()?;
                if n < 2 {
                    return Err(GraphError::InvalidSpec("complete graph needs N ≥ 2".into()));
                }
            }
            Family::Paley => {
                let q = self.size()?;
                // q = 9 is admitted as a fixed table (the unique (9,4,1,2) graph);
                // all other sizes must be prime with q ≡ 1 (mod 4).
                if q != 9 && !(q % 4 == 1 && is_prime(q)) {
                    return Err(GraphError::InvalidSpec(format!(
                        "paley graph needs prime q ≡ 1 (mod 4) (or q = 9), got {q}"
                    )));
                }
            }
            Family::SquareLattice => {
                let t = self.size()?;
                if t < 2 {
                    return Err(GraphError::InvalidSpec("square lattice needs t ≥ 2".into()));
                }
            }
            Family::LatinSquare => {
                let t = self.size()?;
                if t < 3 {
                    return Err(GraphError::InvalidSpec("latin square graph needs t ≥ 3".into()));
                }
            }
            Family::Triangular => {
                let t = self.size()?;
                if t < 4 {
                    return Err(GraphError::InvalidSpec("triangular graph needs t ≥ 4".into()));
                }
            }
            Family::Hypercube => {
                let n = self.size()?;
                if n < 1 {
                    return Err(GraphError::InvalidSpec("hypercube needs n ≥ 1".into()));
                }
            }
            Family::Petersen => {
                if let Some(s) = self.size_param {
                    if s != 10 {
                        return Err(GraphError::InvalidSpec(format!(
                            "petersen takes no size parameter (got {s})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> Result<usize, GraphError> {
        self.validate()?;
        Ok(match self.family {
            Family::Complete | Family::Paley => self.size()?,
            Family::SquareLattice | Family::LatinSquare => {
                let t = self.size()?;
                t * t
            }
            Family::Triangular => {
                let t = self.size()?;
                t * (t - 1) / 2
            }
            Family::Hypercube => 1usize << self.size()?,
            Family::Petersen => 10,
        })
    }

    /// The (N, k, λ, μ) parameterization, for the families that are strongly
    /// regular. Complete graphs and hypercubes return `None`.
    pub fn derived_srg_params(&self) -> Result<Option<SrgParams>, GraphError> {
        self.validate()?;
        Ok(match self.family {
            Family::Paley => {
                let q = self.size()?;
                Some(SrgParams::new(q, (q - 1) / 2, (q - 5) / 4, (q - 1) / 4))
            }
            Family::SquareLattice => {
                let t = self.size()?;
                Some(SrgParams::new(t * t, 2 * (t - 1), t - 2, 2))
            }
            Family::LatinSquare => {
                let t = self.size()?;
                Some(SrgParams::new(t * t, 3 * (t - 1), t, 6))
            }
            Family::Triangular => {
                let t = self.size()?;
                Some(SrgParams::new(t * (t - 1) / 2, 2 * (t - 2), t - 2, 4))
            }
            Family::Petersen => Some(SrgParams::new(10, 3, 0, 1)),
            Family::Complete | Family::Hypercube => None,
        })
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2usize;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Undirected simple graph stored as sorted neighbor lists.
#[derive(Debug, Clone)]
pub struct Graph {
    pub n_vertices: usize,
    neighbors: Vec<Vec<u32>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v || u as usize >= n || v as usize >= n {
                return Err(GraphError::InvalidSpec(format!("bad edge ({u},{v}) for N={n}")));
            }
            neighbors[u as usize].push(v);
            neighbors[v as usize].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { n_vertices: n, neighbors })
    }

    pub fn neighbors_of(&self, v: usize) -> &[u32] {
        &self.neighbors[v]
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&(v as u32)).is_ok()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.degree_of(0);
        if (0..self.n_vertices).all(|v| self.degree_of(v) == k) {
            Some(k)
        } else {
            None
        }
    }

    /// Edge-list text: one "u v" line per edge, u < v, 0-indexed.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for u in 0..self.n_vertices {
            for &v in &self.neighbors[u] {
                if (v as usize) > u {
                    out.push_str(&format!("{u} {v}\n"));
                }
            }
        }
        out
    }
}

/// Reduced quotient of a graph over its identically-evolving vertex classes.
///
/// Entry (i, j) of the reduced adjacency is b_ij·√(|m_i|/|m_j|), where b_ij is
/// the number of class-j neighbors of one class-i vertex; symmetry of the
/// result is exactly the pair-counting identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollapsedGraph {
    pub class_sizes: Vec<usize>,
    /// Row-major M×M.
    pub reduced_adjacency: Vec<f64>,
    pub degree: usize,
}

impl CollapsedGraph {
    pub fn n_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.reduced_adjacency[i * self.n_classes() + j]
    }

    /// max |A_ij − A_ji|.
    pub fn symmetry_residual(&self) -> f64 {
        let m = self.n_classes();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                worst = worst.max((self.at(i, j) - self.at(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("collapsed graph serializes")
    }

    /// Entrywise max |self − other|, or None on shape mismatch.
    pub fn max_abs_diff(&self, other: &CollapsedGraph) -> Option<f64> {
        if self.class_sizes != other.class_sizes {
            return None;
        }
        Some(
            self.reduced_adjacency
                .iter()
                .zip(&other.reduced_adjacency)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    InvalidSpec(String),
    Infeasible(String),
    NotRegular,
    BadMarkedSet(String),
}

impl std::fmt::Display for GraphError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphError::InvalidSpec(s) => write!(f, "invalid graph spec: {s}"),
            GraphError::Infeasible(s) => write!(f, "infeasible parameters: {s}"),
            GraphError::NotRegular => write!(f, "graph is not regular"),
            GraphError::BadMarkedSet(s) => write!(f, "bad marked set: {s}"),
        }
    }
}

impl std::error::Error for GraphError {}

/// Largest explicit graph this crate will construct; the analytic collapse
/// routines have no such cap.
pub const MAX_FULL_VERTICES: usize = 5000;

/// Builds the full adjacency structure of a family instance.
pub fn build_graph(spec: &FamilySpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let n = spec.n_vertices()?;
    if n > MAX_FULL_VERTICES {
        return Err(GraphError::InvalidSpec(format!(
            "full graphs are desk-scale only (N ≤ {MAX_FULL_VERTICES}, got {n}); use the analytic collapse instead"
        )));
    }
    match spec.family {
        Family::Complete => {
            let n = spec.size()?;
            let mut edges = Vec::with_capacity(n * (n - 1) / 2);
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    edges.push((u, v));
                }
            }
            Graph::from_edges(n, &edges)
        }
        Family::Paley => {
            let q = spec.size()?;
            if q == 9 {
                return paley9();
            }
            // residues: squares of 1..q-1 mod q; q ≡ 1 (mod 4) makes -1 a
            // residue, so the relation is symmetric
            let mut is_residue = vec![false; q];
            for x in 1..q {
                is_residue[(x * x) % q] = true;
            }
            let mut edges = Vec::new();
            for u in 0..q {
                for v in (u + 1)..q {
                    if is_residue[(v - u) % q] {
                        edges.push((u as u32, v as u32));
                    }
                }
            }
            Graph::from_edges(q, &edges)
        }
        Family::SquareLattice => {
            let t = spec.size()?;
            let idx = |r: usize, c: usize| (r * t + c) as u32;
            let mut edges = Vec::new();
            for r in 0..t {
                for c in 0..t {
                    for c2 in (c + 1)..t {
                        edges.push((idx(r, c), idx(r, c2)));
                    }
                    for r2 in (r + 1)..t {
                        edges.push((idx(r, c), idx(r2, c)));
                    }
                }
            }
            Graph::from_edges(t * t, &edges)
        }
        Family::LatinSquare => {
            // cyclic square s(r, c) = (r + c) mod t; rows, columns, and equal
            // symbols are all adjacent
            let t = spec.size()?;
            let idx = |r: usize, c: usize| (r * t + c) as u32;
            let mut edges = Vec::new();
            for r in 0..t {
                for c in 0..t {
                    for c2 in (c + 1)..t {
                        edges.push((idx(r, c), idx(r, c2)));
                    }
                    for r2 in (r + 1)..t {
                        edges.push((idx(r, c), idx(r2, c)));
                    }
                }
            }
            // symbol s occupies cells (r, (s - r) mod t), one per row and column
            for s in 0..t {
                let cells: Vec<u32> = (0..t).map(|r| idx(r, (s + t - r) % t)).collect();
                for i in 0..cells.len() {
                    for j in (i + 1)..cells.len() {
                        edges.push((cells[i], cells[j]));
                    }
                }
            }
            Graph::from_edges(t * t, &edges)
        }
        Family::Triangular => {
            let t = spec.size()?;
            let mut pairs = Vec::new();
            for i in 0..t {
                for j in (i + 1)..t {
                    pairs.push((i, j));
                }
            }
            let n = pairs.len();
            let mut edges = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    let (i, j) = pairs[a];
                    let (p, q) = pairs[b];
                    if i == p || i == q || j == p || j == q {
                        edges.push((a as u32, b as u32));
                    }
                }
            }
            Graph::from_edges(n, &edges)
        }
        Family::Hypercube => {
            let n = spec.size()?;
            let size = 1usize << n;
            let mut edges = Vec::new();
            for v in 0..size {
                for bit in 0..n {
                    let w = v ^ (1 << bit);
                    if w > v {
                        edges.push((v as u32, w as u32));
                    }
                }
            }
            Graph::from_edges(size, &edges)
        }
        Family::Petersen => {
            // outer 5-cycle 0..4, spokes i—i+5, inner pentagram
            let edges: [(u32, u32); 15] = [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (0, 4),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ];
            Graph::from_edges(10, &edges)
        }
    }
}

/// The unique (9,4,1,2) strongly regular graph, kept as a fixed table.
fn paley9() -> Result<Graph, GraphError> {
    const ADJ: [[u8; 9]; 9] = [
        [0, 1, 1, 1, 0, 0, 1, 0, 0],
        [1, 0, 1, 0, 1, 0, 0, 1, 0],
        [1, 1, 0, 0, 0, 1, 0, 0, 1],
        [1, 0, 0, 0, 1, 1, 1, 0, 0],
        [0, 1, 0, 1, 0, 1, 0, 1, 0],
        [0, 0, 1, 1, 1, 0, 0, 0, 1],
        [1, 0, 0, 1, 0, 0, 0, 1, 1],
        [0, 1, 0, 0, 1, 0, 1, 0, 1],
        [0, 0, 1, 0, 0, 1, 1, 1, 0],
    ];
    let mut edges = Vec::new();
    for (u, row) in ADJ.iter().enumerate() {
        for (v, &bit) in row.iter().enumerate().skip(u + 1) {
            if bit == 1 {
                edges.push((u as u32, v as u32));
            }
        }
    }
    Graph::from_edges(9, &edges)
}

/// Coarsest equitable partition refining {marked, complement}, as vertex
/// classes. Class order: classes inside the marked set first, then by
/// smallest contained vertex.
pub fn equitable_partition(graph: &Graph, marked: &[usize]) -> Result<Vec<Vec<u32>>, GraphError> {
    let n = graph.n_vertices;
    if marked.is_empty() {
        return Err(GraphError::BadMarkedSet("marked set is empty".into()));
    }
    let mut is_marked = vec![false; n];
    for &m in marked {
        if m >= n {
            return Err(GraphError::BadMarkedSet(format!("vertex {m} out of range (N = {n})")));
        }
        is_marked[m] = true;
    }

    let mut class_of: Vec<u32> = (0..n).map(|v| if is_marked[v] { 0 } else { 1 }).collect();
    let mut n_classes = if marked.len() == n { 1 } else { 2 };
    if marked.len() == n {
        class_of.iter_mut().for_each(|c| *c = 0);
    }

    loop {
        // signature of v: run-length-encoded neighbor classes
        let mut next_id = 0u32;
        let mut ids: HashMap<(u32, Vec<(u32, u32)>), u32> = HashMap::new();
        let mut new_class_of = vec![0u32; n];
        let mut buf: Vec<u32> = Vec::new();
        for v in 0..n {
            buf.clear();
            buf.extend(graph.neighbors[v].iter().map(|&w| class_of[w as usize]));
            buf.sort_unstable();
            let mut sig: Vec<(u32, u32)> = Vec::new();
            for &c in buf.iter() {
                match sig.last_mut() {
                    Some((lc, cnt)) if *lc == c => *cnt += 1,
                    _ => sig.push((c, 1)),
                }
            }
            let key = (class_of[v], sig);
            let id = *ids.entry(key).or_insert_with(|| {
                let id = next_id;
                next_id += 1;
                id
            });
            new_class_of[v] = id;
        }
        if next_id as usize == n_classes {
            break;
        }
        class_of = new_class_of;
        n_classes = next_id as usize;
    }

    let mut classes: Vec<Vec<u32>> = vec![Vec::new(); n_classes];
    for v in 0..n {
        classes[class_of[v] as usize].push(v as u32);
    }
    classes.sort_by_key(|cls| (!is_marked[cls[0] as usize], cls[0]));
    Ok(classes)
}

/// Exact integer check that every vertex of class i has the same number of
/// neighbors in class j, for all ordered pairs (i, j).
pub fn is_equitable(graph: &Graph, classes: &[Vec<u32>]) -> bool {
    let n = graph.n_vertices;
    let mut class_of = vec![u32::MAX; n];
    for (i, cls) in classes.iter().enumerate() {
        for &v in cls {
            class_of[v as usize] = i as u32;
        }
    }
    if class_of.contains(&u32::MAX) {
        return false;
    }
    let m = classes.len();
    for cls in classes {
        let mut expected: Option<Vec<u32>> = None;
        for &v in cls {
            let mut counts = vec![0u32; m];
            for &w in &graph.neighbors[v as usize] {
                counts[class_of[w as usize] as usize] += 1;
            }
            match &expected {
                None => expected = Some(counts),
                Some(e) => {
                    if e != &counts {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Collapses a regular graph onto its equitable quotient; class 0 is the
/// marked class.
pub fn collapse(graph: &Graph, marked: &[usize]) -> Result<CollapsedGraph, GraphError> {
    let degree = graph.regular_degree().ok_or(GraphError::NotRegular)?;
    let classes = equitable_partition(graph, marked)?;
    collapse_classes(graph, &classes, degree)
}

fn collapse_classes(
    graph: &Graph,
    classes: &[Vec<u32>],
    degree: usize,
) -> Result<CollapsedGraph, GraphError> {
    let n = graph.n_vertices;
    let m = classes.len();
    let mut class_of = vec![0u32; n];
    for (i, cls) in classes.iter().enumerate() {
        for &v in cls {
            class_of[v as usize] = i as u32;
        }
    }
    let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let mut reduced = vec![0.0; m * m];
    for i in 0..m {
        let rep = classes[i][0] as usize;
        let mut counts = vec![0usize; m];
        for &w in &graph.neighbors[rep] {
            counts[class_of[w as usize] as usize] += 1;
        }
        for j in 0..m {
            reduced[i * m + j] = counts[j] as f64 * (sizes[i] as f64 / sizes[j] as f64).sqrt();
        }
    }
    Ok(CollapsedGraph { class_sizes: sizes, reduced_adjacency: reduced, degree })
}

/// Builds the collapsed quotient directly from family parameters, without
/// constructing the full graph.
///
/// Complete graphs admit 1 ≤ marked_count < N; strongly regular families and
/// the hypercube are single-marked.
pub fn collapse_analytic(spec: &FamilySpec, marked_count: usize) -> Result<CollapsedGraph, GraphError> {
    spec.validate()?;
    match spec.family {
        Family::Complete => {
            let n = spec.size()?;
            collapse_analytic_complete(n, marked_count)
        }
        Family::Hypercube => {
            if marked_count != 1 {
                return Err(GraphError::BadMarkedSet(
                    "hypercube collapse supports one marked vertex".into(),
                ));
            }
            Ok(collapse_analytic_hypercube(spec.size()?))
        }
        _ => {
            if marked_count != 1 {
                return Err(GraphError::BadMarkedSet(
                    "strongly regular collapse supports one marked vertex".into(),
                ));
            }
            let params = spec
                .derived_srg_params()?
                .expect("non-complete, non-hypercube families are strongly regular");
            collapse_analytic_srg(&params)
        }
    }
}

/// Two-class quotient of the complete graph with `marked_count` marked vertices.
pub fn collapse_analytic_complete(n: usize, marked_count: usize) -> Result<CollapsedGraph, GraphError> {
    if marked_count == 0 || marked_count >= n {
        return Err(GraphError::BadMarkedSet(format!(
            "need 1 ≤ marked_count < N, got {marked_count} of {n}"
        )));
    }
    let k = marked_count as f64;
    let r = (n - marked_count) as f64;
    let reduced = vec![k - 1.0, (k * r).sqrt(), (k * r).sqrt(), r - 1.0];
    Ok(CollapsedGraph {
        class_sizes: vec![marked_count, n - marked_count],
        reduced_adjacency: reduced,
        degree: n - 1,
    })
}

/// Three-class quotient of a strongly regular graph:
/// [[0, √k, 0], [√k, λ, √μ·√(k−λ−1)], [0, √μ·√(k−λ−1), k−μ]].
pub fn collapse_analytic_srg(params: &SrgParams) -> Result<CollapsedGraph, GraphError> {
    let report = srg_check(params);
    if !report.feasible {
        return Err(GraphError::Infeasible(report.violations.join("; ")));
    }
    let n = params.n_vertices;
    let k = params.degree;
    let lambda = params.lambda_common as f64;
    let mu = params.mu_common as f64;
    let kf = k as f64;
    let cross = (mu * (kf - lambda - 1.0)).sqrt();
    let reduced = vec![
        0.0, kf.sqrt(), 0.0, //
        kf.sqrt(), lambda, cross, //
        0.0, cross, kf - mu,
    ];
    Ok(CollapsedGraph {
        class_sizes: vec![1, k, n - k - 1],
        reduced_adjacency: reduced,
        degree: k,
    })
}

/// (n+1)-class Hamming-distance quotient of the n-dimensional hypercube, with
/// entries √((n−j)(j+1)) on the off-diagonals.
pub fn collapse_analytic_hypercube(n: usize) -> CollapsedGraph {
    let m = n + 1;
    let mut sizes = vec![0usize; m];
    let mut binom = 1usize;
    for (j, s) in sizes.iter_mut().enumerate() {
        *s = binom;
        if j < n {
            binom = binom * (n - j) / (j + 1);
        }
    }
    let mut reduced = vec![0.0; m * m];
    for j in 0..n {
        let v = ((n - j) as f64 * (j + 1) as f64).sqrt();
        reduced[j * m + (j + 1)] = v;
        reduced[(j + 1) * m + j] = v;
    }
    CollapsedGraph { class_sizes: sizes, reduced_adjacency: reduced, degree: n }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn srg_check_examples() {
        let petersen = srg_check(&SrgParams::new(10, 3, 0, 1));
        assert!(petersen.feasible);
        assert_eq!(petersen.srg_type, SrgType::TypeII);

        let pentagon = srg_check(&SrgParams::new(5, 2, 0, 1));
        assert!(pentagon.feasible);
        assert_eq!(pentagon.srg_type, SrgType::TypeI);

        let bad = srg_check(&SrgParams::new(10, 3, 0, 2));
        assert!(!bad.feasible);
        assert_eq!(bad.srg_type, SrgType::Neither);
        assert!(!bad.violations.is_empty());
    }

    #[test]
    fn family_parameterizations() {
        let l3 = FamilySpec::new(Family::LatinSquare, 3).derived_srg_params().unwrap().unwrap();
        assert_eq!(l3, SrgParams::new(9, 6, 3, 6));
        let t4 = FamilySpec::new(Family::Triangular, 4).derived_srg_params().unwrap().unwrap();
        assert_eq!(t4, SrgParams::new(6, 4, 2, 4));
        let l2 = FamilySpec::new(Family::SquareLattice, 3).derived_srg_params().unwrap().unwrap();
        assert_eq!(l2, SrgParams::new(9, 4, 1, 2));
        let paley101 = FamilySpec::new(Family::Paley, 101).derived_srg_params().unwrap().unwrap();
        assert_eq!(paley101, SrgParams::new(101, 50, 24, 25));
    }

    #[test]
    fn family_validation_errors() {
        assert!(FamilySpec::new(Family::Paley, 15).validate().is_err()); // composite
        assert!(FamilySpec::new(Family::Paley, 7).validate().is_err()); // 3 mod 4
        assert!(FamilySpec::new(Family::Paley, 9).validate().is_ok()); // fixed table
        assert!(FamilySpec::new(Family::LatinSquare, 2).validate().is_err());
        assert!(FamilySpec::new(Family::Triangular, 3).validate().is_err());
        assert!(FamilySpec { family: Family::Complete, size_param: None }.validate().is_err());
    }

    fn check_family_is_srg(spec: &FamilySpec) {
        let g = build_graph(spec).unwrap();
        let params = spec.derived_srg_params().unwrap().unwrap();
        assert!(srg_check(&params).feasible, "{spec:?}");
        assert_eq!(g.regular_degree(), Some(params.degree), "{spec:?}");
        // count λ and μ explicitly on every pair
        for u in 0..g.n_vertices {
            for v in (u + 1)..g.n_vertices {
                let common = g
                    .neighbors_of(u)
                    .iter()
                    .filter(|&&w| g.has_edge(v, w as usize))
                    .count();
                if g.has_edge(u, v) {
                    assert_eq!(common, params.lambda_common, "{spec:?} λ at ({u},{v})");
                } else {
                    assert_eq!(common, params.mu_common, "{spec:?} μ at ({u},{v})");
                }
            }
        }
    }

    #[test]
    fn generated_families_are_strongly_regular() {
        for spec in [
            FamilySpec::new(Family::Paley, 5),
            FamilySpec::new(Family::Paley, 9),
            FamilySpec::new(Family::Paley, 13),
            FamilySpec::new(Family::SquareLattice, 3),
            FamilySpec::new(Family::SquareLattice, 4),
            FamilySpec::new(Family::LatinSquare, 3),
            FamilySpec::new(Family::LatinSquare, 4),
            FamilySpec::new(Family::LatinSquare, 5),
            FamilySpec::new(Family::Triangular, 4),
            FamilySpec::new(Family::Triangular, 5),
            FamilySpec::petersen(),
        ] {
            check_family_is_srg(&spec);
        }
    }

    #[test]
    fn petersen_collapse_matches_worked_example() {
        let g = build_graph(&FamilySpec::petersen()).unwrap();
        let c = collapse(&g, &[0]).unwrap();
        assert_eq!(c.class_sizes, vec![1, 3, 6]);
        let s3 = 3.0f64.sqrt();
        let s2 = 2.0f64.sqrt();
        let expected = [0.0, s3, 0.0, s3, 0.0, s2, 0.0, s2, 2.0];
        for (a, b) in c.reduced_adjacency.iter().zip(expected.iter()) {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
        assert!(c.symmetry_residual() <= 1e-12);
    }

    #[test]
    fn hypercube_collapse_class_sizes() {
        let g = build_graph(&FamilySpec::new(Family::Hypercube, 4)).unwrap();
        let c = collapse(&g, &[0]).unwrap();
        assert_eq!(c.class_sizes, vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn complete_collapse_by_hand() {
        let g = build_graph(&FamilySpec::new(Family::Complete, 6)).unwrap();
        let c = collapse(&g, &[0]).unwrap();
        assert_eq!(c.class_sizes, vec![1, 5]);
        let s5 = 5.0f64.sqrt();
        let expected = [0.0, s5, s5, 4.0];
        for (a, b) in c.reduced_adjacency.iter().zip(expected.iter()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn analytic_collapse_agrees_with_refinement() {
        let cases = [
            FamilySpec::petersen(),
            FamilySpec::new(Family::Paley, 5),
            FamilySpec::new(Family::Paley, 13),
            FamilySpec::new(Family::SquareLattice, 3),
            FamilySpec::new(Family::LatinSquare, 3),
            FamilySpec::new(Family::Triangular, 4),
            FamilySpec::new(Family::Hypercube, 3),
            FamilySpec::new(Family::Hypercube, 6),
        ];
        for spec in &cases {
            let g = build_graph(spec).unwrap();
            let from_graph = collapse(&g, &[0]).unwrap();
            let analytic = collapse_analytic(spec, 1).unwrap();
            let diff = from_graph.max_abs_diff(&analytic).unwrap_or(f64::INFINITY);
            assert!(diff <= 1e-12, "{spec:?} differs by {diff}");
        }
    }

    #[test]
    fn analytic_complete_two_marked_against_brute_force() {
        let g = build_graph(&FamilySpec::new(Family::Complete, 100)).unwrap();
        let from_graph = collapse(&g, &[0, 1]).unwrap();
        let analytic = collapse_analytic_complete(100, 2).unwrap();
        assert_eq!(from_graph.class_sizes, vec![2, 98]);
        assert!((analytic.at(0, 1) - (2.0f64 * 98.0).sqrt()).abs() <= 1e-12);
        assert!(from_graph.max_abs_diff(&analytic).unwrap() <= 1e-12);
    }

    #[test]
    fn analytic_hypercube_small() {
        let c = collapse_analytic_hypercube(2);
        assert_eq!(c.class_sizes, vec![1, 2, 1]);
        let s2 = 2.0f64.sqrt();
        let expected = [0.0, s2, 0.0, s2, 0.0, s2, 0.0, s2, 0.0];
        for (a, b) in c.reduced_adjacency.iter().zip(expected.iter()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn partitions_are_equitable_and_sized() {
        for spec in [
            FamilySpec::petersen(),
            FamilySpec::new(Family::Paley, 13),
            FamilySpec::new(Family::LatinSquare, 4),
            FamilySpec::new(Family::Hypercube, 5),
        ] {
            let g = build_graph(&spec).unwrap();
            let classes = equitable_partition(&g, &[0]).unwrap();
            assert!(is_equitable(&g, &classes), "{spec:?}");
            assert_eq!(classes[0], vec![0]);
            let total: usize = classes.iter().map(|c| c.len()).sum();
            assert_eq!(total, g.n_vertices);
        }
    }

    #[test]
    fn infeasible_params_rejected_by_analytic_collapse() {
        assert!(collapse_analytic_srg(&SrgParams::new(10, 3, 0, 2)).is_err());
    }

    #[test]
    fn full_construction_is_desk_scale_only() {
        assert!(build_graph(&FamilySpec::new(Family::Complete, 6000)).is_err());
        assert!(build_graph(&FamilySpec::new(Family::Hypercube, 13)).is_err());
        // the analytic route has no cap
        assert!(collapse_analytic(&FamilySpec::new(Family::Hypercube, 13), 1).is_ok());
        assert!(collapse_analytic_complete(1_000_000, 2).is_ok());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = build_graph(&FamilySpec::petersen()).unwrap();
        let txt = g.to_edge_list();
        assert_eq!(txt.lines().count(), 15);
        assert!(txt.starts_with("0 1\n"));
    }
}
