//! Graph, bipartite problem and edge-selection types.
//!
//! Node ids are dense and 0-based. A unipartite graph is turned into an
//! assignment problem by giving every node `j` a shadow object `j'`; the
//! shadow object shares the node's id but lives in the object id space, so
//! no offset arithmetic leaks to callers.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

/// Entry of a node's neighbour list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub node: usize,
    pub weight: f64,
}

/// Node-indexed weighted graph with non-negative weights and no self-loops.
///
/// Undirected edges are stored once under the canonical `(min, max)` key;
/// the neighbour index lists them from both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    node_count: usize,
    directed: bool,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Neighbor>>,
}

impl WeightedGraph {
    pub fn new<I>(node_count: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if node_count == 0 {
            return Err(Error::invalid("graph needs at least one node"));
        }
        let mut stored = Vec::new();
        for (src, dst, weight) in edges {
            for node in [src, dst] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, count: node_count });
                }
            }
            if src == dst {
                return Err(Error::SelfLoop(src));
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::InvalidWeight { src, dst, weight });
            }
            let (src, dst) = if directed { (src, dst) } else { (src.min(dst), src.max(dst)) };
            stored.push(Edge { src, dst, weight });
        }
        stored.sort_by_key(|e| (e.src, e.dst));
        if let Some(w) = stored.windows(2).find(|w| (w[0].src, w[0].dst) == (w[1].src, w[1].dst)) {
            return Err(Error::DuplicateEdge(w[0].src, w[0].dst));
        }

        let mut adjacency = vec![Vec::new(); node_count];
        for e in &stored {
            adjacency[e.src].push(Neighbor { node: e.dst, weight: e.weight });
            if !directed {
                adjacency[e.dst].push(Neighbor { node: e.src, weight: e.weight });
            }
        }
        for list in &mut adjacency {
            list.sort_by_key(|n| n.node);
        }
        Ok(Self { node_count, directed, edges: stored, adjacency })
    }

    pub fn empty(node_count: usize, directed: bool) -> Result<Self> {
        Self::new(node_count, directed, std::iter::empty())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Stored edges; undirected edges appear once with `src < dst`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of adjacency-matrix nonzeros: undirected edges count twice.
    pub fn directed_edge_count(&self) -> usize {
        if self.directed {
            self.edges.len()
        } else {
            2 * self.edges.len()
        }
    }

    /// Out-neighbours of `node` (all neighbours when undirected), sorted by id.
    pub fn neighbors(&self, node: usize) -> &[Neighbor] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn weight(&self, src: usize, dst: usize) -> Option<f64> {
        let list = self.adjacency.get(src)?;
        list.binary_search_by_key(&dst, |n| n.node).ok().map(|k| list[k].weight)
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, f64::max)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Undirected view. Opposite directed edges merge into one edge carrying
    /// the larger of the two weights.
    pub fn to_undirected(&self) -> WeightedGraph {
        if !self.directed {
            return self.clone();
        }
        let mut merged: Vec<(usize, usize, f64)> =
            self.edges.iter().map(|e| (e.src.min(e.dst), e.src.max(e.dst), e.weight)).collect();
        merged.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(b.2.total_cmp(&a.2)));
        merged.dedup_by_key(|e| (e.0, e.1));
        WeightedGraph::new(self.node_count, false, merged).expect("merged edges stay valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteEdge {
    pub buyer: usize,
    pub object: usize,
    pub weight: f64,
}

/// Assignment problem: buyers bid for adjacent objects.
///
/// Edges are kept in compressed-row form sorted by `(buyer, object)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteProblem {
    buyer_count: usize,
    object_count: usize,
    row_offsets: Vec<usize>,
    objects: Vec<usize>,
    weights: Vec<f64>,
    shadow_origin: Option<Vec<(usize, usize)>>,
}

impl BipartiteProblem {
    pub fn new<I>(buyer_count: usize, object_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::build(buyer_count, object_count, edges.into_iter().collect(), false)
    }

    /// Complete problem from a dense row-major weight table.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let objects = rows.iter().map(Vec::len).max().unwrap_or(0);
        let edges = rows.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &w)| (i, j, w)));
        Self::new(rows.len(), objects, edges)
    }

    fn build(
        buyer_count: usize,
        object_count: usize,
        mut edges: Vec<(usize, usize, f64)>,
        shadow: bool,
    ) -> Result<Self> {
        if buyer_count == 0 || object_count == 0 {
            return Err(Error::invalid("bipartite problem needs at least one buyer and one object"));
        }
        for &(b, o, w) in &edges {
            if b >= buyer_count {
                return Err(Error::NodeOutOfRange { node: b, count: buyer_count });
            }
            if o >= object_count {
                return Err(Error::NodeOutOfRange { node: o, count: object_count });
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { src: b, dst: o, weight: w });
            }
        }
        edges.sort_by_key(|e| (e.0, e.1));
        if let Some(w) = edges.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut row_offsets = vec![0; buyer_count + 1];
        for &(b, _, _) in &edges {
            row_offsets[b + 1] += 1;
        }
        for i in 0..buyer_count {
            row_offsets[i + 1] += row_offsets[i];
        }
        let shadow_origin = shadow.then(|| edges.iter().map(|e| (e.0, e.1)).collect());
        Ok(Self {
            buyer_count,
            object_count,
            row_offsets,
            objects: edges.iter().map(|e| e.1).collect(),
            weights: edges.iter().map(|e| e.2).collect(),
            shadow_origin,
        })
    }

    pub fn buyer_count(&self) -> usize {
        self.buyer_count
    }

    pub fn object_count(&self) -> usize {
        self.object_count
    }

    pub fn edge_count(&self) -> usize {
        self.objects.len()
    }

    /// Nonzeros of the symmetric adjacency matrix of the bipartite graph
    /// (each edge counted from both sides).
    pub fn directed_edge_count(&self) -> usize {
        2 * self.edge_count()
    }

    pub fn is_shadow(&self) -> bool {
        self.shadow_origin.is_some()
    }

    /// Source edge `(i, j)` of bipartite edge number `edge` when this problem
    /// was built from a unipartite graph.
    pub fn shadow_origin(&self, edge: usize) -> Option<(usize, usize)> {
        self.shadow_origin.as_ref().map(|o| o[edge])
    }

    /// Adjacent objects of `buyer` and their weights, sorted by object id.
    pub fn row(&self, buyer: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[buyer]..self.row_offsets[buyer + 1];
        (&self.objects[range.clone()], &self.weights[range])
    }

    pub fn degree(&self, buyer: usize) -> usize {
        self.row_offsets[buyer + 1] - self.row_offsets[buyer]
    }

    pub fn weight(&self, buyer: usize, object: usize) -> Option<f64> {
        if buyer >= self.buyer_count {
            return None;
        }
        let (objects, weights) = self.row(buyer);
        objects.binary_search(&object).ok().map(|k| weights[k])
    }

    pub fn edges(&self) -> impl Iterator<Item = BipartiteEdge> + '_ {
        (0..self.buyer_count).flat_map(move |buyer| {
            let (objects, weights) = self.row(buyer);
            objects.iter().zip(weights).map(move |(&object, &weight)| BipartiteEdge { buyer, object, weight })
        })
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Same problem with the listed `(buyer, object)` pairs removed.
    pub fn without_pairs(&self, removed: &HashSet<(usize, usize)>) -> BipartiteProblem {
        let kept = self
            .edges()
            .filter(|e| !removed.contains(&(e.buyer, e.object)))
            .map(|e| (e.buyer, e.object, e.weight))
            .collect();
        Self::build(self.buyer_count, self.object_count, kept, self.is_shadow())
            .expect("subset of a valid problem is valid")
    }

    /// Sum of weights over the given pairs. Panics on a pair with no edge.
    pub fn pair_weight(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> f64 {
        pairs.into_iter().map(|(b, o)| self.weight(b, o).expect("pair has an edge")).sum()
    }
}

/// Bipartite problem with buyer `i` adjacent to shadow object `j'` for every
/// edge `(i, j)` of `graph`. Undirected edges yield both `(i, j')` and `(j, i')`.
pub fn to_bipartite_shadow(graph: &WeightedGraph) -> Result<BipartiteProblem> {
    let n = graph.node_count();
    let mut edges = Vec::with_capacity(graph.directed_edge_count());
    for e in graph.edges() {
        if e.src == e.dst {
            return Err(Error::SelfLoop(e.src));
        }
        edges.push((e.src, e.dst, e.weight));
        if !graph.is_directed() {
            edges.push((e.dst, e.src, e.weight));
        }
    }
    BipartiteProblem::build(n, n, edges, true)
}

/// Set of selected `(buyer, object)` pairs with per-side degree bookkeeping.
///
/// Either side may be uncapped; a kNN selection caps only the picking side,
/// and a max-symmetrized selection caps neither.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSelection {
    pairs: BTreeSet<(usize, usize)>,
    buyer_degree: Vec<usize>,
    object_degree: Vec<usize>,
    buyer_cap: Option<usize>,
    object_cap: Option<usize>,
}

impl EdgeSelection {
    pub fn new(buyer_count: usize, object_count: usize, buyer_cap: Option<usize>, object_cap: Option<usize>) -> Self {
        Self {
            pairs: BTreeSet::new(),
            buyer_degree: vec![0; buyer_count],
            object_degree: vec![0; object_count],
            buyer_cap,
            object_cap,
        }
    }

    /// Selection capped at `cap` on both sides.
    pub fn with_cap(buyer_count: usize, object_count: usize, cap: usize) -> Self {
        Self::new(buyer_count, object_count, Some(cap), Some(cap))
    }

    /// Returns `Ok(false)` when the pair was already present.
    pub fn insert(&mut self, buyer: usize, object: usize) -> Result<bool> {
        if buyer >= self.buyer_degree.len() {
            return Err(Error::NodeOutOfRange { node: buyer, count: self.buyer_degree.len() });
        }
        if object >= self.object_degree.len() {
            return Err(Error::NodeOutOfRange { node: object, count: self.object_degree.len() });
        }
        if self.pairs.contains(&(buyer, object)) {
            return Ok(false);
        }
        let full = |deg: usize, cap: Option<usize>| cap.is_some_and(|c| deg >= c);
        if full(self.buyer_degree[buyer], self.buyer_cap) || full(self.object_degree[object], self.object_cap) {
            return Err(Error::CapExceeded(buyer, object));
        }
        self.pairs.insert((buyer, object));
        self.buyer_degree[buyer] += 1;
        self.object_degree[object] += 1;
        Ok(true)
    }

    pub fn remove(&mut self, buyer: usize, object: usize) -> bool {
        let removed = self.pairs.remove(&(buyer, object));
        if removed {
            self.buyer_degree[buyer] -= 1;
            self.object_degree[object] -= 1;
        }
        removed
    }

    pub fn contains(&self, buyer: usize, object: usize) -> bool {
        self.pairs.contains(&(buyer, object))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in ascending `(buyer, object)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    /// Objects selected by `buyer`, ascending.
    pub fn objects_of(&self, buyer: usize) -> impl Iterator<Item = usize> + '_ {
        self.pairs.range((buyer, 0)..(buyer + 1, 0)).map(|p| p.1)
    }

    pub fn buyer_degree(&self, buyer: usize) -> usize {
        self.buyer_degree[buyer]
    }

    pub fn object_degree(&self, object: usize) -> usize {
        self.object_degree[object]
    }

    pub fn buyer_degrees(&self) -> &[usize] {
        &self.buyer_degree
    }

    pub fn object_degrees(&self) -> &[usize] {
        &self.object_degree
    }

    pub fn buyer_count(&self) -> usize {
        self.buyer_degree.len()
    }

    pub fn object_count(&self) -> usize {
        self.object_degree.len()
    }

    pub fn buyer_cap(&self) -> Option<usize> {
        self.buyer_cap
    }

    pub fn object_cap(&self) -> Option<usize> {
        self.object_cap
    }

    /// True when both directions of every pair are selected. Only meaningful
    /// for selections over a shadow problem.
    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(i, j)| self.pairs.contains(&(j, i)))
    }

    /// Recomputes degrees from the pair set and checks them against the
    /// counters and caps.
    pub fn audit(&self) -> bool {
        let mut buyers = vec![0; self.buyer_degree.len()];
        let mut objects = vec![0; self.object_degree.len()];
        for &(b, o) in &self.pairs {
            buyers[b] += 1;
            objects[o] += 1;
        }
        let within = |deg: &[usize], cap: Option<usize>| cap.is_none_or(|c| deg.iter().all(|&d| d <= c));
        buyers == self.buyer_degree
            && objects == self.object_degree
            && within(&buyers, self.buyer_cap)
            && within(&objects, self.object_cap)
    }

    /// Undirected projection: each pair `(i, j)` becomes `{min, max}`.
    pub fn undirected_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.pairs.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect()
    }

    /// Fails with [`Error::MissingEdge`] for the first pair with no edge in `problem`.
    pub fn check_against(&self, problem: &BipartiteProblem) -> Result<()> {
        match self.pairs.iter().find(|&&(b, o)| problem.weight(b, o).is_none()) {
            Some(&(b, o)) => Err(Error::MissingEdge(b, o)),
            None => Ok(()),
        }
    }
}

/// Keeps exactly the selected edges of `graph`, with their weights.
///
/// For an undirected graph a pair `(i, j)` selects the undirected edge
/// `{i, j}`; selecting both directions keeps it once.
pub fn apply_selection(graph: &WeightedGraph, selection: &EdgeSelection) -> Result<WeightedGraph> {
    let pairs: Vec<(usize, usize)> = if graph.is_directed() {
        selection.iter().collect()
    } else {
        selection.undirected_pairs().into_iter().collect()
    };
    let mut edges = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        let weight = graph.weight(i, j).ok_or(Error::MissingEdge(i, j))?;
        edges.push((i, j, weight));
    }
    WeightedGraph::new(graph.node_count(), graph.is_directed(), edges)
}
