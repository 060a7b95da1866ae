//! Undirected graph plus the separator, flow and torso primitives the
//! solvers are built on.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::bitgraph::{BitFlow, BitGraph};
use crate::{Error, Result};

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

pub(crate) fn vset<I: IntoIterator<Item = Vertex>>(it: I) -> VertexSet {
    it.into_iter().collect()
}

pub(crate) fn set_union(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.union(b).copied().collect()
}

pub(crate) fn set_inter(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.intersection(b).copied().collect()
}

pub(crate) fn set_diff(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.difference(b).copied().collect()
}

/// Simple undirected graph over small integer vertex ids. Induced subgraphs
/// keep the original ids, so results of separator computations on a subgraph
/// are directly meaningful in the parent graph.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Vertex, VertexSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n(), self.edge_count(), self.edges())
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph { adj: BTreeMap::new() }
    }

    pub fn with_vertices<I: IntoIterator<Item = Vertex>>(vs: I) -> Self {
        let mut g = Graph::new();
        for v in vs {
            g.add_vertex(v);
        }
        g
    }

    pub fn from_edges<I: IntoIterator<Item = Vertex>>(vs: I, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::with_vertices(vs);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        assert_ne!(u, v, "self-loops are not allowed");
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        if let Some(s) = self.adj.get_mut(&u) {
            s.remove(&v);
        }
        if let Some(s) = self.adj.get_mut(&v) {
            s.remove(&u);
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).map_or(false, |s| s.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.adj[&v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[&v].len()
    }

    /// Edges with u < v, ascending.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (&u, nb) in &self.adj {
            for &v in nb.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let mut g = Graph::new();
        for &v in keep {
            if self.has_vertex(v) {
                g.add_vertex(v);
            }
        }
        for (&u, nb) in &self.adj {
            if !keep.contains(&u) {
                continue;
            }
            for &v in nb {
                if v > u && keep.contains(&v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn without(&self, drop: &VertexSet) -> Graph {
        let keep = set_diff(&self.vertex_set(), drop);
        self.induced(&keep)
    }

    /// N(S): neighbors of s outside s.
    pub fn neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for &v in s {
            if let Some(nb) = self.adj.get(&v) {
                for &u in nb {
                    if !s.contains(&u) {
                        out.insert(u);
                    }
                }
            }
        }
        out
    }

    pub fn closed_neighborhood(&self, s: &VertexSet) -> VertexSet {
        set_union(&self.neighborhood(s), s)
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        for &u in s {
            for &v in s {
                if u < v && !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_complete(&self) -> bool {
        self.is_clique(&self.vertex_set())
    }

    /// Connected components, ordered by smallest contained vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let comp = self.reach(&vset([v]), &VertexSet::new());
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// R_G(X,S): vertices of G \ S reachable from X \ S.
    pub fn reach(&self, x: &VertexSet, s: &VertexSet) -> VertexSet {
        let mut seen = VertexSet::new();
        let mut queue: VecDeque<Vertex> = VecDeque::new();
        for &v in x {
            if self.has_vertex(v) && !s.contains(&v) && seen.insert(v) {
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in self.neighbors(v) {
                if !s.contains(&u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// R^N_G(X,S) = (X ∩ S) ∪ N(R_G(X,S)), a subset of S.
    pub fn reach_boundary(&self, x: &VertexSet, s: &VertexSet) -> VertexSet {
        let r = self.reach(x, s);
        let mut out: VertexSet = x.intersection(s).copied().collect();
        out.extend(self.neighborhood(&r));
        debug_assert!(out.is_subset(s));
        out
    }

    pub(crate) fn bits(&self) -> Option<BitGraph> {
        BitGraph::new(self)
    }

    /// Maximum number of fully vertex-disjoint x-y paths (one-vertex paths in
    /// x ∩ y count), together with the paths and a minimum separator of the
    /// same size. The separator returned is the minimum cut pushed maximally
    /// towards y.
    pub fn flow(&self, x: &VertexSet, y: &VertexSet) -> FlowResult {
        if let Some(bg) = self.bits() {
            let mut bf = BitFlow::new(&bg, bg.mask(x), bg.mask(y), bg.full);
            let value = bf.run();
            let min_separator = bg.unmask(bf.cut_near_sink());
            let paths = bf.paths();
            debug_assert_eq!(value, min_separator.len());
            debug_assert_eq!(value, paths.len());
            return FlowResult { value, paths, min_separator };
        }
        let mut net = Net::build(self, x, y);
        let value = net.maxflow();
        let min_separator = net.cut_near_sink();
        let paths = net.extract_paths();
        FlowResult { value, paths, min_separator }
    }

    pub fn flow_value(&self, x: &VertexSet, y: &VertexSet) -> usize {
        if let Some(bg) = self.bits() {
            return BitFlow::new(&bg, bg.mask(x), bg.mask(y), bg.full).run();
        }
        Net::build(self, x, y).maxflow()
    }

    /// Minimum-order separation (A,S,B) with x ⊆ A ∪ S and y ⊆ B ∪ S.
    /// Among minimum cuts, S is the one closest to y.
    pub fn min_separation(&self, x: &VertexSet, y: &VertexSet) -> Separation {
        let s = if let Some(bg) = self.bits() {
            let mut bf = BitFlow::new(&bg, bg.mask(x), bg.mask(y), bg.full);
            bf.run();
            bg.unmask(bf.cut_near_sink())
        } else {
            let mut net = Net::build(self, x, y);
            net.maxflow();
            net.cut_near_sink()
        };
        let a = self.reach(x, &s);
        let b = set_diff(&set_diff(&self.vertex_set(), &a), &s);
        debug_assert!(x.is_subset(&set_union(&a, &s)));
        debug_assert!(y.is_subset(&set_union(&b, &s)));
        Separation { a, s, b }
    }

    pub fn is_linked(&self, x: &VertexSet, y: &VertexSet) -> bool {
        self.flow_value(x, y) == x.len()
    }

    /// x is strictly linked into y when it is linked and every minimum
    /// (x,y)-separator of size |x| equals x or y.
    pub fn is_strictly_linked(&self, x: &VertexSet, y: &VertexSet) -> bool {
        self.find_breaking_min_cut(x, y).is_none() && self.is_linked(x, y)
    }

    /// A minimum-size (x,y)-separator different from both x and y, if one
    /// exists. When flow(x,y) < |x| any minimum cut qualifies.
    pub fn find_breaking_min_cut(&self, x: &VertexSet, y: &VertexSet) -> Option<VertexSet> {
        if let Some(bg) = self.bits() {
            return breaking_min_cut(&bg, bg.mask(x), bg.mask(y)).map(|m| bg.unmask(m));
        }
        // slow fallback for graphs beyond the bitmask range
        let f = self.flow_value(x, y);
        if f < x.len() {
            let s = self.min_separation(x, y).s;
            if s == *y {
                let mut net = Net::build(self, x, y);
                net.maxflow();
                return Some(net.cut_near_source());
            }
            return Some(s);
        }
        // a min cut other than x misses some a in x \ y; cuts avoiding a are
        // exactly the (x \ a ∪ N(a), y)-separators of G - a
        for &a in x.difference(y) {
            let sub = self.without(&vset([a]));
            let x2: VertexSet = x
                .iter()
                .copied()
                .filter(|&v| v != a)
                .chain(self.neighbors(a).iter().copied())
                .collect();
            let mut net = Net::build(&sub, &x2, y);
            if net.maxflow() > f {
                continue;
            }
            let near = net.cut_near_source();
            if near != *y {
                return Some(near);
            }
            let far = net.cut_near_sink();
            if far != *y {
                return Some(far);
            }
        }
        None
    }

    /// torso_G(X): graph on x where uv is an edge iff some u-v path has all
    /// internal vertices outside x.
    pub fn torso(&self, x: &VertexSet) -> Graph {
        let mut t = self.induced(x);
        for comp in self.without(x).components() {
            let nb = self.neighborhood(&comp);
            debug_assert!(nb.is_subset(x));
            let nb: Vec<Vertex> = nb.into_iter().collect();
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    t.add_edge(nb[i], nb[j]);
                }
            }
        }
        t
    }

    /// G ⊗ S: make s a clique.
    pub fn clique_union(&self, s: &VertexSet) -> Graph {
        let mut g = self.clone();
        let vs: Vec<Vertex> = s.iter().copied().collect();
        for i in 0..vs.len() {
            g.add_vertex(vs[i]);
            for j in i + 1..vs.len() {
                g.add_edge(vs[i], vs[j]);
            }
        }
        g
    }

    /// flp_G(X,Y): minimum order of a separation (A,S,B) with X ⊆ A ∪ S,
    /// Y ⊆ B ∪ S and B nonempty; |X| when X = V(G).
    pub fn flow_potential(&self, x: &VertexSet, y: &VertexSet) -> usize {
        let vs = self.vertex_set();
        if *x == vs {
            return x.len();
        }
        let f = self.flow_value(x, y);
        // flow < flp only when |x| > |y|, y is strictly linked into x, and x
        // meets every component of G \ y.
        let exceptional = x.len() > y.len()
            && self.is_strictly_linked(y, x)
            && self.without(y).components().iter().all(|c| !set_inter(c, x).is_empty());
        if !exceptional {
            return f;
        }
        // force some vertex b outside x onto the far side: separators keeping
        // b in B are the (x, y \ b ∪ N(b))-separators of G - b
        let mut best = usize::MAX;
        if let Some(bg) = self.bits() {
            let (xm, ym) = (bg.mask(x), bg.mask(y));
            let mut cand = bg.full & !xm;
            while cand != 0 {
                let b = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let alive = bg.full & !(1 << b);
                let target = (ym | bg.adj[b]) & alive;
                best = best.min(BitFlow::new(&bg, xm, target, alive).run());
            }
        } else {
            for &b in vs.difference(x) {
                let sub = self.without(&vset([b]));
                let target: VertexSet = y
                    .iter()
                    .copied()
                    .filter(|&v| v != b)
                    .chain(self.neighbors(b).iter().copied())
                    .collect();
                best = best.min(sub.flow_value(x, &target));
            }
        }
        debug_assert!(f <= best && best <= x.len());
        best
    }

    /// Maximum over subgraphs of the minimum degree; a lower bound on the
    /// treewidth.
    pub fn degeneracy(&self) -> usize {
        let mut deg: BTreeMap<Vertex, usize> =
            self.adj.iter().map(|(&v, nb)| (v, nb.len())).collect();
        let mut alive: VertexSet = self.vertex_set();
        let mut best = 0;
        while !alive.is_empty() {
            let &v = alive.iter().min_by_key(|&&v| (deg[&v], v)).unwrap();
            best = best.max(deg[&v]);
            alive.remove(&v);
            for &u in self.neighbors(v) {
                if alive.contains(&u) {
                    *deg.get_mut(&u).unwrap() -= 1;
                }
            }
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: usize,
    pub paths: Vec<Vec<Vertex>>,
    pub min_separator: VertexSet,
}

/// Tripartition (A,S,B) of V(G) with no edge between A and B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub a: VertexSet,
    pub s: VertexSet,
    pub b: VertexSet,
}

impl Separation {
    pub fn new(g: &Graph, a: VertexSet, s: VertexSet, b: VertexSet) -> Result<Self> {
        let sep = Separation { a, s, b };
        sep.check(g)?;
        Ok(sep)
    }

    pub fn check(&self, g: &Graph) -> Result<()> {
        let mut all = self.a.clone();
        for &v in self.s.iter().chain(self.b.iter()) {
            if !all.insert(v) {
                return Err(Error::InvalidSeparation(format!("vertex {v} in two parts")));
            }
        }
        if all != g.vertex_set() {
            return Err(Error::InvalidSeparation("parts do not cover V(G)".into()));
        }
        for &u in &self.a {
            for &v in g.neighbors(u) {
                if self.b.contains(&v) {
                    return Err(Error::InvalidSeparation(format!("edge {u}-{v} joins A and B")));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.s.len()
    }

    pub fn is_strict(&self) -> bool {
        !self.a.is_empty() && !self.b.is_empty()
    }

    pub fn flipped(&self) -> Separation {
        Separation { a: self.b.clone(), s: self.s.clone(), b: self.a.clone() }
    }
}

/// A minimum (x,y)-cut different from both x and y, on the bitmask view.
pub(crate) fn breaking_min_cut(bg: &BitGraph, x: u64, y: u64) -> Option<u64> {
    let mut bf = BitFlow::new(bg, x, y, bg.full);
    let f = bf.run();
    if f < x.count_ones() as usize {
        let s = bf.cut_near_sink();
        if s == y {
            return Some(bf.cut_near_source());
        }
        return Some(s);
    }
    let near = bf.cut_near_source();
    if near != x && near != y {
        return Some(near);
    }
    let far = bf.cut_near_sink();
    if far != x && far != y {
        return Some(far);
    }
    if near == far {
        return None; // the minimum cut is unique and equals x or y
    }
    // a min cut other than x misses some a in x \ y; cuts avoiding a are
    // the (x \ a ∪ N(a), y)-separators of the graph without a
    let mut cand = x & !y;
    while cand != 0 {
        let a = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let alive = bg.full & !(1 << a);
        let x2 = (x & !(1 << a)) | (bg.adj[a] & alive);
        let mut bf2 = BitFlow::new(bg, x2, y, alive);
        if bf2.run() > f {
            continue;
        }
        let near = bf2.cut_near_source();
        if near != y {
            return Some(near);
        }
        let far = bf2.cut_near_sink();
        if far != y {
            return Some(far);
        }
    }
    None
}

const INF: i64 = i64::MAX / 4;

/// Unit-vertex-capacity flow network obtained by splitting each vertex.
/// Node 2i is the in-copy of verts[i], node 2i+1 the out-copy; the source and
/// sink are the last two nodes. Fallback for graphs past the bitmask range.
struct Net {
    verts: Vec<Vertex>,
    to: Vec<usize>,
    cap: Vec<i64>,
    adj: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
    flow: usize,
}

impl Net {
    fn build(g: &Graph, x: &VertexSet, y: &VertexSet) -> Net {
        let verts: Vec<Vertex> = g.vertices().collect();
        let idx: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let nn = 2 * verts.len() + 2;
        let mut net = Net {
            verts,
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nn],
            source: nn - 2,
            sink: nn - 1,
            flow: 0,
        };
        for (i, &v) in net.verts.clone().iter().enumerate() {
            net.arc(2 * i, 2 * i + 1, 1);
            for &u in g.neighbors(v) {
                let j = idx[&u];
                net.arc(2 * i + 1, 2 * j, INF);
            }
            if x.contains(&v) {
                net.arc(net.source, 2 * i, INF);
            }
            if y.contains(&v) {
                net.arc(2 * i + 1, net.sink, INF);
            }
        }
        net
    }

    fn arc(&mut self, u: usize, v: usize, c: i64) {
        let a = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.adj[u].push(a);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(a + 1);
    }

    fn augment(&mut self, u: usize, pushed: i64, seen: &mut [bool]) -> i64 {
        if u == self.sink {
            return pushed;
        }
        seen[u] = true;
        for ai in 0..self.adj[u].len() {
            let a = self.adj[u][ai];
            let v = self.to[a];
            if self.cap[a] > 0 && !seen[v] {
                let got = self.augment(v, pushed.min(self.cap[a]), seen);
                if got > 0 {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
        }
        0
    }

    fn maxflow(&mut self) -> usize {
        loop {
            let mut seen = vec![false; self.adj.len()];
            let got = self.augment(self.source, INF, &mut seen);
            if got == 0 {
                break;
            }
            self.flow += got as usize;
        }
        self.flow
    }

    fn residual_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source] = true;
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn residual_to_sink(&self) -> Vec<bool> {
        // u reaches the sink iff some residual arc u -> v with v reaching it;
        // traverse incoming residual arcs backwards from the sink.
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::from([self.sink]);
        seen[self.sink] = true;
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                // arc a is v -> u; its reverse a^1 is u -> v
                let u = self.to[a];
                if self.cap[a ^ 1] > 0 && !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    fn cut_near_source(&self) -> VertexSet {
        let r = self.residual_from_source();
        self.verts
            .iter()
            .enumerate()
            .filter(|&(i, _)| r[2 * i] && !r[2 * i + 1])
            .map(|(_, &v)| v)
            .collect()
    }

    fn cut_near_sink(&self) -> VertexSet {
        let z = self.residual_to_sink();
        self.verts
            .iter()
            .enumerate()
            .filter(|&(i, _)| z[2 * i + 1] && !z[2 * i])
            .map(|(_, &v)| v)
            .collect()
    }

    /// Decompose the flow into vertex-disjoint paths. Only valid on networks
    /// without loose vertices.
    fn extract_paths(&self) -> Vec<Vec<Vertex>> {
        // net flow on forward arc a (even index) is cap[a^1]
        let mut used: Vec<i64> = (0..self.to.len())
            .map(|a| if a % 2 == 0 { self.cap[a ^ 1] } else { 0 })
            .collect();
        let mut paths = Vec::new();
        let starts: Vec<usize> = self.adj[self.source].clone();
        for a0 in starts {
            while a0 % 2 == 0 && used[a0] > 0 {
                used[a0] -= 1;
                let mut path = Vec::new();
                let mut node = self.to[a0];
                loop {
                    if node == self.sink {
                        break;
                    }
                    if node % 2 == 0 {
                        path.push(self.verts[node / 2]);
                    }
                    let mut next = None;
                    for &a in &self.adj[node] {
                        if a % 2 == 0 && used[a] > 0 {
                            used[a] -= 1;
                            next = Some(self.to[a]);
                            break;
                        }
                    }
                    node = next.expect("flow conservation");
                }
                paths.push(path);
            }
        }
        paths
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{cycle, grid, path_graph};

    fn k4() -> Graph {
        Graph::from_edges(1..=4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    }

    #[test]
    fn reach_basics() {
        let p4 = path_graph(4);
        assert_eq!(p4.reach(&vset([1]), &vset([3])), vset([1, 2]));
        assert_eq!(p4.reach(&vset([1]), &vset([1])), vset([]));
        assert_eq!(k4().reach(&vset([1]), &vset([])), vset([1, 2, 3, 4]));
    }

    #[test]
    fn reach_boundary_basics() {
        let p4 = path_graph(4);
        assert_eq!(p4.reach_boundary(&vset([1]), &vset([3, 4])), vset([3]));
        assert_eq!(p4.reach_boundary(&vset([3]), &vset([3, 4])), vset([3]));
        let c4 = cycle(4);
        assert_eq!(c4.reach_boundary(&vset([1]), &vset([2, 4])), vset([2, 4]));
    }

    #[test]
    fn reach_boundary_idempotent_on_reach() {
        // R(x, R^N(x,s)) = R(x,s) on a few fixed graphs
        for g in [path_graph(5), cycle(5), grid(3, 3)] {
            let vs: Vec<Vertex> = g.vertices().collect();
            for &a in &vs {
                for &b in &vs {
                    let x = vset([a]);
                    let s = vset([b, *vs.last().unwrap()]);
                    let rb = g.reach_boundary(&x, &s);
                    assert_eq!(g.reach(&x, &rb), g.reach(&x, &s));
                }
            }
        }
    }

    #[test]
    fn flow_basics() {
        let p4 = path_graph(4);
        let r = p4.flow(&vset([1]), &vset([4]));
        assert_eq!(r.value, 1);
        assert_eq!(r.min_separator.len(), 1);

        let r = k4().flow(&vset([1, 2]), &vset([3, 4]));
        assert_eq!(r.value, 2);

        let r = p4.flow(&vset([1]), &vset([1]));
        assert_eq!(r.value, 1);
        assert_eq!(r.paths, vec![vec![1]]);
    }

    #[test]
    fn flow_shared_endpoint() {
        // paths from {1,3} to {2} in a path 1-2-3-4 share vertex 2
        let p4 = path_graph(4);
        assert_eq!(p4.flow_value(&vset([1, 3]), &vset([2])), 1);
    }

    #[test]
    fn min_separation_basics() {
        let p4 = path_graph(4);
        let sep = p4.min_separation(&vset([1]), &vset([4]));
        assert_eq!(sep.order(), 1);
        sep.check(&p4).unwrap();

        // x linked into y with x ⊆ y: S = x
        let sep = p4.min_separation(&vset([2]), &vset([2, 3]));
        assert_eq!(sep.s, vset([2]));

        let g = grid(3, 3);
        let sep = g.min_separation(&vset([1, 4, 7]), &vset([3, 6, 9]));
        assert_eq!(sep.order(), 3);
        sep.check(&g).unwrap();
    }

    #[test]
    fn linkedness() {
        let p4 = path_graph(4);
        assert!(p4.is_linked(&vset([2]), &vset([4])));
        assert!(!p4.is_linked(&vset([1, 3]), &vset([4])));
        assert!(p4.is_strictly_linked(&vset([2]), &vset([2])));
        // {1} into {4} in P4 is linked but not strictly: {2} is a min cut
        assert!(p4.is_linked(&vset([1]), &vset([4])));
        assert!(!p4.is_strictly_linked(&vset([1]), &vset([4])));
        // adjacent singletons in K2 are strictly linked
        let k2 = Graph::from_edges(1..=2, &[(1, 2)]);
        assert!(k2.is_strictly_linked(&vset([1]), &vset([2])));
    }

    #[test]
    fn torso_basics() {
        let p4 = path_graph(4);
        let t = p4.torso(&vset([1, 4]));
        assert_eq!(t.edges(), vec![(1, 4)]);
        assert_eq!(p4.torso(&p4.vertex_set()), p4);
        let c4 = cycle(4);
        assert_eq!(c4.torso(&vset([1, 3])).edges(), vec![(1, 3)]);
    }

    #[test]
    fn torso_nesting() {
        // E(torso_{G[Y]}(X ∩ Y)) ⊆ E(torso_G(X)) on seeded random graphs
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(2..=8);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.4) {
                        g.add_edge(u, v);
                    }
                }
            }
            let x: VertexSet = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
            let y: VertexSet = (1..=n).filter(|_| rng.gen_bool(0.6)).collect();
            let inner = g.induced(&y).torso(&set_inter(&x, &y));
            let outer = g.torso(&x);
            for (u, v) in inner.edges() {
                assert!(outer.has_edge(u, v), "torso nesting violated at {u}-{v}");
            }
        }
    }

    #[test]
    fn clique_union_basics() {
        let p4 = path_graph(4);
        let c = p4.clique_union(&vset([1, 4]));
        assert!(c.has_edge(1, 4));
        assert_eq!(c.edge_count(), 4);
        assert_eq!(p4.clique_union(&vset([])), p4);
        assert_eq!(p4.clique_union(&vset([2])), p4);
    }

    #[test]
    fn flow_potential_basics() {
        let p4 = path_graph(4);
        assert_eq!(p4.flow_potential(&vset([1]), &vset([4])), 1);
        let k3 = Graph::from_edges(1..=3, &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(k3.flow_potential(&k3.vertex_set(), &vset([1])), 3);
        // ({3,4},{2},{1}) is a valid separation of order 1 with B nonempty
        assert_eq!(p4.flow_potential(&vset([2, 3]), &vset([2])), 1);
    }

    #[test]
    fn flow_potential_vs_bruteforce() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..80 {
            let n = rng.gen_range(2..=7);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.45) {
                        g.add_edge(u, v);
                    }
                }
            }
            let x: VertexSet = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
            let y: VertexSet = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
            let got = g.flow_potential(&x, &y);
            let flow = g.flow_value(&x, &y);
            let brute = brute_flp(&g, &x, &y);
            assert_eq!(got, brute, "flp mismatch g={g:?} x={x:?} y={y:?}");
            assert!(flow <= got && got <= x.len());
            if x.len() <= y.len() {
                assert_eq!(got, flow);
            }
        }
    }

    /// Exhaustive enumeration of all separations with nonempty B.
    fn brute_flp(g: &Graph, x: &VertexSet, y: &VertexSet) -> usize {
        let vs: Vec<Vertex> = g.vertices().collect();
        let n = vs.len();
        if *x == g.vertex_set() {
            return x.len();
        }
        let mut best = usize::MAX;
        // assign each vertex to A(0), S(1), B(2)
        let mut assign = vec![0u8; n];
        loop {
            let mut a = VertexSet::new();
            let mut s = VertexSet::new();
            let mut b = VertexSet::new();
            for (i, &v) in vs.iter().enumerate() {
                match assign[i] {
                    0 => a.insert(v),
                    1 => s.insert(v),
                    _ => b.insert(v),
                };
            }
            let ok = !b.is_empty()
                && x.is_subset(&set_union(&a, &s))
                && y.is_subset(&set_union(&b, &s))
                && a.iter().all(|&u| g.neighbors(u).iter().all(|v| !b.contains(v)));
            if ok {
                best = best.min(s.len());
            }
            // next assignment
            let mut i = 0;
            while i < n {
                assign[i] += 1;
                if assign[i] < 3 {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        best
    }

    #[test]
    fn menger_consistency_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(2..=8);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.4) {
                        g.add_edge(u, v);
                    }
                }
            }
            let x: VertexSet = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
            let y: VertexSet = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
            let r = g.flow(&x, &y);
            // brute-force minimum separator size
            let vs: Vec<Vertex> = g.vertices().collect();
            let mut best = usize::MAX;
            for mask in 0u32..(1 << n) {
                let s: VertexSet =
                    vs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                let sep_ok = set_inter(&g.reach(&x, &s), &set_diff(&y, &s)).is_empty();
                if sep_ok {
                    best = best.min(s.len());
                }
            }
            assert_eq!(r.value, best);
            assert_eq!(r.min_separator.len(), best);
            // paths are disjoint and connect x to y
            let mut seen = VertexSet::new();
            for p in &r.paths {
                assert!(x.contains(p.first().unwrap()));
                assert!(y.contains(p.last().unwrap()));
                for v in p {
                    assert!(seen.insert(*v), "paths share {v}");
                }
            }
        }
    }

    #[test]
    fn degeneracy_bounds() {
        assert_eq!(k4().degeneracy(), 3);
        assert_eq!(path_graph(6).degeneracy(), 1);
        assert_eq!(cycle(5).degeneracy(), 2);
        assert_eq!(grid(3, 3).degeneracy(), 2);
    }
}
