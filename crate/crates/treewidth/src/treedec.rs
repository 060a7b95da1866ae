//! Tree decompositions and torso tree decompositions: validity checking,
//! normalization, rooted views and the join-on-separator constructor.

use std::collections::{BTreeMap, VecDeque};

use crate::graph::{set_diff, Graph, Vertex, VertexSet};
use crate::{Error, Result};

/// Tree of bags over a graph. Node ids are dense indices; they are renumbered
/// by every transform, only the bags carry meaning across calls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<VertexSet>,
    adj: Vec<Vec<usize>>,
    root: Option<usize>,
}

impl TreeDecomposition {
    pub fn single_bag(bag: VertexSet) -> Self {
        TreeDecomposition { bags: vec![bag], adj: vec![Vec::new()], root: None }
    }

    pub fn from_parts(bags: Vec<VertexSet>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = bags.len();
        if n == 0 {
            return Err(Error::Validation("a tree decomposition needs at least one node".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Validation(format!("bad tree edge {u}-{v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let td = TreeDecomposition { bags, adj, root: None };
        if !td.is_tree() {
            return Err(Error::Validation("node links do not form a tree".into()));
        }
        Ok(td)
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bag(&self, i: usize) -> &VertexSet {
        &self.bags[i]
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn node_neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn rooted_at(mut self, r: usize) -> Self {
        assert!(r < self.node_count());
        self.root = Some(r);
        self
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    /// Width = largest bag size - 1; -1 for the empty-bag decomposition.
    pub fn width(&self) -> i64 {
        self.max_bag_size() as i64 - 1
    }

    pub fn count_bags_of_size(&self, size: usize) -> usize {
        self.bags.iter().filter(|b| b.len() == size).count()
    }

    pub fn all_vertices(&self) -> VertexSet {
        let mut out = VertexSet::new();
        for b in &self.bags {
            out.extend(b.iter().copied());
        }
        out
    }

    fn is_tree(&self) -> bool {
        let n = self.node_count();
        let m: usize = self.adj.iter().map(|a| a.len()).sum::<usize>() / 2;
        if m != n - 1 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut cnt = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    cnt += 1;
                    queue.push_back(v);
                }
            }
        }
        cnt == n
    }

    pub fn find_bag_containing(&self, s: &VertexSet) -> Option<usize> {
        self.bags.iter().position(|b| s.is_subset(b))
    }

    /// Nodes whose bag contains v.
    fn nodes_with(&self, v: Vertex) -> Vec<usize> {
        (0..self.node_count()).filter(|&i| self.bags[i].contains(&v)).collect()
    }

    pub fn validate(&self, g: &Graph) -> ValidationReport {
        let mut violations = Vec::new();
        if !self.is_tree() {
            violations.push(Violation::NotATree);
            return ValidationReport { violations };
        }
        let gv = g.vertex_set();
        for (i, b) in self.bags.iter().enumerate() {
            for &v in b {
                if !gv.contains(&v) {
                    violations.push(Violation::ForeignVertex { node: i, vertex: v });
                }
            }
        }
        for v in g.vertices() {
            let occ = self.nodes_with(v);
            if occ.is_empty() {
                violations.push(Violation::MissingVertex(v));
                continue;
            }
            // connectedness: BFS restricted to occurrence nodes
            let mut seen = vec![false; self.node_count()];
            let mut queue = VecDeque::from([occ[0]]);
            seen[occ[0]] = true;
            let mut cnt = 1;
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] && self.bags[w].contains(&v) {
                        seen[w] = true;
                        cnt += 1;
                        queue.push_back(w);
                    }
                }
            }
            if cnt != occ.len() {
                violations.push(Violation::DisconnectedVertex(v));
            }
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                violations.push(Violation::MissingEdge(u, v));
            }
        }
        ValidationReport { violations }
    }

    /// Contract tree edges whose one bag is contained in the other until no
    /// such edge remains. Width and the count of maximum bags never increase.
    pub fn shrink(&self) -> Self {
        let mut bags: Vec<Option<VertexSet>> = self.bags.iter().cloned().map(Some).collect();
        let mut adj: Vec<VertexSet> = self
            .adj
            .iter()
            .map(|nb| nb.iter().copied().collect())
            .collect();
        let mut root = self.root;
        loop {
            let mut contracted = false;
            'outer: for u in 0..bags.len() {
                if bags[u].is_none() {
                    continue;
                }
                let nbs: Vec<usize> = adj[u].iter().copied().collect();
                for v in nbs {
                    let (bu, bv) = (bags[u].as_ref().unwrap(), bags[v].as_ref().unwrap());
                    if bu.is_subset(bv) {
                        // merge u into v
                        let others: Vec<usize> =
                            adj[u].iter().copied().filter(|&w| w != v).collect();
                        for w in others {
                            adj[w].remove(&u);
                            adj[w].insert(v);
                            adj[v].insert(w);
                        }
                        adj[v].remove(&u);
                        adj[u].clear();
                        bags[u] = None;
                        if root == Some(u) {
                            root = Some(v);
                        }
                        contracted = true;
                        break 'outer;
                    }
                    if bv.is_subset(bu) {
                        let others: Vec<usize> =
                            adj[v].iter().copied().filter(|&w| w != u).collect();
                        for w in others {
                            adj[w].remove(&v);
                            adj[w].insert(u);
                            adj[u].insert(w);
                        }
                        adj[u].remove(&v);
                        adj[v].clear();
                        bags[v] = None;
                        if root == Some(v) {
                            root = Some(u);
                        }
                        contracted = true;
                        break 'outer;
                    }
                }
            }
            if !contracted {
                break;
            }
        }
        // renumber densely
        let alive: Vec<usize> = (0..bags.len()).filter(|&i| bags[i].is_some()).collect();
        let remap: BTreeMap<usize, usize> =
            alive.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let new_bags: Vec<VertexSet> = alive.iter().map(|&i| bags[i].clone().unwrap()).collect();
        let mut new_adj = vec![Vec::new(); new_bags.len()];
        for &old in &alive {
            for &w in &adj[old] {
                new_adj[remap[&old]].push(remap[&w]);
            }
        }
        for nb in &mut new_adj {
            nb.sort_unstable();
        }
        TreeDecomposition { bags: new_bags, adj: new_adj, root: root.map(|r| remap[&r]) }
    }

    /// Disjoint union of two decompositions plus one edge between a bag of
    /// each containing s.
    pub fn join_on(a: &TreeDecomposition, b: &TreeDecomposition, s: &VertexSet) -> Result<Self> {
        let ia = a
            .find_bag_containing(s)
            .ok_or_else(|| Error::NoBagContains(s.iter().copied().collect()))?;
        let ib = b
            .find_bag_containing(s)
            .ok_or_else(|| Error::NoBagContains(s.iter().copied().collect()))?;
        let off = a.node_count();
        let mut bags = a.bags.clone();
        bags.extend(b.bags.iter().cloned());
        let mut adj = a.adj.clone();
        adj.extend(b.adj.iter().map(|nb| nb.iter().map(|&v| v + off).collect::<Vec<_>>()));
        adj[ia].push(ib + off);
        adj[ib + off].push(ia);
        Ok(TreeDecomposition { bags, adj, root: None })
    }

    /// Connect a forest of decompositions (one per graph component) into a
    /// single tree by arbitrary linking edges.
    pub fn connect_forest(parts: Vec<TreeDecomposition>) -> TreeDecomposition {
        let mut it = parts.into_iter();
        let mut acc = match it.next() {
            Some(td) => td,
            None => TreeDecomposition::single_bag(VertexSet::new()),
        };
        for td in it {
            let off = acc.node_count();
            acc.bags.extend(td.bags);
            acc.adj
                .extend(td.adj.into_iter().map(|nb| nb.into_iter().map(|v| v + off).collect::<Vec<_>>()));
            acc.adj[0].push(off);
            acc.adj[off].push(0);
        }
        acc.root = None;
        acc
    }

    /// Add v to every bag (used when inserting a vertex during compression).
    pub fn with_vertex_everywhere(&self, v: Vertex) -> TreeDecomposition {
        let mut td = self.clone();
        for b in &mut td.bags {
            b.insert(v);
        }
        td
    }

    /// Parent of each node for the tree rooted at `root`.
    pub fn parents(&self) -> Result<Vec<Option<usize>>> {
        let r = self.root.ok_or_else(|| Error::Precondition("decomposition is not rooted".into()))?;
        let mut par = vec![None; self.node_count()];
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::from([r]);
        seen[r] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    par[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        Ok(par)
    }

    pub fn depths(&self) -> Result<Vec<usize>> {
        let par = self.parents()?;
        let mut depth = vec![0usize; self.node_count()];
        // BFS order again for well-defined depths
        let r = self.root.unwrap();
        let mut queue = VecDeque::from([r]);
        let mut seen = vec![false; self.node_count()];
        seen[r] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let _ = par;
        Ok(depth)
    }

    /// Forget node of each vertex: the occurrence node closest to the root.
    pub fn forget_nodes(&self) -> Result<BTreeMap<Vertex, usize>> {
        let depth = self.depths()?;
        let mut out = BTreeMap::new();
        for v in self.all_vertices() {
            let best = self
                .nodes_with(v)
                .into_iter()
                .min_by_key(|&i| (depth[i], i))
                .expect("vertex occurs somewhere");
            out.insert(v, best);
        }
        Ok(out)
    }

    /// d(v) = distance from the forget node of v to the root, plus one.
    pub fn depth_weights(&self) -> Result<BTreeMap<Vertex, usize>> {
        let depth = self.depths()?;
        let fnodes = self.forget_nodes()?;
        Ok(fnodes.into_iter().map(|(v, t)| (v, depth[t] + 1)).collect())
    }

    /// Rooted normal form: empty root bag, at most two children per node,
    /// adjacent bags differ in at most one vertex, every forget node has
    /// exactly one child, leaves have empty bags. Width is unchanged.
    pub fn nice_form(&self) -> TreeDecomposition {
        let anchor = 0usize;
        let base = self.clone().rooted_at(anchor);
        let par = base.parents().expect("rooted");
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); base.node_count()];
        for (v, p) in par.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        for ch in &mut children {
            ch.sort_by_key(|&c| {
                (base.bags[c].iter().next().copied().unwrap_or(usize::MAX),
                 base.bags[c].iter().copied().collect::<Vec<_>>(), c)
            });
        }

        let mut bags: Vec<VertexSet> = Vec::new();
        let mut adj: Vec<Vec<usize>> = Vec::new();

        fn push_node(bags: &mut Vec<VertexSet>, adj: &mut Vec<Vec<usize>>, b: VertexSet) -> usize {
            bags.push(b);
            adj.push(Vec::new());
            bags.len() - 1
        }
        fn link(adj: &mut [Vec<usize>], u: usize, v: usize) {
            adj[u].push(v);
            adj[v].push(u);
        }

        // Chain below `top` towards bag `to`: drop top\to ascending, then add
        // to\top ascending; returns the node carrying `to`.
        fn chain(
            bags: &mut Vec<VertexSet>,
            adj: &mut Vec<Vec<usize>>,
            top: usize,
            to: &VertexSet,
        ) -> usize {
            let mut cur = top;
            let mut bag = bags[cur].clone();
            for v in set_diff(&bag, to) {
                bag.remove(&v);
                let nxt = push_node(bags, adj, bag.clone());
                link(adj, cur, nxt);
                cur = nxt;
            }
            for v in set_diff(to, &bag) {
                bag.insert(v);
                let nxt = push_node(bags, adj, bag.clone());
                link(adj, cur, nxt);
                cur = nxt;
            }
            cur
        }

        struct Ctx<'a> {
            base: &'a TreeDecomposition,
            children: &'a [Vec<usize>],
        }

        fn attach_child(
            ctx: &Ctx,
            from: usize,
            kid: usize,
            bags: &mut Vec<VertexSet>,
            adj: &mut Vec<Vec<usize>>,
        ) {
            let bottom = chain(bags, adj, from, ctx.base.bag(kid));
            let sub = build(ctx, kid, bags, adj);
            link(adj, bottom, sub);
        }

        // Hang `kids` under a node carrying the original bag of `node`.
        fn hang(
            ctx: &Ctx,
            node: usize,
            at: usize,
            kids: &[usize],
            bags: &mut Vec<VertexSet>,
            adj: &mut Vec<Vec<usize>>,
        ) {
            if kids.len() == 1 {
                attach_child(ctx, at, kids[0], bags, adj);
                return;
            }
            let left = push_node(bags, adj, ctx.base.bags[node].clone());
            link(adj, at, left);
            attach_child(ctx, left, kids[0], bags, adj);
            let right = push_node(bags, adj, ctx.base.bags[node].clone());
            link(adj, at, right);
            hang(ctx, node, right, &kids[1..], bags, adj);
        }

        fn build(
            ctx: &Ctx,
            node: usize,
            bags: &mut Vec<VertexSet>,
            adj: &mut Vec<Vec<usize>>,
        ) -> usize {
            let me = push_node(bags, adj, ctx.base.bags[node].clone());
            let kids = &ctx.children[node];
            if kids.is_empty() {
                chain(bags, adj, me, &VertexSet::new());
            } else {
                hang(ctx, node, me, kids, bags, adj);
            }
            me
        }

        let ctx = Ctx { base: &base, children: &children };
        let anchor_new = build(&ctx, anchor, &mut bags, &mut adj);

        // root chain: strip a copy of the anchor bag down to the empty set;
        // the copy keeps the anchor itself from becoming a forget node with
        // two children
        let anchor_bag = bags[anchor_new].clone();
        let mut root = anchor_new;
        if !anchor_bag.is_empty() {
            root = push_node(&mut bags, &mut adj, anchor_bag);
            link(&mut adj, anchor_new, root);
            let mut bag = bags[root].clone();
            while let Some(&v) = bag.iter().next() {
                bag.remove(&v);
                let up = push_node(&mut bags, &mut adj, bag.clone());
                link(&mut adj, root, up);
                root = up;
            }
        }

        TreeDecomposition { bags, adj, root: Some(root) }
    }

    /// Check the nice-form shape claims (used by tests).
    pub fn is_nice(&self) -> bool {
        let Some(r) = self.root else { return false };
        if !self.bags[r].is_empty() {
            return false;
        }
        let Ok(par) = self.parents() else { return false };
        let mut children: Vec<usize> = vec![0; self.node_count()];
        for p in par.iter().flatten() {
            children[*p] += 1;
        }
        for i in 0..self.node_count() {
            if children[i] > 2 {
                return false;
            }
            if children[i] == 0 && !self.bags[i].is_empty() {
                return false;
            }
            if let Some(p) = par[i] {
                let d = self.bags[i].symmetric_difference(&self.bags[p]).count();
                if d > 1 {
                    return false;
                }
            }
            // forget node (some vertex tops out here): must have exactly 1 child
            let is_forget = match par[i] {
                Some(p) => self.bags[i].difference(&self.bags[p]).next().is_some(),
                None => !self.bags[i].is_empty(),
            };
            if is_forget && children[i] != 1 {
                return false;
            }
        }
        true
    }
}

/// Pair (X, tree decomposition of torso(G, X)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsoTreeDecomposition {
    pub x: VertexSet,
    pub td: TreeDecomposition,
}

impl TorsoTreeDecomposition {
    pub fn new(x: VertexSet, td: TreeDecomposition) -> Self {
        TorsoTreeDecomposition { x, td }
    }

    pub fn width(&self) -> i64 {
        self.td.width()
    }

    pub fn covers(&self, w: &VertexSet) -> bool {
        w.is_subset(&self.x)
    }

    pub fn validate(&self, g: &Graph) -> ValidationReport {
        let torso = g.torso(&self.x);
        self.td.validate(&torso)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotATree,
    MissingVertex(Vertex),
    MissingEdge(Vertex, Vertex),
    DisconnectedVertex(Vertex),
    ForeignVertex { node: usize, vertex: Vertex },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotATree => write!(f, "node links do not form a tree"),
            Violation::MissingVertex(v) => write!(f, "vertex {v} occurs in no bag"),
            Violation::MissingEdge(u, v) => write!(f, "edge {u}-{v} is in no bag"),
            Violation::DisconnectedVertex(v) => {
                write!(f, "occurrences of vertex {v} are not connected")
            }
            Violation::ForeignVertex { node, vertex } => {
                write!(f, "bag {node} contains unknown vertex {vertex}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}
