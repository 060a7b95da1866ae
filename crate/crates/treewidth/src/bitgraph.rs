//! Bitmask view of a graph with at most 64 vertices, plus a unit-capacity
//! vertex-disjoint flow on it. The solvers funnel their separator queries
//! through this to avoid per-call allocation.

use crate::graph::{Graph, Vertex, VertexSet};

pub(crate) const NONE: usize = usize::MAX;

#[derive(Clone)]
pub(crate) struct BitGraph {
    pub verts: Vec<Vertex>,
    pub adj: Vec<u64>,
    pub full: u64,
}

impl BitGraph {
    pub fn new(g: &Graph) -> Option<BitGraph> {
        let verts: Vec<Vertex> = g.vertices().collect();
        if verts.len() > 64 {
            return None;
        }
        let pos = |v: Vertex| verts.binary_search(&v).unwrap();
        let mut adj = vec![0u64; verts.len()];
        for (i, &v) in verts.iter().enumerate() {
            for &u in g.neighbors(v) {
                adj[i] |= 1 << pos(u);
            }
        }
        let full = if verts.len() == 64 { u64::MAX } else { (1u64 << verts.len()) - 1 };
        Some(BitGraph { verts, adj, full })
    }

    pub fn n(&self) -> usize {
        self.verts.len()
    }

    /// Vertices of `s` present in this graph, as a mask.
    pub fn mask(&self, s: &VertexSet) -> u64 {
        let mut m = 0u64;
        for v in s {
            if let Ok(i) = self.verts.binary_search(v) {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn unmask(&self, mut m: u64) -> VertexSet {
        let mut out = VertexSet::new();
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            out.insert(self.verts[i]);
        }
        out
    }

    /// N(m) within the allowed part of the graph.
    pub fn nb(&self, m: u64, alive: u64) -> u64 {
        let mut out = 0u64;
        let mut it = m & alive;
        while it != 0 {
            let i = it.trailing_zeros() as usize;
            it &= it - 1;
            out |= self.adj[i];
        }
        out & !m & alive
    }

    /// Reachable closure of seed \ avoid, never entering avoid; `alive`
    /// restricts the universe (deleted vertices simply miss from it).
    pub fn closure(&self, seed: u64, avoid: u64, alive: u64) -> u64 {
        let mut r = seed & !avoid & alive;
        loop {
            let grow = self.nb(r, alive) & !avoid;
            if grow == 0 {
                return r;
            }
            r |= grow;
        }
    }

    pub fn components(&self, alive: u64) -> Vec<u64> {
        let mut rest = alive;
        let mut out = Vec::new();
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            let comp = self.closure(1 << i, 0, alive);
            out.push(comp);
            rest &= !comp;
        }
        out
    }
}

/// Vertex-disjoint x-y flow with unit capacities: `used` marks flow-carrying
/// vertices, succ/pred the path edges. Augmentation is a BFS over split-node
/// states (entering vs leaving a vertex).
pub(crate) struct BitFlow<'a> {
    pub g: &'a BitGraph,
    pub alive: u64,
    pub x: u64,
    pub y: u64,
    pub used: u64,
    pub succ: Vec<usize>,
    pub pred: Vec<usize>,
    pub value: usize,
}

impl<'a> BitFlow<'a> {
    pub fn new(g: &'a BitGraph, x: u64, y: u64, alive: u64) -> Self {
        let n = g.n();
        BitFlow {
            g,
            alive: alive & g.full,
            x: x & alive & g.full,
            y: y & alive & g.full,
            used: 0,
            succ: vec![NONE; n],
            pred: vec![NONE; n],
            value: 0,
        }
    }

    pub fn run(&mut self) -> usize {
        while self.augment() {
            self.value += 1;
        }
        self.value
    }


    // Residual arcs:
    //   enter(v) -> leave(v)        when v carries no flow
    //   leave(v) -> enter(v)        when it does (cancel)
    //   leave(v) -> enter(u)        for every edge vu (unbounded)
    //   enter(v) -> leave(pred(v))  cancelling the flow edge pred(v)->v
    //   source -> enter(x), leave(y) -> sink
    fn augment(&mut self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Par {
            Unvisited,
            Source,
            ThroughVertex,       // enter(v) -> leave(v) or leave(v) -> enter(v)
            Edge(usize),         // leave(w) -> enter(v)
            CancelInto(usize),   // enter(w) -> leave(v), cancelling v -> w
        }
        let n = self.g.n();
        let mut par_enter = vec![Par::Unvisited; n];
        let mut par_leave = vec![Par::Unvisited; n];
        let mut queue: Vec<(usize, bool)> = Vec::new(); // (vertex, is_leave)
        let mut xs = self.x;
        while xs != 0 {
            let i = xs.trailing_zeros() as usize;
            xs &= xs - 1;
            par_enter[i] = Par::Source;
            queue.push((i, false));
        }
        let mut goal = NONE;
        let mut qi = 0;
        while qi < queue.len() && goal == NONE {
            let (v, leaving) = queue[qi];
            qi += 1;
            if !leaving {
                if self.used >> v & 1 == 0 && par_leave[v] == Par::Unvisited {
                    par_leave[v] = Par::ThroughVertex;
                    if self.y >> v & 1 == 1 {
                        goal = v;
                        break;
                    }
                    queue.push((v, true));
                }
                let p = self.pred[v];
                if p != NONE && par_leave[p] == Par::Unvisited {
                    par_leave[p] = Par::CancelInto(v);
                    if self.y >> p & 1 == 1 {
                        goal = p;
                        break;
                    }
                    queue.push((p, true));
                }
            } else {
                if self.used >> v & 1 == 1 && par_enter[v] == Par::Unvisited {
                    par_enter[v] = Par::ThroughVertex;
                    queue.push((v, false));
                }
                let mut out = self.g.adj[v] & self.alive;
                while out != 0 {
                    let u = out.trailing_zeros() as usize;
                    out &= out - 1;
                    if par_enter[u] == Par::Unvisited {
                        par_enter[u] = Par::Edge(v);
                        queue.push((u, false));
                    }
                }
            }
        }
        if goal == NONE {
            return false;
        }
        // walk parents from leave(goal) back to the source, then apply the
        // recorded flow changes in path order
        #[derive(Clone, Copy)]
        enum Step {
            UseVertex(usize),
            FreeVertex(usize),
            PushEdge(usize, usize),   // u -> v
            CancelEdge(usize, usize), // erase u -> v
            Start(usize),
        }
        let mut steps: Vec<Step> = Vec::new();
        let mut state = (goal, true);
        loop {
            let (v, leaving) = state;
            if leaving {
                match par_leave[v] {
                    Par::ThroughVertex => {
                        steps.push(Step::UseVertex(v));
                        state = (v, false);
                    }
                    Par::CancelInto(w) => {
                        steps.push(Step::CancelEdge(v, w));
                        state = (w, false);
                    }
                    _ => unreachable!("leave state without parent"),
                }
            } else {
                match par_enter[v] {
                    Par::Source => {
                        steps.push(Step::Start(v));
                        break;
                    }
                    Par::ThroughVertex => {
                        steps.push(Step::FreeVertex(v));
                        state = (v, true);
                    }
                    Par::Edge(w) => {
                        steps.push(Step::PushEdge(w, v));
                        state = (w, true);
                    }
                    _ => unreachable!("enter state without parent"),
                }
            }
        }
        for step in steps.into_iter().rev() {
            match step {
                Step::Start(v) => {
                    self.pred[v] = NONE;
                }
                Step::UseVertex(v) => {
                    self.used |= 1 << v;
                }
                Step::FreeVertex(v) => {
                    self.used &= !(1 << v);
                }
                Step::PushEdge(u, v) => {
                    self.succ[u] = v;
                    self.pred[v] = u;
                }
                Step::CancelEdge(u, v) => {
                    // flow edge u->v disappears; endpoints get repaired by
                    // later steps if the path re-enters them
                    if self.succ[u] == v {
                        self.succ[u] = NONE;
                    }
                    if self.pred[v] == u {
                        self.pred[v] = NONE;
                    }
                }
            }
        }
        true
    }

    /// States residually reachable from the source; returns (enter, leave)
    /// masks.
    fn reach_from_source(&self) -> (u64, u64) {
        let n = self.g.n();
        let mut rin = self.x;
        let mut rout = 0u64;
        let mut queue: Vec<(usize, bool)> = Vec::new();
        let mut xs = self.x;
        while xs != 0 {
            let i = xs.trailing_zeros() as usize;
            xs &= xs - 1;
            queue.push((i, false));
        }
        let mut qi = 0;
        while qi < queue.len() {
            let (v, leaving) = queue[qi];
            qi += 1;
            if !leaving {
                if self.used >> v & 1 == 0 && rout >> v & 1 == 0 {
                    rout |= 1 << v;
                    queue.push((v, true));
                }
                let p = self.pred[v];
                if p != NONE && rout >> p & 1 == 0 {
                    rout |= 1 << p;
                    queue.push((p, true));
                }
            } else {
                if self.used >> v & 1 == 1 && rin >> v & 1 == 0 {
                    rin |= 1 << v;
                    queue.push((v, false));
                }
                let mut out = self.g.adj[v] & self.alive & !rin;
                while out != 0 {
                    let u = out.trailing_zeros() as usize;
                    out &= out - 1;
                    rin |= 1 << u;
                    queue.push((u, false));
                }
            }
        }
        let _ = n;
        (rin, rout)
    }

    /// States that residually reach the sink; returns (enter, leave) masks.
    fn reach_to_sink(&self) -> (u64, u64) {
        let mut zin = 0u64;
        let mut zout = self.y;
        let mut queue: Vec<(usize, bool)> = Vec::new();
        let mut ys = self.y;
        while ys != 0 {
            let i = ys.trailing_zeros() as usize;
            ys &= ys - 1;
            queue.push((i, true));
        }
        let mut qi = 0;
        while qi < queue.len() {
            let (v, leaving) = queue[qi];
            qi += 1;
            if leaving {
                // arcs into leave(v): enter(v) when free; enter(u) with
                // pred(u) == v (cancel arc enter(u) -> leave(v))
                if self.used >> v & 1 == 0 && zin >> v & 1 == 0 {
                    zin |= 1 << v;
                    queue.push((v, false));
                }
                let mut cand = self.g.adj[v] & self.alive & !zin;
                while cand != 0 {
                    let u = cand.trailing_zeros() as usize;
                    cand &= cand - 1;
                    if self.pred[u] == v {
                        zin |= 1 << u;
                        queue.push((u, false));
                    }
                }
            } else {
                // arcs into enter(v): leave(v) when used; leave(u) for any
                // edge uv
                if self.used >> v & 1 == 1 && zout >> v & 1 == 0 {
                    zout |= 1 << v;
                    queue.push((v, true));
                }
                let mut cand = self.g.adj[v] & self.alive & !zout;
                while cand != 0 {
                    let u = cand.trailing_zeros() as usize;
                    cand &= cand - 1;
                    zout |= 1 << u;
                    queue.push((u, true));
                }
            }
        }
        (zin, zout)
    }

    /// Minimum cut with the smallest source side.
    pub fn cut_near_source(&self) -> u64 {
        let (rin, rout) = self.reach_from_source();
        rin & !rout
    }

    /// Minimum cut pushed maximally towards y.
    pub fn cut_near_sink(&self) -> u64 {
        let (zin, zout) = self.reach_to_sink();
        zout & !zin
    }

    /// Decompose into vertex-disjoint paths (original vertex ids).
    pub fn paths(&self) -> Vec<Vec<Vertex>> {
        let mut out = Vec::new();
        let mut starts = self.used & self.x;
        while starts != 0 {
            let i = starts.trailing_zeros() as usize;
            starts &= starts - 1;
            if self.pred[i] != NONE {
                continue;
            }
            let mut path = Vec::new();
            let mut cur = i;
            loop {
                path.push(self.g.verts[cur]);
                if self.succ[cur] == NONE {
                    break;
                }
                cur = self.succ[cur];
            }
            out.push(path);
        }
        out
    }
}
