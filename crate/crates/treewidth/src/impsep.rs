//! Important separators: the unique minimum one, exactly-once enumeration
//! with a size bound, smallest dominating important separator, and the
//! hitting-set construction used by the leaf-pushing branch.
//!
//! An important (a,b)-separator is a minimal (a,b)-separator s such that no
//! separator s' with |s'| <= |s| has strictly larger reach R(a, s'). The
//! enumeration walks closed reach-sets: every minimal separator is the
//! frontier N(R) ∪ (a \ R) of its own reach-set R, and every reach-set of an
//! important separator contains the reach-set of the minimum important one.

use std::ops::ControlFlow;

use crate::bitgraph::{BitFlow, BitGraph};
use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

/// The unique minimum-size important (a,b)-separator: the minimum cut pushed
/// maximally towards b. Empty when b is unreachable from a.
pub fn unique_min_important(g: &Graph, a: &VertexSet, b: &VertexSet) -> VertexSet {
    g.min_separation(a, b).s
}

struct SepSpace<'a> {
    bg: &'a BitGraph,
    a: u64,
    b: u64,
}

impl SepSpace<'_> {
    /// Frontier of a closed reach-set: the minimal separator realizing it.
    fn frontier(&self, r: u64) -> u64 {
        self.bg.nb(r, self.bg.full) | (self.a & !r)
    }

    /// Minimum size of an (a,b)-separator disjoint from the closed set r.
    fn min_cut_beyond(&self, r: u64) -> usize {
        let alive = self.bg.full & !r;
        BitFlow::new(self.bg, self.frontier(r), self.b & alive, alive).run()
    }

    fn is_separator(&self, s: u64) -> bool {
        let r = self.bg.closure(self.a, s, self.bg.full);
        r & self.b & !s == 0
    }

    /// Importance straight from the definition: minimal, and engulfing any
    /// frontier vertex forces every separator beyond it past |s|.
    fn is_important(&self, s: u64) -> bool {
        if !self.is_separator(s) {
            return false;
        }
        let mut it = s;
        while it != 0 {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            if self.is_separator(s & !(1 << v)) {
                return false; // not minimal
            }
        }
        let r = self.bg.closure(self.a, s, self.bg.full);
        let size = s.count_ones() as usize;
        let mut it = s & !self.b;
        while it != 0 {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            if self.min_cut_beyond(r | 1 << v) <= size {
                return false; // dominated
            }
        }
        true
    }

    fn walk<F>(&self, k: usize, r: u64, banned: u64, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&VertexSet) -> ControlFlow<()>,
    {
        if self.min_cut_beyond(r) > k {
            return ControlFlow::Continue(()); // nothing of size <= k lives here
        }
        let s = self.frontier(r);
        if (s.count_ones() as usize) <= k && self.is_important(s) {
            f(&self.bg.unmask(s))?;
        }
        // children partition the closed supersets of r by their first
        // frontier vertex outside b and the ban list
        let mut banned = banned;
        let mut cand = s & !self.b & !banned;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.walk(k, r | 1 << u, banned, f)?;
            banned |= 1 << u;
        }
        ControlFlow::Continue(())
    }
}

/// Direct importance test against the definition.
pub fn is_important(g: &Graph, a: &VertexSet, b: &VertexSet, s: &VertexSet) -> bool {
    let bg = g.bits().expect("separator machinery supports at most 64 vertices");
    let space = SepSpace { bg: &bg, a: bg.mask(a), b: bg.mask(b) };
    space.is_important(bg.mask(s))
}

/// Visit every important (a,b)-separator of size at most k exactly once, in a
/// deterministic order, using space polynomial in |V(g)|.
pub fn for_each_important<F>(g: &Graph, a: &VertexSet, b: &VertexSet, k: usize, f: &mut F)
where
    F: FnMut(&VertexSet) -> ControlFlow<()>,
{
    let bg = g.bits().expect("separator machinery supports at most 64 vertices");
    let space = SepSpace { bg: &bg, a: bg.mask(a), b: bg.mask(b) };
    // every important separator's reach-set contains the reach-set of the
    // unique minimum one
    let mut bf = BitFlow::new(&bg, space.a, space.b, bg.full);
    bf.run();
    let base = bf.cut_near_sink();
    let r0 = bg.closure(space.a, base, bg.full);
    let _ = space.walk(k, r0, 0, f);
}

/// All important (a,b)-separators of size at most k, deterministic order.
pub fn enumerate_important(g: &Graph, a: &VertexSet, b: &VertexSet, k: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for_each_important(g, a, b, k, &mut |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Smallest important (a,b)-separator dominating s: important, no larger
/// than s, with reach containing R(a,s). Ties break lexicographically.
pub fn smallest_dominating_important(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    s: &VertexSet,
) -> Result<VertexSet> {
    let bg = g.bits().expect("separator machinery supports at most 64 vertices");
    let space = SepSpace { bg: &bg, a: bg.mask(a), b: bg.mask(b) };
    let sm = bg.mask(s);
    if !space.is_separator(sm) {
        return Err(Error::NotSeparator);
    }
    let r = bg.closure(space.a, sm, bg.full);
    let mut best: Option<VertexSet> = None;
    for_each_important(g, a, b, s.len(), &mut |cand| {
        let cm = bg.mask(cand);
        let rc = bg.closure(space.a, cm, bg.full);
        if rc & r == r {
            let better = match &best {
                None => true,
                Some(cur) => (cand.len(), cand) < (cur.len(), cur),
            };
            if better {
                best = Some(cand.clone());
            }
        }
        ControlFlow::Continue(())
    });
    // s is dominated by at least one important separator (possibly itself)
    Ok(best.expect("domination closure"))
}

/// Set of size at most k intersecting every nonempty important
/// (a,b)-separator of size at most k. Walks the unique minimum important
/// separator, committing one of its vertices and growing the source side.
pub fn hitting_set(g: &Graph, a: &VertexSet, b: &VertexSet, k: usize) -> VertexSet {
    let bg = g.bits().expect("separator machinery supports at most 64 vertices");
    let (am, bm) = (bg.mask(a), bg.mask(b));
    let mut h = VertexSet::new();
    if bg.closure(am, 0, bg.full) & bm == 0 {
        return h; // b unreachable
    }
    let mut cur = am;
    let mut last_flow = 0usize;
    loop {
        let mut bf = BitFlow::new(&bg, cur, bm, bg.full);
        let flow = bf.run();
        debug_assert!(flow > last_flow || last_flow == 0);
        last_flow = flow;
        if flow > k {
            return h;
        }
        let s = bf.cut_near_sink();
        if s & bm != 0 {
            let hit = (s & bm).trailing_zeros() as usize;
            h.insert(bg.verts[hit]);
            return h;
        }
        if s == 0 {
            return h;
        }
        let v = s.trailing_zeros() as usize;
        h.insert(bg.verts[v]);
        cur = s | bg.adj[v] | 1 << v;
    }
}
