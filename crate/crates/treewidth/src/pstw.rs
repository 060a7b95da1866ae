//! Branching solver for instances (G, terminal cliques, k): find a torso
//! tree decomposition of width at most k covering the union of the terminal
//! cliques, or conclude that none exists. Reduction by safe separations,
//! terminal-clique merging, and leaf pushing guided by hitting sets for
//! important separators.

use std::collections::BTreeSet;

use crate::graph::{set_diff, set_inter, set_union, Graph, Separation, Vertex, VertexSet};
use crate::impsep;
use crate::search::SearchCtx;
use crate::treedec::{TorsoTreeDecomposition, TreeDecomposition};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PstwInstance {
    pub g: Graph,
    pub cliques: BTreeSet<VertexSet>,
    pub k: usize,
}

impl PstwInstance {
    pub fn new(g: Graph, cliques: BTreeSet<VertexSet>, k: usize) -> Result<Self> {
        for w in &cliques {
            if w.len() > k + 1 {
                return Err(Error::SizeBound(format!(
                    "terminal clique of size {} exceeds k+1 = {}",
                    w.len(),
                    k + 1
                )));
            }
            if !g.is_clique(w) {
                return Err(Error::Precondition(format!("{w:?} is not a clique")));
            }
            if !w.iter().all(|v| g.has_vertex(*v)) {
                return Err(Error::Precondition("terminal clique outside the graph".into()));
            }
        }
        Ok(PstwInstance { g, cliques, k })
    }

    pub fn t(&self) -> usize {
        self.cliques.len()
    }

    /// Union of all terminal cliques.
    pub fn w_hat(&self) -> VertexSet {
        let mut out = VertexSet::new();
        for w in &self.cliques {
            out.extend(w.iter().copied());
        }
        out
    }

    /// Union of the terminal cliques other than `skip`.
    pub fn others(&self, skip: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for w in &self.cliques {
            if w != skip {
                out.extend(w.iter().copied());
            }
        }
        out
    }

    /// Restriction to one side of a separation: induce on a ∪ s, make s a
    /// clique, drop cliques disjoint from a, insert s unless a superset is
    /// already present.
    pub fn restrict(&self, a: &VertexSet, s: &VertexSet) -> Result<Self> {
        if s.len() > self.k + 1 {
            return Err(Error::SizeBound(format!(
                "separator of size {} exceeds k+1 = {}",
                s.len(),
                self.k + 1
            )));
        }
        let keep = set_union(a, s);
        let g = self.g.induced(&keep).clique_union(s);
        let mut cliques: BTreeSet<VertexSet> = self
            .cliques
            .iter()
            .filter(|w| !set_inter(w, a).is_empty())
            .cloned()
            .collect();
        if !cliques.iter().any(|w| s.is_subset(w)) {
            cliques.insert(s.clone());
        }
        PstwInstance::new(g, cliques, self.k)
    }

    /// Merge two terminal cliques into their union and make it a clique.
    pub fn merge(&self, wi: &VertexSet, wj: &VertexSet) -> Result<Self> {
        let u = set_union(wi, wj);
        if u.len() > self.k + 1 {
            return Err(Error::SizeBound("merged clique too large".into()));
        }
        let g = self.g.clique_union(&u);
        let mut cliques = self.cliques.clone();
        cliques.remove(wi);
        cliques.remove(wj);
        cliques.insert(u);
        PstwInstance::new(g, cliques, self.k)
    }

    /// Grow a terminal clique by a disjoint vertex set.
    pub fn push(&self, wi: &VertexSet, add: &VertexSet) -> Result<Self> {
        if !set_inter(wi, add).is_empty() {
            return Err(Error::Precondition("pushed set must be disjoint from the clique".into()));
        }
        let u = set_union(wi, add);
        if u.len() > self.k + 1 {
            return Err(Error::SizeBound("pushed clique too large".into()));
        }
        let g = self.g.clique_union(&u);
        let mut cliques = self.cliques.clone();
        cliques.remove(wi);
        cliques.insert(u);
        PstwInstance::new(g, cliques, self.k)
    }

    /// A strict separation whose separator is linked into clipped spanning
    /// terminal cliques on both sides, or None. Searches clique splits first,
    /// then minimum separators between non-strictly-linked clique pairs.
    pub fn find_safe_separation(&self) -> Option<Separation> {
        let bg = self.g.bits().expect("solver supports at most 64 vertices");
        // split off a component by removing a whole clique or all but one
        // vertex of it: the separator is inside the clique
        for wa in &self.cliques {
            let wm = bg.mask(wa);
            let mut candidates: Vec<u64> = vec![wm];
            let mut it = wm;
            while it != 0 {
                let w = it.trailing_zeros() as usize;
                it &= it - 1;
                candidates.push(wm & !(1 << w));
            }
            for removed in candidates {
                let alive = bg.full & !removed;
                let comps = bg.components(alive);
                if comps.len() < 2 {
                    continue;
                }
                for &comp in &comps {
                    let s = bg.nb(comp, bg.full);
                    let b = bg.full & !comp & !s;
                    if b != 0 {
                        debug_assert_eq!(s & !wm, 0);
                        return Some(Separation {
                            a: bg.unmask(comp),
                            s: bg.unmask(s),
                            b: bg.unmask(b),
                        });
                    }
                }
            }
        }
        // minimum separator between two cliques, different from both
        let cl: Vec<&VertexSet> = self.cliques.iter().collect();
        for i in 0..cl.len() {
            for j in i + 1..cl.len() {
                let (wa, wb) =
                    if cl[i].len() <= cl[j].len() { (cl[i], cl[j]) } else { (cl[j], cl[i]) };
                let (wam, wbm) = (bg.mask(wa), bg.mask(wb));
                if let Some(s) = crate::graph::breaking_min_cut(&bg, wam, wbm) {
                    let a = bg.closure(wam, s, bg.full);
                    let b = bg.full & !a & !s;
                    if a == 0 || b == 0 {
                        continue;
                    }
                    return Some(Separation {
                        a: bg.unmask(a),
                        s: bg.unmask(s),
                        b: bg.unmask(b),
                    });
                }
            }
        }
        None
    }

    /// Solve directly when t <= 1 or the graph has at most k+2 vertices.
    pub fn small_case(&self) -> Result<Option<TorsoTreeDecomposition>> {
        if self.t() <= 1 {
            let x = self.cliques.iter().next().cloned().unwrap_or_default();
            return Ok(Some(TorsoTreeDecomposition::new(x.clone(), TreeDecomposition::single_bag(x))));
        }
        if self.g.n() > self.k + 2 {
            return Err(Error::Precondition("small case needs t <= 1 or |V| <= k+2".into()));
        }
        let what = self.w_hat();
        if what.len() <= self.k + 1 {
            return Ok(Some(TorsoTreeDecomposition::new(
                what.clone(),
                TreeDecomposition::single_bag(what),
            )));
        }
        // here X must be all of V(G); solvable iff some pair is non-adjacent
        let vs: Vec<Vertex> = self.g.vertices().collect();
        for ai in 0..vs.len() {
            for bi in ai + 1..vs.len() {
                if !self.g.has_edge(vs[ai], vs[bi]) {
                    let all = self.g.vertex_set();
                    let bag_u: VertexSet = all.iter().copied().filter(|&v| v != vs[ai]).collect();
                    let bag_v: VertexSet = all.iter().copied().filter(|&v| v != vs[bi]).collect();
                    let td = TreeDecomposition::from_parts(vec![bag_u, bag_v], vec![(0, 1)])?;
                    return Ok(Some(TorsoTreeDecomposition::new(all, td)));
                }
            }
        }
        Ok(None)
    }

    /// Sum over terminal cliques of 3k+3 - flp(W_i): the branching measure.
    pub fn measure(&self) -> usize {
        self.cliques
            .iter()
            .map(|w| 3 * self.k + 3 - self.g.flow_potential(w, &self.others(w)))
            .sum()
    }

    fn memo_key(&self) -> Vec<u64> {
        let mut key: Vec<u64> = Vec::new();
        key.push(u64::MAX); // tags the pstw keyspace
        for v in self.g.vertices() {
            key.push(v as u64);
        }
        for w in &self.cliques {
            key.push(u64::MAX - 1);
            for &v in w {
                key.push(v as u64);
            }
        }
        key
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Solution(TorsoTreeDecomposition),
    NoSolution,
    Budget,
}

impl Outcome {
    pub fn solution(self) -> Option<TorsoTreeDecomposition> {
        match self {
            Outcome::Solution(s) => Some(s),
            _ => None,
        }
    }
}

/// Join two side solutions on the shared separator clique.
pub(crate) fn combine(
    xa: TorsoTreeDecomposition,
    xb: TorsoTreeDecomposition,
    s: &VertexSet,
) -> Result<TorsoTreeDecomposition> {
    let td = TreeDecomposition::join_on(&xa.td, &xb.td, s)?;
    Ok(TorsoTreeDecomposition::new(set_union(&xa.x, &xb.x), td))
}

pub fn solve(inst: &PstwInstance, ctx: &mut SearchCtx) -> Outcome {
    if !ctx.tick() {
        return Outcome::Budget;
    }
    let key = inst.memo_key();
    if ctx.known_no(&key) {
        return Outcome::NoSolution;
    }
    let out = solve_inner(inst, ctx);
    if matches!(out, Outcome::NoSolution) {
        ctx.remember_no(key);
    }
    if ctx.opts.debug_checks {
        if let Outcome::Solution(sol) = &out {
            assert!(sol.covers(&inst.w_hat()), "solution misses a terminal clique");
            assert!(sol.width() <= inst.k as i64);
            let rep = sol.validate(&inst.g);
            assert!(rep.is_valid(), "invalid solution: {:?}", rep.first());
        }
    }
    out
}

fn solve_inner(inst: &PstwInstance, ctx: &mut SearchCtx) -> Outcome {
    if inst.t() <= 1 || inst.g.n() <= inst.k + 2 {
        return match inst.small_case() {
            Ok(Some(sol)) => Outcome::Solution(sol),
            Ok(None) => Outcome::NoSolution,
            Err(_) => unreachable!("small case preconditions checked"),
        };
    }

    if let Some(sep) = inst.find_safe_separation() {
        let ia = inst.restrict(&sep.a, &sep.s).expect("safe separator fits k+1");
        let ib = inst.restrict(&sep.b, &sep.s).expect("safe separator fits k+1");
        if ctx.opts.debug_checks {
            let m = inst.measure();
            assert!(ia.measure() <= m, "safe separation raised the measure");
            assert!(ib.measure() <= m, "safe separation raised the measure");
        }
        let sa = match solve(&ia, ctx) {
            Outcome::Solution(s) => s,
            other => return other,
        };
        let sb = match solve(&ib, ctx) {
            Outcome::Solution(s) => s,
            other => return other,
        };
        return Outcome::Solution(combine(sa, sb, &sep.s).expect("separator clique is in both"));
    }

    // merge branching
    let cl: Vec<VertexSet> = inst.cliques.iter().cloned().collect();
    for i in 0..cl.len() {
        for j in i + 1..cl.len() {
            if set_union(&cl[i], &cl[j]).len() > inst.k + 1 {
                continue;
            }
            let child = inst.merge(&cl[i], &cl[j]).expect("size checked");
            if ctx.opts.debug_checks {
                assert!(
                    child.measure() + inst.k + 1 <= inst.measure(),
                    "merge must drop the measure by at least k+1"
                );
            }
            match solve(&child, ctx) {
                Outcome::NoSolution => {}
                other => return other,
            }
        }
    }

    // maximally merged now; a contained clique pair means no solution
    for i in 0..cl.len() {
        for j in 0..cl.len() {
            if i != j && cl[i].is_subset(&cl[j]) {
                return Outcome::NoSolution;
            }
        }
    }

    // leaf pushing over candidate forget-cliques
    let what = inst.w_hat();
    for wi in &cl {
        if wi.len() > inst.k || !cl.iter().any(|wj| wj != wi && wj.len() >= wi.len()) {
            continue;
        }
        for &w in wi {
            let wif: VertexSet = wi.iter().copied().filter(|&u| u != w).collect();
            let gp = inst.g.without(&wif);
            let target = set_diff(&what, wi);
            let hits = impsep::hitting_set(&gp, &crate::graph::vset([w]), &target, inst.k);
            for &v in hits.iter().filter(|&&v| v != w) {
                debug_assert!(!wi.contains(&v));
                let child = inst.push(wi, &crate::graph::vset([v])).expect("push fits");
                if ctx.opts.debug_checks {
                    assert!(
                        child.measure() < inst.measure(),
                        "leaf push must strictly drop the measure"
                    );
                }
                match solve(&child, ctx) {
                    Outcome::NoSolution => {}
                    other => return other,
                }
            }
        }
    }

    Outcome::NoSolution
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;
    use crate::io::{complete, cycle, path_graph};
    use crate::search::{SearchCtx, SolveOptions};

    fn ctx() -> SearchCtx {
        SearchCtx::new(SolveOptions { debug_checks: true }, None)
    }

    fn inst(g: Graph, cliques: &[&[Vertex]], k: usize) -> PstwInstance {
        let cl: BTreeSet<VertexSet> = cliques.iter().map(|c| c.iter().copied().collect()).collect();
        PstwInstance::new(g, cl, k).unwrap()
    }

    #[test]
    fn restrict_basics() {
        let i = inst(path_graph(4), &[&[1], &[4]], 1);
        let r = i.restrict(&vset([1]), &vset([2])).unwrap();
        assert_eq!(r.g.vertex_set(), vset([1, 2]));
        assert_eq!(r.cliques, BTreeSet::from([vset([1]), vset([2])]));

        // restricting to everything only inserts the separator clique
        let i = inst(path_graph(4), &[&[1], &[4]], 2);
        let r = i.restrict(&vset([1, 2, 4]), &vset([3])).unwrap();
        assert_eq!(r.g.vertex_set(), vset([1, 2, 3, 4]));
        assert!(r.cliques.contains(&vset([3])));

        // separator with an existing superset clique is not reinserted
        let i = inst(complete(4), &[&[1, 2], &[3]], 3);
        let r = i.restrict(&vset([3, 4]), &vset([1, 2])).unwrap();
        assert_eq!(r.cliques, BTreeSet::from([vset([1, 2]), vset([3])]));

        assert!(i.restrict(&vset([]), &vset([1, 2, 3, 4, 5])).is_err());
    }

    #[test]
    fn merge_basics() {
        let i = inst(path_graph(4), &[&[1], &[4]], 1);
        let m = i.merge(&vset([1]), &vset([4])).unwrap();
        assert_eq!(m.cliques, BTreeSet::from([vset([1, 4])]));
        assert!(m.g.has_edge(1, 4));
        assert_eq!(m.g.edge_count(), 4); // P4 plus the new edge is C4

        // union too large
        let i = inst(complete(4), &[&[1, 2], &[3, 4]], 2);
        assert!(i.merge(&vset([1, 2]), &vset([3, 4])).is_err());

        // subset merge degenerates to the superset
        let i = inst(complete(3), &[&[1], &[1, 2]], 2);
        let m = i.merge(&vset([1]), &vset([1, 2])).unwrap();
        assert_eq!(m.cliques, BTreeSet::from([vset([1, 2])]));
    }

    #[test]
    fn push_basics() {
        let i = inst(path_graph(4), &[&[1], &[4]], 1);
        let p = i.push(&vset([1]), &vset([2])).unwrap();
        assert!(p.cliques.contains(&vset([1, 2])));
        let p = i.push(&vset([1]), &vset([])).unwrap();
        assert_eq!(p.cliques, i.cliques);
        assert!(i.push(&vset([1]), &vset([2, 3])).is_err());
    }

    #[test]
    fn safe_separation_cases() {
        let i = inst(path_graph(4), &[&[1], &[4]], 1);
        let sep = i.find_safe_separation().expect("P4 splits");
        assert!(sep.is_strict());
        assert_eq!(sep.order(), 1);
        assert!(sep.s != vset([1]) && sep.s != vset([4]));

        // K4: every pair strictly linked, no splits
        let i = inst(complete(4), &[&[1], &[2]], 2);
        assert!(i.find_safe_separation().is_none());

        // removing a clique disconnects: separator inside the clique
        let mut g = path_graph(3); // 1-2-3
        g.add_edge(2, 4);
        let i = inst(g, &[&[2]], 2);
        let sep = i.find_safe_separation().expect("articulation clique");
        assert!(sep.s.is_subset(&vset([2])));
    }

    #[test]
    fn small_cases() {
        let i = inst(path_graph(3), &[&[1, 2]], 2);
        let sol = i.small_case().unwrap().unwrap();
        assert_eq!(sol.x, vset([1, 2]));

        // K4 with all of V needed and complete: no solution
        let i = inst(complete(4), &[&[1], &[2], &[3], &[4]], 2);
        assert!(i.small_case().unwrap().is_none());

        // C4 with all of V needed: two overlapping bags
        let i = inst(cycle(4), &[&[1], &[2], &[3], &[4]], 2);
        let sol = i.small_case().unwrap().unwrap();
        assert!(sol.validate(&cycle(4)).is_valid());
        assert_eq!(sol.width(), 2);
        assert_eq!(sol.x, vset([1, 2, 3, 4]));
    }

    #[test]
    fn solve_examples() {
        let i = inst(path_graph(4), &[&[1], &[4]], 1);
        let sol = solve(&i, &mut ctx()).solution().expect("P4 has width 1");
        assert!(vset([1, 4]).is_subset(&sol.x));
        assert!(sol.width() <= 1);

        // K4 minus an edge, singletons over V, k = 2
        let mut g = complete(4);
        g.remove_edge(1, 3);
        let i = inst(g, &[&[1], &[2], &[3], &[4]], 2);
        let sol = solve(&i, &mut ctx()).solution().expect("width 2");
        assert!(sol.width() <= 2);

        // C4 with k = 1: no solution
        let i = inst(cycle(4), &[&[1], &[2], &[3], &[4]], 1);
        assert!(matches!(solve(&i, &mut ctx()), Outcome::NoSolution));
    }

    #[test]
    fn measure_formula() {
        // two singletons in P4: flp = 1 each, measure 2(3k+2)
        let k = 1;
        let i = inst(path_graph(4), &[&[1], &[4]], k);
        assert_eq!(i.measure(), 2 * (3 * k + 2));
    }

    #[test]
    fn budget_is_reported() {
        let i = inst(cycle(4), &[&[1], &[2], &[3], &[4]], 1);
        let mut c = SearchCtx::new(SolveOptions { debug_checks: false }, Some(2));
        assert!(matches!(solve(&i, &mut c), Outcome::Budget));
        assert!(c.budget_hit);
    }

    #[test]
    fn completeness_vs_oracle_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
        for _ in 0..40 {
            let n = rng.gen_range(3..=8);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.45) {
                        g.add_edge(u, v);
                    }
                }
            }
            let tw = crate::oracle::treewidth_of(&g) as usize;
            let k = tw.max(1);
            if k + 2 > n {
                continue;
            }
            // singleton partition of an arbitrary W of size k+2
            let w: Vec<Vertex> = g.vertices().take(k + 2).collect();
            let cliques: BTreeSet<VertexSet> = w.iter().map(|&v| vset([v])).collect();
            let i = PstwInstance::new(g.clone(), cliques, k).unwrap();
            let out = solve(&i, &mut ctx());
            let sol = out.solution().expect("oracle says width k is feasible");
            assert!(sol.width() <= k as i64);
            assert!(sol.validate(&g).is_valid());
        }
    }
}
