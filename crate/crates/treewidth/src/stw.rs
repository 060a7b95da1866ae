//! Recursion for Subset Treewidth: pre-branching over degenerate internal
//! separations, terminal-cover bookkeeping, and a validity-driven search
//! over the internal-separation order q. An instance is "valid" when it has
//! a solution admitting neither a degenerate internal separation nor one of
//! order below q; only the top-level wrapper may read exhaustion of all
//! pre-branched instances as a definite NO.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::rc::Rc;

use crate::graph::{set_diff, set_inter, set_union, vset, Graph, Separation, Vertex, VertexSet};
use crate::impsep;
use crate::pstw::{combine, Outcome, PstwInstance};
use crate::search::SearchCtx;
use crate::treedec::TorsoTreeDecomposition;
use crate::{Error, Result};

#[derive(Debug)]
pub struct Original {
    pub g: Graph,
    pub w: VertexSet,
}

#[derive(Clone, Debug)]
pub struct StwInstance {
    pub base: PstwInstance,
    /// Terminal cover: original terminal vertex -> current terminal clique
    /// separating it from the current graph in the original one.
    pub tc: std::collections::BTreeMap<Vertex, VertexSet>,
    pub q: usize,
    pub original: Rc<Original>,
}

impl StwInstance {
    pub fn g(&self) -> &Graph {
        &self.base.g
    }

    pub fn k(&self) -> usize {
        self.base.k
    }

    pub fn t(&self) -> usize {
        self.base.t()
    }

    /// Number of original terminals covered by this clique.
    pub fn ctc(&self, clique: &VertexSet) -> usize {
        self.tc.values().filter(|c| *c == clique).count()
    }

    /// |S| plus the covered-terminal count of cliques meeting A, at most k+1.
    pub fn is_degenerate(&self, sep: &Separation) -> bool {
        let covered: usize = self
            .base
            .cliques
            .iter()
            .filter(|w| !set_inter(w, &sep.a).is_empty())
            .map(|w| self.ctc(w))
            .sum();
        sep.order() + covered <= self.base.k + 1
    }

    /// Restriction with terminal-cover remapping: covers inside B ∪ S move to
    /// the lexicographically first clique containing S.
    pub fn restrict_ext(&self, a: &VertexSet, s: &VertexSet) -> Result<StwInstance> {
        let base = self.base.restrict(a, s)?;
        let target = base
            .cliques
            .iter()
            .find(|w| s.is_subset(w))
            .cloned()
            .expect("restrict keeps a superset of the separator");
        let tc = self
            .tc
            .iter()
            .map(|(&w, cl)| {
                let stays = !set_inter(cl, a).is_empty();
                (w, if stays { cl.clone() } else { target.clone() })
            })
            .collect();
        let inst =
            StwInstance { base, tc, q: self.q, original: Rc::clone(&self.original) };
        Ok(inst)
    }

    pub fn merge_ext(&self, wi: &VertexSet, wj: &VertexSet) -> Result<StwInstance> {
        let base = self.base.merge(wi, wj)?;
        let u = set_union(wi, wj);
        let tc = self
            .tc
            .iter()
            .map(|(&w, cl)| (w, if cl == wi || cl == wj { u.clone() } else { cl.clone() }))
            .collect();
        Ok(StwInstance { base, tc, q: self.q, original: Rc::clone(&self.original) })
    }

    pub fn push_ext(&self, wi: &VertexSet, add: &VertexSet) -> Result<StwInstance> {
        let base = self.base.push(wi, add)?;
        let u = set_union(wi, add);
        let tc = self
            .tc
            .iter()
            .map(|(&w, cl)| (w, if cl == wi { u.clone() } else { cl.clone() }))
            .collect();
        Ok(StwInstance { base, tc, q: self.q, original: Rc::clone(&self.original) })
    }

    fn with_q(&self, q: usize) -> StwInstance {
        StwInstance {
            base: self.base.clone(),
            tc: self.tc.clone(),
            q,
            original: Rc::clone(&self.original),
        }
    }

    /// Debug invariants: clique shape, cover separation in the original
    /// graph, covered counts, and torso edge containment.
    pub fn check_invariants(&self) {
        let gv = self.g().vertex_set();
        for (w, cl) in &self.tc {
            assert!(self.base.cliques.contains(cl), "tc target is not a terminal clique");
            let r = self.original.g.reach(&vset([*w]), cl);
            assert!(
                set_inter(&r, &set_diff(&gv, cl)).is_empty(),
                "tc({w}) no longer separates it from the current graph"
            );
        }
        for cl in &self.base.cliques {
            assert!(self.ctc(cl) >= 1, "terminal clique covers no original terminal");
        }
        let torso = self.original.g.torso(&gv);
        for (u, v) in torso.edges() {
            assert!(self.g().has_edge(u, v), "torso edge {u}-{v} missing from instance graph");
        }
    }

    fn memo_key(&self) -> Vec<u64> {
        let cliques: Vec<&VertexSet> = self.base.cliques.iter().collect();
        let mut key: Vec<u64> = vec![self.q as u64];
        for v in self.g().vertices() {
            key.push(v as u64);
        }
        for w in &cliques {
            key.push(u64::MAX - 1);
            for &v in w.iter() {
                key.push(v as u64);
            }
        }
        key.push(u64::MAX - 2);
        for (&w, cl) in &self.tc {
            let idx = cliques.iter().position(|c| *c == cl).unwrap_or(usize::MAX);
            key.push(w as u64);
            key.push(idx as u64);
        }
        key
    }

    /// Telemetry measure with the delta threshold; meaningful for k >= 64
    /// where the monotonicity claims are stated.
    pub fn phi(&self) -> f64 {
        let k = self.base.k as f64;
        let t = self.t();
        if t <= 1 {
            return 1.0;
        }
        let q = self.q as f64;
        let delta = k + 2.0 - k / k.log2();
        let clique_phi: f64 = self
            .base
            .cliques
            .iter()
            .map(|w| {
                let wl = w.len() as f64;
                if q >= delta && wl >= delta {
                    (k + 2.0 - q.min(wl)) * k.log2() + 4.0 * k
                } else if q >= delta {
                    6.0 * k
                } else {
                    (k + 2.0 - q.min(wl)) * self.ctc(w) as f64 + 6.0 * k
                }
            })
            .sum();
        let cq = self.base.cliques.iter().filter(|w| w.len() >= self.q).count().min(2) as f64;
        (k + 2.0 - q) * 3.0 * k + (2.0 - cq) * k + clique_phi
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Solution(TorsoTreeDecomposition),
    Invalid,
    Budget,
}

/// One attachment made during pre-branching: re-attach bag clique ∪ separator
/// next to a bag containing the separator when lifting a solution.
#[derive(Clone, Debug)]
pub struct RecipeStep {
    pub clique: VertexSet,
    pub separator: VertexSet,
}

pub type Recipe = Vec<RecipeStep>;

fn phi_gate(k: usize) -> bool {
    k >= 64
}

pub fn solve_valid(inst: &StwInstance, ctx: &mut SearchCtx) -> Verdict {
    if !ctx.tick() {
        return Verdict::Budget;
    }
    let key = inst.memo_key();
    if ctx.known_invalid(&key) {
        return Verdict::Invalid;
    }
    if ctx.opts.debug_checks {
        inst.check_invariants();
    }
    let out = solve_valid_inner(inst, ctx);
    match &out {
        Verdict::Invalid => ctx.remember_invalid(key),
        Verdict::Solution(sol) => {
            if ctx.opts.debug_checks {
                assert!(sol.covers(&inst.base.w_hat()));
                assert!(sol.width() <= inst.k() as i64);
                let rep = sol.validate(inst.g());
                assert!(rep.is_valid(), "invalid solution: {:?}", rep.first());
            }
        }
        Verdict::Budget => {}
    }
    out
}

fn solve_valid_inner(inst: &StwInstance, ctx: &mut SearchCtx) -> Verdict {
    let k = inst.k();
    if inst.t() <= 1 || inst.g().n() <= k + 2 {
        return match inst.base.small_case() {
            Ok(Some(sol)) => Verdict::Solution(sol),
            Ok(None) => Verdict::Invalid,
            Err(_) => unreachable!("small case preconditions checked"),
        };
    }

    if let Some(sep) = inst.base.find_safe_separation() {
        let what = inst.base.w_hat();
        let meets_both =
            !set_inter(&what, &sep.a).is_empty() && !set_inter(&what, &sep.b).is_empty();
        if sep.order() < inst.q && meets_both {
            return Verdict::Invalid;
        }
        let ia = inst.restrict_ext(&sep.a, &sep.s).expect("safe separator fits");
        let ib = inst.restrict_ext(&sep.b, &sep.s).expect("safe separator fits");
        if ctx.opts.debug_checks && phi_gate(k) && inst.t() >= 2 {
            let gated = sep.order() >= inst.q
                || what.is_subset(&set_union(&sep.a, &sep.s))
                || what.is_subset(&set_union(&sep.b, &sep.s));
            if gated {
                assert!(ia.phi() <= inst.phi() + 1e-6, "safe separation raised phi");
                assert!(ib.phi() <= inst.phi() + 1e-6, "safe separation raised phi");
            }
        }
        let sa = match solve_valid(&ia, ctx) {
            Verdict::Solution(s) => s,
            other => return other,
        };
        let sb = match solve_valid(&ib, ctx) {
            Verdict::Solution(s) => s,
            other => return other,
        };
        return Verdict::Solution(combine(sa, sb, &sep.s).expect("separator bag present"));
    }

    // terminal clique merging
    let cl: Vec<VertexSet> = inst.base.cliques.iter().cloned().collect();
    for i in 0..cl.len() {
        for j in i + 1..cl.len() {
            if set_union(&cl[i], &cl[j]).len() > k + 1 {
                continue;
            }
            let child = inst.merge_ext(&cl[i], &cl[j]).expect("size checked");
            if ctx.opts.debug_checks && phi_gate(k) && inst.t() >= 2 {
                assert!(child.phi() <= inst.phi() - k as f64 + 1e-6, "merge must drop phi by k");
            }
            match solve_valid(&child, ctx) {
                Verdict::Invalid => {}
                other => return other,
            }
        }
    }

    if inst.q > k + 1 {
        return Verdict::Invalid;
    }

    let big = cl.iter().filter(|w| w.len() >= inst.q).count();
    let what = inst.base.w_hat();
    if big < 2 {
        // leaf pushing with whole important separators to reach size >= q
        for wi in &cl {
            if wi.len() >= inst.q || !cl.iter().any(|wj| wj != wi && wj.len() >= wi.len()) {
                continue;
            }
            for &w in wi.iter() {
                let wif: VertexSet = wi.iter().copied().filter(|&u| u != w).collect();
                let gp = inst.g().without(&wif);
                let target = set_diff(&what, wi);
                let mut result: Option<Verdict> = None;
                impsep::for_each_important(&gp, &vset([w]), &target, k, &mut |s| {
                    if s.is_empty() || !set_inter(s, wi).is_empty() {
                        return ControlFlow::Continue(());
                    }
                    let grown = set_union(wi, s);
                    if grown.len() < inst.q + 1 || grown.len() > k + 1 {
                        return ControlFlow::Continue(());
                    }
                    let child = inst.push_ext(wi, s).expect("size checked");
                    if ctx.opts.debug_checks && phi_gate(k) && big < 2 && wi.len() < inst.q {
                        assert!(
                            child.phi() <= inst.phi() - k as f64 + 1e-6,
                            "leaf push must drop phi by k"
                        );
                    }
                    match solve_valid(&child, ctx) {
                        Verdict::Invalid => ControlFlow::Continue(()),
                        other => {
                            result = Some(other);
                            ControlFlow::Break(())
                        }
                    }
                });
                if let Some(v) = result {
                    return v;
                }
            }
        }
    } else {
        // break at a hypothetical internal separation of order exactly q:
        // guess the q-biased bipartition and an important separator
        let small: Vec<&VertexSet> = cl.iter().filter(|w| w.len() < inst.q).collect();
        for mask in 1u64..(1u64 << small.len()) {
            let mut left = VertexSet::new();
            for (i, w) in small.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.extend(w.iter().copied());
                }
            }
            let lefts: BTreeSet<VertexSet> = small
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, w)| (*w).clone())
                .collect();
            let right: VertexSet = cl
                .iter()
                .filter(|w| !lefts.contains(*w))
                .flat_map(|w| w.iter().copied())
                .collect();
            let mut result: Option<Verdict> = None;
            impsep::for_each_important(inst.g(), &left, &right, inst.q, &mut |s| {
                if s.len() != inst.q {
                    return ControlFlow::Continue(());
                }
                let a = inst.g().reach(&left, s);
                let b = set_diff(&set_diff(&inst.g().vertex_set(), &a), s);
                let sep = Separation { a, s: s.clone(), b };
                // only separations that would not be degenerate are broken on
                if inst.is_degenerate(&sep) {
                    return ControlFlow::Continue(());
                }
                let ia = inst.restrict_ext(&sep.a, &sep.s).expect("q <= k+1");
                let ib = inst.restrict_ext(&sep.b, &sep.s).expect("q <= k+1");
                if ctx.opts.debug_checks && phi_gate(k) && inst.t() >= 2 {
                    assert!(ia.phi() <= inst.phi() + 1e-6, "q-break raised phi");
                    assert!(ib.phi() <= inst.phi() + 1e-6, "q-break raised phi");
                }
                let sa = match solve_valid(&ia, ctx) {
                    Verdict::Solution(s) => s,
                    Verdict::Invalid => return ControlFlow::Continue(()),
                    Verdict::Budget => {
                        result = Some(Verdict::Budget);
                        return ControlFlow::Break(());
                    }
                };
                let sb = match solve_valid(&ib, ctx) {
                    Verdict::Solution(s) => s,
                    Verdict::Invalid => return ControlFlow::Continue(()),
                    Verdict::Budget => {
                        result = Some(Verdict::Budget);
                        return ControlFlow::Break(());
                    }
                };
                result = Some(Verdict::Solution(
                    combine(sa, sb, &sep.s).expect("separator bag present"),
                ));
                ControlFlow::Break(())
            });
            if let Some(v) = result {
                return v;
            }
        }
    }

    // no branch produced a solution: raise q
    let next = inst.with_q(inst.q + 1);
    if ctx.opts.debug_checks && phi_gate(k) && inst.t() >= 2 {
        assert!(next.phi() <= inst.phi() - k as f64 + 1e-6, "raising q must drop phi by k");
    }
    solve_valid(&next, ctx)
}

/// Set partitions of `items` with parts of size at most max_part and at most
/// max_parts parts, ordered most-parts-first (the all-singleton partition
/// leads).
pub(crate) fn set_partitions(
    items: &[Vertex],
    max_part: usize,
    max_parts: usize,
) -> Vec<Vec<VertexSet>> {
    let mut out = Vec::new();
    let mut blocks: Vec<VertexSet> = Vec::new();
    fn rec(
        i: usize,
        items: &[Vertex],
        blocks: &mut Vec<VertexSet>,
        out: &mut Vec<Vec<VertexSet>>,
        max_part: usize,
        max_parts: usize,
    ) {
        if i == items.len() {
            out.push(blocks.clone());
            return;
        }
        for bi in 0..blocks.len() {
            if blocks[bi].len() < max_part {
                blocks[bi].insert(items[i]);
                rec(i + 1, items, blocks, out, max_part, max_parts);
                blocks[bi].remove(&items[i]);
            }
        }
        if blocks.len() < max_parts {
            blocks.push(vset([items[i]]));
            rec(i + 1, items, blocks, out, max_part, max_parts);
            blocks.pop();
        }
    }
    rec(0, items, &mut blocks, &mut out, max_part, max_parts);
    out.sort_by_key(|p| std::cmp::Reverse(p.len()));
    out
}

/// Pre-branching: enumerate instances so that any solution of any of them
/// lifts to a torso tree decomposition of g covering w, and if one exists at
/// least one emitted instance is valid. Emission is streamed through `f`.
pub fn prebranch_for_each<R>(
    g: &Graph,
    w: &VertexSet,
    k: usize,
    ctx: &mut SearchCtx,
    f: &mut impl FnMut(&StwInstance, &Recipe, &mut SearchCtx) -> ControlFlow<R>,
) -> Option<R> {
    let original = Rc::new(Original { g: g.clone(), w: w.clone() });
    let items: Vec<Vertex> = w.iter().copied().collect();
    for parts in set_partitions(&items, k + 1, items.len()) {
        let mut merged = g.clone();
        for p in &parts {
            merged = merged.clique_union(p);
        }
        let cliques: BTreeSet<VertexSet> = parts.iter().cloned().collect();
        let tc = w
            .iter()
            .map(|&v| (v, parts.iter().find(|p| p.contains(&v)).unwrap().clone()))
            .collect();
        let base = PstwInstance::new(merged, cliques.clone(), k).expect("parts are cliques");
        let inst = StwInstance { base, tc, q: 0, original: Rc::clone(&original) };
        let unprocessed = cliques;
        let mut recipe = Recipe::new();
        if let ControlFlow::Break(r) = phase2(&inst, unprocessed, &mut recipe, ctx, f) {
            return Some(r);
        }
    }
    None
}

fn phase2<R>(
    inst: &StwInstance,
    unprocessed: BTreeSet<VertexSet>,
    recipe: &mut Recipe,
    ctx: &mut SearchCtx,
    f: &mut impl FnMut(&StwInstance, &Recipe, &mut SearchCtx) -> ControlFlow<R>,
) -> ControlFlow<R> {
    if !ctx.tick() {
        // budget: let the visitor observe the exhausted context
        return f(inst, recipe, ctx);
    }
    let Some(wi) = unprocessed.iter().next().cloned() else {
        return f(inst, recipe, ctx);
    };
    let mut rest = unprocessed.clone();
    rest.remove(&wi);
    // branch: no degenerate internal separation strands this clique
    phase2(inst, rest.clone(), recipe, ctx, f)?;
    // branch: guess the important separator behind which it collapses
    let budget = (inst.k() + 1).saturating_sub(inst.ctc(&wi));
    if inst.k() + 1 < inst.ctc(&wi) {
        return ControlFlow::Continue(());
    }
    let others = inst.base.others(&wi);
    let seps = impsep::enumerate_important(inst.g(), &wi, &others, budget);
    for s in seps {
        let a = inst.g().reach(&wi, &s);
        let b = set_diff(&set_diff(&inst.g().vertex_set(), &a), &s);
        let child = match inst.restrict_ext(&b, &s) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let child_unprocessed: BTreeSet<VertexSet> =
            rest.iter().filter(|u| child.base.cliques.contains(*u)).cloned().collect();
        recipe.push(RecipeStep { clique: wi.clone(), separator: s });
        phase2(&child, child_unprocessed, recipe, ctx, f)?;
        recipe.pop();
    }
    ControlFlow::Continue(())
}

/// Lift a solution of a pre-branched instance back to the input graph by
/// re-attaching the recorded clique bags.
pub fn lift(mut sol: TorsoTreeDecomposition, recipe: &Recipe) -> Result<TorsoTreeDecomposition> {
    for step in recipe.iter().rev() {
        let bag = set_union(&step.clique, &step.separator);
        let single = TorsoTreeDecomposition::new(
            bag.clone(),
            crate::treedec::TreeDecomposition::single_bag(bag),
        );
        // the new bag hangs next to a bag containing the separator
        let td = crate::treedec::TreeDecomposition::join_on(&sol.td, &single.td, &step.separator)
            .map_err(|_| Error::NoBagContains(step.separator.iter().copied().collect()))?;
        sol = TorsoTreeDecomposition::new(set_union(&sol.x, &single.x), td);
    }
    Ok(sol)
}

/// Full Subset Treewidth solver: |w| = k+2; returns a torso tree
/// decomposition of width at most k covering w, or NoSolution meaning no such
/// decomposition exists (hence tw(g) > k).
pub fn solve_stw(g: &Graph, w: &VertexSet, k: usize, ctx: &mut SearchCtx) -> Outcome {
    assert_eq!(w.len(), k + 2, "subset treewidth takes |w| = k+2");
    let result = prebranch_for_each(g, w, k, ctx, &mut |inst, recipe, ctx| {
        if ctx.budget_hit {
            return ControlFlow::Break(Outcome::Budget);
        }
        match solve_valid(inst, ctx) {
            Verdict::Solution(sol) => {
                let lifted = lift(sol, recipe).expect("recipe lifts");
                ControlFlow::Break(Outcome::Solution(lifted))
            }
            Verdict::Invalid => ControlFlow::Continue(()),
            Verdict::Budget => ControlFlow::Break(Outcome::Budget),
        }
    });
    match result {
        Some(Outcome::Solution(sol)) => {
            if ctx.opts.debug_checks {
                assert!(sol.covers(w));
                assert!(sol.width() <= k as i64);
                let rep = sol.validate(g);
                assert!(rep.is_valid(), "lifted solution invalid: {:?}", rep.first());
            }
            Outcome::Solution(sol)
        }
        Some(other) => other,
        None => {
            if ctx.budget_hit {
                Outcome::Budget
            } else {
                Outcome::NoSolution
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{complete, cycle, grid, path_graph};
    use crate::search::{SearchCtx, SolveOptions};

    fn ctx() -> SearchCtx {
        SearchCtx::new(SolveOptions { debug_checks: true }, None)
    }

    #[test]
    fn partitions_order_and_bounds() {
        let parts = set_partitions(&[1, 2, 3], 2, 3);
        // singletons first
        assert_eq!(parts[0].len(), 3);
        // no part exceeds the cap: {1,2,3} never appears
        assert!(parts.iter().all(|p| p.iter().all(|b| b.len() <= 2)));
        assert_eq!(parts.len(), 4); // 5 partitions of a 3-set minus the whole set
    }

    #[test]
    fn degenerate_separation_formula() {
        let g = path_graph(4);
        let w = vset([1, 2, 4]);
        let original = Rc::new(Original { g: g.clone(), w: w.clone() });
        let cliques: BTreeSet<VertexSet> = [vset([1]), vset([2]), vset([4])].into();
        let base = PstwInstance::new(g.clone(), cliques, 1).unwrap();
        let tc = w.iter().map(|&v| (v, vset([v]))).collect();
        let inst = StwInstance { base, tc, q: 0, original };
        let sep = Separation { a: vset([1]), s: vset([2]), b: vset([3, 4]) };
        // |S| + ctc({1}) = 1 + 1 <= k+1 = 2
        assert!(inst.is_degenerate(&sep));
        let sep2 = Separation { a: vset([1, 2]), s: vset([3]), b: vset([4]) };
        // 1 + 2 > 2
        assert!(!inst.is_degenerate(&sep2));
    }

    #[test]
    fn solve_stw_grid() {
        let g = grid(3, 3);
        let w = vset([1, 3, 5, 7, 9]);
        let sol = solve_stw(&g, &w, 3, &mut ctx()).solution().expect("grid has width 3");
        assert!(sol.covers(&w));
        assert!(sol.width() <= 3);
        assert!(sol.validate(&g).is_valid());
    }

    #[test]
    fn solve_stw_k5_rejects() {
        let g = complete(5);
        let w = g.vertex_set();
        assert!(matches!(solve_stw(&g, &w, 3, &mut ctx()), Outcome::NoSolution));
    }

    #[test]
    fn solve_stw_path_trivial() {
        let g = path_graph(5);
        let w = vset([1, 3, 5]);
        let sol = solve_stw(&g, &w, 1, &mut ctx()).solution().expect("trees have width 1");
        assert!(sol.covers(&w));
        assert!(sol.width() <= 1);
    }

    #[test]
    fn solve_stw_cycle_family() {
        // C4 needs width 2: at k=1 every pre-branched instance is invalid
        let g = cycle(4);
        let w = vset([1, 2, 4]);
        assert!(matches!(solve_stw(&g, &w, 1, &mut ctx()), Outcome::NoSolution));
        let w = g.vertex_set();
        let sol = solve_stw(&g, &w, 2, &mut ctx()).solution().unwrap();
        assert!(sol.covers(&g.vertex_set()));
    }

    #[test]
    fn prebranch_instances_lift() {
        let g = path_graph(4);
        let w = vset([1, 2, 4]);
        let mut collected = 0usize;
        let mut c = ctx();
        let out: Option<()> = prebranch_for_each(&g, &w, 1, &mut c, &mut |inst, recipe, ctx| {
            collected += 1;
            // solve the instance directly; any solution must lift cleanly
            if let Verdict::Solution(sol) = solve_valid(inst, ctx) {
                let lifted = lift(sol, recipe).unwrap();
                assert!(lifted.covers(&w));
                assert!(lifted.width() <= 1);
                assert!(lifted.validate(&g).is_valid());
            }
            ControlFlow::<()>::Continue(())
        });
        assert!(out.is_none());
        assert!(collected >= 3, "merge enumeration too small: {collected}");
    }

    #[test]
    fn agreement_with_pstw_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for _ in 0..25 {
            let n = rng.gen_range(4..=8);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            let tw = crate::oracle::treewidth_of(&g);
            for k in 1..n.min(5) {
                if k + 2 > n {
                    break;
                }
                let w: VertexSet = g.vertices().take(k + 2).collect();
                let stw_found =
                    matches!(solve_stw(&g, &w, k, &mut ctx()), Outcome::Solution(_));
                let cliques: BTreeSet<VertexSet> = w.iter().map(|&v| vset([v])).collect();
                let pinst = PstwInstance::new(g.clone(), cliques, k).unwrap();
                let pstw_found =
                    matches!(crate::pstw::solve(&pinst, &mut ctx()), Outcome::Solution(_));
                assert_eq!(stw_found, pstw_found, "backends disagree on {g:?} k={k}");
                if tw <= k as i64 {
                    assert!(stw_found, "must find a solution when tw <= k");
                }
            }
        }
    }
}
