//! Top-level treewidth drivers: exact decision/search via iterative
//! compression over Subset Treewidth, and the (1+eps)-approximation via
//! clique partitions of the overflowing bag.

use std::collections::{BTreeSet, HashSet};

use crate::graph::{set_union, Graph, Vertex, VertexSet};
use crate::improve;
use crate::pstw::{self, Outcome, PstwInstance};
use crate::search::{SearchCtx, SolveOptions};
use crate::stw;
use crate::treedec::{TorsoTreeDecomposition, TreeDecomposition};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Subset Treewidth recursion (default).
    Stw,
    /// Partitioned Subset Treewidth on the singleton partition of the bag.
    PstwSingleton,
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "stw" => Ok(Backend::Stw),
            "pstw" => Ok(Backend::PstwSingleton),
            other => Err(format!("unknown backend '{other}' (expected stw or pstw)")),
        }
    }
}

/// Rational eps = num/den in (0,1); all width bounds stay in integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::Precondition(format!("eps must be in (0,1], got {num}/{den}")));
        }
        Ok(Ratio { num, den })
    }

    /// floor((1 + eps) * k)
    pub fn widen(&self, k: usize) -> usize {
        ((self.den + self.num) as usize * k) / self.den as usize
    }

    /// ceil(16 / eps) + 1, the part-count cap for bag partitions.
    pub fn part_cap(&self) -> usize {
        ((16 * self.den).div_ceil(self.num)) as usize + 1
    }
}

impl std::str::FromStr for Ratio {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (p, q) = s.split_once('/').ok_or("eps must be a rational p/q")?;
        let num: u64 = p.trim().parse().map_err(|_| "bad numerator")?;
        let den: u64 = q.trim().parse().map_err(|_| "bad denominator")?;
        Ratio::new(num, den).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug)]
pub enum DriverResult {
    Decomposition(TreeDecomposition),
    /// Proven: no decomposition within the requested width exists.
    NoSolution,
    /// The node budget ran out before a decision was reached.
    BudgetExceeded,
}

impl DriverResult {
    pub fn decomposition(self) -> Option<TreeDecomposition> {
        match self {
            DriverResult::Decomposition(td) => Some(td),
            _ => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, DriverResult::Decomposition(_))
    }
}

/// Exact decision: a validated decomposition of width <= k, or proof that
/// tw(g) > k. Vertices are inserted one at a time; whenever the maintained
/// decomposition overflows to width k+1, the backend is asked to cover a
/// largest bag and the improvement engine repairs the overflow.
pub fn exact(g: &Graph, k: usize, backend: Backend, opts: SolveOptions, budget: Option<u64>) -> DriverResult {
    let mut ctx = SearchCtx::new(opts, budget);
    let mut parts = Vec::new();
    for comp in g.components() {
        match compress_component(&g.induced(&comp), k, backend, &mut ctx) {
            DriverResult::Decomposition(td) => parts.push(td),
            other => return other,
        }
    }
    let td = TreeDecomposition::connect_forest(parts);
    if opts.debug_checks {
        let rep = td.validate(g);
        assert!(rep.is_valid(), "driver output invalid: {:?}", rep.first());
        assert!(td.max_bag_size() <= k + 1);
    }
    DriverResult::Decomposition(td)
}

fn compress_component(g: &Graph, k: usize, backend: Backend, ctx: &mut SearchCtx) -> DriverResult {
    let verts: Vec<Vertex> = g.vertices().collect();
    if verts.is_empty() {
        return DriverResult::Decomposition(TreeDecomposition::single_bag(VertexSet::new()));
    }
    let mut prefix = VertexSet::new();
    prefix.insert(verts[0]);
    let mut td = TreeDecomposition::single_bag(prefix.clone());
    for &v in &verts[1..] {
        prefix.insert(v);
        let gp = g.induced(&prefix);
        td = td.with_vertex_everywhere(v).shrink();
        loop {
            if td.max_bag_size() <= k + 1 {
                break;
            }
            debug_assert_eq!(td.max_bag_size(), k + 2);
            let r = (0..td.node_count()).find(|&i| td.bag(i).len() == k + 2).unwrap();
            let w = td.bag(r).clone();
            let cover = match cover_bag(&gp, &w, k, backend, ctx) {
                Ok(c) => c,
                Err(out) => return out,
            };
            let rooted = td.clone().rooted_at(r);
            td = improve::improve(&gp, &rooted, &cover, ctx.opts.debug_checks)
                .expect("improvement applies to backend covers");
        }
    }
    DriverResult::Decomposition(td)
}

fn cover_bag(
    gp: &Graph,
    w: &VertexSet,
    k: usize,
    backend: Backend,
    ctx: &mut SearchCtx,
) -> std::result::Result<TorsoTreeDecomposition, DriverResult> {
    let outcome = match backend {
        Backend::Stw => stw::solve_stw(gp, w, k, ctx),
        Backend::PstwSingleton => {
            let cliques: BTreeSet<VertexSet> =
                w.iter().map(|&v| crate::graph::vset([v])).collect();
            let inst = PstwInstance::new(gp.clone(), cliques, k).expect("singletons are cliques");
            pstw::solve(&inst, ctx)
        }
    };
    match outcome {
        Outcome::Solution(sol) => Ok(sol),
        Outcome::NoSolution => Err(DriverResult::NoSolution),
        Outcome::Budget => Err(DriverResult::BudgetExceeded),
    }
}

/// (1+eps)-approximation: a validated decomposition of width at most
/// floor((1+eps)k), or proof that tw(g) > k. Compression runs at the widened
/// width; overflowing bags are covered through clique partitions solved as
/// Partitioned Subset Treewidth.
pub fn approx(
    g: &Graph,
    k: usize,
    eps: Ratio,
    opts: SolveOptions,
    budget: Option<u64>,
) -> DriverResult {
    let wmax = eps.widen(k);
    let mut ctx = SearchCtx::new(opts, budget);
    let mut parts = Vec::new();
    for comp in g.components() {
        match approx_component(&g.induced(&comp), k, wmax, eps, &mut ctx) {
            DriverResult::Decomposition(td) => parts.push(td),
            other => return other,
        }
    }
    let td = TreeDecomposition::connect_forest(parts);
    if opts.debug_checks {
        let rep = td.validate(g);
        assert!(rep.is_valid(), "approx output invalid: {:?}", rep.first());
        assert!(td.max_bag_size() <= wmax + 1);
    }
    DriverResult::Decomposition(td)
}

fn approx_component(
    g: &Graph,
    k: usize,
    wmax: usize,
    eps: Ratio,
    ctx: &mut SearchCtx,
) -> DriverResult {
    let verts: Vec<Vertex> = g.vertices().collect();
    if verts.is_empty() {
        return DriverResult::Decomposition(TreeDecomposition::single_bag(VertexSet::new()));
    }
    let mut prefix = VertexSet::new();
    prefix.insert(verts[0]);
    let mut td = TreeDecomposition::single_bag(prefix.clone());
    for &v in &verts[1..] {
        prefix.insert(v);
        let gp = g.induced(&prefix);
        td = td.with_vertex_everywhere(v).shrink();
        // cache of partitions proven fruitless for this insertion step
        let mut no_cache: HashSet<(Vec<Vertex>, Vec<Vec<Vertex>>)> = HashSet::new();
        loop {
            if td.max_bag_size() <= wmax + 1 {
                break;
            }
            let r = (0..td.node_count()).find(|&i| td.bag(i).len() == wmax + 2).unwrap();
            let w = td.bag(r).clone();
            assert!(w.len() <= 4 * k + 4, "compression keeps bags within 4k+4");
            let kp = w.len() - 2; // the width the partitions must reach
            let items: Vec<Vertex> = w.iter().copied().collect();
            let cap = eps.part_cap().min(items.len());
            let mut cover: Option<TorsoTreeDecomposition> = None;
            let mut budget_hit = false;
            for partition in stw::set_partitions(&items, kp + 1, cap) {
                let cache_key = (
                    items.clone(),
                    partition.iter().map(|p| p.iter().copied().collect::<Vec<_>>()).collect(),
                );
                if no_cache.contains(&cache_key) {
                    continue;
                }
                let mut merged = gp.clone();
                for p in &partition {
                    merged = merged.clique_union(p);
                }
                let cliques: BTreeSet<VertexSet> = partition.iter().cloned().collect();
                let inst = PstwInstance::new(merged, cliques, kp).expect("parts bounded");
                match pstw::solve(&inst, ctx) {
                    Outcome::Solution(sol) => {
                        cover = Some(sol);
                        break;
                    }
                    Outcome::NoSolution => {
                        no_cache.insert(cache_key);
                    }
                    Outcome::Budget => {
                        budget_hit = true;
                        break;
                    }
                }
            }
            if budget_hit {
                return DriverResult::BudgetExceeded;
            }
            let Some(cover) = cover else {
                // no partition of the bag works: tw(gp) > k
                return DriverResult::NoSolution;
            };
            let rooted = td.clone().rooted_at(r);
            td = improve::improve(&gp, &rooted, &cover, ctx.opts.debug_checks)
                .expect("improvement applies to partition covers");
        }
    }
    DriverResult::Decomposition(td)
}

#[derive(Clone, Copy, Debug)]
pub enum Mode {
    Exact,
    Approx(Ratio),
}

#[derive(Clone, Debug)]
pub enum TwOutcome {
    Computed { width: i64, td: TreeDecomposition },
    BudgetExceeded,
}

/// Increment k until the chosen driver succeeds. Exact mode returns the
/// treewidth; approx mode a width within (1+eps) of it. The search starts at
/// the degeneracy lower bound, which never changes the outcome.
pub fn treewidth(g: &Graph, mode: Mode, opts: SolveOptions, budget: Option<u64>) -> TwOutcome {
    if g.n() == 0 {
        return TwOutcome::Computed { width: -1, td: TreeDecomposition::single_bag(VertexSet::new()) };
    }
    let mut k = g.degeneracy();
    loop {
        let result = match mode {
            Mode::Exact => exact(g, k, Backend::Stw, opts, budget),
            Mode::Approx(eps) => approx(g, k, eps, opts, budget),
        };
        match result {
            DriverResult::Decomposition(td) => {
                return TwOutcome::Computed { width: td.width(), td };
            }
            DriverResult::NoSolution => k += 1,
            DriverResult::BudgetExceeded => return TwOutcome::BudgetExceeded,
        }
    }
}

/// Verifier for the bag-partition argument: processes a nice decomposition
/// bottom-up, cutting off a part of w once enough of its forget nodes have
/// accumulated, and checks that making the parts cliques keeps the width
/// within k + eps*k. Returns the partition and the widened decomposition.
pub fn partition_exists_check(
    g: &Graph,
    td: &TreeDecomposition,
    w: &VertexSet,
    eps: Ratio,
) -> (Vec<VertexSet>, TreeDecomposition) {
    let k = td.max_bag_size().saturating_sub(1);
    let nice = td.nice_form();
    let root = nice.root().unwrap();
    let parents = nice.parents().unwrap();
    let fnodes = nice.forget_nodes().unwrap();

    // post-order over the nice tree
    let mut order = Vec::with_capacity(nice.node_count());
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        order.push(u);
        for &c in nice.node_neighbors(u) {
            if parents[c] == Some(u) {
                stack.push(c);
            }
        }
    }
    order.reverse();

    let mut removed = vec![false; nice.node_count()];
    let mut parts: Vec<VertexSet> = Vec::new();
    let mut new_bags: Vec<VertexSet> = (0..nice.node_count()).map(|i| nice.bag(i).clone()).collect();
    for &t in &order {
        // D: descendants of t reachable without crossing removed nodes
        let mut d = vec![t];
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            for &c in nice.node_neighbors(u) {
                if parents[c] == Some(u) && !removed[c] {
                    d.push(c);
                    stack.push(c);
                }
            }
        }
        let wforget: VertexSet =
            w.iter().copied().filter(|v| d.contains(&fnodes[v]) ).collect();
        // threshold: |W-forget nodes in D| >= eps*k/2, i.e. 2*den*count >= num*k
        let trigger =
            t == root || 2 * eps.den as usize * wforget.len() >= eps.num as usize * k;
        if !trigger {
            continue;
        }
        if !wforget.is_empty() {
            for &u in &d {
                new_bags[u] = set_union(&new_bags[u], &wforget);
            }
            parts.push(wforget);
        }
        for u in d {
            removed[u] = true;
        }
    }

    // at most one part (the root's) may fall short of eps*k/2 forget nodes,
    // which caps the part count at |w|/(eps*k/2) + 1
    let small_parts = parts
        .iter()
        .filter(|p| 2 * eps.den as usize * p.len() < eps.num as usize * k)
        .count();
    assert!(small_parts <= 1, "only the root part may be small");
    let widened =
        TreeDecomposition::from_parts(new_bags, nice.tree_edges()).expect("tree unchanged");
    // width <= k + eps*k, checked in integers: den*(width) <= den*k + num*k
    assert!(
        eps.den as usize * (widened.max_bag_size().saturating_sub(1))
            <= eps.den as usize * k + eps.num as usize * k,
        "widened decomposition exceeds k + eps*k"
    );
    let mut gw = g.clone();
    for p in &parts {
        gw = gw.clique_union(p);
    }
    let rep = widened.validate(&gw);
    assert!(rep.is_valid(), "widened decomposition invalid: {:?}", rep.first());
    let mut seen = VertexSet::new();
    for p in &parts {
        for &v in p {
            assert!(seen.insert(v), "parts overlap at {v}");
        }
    }
    assert_eq!(seen, *w, "parts must partition w");
    (parts, widened)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;
    use crate::io::{complete, cycle, grid, path_graph};
    use crate::oracle;

    fn opts() -> SolveOptions {
        SolveOptions { debug_checks: true }
    }

    #[test]
    fn exact_trees() {
        let mut tree = Graph::with_vertices(1..=6);
        for (u, v) in [(1, 2), (2, 3), (2, 4), (4, 5), (1, 6)] {
            tree.add_edge(u, v);
        }
        let td = exact(&tree, 1, Backend::Stw, opts(), None).decomposition().unwrap();
        assert!(td.validate(&tree).is_valid());
        assert!(td.width() <= 1);
    }

    #[test]
    fn exact_complete_graphs() {
        let k5 = complete(5);
        assert!(matches!(exact(&k5, 3, Backend::Stw, opts(), None), DriverResult::NoSolution));
        let td = exact(&k5, 4, Backend::Stw, opts(), None).decomposition().unwrap();
        assert_eq!(td.width(), 4);
    }

    #[test]
    fn exact_grid() {
        let g = grid(3, 3);
        assert!(matches!(exact(&g, 2, Backend::Stw, opts(), None), DriverResult::NoSolution));
        let td = exact(&g, 3, Backend::Stw, opts(), None).decomposition().unwrap();
        assert!(td.validate(&g).is_valid());
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn exact_pstw_backend_agrees() {
        for (g, k, yes) in [
            (cycle(5), 1, false),
            (cycle(5), 2, true),
            (grid(3, 3), 2, false),
            (grid(3, 3), 3, true),
            (complete(4), 2, false),
        ] {
            let a = exact(&g, k, Backend::Stw, opts(), None).is_solved();
            let b = exact(&g, k, Backend::PstwSingleton, opts(), None).is_solved();
            assert_eq!(a, b);
            assert_eq!(a, yes);
        }
    }

    #[test]
    fn treewidth_basics() {
        let TwOutcome::Computed { width, td } =
            treewidth(&cycle(4), Mode::Exact, opts(), None)
        else {
            panic!("no budget set")
        };
        assert_eq!(width, 2);
        assert!(td.validate(&cycle(4)).is_valid());

        let TwOutcome::Computed { width, .. } =
            treewidth(&path_graph(4), Mode::Exact, opts(), None)
        else {
            panic!()
        };
        assert_eq!(width, 1);

        let empty = Graph::new();
        let TwOutcome::Computed { width, td } = treewidth(&empty, Mode::Exact, opts(), None)
        else {
            panic!()
        };
        assert_eq!(width, -1);
        assert_eq!(td.node_count(), 1);
    }

    #[test]
    fn approx_contract_small() {
        let g = grid(3, 3);
        let eps = Ratio::new(1, 2).unwrap();
        let td = approx(&g, 3, eps, opts(), None).decomposition().unwrap();
        assert!(td.validate(&g).is_valid());
        assert!(td.width() <= eps.widen(3) as i64);

        // K5 at k=3: floor(1.25*3)=3 < 4 = tw, must refuse
        let k5 = complete(5);
        let eps = Ratio::new(1, 4).unwrap();
        assert!(matches!(approx(&k5, 3, eps, opts(), None), DriverResult::NoSolution));

        // trees pass at k=1 for any eps
        let p = path_graph(6);
        let td = approx(&p, 1, Ratio::new(1, 2).unwrap(), opts(), None).decomposition().unwrap();
        assert!(td.width() <= 1);
    }

    #[test]
    fn approx_monotone_against_oracle() {
        let g = cycle(6);
        let tw = oracle::treewidth_of(&g) as usize;
        for eps in [Ratio::new(1, 4).unwrap(), Ratio::new(1, 2).unwrap(), Ratio::new(1, 1).unwrap()] {
            let td = approx(&g, tw, eps, opts(), None).decomposition().unwrap();
            assert!(td.width() <= eps.widen(tw) as i64);
        }
    }

    #[test]
    fn exact_monotone_in_k() {
        let g = grid(3, 3);
        let mut prev = false;
        for k in 0..=4 {
            let now = exact(&g, k, Backend::Stw, opts(), None).is_solved();
            assert!(!prev || now, "success must be monotone in k");
            prev = now;
        }
    }

    #[test]
    fn partition_check_cases() {
        let g = grid(3, 3);
        let (tw, order) = oracle::exact_tw(&g).unwrap();
        let td = oracle::td_from_elimination(&g, &order).unwrap();
        assert_eq!(td.width(), tw);
        let w: VertexSet = g.vertices().take(5).collect();
        // eps = 1: threshold k/2 forget vertices per block
        let (parts, _) = partition_exists_check(&g, &td, &w, Ratio::new(1, 1).unwrap());
        assert!(parts.len() <= 17);
    }

    #[test]
    fn partition_check_single_bag_and_small_eps() {
        let g = complete(4);
        let td = TreeDecomposition::single_bag(g.vertex_set());
        let w = vset([1, 2, 3]);
        // eps < 1/k: the construction degenerates to singleton parts
        let eps = Ratio::new(1, 100).unwrap();
        let (parts, _) = partition_exists_check(&g, &td, &w, eps);
        assert!(parts.iter().all(|p| p.len() == 1));
        assert_eq!(parts.len(), 3);
    }

    #[test]
    fn budget_propagates() {
        let g = grid(3, 3);
        assert!(matches!(
            exact(&g, 3, Backend::Stw, SolveOptions { debug_checks: false }, Some(3)),
            DriverResult::BudgetExceeded
        ));
    }
}
