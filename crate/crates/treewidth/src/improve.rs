//! Decomposition improvement: the pulling construction that moves a linked
//! separator into a bag, the cover refinement it enables, and the engine
//! that turns a covering torso tree decomposition into a strictly better
//! tree decomposition.

use std::collections::BTreeMap;

use crate::graph::{set_diff, set_inter, set_union, Graph, Separation, Vertex, VertexSet};
use crate::treedec::{TorsoTreeDecomposition, TreeDecomposition};
use crate::{Error, Result};

/// Witness that some bag of a torso tree decomposition is not d-linked into
/// the target set: a separator no larger than the bag that is strictly
/// better in size or in total depth weight.
#[derive(Clone, Debug)]
pub struct DLinkWitness {
    pub node: usize,
    pub separator: VertexSet,
}

/// Pull the separator of (A,S,B) into bag r along |S| vertex-disjoint paths
/// inside S ∪ B, shrinking X to (X ∩ A) ∪ S. Bag sizes never grow and S ends
/// up inside the new bag of r.
pub fn pull(
    g: &Graph,
    ttd: &TorsoTreeDecomposition,
    sep: &Separation,
    r: usize,
) -> Result<TorsoTreeDecomposition> {
    sep.check(g)?;
    let sb = set_union(&sep.s, &sep.b);
    let z = set_inter(ttd.td.bag(r), &sb);
    let sub = g.induced(&sb);
    let flow = sub.flow(&sep.s, &z);
    if flow.value != sep.s.len() {
        return Err(Error::Precondition(format!(
            "separator is not linked into bag({r}) ∩ (S ∪ B): flow {} < {}",
            flow.value,
            sep.s.len()
        )));
    }
    // one path per separator vertex
    let mut path_of: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for p in flow.paths {
        let start = *p.first().expect("nonempty path");
        debug_assert!(sep.s.contains(&start));
        path_of.insert(start, p);
    }
    let mut bags = Vec::with_capacity(ttd.td.node_count());
    for i in 0..ttd.td.node_count() {
        let old = ttd.td.bag(i);
        let mut bag = set_diff(old, &sb);
        for (&si, path) in &path_of {
            if path.iter().any(|v| old.contains(v)) {
                bag.insert(si);
            }
        }
        debug_assert!(bag.len() <= old.len());
        bags.push(bag);
    }
    let td = TreeDecomposition::from_parts(bags, ttd.td.tree_edges())?;
    debug_assert!(sep.s.is_subset(td.bag(r)));
    let x = set_union(&set_inter(&ttd.x, &sep.a), &sep.s);
    Ok(TorsoTreeDecomposition::new(x, td))
}

pub fn phi_d(x: &VertexSet, d: &BTreeMap<Vertex, usize>, n: usize, k: usize) -> u64 {
    let dx: u64 = x.iter().map(|v| d.get(v).copied().unwrap_or(0) as u64).sum();
    (x.len() as u64) * (n as u64) * (k as u64 + 1) + dx
}

/// Replace the witnessed bag by a minimum separator towards w and pull,
/// strictly decreasing phi_d while keeping the cover of w and the width.
pub fn refine_cover(
    g: &Graph,
    w: &VertexSet,
    ttd: &TorsoTreeDecomposition,
    d: &BTreeMap<Vertex, usize>,
    witness: &DLinkWitness,
) -> Result<TorsoTreeDecomposition> {
    let t = witness.node;
    if t >= ttd.td.node_count() {
        return Err(Error::Precondition("witness node out of range".into()));
    }
    let bag = ttd.td.bag(t).clone();
    let s0 = &witness.separator;
    let reach_bag = g.reach(&bag, s0);
    if !set_inter(&reach_bag, &set_diff(w, s0)).is_empty() {
        return Err(Error::Precondition("witness separator does not separate bag from w".into()));
    }
    let dsum = |s: &VertexSet| -> u64 { s.iter().map(|v| d.get(v).copied().unwrap_or(0) as u64).sum() };
    let ok = s0.len() < bag.len() || (s0.len() == bag.len() && dsum(s0) < dsum(&bag));
    if !ok {
        return Err(Error::Precondition("witness does not beat the bag in size or weight".into()));
    }
    // a minimum (bag, w)-separator is linked into the bag; if the witness is
    // already minimum it stays, otherwise any minimum cut also witnesses
    let flow = g.flow_value(w, &bag);
    let s = if flow < s0.len() { g.min_separation(w, &bag).s } else { s0.clone() };
    let a = g.reach(w, &s);
    let b = set_diff(&set_diff(&g.vertex_set(), &a), &s);
    let sep = Separation { a, s, b };
    let pulled = pull(g, ttd, &sep, t)?;
    debug_assert!(w.is_subset(&pulled.x));
    let n = g.n();
    let k = (ttd.width().max(0)) as usize;
    assert!(
        phi_d(&pulled.x, d, n, k) < phi_d(&ttd.x, d, n, k),
        "refine_cover must strictly decrease phi_d"
    );
    Ok(pulled)
}

pub enum StepResult {
    Improved(TreeDecomposition),
    Witness(DLinkWitness),
}

/// One improvement round: either assemble a strictly better decomposition of
/// g from the covering torso tree decomposition, or report a d-linkedness
/// witness against one of its bags.
pub fn improve_step(
    g: &Graph,
    td: &TreeDecomposition,
    ttd: &TorsoTreeDecomposition,
    checks: bool,
) -> Result<StepResult> {
    let r = td.root().ok_or_else(|| Error::Precondition("td must be rooted".into()))?;
    let w = td.bag(r).clone();
    let kp1 = td.max_bag_size();
    if w.len() != kp1 {
        return Err(Error::Precondition("root bag must be a largest bag".into()));
    }
    if !ttd.covers(&w) {
        return Err(Error::Precondition("torso decomposition does not cover the root bag".into()));
    }
    if ttd.td.max_bag_size() + 1 > kp1 {
        return Err(Error::Precondition("torso decomposition is not strictly narrower".into()));
    }

    let parents = td.parents()?;
    let fnode = td.forget_nodes()?;
    // strict-descendant test in the rooted td
    let is_strict_descendant = |node: usize, of: usize| -> bool {
        let mut cur = node;
        while let Some(p) = parents[cur] {
            if p == of {
                return true;
            }
            cur = p;
        }
        false
    };

    let ttd_rooted = ttd.td.clone().rooted_at(0);
    let x_depth = ttd_rooted.depths()?;
    let x_fnode = ttd_rooted.forget_nodes()?;

    struct CompPlan {
        nodes: Vec<usize>,
        bags: Vec<VertexSet>,
        attach: usize, // node of the torso decomposition holding N(C)
        root_copy: usize,
    }

    let mut plans: Vec<CompPlan> = Vec::new();
    for comp in g.without(&ttd.x).components() {
        let ncomp = g.neighborhood(&comp);
        // attach at the deepest forget node among N(C)
        let attach = ncomp
            .iter()
            .map(|v| x_fnode[v])
            .max_by_key(|&t| (x_depth[t], t))
            .unwrap_or(0);
        if !ncomp.is_subset(ttd_rooted.bag(attach)) {
            return Err(Error::Precondition(
                "component neighborhood not contained in its attachment bag".into(),
            ));
        }
        let nclosed = set_union(&comp, &ncomp);
        let nodes: Vec<usize> = (0..td.node_count())
            .filter(|&t| !set_inter(td.bag(t), &comp).is_empty())
            .collect();
        let mut bags = Vec::with_capacity(nodes.len());
        for &t in &nodes {
            let tn: VertexSet = ncomp
                .iter()
                .copied()
                .filter(|v| is_strict_descendant(fnode[v], t))
                .collect();
            let bag_c = set_union(&set_inter(td.bag(t), &nclosed), &tn);
            let ok = bag_c.len() < td.bag(t).len() || bag_c == *td.bag(t);
            if !ok {
                let s = set_union(
                    &set_diff(ttd_rooted.bag(attach), &tn),
                    &set_diff(td.bag(t), &nclosed),
                );
                return Ok(StepResult::Witness(DLinkWitness { node: attach, separator: s }));
            }
            bags.push(bag_c);
        }
        // root copy: the component node closest to the td root
        let depth = td.depths()?;
        let root_copy_pos = (0..nodes.len()).min_by_key(|&i| (depth[nodes[i]], nodes[i])).unwrap();
        plans.push(CompPlan { nodes, bags, attach, root_copy: root_copy_pos });
    }

    // assemble: torso decomposition plus one restricted copy per component
    let mut bags: Vec<VertexSet> = ttd.td.bags().to_vec();
    let mut edges: Vec<(usize, usize)> = ttd.td.tree_edges();
    for plan in &plans {
        let offset = bags.len();
        let index_of: BTreeMap<usize, usize> =
            plan.nodes.iter().enumerate().map(|(i, &t)| (t, offset + i)).collect();
        bags.extend(plan.bags.iter().cloned());
        for (i, &t) in plan.nodes.iter().enumerate() {
            for &nb in td.node_neighbors(t) {
                if nb > t {
                    if let Some(&j) = index_of.get(&nb) {
                        edges.push((offset + i, j));
                    }
                }
            }
        }
        edges.push((plan.attach, offset + plan.root_copy));
    }
    let assembled = TreeDecomposition::from_parts(bags, edges)?;
    let improved = assembled.shrink();
    if checks {
        let rep = improved.validate(g);
        assert!(rep.is_valid(), "improved decomposition invalid: {:?}", rep.first());
    }
    assert!(improved.max_bag_size() <= kp1);
    assert!(
        improved.count_bags_of_size(kp1) < td.count_bags_of_size(kp1),
        "improvement must strictly reduce the number of largest bags"
    );
    Ok(StepResult::Improved(improved))
}

/// Loop improvement rounds, refining the cover on each witness, until a
/// strictly better decomposition is produced.
pub fn improve(
    g: &Graph,
    td: &TreeDecomposition,
    ttd: &TorsoTreeDecomposition,
    checks: bool,
) -> Result<TreeDecomposition> {
    let r = td.root().ok_or_else(|| Error::Precondition("td must be rooted".into()))?;
    let w = td.bag(r).clone();
    let d = td.depth_weights()?;
    let n = g.n();
    let k = (td.max_bag_size().max(1) - 1).max(1);
    debug_assert!(d.values().all(|&x| x <= td.node_count()));

    let mut cur = TorsoTreeDecomposition::new(ttd.x.clone(), ttd.td.shrink());
    let bound = phi_d(&cur.x, &d, n, k) + 1;
    let mut last_phi = u64::MAX;
    for _ in 0..bound {
        let phi = phi_d(&cur.x, &d, n, k);
        assert!(phi < last_phi, "phi_d must strictly decrease across refinements");
        last_phi = phi;
        match improve_step(g, td, &cur, checks)? {
            StepResult::Improved(new_td) => return Ok(new_td),
            StepResult::Witness(wit) => {
                cur = refine_cover(g, &w, &cur, &d, &wit)?;
            }
        }
    }
    Err(Error::Precondition("improvement loop exceeded its phi_d bound".into()))
}
