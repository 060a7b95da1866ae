//! Brute-force ground truth, deliberately independent of the solver stack:
//! exact treewidth by subset dynamic programming over elimination prefixes,
//! a definition-level enumerator for important separators, and the fill-in
//! decomposition builder. Shares only the Graph type with the rest.

use std::collections::BTreeMap;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::treedec::TreeDecomposition;
use crate::{Error, Result};

pub const EXACT_TW_CAP: usize = 20;
pub const IMPORTANT_CAP: usize = 15;

/// Exact treewidth with a witnessing elimination order.
/// TW(S) = min over v in S of max(TW(S \ v), q(S \ v, v)), TW(empty) = -1,
/// where q counts the neighbors of v's component within the prefix.
pub fn exact_tw(g: &Graph) -> Result<(i64, Vec<Vertex>)> {
    let verts: Vec<Vertex> = g.vertices().collect();
    let n = verts.len();
    if n > EXACT_TW_CAP {
        return Err(Error::SizeCap(n, EXACT_TW_CAP));
    }
    if n == 0 {
        return Ok((-1, Vec::new()));
    }
    let idx: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbr: Vec<u32> = verts
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << idx[&u]))
        .collect();

    // q(prefix, v): size of N(component of v in prefix ∪ {v}) outside it
    let q = |prefix: u32, v: usize| -> u32 {
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        loop {
            let mut grow = 0u32;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                grow |= nbr[i] & prefix & !comp;
            }
            if grow == 0 {
                break;
            }
            comp |= grow;
            frontier = grow;
        }
        let mut boundary = 0u32;
        let mut c = comp;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            c &= c - 1;
            boundary |= nbr[i] & !comp & !prefix;
        }
        boundary.count_ones()
    };

    // tw1[mask] = treewidth of eliminating exactly mask first, plus one
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut tw1 = vec![0u8; (full as usize) + 1];
    for mask in 1u32..=full {
        let mut best = u8::MAX;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let rest = mask & !(1 << i);
            let cand = tw1[rest as usize].max((q(rest, i) + 1) as u8);
            best = best.min(cand);
        }
        tw1[mask as usize] = best;
    }
    let width = tw1[full as usize] as i64 - 1;

    // reconstruct: repeatedly pick a vertex achieving the optimum
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    while mask != 0 {
        let mut m = mask;
        let mut chosen = None;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let rest = mask & !(1 << i);
            let cand = tw1[rest as usize].max((q(rest, i) + 1) as u8);
            if cand == tw1[mask as usize] {
                chosen = Some(i);
                break;
            }
        }
        let i = chosen.expect("dp is consistent");
        order.push(verts[i]);
        mask &= !(1 << i);
    }
    order.reverse();
    Ok((width, order))
}

pub fn treewidth_of(g: &Graph) -> i64 {
    exact_tw(g).expect("graph within oracle cap").0
}

/// Standard fill-in construction: eliminate in order, bag of v is v plus the
/// current neighbors of v.
pub fn td_from_elimination(g: &Graph, order: &[Vertex]) -> Result<TreeDecomposition> {
    let vs = g.vertex_set();
    let given: VertexSet = order.iter().copied().collect();
    if given != vs || given.len() != order.len() {
        return Err(Error::Precondition("order is not a permutation of V(G)".into()));
    }
    if order.is_empty() {
        return Ok(TreeDecomposition::single_bag(VertexSet::new()));
    }
    let mut work = g.clone();
    let mut bags: Vec<VertexSet> = Vec::with_capacity(order.len());
    let mut pos: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut parent_vertex: Vec<Option<Vertex>> = Vec::with_capacity(order.len());
    for (i, &v) in order.iter().enumerate() {
        pos.insert(v, i);
        let nb = work.neighbors(v).clone();
        let mut bag = nb.clone();
        bag.insert(v);
        bags.push(bag);
        // earliest-eliminated current neighbor becomes the tree parent
        parent_vertex.push(nb.iter().copied().min_by_key(|u| {
            order.iter().position(|w| w == u).unwrap()
        }));
        let nbv: Vec<Vertex> = nb.iter().copied().collect();
        for a in 0..nbv.len() {
            for b in a + 1..nbv.len() {
                work.add_edge(nbv[a], nbv[b]);
            }
        }
        work = work.without(&VertexSet::from([v]));
    }
    let mut edges = Vec::new();
    for (i, pv) in parent_vertex.iter().enumerate() {
        if let Some(pv) = pv {
            edges.push((i, pos[pv]));
        }
    }
    // link components of the elimination forest
    let mut td = TreeDecomposition::from_parts(bags.clone(), edges.clone());
    if td.is_err() {
        // disconnected: chain the roots together
        let mut have_parent = vec![false; bags.len()];
        for &(i, _) in &edges {
            have_parent[i] = true;
        }
        let roots: Vec<usize> = (0..bags.len()).filter(|&i| !have_parent[i]).collect();
        for w in roots.windows(2) {
            edges.push((w[0], w[1]));
        }
        td = TreeDecomposition::from_parts(bags, edges);
    }
    let td = td?;
    debug_assert!(td.validate(g).is_valid());
    Ok(td)
}

/// Definition-level enumeration of all important (a,b)-separators of size at
/// most k: minimal separators with no dominating separator of at most the
/// same size and strictly larger reach.
pub fn all_important_bruteforce(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    k: usize,
) -> Result<Vec<VertexSet>> {
    let verts: Vec<Vertex> = g.vertices().collect();
    let n = verts.len();
    if n > IMPORTANT_CAP {
        return Err(Error::SizeCap(n, IMPORTANT_CAP));
    }
    let idx: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbr: Vec<u32> = verts
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << idx[&u]))
        .collect();
    let amask: u32 = a.iter().filter(|v| idx.contains_key(v)).fold(0, |m, v| m | 1 << idx[v]);
    let bmask: u32 = b.iter().filter(|v| idx.contains_key(v)).fold(0, |m, v| m | 1 << idx[v]);

    // reach(s) = vertices of G \ s reachable from a \ s
    let reach = |smask: u32| -> u32 {
        let mut r = amask & !smask;
        loop {
            let mut grow = 0u32;
            let mut f = r;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                grow |= nbr[i] & !smask & !r;
            }
            if grow == 0 {
                return r;
            }
            r |= grow;
        }
    };
    let is_sep = |smask: u32| -> bool { reach(smask) & bmask & !smask == 0 };

    let total: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // precompute reach for every subset (n <= 15)
    let mut reach_tab = vec![0u32; total as usize + 1];
    let mut sep_tab = vec![false; total as usize + 1];
    for s in 0..=total {
        let r = reach(s);
        reach_tab[s as usize] = r;
        sep_tab[s as usize] = r & bmask & !s == 0;
    }

    let mut out = Vec::new();
    for s in 0..=total {
        if (s.count_ones() as usize) > k || !sep_tab[s as usize] {
            continue;
        }
        // minimal: every one-vertex removal breaks separation
        let mut minimal = true;
        let mut m = s;
        while m != 0 {
            let i = m.trailing_zeros();
            m &= m - 1;
            if sep_tab[(s & !(1 << i)) as usize] {
                minimal = false;
                break;
            }
        }
        if !minimal {
            continue;
        }
        // dominated: any separator of at most the same size with strictly
        // larger reach?
        let r = reach_tab[s as usize];
        let mut dominated = false;
        for s2 in 0..=total {
            if s2.count_ones() > s.count_ones() || !sep_tab[s2 as usize] {
                continue;
            }
            let r2 = reach_tab[s2 as usize];
            if r2 & r == r && r2 != r {
                dominated = true;
                break;
            }
        }
        if !dominated {
            let set: VertexSet = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| s >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            out.push(set);
        }
    }
    let _ = is_sep;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;
    use crate::io::{complete, cycle, generate, grid, path_graph, GenKind};

    #[test]
    fn complete_graphs() {
        for n in 1..=6 {
            assert_eq!(treewidth_of(&complete(n)), n as i64 - 1);
        }
    }

    #[test]
    fn forests_have_width_one() {
        assert_eq!(treewidth_of(&path_graph(6)), 1);
        let mut star = Graph::with_vertices(1..=5);
        for v in 2..=5 {
            star.add_edge(1, v);
        }
        assert_eq!(treewidth_of(&star), 1);
        let lone = Graph::with_vertices(1..=3);
        assert_eq!(treewidth_of(&lone), 0);
    }

    #[test]
    fn cycles_and_grid() {
        for n in 3..=8 {
            assert_eq!(treewidth_of(&cycle(n)), 2);
        }
        assert_eq!(treewidth_of(&grid(3, 3)), 3);
    }

    #[test]
    fn ktree_width() {
        let g = generate(&GenKind::Ktree { n: 8, k: 3, seed: 1 }).unwrap();
        assert_eq!(treewidth_of(&g), 3);
    }

    #[test]
    fn agrees_with_exhaustive_orderings() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let n = rng.gen_range(1..=6);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.45) {
                        g.add_edge(u, v);
                    }
                }
            }
            let (w, order) = exact_tw(&g).unwrap();
            // every ordering yields a valid decomposition of width >= tw
            let mut best = i64::MAX;
            let mut perm: Vec<Vertex> = g.vertices().collect();
            permute_all(&mut perm, 0, &mut |p| {
                let td = td_from_elimination(&g, p).unwrap();
                best = best.min(td.width());
            });
            assert_eq!(w, best, "dp disagrees with exhaustive orderings on {g:?}");
            let td = td_from_elimination(&g, &order).unwrap();
            assert_eq!(td.width(), w);
            assert!(td.validate(&g).is_valid());
        }
    }

    fn permute_all(xs: &mut Vec<Vertex>, i: usize, f: &mut impl FnMut(&[Vertex])) {
        if i == xs.len() {
            f(xs);
            return;
        }
        for j in i..xs.len() {
            xs.swap(i, j);
            permute_all(xs, i + 1, f);
            xs.swap(i, j);
        }
    }

    #[test]
    fn td_from_elimination_cases() {
        let k3 = complete(3);
        let td = td_from_elimination(&k3, &[1, 2, 3]).unwrap();
        assert_eq!(td.width(), 2);

        let p4 = path_graph(4);
        let td = td_from_elimination(&p4, &[1, 2, 3, 4]).unwrap();
        assert_eq!(td.width(), 1);
        assert!(td.validate(&p4).is_valid());

        let mut star = Graph::with_vertices(1..=4);
        for v in 2..=4 {
            star.add_edge(1, v);
        }
        let td = td_from_elimination(&star, &[4, 3, 2, 1]).unwrap();
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn bruteforce_importants_basics() {
        let p4 = path_graph(4);
        // {4} has maximal reach among size-1 separators; {3} is dominated by it
        let imps = all_important_bruteforce(&p4, &vset([1]), &vset([4]), 1).unwrap();
        assert_eq!(imps, vec![vset([4])]);

        let c4 = cycle(4);
        let imps = all_important_bruteforce(&c4, &vset([1]), &vset([3]), 2).unwrap();
        assert_eq!(imps, vec![vset([3])]);

        // b unreachable: the empty separator is the single important one
        let mut g = path_graph(2);
        g.add_vertex(9);
        let imps = all_important_bruteforce(&g, &vset([1]), &vset([9]), 2).unwrap();
        assert_eq!(imps, vec![vset([])]);

        // k = 0 with b reachable: nothing
        let imps = all_important_bruteforce(&p4, &vset([1]), &vset([4]), 0).unwrap();
        assert!(imps.is_empty());
    }
}
