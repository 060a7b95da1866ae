//! PACE-format graph and decomposition files, plus instance generators.
//!
//! Graph files: comment lines start with `c`, one header `p tw <n> <m>`,
//! then m edge lines `<u> <v>` (1-based). Decomposition files: header
//! `s td <bags> <width+1> <n>`, bag lines `b <i> <v...>`, then tree edges.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::treedec::TreeDecomposition;
use crate::{Error, Result};

pub fn parse_gr(text: &str) -> Result<(Graph, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut graph: Option<Graph> = None;
    let mut declared_m = 0usize;
    let mut seen_m = 0usize;
    let mut n = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            if graph.is_some() {
                return Err(Error::Parse { line: lineno, msg: "duplicate header".into() });
            }
            let tok: Vec<&str> = rest.split_whitespace().collect();
            if tok.len() != 3 || tok[0] != "tw" {
                return Err(Error::Parse { line: lineno, msg: "expected 'p tw <n> <m>'".into() });
            }
            n = tok[1]
                .parse()
                .map_err(|_| Error::Parse { line: lineno, msg: "bad vertex count".into() })?;
            declared_m = tok[2]
                .parse()
                .map_err(|_| Error::Parse { line: lineno, msg: "bad edge count".into() })?;
            graph = Some(Graph::with_vertices(1..=n));
            continue;
        }
        let g = graph
            .as_mut()
            .ok_or(Error::Parse { line: lineno, msg: "edge before header".into() })?;
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 2 {
            return Err(Error::Parse { line: lineno, msg: "expected '<u> <v>'".into() });
        }
        let u: usize =
            tok[0].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad endpoint".into() })?;
        let v: usize =
            tok[1].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad endpoint".into() })?;
        if u < 1 || u > n || v < 1 || v > n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("endpoint out of range 1..={n}"),
            });
        }
        if u == v {
            return Err(Error::Parse { line: lineno, msg: "self-loop".into() });
        }
        seen_m += 1;
        if g.has_edge(u, v) {
            warnings.push(format!("line {lineno}: duplicate edge {u} {v} ignored"));
        } else {
            g.add_edge(u, v);
        }
    }
    let g = graph.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    if seen_m != declared_m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {declared_m} edges, file has {seen_m}"),
        });
    }
    Ok((g, warnings))
}

/// Writes the graph as a `.gr` file. If the vertex set is not exactly
/// 1..=n the vertices are renumbered in ascending order.
pub fn emit_gr(g: &Graph) -> String {
    let verts: Vec<Vertex> = g.vertices().collect();
    let contiguous = verts.iter().enumerate().all(|(i, &v)| v == i + 1);
    let remap: BTreeMap<Vertex, usize> = if contiguous {
        verts.iter().map(|&v| (v, v)).collect()
    } else {
        verts.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect()
    };
    let mut out = format!("p tw {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let (a, b) = (remap[&u], remap[&v]);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

pub fn parse_td(text: &str, g: &Graph) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: BTreeMap<usize, VertexSet> = BTreeMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("s ") {
            if header.is_some() {
                return Err(Error::Parse { line: lineno, msg: "duplicate header".into() });
            }
            let tok: Vec<&str> = rest.split_whitespace().collect();
            if tok.len() != 4 || tok[0] != "td" {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected 's td <bags> <width+1> <n>'".into(),
                });
            }
            let b = tok[1].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad bag count".into() })?;
            let w = tok[2].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad width".into() })?;
            let n = tok[3].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad vertex count".into() })?;
            header = Some((b, w, n));
            continue;
        }
        let (nbags, _, nverts) =
            header.ok_or(Error::Parse { line: lineno, msg: "content before header".into() })?;
        if let Some(rest) = line.strip_prefix("b ") {
            let mut it = rest.split_whitespace();
            let id: usize = it
                .next()
                .ok_or(Error::Parse { line: lineno, msg: "bag line without index".into() })?
                .parse()
                .map_err(|_| Error::Parse { line: lineno, msg: "bad bag index".into() })?;
            if id < 1 || id > nbags {
                return Err(Error::Parse { line: lineno, msg: "bag index out of range".into() });
            }
            let mut bag = VertexSet::new();
            for t in it {
                let v: usize =
                    t.parse().map_err(|_| Error::Parse { line: lineno, msg: "bad bag vertex".into() })?;
                if v < 1 || v > nverts {
                    return Err(Error::Parse { line: lineno, msg: "bag vertex out of range".into() });
                }
                bag.insert(v);
            }
            if bags.insert(id, bag).is_some() {
                return Err(Error::Parse { line: lineno, msg: format!("duplicate bag {id}") });
            }
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 2 {
            return Err(Error::Parse { line: lineno, msg: "expected tree edge '<i> <j>'".into() });
        }
        let i: usize =
            tok[0].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad node id".into() })?;
        let j: usize =
            tok[1].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad node id".into() })?;
        if i < 1 || i > nbags || j < 1 || j > nbags {
            return Err(Error::Parse { line: lineno, msg: "tree edge out of range".into() });
        }
        edges.push((i - 1, j - 1));
    }
    let (nbags, width1, _) = header.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    for id in 1..=nbags {
        if !bags.contains_key(&id) {
            return Err(Error::Parse { line: 0, msg: format!("bag {id} missing") });
        }
    }
    let bag_vec: Vec<VertexSet> = (1..=nbags).map(|i| bags[&i].clone()).collect();
    let td = TreeDecomposition::from_parts(bag_vec, edges)
        .map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    if td.max_bag_size() != width1 {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header width+1 = {width1} but largest bag has {}", td.max_bag_size()),
        });
    }
    let rep = td.validate(g);
    if let Some(first) = rep.first() {
        return Err(Error::Validation(first.to_string()));
    }
    Ok(td)
}

pub fn emit_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.node_count(), td.max_bag_size(), n);
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for (u, v) in td.tree_edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenKind {
    Gnp { n: usize, p: f64, seed: u64 },
    Grid { rows: usize, cols: usize },
    Ktree { n: usize, k: usize, seed: u64 },
    Cycle { n: usize },
}

pub fn generate(kind: &GenKind) -> Result<Graph> {
    match *kind {
        GenKind::Gnp { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Precondition("gnp needs p in [0,1]".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v);
                    }
                }
            }
            Ok(g)
        }
        GenKind::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(Error::Precondition("grid needs positive dimensions".into()));
            }
            Ok(grid(rows, cols))
        }
        GenKind::Ktree { n, k, seed } => {
            if n < k + 1 {
                return Err(Error::Precondition("ktree needs n >= k+1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=k + 1 {
                for v in u + 1..=k + 1 {
                    g.add_edge(u, v);
                }
            }
            // all k-subsets of the root clique seed the attachable cliques
            let mut cliques: Vec<Vec<Vertex>> = Vec::new();
            let root: Vec<Vertex> = (1..=k + 1).collect();
            for skip in 0..=k {
                let c: Vec<Vertex> =
                    root.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                cliques.push(c);
            }
            if k == 0 {
                cliques.push(Vec::new());
            }
            for v in k + 2..=n {
                let pick = rng.gen_range(0..cliques.len());
                let base = cliques[pick].clone();
                for &u in &base {
                    g.add_edge(u, v);
                }
                for skip in 0..base.len() {
                    let mut c: Vec<Vertex> = base
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &u)| u)
                        .collect();
                    c.push(v);
                    cliques.push(c);
                }
                if k == 0 {
                    cliques.push(vec![]);
                }
            }
            Ok(g)
        }
        GenKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::Precondition("cycle needs n >= 3".into()));
            }
            Ok(cycle(n))
        }
    }
}

pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut g = Graph::with_vertices(1..=rows * cols);
    let id = |r: usize, c: usize| r * cols + c + 1;
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1));
            }
            if r + 1 < rows {
                g.add_edge(id(r, c), id(r + 1, c));
            }
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let mut g = Graph::with_vertices(1..=n);
    for v in 1..n {
        g.add_edge(v, v + 1);
    }
    g.add_edge(n, 1);
    g
}

pub fn path_graph(n: usize) -> Graph {
    let mut g = Graph::with_vertices(1..=n);
    for v in 1..n {
        g.add_edge(v, v + 1);
    }
    g
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::with_vertices(1..=n);
    for u in 1..=n {
        for v in u + 1..=n {
            g.add_edge(u, v);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;
    use crate::oracle;

    #[test]
    fn parse_gr_basics() {
        let (g, warn) = parse_gr("p tw 2 1\n1 2\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), vec![(1, 2)]);
        assert!(warn.is_empty());

        // comments and CRLF tolerated
        let (g, _) = parse_gr("c hi\r\np tw 3 2\r\n1 2\r\n2 3\r\n").unwrap();
        assert_eq!(g.edge_count(), 2);

        // declared edge count must match
        assert!(parse_gr("p tw 4 5\n1 2\n2 3\n3 4\n1 4\n").is_err());
        // out of range ids
        assert!(parse_gr("p tw 2 1\n1 3\n").is_err());
        // duplicates warn but count
        let (g, warn) = parse_gr("p tw 2 2\n1 2\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(warn.len(), 1);
    }

    #[test]
    fn gr_roundtrip() {
        let g = path_graph(4);
        let text = emit_gr(&g);
        assert_eq!(text, "p tw 4 3\n1 2\n2 3\n3 4\n");
        let (g2, _) = parse_gr(&text).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn gr_roundtrip_fuzz() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..30 {
            let n = rng.gen_range(1..=12);
            let mut g = Graph::with_vertices(1..=n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.3) {
                        g.add_edge(u, v);
                    }
                }
            }
            let (g2, _) = parse_gr(&emit_gr(&g)).unwrap();
            assert_eq!(g, g2);
        }
    }

    #[test]
    fn td_roundtrip() {
        let g = complete(3);
        let td = TreeDecomposition::single_bag(g.vertex_set());
        let text = emit_td(&td, 3);
        let back = parse_td(&text, &g).unwrap();
        assert_eq!(back.bags(), td.bags());

        let p4 = path_graph(4);
        let td = TreeDecomposition::from_parts(
            vec![vset([1, 2]), vset([2, 3]), vset([3, 4])],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        let back = parse_td(&emit_td(&td, 4), &p4).unwrap();
        assert!(back.validate(&p4).is_valid());
    }

    #[test]
    fn td_parse_errors() {
        let g = path_graph(3);
        // cyclic node links
        let text = "s td 3 2 3\nb 1 1 2\nb 2 2 3\nb 3 1 3\n1 2\n2 3\n3 1\n";
        assert!(parse_td(text, &g).is_err());
        // bag index gap
        let text = "s td 2 2 3\nb 1 1 2\n1 2\n";
        assert!(parse_td(text, &g).is_err());
        // fails validation: edge 2-3 missing
        let text = "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n";
        assert!(matches!(parse_td(text, &g), Err(Error::Validation(_))));
    }

    #[test]
    fn generators() {
        let g = generate(&GenKind::Grid { rows: 3, cols: 3 }).unwrap();
        assert_eq!(g, grid(3, 3));
        assert_eq!(g.n(), 9);
        assert_eq!(g.edge_count(), 12);

        let c = generate(&GenKind::Cycle { n: 4 }).unwrap();
        assert_eq!(c, cycle(4));

        let t = generate(&GenKind::Ktree { n: 8, k: 3, seed: 5 }).unwrap();
        assert_eq!(oracle::treewidth_of(&t), 3);

        // determinism
        let a = generate(&GenKind::Gnp { n: 10, p: 0.4, seed: 9 }).unwrap();
        let b = generate(&GenKind::Gnp { n: 10, p: 0.4, seed: 9 }).unwrap();
        assert_eq!(a, b);
    }
}
