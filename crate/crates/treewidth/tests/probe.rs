// Temporary performance probe; removed once the acceptance suite is tuned.

use treewidth::drivers::{exact, Backend};
use treewidth::io::{generate, GenKind};
use treewidth::oracle;
use treewidth::search::SolveOptions;

#[test]
#[ignore]
fn probe_dense() {
    let opts = SolveOptions { debug_checks: false };
    for seed in 0..3u64 {
        let g = generate(&GenKind::Gnp { n: 10, p: 0.8, seed }).unwrap();
        let tw = oracle::treewidth_of(&g) as usize;
        println!("seed {seed} tw {tw} n {} m {}", g.n(), g.edge_count());
        for (name, backend) in [("stw", Backend::Stw), ("pstw", Backend::PstwSingleton)] {
            for k in [tw.saturating_sub(1), tw] {
                let t0 = std::time::Instant::now();
                let r = exact(&g, k, backend, opts, Some(2_000_000));
                println!("  {name} k={k}: {:?} solved={} ", t0.elapsed(), r.is_solved());
            }
        }
    }
}

#[test]
#[ignore]
fn probe_medium() {
    let opts = SolveOptions { debug_checks: false };
    for (n, p) in [(8usize, 0.6f64), (9, 0.6), (9, 0.8), (10, 0.6)] {
        let g = generate(&GenKind::Gnp { n, p, seed: 1 }).unwrap();
        let tw = oracle::treewidth_of(&g) as usize;
        let t0 = std::time::Instant::now();
        let r = exact(&g, tw.saturating_sub(1), Backend::Stw, opts, Some(2_000_000));
        println!("n={n} p={p} tw={tw}: stw-no {:?} solved={}", t0.elapsed(), r.is_solved());
    }
}

#[test]
#[ignore]
fn probe_nodes() {
    use treewidth::search::SearchCtx;
    use treewidth::stw;
    let g = generate(&GenKind::Gnp { n: 10, p: 0.8, seed: 1 }).unwrap();
    let tw = oracle::treewidth_of(&g) as usize;
    let k = tw - 1;
    let w: treewidth::VertexSet = g.vertices().take(k + 2).collect();
    let mut ctx = SearchCtx::new(SolveOptions { debug_checks: false }, None);
    let t0 = std::time::Instant::now();
    let out = stw::solve_stw(&g, &w, k, &mut ctx);
    println!(
        "single solve_stw n=10 p=0.8 k={k}: {:?}, nodes {}, {:?} per node, solved={}",
        t0.elapsed(),
        ctx.nodes_visited,
        t0.elapsed() / ctx.nodes_visited.max(1) as u32,
        matches!(out, treewidth::pstw::Outcome::Solution(_)),
    );
}
