use std::time::Instant;
use bubblegraph::oracle;
use bubblegraph::connectivity::{block_cut_tree, spqr_tree};
use bubblegraph::graph::UndirectedView;

fn main() {
    for (i, m) in [500_000usize, 1_000_000].into_iter().enumerate() {
        let n = (2 * m) / 3;
        let g = oracle::gen_random_bidirected(n, m, 999 + (i + 1) as u64).unwrap();
        let view = g.underlying_undirected();
        let bc = block_cut_tree(&view);
        let big = bc.blocks.iter().max_by_key(|b| b.edges.len()).unwrap();
        let mut local: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        let mut nv = 0u32;
        let mut ends = Vec::with_capacity(big.edges.len());
        for &e in &big.edges {
            let edge = g.edge(e);
            let mut id = |v: u32, nv: &mut u32| *local.entry(v).or_insert_with(|| { *nv += 1; *nv - 1 });
            let a = id(edge.a.vertex, &mut nv);
            let b = id(edge.b.vertex, &mut nv);
            ends.push((a, b));
        }
        eprintln!("m={m}: block {} verts {} edges", nv, ends.len());
        let t2 = Instant::now();
        let tree = spqr_tree(&UndirectedView { vertex_count: nv as usize, ends }).unwrap();
        eprintln!("  spqr total {:?} ({} nodes)", t2.elapsed(), tree.nodes.len());
    }
}
