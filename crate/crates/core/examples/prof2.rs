use std::time::Instant;
use bubblegraph::oracle;
use bubblegraph::connectivity::{block_cut_tree, spqr_tree, expansion_counts};
use bubblegraph::graph::UndirectedView;

fn main() {
    for (i, m) in [500_000usize, 1_000_000].into_iter().enumerate() {
        let n = (2 * m) / 3;
        let g = oracle::gen_random_bidirected(n, m, 999 + (i + 1) as u64).unwrap();
        let view = g.underlying_undirected();
        let t0 = Instant::now();
        let bc = block_cut_tree(&view);
        println!("m={m}: block-cut {:?}", t0.elapsed());
        // localize + SPQR + counts for the largest block only
        let big = bc.blocks.iter().max_by_key(|b| b.edges.len()).unwrap();
        let t1 = Instant::now();
        let mut local: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        let mut verts = Vec::new();
        let mut ends = Vec::with_capacity(big.edges.len());
        for &e in &big.edges {
            let edge = g.edge(e);
            for x in [edge.a.vertex, edge.b.vertex] {
                local.entry(x).or_insert_with(|| { verts.push(x); verts.len() as u32 - 1 });
            }
            ends.push((local[&edge.a.vertex], local[&edge.b.vertex]));
        }
        println!("  localize (hashmap) {:?} ({} verts, {} edges)", t1.elapsed(), verts.len(), ends.len());
        let t2 = Instant::now();
        let tree = spqr_tree(&UndirectedView { vertex_count: verts.len(), ends: ends.clone() }).unwrap();
        println!("  spqr {:?} ({} nodes, {} tree edges)", t2.elapsed(), tree.nodes.len(), tree.tree_edges.len());
        let t3 = Instant::now();
        let counts = expansion_counts(&tree, verts.len(), |_, _| 0, &ends);
        println!("  counts {:?}", t3.elapsed());
        let _ = counts;
        let t4 = Instant::now();
        let rep = bubblegraph::snarls::find_snarl_representation(&g);
        println!("  snarls total {:?} (size {})", t4.elapsed(), rep.size());
        let t5 = Instant::now();
        let ub = bubblegraph::ultrabubbles::find_ultrabubbles(&g);
        println!("  ultra total {:?} ({})", t5.elapsed(), ub.len());
    }
}
