//! Command-line surface: parse a graph, run one finder, print the report
//! lines. Exit codes: 0 success, 1 usage, 2 input format, 3 contract
//! violation.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use bubblegraph::connectivity::{block_cut_tree, spqr_tree};
use bubblegraph::feedback::{
    feedback_arcs_directed, feedback_edges_tipless_bidirected, FeedbackKind, FeedbackResult,
};
use bubblegraph::graph::{BidirectedGraph, DirectedGraph};
use bubblegraph::io as gio;
use bubblegraph::oracle;
use bubblegraph::report::NamedSide;
use bubblegraph::snarls::find_snarl_representation;
use bubblegraph::superbubbles::find_superbubbles;
use bubblegraph::ultrabubbles::find_ultrabubbles;
use bubblegraph::GraphError;

#[derive(Parser)]
#[command(
    name = "bubblegraph",
    version,
    about = "Superbubbles, snarls, and ultrabubbles in linear time"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input file; '-' or absent reads standard input
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Input format; required unless the file extension decides it
    /// (.gfa, .dedges, .bedges)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file; absent writes standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Emit vertex/edge/block/SPQR counts, representation sizes, and wall
    /// time to standard error
    #[arg(long, global = true)]
    stats: bool,

    /// Seed for the generators
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for per-block work; BUBBLEGRAPH_THREADS is the
    /// fallback. Output order does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Gfa,
    #[value(name = "directed-edge-list")]
    DirectedEdgeList,
    #[value(name = "bidirected-edge-list")]
    BidirectedEdgeList,
}

#[derive(Subcommand)]
enum Command {
    /// Find all superbubbles (requires digraphic input)
    Superbubbles,
    /// Compute the linear-size snarl representation
    Snarls {
        /// Stream every encoded pair instead of the representation; output
        /// size may be quadratic in the vertex count
        #[arg(long)]
        expand: bool,
    },
    /// Find all ultrabubbles
    Ultrabubbles,
    /// All arcs whose removal makes the digraph acyclic
    FeedbackArcs,
    /// All edges whose removal makes the tipless bidirected graph acyclic
    FeedbackEdges,
    /// Compare the fast finders against the brute-force oracles (small
    /// inputs only)
    Check,
    /// Emit a seeded test instance in canonical serialization
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Random bidirected graph with n vertices and m edges
    RandomBidirected { n: usize, m: usize },
    /// Random DAG with n vertices and m arcs
    RandomDag { n: usize, m: usize },
    /// Random digraph with n vertices and m arcs
    RandomDigraph { n: usize, m: usize },
    /// m mutually adjacent all-minus vertices
    TipClique { m: usize },
    /// Connected bidirected graph with exactly two tips
    TwoTip { n: usize },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var("BUBBLEGRAPH_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("failed to size the thread pool: {e}");
            std::process::exit(1);
        }
    }
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let start = Instant::now();
    match dispatch(&cli, start) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Graph(e)) => {
            eprintln!("error: {e}");
            match e {
                GraphError::Input { .. } | GraphError::SelfLoop { .. } | GraphError::UnknownVertex { .. } => 2,
                GraphError::NotDigraphic { .. } | GraphError::ContractViolation { .. } => 3,
            }
        }
        Err(CliError::CheckFailed(msg)) => {
            eprintln!("check failed: {msg}");
            1
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

enum CliError {
    Usage(String),
    Graph(GraphError),
    CheckFailed(String),
    Io(std::io::Error),
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Graph(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn dispatch(cli: &Cli, start: Instant) -> Result<(), CliError> {
    match &cli.command {
        Command::Gen { kind } => {
            let text = match *kind {
                GenKind::RandomBidirected { n, m } => {
                    gio::serialize_bidirected(&oracle::gen_random_bidirected(n, m, cli.seed)?)
                }
                GenKind::RandomDag { n, m } => {
                    gio::serialize_directed(&oracle::gen_random_dag(n, m, cli.seed)?)
                }
                GenKind::RandomDigraph { n, m } => {
                    gio::serialize_directed(&oracle::gen_random_digraph(n, m, cli.seed)?)
                }
                GenKind::TipClique { m } => gio::serialize_bidirected(&oracle::gen_tip_clique(m)),
                GenKind::TwoTip { n } => {
                    gio::serialize_bidirected(&oracle::gen_two_tip_connected(n, cli.seed)?)
                }
            };
            write_output(cli, &text)?;
            return Ok(());
        }
        _ => {}
    }

    let graph = read_graph(cli)?;
    let out = match &cli.command {
        Command::Superbubbles => {
            let d = graph.as_directed()?;
            let reports = find_superbubbles(&d);
            if cli.stats {
                emit_stats(&graph, Some(reports.len()), None, start);
            }
            gio::write_superbubbles(&reports)
        }
        Command::Snarls { expand } => {
            let rep = find_snarl_representation(&graph);
            if cli.stats {
                let nv = graph.vertex_count();
                assert!(
                    rep.tip_entries() <= 2 * nv,
                    "tip-list size bound violated: {} > 2*{}",
                    rep.tip_entries(),
                    nv
                );
                emit_stats(&graph, None, Some(&rep), start);
            }
            if *expand {
                let pairs = rep.expand();
                if pairs.len() > graph.vertex_count().max(1) * 8 {
                    eprintln!(
                        "warning: expanded output has {} pairs (quadratic in the worst case)",
                        pairs.len()
                    );
                }
                gio::write_expanded_snarls(&pairs)
            } else {
                gio::write_snarl_representation(&rep)
            }
        }
        Command::Ultrabubbles => {
            let reports = find_ultrabubbles(&graph);
            if cli.stats {
                emit_stats(&graph, Some(reports.len()), None, start);
            }
            gio::write_ultrabubbles(&reports)
        }
        Command::FeedbackArcs => {
            let d = graph.as_directed()?;
            let r = feedback_arcs_directed(&d);
            if cli.stats {
                emit_stats(&graph, Some(r.edges.len()), None, start);
            }
            write_feedback(&r, |e| {
                let edge = d.arcs().iter().find(|a| a.edge == *e).expect("arc id");
                format!("FA: {} {}", d.name(edge.tail), d.name(edge.head))
            })
        }
        Command::FeedbackEdges => {
            let r = feedback_edges_tipless_bidirected(&graph)?;
            if cli.stats {
                emit_stats(&graph, Some(r.edges.len()), None, start);
            }
            write_feedback(&r, |e| {
                let edge = graph.edge(*e);
                format!(
                    "FE: {}{} {}{}",
                    graph.name(edge.a.vertex),
                    edge.a.sign,
                    graph.name(edge.b.vertex),
                    edge.b.sign
                )
            })
        }
        Command::Check => {
            let msg = run_check(&graph)?;
            if cli.stats {
                emit_stats(&graph, None, None, start);
            }
            msg
        }
        Command::Gen { .. } => unreachable!("handled above"),
    };
    write_output(cli, &out)?;
    Ok(())
}

fn write_feedback(r: &FeedbackResult, fmt: impl Fn(&u32) -> String) -> String {
    let kind = match r.kind {
        FeedbackKind::AlreadyAcyclic => "already-acyclic",
        FeedbackKind::SingleSourceOfCycles => "single-source-of-cycles",
        FeedbackKind::MultipleDisjointCycles => "multiple-disjoint-cycles",
    };
    let mut lines: Vec<String> = r.edges.iter().map(fmt).collect();
    lines.sort();
    let mut out = format!("FK: {kind}\n");
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

fn run_check(g: &BidirectedGraph) -> Result<String, CliError> {
    if g.vertex_count() > oracle::ORACLE_VERTEX_LIMIT {
        return Err(CliError::Graph(GraphError::ContractViolation {
            reason: format!(
                "check compares against brute-force oracles and is limited to {} vertices",
                oracle::ORACLE_VERTEX_LIMIT
            ),
        }));
    }
    let mut out = String::new();

    let mut got: Vec<(NamedSide, NamedSide)> = find_snarl_representation(g).expand();
    got.sort();
    let mut want = named_pairs(g, oracle::oracle_snarls(g));
    want.sort();
    if got != want {
        return Err(CliError::CheckFailed(format!(
            "snarls differ: got {got:?}, oracle {want:?}"
        )));
    }
    writeln!(out, "check snarls: OK ({} pairs)", got.len()).unwrap();

    let mut got: Vec<(NamedSide, NamedSide)> =
        find_ultrabubbles(g).into_iter().map(|r| (r.a, r.b)).collect();
    got.sort();
    let mut want = named_pairs(g, oracle::oracle_ultrabubbles(g));
    want.sort();
    if got != want {
        return Err(CliError::CheckFailed(format!(
            "ultrabubbles differ: got {got:?}, oracle {want:?}"
        )));
    }
    writeln!(out, "check ultrabubbles: OK ({} pairs)", got.len()).unwrap();

    if let Ok(d) = g.as_directed() {
        let mut got: Vec<(String, String)> = find_superbubbles(&d)
            .into_iter()
            .map(|r| (r.entry, r.exit))
            .collect();
        got.sort();
        let mut want: Vec<(String, String)> = oracle::oracle_superbubbles(&d)
            .into_iter()
            .map(|(s, t)| (d.name(s).to_string(), d.name(t).to_string()))
            .collect();
        want.sort();
        if got != want {
            return Err(CliError::CheckFailed(format!(
                "superbubbles differ: got {got:?}, oracle {want:?}"
            )));
        }
        writeln!(out, "check superbubbles: OK ({} pairs)", got.len()).unwrap();

        let mut fast = feedback_arcs_directed(&d).edges;
        fast.sort_unstable();
        let mut slow = oracle::oracle_feedback_arcs(&d);
        slow.sort_unstable();
        if fast != slow {
            return Err(CliError::CheckFailed("feedback arcs differ".to_string()));
        }
        writeln!(out, "check feedback-arcs: OK ({} arcs)", fast.len()).unwrap();
    }
    Ok(out)
}

fn named_pairs(
    g: &BidirectedGraph,
    pairs: Vec<(bubblegraph::graph::VertexSide, bubblegraph::graph::VertexSide)>,
) -> Vec<(NamedSide, NamedSide)> {
    pairs
        .into_iter()
        .map(|(a, b)| {
            let an = (g.name(a.vertex).to_string(), a.sign);
            let bn = (g.name(b.vertex).to_string(), b.sign);
            if an <= bn {
                (an, bn)
            } else {
                (bn, an)
            }
        })
        .collect()
}

fn read_graph(cli: &Cli) -> Result<BidirectedGraph, CliError> {
    let text = match &cli.input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let format = resolve_format(cli)?;
    let g = match format {
        Format::Gfa => gio::parse_gfa(&text)?,
        Format::BidirectedEdgeList => gio::parse_bidirected_edge_list(&text)?,
        Format::DirectedEdgeList => {
            let d: DirectedGraph = gio::parse_directed_edge_list(&text)?;
            d.to_bidirected()
        }
    };
    Ok(g)
}

fn resolve_format(cli: &Cli) -> Result<Format, CliError> {
    if let Some(f) = cli.format {
        return Ok(f);
    }
    // extension only, never content sniffing
    if let Some(p) = &cli.input {
        match p.extension().and_then(|e| e.to_str()) {
            Some("gfa") => return Ok(Format::Gfa),
            Some("dedges") => return Ok(Format::DirectedEdgeList),
            Some("bedges") => return Ok(Format::BidirectedEdgeList),
            _ => {}
        }
    }
    Err(CliError::Usage(
        "cannot determine input format; pass --format or use a .gfa/.dedges/.bedges file".into(),
    ))
}

fn emit_stats(
    g: &BidirectedGraph,
    reports: Option<usize>,
    rep: Option<&bubblegraph::report::SnarlRepresentation>,
    start: Instant,
) {
    let view = g.underlying_undirected();
    let bc = block_cut_tree(&view);
    let mut spqr_nodes = 0usize;
    for block in &bc.blocks {
        if block.vertices.len() < 3 {
            continue;
        }
        let mut local: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        let mut ends = Vec::with_capacity(block.edges.len());
        for &e in &block.edges {
            let edge = g.edge(e);
            let mut id = |v: u32| {
                let next = local.len() as u32;
                *local.entry(v).or_insert(next)
            };
            ends.push((id(edge.a.vertex), id(edge.b.vertex)));
        }
        if let Ok(tree) =
            spqr_tree(&bubblegraph::graph::UndirectedView { vertex_count: local.len(), ends })
        {
            spqr_nodes += tree.nodes.len();
        }
    }
    eprintln!("# vertices: {}", g.vertex_count());
    eprintln!("# edges: {}", g.edge_count());
    eprintln!("# blocks: {}", bc.blocks.len());
    eprintln!("# spqr-nodes: {spqr_nodes}");
    if let Some(r) = rep {
        eprintln!("# tip-set-entries: {}", r.tip_entries());
        eprintln!("# explicit-pairs: {}", r.pairs.len());
        eprintln!("# representation-size: {}", r.size());
    }
    if let Some(n) = reports {
        eprintln!("# reports: {n}");
    }
    eprintln!("# wall-time-ms: {}", start.elapsed().as_millis());
}

fn write_output(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
