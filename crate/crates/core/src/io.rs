//! GFA1 and edge-list ingestion plus the report line formats.
//!
//! The GFA orientation mapping follows the node-end convention of
//! variation-graph toolchains and is normative for this crate:
//!
//! ```text
//! L u + v +  ->  {u+, v-}        L u - v +  ->  {u-, v-}
//! L u + v -  ->  {u+, v+}        L u - v -  ->  {u-, v+}
//! ```
//!
//! Duplicate identical links are deduplicated and self-links rejected.
//! The edge-list formats are one edge per line: `u v` (directed) and
//! `u SIGN v SIGN` (bidirected) with whitespace-separated tokens. Edge
//! lists cannot express isolated vertices, so the parse/serialize round
//! trip is the identity on graphs without them.

use std::fmt::Write as _;

use crate::graph::{BidirectedGraph, DirectedGraph, GraphBuilder, Sign};
use crate::report::{NamedSide, SnarlRepresentation, SuperbubbleReport, UltrabubbleReport};
use crate::GraphError;

fn line_error(line_no: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Input { reason: format!("line {}: {}", line_no, msg.into()) }
}

/// Parses GFA1 text: S and L lines are consumed, H/P/C/W and overlaps are
/// ignored. Links to undeclared segments and self-links are errors.
pub fn parse_gfa(text: &str) -> Result<BidirectedGraph, GraphError> {
    let mut b = GraphBuilder::new();
    let mut declared: std::collections::HashSet<String> = std::collections::HashSet::new();
    // two passes so links may precede their segment declarations
    for (no, line) in text.lines().enumerate() {
        let no = no + 1;
        if !line.starts_with('S') {
            continue;
        }
        let mut f = line.split('\t');
        if f.next() != Some("S") {
            continue;
        }
        let name = f
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| line_error(no, "S line missing segment name"))?;
        declared.insert(name.to_string());
        b.intern(name);
    }
    for (no, line) in text.lines().enumerate() {
        let no = no + 1;
        if !line.starts_with("L\t") && !line.starts_with("L ") {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 5 {
            return Err(line_error(no, "L line needs 'L from orient to orient'"));
        }
        let (from, fo, to, to_orient) = (f[1], f[2], f[3], f[4]);
        let fo = parse_orient(fo).ok_or_else(|| line_error(no, "bad from-orientation"))?;
        let to_o = parse_orient(to_orient).ok_or_else(|| line_error(no, "bad to-orientation"))?;
        for seg in [from, to] {
            if !declared.contains(seg) {
                return Err(line_error(no, format!("link references unknown segment '{seg}'")));
            }
        }
        if from == to {
            return Err(line_error(no, format!("self-link on segment '{from}' is not supported")));
        }
        // side at the source is its orientation; side at the target is the
        // opposite of its orientation
        let u = b.intern(from);
        let v = b.intern(to);
        b.add_edge(u, fo, v, to_o.opposite())
            .map_err(|e| line_error(no, e.to_string()))?;
    }
    Ok(b.build())
}

fn parse_orient(tok: &str) -> Option<Sign> {
    match tok {
        "+" => Some(Sign::Plus),
        "-" => Some(Sign::Minus),
        _ => None,
    }
}

/// Parses the directed edge-list format: `u v` per line, tabs or spaces.
pub fn parse_directed_edge_list(text: &str) -> Result<DirectedGraph, GraphError> {
    let mut b = GraphBuilder::new();
    for (no, line) in text.lines().enumerate() {
        let no = no + 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        if f.len() != 2 {
            return Err(line_error(no, "expected 'u v'"));
        }
        b.add_edge_by_name(f[0], Sign::Plus, f[1], Sign::Minus)
            .map_err(|e| line_error(no, e.to_string()))?;
    }
    b.build().as_directed()
}

/// Parses the bidirected edge-list format: `u SIGN v SIGN` per line.
pub fn parse_bidirected_edge_list(text: &str) -> Result<BidirectedGraph, GraphError> {
    let mut b = GraphBuilder::new();
    for (no, line) in text.lines().enumerate() {
        let no = no + 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        if f.len() != 4 {
            return Err(line_error(no, "expected 'u SIGN v SIGN'"));
        }
        let su = parse_orient(f[1]).ok_or_else(|| line_error(no, "bad sign token"))?;
        let sv = parse_orient(f[3]).ok_or_else(|| line_error(no, "bad sign token"))?;
        b.add_edge_by_name(f[0], su, f[2], sv).map_err(|e| line_error(no, e.to_string()))?;
    }
    Ok(b.build())
}

/// Canonical bidirected edge-list serialization: one `u SIGN v SIGN` line
/// per edge, sorted.
pub fn serialize_bidirected(g: &BidirectedGraph) -> String {
    let mut lines: Vec<String> = g
        .edges()
        .iter()
        .map(|e| {
            let a = (g.name(e.a.vertex), e.a.sign);
            let b = (g.name(e.b.vertex), e.b.sign);
            let ((n1, s1), (n2, s2)) = if a <= b { (a, b) } else { (b, a) };
            format!("{n1} {s1} {n2} {s2}")
        })
        .collect();
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

/// Canonical directed edge-list serialization: one `u v` line per arc,
/// sorted.
pub fn serialize_directed(d: &DirectedGraph) -> String {
    let mut lines: Vec<String> = d
        .arcs()
        .iter()
        .map(|a| format!("{} {}", d.name(a.tail), d.name(a.head)))
        .collect();
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

pub fn side_str(side: &NamedSide) -> String {
    format!("{}{}", side.0, side.1)
}

/// `SB: s t` lines.
pub fn write_superbubbles(reports: &[SuperbubbleReport]) -> String {
    let mut out = String::new();
    for r in reports {
        writeln!(out, "SB: {} {}", r.entry, r.exit).unwrap();
    }
    out
}

/// `UB: ua vb` lines.
pub fn write_ultrabubbles(reports: &[UltrabubbleReport]) -> String {
    let mut out = String::new();
    for r in reports {
        writeln!(out, "UB: {} {}", side_str(&r.a), side_str(&r.b)).unwrap();
    }
    out
}

/// `T<i>: va vb ...` tip-set lines followed by `S: ua vb` pair lines.
pub fn write_snarl_representation(rep: &SnarlRepresentation) -> String {
    let mut out = String::new();
    for (i, set) in rep.tip_sets.iter().enumerate() {
        let sides: Vec<String> = set.iter().map(side_str).collect();
        writeln!(out, "T{}: {}", i + 1, sides.join(" ")).unwrap();
    }
    for (a, b) in &rep.pairs {
        writeln!(out, "S: {} {}", side_str(a), side_str(b)).unwrap();
    }
    out
}

/// `S: ua vb` lines for every expanded snarl pair.
pub fn write_expanded_snarls(pairs: &[(NamedSide, NamedSide)]) -> String {
    let mut out = String::new();
    for (a, b) in pairs {
        writeln!(out, "S: {} {}", side_str(a), side_str(b)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSide;

    #[test]
    fn gfa_orientation_mapping() {
        let g = parse_gfa("S\ta\t*\nS\tb\t*\nL\ta\t+\tb\t+\t0M\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        let a = g.vertex_by_name("a").unwrap();
        let b = g.vertex_by_name("b").unwrap();
        assert!(g.has_edge(VertexSide::new(a, Sign::Plus), VertexSide::new(b, Sign::Minus)));

        let g = parse_gfa("S\ta\t*\nS\tb\t*\nL\ta\t+\tb\t-\t0M\n").unwrap();
        let a = g.vertex_by_name("a").unwrap();
        let b = g.vertex_by_name("b").unwrap();
        assert!(g.has_edge(VertexSide::new(a, Sign::Plus), VertexSide::new(b, Sign::Plus)));

        let g = parse_gfa("S\ta\t*\nS\tb\t*\nL\ta\t-\tb\t+\t0M\n").unwrap();
        let a = g.vertex_by_name("a").unwrap();
        let b = g.vertex_by_name("b").unwrap();
        assert!(g.has_edge(VertexSide::new(a, Sign::Minus), VertexSide::new(b, Sign::Minus)));

        let g = parse_gfa("S\ta\t*\nS\tb\t*\nL\ta\t-\tb\t-\t0M\n").unwrap();
        let a = g.vertex_by_name("a").unwrap();
        let b = g.vertex_by_name("b").unwrap();
        assert!(g.has_edge(VertexSide::new(a, Sign::Minus), VertexSide::new(b, Sign::Plus)));
    }

    #[test]
    fn gfa_errors() {
        assert!(matches!(
            parse_gfa("S\ta\t*\nL\ta\t+\tz\t+\t0M\n"),
            Err(GraphError::Input { .. })
        ));
        assert!(matches!(
            parse_gfa("S\ta\t*\nL\ta\t+\ta\t-\t0M\n"),
            Err(GraphError::Input { .. })
        ));
        let err = parse_gfa("S\ta\t*\nS\tb\t*\nL\ta\t+\tb\n").unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn gfa_duplicate_links_dedup() {
        let g = parse_gfa(
            "S\ta\t*\nS\tb\t*\nL\ta\t+\tb\t+\t0M\nL\ta\t+\tb\t+\t0M\n",
        )
        .unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_list_roundtrip() {
        let text = "a + b -\nb + c +\na - c -\n";
        let g = parse_bidirected_edge_list(text).unwrap();
        let ser = serialize_bidirected(&g);
        let g2 = parse_bidirected_edge_list(&ser).unwrap();
        assert_eq!(serialize_bidirected(&g2), ser);
        assert_eq!(g2.edge_count(), 3);
    }

    #[test]
    fn directed_edge_list_tolerates_whitespace() {
        let d = parse_directed_edge_list("a\tb\n\n  b   c  \n").unwrap();
        assert_eq!(d.arc_count(), 2);
        assert_eq!(serialize_directed(&d), "a b\nb c\n");
    }

    #[test]
    fn bad_tokens_carry_line_numbers() {
        let err = parse_bidirected_edge_list("a + b -\nc * d +\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let err = parse_directed_edge_list("a b c\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn gfa_roundtrips_through_edge_list() {
        // a vg-style toy pangenome: a bubble, an inversion, and a tail
        let gfa = "H\tVN:Z:1.0\n\
                   S\t1\tACGT\nS\t2\tC\nS\t3\tG\nS\t4\tT\nS\t5\tAA\n\
                   L\t1\t+\t2\t+\t0M\nL\t1\t+\t3\t+\t0M\n\
                   L\t2\t+\t4\t+\t0M\nL\t3\t+\t4\t+\t0M\n\
                   L\t4\t+\t5\t-\t0M\nL\t5\t+\t4\t-\t0M\n";
        let g = parse_gfa(gfa).unwrap();
        let ser = serialize_bidirected(&g);
        let g2 = parse_bidirected_edge_list(&ser).unwrap();
        assert_eq!(serialize_bidirected(&g2), ser);
        assert_eq!(g2.edge_count(), g.edge_count());
    }

    #[test]
    fn report_line_formats() {
        use crate::report::Provenance;
        let sb = vec![SuperbubbleReport {
            entry: "s".into(),
            exit: "t".into(),
            provenance: Provenance::Trivial,
        }];
        assert_eq!(write_superbubbles(&sb), "SB: s t\n");
        let ub = vec![UltrabubbleReport::new(
            ("a".into(), Sign::Plus),
            ("b".into(), Sign::Minus),
            Provenance::RNode,
        )];
        assert_eq!(write_ultrabubbles(&ub), "UB: a+ b-\n");
        let rep = SnarlRepresentation {
            tip_sets: vec![vec![("a".into(), Sign::Plus), ("b".into(), Sign::Minus)]],
            pairs: vec![(("c".into(), Sign::Plus), ("d".into(), Sign::Minus))],
        };
        assert_eq!(write_snarl_representation(&rep), "T1: a+ b-\nS: c+ d-\n");
    }
}
