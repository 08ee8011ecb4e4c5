//! Typed output records with stable ordering.
//!
//! Reports refer to vertices by their original names so they survive the
//! graph they were computed from; dense internal ids never appear here.

use crate::graph::Sign;

/// Where in the decomposition a report was produced.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Provenance {
    Trivial,
    WholeBlock,
    PNode,
    RNode,
}

/// A superbubble `(s, t)`: `s` the entry, `t` the exit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct SuperbubbleReport {
    pub entry: String,
    pub exit: String,
    pub provenance: Provenance,
}

/// A named vertex-side, e.g. `("a", Plus)` printed as `a+`.
pub type NamedSide = (String, Sign);

/// An ultrabubble `{u alpha, v beta}` (unordered; stored canonically).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct UltrabubbleReport {
    pub a: NamedSide,
    pub b: NamedSide,
    pub provenance: Provenance,
}

impl UltrabubbleReport {
    pub fn new(x: NamedSide, y: NamedSide, provenance: Provenance) -> Self {
        if x <= y {
            UltrabubbleReport { a: x, b: y, provenance }
        } else {
            UltrabubbleReport { a: y, b: x, provenance }
        }
    }
}

/// Linear-size encoding of all snarls: tip-sets (every unordered pair within
/// a set is a snarl) plus explicitly listed pairs.
#[derive(Clone, Debug, Default)]
pub struct SnarlRepresentation {
    pub tip_sets: Vec<Vec<NamedSide>>,
    pub pairs: Vec<(NamedSide, NamedSide)>,
}

impl SnarlRepresentation {
    /// Total size of the representation: sum of tip-set sizes plus the
    /// number of explicit pairs.
    pub fn size(&self) -> usize {
        self.tip_sets.iter().map(|t| t.len()).sum::<usize>() + self.pairs.len()
    }

    pub fn tip_entries(&self) -> usize {
        self.tip_sets.iter().map(|t| t.len()).sum()
    }

    /// Streams every encoded snarl: all pairs within each tip-set plus the
    /// explicit pairs, deduplicated and sorted. Output may be quadratic in
    /// the input; intended for tests and the `--expand` flag.
    pub fn expand(&self) -> Vec<(NamedSide, NamedSide)> {
        let mut out: Vec<(NamedSide, NamedSide)> = Vec::new();
        for set in &self.tip_sets {
            for i in 0..set.len() {
                for j in (i + 1)..set.len() {
                    out.push(ordered(set[i].clone(), set[j].clone()));
                }
            }
        }
        for (a, b) in &self.pairs {
            out.push(ordered(a.clone(), b.clone()));
        }
        out.sort();
        out.dedup();
        out
    }
}

fn ordered(a: NamedSide, b: NamedSide) -> (NamedSide, NamedSide) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Any reportable record, for streaming mixed output.
#[derive(Clone, Debug)]
pub enum BubbleReport {
    Superbubble(SuperbubbleReport),
    Snarl(NamedSide, NamedSide),
    Ultrabubble(UltrabubbleReport),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_counts_pairs() {
        let rep = SnarlRepresentation {
            tip_sets: vec![vec![
                ("a".into(), Sign::Plus),
                ("b".into(), Sign::Minus),
                ("c".into(), Sign::Minus),
            ]],
            pairs: vec![],
        };
        assert_eq!(rep.expand().len(), 3);
        let empty = SnarlRepresentation::default();
        assert!(empty.expand().is_empty());
    }

    #[test]
    fn expand_dedupes_across_sources() {
        let rep = SnarlRepresentation {
            tip_sets: vec![vec![("a".into(), Sign::Plus), ("b".into(), Sign::Minus)]],
            pairs: vec![(("b".into(), Sign::Minus), ("a".into(), Sign::Plus))],
        };
        assert_eq!(rep.expand().len(), 1);
    }
}
