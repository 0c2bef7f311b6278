use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::Color;
use crate::io::Instance;

use super::sequences::BinarySequences;
use super::{Builder, PotShape, Provenance, ReductionArtifact};

const GRAY: u32 = 2;
const DARK: u32 = 3;

/// Gadget sizes of a series-parallel duel instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpAudit {
    pub s: usize,
    pub n: usize,
    pub t: usize,
    pub path_nodes: usize,
    pub pot_weight: u64,
    pub q_nodes: usize,
    pub twins: usize,
    pub b_pot_weight: u64,
    pub padded: bool,
    pub node_count: usize,
    pub total_weight: u64,
    /// Territory A is guaranteed when the source has a supersequence within budget.
    pub a_lower: u64,
    /// Territory B can reach in that case.
    pub b_upper: u64,
}

/// Two-player series-parallel instance: A wins iff the binary sequences
/// have a common supersequence of length at most `t`.
///
/// Between `a0` (gray) and `b0` (dark) run `s` parallel branches. Branch `i`
/// is the path `P_i` spelling `σ_i` with gray separators, the pot `H_i`
/// (dark, weight `4st`), and the path `Q_i` back to `b0` alternating
/// white/dark with a light twin beside every white node. B's private pot
/// `H_B` (gray) hangs off `b0`.
pub fn gen_scs_sp(src: &BinarySequences, expand_pots: bool) -> ReductionArtifact {
    let (s, n, t) = (src.seqs.len(), src.len(), src.t.max(1));
    let pot_shape = expand_pots.then_some(PotShape::Path);
    let hi = (4 * s * t) as u64;
    let hb = (4 * s * (s - 1) * t + (2 * n - 1) * s) as u64;

    let mut b = Builder::default();
    let a0 = b.node("a0", GRAY, 1, "start_a");
    let b0 = b.node("b0", DARK, 1, "start_b");
    let mut twins = 0;
    for (i, seq) in src.seqs.iter().enumerate() {
        let mut prev = a0;
        for j in 0..(2 * n - 1) {
            let color = if j % 2 == 0 { seq[j / 2] as Color } else { GRAY };
            let v = b.node(format!("p{i}_{j}"), color, 1, format!("path:{i}:{j}"));
            b.edge(prev, v);
            prev = v;
        }
        let pot = b.pot(&format!("h{i}"), DARK, hi, pot_shape, &format!("pot:{i}"));
        b.edge(prev, pot);

        // Q_i from b0 to the pot; every white node gets a light twin
        let mut prev: Vec<usize> = vec![b0];
        for j in 0..(2 * t - 1) {
            let mut layer = Vec::new();
            if j % 2 == 0 {
                layer.push(b.node(format!("q{i}_{j}"), 0, 1, format!("q:{i}:{j}")));
                layer.push(b.node(format!("q{i}_{j}'"), 1, 1, format!("twin:{i}:{j}")));
                twins += 1;
            } else {
                layer.push(b.node(format!("q{i}_{j}"), DARK, 1, format!("q:{i}:{j}")));
            }
            for &u in &prev {
                for &v in &layer {
                    b.edge(u, v);
                }
            }
            prev = layer;
        }
        for &u in &prev {
            b.edge(u, pot);
        }
    }
    let hb_node = b.pot("hb", GRAY, hb, pot_shape, "pot_b");
    b.edge(b0, hb_node);
    let padded = b.total_weight() % 2 == 0;
    if padded {
        let pad = b.node("pad", DARK, 1, "padding");
        b.edge(hb_node, pad);
    }
    let (graph, roles) = b.finish(4).expect("series-parallel gadget is a valid graph");

    let audit = SpAudit {
        s,
        n,
        t,
        path_nodes: 2 * n - 1,
        pot_weight: hi,
        q_nodes: 2 * t - 1,
        twins,
        b_pot_weight: hb,
        padded,
        node_count: graph.len(),
        total_weight: graph.total_weight(),
        a_lower: (1 + (2 * n - 1) * s + 4 * s * s * t) as u64,
        b_upper: (1 + (3 * t - 1) * s + 4 * s * (s - 1) * t + (2 * n - 1) * s) as u64 + u64::from(padded),
    };
    let mut instance = Instance::new(graph);
    instance.start_a = Some(a0);
    instance.start_b = Some(b0);
    let mut meta = BTreeMap::new();
    meta.insert("audit".into(), serde_json::to_value(&audit).expect("audit serializes"));
    ReductionArtifact {
        instance,
        bound: None,
        provenance: Provenance {
            source: "scs-sp".into(),
            roles,
            relation: format!("A wins iff the sequences have a common supersequence of length at most {}", src.t),
            meta,
        },
    }
}

/// Reads the supersequence A spells on its path walk: the colors of A's
/// 1st, 3rd, 5th, ... moves that are 0 or 1, among its first `2t - 1` moves.
pub fn extract_supersequence(a_moves: &[Color], t: usize) -> Vec<u8> {
    a_moves
        .iter()
        .take(2 * t.max(1) - 1)
        .step_by(2)
        .filter(|&&c| c <= 1)
        .map(|&c| c as u8)
        .collect()
}

impl ReductionArtifact {
    /// Gadget sizes recorded by [`gen_scs_sp`].
    pub fn sp_audit(&self) -> Option<SpAudit> {
        serde_json::from_value(self.provenance.meta.get("audit")?.clone()).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig() -> BinarySequences {
        BinarySequences::from_json(r#"{"seqs":["1001","0101","1010"],"t":4}"#).unwrap()
    }

    #[test]
    fn figure_sizes() {
        let art = gen_scs_sp(&fig(), false);
        let a = art.sp_audit().unwrap();
        assert_eq!((a.pot_weight, a.b_pot_weight), (48, 117));
        assert_eq!((a.path_nodes, a.q_nodes, a.twins), (7, 7, 12));
        assert!(!a.padded);
        assert_eq!(a.total_weight % 2, 1);
        assert!(a.a_lower > a.total_weight / 2);
    }

    #[test]
    fn expanded_pots_keep_weight() {
        let w = gen_scs_sp(&fig(), false);
        let e = gen_scs_sp(&fig(), true);
        assert_eq!(w.instance.graph.total_weight(), e.instance.graph.total_weight());
        assert_eq!(e.instance.graph.len() as u64, e.instance.graph.total_weight());
        let (c, _) = e.instance.graph.contract();
        assert_eq!(c.len(), w.instance.graph.contract().0.len());
    }

    #[test]
    fn padding_makes_total_odd() {
        let even = BinarySequences::from_json(r#"{"seqs":["101","101"],"t":3}"#).unwrap();
        let art = gen_scs_sp(&even, false);
        assert!(art.sp_audit().unwrap().padded);
        assert_eq!(art.instance.graph.total_weight() % 2, 1);
    }

    #[test]
    fn supersequence_extraction() {
        assert_eq!(extract_supersequence(&[1, 2, 0, 2, 1, 2, 0, 3, 3], 4), vec![1, 0, 1, 0]);
    }
}
