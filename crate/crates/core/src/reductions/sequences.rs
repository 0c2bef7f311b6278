use std::collections::BTreeMap;

use serde::Deserialize;

use crate::io::Instance;

use super::{Builder, Provenance, ReductionArtifact, ReductionError};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqFile {
    seqs: Vec<String>,
    t: usize,
}

fn parse_digits(text: &str, max: u8) -> Result<(Vec<Vec<u8>>, usize), ReductionError> {
    let f: SeqFile = serde_json::from_str(text).map_err(|e| ReductionError::Invalid(e.to_string()))?;
    let seqs = f
        .seqs
        .iter()
        .map(|s| {
            s.chars()
                .map(|ch| match ch.to_digit(10) {
                    Some(d) if d <= max as u32 => Ok(d as u8),
                    _ => Err(ReductionError::Invalid(format!("symbol {ch:?} in {s:?}"))),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok((seqs, f.t))
}

fn render(seq: &[u8]) -> String {
    seq.iter().map(|d| char::from(b'0' + d)).collect()
}

/// Binary SCS source: equal-length sequences, each with exactly two 1s that
/// are separated by at least one 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequences {
    pub seqs: Vec<Vec<u8>>,
    pub t: usize,
}

impl BinarySequences {
    pub fn new(seqs: Vec<Vec<u8>>, t: usize) -> Result<Self, ReductionError> {
        if seqs.is_empty() {
            return Err(ReductionError::Invalid("no sequences".into()));
        }
        let n = seqs[0].len();
        for s in &seqs {
            if s.len() != n {
                return Err(ReductionError::Invalid("sequences differ in length".into()));
            }
            if s.iter().any(|&c| c > 1) {
                return Err(ReductionError::Invalid(format!("{} is not binary", render(s))));
            }
            let ones: Vec<usize> = (0..n).filter(|&i| s[i] == 1).collect();
            if ones.len() != 2 || ones[1] - ones[0] < 2 {
                return Err(ReductionError::Invalid(format!(
                    "{} must hold exactly two 1s with a 0 between them",
                    render(s)
                )));
            }
        }
        Ok(BinarySequences { seqs, t })
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let (seqs, t) = parse_digits(text, 1)?;
        BinarySequences::new(seqs, t)
    }

    pub fn len(&self) -> usize {
        self.seqs[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Ternary MSCS source: symbols in {0,1,2}, no two equal neighbors, no
/// sequence starts with 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernarySequences {
    pub seqs: Vec<Vec<u8>>,
    pub t: usize,
}

impl TernarySequences {
    pub fn new(seqs: Vec<Vec<u8>>, t: usize) -> Result<Self, ReductionError> {
        for s in &seqs {
            if s.iter().any(|&c| c > 2) {
                return Err(ReductionError::Invalid(format!("{} is not ternary", render(s))));
            }
            if s.first() == Some(&2) {
                return Err(ReductionError::Invalid(format!("{} starts with 2", render(s))));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(ReductionError::Invalid(format!("{} repeats a symbol", render(s))));
            }
        }
        Ok(TernarySequences { seqs, t })
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let (seqs, t) = parse_digits(text, 2)?;
        TernarySequences::new(seqs, t)
    }
}

/// The symbol map `0 -> 0 2`, `1 -> 1`.
pub fn expand_binary(seq: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(seq.len() * 2);
    for &c in seq {
        if c == 0 {
            out.extend([0, 2]);
        } else {
            out.push(c);
        }
    }
    out
}

/// Maps each sequence through [`expand_binary`]. The budget becomes `2t`,
/// the longest possible image of a length-`t` supersequence.
pub fn scs_to_mscs(src: &BinarySequences) -> TernarySequences {
    let seqs = src.seqs.iter().map(|s| expand_binary(s)).collect();
    TernarySequences::new(seqs, 2 * src.t).expect("images of valid binary sequences are valid")
}

/// Spider: a root of color 2 with one path per sequence. Conquering from
/// the root takes exactly as many calls as the shortest common
/// supersequence is long.
pub fn gen_mscs_tree(src: &TernarySequences) -> ReductionArtifact {
    let mut b = Builder::default();
    let root = b.node("r", 2, 1, "root");
    for (i, s) in src.seqs.iter().enumerate() {
        let mut prev = root;
        for (j, &c) in s.iter().enumerate() {
            let v = b.node(format!("p{i}_{j}"), c as u32, 1, format!("seq:{i}:{j}"));
            b.edge(prev, v);
            prev = v;
        }
    }
    let (graph, roles) = b.finish(3).expect("spider is a valid graph");
    let mut instance = Instance::new(graph);
    instance.start = Some(root);
    let mut meta = BTreeMap::new();
    meta.insert(
        "seqs".into(),
        src.seqs.iter().map(|s| render(s)).collect::<Vec<_>>().into(),
    );
    meta.insert("t".into(), src.t.into());
    ReductionArtifact {
        instance,
        bound: Some(src.t),
        provenance: Provenance {
            source: "mscs".into(),
            roles,
            relation: "optimal conquest length from the root = shortest common supersequence length".into(),
            meta,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{brute_scs, is_supersequence};
    use crate::solitaire::solve_exact;

    #[test]
    fn expansion_examples() {
        assert_eq!(expand_binary(&[1, 0, 0, 1]), vec![1, 0, 2, 0, 2, 1]);
        let src = BinarySequences::from_json(r#"{"seqs":["1001","0101"],"t":5}"#).unwrap();
        let m = scs_to_mscs(&src);
        assert_eq!(m.seqs[1], vec![0, 2, 1, 0, 2, 1]);
    }

    #[test]
    fn rejects_bad_sources() {
        assert!(BinarySequences::from_json(r#"{"seqs":["1100"],"t":1}"#).is_err());
        assert!(BinarySequences::from_json(r#"{"seqs":["1010","101"],"t":1}"#).is_err());
        assert!(TernarySequences::from_json(r#"{"seqs":["20"],"t":1}"#).is_err());
        assert!(TernarySequences::from_json(r#"{"seqs":["0110"],"t":1}"#).is_err());
    }

    #[test]
    fn supersequence_images_correspond() {
        // the image of any binary supersequence is a supersequence of the images
        let src = BinarySequences::from_json(r#"{"seqs":["1001","0101","1010"],"t":5}"#).unwrap();
        let (_, w) = brute_scs(&src.seqs).unwrap();
        let img = expand_binary(&w);
        for s in &scs_to_mscs(&src).seqs {
            assert!(is_supersequence(&img, s));
        }
    }

    #[test]
    fn spider_matches_scs() {
        let src = TernarySequences::from_json(r#"{"seqs":["0102","1201","010"],"t":6}"#).unwrap();
        let art = gen_mscs_tree(&src);
        let r = solve_exact(&art.instance.graph, 0, 1 << 20).unwrap();
        assert_eq!(r.length, brute_scs(&src.seqs).unwrap().0);
        let calls: Vec<u8> = r.sequence.iter().map(|&c| c as u8).collect();
        assert!(src.seqs.iter().all(|s| is_supersequence(&calls, s)));
    }
}
