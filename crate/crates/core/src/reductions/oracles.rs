use std::collections::HashMap;

use super::fvs::Digraph;
use super::ReductionError;

const SCS_MAX_SEQS: usize = 4;
const SCS_MAX_LEN: usize = 10;
const FVS_MAX_NODES: usize = 16;

/// True when `sub` is a (not necessarily contiguous) subsequence of `sup`.
pub fn is_supersequence(sup: &[u8], sub: &[u8]) -> bool {
    let mut it = sup.iter();
    sub.iter().all(|c| it.any(|x| x == c))
}

/// Shortest common supersequence by dynamic programming over position tuples.
/// Returns the optimum length and the lexicographically smallest optimal
/// witness.
pub fn brute_scs(seqs: &[Vec<u8>]) -> Result<(usize, Vec<u8>), ReductionError> {
    if seqs.len() > SCS_MAX_SEQS || seqs.iter().any(|s| s.len() > SCS_MAX_LEN) {
        return Err(ReductionError::TooLarge(format!(
            "at most {SCS_MAX_SEQS} sequences of length at most {SCS_MAX_LEN}"
        )));
    }
    let mut alphabet: Vec<u8> = seqs.iter().flatten().copied().collect();
    alphabet.sort_unstable();
    alphabet.dedup();

    // remaining[pos] = SCS length of the suffixes starting at pos
    fn rest(seqs: &[Vec<u8>], alphabet: &[u8], pos: &[usize], memo: &mut HashMap<Vec<usize>, usize>) -> usize {
        if pos.iter().zip(seqs).all(|(&p, s)| p == s.len()) {
            return 0;
        }
        if let Some(&v) = memo.get(pos) {
            return v;
        }
        let mut best = usize::MAX;
        for &c in alphabet {
            let next = advance(seqs, pos, c);
            if next != pos {
                best = best.min(1 + rest(seqs, alphabet, &next, memo));
            }
        }
        memo.insert(pos.to_vec(), best);
        best
    }

    let mut memo = HashMap::new();
    let mut pos = vec![0; seqs.len()];
    let opt = rest(seqs, &alphabet, &pos, &mut memo);
    let mut witness = Vec::with_capacity(opt);
    let mut left = opt;
    while left > 0 {
        let c = alphabet
            .iter()
            .copied()
            .find(|&c| {
                let next = advance(seqs, &pos, c);
                next != pos && 1 + rest(seqs, &alphabet, &next, &mut memo) == left
            })
            .expect("some symbol realizes the optimum");
        pos = advance(seqs, &pos, c);
        witness.push(c);
        left -= 1;
    }
    Ok((opt, witness))
}

fn advance(seqs: &[Vec<u8>], pos: &[usize], c: u8) -> Vec<usize> {
    pos.iter()
        .zip(seqs)
        .map(|(&p, s)| if p < s.len() && s[p] == c { p + 1 } else { p })
        .collect()
}

/// True when the digraph minus `removed` has no directed cycle.
pub fn is_acyclic_without(d: &Digraph, removed: &[usize]) -> bool {
    let alive: Vec<bool> = (0..d.nodes).map(|v| !removed.contains(&v)).collect();
    let mut indeg = vec![0usize; d.nodes];
    for &(a, b) in &d.arcs {
        if alive[a] && alive[b] {
            indeg[b] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..d.nodes).filter(|&v| alive[v] && indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for w in d.successors(v) {
            if alive[w] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    seen == alive.iter().filter(|&&a| a).count()
}

/// Minimum feedback vertex set by enumerating subsets in order of size.
/// Returns the size and the first minimum set in lexicographic order.
pub fn brute_fvs(d: &Digraph) -> Result<(usize, Vec<usize>), ReductionError> {
    if d.nodes > FVS_MAX_NODES {
        return Err(ReductionError::TooLarge(format!("at most {FVS_MAX_NODES} digraph nodes")));
    }
    for size in 0..=d.nodes {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if is_acyclic_without(d, &combo) {
                return Ok((size, combo));
            }
            // next combination in lexicographic order
            let mut i = size;
            while i > 0 && combo[i - 1] == d.nodes - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    unreachable!("removing every node leaves an acyclic digraph")
}
