use fixedbitset::FixedBitSet;

use crate::automaton::Nfa;
use crate::domains::{Filtered, VarDomains};

/// Domain-consistent filtering of `Regular(X, r)` on the automaton unfolded
/// into `n` layers: a value survives at position `i` when some transition
/// labelled with it leaves a state reachable from the initial state after
/// `i` steps and enters a state from which an accepting state is reachable
/// in the remaining steps.
pub fn regular_propagate(r: &Nfa, d: &VarDomains) -> Filtered<VarDomains> {
    let n = d.len();
    let q = r.states();
    let alphabet = d.alphabet();
    let arcs: Vec<(usize, usize, usize)> = r
        .transitions()
        .iter()
        .filter_map(|(from, a, to)| alphabet.get(a).map(|v| (*from, v, *to)))
        .collect();

    let mut forward = vec![FixedBitSet::with_capacity(q); n + 1];
    forward[0].insert(r.initial());
    for i in 0..n {
        let (done, rest) = forward.split_at_mut(i + 1);
        for &(from, v, to) in &arcs {
            if done[i].contains(from) && d.contains(i, v) {
                rest[0].insert(to);
            }
        }
    }

    let mut backward = vec![FixedBitSet::with_capacity(q); n + 1];
    for &f in r.accepting() {
        if forward[n].contains(f) {
            backward[n].insert(f);
        }
    }
    if backward[n].is_clear() {
        return Filtered::Disentailed;
    }
    let mut out = d.clone();
    for i in (0..n).rev() {
        let mut keep = d.empty_set();
        let (head, tail) = backward.split_at_mut(i + 1);
        for &(from, v, to) in &arcs {
            if forward[i].contains(from) && tail[0].contains(to) && d.contains(i, v) {
                head[i].insert(from);
                keep.insert(v);
            }
        }
        if keep.is_clear() {
            return Filtered::Disentailed;
        }
        out.replace(i, keep);
    }
    Filtered::Consistent(out)
}
