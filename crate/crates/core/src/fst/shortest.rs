use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Arc, Cost, Fst, StateId, Wfst};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPath {
    pub cost: Cost,
    /// Arcs along the path, start to final.
    pub arcs: Vec<Arc>,
    /// Visited states, `arcs.len() + 1` entries.
    pub states: Vec<StateId>,
}

pub(crate) fn same_cost(a: Cost, b: Cost) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

#[derive(PartialEq)]
struct Entry(Cost, StateId);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over a weighted graph given as adjacency `(target, weight)`.
/// Returns distances and, per state, the adjacency index that realized it.
fn dijkstra(adj: &[Vec<(StateId, Cost, usize)>], init: &[Cost]) -> (Vec<Cost>, Vec<Option<usize>>) {
    let n = adj.len();
    let mut dist = init.to_vec();
    let mut via = vec![None; n];
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<Entry> = dist
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_finite())
        .map(|(s, &d)| Entry(d, s))
        .collect();
    while let Some(Entry(d, s)) = heap.pop() {
        if done[s] || d > dist[s] {
            continue;
        }
        done[s] = true;
        for &(t, w, tag) in &adj[s] {
            let nd = d + w;
            if nd < dist[t] {
                dist[t] = nd;
                via[t] = Some(tag);
                heap.push(Entry(nd, t));
            }
        }
    }
    (dist, via)
}

/// Cost of the cheapest path from each state to a final state, where arc
/// and final weights come from the supplied functions (`None` = unusable).
pub fn backward_distances(
    f: &Wfst,
    arc_weight: impl Fn(StateId, &Arc) -> Option<Cost>,
    final_weight: impl Fn(StateId) -> Option<Cost>,
) -> Vec<Cost> {
    backward(f, arc_weight, final_weight).0
}

fn backward(
    f: &Wfst,
    arc_weight: impl Fn(StateId, &Arc) -> Option<Cost>,
    final_weight: impl Fn(StateId) -> Option<Cost>,
) -> (Vec<Cost>, Vec<Option<usize>>) {
    let n = f.num_states();
    let mut rev: Vec<Vec<(StateId, Cost, usize)>> = vec![Vec::new(); n];
    for s in 0..n {
        for (k, a) in f.arcs_ref(s).iter().enumerate() {
            if let Some(w) = arc_weight(s, a) {
                rev[a.next].push((s, w, k));
            }
        }
    }
    let init: Vec<Cost> = (0..n)
        .map(|s| final_weight(s).unwrap_or(Cost::INFINITY))
        .collect();
    dijkstra(&rev, &init)
}

/// Cost of the cheapest path from the start state to each state.
pub fn forward_distances(
    f: &Wfst,
    arc_weight: impl Fn(StateId, &Arc) -> Option<Cost>,
) -> Vec<Cost> {
    let n = f.num_states();
    let mut adj: Vec<Vec<(StateId, Cost, usize)>> = vec![Vec::new(); n];
    for (s, out) in adj.iter_mut().enumerate() {
        for (k, a) in f.arcs_ref(s).iter().enumerate() {
            if let Some(w) = arc_weight(s, a) {
                out.push((a.next, w, k));
            }
        }
    }
    let mut init = vec![Cost::INFINITY; n];
    if let Some(s) = f.start() {
        init[s] = 0.0;
    }
    dijkstra(&adj, &init).0
}

/// Minimum-cost accepting path.
///
/// Ties are broken deterministically: walking forward from the start, the
/// path stops as soon as stopping is optimal, and otherwise takes the
/// optimal arc with the smallest `(class_rank, ilabel, olabel, next)`. On a
/// composed `ref ∘ lev ∘ hyp` machine this yields the lexicographically
/// smallest edit script under COR < SUB < DEL < INS.
pub fn shortest_path(f: &Wfst) -> Result<ShortestPath> {
    let start = f.start().ok_or(Error::EmptyLanguage)?;
    let (dist, via) = backward(f, |_, a| Some(a.cost), |s| f.final_cost(s));
    let total = dist[start];
    if !total.is_finite() {
        return Err(Error::EmptyLanguage);
    }

    let mut visited = vec![false; f.num_states()];
    let mut on_tree = false;
    let mut arcs = Vec::new();
    let mut states = vec![start];
    let mut s = start;
    visited[s] = true;
    loop {
        if f.final_cost(s).is_some_and(|fc| same_cost(fc, dist[s])) {
            break;
        }
        let best = if on_tree {
            None
        } else {
            f.arcs_ref(s)
                .iter()
                .filter(|a| !visited[a.next] && same_cost(a.cost + dist[a.next], dist[s]))
                .min_by_key(|a| (a.class_rank(), a.ilabel, a.olabel, a.next))
        };
        let arc = match best {
            Some(a) => *a,
            None => {
                // Greedy walk blocked by a zero-cost cycle: finish along the
                // Dijkstra tree, which is loop-free.
                on_tree = true;
                let k = via[s].ok_or(Error::EmptyLanguage)?;
                f.arcs_ref(s)[k]
            }
        };
        arcs.push(arc);
        s = arc.next;
        visited[s] = true;
        states.push(s);
    }
    Ok(ShortestPath {
        cost: total,
        arcs,
        states,
    })
}
