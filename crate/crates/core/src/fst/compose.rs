use std::cell::RefCell;
use std::collections::{HashMap, VecDeque};

use super::{Arc, Cost, Fst, StateId, Wfst, EPSILON};

#[derive(Default)]
struct Cache {
    ids: HashMap<(StateId, StateId), StateId>,
    pairs: Vec<(StateId, StateId)>,
    arcs: Vec<Option<Vec<Arc>>>,
}

/// Lazy composition `a ∘ b`. Product states are created only when reached,
/// and their arcs are computed once and cached.
///
/// Epsilons are handled without a filter: an output-epsilon arc of `a`
/// advances `a` alone, an input-epsilon arc of `b` advances `b` alone, and
/// epsilon never matches epsilon. This can produce several equal-cost paths
/// for the same label pair, which is harmless under min.
pub struct ComposeFst<A, B> {
    a: A,
    b: B,
    cache: RefCell<Cache>,
}

impl<A: Fst, B: Fst> ComposeFst<A, B> {
    pub fn new(a: A, b: B) -> Self {
        ComposeFst {
            a,
            b,
            cache: RefCell::new(Cache::default()),
        }
    }

    fn intern(&self, pair: (StateId, StateId)) -> StateId {
        let mut cache = self.cache.borrow_mut();
        if let Some(&id) = cache.ids.get(&pair) {
            return id;
        }
        let id = cache.pairs.len();
        cache.pairs.push(pair);
        cache.arcs.push(None);
        cache.ids.insert(pair, id);
        id
    }

    fn pair(&self, state: StateId) -> (StateId, StateId) {
        self.cache.borrow().pairs[state]
    }

    fn expand(&self, state: StateId) -> Vec<Arc> {
        let (sa, sb) = self.pair(state);
        // (ilabel, olabel, cost, next a, next b)
        let mut moves: Vec<(u32, u32, Cost, StateId, StateId)> = Vec::new();
        if self.a.num_arcs(sa) <= self.b.num_arcs(sb) {
            for x in self.a.arcs(sa) {
                if x.olabel == EPSILON {
                    moves.push((x.ilabel, EPSILON, x.cost, x.next, sb));
                } else {
                    for y in self.b.arcs_with_ilabel(sb, x.olabel) {
                        moves.push((x.ilabel, y.olabel, x.cost + y.cost, x.next, y.next));
                    }
                }
            }
            for y in self.b.arcs_with_ilabel(sb, EPSILON) {
                moves.push((EPSILON, y.olabel, y.cost, sa, y.next));
            }
        } else {
            for y in self.b.arcs(sb) {
                if y.ilabel == EPSILON {
                    moves.push((EPSILON, y.olabel, y.cost, sa, y.next));
                } else {
                    for x in self.a.arcs_with_olabel(sa, y.ilabel) {
                        moves.push((x.ilabel, y.olabel, x.cost + y.cost, x.next, y.next));
                    }
                }
            }
            for x in self.a.arcs_with_olabel(sa, EPSILON) {
                moves.push((x.ilabel, EPSILON, x.cost, x.next, sb));
            }
        }
        moves
            .into_iter()
            .map(|(i, o, c, na, nb)| Arc::new(i, o, c, self.intern((na, nb))))
            .collect()
    }
}

impl<A: Fst, B: Fst> Fst for ComposeFst<A, B> {
    fn start(&self) -> Option<StateId> {
        let sa = self.a.start()?;
        let sb = self.b.start()?;
        Some(self.intern((sa, sb)))
    }

    fn final_cost(&self, state: StateId) -> Option<Cost> {
        let (sa, sb) = self.pair(state);
        Some(self.a.final_cost(sa)? + self.b.final_cost(sb)?)
    }

    fn arcs(&self, state: StateId) -> Vec<Arc> {
        if let Some(arcs) = &self.cache.borrow().arcs[state] {
            return arcs.clone();
        }
        let arcs = self.expand(state);
        self.cache.borrow_mut().arcs[state] = Some(arcs.clone());
        arcs
    }
}

/// Copies the part of `f` reachable from its start state into a concrete
/// machine. States are numbered in breadth-first discovery order.
pub fn materialize<F: Fst>(f: &F) -> Wfst {
    let mut out = Wfst::new();
    let Some(start) = f.start() else {
        return out;
    };
    let mut ids: HashMap<StateId, StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let s0 = out.add_state();
    out.set_start(s0);
    ids.insert(start, s0);
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        let src = ids[&s];
        if let Some(c) = f.final_cost(s) {
            out.set_final(src, c);
        }
        for arc in f.arcs(s) {
            let dst = match ids.get(&arc.next) {
                Some(&d) => d,
                None => {
                    let d = out.add_state();
                    ids.insert(arc.next, d);
                    queue.push_back(arc.next);
                    d
                }
            };
            out.add_arc(src, Arc::new(arc.ilabel, arc.olabel, arc.cost, dst));
        }
    }
    out
}

/// Composition restricted to reachable states.
pub fn compose(a: &Wfst, b: &Wfst) -> Wfst {
    materialize(&ComposeFst::new(a, b))
}
