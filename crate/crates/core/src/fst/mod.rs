//! A small weighted finite-state transducer engine over the tropical
//! semiring (min, +).
//!
//! Only what edit-distance scoring needs is here: linear and sausage
//! acceptors, the factored Levenshtein transducer, lazy composition and a
//! shortest path with deterministic tie-breaking.

mod compose;
mod lev;
mod sausage;
mod shortest;
mod symbols;

use std::fmt::Write as _;
use std::sync::OnceLock;

pub use compose::{compose, materialize, ComposeFst};
pub use lev::{build_lev, naive_lev_arc_count, LevTransducer};
pub use sausage::{find_alternative_spans, sausage_fst, AltSpan};
pub use shortest::{backward_distances, forward_distances, shortest_path, ShortestPath};
pub use symbols::{Label, SymbolTable, AUX, EPSILON};

use crate::error::Result;
use crate::types::TokenSeq;

pub type StateId = usize;

/// Tropical weight. `f64::INFINITY` is the semiring zero.
pub type Cost = f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub ilabel: Label,
    pub olabel: Label,
    pub cost: Cost,
    pub next: StateId,
}

impl Arc {
    pub fn new(ilabel: Label, olabel: Label, cost: Cost, next: StateId) -> Self {
        Arc {
            ilabel,
            olabel,
            cost,
            next,
        }
    }

    /// Edit class of a label pair, ranked for tie-breaking: match, then
    /// substitution, deletion (output epsilon), insertion (input epsilon),
    /// and finally epsilon:epsilon.
    pub fn class_rank(&self) -> u8 {
        match (self.ilabel, self.olabel) {
            (EPSILON, EPSILON) => 4,
            (EPSILON, _) => 3,
            (_, EPSILON) => 2,
            (i, o) if i == o => 0,
            _ => 1,
        }
    }
}

/// Read access shared by concrete and lazily computed transducers.
pub trait Fst {
    fn start(&self) -> Option<StateId>;

    fn final_cost(&self, state: StateId) -> Option<Cost>;

    fn arcs(&self, state: StateId) -> Vec<Arc>;

    fn num_arcs(&self, state: StateId) -> usize {
        self.arcs(state).len()
    }

    fn arcs_with_ilabel(&self, state: StateId, label: Label) -> Vec<Arc> {
        self.arcs(state)
            .into_iter()
            .filter(|a| a.ilabel == label)
            .collect()
    }

    fn arcs_with_olabel(&self, state: StateId, label: Label) -> Vec<Arc> {
        self.arcs(state)
            .into_iter()
            .filter(|a| a.olabel == label)
            .collect()
    }
}

impl<T: Fst + ?Sized> Fst for &T {
    fn start(&self) -> Option<StateId> {
        (**self).start()
    }

    fn final_cost(&self, state: StateId) -> Option<Cost> {
        (**self).final_cost(state)
    }

    fn arcs(&self, state: StateId) -> Vec<Arc> {
        (**self).arcs(state)
    }

    fn num_arcs(&self, state: StateId) -> usize {
        (**self).num_arcs(state)
    }

    fn arcs_with_ilabel(&self, state: StateId, label: Label) -> Vec<Arc> {
        (**self).arcs_with_ilabel(state, label)
    }

    fn arcs_with_olabel(&self, state: StateId, label: Label) -> Vec<Arc> {
        (**self).arcs_with_olabel(state, label)
    }
}

#[derive(Debug, Clone, Default)]
struct StateData {
    arcs: Vec<Arc>,
    final_cost: Option<Cost>,
}

/// Per-state arc positions sorted by input and by output label.
#[derive(Debug, Clone)]
struct LabelIndex {
    by_ilabel: Vec<Vec<u32>>,
    by_olabel: Vec<Vec<u32>>,
}

/// Mutable, fully materialized transducer.
#[derive(Debug, Clone, Default)]
pub struct Wfst {
    states: Vec<StateData>,
    start: Option<StateId>,
    index: OnceLock<LabelIndex>,
}

impl Wfst {
    pub fn new() -> Self {
        Wfst::default()
    }

    pub fn add_state(&mut self) -> StateId {
        self.index = OnceLock::new();
        self.states.push(StateData::default());
        self.states.len() - 1
    }

    pub fn set_start(&mut self, state: StateId) {
        assert!(
            state < self.states.len(),
            "start state {state} does not exist"
        );
        self.start = Some(state);
    }

    pub fn set_final(&mut self, state: StateId, cost: Cost) {
        assert!(cost >= 0.0, "final cost must be non-negative");
        self.states[state].final_cost = Some(cost);
    }

    pub fn add_arc(&mut self, from: StateId, arc: Arc) {
        assert!(
            arc.next < self.states.len(),
            "arc target {} does not exist",
            arc.next
        );
        assert!(
            arc.cost >= 0.0 && !arc.cost.is_nan(),
            "arc costs must be non-negative"
        );
        self.index = OnceLock::new();
        self.states[from].arcs.push(arc);
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn total_arcs(&self) -> usize {
        self.states.iter().map(|s| s.arcs.len()).sum()
    }

    pub fn arcs_ref(&self, state: StateId) -> &[Arc] {
        &self.states[state].arcs
    }

    pub fn finals(&self) -> impl Iterator<Item = (StateId, Cost)> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter_map(|(s, d)| d.final_cost.map(|c| (s, c)))
    }

    fn label_index(&self) -> &LabelIndex {
        self.index.get_or_init(|| {
            let sorted = |key: fn(&Arc) -> Label| {
                self.states
                    .iter()
                    .map(|s| {
                        let mut ix: Vec<u32> = (0..s.arcs.len() as u32).collect();
                        ix.sort_by_key(|&i| key(&s.arcs[i as usize]));
                        ix
                    })
                    .collect()
            };
            LabelIndex {
                by_ilabel: sorted(|a| a.ilabel),
                by_olabel: sorted(|a| a.olabel),
            }
        })
    }

    fn lookup(&self, state: StateId, label: Label, by_input: bool) -> Vec<Arc> {
        let index = self.label_index();
        let order = if by_input {
            &index.by_ilabel[state]
        } else {
            &index.by_olabel[state]
        };
        let arcs = &self.states[state].arcs;
        let key = |i: &u32| {
            let a = &arcs[*i as usize];
            if by_input {
                a.ilabel
            } else {
                a.olabel
            }
        };
        let lo = order.partition_point(|i| key(i) < label);
        order[lo..]
            .iter()
            .take_while(|i| key(i) == label)
            .map(|&i| arcs[i as usize])
            .collect()
    }

    /// Chain acceptor for `seq`: one state per prefix, zero costs.
    pub fn linear(seq: &TokenSeq, table: &SymbolTable) -> Result<Wfst> {
        let labels = table.labels_of(seq)?;
        Ok(Wfst::linear_labels(&labels))
    }

    pub fn linear_labels(labels: &[Label]) -> Wfst {
        let mut f = Wfst::new();
        let mut prev = f.add_state();
        f.set_start(prev);
        for &l in labels {
            let next = f.add_state();
            f.add_arc(prev, Arc::new(l, l, 0.0, next));
            prev = next;
        }
        f.set_final(prev, 0.0);
        f
    }

    /// Line-oriented dump: `src dst in out cost` per arc, then `state cost`
    /// per final state, tab separated. Labels are printed as symbols when a
    /// table is supplied.
    pub fn to_text(&self, table: Option<&SymbolTable>) -> String {
        let label = |l: Label| match table {
            Some(t) => t.display(l),
            None => l.to_string(),
        };
        let mut out = String::new();
        // The start state is listed first by convention.
        let mut order: Vec<StateId> = (0..self.states.len()).collect();
        if let Some(s) = self.start {
            order.retain(|&x| x != s);
            order.insert(0, s);
        }
        for &s in &order {
            for a in &self.states[s].arcs {
                let _ = writeln!(
                    out,
                    "{s}\t{}\t{}\t{}\t{}",
                    a.next,
                    label(a.ilabel),
                    label(a.olabel),
                    a.cost
                );
            }
        }
        for (s, c) in self.finals() {
            let _ = writeln!(out, "{s}\t{c}");
        }
        out
    }

    /// Output-label strings of every accepting path, with path cost. Only
    /// meant for small acyclic machines (tests, debugging); paths longer
    /// than `max_arcs` are cut off.
    pub fn enumerate_paths(&self, max_arcs: usize) -> Vec<(Vec<Label>, Vec<Label>, Cost)> {
        let mut out = Vec::new();
        let Some(start) = self.start else {
            return out;
        };
        let mut stack = vec![(start, Vec::new(), Vec::new(), 0.0, 0usize)];
        while let Some((s, ins, outs, cost, depth)) = stack.pop() {
            if let Some(fc) = self.states[s].final_cost {
                out.push((ins.clone(), outs.clone(), cost + fc));
            }
            if depth == max_arcs {
                continue;
            }
            for a in &self.states[s].arcs {
                let mut i2 = ins.clone();
                let mut o2 = outs.clone();
                if a.ilabel != EPSILON {
                    i2.push(a.ilabel);
                }
                if a.olabel != EPSILON {
                    o2.push(a.olabel);
                }
                stack.push((a.next, i2, o2, cost + a.cost, depth + 1));
            }
        }
        out
    }
}

impl Fst for Wfst {
    fn start(&self) -> Option<StateId> {
        self.start
    }

    fn final_cost(&self, state: StateId) -> Option<Cost> {
        self.states.get(state).and_then(|s| s.final_cost)
    }

    fn arcs(&self, state: StateId) -> Vec<Arc> {
        self.states[state].arcs.clone()
    }

    fn num_arcs(&self, state: StateId) -> usize {
        self.states[state].arcs.len()
    }

    fn arcs_with_ilabel(&self, state: StateId, label: Label) -> Vec<Arc> {
        self.lookup(state, label, true)
    }

    fn arcs_with_olabel(&self, state: StateId, label: Label) -> Vec<Arc> {
        self.lookup(state, label, false)
    }
}

/// `linear_fst` under its conventional name.
pub fn linear_fst(seq: &TokenSeq, table: &SymbolTable) -> Result<Wfst> {
    Wfst::linear(seq, table)
}
