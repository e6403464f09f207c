//! Levenshtein transducer factored through an auxiliary symbol.
//!
//! A direct edit transducer needs one substitution arc per ordered token
//! pair, O(V²). Here substitution is split in two: the left factor rewrites
//! any token to `AUX` and the right factor rewrites `AUX` to any token, so
//! each factor needs only O(V) arcs and their composition still realizes
//! every substitution.
//!
//! | edit | left factor      | right factor     | total |
//! |------|------------------|------------------|-------|
//! | COR  | `t:t` / 0        | `t:t` / 0        | 0     |
//! | SUB  | `t:AUX` / 1      | `AUX:u` / 0      | 1     |
//! | DEL  | `t:ε` / 1        | (none)           | 1     |
//! | INS  | (none)           | `ε:u` / 1        | 1     |
//!
//! Branch tags emitted by expanded hypotheses are consumed by `ε:#k` / 0
//! arcs in the right factor. Tags can never be substituted, inserted or
//! deleted as words.

use super::{compose::ComposeFst, materialize, Arc, Label, SymbolTable, Wfst, AUX, EPSILON};
use crate::error::Result;
use crate::types::TokenSeq;

pub const SUB_COST: f64 = 1.0;
pub const INS_COST: f64 = 1.0;
pub const DEL_COST: f64 = 1.0;

/// The two factors plus the frozen symbol table they were built over.
#[derive(Debug, Clone)]
pub struct LevTransducer {
    left: Wfst,
    right: Wfst,
    table: SymbolTable,
    tags: Vec<Label>,
}

fn single_state() -> (Wfst, usize) {
    let mut f = Wfst::new();
    let s = f.add_state();
    f.set_start(s);
    f.set_final(s, 0.0);
    (f, s)
}

impl LevTransducer {
    pub fn build(table: SymbolTable) -> Self {
        let (mut left, l) = single_state();
        let (mut right, r) = single_state();
        for t in table.token_labels() {
            left.add_arc(l, Arc::new(t, t, 0.0, l));
            left.add_arc(l, Arc::new(t, AUX, SUB_COST, l));
            left.add_arc(l, Arc::new(t, EPSILON, DEL_COST, l));

            right.add_arc(r, Arc::new(t, t, 0.0, r));
            right.add_arc(r, Arc::new(AUX, t, 0.0, r));
            right.add_arc(r, Arc::new(EPSILON, t, INS_COST, r));
        }
        let tags: Vec<Label> = table.tags().collect();
        for &tag in &tags {
            right.add_arc(r, Arc::new(EPSILON, tag, 0.0, r));
        }
        LevTransducer {
            left,
            right,
            table,
            tags,
        }
    }

    pub fn left(&self) -> &Wfst {
        &self.left
    }

    pub fn right(&self) -> &Wfst {
        &self.right
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    /// Tags that pass through at zero cost.
    pub fn tags(&self) -> &[Label] {
        &self.tags
    }

    /// Arcs in both factors together.
    pub fn arc_count(&self) -> usize {
        self.left.total_arcs() + self.right.total_arcs()
    }

    /// The static transducer `left ∘ right`. Quadratic in the vocabulary;
    /// only for inspection on small tables.
    pub fn composed(&self) -> Wfst {
        super::compose(&self.left, &self.right)
    }

    /// Materializes the reachable part of `reference ∘ left ∘ right ∘ hypothesis`.
    /// Composition runs from both ends, so the O(V) substitution fan-out of
    /// the factors is never expanded.
    pub fn lattice(&self, reference: &Wfst, hypothesis: &Wfst) -> Wfst {
        let ref_side = ComposeFst::new(reference, &self.left);
        let hyp_side = ComposeFst::new(&self.right, hypothesis);
        let full = ComposeFst::new(&ref_side, &hyp_side);
        materialize(&full)
    }

    pub fn lattice_for(&self, reference: &TokenSeq, hypothesis: &TokenSeq) -> Result<Wfst> {
        let r = Wfst::linear(reference, &self.table)?;
        let h = Wfst::linear(hypothesis, &self.table)?;
        Ok(self.lattice(&r, &h))
    }
}

/// Builds the factored Levenshtein transducer over `table`.
pub fn build_lev(table: SymbolTable) -> LevTransducer {
    LevTransducer::build(table)
}

/// Arc count of the unfactored single-state transducer: V matches, V(V-1)
/// substitutions, V deletions and V insertions.
pub fn naive_lev_arc_count(vocab: usize) -> usize {
    vocab * vocab + 2 * vocab
}
