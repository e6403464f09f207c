//! Hypothesis expansion into a sausage-like acceptor.
//!
//! Every span of the hypothesis that spells a member of an alternative set
//! gets parallel branches for the other members of that set. A branch is
//! entered through a tag arc (`#k`, k = member index) and then spells the
//! member's tokens before rejoining the main chain at the end of the span,
//! so a path either takes a whole alternative or none of it.
//!
//! When spans do not overlap this is exactly the slot-by-slot sausage
//! `(we're | we are) here early`. Overlapping spans simply contribute
//! additional bypasses; no match is discarded, which keeps expansion
//! monotone in the set of alternatives.

use std::collections::HashSet;

use super::{Arc, Label, SymbolTable, Wfst};
use crate::error::{Error, Result};
use crate::types::{AlternativeSet, TokenSeq};

/// A hypothesis span `[start, end)` equal to member `member` of set `set`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AltSpan {
    pub start: usize,
    pub end: usize,
    pub set: usize,
    pub member: usize,
}

/// All occurrences of any alternative member in `seq`, ordered by start,
/// then longest first, then set and member index.
pub fn find_alternative_spans(seq: &TokenSeq, alts: &[AlternativeSet]) -> Vec<AltSpan> {
    let tokens = seq.tokens();
    let mut spans = Vec::new();
    for start in 0..tokens.len() {
        for (set, alt) in alts.iter().enumerate() {
            for (member, m) in alt.members().iter().enumerate() {
                let end = start + m.len();
                if end <= tokens.len() && &tokens[start..end] == m.tokens() {
                    spans.push(AltSpan {
                        start,
                        end,
                        set,
                        member,
                    });
                }
            }
        }
    }
    spans.sort_by_key(|s| (s.start, std::cmp::Reverse(s.end), s.set, s.member));
    spans
}

/// Builds the expanded hypothesis acceptor. The table must already hold
/// every member token and at least as many tags as the largest set has
/// members.
pub fn sausage_fst(seq: &TokenSeq, alts: &[AlternativeSet], table: &SymbolTable) -> Result<Wfst> {
    let chain = table.labels_of(seq)?;
    let mut f = Wfst::linear_labels(&chain);
    // linear_labels numbers chain states 0..=n in order.
    let mut added: HashSet<(usize, usize, Vec<Label>)> = HashSet::new();
    for span in find_alternative_spans(seq, alts) {
        let alt = &alts[span.set];
        for (k, member) in alt.members().iter().enumerate() {
            if k == span.member {
                continue;
            }
            let labels = table.labels_of(member)?;
            if !added.insert((span.start, span.end, labels.clone())) {
                continue;
            }
            let tag = table.tag(k).ok_or_else(|| {
                Error::InvalidAlternativeSet(format!(
                    "symbol table reserves {} tags but set {alt} needs {}",
                    table.num_tags(),
                    alt.len()
                ))
            })?;
            let mut prev = f.add_state();
            f.add_arc(span.start, Arc::new(tag, tag, 0.0, prev));
            for (i, &l) in labels.iter().enumerate() {
                let next = if i + 1 == labels.len() {
                    span.end
                } else {
                    f.add_state()
                };
                f.add_arc(prev, Arc::new(l, l, 0.0, next));
                prev = next;
            }
        }
    }
    Ok(f)
}
