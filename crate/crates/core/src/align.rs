//! Reference/hypothesis alignment.
//!
//! `align_fst` is the production path: shortest path through
//! `ref ∘ lev ∘ hyp`. `align_dp` is the classical dynamic program and serves
//! as its independent check. Both break ties the same way, so they agree on
//! the edit script and not just on the cost.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fst::{
    backward_distances, forward_distances, sausage_fst, shortest_path, Arc, Fst, Label,
    LevTransducer, StateId, Wfst, EPSILON,
};
use crate::types::{Alignment, EditOp, Token, TokenSeq};

pub use crate::types::AlternativeSet;

/// Unit-cost edit distance with backtrace.
///
/// Builds the suffix-distance table, then walks forward from the origin
/// taking the first optimal move in COR, SUB, DEL, INS order. The result is
/// the lexicographically smallest optimal edit script.
pub fn align_dp(reference: &TokenSeq, hypothesis: &TokenSeq) -> Alignment {
    let r = reference.tokens();
    let h = hypothesis.tokens();
    let (n, m) = (r.len(), h.len());
    let w = m + 1;
    // dist[i * w + j] = distance between r[i..] and h[j..]
    let mut dist = vec![0usize; (n + 1) * w];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            dist[i * w + j] = if i == n {
                m - j
            } else if j == m {
                n - i
            } else {
                let diag = dist[(i + 1) * w + j + 1] + usize::from(r[i] != h[j]);
                let del = dist[(i + 1) * w + j] + 1;
                let ins = dist[i * w + j + 1] + 1;
                diag.min(del).min(ins)
            };
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let here = dist[i * w + j];
        if i < n && j < m && dist[(i + 1) * w + j + 1] + usize::from(r[i] != h[j]) == here {
            ops.push(EditOp::from_pair(Some(&r[i]), Some(&h[j])).expect("both sides present"));
            i += 1;
            j += 1;
        } else if i < n && dist[(i + 1) * w + j] + 1 == here {
            ops.push(EditOp::Del(r[i].clone()));
            i += 1;
        } else {
            ops.push(EditOp::Ins(h[j].clone()));
            j += 1;
        }
    }
    Alignment::from_ops(ops)
}

fn token(lev: &LevTransducer, label: Label) -> Result<Token> {
    lev.table()
        .token(label)
        .ok_or_else(|| Error::UnknownSymbol(lev.table().display(label)))
}

/// Turns a path through a composed lattice into an edit script. Tag arcs
/// carry no edit and are dropped.
fn path_to_alignment(lev: &LevTransducer, arcs: &[Arc]) -> Result<Alignment> {
    let table = lev.table();
    let mut ops = Vec::with_capacity(arcs.len());
    for a in arcs {
        if table.is_tag(a.olabel) || (a.ilabel == EPSILON && a.olabel == EPSILON) {
            continue;
        }
        let op = match (a.ilabel, a.olabel) {
            (EPSILON, o) => EditOp::Ins(token(lev, o)?),
            (i, EPSILON) => EditOp::Del(token(lev, i)?),
            (i, o) => EditOp::from_pair(Some(&token(lev, i)?), Some(&token(lev, o)?))
                .expect("both sides present"),
        };
        ops.push(op);
    }
    Ok(Alignment::from_ops(ops))
}

/// Edit distance alignment through the factored Levenshtein transducer.
pub fn align_fst(
    reference: &TokenSeq,
    hypothesis: &TokenSeq,
    lev: &LevTransducer,
) -> Result<Alignment> {
    let lattice = lev.lattice_for(reference, hypothesis)?;
    let best = shortest_path(&lattice)?;
    let alignment = path_to_alignment(lev, &best.arcs)?;
    debug_assert_eq!(alignment.cost() as f64, best.cost);
    Ok(alignment)
}

/// Alignment against the best expansion of the hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaeResult {
    pub alignment: Alignment,
    /// Hypothesis variant realized by the optimal path.
    pub selected_hyp: TokenSeq,
}

impl DaeResult {
    pub fn selected_hyp_len(&self) -> usize {
        self.selected_hyp.len()
    }
}

/// Aligns `reference` against the hypothesis with every alternative
/// expansion available. The reference is never expanded.
///
/// The cost is the minimum edit distance over all hypothesis variants.
/// Among equally cheap variants the shorter one wins, then the
/// lexicographically smaller one (by token text). The edit script is then
/// the regular tie-broken alignment against the chosen variant.
pub fn align_dae(
    reference: &TokenSeq,
    hypothesis: &TokenSeq,
    alts: &[AlternativeSet],
    lev: &LevTransducer,
) -> Result<DaeResult> {
    if alts.is_empty() {
        return Ok(DaeResult {
            alignment: align_fst(reference, hypothesis, lev)?,
            selected_hyp: hypothesis.clone(),
        });
    }
    let table = lev.table();
    let expanded = sausage_fst(hypothesis, alts, table)?;
    let lattice = lev.lattice(&Wfst::linear(reference, table)?, &expanded);
    let (cost, selected) = best_variant(&lattice, lev)?;
    let alignment = align_fst(reference, &selected, lev)?;
    debug_assert_eq!(alignment.cost() as f64, cost);
    Ok(DaeResult {
        alignment,
        selected_hyp: selected,
    })
}

fn same(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite() && (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Minimum cost over the lattice, and the output token string selected by
/// (cost, output length, lexicographic order).
fn best_variant(lattice: &Wfst, lev: &LevTransducer) -> Result<(f64, TokenSeq)> {
    let table = lev.table();
    let start = lattice.start().ok_or(Error::EmptyLanguage)?;
    let finals = |s: StateId| lattice.final_cost(s);

    // Pass 1: restrict to arcs on some minimum-cost path.
    let fwd = forward_distances(lattice, |_, a| Some(a.cost));
    let bwd = backward_distances(lattice, |_, a| Some(a.cost), finals);
    let best = bwd[start];
    if !best.is_finite() {
        return Err(Error::EmptyLanguage);
    }
    let on_cost_path = |s: StateId, a: &Arc| same(fwd[s] + a.cost + bwd[a.next], best);
    let cost_final = |s: StateId| finals(s).filter(|&fc| same(fwd[s] + fc, best)).map(|_| 0.0);

    // Pass 2: among those, minimize the number of emitted words.
    let emits = |a: &Arc| table.is_token(a.olabel);
    let words = |s: StateId, a: &Arc| on_cost_path(s, a).then(|| if emits(a) { 1.0 } else { 0.0 });
    let fwd_len = forward_distances(lattice, words);
    let bwd_len = backward_distances(lattice, words, cost_final);
    let shortest = bwd_len[start];
    let keep = |s: StateId, a: &Arc| {
        words(s, a).is_some_and(|w| same(fwd_len[s] + w + bwd_len[a.next], shortest))
    };
    let accepting = |s: StateId| cost_final(s).is_some() && same(fwd_len[s], shortest);

    // Pass 3: smallest output string over the surviving arcs, one word at a
    // time across the whole frontier of equivalent states.
    let closure = |seeds: Vec<StateId>| {
        let mut seen = vec![false; lattice.num_states()];
        let mut stack = seeds;
        let mut out = Vec::new();
        while let Some(s) = stack.pop() {
            if std::mem::replace(&mut seen[s], true) {
                continue;
            }
            out.push(s);
            for a in lattice.arcs_ref(s) {
                if !emits(a) && keep(s, a) {
                    stack.push(a.next);
                }
            }
        }
        out.sort_unstable();
        out
    };
    let mut frontier = closure(vec![start]);
    let mut selected = Vec::new();
    while !frontier.iter().any(|&s| accepting(s)) {
        let mut choice: Option<(&str, Vec<StateId>)> = None;
        for &s in &frontier {
            for a in lattice.arcs_ref(s) {
                if !(emits(a) && keep(s, a)) {
                    continue;
                }
                let text = table.text(a.olabel).unwrap_or("");
                match &mut choice {
                    Some((best_text, targets)) => match text.cmp(best_text) {
                        Ordering::Less => choice = Some((text, vec![a.next])),
                        Ordering::Equal => targets.push(a.next),
                        Ordering::Greater => {}
                    },
                    None => choice = Some((text, vec![a.next])),
                }
            }
        }
        let (text, targets) = choice.ok_or(Error::EmptyLanguage)?;
        selected.push(Token::new(text)?);
        frontier = closure(targets);
    }
    Ok((best, TokenSeq::new(selected)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fst::{build_lev, SymbolTable};
    use crate::types::OpKind;

    fn seq(s: &str) -> TokenSeq {
        crate::types::tokenize(s)
    }

    fn lev_for(seqs: &[&TokenSeq], alts: &[AlternativeSet]) -> LevTransducer {
        let mut t = SymbolTable::from_seqs(seqs.iter().copied());
        for a in alts {
            for m in a.members() {
                t.add_seq(m);
            }
            t.reserve_tags(a.len());
        }
        build_lev(t)
    }

    fn set(line: &str) -> AlternativeSet {
        AlternativeSet::new(line.split('=').map(seq).collect()).unwrap()
    }

    const FIG_REF: &str = "FOR OLDER KIDS THAT CAN BE THE SAME WE DO IT AS ADULTS";
    const FIG_HYP: &str =
        "FOR OLDER KIDS THAT CAN BE THE SAME WAY WE DO IT AS ADULTS FOR MORE INFORMATION VISIT WWW DOT FEMA DOT GOV";

    #[test]
    fn dp_examples() {
        let x = seq("a b c");
        let a = align_dp(&x, &x);
        assert_eq!(a.cost(), 0);
        assert!(a.kinds().iter().all(|k| *k == OpKind::Cor));

        let a = align_dp(&seq(FIG_REF), &seq(FIG_HYP));
        assert_eq!((a.cor, a.sub, a.ins, a.del, a.cost()), (13, 0, 10, 0, 10));

        let a = align_dp(&seq("a"), &seq(""));
        assert_eq!(a.cost(), 1);
        assert_eq!(a.kinds(), [OpKind::Del]);
    }

    #[test]
    fn dp_prefers_substitution_over_del_ins() {
        let a = align_dp(&seq("a b"), &seq("b c"));
        // DEL a, COR b, INS c (cost 2) ties with SUB, SUB (cost 2); SUB first wins.
        assert_eq!(a.cost(), 2);
        assert_eq!(a.kinds(), [OpKind::Sub, OpKind::Sub]);
    }

    #[test]
    fn fst_examples() {
        let (r, h) = (seq("a b"), seq("a c"));
        let lev = lev_for(&[&r, &h], &[]);
        let a = align_fst(&r, &h, &lev).unwrap();
        assert_eq!((a.cost(), a.sub), (1, 1));

        let e = seq("");
        let a = align_fst(&e, &e, &lev).unwrap();
        assert_eq!(a.cost(), 0);
        assert!(a.ops().is_empty());

        let (r, h) = (seq(FIG_REF), seq(FIG_HYP));
        let lev = lev_for(&[&r, &h], &[]);
        assert_eq!(align_fst(&r, &h, &lev).unwrap(), align_dp(&r, &h));
    }

    #[test]
    fn dae_contraction() {
        let r = seq("we are here early");
        let h = seq("we're here early");
        let alts = [set("we're = we are")];
        let lev = lev_for(&[&r, &h], &alts);
        let out = align_dae(&r, &h, &alts, &lev).unwrap();
        assert_eq!(out.alignment.cost(), 0);
        assert_eq!(out.selected_hyp, r);
        assert_eq!(out.selected_hyp_len(), 4);
    }

    #[test]
    fn dae_hypothesis_span() {
        let r = seq("ok");
        let h = seq("o k");
        let alts = [set("ok = o k = okay")];
        let lev = lev_for(&[&r, &h], &alts);
        let out = align_dae(&r, &h, &alts, &lev).unwrap();
        assert_eq!(out.alignment.cost(), 0);
        assert_eq!(out.selected_hyp, seq("ok"));
    }

    #[test]
    fn dae_without_alternatives_matches_fst() {
        let (r, h) = (seq("a b c"), seq("a x c d"));
        let lev = lev_for(&[&r, &h], &[]);
        let out = align_dae(&r, &h, &[], &lev).unwrap();
        assert_eq!(out.alignment, align_fst(&r, &h, &lev).unwrap());
        assert_eq!(out.selected_hyp, h);
    }

    #[test]
    fn dae_tie_prefers_shorter_then_lexicographic() {
        // Both variants cost 1 against "x"; "ok" is shorter than "o k".
        let r = seq("x");
        let h = seq("o k");
        let alts = [set("ok = o k")];
        let lev = lev_for(&[&r, &h], &alts);
        let out = align_dae(&r, &h, &alts, &lev).unwrap();
        assert_eq!(out.alignment.cost(), 1);
        assert_eq!(out.selected_hyp, seq("ok"));

        // Same length and cost: "alpha" < "beta".
        let r = seq("x");
        let h = seq("beta");
        let alts = [set("beta = alpha")];
        let lev = lev_for(&[&r, &h], &alts);
        let out = align_dae(&r, &h, &alts, &lev).unwrap();
        assert_eq!(out.selected_hyp, seq("alpha"));
    }

    #[test]
    fn dae_edits_inside_branch_are_allowed() {
        // Best variant "we are here" still needs one substitution.
        let r = seq("we were here");
        let h = seq("we're here");
        let alts = [set("we're = we are")];
        let lev = lev_for(&[&r, &h], &alts);
        let out = align_dae(&r, &h, &alts, &lev).unwrap();
        assert_eq!(out.alignment.cost(), 1);
        assert_eq!(out.selected_hyp, seq("we are here"));
    }

    #[test]
    fn reference_is_never_expanded() {
        let r = seq("we're here");
        let h = seq("we are here");
        let alts = [set("we're = we are")];
        let lev = lev_for(&[&r, &h], &alts);
        let out = align_dae(&r, &h, &alts, &lev).unwrap();
        // The hypothesis side can contract to match the reference.
        assert_eq!(out.alignment.cost(), 0);
        assert_eq!(out.alignment.ref_tokens(), r);
    }
}
