//! Alignment checked against independent oracles: a memoized recursive edit
//! distance, exhaustive path enumeration, and explicit enumeration of
//! hypothesis variants.

use std::collections::HashMap;

use proptest::prelude::*;
use terkit::fst::{find_alternative_spans, sausage_fst, shortest_path, Arc, Wfst};
use terkit::{
    align_dae, align_dp, align_fst, build_lev, AlternativeSet, LevTransducer, OpKind, SymbolTable,
    TokenSeq,
};

fn seq(words: &[String]) -> TokenSeq {
    TokenSeq::from_words(words)
}

/// Edit distance by plain recursion with memoization, written without
/// reference to the library's table layout.
fn oracle_distance(a: &[String], b: &[String]) -> usize {
    fn go(a: &[String], b: &[String], memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if a.is_empty() {
            return b.len();
        }
        if b.is_empty() {
            return a.len();
        }
        let key = (a.len(), b.len());
        if let Some(&d) = memo.get(&key) {
            return d;
        }
        let d = if a[0] == b[0] {
            go(&a[1..], &b[1..], memo)
        } else {
            1 + go(&a[1..], &b[1..], memo)
                .min(go(&a[1..], b, memo))
                .min(go(a, &b[1..], memo))
        };
        memo.insert(key, d);
        d
    }
    go(a, b, &mut HashMap::new())
}

/// Every accepting path of an acyclic machine as (output labels, cost),
/// found by depth-first search.
fn enumerate(f: &Wfst) -> Vec<(Vec<u32>, f64)> {
    fn go(f: &Wfst, s: usize, out: &mut Vec<u32>, cost: f64, acc: &mut Vec<(Vec<u32>, f64)>) {
        if let Some((_, fc)) = f.finals().find(|(q, _)| *q == s) {
            acc.push((out.clone(), cost + fc));
        }
        for a in f.arcs_ref(s) {
            out.push(a.olabel);
            go(f, a.next, out, cost + a.cost, acc);
            out.pop();
        }
    }
    let mut acc = Vec::new();
    if let Some(s) = terkit::fst::Fst::start(f) {
        go(f, s, &mut Vec::new(), 0.0, &mut acc);
    }
    acc
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

fn words(max_len: usize, alphabet: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec((0..alphabet).prop_map(|i| format!("w{i}")), 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dp_matches_recursive_oracle(a in words(12, 10), b in words(12, 10)) {
        let al = align_dp(&seq(&a), &seq(&b));
        prop_assert_eq!(al.cost(), oracle_distance(&a, &b));
        prop_assert!(al.is_consistent_with(&seq(&a), &seq(&b)));
    }

    #[test]
    fn fst_matches_dp_including_ops(a in words(12, 10), b in words(12, 10)) {
        let (r, h) = (seq(&a), seq(&b));
        let lev = lev_for(&[&r, &h], &[]);
        let fst = align_fst(&r, &h, &lev).unwrap();
        let dp = align_dp(&r, &h);
        prop_assert_eq!(fst, dp);
    }

    #[test]
    fn cost_is_symmetric_and_bounded(a in words(12, 6), b in words(12, 6)) {
        let (r, h) = (seq(&a), seq(&b));
        let ab = align_dp(&r, &h);
        let ba = align_dp(&h, &r);
        prop_assert_eq!(ab.cost(), ba.cost());
        // Only the cost mirrors; tie-breaking may pick different scripts.
        prop_assert!(a.len().abs_diff(b.len()) <= ab.cost());
        prop_assert!(ab.cost() <= a.len().max(b.len()));
    }

    #[test]
    fn scripts_follow_tie_break_order(a in words(8, 3), b in words(8, 3)) {
        // No alternative optimal script is lexicographically smaller. Check
        // by trying every single-step deviation at each prefix.
        let (r, h) = (seq(&a), seq(&b));
        let al = align_dp(&r, &h);
        let (mut i, mut j) = (0usize, 0usize);
        let mut spent = 0usize;
        for k in al.kinds() {
            for better in [OpKind::Cor, OpKind::Sub, OpKind::Del, OpKind::Ins] {
                if better >= k {
                    break;
                }
                let step = match better {
                    OpKind::Cor if i < a.len() && j < b.len() && a[i] == b[j] => Some((i + 1, j + 1, 0)),
                    OpKind::Sub if i < a.len() && j < b.len() && a[i] != b[j] => Some((i + 1, j + 1, 1)),
                    OpKind::Del if i < a.len() => Some((i + 1, j, 1)),
                    OpKind::Ins if j < b.len() => Some((i, j + 1, 1)),
                    _ => None,
                };
                if let Some((ni, nj, c)) = step {
                    let total = spent + c + oracle_distance(&a[ni..], &b[nj..]);
                    prop_assert!(total > al.cost(), "{:?} at ({}, {}) would also be optimal", better, i, j);
                }
            }
            match k {
                OpKind::Cor => { i += 1; j += 1; }
                OpKind::Sub => { i += 1; j += 1; spent += 1; }
                OpKind::Del => { i += 1; spent += 1; }
                OpKind::Ins => { j += 1; spent += 1; }
            }
        }
    }
}

/// Random acyclic machine: arcs only go from lower to higher state ids.
fn acyclic_fst() -> impl Strategy<Value = Wfst> {
    (2usize..=6)
        .prop_flat_map(|n| {
            let arcs = prop::collection::vec((0..n, 0..n, 0u32..4, 0u32..4, 0u8..5), 0..14);
            let finals = prop::collection::vec(prop::option::of(0u8..3), n);
            (Just(n), arcs, finals)
        })
        .prop_map(|(n, arcs, finals)| {
            let mut f = Wfst::new();
            for _ in 0..n {
                f.add_state();
            }
            f.set_start(0);
            for (s, fc) in finals.iter().enumerate() {
                if let Some(c) = fc {
                    f.set_final(s, f64::from(*c));
                }
            }
            for (a, b, i, o, c) in arcs {
                if a < b {
                    f.add_arc(a, Arc::new(i, o, f64::from(c) * 0.5, b));
                }
            }
            f
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn shortest_path_matches_enumeration(f in acyclic_fst()) {
        let best = enumerate(&f)
            .into_iter()
            .map(|(_, c)| c)
            .fold(f64::INFINITY, f64::min);
        match shortest_path(&f) {
            Ok(sp) => {
                prop_assert_eq!(sp.cost, best);
                let last = *sp.states.last().unwrap();
                let sum: f64 = sp.arcs.iter().map(|a| a.cost).sum::<f64>() + f.finals().find(|(s, _)| *s == last).unwrap().1;
                prop_assert_eq!(sum, sp.cost);
                prop_assert_eq!(sp.states.len(), sp.arcs.len() + 1);
            }
            Err(_) => prop_assert!(best.is_infinite()),
        }
    }
}

/// Every hypothesis obtained by replacing any set of non-overlapping
/// occurrences of alternative members with another member of the same set.
fn all_variants(hyp: &[String], alts: &[Vec<Vec<String>>]) -> Vec<Vec<String>> {
    fn go(
        hyp: &[String],
        alts: &[Vec<Vec<String>>],
        prefix: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) {
        if hyp.is_empty() {
            out.push(prefix.clone());
            return;
        }
        prefix.push(hyp[0].clone());
        go(&hyp[1..], alts, prefix, out);
        prefix.pop();
        for set in alts {
            for m in set {
                if hyp.starts_with(m) {
                    for other in set.iter().filter(|o| *o != m) {
                        let keep = prefix.len();
                        prefix.extend(other.iter().cloned());
                        go(&hyp[m.len()..], alts, prefix, out);
                        prefix.truncate(keep);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    go(hyp, alts, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// (cost, length, tokens) minimum over all variants.
fn best_variant(r: &[String], hyp: &[String], alts: &[Vec<Vec<String>>]) -> (usize, Vec<String>) {
    all_variants(hyp, alts)
        .into_iter()
        .map(|v| (oracle_distance(r, &v), v.len(), v))
        .min()
        .map(|(c, _, v)| (c, v))
        .unwrap()
}

fn alt_pool() -> Vec<Vec<Vec<String>>> {
    let split = |s: &str| s.split_whitespace().map(str::to_owned).collect::<Vec<_>>();
    [
        "we're = we are",
        "i'm = i am",
        "gonna = going to",
        "ok = o k = okay",
        "storyteller = story teller",
        "a = o",
    ]
    .iter()
    .map(|line| line.split('=').map(split).collect())
    .collect()
}

fn to_sets(raw: &[Vec<Vec<String>>]) -> Vec<AlternativeSet> {
    raw.iter()
        .map(|s| AlternativeSet::new(s.iter().map(|m| TokenSeq::from_words(m)).collect()).unwrap())
        .collect()
}

fn dae_words() -> impl Strategy<Value = Vec<String>> {
    let vocab = [
        "we're", "we", "are", "i'm", "i", "am", "gonna", "going", "to", "ok", "o", "k", "okay",
        "a", "here", "be",
    ];
    prop::collection::vec(
        prop::sample::select(vocab.to_vec()).prop_map(str::to_owned),
        0..=7,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn dae_matches_variant_enumeration(r in dae_words(), h in dae_words(), pick in prop::collection::vec(any::<bool>(), 6)) {
        let raw: Vec<_> = alt_pool().into_iter().zip(&pick).filter(|(_, p)| **p).map(|(s, _)| s).collect();
        let alts = to_sets(&raw);
        let (rs, hs) = (seq(&r), seq(&h));
        let lev = lev_for(&[&rs, &hs], &alts);
        let out = align_dae(&rs, &hs, &alts, &lev).unwrap();
        let (cost, variant) = best_variant(&r, &h, &raw);
        prop_assert_eq!(out.alignment.cost(), cost);
        prop_assert_eq!(&out.selected_hyp, &seq(&variant));
        prop_assert!(out.alignment.is_consistent_with(&rs, &out.selected_hyp));
        prop_assert_eq!(out.alignment.ref_tokens(), rs);
    }

    #[test]
    fn dae_is_monotone_in_alternatives(r in dae_words(), h in dae_words(), k in 0usize..6) {
        let pool = to_sets(&alt_pool());
        let (rs, hs) = (seq(&r), seq(&h));
        let lev = lev_for(&[&rs, &hs], &pool);
        let fewer = align_dae(&rs, &hs, &pool[..k], &lev).unwrap();
        let more = align_dae(&rs, &hs, &pool[..=k], &lev).unwrap();
        prop_assert!(more.alignment.cost() <= fewer.alignment.cost());
        let none = align_fst(&rs, &hs, &lev).unwrap();
        prop_assert!(fewer.alignment.cost() <= none.cost());
    }

    #[test]
    fn sausage_language_is_variant_set(h in dae_words()) {
        let raw = alt_pool();
        let alts = to_sets(&raw);
        let hs = seq(&h);
        let lev = lev_for(&[&hs], &alts);
        let f = sausage_fst(&hs, &alts, lev.table()).unwrap();
        let t = lev.table();
        let mut lang: Vec<Vec<String>> = enumerate(&f)
            .into_iter()
            .map(|(o, _)| o.into_iter().filter(|&l| t.is_token(l)).map(|l| t.text(l).unwrap().to_owned()).collect())
            .collect();
        lang.sort();
        lang.dedup();
        prop_assert_eq!(lang, all_variants(&h, &raw));
        prop_assert!(find_alternative_spans(&hs, &alts).windows(2).all(|w| w[0].start <= w[1].start));
    }
}
