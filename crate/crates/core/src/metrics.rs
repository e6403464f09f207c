//! Error rates and corpus aggregation.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::types::{Alignment, OpKind, TokenSeq};

/// An exact ratio `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rate {
    pub num: u64,
    pub den: u64,
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::UndefinedMetric);
        }
        Ok(Rate { num, den })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// The rate as a percentage in hundredths, rounded half away from zero
    /// with integer arithmetic (`10/13` is 7692, i.e. 76.92%).
    pub fn hundredths(self) -> u64 {
        let (n, d) = (self.num as u128, self.den as u128);
        ((2 * n * 10_000 + d) / (2 * d)) as u64
    }

    /// Percentage with exactly two decimals, e.g. `"76.92"`.
    pub fn percent(self) -> String {
        let h = self.hundredths();
        format!("{}.{:02}", h / 100, h % 100)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.percent())
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

/// TER = edit distance / reference length. Undefined for an empty reference.
/// Not clamped: many insertions push it above 1.
pub fn ter(alignment: &Alignment) -> Result<Rate> {
    Rate::new(alignment.cost() as u64, alignment.ref_len() as u64)
}

/// mTER = edit distance / max(reference length, hypothesis length).
/// Two empty sequences score 0.
pub fn mter(alignment: &Alignment) -> Rate {
    let den = alignment.ref_len().max(alignment.hyp_len()) as u64;
    if den == 0 {
        return Rate { num: 0, den: 1 };
    }
    Rate {
        num: alignment.cost() as u64,
        den,
    }
}

/// Per-utterance result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtteranceScore {
    pub uid: String,
    pub alignment: Alignment,
    /// `None` when the reference is empty.
    pub ter: Option<Rate>,
    pub mter: Rate,
}

impl UtteranceScore {
    pub fn new(uid: impl Into<String>, alignment: Alignment) -> Self {
        let uid = uid.into();
        let ter = ter(&alignment).ok();
        if ter.is_none() {
            log::warn!("utterance {uid}: empty reference, TER undefined");
        }
        let mter = mter(&alignment);
        UtteranceScore {
            uid,
            alignment,
            ter,
            mter,
        }
    }

    pub fn ref_len(&self) -> usize {
        self.alignment.ref_len()
    }

    pub fn hyp_len(&self) -> usize {
        self.alignment.hyp_len()
    }
}

/// Corpus totals. `ter` and `mter` are micro averages: summed edits over
/// summed denominators. The macro averages are the plain mean of the
/// per-utterance rates and are reported only as a supplement.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusScore {
    pub utterances: usize,
    pub cor: usize,
    pub sub: usize,
    pub ins: usize,
    pub del: usize,
    pub ref_words: usize,
    pub hyp_words: usize,
    pub ter: Rate,
    pub mter: Rate,
    pub macro_ter: f64,
    pub macro_mter: f64,
    /// Utterances left out of `macro_ter` because their reference is empty.
    pub undefined_ter: usize,
}

impl CorpusScore {
    pub fn errors(&self) -> usize {
        self.sub + self.ins + self.del
    }
}

pub fn corpus_aggregate(scores: &[UtteranceScore]) -> Result<CorpusScore> {
    if scores.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let count = |k: OpKind| scores.iter().map(|s| s.alignment.count(k)).sum::<usize>();
    let (cor, sub, ins, del) = (
        count(OpKind::Cor),
        count(OpKind::Sub),
        count(OpKind::Ins),
        count(OpKind::Del),
    );
    let ref_words: usize = scores.iter().map(|s| s.ref_len()).sum();
    let hyp_words: usize = scores.iter().map(|s| s.hyp_len()).sum();
    let errors = (sub + ins + del) as u64;
    let mter_den: u64 = scores.iter().map(|s| s.mter.den).sum();
    let mter_num: u64 = scores.iter().map(|s| s.mter.num).sum();

    let defined: Vec<f64> = scores
        .iter()
        .filter_map(|s| s.ter)
        .map(Rate::value)
        .collect();
    let macro_ter = if defined.is_empty() {
        f64::NAN
    } else {
        defined.iter().sum::<f64>() / defined.len() as f64
    };
    let macro_mter = scores.iter().map(|s| s.mter.value()).sum::<f64>() / scores.len() as f64;

    Ok(CorpusScore {
        utterances: scores.len(),
        cor,
        sub,
        ins,
        del,
        ref_words,
        hyp_words,
        ter: Rate::new(errors, ref_words as u64)?,
        mter: Rate {
            num: mter_num,
            den: mter_den.max(1),
        },
        macro_ter,
        macro_mter,
        undefined_ter: scores.len() - defined.len(),
    })
}

/// Competition ranks ("1224") of `rates`, lowest rate first. Rates are
/// compared at the two-decimal precision they are reported with, so values
/// that print the same share a rank.
pub fn rank_models(rates: &[Rate]) -> Vec<usize> {
    let shown: Vec<u64> = rates.iter().map(|r| r.hundredths()).collect();
    shown
        .iter()
        .map(|&v| 1 + shown.iter().filter(|&&o| o < v).count())
        .collect()
}

/// A triple that breaks the triangle inequality for mTER.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleViolation {
    pub a: TokenSeq,
    pub b: TokenSeq,
    pub c: TokenSeq,
    pub ab: f64,
    pub bc: f64,
    pub ac: f64,
}

/// Checks `d(a,c) <= d(a,b) + d(b,c)` for mTER given the three pairwise
/// alignments. mTER is normalized per pair, so this can fail; callers log
/// the counterexample rather than treat it as an error.
pub fn mter_triangle(
    a: &TokenSeq,
    b: &TokenSeq,
    c: &TokenSeq,
    align: impl Fn(&TokenSeq, &TokenSeq) -> Alignment,
) -> Option<TriangleViolation> {
    let d = |x: &TokenSeq, y: &TokenSeq| mter(&align(x, y)).value();
    let (ab, bc, ac) = (d(a, b), d(b, c), d(a, c));
    (ac > ab + bc + 1e-12).then(|| TriangleViolation {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        ab,
        bc,
        ac,
    })
}
