//! Shared scoring vocabulary: tokens, token sequences, edit operations and
//! alignments.

use std::fmt;

use crate::error::Error;

/// A single word unit. Never empty, never contains whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn new(text: impl Into<String>) -> Result<Self, Error> {
        let text = text.into();
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(text));
        }
        Ok(Token(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Ordered word sequence for one side (reference or hypothesis) of an
/// utterance.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenSeq(Vec<Token>);

impl TokenSeq {
    pub fn new(tokens: Vec<Token>) -> Self {
        TokenSeq(tokens)
    }

    /// Builds a sequence from string slices. Fragments are re-split on
    /// whitespace, so `["a b"]` yields two tokens and empty strings vanish.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        TokenSeq(
            words
                .iter()
                .flat_map(|w| w.as_ref().split_whitespace())
                .map(|w| Token(w.to_owned()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Token> {
        self.0
    }

    /// Space-joined surface form.
    pub fn join(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(t.as_str());
        }
        out
    }
}

impl FromIterator<Token> for TokenSeq {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        TokenSeq(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TokenSeq {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join())
    }
}

/// Splits text on runs of whitespace.
pub fn tokenize(text: &str) -> TokenSeq {
    TokenSeq(
        text.split_whitespace()
            .map(|w| Token(w.to_owned()))
            .collect(),
    )
}

/// Edit operation kinds. The derived order (COR < SUB < DEL < INS) is the
/// tie-break order used by every aligner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Cor,
    Sub,
    Del,
    Ins,
}

impl OpKind {
    /// Unit edit cost.
    pub fn cost(self) -> usize {
        match self {
            OpKind::Cor => 0,
            _ => 1,
        }
    }

    /// Single-letter mark used in alignment displays; blank for matches.
    pub fn mark(self) -> char {
        match self {
            OpKind::Cor => ' ',
            OpKind::Sub => 'S',
            OpKind::Del => 'D',
            OpKind::Ins => 'I',
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::Cor => "COR",
            OpKind::Sub => "SUB",
            OpKind::Del => "DEL",
            OpKind::Ins => "INS",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EditOp {
    Cor(Token),
    Sub { reference: Token, hypothesis: Token },
    Ins(Token),
    Del(Token),
}

impl EditOp {
    /// Classifies a column. `None` on both sides is not a valid operation.
    pub fn from_pair(reference: Option<&Token>, hypothesis: Option<&Token>) -> Option<Self> {
        match (reference, hypothesis) {
            (Some(r), Some(h)) if r == h => Some(EditOp::Cor(r.clone())),
            (Some(r), Some(h)) => Some(EditOp::Sub {
                reference: r.clone(),
                hypothesis: h.clone(),
            }),
            (Some(r), None) => Some(EditOp::Del(r.clone())),
            (None, Some(h)) => Some(EditOp::Ins(h.clone())),
            (None, None) => None,
        }
    }

    pub fn kind(&self) -> OpKind {
        match self {
            EditOp::Cor(_) => OpKind::Cor,
            EditOp::Sub { .. } => OpKind::Sub,
            EditOp::Ins(_) => OpKind::Ins,
            EditOp::Del(_) => OpKind::Del,
        }
    }

    pub fn ref_token(&self) -> Option<&Token> {
        match self {
            EditOp::Cor(t) | EditOp::Del(t) => Some(t),
            EditOp::Sub { reference, .. } => Some(reference),
            EditOp::Ins(_) => None,
        }
    }

    pub fn hyp_token(&self) -> Option<&Token> {
        match self {
            EditOp::Cor(t) | EditOp::Ins(t) => Some(t),
            EditOp::Sub { hypothesis, .. } => Some(hypothesis),
            EditOp::Del(_) => None,
        }
    }
}

/// Ordered edit script plus tallies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment {
    ops: Vec<EditOp>,
    pub cor: usize,
    pub sub: usize,
    pub ins: usize,
    pub del: usize,
}

impl Alignment {
    pub fn from_ops(ops: Vec<EditOp>) -> Self {
        let mut a = Alignment {
            ops: Vec::new(),
            cor: 0,
            sub: 0,
            ins: 0,
            del: 0,
        };
        for op in &ops {
            match op.kind() {
                OpKind::Cor => a.cor += 1,
                OpKind::Sub => a.sub += 1,
                OpKind::Ins => a.ins += 1,
                OpKind::Del => a.del += 1,
            }
        }
        a.ops = ops;
        a
    }

    pub fn ops(&self) -> &[EditOp] {
        &self.ops
    }

    /// Levenshtein distance realized by this script.
    pub fn cost(&self) -> usize {
        self.sub + self.ins + self.del
    }

    pub fn ref_len(&self) -> usize {
        self.cor + self.sub + self.del
    }

    pub fn hyp_len(&self) -> usize {
        self.cor + self.sub + self.ins
    }

    pub fn count(&self, kind: OpKind) -> usize {
        match kind {
            OpKind::Cor => self.cor,
            OpKind::Sub => self.sub,
            OpKind::Ins => self.ins,
            OpKind::Del => self.del,
        }
    }

    pub fn kinds(&self) -> Vec<OpKind> {
        self.ops.iter().map(EditOp::kind).collect()
    }

    /// Reference side of the script, in order.
    pub fn ref_tokens(&self) -> TokenSeq {
        self.ops
            .iter()
            .filter_map(|o| o.ref_token().cloned())
            .collect()
    }

    /// Hypothesis side of the script, in order.
    pub fn hyp_tokens(&self) -> TokenSeq {
        self.ops
            .iter()
            .filter_map(|o| o.hyp_token().cloned())
            .collect()
    }

    /// Checks that the script spells out exactly `reference` and `hypothesis`.
    pub fn is_consistent_with(&self, reference: &TokenSeq, hypothesis: &TokenSeq) -> bool {
        self.ref_len() == reference.len()
            && self.hyp_len() == hypothesis.len()
            && &self.ref_tokens() == reference
            && &self.hyp_tokens() == hypothesis
    }
}

/// Equivalence class of token sequences (`we're = we are`). At least two
/// members, none empty, no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlternativeSet {
    members: Vec<TokenSeq>,
}

impl AlternativeSet {
    pub fn new(members: Vec<TokenSeq>) -> Result<Self, Error> {
        if members.len() < 2 {
            return Err(Error::InvalidAlternativeSet(format!(
                "need at least two members, got {}",
                members.len()
            )));
        }
        for (i, m) in members.iter().enumerate() {
            if m.is_empty() {
                return Err(Error::InvalidAlternativeSet("empty member".to_owned()));
            }
            if members[..i].contains(m) {
                return Err(Error::InvalidAlternativeSet(format!(
                    "duplicate member {:?}",
                    m.join()
                )));
            }
        }
        Ok(AlternativeSet { members })
    }

    pub fn members(&self) -> &[TokenSeq] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for AlternativeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(" = ")?;
            }
            f.write_str(&m.join())?;
        }
        Ok(())
    }
}
