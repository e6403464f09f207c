use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::types::{Token, TokenSeq};

pub type Label = u32;

pub const EPSILON: Label = 0;
/// Auxiliary symbol carrying a substitution between the two factors of the
/// Levenshtein transducer.
pub const AUX: Label = 1;

const FIRST_TOKEN: Label = 2;
/// Branch tags live in their own numeric range, so they can never collide
/// with token ids.
const TAG_BASE: Label = 1 << 31;

/// Bidirectional token/id map with reserved epsilon, auxiliary and tag ids.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    texts: Vec<String>,
    ids: HashMap<String, Label>,
    tags: u32,
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable::default()
    }

    /// Table holding every token of `seqs`, in first-seen order.
    pub fn from_seqs<'a>(seqs: impl IntoIterator<Item = &'a TokenSeq>) -> Self {
        let mut t = SymbolTable::new();
        for seq in seqs {
            t.add_seq(seq);
        }
        t
    }

    pub fn add(&mut self, text: &str) -> Label {
        if let Some(&id) = self.ids.get(text) {
            return id;
        }
        let id = FIRST_TOKEN + self.texts.len() as Label;
        assert!(id < TAG_BASE, "symbol table exhausted");
        self.texts.push(text.to_owned());
        self.ids.insert(text.to_owned(), id);
        id
    }

    pub fn add_seq(&mut self, seq: &TokenSeq) {
        for t in seq {
            self.add(t.as_str());
        }
    }

    /// Makes sure at least `n` branch tags exist.
    pub fn reserve_tags(&mut self, n: usize) {
        self.tags = self.tags.max(n as u32);
    }

    pub fn num_tags(&self) -> usize {
        self.tags as usize
    }

    pub fn tag(&self, k: usize) -> Option<Label> {
        (k < self.tags as usize).then(|| TAG_BASE + k as Label)
    }

    pub fn tags(&self) -> impl Iterator<Item = Label> {
        (0..self.tags).map(|k| TAG_BASE + k)
    }

    pub fn id(&self, text: &str) -> Option<Label> {
        self.ids.get(text).copied()
    }

    pub fn text(&self, id: Label) -> Option<&str> {
        if self.is_token(id) {
            self.texts
                .get((id - FIRST_TOKEN) as usize)
                .map(String::as_str)
        } else {
            None
        }
    }

    pub fn token(&self, id: Label) -> Option<Token> {
        self.text(id).and_then(|t| Token::new(t).ok())
    }

    pub fn is_token(&self, id: Label) -> bool {
        (FIRST_TOKEN..TAG_BASE).contains(&id) && ((id - FIRST_TOKEN) as usize) < self.texts.len()
    }

    pub fn is_tag(&self, id: Label) -> bool {
        id >= TAG_BASE && id - TAG_BASE < self.tags
    }

    pub fn token_labels(&self) -> impl Iterator<Item = Label> {
        FIRST_TOKEN..FIRST_TOKEN + self.texts.len() as Label
    }

    /// Vocabulary size (tokens only).
    pub fn num_tokens(&self) -> usize {
        self.texts.len()
    }

    pub fn labels_of(&self, seq: &TokenSeq) -> Result<Vec<Label>> {
        seq.iter()
            .map(|t| {
                self.id(t.as_str())
                    .ok_or_else(|| Error::UnknownSymbol(t.as_str().to_owned()))
            })
            .collect()
    }

    pub fn display(&self, id: Label) -> String {
        match id {
            EPSILON => "<eps>".to_owned(),
            AUX => "<sub>".to_owned(),
            _ if self.is_tag(id) => format!("#{}", id - TAG_BASE),
            _ => self
                .text(id)
                .map_or_else(|| format!("<{id}>"), str::to_owned),
        }
    }
}
