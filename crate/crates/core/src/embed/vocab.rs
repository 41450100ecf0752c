use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::role::Token;
use crate::walk::WalkCorpus;

/// Token table with corpus frequencies. Ids are those of the corpus.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    tokens: Vec<Token>,
    counts: Vec<u64>,
    index: HashMap<Token, u32>,
}

/// Count every token of `corpus`. No frequency cut-off is applied.
pub fn build_vocab(corpus: &WalkCorpus) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::Empty("walk corpus".into()));
    }
    let tokens = corpus.tokens().to_vec();
    let counts = corpus.counts();
    let index = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i as u32))
        .collect();
    Ok(Vocabulary {
        tokens,
        counts,
        index,
    })
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &Token) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: u32) -> &Token {
        &self.tokens[id as usize]
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn is_original(&self, id: u32) -> bool {
        self.tokens[id as usize].is_node()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::role::RoleToken;

    #[test]
    fn counts_and_flags() {
        let a = Token::Node(0);
        let t1 = Token::Role(RoleToken::Sp {
            anchor_degree: 1,
            degree: 1,
            dist: 1,
        });
        let c = WalkCorpus::from_walks(&[vec![a.clone(), t1.clone(), a.clone()]]);
        let v = build_vocab(&c).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v.count(v.id(&a).unwrap()), 2);
        assert_eq!(v.count(v.id(&t1).unwrap()), 1);
        assert!(v.is_original(v.id(&a).unwrap()));
        assert!(!v.is_original(v.id(&t1).unwrap()));
        assert_eq!(v.total(), c.len() as u64);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(build_vocab(&WalkCorpus::from_walks(&[])).is_err());
        assert!(build_vocab(&WalkCorpus::from_walks(&[vec![]])).is_err());
    }
}
