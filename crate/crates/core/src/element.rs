//! Group elements, held as their ShortLex normal form.

use crate::system::CoxeterSystem;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A word in generator indices; not necessarily reduced.
pub type Word = Vec<u8>;

/// An element of a Coxeter group. `word` is the ShortLex normal form, so
/// structural equality is group equality (within one system). The system
/// content hash guards against accidental cross-system mixing.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Element {
    word: Box<[u8]>,
    sys: u64,
}

impl Element {
    pub(crate) fn from_canonical(word: Vec<u8>, sys: &CoxeterSystem) -> Element {
        Element { word: word.into_boxed_slice(), sys: sys.hash() }
    }

    pub fn identity(sys: &CoxeterSystem) -> Element {
        Element::from_canonical(Vec::new(), sys)
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn sys_hash(&self) -> u64 {
        self.sys
    }

    pub fn belongs_to(&self, sys: &CoxeterSystem) -> bool {
        self.sys == sys.hash()
    }

    /// ShortLex order: by length, then lexicographically by generator index.
    pub fn shortlex_cmp(&self, other: &Element) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other).then_with(|| self.sys.cmp(&other.sys))
    }
}
