//! Rewrite-closure backend for the word problem.
//!
//! Normal forms are found by saturating a word's equivalence class under
//! the defining rewrites: adjacent equal letters cancel, and for a finite
//! bond m the two alternating words of length m in the pair of letters may
//! be swapped. The class of a reduced word is finite, so the search
//! terminates, but the class can be enormous for long words. This backend
//! exists to cross-check the root-walk engine on short inputs, and as an
//! alternative implementation of the same interface.

use crate::element::Word;
use crate::error::{CoxError, Result};
use crate::system::{CoxeterSystem, INF};
use std::collections::{HashSet, VecDeque};

/// All words obtainable from `w` by alternating-subword swaps, up to
/// `budget` words. A doubled-letter cancellation restarts the closure on
/// the shorter word, so the result is the full class of a reduced word.
fn reduced_class(
    sys: &CoxeterSystem,
    start: &[u8],
    budget: usize,
) -> Result<HashSet<Word>> {
    let mut word: Word = start.to_vec();
    'restart: loop {
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue: VecDeque<Word> = VecDeque::new();
        seen.insert(word.clone());
        queue.push_back(word.clone());
        while let Some(u) = queue.pop_front() {
            for i in 0..u.len().saturating_sub(1) {
                if u[i] == u[i + 1] {
                    let mut v = u.clone();
                    v.drain(i..i + 2);
                    word = v;
                    continue 'restart;
                }
            }
            for i in 0..u.len() {
                for j in i + 2..=u.len() {
                    let (s, t) = (u[i], u[i + 1]);
                    let m = sys.bond(s, t);
                    if m == INF || (j - i) != m as usize {
                        continue;
                    }
                    if !is_alternating(&u[i..j], s, t) {
                        continue;
                    }
                    let mut v = u.clone();
                    for (k, slot) in v[i..j].iter_mut().enumerate() {
                        *slot = if k % 2 == 0 { t } else { s };
                    }
                    if seen.insert(v.clone()) {
                        if seen.len() > budget {
                            return Err(CoxError::BudgetExceeded(format!(
                                "rewrite class exceeded {budget} words"
                            )));
                        }
                        queue.push_back(v);
                    }
                }
            }
        }
        return Ok(seen);
    }
}

fn is_alternating(seg: &[u8], s: u8, t: u8) -> bool {
    seg.iter()
        .enumerate()
        .all(|(k, &x)| x == if k % 2 == 0 { s } else { t })
}

/// ShortLex normal form computed purely by rewrite saturation.
pub fn normal_form_letters(
    sys: &CoxeterSystem,
    letters: &[u8],
    budget: usize,
) -> Result<Word> {
    let class = reduced_class(sys, letters, budget)?;
    Ok(class.into_iter().min().expect("class never empty"))
}

/// Equality test: both words rewrite into the same class.
pub fn words_equal(
    sys: &CoxeterSystem,
    a: &[u8],
    b: &[u8],
    budget: usize,
) -> Result<bool> {
    Ok(normal_form_letters(sys, a, budget)? == normal_form_letters(sys, b, budget)?)
}

pub fn is_reduced(sys: &CoxeterSystem, letters: &[u8], budget: usize) -> Result<bool> {
    Ok(normal_form_letters(sys, letters, budget)?.len() == letters.len())
}
