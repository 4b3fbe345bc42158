//! The word engine: reduced words, ShortLex normal forms, multiplication.
//!
//! Descent and exchange questions are answered by walking root vectors with
//! exact ring coordinates. A word is shrunk by the exchange property the
//! moment a root walk hits a simple root, so intermediate words are always
//! reduced and every answer is exact, with no growth in the closure of braid
//! rewrites. The independent backend in `rewrite` cross-checks this engine
//! at small lengths in tests.

use crate::element::{Element, Word};
use crate::error::{CoxError, Result};
use crate::ring::{Rg, RingCtx};
use crate::system::CoxeterSystem;
use std::collections::{HashMap, VecDeque};

pub type RootVec = Vec<Rg>;

impl CoxeterSystem {
    pub fn alpha(&self, s: u8) -> RootVec {
        let mut v = vec![self.ring().zero(); self.rank()];
        v[s as usize] = self.ring().one();
        v
    }

    /// Apply the reflection at generator s to a root vector in place.
    pub fn reflect(&self, s: u8, v: &mut RootVec) {
        let ring = self.ring();
        let mut c = ring.zero();
        for (t, vt) in v.iter().enumerate() {
            if !RingCtx::is_zero(vt) {
                let term = ring.mul(vt, self.two_b(t as u8, s));
                c = ring.add(&c, &term);
            }
        }
        v[s as usize] = ring.sub(&v[s as usize], &c);
    }

    fn is_simple(&self, v: &RootVec, s: u8) -> bool {
        let one = self.ring().one();
        v.iter().enumerate().all(|(t, vt)| {
            if t == s as usize {
                *vt == one
            } else {
                RingCtx::is_zero(vt)
            }
        })
    }

    /// Multiply a reduced word by s on the right, keeping it reduced.
    pub fn append_right(&self, word: &mut Word, s: u8) {
        let mut beta = self.alpha(s);
        for i in (0..word.len()).rev() {
            let wi = word[i];
            if self.is_simple(&beta, wi) {
                word.remove(i);
                return;
            }
            self.reflect(wi, &mut beta);
        }
        word.push(s);
    }

    /// Multiply a reduced word by t on the left, keeping it reduced.
    pub fn append_left(&self, word: &mut Word, t: u8) {
        let mut gamma = self.alpha(t);
        for i in 0..word.len() {
            let wi = word[i];
            if self.is_simple(&gamma, wi) {
                word.remove(i);
                return;
            }
            self.reflect(wi, &mut gamma);
        }
        word.insert(0, t);
    }

    pub fn is_right_descent(&self, word: &[u8], s: u8) -> bool {
        let mut beta = self.alpha(s);
        for i in (0..word.len()).rev() {
            let wi = word[i];
            if self.is_simple(&beta, wi) {
                return true;
            }
            self.reflect(wi, &mut beta);
        }
        false
    }

    pub fn is_left_descent(&self, word: &[u8], t: u8) -> bool {
        let mut gamma = self.alpha(t);
        for i in 0..word.len() {
            let wi = word[i];
            if self.is_simple(&gamma, wi) {
                return true;
            }
            self.reflect(wi, &mut gamma);
        }
        false
    }

    /// Reduce an arbitrary word to some reduced word for the same element.
    pub fn reduce(&self, letters: &[u8]) -> Word {
        let mut out = Vec::with_capacity(letters.len());
        for &s in letters {
            self.append_right(&mut out, s);
        }
        out
    }

    /// ShortLex canonical form of a reduced word: repeatedly peel off the
    /// smallest left descent, using the exchange property for the deletion.
    pub fn canonicalize(&self, mut u: Word) -> Word {
        let mut out = Vec::with_capacity(u.len());
        while !u.is_empty() {
            'letters: for t in 0..self.rank() as u8 {
                if t == u[0] {
                    out.push(t);
                    u.remove(0);
                    break 'letters;
                }
                let mut gamma = self.alpha(t);
                for i in 0..u.len() {
                    let ui = u[i];
                    if self.is_simple(&gamma, ui) {
                        out.push(t);
                        u.remove(i);
                        break 'letters;
                    }
                    self.reflect(ui, &mut gamma);
                }
            }
        }
        out
    }

    pub fn normal_form_letters(&self, letters: &[u8]) -> Word {
        self.canonicalize(self.reduce(letters))
    }

    /// Normal form of an arbitrary word over this system's generators.
    pub fn normal_form(&self, letters: &[u8]) -> Element {
        Element::from_canonical(self.normal_form_letters(letters), self)
    }

    pub fn element_from_str(&self, text: &str) -> Result<Element> {
        Ok(self.normal_form(&self.parse_word(text)?))
    }

    pub fn is_reduced(&self, letters: &[u8]) -> bool {
        self.reduce(letters).len() == letters.len()
    }

    pub fn identity(&self) -> Element {
        Element::identity(self)
    }

    pub fn generator(&self, s: u8) -> Element {
        Element::from_canonical(vec![s], self)
    }

    fn check_owned(&self, e: &Element) -> Result<()> {
        if e.belongs_to(self) {
            Ok(())
        } else {
            Err(CoxError::MixedSystems)
        }
    }

    /// Group product. Errors if either element came from a different system.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_owned(a)?;
        self.check_owned(b)?;
        Ok(self.mul(a, b))
    }

    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        debug_assert!(a.belongs_to(self) && b.belongs_to(self));
        let mut w = a.word().to_vec();
        for &s in b.word() {
            self.append_right(&mut w, s);
        }
        Element::from_canonical(self.canonicalize(w), self)
    }

    pub fn invert(&self, a: &Element) -> Result<Element> {
        self.check_owned(a)?;
        Ok(self.inv(a))
    }

    pub(crate) fn inv(&self, a: &Element) -> Element {
        let mut w: Word = a.word().to_vec();
        w.reverse();
        Element::from_canonical(self.canonicalize(w), self)
    }

    /// a^k for any integer k.
    pub fn power(&self, a: &Element, k: i64) -> Result<Element> {
        self.check_owned(a)?;
        Ok(self.pow(a, k))
    }

    pub(crate) fn pow(&self, a: &Element, k: i64) -> Element {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// a^k, refusing to build words longer than `max_len`.
    pub fn pow_bounded(&self, a: &Element, k: i64, max_len: usize) -> Result<Element> {
        self.check_owned(a)?;
        let need = a.len().saturating_mul(k.unsigned_abs() as usize);
        if need > max_len {
            return Err(CoxError::WordLengthBudget(need, max_len));
        }
        Ok(self.pow(a, k))
    }

    /// g w g^{-1}.
    pub fn conjugate(&self, g: &Element, w: &Element) -> Result<Element> {
        self.check_owned(g)?;
        self.check_owned(w)?;
        Ok(self.conj(g, w))
    }

    pub(crate) fn conj(&self, g: &Element, w: &Element) -> Element {
        self.mul(&self.mul(g, w), &self.inv(g))
    }

    pub fn left_descent_mask(&self, e: &Element) -> u64 {
        let mut mask = 0u64;
        for t in 0..self.rank() as u8 {
            if self.is_left_descent(e.word(), t) {
                mask |= 1u64 << t;
            }
        }
        mask
    }

    pub fn right_descent_mask(&self, e: &Element) -> u64 {
        let mut mask = 0u64;
        for s in 0..self.rank() as u8 {
            if self.is_right_descent(e.word(), s) {
                mask |= 1u64 << s;
            }
        }
        mask
    }

    /// Letters appearing in the normal form, as a bitmask.
    pub fn support_mask(&self, e: &Element) -> u64 {
        e.word().iter().fold(0u64, |acc, &s| acc | (1u64 << s))
    }

    /// Left inversions of w: the reflections s1, s1 s2 s1, ...,
    /// s1...sl...s1 read off a reduced word s1...sl. There are exactly
    /// length(w) of them, listed in prefix order.
    pub fn left_inversions(&self, e: &Element) -> Vec<Element> {
        let w = e.word();
        let mut out = Vec::with_capacity(w.len());
        for i in 0..w.len() {
            let mut letters: Word = w[..=i].to_vec();
            letters.extend(w[..i].iter().rev());
            out.push(self.normal_form(&letters));
        }
        out
    }

    /// Conjugation-by-letters length reduction. Strict single-letter drops
    /// are taken greedily; on a plateau, a breadth-first search through
    /// equal-length conjugates (capped at `cap` states) looks for a further
    /// drop. Returns (x, core) with core = x^{-1} w x and
    /// len(s core s) >= len(core) for every generator s.
    pub fn cyclic_reduction_capped(&self, w: &Element, cap: usize) -> (Element, Element) {
        debug_assert!(w.belongs_to(self));
        let mut conj: Word = Vec::new();
        let mut cur = w.clone();
        'outer: loop {
            // Strict greedy pass.
            let mut progressed = true;
            while progressed {
                progressed = false;
                for s in 0..self.rank() as u8 {
                    let cand = self.conj_by_letter(&cur, s);
                    if cand.len() < cur.len() {
                        conj.push(s);
                        cur = cand;
                        progressed = true;
                        break;
                    }
                }
            }
            // Plateau exploration at the current length.
            let mut seen: HashMap<Element, Word> = HashMap::new();
            let mut queue: VecDeque<Element> = VecDeque::new();
            seen.insert(cur.clone(), Vec::new());
            queue.push_back(cur.clone());
            while let Some(u) = queue.pop_front() {
                if seen.len() > cap {
                    break;
                }
                let path = seen[&u].clone();
                for s in 0..self.rank() as u8 {
                    let cand = self.conj_by_letter(&u, s);
                    if cand.len() < cur.len() {
                        conj.extend_from_slice(&path);
                        conj.push(s);
                        cur = cand;
                        continue 'outer;
                    }
                    if cand.len() == cur.len() && !seen.contains_key(&cand) {
                        let mut p = path.clone();
                        p.push(s);
                        seen.insert(cand.clone(), p);
                        queue.push_back(cand);
                    }
                }
            }
            break;
        }
        let x = self.normal_form(&conj);
        (x, cur)
    }

    /// s w s for a single generator.
    pub fn conj_by_letter(&self, w: &Element, s: u8) -> Element {
        let mut letters = w.word().to_vec();
        self.append_right(&mut letters, s);
        let mut out = letters;
        self.append_left(&mut out, s);
        Element::from_canonical(self.canonicalize(out), self)
    }

    pub fn cyclic_reduction(&self, w: &Element) -> (Element, Element) {
        self.cyclic_reduction_capped(w, 20_000)
    }
}
