//! Metric balls with multiplication tables.
//!
//! A `BallCache` enumerates every group element of length at most some
//! radius, in ShortLex order, together with a right multiplication table.
//! Elements are deduplicated during the breadth-first build by their right
//! inversion sets, maintained incrementally as sorted lists of interned
//! root ids, so no word canonicalization happens on the hot path.

use crate::element::{Element, Word};
use crate::engine::RootVec;
use crate::error::{CoxError, Result};
use crate::system::CoxeterSystem;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

const OUT: u32 = u32::MAX;

struct RootInterner {
    ids: HashMap<RootVec, u32>,
    vecs: Vec<RootVec>,
}

impl RootInterner {
    fn new() -> Self {
        RootInterner { ids: HashMap::new(), vecs: Vec::new() }
    }

    fn intern(&mut self, v: RootVec) -> u32 {
        if let Some(&id) = self.ids.get(&v) {
            return id;
        }
        let id = self.vecs.len() as u32;
        self.vecs.push(v.clone());
        self.ids.insert(v, id);
        id
    }

    fn vec(&self, id: u32) -> &RootVec {
        &self.vecs[id as usize]
    }
}

pub struct BallCache<'a> {
    sys: &'a CoxeterSystem,
    radius: usize,
    completed_radius: usize,
    budget: usize,
    truncated: bool,
    saturated: bool,
    words: Vec<Word>,
    table: Vec<u32>,
    level_offsets: Vec<usize>,
    index: HashMap<Box<[u8]>, u32>,
}

#[derive(Serialize, Deserialize)]
struct BallHeader {
    format: String,
    version: u32,
    radius: usize,
    completed_radius: usize,
    budget: usize,
    truncated: bool,
    saturated: bool,
    system_hash: String,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct BallRow {
    w: String,
    m: Vec<i64>,
}

impl<'a> BallCache<'a> {
    pub const DEFAULT_BUDGET: usize = 200_000;

    pub fn build(sys: &'a CoxeterSystem, radius: usize) -> Result<Self> {
        Self::build_with_budget(sys, radius, Self::DEFAULT_BUDGET)
    }

    pub fn build_with_budget(
        sys: &'a CoxeterSystem,
        radius: usize,
        budget: usize,
    ) -> Result<Self> {
        if budget == 0 {
            return Err(CoxError::BudgetExceeded("ball budget is zero".into()));
        }
        let rank = sys.rank();
        let mut interner = RootInterner::new();
        let alpha_ids: Vec<u32> =
            (0..rank).map(|s| interner.intern(sys.alpha(s as u8))).collect();

        let mut words: Vec<Word> = vec![Vec::new()];
        let mut sigs: Vec<Vec<u32>> = vec![Vec::new()];
        let mut table: Vec<u32> = vec![OUT; rank];
        let mut level_offsets: Vec<usize> = vec![0, 1];
        let mut completed = 0usize;
        let mut truncated = false;
        let mut saturated = false;

        struct Pending {
            word: Word,
            links: Vec<(u32, u8)>,
        }

        for level in 1..=radius {
            let lo = level_offsets[level - 1];
            let hi = level_offsets[level];
            let mut pending: HashMap<Vec<u32>, Pending> = HashMap::new();
            for parent in lo..hi {
                let sig = &sigs[parent];
                for s in 0..rank as u8 {
                    let a = alpha_ids[s as usize];
                    if sig.binary_search(&a).is_ok() {
                        continue;
                    }
                    let mut child_sig: Vec<u32> = Vec::with_capacity(sig.len() + 1);
                    child_sig.push(a);
                    for &rid in sig {
                        let mut root = interner.vec(rid).clone();
                        sys.reflect(s, &mut root);
                        child_sig.push(interner.intern(root));
                    }
                    child_sig.sort_unstable();
                    let mut word = words[parent].clone();
                    word.push(s);
                    let entry = pending.entry(child_sig).or_insert_with(|| Pending {
                        word: word.clone(),
                        links: Vec::new(),
                    });
                    if word < entry.word {
                        entry.word = word;
                    }
                    entry.links.push((parent as u32, s));
                }
            }
            if pending.is_empty() {
                saturated = true;
                completed = level - 1;
                break;
            }
            if words.len() + pending.len() > budget {
                truncated = true;
                completed = level - 1;
                break;
            }
            let mut batch: Vec<(Vec<u32>, Pending)> = pending.into_iter().collect();
            batch.sort_unstable_by(|a, b| a.1.word.cmp(&b.1.word));
            for (sig, p) in batch {
                let id = words.len() as u32;
                words.push(p.word);
                sigs.push(sig);
                table.extend(std::iter::repeat(OUT).take(rank));
                for (parent, s) in p.links {
                    table[parent as usize * rank + s as usize] = id;
                    table[id as usize * rank + s as usize] = parent;
                }
            }
            level_offsets.push(words.len());
            completed = level;
        }
        if !truncated && !saturated {
            completed = radius.min(level_offsets.len() - 1);
            // A ball closed under right multiplication is the whole group.
            saturated = table.iter().all(|&v| v != OUT);
        }
        if saturated {
            // The empty frontier means every longer ball is this one.
            completed = radius;
            while level_offsets.len() < radius + 2 {
                let n = words.len();
                level_offsets.push(n);
            }
        }

        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone().into_boxed_slice(), i as u32))
            .collect();
        Ok(BallCache {
            sys,
            radius,
            completed_radius: completed,
            budget,
            truncated,
            saturated,
            words,
            table,
            level_offsets,
            index,
        })
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.sys
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn completed_radius(&self) -> usize {
        self.completed_radius
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// True when the whole group fits inside the built radius.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn group_order(&self) -> Option<usize> {
        self.saturated.then_some(self.words.len())
    }

    pub fn word_of(&self, id: u32) -> &[u8] {
        &self.words[id as usize]
    }

    pub fn element_of(&self, id: u32) -> Element {
        Element::from_canonical(self.words[id as usize].clone(), self.sys)
    }

    pub fn id_of(&self, e: &Element) -> Option<u32> {
        self.index.get(e.word()).copied()
    }

    /// Right multiplication by a generator, staying inside the ball.
    pub fn right_mul_gen(&self, id: u32, s: u8) -> Option<u32> {
        let v = self.table[id as usize * self.sys.rank() + s as usize];
        (v != OUT).then_some(v)
    }

    /// Product of two elements, walking the table and falling back to the
    /// word engine the moment the walk leaves the ball.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut cur = match self.id_of(a) {
            Some(id) => id,
            None => return self.sys.mul(a, b),
        };
        for (i, &s) in b.word().iter().enumerate() {
            match self.right_mul_gen(cur, s) {
                Some(next) => cur = next,
                None => {
                    let mut w: Word = self.words[cur as usize].clone();
                    for &t in &b.word()[i..] {
                        self.sys.append_right(&mut w, t);
                    }
                    return Element::from_canonical(self.sys.canonicalize(w), self.sys);
                }
            }
        }
        self.element_of(cur)
    }

    /// Ids of all elements with the exact length `l`.
    pub fn level(&self, l: usize) -> std::ops::Range<u32> {
        if l + 1 >= self.level_offsets.len() {
            let n = self.words.len() as u32;
            return n..n;
        }
        self.level_offsets[l] as u32..self.level_offsets[l + 1] as u32
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.level_offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Ids in ShortLex order, the natural scan order for searches.
    pub fn ids(&self) -> std::ops::Range<u32> {
        0..self.words.len() as u32
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let f = std::fs::File::create(&tmp)?;
            let mut w = BufWriter::new(f);
            let header = BallHeader {
                format: "coxkit-ball".into(),
                version: 1,
                radius: self.radius,
                completed_radius: self.completed_radius,
                budget: self.budget,
                truncated: self.truncated,
                saturated: self.saturated,
                system_hash: format!("{:016x}", self.sys.hash()),
                count: self.words.len(),
            };
            serde_json::to_writer(&mut w, &header)?;
            w.write_all(b"\n")?;
            let rank = self.sys.rank();
            for (i, word) in self.words.iter().enumerate() {
                let m: Vec<i64> = (0..rank)
                    .map(|s| {
                        let v = self.table[i * rank + s];
                        if v == OUT {
                            -1
                        } else {
                            v as i64
                        }
                    })
                    .collect();
                let row = BallRow { w: self.sys.format_word(word), m };
                serde_json::to_writer(&mut w, &row)?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(sys: &'a CoxeterSystem, path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        let mut lines = BufReader::new(f).lines();
        let header_line = lines
            .next()
            .ok_or_else(|| CoxError::InvalidSystem("empty ball file".into()))??;
        let header: BallHeader = serde_json::from_str(&header_line)?;
        if header.format != "coxkit-ball" || header.version != 1 {
            return Err(CoxError::InvalidSystem("unrecognized ball file".into()));
        }
        if header.system_hash != format!("{:016x}", sys.hash()) {
            return Err(CoxError::InvalidSystem(
                "ball file was built for a different system".into(),
            ));
        }
        let rank = sys.rank();
        let mut words: Vec<Word> = Vec::with_capacity(header.count);
        let mut table: Vec<u32> = Vec::with_capacity(header.count * rank);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row: BallRow = serde_json::from_str(&line)?;
            let word = if row.w.is_empty() || row.w == "e" {
                Vec::new()
            } else {
                sys.parse_word(&row.w)?
            };
            words.push(word);
            if row.m.len() != rank {
                return Err(CoxError::InvalidSystem("bad ball row arity".into()));
            }
            for v in row.m {
                table.push(if v < 0 { OUT } else { v as u32 });
            }
        }
        if words.len() != header.count {
            return Err(CoxError::InvalidSystem("ball row count mismatch".into()));
        }
        let mut level_offsets = vec![0usize];
        let mut cur_len = 0usize;
        for (i, w) in words.iter().enumerate() {
            while w.len() > cur_len {
                level_offsets.push(i);
                cur_len += 1;
            }
        }
        level_offsets.push(words.len());
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone().into_boxed_slice(), i as u32))
            .collect();
        Ok(BallCache {
            sys,
            radius: header.radius,
            completed_radius: header.completed_radius,
            budget: header.budget,
            truncated: header.truncated,
            saturated: header.saturated,
            words,
            table,
            level_offsets,
            index,
        })
    }

    /// Conventional cache filename for this system and radius.
    pub fn cache_filename(sys: &CoxeterSystem, radius: usize) -> String {
        format!("ball-{:016x}-r{}.jsonl", sys.hash(), radius)
    }
}
