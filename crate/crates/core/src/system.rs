//! Coxeter system: generator names plus the symmetric bond matrix.
//!
//! JSON interchange shape: `{"generators": ["s","t"], "m": [[1,3],[3,1]]}`
//! with 0 standing for an infinite bond.

use crate::error::{CoxError, Result};
use crate::ring::{Rg, RingCtx};
use serde::{Deserialize, Serialize};

pub const INF: u32 = 0;
pub const MAX_RANK: usize = 64;

#[derive(Serialize, Deserialize)]
struct SystemFile {
    generators: Vec<String>,
    m: Vec<Vec<u32>>,
}

pub struct CoxeterSystem {
    gens: Vec<String>,
    m: Vec<Vec<u32>>,
    ring: RingCtx,
    /// twob[s][t] = 2*B(alpha_s, alpha_t) in the ring; diagonal 2.
    twob: Vec<Vec<Rg>>,
    hash: u64,
}

impl CoxeterSystem {
    pub fn new(generators: Vec<String>, m: Vec<Vec<u32>>) -> Result<CoxeterSystem> {
        let rank = generators.len();
        if rank == 0 {
            return Err(CoxError::InvalidSystem("no generators".into()));
        }
        if rank > MAX_RANK {
            return Err(CoxError::InvalidSystem(format!(
                "rank {rank} exceeds cap {MAX_RANK}"
            )));
        }
        {
            let mut sorted = generators.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != rank {
                return Err(CoxError::InvalidSystem("duplicate generator names".into()));
            }
        }
        if generators.iter().any(|g| g.is_empty() || g.contains(char::is_whitespace)) {
            return Err(CoxError::InvalidSystem(
                "generator names must be nonempty and whitespace-free".into(),
            ));
        }
        if m.len() != rank || m.iter().any(|row| row.len() != rank) {
            return Err(CoxError::InvalidSystem("matrix shape mismatch".into()));
        }
        for i in 0..rank {
            if m[i][i] != 1 {
                return Err(CoxError::InvalidSystem(format!(
                    "diagonal entry m[{i}][{i}] must be 1"
                )));
            }
            for j in 0..rank {
                if m[i][j] != m[j][i] {
                    return Err(CoxError::InvalidSystem(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
                if i != j && m[i][j] == 1 {
                    return Err(CoxError::InvalidSystem(format!(
                        "off-diagonal entry m[{i}][{j}] must be >= 2 or 0 (infinite)"
                    )));
                }
            }
        }
        let mut n: u32 = 2;
        for i in 0..rank {
            for j in 0..i {
                let mij = m[i][j];
                if mij >= 3 {
                    n = lcm(n, mij);
                }
            }
        }
        let ring = RingCtx::new(n)?;
        let mut twob = vec![vec![ring.zero(); rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                twob[i][j] = if i == j {
                    ring.from_int(2)
                } else {
                    match m[i][j] {
                        INF => ring.from_int(-2),
                        2 => ring.zero(),
                        mij => ring.neg(&ring.two_cos(n / mij)),
                    }
                };
            }
        }
        let hash = content_hash(&generators, &m);
        Ok(CoxeterSystem { gens: generators, m, ring, twob, hash })
    }

    pub fn from_json(text: &str) -> Result<CoxeterSystem> {
        let file: SystemFile = serde_json::from_str(text)?;
        CoxeterSystem::new(file.generators, file.m)
    }

    pub fn to_json(&self) -> String {
        let file = SystemFile { generators: self.gens.clone(), m: self.m.clone() };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn hash(&self) -> u64 {
        self.hash
    }

    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gens
    }

    pub fn gen_name(&self, s: u8) -> &str {
        &self.gens[s as usize]
    }

    pub fn gen_index(&self, name: &str) -> Result<u8> {
        self.gens
            .iter()
            .position(|g| g == name)
            .map(|i| i as u8)
            .ok_or_else(|| CoxError::UnknownGenerator(name.to_string()))
    }

    /// Bond label m(s,t); INF (0) encodes infinity.
    pub fn bond(&self, s: u8, t: u8) -> u32 {
        self.m[s as usize][t as usize]
    }

    pub fn two_b(&self, s: u8, t: u8) -> &Rg {
        &self.twob[s as usize][t as usize]
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<u8>> {
        text.split_whitespace().map(|tok| self.gen_index(tok)).collect()
    }

    pub fn format_word(&self, word: &[u8]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|&s| self.gen_name(s)).collect::<Vec<_>>().join(" ")
    }

    /// Generators as a full-subset bitmask.
    pub fn full_mask(&self) -> u64 {
        if self.rank() == 64 {
            u64::MAX
        } else {
            (1u64 << self.rank()) - 1
        }
    }

    pub fn mask_of(&self, gens: &[u8]) -> u64 {
        gens.iter().fold(0u64, |acc, &s| acc | (1u64 << s))
    }

    pub fn mask_gens(&self, mask: u64) -> Vec<u8> {
        (0..self.rank() as u8).filter(|&s| mask & (1u64 << s) != 0).collect()
    }

    pub fn mask_names(&self, mask: u64) -> Vec<String> {
        self.mask_gens(mask).iter().map(|&s| self.gen_name(s).to_string()).collect()
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// FNV-1a over a canonical encoding; stable across runs and platforms.
fn content_hash(gens: &[String], m: &[Vec<u32>]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for g in gens {
        eat(g.as_bytes());
        eat(&[0xff]);
    }
    for row in m {
        for &v in row {
            eat(&v.to_le_bytes());
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn sys(labels: &[&[u32]]) -> CoxeterSystem {
        let rank = labels.len();
        let gens = (1..=rank).map(|i| format!("s{i}")).collect();
        let m = labels.iter().map(|r| r.to_vec()).collect();
        CoxeterSystem::new(gens, m).unwrap()
    }

    #[test]
    fn parse_roundtrip() {
        let a2 = CoxeterSystem::from_json(
            r#"{"generators": ["s", "t"], "m": [[1, 3], [3, 1]]}"#,
        )
        .unwrap();
        assert_eq!(a2.rank(), 2);
        assert_eq!(a2.bond(0, 1), 3);
        let again = CoxeterSystem::from_json(&a2.to_json()).unwrap();
        assert_eq!(again.hash(), a2.hash());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(CoxeterSystem::from_json(r#"{"generators": ["s"], "m": [[2]]}"#).is_err());
        assert!(CoxeterSystem::from_json(
            r#"{"generators": ["s", "t"], "m": [[1, 3], [4, 1]]}"#
        )
        .is_err());
        assert!(CoxeterSystem::from_json(
            r#"{"generators": ["s", "t"], "m": [[1, 1], [1, 1]]}"#
        )
        .is_err());
        assert!(CoxeterSystem::from_json(r#"{"generators": [], "m": []}"#).is_err());
    }

    #[test]
    fn infinite_bond_and_ring() {
        let dinf = sys(&[&[1, 0], &[0, 1]]);
        assert_eq!(dinf.bond(0, 1), INF);
        assert_eq!(dinf.ring().degree, 1);
        let b2 = sys(&[&[1, 4], &[4, 1]]);
        assert_eq!(b2.ring().degree, 2);
    }

    #[test]
    fn word_parsing() {
        let a2 = sys(&[&[1, 3], &[3, 1]]);
        assert_eq!(a2.parse_word("s1 s2 s1").unwrap(), vec![0, 1, 0]);
        assert!(a2.parse_word("s1 sx").is_err());
        assert_eq!(a2.format_word(&[0, 1]), "s1 s2");
        assert_eq!(a2.format_word(&[]), "e");
    }
}
