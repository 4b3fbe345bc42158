//! Counting quasi-morphisms, empirical defect windows, homogenization,
//! and stable-commutator-length lower bounds.
//!
//! Evaluators are integer-valued and total. The quasi-morphism property
//! is never assumed: defects are measured over exhaustive windows and
//! every derived bound carries that caveat.

use crate::ball::BallCache;
use crate::element::Element;
use crate::error::{CoxError, Result};
use crate::rankone::{self, RankOneStatus};
use crate::system::CoxeterSystem;
use num_rational::Ratio;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::Serializer;
use serde::Serialize;
use std::sync::Arc;

/// Exact rational that serializes as "p/q".
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Rat(pub Ratio<i64>);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        Rat(Ratio::new(num, den))
    }

    pub fn zero() -> Rat {
        Rat(Ratio::new(0, 1))
    }

    pub fn is_positive(&self) -> bool {
        self.0 > Ratio::new(0, 1)
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

// ------------------------------------------------------------- models

pub trait GroupModel: Sync {
    type Elem: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn len(&self, a: &Self::Elem) -> usize;
    /// Every element of length at most the bound, deterministic order.
    fn enumerate(&self, length_bound: usize) -> Result<Vec<Self::Elem>>;
    fn random(&self, rng: &mut ChaCha8Rng, length: usize) -> Self::Elem;
    fn describe(&self, a: &Self::Elem) -> String;
    /// Trivial image in the abelianization of the model.
    fn in_commutator_subgroup(&self, a: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }
}

pub fn commutator<M: GroupModel>(model: &M, a: &M::Elem, b: &M::Elem) -> M::Elem {
    let ab = model.mul(a, b);
    let ba = model.mul(b, a);
    model.mul(&ab, &model.inv(&ba))
}

/// Reduced word in a finite-rank free group. Letter k+1 is generator k,
/// letter -(k+1) its inverse.
pub type FreeWord = Vec<i16>;

pub struct FreeGroupModel {
    rank: usize,
}

pub fn free_group_model(rank: usize) -> Result<FreeGroupModel> {
    if rank < 1 || rank > 26 {
        return Err(CoxError::BadParameter(format!(
            "free group rank {rank} outside 1..=26"
        )));
    }
    Ok(FreeGroupModel { rank })
}

impl FreeGroupModel {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Compact letters: 'a'..'z' generators, 'A'..'Z' inverses.
    pub fn parse(&self, text: &str) -> Result<FreeWord> {
        let mut out: FreeWord = Vec::new();
        for ch in text.chars() {
            if ch.is_whitespace() {
                continue;
            }
            let letter = if ch.is_ascii_lowercase() {
                (ch as u8 - b'a') as i16 + 1
            } else if ch.is_ascii_uppercase() {
                -((ch as u8 - b'A') as i16 + 1)
            } else {
                return Err(CoxError::UnknownGenerator(ch.to_string()));
            };
            if letter.unsigned_abs() as usize > self.rank {
                return Err(CoxError::UnknownGenerator(ch.to_string()));
            }
            push_reduced(&mut out, letter);
        }
        Ok(out)
    }

    pub fn format(&self, w: &FreeWord) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.iter()
            .map(|&l| {
                let idx = (l.unsigned_abs() - 1) as u8;
                if l > 0 {
                    (b'a' + idx) as char
                } else {
                    (b'A' + idx) as char
                }
            })
            .collect()
    }
}

fn push_reduced(w: &mut FreeWord, letter: i16) {
    if w.last() == Some(&-letter) {
        w.pop();
    } else {
        w.push(letter);
    }
}

impl GroupModel for FreeGroupModel {
    type Elem = FreeWord;

    fn identity(&self) -> FreeWord {
        Vec::new()
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        let mut out = a.clone();
        for &l in b {
            push_reduced(&mut out, l);
        }
        out
    }

    fn inv(&self, a: &FreeWord) -> FreeWord {
        a.iter().rev().map(|&l| -l).collect()
    }

    fn len(&self, a: &FreeWord) -> usize {
        a.len()
    }

    fn enumerate(&self, length_bound: usize) -> Result<Vec<FreeWord>> {
        let letters: Vec<i16> = (1..=self.rank as i16).flat_map(|k| [k, -k]).collect();
        let mut out: Vec<FreeWord> = vec![Vec::new()];
        let mut level: Vec<FreeWord> = vec![Vec::new()];
        for _ in 0..length_bound {
            let mut next = Vec::with_capacity(level.len() * (2 * self.rank).max(1));
            for w in &level {
                for &l in &letters {
                    if w.last() == Some(&-l) {
                        continue;
                    }
                    let mut n = w.clone();
                    n.push(l);
                    next.push(n);
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        Ok(out)
    }

    fn random(&self, rng: &mut ChaCha8Rng, length: usize) -> FreeWord {
        let mut w: FreeWord = Vec::with_capacity(length);
        for _ in 0..length {
            loop {
                let k = rng.gen_range(1..=self.rank as i16);
                let l = if rng.gen_bool(0.5) { k } else { -k };
                if w.last() == Some(&-l) {
                    continue;
                }
                w.push(l);
                break;
            }
        }
        w
    }

    fn describe(&self, a: &FreeWord) -> String {
        self.format(a)
    }

    fn in_commutator_subgroup(&self, a: &FreeWord) -> bool {
        let mut sums = vec![0i64; self.rank];
        for &l in a {
            sums[(l.unsigned_abs() - 1) as usize] += l.signum() as i64;
        }
        sums.iter().all(|&s| s == 0)
    }
}

pub struct CoxeterModel<'a> {
    sys: &'a CoxeterSystem,
    odd_component: Vec<usize>,
}

impl<'a> CoxeterModel<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Self {
        CoxeterModel { sys, odd_component: odd_components(sys) }
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.sys
    }
}

/// Generators fall in the same abelianization class when linked by a
/// chain of odd bonds.
fn odd_components(sys: &CoxeterSystem) -> Vec<usize> {
    let n = sys.rank();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut Vec<usize>, i: usize) -> usize {
        if comp[i] != i {
            let r = find(comp, comp[i]);
            comp[i] = r;
        }
        comp[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            let m = sys.bond(i as u8, j as u8);
            if m != 0 && m % 2 == 1 {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    (0..n).map(|i| find(&mut comp, i)).collect()
}

impl GroupModel for CoxeterModel<'_> {
    type Elem = Element;

    fn identity(&self) -> Element {
        self.sys.identity()
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        self.sys.mul(a, b)
    }

    fn inv(&self, a: &Element) -> Element {
        self.sys.inv(a)
    }

    fn len(&self, a: &Element) -> usize {
        a.len()
    }

    fn enumerate(&self, length_bound: usize) -> Result<Vec<Element>> {
        let ball = BallCache::build(self.sys, length_bound)?;
        Ok(ball.ids().map(|id| ball.element_of(id)).collect())
    }

    fn random(&self, rng: &mut ChaCha8Rng, length: usize) -> Element {
        let letters: Vec<u8> =
            (0..length).map(|_| rng.gen_range(0..self.sys.rank() as u8)).collect();
        self.sys.normal_form(&letters)
    }

    fn describe(&self, a: &Element) -> String {
        self.sys.format_word(a.word())
    }

    fn in_commutator_subgroup(&self, a: &Element) -> bool {
        let mut parity = vec![0u8; self.sys.rank()];
        for &s in a.word() {
            parity[self.odd_component[s as usize]] ^= 1;
        }
        parity.iter().all(|&p| p == 0)
    }
}

// --------------------------------------------------------- evaluators

#[derive(Clone)]
pub struct QuasiMorphism<E> {
    pub description: String,
    eval: Arc<dyn Fn(&E) -> i64 + Send + Sync>,
}

impl<E> QuasiMorphism<E> {
    pub fn new(
        description: impl Into<String>,
        eval: impl Fn(&E) -> i64 + Send + Sync + 'static,
    ) -> Self {
        QuasiMorphism { description: description.into(), eval: Arc::new(eval) }
    }

    pub fn value(&self, g: &E) -> i64 {
        (self.eval)(g)
    }
}

/// Greedy non-overlapping count of a contiguous pattern. Greedy is
/// optimal for interval packing.
fn count_contiguous<T: PartialEq>(word: &[T], pat: &[T]) -> i64 {
    if pat.is_empty() || word.len() < pat.len() {
        return 0;
    }
    let mut count = 0i64;
    let mut i = 0usize;
    while i + pat.len() <= word.len() {
        if &word[i..i + pat.len()] == pat {
            count += 1;
            i += pat.len();
        } else {
            i += 1;
        }
    }
    count
}

/// Exponent-sum homomorphism on one free generator; defect exactly zero.
pub fn exponent_sum(model: &FreeGroupModel, gen: usize) -> Result<QuasiMorphism<FreeWord>> {
    if gen >= model.rank() {
        return Err(CoxError::BadParameter(format!("generator index {gen} out of range")));
    }
    let target = gen as i16 + 1;
    Ok(QuasiMorphism::new(
        format!("exponent-sum homomorphism on generator {gen}"),
        move |w: &FreeWord| {
            w.iter()
                .map(|&l| {
                    if l == target {
                        1
                    } else if l == -target {
                        -1
                    } else {
                        0
                    }
                })
                .sum()
        },
    ))
}

/// Classical counting quasi-morphism on a free group: occurrences of the
/// pattern minus occurrences of its inverse, both greedy non-overlapping.
pub fn brooks_counting(
    model: &FreeGroupModel,
    alpha: &FreeWord,
) -> Result<QuasiMorphism<FreeWord>> {
    if alpha.is_empty() {
        return Err(CoxError::PatternNotReduced);
    }
    for pair in alpha.windows(2) {
        if pair[0] == -pair[1] {
            return Err(CoxError::PatternNotReduced);
        }
    }
    if alpha.first().map(|&f| -f) == alpha.last().copied() {
        return Err(CoxError::PatternNotReduced);
    }
    let pat = alpha.clone();
    let pat_inv = model.inv(alpha);
    let shown = model.format(alpha);
    Ok(QuasiMorphism::new(
        format!("counting quasi-morphism for pattern {shown}"),
        move |w: &FreeWord| count_contiguous(w, &pat) - count_contiguous(w, &pat_inv),
    ))
}

// Subsequence matcher for occurrences up to commutation: the pattern is
// a dependence DAG (edges between non-commuting letters), matched against
// its own infinite repetition. Each node tracks how many copies consumed
// it; a word letter feeds the laggiest available node of that letter, and
// the number of complete occurrences is the minimum copy count. Matching
// into a single copy at a time would waste letters that belong to the
// next copy when normal forms shuffle copies together.
#[derive(Clone)]
struct TracePattern {
    letters: Vec<u8>,
    preds: Vec<Vec<usize>>,
}

impl TracePattern {
    fn new(sys: &CoxeterSystem, pat: &[u8]) -> Self {
        let n = pat.len();
        let mut preds = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..i {
                if pat[j] == pat[i] || sys.bond(pat[j], pat[i]) != 2 {
                    preds[i].push(j);
                }
            }
        }
        TracePattern { letters: pat.to_vec(), preds }
    }

    fn count(&self, word: &[u8]) -> i64 {
        let n = self.letters.len();
        if n == 0 {
            return 0;
        }
        let mut copies = vec![0u32; n];
        for &l in word {
            let mut slot: Option<usize> = None;
            for i in 0..n {
                if self.letters[i] != l {
                    continue;
                }
                if self.preds[i].iter().any(|&j| copies[j] <= copies[i]) {
                    continue;
                }
                match slot {
                    Some(b) if copies[b] <= copies[i] => {}
                    _ => slot = Some(i),
                }
            }
            if let Some(i) = slot {
                copies[i] += 1;
            }
        }
        *copies.iter().min().unwrap() as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountVariant {
    Contiguous,
    CommutationClosed,
}

pub struct AxisCounting {
    pub qm: QuasiMorphism<Element>,
    pub variant: CountVariant,
    pub pattern: String,
}

const AXIS_PRECHECK_POWERS: i64 = 12;

/// Counting quasi-morphism along the axis of a rank-one element:
/// occurrences of nf(gamma^k) in nf(g), minus the inverse pattern.
///
/// Contiguous counting is tried first and checked against powers of the
/// axis word; when normal-form shuffles hide copies, counting switches
/// to occurrences up to commutation moves.
pub fn axis_counting(sys: &CoxeterSystem, gamma: &Element, k: usize) -> Result<AxisCounting> {
    if k < 1 {
        return Err(CoxError::BadParameter("axis power k must be >= 1".into()));
    }
    let decision = rankone::is_rank_one(sys, gamma);
    if decision.status != RankOneStatus::RankOne {
        return Err(CoxError::NotRankOneElement(sys.format_word(gamma.word())));
    }
    let axis = sys.pow(gamma, k as i64);
    let axis_inv = sys.inv(&axis);
    let pat: Vec<u8> = axis.word().to_vec();
    let pat_inv: Vec<u8> = axis_inv.word().to_vec();

    let mut contiguous_ok = true;
    let mut power = axis.clone();
    for n in 1..=AXIS_PRECHECK_POWERS {
        if count_contiguous(power.word(), &pat) != n {
            contiguous_ok = false;
            break;
        }
        power = sys.mul(&power, &axis);
    }

    let pattern = sys.format_word(&pat);
    let base_desc = format!(
        "axis counting for {} (power {k})",
        sys.format_word(gamma.word())
    );
    if contiguous_ok {
        let qm = QuasiMorphism::new(
            format!("{base_desc}, contiguous"),
            move |g: &Element| {
                count_contiguous(g.word(), &pat) - count_contiguous(g.word(), &pat_inv)
            },
        );
        return Ok(AxisCounting { qm, variant: CountVariant::Contiguous, pattern });
    }
    let tp = TracePattern::new(sys, &pat);
    let tp_inv = TracePattern::new(sys, &pat_inv);
    let qm = QuasiMorphism::new(
        format!("{base_desc}, commutation-closed"),
        move |g: &Element| tp.count(g.word()) - tp_inv.count(g.word()),
    );
    Ok(AxisCounting { qm, variant: CountVariant::CommutationClosed, pattern })
}

// ------------------------------------------------------------- defect

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleSpec {
    pub pairs: usize,
    pub length: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledDefect {
    pub pairs: usize,
    pub length: usize,
    pub seed: u64,
    pub max_value: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectEstimate {
    /// Max |f(gh) - f(g) - f(h)| over the exhaustive window.
    pub value: i64,
    pub pairs_tested: usize,
    pub exhaustive_up_to: usize,
    pub sampled: Option<SampledDefect>,
}

/// Exhaustive defect window over all pairs of elements up to the length
/// bound, with optional seeded long-pair sampling on top.
pub fn defect_estimate<M: GroupModel>(
    model: &M,
    f: &QuasiMorphism<M::Elem>,
    length_bound: usize,
    sampling: Option<SampleSpec>,
) -> Result<DefectEstimate> {
    let elems = model.enumerate(length_bound)?;
    let values: Vec<i64> = elems.iter().map(|g| f.value(g)).collect();
    let value = elems
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row_max = 0i64;
            for (j, h) in elems.iter().enumerate() {
                let d = (f.value(&model.mul(g, h)) - values[i] - values[j]).abs();
                if d > row_max {
                    row_max = d;
                }
            }
            row_max
        })
        .max()
        .unwrap_or(0);
    let pairs_tested = elems.len() * elems.len();

    let sampled = sampling.map(|spec| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut max_value = 0i64;
        for _ in 0..spec.pairs {
            let g = model.random(&mut rng, spec.length);
            let h = model.random(&mut rng, spec.length);
            let d = (f.value(&model.mul(&g, &h)) - f.value(&g) - f.value(&h)).abs();
            max_value = max_value.max(d);
        }
        SampledDefect {
            pairs: spec.pairs,
            length: spec.length,
            seed: spec.seed,
            max_value,
        }
    });

    Ok(DefectEstimate { value, pairs_tested, exhaustive_up_to: length_bound, sampled })
}

// ----------------------------------------------------- homogenization

#[derive(Clone, Debug, Serialize)]
pub struct HomogenizationResult {
    /// f(g^n_max) / n_max, exact.
    pub value: Rat,
    pub n_max: usize,
    /// |f(g^n)/n - value| per n = 1..=n_max.
    pub residuals: Vec<Rat>,
    /// max |f(g^{2n}) - 2 f(g^n)| over 2n <= n_max; bounded by the
    /// defect for a genuine quasi-morphism.
    pub doubling_max_deviation: i64,
}

const POWER_LENGTH_CAP: usize = 100_000;

pub fn homogenize<M: GroupModel>(
    model: &M,
    f: &QuasiMorphism<M::Elem>,
    g: &M::Elem,
    n_max: usize,
) -> Result<HomogenizationResult> {
    if n_max < 4 {
        return Err(CoxError::BadParameter(format!("n_max {n_max} below minimum 4")));
    }
    let unit_len = model.len(g).max(1);
    if unit_len.saturating_mul(n_max) > POWER_LENGTH_CAP {
        return Err(CoxError::WordLengthBudget(unit_len * n_max, POWER_LENGTH_CAP));
    }
    let mut fvals = Vec::with_capacity(n_max + 1);
    fvals.push(0i64);
    let mut acc = model.identity();
    for _ in 1..=n_max {
        acc = model.mul(&acc, g);
        fvals.push(f.value(&acc));
    }
    let value = Rat::new(fvals[n_max], n_max as i64);
    let residuals: Vec<Rat> = (1..=n_max)
        .map(|n| {
            let r = Ratio::new(fvals[n], n as i64) - value.0;
            Rat(if r < Ratio::new(0, 1) { -r } else { r })
        })
        .collect();
    let doubling_max_deviation = (1..=n_max / 2)
        .map(|n| (fvals[2 * n] - 2 * fvals[n]).abs())
        .max()
        .unwrap_or(0);
    Ok(HomogenizationResult { value, n_max, residuals, doubling_max_deviation })
}

// ---------------------------------------------------------------- scl

#[derive(Clone, Debug, Serialize)]
pub struct SclBound {
    pub element: String,
    pub lower_bound: Rat,
    pub caveats: Vec<String>,
}

/// Bavard-style bound: homogenized value over twice the defect. Valid
/// only modulo the empirical-defect caveat, which is embedded.
pub fn scl_lower_bound<M: GroupModel>(
    model: &M,
    g: &M::Elem,
    defect: &DefectEstimate,
    hom: &HomogenizationResult,
) -> Result<SclBound> {
    if !model.in_commutator_subgroup(g) {
        return Err(CoxError::NotInCommutatorSubgroup);
    }
    if defect.value == 0 {
        if hom.value.is_positive() {
            return Err(CoxError::ZeroDefect);
        }
        return Ok(SclBound {
            element: model.describe(g),
            lower_bound: Rat::zero(),
            caveats: vec![
                "defect window found no deviation; bound degenerate".to_string(),
            ],
        });
    }
    let lower = if hom.value.is_positive() {
        Rat(hom.value.0 / Ratio::new(2 * defect.value, 1))
    } else {
        Rat::zero()
    };
    Ok(SclBound {
        element: model.describe(g),
        lower_bound: lower,
        caveats: vec![format!(
            "empirical defect: exhaustive only for lengths <= {}; the true \
             defect may be larger, which would shrink the bound",
            defect.exhaustive_up_to
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FreeGroupModel {
        free_group_model(2).unwrap()
    }

    fn pentagon() -> CoxeterSystem {
        let mut m = vec![vec![0u32; 5]; 5];
        for i in 0..5 {
            m[i][i] = 1;
            m[i][(i + 1) % 5] = 2;
            m[(i + 1) % 5][i] = 2;
        }
        let gens = (1..=5).map(|i| format!("s{i}")).collect();
        CoxeterSystem::new(gens, m).unwrap()
    }

    #[test]
    fn free_reduction() {
        let m = f2();
        let a = m.parse("a").unwrap();
        let ainv = m.parse("A").unwrap();
        assert!(m.mul(&a, &ainv).is_empty());
        let ab = m.parse("ab").unwrap();
        let ba_inv = m.parse("Ba").unwrap();
        assert_eq!(m.format(&m.mul(&ab, &ba_inv)), "aa");
        let ab3 = m.pow(&ab, 3);
        assert_eq!(ab3.len(), 6);
        assert_eq!(m.format(&m.inv(&ab)), "BA");
    }

    #[test]
    fn free_enumeration_counts() {
        let m = f2();
        // 1 + 4 + 12 + 36 reduced words up to length 3.
        assert_eq!(m.enumerate(3).unwrap().len(), 53);
    }

    #[test]
    fn brooks_examples() {
        let m = f2();
        let ab = m.parse("ab").unwrap();
        let f = brooks_counting(&m, &ab).unwrap();
        assert_eq!(f.value(&m.parse("abab").unwrap()), 2);
        assert_eq!(f.value(&m.parse("BA").unwrap()), -1);
        assert_eq!(f.value(&m.identity()), 0);
        for n in 1..=12 {
            assert_eq!(f.value(&m.pow(&ab, n)), n);
            assert_eq!(f.value(&m.pow(&ab, -n)), -n);
        }
    }

    #[test]
    fn brooks_rejects_unreduced() {
        let m = f2();
        assert!(matches!(
            brooks_counting(&m, &vec![1, -1]),
            Err(CoxError::PatternNotReduced)
        ));
        // Cyclically unreduced: aba^{-1}.
        assert!(matches!(
            brooks_counting(&m, &vec![1, 2, -1]),
            Err(CoxError::PatternNotReduced)
        ));
        assert!(matches!(
            brooks_counting(&m, &Vec::new()),
            Err(CoxError::PatternNotReduced)
        ));
    }

    #[test]
    fn brooks_antisymmetry_window() {
        let m = f2();
        let f = brooks_counting(&m, &m.parse("ab").unwrap()).unwrap();
        for w in m.enumerate(5).unwrap() {
            assert_eq!(f.value(&m.inv(&w)), -f.value(&w), "word {}", m.format(&w));
        }
    }

    #[test]
    fn homomorphism_defect_zero() {
        let m = f2();
        let f = exponent_sum(&m, 0).unwrap();
        let d = defect_estimate(&m, &f, 4, None).unwrap();
        assert_eq!(d.value, 0);
    }

    #[test]
    fn brooks_defect_finite_and_monotone() {
        let m = f2();
        let f = brooks_counting(&m, &m.parse("ab").unwrap()).unwrap();
        let d3 = defect_estimate(&m, &f, 3, None).unwrap();
        let d4 = defect_estimate(
            &m,
            &f,
            4,
            Some(SampleSpec { pairs: 200, length: 20, seed: 11 }),
        )
        .unwrap();
        assert!(d3.value <= d4.value);
        assert!(d4.value >= 1);
        let s = d4.sampled.unwrap();
        assert!(s.max_value >= 0);
    }

    #[test]
    fn homogenize_brooks() {
        let m = f2();
        let ab = m.parse("ab").unwrap();
        let f = brooks_counting(&m, &ab).unwrap();
        let h = homogenize(&m, &f, &ab, 8).unwrap();
        assert_eq!(h.value, Rat::new(1, 1));
        assert!(h.residuals.iter().all(|r| *r == Rat::zero()));
        let he = homogenize(&m, &f, &m.identity(), 4).unwrap();
        assert_eq!(he.value, Rat::zero());
        // Scaling: value on g^2 is twice the value on g.
        let h2 = homogenize(&m, &f, &m.pow(&ab, 2), 8).unwrap();
        assert_eq!(h2.value, Rat::new(2, 1));
        assert!(matches!(
            homogenize(&m, &f, &ab, 3),
            Err(CoxError::BadParameter(_))
        ));
    }

    #[test]
    fn scl_commutator_positive() {
        let m = f2();
        let a = m.parse("a").unwrap();
        let b = m.parse("b").unwrap();
        let g = commutator(&m, &a, &b);
        assert_eq!(m.format(&g), "abAB");
        assert!(m.in_commutator_subgroup(&g));
        assert!(!m.in_commutator_subgroup(&a));
        let f = brooks_counting(&m, &m.parse("ab").unwrap()).unwrap();
        let d = defect_estimate(&m, &f, 4, None).unwrap();
        let h = homogenize(&m, &f, &g, 8).unwrap();
        let bound = scl_lower_bound(&m, &g, &d, &h).unwrap();
        assert!(bound.lower_bound.is_positive(), "bound {:?}", bound.lower_bound);
        assert!(!bound.caveats.is_empty());
        // Identity: zero bound, no error.
        let he = homogenize(&m, &f, &m.identity(), 4).unwrap();
        let be = scl_lower_bound(&m, &m.identity(), &d, &he).unwrap();
        assert_eq!(be.lower_bound, Rat::zero());
        // Outside the commutator subgroup: refused.
        let ha = homogenize(&m, &f, &a, 4).unwrap();
        assert!(matches!(
            scl_lower_bound(&m, &a, &d, &ha),
            Err(CoxError::NotInCommutatorSubgroup)
        ));
    }

    #[test]
    fn scl_zero_defect_guard() {
        let m = f2();
        let f = exponent_sum(&m, 0).unwrap();
        let d = defect_estimate(&m, &f, 3, None).unwrap();
        assert_eq!(d.value, 0);
        let aab = m.parse("ab").unwrap();
        let h = homogenize(&m, &f, &aab, 4).unwrap();
        // Exponent-sum of ab is positive on generator a but ab is not in
        // the commutator subgroup, so that error fires first.
        assert!(matches!(
            scl_lower_bound(&m, &aab, &d, &h),
            Err(CoxError::NotInCommutatorSubgroup)
        ));
        let g = commutator(&m, &m.parse("a").unwrap(), &m.parse("b").unwrap());
        let hg = homogenize(&m, &f, &g, 4).unwrap();
        let bg = scl_lower_bound(&m, &g, &d, &hg).unwrap();
        assert_eq!(bg.lower_bound, Rat::zero());
    }

    #[test]
    fn axis_counting_on_pentagon() {
        let p5 = pentagon();
        let c = p5.element_from_str("s1 s2 s3 s4 s5").unwrap();
        let ax = axis_counting(&p5, &c, 1).unwrap();
        // Normal-form shuffles defeat contiguous counting here.
        assert_eq!(ax.variant, CountVariant::CommutationClosed);
        assert_eq!(ax.qm.value(&c), 1);
        assert_eq!(ax.qm.value(&p5.identity()), 0);
        // The positive count finds every copy hidden by the shuffles.
        let tp = TracePattern::new(&p5, c.word());
        for n in 1..=12i64 {
            let p = p5.pow(&c, n);
            assert_eq!(tp.count(p.word()), n, "raw count on c^{n}");
            // The evaluator subtracts inverse-pattern occurrences, which
            // involution letters make plentiful inside powers.
            assert!(ax.qm.value(&p) >= 1, "f on c^{n}");
            assert_eq!(ax.qm.value(&p5.inv(&p)), -ax.qm.value(&p));
        }
    }

    #[test]
    fn axis_counting_rejects_non_rank_one() {
        let a2 = CoxeterSystem::new(
            vec!["s".into(), "t".into()],
            vec![vec![1, 3], vec![3, 1]],
        )
        .unwrap();
        let st = a2.element_from_str("s t").unwrap();
        assert!(matches!(
            axis_counting(&a2, &st, 1),
            Err(CoxError::NotRankOneElement(_))
        ));
    }

    #[test]
    fn axis_counting_dinf_contiguous() {
        let d = CoxeterSystem::new(
            vec!["s".into(), "t".into()],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        let st = d.element_from_str("s t").unwrap();
        let ax = axis_counting(&d, &st, 1).unwrap();
        assert_eq!(ax.variant, CountVariant::Contiguous);
        let p3 = d.pow(&st, 3);
        // Three copies of st, two of its inverse ts inside ststst.
        assert_eq!(count_contiguous(p3.word(), &[0, 1]), 3);
        assert_eq!(count_contiguous(p3.word(), &[1, 0]), 2);
        assert_eq!(ax.qm.value(&p3), 1);
        assert_eq!(ax.qm.value(&d.pow(&st, -3)), -1);
    }

    #[test]
    fn coxeter_abelianization() {
        // A2 has an odd bond: both generators in one class.
        let a2 = CoxeterSystem::new(
            vec!["s".into(), "t".into()],
            vec![vec![1, 3], vec![3, 1]],
        )
        .unwrap();
        let cm = CoxeterModel::new(&a2);
        let st = a2.element_from_str("s t").unwrap();
        assert!(cm.in_commutator_subgroup(&st));
        assert!(!cm.in_commutator_subgroup(&a2.element_from_str("s").unwrap()));
        // Pentagon: all bonds even or infinite, five classes.
        let p5 = pentagon();
        let pm = CoxeterModel::new(&p5);
        let c = p5.element_from_str("s1 s2 s3 s4 s5").unwrap();
        assert!(!pm.in_commutator_subgroup(&c));
        let sq = pm.mul(&c, &c);
        assert!(pm.in_commutator_subgroup(&sq));
    }

    #[test]
    fn coxeter_defect_window() {
        let p5 = pentagon();
        let cm = CoxeterModel::new(&p5);
        let c = p5.element_from_str("s1 s2 s3 s4 s5").unwrap();
        let ax = axis_counting(&p5, &c, 1).unwrap();
        let d = defect_estimate(&cm, &ax.qm, 3, None).unwrap();
        assert!(d.value >= 0);
        assert_eq!(d.pairs_tested, 61 * 61);
    }
}
