//! Chamber systems with a Weyl-group-valued distance.
//!
//! Two instances: the thin one (the group acting on itself) and thick
//! right-angled ones built from graph products of finite cyclic groups.
//! Axiom checks, residues, projections, apartments and retractions are
//! generic over the `WeylDistanceSpace` trait.

use crate::ball::BallCache;
use crate::classify;
use crate::element::Element;
use crate::error::{CoxError, Result};
use crate::rankone::{self, RankOneDecision};
use crate::system::{CoxeterSystem, INF};
use serde::Serialize;
use std::collections::{HashSet, VecDeque};

pub trait WeylDistanceSpace {
    type Chamber: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug;

    fn system(&self) -> &CoxeterSystem;
    fn base_chamber(&self) -> Self::Chamber;
    fn delta(&self, x: &Self::Chamber, y: &Self::Chamber) -> Element;
    /// All chambers s-adjacent to c, including c itself.
    fn panel(&self, c: &Self::Chamber, s: u8) -> Vec<Self::Chamber>;
    /// Chambers within the given gallery distance of the base chamber.
    fn chambers_within(&self, radius: usize) -> Vec<Self::Chamber>;
    /// Section of the standard apartment: the unique apartment chamber
    /// at Weyl distance u from the base.
    fn lift(&self, u: &Element) -> Self::Chamber;
    /// Left translation by the group element carried by chamber g.
    fn act(&self, g: &Self::Chamber, x: &Self::Chamber) -> Self::Chamber;
    /// The unique g with act(g, x) = y.
    fn transporter(&self, x: &Self::Chamber, y: &Self::Chamber) -> Self::Chamber;
    fn format_chamber(&self, c: &Self::Chamber) -> String;
}

pub fn gallery_distance<S: WeylDistanceSpace>(
    space: &S,
    x: &S::Chamber,
    y: &S::Chamber,
) -> usize {
    space.delta(x, y).len()
}

// ---------------------------------------------------------------- thin

pub struct ThinBuilding<'a> {
    sys: &'a CoxeterSystem,
}

impl<'a> ThinBuilding<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Self {
        ThinBuilding { sys }
    }
}

impl WeylDistanceSpace for ThinBuilding<'_> {
    type Chamber = Element;

    fn system(&self) -> &CoxeterSystem {
        self.sys
    }

    fn base_chamber(&self) -> Element {
        self.sys.identity()
    }

    fn delta(&self, x: &Element, y: &Element) -> Element {
        self.sys.mul(&self.sys.inv(x), y)
    }

    fn panel(&self, c: &Element, s: u8) -> Vec<Element> {
        let mut word = c.word().to_vec();
        word.push(s);
        let mut out = vec![c.clone(), self.sys.normal_form(&word)];
        out.sort();
        out
    }

    fn chambers_within(&self, radius: usize) -> Vec<Element> {
        let ball = BallCache::build(self.sys, radius).expect("ball budget");
        ball.ids().map(|id| ball.element_of(id)).collect()
    }

    fn lift(&self, u: &Element) -> Element {
        u.clone()
    }

    fn act(&self, g: &Element, x: &Element) -> Element {
        self.sys.mul(g, x)
    }

    fn transporter(&self, x: &Element, y: &Element) -> Element {
        self.sys.mul(y, &self.sys.inv(x))
    }

    fn format_chamber(&self, c: &Element) -> String {
        self.sys.format_word(c.word())
    }
}

// ------------------------------------------------------- graph product

/// Element of a graph product of cyclic groups, as a canonical sequence
/// of (vertex, exponent) syllables: no two same-vertex syllables are
/// separated only by commuting ones, and the sequence is the lex-least
/// linearization of its commutation class.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GpElem(Vec<(u8, u32)>);

impl GpElem {
    pub fn syllables(&self) -> &[(u8, u32)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.0.len()
    }
}

impl PartialOrd for GpElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GpElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

pub struct GraphProductBuilding<'a> {
    sys: &'a CoxeterSystem,
    thickness: Vec<u32>,
}

impl<'a> GraphProductBuilding<'a> {
    /// Requires every off-diagonal bond to be 2 or infinite and every
    /// thickness to be at least 2.
    pub fn new(sys: &'a CoxeterSystem, thickness: Vec<u32>) -> Result<Self> {
        let n = sys.rank();
        for i in 0..n {
            for j in i + 1..n {
                let m = sys.bond(i as u8, j as u8);
                if m != 2 && m != INF {
                    return Err(CoxError::NotRightAngled);
                }
            }
        }
        if thickness.len() != n {
            return Err(CoxError::InvalidSystem(format!(
                "thickness list has {} entries for rank {}",
                thickness.len(),
                n
            )));
        }
        for (i, &q) in thickness.iter().enumerate() {
            if q < 2 {
                return Err(CoxError::BadThickness(q, sys.gen_name(i as u8).to_string()));
            }
        }
        Ok(GraphProductBuilding { sys, thickness })
    }

    pub fn uniform(sys: &'a CoxeterSystem, q: u32) -> Result<Self> {
        GraphProductBuilding::new(sys, vec![q; sys.rank()])
    }

    pub fn thickness_of(&self, s: u8) -> u32 {
        self.thickness[s as usize]
    }

    fn commutes(&self, a: u8, b: u8) -> bool {
        a != b && self.sys.bond(a, b) == 2
    }

    /// Append one syllable, merging with an earlier same-vertex syllable
    /// when only commuting syllables separate them. Deleting a syllable
    /// cannot expose a new mergeable pair: everything skipped on the walk
    /// commutes with the deleted vertex, so any pair mergeable afterwards
    /// was already mergeable before.
    fn push_syllable(&self, word: &mut Vec<(u8, u32)>, v: u8, e: u32) {
        let q = self.thickness[v as usize];
        let e = e % q;
        if e == 0 {
            return;
        }
        let mut j = word.len();
        while j > 0 {
            let (u, f) = word[j - 1];
            if u == v {
                let merged = (f + e) % q;
                if merged == 0 {
                    word.remove(j - 1);
                } else {
                    word[j - 1].1 = merged;
                }
                return;
            }
            if !self.commutes(u, v) {
                break;
            }
            j -= 1;
        }
        word.push((v, e));
    }

    /// Lex-least linearization of the commutation class: repeatedly emit
    /// the smallest vertex with no blocking syllable before it.
    fn linearize(&self, word: &[(u8, u32)]) -> Vec<(u8, u32)> {
        let n = word.len();
        let mut taken = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<usize> = None;
            'cand: for i in 0..n {
                if taken[i] {
                    continue;
                }
                for j in 0..i {
                    if !taken[j] && !self.commutes(word[j].0, word[i].0) {
                        continue 'cand;
                    }
                }
                match best {
                    Some(b) if word[b].0 <= word[i].0 => {}
                    _ => best = Some(i),
                }
            }
            let b = best.expect("acyclic blocking order");
            taken[b] = true;
            out.push(word[b]);
        }
        out
    }

    fn canon(&self, word: Vec<(u8, u32)>) -> GpElem {
        GpElem(self.linearize(&word))
    }

    pub fn gp_identity(&self) -> GpElem {
        GpElem(Vec::new())
    }

    pub fn gp_generator(&self, s: u8, e: u32) -> GpElem {
        let mut w = Vec::new();
        self.push_syllable(&mut w, s, e);
        self.canon(w)
    }

    pub fn gp_mul(&self, a: &GpElem, b: &GpElem) -> GpElem {
        let mut w = a.0.clone();
        for &(v, e) in &b.0 {
            self.push_syllable(&mut w, v, e);
        }
        self.canon(w)
    }

    pub fn gp_inv(&self, a: &GpElem) -> GpElem {
        let w: Vec<(u8, u32)> = a
            .0
            .iter()
            .rev()
            .map(|&(v, e)| (v, self.thickness[v as usize] - e))
            .collect();
        self.canon(w)
    }

    /// Image in the Coxeter group: each syllable maps to its vertex. The
    /// vertex sequence of a merge-free syllable word is reduced.
    pub fn pi(&self, a: &GpElem) -> Element {
        let letters: Vec<u8> = a.0.iter().map(|&(v, _)| v).collect();
        self.sys.normal_form(&letters)
    }

    pub fn parse_chamber(&self, text: &str) -> Result<GpElem> {
        let text = text.trim();
        let mut w = Vec::new();
        if text == "e" || text.is_empty() {
            return Ok(GpElem(w));
        }
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let exp: u32 = e
                        .parse()
                        .map_err(|_| CoxError::InvalidWord(format!("bad exponent in {tok:?}")))?;
                    (n, exp)
                }
                None => (tok, 1),
            };
            let v = name
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= self.sys.rank())
                .ok_or_else(|| CoxError::UnknownGenerator(name.to_string()))?;
            let v = (v - 1) as u8;
            if exp == 0 || exp >= self.thickness[v as usize] {
                return Err(CoxError::InvalidWord(format!(
                    "exponent {exp} out of range for {name}"
                )));
            }
            self.push_syllable(&mut w, v, exp);
        }
        Ok(self.canon(w))
    }
}

impl WeylDistanceSpace for GraphProductBuilding<'_> {
    type Chamber = GpElem;

    fn system(&self) -> &CoxeterSystem {
        self.sys
    }

    fn base_chamber(&self) -> GpElem {
        self.gp_identity()
    }

    fn delta(&self, x: &GpElem, y: &GpElem) -> Element {
        self.pi(&self.gp_mul(&self.gp_inv(x), y))
    }

    fn panel(&self, c: &GpElem, s: u8) -> Vec<GpElem> {
        let q = self.thickness[s as usize];
        let mut out: Vec<GpElem> = (0..q)
            .map(|e| {
                if e == 0 {
                    c.clone()
                } else {
                    self.gp_mul(c, &self.gp_generator(s, e))
                }
            })
            .collect();
        out.sort();
        out
    }

    fn chambers_within(&self, radius: usize) -> Vec<GpElem> {
        let mut seen: HashSet<GpElem> = HashSet::new();
        let mut out = vec![self.gp_identity()];
        seen.insert(self.gp_identity());
        let mut frontier = out.clone();
        for depth in 1..=radius {
            let mut next = Vec::new();
            for c in &frontier {
                for s in 0..self.sys.rank() as u8 {
                    for e in 1..self.thickness[s as usize] {
                        let n = self.gp_mul(c, &self.gp_generator(s, e));
                        if n.syllable_count() == depth && seen.insert(n.clone()) {
                            next.push(n);
                        }
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn lift(&self, u: &Element) -> GpElem {
        let w: Vec<(u8, u32)> = u.word().iter().map(|&s| (s, 1)).collect();
        self.canon(w)
    }

    fn act(&self, g: &GpElem, x: &GpElem) -> GpElem {
        self.gp_mul(g, x)
    }

    fn transporter(&self, x: &GpElem, y: &GpElem) -> GpElem {
        self.gp_mul(y, &self.gp_inv(x))
    }

    fn format_chamber(&self, c: &GpElem) -> String {
        if c.0.is_empty() {
            return "e".to_string();
        }
        c.0.iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("x{}", v + 1)
                } else {
                    format!("x{}^{}", v + 1, e)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

// ------------------------------------------------------------- axioms

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomKind {
    Bu1,
    Bu2,
    Bu3,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomViolation {
    pub kind: AxiomKind,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub triples_checked: usize,
    pub bu2_cases: usize,
    pub bu3_cases: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check (Bu1) on the pairs of each triple, (Bu2) on triples whose second
/// leg is simple, and (Bu3) existence through panel enumeration.
pub fn check_axioms<S: WeylDistanceSpace>(
    space: &S,
    triples: &[(S::Chamber, S::Chamber, S::Chamber)],
) -> AxiomReport {
    let sys = space.system();
    let mut violations = Vec::new();
    let mut bu2_cases = 0usize;
    let mut bu3_cases = 0usize;
    let fmt = |c: &S::Chamber| space.format_chamber(c);

    for (x, y, z) in triples {
        for (a, b) in [(x, y), (y, z), (x, z)] {
            let d = space.delta(a, b);
            if d.is_identity() != (a == b) {
                violations.push(AxiomViolation {
                    kind: AxiomKind::Bu1,
                    detail: format!(
                        "delta({}, {}) = {} but chambers {}",
                        fmt(a),
                        fmt(b),
                        sys.format_word(d.word()),
                        if a == b { "coincide" } else { "differ" }
                    ),
                });
            }
        }

        let leg = space.delta(y, z);
        if leg.len() == 1 {
            bu2_cases += 1;
            let s = leg.word()[0];
            let w = space.delta(x, y);
            let got = space.delta(x, z);
            let mut ws_word = w.word().to_vec();
            ws_word.push(s);
            let ws = sys.normal_form(&ws_word);
            let ascent = ws.len() == w.len() + 1;
            let ok = if ascent { got == ws } else { got == w || got == ws };
            if !ok {
                violations.push(AxiomViolation {
                    kind: AxiomKind::Bu2,
                    detail: format!(
                        "x={} y={} z={}: delta(y,z)={} delta(x,y)={} but delta(x,z)={}",
                        fmt(x),
                        fmt(y),
                        fmt(z),
                        sys.format_word(leg.word()),
                        sys.format_word(w.word()),
                        sys.format_word(got.word())
                    ),
                });
            }
        }

        let w = space.delta(x, y);
        for s in 0..sys.rank() as u8 {
            bu3_cases += 1;
            let mut ws_word = w.word().to_vec();
            ws_word.push(s);
            let ws = sys.normal_form(&ws_word);
            let found = space.panel(y, s).iter().any(|cand| {
                let leg = space.delta(y, cand);
                leg.len() == 1 && leg.word()[0] == s && space.delta(x, cand) == ws
            });
            if !found {
                violations.push(AxiomViolation {
                    kind: AxiomKind::Bu3,
                    detail: format!(
                        "x={} y={} s={}: no panel chamber realizes ws={}",
                        fmt(x),
                        fmt(y),
                        sys.gen_name(s),
                        sys.format_word(ws.word())
                    ),
                });
            }
        }
    }
    AxiomReport { triples_checked: triples.len(), bu2_cases, bu3_cases, violations }
}

// ------------------------------------------- residues and projections

/// Chambers at Weyl distance inside W_J from c. Finite residues are
/// closed under panel moves in J; infinite ones need a radius.
pub fn residue<S: WeylDistanceSpace>(
    space: &S,
    c: &S::Chamber,
    jmask: u64,
    radius: Option<usize>,
) -> Result<Vec<S::Chamber>> {
    let sys = space.system();
    let spherical = classify::is_spherical_subset(sys, jmask);
    if !spherical && radius.is_none() {
        return Err(CoxError::InfiniteResidue(mask_names(sys, jmask)));
    }
    let gens: Vec<u8> = (0..sys.rank() as u8)
        .filter(|s| jmask & (1u64 << s) != 0)
        .collect();
    let mut seen: HashSet<S::Chamber> = HashSet::new();
    let mut queue: VecDeque<(S::Chamber, usize)> = VecDeque::new();
    seen.insert(c.clone());
    queue.push_back((c.clone(), 0));
    while let Some((cur, d)) = queue.pop_front() {
        if let Some(r) = radius {
            if d >= r {
                continue;
            }
        }
        for &s in &gens {
            for next in space.panel(&cur, s) {
                if seen.insert(next.clone()) {
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    let mut out: Vec<S::Chamber> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

fn mask_names(sys: &CoxeterSystem, mask: u64) -> String {
    sys.mask_gens(mask)
        .iter()
        .map(|&s| sys.gen_name(s).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// The unique chamber of the residue nearest to x in the gallery metric.
pub fn projection<S: WeylDistanceSpace>(
    space: &S,
    residue: &[S::Chamber],
    x: &S::Chamber,
) -> Result<S::Chamber> {
    let mut best: Option<(usize, &S::Chamber)> = None;
    let mut tie = false;
    for p in residue {
        let d = gallery_distance(space, p, x);
        match best {
            Some((bd, _)) if d > bd => {}
            Some((bd, _)) if d == bd => tie = true,
            _ => {
                best = Some((d, p));
                tie = false;
            }
        }
    }
    let (_, p) = best.ok_or(CoxError::NonUniqueProjection)?;
    if tie {
        return Err(CoxError::NonUniqueProjection);
    }
    Ok(p.clone())
}

/// Gate property: every residue chamber factors its distance to x
/// through the projection.
pub fn projection_gate_holds<S: WeylDistanceSpace>(
    space: &S,
    residue: &[S::Chamber],
    x: &S::Chamber,
    p: &S::Chamber,
) -> bool {
    let dpx = gallery_distance(space, p, x);
    residue.iter().all(|y| {
        gallery_distance(space, y, x) == gallery_distance(space, y, p) + dpx
    })
}

// ------------------------------------------- apartments and retractions

/// Membership in the standard apartment: the lift of the Weyl distance
/// from the base must reproduce the chamber.
pub fn apartment_contains<S: WeylDistanceSpace>(space: &S, c: &S::Chamber) -> bool {
    let u = space.delta(&space.base_chamber(), c);
    space.lift(&u) == *c
}

pub struct Retraction<'s, S: WeylDistanceSpace> {
    space: &'s S,
    center: S::Chamber,
    center_u: Element,
}

/// Retraction onto the standard apartment centered at c.
pub fn retraction<S: WeylDistanceSpace>(
    space: &S,
    center: S::Chamber,
) -> Result<Retraction<'_, S>> {
    if !apartment_contains(space, &center) {
        return Err(CoxError::ChamberOutsideApartment(space.format_chamber(&center)));
    }
    let center_u = space.delta(&space.base_chamber(), &center);
    Ok(Retraction { space, center, center_u })
}

impl<S: WeylDistanceSpace> Retraction<'_, S> {
    pub fn center(&self) -> &S::Chamber {
        &self.center
    }

    /// The unique apartment chamber at the same Weyl distance from the
    /// center as x.
    pub fn apply(&self, x: &S::Chamber) -> S::Chamber {
        let sys = self.space.system();
        let d = self.space.delta(&self.center, x);
        self.space.lift(&sys.mul(&self.center_u, &d))
    }
}

// ------------------------------------------------------- transitivity

#[derive(Clone, Debug, Serialize)]
pub struct TransitivityReport {
    pub pairs_checked: usize,
    pub same_distance: usize,
    pub transported: usize,
    pub failures: Vec<String>,
}

impl TransitivityReport {
    pub fn fully_transitive(&self) -> bool {
        self.transported == self.same_distance
    }
}

/// For sampled pairs of chamber pairs with equal Weyl distance, test
/// whether the left action transports one onto the other. Chamber
/// transitivity forces the only candidate.
pub fn weyl_transitivity_sample<S: WeylDistanceSpace>(
    space: &S,
    samples: &[((S::Chamber, S::Chamber), (S::Chamber, S::Chamber))],
) -> TransitivityReport {
    let mut same_distance = 0usize;
    let mut transported = 0usize;
    let mut failures = Vec::new();
    for ((x, y), (x2, y2)) in samples {
        if space.delta(x, y) != space.delta(x2, y2) {
            continue;
        }
        same_distance += 1;
        let g = space.transporter(x, x2);
        if space.act(&g, y) == *y2 {
            transported += 1;
        } else if failures.len() < 16 {
            failures.push(format!(
                "no transporter: ({}, {}) vs ({}, {})",
                space.format_chamber(x),
                space.format_chamber(y),
                space.format_chamber(x2),
                space.format_chamber(y2)
            ));
        }
    }
    TransitivityReport {
        pairs_checked: samples.len(),
        same_distance,
        transported,
        failures,
    }
}

/// Rank-one certificate for the action of g on the building: decided
/// entirely by its Weyl image.
pub fn contracting_certificate(
    building: &GraphProductBuilding<'_>,
    g: &GpElem,
) -> RankOneDecision {
    let w = building.pi(g);
    rankone::is_rank_one(building.sys, &w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankone::RankOneStatus;

    fn a2() -> CoxeterSystem {
        CoxeterSystem::new(
            vec!["s".into(), "t".into()],
            vec![vec![1, 3], vec![3, 1]],
        )
        .unwrap()
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

    fn dinf() -> CoxeterSystem {
        CoxeterSystem::new(
            vec!["s1".into(), "s2".into()],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn thin_a2_axioms_exhaustive() {
        let sys = a2();
        let b = ThinBuilding::new(&sys);
        let all = b.chambers_within(3);
        assert_eq!(all.len(), 6);
        let mut triples = Vec::new();
        for x in &all {
            for y in &all {
                for z in &all {
                    triples.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
        let rep = check_axioms(&b, &triples);
        assert!(rep.passed(), "{:?}", rep.violations);
        assert_eq!(rep.triples_checked, 216);
    }

    #[test]
    fn corrupted_delta_is_reported() {
        struct Swapped<'a> {
            inner: ThinBuilding<'a>,
            a: (Element, Element),
            b: (Element, Element),
        }
        impl WeylDistanceSpace for Swapped<'_> {
            type Chamber = Element;
            fn system(&self) -> &CoxeterSystem {
                self.inner.system()
            }
            fn base_chamber(&self) -> Element {
                self.inner.base_chamber()
            }
            fn delta(&self, x: &Element, y: &Element) -> Element {
                let p = (x.clone(), y.clone());
                if p == self.a {
                    self.inner.delta(&self.b.0, &self.b.1)
                } else if p == self.b {
                    self.inner.delta(&self.a.0, &self.a.1)
                } else {
                    self.inner.delta(x, y)
                }
            }
            fn panel(&self, c: &Element, s: u8) -> Vec<Element> {
                self.inner.panel(c, s)
            }
            fn chambers_within(&self, r: usize) -> Vec<Element> {
                self.inner.chambers_within(r)
            }
            fn lift(&self, u: &Element) -> Element {
                self.inner.lift(u)
            }
            fn act(&self, g: &Element, x: &Element) -> Element {
                self.inner.act(g, x)
            }
            fn transporter(&self, x: &Element, y: &Element) -> Element {
                self.inner.transporter(x, y)
            }
            fn format_chamber(&self, c: &Element) -> String {
                self.inner.format_chamber(c)
            }
        }
        let sys = a2();
        let e = sys.identity();
        let s = sys.element_from_str("s").unwrap();
        let sts = sys.element_from_str("s t s").unwrap();
        let st = sys.element_from_str("s t").unwrap();
        let sp = Swapped {
            inner: ThinBuilding::new(&sys),
            a: (e.clone(), s.clone()),
            b: (e.clone(), sts.clone()),
        };
        let triples = vec![(e.clone(), s.clone(), st.clone())];
        let rep = check_axioms(&sp, &triples);
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.kind == AxiomKind::Bu2));
    }

    #[test]
    fn gp_normal_forms() {
        let p5 = pentagon();
        let b = GraphProductBuilding::uniform(&p5, 3).unwrap();
        // Adjacent pentagon vertices commute: x2 x1 reorders to x1 x2.
        let c = b.parse_chamber("x2 x1").unwrap();
        assert_eq!(b.format_chamber(&c), "x1 x2");
        // Same-vertex powers merge mod 3.
        let d = b.gp_mul(&b.gp_generator(0, 2), &b.gp_generator(0, 2));
        assert_eq!(b.format_chamber(&d), "x1");
        let z = b.gp_mul(&b.gp_generator(0, 1), &b.gp_generator(0, 2));
        assert!(z.is_identity());
        // Merge reaches back across a commuting syllable and cancels.
        let g = b.gp_mul(&b.parse_chamber("x1 x2").unwrap(), &b.gp_generator(0, 2));
        assert_eq!(b.format_chamber(&g), "x2");
        // Non-commuting vertices block the merge walk.
        let w = b.gp_mul(&b.parse_chamber("x1 x3").unwrap(), &b.gp_generator(0, 2));
        assert_eq!(b.format_chamber(&w), "x1 x3 x1^2");
        // Inverse reverses and complements exponents.
        let inv = b.gp_inv(&c);
        assert!(b.gp_mul(&c, &inv).is_identity());
    }

    #[test]
    fn gp_rejects_bad_inputs() {
        let tri = CoxeterSystem::new(
            vec!["s1".into(), "s2".into(), "s3".into()],
            vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]],
        )
        .unwrap();
        assert!(matches!(
            GraphProductBuilding::uniform(&tri, 3),
            Err(CoxError::NotRightAngled)
        ));
        let p5 = pentagon();
        assert!(matches!(
            GraphProductBuilding::uniform(&p5, 1),
            Err(CoxError::BadThickness(1, _))
        ));
    }

    #[test]
    fn gp_panels_and_residues() {
        let p5 = pentagon();
        let b = GraphProductBuilding::uniform(&p5, 3).unwrap();
        let e = b.gp_identity();
        let res = residue(&b, &e, 0b1, None).unwrap();
        let shown: Vec<String> = res.iter().map(|c| b.format_chamber(c)).collect();
        assert_eq!(shown, ["e", "x1", "x1^2"]);
        assert_eq!(b.panel(&e, 0).len(), 3);
        // Empty type: just the chamber.
        let trivial = residue(&b, &e, 0, None).unwrap();
        assert_eq!(trivial.len(), 1);
        // Non-spherical type needs a radius.
        let err = residue(&b, &e, 0b101, None);
        assert!(matches!(err, Err(CoxError::InfiniteResidue(_))));
        assert!(residue(&b, &e, 0b101, Some(2)).is_ok());
    }

    #[test]
    fn thin_whole_group_residue() {
        let sys = a2();
        let b = ThinBuilding::new(&sys);
        let res = residue(&b, &b.base_chamber(), sys.full_mask(), None).unwrap();
        assert_eq!(res.len(), 6);
    }

    #[test]
    fn projections() {
        let sys = a2();
        let b = ThinBuilding::new(&sys);
        let e = sys.identity();
        let res = residue(&b, &e, 0b10, None).unwrap();
        assert_eq!(res.len(), 2);
        let x = sys.element_from_str("s t s").unwrap();
        let p = projection(&b, &res, &x).unwrap();
        assert_eq!(sys.format_word(p.word()), "t");
        assert!(projection_gate_holds(&b, &res, &x, &p));
        // x inside the residue projects to itself.
        let t = sys.element_from_str("t").unwrap();
        assert_eq!(projection(&b, &res, &t).unwrap(), t);

        let p5 = pentagon();
        let gb = GraphProductBuilding::uniform(&p5, 3).unwrap();
        let panel0 = residue(&gb, &gb.gp_identity(), 0b1, None).unwrap();
        let x21 = gb.parse_chamber("x2 x1").unwrap();
        let pr = projection(&gb, &panel0, &x21).unwrap();
        assert_eq!(gb.format_chamber(&pr), "x1");
        assert!(projection_gate_holds(&gb, &panel0, &x21, &pr));
    }

    #[test]
    fn apartment_and_retraction() {
        let p5 = pentagon();
        let b = GraphProductBuilding::uniform(&p5, 3).unwrap();
        let s1s2 = p5.element_from_str("s1 s2").unwrap();
        let lifted = b.lift(&s1s2);
        assert_eq!(b.format_chamber(&lifted), "x1 x2");
        assert!(apartment_contains(&b, &lifted));
        let thick = b.parse_chamber("x1^2 x2").unwrap();
        assert!(!apartment_contains(&b, &thick));
        // delta between apartment chambers reproduces Weyl distance.
        let l1 = b.lift(&p5.element_from_str("s1").unwrap());
        let l2 = b.lift(&p5.element_from_str("s2").unwrap());
        let d = b.delta(&l1, &l2);
        assert_eq!(p5.format_word(d.word()), "s1 s2");

        let rho = retraction(&b, b.gp_identity()).unwrap();
        let img = rho.apply(&thick);
        assert_eq!(b.format_chamber(&img), "x1 x2");
        // Identity on the apartment; distance from the center preserved.
        assert_eq!(rho.apply(&lifted), lifted);
        assert_eq!(b.delta(&b.gp_identity(), &img), b.delta(&b.gp_identity(), &thick));
        // Idempotent.
        assert_eq!(rho.apply(&img), img);
        // Center outside the apartment is refused.
        assert!(matches!(
            retraction(&b, thick),
            Err(CoxError::ChamberOutsideApartment(_))
        ));
    }

    #[test]
    fn transitivity_thin_vs_thick() {
        let sys = a2();
        let b = ThinBuilding::new(&sys);
        let all = b.chambers_within(3);
        let mut samples = Vec::new();
        for x in &all {
            for y in &all {
                for x2 in &all {
                    for y2 in &all {
                        samples.push(((x.clone(), y.clone()), (x2.clone(), y2.clone())));
                    }
                }
            }
        }
        let rep = weyl_transitivity_sample(&b, &samples);
        assert!(rep.fully_transitive());
        assert!(rep.same_distance > 0);

        let d = dinf();
        let gb = GraphProductBuilding::uniform(&d, 3).unwrap();
        let e = gb.gp_identity();
        let x1 = gb.gp_generator(0, 1);
        let x1sq = gb.gp_generator(0, 2);
        let rep2 = weyl_transitivity_sample(
            &gb,
            &[((e.clone(), x1), (e.clone(), x1sq))],
        );
        assert_eq!(rep2.same_distance, 1);
        assert_eq!(rep2.transported, 0);
        assert!(!rep2.failures.is_empty());
    }

    #[test]
    fn certificates() {
        let p5 = pentagon();
        let b = GraphProductBuilding::uniform(&p5, 3).unwrap();
        let g = b.parse_chamber("x1 x2 x3 x4 x5").unwrap();
        assert_eq!(contracting_certificate(&b, &g).status, RankOneStatus::RankOne);
        let one = b.gp_generator(0, 1);
        assert_eq!(
            contracting_certificate(&b, &one).status,
            RankOneStatus::FiniteOrder
        );
    }

    #[test]
    fn delta_symmetry_sampled() {
        let p5 = pentagon();
        let b = GraphProductBuilding::uniform(&p5, 3).unwrap();
        let chs = b.chambers_within(3);
        for (i, x) in chs.iter().enumerate().step_by(7) {
            for y in chs.iter().skip(i % 5).step_by(11) {
                let d = b.delta(x, y);
                let dr = b.delta(y, x);
                assert_eq!(b.system().inv(&d), dr);
                assert_eq!(d.is_identity(), x == y);
            }
        }
    }
}
