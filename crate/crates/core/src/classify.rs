//! Diagram classification.
//!
//! Works on induced subdiagrams given as generator bitmasks. Components
//! are matched structurally against the finite and affine catalogues; a
//! component that fits neither is indefinite. No isomorphism search is
//! involved, every test reads a concrete feature of the graph (degrees,
//! cycle, leg lengths, label positions).

use crate::system::{CoxeterSystem, INF};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Class {
    Spherical,
    Affine,
    Indefinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub mask: u64,
    pub label: String,
    pub class: Class,
}

impl Component {
    pub fn rank(&self) -> usize {
        self.mask.count_ones() as usize
    }
}

/// Connected components of the subdiagram induced by `mask`, where two
/// generators are adjacent when their bond is not 2. Ordered by smallest
/// member index.
pub fn components(sys: &CoxeterSystem, mask: u64) -> Vec<u64> {
    let mut left = mask;
    let mut out = Vec::new();
    while left != 0 {
        let seed = left.trailing_zeros() as u8;
        let mut comp = 1u64 << seed;
        let mut frontier = vec![seed];
        while let Some(v) = frontier.pop() {
            for u in sys.mask_gens(mask) {
                if comp & (1u64 << u) != 0 {
                    continue;
                }
                let m = sys.bond(v, u);
                if m != 2 && m != 1 {
                    comp |= 1u64 << u;
                    frontier.push(u);
                }
            }
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

struct Graph {
    verts: Vec<u8>,
    edges: Vec<(usize, usize, u32)>,
    deg: Vec<usize>,
}

impl Graph {
    fn induced(sys: &CoxeterSystem, mask: u64) -> Graph {
        let verts: Vec<u8> = sys.mask_gens(mask);
        let mut edges = Vec::new();
        let mut deg = vec![0usize; verts.len()];
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let m = sys.bond(verts[i], verts[j]);
                if m != 2 {
                    edges.push((i, j, m));
                    deg[i] += 1;
                    deg[j] += 1;
                }
            }
        }
        Graph { verts, edges, deg }
    }

    fn neighbors(&self, i: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for &(a, b, m) in &self.edges {
            if a == i {
                out.push((b, m));
            } else if b == i {
                out.push((a, m));
            }
        }
        out
    }

    fn labels(&self) -> Vec<u32> {
        self.edges.iter().map(|e| e.2).collect()
    }
}

pub fn classify_component(sys: &CoxeterSystem, cmask: u64) -> Component {
    let g = Graph::induced(sys, cmask);
    let k = g.verts.len();
    let (label, class) = match_component(&g, k);
    Component { mask: cmask, label, class }
}

fn match_component(g: &Graph, k: usize) -> (String, Class) {
    use Class::*;
    let indef = || ("indefinite".to_string(), Indefinite);

    if k == 1 {
        return ("A1".into(), Spherical);
    }
    if g.labels().iter().any(|&m| m == INF) {
        if k == 2 {
            return ("A~1".into(), Affine);
        }
        return indef();
    }
    if k == 2 {
        let m = g.edges[0].2;
        return match m {
            3 => ("A2".into(), Spherical),
            4 => ("B2".into(), Spherical),
            6 => ("G2".into(), Spherical),
            m => (format!("I2({m})"), Spherical),
        };
    }
    let all3 = g.labels().iter().all(|&m| m == 3);
    if g.edges.len() >= k {
        // Connected with a cycle: only the all-threes simple cycle is tame.
        if g.edges.len() == k && g.deg.iter().all(|&d| d == 2) && all3 {
            return (format!("A~{}", k - 1), Affine);
        }
        return indef();
    }
    // Tree from here on.
    let maxdeg = *g.deg.iter().max().unwrap();
    if maxdeg >= 4 {
        let stars = g.deg.iter().filter(|&&d| d >= 3).count();
        if k == 5 && maxdeg == 4 && stars == 1 && all3 {
            return ("D~4".into(), Affine);
        }
        return indef();
    }
    let forks: Vec<usize> =
        (0..k).filter(|&i| g.deg[i] == 3).collect();
    match forks.len() {
        0 => match_path(g, k),
        1 => match_fork(g, k, forks[0], all3),
        2 => {
            // Both forks must carry two pendant leaves each.
            let leaves: Vec<usize> = (0..k).filter(|&i| g.deg[i] == 1).collect();
            let pendant_ok = leaves.iter().all(|&l| {
                let nb = g.neighbors(l);
                g.deg[nb[0].0] == 3
            });
            if all3 && leaves.len() == 4 && pendant_ok {
                (format!("D~{}", k - 1), Affine)
            } else {
                indef()
            }
        }
        _ => indef(),
    }
}

fn match_fork(g: &Graph, k: usize, fork: usize, all3: bool) -> (String, Class) {
    use Class::*;
    let indef = || ("indefinite".to_string(), Indefinite);

    // Walk each leg away from the fork, recording its length in edges and
    // the label on its outermost edge.
    let mut legs: Vec<(usize, u32)> = Vec::new();
    for (first, m0) in g.neighbors(fork) {
        let mut prev = fork;
        let mut cur = first;
        let mut len = 1usize;
        let mut last_label = m0;
        loop {
            let next: Vec<(usize, u32)> = g
                .neighbors(cur)
                .into_iter()
                .filter(|&(v, _)| v != prev)
                .collect();
            if next.is_empty() {
                break;
            }
            prev = cur;
            cur = next[0].0;
            last_label = next[0].1;
            len += 1;
        }
        legs.push((len, last_label));
    }
    let mut lens: Vec<usize> = legs.iter().map(|l| l.0).collect();
    lens.sort_unstable();
    let (a, b, c) = (lens[0], lens[1], lens[2]);

    if all3 {
        return match (a, b, c) {
            (1, 1, _) => (format!("D{k}"), Spherical),
            (1, 2, 2) => ("E6".into(), Spherical),
            (1, 2, 3) => ("E7".into(), Spherical),
            (1, 2, 4) => ("E8".into(), Spherical),
            (2, 2, 2) => ("E~6".into(), Affine),
            (1, 3, 3) => ("E~7".into(), Affine),
            (1, 2, 5) => ("E~8".into(), Affine),
            _ => indef(),
        };
    }
    // One label 4 on the outer end of the unique longest leg, legs (1,1,c).
    let fours = g.labels().iter().filter(|&&m| m == 4).count();
    let others_three = g.labels().iter().all(|&m| m == 3 || m == 4);
    if fours == 1 && others_three && a == 1 && b == 1 {
        let on_long_end = legs
            .iter()
            .any(|&(len, last)| len == c && last == 4);
        if on_long_end {
            return (format!("B~{}", k - 1), Affine);
        }
    }
    indef()
}

fn match_path(g: &Graph, k: usize) -> (String, Class) {
    use Class::*;
    let indef = || ("indefinite".to_string(), Indefinite);

    let ends: Vec<usize> = (0..k).filter(|&i| g.deg[i] == 1).collect();
    debug_assert_eq!(ends.len(), 2);
    let mut prev = ends[0];
    let mut cur = g.neighbors(prev)[0].0;
    let mut labels = vec![g.neighbors(prev)[0].1];
    while g.deg[cur] == 2 {
        let (next, m) = g
            .neighbors(cur)
            .into_iter()
            .find(|&(v, _)| v != prev)
            .unwrap();
        labels.push(m);
        prev = cur;
        cur = next;
    }
    let n = labels.len();
    let fits = |pat: &[u32]| {
        labels == pat || labels.iter().rev().copied().eq(pat.iter().copied())
    };
    let all3 = labels.iter().all(|&m| m == 3);
    if all3 {
        return (format!("A{k}"), Spherical);
    }
    let fours = labels.iter().filter(|&&m| m == 4).count();
    let non_four_three = labels.iter().any(|&m| m != 3 && m != 4);
    if fours == 1 && !non_four_three {
        if labels[0] == 4 || labels[n - 1] == 4 {
            return (format!("B{k}"), Spherical);
        }
        if k == 4 && fits(&[3, 4, 3]) {
            return ("F4".into(), Spherical);
        }
        if k == 5 && fits(&[3, 3, 4, 3]) {
            return ("F~4".into(), Affine);
        }
        return indef();
    }
    if fours == 2 && !non_four_three && labels[0] == 4 && labels[n - 1] == 4 {
        return (format!("C~{}", k - 1), Affine);
    }
    if k == 3 && fits(&[5, 3]) {
        return ("H3".into(), Spherical);
    }
    if k == 4 && fits(&[5, 3, 3]) {
        return ("H4".into(), Spherical);
    }
    if k == 3 && fits(&[6, 3]) {
        return ("G~2".into(), Affine);
    }
    indef()
}

/// Classification of every component of the subdiagram induced by `mask`.
#[derive(Clone, Debug, Serialize)]
pub struct Shape {
    pub components: Vec<Component>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BadShape {
    AllFinite,
    TwoInfiniteFactors,
    FiniteTimesAffine,
}

impl Shape {
    pub fn all_spherical(&self) -> bool {
        self.components.iter().all(|c| c.class == Class::Spherical)
    }

    pub fn nonspherical(&self) -> Vec<&Component> {
        self.components
            .iter()
            .filter(|c| c.class != Class::Spherical)
            .collect()
    }

    /// Obstruction to containing an element with contracting axis
    /// behavior, if any. An affine component only obstructs on its own
    /// when its rank is at least 3; the rank-2 affine group is an honest
    /// line and its translations qualify.
    pub fn obstruction(&self) -> Option<BadShape> {
        let nonsph = self.nonspherical();
        match nonsph.len() {
            0 => Some(BadShape::AllFinite),
            1 => {
                let c = nonsph[0];
                if c.class == Class::Affine && c.rank() >= 3 {
                    Some(BadShape::FiniteTimesAffine)
                } else {
                    None
                }
            }
            _ => Some(BadShape::TwoInfiniteFactors),
        }
    }
}

pub fn shape(sys: &CoxeterSystem, mask: u64) -> Shape {
    let comps = components(sys, mask)
        .into_iter()
        .map(|c| classify_component(sys, c))
        .collect();
    Shape { components: comps }
}

/// True when the subgroup generated by `mask` is finite.
pub fn is_spherical_subset(sys: &CoxeterSystem, mask: u64) -> bool {
    shape(sys, mask).all_spherical()
}
