//! Parabolic subgroups and closures.
//!
//! A parabolic subgroup is presented as a conjugate of a standard one:
//! P = y W_K y^{-1}. The presentation stored here is canonical: y is the
//! ShortLex-least conjugator of minimal length (within a search budget),
//! so two presentations are equal as subgroups iff the structs are equal.

use crate::ball::BallCache;
use crate::classify;
use crate::element::Element;
use crate::error::{CoxError, Result};
use crate::system::CoxeterSystem;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicPresentation {
    pub conjugator: Element,
    pub gens_mask: u64,
}

impl ParabolicPresentation {
    pub fn is_standard(&self) -> bool {
        self.conjugator.is_identity()
    }

    pub fn rank(&self) -> usize {
        self.gens_mask.count_ones() as usize
    }
}

/// Membership test: e in y W_K y^{-1} iff y^{-1} e y uses only K letters.
pub fn parabolic_contains(
    sys: &CoxeterSystem,
    pres: &ParabolicPresentation,
    e: &Element,
) -> bool {
    let yinv = sys.inv(&pres.conjugator);
    let z = sys.mul(&sys.mul(&yinv, e), &pres.conjugator);
    sys.support_mask(&z) & !pres.gens_mask == 0
}

/// If z W_J z^{-1} is a standard parabolic, return its generator mask.
fn standard_mask_of(sys: &CoxeterSystem, z: &Element, jmask: u64) -> Option<u64> {
    if z.is_identity() {
        return Some(jmask);
    }
    let zinv = sys.inv(z);
    let mut lmask = 0u64;
    for j in sys.mask_gens(jmask) {
        let r = sys.mul(&sys.mul(z, &sys.generator(j)), &zinv);
        lmask |= sys.support_mask(&r);
    }
    for t in sys.mask_gens(lmask) {
        let back = sys.mul(&sys.mul(&zinv, &sys.generator(t)), z);
        if sys.support_mask(&back) & !jmask != 0 {
            return None;
        }
    }
    Some(lmask)
}

const CANONICALIZE_BUDGET: usize = 100_000;

/// Canonical presentation of x W_J x^{-1}: scan conjugators in ShortLex
/// order for the first that pulls the subgroup onto a standard parabolic.
fn canonical_presentation(
    sys: &CoxeterSystem,
    x: &Element,
    jmask: u64,
) -> ParabolicPresentation {
    // Conjugators are only determined mod right multiplication by W_J;
    // start from the minimal coset representative.
    let mut x = x.clone();
    loop {
        let mut shortened = false;
        for j in sys.mask_gens(jmask) {
            let cand = sys.mul(&x, &sys.generator(j));
            if cand.len() < x.len() {
                x = cand;
                shortened = true;
                break;
            }
        }
        if !shortened {
            break;
        }
    }
    if x.is_identity() {
        return ParabolicPresentation { conjugator: x, gens_mask: jmask };
    }
    if let Ok(ball) = BallCache::build_with_budget(sys, x.len(), CANONICALIZE_BUDGET) {
        if !ball.truncated() {
            for id in ball.ids() {
                let y = ball.element_of(id);
                let z = sys.mul(&sys.inv(&y), &x);
                if let Some(lmask) = standard_mask_of(sys, &z, jmask) {
                    return ParabolicPresentation { conjugator: y, gens_mask: lmask };
                }
            }
        }
    }
    ParabolicPresentation { conjugator: x, gens_mask: jmask }
}

/// The smallest parabolic subgroup containing w.
pub fn parabolic_closure(sys: &CoxeterSystem, w: &Element) -> ParabolicPresentation {
    let (x, core) = sys.cyclic_reduction(w);
    let jmask = sys.support_mask(&core);
    canonical_presentation(sys, &x, jmask)
}

/// Whether the closure of w is the whole group.
pub fn is_essential(sys: &CoxeterSystem, w: &Element) -> bool {
    let pres = parabolic_closure(sys, w);
    pres.is_standard() && pres.gens_mask == sys.full_mask()
}

/// Product of all generators in index order.
pub fn coxeter_element(sys: &CoxeterSystem) -> Element {
    let letters: Vec<u8> = (0..sys.rank() as u8).collect();
    sys.normal_form(&letters)
}

/// Product of all generators starting at position `start`, cycling.
pub fn coxeter_rotation(sys: &CoxeterSystem, start: usize) -> Element {
    let r = sys.rank();
    let letters: Vec<u8> = (0..r).map(|i| ((start + i) % r) as u8).collect();
    sys.normal_form(&letters)
}

#[derive(Clone, Debug, Serialize)]
pub enum ClosureStep {
    /// Pc(ws) sits inside Pc(w).
    Contained { closure: ParabolicPresentation },
    /// Pc(ws) is the standard parabolic on Pc(w)'s letters plus s.
    Extended { closure: ParabolicPresentation },
}

/// The two ways a closure can move when a letter is appended. Requires
/// the closure of w itself to be standard.
pub fn closure_step(sys: &CoxeterSystem, w: &Element, s: u8) -> Result<ClosureStep> {
    let pres_w = parabolic_closure(sys, w);
    if !pres_w.is_standard() {
        return Err(CoxError::NotStandard(format!(
            "closure of {} is not standard",
            sys.format_word(w.word())
        )));
    }
    let jmask = pres_w.gens_mask;
    let ws = sys.mul(w, &sys.generator(s));
    let pres_ws = parabolic_closure(sys, &ws);

    let contained = sys.mask_gens(pres_ws.gens_mask).iter().all(|&k| {
        let g = sys.conj(&pres_ws.conjugator, &sys.generator(k));
        sys.support_mask(&g) & !jmask == 0
    });
    if contained {
        return Ok(ClosureStep::Contained { closure: pres_ws });
    }
    let extended_mask = jmask | (1u64 << s);
    if pres_ws.is_standard() && pres_ws.gens_mask == extended_mask {
        return Ok(ClosureStep::Extended { closure: pres_ws });
    }
    Err(CoxError::ClosureStepUndecided {
        w: sys.format_word(w.word()),
        s: sys.gen_name(s).to_string(),
    })
}

pub const OVERGROUP_FREE_LIMIT: usize = 20;

/// All generator masks K with J included in K.
pub fn standard_overgroups(sys: &CoxeterSystem, jmask: u64) -> Result<Vec<u64>> {
    let free = sys.full_mask() & !jmask;
    let n = free.count_ones() as usize;
    if n > OVERGROUP_FREE_LIMIT {
        return Err(CoxError::OvergroupBound(n));
    }
    let bits: Vec<u64> = (0..64).filter(|b| free & (1u64 << b) != 0).map(|b| 1u64 << b).collect();
    let mut out = Vec::with_capacity(1 << n);
    for pick in 0u64..(1u64 << n) {
        let mut m = jmask;
        for (i, bit) in bits.iter().enumerate() {
            if pick & (1u64 << i) != 0 {
                m |= bit;
            }
        }
        out.push(m);
    }
    out.sort_unstable();
    Ok(out)
}

/// Shape of the standard part of a presentation; conjugation does not
/// change the diagram type.
pub fn closure_shape(sys: &CoxeterSystem, pres: &ParabolicPresentation) -> classify::Shape {
    classify::shape(sys, pres.gens_mask)
}

pub fn has_finite_order(sys: &CoxeterSystem, w: &Element) -> bool {
    let pres = parabolic_closure(sys, w);
    closure_shape(sys, &pres).all_spherical()
}
