//! Command implementations behind the `coxkit` binary.
//!
//! Every command loads a system (or building) description from JSON,
//! runs library calls, and returns an exit code plus a JSON report.
//! Exit codes: 0 decided, 1 invalid input, 2 inconclusive at the
//! configured bounds. Reports embed their bounds so a negative result
//! can be reproduced; with a fixed seed the bytes are stable.

use crate::ball::BallCache;
use crate::building::{
    self, check_axioms, GpElem, GraphProductBuilding, ThinBuilding, WeylDistanceSpace,
};
use crate::classify::{self, Shape};
use crate::element::Element;
use crate::error::{CoxError, Result};
use crate::parabolic::{self, ParabolicPresentation};
use crate::qm;
use crate::rankone::{self, PairOutcome, RankOneStatus};
use crate::system::CoxeterSystem;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub system_path: PathBuf,
    pub radius: Option<usize>,
    pub horizon: Option<usize>,
    pub k_max: Option<usize>,
    pub length_bound: Option<usize>,
    pub n_max: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn for_system(path: impl Into<PathBuf>) -> RunConfig {
        RunConfig { system_path: path.into(), ..RunConfig::default() }
    }

    fn radius(&self) -> usize {
        self.radius.unwrap_or(6)
    }

    fn horizon(&self) -> usize {
        self.horizon.unwrap_or(6)
    }
}

pub struct CmdResult {
    pub exit: i32,
    pub report: Value,
}

fn decided(report: impl Serialize) -> Result<CmdResult> {
    Ok(CmdResult { exit: 0, report: serde_json::to_value(report)? })
}

fn at_bounds(report: impl Serialize) -> Result<CmdResult> {
    Ok(CmdResult { exit: 2, report: serde_json::to_value(report)? })
}

/// Exit code for an error escaping a command: malformed input is 1,
/// blown search or word-length budgets are 2.
pub fn exit_code_for(err: &CoxError) -> i32 {
    match err {
        CoxError::BudgetExceeded(..)
        | CoxError::OvergroupBound(..)
        | CoxError::WordLengthBudget(..) => 2,
        _ => 1,
    }
}

pub fn render_report(result: &CmdResult) -> String {
    let mut text = serde_json::to_string_pretty(&result.report).expect("report serializes");
    text.push('\n');
    text
}

/// Write the report next to stdout output; the file appears atomically.
pub fn write_report(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

// ------------------------------------------------------------ loading

pub fn load_system(path: &Path) -> Result<CoxeterSystem> {
    let text = fs::read_to_string(path)?;
    CoxeterSystem::from_json(&text)
}

fn parse_element(sys: &CoxeterSystem, text: &str) -> Result<Element> {
    if text.trim() == "e" || text.trim().is_empty() {
        return Ok(sys.identity());
    }
    sys.element_from_str(text)
}

/// Ball cache shared across runs: persisted beside the system file,
/// keyed by the content hash of the Coxeter matrix.
fn ball_for<'a>(
    sys: &'a CoxeterSystem,
    system_path: &Path,
    radius: usize,
) -> Result<BallCache<'a>> {
    let dir = system_path.parent().unwrap_or(Path::new("."));
    let cache = dir.join(BallCache::cache_filename(sys, radius));
    if cache.is_file() {
        if let Ok(ball) = BallCache::load(sys, &cache) {
            if ball.completed_radius() >= radius {
                return Ok(ball);
            }
        }
    }
    let ball = BallCache::build(sys, radius)?;
    let _ = ball.save(&cache);
    Ok(ball)
}

fn mask_names(sys: &CoxeterSystem, mask: u64) -> Vec<String> {
    sys.mask_names(mask)
}

#[derive(Serialize)]
struct ShapeReport {
    generators: Vec<String>,
    components: Vec<ComponentReport>,
    all_spherical: bool,
    obstruction: Option<classify::BadShape>,
}

#[derive(Serialize)]
struct ComponentReport {
    generators: Vec<String>,
    label: String,
    class: classify::Class,
}

fn shape_report(sys: &CoxeterSystem, mask: u64, shape: &Shape) -> ShapeReport {
    ShapeReport {
        generators: mask_names(sys, mask),
        components: shape
            .components
            .iter()
            .map(|c| ComponentReport {
                generators: mask_names(sys, c.mask),
                label: c.label.clone(),
                class: c.class,
            })
            .collect(),
        all_spherical: shape.all_spherical(),
        obstruction: shape.obstruction(),
    }
}

#[derive(Serialize)]
struct ClosureReport {
    conjugator: String,
    generators: Vec<String>,
    standard: bool,
    shape: ShapeReport,
    finite: bool,
}

fn closure_report(sys: &CoxeterSystem, pres: &ParabolicPresentation) -> ClosureReport {
    let shape = classify::shape(sys, pres.gens_mask);
    ClosureReport {
        conjugator: sys.format_word(pres.conjugator.word()),
        generators: mask_names(sys, pres.gens_mask),
        standard: pres.is_standard(),
        shape: shape_report(sys, pres.gens_mask, &shape),
        finite: shape.all_spherical(),
    }
}

// ----------------------------------------------------------- commands

pub fn cmd_classify(cfg: &RunConfig, subsets: &[String]) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let full = classify::shape(&sys, sys.full_mask());
    let mut subset_reports = Vec::new();
    for text in subsets {
        let mut mask = 0u64;
        for tok in text.split_whitespace() {
            mask |= 1u64 << sys.gen_index(tok)?;
        }
        let shape = classify::shape(&sys, mask);
        subset_reports.push(shape_report(&sys, mask, &shape));
    }
    decided(json!({
        "system": { "generators": sys.generator_names(), "rank": sys.rank() },
        "full": shape_report(&sys, sys.full_mask(), &full),
        "subsets": subset_reports,
    }))
}

pub fn cmd_nf(cfg: &RunConfig, word: &str) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let letters = if word.trim() == "e" { Vec::new() } else { sys.parse_word(word)? };
    let nf = sys.normal_form(&letters);
    decided(json!({
        "input": word,
        "normal_form": sys.format_word(nf.word()),
        "length": nf.len(),
        "input_reduced": sys.is_reduced(&letters),
    }))
}

pub fn cmd_pc(cfg: &RunConfig, word: &str) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let w = parse_element(&sys, word)?;
    let pres = parabolic_closure_report(&sys, &w);
    decided(json!({
        "word": sys.format_word(w.word()),
        "closure": pres,
    }))
}

fn parabolic_closure_report(sys: &CoxeterSystem, w: &Element) -> ClosureReport {
    let pres = parabolic::parabolic_closure(sys, w);
    closure_report(sys, &pres)
}

pub fn cmd_essential(cfg: &RunConfig, word: &str) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let w = parse_element(&sys, word)?;
    decided(json!({
        "word": sys.format_word(w.word()),
        "essential": parabolic::is_essential(&sys, &w),
        "closure": parabolic_closure_report(&sys, &w),
    }))
}

#[derive(Serialize)]
struct Rank1Report {
    word: String,
    status: RankOneStatus,
    witness: Option<Vec<String>>,
    reason: Option<classify::BadShape>,
    closure: ClosureReport,
    z2_witness: Option<String>,
    z2_radius: Option<usize>,
    centralizer_growth: Option<rankone::GrowthVerdict>,
}

pub fn cmd_rank1(cfg: &RunConfig, word: &str) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let w = parse_element(&sys, word)?;
    let decision = rankone::is_rank_one(&sys, &w);
    let mut report = Rank1Report {
        word: sys.format_word(w.word()),
        status: decision.status,
        witness: decision.witness.map(|k| mask_names(&sys, k)),
        reason: decision.reason,
        closure: closure_report(&sys, &decision.closure),
        z2_witness: None,
        z2_radius: None,
        centralizer_growth: None,
    };
    if rankone::has_infinite_order(&sys, &w) {
        let radius = cfg.radius();
        let ball = ball_for(&sys, &cfg.system_path, radius)?;
        let z2 = rankone::z2_witness_search_in(&sys, &w, &ball)?;
        report.z2_witness = z2.witness.map(|g| sys.format_word(g.word()));
        report.z2_radius = Some(radius);
        report.centralizer_growth =
            Some(rankone::centralizer_growth_in(&sys, &w, &ball)?.verdict);
    }
    if report.status == RankOneStatus::Inconclusive {
        at_bounds(report)
    } else {
        decided(report)
    }
}

pub fn cmd_reversible(cfg: &RunConfig, word: &str) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let w = parse_element(&sys, word)?;
    let k_max = cfg.k_max.unwrap_or(3);
    let radius = cfg.radius();
    let ball = ball_for(&sys, &cfg.system_path, radius)?;
    let rep = rankone::reversibility_search_in(&sys, &w, k_max, &ball)?;
    let found = rep.witness.is_some();
    let report = json!({
        "word": sys.format_word(w.word()),
        "k_max": k_max,
        "radius": radius,
        "witness": rep.witness.map(|r| json!({
            "k": r.k,
            "a": sys.format_word(r.a.word()),
            "b": sys.format_word(r.b.word()),
        })),
        "involutions_tried": rep.involutions_tried,
    });
    if found {
        decided(report)
    } else {
        at_bounds(report)
    }
}

pub fn cmd_equiv(cfg: &RunConfig, word1: &str, word2: &str) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let g1 = parse_element(&sys, word1)?;
    let g2 = parse_element(&sys, word2)?;
    let bound = cfg.radius();
    let horizon = cfg.horizon();
    let ball = ball_for(&sys, &cfg.system_path, bound)?;
    let rep = rankone::equivalence_witness_in(&sys, &g1, &g2, horizon, &ball)?;
    let found = rep.witness.is_some();
    let report = json!({
        "gamma1": sys.format_word(g1.word()),
        "gamma2": sys.format_word(g2.word()),
        "bound": bound,
        "horizon": horizon,
        "witness": rep.witness.map(|w| json!({
            "a": sys.format_word(w.a.word()),
            "b": sys.format_word(w.b.word()),
            "horizon": w.horizon,
        })),
        "conjugate_powers": rep
            .conjugate_powers
            .iter()
            .map(|(p, x)| json!({ "power": p, "conjugator": sys.format_word(x.word()) }))
            .collect::<Vec<_>>(),
    });
    if found {
        decided(report)
    } else {
        at_bounds(report)
    }
}

pub fn cmd_pair(cfg: &RunConfig) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let rep = rankone::inequivalent_pair(&sys, cfg.radius(), cfg.horizon())?;
    let report = pair_report(&sys, &rep);
    match rep.outcome {
        PairOutcome::Inconclusive { .. } => at_bounds(report),
        _ => decided(report),
    }
}

fn pair_report(sys: &CoxeterSystem, rep: &rankone::PairReport) -> Value {
    let outcome = match &rep.outcome {
        PairOutcome::Found { gamma1, gamma2, profile_direct, profile_inverse } => json!({
            "found": {
                "gamma1": sys.format_word(gamma1.word()),
                "gamma2": sys.format_word(gamma2.word()),
                "independence_direct": profile_direct,
                "independence_inverse": profile_inverse,
            }
        }),
        PairOutcome::VirtuallyAbelian => {
            json!({ "virtually_abelian": "every pair of infinite-order elements is equivalent up to inversion" })
        }
        PairOutcome::Inconclusive { candidates, pairs_tried } => json!({
            "inconclusive": { "candidates": candidates, "pairs_tried": pairs_tried }
        }),
    };
    json!({ "bound": rep.bound, "horizon": rep.horizon, "outcome": outcome })
}

// ----------------------------------------------------------- building

struct BuildingFile {
    sys: CoxeterSystem,
    thickness: Option<Vec<u32>>,
}

fn load_building(path: &Path) -> Result<BuildingFile> {
    let text = fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    let sys = CoxeterSystem::from_json(&text)?;
    let thickness = match v.get("thickness") {
        None | Some(Value::Null) => None,
        Some(Value::Number(n)) => {
            let q = n.as_u64().ok_or_else(|| {
                CoxError::InvalidSystem("thickness must be a positive integer".into())
            })? as u32;
            Some(vec![q; sys.rank()])
        }
        Some(Value::Object(map)) => {
            let mut qs = vec![0u32; sys.rank()];
            for (name, qv) in map {
                let s = sys.gen_index(name)?;
                qs[s as usize] = qv.as_u64().ok_or_else(|| {
                    CoxError::InvalidSystem(format!("thickness for {name} must be an integer"))
                })? as u32;
            }
            Some(qs)
        }
        Some(other) => {
            return Err(CoxError::InvalidSystem(format!(
                "unsupported thickness value: {other}"
            )))
        }
    };
    Ok(BuildingFile { sys, thickness })
}

const EXHAUSTIVE_TRIPLE_LIMIT: usize = 50_000;
const SAMPLED_TRIPLES: usize = 10_000;

/// Exhaustive when small; otherwise seeded sampling, with half the
/// triples ending on a panel neighbour of y so the simple-leg case of
/// (Bu2) actually comes up.
fn sample_triples<S: WeylDistanceSpace>(
    space: &S,
    chambers: &[S::Chamber],
    seed: u64,
) -> (String, Vec<(S::Chamber, S::Chamber, S::Chamber)>) {
    let n = chambers.len();
    if n * n * n <= EXHAUSTIVE_TRIPLE_LIMIT {
        let mut triples = Vec::with_capacity(n * n * n);
        for x in chambers {
            for y in chambers {
                for z in chambers {
                    triples.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
        return ("exhaustive".to_string(), triples);
    }
    let rank = space.system().rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples = (0..SAMPLED_TRIPLES)
        .map(|t| {
            let x = chambers[rng.gen_range(0..n)].clone();
            let y = chambers[rng.gen_range(0..n)].clone();
            let z = if t % 2 == 0 {
                chambers[rng.gen_range(0..n)].clone()
            } else {
                let s = rng.gen_range(0..rank) as u8;
                let panel = space.panel(&y, s);
                panel[rng.gen_range(0..panel.len())].clone()
            };
            (x, y, z)
        })
        .collect();
    ("sampled".to_string(), triples)
}

fn spherical_subsets(sys: &CoxeterSystem) -> Vec<u64> {
    let full = sys.full_mask();
    let mut out = Vec::new();
    let mut mask = 1u64;
    while mask <= full {
        if mask & full == mask && classify::is_spherical_subset(sys, mask) {
            out.push(mask);
        }
        mask += 1;
    }
    out
}

fn building_check_on<S: WeylDistanceSpace>(
    space: &S,
    sys: &CoxeterSystem,
    radius: usize,
    seed: u64,
) -> Result<(bool, Value)> {
    let chambers = space.chambers_within(radius);
    let (mode, triples) = sample_triples(space, &chambers, seed);
    let axioms = check_axioms(space, &triples);

    let base = space.base_chamber();
    let rho = building::retraction(space, base.clone())?;
    let mut retraction_failures = 0usize;
    let retraction_cap = chambers.len().min(2_000);
    for x in chambers.iter().take(retraction_cap) {
        let image = rho.apply(x);
        if space.delta(&base, &image) != space.delta(&base, x) {
            retraction_failures += 1;
        }
    }

    let mut gate_cases = 0usize;
    let mut gate_failures = 0usize;
    let projection_cap = chambers.len().min(200);
    for jmask in spherical_subsets(sys) {
        let res = building::residue(space, &base, jmask, None)?;
        for x in chambers.iter().take(projection_cap) {
            let p = building::projection(space, &res, x)?;
            gate_cases += 1;
            if !building::projection_gate_holds(space, &res, x, &p) {
                gate_failures += 1;
            }
        }
    }

    let passed = axioms.passed() && retraction_failures == 0 && gate_failures == 0;
    let report = json!({
        "chambers": chambers.len(),
        "radius": radius,
        "triples": { "mode": mode, "count": triples.len(), "seed": seed },
        "axioms": axioms,
        "retraction": {
            "checked": retraction_cap,
            "failures": retraction_failures,
        },
        "projection_gate": {
            "cases": gate_cases,
            "failures": gate_failures,
        },
        "passed": passed,
    });
    Ok((passed, report))
}

pub fn cmd_building_check(cfg: &RunConfig) -> Result<CmdResult> {
    let file = load_building(&cfg.system_path)?;
    let seed = cfg.seed.unwrap_or(7);
    match file.thickness {
        None => {
            let radius = cfg.radius.unwrap_or(3);
            let space = ThinBuilding::new(&file.sys);
            let (_, report) = building_check_on(&space, &file.sys, radius, seed)?;
            decided(json!({ "kind": "thin", "check": report }))
        }
        Some(qs) => {
            let radius = cfg.radius();
            let space = GraphProductBuilding::new(&file.sys, qs)?;
            let (_, report) = building_check_on(&space, &file.sys, radius, seed)?;
            decided(json!({ "kind": "graph-product", "check": report }))
        }
    }
}

pub fn cmd_building_rank1(cfg: &RunConfig, word: &str) -> Result<CmdResult> {
    let file = load_building(&cfg.system_path)?;
    let sys = &file.sys;
    let (image, decision) = match file.thickness {
        None => {
            let _space = ThinBuilding::new(sys);
            let g = parse_element(sys, word)?;
            let cert = rankone::is_rank_one(sys, &g);
            (g, cert)
        }
        Some(qs) => {
            let space = GraphProductBuilding::new(sys, qs)?;
            let g: GpElem = space.parse_chamber(word)?;
            let image = space.pi(&g);
            let cert = building::contracting_certificate(&space, &g);
            (image, cert)
        }
    };
    let report = json!({
        "element": word,
        "weyl_image": sys.format_word(image.word()),
        "status": decision.status,
        "witness": decision.witness.map(|k| mask_names(sys, k)),
        "reason": decision.reason,
        "closure": closure_report(sys, &decision.closure),
    });
    if decision.status == RankOneStatus::Inconclusive {
        at_bounds(report)
    } else {
        decided(report)
    }
}

// ----------------------------------------------------------------- qm

pub fn cmd_qm(cfg: &RunConfig, word: &str) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let gamma = parse_element(&sys, word)?;
    let ax = qm::axis_counting(&sys, &gamma, 1)?;
    let model = qm::CoxeterModel::new(&sys);
    let length_bound = cfg.length_bound.unwrap_or(4);
    let n_max = cfg.n_max.unwrap_or(8);
    let sampling = cfg.seed.map(|seed| qm::SampleSpec {
        pairs: 2_000,
        length: 2 * length_bound,
        seed,
    });
    let defect = qm::defect_estimate(&model, &ax.qm, length_bound, sampling)?;
    let hom = qm::homogenize(&model, &ax.qm, &gamma, n_max)?;
    decided(json!({
        "gamma": sys.format_word(gamma.word()),
        "pattern": ax.pattern,
        "variant": ax.variant,
        "defect": defect,
        "homogenization": hom,
    }))
}

// --------------------------------------------------- the demonstration

#[derive(Serialize)]
struct HypothesisCheck {
    shape: ShapeReport,
    irreducible: bool,
    verdict: String,
}

fn hypothesis_check(sys: &CoxeterSystem) -> (bool, HypothesisCheck) {
    let full_mask = sys.full_mask();
    let shape = classify::shape(sys, full_mask);
    let all_spherical = shape.all_spherical();
    let tame = shape
        .components
        .iter()
        .all(|c| c.class != classify::Class::Indefinite);
    let irreducible = shape.components.len() == 1;
    let verdict = if all_spherical {
        "hypothesis violated: spherical; the group is finite".to_string()
    } else if tame {
        "hypothesis violated: affine; the group is virtually abelian".to_string()
    } else if !irreducible {
        "hypothesis violated: reducible".to_string()
    } else {
        "satisfied: irreducible, non-spherical, non-affine".to_string()
    };
    let ok = !all_spherical && !tame && irreducible;
    (ok, HypothesisCheck {
        shape: shape_report(sys, full_mask, &shape),
        irreducible,
        verdict,
    })
}

/// Desk-scale run of the headline construction: an inequivalent pair of
/// rank-one elements, an axis-counting quasi-morphism with an empirical
/// defect window, positive homogenization on a commutator, and the
/// resulting caveated scl lower bound.
pub fn cmd_demo_main_theorem(cfg: &RunConfig) -> Result<CmdResult> {
    let sys = load_system(&cfg.system_path)?;
    let (ok, hypothesis) = hypothesis_check(&sys);
    if !ok {
        return at_bounds(json!({
            "hypothesis": hypothesis,
            "reason": hypothesis.verdict,
        }));
    }

    let bound = cfg.radius();
    let horizon = cfg.horizon();
    let pair = rankone::inequivalent_pair(&sys, bound, horizon)?;
    let (gamma1, gamma2) = match &pair.outcome {
        PairOutcome::Found { gamma1, gamma2, .. } => (gamma1.clone(), gamma2.clone()),
        PairOutcome::VirtuallyAbelian => {
            return at_bounds(json!({
                "hypothesis": hypothesis,
                "reason": "hypothesis violated: affine; the group is virtually abelian",
            }));
        }
        PairOutcome::Inconclusive { .. } => {
            return at_bounds(json!({
                "hypothesis": hypothesis,
                "pair": pair_report(&sys, &pair),
                "reason": "pair search inconclusive at bounds",
            }));
        }
    };

    let ax1 = qm::axis_counting(&sys, &gamma1, 1)?;
    let ax2 = qm::axis_counting(&sys, &gamma2, 1)?;
    let model = qm::CoxeterModel::new(&sys);
    let length_bound = cfg.length_bound.unwrap_or(5);
    let defect = qm::defect_estimate(&model, &ax1.qm, length_bound, None)?;
    let n_max = cfg.n_max.unwrap_or(8);

    // Commutators of gamma1 with its generator conjugates are candidate
    // scl witnesses; take the first with positive homogenized value.
    let mut scl_piece = None;
    for s in 0..sys.rank() as u8 {
        let x = sys.generator(s);
        let conj = sys.conj(&x, &gamma1);
        let g = qm::commutator(&model, &gamma1, &conj);
        if g.is_identity() {
            continue;
        }
        let hom = qm::homogenize(&model, &ax1.qm, &g, n_max)?;
        if hom.value.is_positive() && defect.value > 0 {
            let scl = qm::scl_lower_bound(&model, &g, &defect, &hom)?;
            scl_piece = Some((sys.gen_name(s).to_string(), g, hom, scl));
            break;
        }
    }

    let Some((conjugating, g, hom, scl)) = scl_piece else {
        return at_bounds(json!({
            "hypothesis": hypothesis,
            "pair": pair_report(&sys, &pair),
            "reason": "no commutator with positive homogenization at bounds",
            "bounds": { "n_max": n_max, "length_bound": length_bound },
        }));
    };

    decided(json!({
        "hypothesis": hypothesis,
        "pair": pair_report(&sys, &pair),
        "axis_quasimorphisms": [
            { "gamma": sys.format_word(gamma1.word()), "pattern": ax1.pattern, "variant": ax1.variant },
            { "gamma": sys.format_word(gamma2.word()), "pattern": ax2.pattern, "variant": ax2.variant },
        ],
        "defect": defect,
        "scl_witness": {
            "element": sys.format_word(g.word()),
            "construction": format!(
                "commutator of gamma1 with its {conjugating}-conjugate"
            ),
            "homogenization": hom,
        },
        "scl": scl,
    }))
}
