//! Per-entry verification: the invariant suite, the theorem probes and the
//! complete-intersection certificate.

use std::sync::Arc;

use ciprobe_core::conormal::{
    conormal_from_model, h1_presentation_crosscheck, jacobi_zariski_check, lenstra_evolution_check, sharpvc_hypothesis_check,
    ConormalModule, EvolutionVerdict,
};
use ciprobe_core::dgmodel::{build_minimal_model, kahler_module, DgModel, KahlerBase};
use ciprobe_core::exactalg::{MonomialOrder, Polynomial};
use ciprobe_core::groebner::{
    buchberger, height, hilbert_by_slice_rank, hilbert_by_standard_monomials, FreeModule, GradedMap, GradedRing, Ideal, ModulePresentation,
    PolyVec,
};
use ciprobe_core::homlie::{compute_pi, ext_crosscheck, induced_ad, radical_probe, theta, HomotopyLieTruncation, PiVector, RadicalVerdict};
use ciprobe_core::koszul::{h1_free_summand_probe, koszul_complex, koszul_h1, KoszulH1, SummandVerdict};
use ciprobe_core::resolve::{ext_betti, projdim_probe, FreenessProof, ProjDim, ProjDimCertificate};

use crate::corpus::{Bounds, CorpusEntry, LenstraGolden};
use crate::error::{HarnessError, Result};
use crate::report::{BettiTriple, Check, EntryData, EntryReport, Status};

/// Both graded complete-intersection criteria; they must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CiVerdict {
    pub is_ci: bool,
    pub mu: usize,
    pub height: usize,
    pub h1_zero: bool,
}

pub fn ci_certificate(ideal: &Ideal, degree_bound: i32) -> Result<CiVerdict> {
    let h1 = koszul_h1(ideal, degree_bound)?;
    ci_from_parts(ideal, &h1)
}

fn ci_from_parts(ideal: &Ideal, h1: &KoszulH1) -> Result<CiVerdict> {
    let mu = koszul_complex(ideal).generators.len();
    let height = if ideal.is_zero() { 0 } else { height(ideal)? };
    let h1_zero = h1.is_zero();
    if h1_zero != (mu == height) {
        return Err(ciprobe_core::Error::CriteriaDisagree(format!("H1 = 0 is {h1_zero} but μ = {mu}, height = {height}")).into());
    }
    Ok(CiVerdict { is_ci: h1_zero, mu, height, h1_zero })
}

/// `S = R/I` as a cyclic `R`-module.
pub fn quotient_presentation(ideal: &Ideal) -> ModulePresentation {
    let r = GradedRing::polynomial(ideal.ring());
    let gens = ideal.generators();
    let source = FreeModule::new(&r, gens.iter().map(|g| g.total_degree().unwrap() as i32).collect());
    let cols = gens.iter().map(|g| vec![g.clone()]).collect();
    ModulePresentation::new(GradedMap::new(source, FreeModule::new(&r, vec![0]), cols).expect("generators are homogeneous"))
}

pub fn format_projdim(c: &ProjDimCertificate) -> String {
    match (c.verdict, c.proof) {
        (ProjDim::Finite(d), Some(p)) => format!("Finite({d}) [{}]", proof_name(p)),
        (ProjDim::Finite(d), None) => format!("Finite({d})"),
        (ProjDim::NotTerminatedWithin(l), _) => format!("NotTerminatedWithin({l})"),
    }
}

fn proof_name(p: FreenessProof) -> &'static str {
    match p {
        FreenessProof::SocleDegreeBound => "socle degree bound",
        FreenessProof::SyzygyModuleZero => "syzygy module zero",
        FreenessProof::Trivial => "free",
    }
}

/// Outcome of one of the two theorem probes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub quotient_projdim: String,
    pub module_projdim: String,
    pub module_betti_totals: Vec<usize>,
    pub is_ci: bool,
    /// For non-CI entries: the module probe ran all `reslen` steps with a
    /// nonzero free module at each step.
    pub evidence_complete: bool,
    /// Theorem B only.
    pub gulliksen: Option<String>,
}

fn theorem_probe(label: &str, ideal: &Ideal, module: &ModulePresentation, ci: &CiVerdict, bounds: &Bounds) -> Result<TheoremReport> {
    let d = bounds.intdeg as i32;
    let q = projdim_probe(&quotient_presentation(ideal), bounds.reslen, d);
    let m = projdim_probe(module, bounds.reslen, d);
    let both_finite = matches!(q.verdict, ProjDim::Finite(_)) && matches!(m.verdict, ProjDim::Finite(_));
    if both_finite && !ci.is_ci {
        return Err(HarnessError::TheoremViolation(format!("{label}: both probes finite but the ideal is not a complete intersection")));
    }
    if ci.is_ci && !matches!(m.verdict, ProjDim::Finite(_)) {
        return Err(HarnessError::TheoremViolation(format!("{label}: complete intersection with a non-free test module")));
    }
    let totals = m.resolution.total_betti();
    let evidence_complete = !ci.is_ci
        && m.verdict == ProjDim::NotTerminatedWithin(bounds.reslen)
        && totals.len() == bounds.reslen + 1
        && totals.iter().all(|&b| b > 0);
    Ok(TheoremReport {
        quotient_projdim: format_projdim(&q),
        module_projdim: format_projdim(&m),
        module_betti_totals: totals,
        is_ci: ci.is_ci,
        evidence_complete,
        gulliksen: None,
    })
}

/// Finite projective dimension of `I/I²` (with `S` perfect) forces a
/// complete intersection; checked on the entry.
pub fn verify_theorem_a(entry: &CorpusEntry) -> Result<TheoremReport> {
    let d = entry.bounds.intdeg as i32;
    let ci = ci_certificate(&entry.ideal, d)?;
    let s = GradedRing::quotient(&entry.ideal)?;
    let (_, _, conormal) = ciprobe_core::conormal::conormal_direct(&entry.ideal, &s, d);
    theorem_probe("theorem A", &entry.ideal, &conormal, &ci, &entry.bounds)
}

/// The same for `H_1(I; R)`, plus the free-summand probe.
pub fn verify_theorem_b(entry: &CorpusEntry) -> Result<TheoremReport> {
    let d = entry.bounds.intdeg as i32;
    let h1 = koszul_h1(&entry.ideal, d)?;
    let ci = ci_from_parts(&entry.ideal, &h1)?;
    theorem_b_from_parts(&entry.ideal, &h1, &ci, &entry.bounds)
}

fn theorem_b_from_parts(ideal: &Ideal, h1: &KoszulH1, ci: &CiVerdict, bounds: &Bounds) -> Result<TheoremReport> {
    let mut r = theorem_probe("theorem B", ideal, &h1.presentation, ci, bounds)?;
    let g = h1_free_summand_probe(h1, bounds.intdeg as i32);
    if !ci.is_ci {
        if let SummandVerdict::FreeSummand(i) = g {
            return Err(HarnessError::TheoremViolation(format!("H1 of a non-CI ideal has a free summand (generator {i})")));
        }
    }
    r.gulliksen = Some(match g {
        SummandVerdict::FreeSummand(i) => format!("FreeSummand({i})"),
        SummandVerdict::NoneFoundWithinBound(b) => format!("NoneFoundWithinBound({b})"),
    });
    Ok(r)
}

fn betti_triples(c: &ProjDimCertificate) -> Vec<BettiTriple> {
    c.resolution.betti_triples().into_iter().map(|(i, j, b)| [i as i64, j as i64, b as i64]).collect()
}

fn format_radical(v: &RadicalVerdict) -> String {
    match v {
        RadicalVerdict::RadicalWitness { n, truncation } => format!("RadicalWitness({n}) up to degree {truncation}"),
        RadicalVerdict::NonRadicalEvidence { degrees, truncation } => {
            format!("NonRadicalEvidence({degrees:?}) up to degree {truncation}")
        }
        RadicalVerdict::Inconclusive(n) => format!("Inconclusive({n})"),
    }
}

/// Collects checks; a failing computation becomes a failed check.
struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, criterion: u8, name: &str, status: Status, detail: impl Into<String>) {
        self.checks.push(Check { criterion, name: name.to_string(), status, detail: detail.into() });
    }

    fn result(&mut self, criterion: u8, name: &str, r: std::result::Result<String, String>) -> bool {
        match r {
            Ok(d) => {
                self.push(criterion, name, Status::Pass, d);
                true
            }
            Err(e) => {
                self.push(criterion, name, Status::Fail, e);
                false
            }
        }
    }

    fn core(&mut self, criterion: u8, name: &str, r: ciprobe_core::Result<()>, ok: &str) -> bool {
        self.result(criterion, name, r.map(|_| ok.to_string()).map_err(|e| e.to_string()))
    }

    fn expect(&mut self, criterion: u8, name: &str, cond: bool, ok: impl Into<String>, bad: impl Into<String>) -> bool {
        self.result(criterion, name, if cond { Ok(ok.into()) } else { Err(bad.into()) })
    }
}

fn monomial_power(ring: &Arc<ciprobe_core::exactalg::PolyRing>, var: usize, e: u32) -> Polynomial {
    let mut p = Polynomial::one(ring);
    for _ in 0..e {
        p = &p * &Polynomial::var(ring, var);
    }
    p
}

/// A lift differing from the default by elements of `𝔪_R`.
fn perturbed_lift(model: &DgModel, z: usize) -> Vec<Polynomial> {
    let ring = model.algebra.ring();
    let vars = model.algebra.vars();
    let ez = vars[z].intdeg;
    model
        .variables_of_degree(1)
        .map(|y| {
            let base = if y == z { Polynomial::one(ring) } else { Polynomial::zero(ring) };
            if ring.nvars() == 0 {
                return base;
            }
            let e = vars[y].intdeg.saturating_sub(ez).max(1);
            &base + &monomial_power(ring, 0, e)
        })
        .collect()
}

fn unit(pi: &HomotopyLieTruncation, k: usize) -> PiVector {
    [(k, pi.field.one())].into_iter().collect()
}

/// Runs the whole suite on one entry.
pub fn check_entry(entry: &CorpusEntry) -> EntryReport {
    let mut rec = Recorder { checks: Vec::new() };
    let mut data = EntryData::default();
    if let Err(e) = run_suite(entry, &mut rec, &mut data) {
        rec.push(0, "pipeline", Status::Fail, e.to_string());
    }
    EntryReport {
        name: entry.name.clone(),
        field: entry.field.to_string(),
        ring: entry.vars.clone(),
        ideal: entry.generator_strings(),
        bounds: entry.bounds,
        checks: rec.checks,
        data,
        timing_ms: None,
    }
}

fn run_suite(entry: &CorpusEntry, rec: &mut Recorder, data: &mut EntryData) -> Result<()> {
    let ideal = &entry.ideal;
    let b = entry.bounds;
    let d = b.intdeg as i32;

    // structure of the basic objects
    let gb = buchberger(ideal, MonomialOrder::DegRevLex);
    let gens_reduce = ideal.generators().iter().all(|g| gb.contains(g).unwrap_or(false));
    rec.expect(
        1,
        "groebner.basis",
        gb.is_reduced() && gb.satisfies_buchberger_criterion() && gens_reduce,
        format!("{} elements, reduced, S-pairs reduce to 0", gb.elements().len()),
        "Gröbner basis fails the S-pair criterion or misses a generator",
    );
    let s = GradedRing::quotient(ideal)?;
    let hf = hilbert_by_standard_monomials(&s, b.intdeg);
    let hf2 = hilbert_by_slice_rank(ideal, b.intdeg);
    rec.expect(1, "hilbert.two_ways", hf == hf2, "standard monomials = slice ranks", format!("{hf:?} vs {hf2:?}"));
    data.hilbert = hf;

    let h1 = koszul_h1(ideal, d)?;
    let ci = match ci_from_parts(ideal, &h1) {
        Ok(c) => c,
        Err(e) => {
            rec.push(4, "ci.certificate", Status::Fail, e.to_string());
            return Err(e);
        }
    };
    rec.push(
        4,
        "ci.certificate",
        Status::Pass,
        format!("{} (μ = {}, height = {}, H1 zero = {})", if ci.is_ci { "CI" } else { "not CI" }, ci.mu, ci.height, ci.h1_zero),
    );
    data.is_ci = Some(ci.is_ci);
    data.mu = Some(ci.mu);
    data.height = Some(ci.height);
    data.h1_generators = Some(h1.minimal_generator_count());
    rec.core(1, "koszul.square_zero", koszul_complex(ideal).check_square_zero(), "∂² = 0");

    // the minimal model
    let model = build_minimal_model(ideal, b.hdeg, b.intdeg)?;
    data.deviations = model.deviations();
    rec.core(1, "model.square_zero", model.algebra.check_square_zero(), "∂² = 0 on all variables");
    rec.core(1, "model.minimal", model.check_minimality(), "∂X ⊆ 𝔪_R A + (X)²");
    rec.core(
        1,
        "model.acyclic",
        model.check_acyclic(),
        &format!("H_0 = S and H_i = 0 for 0 < i < {} in internal degrees ≤ {}", b.hdeg, b.intdeg),
    );
    let rel = kahler_module(&model, KahlerBase::Relative);
    rec.core(1, "kahler.relative", rel.check_square_zero(&model).and_then(|_| rel.check_minimal()), "∂² = 0, reduced complex minimal");
    let abs = kahler_module(&model, KahlerBase::Absolute);
    rec.core(1, "kahler.absolute", abs.check_square_zero(&model), "∂² = 0");

    // resolutions
    let qp = projdim_probe(&quotient_presentation(ideal), b.reslen, d);
    rec.core(1, "resolution.quotient", qp.resolution.check_all(&quotient_presentation(ideal)), "complex, minimal, Euler characteristic");
    data.projdim_quotient = format_projdim(&qp);
    data.betti_quotient = betti_triples(&qp);

    let conormal: Option<ConormalModule> = match conormal_from_model(&model) {
        Ok(c) => {
            rec.push(
                3,
                "conormal.routes",
                Status::Pass,
                format!("μ = {}, Hilbert functions agree through degree {d}", c.minimal_generator_count()),
            );
            Some(c)
        }
        Err(e) => {
            rec.push(3, "conormal.routes", Status::Fail, e.to_string());
            None
        }
    };
    let cp = conormal.as_ref().map(|c| projdim_probe(&c.route_a, b.reslen, d));
    if let (Some(c), Some(cp)) = (&conormal, &cp) {
        rec.core(1, "resolution.conormal", cp.resolution.check_all(&c.route_a), "complex, minimal, Euler characteristic");
        data.projdim_conormal = format_projdim(cp);
        data.betti_conormal = betti_triples(cp);
        data.conormal_hilbert = c.hilbert.clone();
    }
    let hp = projdim_probe(&h1.presentation, b.reslen, d);
    rec.core(1, "resolution.h1", hp.resolution.check_all(&h1.presentation), "complex, minimal, Euler characteristic");
    data.projdim_h1 = format_projdim(&hp);
    data.betti_h1 = betti_triples(&hp);
    let ext_len = 5.min(b.hdeg as usize);
    let kres = ext_betti(&s, ext_len, d);
    rec.core(1, "resolution.residue", kres.check_all(&ModulePresentation::residue_field(&s)), "complex, minimal, Euler characteristic");
    data.betti_residue = kres.betti_triples().into_iter().map(|(i, j, n)| [i as i64, j as i64, n as i64]).collect();

    // oracle equivalences
    let x2 = data.deviations.get(1).copied().unwrap_or(0);
    rec.expect(
        3,
        "model.x2_vs_h1",
        x2 == h1.minimal_generator_count(),
        format!("|X_2| = μ(H_1) = {x2}"),
        format!("|X_2| = {x2}, μ(H_1) = {}", h1.minimal_generator_count()),
    );
    if b.hdeg >= 5 {
        rec.result(
            3,
            "ext.crosscheck",
            ext_crosscheck(&model, 5)
                .map(|r| format!("Ext^i dims {:?} for i ≤ 5, bigraded agreement", r.totals_resolution))
                .map_err(|e| e.to_string()),
        );
    } else {
        rec.push(3, "ext.crosscheck", Status::Inconclusive { bound: format!("hdeg={}", b.hdeg) }, "needs hdeg ≥ 5");
    }
    if b.hdeg >= 3 {
        rec.result(
            3,
            "h1.coker_d3",
            match h1_presentation_crosscheck(&model, &h1) {
                Ok(c) if c.agrees() => Ok(format!("μ = {}, Hilbert functions agree", c.mu_model)),
                Ok(c) => Err(format!("{c:?}")),
                Err(e) => Err(e.to_string()),
            },
        );
    }

    // Lie structure
    let pi = compute_pi(&model, b.hdeg + 1)?;
    data.pi_dims = (2..=b.hdeg + 1).map(|i| pi.dim(i)).collect();
    data.nonzero_brackets = pi.bracket.len();
    rec.core(2, "lie.antisymmetry", pi.check_antisymmetry(), "[v,u] = -(-1)^{|u||v|}[u,v] on all basis pairs");
    rec.core(2, "lie.jacobi", pi.check_jacobi(), &format!("graded Jacobi on all basis triples of total degree ≤ {}", pi.bound));
    let basis2 = pi.basis(2);
    let mut chain_ok = Ok(());
    let mut induced_ok = Ok(());
    for &z in &basis2 {
        let th = theta(&model, &unit(&pi, z), None)?;
        if chain_ok.is_ok() && !(th.is_chain(&model) && th.lands_in_maximal_ideal()) {
            chain_ok = Err(format!("θ for {} is not a chain derivation into 𝔪_A", pi.names[z]));
        }
        if induced_ok.is_ok() {
            if let Err(e) = induced_ad(&model, &th, &pi) {
                induced_ok = Err(format!("{}: {e}", pi.names[z]));
            }
        }
        data.radical.push(format!("{}: {}", pi.names[z], format_radical(&radical_probe(&unit(&pi, z), &pi))));
    }
    let nz = basis2.len();
    rec.result(2, "theta.chain", chain_ok.map(|_| format!("{nz} derivations, chain maps into 𝔪_A")));
    rec.result(2, "theta.induced_ad", induced_ok.map(|_| format!("induced map = -ad(z) for all {nz} basis elements")));
    if let Some(&z) = basis2.first() {
        let a = theta(&model, &unit(&pi, z), None)?;
        let bth = theta(&model, &unit(&pi, z), Some(perturbed_lift(&model, z)))?;
        let same = match (induced_ad(&model, &a, &pi), induced_ad(&model, &bth, &pi)) {
            (Ok(x), Ok(y)) => x == y && bth.is_chain(&model),
            _ => false,
        };
        rec.expect(2, "theta.lift_independence", same, "a lift perturbed by 𝔪_R induces the same map", "lifts induce different maps");
    }

    // theorem consistency
    let ta = conormal.as_ref().map(|c| theorem_probe("theorem A", ideal, &c.route_a, &ci, &b));
    match ta {
        Some(Ok(r)) => {
            let ok = r.is_ci || r.evidence_complete;
            rec.expect(
                4,
                "theorem_a",
                ok,
                format!("S over R: {}; I/I²: {}", r.quotient_projdim, r.module_projdim),
                format!("I/I² probe {} with Betti totals {:?}", r.module_projdim, r.module_betti_totals),
            );
        }
        Some(Err(e)) => rec.push(4, "theorem_a", Status::Fail, e.to_string()),
        None => rec.push(4, "theorem_a", Status::Fail, "conormal module unavailable"),
    }
    match theorem_b_from_parts(ideal, &h1, &ci, &b) {
        Ok(r) => {
            let ok = r.is_ci || r.evidence_complete;
            rec.expect(
                4,
                "theorem_b",
                ok,
                format!("S over R: {}; H_1: {}", r.quotient_projdim, r.module_projdim),
                format!("H_1 probe {} with Betti totals {:?}", r.module_projdim, r.module_betti_totals),
            );
            let g = r.gulliksen.unwrap_or_default();
            if ci.is_ci {
                rec.push(4, "gulliksen", Status::Skipped, format!("complete intersection; probe says {g}"));
            } else {
                rec.expect(4, "gulliksen", g.starts_with("NoneFound"), g.clone(), g.clone());
            }
            data.gulliksen = g;
        }
        Err(e) => rec.push(4, "theorem_b", Status::Fail, e.to_string()),
    }
    if ci.is_ci {
        let free_rank = conormal.as_ref().is_some_and(|c| c.has_no_relations() && c.minimal_generator_count() == ci.height);
        let upper_empty = (3..=pi.bound).all(|i| pi.dim(i) == 0);
        let radical_ok = data.radical.iter().all(|r| r.contains("RadicalWitness(1)"));
        rec.expect(
            4,
            "ci.structure",
            h1.is_zero() && free_rank && upper_empty && pi.is_abelian() && radical_ok,
            format!("H_1 = 0, I/I² free of rank {}, π^(>2) = 0, brackets zero", ci.height),
            "a complete intersection with nonzero H_1, non-free I/I², or π^(>2) ≠ 0",
        );
    } else {
        rec.push(4, "ci.structure", Status::Skipped, "not a complete intersection");
    }
    if let Some(c) = &conormal {
        let alpha: Vec<PolyVec> = (0..c.route_a.generators().rank()).map(|j| c.route_a.generators().unit_vector(j)).collect();
        rec.result(
            4,
            "sharpvc.identity",
            sharpvc_hypothesis_check(ideal, c, alpha, &c.route_a, b.reslen, d)
                .map(|r| match r.ci_asserted {
                    Some(_) => "hypotheses hold and the ideal is a complete intersection".to_string(),
                    None => format!("no assertion: target probe {:?}", r.target_projdim),
                })
                .map_err(|e| e.to_string()),
        );
    }

    // Kähler differentials and evolutions
    if entry.field.characteristic() == 0 {
        match jacobi_zariski_check(ideal, d) {
            Ok(r) => {
                data.jacobi_zariski = r
                    .slices
                    .iter()
                    .map(|s| [s.degree as i64, s.d1 as i64, s.conormal as i64, s.omega_r as i64, s.omega_s as i64])
                    .collect();
                let bad: Vec<i32> = r.slices.iter().filter(|s| s.alternating_sum() != 0).map(|s| s.degree).collect();
                rec.expect(
                    5,
                    "jacobi_zariski",
                    bad.is_empty(),
                    format!("exact in degrees 0..={d}"),
                    format!("not exact in degrees {bad:?}"),
                );
            }
            Err(e) => rec.push(5, "jacobi_zariski", Status::Fail, e.to_string()),
        }
        match lenstra_evolution_check(ideal) {
            Ok(v) => {
                let (golden, text) = match &v {
                    EvolutionVerdict::TrivialEvolutionsOnly => (LenstraGolden::Trivial, "TrivialEvolutionsOnly".to_string()),
                    EvolutionVerdict::NontrivialEvolutionPossible { witness } => {
                        (LenstraGolden::Nontrivial, format!("NontrivialEvolutionPossible(witness {witness})"))
                    }
                };
                data.lenstra = Some(text.clone());
                match entry.expect.lenstra {
                    Some(g) => rec.expect(5, "lenstra", g == golden, text.clone(), format!("frozen {g:?}, computed {text}")),
                    None => {
                        rec.push(5, "lenstra", Status::Inconclusive { bound: "no frozen verdict".into() }, text);
                        false
                    }
                };
            }
            Err(e) => rec.push(5, "lenstra", Status::Fail, e.to_string()),
        }
    } else {
        rec.push(5, "jacobi_zariski", Status::Skipped, "positive characteristic");
        rec.push(5, "lenstra", Status::Skipped, "positive characteristic");
    }

    // frozen expectations
    let e = &entry.expect;
    let conormal_free = conormal.as_ref().map(|c| c.has_no_relations());
    let mut diffs = Vec::new();
    for (key, want, got) in
        [("ci", e.ci, Some(ci.is_ci)), ("h1zero", e.h1zero, Some(h1.is_zero())), ("conormalfree", e.conormalfree, conormal_free)]
    {
        if let Some(w) = want {
            if got != Some(w) {
                diffs.push(format!("{}: {key} expected {w}, computed {got:?}", entry.name));
            }
        }
    }
    rec.expect(4, "expect.flags", diffs.is_empty(), "flags match", diffs.join("; "));
    if let Some(dev) = &e.deviations {
        let got = &data.deviations[..dev.len().min(data.deviations.len())];
        rec.expect(
            1,
            "expect.deviations",
            got == dev.as_slice(),
            format!("{dev:?}"),
            format!("{}: frozen {dev:?}, computed {got:?}", entry.name),
        );
    }
    Ok(())
}
