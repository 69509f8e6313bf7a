use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ciprobe::cache::Cache;
use ciprobe::corpus::{Bounds, CorpusEntry};
use ciprobe::error::{HarnessError, Result};
use ciprobe::run::{run_corpus, RunOptions};
use ciprobe::verify::{ci_certificate, format_projdim, quotient_presentation, verify_theorem_a, verify_theorem_b, TheoremReport};
use ciprobe_core::conormal::{conormal, jacobi_zariski_check, lenstra_evolution_check, EvolutionVerdict};
use ciprobe_core::dgmodel::build_minimal_model;
use ciprobe_core::exactalg::MonomialOrder;
use ciprobe_core::groebner::{buchberger, GradedRing, ModulePresentation};
use ciprobe_core::homlie::{compute_pi, induced_ad, radical_probe, theta, PiVector, RadicalVerdict};
use ciprobe_core::koszul::{koszul_complex, koszul_h1};
use ciprobe_core::resolve::{ext_betti, projdim_probe};

/// Exact probes of complete-intersection criteria for homogeneous ideals.
#[derive(Parser)]
#[command(name = "ciprobe", version)]
struct Cli {
    /// Coefficient field: `Q` or `Fp <p>` (also `F<p>`).
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Monomial order for `gb`: degrevlex, deglex or lex.
    #[arg(long, global = true, default_value = "degrevlex")]
    order: String,
    /// Bounds as `hdeg=5 intdeg=12 reslen=8` (any subset).
    #[arg(long, global = true, default_value = "")]
    bounds: String,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Result cache directory (default: $CIPROBE_CACHE_DIR, else none).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Ring variables, comma separated.
    #[arg(long)]
    ring: String,
    /// Homogeneous generators, comma separated.
    #[arg(long, default_value = "")]
    ideal: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleChoice {
    /// `S = R/I` over `R`.
    Quotient,
    /// `I/I²` over `S`.
    Conormal,
    /// `H_1(I; R)` over `S`.
    H1,
    /// The residue field over `S`.
    Residue,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Gröbner basis.
    Gb(Input),
    /// Minimal free resolution and projective dimension probe.
    Resolve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "quotient")]
        module: ModuleChoice,
    },
    /// Koszul complex ranks and first Koszul homology.
    Koszul(Input),
    /// The conormal module by both routes.
    Conormal(Input),
    /// Minimal model: variables and differentials.
    Model(Input),
    /// Dimensions of the homotopy Lie algebra.
    Pi(Input),
    /// The bracket table.
    Bracket(Input),
    /// The derivation θ_z for a basis element of π².
    Theta {
        #[command(flatten)]
        input: Input,
        /// Index of the basis element of π² (an X_1 variable).
        #[arg(long, default_value_t = 0)]
        z: usize,
    },
    /// Radical probes for basis elements of π².
    Radical {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        z: Option<usize>,
    },
    /// Complete-intersection certificate.
    Ci(Input),
    /// Probe for finite projective dimension of I/I².
    VerifyA(Input),
    /// Probe for finite projective dimension of H_1, with the free-summand probe.
    VerifyB(Input),
    /// Jacobi–Zariski slice table.
    Jz(Input),
    /// Evolution criterion (characteristic zero).
    Lenstra(Input),
    /// Corpus operations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Runs every entry of a corpus file.
    Run {
        path: PathBuf,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Omit timing fields, for byte-comparable output.
        #[arg(long)]
        no_timing: bool,
    },
}

struct Output {
    text: String,
    json: Value,
}

fn entry(cli: &Cli, input: &Input) -> Result<CorpusEntry> {
    let bounds = Bounds::default().with_overrides(&cli.bounds).map_err(|(_, m)| HarnessError::Usage(format!("--bounds: {m}")))?;
    CorpusEntry::from_parts("cli", &cli.field, &input.ring, &input.ideal, bounds)
}

fn theorem_output(r: TheoremReport) -> Output {
    let text = format!(
        "S over R: {}\ntest module: {}\nBetti totals: {:?}\ncomplete intersection: {}\nevidence complete: {}\n{}",
        r.quotient_projdim,
        r.module_projdim,
        r.module_betti_totals,
        r.is_ci,
        r.evidence_complete,
        r.gulliksen.as_ref().map(|g| format!("free-summand probe: {g}\n")).unwrap_or_default()
    );
    let json = json!({
        "quotient_projdim": r.quotient_projdim,
        "module_projdim": r.module_projdim,
        "module_betti_totals": r.module_betti_totals,
        "is_ci": r.is_ci,
        "evidence_complete": r.evidence_complete,
        "gulliksen": r.gulliksen,
    });
    Output { text, json }
}

fn betti_output(res: &ciprobe_core::resolve::FreeResolution, verdict: Option<String>) -> Output {
    let triples: Vec<[usize; 3]> = res.betti_triples().into_iter().map(|(i, j, b)| [i, j as usize, b]).collect();
    let mut text = String::new();
    for (i, t) in res.total_betti().iter().enumerate() {
        let row: Vec<String> = triples.iter().filter(|x| x[0] == i).map(|x| format!("{}^({})", x[2], x[1])).collect();
        text.push_str(&format!("F{i}: rank {t}  {}\n", row.join(" ")));
    }
    if let Some(v) = &verdict {
        text.push_str(&format!("projdim: {v}\n"));
    }
    Output { text, json: json!({ "betti": triples, "totals": res.total_betti(), "projdim": verdict }) }
}

fn radical_text(v: &RadicalVerdict) -> String {
    match v {
        RadicalVerdict::RadicalWitness { n, truncation } => format!("RadicalWitness({n}), radical up to truncation {truncation}"),
        RadicalVerdict::NonRadicalEvidence { degrees, truncation } => format!("NonRadicalEvidence({degrees:?}) up to {truncation}"),
        RadicalVerdict::Inconclusive(n) => format!("Inconclusive({n})"),
    }
}

fn run_command(cli: &Cli) -> Result<Output> {
    let unit = |k: usize, f: ciprobe_core::exactalg::FieldSpec| -> PiVector { [(k, f.one())].into_iter().collect() };
    match &cli.command {
        Command::Gb(input) => {
            let e = entry(cli, input)?;
            let order = MonomialOrder::parse(&cli.order).ok_or_else(|| HarnessError::Usage(format!("unknown order `{}`", cli.order)))?;
            let gb = buchberger(&e.ideal, order);
            let elems: Vec<String> = gb.elements().iter().map(|g| g.to_string()).collect();
            Ok(Output { text: elems.join("\n") + "\n", json: json!({ "order": cli.order, "basis": elems }) })
        }
        Command::Resolve { input, module } => {
            let e = entry(cli, input)?;
            let (b, d) = (e.bounds.reslen, e.bounds.intdeg as i32);
            let s = GradedRing::quotient(&e.ideal)?;
            let m: ModulePresentation = match module {
                ModuleChoice::Quotient => quotient_presentation(&e.ideal),
                ModuleChoice::Conormal => ciprobe_core::conormal::conormal_direct(&e.ideal, &s, d).2,
                ModuleChoice::H1 => koszul_h1(&e.ideal, d)?.presentation,
                ModuleChoice::Residue => return Ok(betti_output(&ext_betti(&s, b, d), None)),
            };
            let c = projdim_probe(&m, b, d);
            Ok(betti_output(&c.resolution, Some(format_projdim(&c))))
        }
        Command::Koszul(input) => {
            let e = entry(cli, input)?;
            let k = koszul_complex(&e.ideal);
            let h = koszul_h1(&e.ideal, e.bounds.intdeg as i32)?;
            let cycles: Vec<String> = h
                .cycles
                .iter()
                .map(|(v, d)| format!("({}) in degree {d}", v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
                .collect();
            let rels: Vec<String> = h
                .presentation
                .map
                .columns
                .iter()
                .map(|c| format!("({})", c.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
                .collect();
            let text = format!("ranks: {:?}\nH1 generators:\n{}H1 relations:\n{}", k.ranks(), lines(&cycles), lines(&rels));
            Ok(Output { text, json: json!({ "ranks": k.ranks(), "h1_generators": cycles, "h1_relations": rels }) })
        }
        Command::Conormal(input) => {
            let e = entry(cli, input)?;
            let c = conormal(&e.ideal, e.bounds.intdeg as i32)?;
            let p = projdim_probe(&c.route_a, e.bounds.reslen, e.bounds.intdeg as i32);
            let text = format!(
                "generators: {}\nrelations (route A): {}\nrelations (route B): {}\nHilbert function: {:?}\nprojdim: {}\n",
                c.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
                c.route_a.map.source.rank(),
                c.route_b.map.source.rank(),
                c.hilbert,
                format_projdim(&p)
            );
            Ok(Output {
                text,
                json: json!({
                    "generators": c.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "relations_route_a": c.route_a.map.source.rank(),
                    "relations_route_b": c.route_b.map.source.rank(),
                    "hilbert": c.hilbert,
                    "projdim": format_projdim(&p),
                }),
            })
        }
        Command::Model(input) => {
            let e = entry(cli, input)?;
            let m = build_minimal_model(&e.ideal, e.bounds.hdeg, e.bounds.intdeg)?;
            Ok(Output { text: m.dump(), json: json!({ "deviations": m.deviations(), "variables": m.dump().lines().collect::<Vec<_>>() }) })
        }
        Command::Pi(input) | Command::Bracket(input) => {
            let e = entry(cli, input)?;
            let m = build_minimal_model(&e.ideal, e.bounds.hdeg, e.bounds.intdeg)?;
            let pi = compute_pi(&m, e.bounds.hdeg + 1)?;
            if matches!(cli.command, Command::Bracket(_)) {
                let d = pi.dump();
                return Ok(Output { json: json!({ "brackets": d.lines().collect::<Vec<_>>() }), text: d });
            }
            let dims: Vec<usize> = (2..=pi.bound).map(|i| pi.dim(i)).collect();
            let text = dims.iter().enumerate().map(|(k, d)| format!("dim π^{} = {d}\n", k + 2)).collect();
            Ok(Output { text, json: json!({ "dims_from_degree_2": dims, "abelian": pi.is_abelian() }) })
        }
        Command::Theta { input, z } => {
            let e = entry(cli, input)?;
            let m = build_minimal_model(&e.ideal, e.bounds.hdeg, e.bounds.intdeg)?;
            let pi = compute_pi(&m, e.bounds.hdeg + 1)?;
            if !pi.basis(2).contains(z) {
                return Err(HarnessError::Usage(format!("π² has {} basis elements", pi.dim(2))));
            }
            let th = theta(&m, &unit(*z, pi.field), None)?;
            induced_ad(&m, &th, &pi)?;
            let vals: Vec<String> = m
                .algebra
                .vars()
                .iter()
                .zip(&th.derivation.values)
                .filter(|(_, v)| !v.is_zero())
                .map(|(x, v)| format!("θ({}) = {}", x.name, m.algebra.format(v)))
                .collect();
            let text = format!("{}chain derivation: {}\ninduced map = -ad(z): verified\n", lines(&vals), th.is_chain(&m));
            Ok(Output { text, json: json!({ "values": vals, "chain": th.is_chain(&m), "induced_equals_minus_ad": true }) })
        }
        Command::Radical { input, z } => {
            let e = entry(cli, input)?;
            let m = build_minimal_model(&e.ideal, e.bounds.hdeg, e.bounds.intdeg)?;
            let pi = compute_pi(&m, e.bounds.hdeg + 1)?;
            let zs: Vec<usize> = match z {
                Some(z) => vec![*z],
                None => pi.basis(2),
            };
            let out: Vec<String> =
                zs.iter().map(|&z| format!("{}*: {}", pi.names[z], radical_text(&radical_probe(&unit(z, pi.field), &pi)))).collect();
            Ok(Output { text: lines(&out), json: json!({ "verdicts": out }) })
        }
        Command::Ci(input) => {
            let e = entry(cli, input)?;
            let c = ci_certificate(&e.ideal, e.bounds.intdeg as i32)?;
            let text = format!("complete intersection: {}\nμ = {}, height = {}, H1 = 0: {}\n", c.is_ci, c.mu, c.height, c.h1_zero);
            Ok(Output { text, json: json!({ "is_ci": c.is_ci, "mu": c.mu, "height": c.height, "h1_zero": c.h1_zero }) })
        }
        Command::VerifyA(input) => Ok(theorem_output(verify_theorem_a(&entry(cli, input)?)?)),
        Command::VerifyB(input) => Ok(theorem_output(verify_theorem_b(&entry(cli, input)?)?)),
        Command::Jz(input) => {
            let e = entry(cli, input)?;
            let r = jacobi_zariski_check(&e.ideal, e.bounds.intdeg as i32)?;
            let mut text = String::from("degree  D1  I/I²  S⊗Ω_R  Ω_S\n");
            let rows: Vec<[usize; 5]> = r.slices.iter().map(|s| [s.degree as usize, s.d1, s.conormal, s.omega_r, s.omega_s]).collect();
            for s in &rows {
                text.push_str(&format!("{:>6} {:>3} {:>5} {:>6} {:>4}\n", s[0], s[1], s[2], s[3], s[4]));
            }
            text.push_str(&format!("exact: {}\n", r.is_exact()));
            Ok(Output { text, json: json!({ "slices": rows, "exact": r.is_exact() }) })
        }
        Command::Lenstra(input) => {
            let e = entry(cli, input)?;
            let v = match lenstra_evolution_check(&e.ideal)? {
                EvolutionVerdict::TrivialEvolutionsOnly => "TrivialEvolutionsOnly".to_string(),
                EvolutionVerdict::NontrivialEvolutionPossible { witness } => format!("NontrivialEvolutionPossible(witness {witness})"),
            };
            Ok(Output { text: format!("{v}\n"), json: json!({ "verdict": v }) })
        }
        Command::Corpus { .. } => unreachable!("handled separately"),
    }
}

fn lines(v: &[String]) -> String {
    v.iter().map(|s| format!("{s}\n")).collect()
}

fn cache(cli: &Cli) -> Result<Option<Cache>> {
    match &cli.cache_dir {
        Some(d) => Ok(Some(Cache::new(d)?)),
        None => Cache::from_env(),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main(cli: &Cli) -> Result<ExitCode> {
    let cache = cache(cli)?;
    if let Command::Corpus { action: CorpusAction::Run { path, jobs, no_timing } } = &cli.command {
        let mut r = run_corpus(path, &RunOptions { jobs: *jobs, cache })?;
        if *no_timing {
            r = r.without_timing();
        }
        emit(&if cli.json { r.to_json() } else { r.to_text() })?;
        return Ok(if r.success() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
    }
    let argv = cache_free_args(std::env::args().skip(1));
    let compute = || -> Result<(String, Value)> {
        let o = run_command(cli)?;
        Ok((o.text, o.json))
    };
    let (text, json) = match &cache {
        Some(c) => c.get_or_compute(&Cache::key(&["cli", &argv.join("\u{1f}")]), compute)?,
        None => compute()?,
    };
    if cli.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&json)?))?;
    } else {
        emit(&text)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// The command line minus the cache location, which must not affect keys.
fn cache_free_args(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip_value = false;
    for a in args {
        if std::mem::take(&mut skip_value) {
            continue;
        }
        if a == "--cache-dir" {
            skip_value = true;
        } else if !a.starts_with("--cache-dir=") {
            out.push(a);
        }
    }
    out
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(s: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(s.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}
