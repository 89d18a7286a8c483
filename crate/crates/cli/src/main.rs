use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use grpkit::catalog::Catalog;
use grpkit::fibre::{fibre_generators, theorem54_checklist, verify_fibre, vn_epimorphism_data, FibreSpec, Target, TupleKind};
use grpkit::fingerprint::{
    compare, separating_quotient, with_jobs, Comparison, Fingerprint, QuotientTargets, DEFAULT_NODE_BUDGET,
};
use grpkit::graphprod::{
    collapse, find_modules, is_even, is_right_angled, join_decomposition, presentation, split_indecomposable,
    JoinDecomposition, LabeledGraph, Mode,
};
use grpkit::presentation::{GroupPresentation, Word};
use grpkit::reconstruct::{clique_poset, is_t0, reconstruct_graph, CliquePoset};
use grpkit::rewriting::{retraction, CoxeterSolver, ProductSolver};
use grpkit::thompson::{random_elements, verify_generation, ClaimBounds, Synthesizer, VnElement};
use grpkit::{Error, Result};

const USAGE: u8 = 2;
const DIFFER: u8 = 3;
const INCONCLUSIVE: u8 = 4;

/// Computational group theory toolkit: Higman–Thompson groups, graph products,
/// finite-quotient fingerprints and fibre products. Results are JSON on stdout.
#[derive(Parser)]
#[command(name = "grpkit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for quotient search (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Group catalog replacing the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a word in b1..b4 (or sample random elements) in V_n.
    Vn {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        word: Option<String>,
        /// Number of random elements to sample instead of a word.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 4)]
        expansions: usize,
    },
    /// Check the claim chain showing b1..b4 generate V_n.
    #[command(name = "verify-thm41")]
    VerifyThm41 {
        #[arg(long)]
        n: u8,
        /// Longest leaf address checked.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        #[arg(long, default_value_t = 3)]
        max_p: usize,
    },
    /// Structural summary of a labeled graph, with optional word operations.
    Graph {
        file: PathBuf,
        /// Word to put in normal form.
        #[arg(long)]
        word: Option<String>,
        /// Second word to compare with --word.
        #[arg(long)]
        equal: Option<String>,
        /// Vertex subset (comma separated) to retract --word onto.
        #[arg(long)]
        retract: Option<String>,
        /// Also output the graph with directly decomposable labels split.
        #[arg(long)]
        split: bool,
    },
    /// Graph JSON to clique poset, or clique poset JSON back to a graph.
    Reconstruct { file: PathBuf },
    /// Finite quotients of order ≤ B embedding in S_K.
    Fingerprint {
        file: PathBuf,
        #[arg(long = "deg")]
        deg: usize,
        #[arg(long = "order")]
        order: usize,
        /// Also count epimorphisms onto catalog groups.
        #[arg(long)]
        counts: bool,
    },
    /// Compare two fingerprint files: exit 0 equal, 3 differ, 4 incomparable.
    Compare { first: PathBuf, second: PathBuf },
    /// Separate two finite subgroups (comma-separated generator words) in a finite quotient.
    Separate {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Fibre product generators, verification and hypothesis checklist.
    Fibre {
        spec: Option<PathBuf>,
        /// Report the four-involution map onto V_n instead of reading a spec.
        #[arg(long)]
        vn: Option<u8>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Drop the kernel generators before verifying.
        #[arg(long)]
        omit_kernel: bool,
    },
    /// Collapse a module to one vertex, or list the modules.
    Collapse {
        file: PathBuf,
        #[arg(long)]
        module: Option<String>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

fn load_graph(path: &Path) -> Result<LabeledGraph> {
    let text = read(path)?;
    LabeledGraph::from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn ids(g: &LabeledGraph, set: &[usize]) -> Vec<String> {
    set.iter().map(|&v| g.id(v).to_string()).collect()
}

fn words(p: &GroupPresentation, text: &str) -> Result<Vec<Word>> {
    text.split(',').map(|w| p.parse_word(w)).collect()
}

struct Outcome {
    value: Value,
    code: u8,
    summary: String,
}

fn ok(value: Value, summary: String) -> Result<Outcome> {
    Ok(Outcome { value, code: 0, summary })
}

fn vn(n: u8, word: Option<String>, random: Option<usize>, expansions: usize, seed: u64) -> Result<Outcome> {
    if let Some(count) = random {
        let elems = random_elements(n, count, expansions, seed)?;
        let list: Vec<Value> = elems
            .iter()
            .map(|x| {
                let c = x.canonicalize();
                json!({"element": c.to_text(), "leaves": c.leaf_count(), "parity": c.class_parity().ok().map(|p| p.to_string())})
            })
            .collect();
        return ok(json!({"n": n, "seed": seed, "elements": list}), format!("{count} random elements of V_{n}"));
    }
    let text = word.ok_or_else(|| Error::Precondition("give --word or --random".into()))?;
    let synth = Synthesizer::new(n)?;
    let x = synth.parse_word(&text)?.evaluate()?.canonicalize();
    let cycles = leaf_cycles(&x);
    let summary = format!("{text} = {}", x.to_text());
    ok(
        json!({
            "n": n,
            "word": text,
            "element": x.to_text(),
            "leaves": x.leaf_count(),
            "domain": x.domain().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "images": x.images().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "cycles": cycles,
            "involution": x.is_involution(),
            "parity": x.class_parity().ok().map(|p| p.to_string()),
        }),
        summary,
    )
}

/// Cycles of the leaf permutation when domain and range trees coincide.
fn leaf_cycles(x: &VnElement) -> Option<Vec<Vec<String>>> {
    let dom = x.domain();
    let pos = |a: &grpkit::thompson::Address| dom.iter().position(|d| d == a);
    let perm: Option<Vec<usize>> = x.images().iter().map(pos).collect();
    let perm = perm?;
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] || perm[s] == s {
            continue;
        }
        let mut c = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(dom[i].to_string());
            i = perm[i];
        }
        out.push(c);
    }
    Some(out)
}

fn graph(
    g: &LabeledGraph,
    cat: &Catalog,
    word: Option<String>,
    equal: Option<String>,
    retract: Option<String>,
    split: bool,
) -> Result<Outcome> {
    let p = presentation(g, cat)?;
    let mut v = json!({
        "mode": g.mode(),
        "vertices": g.len(),
        "edges": g.edges().len(),
        "presentation": p,
        "maximal_cliques": g.maximal_cliques().iter().map(|c| ids(g, c)).collect::<Vec<_>>(),
        "modules": find_modules(g).iter().map(|c| ids(g, c)).collect::<Vec<_>>(),
        "t0": is_t0(g),
        "join": match join_decomposition(g) {
            JoinDecomposition::Irreducible => json!({"verdict": "irreducible"}),
            JoinDecomposition::Split { left, right } => json!({"verdict": "split", "left": ids(g, &left), "right": ids(g, &right)}),
        },
    });
    if g.mode() == Mode::Coxeter {
        v["even"] = json!(is_even(g)?);
        v["right_angled"] = json!(is_right_angled(g)?);
    }
    if let Some(w) = &word {
        let w1 = p.parse_word(w)?;
        let (nf, eq) = match g.mode() {
            Mode::Coxeter => {
                let s = CoxeterSolver::new(g)?;
                let eq = match &equal {
                    Some(e) => Some(s.equal(&w1, &p.parse_word(e)?)?),
                    None => None,
                };
                (s.normal_form(&w1)?, eq)
            }
            Mode::Product => {
                let s = ProductSolver::new(g, cat)?;
                let eq = match &equal {
                    Some(e) => Some(s.equal(&w1, &p.parse_word(e)?)),
                    None => None,
                };
                (s.normal_form(&w1), eq)
            }
        };
        v["normal_form"] = json!(p.show(&nf));
        if let Some(eq) = eq {
            v["equal"] = json!(eq);
        }
        if let Some(x) = &retract {
            let set = g.parse_subset(x)?;
            v["retraction"] = json!(p.show(&retraction(g, &set, &w1, cat)?));
        }
    }
    if split {
        v["split"] = serde_json::to_value(split_indecomposable(g, cat)?).expect("graph serializes");
    }
    let summary = format!("{} vertices, {} edges", g.len(), g.edges().len());
    ok(v, summary)
}

fn reconstruct(path: &Path, cat: &Catalog) -> Result<Outcome> {
    let text = read(path)?;
    let raw: Value = parse_json(path, &text)?;
    if raw.get("covers").is_some() {
        let poset: CliquePoset = parse_json(path, &text)?;
        let g = reconstruct_graph(&poset)?;
        let summary = format!("reconstructed {} vertices", g.len());
        return ok(serde_json::to_value(&g).expect("graph serializes"), summary);
    }
    let g = LabeledGraph::from_json(&text)?;
    let poset = clique_poset(&g, cat)?;
    let summary = format!("{} cliques", poset.len());
    ok(serde_json::to_value(&poset).expect("poset serializes"), summary)
}

fn load_presentation(path: &Path, cat: &Catalog) -> Result<GroupPresentation> {
    let text = read(path)?;
    let raw: Value = parse_json(path, &text)?;
    if raw.get("relators").is_some() {
        return parse_json(path, &text);
    }
    presentation(&LabeledGraph::from_json(&text)?, cat)
}

fn fingerprint(path: &Path, cat: &Catalog, deg: usize, order: usize, counts: bool, jobs: usize) -> Result<Outcome> {
    let p = load_presentation(path, cat)?;
    let mut f = with_jobs(jobs, || QuotientTargets::new(deg, order)?.fingerprint(&p, DEFAULT_NODE_BUDGET))?;
    if counts {
        f = f.with_counts(&p, cat, DEFAULT_NODE_BUDGET)?;
    }
    let code = if f.complete { 0 } else { INCONCLUSIVE };
    let summary = format!(
        "{} quotient types of order ≤ {order} in S_{deg}{}",
        f.quotients.len(),
        if f.complete { "" } else { " (incomplete)" }
    );
    Ok(Outcome {
        value: serde_json::to_value(&f).expect("fingerprint serializes"),
        code,
        summary,
    })
}

fn compare_files(a: &Path, b: &Path) -> Result<Outcome> {
    let f1: Fingerprint = parse_json(a, &read(a)?)?;
    let f2: Fingerprint = parse_json(b, &read(b)?)?;
    let c = compare(&f1, &f2)?;
    let (code, summary) = match &c {
        Comparison::Equal => (0, "equal".to_string()),
        Comparison::Differ { witness, present_in } => (DIFFER, format!("differ: {} only in {present_in}", witness.short())),
    };
    Ok(Outcome {
        value: serde_json::to_value(&c).expect("comparison serializes"),
        code,
        summary,
    })
}

fn separate(path: &Path, cat: &Catalog, a: &str, b: &str, max_len: usize) -> Result<Outcome> {
    let g = load_graph(path)?;
    let p = presentation(&g, cat)?;
    let s = separating_quotient(&g, &words(&p, a)?, &words(&p, b)?, cat, max_len)?;
    let summary = format!("separated by retraction onto {{{}}} of order {}", s.retraction.join(","), s.quotient_order);
    ok(serde_json::to_value(&s).expect("separation serializes"), summary)
}

fn fibre(spec: Option<PathBuf>, vn: Option<u8>, depth: usize, omit_kernel: bool) -> Result<Outcome> {
    if let Some(n) = vn {
        let data = vn_epimorphism_data(n, depth)?;
        let check = theorem54_checklist(&Target::Symbolic { name: "V_n".into(), n })?;
        let good = data.well_defined && data.generation_verified;
        let summary = format!("V_{n}: {} transpositions checked", data.transpositions.len());
        return Ok(Outcome {
            value: json!({"epimorphism": data, "checklist": check}),
            code: if good { 0 } else { DIFFER },
            summary,
        });
    }
    let path = spec.ok_or_else(|| Error::Precondition("give a spec file or --vn".into()))?;
    let s: FibreSpec = parse_json(&path, &read(&path)?)?;
    let check = theorem54_checklist(&s.target)?;
    if let Target::Symbolic { .. } = s.target {
        let summary = format!("checklist for {}", check.target);
        return ok(json!({"checklist": check}), summary);
    }
    let mut gens = fibre_generators(&s)?;
    if omit_kernel {
        gens.retain(|t| t.kind != TupleKind::Kernel);
    }
    let report = verify_fibre(&s, &gens)?;
    let summary = format!(
        "{} generators, index {:?} (expected {})",
        gens.len(),
        report.index,
        report.expected_index
    );
    Ok(Outcome {
        code: if report.passed { 0 } else { DIFFER },
        value: json!({"generators": gens, "report": report, "checklist": check}),
        summary,
    })
}

fn collapse_cmd(path: &Path, cat: &Catalog, module: Option<String>) -> Result<Outcome> {
    let g = load_graph(path)?;
    match module {
        None => {
            let mods: Vec<Vec<String>> = find_modules(&g).iter().map(|m| ids(&g, m)).collect();
            let summary = format!("{} modules", mods.len());
            ok(json!({"modules": mods}), summary)
        }
        Some(m) => {
            let set = g.parse_subset(&m)?;
            let h = collapse(&g, &set, cat)?;
            let summary = format!("{} vertices after collapse", h.len());
            ok(serde_json::to_value(&h).expect("graph serializes"), summary)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let cat = match &cli.catalog {
        Some(p) => Catalog::load(p)?,
        None => Catalog::builtin(),
    };
    match cli.cmd {
        Cmd::Vn { n, word, random, expansions } => vn(n, word, random, expansions, cli.seed),
        Cmd::VerifyThm41 { n, depth, max_k, max_m, max_p } => {
            let bounds = ClaimBounds {
                max_k,
                max_m,
                max_p,
                max_address_len: depth,
                ..ClaimBounds::default()
            };
            let r = verify_generation(n, bounds)?;
            let failed = r.checks.iter().filter(|c| !c.passed()).count();
            Ok(Outcome {
                code: if r.passed { 0 } else { DIFFER },
                summary: format!("{} checks, {failed} failed", r.checks.len()),
                value: serde_json::to_value(&r).expect("report serializes"),
            })
        }
        Cmd::Graph { file, word, equal, retract, split } => graph(&load_graph(&file)?, &cat, word, equal, retract, split),
        Cmd::Reconstruct { file } => reconstruct(&file, &cat),
        Cmd::Fingerprint { file, deg, order, counts } => fingerprint(&file, &cat, deg, order, counts, cli.jobs),
        Cmd::Compare { first, second } => compare_files(&first, &second),
        Cmd::Separate { file, a, b, max_len } => separate(&file, &cat, &a, &b, max_len),
        Cmd::Fibre { spec, vn, depth, omit_kernel } => fibre(spec, vn, depth, omit_kernel),
        Cmd::Collapse { file, module } => collapse_cmd(&file, &cat, module),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget(_) | Error::SearchExhausted(_) | Error::Incomparable(_) | Error::OrderBound(_) => INCONCLUSIVE,
        _ => USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.value).expect("JSON value") + "\n";
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(USAGE);
                    }
                }
                None => print!("{text}"),
            }
            eprintln!("{}", out.summary);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
