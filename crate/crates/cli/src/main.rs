use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use monodromy::braidmon::{
    self, critical_values, default_paths, loop_braid, track_roots, BraidEvent, PolyFamily, TPath,
};
use monodromy::cover::lift_factorization;
use monodromy::hurwitz::{hurwitz_equivalent, product, Factorization, SearchOptions};
use monodromy::invariants::{cap_word, definiteness_report, isotropic_form_report, lefschetz_betti};
use monodromy::mcg::exact_equal;
use monodromy::plumbing::{self, Definiteness, PlumbingGraph};
use monodromy::surface::{SurfaceSig, Word};
use monodromy::wordbank::{self, Outcome, Payload, Provenance};

type C64 = Complex<f64>;

#[derive(Parser)]
#[command(name = "monodromy", version, about = "Mapping class group and braid monodromy computations")]
struct Cli {
    /// Human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether two words act identically.
    Verify(VerifyArgs),
    /// Lift, multiply or search for a Hurwitz equivalence between factorizations.
    Hurwitz(HurwitzArgs),
    /// Betti numbers and intersection form data of a Lefschetz fibration.
    Invariants(InvariantsArgs),
    /// Operations on plumbing graphs.
    Plumbing(PlumbingArgs),
    /// Braid monodromy of a polynomial family.
    Braidmon(BraidmonArgs),
    /// List the word bank, or run its regression checks.
    Bank(BankArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Word: expression (`bank:KEY^k * C1 ...`), inline JSON, `@FILE` or `-`.
    #[arg(long)]
    lhs: String,
    #[arg(long)]
    rhs: String,
    /// Surface for bare generator expressions: `g,b,m`, `sigma22`, `annulus3` or `annulus4`.
    #[arg(long)]
    surface: Option<String>,
}

#[derive(Args)]
struct HurwitzArgs {
    /// Factorization: JSON, `@FILE`, `-`, or a positive word expression.
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: Option<String>,
    /// Lift `from` (a downstairs factorization) to Σ₂,₂ first.
    #[arg(long)]
    lift: bool,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Allow cyclic permutations.
    #[arg(long)]
    cyclic: bool,
    #[arg(long)]
    surface: Option<String>,
}

#[derive(Args)]
struct InvariantsArgs {
    #[arg(long)]
    word: String,
    /// Boundaries to cap, e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    cap: Vec<u32>,
    #[arg(long = "b2zero")]
    b2_zero: Option<i64>,
    #[arg(long = "complement-sigma", allow_hyphen_values = true)]
    complement_sigma: Option<i64>,
    /// Exact form for words whose vanishing cycles are pairwise disjoint in homology.
    #[arg(long)]
    isotropic: bool,
    #[arg(long)]
    surface: Option<String>,
}

#[derive(Args)]
struct PlumbingArgs {
    /// matrix, definite, betti, fiber, blowdown:V, cap, hj:N/Q or boundary.
    #[arg(long)]
    op: String,
    /// Graph: JSON, `@FILE`, `-` or `bank:KEY`.
    #[arg(long)]
    graph: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Quartic,
    Cubic,
    Quartic2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Permutation,
    Factorization,
    Events,
    Critical,
}

#[derive(Args)]
struct BraidmonArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Parameter `RE,IM`.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Base point `RE,IM`.
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    base: String,
    /// JSON list of polylines from the base point, each ending at its critical value.
    #[arg(long)]
    paths: Option<String>,
    #[arg(long, value_enum, default_value = "factorization")]
    emit: Emit,
}

#[derive(Args)]
struct BankArgs {
    /// Run the regression checks.
    #[arg(long)]
    check: bool,
    /// Show one entry.
    #[arg(long)]
    key: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl ToString) -> Failure {
    Failure::Compute(e.to_string())
}

/// Result of a subcommand: JSON, whether the checked statement held, and a
/// summary for `--pretty`.
struct Output {
    json: Value,
    ok: bool,
    summary: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Hurwitz(a) => hurwitz(a),
        Cmd::Invariants(a) => invariants(a),
        Cmd::Plumbing(a) => plumbing_cmd(a),
        Cmd::Braidmon(a) => braidmon_cmd(a),
        Cmd::Bank(a) => bank(a),
    };
    match result {
        Ok(out) => {
            let text = if cli.pretty { out.summary } else { out.json.to_string() };
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

/// Text of an argument: `-` is standard input, `@FILE` a file, else itself.
fn read_arg(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(usage)?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| usage(format!("bad JSON: {e}")))
}

fn parse_surface(s: &Option<String>) -> Result<Option<SurfaceSig>, Failure> {
    let Some(s) = s else { return Ok(None) };
    let sig = match s.to_ascii_lowercase().as_str() {
        "sigma22" => SurfaceSig::SIGMA22,
        "sigma21" => SurfaceSig::SIGMA21,
        "sigma2" => SurfaceSig::SIGMA2,
        "sigma11" => SurfaceSig::SIGMA11,
        "annulus3" => SurfaceSig::ANNULUS3,
        "annulus4" => SurfaceSig::ANNULUS4,
        other => {
            let n: Vec<u32> = other
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| usage(format!("bad surface {other}")))?;
            match n[..] {
                [g, b, m] => SurfaceSig::new(g, b, m),
                _ => return Err(usage(format!("bad surface {other}"))),
            }
        }
    };
    Ok(Some(sig))
}

fn load_word(arg: &str, surface: Option<SurfaceSig>) -> Result<Word, Failure> {
    let text = read_arg(arg)?;
    if text.trim_start().starts_with('{') {
        return parse_json(&text);
    }
    wordbank::bank().resolve(&text, surface).map_err(usage)
}

fn load_factorization(arg: &str, surface: Option<SurfaceSig>) -> Result<Factorization, Failure> {
    let text = read_arg(arg)?;
    if text.trim_start().starts_with('{') {
        return parse_json(&text);
    }
    let w = wordbank::bank().resolve(&text, surface).map_err(usage)?;
    Factorization::from_word(&w).map_err(usage)
}

fn load_graph(arg: &str) -> Result<PlumbingGraph, Failure> {
    if let Some(key) = arg.strip_prefix("bank:") {
        return wordbank::bank().graph(key).cloned().map_err(usage);
    }
    let g: PlumbingGraph = parse_json(&read_arg(arg)?)?;
    g.validate().map_err(usage)?;
    Ok(g)
}

fn parse_complex(s: &str) -> Result<C64, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("expected RE,IM, got {s}")))?;
    match parts[..] {
        [re] => Ok(C64::new(re, 0.0)),
        [re, im] => Ok(C64::new(re, im)),
        _ => Err(usage(format!("expected RE,IM, got {s}"))),
    }
}

fn verify(a: &VerifyArgs) -> Result<Output, Failure> {
    let surface = parse_surface(&a.surface)?;
    let lhs = load_word(&a.lhs, surface)?;
    let rhs = load_word(&a.rhs, surface.or(Some(lhs.surface)))?;
    let equal = exact_equal(&lhs, &rhs).map_err(compute)?;
    Ok(Output {
        json: json!({ "equal": equal }),
        ok: equal,
        summary: format!("{lhs} {} {rhs}", if equal { "==" } else { "!=" }),
    })
}

fn hurwitz(a: &HurwitzArgs) -> Result<Output, Failure> {
    let surface = parse_surface(&a.surface)?;
    let mut from = load_factorization(&a.from, surface)?;
    if a.lift {
        from = lift_factorization(&from).map_err(compute)?;
    }
    let Some(to) = &a.to else {
        let w = product(&from).map_err(compute)?;
        let letters: Vec<String> = from.letters.iter().map(|l| l.to_string()).collect();
        return Ok(Output {
            summary: format!("{}\nproduct: {w}", letters.join(", ")),
            json: json!({ "factorization": from, "product": w }),
            ok: true,
        });
    };
    let to = load_factorization(to, Some(from.surface))?;
    let opts = SearchOptions {
        depth: a.depth,
        allow_cyclic: a.cyclic,
        ..SearchOptions::default()
    };
    let trace = hurwitz_equivalent(&from, &to, &opts).map_err(compute)?;
    let summary = match &trace {
        Some(t) => format!("equivalent in {} moves", t.len()),
        None => format!("no equivalence found within depth {}", a.depth),
    };
    Ok(Output {
        ok: trace.is_some(),
        json: serde_json::to_value(&trace).map_err(compute)?,
        summary,
    })
}

fn invariants(a: &InvariantsArgs) -> Result<Output, Failure> {
    let w = load_word(&a.word, parse_surface(&a.surface)?)?;
    let (report, blowups) = if !a.cap.is_empty() {
        let (capped, blowups) = cap_word(&w, &a.cap).map_err(compute)?;
        (lefschetz_betti(&capped).map_err(compute)?, Some(blowups))
    } else if a.isotropic {
        (isotropic_form_report(&w).map_err(compute)?, None)
    } else if a.b2_zero.is_some() || a.complement_sigma.is_some() {
        let r = definiteness_report(&w, a.b2_zero.unwrap_or(0), a.complement_sigma).map_err(compute)?;
        (r, None)
    } else {
        (lefschetz_betti(&w).map_err(compute)?, None)
    };
    let mut json = serde_json::to_value(&report).map_err(compute)?;
    if let Some(b) = blowups {
        json["blowups"] = json!(b);
    }
    let opt = |x: Option<i64>| x.map_or("?".to_string(), |v| v.to_string());
    Ok(Output {
        summary: format!(
            "chi {} b1 {} b2 {} (b2+ {}, b2- {}, b2_0 {}) sigma {}",
            report.chi,
            report.b1,
            report.b2,
            opt(report.b2_plus),
            opt(report.b2_minus),
            opt(report.b2_zero),
            opt(report.sigma)
        ),
        json,
        ok: true,
    })
}

fn plumbing_cmd(a: &PlumbingArgs) -> Result<Output, Failure> {
    if let Some(spec) = a.op.strip_prefix("hj:") {
        let (n, q) = spec
            .split_once('/')
            .and_then(|(n, q)| Some((n.parse::<i64>().ok()?, q.parse::<i64>().ok()?)))
            .ok_or_else(|| usage(format!("expected hj:N/Q, got {}", a.op)))?;
        let chain = plumbing::hj_string(n, q).map_err(compute)?;
        return Ok(Output {
            summary: format!("{n}/{q} = {chain:?}"),
            json: json!({ "string": chain }),
            ok: true,
        });
    }
    let g = load_graph(a.graph.as_deref().ok_or_else(|| usage("--graph is required"))?)?;
    let graph_out = |g: PlumbingGraph| -> Result<Output, Failure> {
        Ok(Output {
            summary: format!(
                "{} vertices, {} edges, {} arrows",
                g.vertices.len(),
                g.edges.len(),
                g.arrows.len()
            ),
            json: serde_json::to_value(&g).map_err(compute)?,
            ok: true,
        })
    };
    if let Some(v) = a.op.strip_prefix("blowdown:") {
        let id: usize = v.parse().map_err(|_| usage(format!("bad vertex {v}")))?;
        return graph_out(plumbing::blow_down(&g, id).map_err(compute)?);
    }
    Ok(match a.op.as_str() {
        "matrix" => {
            let m = plumbing::intersection_matrix(&g);
            Output {
                summary: m.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join("\n"),
                json: json!({ "matrix": m }),
                ok: true,
            }
        }
        "definite" => {
            let (name, corank) = match plumbing::is_negative_definite(&g) {
                Definiteness::Definite => ("negative_definite", 0),
                Definiteness::Semidefinite { corank } => ("negative_semidefinite", corank),
                Definiteness::Indefinite => ("indefinite", 0),
            };
            let mut json = json!({ "definite": name });
            if corank > 0 {
                json["corank"] = json!(corank);
            }
            Output {
                summary: name.replace('_', " "),
                json,
                ok: true,
            }
        }
        "betti" => {
            let (b1, b2) = plumbing::betti(&g);
            Output {
                summary: format!("b1 {b1} b2 {b2}"),
                json: json!({ "b1": b1, "b2": b2 }),
                ok: true,
            }
        }
        "fiber" => {
            let (ok, residuals) = plumbing::fiber_condition(&g);
            Output {
                summary: format!("fiber condition {}: residuals {residuals:?}", if ok { "holds" } else { "fails" }),
                json: json!({ "fiber": ok, "residuals": residuals }),
                ok,
            }
        }
        "cap" => return graph_out(plumbing::cap_arrows(&g)),
        "boundary" => {
            let h = plumbing::boundary_h1(&plumbing::cap_arrows(&g)).map_err(compute)?;
            Output {
                summary: format!("H1 = Z^{} + torsion of order {}", h.free_rank, h.torsion_order),
                json: serde_json::to_value(&h).map_err(compute)?,
                ok: true,
            }
        }
        other => return Err(usage(format!("unknown plumbing op {other}"))),
    })
}

fn braidmon_cmd(a: &BraidmonArgs) -> Result<Output, Failure> {
    let f = match a.family {
        Family::Quartic => PolyFamily::Quartic,
        Family::Cubic => PolyFamily::Cubic,
        Family::Quartic2 => PolyFamily::Quartic2,
    };
    let s = parse_complex(&a.s)?;
    let base = parse_complex(&a.base)?;
    let pair = |z: C64| [z.re, z.im];
    let paths: Vec<(C64, TPath)> = match &a.paths {
        Some(arg) => {
            let polys: Vec<Vec<[f64; 2]>> = parse_json(&read_arg(arg)?)?;
            polys
                .iter()
                .map(|p| {
                    let end = p.last().ok_or_else(|| usage("empty path"))?;
                    Ok((C64::new(end[0], end[1]), TPath::polyline(p)))
                })
                .collect::<Result<_, Failure>>()?
        }
        None => default_paths(f, s, base)
            .map_err(compute)?
            .into_iter()
            .map(|(t, p)| (t.value, p))
            .collect(),
    };
    Ok(match a.emit {
        Emit::Critical => {
            let cv = critical_values::<f64>(f, s).map_err(compute)?;
            let branch: Vec<[f64; 2]> = cv.branch.iter().map(|&z| pair(z)).collect();
            let nodal: Vec<[f64; 2]> = cv.nodal.iter().map(|&z| pair(z)).collect();
            Output {
                summary: format!("{} branch values, {} nodal", branch.len(), nodal.len()),
                json: json!({ "branch": branch, "nodal": nodal }),
                ok: true,
            }
        }
        Emit::Permutation => {
            let circle = TPath::circle(base);
            let track = track_roots::<f64>(f, s, &circle, None).map_err(compute)?;
            let perm = track.permutation.unwrap_or_default();
            let (word, _) = loop_braid::<f64>(f, s, &circle).map_err(compute)?;
            Output {
                summary: format!("cycle type {:?}", braidmon::cycle_type(&perm)),
                json: json!({ "permutation": perm, "cycle_type": braidmon::cycle_type(&perm), "braid": word }),
                ok: true,
            }
        }
        Emit::Events => {
            let mut all = Vec::new();
            for (target, path) in &paths {
                let track = track_roots::<f64>(f, s, path, None).map_err(compute)?;
                all.push(json!({ "target": pair(*target), "events": track.events }));
            }
            let crossings: usize = all
                .iter()
                .map(|v| {
                    serde_json::from_value::<Vec<BraidEvent>>(v["events"].clone())
                        .map(|e| e.len())
                        .unwrap_or(0)
                })
                .sum();
            Output {
                summary: format!("{} paths, {crossings} events", all.len()),
                json: Value::Array(all),
                ok: true,
            }
        }
        Emit::Factorization => {
            let fact = braidmon::braid_factorization(f, s, &paths).map_err(compute)?;
            let letters: Vec<String> = fact.letters.iter().map(|l| l.to_string()).collect();
            Output {
                summary: letters.join(", "),
                json: serde_json::to_value(&fact).map_err(compute)?,
                ok: true,
            }
        }
    })
}

fn bank(a: &BankArgs) -> Result<Output, Failure> {
    let b = wordbank::bank();
    if a.check {
        let lines = b.run_regressions();
        let ok = lines.iter().all(|l| matches!(l.outcome, Outcome::Pass | Outcome::Skipped));
        let summary = lines
            .iter()
            .map(|l| format!("{:<8} {} {}", format!("{:?}", l.outcome).to_lowercase(), l.key, l.check))
            .collect::<Vec<_>>()
            .join("\n");
        return Ok(Output {
            json: serde_json::to_value(&lines).map_err(compute)?,
            ok,
            summary,
        });
    }
    if let Some(key) = &a.key {
        let e = b.lookup(key).map_err(usage)?;
        return Ok(Output {
            summary: serde_json::to_string_pretty(e).map_err(compute)?,
            json: serde_json::to_value(e).map_err(compute)?,
            ok: true,
        });
    }
    let entries: Vec<Value> = b
        .entries
        .iter()
        .map(|e| {
            let kind = match e.payload {
                Payload::Word { .. } => "word",
                Payload::Graph { .. } => "graph",
                Payload::Report { .. } => "report",
                Payload::Braid { .. } => "braid",
            };
            let (prov, note) = match &e.provenance {
                Provenance::Stated { note } => ("stated", note.as_str()),
                Provenance::Derived { note } => ("derived", note.as_str()),
                Provenance::Trivial => ("trivial", ""),
            };
            json!({ "key": e.key, "kind": kind, "status": e.status, "provenance": prov, "note": note })
        })
        .collect();
    let summary = entries
        .iter()
        .map(|v| format!("{:<16} {:<7} {}", v["key"].as_str().unwrap(), v["kind"].as_str().unwrap(), v["provenance"].as_str().unwrap()))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output {
        json: Value::Array(entries),
        ok: true,
        summary,
    })
}
