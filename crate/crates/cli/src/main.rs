use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gridlab::cremona::{apply, example_line_map, grid_transport_check, AffineAutomorphism, RationalMap, RationalMapJson};
use gridlab::curves::{common_component_rank_test, conic_classify, intersection_multiplicity, moura_max, PlaneCurve};
use gridlab::fields::Field;
use gridlab::grid::{
    budget_from_env, build_graph, edge_report, find_grid, Chart, Execution, ScanOptions,
};
use gridlab::hypersurface::{construct, Family, Hypersurface, HypersurfaceJson, OpenSet, OpenSetJson, ProjPoint};
use gridlab::poly::{BiHomPoly, Group, MultiPoly, PolyJson};
use gridlab::s1::{s1_bruteforce_oracle, s1_classify, s1_reduce};
use gridlab::sweep::run_sweep;
use gridlab::{Error, Result};

#[derive(Parser)]
#[command(name = "gridlab", version, about = "Grid-free hypersurfaces over finite fields and the rationals")]
struct Cli {
    /// Print a key/value table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for grid scans.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum number of subsets (or point pairs) a scan may enumerate.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one of the families 1a, 1b, 1c, 1d over F_p.
    Construct {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an (s,t)-grid. Exit 0 when grid-free, 1 with a witness.
    Gridcheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Edge count against the Füredi bound.
    Edges {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
    },
    /// Classification on P^1 x P^1.
    S1 {
        #[command(subcommand)]
        cmd: S1Cmd,
    },
    Curves {
        #[command(subcommand)]
        cmd: CurvesCmd,
    },
    Cremona {
        #[command(subcommand)]
        cmd: CremonaCmd,
    },
    /// Run a named suite of checks at several primes. Exit 1 on any failure.
    Sweep {
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, value_delimiter = ',', default_value = "5,7,11,13")]
        primes: Vec<u64>,
    },
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Hypersurface JSON (or the output of `construct`); `-` reads stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Defaults to the characteristic of a prime-field input.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value = "affine")]
    chart: Chart,
    #[arg(long)]
    exclude_x: Option<String>,
    #[arg(long)]
    exclude_y: Option<String>,
}

#[derive(clap::Args)]
struct S1Args {
    #[arg(long)]
    poly: String,
    /// Points removed from the x-line, e.g. `0:1,1:1`.
    #[arg(long, value_delimiter = ',')]
    exclude_x: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    exclude_y: Vec<String>,
}

#[derive(Subcommand)]
enum S1Cmd {
    Classify {
        #[command(flatten)]
        args: S1Args,
        #[arg(long)]
        t: u32,
    },
    Reduce {
        #[command(flatten)]
        args: S1Args,
    },
    /// Direct fiber count over P^1(F_p).
    Oracle {
        #[command(flatten)]
        args: S1Args,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum CurvesCmd {
    Imult {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        point: String,
    },
    Common {
        #[arg(long)]
        h1: String,
        #[arg(long)]
        h2: String,
        #[arg(long)]
        u: String,
    },
    Moura {
        #[arg(long)]
        d1: u64,
        #[arg(long)]
        d2: u64,
    },
    Conic {
        #[arg(long)]
        f: String,
    },
}

#[derive(Subcommand)]
enum CremonaCmd {
    /// Pull a hypersurface back along a map of one factor.
    Apply {
        /// `quadratic`, `line:d,c0,c1,...`, `nagata` or `file:map.json`.
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, default_value = "y")]
        group: String,
    },
    /// Compare grids of H and its pullback on sampled F_p-points.
    Transport {
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
}

struct Output {
    value: Value,
    code: u8,
}

fn ok(value: Value) -> Result<Output> {
    Ok(Output { value, code: 0 })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read_source(src: &str) -> Result<String> {
    let mut text = String::new();
    if src == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(src).map_err(|e| Error::Parse(format!("{src}: {e}")))?;
    }
    Ok(text)
}

fn read_json(src: &str) -> Result<Value> {
    let text = read_source(src)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{src}: {e}")))
}

/// Unwraps the `hypersurface` member of `construct` output.
fn unwrap_construction(v: Value) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key("hypersurface") => m.remove("hypersurface").unwrap(),
        other => other,
    }
}

fn parse_as<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn load_hypersurface(src: &str) -> Result<Hypersurface> {
    let v = unwrap_construction(read_json(src)?);
    Hypersurface::from_json(&parse_as::<HypersurfaceJson>(v, "hypersurface")?)
}

fn load_poly(src: &str) -> Result<MultiPoly> {
    let v = unwrap_construction(read_json(src)?);
    MultiPoly::from_json(&parse_as::<PolyJson>(v, "polynomial")?)
}

/// An open set file: open-set JSON, one polynomial, or a list of them.
fn load_open_set(src: Option<&str>, dim: usize, group: Group) -> Result<OpenSet> {
    let Some(src) = src else {
        return Ok(OpenSet::full(dim, group));
    };
    let v = read_json(src)?;
    if v.get("excluded").is_some() {
        let set = OpenSet::from_json(&parse_as::<OpenSetJson>(v, "open set")?)?;
        if set.dim() != dim || set.group() != group {
            return Err(Error::WrongDimension(format!("{src} does not describe a subset of this factor")));
        }
        return Ok(set);
    }
    let list = match v {
        Value::Array(items) => items,
        one => vec![one],
    };
    let forms = list
        .into_iter()
        .map(|item| MultiPoly::from_json(&parse_as::<PolyJson>(item, "excluded form")?))
        .collect::<Result<Vec<_>>>()?;
    OpenSet::new(dim, group, forms)
}

fn scan_options(cli: &Cli) -> ScanOptions {
    let execution = cli.threads.map_or(Execution::Parallel, Execution::Threads);
    ScanOptions { budget: cli.budget.unwrap_or_else(budget_from_env), execution }
}

fn graph_inputs(g: &GraphArgs) -> Result<(Hypersurface, u64, OpenSet, OpenSet)> {
    let h = load_hypersurface(&g.input)?;
    let p = match g.p {
        Some(p) => p,
        None if h.field().is_prime_field() => h.field().characteristic(),
        None => return Err(Error::ParameterOutOfRange("--p is required for input that is not over F_p".into())),
    };
    let x = load_open_set(g.exclude_x.as_deref(), h.sx(), Group::X)?;
    let y = load_open_set(g.exclude_y.as_deref(), h.sy(), Group::Y)?;
    Ok((h, p, x, y))
}

fn parse_points(field: &Field, pts: &[String]) -> Result<Vec<ProjPoint>> {
    pts.iter().map(|s| ProjPoint::parse(field, s.trim())).collect()
}

fn s1_inputs(a: &S1Args) -> Result<(BiHomPoly, OpenSet, OpenSet)> {
    let form = BiHomPoly::from_poly(&load_poly(&a.poly)?)?;
    let field = form.poly().field().clone();
    let x = OpenSet::excluding_points(&field, Group::X, &parse_points(&field, &a.exclude_x)?)?;
    let y = OpenSet::excluding_points(&field, Group::Y, &parse_points(&field, &a.exclude_y)?)?;
    Ok((form, x, y))
}

fn parse_sigma(spec: &str, field: &Field) -> Result<RationalMap> {
    if spec == "quadratic" {
        return Ok(gridlab::cremona::standard_quadratic(field));
    }
    if spec == "nagata" {
        return AffineAutomorphism::nagata(field).to_rational_map();
    }
    if let Some(args) = spec.strip_prefix("line:") {
        let mut parts = args.split(',');
        let d = parts
            .next()
            .and_then(|d| d.trim().parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("line map needs a degree: `{spec}`")))?;
        let f = parts.map(|c| field.parse(c.trim())).collect::<Result<Vec<_>>>()?;
        return example_line_map(field, d, &f);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let m = RationalMap::from_json(&parse_as::<RationalMapJson>(read_json(path)?, "map")?)?;
        return if m.field() == field { Ok(m) } else { m.coerce(field) };
    }
    Err(Error::Parse(format!("unknown map `{spec}`")))
}

fn run(cli: &Cli) -> Result<Output> {
    let opts = scan_options(cli);
    match &cli.cmd {
        Cmd::Construct { family, p, s, out } => {
            let s = s.unwrap_or(match family {
                Family::Sphere => 3,
                _ => 2,
            });
            let c = construct(*family, *p, s)?;
            let v = json!({
                "family": family.tag(),
                "p": p,
                "s": s,
                "affine": c.affine.to_json(),
                "hypersurface": c.hypersurface.to_json(),
            });
            if let Some(path) = out {
                let text = serde_json::to_string(&v).expect("serializable") + "\n";
                std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            ok(v)
        }
        Cmd::Gridcheck { graph, s, t } => {
            let (h, p, x, y) = graph_inputs(graph)?;
            let g = build_graph(&h, p, &x, &y, graph.chart, &opts)?;
            let w = find_grid(&g, *s, *t, &opts)?;
            let witness = w.as_ref().map(|w| {
                json!({
                    "S": w.left.iter().map(|&i| g.left_label(i)).collect::<Vec<_>>(),
                    "T": w.right.iter().map(|&j| g.right_label(j)).collect::<Vec<_>>(),
                })
            });
            let code = if w.is_some() { 1 } else { 0 };
            let value = json!({
                "p": p,
                "s": s,
                "t": t,
                "chart": graph.chart,
                "left": g.left_len(),
                "right": g.right_len(),
                "edges": g.edge_count(),
                "grid_free": w.is_none(),
                "witness": witness,
            });
            Ok(Output { value, code })
        }
        Cmd::Edges { graph, s, t } => {
            let (h, p, x, y) = graph_inputs(graph)?;
            let g = build_graph(&h, p, &x, &y, graph.chart, &opts)?;
            let mut v = to_value(&edge_report(&g, *s, *t));
            v["p"] = json!(p);
            v["chart"] = json!(graph.chart);
            ok(v)
        }
        Cmd::S1 { cmd } => match cmd {
            S1Cmd::Classify { args, t } => {
                let (f, x, y) = s1_inputs(args)?;
                ok(to_value(&s1_classify(&f, &x, &y, *t)?))
            }
            S1Cmd::Reduce { args } => {
                let (f, x, y) = s1_inputs(args)?;
                ok(to_value(&Hypersurface::new(s1_reduce(&f, &x, &y)?).to_json()))
            }
            S1Cmd::Oracle { args, t, p } => {
                let (f, x, y) = s1_inputs(args)?;
                ok(to_value(&s1_bruteforce_oracle(&f, &x, &y, *t, *p, &opts)?))
            }
        },
        Cmd::Curves { cmd } => match cmd {
            CurvesCmd::Imult { f, g, point } => {
                let f = PlaneCurve::new(&load_poly(f)?)?;
                let g = PlaneCurve::new(&load_poly(g)?)?;
                let v = ProjPoint::parse(f.field(), point)?;
                ok(json!({ "multiplicity": intersection_multiplicity(&f, &g, &v)? }))
            }
            CurvesCmd::Common { h1, h2, u } => {
                let h1 = BiHomPoly::from_poly(&load_poly(h1)?)?;
                let h2 = BiHomPoly::from_poly(&load_poly(h2)?)?;
                let u = ProjPoint::parse(h1.poly().field(), u)?;
                ok(to_value(&common_component_rank_test(&h1, &h2, &u)?))
            }
            CurvesCmd::Moura { d1, d2 } => ok(json!({ "max": moura_max(*d1, *d2) })),
            CurvesCmd::Conic { f } => ok(to_value(&conic_classify(&PlaneCurve::new(&load_poly(f)?)?)?)),
        },
        Cmd::Cremona { cmd } => match cmd {
            CremonaCmd::Apply { sigma, input, group } => {
                let h = load_hypersurface(input)?;
                let m = parse_sigma(sigma, h.field())?;
                let r = match group.as_str() {
                    "x" => apply(Some(&m), None, &h)?,
                    "y" => apply(None, Some(&m), &h)?,
                    other => return Err(Error::Parse(format!("--group must be x or y, got `{other}`"))),
                };
                ok(to_value(&r.to_json()))
            }
            CremonaCmd::Transport { sigma, input, p, s, t } => {
                let h = load_hypersurface(input)?;
                let m = parse_sigma(sigma, h.field())?;
                let r = grid_transport_check(&h, &m, *p, *s, *t, &opts)?;
                Ok(Output { code: if r.consistent { 0 } else { 1 }, value: to_value(&r) })
            }
        },
        Cmd::Sweep { suite, primes } => {
            // the suites are sized for an unlimited scan unless a budget is asked for
            let budget = match (cli.budget, std::env::var_os("GRIDLAB_BUDGET")) {
                (Some(b), _) => b,
                (None, Some(_)) => budget_from_env(),
                (None, None) => u128::MAX,
            };
            let r = run_sweep(suite, primes, cli.seed, &opts.with_budget(budget))?;
            Ok(Output { code: if r.all_pass { 0 } else { 1 }, value: to_value(&r) })
        }
    }
}

/// `path  value` lines, nested keys joined with dots.
fn table(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                table(x, &key, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                table(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), parts.join(", ")));
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.pretty {
                let mut rows = Vec::new();
                table(&out.value, "", &mut rows);
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in rows {
                    println!("{k:<width$}  {v}");
                }
            } else {
                println!("{}", serde_json::to_string(&out.value).expect("serializable"));
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
