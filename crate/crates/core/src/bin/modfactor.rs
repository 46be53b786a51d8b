use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use modfactor::audit::{audit_seeds, Theorem};
use modfactor::compat::{compatible_all, CompatMode, CompatVerdict};
use modfactor::connectivity::{edge_connectivity, essential_edge_connectivity, tree_connectivity};
use modfactor::io::{emit_graph, parse_graph, ParsedGraph};
use modfactor::maxcut::{bipartite_index, CutMode};
use modfactor::orient::{find_p_orientation, DegreeWindow};
use modfactor::regular::{self, RegularRoute};
use modfactor::{gen, modk, oracle, parity};
use modfactor::{Bipartition, Error, Exec, Factor, Hypotheses, IntFunc, Multigraph, ResidueMap};

#[derive(Parser)]
#[command(name = "modfactor", version, about = "Modulo-k factors, orientations and connectivity for multigraphs")]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Modulus; overrides the one in the input header.
    #[arg(short, long, global = true)]
    k: Option<usize>,
    /// Seed for anything randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// Graph file; standard input when absent or `-`.
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Edge connectivity, optionally essential and tree connectivity.
    Connectivity {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        essential: bool,
        #[arg(long)]
        tree: bool,
    },
    /// Bipartite index with a witness bipartition.
    BiIndex {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "bound")]
        exact: bool,
        #[arg(long)]
        bound: bool,
    },
    /// Whether the f line is compatible with the graph.
    Compat {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "sufficient")]
        exact: bool,
        #[arg(long)]
        sufficient: bool,
    },
    /// A p-orientation: out-degrees congruent to p modulo k inside a window.
    Orient {
        #[command(flatten)]
        input: Input,
        /// Take p from the f line (otherwise p ≡ 0).
        #[arg(long)]
        p_from_f: bool,
        /// `half`, `any`, or `LO,HI` bounds on every out-degree.
        #[arg(long, default_value = "any")]
        window: String,
        /// Fix an out-degree, `v=t`; repeatable.
        #[arg(long, value_parser = parse_pin)]
        pin: Vec<(usize, i64)>,
    },
    /// An f-factor modulo k (f from the input, ≡ 0 when absent).
    Factor {
        #[arg(value_enum)]
        engine: FactorEngine,
        #[command(flatten)]
        input: Input,
        /// Special vertex.
        #[arg(long)]
        z: Option<usize>,
        /// Required degree at `z` (mod2 and bipartite).
        #[arg(long, requires = "z")]
        target: Option<i64>,
        /// Lower degree bound `s` for `window`.
        #[arg(long, default_value_t = 0)]
        s: i64,
        /// Co-degree bound `s0` for `window`.
        #[arg(long, default_value_t = 0)]
        s0: i64,
        /// Out-degree bound `l0` for `window`.
        #[arg(long, default_value_t = 0)]
        l0: i64,
        /// Skip hypothesis verification.
        #[arg(long)]
        force: bool,
    },
    /// Modulo k-regular factors and subgraphs.
    Regular {
        #[arg(value_enum)]
        kind: RegularKind,
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = RouteArg::Edge)]
        route: RouteArg,
        #[arg(long)]
        force: bool,
    },
    /// Emit a seeded random instance in the text format.
    Gen {
        #[arg(value_enum)]
        family: GenFamily,
        #[arg(short, long)]
        n: usize,
        /// Edge connectivity (edge), tree count (tree, tree-bipartite),
        /// walks (eulerian), degree (regular-bipartite) or edges (random).
        #[arg(short, long, default_value_t = 1)]
        param: usize,
        /// Essential edge connectivity for `edge`.
        #[arg(long)]
        essential: Option<usize>,
        /// Bipartite scaffold for `edge`.
        #[arg(long)]
        bipartite: bool,
        /// Append a compatible f line (needs -k).
        #[arg(long)]
        with_f: bool,
    },
    /// Audit a theorem on seeded instances.
    Audit {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
    /// Time sequential against parallel execution on fixed workloads.
    Bench {
        #[arg(long, default_value_t = 3)]
        repeat: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorEngine {
    Mod2,
    Bipartite,
    General,
    Hightree,
    Window,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegularKind {
    Factor,
    Nondiv2k,
    Subgraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    /// Edge and essential edge connectivity.
    Edge,
    /// Tree connectivity, k >= 3.
    Tree,
    /// k = 2 only: 3-edge-connected with minimum degree 5.
    Even,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Edge,
    Tree,
    TreeBipartite,
    Eulerian,
    RegularBipartite,
    Random,
}

fn parse_pin(s: &str) -> Result<(usize, i64), String> {
    let (v, t) = s.split_once('=').ok_or("expected v=t")?;
    Ok((
        v.trim().parse().map_err(|_| "bad vertex")?,
        t.trim().parse().map_err(|_| "bad target")?,
    ))
}

/// Everything a command reports; `None` fields are left out of the JSON.
#[derive(Serialize, Default)]
struct Output {
    command: String,
    verdict: &'static str,
    exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degrees: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bipartition: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypotheses: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
    #[serde(skip)]
    text: Vec<String>,
}

impl Output {
    fn ok(command: impl Into<String>) -> Self {
        Output {
            command: command.into(),
            verdict: "ok",
            ..Default::default()
        }
    }

    fn verdict(mut self, v: &'static str, code: u8) -> Self {
        self.verdict = v;
        self.exit_code = code;
        self
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.text.push(s.into());
        self
    }

    fn factor(mut self, g: &Multigraph, h: &Factor) -> Self {
        let d = h.degrees(g);
        self.text.push(format!("edges: {}", join(&h.edge_ids())));
        self.text.push(format!("degrees: {}", join(&d)));
        self.edges = Some(h.edge_ids());
        self.degrees = Some(d);
        self
    }

    fn bipartition(mut self, b: &Bipartition) -> Self {
        let (x, y) = (b.x().as_slice().to_vec(), b.y().as_slice().to_vec());
        self.text.push(format!("X: {}", join(&x)));
        self.text.push(format!("Y: {}", join(&y)));
        self.bipartition = Some(json!({ "x": x, "y": y }));
        self
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn error_output(command: &str, e: &Error) -> Output {
    let (verdict, code) = match e {
        Error::Infeasible(_) => ("infeasible", 1),
        Error::Hypothesis(_) => ("hypothesis-failed", 2),
        Error::SolverGaveUp(_) => ("gave-up", 3),
        _ => ("input-error", 4),
    };
    let hypotheses = match e {
        Error::Hypothesis(msg) => Some(json!({ "status": "failed", "detail": msg })),
        _ => None,
    };
    Output {
        message: Some(e.to_string()),
        hypotheses,
        ..Output::ok(command)
    }
    .verdict(verdict, code)
    .line(format!("error: {e}"))
}

fn read_input(input: &Input) -> Result<ParsedGraph, Error> {
    let mut text = String::new();
    let io_err = |e: std::io::Error| Error::Parse {
        line: 0,
        msg: e.to_string(),
    };
    match &input.file {
        Some(p) if p.as_os_str() != "-" => text = std::fs::read_to_string(p).map_err(io_err)?,
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(io_err)?;
        }
    }
    parse_graph(&text)
}

fn modulus(cli_k: Option<usize>, p: &ParsedGraph) -> Result<usize, Error> {
    match cli_k.or(p.k) {
        Some(0) => Err(Error::ZeroModulus),
        Some(k) => Ok(k),
        None => Err(Error::Precondition("no modulus: pass -k or put k in the header".into())),
    }
}

/// The f line (reduced to `k` when `-k` differs from the header), or `f ≡ 0`.
fn residues(k: usize, p: &ParsedGraph) -> Result<ResidueMap, Error> {
    match &p.f {
        Some(f) if f.modulus() == k => Ok(f.clone()),
        Some(f) => {
            let vals: Vec<i64> = f.values().iter().map(|&x| x as i64).collect();
            ResidueMap::new(k, &vals)
        }
        None => ResidueMap::constant(k, p.graph.vertex_count(), 0),
    }
}

fn hyp(force: bool) -> Hypotheses {
    if force {
        Hypotheses::Assume
    } else {
        Hypotheses::Verify
    }
}

fn hyp_status(h: Hypotheses) -> Value {
    json!({ "status": if h.verify() { "verified" } else { "assumed" } })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.cmd {
        Cmd::Connectivity { input, essential, tree } => {
            let g = read_input(input)?.graph;
            let l = edge_connectivity(&g)?;
            let mut details = serde_json::Map::new();
            let mut out = Output::ok("connectivity").line(format!("edge connectivity: {l}"));
            out.value = Some(l);
            if *essential {
                let e = essential_edge_connectivity(&g)?;
                out = out.line(format!("essential edge connectivity: {e}"));
                details.insert("essential".into(), json!(e));
            }
            if *tree {
                let t = tree_connectivity(&g);
                out = out.line(format!("tree connectivity: {t}"));
                details.insert("tree".into(), json!(t));
            }
            out.details = Some(Value::Object(details));
            Ok(out)
        }
        Cmd::BiIndex { input, bound, .. } => {
            let g = read_input(input)?.graph;
            let mode = if *bound { CutMode::Bound } else { CutMode::Exact };
            let bi = bipartite_index(&g, mode)?;
            let mut out = Output::ok("bi-index").line(format!("bi: {} (exact: {})", bi.value, bi.exact));
            out.value = Some(bi.value);
            out.details = Some(json!({ "exact": bi.exact, "cut": bi.cut }));
            Ok(out.bipartition(&bi.witness))
        }
        Cmd::Compat { input, sufficient, .. } => {
            let p = read_input(input)?;
            let k = modulus(cli.k, &p)?;
            let f = residues(k, &p)?;
            let mode = if *sufficient { CompatMode::Sufficient } else { CompatMode::Exact };
            Ok(match compatible_all(&p.graph, &f, mode)? {
                CompatVerdict::Compatible { evidence } => Output {
                    message: Some(evidence.clone()),
                    ..Output::ok("compat")
                }
                .verdict("true", 0)
                .line(format!("compatible: {evidence}")),
                CompatVerdict::Incompatible { witness } => Output::ok("compat")
                    .verdict("false", 1)
                    .line("not compatible; witness bipartition:")
                    .bipartition(&witness),
                CompatVerdict::Unknown { reason } => Output {
                    message: Some(reason.clone()),
                    ..Output::ok("compat")
                }
                .verdict("unknown", 3)
                .line(format!("unknown: {reason}")),
            })
        }
        Cmd::Orient {
            input,
            p_from_f,
            window,
            pin,
        } => {
            let pg = read_input(input)?;
            let k = modulus(cli.k, &pg)?;
            let g = &pg.graph;
            let p = if *p_from_f {
                residues(k, &pg)?
            } else {
                ResidueMap::constant(k, g.vertex_count(), 0)?
            };
            let mut w = match window.as_str() {
                "any" => DegreeWindow::unbounded(g),
                "half" => DegreeWindow::half_degree(g, k),
                s => {
                    let bad = || Error::Precondition(format!("window {s:?} is not `any`, `half` or `LO,HI`"));
                    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
                    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
                    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
                    let n = g.vertex_count();
                    DegreeWindow::new(IntFunc::constant(n, lo), IntFunc::constant(n, hi))?
                }
            };
            for &(v, t) in pin {
                w = w.pin(v, t)?;
            }
            let o = find_p_orientation(g, &p, &w, None)?;
            let tails: Vec<usize> = (0..g.edge_count()).map(|e| o.tail(g, e)).collect();
            let out_deg = o.out_degrees(g);
            let mut out = Output::ok("orient")
                .line(format!("tails: {}", join(&tails)))
                .line(format!("out-degrees: {}", join(&out_deg)));
            out.degrees = Some(out_deg);
            out.details = Some(json!({ "tails": tails }));
            Ok(out)
        }
        Cmd::Factor {
            engine,
            input,
            z,
            target,
            s,
            s0,
            l0,
            force,
        } => {
            let pg = read_input(input)?;
            let k = modulus(cli.k, &pg)?;
            let f = residues(k, &pg)?;
            let g = &pg.graph;
            let n = g.vertex_count();
            let hyp = hyp(*force);
            let pinned = z.zip(*target);
            let (name, h, special) = match engine {
                FactorEngine::Mod2 => ("factor mod2", parity::mod2_bounded_factor(g, &f, pinned, hyp)?, None),
                FactorEngine::Bipartite => ("factor bipartite", modk::bipartite_f_factor(g, &f, pinned, hyp)?, None),
                FactorEngine::General => ("factor general", modk::general_f_factor(g, &f, hyp)?, None),
                FactorEngine::Hightree => match z {
                    Some(z) => ("factor hightree", modk::high_tree_f_factor(g, &f, *z, hyp)?, Some(*z)),
                    None => {
                        let (h, z) = modk::high_tree_sharp_f_factor(g, &f, hyp)?;
                        ("factor hightree", h, z)
                    }
                },
                FactorEngine::Window => {
                    let c = |x: i64| IntFunc::constant(n, x);
                    let h = modk::bipartite_f_factor_window(g, &f, &c(*s), &c(*s0), &c(*l0), z.unwrap_or(0), hyp)?;
                    ("factor window", h, None)
                }
                FactorEngine::Tree => ("factor tree", modk::bipartite_f_factor_tree(g, &f, hyp)?, None),
            };
            let mut out = Output::ok(name).factor(g, &h);
            out.hypotheses = Some(hyp_status(hyp));
            out.details = Some(json!({ "k": k, "f": f.values(), "z": special }));
            Ok(out)
        }
        Cmd::Regular {
            kind,
            input,
            route,
            force,
        } => {
            let pg = read_input(input)?;
            let k = modulus(cli.k, &pg)?;
            let g = &pg.graph;
            let hyp = hyp(*force);
            match kind {
                RegularKind::Factor => {
                    let h = match route {
                        RouteArg::Edge => regular::bipartite_modk_regular_factor(g, k, RegularRoute::Edge, hyp)?,
                        RouteArg::Tree => regular::bipartite_modk_regular_factor(g, k, RegularRoute::Tree, hyp)?,
                        RouteArg::Even if k == 2 => regular::bipartite_mod2_regular(g, hyp)?,
                        RouteArg::Even => return Err(Error::Precondition("the even route needs k = 2".into())),
                    };
                    let mut out = Output::ok("regular factor").factor(g, &h);
                    out.hypotheses = Some(hyp_status(hyp));
                    Ok(out)
                }
                RegularKind::Nondiv2k => {
                    let mut out = Output::ok("regular nondiv2k").factor(g, &regular::modk_regular_nondiv2k(g, k, hyp)?);
                    out.hypotheses = Some(hyp_status(hyp));
                    Ok(out)
                }
                RegularKind::Subgraph => {
                    let (h, q) = regular::bipartite_modk_regular_subgraph(g, k, regular::DEFAULT_SEARCH_NODES)?;
                    let mut out = Output::ok("regular subgraph").line(format!("prime power q: {q}")).factor(g, &h);
                    out.details = Some(json!({ "q": q }));
                    Ok(out)
                }
            }
        }
        Cmd::Gen {
            family,
            n,
            param,
            essential,
            bipartite,
            with_f,
        } => {
            let (n, p, seed) = (*n, *param, cli.seed);
            let g = match family {
                GenFamily::Edge => gen::gen_edge_connected(n, p, *bipartite, *essential, seed)?,
                GenFamily::Tree => gen::gen_tree_connected(n, p, seed)?,
                GenFamily::TreeBipartite => gen::gen_tree_connected_bipartite(n / 2, n - n / 2, p, seed)?,
                GenFamily::Eulerian => gen::gen_eulerian(n, p, None, seed)?,
                GenFamily::RegularBipartite => gen::gen_regular_bipartite(n / 2, p, seed)?,
                GenFamily::Random => gen::gen_multigraph(n, p, false, seed)?,
            };
            let f = if *with_f {
                let k = cli.k.ok_or_else(|| Error::Precondition("--with-f needs -k".into()))?;
                Some(gen::gen_compatible_f(&g, k, seed)?)
            } else {
                None
            };
            let text = emit_graph(&g, cli.k, f.as_ref());
            let mut out = Output::ok("gen");
            out.details = Some(json!({ "graph": text }));
            out.text.push(text.trim_end().to_string());
            Ok(out)
        }
        Cmd::Audit { theorem, seeds } => {
            let t = Theorem::from_id(theorem).ok_or_else(|| {
                let ids: Vec<&str> = Theorem::ALL.iter().map(|t| t.id()).collect();
                Error::Precondition(format!("unknown theorem {theorem:?}; known: {}", ids.join(", ")))
            })?;
            let k = cli.k.unwrap_or(if t == Theorem::AfkSubgraph { 3 } else { 2 });
            let results = audit_seeds(Exec::Parallel, t, k, *seeds);
            let mut passed = 0;
            let mut lines = Vec::new();
            let mut reports = Vec::new();
            for (s, r) in results.into_iter().enumerate() {
                let seed = s as u64;
                match r {
                    Ok(r) => {
                        if r.passed() {
                            passed += 1;
                        } else {
                            lines.push(format!("seed {seed}: {:?} at {}", r.outcome, r.failing_clause.clone().unwrap_or_default()));
                        }
                        reports.push(json!({ "seed": seed, "report": r }));
                    }
                    Err(e) => {
                        lines.push(format!("seed {seed}: {e}"));
                        reports.push(json!({ "seed": seed, "error": e.to_string() }));
                    }
                }
            }
            let mut out = Output::ok("audit");
            out.text = lines;
            out.text.push(format!("{passed}/{seeds} pass ({}, k = {k})", t.id()));
            out.value = Some(passed);
            out.details = Some(json!({ "theorem": t.id(), "k": k, "passed": passed, "total": seeds, "reports": reports }));
            if passed as u64 != *seeds {
                out = out.verdict("false", 1);
            }
            Ok(out)
        }
        Cmd::Bench { repeat } => bench(*repeat),
    }
}

fn bench(repeat: usize) -> Result<Output, Error> {
    let factor_graph = gen::gen_multigraph(8, 22, false, 1)?;
    let compat_graph = gen::gen_edge_connected(16, 4, false, None, 2)?;
    let compat_f = ResidueMap::constant(3, 16, 1)?;
    let ess_graph = gen::gen_edge_connected(16, 6, false, None, 3)?;
    type Work<'a> = Box<dyn Fn(Exec) -> Result<(), Error> + 'a>;
    let work: Vec<(&str, Work)> = vec![
        (
            "oracle even factors (22 edges)",
            Box::new(|x| oracle::enum_factors_with(x, &factor_graph, None, |c| c.degrees.iter().all(|d| d % 2 == 0)).map(|_| ())),
        ),
        (
            "exact compatibility (16 vertices)",
            Box::new(|x| modfactor::compat::compatible_all_with(&compat_graph, &compat_f, CompatMode::Exact, x).map(|_| ())),
        ),
        (
            "essential connectivity (16 vertices)",
            Box::new(|x| modfactor::connectivity::essential_edge_connectivity_with(&ess_graph, x).map(|_| ())),
        ),
        ("audit general-factor x 16", Box::new(|x| audit_seeds(x, Theorem::GeneralFactor, 3, 16).into_iter().try_for_each(|r| r.map(|_| ())))),
    ];
    let mut rows = Vec::new();
    let mut out = Output::ok("bench");
    for (name, f) in &work {
        let mut times = [0f64; 2];
        for (i, exec) in [Exec::Sequential, Exec::Parallel].into_iter().enumerate() {
            let start = Instant::now();
            for _ in 0..repeat.max(1) {
                f(exec)?;
            }
            times[i] = start.elapsed().as_secs_f64() * 1000.0 / repeat.max(1) as f64;
        }
        out = out.line(format!("{name}: sequential {:.1} ms, parallel {:.1} ms", times[0], times[1]));
        rows.push(json!({ "name": name, "sequential_ms": times[0], "parallel_ms": times[1] }));
    }
    out.details = Some(json!({ "workloads": rows, "parallel_feature": cfg!(feature = "parallel") }));
    Ok(out)
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Connectivity { .. } => "connectivity",
        Cmd::BiIndex { .. } => "bi-index",
        Cmd::Compat { .. } => "compat",
        Cmd::Orient { .. } => "orient",
        Cmd::Factor { .. } => "factor",
        Cmd::Regular { .. } => "regular",
        Cmd::Gen { .. } => "gen",
        Cmd::Audit { .. } => "audit",
        Cmd::Bench { .. } => "bench",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => error_output(command_name(&cli.cmd), &e),
    };
    // write errors (a closed pipe) are ignored; the exit code still stands
    if cli.json {
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&out).expect("output serializes"));
    } else if out.exit_code == 0 || out.verdict == "false" {
        let mut w = std::io::stdout().lock();
        let _ = out.text.iter().try_for_each(|l| writeln!(w, "{l}"));
    } else {
        let mut w = std::io::stderr().lock();
        let _ = out.text.iter().try_for_each(|l| writeln!(w, "{l}"));
    }
    ExitCode::from(out.exit_code)
}
