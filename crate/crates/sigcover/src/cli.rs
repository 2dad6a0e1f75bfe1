use std::ffi::OsString;
use std::io::{Read, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::json;
use sigcover_core::circuit::inadmissible_edge;
use sigcover_core::error::Error;
use sigcover_core::graph::SignedGraph;
use sigcover_core::pipeline::{cover_full_with, Bounds, PipelineConfig, Strategy};
use sigcover_core::signature::{minimum_signature_with, BRANCH_BUDGET, EXACT_SWITCH_LIMIT};
use sigcover_core::verify::{oracle_min_cover_with, verify_cover, OracleLimits, Requirements, DEFAULT_ORACLE_EDGES};

use crate::gen::{generate, GenParams, Model};
use crate::record::{
    join, parse_cover_file, parse_rational, to_cover, yes_no, CertificateRecord, ElementRecord, OracleRecord,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_ADMISSIBLE: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;

const EXIT_CODES: &str = "Exit codes:
  0  success (cover certified, cover valid, graph flow-admissible)
  1  unreadable or malformed input, bad arguments
  2  graph is not flow-admissible
  3  no certified result: bound missed, cover invalid, or a search limit hit";

#[derive(Parser, Debug)]
#[command(name = "sigcover", version, about = "Short signed circuit covers of signed graphs", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for generated instances.
    #[arg(long, global = true, env = "SIGCOVER_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Bound to certify.
    #[arg(long, global = true, env = "SIGCOVER_STRATEGY", value_enum, default_value_t = StrategyArg::Main)]
    pub strategy: StrategyArg,
    #[arg(long, global = true, env = "SIGCOVER_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest edge count the exact oracle accepts.
    #[arg(long, global = true, env = "SIGCOVER_ORACLE_CAP", default_value_t = DEFAULT_ORACLE_EDGES)]
    pub oracle_cap: usize,
    /// Components with more vertices get a budgeted switching search.
    #[arg(long, global = true, env = "SIGCOVER_EXACT_SWITCH_CAP", default_value_t = EXACT_SWITCH_LIMIT)]
    pub exact_switch_cap: usize,
    /// Input files processed in parallel.
    #[arg(long, global = true, env = "SIGCOVER_JOBS", default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Main,
    Alt1,
    Alt2,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Main => Strategy::Main,
            StrategyArg::Alt1 => Strategy::Alt1,
            StrategyArg::Alt2 => Strategy::Alt2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON record per input, one per line.
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a signed circuit cover and certify its length.
    Cover {
        /// Graph files, `-` for standard input.
        #[arg(default_value = "-")]
        files: Vec<String>,
        /// Include the construction steps.
        #[arg(long)]
        trace: bool,
    },
    /// Check a cover against a graph.
    Verify {
        /// Graph file, `-` for stdin.
        graph: String,
        /// Text or JSON cover, such as a certificate written by `cover`.
        cover: String,
        /// Largest number of elements any edge may lie in.
        #[arg(long)]
        max_width: Option<usize>,
        /// Length bound, `a` or `a/b`; defaults to the bound stated in the
        /// cover file.
        #[arg(long)]
        max_length: Option<String>,
        /// Bridges need not be covered.
        #[arg(long)]
        weak: bool,
        /// Every negative loop must have width exactly 2.
        #[arg(long)]
        loops_twice: bool,
    },
    /// Find an equivalent signature with the fewest negative edges.
    MinimizeSignature {
        #[arg(default_value = "-")]
        files: Vec<String>,
    },
    /// Report whether every edge lies in a signed circuit.
    CheckAdmissible {
        #[arg(default_value = "-")]
        files: Vec<String>,
    },
    /// Print a seeded random graph.
    Gen {
        #[arg(long, value_enum)]
        model: Model,
        /// Vertex count (not used by euler-tree).
        #[arg(short, long)]
        n: Option<usize>,
        /// Edge count.
        #[arg(short, long)]
        m: usize,
        /// Number of negative edges. By default signs are random, except that
        /// tree-plus-chords makes every chord negative.
        #[arg(long)]
        negatives: Option<usize>,
        /// Make every leaf balloon of an euler-tree odd.
        #[arg(long)]
        odd_leaves: bool,
    },
    /// Per-component bound table.
    Bounds {
        #[arg(default_value = "-")]
        files: Vec<String>,
    },
    /// Exact minimum signed circuit cover of a small graph.
    Oracle {
        #[arg(default_value = "-")]
        files: Vec<String>,
    },
}

/// Output of one unit of work.
struct Outcome {
    out: String,
    err: String,
    code: i32,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Self::with(out, String::new(), EXIT_OK)
    }

    fn with(out: String, err: String, code: i32) -> Self {
        Self { out, err, code }
    }
}

/// Run the tool on `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcomes = dispatch(&cli, stdin);
    let mut code = EXIT_OK;
    for o in outcomes {
        let _ = stdout.write_all(o.out.as_bytes());
        let _ = stderr.write_all(o.err.as_bytes());
        code = code.max(o.code);
    }
    code
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Vec<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Cover { files, trace } => per_file(g, files, stdin, |name, gr| cmd_cover(g, name, gr, *trace)),
        Command::MinimizeSignature { files } => per_file(g, files, stdin, |name, gr| cmd_minimize(g, name, gr)),
        Command::CheckAdmissible { files } => per_file(g, files, stdin, |name, gr| cmd_admissible(g, name, gr)),
        Command::Bounds { files } => per_file(g, files, stdin, |name, gr| cmd_bounds(g, name, gr)),
        Command::Oracle { files } => per_file(g, files, stdin, |name, gr| cmd_oracle(g, name, gr)),
        Command::Verify {
            graph,
            cover,
            max_width,
            max_length,
            weak,
            loops_twice,
        } => {
            let req = VerifyArgs {
                max_width: *max_width,
                max_length: max_length.clone(),
                weak: *weak,
                loops_twice: *loops_twice,
            };
            vec![cmd_verify(g, graph, cover, &req, stdin)]
        }
        Command::Gen {
            model,
            n,
            m,
            negatives,
            odd_leaves,
        } => {
            let p = GenParams {
                model: *model,
                n: *n,
                m: *m,
                negatives: *negatives,
                odd_leaves: *odd_leaves,
                seed: g.seed,
            };
            vec![cmd_gen(g, &p)]
        }
    }
}

fn read_input(name: &str, stdin: &mut dyn Read) -> Result<String, String> {
    let mut text = String::new();
    let res = if name == "-" {
        stdin.read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(name).map(|t| text = t)
    };
    res.map(|_| text).map_err(|e| format!("{name}: {e}"))
}

fn failure(g: &Global, name: &str, msg: String, code: i32) -> Outcome {
    match g.format {
        Format::Text => Outcome::with(String::new(), format!("{name}: {msg}\n"), code),
        Format::Json => Outcome::with(
            format!("{}\n", json!({ "input": name, "error": msg, "exit": code })),
            String::new(),
            code,
        ),
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Precondition(_) => EXIT_INPUT,
        Error::NotFlowAdmissible { .. } => EXIT_NOT_ADMISSIBLE,
        _ => EXIT_UNCERTIFIED,
    }
}

fn render<T: Serialize>(g: &Global, rec: &T, text: impl FnOnce() -> String) -> String {
    match g.format {
        Format::Text => text(),
        Format::Json => format!("{}\n", serde_json::to_string(rec).expect("records serialize")),
    }
}

/// Read and parse every file, then run `f` on up to `--jobs` threads.
/// Results come back in input order.
fn per_file<F>(g: &Global, files: &[String], stdin: &mut dyn Read, f: F) -> Vec<Outcome>
where
    F: Fn(&str, &SignedGraph) -> Outcome + Sync,
{
    let inputs: Vec<(String, Result<SignedGraph, Outcome>)> = files
        .iter()
        .map(|name| {
            let parsed = read_input(name, stdin)
                .map_err(|e| failure(g, name, e, EXIT_INPUT))
                .and_then(|t| SignedGraph::parse(&t).map_err(|e| failure(g, name, e.to_string(), EXIT_INPUT)));
            (name.clone(), parsed)
        })
        .collect();
    let slots: Vec<Mutex<Option<Outcome>>> = inputs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some((name, parsed)) = inputs.get(i) else { break };
        if let Ok(gr) = parsed {
            *slots[i].lock().expect("slot") = Some(f(name, gr));
        }
    };
    std::thread::scope(|s| {
        for _ in 1..g.jobs.clamp(1, inputs.len().max(1)) {
            s.spawn(work);
        }
        work();
    });
    let multi = files.len() > 1 && g.format == Format::Text;
    inputs
        .into_iter()
        .zip(slots)
        .map(|((name, parsed), slot)| {
            let mut o = match parsed {
                Ok(_) => slot.into_inner().expect("slot").expect("every input is processed"),
                Err(o) => o,
            };
            if multi && !o.out.is_empty() {
                o.out = format!("== {name}\n{}\n", o.out);
            }
            o
        })
        .collect()
}

fn config(g: &Global) -> PipelineConfig {
    PipelineConfig {
        strategy: g.strategy.into(),
        switch_exact_limit: g.exact_switch_cap,
        ..PipelineConfig::default()
    }
}

fn cmd_cover(g: &Global, name: &str, gr: &SignedGraph, trace: bool) -> Outcome {
    match cover_full_with(gr, &config(g)) {
        Ok(c) => {
            let rec = CertificateRecord::new(name, &c, trace);
            let out = render(g, &rec, || rec.text());
            if c.certified {
                Outcome::ok(out)
            } else {
                Outcome::with(
                    out,
                    format!("{name}: achieved {} exceeds the bound {}\n", c.achieved, c.bound),
                    EXIT_UNCERTIFIED,
                )
            }
        }
        Err(e) => failure(g, name, e.to_string(), error_code(&e)),
    }
}

struct VerifyArgs {
    max_width: Option<usize>,
    max_length: Option<String>,
    weak: bool,
    loops_twice: bool,
}

#[derive(Serialize)]
struct VerifyRecord<'a> {
    input: &'a str,
    valid: bool,
    length: usize,
    widths: &'a [usize],
    violations: Vec<String>,
}

fn cmd_verify(g: &Global, graph: &str, cover: &str, a: &VerifyArgs, stdin: &mut dyn Read) -> Outcome {
    let gr = match read_input(graph, stdin).and_then(|t| SignedGraph::parse(&t).map_err(|e| format!("{graph}: {e}"))) {
        Ok(gr) => gr,
        Err(e) => return failure(g, graph, e, EXIT_INPUT),
    };
    let file = match read_input(cover, stdin).and_then(|t| parse_cover_file(&t).map_err(|e| format!("{cover}: {e}"))) {
        Ok(f) => f,
        Err(e) => return failure(g, cover, e, EXIT_INPUT),
    };
    let c = match to_cover(&gr, &file) {
        Ok(c) => c,
        Err(e) => return failure(g, cover, e.to_string(), EXIT_INPUT),
    };
    let max_length = match &a.max_length {
        Some(s) => match parse_rational(s) {
            Some(r) => Some(r),
            None => return failure(g, cover, format!("bad --max-length {s:?}"), EXIT_INPUT),
        },
        None => file.bound,
    };
    let req = Requirements {
        target: None,
        weak: a.weak,
        max_width: a.max_width,
        loops_exactly_twice: a.loops_twice,
        max_length,
    };
    let rep = verify_cover(&gr, &c, &req);
    let rec = VerifyRecord {
        input: cover,
        valid: rep.valid,
        length: rep.length,
        widths: &rep.widths,
        violations: rep.violations.iter().map(ToString::to_string).collect(),
    };
    let out = render(g, &rec, || {
        let mut s = format!(
            "{:<16}{}\n{:<16}{}\n{:<16}{}\n",
            "valid",
            yes_no(rep.valid),
            "length",
            rep.length,
            "widths",
            join(&rep.widths, " ")
        );
        for v in &rec.violations {
            s.push_str(&format!("{:<16}{v}\n", "violation"));
        }
        s
    });
    Outcome::with(out, String::new(), if rep.valid { EXIT_OK } else { EXIT_UNCERTIFIED })
}

#[derive(Serialize)]
struct SignatureRecord<'a> {
    input: &'a str,
    eps_n: usize,
    switching: &'a [usize],
    negative_edges: Vec<usize>,
    graph: String,
}

fn cmd_minimize(g: &Global, name: &str, gr: &SignedGraph) -> Outcome {
    match minimum_signature_with(gr, g.exact_switch_cap, BRANCH_BUDGET) {
        Ok(ms) => {
            let rec = SignatureRecord {
                input: name,
                eps_n: ms.eps_n,
                switching: ms.switching.vertices(),
                negative_edges: ms.graph.negative_edges(&ms.graph.all_edges()).to_vec(),
                graph: ms.graph.to_text(),
            };
            Outcome::ok(render(g, &rec, || {
                format!(
                    "{:<16}{}\n{:<16}{}\n{:<16}{}\n{}",
                    "eps_n",
                    rec.eps_n,
                    "switching",
                    join(rec.switching, " "),
                    "negative_edges",
                    join(&rec.negative_edges, " "),
                    rec.graph
                )
            }))
        }
        Err(e) => failure(g, name, e.to_string(), error_code(&e)),
    }
}

fn cmd_admissible(g: &Global, name: &str, gr: &SignedGraph) -> Outcome {
    let bad = inadmissible_edge(gr, &gr.all_edges());
    let rec = json!({ "input": name, "flow_admissible": bad.is_none(), "edge": bad });
    let out = render(g, &rec, || match bad {
        None => "flow-admissible\n".to_string(),
        Some(e) => format!("not flow-admissible: edge {e} lies in no signed circuit\n"),
    });
    Outcome::with(
        out,
        String::new(),
        if bad.is_none() { EXIT_OK } else { EXIT_NOT_ADMISSIBLE },
    )
}

fn cmd_gen(g: &Global, p: &GenParams) -> Outcome {
    match generate(p) {
        Ok(gr) => {
            let admissible = inadmissible_edge(&gr, &gr.all_edges()).is_none();
            let model = p.model.to_possible_value().expect("model name").get_name().to_string();
            let rec = json!({
                "model": model,
                "seed": p.seed,
                "n": gr.vertex_count(),
                "m": gr.edge_count(),
                "flow_admissible": admissible,
                "graph": gr.to_text(),
            });
            Outcome::ok(render(g, &rec, || {
                format!(
                    "# model {model} seed {}\n# flow-admissible {}\n{}",
                    p.seed,
                    yes_no(admissible),
                    gr.to_text()
                )
            }))
        }
        Err(e) => failure(g, "gen", e.to_string(), EXIT_INPUT),
    }
}

#[derive(Serialize)]
struct BoundsRow {
    component: String,
    vertices: Vec<usize>,
    m: usize,
    n: usize,
    eps_n: usize,
    x_size: usize,
    main: String,
    alt1: String,
    alt2: String,
}

#[derive(Serialize, Default)]
struct Certified {
    main: bool,
    alt1: bool,
    alt2: bool,
}

#[derive(Serialize)]
struct BoundsRecord<'a> {
    input: &'a str,
    rows: Vec<BoundsRow>,
    /// Whether the pipeline certifies each bound.
    certified: Certified,
    note: Option<String>,
}

fn cmd_bounds(g: &Global, name: &str, gr: &SignedGraph) -> Outcome {
    let ms = match minimum_signature_with(gr, g.exact_switch_cap, BRANCH_BUDGET) {
        Ok(ms) => ms,
        Err(e) => return failure(g, name, e.to_string(), error_code(&e)),
    };
    let gs = &ms.graph;
    let all = gs.all_edges();
    let mut rows = Vec::new();
    let mut parts: Vec<(Vec<usize>, usize, usize)> = gs
        .components(&all)
        .into_iter()
        .map(|c| (gs.vertices_of(&c), c.len(), gs.negative_count(&c)))
        .collect();
    let deg = gs.degrees(&all);
    parts.extend((0..gs.vertex_count()).filter(|&v| deg[v] == 0).map(|v| (vec![v], 0, 0)));
    parts.sort();
    for (i, (verts, m, eps)) in parts.iter().enumerate() {
        let b = Bounds::new(*m, verts.len(), 1, *eps);
        rows.push(row(i.to_string(), verts.clone(), *m, verts.len(), *eps, *eps, &b));
    }
    let total = Bounds::new(gs.edge_count(), gs.vertex_count(), parts.len(), ms.eps_n);
    // under a minimum signature X is the set of negative edges
    rows.push(row(
        "total".into(),
        Vec::new(),
        gs.edge_count(),
        gs.vertex_count(),
        ms.eps_n,
        ms.eps_n,
        &total,
    ));
    let mut certified = Certified::default();
    let mut note = None;
    let mut code = EXIT_OK;
    for s in [Strategy::Main, Strategy::Alt1, Strategy::Alt2] {
        let cfg = PipelineConfig {
            strategy: s,
            ..config(g)
        };
        let slot = match s {
            Strategy::Main => &mut certified.main,
            Strategy::Alt1 => &mut certified.alt1,
            Strategy::Alt2 => &mut certified.alt2,
        };
        match cover_full_with(gr, &cfg) {
            Ok(c) => *slot = c.certified && !c.downgraded,
            Err(e) => {
                code = code.max(error_code(&e));
                note.get_or_insert(e.to_string());
            }
        }
    }
    let rec = BoundsRecord {
        input: name,
        rows,
        certified,
        note,
    };
    let out = render(g, &rec, || {
        let mut s = format!(
            "{:<10}{:>5}{:>5}{:>7}{:>8}{:>10}{:>10}{:>10}  vertices\n",
            "component", "m", "n", "eps_n", "x_size", "main", "alt1", "alt2"
        );
        for r in &rec.rows {
            let line = format!(
                "{:<10}{:>5}{:>5}{:>7}{:>8}{:>10}{:>10}{:>10}  {}",
                r.component,
                r.m,
                r.n,
                r.eps_n,
                r.x_size,
                r.main,
                r.alt1,
                r.alt2,
                join(&r.vertices, ",")
            );
            s.push_str(line.trim_end());
            s.push('\n');
        }
        let c = &rec.certified;
        s.push_str(&format!(
            "certified main {}, alt1 {}, alt2 {}\n",
            yes_no(c.main),
            yes_no(c.alt1),
            yes_no(c.alt2)
        ));
        if let Some(n) = &rec.note {
            s.push_str(&format!("note {n}\n"));
        }
        s
    });
    Outcome::with(out, String::new(), code)
}

fn row(
    component: String,
    vertices: Vec<usize>,
    m: usize,
    n: usize,
    eps_n: usize,
    x_size: usize,
    b: &Bounds,
) -> BoundsRow {
    let r = |x: Rational64| x.to_string();
    BoundsRow {
        component,
        vertices,
        m,
        n,
        eps_n,
        x_size,
        main: r(b.main),
        alt1: r(b.alt1),
        alt2: r(b.alt2),
    }
}

fn cmd_oracle(g: &Global, name: &str, gr: &SignedGraph) -> Outcome {
    let limits = OracleLimits {
        max_edges: g.oracle_cap,
        ..OracleLimits::default()
    };
    match oracle_min_cover_with(gr, &limits) {
        Ok(o) => {
            let rec = OracleRecord {
                input: name.to_string(),
                m: gr.edge_count(),
                length: o.length,
                candidates: o.candidates,
                elements: o.cover.elements.iter().map(ElementRecord::new).collect(),
            };
            Outcome::ok(render(g, &rec, || rec.text()))
        }
        Err(e) => failure(g, name, e.to_string(), error_code(&e)),
    }
}
