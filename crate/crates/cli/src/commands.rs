use clap::{Args, Parser, Subcommand, ValueEnum};
use permx_core::avoidance::{merge_count_upper_check, AvoidanceCount};
use permx_core::bounds::{
    cibulka_note, fox_rhs, lemma21_bound, lemma22_rhs, lemma22_terms, marcus_tardos_bound,
    theorem12_exponent, theorem24_alpha,
};
use permx_core::extremal::DEFAULT_BUDGET;
use permx_core::schedule::FloorMode;
use permx_core::{
    blockable_decompositions, build_schedule, certify_schedule, check_lemma21, check_lemma22,
    count_avoiders, crude_fpts_bound, exfn_exact, find_matrix_occurrence, find_occurrence,
    fpts_exact, gpts_exact, inflate, merge_member, selftest, sw_estimate_sequence,
    verify_jv_inclusion, BoundParams, Color, FptsResult, MergeQuery, Permutation, SearchConfig,
};
use serde_json::json;

use crate::input;
use crate::output::{Failure, Format, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "permx", version, about = "Pattern containment, avoidance and forbidden-submatrix extremal functions")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true, env = "PERMX_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Accepted for reproducibility scripts; results never depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Add elapsed wall time to the output (breaks byte-identical reruns).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Whether the host permutation contains the pattern.
    Contains {
        #[arg(long)]
        host: String,
        #[arg(long)]
        pattern: String,
    },
    /// Whether a 0-1 matrix contains a pattern matrix.
    MatrixContains {
        /// Matrix JSON (inline or @file) or a permutation.
        #[arg(long)]
        host: String,
        #[arg(long)]
        pattern: String,
    },
    /// Direct sum.
    Sum {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Skew sum.
    Skew {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Replaces each entry of the skeleton by a block.
    Inflate {
        #[arg(long)]
        skeleton: String,
        #[arg(long, num_args = 1.., required = true)]
        blocks: Vec<String>,
    },
    /// All ways to write a permutation as an inflation with c blocks.
    Decompose {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        c: usize,
    },
    /// Reverse, complement or inverse.
    Transform {
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum)]
        op: Symmetry,
    },
    /// Number of n-permutations avoiding the pattern.
    CountAv {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
    /// |Av_m(pattern)|^(1/m) for m = 1..n.
    SwEstimate {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
    /// Whether the host 2-colours into a red avoider and a blue avoider.
    MergeCheck {
        #[arg(long)]
        host: String,
        #[arg(long)]
        red: String,
        #[arg(long)]
        blue: String,
        #[arg(long, default_value_t = 14)]
        max_n: usize,
    },
    /// Counts the merge at length n and checks it against the union bound.
    MergeCount {
        #[arg(long)]
        red: String,
        #[arg(long)]
        blue: String,
        #[arg(long)]
        n: usize,
    },
    /// Checks Av(A+B+C) inside Av(A+B) merged with Av(B+C) at length n.
    VerifyJv {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 14)]
        max_n: usize,
    },
    /// Largest number of ones in an n x n matrix avoiding the pattern.
    Exfn {
        /// `I<k>`, matrix JSON, or a permutation.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
    },
    /// Most rows of width t, each with at least s ones, avoiding the pattern.
    Fpts(RowCountArgs),
    /// Column analogue of fpts.
    Gpts(RowCountArgs),
    /// Checks f_P(t, s) <= k^a t / (s - k^a) under ex(n) <= k^a n.
    CheckLemma21 {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
        /// Check ex(n) <= k^a n for n up to this value.
        #[arg(long, default_value_t = 4)]
        hyp_n: usize,
    },
    /// Checks f_P(t, s) against the block recursion for a blockable pattern.
    CheckLemma22 {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Closed-form bounds and the row-count schedule.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Runs the full oracle suite; exit 0 iff every criterion passes.
    Selftest {
        /// Criterion ids to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Debug, Args)]
pub struct RowCountArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 1000)]
    n_cap: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Symmetry {
    Reverse,
    Complement,
    Inverse,
}

#[derive(Debug, Args)]
pub struct Grid {
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    c: Vec<u32>,
    /// Floor t and s after every step.
    #[arg(long)]
    floors: bool,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// 2 k^4 C(k^2, k).
    Mt {
        #[arg(long)]
        k: u64,
    },
    /// k^a t / (s - k^a).
    Lemma21 {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        s: u64,
    },
    /// Right side of the block recursion for given x, y and f_sub.
    Lemma22Rhs {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        f_sub: String,
    },
    /// The (t_i, s_i) schedule down from (t_0, s_0) to (beta k, beta k).
    Schedule(Grid),
    /// Evaluates every side condition of the schedule.
    Certify(Grid),
    /// log2 of the crude bound on f_P(t_0, s_0).
    Crude(Grid),
    /// Exponent alpha(a, c) of the Stanley-Wilf limit bound.
    Alpha {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        c: f64,
    },
    /// Exponent of the extremal-function bound, 2 alpha(a, c).
    Exponent {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        c: f64,
    },
    /// Right side of the tiling inequality for ex(t n).
    FoxRhs {
        /// `n:ex(n)` pairs, e.g. `1:1,2:3,3:5`.
        #[arg(long)]
        table: String,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        f: u64,
        #[arg(long)]
        g: u64,
        #[arg(long)]
        n: u64,
    },
    /// The relation L = O(c^2) between the two limits, evaluated at c.
    Cibulka {
        #[arg(long)]
        c_val: u64,
    },
}

type Outcome = Result<Report, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let budget = cli.global.budget;
    let config = SearchConfig::with_budget(budget);
    match &cli.command {
        Command::Contains { host, pattern } => {
            let (host, pattern) = (input::permutation(host)?, input::permutation(pattern)?);
            let occ = find_occurrence(&host, &pattern)?;
            let found = occ.is_some();
            let positions = occ.map(|o| o.positions);
            Ok(Report::new(&json!({"host": host, "pattern": pattern, "contains": found, "occurrence": positions}))?
                .csv_row(&["host", "pattern", "contains"], vec![host.to_string(), pattern.to_string(), found.to_string()])
                .text(found.to_string()))
        }
        Command::MatrixContains { host, pattern } => {
            let host = input::binary_matrix(host)?;
            let pattern = input::binary_matrix(pattern)?;
            let occ = find_matrix_occurrence(&host, &pattern)?;
            let found = occ.is_some();
            Ok(Report::new(&json!({"contains": found, "occurrence": occ}))?
                .csv_row(&["contains"], vec![found.to_string()])
                .text(found.to_string()))
        }
        Command::Sum { left, right } => {
            let p = input::permutation(left)?.direct_sum(&input::permutation(right)?)?;
            perm_report(&p)
        }
        Command::Skew { left, right } => {
            let p = input::permutation(left)?.skew_sum(&input::permutation(right)?)?;
            perm_report(&p)
        }
        Command::Inflate { skeleton, blocks } => {
            let blocks: Vec<Permutation> = blocks.iter().map(|b| input::permutation(b)).collect::<Result<_, _>>()?;
            perm_report(&inflate(&input::permutation(skeleton)?, &blocks)?)
        }
        Command::Decompose { perm, c } => {
            let perm = input::permutation(perm)?;
            let found = blockable_decompositions(&perm, *c)?;
            let rows = found
                .iter()
                .map(|d| vec![d.skeleton.to_string(), join(d.blocks.iter(), " ")])
                .collect();
            let text = if found.is_empty() {
                format!("{perm} has no decomposition into {c} blocks")
            } else {
                found
                    .iter()
                    .map(|d| format!("{}[{}]", d.skeleton, join(d.blocks.iter(), ",")))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok(Report::new(&json!({"perm": perm, "c": c, "decompositions": found}))?
                .csv(&["skeleton", "blocks"], rows)
                .text(text))
        }
        Command::Transform { perm, op } => {
            let perm = input::permutation(perm)?;
            perm_report(&match op {
                Symmetry::Reverse => perm.reverse(),
                Symmetry::Complement => perm.complement(),
                Symmetry::Inverse => perm.inverse(),
            })
        }
        Command::CountAv { pattern, n, max_n } => {
            let pattern = input::permutation(pattern)?;
            let config = SearchConfig { max_count_n: *max_n, ..config };
            let count = count_avoiders(&pattern, *n, &config)?;
            let row = vec![n.to_string(), count.to_string()];
            let text = count.to_string();
            Ok(Report::new(&AvoidanceCount { pattern, n: *n, count })?
                .csv_row(&["n", "count"], row)
                .text(text))
        }
        Command::SwEstimate { pattern, n_max, max_n } => {
            let pattern = input::permutation(pattern)?;
            let config = SearchConfig { max_count_n: *max_n, ..config };
            let seq = sw_estimate_sequence(&pattern, *n_max, &config)?;
            let rows: Vec<Vec<String>> = seq
                .iter()
                .map(|e| vec![e.n.to_string(), e.count.to_string(), format!("{:.12}", e.value)])
                .collect();
            let text = rows.iter().map(|r| r.join("\t")).collect::<Vec<_>>().join("\n");
            Ok(Report::new(&json!({"pattern": pattern, "estimates": seq}))?
                .csv(&["n", "count", "estimate"], rows)
                .text(text))
        }
        Command::MergeCheck { host, red, blue, max_n } => {
            let q = MergeQuery::new(input::permutation(host)?, input::permutation(red)?, input::permutation(blue)?)?;
            let config = SearchConfig { max_merge_n: *max_n, ..config };
            let coloring = merge_member(&q, &config)?;
            let member = coloring.is_some();
            let letters = coloring.as_ref().map(|c| {
                c.iter()
                    .map(|c| if *c == Color::Red { 'R' } else { 'B' })
                    .collect::<String>()
            });
            let text = match &letters {
                Some(l) => format!("true {l}"),
                None => "false".to_string(),
            };
            Ok(Report::new(&json!({"query": q, "member": member, "coloring": coloring}))?
                .csv_row(&["member", "coloring"], vec![member.to_string(), letters.unwrap_or_default()])
                .text(text))
        }
        Command::MergeCount { red, blue, n } => {
            let r = merge_count_upper_check(&input::permutation(red)?, &input::permutation(blue)?, *n, &config)?;
            let row = vec![
                r.n.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.pass.to_string(),
                r.rhs_positions_only.to_string(),
                r.positions_only_holds.to_string(),
            ];
            let text = format!(
                "merges of length {}: {}\nbound C(n,i)^2 sum: {} ({})\nposition-only sum: {} ({})",
                r.n,
                r.lhs,
                r.rhs,
                verdict(r.pass),
                r.rhs_positions_only,
                verdict(r.positions_only_holds)
            );
            let pass = r.pass;
            Ok(Report::new(&r)?
                .csv_row(&["n", "lhs", "rhs", "pass", "rhs_positions_only", "positions_only_holds"], row)
                .text(text)
                .fail_unless(pass))
        }
        Command::VerifyJv { a, b, c, n, max_n } => {
            let config = SearchConfig { max_merge_n: *max_n, max_count_n: (*max_n).max(config.max_count_n), ..config };
            let r = verify_jv_inclusion(&input::permutation(a)?, &input::permutation(b)?, &input::permutation(c)?, *n, &config)?;
            let text = match &r.counterexample {
                None => format!("pass: {} permutations of length {} checked", r.checked, r.n),
                Some(p) => format!("fail: {p} is not in the merge"),
            };
            let row = vec![r.n.to_string(), r.checked.to_string(), r.pass.to_string(),
                r.counterexample.as_ref().map(|p| p.to_string()).unwrap_or_default()];
            let pass = r.pass;
            Ok(Report::new(&r)?
                .csv_row(&["n", "checked", "pass", "counterexample"], row)
                .text(text)
                .fail_unless(pass))
        }
        Command::Exfn { pattern, n } => {
            let p = input::pattern_matrix(pattern)?;
            let r = exfn_exact(&p, *n, budget)?;
            let status = if r.proven_optimal { Status::Success } else { Status::Incomplete };
            let text = format!(
                "{}{}\n{:?}",
                r.value,
                if r.proven_optimal { "" } else { " (budget exhausted; lower bound)" },
                r.witness
            );
            let row = vec![n.to_string(), r.value.to_string(), r.proven_optimal.to_string(), r.nodes_explored.to_string()];
            Ok(Report::new(&r)?
                .csv_row(&["n", "value", "proven_optimal", "nodes"], row)
                .text(text)
                .status(status))
        }
        Command::Fpts(args) => {
            let p = input::pattern_matrix(&args.pattern)?;
            row_count_report(fpts_exact(&p, args.t, args.s, args.n_cap, budget)?, args)
        }
        Command::Gpts(args) => {
            let p = input::pattern_matrix(&args.pattern)?;
            row_count_report(gpts_exact(&p, args.t, args.s, args.n_cap, budget)?, args)
        }
        Command::CheckLemma21 { pattern, a, t, s, hyp_n } => {
            let r = check_lemma21(&input::pattern_matrix(pattern)?, *a, *t, *s, *hyp_n, budget)?;
            let text = format!("f = {} <= {} : {}", r.lhs, r.rhs, verdict(r.pass));
            let row = vec![r.t.to_string(), r.s.to_string(), r.lhs.to_string(), r.rhs.to_string(), r.pass.to_string()];
            let pass = r.pass;
            Ok(Report::new(&r)?
                .csv_row(&["t", "s", "lhs", "rhs", "pass"], row)
                .text(text)
                .fail_unless(pass))
        }
        Command::CheckLemma22 { pattern, a, c, t, s, x, y } => {
            let (x, y) = (input::rational(x)?, input::rational(y)?);
            let r = check_lemma22(&input::pattern_matrix(pattern)?, *a, *c, *t, *s, &x, &y, budget)?;
            let rhs = r.rhs.as_ref().map_or("unbounded".to_string(), |v| v.to_string());
            let text = if r.vacuous {
                format!("f = {} ; recursive term unbounded (f_sub at ({}, {})), vacuous", r.lhs, r.terms.t_sub, r.terms.s_sub)
            } else {
                format!("f = {} <= {} : {}", r.lhs, rhs, verdict(r.pass))
            };
            let row = vec![r.t.to_string(), r.s.to_string(), r.x.to_string(), r.y.to_string(),
                r.lhs.to_string(), r.f_sub.to_string(), rhs, r.vacuous.to_string(), r.pass.to_string()];
            let pass = r.pass;
            Ok(Report::new(&r)?
                .csv_row(&["t", "s", "x", "y", "lhs", "f_sub", "rhs", "vacuous", "pass"], row)
                .text(text)
                .fail_unless(pass))
        }
        Command::Bounds(cmd) => bounds(cmd),
        Command::Selftest { only } => {
            let r = selftest::run(only, budget)?;
            let rows = r
                .criteria
                .iter()
                .map(|c| vec![c.id.to_string(), c.name.to_string(), c.pass.to_string()])
                .collect();
            let text = r
                .criteria
                .iter()
                .map(|c| format!("[{}] {:>2} {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name))
                .chain([format!("{} passed, {} failed", r.passed, r.failed)])
                .collect::<Vec<_>>()
                .join("\n");
            let pass = r.all_pass;
            Ok(Report::new(&r)?
                .csv(&["id", "name", "pass"], rows)
                .text(text)
                .fail_unless(pass))
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "VIOLATED"
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>, sep: &str) -> String {
    items.map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
}

fn perm_report(p: &Permutation) -> Outcome {
    Ok(Report::new(&json!({"permutation": p}))?
        .csv_row(&["permutation"], vec![p.to_string()])
        .text(p.to_string()))
}

fn row_count_report(r: FptsResult, args: &RowCountArgs) -> Outcome {
    let status = if r.complete { Status::Success } else { Status::Incomplete };
    let mut text = r.value.to_string();
    if !r.complete {
        text += &format!(" (capped at n_cap = {})", args.n_cap);
    }
    if r.witness.rows() > 0 {
        text += &format!("\n{:?}", r.witness);
    }
    let row = vec![args.t.to_string(), args.s.to_string(), r.value.to_string(), r.complete.to_string(), r.nodes_explored.to_string()];
    Ok(Report::new(&r)?
        .csv_row(&["t", "s", "value", "complete", "nodes"], row)
        .text(text)
        .status(status))
}

fn grid_params(grid: &Grid) -> Result<Vec<BoundParams>, Failure> {
    let mut out = Vec::new();
    for &k in &grid.k {
        if k.fract() != 0.0 || !(k >= 0.0) || k > u64::MAX as f64 {
            return Err(Failure::Usage(format!("k must be a nonnegative integer, got {k}")));
        }
        for &a in &grid.a {
            for &c in &grid.c {
                out.push(BoundParams::new(k as u64, a, c)?);
            }
        }
    }
    Ok(out)
}

fn floors(grid: &Grid) -> FloorMode {
    if grid.floors {
        FloorMode::On
    } else {
        FloorMode::Off
    }
}

/// A single object for one parameter set, an array for a sweep.
fn one_or_many(mut items: Vec<serde_json::Value>) -> serde_json::Value {
    if items.len() == 1 {
        items.remove(0)
    } else {
        serde_json::Value::Array(items)
    }
}

fn bounds(cmd: &BoundsCommand) -> Outcome {
    match cmd {
        BoundsCommand::Mt { k } => {
            if *k == 0 {
                return Err(Failure::Usage("k must be at least 1".into()));
            }
            let v = marcus_tardos_bound(*k);
            Ok(Report::new(&json!({"k": k, "coefficient": v.to_string()}))?
                .csv_row(&["k", "coefficient"], vec![k.to_string(), v.to_string()])
                .text(v.to_string()))
        }
        BoundsCommand::Lemma21 { k, a, t, s } => {
            let v = lemma21_bound(*k, *a, *t, *s)?;
            Ok(Report::new(&json!({"k": k, "a": a, "t": t, "s": s, "bound": v.to_string()}))?
                .csv_row(&["k", "a", "t", "s", "bound"], vec![k.to_string(), a.to_string(), t.to_string(), s.to_string(), v.to_string()])
                .text(v.to_string()))
        }
        BoundsCommand::Lemma22Rhs { k, a, c, t, s, x, y, f_sub } => {
            let (x, y, f) = (input::rational(x)?, input::rational(y)?, input::rational(f_sub)?);
            let terms = lemma22_terms(*k, *a, *c, *t, *s, &x, &y)?;
            let rhs = lemma22_rhs(*k, *a, *c, *t, *s, &x, &y, &f)?;
            let row = vec![terms.binomial.to_string(), terms.t_sub.to_string(), terms.s_sub.to_string(), terms.second_term.to_string(), rhs.to_string()];
            Ok(Report::new(&json!({"terms": terms, "f_sub": f.to_string(), "rhs": rhs.to_string()}))?
                .csv_row(&["binomial", "t_sub", "s_sub", "second_term", "rhs"], row)
                .text(rhs.to_string()))
        }
        BoundsCommand::Schedule(grid) => {
            let mut items = Vec::new();
            let mut rows = Vec::new();
            let mut text = Vec::new();
            for p in grid_params(grid)? {
                let s = build_schedule(&p, floors(grid));
                for st in &s.states {
                    rows.push(vec![p.k.to_string(), p.a.to_string(), p.c.to_string(), st.index.to_string(),
                        st.log2_t.to_string(), st.log2_s.to_string(), st.y.map(|y| y.to_string()).unwrap_or_default()]);
                }
                text.push(format!(
                    "k={} a={} c={}: beta={} x_b={} y_b={} y_1={:e} R_A={} log2 t_0={:.3} log2 s_0={:.3}",
                    p.k, p.a, p.c, s.beta, s.x_b, s.y_b, s.y_1, s.r_a, s.states[0].log2_t, s.states[0].log2_s
                ));
                items.push(serde_json::to_value(&s).map_err(|e| Failure::Internal(e.to_string()))?);
            }
            Ok(Report::new(&one_or_many(items))?
                .csv(&["k", "a", "c", "step", "log2_t", "log2_s", "y"], rows)
                .text(text.join("\n")))
        }
        BoundsCommand::Certify(grid) => {
            let mut items = Vec::new();
            let mut rows = Vec::new();
            let mut text = Vec::new();
            let mut all = true;
            for p in grid_params(grid)? {
                let r = certify_schedule(&build_schedule(&p, floors(grid)));
                all &= r.all_hold;
                text.push(format!("k={} a={} c={} R_A={}", p.k, p.a, p.c, r.r_a));
                for c in &r.checks {
                    rows.push(vec![p.k.to_string(), p.a.to_string(), p.c.to_string(), c.name.clone(),
                        c.holds.to_string(), c.lhs.to_string(), c.rhs.to_string(),
                        c.step.map(|s| s.to_string()).unwrap_or_default()]);
                    let step = c.step.map(|s| format!(" (step {s})")).unwrap_or_default();
                    text.push(format!("  [{}] {}: {:e} vs {:e}{}", if c.holds { "ok" } else { "FAIL" }, c.name, c.lhs, c.rhs, step));
                }
                items.push(serde_json::to_value(&r).map_err(|e| Failure::Internal(e.to_string()))?);
            }
            Ok(Report::new(&one_or_many(items))?
                .csv(&["k", "a", "c", "check", "holds", "lhs", "rhs", "step"], rows)
                .text(text.join("\n"))
                .fail_unless(all))
        }
        BoundsCommand::Crude(grid) => {
            let mut items = Vec::new();
            let mut rows = Vec::new();
            for p in grid_params(grid)? {
                let b = crude_fpts_bound(&build_schedule(&p, floors(grid)))?;
                rows.push(vec![p.k.to_string(), p.a.to_string(), p.c.to_string(), b.m.to_string(),
                    b.log2_first_term.to_string(), b.log2_second_term.to_string(), b.log2_bound.to_string()]);
                items.push(serde_json::to_value(&b).map_err(|e| Failure::Internal(e.to_string()))?);
            }
            let text = rows.iter().map(|r| format!("k={} a={} c={}: log2 bound = {}", r[0], r[1], r[2], r[6])).collect::<Vec<_>>().join("\n");
            Ok(Report::new(&one_or_many(items))?
                .csv(&["k", "a", "c", "m", "log2_first_term", "log2_second_term", "log2_bound"], rows)
                .text(text))
        }
        BoundsCommand::Alpha { a, c } => real_report("alpha", *a, *c, theorem24_alpha(*a, *c)),
        BoundsCommand::Exponent { a, c } => real_report("exponent", *a, *c, theorem12_exponent(*a, *c)),
        BoundsCommand::FoxRhs { table, t, s, f, g, n } => {
            let table = input::ex_table(table)?;
            let v = fox_rhs(&table, *t, *s, *f, *g, *n)?;
            Ok(Report::new(&json!({"t": t, "s": s, "n": n, "f": f, "g": g, "rhs": v.to_string()}))?
                .csv_row(&["t", "s", "n", "rhs"], vec![t.to_string(), s.to_string(), n.to_string(), v.to_string()])
                .text(v.to_string()))
        }
        BoundsCommand::Cibulka { c_val } => {
            let note = cibulka_note(*c_val);
            let row = vec![note.relation.clone(), note.square.to_string(), note.certified.to_string()];
            let text = format!("{} with c^2 = {} (asymptotic, not certified)", note.relation, note.square);
            Ok(Report::new(&note)?
                .csv_row(&["relation", "square", "certified"], row)
                .text(text))
        }
    }
}

fn real_report(name: &'static str, a: f64, c: f64, value: f64) -> Outcome {
    if !(a > 0.0) || !(c >= 2.0) {
        return Err(Failure::Usage("need a > 0 and c >= 2".into()));
    }
    Ok(Report::new(&json!({"a": a, "c": c, name: value}))?
        .csv_row(&["a", "c", name], vec![a.to_string(), c.to_string(), value.to_string()])
        .text(format!("{value:.6}")))
}
