use std::fmt::{self, Write as _};
use std::fs::File;
use std::io::{BufReader, BufWriter};

use serde_json::{json, Value};

use swarmlink::analysis::bounds::{alg1_delay_bound, counting_bound, delay_lower_bound, strip_bound};
use swarmlink::analysis::enumerate::enumerate_initial_with;
use swarmlink::analysis::flow::max_mu_with;
use swarmlink::analysis::bounds_report;
use swarmlink::codec::{bound_check, build_variable_code, codeword_bits, entropy, Scheme, SymbolSource};
use swarmlink::engine::{default_max_steps, read_jsonl, render_ascii};
use swarmlink::{
    alg1, alg2, format_bits, index_to_bits, loco, run, BehaviorTrace, Configuration, Error, Exec, GraphKind, GridGraph,
    Membership, SwarmAlgorithm, Vertex,
};

use crate::{AnalyzeArgs, Algorithm, BoundsArgs, CodeBuildArgs, Format, RenderArgs, SimulateArgs, TransmitArgs};

pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BOUNDS: u8 = 3;

/// Largest number of codewords a sweep transmits per swarm size.
const SWEEP_LIMIT: u128 = 1 << 16;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Runtime(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::Capacity { .. } | Error::Distribution(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub struct Output {
    pub text: String,
    pub bounds_pass: bool,
}

struct Verdict {
    name: String,
    detail: String,
    pass: bool,
}

impl Verdict {
    fn new(name: impl Into<String>, detail: impl Into<String>, pass: bool) -> Self {
        Verdict {
            name: name.into(),
            detail: detail.into(),
            pass,
        }
    }

    fn to_json(&self) -> Value {
        json!({ "name": self.name, "detail": self.detail, "pass": self.pass })
    }
}

fn verdict_lines(out: &mut String, verdicts: &[Verdict]) {
    for v in verdicts {
        let _ = writeln!(out, "[{}] {}: {}", if v.pass { "pass" } else { "FAIL" }, v.name, v.detail);
    }
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json value");
    text.push('\n');
    text
}

/// Aligned `name  value` rows.
fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(name, _)| name.len()).max().unwrap_or(0);
    rows.iter().map(|(name, value)| format!("{name:<width$}  {value}\n")).collect()
}

fn scheme_of(alg: Algorithm) -> Option<Scheme> {
    match alg {
        Algorithm::Alg1 => Some(Scheme::Alg1),
        Algorithm::Alg2 => Some(Scheme::Alg2),
        Algorithm::Loco => None,
    }
}

fn algorithm(alg: Algorithm) -> &'static dyn SwarmAlgorithm {
    match alg {
        Algorithm::Alg1 => &alg1::ShiftByTwo,
        Algorithm::Alg2 => &alg2::ShiftByOne,
        Algorithm::Loco => &loco::Caterpillar,
    }
}

fn initial(alg: Algorithm, k: usize, bits: &[u8]) -> Result<Configuration, Error> {
    match alg {
        Algorithm::Alg1 => alg1::encode(bits, 0),
        Algorithm::Alg2 => alg2::encode(bits, k, 0),
        Algorithm::Loco => loco::config(k, 0),
    }
}

fn decode(scheme: Scheme, terminal: &Configuration, k: usize) -> Result<Vec<u8>, Error> {
    match scheme {
        Scheme::Alg1 => alg1::decode_terminal(terminal, k),
        Scheme::Alg2 => alg2::decode_terminal(terminal, k),
    }
}

/// Delay checks for one transmission over `G_8(m, 2)`.
fn delay_verdicts(scheme: Scheme, k: usize, m: usize, delay: usize) -> Vec<Verdict> {
    let mut out = Vec::new();
    match scheme {
        Scheme::Alg2 => {
            let target = k * (m - k);
            out.push(Verdict::new(
                "delay k(m-k) +/- k",
                format!("{delay} vs {target}"),
                delay.abs_diff(target) <= k,
            ));
        }
        Scheme::Alg1 => {
            let bound = alg1_delay_bound(k, m);
            out.push(Verdict::new(
                "delay <= (10k-123.5)(m-k)",
                format!("{delay} vs {bound:.1}"),
                delay as f64 <= bound,
            ));
        }
    }
    let lower = delay_lower_bound(k, m - 1);
    out.push(Verdict::new(
        "delay >= k(dist-2(k-1))",
        format!("{delay} vs {lower}"),
        delay >= lower,
    ));
    out
}

struct Sent {
    delay: usize,
    received: Vec<u8>,
}

fn send(scheme: Scheme, alg: Algorithm, k: usize, m: usize, bits: &[u8], max_steps: Option<usize>) -> Result<Sent, Error> {
    let g = GridGraph::strip(m)?;
    let c0 = initial(alg, k, bits)?;
    let trace = run(&g, algorithm(alg), &c0, max_steps.unwrap_or_else(|| default_max_steps(k, m)))?;
    let terminal = trace
        .terminal()
        .ok_or_else(|| Error::Decode(format!("no terminal configuration within {} steps", trace.moves.len())))?;
    Ok(Sent {
        delay: trace.delay.expect("terminal"),
        received: decode(scheme, terminal, k)?,
    })
}

pub fn transmit(args: &TransmitArgs, format: Format) -> Result<Output, Failure> {
    let scheme = scheme_of(args.alg).ok_or_else(|| usage("transmit needs --alg alg1 or alg2"))?;
    if let Some(sweep) = &args.sweep {
        return transmit_sweep(args, scheme, sweep, format);
    }
    let k = args.k.ok_or_else(|| usage("--k is required"))?;
    let bits_text = args.bits.as_deref().ok_or_else(|| usage("--bits is required"))?;
    let bits = codeword_bits(scheme, k, bits_text)?;
    if args.m <= k {
        return Err(usage(format!("m = {} must exceed k = {k}", args.m)));
    }
    let sent = send(scheme, args.alg, k, args.m, &bits, args.max_steps)?;
    let mut verdicts = vec![Verdict::new(
        "round trip",
        format!("{} -> {}", bits_text, format_bits(&sent.received)),
        sent.received == bits,
    )];
    verdicts.extend(delay_verdicts(scheme, k, args.m, sent.delay));
    let pass = verdicts.iter().all(|v| v.pass);
    let text = match format {
        Format::Json => pretty(&json!({
            "algorithm": scheme.name(),
            "k": k,
            "m": args.m,
            "sent": bits_text,
            "received": format_bits(&sent.received),
            "delay": sent.delay,
            "checks": verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = table(&[
                ("algorithm", scheme.name().to_string()),
                ("k", k.to_string()),
                ("m", args.m.to_string()),
                ("sent", bits_text.to_string()),
                ("received", format_bits(&sent.received)),
                ("delay", sent.delay.to_string()),
            ]);
            verdict_lines(&mut out, &verdicts);
            out
        }
    };
    Ok(Output { text, bounds_pass: pass })
}

/// Parses `k=A..B` (inclusive).
fn parse_sweep(text: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let range = text.strip_prefix("k=").ok_or_else(|| usage(format!("sweep must look like k=4..9, got {text:?}")))?;
    let (lo, hi) = range
        .split_once("..")
        .ok_or_else(|| usage(format!("sweep range {range:?} lacks '..'")))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let parse = |s: &str| s.parse::<usize>().map_err(|_| usage(format!("bad sweep bound {s:?}")));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(usage(format!("empty sweep {lo}..{hi}")));
    }
    Ok(lo..=hi)
}

fn transmit_sweep(args: &TransmitArgs, scheme: Scheme, sweep: &str, format: Format) -> Result<Output, Failure> {
    let mut tasks = Vec::new();
    for k in parse_sweep(sweep)? {
        let capacity = scheme
            .capacity(k)
            .ok_or_else(|| usage(format!("{scheme} does not run with k = {k}")))?;
        if capacity > SWEEP_LIMIT {
            return Err(usage(format!("k = {k} has {capacity} codewords, above the sweep limit {SWEEP_LIMIT}")));
        }
        if args.m <= k {
            return Err(usage(format!("m = {} must exceed k = {k}", args.m)));
        }
        tasks.extend((0..capacity as u64).map(|i| (k, index_to_bits(i, scheme.bits_at(k)))));
    }
    let results = Exec::Parallel.map(&tasks, |(k, bits)| {
        send(scheme, args.alg, *k, args.m, bits, args.max_steps).map(|sent| {
            let verdicts = delay_verdicts(scheme, *k, args.m, sent.delay);
            (sent.received == *bits, verdicts.iter().all(|v| v.pass), sent.delay)
        })
    });

    // per size: codewords, decoded, bounds ok, min and max delay
    let mut rows: Vec<(usize, usize, usize, usize, usize, usize)> = Vec::new();
    for ((k, _), result) in tasks.iter().zip(results) {
        let (decoded, bounded, delay) = result?;
        if rows.last().map(|r| r.0) != Some(*k) {
            rows.push((*k, 0, 0, 0, usize::MAX, 0));
        }
        let row = rows.last_mut().expect("row for k");
        row.1 += 1;
        row.2 += decoded as usize;
        row.3 += bounded as usize;
        row.4 = row.4.min(delay);
        row.5 = row.5.max(delay);
    }
    let pass = rows.iter().all(|r| r.1 == r.2 && r.1 == r.3);
    let text = match format {
        Format::Json => pretty(&json!({
            "algorithm": scheme.name(),
            "m": args.m,
            "sizes": rows.iter().map(|r| json!({
                "k": r.0, "codewords": r.1, "decoded": r.2, "within_bounds": r.3,
                "min_delay": r.4, "max_delay": r.5,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = format!("{:>4} {:>10} {:>8} {:>8} {:>10} {:>10}\n", "k", "codewords", "decoded", "bounded", "min delay", "max delay");
            for r in &rows {
                let _ = writeln!(out, "{:>4} {:>10} {:>8} {:>8} {:>10} {:>10}", r.0, r.1, r.2, r.3, r.4, r.5);
            }
            out
        }
    };
    Ok(Output { text, bounds_pass: pass })
}

fn frames(trace: &BehaviorTrace, m: usize) -> String {
    let mut out = String::new();
    for record in trace.records() {
        let cells: Vec<Vertex> = record.cells.iter().map(|c| Vertex::new(c[0], c[1])).collect();
        let _ = writeln!(out, "t={}", record.t);
        out.push_str(&render_ascii(&cells, m, 2));
    }
    out
}

pub fn simulate(args: &SimulateArgs, format: Format) -> Result<Output, Failure> {
    let bits = match (scheme_of(args.alg), &args.bits) {
        (Some(scheme), Some(text)) => codeword_bits(scheme, args.k, text)?,
        (Some(_), None) => return Err(usage("--bits is required for alg1 and alg2")),
        (None, Some(_)) => return Err(usage("loco carries no bits")),
        (None, None) => Vec::new(),
    };
    if args.m <= args.k {
        return Err(usage(format!("m = {} must exceed k = {}", args.m, args.k)));
    }
    let g = GridGraph::strip(args.m)?;
    let c0 = initial(args.alg, args.k, &bits)?;
    let max_steps = args.max_steps.unwrap_or_else(|| default_max_steps(args.k, args.m));
    let trace = run(&g, algorithm(args.alg), &c0, max_steps).map_err(Failure::Runtime)?;

    let Some(path) = &args.out else {
        let mut buf = Vec::new();
        trace.write_jsonl(&mut buf)?;
        return Ok(Output {
            text: String::from_utf8(buf).expect("json is utf-8"),
            bounds_pass: true,
        });
    };
    trace.write_jsonl(BufWriter::new(File::create(path).map_err(Error::from)?))?;
    let text = match format {
        Format::Json => pretty(&json!({
            "algorithm": algorithm(args.alg).name(),
            "k": args.k,
            "m": args.m,
            "delay": trace.delay,
            "moves": trace.move_count,
            "warnings": trace.warnings,
            "trace": path.display().to_string(),
        })),
        Format::Ascii => frames(&trace, args.m),
        Format::Table => table(&[
            ("algorithm", algorithm(args.alg).name().to_string()),
            ("k", args.k.to_string()),
            ("m", args.m.to_string()),
            ("delay", trace.delay.map_or("never".into(), |d| d.to_string())),
            ("moves", trace.move_count.to_string()),
            ("warnings", trace.warnings.len().to_string()),
            ("trace", path.display().to_string()),
        ]),
    };
    Ok(Output { text, bounds_pass: true })
}

pub fn render(args: &RenderArgs, format: Format) -> Result<Output, Failure> {
    let file = File::open(&args.trace).map_err(Error::from)?;
    let records = read_jsonl(BufReader::new(file))?;
    let max = |axis: usize| records.iter().flat_map(|r| r.cells.iter().map(move |c| c[axis])).max().unwrap_or(0);
    let m = args.m.unwrap_or(max(0).max(0) as usize + 1);
    let n = args.n.unwrap_or((max(1).max(0) as usize + 1).max(2));
    let mut frames = Vec::new();
    for r in &records {
        let cells: Vec<Vertex> = r.cells.iter().map(|c| Vertex::new(c[0], c[1])).collect();
        let header = match r.mv {
            Some([from, to]) => format!("t={} move ({},{})->({},{})", r.t, from[0], from[1], to[0], to[1]),
            None => format!("t={}", r.t),
        };
        frames.push((r.t, header, render_ascii(&cells, m, n)));
    }
    let text = match format {
        Format::Json => pretty(&Value::Array(
            frames.iter().map(|(t, _, frame)| json!({ "t": t, "frame": frame })).collect(),
        )),
        _ => frames.iter().map(|(_, header, frame)| format!("{header}\n{frame}\n")).collect(),
    };
    Ok(Output { text, bounds_pass: true })
}

pub fn code_build(args: &CodeBuildArgs, format: Format) -> Result<Output, Failure> {
    let scheme = scheme_of(args.alg).ok_or_else(|| usage("code build needs --alg alg1 or alg2"))?;
    let src = SymbolSource::load(&args.probs)?;
    let code = build_variable_code(scheme, &src)?;
    let m = args.m.unwrap_or(3 * code.max_k());
    if m <= code.max_k() {
        return Err(usage(format!("m = {m} must exceed the largest swarm {}", code.max_k())));
    }
    let report = bound_check(&code, &src, m, Exec::Parallel)?;
    let text = match format {
        Format::Json => pretty(&json!({
            "code": serde_json::to_value(&code).map_err(Error::from)?,
            "report": serde_json::to_value(&report).map_err(Error::from)?,
        })),
        _ => {
            let mut out = format!("{:>6} {:>10} {:>4} {:>6} {:>20} {:>8}\n", "symbol", "p", "k", "alg", "bits", "delay");
            for ((e, p), t) in code.entries.iter().zip(src.probs()).zip(&report.transmissions) {
                let alg = serde_json::to_value(e.algorithm).map_err(Error::from)?;
                let _ = writeln!(
                    out,
                    "{:>6} {:>10.6} {:>4} {:>6} {:>20} {:>8}",
                    e.symbol,
                    p,
                    e.k,
                    alg.as_str().unwrap_or("?"),
                    e.bits.as_deref().unwrap_or("-"),
                    t.delay
                );
            }
            out.push('\n');
            out.push_str(&table(&[
                ("H(S)", format!("{:.6}", entropy(&src))),
                ("K", format!("{:.6}", report.average_size)),
                ("D", format!("{:.3}", report.average_delay)),
                ("m", m.to_string()),
            ]));
            for c in &report.checks {
                let _ = writeln!(
                    out,
                    "[{}] {}: {:.3} vs {:.3}",
                    if c.pass { "pass" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.bound
                );
            }
            out
        }
    };
    Ok(Output {
        text,
        bounds_pass: report.all_pass(),
    })
}

fn parse_graph(args: &AnalyzeArgs) -> Result<GridGraph, Failure> {
    if let Some(path) = args.graph.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        return Ok(GridGraph::parse_explicit(&text)?);
    }
    let m = args.m.ok_or_else(|| usage(format!("--m is required for {}", args.graph)))?;
    Ok(match args.graph.as_str() {
        "strip" => GridGraph::strip(m)?,
        "eightgrid" => GridGraph::eight_grid(m, args.n)?,
        "fourgrid" => GridGraph::four_grid(m, args.n)?,
        other => return Err(usage(format!("unknown graph {other:?}"))),
    })
}

pub fn analyze(args: &AnalyzeArgs, format: Format) -> Result<Output, Failure> {
    let g = parse_graph(args)?;
    if args.k == 0 {
        return Err(usage("--k must be positive"));
    }
    let flow = max_mu_with(&g, args.k, args.guard, Exec::Parallel).map_err(Failure::Runtime)?;
    let strict = if g.is_grid() {
        let vertex = g.clone().with_membership(Membership::Vertex);
        Some(enumerate_initial_with(&vertex, args.k, args.guard, Exec::Parallel).map_err(Failure::Runtime)?.len())
    } else {
        None
    };
    let mut verdicts = vec![Verdict::new(
        "mu <= |C_I|",
        format!("{} vs {}", flow.mu, flow.initial_configurations),
        flow.mu <= flow.initial_configurations,
    )];
    match g.kind() {
        GraphKind::EightGrid { n, .. } => {
            let bound = counting_bound(args.k);
            verdicts.push(Verdict::new(
                "mu <= 2^(6(k-1))",
                format!("{} vs {bound}", flow.mu),
                flow.mu as f64 <= bound,
            ));
            if *n == 2 {
                let bound = strip_bound(args.k);
                verdicts.push(Verdict::new(
                    "mu < (1+sqrt2)^k",
                    format!("{} vs {bound:.4}", flow.mu),
                    (flow.mu as f64) < bound,
                ));
            }
        }
        GraphKind::FourGrid { .. } | GraphKind::Explicit { .. } => {}
    }
    let pass = verdicts.iter().all(|v| v.pass);
    let membership = match g.membership() {
        Membership::Vertex => "vertex",
        Membership::Column => "column",
    };
    let text = match format {
        Format::Json => pretty(&json!({
            "graph": args.graph,
            "k": args.k,
            "mu": flow.mu,
            "witness_paths": flow.paths.len(),
            "path_lengths": flow.path_lengths,
            "longest_path": flow.longest_path,
            "configurations": flow.configurations,
            "arcs": flow.arcs,
            "membership": membership,
            "initial_configurations": flow.initial_configurations,
            "initial_configurations_containing_sender": strict,
            "checks": verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
        })),
        _ => {
            let mut rows = vec![
                ("graph", args.graph.clone()),
                ("k", args.k.to_string()),
                ("mu", flow.mu.to_string()),
                ("witness paths", flow.paths.len().to_string()),
                ("path lengths (moves)", format!("{:?}", flow.path_lengths)),
                ("longest witness path", flow.longest_path.to_string()),
                ("configurations", flow.configurations.to_string()),
                ("arcs", flow.arcs.to_string()),
                ("|C_I|", format!("{} ({membership} rule)", flow.initial_configurations)),
            ];
            if let Some(n) = strict {
                rows.push(("|C_I| containing the sender", n.to_string()));
            }
            let mut out = table(&rows);
            verdict_lines(&mut out, &verdicts);
            out
        }
    };
    Ok(Output { text, bounds_pass: pass })
}

pub fn bounds(args: &BoundsArgs, format: Format) -> Result<Output, Failure> {
    let src = match &args.probs {
        Some(path) => SymbolSource::load(path)?,
        None => SymbolSource::uniform(args.alpha)?,
    };
    if args.k == 0 || args.m <= args.k {
        return Err(usage(format!("need 0 < k < m, got k = {} and m = {}", args.k, args.m)));
    }
    let report = bounds_report(args.k, args.m, &src);
    let text = match format {
        Format::Json => pretty(&serde_json::to_value(&report).map_err(Error::from)?),
        _ => report.to_table(),
    };
    Ok(Output {
        text,
        bounds_pass: report.chain_holds != Some(false),
    })
}
