//! Deterministic simulation kernel.
//!
//! One robot moves per time step, chosen by a [`SwarmAlgorithm`] that sees
//! only the current configuration. Every move is validated against the host
//! graph before it is applied.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, MoveViolation, Result};
use crate::grid::{Configuration, GridGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveAction {
    Stay,
    Move { from: Vertex, to: Vertex },
}

impl MoveAction {
    pub fn step(from: (i32, i32), to: (i32, i32)) -> Self {
        MoveAction::Move {
            from: Vertex::new(from.0, from.1),
            to: Vertex::new(to.0, to.1),
        }
    }

    pub fn translated(self, dx: i32) -> Self {
        match self {
            MoveAction::Stay => MoveAction::Stay,
            MoveAction::Move { from, to } => MoveAction::Move {
                from: from.shifted(dx),
                to: to.shifted(dx),
            },
        }
    }
}

/// A deterministic oblivious algorithm: the next move is a pure function of
/// the configuration.
pub trait SwarmAlgorithm: Sync {
    fn name(&self) -> &str;

    fn next(&self, c: &Configuration) -> Result<MoveAction>;

    /// Shipped algorithms never stay mid-cycle; a `Stay` from one is flagged.
    fn warns_on_stay(&self) -> bool {
        true
    }
}

impl<A: SwarmAlgorithm + ?Sized> SwarmAlgorithm for &A {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn next(&self, c: &Configuration) -> Result<MoveAction> {
        (**self).next(c)
    }

    fn warns_on_stay(&self) -> bool {
        (**self).warns_on_stay()
    }
}

/// Always stays put.
#[derive(Debug, Default, Clone, Copy)]
pub struct Idle;

impl SwarmAlgorithm for Idle {
    fn name(&self) -> &str {
        "idle"
    }

    fn next(&self, _: &Configuration) -> Result<MoveAction> {
        Ok(MoveAction::Stay)
    }

    fn warns_on_stay(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorTrace {
    /// `C_0, C_1, ...` up to the first terminal configuration or `max_steps`.
    pub steps: Vec<Configuration>,
    /// `moves[t]` turns `steps[t]` into `steps[t + 1]`.
    pub moves: Vec<MoveAction>,
    /// Index of the first terminal configuration, `None` for "never".
    pub delay: Option<usize>,
    pub move_count: usize,
    pub warnings: Vec<String>,
}

impl BehaviorTrace {
    pub fn terminal(&self) -> Option<&Configuration> {
        self.delay.map(|d| &self.steps[d])
    }
}

pub fn default_max_steps(k: usize, m: usize) -> usize {
    4 * k * m
}

/// Checks that `a` is a legal move for `c` on `g`.
pub fn check_move(g: &GridGraph, c: &Configuration, a: MoveAction) -> Result<(), MoveViolation> {
    let MoveAction::Move { from, to } = a else {
        return Ok(());
    };
    if !c.contains(from) {
        return Err(MoveViolation::SourceEmpty(from));
    }
    if c.contains(to) {
        return Err(MoveViolation::DestinationOccupied(to));
    }
    if !g.is_adjacent(from, to) {
        return Err(MoveViolation::NotAnEdge(from, to));
    }
    if !g.connected_unchecked(c.moved(from, to).cells()) {
        return Err(MoveViolation::Disconnected);
    }
    Ok(())
}

/// `C(u;v)` for a legal move, `c` itself for `Stay`.
pub fn apply(g: &GridGraph, c: &Configuration, a: MoveAction) -> Result<Configuration> {
    check_move(g, c, a)?;
    Ok(match a {
        MoveAction::Stay => c.clone(),
        MoveAction::Move { from, to } => c.moved(from, to),
    })
}

/// Simulates `alg` from `c0` until the first terminal configuration or
/// `max_steps` moves.
pub fn run<A: SwarmAlgorithm + ?Sized>(
    g: &GridGraph,
    alg: &A,
    c0: &Configuration,
    max_steps: usize,
) -> Result<BehaviorTrace> {
    if max_steps == 0 {
        return Err(Error::Domain("max_steps must be positive".into()));
    }
    if c0.is_empty() {
        return Err(Error::Domain("empty swarm".into()));
    }
    g.validate(c0)?;
    if !g.is_initial(c0) {
        return Err(Error::Domain(format!("{c0} does not touch the sender {}", g.sender())));
    }

    let mut trace = BehaviorTrace {
        steps: vec![c0.clone()],
        moves: Vec::new(),
        delay: None,
        move_count: 0,
        warnings: Vec::new(),
    };
    let mut current = c0.clone();
    for t in 0.. {
        if g.is_terminal(&current) {
            trace.delay = Some(t);
            break;
        }
        if t == max_steps {
            break;
        }
        let next = alg
            .next(&current)
            .and_then(|a| apply(g, &current, a).map(|c| (a, c)));
        let (action, next) = match next {
            Ok(ok) => ok,
            Err(e) => {
                return Err(Error::Aborted {
                    step: t,
                    source: Box::new(e),
                    prefix: trace.steps,
                })
            }
        };
        match action {
            MoveAction::Stay if alg.warns_on_stay() => {
                let msg = format!("{} stayed at step {t}", alg.name());
                log::warn!("{msg}");
                trace.warnings.push(msg);
            }
            MoveAction::Stay => {}
            MoveAction::Move { .. } => trace.move_count += 1,
        }
        trace.moves.push(action);
        trace.steps.push(next.clone());
        current = next;
    }
    Ok(trace)
}

/// Whether `alg` commutes with translating `c` by `dx` columns.
///
/// Both `c` and its translate must avoid the first and last columns of `g`.
pub fn check_equivariance<A: SwarmAlgorithm + ?Sized>(
    g: &GridGraph,
    alg: &A,
    c: &Configuration,
    dx: i32,
) -> Result<bool> {
    let m = g
        .columns()
        .ok_or_else(|| Error::Domain("translation needs a grid host".into()))? as i32;
    let shifted = c.translated(dx);
    for conf in [c, &shifted] {
        let inside = conf.cells().iter().all(|v| g.contains(*v) && v.x >= 1 && v.x <= m - 2);
        if !inside {
            return Err(Error::Domain(format!("{conf} touches the boundary of the host")));
        }
    }
    let base = alg.next(c)?;
    Ok(match alg.next(&shifted) {
        Ok(moved) => moved == base.translated(dx),
        Err(_) => false,
    })
}

/// Re-checks every step of a trace with a union-find connectivity test,
/// independent of the checks [`apply`] performs.
pub fn validate_trace(g: &GridGraph, trace: &BehaviorTrace) -> std::result::Result<(), String> {
    let k = trace.steps.first().map_or(0, Configuration::len);
    for (t, c) in trace.steps.iter().enumerate() {
        if c.len() != k {
            return Err(format!("step {t}: swarm size changed to {}", c.len()));
        }
        if !union_find_connected(g, c.cells()) {
            return Err(format!("step {t}: configuration {c} disconnected"));
        }
    }
    for (t, pair) in trace.steps.windows(2).enumerate() {
        let (before, after) = (&pair[0], &pair[1]);
        let left: Vec<_> = before.cells().iter().filter(|v| !after.contains(**v)).collect();
        let arrived: Vec<_> = after.cells().iter().filter(|v| !before.contains(**v)).collect();
        match (left.as_slice(), arrived.as_slice()) {
            ([], []) => {}
            ([u], [v]) if g.is_adjacent(**u, **v) => {}
            _ => return Err(format!("step {t}: {before} -> {after} is not a single edge move")),
        }
    }
    Ok(())
}

fn union_find_connected(g: &GridGraph, cells: &[Vertex]) -> bool {
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if g.is_adjacent(cells[i], cells[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let roots = (0..cells.len()).filter(|&i| find(&mut parent, i) == i).count();
    roots <= 1
}

/// One line of the JSON-lines trace format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: usize,
    pub cells: Vec<[i32; 2]>,
    /// The move applied at step `t`, `null` for a stay or the last step.
    #[serde(rename = "move")]
    pub mv: Option<[[i32; 2]; 2]>,
}

impl BehaviorTrace {
    pub fn records(&self) -> impl Iterator<Item = TraceRecord> + '_ {
        self.steps.iter().enumerate().map(|(t, c)| TraceRecord {
            t,
            cells: c.cells().iter().map(|v| [v.x, v.y]).collect(),
            mv: match self.moves.get(t) {
                Some(MoveAction::Move { from, to }) => Some([[from.x, from.y], [to.x, to.y]]),
                _ => None,
            },
        })
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for record in self.records() {
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<TraceRecord>> {
    let mut records = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line)?);
    }
    Ok(records)
}

/// `n` text rows, top row (`y = n-1`) first; `o` marks a robot.
pub fn render_ascii(cells: &[Vertex], m: usize, n: usize) -> String {
    let mut rows = vec![vec![b'.'; m]; n];
    for v in cells {
        if v.x >= 0 && v.y >= 0 && (v.x as usize) < m && (v.y as usize) < n {
            rows[v.y as usize][v.x as usize] = b'o';
        }
    }
    let mut out = String::with_capacity((m + 1) * n);
    for row in rows.iter().rev() {
        out.push_str(std::str::from_utf8(row).expect("ascii"));
        out.push('\n');
    }
    out
}
