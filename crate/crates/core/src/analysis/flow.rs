//! Transition diagram and node-disjoint maxflow (Dinic on a split graph).

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::enumerate::{enumerate_all_with, DEFAULT_GUARD};
use crate::engine::check_move;
use crate::engine::MoveAction;
use crate::error::Result;
use crate::exec::Exec;
use crate::grid::{Configuration, GridGraph};

/// Connected `k`-configurations of a finite graph and the legal moves
/// between them. The virtual source and sink are implicit: they attach to
/// the nodes flagged `initial` and `terminal`.
#[derive(Debug, Clone)]
pub struct TransitionDiagram {
    pub nodes: Vec<Configuration>,
    pub arcs: Vec<Vec<usize>>,
    pub initial: Vec<bool>,
    pub terminal: Vec<bool>,
}

impl TransitionDiagram {
    pub fn build(g: &GridGraph, k: usize, guard: usize, exec: Exec) -> Result<Self> {
        let nodes = enumerate_all_with(g, k, guard, exec)?;
        let index: HashMap<&Configuration, usize> = nodes.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let arcs = exec.map(&nodes, |c| {
            let mut out = Vec::new();
            for &from in c.cells() {
                for to in g.neighbors_unchecked(from) {
                    let action = MoveAction::Move { from, to };
                    if check_move(g, c, action).is_ok() {
                        let next = crate::engine::apply(g, c, action).expect("checked move");
                        out.push(index[&next]);
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        });
        let initial = nodes.iter().map(|c| g.is_initial(c)).collect();
        let terminal = nodes.iter().map(|c| g.is_terminal(c)).collect();
        Ok(TransitionDiagram {
            nodes,
            arcs,
            initial,
            terminal,
        })
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn initial_count(&self) -> usize {
        self.initial.iter().filter(|&&b| b).count()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowResult {
    pub mu: usize,
    /// Witness behaviours, each from an initial to its first terminal
    /// configuration, pairwise configuration-disjoint.
    pub paths: Vec<Vec<Configuration>>,
    /// Moves along each witness; the virtual arcs are not counted.
    pub path_lengths: Vec<usize>,
    /// Longest witness, an upper indicator for the delay, not the exact delay.
    pub longest_path: usize,
    pub configurations: usize,
    pub arcs: usize,
    pub initial_configurations: usize,
}

struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            cursor: vec![0; n],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: u32) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    /// One augmenting unit along the level graph, iteratively.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut stack: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                for &e in &stack {
                    self.cap[e] -= 1;
                    self.cap[e ^ 1] += 1;
                }
                return true;
            }
            let mut advanced = false;
            while self.cursor[u] < self.head[u].len() {
                let e = self.head[u][self.cursor[u]];
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                    stack.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                self.cursor[u] += 1;
            }
            if !advanced {
                // dead end: retreat
                self.level[u] = -1;
                match stack.pop() {
                    Some(e) => {
                        u = self.to[e ^ 1];
                        self.cursor[u] += 1;
                    }
                    None => return false,
                }
            }
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            while self.augment(s, t) {
                flow += 1;
            }
        }
        flow
    }
}

/// `mu` of the diagram with witness paths.
pub fn diagram_flow(d: &TransitionDiagram) -> FlowResult {
    let n = d.nodes.len();
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = Dinic::new(2 * n + 2);
    for i in 0..n {
        net.add_edge(2 * i, 2 * i + 1, 1);
        if d.initial[i] {
            net.add_edge(source, 2 * i, 1);
        }
        if d.terminal[i] {
            net.add_edge(2 * i + 1, sink, 1);
        }
        for &j in &d.arcs[i] {
            net.add_edge(2 * i + 1, 2 * j, 1);
        }
    }
    let mu = net.max_flow(source, sink);

    // each node carries at most one unit, so following saturated edges from
    // the source decomposes the flow into simple paths
    let saturated = |net: &Dinic, u: usize| -> Vec<usize> {
        net.head[u]
            .iter()
            .copied()
            .filter(|&e| e % 2 == 0 && net.cap[e] == 0)
            .map(|e| net.to[e])
            .collect()
    };
    let mut paths = Vec::with_capacity(mu);
    for start in saturated(&net, source) {
        let mut nodes = vec![start / 2];
        let mut u = start + 1;
        loop {
            let next = saturated(&net, u);
            let Some(&v) = next.first() else { break };
            if v == sink {
                break;
            }
            nodes.push(v / 2);
            u = v + 1;
        }
        let last_terminal = nodes.iter().position(|&i| d.terminal[i]).expect("flow ends at a terminal");
        let first_initial = nodes[..=last_terminal]
            .iter()
            .rposition(|&i| d.initial[i])
            .expect("flow starts at an initial");
        paths.push(
            nodes[first_initial..=last_terminal]
                .iter()
                .map(|&i| d.nodes[i].clone())
                .collect::<Vec<_>>(),
        );
    }
    let path_lengths: Vec<usize> = paths.iter().map(|p| p.len() - 1).collect();
    FlowResult {
        mu,
        longest_path: path_lengths.iter().copied().max().unwrap_or(0),
        path_lengths,
        paths,
        configurations: n,
        arcs: d.arc_count(),
        initial_configurations: d.initial_count(),
    }
}

pub fn max_mu(g: &GridGraph, k: usize) -> Result<FlowResult> {
    max_mu_with(g, k, DEFAULT_GUARD, Exec::default())
}

pub fn max_mu_with(g: &GridGraph, k: usize, guard: usize, exec: Exec) -> Result<FlowResult> {
    Ok(diagram_flow(&TransitionDiagram::build(g, k, guard, exec)?))
}
