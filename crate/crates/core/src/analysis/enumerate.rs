//! Connected configurations by frontier growth.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Configuration, GridGraph, Vertex};

/// Abort threshold on the number of configurations held at once.
pub const DEFAULT_GUARD: usize = 10_000_000;

/// All connected `k`-sets containing at least one of `seeds`, sorted.
///
/// Every connected set containing a seed `s` is reached by adding one
/// adjacent cell at a time starting from `{s}`.
fn grow(g: &GridGraph, seeds: &[Vertex], k: usize, guard: usize, exec: Exec) -> Result<Vec<Configuration>> {
    if k == 0 {
        return Err(Error::Domain("swarm size must be positive".into()));
    }
    let mut level: Vec<Configuration> = seeds
        .iter()
        .map(|&s| Configuration::new([s]))
        .collect::<Result<_>>()?;
    for _ in 1..k {
        let children = exec.map(&level, |c| {
            let mut out = Vec::new();
            for v in c.cells() {
                for w in g.neighbors_unchecked(*v) {
                    if !c.contains(w) {
                        let mut cells = c.cells().to_vec();
                        cells.push(w);
                        out.push(Configuration::new(cells).expect("fresh cell"));
                    }
                }
            }
            out
        });
        let mut next = HashSet::new();
        for batch in children {
            next.extend(batch);
            if next.len() > guard {
                return Err(Error::Explosion(next.len(), guard));
            }
        }
        level = next.into_iter().collect();
    }
    level.sort_unstable();
    Ok(level)
}

/// Connected `k`-configurations that count as initial on `g`.
pub fn enumerate_initial(g: &GridGraph, k: usize) -> Result<Vec<Configuration>> {
    enumerate_initial_with(g, k, DEFAULT_GUARD, Exec::default())
}

pub fn enumerate_initial_with(g: &GridGraph, k: usize, guard: usize, exec: Exec) -> Result<Vec<Configuration>> {
    let seeds: Vec<Vertex> = g
        .vertices()
        .into_iter()
        .filter(|v| g.is_initial(&Configuration::new([*v]).expect("single cell")))
        .collect();
    grow(g, &seeds, k, guard, exec)
}

/// Every connected `k`-configuration of `g`.
pub fn enumerate_all(g: &GridGraph, k: usize) -> Result<Vec<Configuration>> {
    enumerate_all_with(g, k, DEFAULT_GUARD, Exec::default())
}

pub fn enumerate_all_with(g: &GridGraph, k: usize, guard: usize, exec: Exec) -> Result<Vec<Configuration>> {
    grow(g, &g.vertices(), k, guard, exec)
}
