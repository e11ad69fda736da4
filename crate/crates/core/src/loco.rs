//! Caterpillar locomotion for small swarms.
//!
//! Each size has exactly one configuration: `k` robots side by side on row 0.
//! The leftmost robot lifts onto row 1, walks over the others and drops in
//! front of them, shifting the swarm one column per `k` moves.

use crate::engine::{MoveAction, SwarmAlgorithm};
use crate::error::{Error, Result};
use crate::grid::{Configuration, Vertex};
use crate::strip::{columns_to_configuration, Strip};

const NAME: &str = "loco";

pub fn config(k: usize, offset: i32) -> Result<Configuration> {
    if k == 0 {
        return Err(Error::Domain("locomotion needs at least one robot".into()));
    }
    if offset < 0 {
        return Err(Error::Domain("negative offset".into()));
    }
    Ok(columns_to_configuration(offset, &vec![0; k]))
}

pub fn next(c: &Configuration) -> Result<MoveAction> {
    let strip = Strip::parse(c, NAME)?;
    let k = c.len();
    let (a, z) = (strip.left, strip.right());
    let walkers: Vec<Vertex> = c.cells().iter().copied().filter(|v| v.y == 1).collect();
    match walkers.as_slice() {
        [] if strip.width() == k => {
            if k == 1 {
                Ok(MoveAction::step((a, 0), (a + 1, 0)))
            } else {
                Ok(MoveAction::step((a, 0), (a + 1, 1)))
            }
        }
        [w] if k >= 2 && strip.width() == k - 1 && strip.row(w.x).is_none() => {
            if w.x < z {
                Ok(MoveAction::step((w.x, 1), (w.x + 1, 1)))
            } else {
                Ok(MoveAction::step((z, 1), (z + 1, 0)))
            }
        }
        _ => Err(Error::classify(NAME, format!("{c} is not a caterpillar shape"))),
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Caterpillar;

impl SwarmAlgorithm for Caterpillar {
    fn name(&self) -> &str {
        NAME
    }

    fn next(&self, c: &Configuration) -> Result<MoveAction> {
        next(c)
    }
}
