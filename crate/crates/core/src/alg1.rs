//! Near-capacity shift by two columns (`ALG_1`).
//!
//! A canonical swarm of `k >= 15` robots has one robot per column. The left
//! `k - 14` columns carry the codeword (row = bit); the remaining 14 form the
//! controller:
//!
//! ```text
//! | code[0..k-14] | bf[0..4] | cp[0..5] | sign | cnt[0..4] |
//! ```
//!
//! A cycle first copies `code[0..5]` into `cp`, then collapses the two
//! leftmost columns into a wave made of two doubled columns, the tail and
//! the head. The tail rewrites the codeword two columns further right, one
//! bit at a time, taking each bit from `cp[0]`. Between two tail moves the
//! controller shifts `cp` left by one and loads the bit in front of the head
//! into `cp[4]`, counting its progress in the unary counter `cnt`; `sign`
//! keeps the head and tail in step. Once the last code bit is written both
//! doubled columns stream through the controller, leaving row-0 robots
//! behind, and the swarm is canonical again two columns to the right.
//!
//! Every decision is read off the configuration alone.

use crate::engine::{apply, MoveAction, SwarmAlgorithm};
use crate::error::{Error, Result};
use crate::grid::{Configuration, GridGraph, Vertex};
use crate::strip::{check_bits, columns_to_configuration, Strip};

const NAME: &str = "alg1";

/// Robots in the controller.
pub const CONTROLLER: usize = 14;
pub const BUFFER: usize = 4;
pub const COPY: usize = 5;
pub const COUNTER: usize = 4;

// Controller offsets counted back from the rightmost column.
const CP_FROM_RIGHT: i32 = 9;
const SIGN_FROM_RIGHT: i32 = 4;
const CNT_FROM_RIGHT: i32 = 3;

/// Number of codewords for a swarm of `k`, `None` below `k = 15`.
pub fn capacity(k: usize) -> Option<u128> {
    (k > CONTROLLER && k - CONTROLLER < 128).then(|| 1u128 << (k - CONTROLLER))
}

/// Canonical configuration carrying `bits`; the swarm has `bits.len() + 14` robots.
pub fn encode(bits: &[u8], offset: i32) -> Result<Configuration> {
    check_bits(bits)?;
    if bits.is_empty() {
        return Err(Error::Domain("alg1 needs at least one code bit (k >= 15)".into()));
    }
    if offset < 0 {
        return Err(Error::Domain("negative offset".into()));
    }
    let mut rows = bits.to_vec();
    rows.resize(bits.len() + CONTROLLER, 0);
    Ok(columns_to_configuration(offset, &rows))
}

/// What the configuration says the controller is doing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alg1Phase {
    /// One robot per column, controller all zero.
    Canonical,
    /// One robot per column, `cp` partly loaded with `code[0..5]`.
    CpLoading,
    /// A single doubled column relaying the two leftmost robots rightwards.
    WaveInit { column: i32 },
    WaveInCode {
        head: i32,
        tail: i32,
        sign: bool,
        cnt: u8,
    },
    /// Codeword finished; head and tail stream to the right end.
    WaveInController { head: i32, tail: i32 },
    /// Only the tail is left, walking to the right end.
    ResetTrail { column: i32 },
}

struct View {
    strip: Strip,
    code_len: usize,
    phase: Alg1Phase,
}

impl View {
    fn parse(c: &Configuration) -> Result<View> {
        let k = c.len();
        if k <= CONTROLLER {
            return Err(Error::classify(NAME, format!("swarm of {k} has no code bits")));
        }
        let code_len = k - CONTROLLER;
        let strip = Strip::parse(c, NAME)?;
        let a = strip.left;
        let z = strip.right();
        let doubled = strip.doubled();
        let width_ok = strip.width() + doubled.len() == k;
        if !width_ok {
            return Err(Error::classify(NAME, "robot count does not match the column pattern"));
        }
        let phase = match *doubled.as_slice() {
            [] => {
                let rows = |from: i32, len: usize| -> Result<Vec<u8>> {
                    (0..len as i32).map(|i| strip.bit(from + i, NAME)).collect()
                };
                let controller_start = z - CONTROLLER as i32 + 1;
                let buffer = rows(controller_start, BUFFER)?;
                let tail = rows(z - SIGN_FROM_RIGHT, 1 + COUNTER)?;
                if buffer.iter().chain(&tail).any(|&b| b != 0) {
                    return Err(Error::classify(NAME, "buffer, sign or counter set in a one-per-column state"));
                }
                if rows(z - CP_FROM_RIGHT, COPY)?.iter().all(|&b| b == 0) {
                    Alg1Phase::Canonical
                } else {
                    Alg1Phase::CpLoading
                }
            }
            [d] if d - a <= 3 => Alg1Phase::WaveInit { column: d },
            [d] if d - a >= code_len as i32 + 10 => Alg1Phase::ResetTrail { column: d },
            [tail, head] if head - tail <= 2 => {
                if tail - a < code_len as i32 {
                    let sign = strip.bit(z - SIGN_FROM_RIGHT, NAME)? == 1;
                    let cnt = read_counter(&strip, z)?;
                    if !sign && cnt != 0 {
                        return Err(Error::classify(NAME, "counter running while sign is clear"));
                    }
                    Alg1Phase::WaveInCode { head, tail, sign, cnt }
                } else {
                    Alg1Phase::WaveInController { head, tail }
                }
            }
            _ => {
                return Err(Error::classify(
                    NAME,
                    format!("doubled columns {doubled:?} fit no phase (left end {a})"),
                ))
            }
        };
        Ok(View { strip, code_len, phase })
    }

    fn cp(&self) -> Result<[u8; COPY]> {
        let start = self.strip.right() - CP_FROM_RIGHT;
        let mut cp = [0; COPY];
        for (i, slot) in cp.iter_mut().enumerate() {
            *slot = self.strip.bit(start + i as i32, NAME)?;
        }
        Ok(cp)
    }

    fn cp_column(&self, i: usize) -> i32 {
        self.strip.right() - CP_FROM_RIGHT + i as i32
    }

    fn counter_column(&self, i: usize) -> i32 {
        self.strip.right() - CNT_FROM_RIGHT + i as i32
    }

    fn sign_column(&self) -> i32 {
        self.strip.right() - SIGN_FROM_RIGHT
    }

    /// Vertical move of the single robot in column `x`.
    fn flip(&self, x: i32) -> Result<MoveAction> {
        let row = self.strip.bit(x, NAME)? as i32;
        Ok(MoveAction::Move {
            from: Vertex::new(x, row),
            to: Vertex::new(x, 1 - row),
        })
    }

    /// Moves one robot out of the doubled column `x`, keeping the robot on
    /// row `keep`. Past the right end the robot lands on row 0.
    fn advance(&self, x: i32, keep: u8) -> Result<MoveAction> {
        let from = Vertex::new(x, 1 - keep as i32);
        let to = if x < self.strip.right() {
            self.strip.empty_cell(x + 1, NAME)?
        } else {
            Vertex::new(x + 1, 0)
        };
        Ok(MoveAction::Move { from, to })
    }

    fn next(&self) -> Result<MoveAction> {
        let a = self.strip.left;
        match self.phase {
            Alg1Phase::Canonical | Alg1Phase::CpLoading => {
                let cp = self.cp()?;
                for (i, &held) in cp.iter().enumerate() {
                    if held != self.strip.bit(a + i as i32, NAME)? {
                        return self.flip(self.cp_column(i));
                    }
                }
                // cp holds code[0..5]: start relaying the leftmost robot
                Ok(MoveAction::Move {
                    from: Vertex::new(a, self.strip.bit(a, NAME)? as i32),
                    to: self.strip.empty_cell(a + 1, NAME)?,
                })
            }
            Alg1Phase::WaveInit { column } if column - a < 3 => self.advance(column, 0),
            Alg1Phase::WaveInit { .. } => Ok(MoveAction::Move {
                from: Vertex::new(a, self.strip.bit(a, NAME)? as i32),
                to: self.strip.empty_cell(a + 1, NAME)?,
            }),
            Alg1Phase::WaveInCode { head, tail, sign, cnt } => {
                let cp = self.cp()?;
                match (sign, head - tail, cnt) {
                    // write the next code bit at the tail
                    (false, 2, _) => self.advance(tail, cp[0]),
                    (false, _, _) => self.flip(self.sign_column()),
                    (true, 1, c @ 0..=3) => {
                        let c = c as usize;
                        if cp[c] != cp[c + 1] {
                            self.flip(self.cp_column(c))
                        } else {
                            self.flip(self.counter_column(c))
                        }
                    }
                    (true, 1, _) => {
                        let ahead = self.strip.bit(head + 1, NAME)?;
                        if cp[COPY - 1] != ahead {
                            self.flip(self.cp_column(COPY - 1))
                        } else {
                            self.advance(head, 0)
                        }
                    }
                    (true, _, 0) => self.flip(self.sign_column()),
                    (true, _, c) => self.flip(self.counter_column(c as usize - 1)),
                }
            }
            Alg1Phase::WaveInController { head, tail } => {
                if head - tail == 1 {
                    self.advance(head, 0)
                } else {
                    self.advance(tail, 0)
                }
            }
            Alg1Phase::ResetTrail { column } => self.advance(column, 0),
        }
    }
}

fn read_counter(strip: &Strip, z: i32) -> Result<u8> {
    let mut count = 0u8;
    let mut seen_zero = false;
    for i in 0..COUNTER as i32 {
        match strip.bit(z - CNT_FROM_RIGHT + i, NAME)? {
            1 if seen_zero => return Err(Error::classify(NAME, "counter is not unary")),
            1 => count += 1,
            _ => seen_zero = true,
        }
    }
    Ok(count)
}

pub fn classify(c: &Configuration) -> Result<Alg1Phase> {
    Ok(View::parse(c)?.phase)
}

pub fn next(c: &Configuration) -> Result<MoveAction> {
    View::parse(c)?.next()
}

/// Codeword of a canonical configuration.
pub fn read(c: &Configuration) -> Result<Vec<u8>> {
    let view = View::parse(c)?;
    if view.phase != Alg1Phase::Canonical {
        return Err(Error::Decode(format!("alg1 configuration is not canonical ({:?})", view.phase)));
    }
    (0..view.code_len as i32)
        .map(|i| view.strip.bit(view.strip.left + i, NAME))
        .collect()
}

/// Recovers the codeword from a terminal configuration by letting the swarm
/// finish its cycle on a grid extended past the receiver.
pub fn decode_terminal(c: &Configuration, k: usize) -> Result<Vec<u8>> {
    if c.len() != k {
        return Err(Error::Decode(format!("expected {k} robots, found {}", c.len())));
    }
    let right = c.max_x().unwrap_or(0).max(0) as usize;
    let extended = GridGraph::strip(right + 2 * k + 4)?;
    let budget = 40 * k;
    let mut current = c.clone();
    for _ in 0..=budget {
        if classify(&current)? == Alg1Phase::Canonical {
            return read(&current);
        }
        current = apply(&extended, &current, next(&current)?)?;
    }
    Err(Error::Decode(format!("no canonical configuration within {budget} moves")))
}

/// Whether a configuration's pattern satisfies the structural phase
/// invariants: at most two doubled columns, `head - tail` in `{1, 2}`,
/// contiguous columns.
pub fn phase_invariants_hold(c: &Configuration) -> bool {
    let Ok(strip) = Strip::parse(c, NAME) else {
        return false;
    };
    match strip.doubled().as_slice() {
        [] | [_] => true,
        [tail, head] => matches!(head - tail, 1 | 2),
        _ => false,
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct ShiftByTwo;

impl SwarmAlgorithm for ShiftByTwo {
    fn name(&self) -> &str {
        NAME
    }

    fn next(&self, c: &Configuration) -> Result<MoveAction> {
        next(c)
    }
}

/// Row of the robot in a single-robot column, for tests and tools.
pub fn column_row(c: &Configuration, x: i32) -> Option<u8> {
    let ys: Vec<i32> = c.cells().iter().filter(|v| v.x == x).map(|v| v.y).collect();
    match ys.as_slice() {
        [0] => Some(0),
        [1] => Some(1),
        _ => None,
    }
}
