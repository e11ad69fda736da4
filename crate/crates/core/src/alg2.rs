//! Delay-optimal shift by one column (`ALG_2`).
//!
//! A swarm of `k` robots carries `l = k / 2` bits twice: columns `0..l` hold
//! the codeword, columns `l..2l` a copy, and for odd `k` one more robot sits
//! on row 0. A cycle sends a single doubled column (the wave) from the left
//! end to the right end; each column it leaves behind is rewritten from the
//! copy (before the midpoint) or from the finished codeword (after it).

use crate::engine::{MoveAction, SwarmAlgorithm};
use crate::error::{Error, Result};
use crate::grid::{Configuration, Vertex};
use crate::strip::{check_bits, columns_to_configuration, Strip};

const NAME: &str = "alg2";

/// Number of codewords for a swarm of `k`, `None` below `k = 4`.
pub fn capacity(k: usize) -> Option<u128> {
    (k >= 4 && k / 2 < 128).then(|| 1u128 << (k / 2))
}

/// Canonical configuration carrying `bits` twice (plus a row-0 robot when `k` is odd).
pub fn encode(bits: &[u8], k: usize, offset: i32) -> Result<Configuration> {
    check_bits(bits)?;
    if k < 4 {
        return Err(Error::Domain(format!("alg2 needs k >= 4, got {k}")));
    }
    if bits.len() != k / 2 {
        return Err(Error::Domain(format!(
            "alg2 with k = {k} carries {} bits, got {}",
            k / 2,
            bits.len()
        )));
    }
    if offset < 0 {
        return Err(Error::Domain("negative offset".into()));
    }
    Ok(columns_to_configuration(offset, &doubled_word(bits, k)))
}

fn doubled_word(bits: &[u8], k: usize) -> Vec<u8> {
    let mut word = Vec::with_capacity(k);
    word.extend_from_slice(bits);
    word.extend_from_slice(bits);
    if k % 2 == 1 {
        word.push(0);
    }
    word
}

/// Position of the wave, if the configuration is mid-cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alg2Wave {
    pub column: i32,
    /// 0-based index of the wave column within the swarm.
    pub relative: usize,
}

struct View {
    strip: Strip,
    k: usize,
    half: usize,
    wave: Option<Alg2Wave>,
}

impl View {
    fn parse(c: &Configuration) -> Result<View> {
        let k = c.len();
        if k < 4 {
            return Err(Error::classify(NAME, format!("swarm of {k} is too small")));
        }
        let strip = Strip::parse(c, NAME)?;
        let doubled = strip.doubled();
        let wave = match doubled.as_slice() {
            [] if strip.width() == k => None,
            [d] if strip.width() == k - 1 => Some(Alg2Wave {
                column: *d,
                relative: (d - strip.left) as usize,
            }),
            _ => {
                return Err(Error::classify(
                    NAME,
                    format!("{} doubled columns over width {}", doubled.len(), strip.width()),
                ))
            }
        };
        Ok(View {
            strip,
            k,
            half: k / 2,
            wave,
        })
    }

    /// Bit `j` of the doubled word while the wave sits at `w`: finished
    /// columns lie left of the wave, untouched ones start two past it.
    fn word_bit(&self, j: usize, w: usize) -> Result<u8> {
        let a = self.strip.left;
        if j < w {
            return self.strip.bit(a + j as i32, NAME);
        }
        if j == 2 * self.half {
            return Ok(0);
        }
        if j >= w + 2 {
            // untouched column: old index j sits at a - 1 + j
            return self.strip.bit(a - 1 + j as i32, NAME);
        }
        // lost in the wave; recover through the other copy
        let twin = if j < self.half { j + self.half } else { j - self.half };
        self.word_bit(twin, w)
    }
}

pub fn next(c: &Configuration) -> Result<MoveAction> {
    let view = View::parse(c)?;
    let strip = &view.strip;
    let a = strip.left;
    let Some(wave) = view.wave else {
        // canonical: the leftmost robot starts the wave
        let from = Vertex::new(a, strip.bit(a, NAME)? as i32);
        return Ok(MoveAction::Move {
            from,
            to: strip.empty_cell(a + 1, NAME)?,
        });
    };
    let keep = view.word_bit(wave.relative, wave.relative)?;
    let from = Vertex::new(wave.column, 1 - keep as i32);
    let to = if wave.column < strip.right() {
        strip.empty_cell(wave.column + 1, NAME)?
    } else {
        let last = view.word_bit(view.k - 1, wave.relative)?;
        Vertex::new(wave.column + 1, last as i32)
    };
    Ok(MoveAction::Move { from, to })
}

pub fn wave(c: &Configuration) -> Result<Option<Alg2Wave>> {
    Ok(View::parse(c)?.wave)
}

/// Codeword of a canonical configuration, after checking the copy.
pub fn read(c: &Configuration) -> Result<Vec<u8>> {
    let view = View::parse(c)?;
    if view.wave.is_some() {
        return Err(Error::Decode("alg2 configuration is mid-cycle".into()));
    }
    let a = view.strip.left;
    let word = (0..view.k)
        .map(|j| view.strip.bit(a + j as i32, NAME))
        .collect::<Result<Vec<u8>>>()?;
    let (code, rest) = word.split_at(view.half);
    if &rest[..view.half] != code {
        return Err(Error::Decode(format!(
            "copy {:?} differs from codeword {:?}",
            &rest[..view.half],
            code
        )));
    }
    if view.k % 2 == 1 && rest[view.half] != 0 {
        return Err(Error::Decode("odd tail robot is not on row 0".into()));
    }
    Ok(code.to_vec())
}

/// Recovers the codeword from a terminal configuration of size `k`.
pub fn decode_terminal(c: &Configuration, k: usize) -> Result<Vec<u8>> {
    if c.len() != k {
        return Err(Error::Decode(format!("expected {k} robots, found {}", c.len())));
    }
    let view = View::parse(c)?;
    match view.wave {
        None => read(c),
        Some(w) => (0..view.half).map(|j| view.word_bit(j, w.relative)).collect(),
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct ShiftByOne;

impl SwarmAlgorithm for ShiftByOne {
    fn name(&self) -> &str {
        NAME
    }

    fn next(&self, c: &Configuration) -> Result<MoveAction> {
        next(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{apply, run};
    use crate::grid::GridGraph;
    use crate::strip::parse_bits;

    fn rows(c: &Configuration) -> Vec<i32> {
        c.cells().iter().map(|v| v.y).collect()
    }

    #[test]
    fn encode_examples() {
        let c = encode(&parse_bits("010").unwrap(), 6, 0).unwrap();
        assert_eq!(rows(&c), vec![0, 1, 0, 0, 1, 0]);
        let odd = encode(&parse_bits("010").unwrap(), 7, 0).unwrap();
        assert!(odd.contains(Vertex::new(6, 0)));
        assert_eq!(odd.len(), 7);
        let zero = encode(&[0, 0], 4, 0).unwrap();
        assert!(zero.cells().iter().all(|v| v.y == 0));
    }

    #[test]
    fn encode_rejects_bad_sizes() {
        assert!(encode(&[0], 3, 0).is_err());
        assert!(encode(&[0, 1], 6, 0).is_err());
    }

    #[test]
    fn first_move_enters_empty_cell_of_next_column() {
        let c = encode(&parse_bits("010").unwrap(), 6, 0).unwrap();
        assert_eq!(next(&c).unwrap(), MoveAction::step((0, 0), (1, 0)));
    }

    #[test]
    fn wave_leaves_copy_bit_behind() {
        // B = 010: after the first move the wave sits at relative column 0
        // and must leave b_1 = 0 behind, reading it from the copy.
        let g = GridGraph::strip(20).unwrap();
        let c0 = encode(&parse_bits("010").unwrap(), 6, 0).unwrap();
        let c1 = apply(&g, &c0, next(&c0).unwrap()).unwrap();
        assert_eq!(wave(&c1).unwrap().unwrap().relative, 0);
        let MoveAction::Move { from, .. } = next(&c1).unwrap() else { panic!() };
        assert_eq!(from.y, 1);
        // one step later the bit to fix is b_2 = 1: the row-0 robot advances
        let c2 = apply(&g, &c1, next(&c1).unwrap()).unwrap();
        let MoveAction::Move { from, .. } = next(&c2).unwrap() else { panic!() };
        assert_eq!(from.y, 0);
    }

    #[test]
    fn one_cycle_is_k_moves() {
        let g = GridGraph::strip(30).unwrap();
        for k in 4..=9 {
            for code in 0..(1u64 << (k / 2)) {
                let bits = crate::strip::index_to_bits(code, k / 2);
                let mut c = encode(&bits, k, 3).unwrap();
                for _ in 0..k {
                    c = apply(&g, &c, next(&c).unwrap()).unwrap();
                }
                assert_eq!(c, encode(&bits, k, 4).unwrap(), "k={k} bits={bits:?}");
            }
        }
    }

    #[test]
    fn zero_codeword_leaves_row_zero() {
        let g = GridGraph::strip(30).unwrap();
        let mut c = encode(&[0, 0, 0], 6, 0).unwrap();
        for _ in 0..6 {
            c = apply(&g, &c, next(&c).unwrap()).unwrap();
            let high: Vec<_> = c.cells().iter().filter(|v| v.y == 1).collect();
            assert!(high.len() <= 1);
            assert!(high.iter().all(|v| c.contains(Vertex::new(v.x, 0))));
        }
    }

    #[test]
    fn delay_matches_closed_form() {
        let g = GridGraph::strip(10).unwrap();
        let c0 = encode(&[0, 1], 4, 0).unwrap();
        let trace = run(&g, &ShiftByOne, &c0, 1000).unwrap();
        assert_eq!(trace.delay, Some(4 * (10 - 4)));
    }

    #[test]
    fn read_and_decode() {
        let bits = parse_bits("010").unwrap();
        let c = encode(&bits, 6, 0).unwrap();
        assert_eq!(read(&c).unwrap(), bits);
        assert_eq!(read(&encode(&[0, 0, 0, 0], 9, 2).unwrap()).unwrap(), vec![0; 4]);
        let broken = Configuration::from_xy(&[(0, 0), (1, 1), (2, 1), (3, 0)]).unwrap();
        assert!(matches!(read(&broken), Err(Error::Decode(_))));
        // decode works mid-cycle too
        let g = GridGraph::strip(20).unwrap();
        let mut mid = c.clone();
        for _ in 0..3 {
            mid = apply(&g, &mid, next(&mid).unwrap()).unwrap();
        }
        assert_eq!(decode_terminal(&mid, 6).unwrap(), bits);
        assert!(decode_terminal(&mid, 7).is_err());
    }

    #[test]
    fn unrecognised_shapes() {
        let two_waves = Configuration::from_xy(&[(0, 0), (0, 1), (1, 0), (2, 0), (2, 1), (3, 0)]).unwrap();
        assert!(matches!(next(&two_waves), Err(Error::Classification { .. })));
        let small = Configuration::from_xy(&[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(next(&small).is_err());
    }
}
