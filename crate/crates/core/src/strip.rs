//! Column view of a configuration on the two-row strip `G_8(m, 2)`.
//!
//! The shift algorithms read their state off the column occupancy pattern,
//! so this is shared by all of them.

use crate::error::{Error, Result};
use crate::grid::{Configuration, Vertex};

/// Row 0 occupied.
pub(crate) const LOW: u8 = 0b01;
/// Row 1 occupied.
pub(crate) const HIGH: u8 = 0b10;
pub(crate) const BOTH: u8 = LOW | HIGH;

#[derive(Debug, Clone)]
pub(crate) struct Strip {
    pub left: i32,
    masks: Vec<u8>,
}

impl Strip {
    /// Fails unless every robot sits on row 0 or 1 and the occupied columns
    /// form one contiguous interval.
    pub fn parse(c: &Configuration, algorithm: &'static str) -> Result<Strip> {
        let (Some(left), Some(right)) = (c.min_x(), c.max_x()) else {
            return Err(Error::classify(algorithm, "empty configuration"));
        };
        let mut masks = vec![0u8; (right - left + 1) as usize];
        for v in c.cells() {
            let bit = match v.y {
                0 => LOW,
                1 => HIGH,
                _ => return Err(Error::classify(algorithm, format!("robot {v} outside rows 0..1"))),
            };
            masks[(v.x - left) as usize] |= bit;
        }
        if let Some(gap) = masks.iter().position(|&m| m == 0) {
            return Err(Error::classify(
                algorithm,
                format!("column {} is empty inside the swarm", left + gap as i32),
            ));
        }
        Ok(Strip { left, masks })
    }

    pub fn right(&self) -> i32 {
        self.left + self.masks.len() as i32 - 1
    }

    pub fn width(&self) -> usize {
        self.masks.len()
    }

    pub fn mask(&self, x: i32) -> u8 {
        if x < self.left || x > self.right() {
            0
        } else {
            self.masks[(x - self.left) as usize]
        }
    }

    pub fn doubled(&self) -> Vec<i32> {
        (self.left..=self.right()).filter(|&x| self.mask(x) == BOTH).collect()
    }

    /// Row of the single robot in column `x`, if the column holds exactly one.
    pub fn row(&self, x: i32) -> Option<u8> {
        match self.mask(x) {
            LOW => Some(0),
            HIGH => Some(1),
            _ => None,
        }
    }

    pub fn bit(&self, x: i32, algorithm: &'static str) -> Result<u8> {
        self.row(x)
            .ok_or_else(|| Error::classify(algorithm, format!("column {x} does not hold a single robot")))
    }

    /// Vertex of the empty cell in column `x`, which must hold one robot.
    pub fn empty_cell(&self, x: i32, algorithm: &'static str) -> Result<Vertex> {
        let row = self.bit(x, algorithm)?;
        Ok(Vertex::new(x, 1 - row as i32))
    }
}

/// Places one robot per column: column `offset + i` gets row `rows[i]`.
pub(crate) fn columns_to_configuration(offset: i32, rows: &[u8]) -> Configuration {
    Configuration::from_sorted(
        rows.iter()
            .enumerate()
            .map(|(i, &r)| Vertex::new(offset + i as i32, r as i32))
            .collect(),
    )
}

/// Parses a `0`/`1` string.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse(format!("not a bit: {other:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// `value` as `width` bits, most significant first.
pub fn index_to_bits(value: u64, width: usize) -> Vec<u8> {
    (0..width).rev().map(|i| ((value >> i) & 1) as u8).collect()
}

pub fn bits_to_index(bits: &[u8]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
}

pub(crate) fn check_bits(bits: &[u8]) -> Result<()> {
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::Domain("bits must be 0 or 1".into()));
    }
    Ok(())
}
