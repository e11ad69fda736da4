//! Codes over swarm configurations: fixed-size codes from a single shift
//! algorithm, variable-size tower codes, and end-to-end transmission.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{default_max_steps, run, BehaviorTrace, SwarmAlgorithm};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Configuration, GridGraph};
use crate::strip::{format_bits, index_to_bits, parse_bits};
use crate::{alg1, alg2, loco};

const SUM_TOLERANCE: f64 = 1e-9;

/// A memoryless source with probabilities in non-increasing order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolSource {
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct SourceFile {
    probs: Vec<f64>,
}

impl SymbolSource {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Distribution("no symbols".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
            return Err(Error::Distribution(format!("probability {p} outside (0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Distribution(format!("probabilities sum to {sum}")));
        }
        if probs.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Distribution("probabilities must be non-increasing".into()));
        }
        Ok(SymbolSource { probs })
    }

    /// Normalizes non-negative weights and sorts them descending. The flag
    /// reports whether the order changed.
    pub fn from_weights(weights: &[f64]) -> Result<(Self, bool)> {
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::Distribution(format!("weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        let mut probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let reordered = probs.windows(2).any(|w| w[0] < w[1]);
        probs.sort_by(|a, b| b.total_cmp(a));
        Ok((SymbolSource::new(probs)?, reordered))
    }

    /// Parses `{"probs": [..]}`, warning when the values had to be reordered.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SourceFile = serde_json::from_str(text)?;
        let (src, reordered) = Self::from_weights(&file.probs)?;
        if reordered {
            log::warn!("source probabilities were reordered to non-increasing order");
        }
        Ok(src)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn uniform(alpha: usize) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::Distribution("no symbols".into()));
        }
        Ok(Self::from_weights(&vec![1.0; alpha])?.0)
    }

    /// `p_i` proportional to `2^-i`.
    pub fn geometric(alpha: usize) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::Distribution("no symbols".into()));
        }
        let weights: Vec<f64> = (0..alpha).map(|i| 0.5f64.powi(i as i32)).collect();
        Ok(Self::from_weights(&weights)?.0)
    }

    pub fn alpha(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Shannon entropy in bits.
pub fn entropy(src: &SymbolSource) -> f64 {
    -src.probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.log2()).sum::<f64>()
}

/// The shift algorithm behind a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Alg1,
    Alg2,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Alg1 => "alg1",
            Scheme::Alg2 => "alg2",
        }
    }

    /// Codewords at swarm size `k` carrying bits, `None` where the scheme
    /// does not apply.
    pub fn capacity(self, k: usize) -> Option<u128> {
        match self {
            Scheme::Alg1 => alg1::capacity(k),
            Scheme::Alg2 => alg2::capacity(k),
        }
    }

    /// Largest swarm served by locomotion in the variable-size tower.
    pub fn loco_levels(self) -> usize {
        match self {
            Scheme::Alg1 => alg1::CONTROLLER,
            Scheme::Alg2 => 3,
        }
    }

    /// Code bits per codeword at size `k`.
    pub fn bits_at(self, k: usize) -> usize {
        match self {
            Scheme::Alg1 => k - alg1::CONTROLLER,
            Scheme::Alg2 => k / 2,
        }
    }

    /// Per-column delay factor in `D <= factor * m * K`.
    pub fn delay_factor(self) -> f64 {
        match self {
            Scheme::Alg1 => 10.0,
            Scheme::Alg2 => 1.0,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alg1" => Ok(Scheme::Alg1),
            "alg2" => Ok(Scheme::Alg2),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Fixed,
    Variable,
}

/// Algorithm moving a particular codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mover {
    Alg1,
    Alg2,
    Loco,
}

impl Mover {
    fn algorithm(self) -> &'static dyn SwarmAlgorithm {
        match self {
            Mover::Alg1 => &alg1::ShiftByTwo,
            Mover::Alg2 => &alg2::ShiftByOne,
            Mover::Loco => &loco::Caterpillar,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeEntry {
    pub symbol: usize,
    pub algorithm: Mover,
    pub k: usize,
    /// Codeword bits, `None` for a locomotion singleton.
    pub bits: Option<String>,
    pub initial: Configuration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Code {
    pub scheme: Scheme,
    pub family: Family,
    pub entries: Vec<CodeEntry>,
}

fn entry(symbol: usize, mover: Mover, k: usize, bits: Option<Vec<u8>>) -> Result<CodeEntry> {
    let initial = match (mover, &bits) {
        (Mover::Loco, _) => loco::config(k, 0)?,
        (Mover::Alg1, Some(b)) => alg1::encode(b, 0)?,
        (Mover::Alg2, Some(b)) => alg2::encode(b, k, 0)?,
        _ => return Err(Error::Domain("shift codeword without bits".into())),
    };
    Ok(CodeEntry {
        symbol,
        algorithm: mover,
        k,
        bits: bits.as_deref().map(format_bits),
        initial,
    })
}

fn mover_of(scheme: Scheme) -> Mover {
    match scheme {
        Scheme::Alg1 => Mover::Alg1,
        Scheme::Alg2 => Mover::Alg2,
    }
}

/// All symbols at size `k`, codewords in natural binary order.
pub fn build_fixed_code(scheme: Scheme, k: usize, alpha: usize) -> Result<Code> {
    let Some(capacity) = scheme.capacity(k) else {
        return Err(Error::Domain(format!("{scheme} does not run with k = {k}")));
    };
    if alpha == 0 || alpha as u128 > capacity {
        return Err(Error::Capacity {
            scheme: scheme.name(),
            k,
            requested: alpha,
            capacity,
        });
    }
    let width = scheme.bits_at(k);
    let entries = (0..alpha)
        .map(|i| entry(i, mover_of(scheme), k, Some(index_to_bits(i as u64, width))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Code {
        scheme,
        family: Family::Fixed,
        entries,
    })
}

/// Tower code: symbols in source order fill levels of increasing size.
pub fn build_variable_code(scheme: Scheme, src: &SymbolSource) -> Result<Code> {
    let alpha = src.alpha();
    let mut entries = Vec::with_capacity(alpha);
    let mut k = 1;
    while entries.len() < alpha {
        if k <= scheme.loco_levels() {
            entries.push(entry(entries.len(), Mover::Loco, k, None)?);
        } else {
            let capacity = scheme.capacity(k).expect("shift levels start above loco levels");
            let width = scheme.bits_at(k);
            let mut index = 0u128;
            while index < capacity && entries.len() < alpha {
                let bits = index_to_bits(index as u64, width);
                entries.push(entry(entries.len(), mover_of(scheme), k, Some(bits))?);
                index += 1;
            }
        }
        k += 1;
    }
    Ok(Code {
        scheme,
        family: Family::Variable,
        entries,
    })
}

impl Code {
    pub fn max_k(&self) -> usize {
        self.entries.iter().map(|e| e.k).max().unwrap_or(0)
    }

    /// `K_gamma = sum p_i k_i`.
    pub fn average_size(&self, src: &SymbolSource) -> Result<f64> {
        if src.alpha() != self.entries.len() {
            return Err(Error::Domain(format!(
                "code has {} symbols, source {}",
                self.entries.len(),
                src.alpha()
            )));
        }
        Ok(self.entries.iter().zip(src.probs()).map(|(e, p)| p * e.k as f64).sum())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Receiver side: the swarm size selects the decoder, which returns the
    /// codeword, looked up in the code table.
    pub fn decode(&self, terminal: &Configuration) -> Result<usize> {
        let k = terminal.len();
        let candidates: Vec<&CodeEntry> = self.entries.iter().filter(|e| e.k == k).collect();
        let Some(first) = candidates.first() else {
            return Err(Error::Decode(format!("no codeword has {k} robots")));
        };
        let bits = match first.algorithm {
            Mover::Loco => return Ok(first.symbol),
            Mover::Alg1 => alg1::decode_terminal(terminal, k)?,
            Mover::Alg2 => alg2::decode_terminal(terminal, k)?,
        };
        let bits = format_bits(&bits);
        candidates
            .iter()
            .find(|e| e.bits.as_deref() == Some(bits.as_str()))
            .map(|e| e.symbol)
            .ok_or_else(|| Error::Decode(format!("codeword {bits} is not in the code")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transmission {
    pub sent: usize,
    pub received: usize,
    pub k: usize,
    pub delay: usize,
}

/// Sends `symbol` over `g` and decodes the arriving configuration.
pub fn transmit(g: &GridGraph, code: &Code, symbol: usize) -> Result<Transmission> {
    transmit_traced(g, code, symbol).map(|(t, _)| t)
}

/// [`transmit`], also returning the full behaviour trace.
pub fn transmit_traced(g: &GridGraph, code: &Code, symbol: usize) -> Result<(Transmission, BehaviorTrace)> {
    let entry = code
        .entries
        .get(symbol)
        .ok_or_else(|| Error::Domain(format!("symbol {symbol} out of range")))?;
    let m = g.columns().ok_or_else(|| Error::Domain("transmission needs a grid host".into()))?;
    if g.rows() != Some(2) || m <= entry.k {
        return Err(Error::Domain(format!("need a strip wider than k = {}, got {m} columns", entry.k)));
    }
    let trace = run(g, entry.algorithm.algorithm(), &entry.initial, default_max_steps(entry.k, m))?;
    let terminal = trace
        .terminal()
        .ok_or_else(|| Error::Decode(format!("symbol {symbol} never reached the receiver")))?;
    let received = code.decode(terminal)?;
    let delay = trace.delay.expect("terminal implies delay");
    Ok((
        Transmission {
            sent: symbol,
            received,
            k: entry.k,
            delay,
        },
        trace,
    ))
}

/// Transmits every symbol of `code`.
pub fn transmit_all(g: &GridGraph, code: &Code, exec: Exec) -> Result<Vec<Transmission>> {
    exec.map_range(code.entries.len(), |i| transmit(g, code, i))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            value,
            bound,
            pass: value <= bound,
        }
    }

    fn below(name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            value,
            bound,
            pass: value < bound,
        }
    }

    fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            value,
            bound,
            pass: value >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub scheme: Scheme,
    pub m: usize,
    pub alpha: usize,
    pub entropy: f64,
    /// Measured `K_gamma`.
    pub average_size: f64,
    /// Measured `D_gamma`, probability-weighted.
    pub average_delay: f64,
    pub transmissions: Vec<Transmission>,
    pub checks: Vec<Check>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Transmits every symbol of `code` over `G_8(m, 2)` and checks the measured
/// averages against the size and delay bounds of its scheme.
pub fn bound_check(code: &Code, src: &SymbolSource, m: usize, exec: Exec) -> Result<BoundReport> {
    let g = GridGraph::strip(m)?;
    let transmissions = transmit_all(&g, code, exec)?;
    let h = entropy(src);
    let k_avg = code.average_size(src)?;
    let d_avg: f64 = transmissions.iter().zip(src.probs()).map(|(t, p)| p * t.delay as f64).sum();
    let alpha = src.alpha();

    let mut checks = Vec::new();
    let wrong = transmissions.iter().filter(|t| t.sent != t.received).count();
    checks.push(Check::at_most("decode errors", wrong as f64, 0.0));
    if alpha >= 2 {
        match code.scheme {
            Scheme::Alg1 => checks.push(Check::below("K < H + 15", k_avg, h + 15.0)),
            Scheme::Alg2 => checks.push(Check::below("K < 2H", k_avg, 2.0 * h)),
        }
    }
    let factor = code.scheme.delay_factor();
    checks.push(Check::at_most(
        format!("D <= {factor} m K"),
        d_avg,
        factor * m as f64 * k_avg,
    ));
    let k_star = crate::analysis::bounds::k_star_lower(h, alpha);
    checks.push(Check::at_least(
        "D >= (m + 1 - 2 alpha) K*",
        d_avg,
        (m as f64 + 1.0 - 2.0 * alpha as f64) * k_star,
    ));
    for t in &transmissions {
        let lower = crate::analysis::bounds::delay_lower_bound(t.k, m - 1);
        if t.delay < lower {
            checks.push(Check::at_least(format!("symbol {} delay >= k(dist - 2(k-1))", t.sent), t.delay as f64, lower as f64));
        }
    }
    Ok(BoundReport {
        scheme: code.scheme,
        m,
        alpha,
        entropy: h,
        average_size: k_avg,
        average_delay: d_avg,
        transmissions,
        checks,
    })
}

/// Parses a bit string for `scheme` at size `k`, checking its length.
pub fn codeword_bits(scheme: Scheme, k: usize, bits: &str) -> Result<Vec<u8>> {
    let parsed = parse_bits(bits)?;
    if scheme.capacity(k).is_none() {
        return Err(Error::Domain(format!("{scheme} does not run with k = {k}")));
    }
    let want = scheme.bits_at(k);
    if parsed.len() != want {
        return Err(Error::Domain(format!("{scheme} at k = {k} carries {want} bits, got {}", parsed.len())));
    }
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn entropy_examples() {
        assert!(approx(entropy(&SymbolSource::uniform(4).unwrap()), 2.0));
        assert!(approx(entropy(&SymbolSource::new(vec![1.0]).unwrap()), 0.0));
        assert!(approx(entropy(&SymbolSource::new(vec![0.5, 0.25, 0.25]).unwrap()), 1.5));
    }

    #[test]
    fn source_validation() {
        assert!(SymbolSource::new(vec![0.5, 0.4]).is_err());
        assert!(SymbolSource::new(vec![0.25, 0.75]).is_err());
        assert!(SymbolSource::new(vec![1.0, 0.0]).is_err());
        assert!(SymbolSource::new(vec![]).is_err());
        let src = SymbolSource::from_json(r#"{"probs": [1, 3]}"#).unwrap();
        assert_eq!(src.probs(), &[0.75, 0.25]);
        assert!(SymbolSource::from_json(r#"{"probs": [1, -1]}"#).is_err());
    }

    #[test]
    fn fixed_codes() {
        let code = build_fixed_code(Scheme::Alg2, 6, 8).unwrap();
        let words: Vec<_> = code.entries.iter().map(|e| e.bits.clone().unwrap()).collect();
        assert_eq!(words, ["000", "001", "010", "011", "100", "101", "110", "111"]);
        let code = build_fixed_code(Scheme::Alg1, 15, 2).unwrap();
        assert_eq!(code.entries[1].bits.as_deref(), Some("1"));
        assert!(matches!(
            build_fixed_code(Scheme::Alg2, 5, 5),
            Err(Error::Capacity { capacity: 4, .. })
        ));
    }

    #[test]
    fn tower_fill() {
        let src = SymbolSource::uniform(4).unwrap();
        let code = build_variable_code(Scheme::Alg2, &src).unwrap();
        let sizes: Vec<_> = code.entries.iter().map(|e| e.k).collect();
        assert_eq!(sizes, [1, 2, 3, 4]);
        assert!(approx(code.average_size(&src).unwrap(), 2.5));

        let src = SymbolSource::uniform(2).unwrap();
        let code = build_variable_code(Scheme::Alg1, &src).unwrap();
        assert!(approx(code.average_size(&src).unwrap(), 1.5));

        let src = SymbolSource::uniform(20).unwrap();
        let code = build_variable_code(Scheme::Alg1, &src).unwrap();
        let sizes: Vec<_> = code.entries.iter().map(|e| e.k).collect();
        assert_eq!(&sizes[13..], [14, 15, 15, 16, 16, 16, 16]);

        let one = SymbolSource::new(vec![1.0]).unwrap();
        let code = build_variable_code(Scheme::Alg2, &one).unwrap();
        assert_eq!(code.entries.len(), 1);
        assert!(approx(code.average_size(&one).unwrap(), 1.0));
    }

    #[test]
    fn transmit_examples() {
        let g = GridGraph::strip(40).unwrap();
        let code = build_fixed_code(Scheme::Alg2, 6, 8).unwrap();
        let t = transmit(&g, &code, 3).unwrap();
        assert_eq!(t.received, 3);
        assert!(t.delay.abs_diff(204) <= 6);

        let src = SymbolSource::uniform(4).unwrap();
        let code = build_variable_code(Scheme::Alg2, &src).unwrap();
        let t = transmit(&g, &code, 0).unwrap();
        assert_eq!((t.received, t.delay), (0, 39));
        assert!(transmit(&g, &code, 4).is_err());
    }

    #[test]
    fn bound_check_examples() {
        let src = SymbolSource::uniform(4).unwrap();
        let code = build_variable_code(Scheme::Alg2, &src).unwrap();
        let report = bound_check(&code, &src, 40, Exec::Sequential).unwrap();
        assert!(report.all_pass(), "{report:#?}");
        assert!(report.average_delay <= 100.0);

        let one = SymbolSource::new(vec![1.0]).unwrap();
        let code = build_variable_code(Scheme::Alg1, &one).unwrap();
        let report = bound_check(&code, &one, 10, Exec::Sequential).unwrap();
        assert!(approx(report.average_size, 1.0));
        assert!(report.all_pass());
    }

    #[test]
    fn code_json_lists_initial_cells() {
        let code = build_fixed_code(Scheme::Alg2, 4, 2).unwrap();
        let json: serde_json::Value = serde_json::from_str(&code.to_json().unwrap()).unwrap();
        assert_eq!(json["entries"][1]["bits"], "01");
        assert_eq!(json["entries"][1]["initial"][1], serde_json::json!([1, 1]));
        assert_eq!(json["family"], "fixed");
    }
}
