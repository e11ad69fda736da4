//! Closed-form capacity, delay and code-size bounds.

use std::fmt::Write as _;

use serde::Serialize;

use crate::codec::{entropy, SymbolSource};
use crate::{alg1, alg2};

/// Strip sequence `n_0 = 1, n_1 = 2, n_k = 2 n_{k-1} + n_{k-2}`.
pub fn strip_sequence(k: usize) -> u128 {
    let (mut prev, mut cur) = (1u128, 2u128);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        (prev, cur) = (cur, 2 * cur + prev);
    }
    cur
}

/// Configurations of size `k >= 2` containing the sender on `G_8(m, 2)`:
/// `n_{k-1} + n_{k-2}`.
pub fn strip_count(k: usize) -> u128 {
    assert!(k >= 2, "strip_count needs k >= 2");
    strip_sequence(k - 1) + strip_sequence(k - 2)
}

/// Same count when a configuration only has to occupy the sender column.
pub fn strip_column_count(k: usize) -> u128 {
    strip_sequence(k)
}

/// Initial configurations of size `k` on any 8-grid: at most `2^{6(k-1)}`.
pub fn counting_bound(k: usize) -> f64 {
    2f64.powf(6.0 * (k as f64 - 1.0))
}

/// Capacity bound on the strip, `(1 + sqrt 2)^k`.
pub fn strip_bound(k: usize) -> f64 {
    (1.0 + 2f64.sqrt()).powi(k as i32)
}

pub fn alg1_delay_bound(k: usize, m: usize) -> f64 {
    (10.0 * k as f64 - 123.5) * (m as f64 - k as f64)
}

pub fn alg2_delay(k: usize, m: usize) -> usize {
    k * m.saturating_sub(k)
}

/// `k (dist - 2(k-1))`, clamped at zero.
pub fn delay_lower_bound(k: usize, dist: usize) -> usize {
    k * dist.saturating_sub(2 * k.saturating_sub(1))
}

/// `ceil(log2((63 alpha + 1) / 6))`, the largest swarm size used by the
/// counting-bound code, as the bound on `K*` states it.
pub fn k_alpha(alpha: usize) -> u32 {
    ((63.0 * alpha as f64 + 1.0) / 6.0).log2().ceil() as u32
}

/// The exact value from `sum_{k=1}^{K} 64^{k-1} >= alpha`,
/// `ceil(log2(63 alpha + 1) / 6)`. Never larger than [`k_alpha`].
pub fn k_alpha_exact(alpha: usize) -> u32 {
    let mut k = 1u32;
    let mut total = 1u128;
    while total < alpha as u128 {
        k += 1;
        total += 1u128 << (6 * (k - 1));
    }
    k
}

/// `H/6 + 1 - log2(k_alpha)/6`.
pub fn k_star_lower(h: f64, alpha: usize) -> f64 {
    h / 6.0 + 1.0 - (k_alpha(alpha) as f64).log2() / 6.0
}

/// Strip version: `0.78 H - 0.79 log2(1 + 0.79 log2 alpha)`.
pub fn k_star_lower_strip(h: f64, alpha: usize) -> f64 {
    0.78 * h - 0.79 * (1.0 + 0.79 * (alpha as f64).log2()).log2()
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub k: usize,
    pub m: usize,
    pub alpha: usize,
    pub entropy: f64,
    pub counting_bound: f64,
    pub strip_bound: f64,
    pub strip_count: Option<u128>,
    pub alg1_capacity: Option<u128>,
    pub alg1_delay_bound: Option<f64>,
    pub alg2_capacity: Option<u128>,
    pub alg2_delay: Option<usize>,
    /// `k(dist - 2(k-1))` with `dist = m - 1`.
    pub delay_lower_bound: usize,
    pub k_alpha: u32,
    pub k_alpha_exact: u32,
    pub k_star_lower: f64,
    pub k_star_lower_strip: f64,
    pub k_alg1_upper: f64,
    pub k_alg2_upper: f64,
    pub d_star_factor: f64,
    /// `2^{k-14} <= (1 + sqrt 2)^k <= 2^{6(k-1)}`, checked for `k >= 15`.
    pub chain_holds: Option<bool>,
}

pub fn bounds_report(k: usize, m: usize, src: &SymbolSource) -> BoundsReport {
    let h = entropy(src);
    let alpha = src.alpha();
    let alg1_capacity = alg1::capacity(k);
    BoundsReport {
        k,
        m,
        alpha,
        entropy: h,
        counting_bound: counting_bound(k),
        strip_bound: strip_bound(k),
        strip_count: (k >= 2).then(|| strip_count(k)),
        alg1_capacity,
        alg1_delay_bound: alg1_capacity.map(|_| alg1_delay_bound(k, m)),
        alg2_capacity: alg2::capacity(k),
        alg2_delay: alg2::capacity(k).map(|_| alg2_delay(k, m)),
        delay_lower_bound: delay_lower_bound(k, m.saturating_sub(1)),
        k_alpha: k_alpha(alpha),
        k_alpha_exact: k_alpha_exact(alpha),
        k_star_lower: k_star_lower(h, alpha),
        k_star_lower_strip: k_star_lower_strip(h, alpha),
        k_alg1_upper: h + 15.0,
        k_alg2_upper: 2.0 * h,
        d_star_factor: m as f64 + 1.0 - 2.0 * alpha as f64,
        chain_holds: alg1_capacity.map(|c| {
            let strip = strip_bound(k);
            c as f64 <= strip && strip <= counting_bound(k)
        }),
    }
}

impl BoundsReport {
    /// Aligned two-column text table.
    pub fn to_table(&self) -> String {
        let opt_u = |v: Option<u128>| v.map_or("-".to_string(), |v| v.to_string());
        let rows: Vec<(&str, String)> = vec![
            ("k", self.k.to_string()),
            ("m", self.m.to_string()),
            ("alpha", self.alpha.to_string()),
            ("H(S)", format!("{:.6}", self.entropy)),
            ("counting bound 2^(6(k-1))", format!("{:.6e}", self.counting_bound)),
            ("strip bound (1+sqrt2)^k", format!("{:.6}", self.strip_bound)),
            ("strip |C_I| n_(k-1)+n_(k-2)", opt_u(self.strip_count)),
            ("alg1 capacity 2^(k-14)", opt_u(self.alg1_capacity)),
            (
                "alg1 delay bound (10k-123.5)(m-k)",
                self.alg1_delay_bound.map_or("-".into(), |v| format!("{v:.1}")),
            ),
            ("alg2 capacity 2^floor(k/2)", opt_u(self.alg2_capacity)),
            ("alg2 delay k(m-k)", self.alg2_delay.map_or("-".into(), |v| v.to_string())),
            ("delay lower bound k(m-1-2(k-1))", self.delay_lower_bound.to_string()),
            ("k_alpha", self.k_alpha.to_string()),
            ("k_alpha (exact tower)", self.k_alpha_exact.to_string()),
            ("K* lower bound, 8-grid", format!("{:.6}", self.k_star_lower)),
            ("K* lower bound, strip", format!("{:.6}", self.k_star_lower_strip)),
            ("K_alg1 upper H+15", format!("{:.6}", self.k_alg1_upper)),
            ("K_alg2 upper 2H", format!("{:.6}", self.k_alg2_upper)),
            ("D* >= factor * K*, factor m+1-2alpha", format!("{:.1}", self.d_star_factor)),
            (
                "chain 2^(k-14) <= (1+sqrt2)^k <= 2^(6(k-1))",
                self.chain_holds.map_or("-".into(), |b| if b { "holds" } else { "FAILS" }.into()),
            ),
        ];
        let width = rows.iter().map(|(name, _)| name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (name, value) in rows {
            let _ = writeln!(out, "{name:<width$}  {value}");
        }
        out
    }
}
