//! Exact code distance by exhaustive enumeration.
//!
//! The distance is the minimum weight of a Pauli that commutes with every
//! generator yet lies outside the generator group. Enumeration walks
//! supports in increasing weight with all 3^w letter assignments, so it is
//! exact but exponential; a work estimate guards against hopeless calls.

use super::CodeInstance;
use crate::bits::Gf2Basis;
use crate::pauli::PauliString;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Exact(u32),
    /// No qualifying operator at or below the requested weight, or the
    /// search was refused as too large.
    ExceedsMax(u32),
}

/// Candidates examined before the resource guard refuses the call.
const WORK_LIMIT: u128 = 400_000_000;

fn work_estimate(n: u32, max_weight: u32) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut pow3: u128 = 1;
    for w in 1..=max_weight.min(n) as u128 {
        binom = binom * (n as u128 - w + 1) / w;
        pow3 *= 3;
        total = total.saturating_add(binom.saturating_mul(pow3));
        if total > WORK_LIMIT {
            return total;
        }
    }
    total
}

/// Minimum weight over Paulis commuting with all generators but outside
/// their GF(2) span, enumerated in increasing weight. Codes with more
/// than 128 qubits are refused (masks are u128 pairs).
pub fn brute_force_distance(code: &CodeInstance, max_weight: u32) -> Distance {
    let n = code.num_qubits;
    if n == 0 || n > 128 || work_estimate(n, max_weight) > WORK_LIMIT {
        return Distance::ExceedsMax(max_weight);
    }
    let gens: Vec<(u128, u128)> = code.generators.iter().map(pauli_masks).collect();
    let mut span = Gf2Basis::new();
    for g in &code.generators {
        span.insert(symplectic_bits(g));
    }

    for w in 1..=max_weight.min(n) {
        let mut support: Vec<u32> = (0..w).collect();
        loop {
            if scan_letters(&support, &gens, &span, n) {
                return Distance::Exact(w);
            }
            // next support combination in lexicographic order; position i
            // saturates at n - w + i
            let mut advanced = false;
            for i in (0..w as usize).rev() {
                if support[i] < n - w + i as u32 {
                    support[i] += 1;
                    for j in i + 1..w as usize {
                        support[j] = support[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    Distance::ExceedsMax(max_weight)
}

fn pauli_masks(p: &PauliString) -> (u128, u128) {
    let mut x = 0u128;
    let mut z = 0u128;
    for i in p.x_bits().iter_ones() {
        x |= 1 << i;
    }
    for i in p.z_bits().iter_ones() {
        z |= 1 << i;
    }
    (x, z)
}

fn symplectic_bits(p: &PauliString) -> crate::bits::BitVec {
    let n = p.num_qubits() as usize;
    let mut key = crate::bits::BitVec::zeros(2 * n);
    for i in p.x_bits().iter_ones() {
        key.set(i, true);
    }
    for i in p.z_bits().iter_ones() {
        key.set(n + i, true);
    }
    key
}

/// Try the 3^w letter assignments on one support; true if some assignment
/// commutes with every generator and escapes the group span.
fn scan_letters(support: &[u32], gens: &[(u128, u128)], span: &Gf2Basis, n: u32) -> bool {
    let w = support.len();
    let mut letters = vec![0u8; w]; // 0 = X, 1 = Z, 2 = Y
    loop {
        let mut x = 0u128;
        let mut z = 0u128;
        for (q, &letter) in support.iter().zip(&letters) {
            if letter != 1 {
                x |= 1 << q;
            }
            if letter != 0 {
                z |= 1 << q;
            }
        }
        let commutes = gens
            .iter()
            .all(|&(gx, gz)| ((x & gz).count_ones() + (z & gx).count_ones()) % 2 == 0);
        if commutes {
            let mut key = crate::bits::BitVec::zeros(2 * n as usize);
            for i in 0..n as usize {
                if x >> i & 1 == 1 {
                    key.set(i, true);
                }
                if z >> i & 1 == 1 {
                    key.set(n as usize + i, true);
                }
            }
            if !span.contains(&key) {
                return true;
            }
        }
        // increment the base-3 counter
        let mut pos = 0;
        while pos < w {
            letters[pos] += 1;
            if letters[pos] < 3 {
                break;
            }
            letters[pos] = 0;
            pos += 1;
        }
        if pos == w {
            return false;
        }
    }
}
