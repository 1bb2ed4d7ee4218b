//! Individually named codes, shipped as embedded generator matrices.
//!
//! Each table is transcribed from the cited construction rather than
//! rebuilt procedurally; validation and brute-force distance checks in the
//! test suite guard the transcriptions.

use super::{css_instance, CodeInstance, Family};
use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

fn mask_row(n: u32, mask: u64) -> BitVec {
    BitVec::from_indices(n as usize, (0..64).filter(|b| mask >> b & 1 == 1))
}

/// Parity-check rows of the [2^r - 1, 2^r - 1 - r, 3] Hamming code:
/// row t has a 1 in column c-1 for every c in 1..=n whose bit t is set.
fn hamming_rows(r: u32) -> Vec<BitVec> {
    let n = (1u32 << r) - 1;
    (0..r)
        .map(|t| {
            BitVec::from_indices(
                n as usize,
                (1..=n).filter(|c| c >> t & 1 == 1).map(|c| (c - 1) as usize),
            )
        })
        .collect()
}

/// [[5,1,3]] code of Laflamme, Miquel, Paz, and Zurek, Phys. Rev. Lett.
/// 77, 198 (1996): cyclic shifts of XZZXI.
fn perfect_5() -> CodeInstance {
    let n = 5u32;
    let base: [(bool, bool); 5] = [
        (true, false),
        (false, true),
        (false, true),
        (true, false),
        (false, false),
    ];
    let mut generators = Vec::with_capacity(4);
    for shift in 0..4u32 {
        let mut x = BitVec::zeros(n as usize);
        let mut z = BitVec::zeros(n as usize);
        for q in 0..n {
            let (bx, bz) = base[((q + n - shift) % n) as usize];
            x.set(q as usize, bx);
            z.set(q as usize, bz);
        }
        generators.push(PauliString::from_parts(x, z, 0));
    }
    CodeInstance {
        id: "perfect_5".into(),
        family: Family::Named,
        num_qubits: n,
        generators,
        num_logical: 1,
        distance: 3,
        parents: None,
    }
}

/// [[9,1,3]] code of Shor, Phys. Rev. A 52, R2493 (1995).
fn shor_9() -> CodeInstance {
    let x_rows = vec![mask_row(9, 0b000111111), mask_row(9, 0b111111000)];
    let z_rows = [(0u32, 1u32), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)]
        .iter()
        .map(|&(a, b)| BitVec::from_indices(9, [a as usize, b as usize]))
        .collect::<Vec<_>>();
    css_instance("shor_9", Family::Named, 9, &x_rows, &z_rows, 3)
}

/// [[7,1,3]] code of Steane, Phys. Rev. Lett. 77, 793 (1996): self-dual
/// CSS on the [7,4,3] Hamming code.
fn steane_7() -> CodeInstance {
    let rows = hamming_rows(3);
    css_instance("steane_7", Family::Named, 7, &rows, &rows, 3)
}

/// [[15,7,3]] quantum Hamming code: self-dual CSS on [15,11,3]
/// (Steane, Proc. R. Soc. A 452, 2551 (1996)).
fn hamming_15() -> CodeInstance {
    let rows = hamming_rows(4);
    css_instance("hamming_15", Family::Named, 15, &rows, &rows, 3)
}

/// [[15,1,3]] tetrahedral color code (Bombin and Martin-Delgado,
/// Phys. Rev. Lett. 97, 180501 (2006)): X checks from the four Hamming
/// rows, Z checks from the rows and their pairwise intersections.
fn tetrahedral_15() -> CodeInstance {
    let x_rows = hamming_rows(4);
    let mut z_rows = x_rows.clone();
    for i in 0..x_rows.len() {
        for j in i + 1..x_rows.len() {
            let mut cell = BitVec::zeros(15);
            for q in x_rows[i].iter_ones() {
                if x_rows[j].get(q) {
                    cell.set(q, true);
                }
            }
            z_rows.push(cell);
        }
    }
    css_instance("tetrahedral_15", Family::Named, 15, &x_rows, &z_rows, 3)
}

// Parity-check rows of the binary [23,12,7] Golay code, from the
// generator polynomial x^11+x^10+x^6+x^5+x^4+x^2+1; the quantum code is
// self-dual CSS on it ([[23,1,7]], e.g. Reichardt, Quantum Sci. Technol.
// 6, 015007 (2021)).
const GOLAY_H: &[u32] = &[
    0b00000000001010010011111,
    0b00000000010100100111110,
    0b00000000100011011100011,
    0b00000001000110111000110,
    0b00000010000111100010011,
    0b00000100000101010111001,
    0b00001000000000111101101,
    0b00010000000001111011010,
    0b00100000000011110110100,
    0b01000000000111101101000,
    0b10000000000101001001111,
];

fn golay_23() -> CodeInstance {
    let rows: Vec<BitVec> = GOLAY_H.iter().map(|&m| mask_row(23, m as u64)).collect();
    css_instance("golay_23", Family::Named, 23, &rows, &rows, 7)
}

// [[12,2,4]] carbon code as used by da Silva et al., arXiv:2404.02280
// (2024), in (X mask, Z mask) form; rows are X-type or Z-type only.
const CARBON_GENS: &[(u16, u16)] = &[
    (0b000000001111, 0b000000000000),
    (0b000000000000, 0b000000001111),
    (0b000011110000, 0b000000000000),
    (0b000000000000, 0b000011110000),
    (0b111100000000, 0b000000000000),
    (0b000000000000, 0b111100000000),
    (0b011001010101, 0b000000000000),
    (0b001100110110, 0b000000000000),
    (0b000000000000, 0b011000110011),
    (0b000000000000, 0b010101010110),
];

fn carbon_12() -> CodeInstance {
    let generators: Vec<PauliString> = CARBON_GENS
        .iter()
        .map(|&(x, z)| PauliString::from_parts(mask_row(12, x as u64), mask_row(12, z as u64), 0))
        .collect();
    CodeInstance {
        id: "carbon_12".into(),
        family: Family::Named,
        num_qubits: 12,
        generators,
        num_logical: 2,
        distance: 4,
        parents: None,
    }
}

/// [[4,2,2]] error-detecting code (Vaidman, Goldenberg, and Wiesner,
/// Phys. Rev. A 54, R1745 (1996)).
fn detector_4() -> CodeInstance {
    let full = BitVec::from_indices(4, 0..4);
    css_instance(
        "detector_4",
        Family::Named,
        4,
        std::slice::from_ref(&full),
        std::slice::from_ref(&full),
        2,
    )
}

pub(super) fn named_code(name: &str) -> Result<CodeInstance> {
    let code = match name {
        "perfect_5" => perfect_5(),
        "steane_7" => steane_7(),
        "shor_9" => shor_9(),
        "carbon_12" => carbon_12(),
        "hamming_15" => hamming_15(),
        "tetrahedral_15" => tetrahedral_15(),
        "golay_23" => golay_23(),
        "detector_4" => detector_4(),
        _ => {
            return Err(Error::UnsupportedParams(format!(
                "unknown named code {name:?}"
            )))
        }
    };
    debug_assert_eq!(code.id, name);
    Ok(code)
}

/// All named-code identifiers, in suite order.
pub(super) const NAMED_IDS: &[&str] = &[
    "perfect_5",
    "steane_7",
    "hamming_15",
    "golay_23",
    "shor_9",
    "tetrahedral_15",
    "carbon_12",
    "detector_4",
];
