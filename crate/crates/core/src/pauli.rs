//! Exact n-qubit Pauli algebra in symplectic representation.
//!
//! A `PauliString` stores the operator `i^phase * (s_0 ⊗ s_1 ⊗ … ⊗ s_{n-1})`
//! where each site factor is I, X, Y, or Z selected by the (x, z) bit pair:
//! x alone is X, z alone is Z, both is Y. Under this convention a Hermitian
//! Pauli has phase 0 or 2 (sign +1 or -1), and phases 1 and 3 appear only in
//! products of anticommuting operators. All phase arithmetic is exact mod 4.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gate::GateKind;
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: u32,
    x: BitVec,
    z: BitVec,
    /// Exponent of i, mod 4.
    phase: u8,
}

impl PauliString {
    pub fn identity(num_qubits: u32) -> Self {
        PauliString {
            num_qubits,
            x: BitVec::zeros(num_qubits as usize),
            z: BitVec::zeros(num_qubits as usize),
            phase: 0,
        }
    }

    /// Single-site X, Y, or Z with sign +1.
    pub fn single(num_qubits: u32, qubit: u32, kind: GateKind) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits,
            });
        }
        let mut p = PauliString::identity(num_qubits);
        match kind {
            GateKind::X => p.x.set(qubit as usize, true),
            GateKind::Z => p.z.set(qubit as usize, true),
            GateKind::Y => {
                p.x.set(qubit as usize, true);
                p.z.set(qubit as usize, true);
            }
            other => {
                return Err(Error::UnsupportedGate { gate: other.name() });
            }
        }
        Ok(p)
    }

    pub fn from_parts(x: BitVec, z: BitVec, phase: u8) -> Self {
        assert_eq!(x.len(), z.len());
        PauliString {
            num_qubits: x.len() as u32,
            x,
            z,
            phase: phase % 4,
        }
    }

    #[inline]
    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// True when the operator equals i^phase * identity.
    pub fn is_identity_bits(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Hermitian Paulis carry a plain sign: phase 0 (+1) or 2 (-1).
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// +1 or -1 for Hermitian operators.
    pub fn sign(&self) -> i8 {
        debug_assert!(self.is_hermitian());
        if self.phase == 0 {
            1
        } else {
            -1
        }
    }

    /// Drops the X component at `qubit` (used when a measurement absorbs
    /// the anticommuting part of an error frame). Phase is untouched.
    pub fn clear_x(&mut self, qubit: usize) {
        self.x.set(qubit, false);
    }

    /// Drops the Z component at `qubit` (with [`clear_x`](Self::clear_x),
    /// erases a frame site across a reset). Phase is untouched.
    pub fn clear_z(&mut self, qubit: usize) {
        self.z.set(qubit, false);
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase % 4;
    }

    /// Site letter at `qubit` as one of 'I', 'X', 'Y', 'Z'.
    pub fn site(&self, qubit: u32) -> char {
        let (x, z) = (self.x.get(qubit as usize), self.z.get(qubit as usize));
        match (x, z) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        let mut total = 0;
        for (xw, zw) in self.x.words().iter().zip(self.z.words()) {
            total += (xw | zw).count_ones() as usize;
        }
        total
    }

    /// Number of non-identity sites within `support`.
    pub fn weight_on(&self, support: &BitVec) -> usize {
        debug_assert_eq!(support.len(), self.num_qubits as usize);
        let mut total = 0;
        for ((xw, zw), sw) in self
            .x
            .words()
            .iter()
            .zip(self.z.words())
            .zip(support.words())
        {
            total += ((xw | zw) & sw).count_ones() as usize;
        }
        total
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::LengthMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self.commutes_unchecked(other))
    }

    /// Symplectic form: commute iff popcount(a.x & b.z) + popcount(a.z & b.x)
    /// is even.
    #[inline]
    pub fn commutes_unchecked(&self, other: &PauliString) -> bool {
        !(self.x.and_parity(&other.z) ^ self.z.and_parity(&other.x))
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::LengthMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// In-place product self <- self * other with exact phase tracking.
    ///
    /// Per-site phase contributions: cyclic pairs (X,Y), (Y,Z), (Z,X) give
    /// a factor +i, the reversed pairs give -i, equal or identity sites give
    /// none. Contributions are accumulated word-parallel via popcounts.
    pub fn mul_assign_unchecked(&mut self, other: &PauliString) {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        let mut plus = 0usize;
        let mut minus = 0usize;
        for i in 0..self.x.words().len() {
            let xa = self.x.words()[i];
            let za = self.z.words()[i];
            let xb = other.x.words()[i];
            let zb = other.z.words()[i];
            let cyc = (xa & !za & xb & zb) | (xa & za & !xb & zb) | (!xa & za & xb & !zb);
            let anti = (xa & za & xb & !zb) | (!xa & za & xb & zb) | (xa & !za & !xb & zb);
            plus += cyc.count_ones() as usize;
            minus += anti.count_ones() as usize;
        }
        let delta = (plus % 4 + (4 - minus % 4) % 4) % 4;
        self.phase = ((self.phase as usize + other.phase as usize + delta) % 4) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Conjugate by a unitary gate from the alphabet: returns U P U^dag.
    pub fn conjugate_by_gate(&self, gate: GateKind, targets: &[u32]) -> Result<PauliString> {
        let expected = if gate.is_two_qubit() { 2 } else { 1 };
        if !gate.is_unitary() {
            return Err(Error::UnsupportedGate { gate: gate.name() });
        }
        if targets.len() != expected {
            return Err(Error::BadArity {
                gate: gate.name(),
                expected,
                got: targets.len(),
            });
        }
        for &t in targets {
            if t >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: t,
                    num_qubits: self.num_qubits,
                });
            }
        }
        if expected == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTarget { qubit: targets[0] });
        }
        let mut out = self.clone();
        out.apply_gate_unchecked(gate, targets);
        Ok(out)
    }

    /// In-place conjugation; callers guarantee target validity.
    pub fn apply_gate_unchecked(&mut self, gate: GateKind, targets: &[u32]) {
        match gate {
            GateKind::I | GateKind::Tick => {}
            GateKind::X => {
                let q = targets[0] as usize;
                if self.z.get(q) {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            GateKind::Y => {
                let q = targets[0] as usize;
                if self.x.get(q) != self.z.get(q) {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            GateKind::Z => {
                let q = targets[0] as usize;
                if self.x.get(q) {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            GateKind::H => {
                let q = targets[0] as usize;
                if self.x.get(q) && self.z.get(q) {
                    self.phase = (self.phase + 2) % 4;
                }
                let (xq, zq) = (self.x.get(q), self.z.get(q));
                self.x.set(q, zq);
                self.z.set(q, xq);
            }
            GateKind::S => {
                let q = targets[0] as usize;
                let xq = self.x.get(q);
                if xq && self.z.get(q) {
                    self.phase = (self.phase + 2) % 4;
                }
                if xq {
                    self.z.flip(q);
                }
            }
            GateKind::SDag => {
                let q = targets[0] as usize;
                let xq = self.x.get(q);
                if xq && !self.z.get(q) {
                    self.phase = (self.phase + 2) % 4;
                }
                if xq {
                    self.z.flip(q);
                }
            }
            GateKind::Cx => {
                let (c, t) = (targets[0] as usize, targets[1] as usize);
                let (xc, zc) = (self.x.get(c), self.z.get(c));
                let (xt, zt) = (self.x.get(t), self.z.get(t));
                if xc && zt && (xt == zc) {
                    self.phase = (self.phase + 2) % 4;
                }
                if xc {
                    self.x.flip(t);
                }
                if zt {
                    self.z.flip(c);
                }
            }
            GateKind::Cz => {
                let (a, b) = (targets[0] as usize, targets[1] as usize);
                let (xa, za) = (self.x.get(a), self.z.get(a));
                let (xb, zb) = (self.x.get(b), self.z.get(b));
                if xa && xb && (za != zb) {
                    self.phase = (self.phase + 2) % 4;
                }
                if xb {
                    self.z.flip(a);
                }
                if xa {
                    self.z.flip(b);
                }
            }
            GateKind::Swap => {
                let (a, b) = (targets[0] as usize, targets[1] as usize);
                self.x.swap_bits(a, b);
                self.z.swap_bits(a, b);
            }
            GateKind::R | GateKind::M => {
                unreachable!("R and M are not conjugation gates")
            }
        }
    }

    /// Extend (or truncate) to `num_qubits` sites, identity on new sites.
    pub fn resized(&self, num_qubits: u32) -> PauliString {
        PauliString {
            num_qubits,
            x: self.x.resized(num_qubits as usize),
            z: self.z.resized(num_qubits as usize),
            phase: self.phase,
        }
    }

    /// Embed into a larger register with all sites shifted up by `offset`.
    pub fn shifted(&self, offset: u32, num_qubits: u32) -> PauliString {
        assert!(offset + self.num_qubits <= num_qubits);
        PauliString {
            num_qubits,
            x: self.x.shifted(offset as usize, num_qubits as usize),
            z: self.z.shifted(offset as usize, num_qubits as usize),
            phase: self.phase,
        }
    }

    /// Canonical dense literal, e.g. "+XXZ_Z".
    pub fn emit(&self) -> String {
        let mut s = String::with_capacity(self.num_qubits as usize + 2);
        s.push_str(phase_prefix(self.phase));
        for q in 0..self.num_qubits {
            let c = self.site(q);
            s.push(if c == 'I' { '_' } else { c });
        }
        s
    }

    /// Sparse literal, e.g. "+X0*X1*Z3"; identity emits "+I0" on n > 0.
    pub fn emit_sparse(&self) -> String {
        let mut s = String::from(phase_prefix(self.phase));
        let mut first = true;
        for q in 0..self.num_qubits {
            let c = self.site(q);
            if c == 'I' {
                continue;
            }
            if !first {
                s.push('*');
            }
            s.push(c);
            s.push_str(&q.to_string());
            first = false;
        }
        if first {
            s.push_str("I0");
        }
        s
    }

    /// Parse a dense ("+XXZ_Z") or sparse ("+X0*X1*Z3") Pauli literal.
    ///
    /// The sign prefix is optional and defaults to +; "i" and "-i" prefixes
    /// are accepted for non-Hermitian phases. A literal containing a digit is
    /// parsed as sparse, otherwise as dense (dense length must then equal
    /// `num_qubits`). A lowercase 'i' directly after the optional sign is
    /// read as a phase prefix when a Pauli letter follows; use uppercase 'I'
    /// for identity sites. Columns in errors are 1-based over the input.
    pub fn parse(text: &str, num_qubits: u32) -> Result<PauliString> {
        let (phase, body_start) = parse_phase_prefix(text);
        let body = &text[body_start..];
        if body.is_empty() {
            return Err(Error::parse(1, body_start + 1, "empty Pauli literal"));
        }
        let mut p = PauliString::identity(num_qubits);
        p.phase = phase;
        if body.bytes().any(|b| b.is_ascii_digit()) {
            parse_sparse_body(body, body_start, &mut p)?;
        } else {
            parse_dense_body(body, body_start, &mut p)?;
        }
        Ok(p)
    }
}

fn phase_prefix(phase: u8) -> &'static str {
    match phase % 4 {
        0 => "+",
        1 => "i",
        2 => "-",
        _ => "-i",
    }
}

/// Returns (phase, byte offset where the body begins).
fn parse_phase_prefix(text: &str) -> (u8, usize) {
    let b = text.as_bytes();
    match b {
        [b'+', b'i', rest @ ..] if !rest.is_empty() => (1, 2),
        [b'-', b'i', ..] => (3, 2),
        [b'+', ..] => (0, 1),
        [b'-', ..] => (2, 1),
        // a leading 'i' is a phase only if a Pauli letter follows;
        // bare "i" or "iI.." would otherwise be ambiguous with dense 'I'
        [b'i', next, ..] if matches!(next, b'X' | b'Y' | b'Z' | b'x' | b'y' | b'z') => (1, 1),
        _ => (0, 0),
    }
}

fn site_letter(c: u8) -> Option<(bool, bool)> {
    match c.to_ascii_uppercase() {
        b'I' | b'_' => Some((false, false)),
        b'X' => Some((true, false)),
        b'Z' => Some((false, true)),
        b'Y' => Some((true, true)),
        _ => None,
    }
}

fn parse_dense_body(body: &str, offset: usize, p: &mut PauliString) -> Result<()> {
    if body.len() != p.num_qubits as usize {
        return Err(Error::parse(
            1,
            offset + 1,
            format!(
                "dense Pauli literal has {} site(s), expected {}",
                body.len(),
                p.num_qubits
            ),
        ));
    }
    for (i, c) in body.bytes().enumerate() {
        match site_letter(c) {
            Some((x, z)) => {
                p.x.set(i, x);
                p.z.set(i, z);
            }
            None => {
                return Err(Error::parse(
                    1,
                    offset + i + 1,
                    format!("invalid Pauli site character '{}'", c as char),
                ));
            }
        }
    }
    Ok(())
}

fn parse_sparse_body(body: &str, offset: usize, p: &mut PauliString) -> Result<()> {
    let mut seen = BitVec::zeros(p.num_qubits as usize);
    let mut col = offset;
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(Error::parse(1, col + 1, "empty factor in sparse literal"));
        }
        let bytes = factor.as_bytes();
        let (x, z) = site_letter(bytes[0]).filter(|_| bytes[0] != b'_').ok_or_else(|| {
            Error::parse(
                1,
                col + 1,
                format!("invalid Pauli letter '{}'", bytes[0] as char),
            )
        })?;
        let index_text = &factor[1..];
        if index_text.is_empty() || !index_text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(
                1,
                col + 2,
                format!("expected qubit index after '{}'", bytes[0] as char),
            ));
        }
        let index: u32 = index_text.parse().map_err(|_| {
            Error::parse(1, col + 2, format!("qubit index '{index_text}' too large"))
        })?;
        if index >= p.num_qubits {
            return Err(Error::QubitOutOfRange {
                index,
                num_qubits: p.num_qubits,
            });
        }
        if seen.get(index as usize) {
            return Err(Error::DuplicateTarget { qubit: index });
        }
        seen.set(index as usize, true);
        p.x.set(index as usize, x);
        p.z.set(index as usize, z);
        col += factor.len() + 1;
    }
    Ok(())
}

/// JSON form is the canonical dense literal; the qubit count is implied by
/// the body length, so sparse literals are rejected here (contexts that
/// accept sparse input parse explicitly with a known register size).
impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.emit())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text.bytes().any(|b| b.is_ascii_digit()) {
            return Err(serde::de::Error::custom(
                "expected a dense Pauli literal (sparse form needs an explicit qubit count)",
            ));
        }
        let (_, body_start) = parse_phase_prefix(&text);
        let n = (text.len() - body_start) as u32;
        PauliString::parse(&text, n).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Debug for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.emit())
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.emit())
    }
}
