use serde::{Deserialize, Serialize};

/// The fixed instruction alphabet. Anything outside this set is a parse
/// error: agents emit unexpected gates, and a hard failure keeps oracle
/// semantics unambiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    SDag,
    Cx,
    Cz,
    Swap,
    R,
    M,
    Tick,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::I => "I",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::SDag => "S_DAG",
            GateKind::Cx => "CX",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::R => "R",
            GateKind::M => "M",
            GateKind::Tick => "TICK",
        }
    }

    /// Case-insensitive name lookup.
    pub fn from_name(name: &str) -> Option<GateKind> {
        let upper = name.to_ascii_uppercase();
        Some(match upper.as_str() {
            "I" => GateKind::I,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "S_DAG" => GateKind::SDag,
            "CX" => GateKind::Cx,
            "CZ" => GateKind::Cz,
            "SWAP" => GateKind::Swap,
            "R" => GateKind::R,
            "M" => GateKind::M,
            "TICK" => GateKind::Tick,
            _ => return None,
        })
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::Cx | GateKind::Cz | GateKind::Swap)
    }

    /// Gates that act unitarily on the state (everything except R, M, TICK).
    pub fn is_unitary(self) -> bool {
        !matches!(self, GateKind::R | GateKind::M | GateKind::Tick)
    }

    /// Inverse gate within the alphabet; every supported unitary has one.
    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::S => GateKind::SDag,
            GateKind::SDag => GateKind::S,
            other => other,
        }
    }
}

impl std::fmt::Display for GateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
