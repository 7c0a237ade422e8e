//! Display names for the two-torsion characters of the special `(1,2)`
//! surface and its product cover, keyed by value vector. Purely a display
//! layer: nothing computational looks names up except argument parsing.

use std::sync::Arc;

use crate::character::{character_product, Character};
use crate::lattice::Lattice;

/// Sign vectors on `(λ1, λ2, μ1, μ2)`.
pub const CHI_B: [(&str, [i8; 4]); 7] = [
    ("chiB0", [1, 1, 1, 1]),
    ("chiB1", [1, 1, -1, 1]),
    ("chiB2", [-1, 1, 1, 1]),
    ("chiB3", [-1, 1, -1, 1]),
    ("chiB4", [1, 1, 1, -1]),
    ("chiB5", [1, -1, 1, 1]),
    ("chiB6", [1, -1, 1, -1]),
];

/// Sign vectors on `(λ1, λ1+λ2, μ1-μ2, 2μ2)`: the characters coming from `B`.
pub const CHI_A: [(&str, [i8; 4]); 8] = [
    ("chiA0", [1, 1, 1, 1]),
    ("chiA1", [1, 1, -1, 1]),
    ("chiA2", [-1, -1, 1, 1]),
    ("chiA3", [-1, -1, -1, 1]),
    ("chiA5", [1, -1, 1, 1]),
    ("chiA1chiA5", [1, -1, -1, 1]),
    ("chiA2chiA5", [-1, 1, 1, 1]),
    ("chiA3chiA5", [-1, 1, -1, 1]),
];

/// The remaining eight, which do not extend to `Λ_B`.
pub const EPSILON: [(&str, [i8; 4]); 8] = [
    ("eps1", [1, 1, 1, -1]),
    ("eps2", [1, 1, -1, -1]),
    ("eps3", [1, -1, 1, -1]),
    ("eps4", [1, -1, -1, -1]),
    ("eps5", [-1, -1, 1, -1]),
    ("eps6", [-1, -1, -1, -1]),
    ("eps7", [-1, 1, 1, -1]),
    ("eps8", [-1, 1, -1, -1]),
];

fn a_tables() -> impl Iterator<Item = &'static (&'static str, [i8; 4])> {
    CHI_A.iter().chain(EPSILON.iter())
}

fn is_lattice(l: &Lattice, labels: [&str; 4]) -> bool {
    l.basis_labels().iter().map(String::as_str).eq(labels)
}

pub const LABELS_B: [&str; 4] = ["λ1", "λ2", "μ1", "μ2"];
pub const LABELS_A: [&str; 4] = ["λ1", "λ1+λ2", "μ1-μ2", "2μ2"];

/// Name of a character of `Λ_A` or `Λ_B`, when it is one of the tabulated
/// two-torsion characters (products of two `χ^B` are named `chiBiChiBj`).
pub fn name_of(chi: &Character) -> Option<String> {
    let signs = chi.signs()?;
    if is_lattice(chi.lattice(), LABELS_A) {
        return a_tables().find(|(_, s)| s[..] == signs[..]).map(|(n, _)| n.to_string());
    }
    if is_lattice(chi.lattice(), LABELS_B) {
        if let Some((n, _)) = CHI_B.iter().find(|(_, s)| s[..] == signs[..]) {
            return Some(n.to_string());
        }
        let lattice = chi.lattice().clone();
        // every 2-torsion character is χ_i χ_j with i ∈ {1,2,3}, j ∈ {4,5,6}
        for (ni, si) in &CHI_B[1..4] {
            for (nj, sj) in &CHI_B[4..] {
                let a = Character::from_signs(lattice.clone(), si).ok()?;
                let b = Character::from_signs(lattice.clone(), sj).ok()?;
                if character_product(&a, &b).ok()? == *chi {
                    return Some(format!("{ni}{nj}"));
                }
            }
        }
    }
    None
}

/// Look up a tabulated character of `Λ_A` by name; `"trivial"` is accepted
/// as an alias of `chiA0`.
pub fn a_character(lattice: &Arc<Lattice>, name: &str) -> Option<Character> {
    let name = if name == "trivial" { "chiA0" } else { name };
    a_tables()
        .find(|(n, _)| *n == name)
        .and_then(|(_, s)| Character::from_signs(lattice.clone(), s).ok())
}

pub fn b_character(lattice: &Arc<Lattice>, name: &str) -> Option<Character> {
    let name = if name == "trivial" { "chiB0" } else { name };
    CHI_B
        .iter()
        .find(|(n, _)| *n == name)
        .and_then(|(_, s)| Character::from_signs(lattice.clone(), s).ok())
}
