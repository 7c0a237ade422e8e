//! Torsion characters `Λ → Q/Z`, i.e. torsion points of the dual torus.
//!
//! Characters are stored additively: the value `v` on a basis vector stands
//! for `exp(2πi v)`. Two-torsion characters are shown in the `±1` notation
//! (`0 ↦ 1`, `1/2 ↦ -1`).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{same_lattice, sublattice_index, torsion_subgroup, Lattice, SublatticeEmbedding};
use crate::rational::{format_vec, mod_one, rat, reduce_all, serde_rat_vec, vector_order, Rat};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Character {
    lattice: Arc<Lattice>,
    #[serde(with = "serde_rat_vec")]
    values: Vec<Rat>,
}

impl Character {
    pub fn new(lattice: Arc<Lattice>, values: Vec<Rat>) -> Result<Self> {
        if values.len() != lattice.rank() {
            return Err(Error::IncompatibleLattice(format!(
                "{} values for a rank-{} lattice",
                values.len(),
                lattice.rank()
            )));
        }
        Ok(Character { values: reduce_all(&values), lattice })
    }

    pub fn trivial(lattice: Arc<Lattice>) -> Self {
        let values = vec![Rat::zero(); lattice.rank()];
        Character { lattice, values }
    }

    /// From the `±1` notation.
    pub fn from_signs(lattice: Arc<Lattice>, signs: &[i8]) -> Result<Self> {
        let values = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(Rat::zero()),
                -1 => Ok(rat(1, 2)),
                _ => Err(Error::Parse(format!("sign must be ±1, got {s}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lattice, values)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn order(&self) -> u64 {
        vector_order(&self.values)
    }

    pub fn is_two_torsion(&self) -> bool {
        self.order() <= 2
    }

    /// `±1` vector, if the character is 2-torsion.
    pub fn signs(&self) -> Option<Vec<i8>> {
        self.is_two_torsion()
            .then(|| self.values.iter().map(|v| if v.is_zero() { 1 } else { -1 }).collect())
    }

    pub fn pow(&self, k: i64) -> Character {
        let values = self.values.iter().map(|&v| mod_one(v * k)).collect();
        Character { lattice: self.lattice.clone(), values }
    }

    pub fn inverse(&self) -> Character {
        self.pow(-1)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.signs() {
            Some(s) => {
                let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            None => write!(f, "[{}]", format_vec(&self.values).join(", ")),
        }
    }
}

/// Pointwise product (sum of values modulo 1).
pub fn character_product(a: &Character, b: &Character) -> Result<Character> {
    same_lattice(&a.lattice, &b.lattice)?;
    let values = a.values.iter().zip(&b.values).map(|(x, y)| mod_one(x + y)).collect();
    Ok(Character { lattice: a.lattice.clone(), values })
}

/// Restriction of an ambient character to the sublattice (the dual isogeny).
pub fn restrict_character(chi: &Character, e: &SublatticeEmbedding) -> Result<Character> {
    same_lattice(&chi.lattice, &e.ambient)?;
    let values = e.matrix.transpose().mul_rat_vec(&chi.values);
    Character::new(e.sub.clone(), values)
}

/// All `n`-torsion characters of a lattice, in lexicographic order of values.
pub fn torsion_characters(lattice: &Arc<Lattice>, n: u64) -> Result<Vec<Character>> {
    Ok(torsion_subgroup(lattice, n)?
        .into_iter()
        .map(|p| Character { lattice: lattice.clone(), values: p.coords().to_vec() })
        .collect())
}

/// `n`-torsion ambient characters whose restriction is trivial.
pub fn kernel_of_restriction(e: &SublatticeEmbedding, n: u64) -> Result<BTreeSet<Character>> {
    sublattice_index(e)?;
    let mut out = BTreeSet::new();
    for chi in torsion_characters(&e.ambient, n)? {
        if restrict_character(&chi, e)?.is_trivial() {
            out.insert(chi);
        }
    }
    Ok(out)
}

/// The 2-torsion characters of an index-2 sublattice, split into those that
/// extend to the ambient lattice and those that do not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoTorsionTables {
    pub extendable: BTreeSet<Character>,
    pub new: BTreeSet<Character>,
}

pub fn two_torsion_character_tables(e: &SublatticeEmbedding) -> Result<TwoTorsionTables> {
    let index = sublattice_index(e)?;
    if index != 2 {
        return Err(Error::UnsupportedIndex(index));
    }
    let extendable = torsion_characters(&e.ambient, 2)?
        .iter()
        .map(|chi| restrict_character(chi, e))
        .collect::<Result<BTreeSet<_>>>()?;
    let new = torsion_characters(&e.sub, 2)?
        .into_iter()
        .filter(|chi| !extendable.contains(chi))
        .collect();
    Ok(TwoTorsionTables { extendable, new })
}

/// Every `ξ` with `ξ² = χ` whose order divides `n_bound`.
pub fn square_roots(chi: &Character, n_bound: u64) -> BTreeSet<Character> {
    let half = rat(1, 2);
    let rank = chi.values.len();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << rank) {
        let values: Vec<Rat> = chi
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| if mask >> i & 1 == 1 { v * half + half } else { v * half })
            .collect();
        let xi = Character { lattice: chi.lattice.clone(), values };
        if n_bound > 0 && n_bound.is_multiple_of(xi.order()) {
            out.insert(xi);
        }
    }
    out
}
