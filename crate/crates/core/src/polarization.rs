//! Alternating integer forms (Riemann forms) on lattices: restriction to
//! sublattices, polarization type, and the map `φ_L` on torsion points.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::character::Character;
use crate::error::{Error, Result};
use crate::lattice::{
    inverse_image_quotient, same_lattice, smith_normal_form, torsion_subgroup, FiniteAbelianGroup,
    IntMatrix, Lattice, SublatticeEmbedding, TorsionPoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternatingForm {
    lattice: Arc<Lattice>,
    matrix: IntMatrix,
}

impl AlternatingForm {
    pub fn new(lattice: Arc<Lattice>, matrix: IntMatrix) -> Result<Self> {
        let n = lattice.rank();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::IncompatibleLattice(format!(
                "{}x{} matrix on a rank-{n} lattice",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.transpose() != matrix.scale(-1) {
            return Err(Error::NotAlternating("matrix is not skew-symmetric".into()));
        }
        Ok(AlternatingForm { lattice, matrix })
    }

    /// The product principal form: `E(b_{2i}, b_{2i+k}) = 1` pairing the
    /// first half of the basis with the second half.
    pub fn standard_principal(lattice: Arc<Lattice>) -> Result<Self> {
        let n = lattice.rank();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidRank(n));
        }
        let h = n / 2;
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..h {
            m[(i, i + h)] = 1;
            m[(i + h, i)] = -1;
        }
        Self::new(lattice, m)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn scale(&self, k: i64) -> Self {
        AlternatingForm { lattice: self.lattice.clone(), matrix: self.matrix.scale(k) }
    }

    pub fn is_nondegenerate(&self) -> bool {
        !matches!(self.matrix.det(), Some(0))
    }

    /// `E(b_i, b_j)` on basis vectors.
    pub fn value(&self, i: usize, j: usize) -> i64 {
        self.matrix[(i, j)]
    }
}

/// Polarization type `(d1, d2)` with `d1 | d2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolarizationType {
    pub d1: u64,
    pub d2: u64,
}

impl Serialize for PolarizationType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.d1, self.d2].serialize(s)
    }
}

impl std::fmt::Display for PolarizationType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// `Mᵀ E M`: the form pulled back to the sublattice.
pub fn restrict_form(f: &AlternatingForm, e: &SublatticeEmbedding) -> Result<AlternatingForm> {
    same_lattice(&f.lattice, &e.ambient)?;
    let m = e.matrix.transpose().mul(&f.matrix).mul(&e.matrix);
    AlternatingForm::new(e.sub.clone(), m)
}

pub fn polarization_type(f: &AlternatingForm) -> Result<PolarizationType> {
    let n = f.lattice.rank();
    if n != 4 {
        return Err(Error::InvalidRank(n));
    }
    let diag = smith_normal_form(&f.matrix).diagonal();
    if diag.contains(&0) {
        return Err(Error::DegenerateForm);
    }
    // Elementary divisors of a skew form come in equal pairs.
    debug_assert!(diag[0] == diag[1] && diag[2] == diag[3], "skew Smith form {diag:?}");
    Ok(PolarizationType { d1: diag[0] as u64, d2: diag[2] as u64 })
}

/// `φ_L(x)`: the character `λ ↦ E(λ, x)` modulo 1.
pub fn phi_l_on_point(f: &AlternatingForm, x: &TorsionPoint) -> Result<Character> {
    same_lattice(&f.lattice, x.lattice())?;
    Character::new(f.lattice.clone(), f.matrix.mul_rat_vec(x.coords()))
}

/// `K(L) = Λ^⊥ / Λ`, the points `x` with `E(·, x)` integral.
pub fn kernel_k_l(f: &AlternatingForm) -> Result<FiniteAbelianGroup> {
    inverse_image_quotient(&f.lattice, &f.matrix).ok_or(Error::DegenerateForm)
}

/// `φ_L` restricted to the `n`-torsion subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiData {
    pub kernel: BTreeSet<TorsionPoint>,
    pub image: BTreeSet<Character>,
}

pub fn phi_n_data(f: &AlternatingForm, n: u64) -> Result<PhiData> {
    if !f.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let mut kernel = BTreeSet::new();
    let mut image = BTreeSet::new();
    for x in torsion_subgroup(&f.lattice, n)? {
        let chi = phi_l_on_point(f, &x)?;
        if chi.is_trivial() {
            kernel.insert(x);
        }
        image.insert(chi);
    }
    Ok(PhiData { kernel, image })
}

/// `φ_2 : A[2] → Â[2]`.
pub fn phi_2_data(f: &AlternatingForm) -> Result<PhiData> {
    if f.lattice.rank() != 4 {
        return Err(Error::InvalidRank(f.lattice.rank()));
    }
    phi_n_data(f, 2)
}
