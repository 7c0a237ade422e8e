//! The special `(1,2)`-polarized surface `A` as a double cover of the
//! principally polarized product `B = E1 × E2`, and the classification of
//! reducible divisors through the origin in `|L ⊗ Q^{1/2}|`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::character::{character_product, square_roots, Character};
use crate::error::{Error, Result};
use crate::lattice::{
    same_lattice, sublattice_index, torsion_subgroup, IntMatrix, Lattice, SublatticeEmbedding,
    TorsionPoint,
};
use crate::names::{self, LABELS_A, LABELS_B};
use crate::polarization::{
    kernel_k_l, phi_2_data, phi_l_on_point, polarization_type, restrict_form, AlternatingForm,
    PolarizationType,
};
use crate::rational::{format_rat, rat, reduce_all, Rat};

/// Torsion level of the exhaustive search. Every admissible `Q^{1/2}` has
/// order dividing 4 and `K(L) ⊂ A[2]`, so whole fibres of `φ_L` are found.
pub const SEARCH_LEVEL: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialAbelianSurface {
    pub embedding: SublatticeEmbedding,
    pub form_b: AlternatingForm,
    pub form_a: AlternatingForm,
}

impl SpecialAbelianSurface {
    /// Checks index 2, type `(1,2)` and that `form_a` is the restriction.
    pub fn new(embedding: SublatticeEmbedding, form_b: AlternatingForm) -> Result<Self> {
        let index = sublattice_index(&embedding)?;
        if index != 2 {
            return Err(Error::UnsupportedIndex(index));
        }
        let form_a = restrict_form(&form_b, &embedding)?;
        let ty = polarization_type(&form_a)?;
        if ty != (PolarizationType { d1: 1, d2: 2 }) {
            return Err(Error::InvalidLattice(format!("restricted form has type {ty}")));
        }
        Ok(SpecialAbelianSurface { embedding, form_b, form_a })
    }

    pub fn lattice_a(&self) -> &Arc<Lattice> {
        &self.embedding.sub
    }

    pub fn lattice_b(&self) -> &Arc<Lattice> {
        &self.embedding.ambient
    }

    /// Named character of `Λ_A` (`chiA1`, `eps3`, `trivial`, ...).
    pub fn character(&self, name: &str) -> Option<Character> {
        names::a_character(self.lattice_a(), name)
    }
}

/// `Λ_A = λ1 Z ⊕ (λ1+λ2) Z ⊕ (μ1−μ2) Z ⊕ 2μ2 Z` inside `Λ_B` with the
/// product principal form.
pub fn build_special_surface() -> SpecialAbelianSurface {
    let b = Lattice::shared(LABELS_B).expect("labels");
    let a = Lattice::shared(LABELS_A).expect("labels");
    let m = IntMatrix::from_columns(&[
        vec![1, 0, 0, 0],
        vec![1, 1, 0, 0],
        vec![0, 0, 1, -1],
        vec![0, 0, 0, 2],
    ])
    .expect("shape");
    let embedding = SublatticeEmbedding::new(b.clone(), a, m).expect("full rank");
    let form_b = AlternatingForm::standard_principal(b).expect("even rank");
    SpecialAbelianSurface::new(embedding, form_b).expect("special surface invariants")
}

/// A point `(y1, y2)` of `E1 × E2`; `e_i` holds the coefficients of `τ_i`
/// and `1`, reduced to `[0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductPoint {
    pub e1: [Rat; 2],
    pub e2: [Rat; 2],
}

impl ProductPoint {
    pub fn new(e1: [Rat; 2], e2: [Rat; 2]) -> Self {
        let r1 = reduce_all(&e1);
        let r2 = reduce_all(&e2);
        ProductPoint { e1: [r1[0], r1[1]], e2: [r2[0], r2[1]] }
    }
}

fn fmt_pair(p: &[Rat; 2]) -> [String; 2] {
    [format_rat(&p[0]), format_rat(&p[1])]
}

impl Serialize for ProductPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [fmt_pair(&self.e1), fmt_pair(&self.e2)].serialize(s)
    }
}

impl fmt::Display for ProductPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = fmt_pair(&self.e1);
        let [c, d] = fmt_pair(&self.e2);
        write!(f, "(({a}, {b}), ({c}, {d}))")
    }
}

/// The four ways a reducible member of `|t_x^* L|` can pass through 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReducibleCase {
    /// `ψ(x) = (y1, 0)`
    One,
    /// `ψ(x) = (y1, τ2/2)`
    Two,
    /// `ψ(x) = (0, y2)`
    Three,
    /// `ψ(x) = (τ1/2, y2)`
    Four,
}

impl ReducibleCase {
    pub fn number(self) -> u8 {
        match self {
            ReducibleCase::One => 1,
            ReducibleCase::Two => 2,
            ReducibleCase::Three => 3,
            ReducibleCase::Four => 4,
        }
    }
}

impl Serialize for ReducibleCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginSingularity {
    None,
    SmoothPoint,
    Node,
}

impl fmt::Display for OriginSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OriginSingularity::None => "none",
            OriginSingularity::SmoothPoint => "smooth_point",
            OriginSingularity::Node => "node",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModuliType {
    Ia,
    Ib,
    II,
}

impl fmt::Display for ModuliType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `ψ(x)` for `x` given in `Λ_A` coordinates, split along `(λ1, μ1 | λ2, μ2)`.
pub fn psi_image(s: &SpecialAbelianSurface, x: &TorsionPoint) -> Result<ProductPoint> {
    same_lattice(x.lattice(), s.lattice_a())?;
    let y = s.embedding.matrix.mul_rat_vec(x.coords());
    Ok(ProductPoint::new([y[0], y[2]], [y[1], y[3]]))
}

pub fn reducible_through_origin(y: &ProductPoint) -> BTreeSet<ReducibleCase> {
    let zero = [Rat::zero(), Rat::zero()];
    let half_tau = [rat(1, 2), Rat::zero()];
    let mut out = BTreeSet::new();
    if y.e2 == zero {
        out.insert(ReducibleCase::One);
    }
    if y.e2 == half_tau {
        out.insert(ReducibleCase::Two);
    }
    if y.e1 == zero {
        out.insert(ReducibleCase::Three);
    }
    if y.e1 == half_tau {
        out.insert(ReducibleCase::Four);
    }
    out
}

/// Cases (1) and (4) come from translates of one reducible divisor, (2) and
/// (3) from the other. Both components through 0 means a node.
fn is_node(cases: &BTreeSet<ReducibleCase>) -> bool {
    use ReducibleCase::*;
    (cases.contains(&One) && cases.contains(&Four)) || (cases.contains(&Two) && cases.contains(&Three))
}

/// All `x ∈ A[n_bound]` with `φ_L(x) = ξ`.
pub fn translation_points_for_twist(
    s: &SpecialAbelianSurface,
    xi: &Character,
    n_bound: u64,
) -> Result<BTreeSet<TorsionPoint>> {
    same_lattice(xi.lattice(), s.lattice_a())?;
    let mut out = BTreeSet::new();
    for x in torsion_subgroup(s.lattice_a(), n_bound)? {
        if phi_l_on_point(&s.form_a, &x)? == *xi {
            out.insert(x);
        }
    }
    Ok(out)
}

/// `im φ_2`, including the trivial character.
pub fn phi2_image(s: &SpecialAbelianSurface) -> BTreeSet<Character> {
    phi_2_data(&s.form_a).expect("rank 4").image
}

fn check_twist(s: &SpecialAbelianSurface, q: &Character, qhalf: &Character) -> Result<()> {
    same_lattice(q.lattice(), s.lattice_a())?;
    same_lattice(qhalf.lattice(), s.lattice_a())?;
    if !phi2_image(s).contains(q) {
        return Err(Error::InvalidTwist(format!("Q = {q} is not in im φ_2")));
    }
    if character_product(qhalf, qhalf)? != *q {
        return Err(Error::InvalidTwist(format!("{qhalf} does not square to Q = {q}")));
    }
    if q.is_trivial() && qhalf.is_trivial() {
        return Err(Error::InvalidTwist("Q^{1/2} must be nontrivial when Q is".into()));
    }
    Ok(())
}

/// Closed-form classification by the listed cases.
pub fn classify_origin_singularity(
    s: &SpecialAbelianSurface,
    q: &Character,
    qhalf: &Character,
) -> Result<OriginSingularity> {
    check_twist(s, q, qhalf)?;
    let named = |n: &str| s.character(n).expect("tabulated");
    if q.is_trivial() {
        if *qhalf == named("chiA1") {
            return Ok(OriginSingularity::Node);
        }
        if ["chiA2", "chiA3", "chiA5", "chiA1chiA5"].iter().any(|n| *qhalf == named(n)) {
            return Ok(OriginSingularity::SmoothPoint);
        }
        return Ok(OriginSingularity::None);
    }
    if *q == named("chiA1") {
        return Ok(OriginSingularity::SmoothPoint);
    }
    Ok(OriginSingularity::None)
}

/// A translation point together with its image in `B` and matching cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x: TorsionPoint,
    pub psi: ProductPoint,
    pub cases: BTreeSet<ReducibleCase>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub singularity: OriginSingularity,
    pub witnesses: Vec<Witness>,
}

/// Enumerates the translation points at level 4 and reads the answer off
/// the reducible cases of each `ψ(x)`.
pub fn classify_origin_singularity_oracle_detail(
    s: &SpecialAbelianSurface,
    q: &Character,
    qhalf: &Character,
) -> Result<OracleResult> {
    check_twist(s, q, qhalf)?;
    let mut singularity = OriginSingularity::None;
    let mut witnesses = Vec::new();
    for x in translation_points_for_twist(s, qhalf, SEARCH_LEVEL)? {
        let psi = psi_image(s, &x)?;
        let cases = reducible_through_origin(&psi);
        if cases.is_empty() {
            continue;
        }
        let here = if is_node(&cases) { OriginSingularity::Node } else { OriginSingularity::SmoothPoint };
        singularity = singularity.max(here);
        witnesses.push(Witness { x, psi, cases });
    }
    Ok(OracleResult { singularity, witnesses })
}

pub fn classify_origin_singularity_oracle(
    s: &SpecialAbelianSurface,
    q: &Character,
    qhalf: &Character,
) -> Result<OriginSingularity> {
    Ok(classify_origin_singularity_oracle_detail(s, q, qhalf)?.singularity)
}

/// Every `(Q, Q^{1/2})` with `Q ∈ im φ_2`, `(Q^{1/2})² = Q`, `Q^{1/2}` of
/// order dividing 4 and nontrivial when `Q` is trivial.
pub fn admissible_pairs(s: &SpecialAbelianSurface) -> Vec<(Character, Character)> {
    let mut out = Vec::new();
    for q in phi2_image(s) {
        for qhalf in square_roots(&q, SEARCH_LEVEL) {
            if q.is_trivial() && qhalf.is_trivial() {
                continue;
            }
            out.push((q.clone(), qhalf));
        }
    }
    out
}

/// `{r(f1), r(f2)}`, sorted.
pub fn rf_pair(sing: OriginSingularity) -> [u32; 2] {
    match sing {
        OriginSingularity::None => [2, 2],
        OriginSingularity::Node => [1, 1],
        OriginSingularity::SmoothPoint => [1, 2],
    }
}

pub fn moduli_type(
    q: &Character,
    qhalf: &Character,
    phi2_image: &BTreeSet<Character>,
) -> Result<ModuliType> {
    same_lattice(q.lattice(), qhalf.lattice())?;
    if !phi2_image.contains(q) {
        return Err(Error::InvalidTwist(format!("Q = {q} is not in im φ_2")));
    }
    if character_product(qhalf, qhalf)? != *q {
        return Err(Error::InvalidTwist(format!("{qhalf} does not square to Q = {q}")));
    }
    if !q.is_trivial() {
        return Ok(ModuliType::II);
    }
    if !qhalf.is_trivial() && phi2_image.contains(qhalf) {
        Ok(ModuliType::Ib)
    } else {
        Ok(ModuliType::Ia)
    }
}

/// The full classification of one twist, as reported by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    #[serde(rename = "Q")]
    pub q: Character,
    #[serde(rename = "Qhalf")]
    pub qhalf: Character,
    pub singularity: OriginSingularity,
    pub rf_pair: [u32; 2],
    pub moduli_type: ModuliType,
    pub witness_points: Vec<Witness>,
}

pub fn classify(s: &SpecialAbelianSurface, q: &Character, qhalf: &Character) -> Result<Classification> {
    let oracle = classify_origin_singularity_oracle_detail(s, q, qhalf)?;
    Ok(Classification {
        q: q.clone(),
        qhalf: qhalf.clone(),
        singularity: oracle.singularity,
        rf_pair: rf_pair(oracle.singularity),
        moduli_type: moduli_type(q, qhalf, &phi2_image(s))?,
        witness_points: oracle.witnesses,
    })
}

/// `K(L)` of the special surface as a set.
pub fn k_l_points(s: &SpecialAbelianSurface) -> BTreeSet<TorsionPoint> {
    kernel_k_l(&s.form_a).expect("nondegenerate").elements(s.lattice_a())
}
