//! Integer lattices with labelled bases, their finite-index sublattices, and
//! torsion points of the associated real tori `Λ ⊗ R / Λ`.
//!
//! No period matrix is ever stored: a point of a torus is a vector of
//! rational coordinates in the lattice basis, reduced modulo 1.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_vec, mod_one, reduce_all, vector_order, Rat};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr", into = "LatticeRepr")]
pub struct Lattice {
    basis_labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    rank: usize,
    basis_labels: Vec<String>,
}

impl TryFrom<LatticeRepr> for Lattice {
    type Error = Error;
    fn try_from(r: LatticeRepr) -> Result<Self> {
        if r.rank != r.basis_labels.len() {
            return Err(Error::InvalidLattice(format!(
                "rank {} but {} labels",
                r.rank,
                r.basis_labels.len()
            )));
        }
        Lattice::new(r.basis_labels)
    }
}

impl From<Lattice> for LatticeRepr {
    fn from(l: Lattice) -> Self {
        LatticeRepr { rank: l.rank(), basis_labels: l.basis_labels }
    }
}

impl Lattice {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let basis_labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if basis_labels.is_empty() {
            return Err(Error::InvalidLattice("rank must be positive".into()));
        }
        let distinct: BTreeSet<&String> = basis_labels.iter().collect();
        if distinct.len() != basis_labels.len() {
            return Err(Error::InvalidLattice("basis labels must be distinct".into()));
        }
        Ok(Lattice { basis_labels })
    }

    pub fn shared<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        Self::new(labels).map(Arc::new)
    }

    pub fn rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.basis_labels.join(", "))
    }
}

/// Dense integer matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<i64>,
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        IntMatrix::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix { nrows, ncols, data: vec![0; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        Ok(IntMatrix { nrows, ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<i64>]) -> Result<Self> {
        Ok(Self::from_rows(cols.to_vec())?.transpose())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.ncols.max(1)).take(self.nrows).map(<[i64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.nrows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, rhs.nrows, "matrix shapes do not compose");
        let mut out = Self::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        IntMatrix { data: self.data.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| v[j] * self[(i, j)]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.nrows).all(|i| (0..self.ncols).all(|j| i == j || self[(i, j)] == 0))
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.nrows.min(self.ncols)).map(|i| self[(i, i)]).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Option<i64> {
        if !self.is_square() {
            return None;
        }
        let n = self.nrows;
        if n == 0 {
            return Some(1);
        }
        let mut a: Vec<Vec<i128>> =
            self.rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Some(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).ok()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.ncols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries, including trailing zeros.
    pub fn diagonal(&self) -> Vec<i64> {
        self.d.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivot rule: the nonzero entry of smallest absolute value in the remaining
/// block, ties broken by row-major position. Diagonal entries are
/// non-negative and each divides the next.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = pivot(&a, t) else {
                return Smith { u, d: a, v };
            };
            swap_rows(&mut a, &mut u, t, pi);
            swap_cols(&mut a, &mut v, t, pj);

            let p = a[(t, t)];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[(i, t)].div_euclid(p);
                if q != 0 {
                    add_row(&mut a, &mut u, i, t, -q);
                }
                dirty |= a[(i, t)] != 0;
            }
            for j in t + 1..cols {
                let q = a[(t, j)].div_euclid(p);
                if q != 0 {
                    add_col(&mut a, &mut v, j, t, -q);
                }
                dirty |= a[(t, j)] != 0;
            }
            if dirty {
                continue;
            }
            // Row t and column t are clear; enforce divisibility of the block.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a[(i, j)] % p != 0);
            match offender {
                Some((i, _)) => add_row(&mut a, &mut u, t, i, 1),
                None => break,
            }
        }
        if a[(t, t)] < 0 {
            for j in 0..cols {
                a[(t, j)] = -a[(t, j)];
            }
            for j in 0..rows {
                u[(t, j)] = -u[(t, j)];
            }
        }
    }
    Smith { u, d: a, v }
}

fn pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    for i in t..a.nrows() {
        for j in t..a.ncols() {
            let x = a[(i, j)].abs();
            if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                best = Some((x, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for j in 0..a.ncols() {
        let tmp = a[(r1, j)];
        a[(r1, j)] = a[(r2, j)];
        a[(r2, j)] = tmp;
    }
    for j in 0..u.ncols() {
        let tmp = u[(r1, j)];
        u[(r1, j)] = u[(r2, j)];
        u[(r2, j)] = tmp;
    }
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, c1: usize, c2: usize) {
    if c1 == c2 {
        return;
    }
    for i in 0..a.nrows() {
        let tmp = a[(i, c1)];
        a[(i, c1)] = a[(i, c2)];
        a[(i, c2)] = tmp;
    }
    for i in 0..v.nrows() {
        let tmp = v[(i, c1)];
        v[(i, c1)] = v[(i, c2)];
        v[(i, c2)] = tmp;
    }
}

/// row[dst] += c * row[src]
fn add_row(a: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, c: i64) {
    for j in 0..a.ncols() {
        a[(dst, j)] += c * a[(src, j)];
    }
    for j in 0..u.ncols() {
        u[(dst, j)] += c * u[(src, j)];
    }
}

/// col[dst] += c * col[src]
fn add_col(a: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, c: i64) {
    for i in 0..a.nrows() {
        a[(i, dst)] += c * a[(i, src)];
    }
    for i in 0..v.nrows() {
        v[(i, dst)] += c * v[(i, src)];
    }
}

/// A point of the torus `Λ ⊗ R / Λ` with rational coordinates in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionPoint {
    lattice: Arc<Lattice>,
    coords: Vec<Rat>,
}

impl TorsionPoint {
    pub fn new(lattice: Arc<Lattice>, coords: Vec<Rat>) -> Result<Self> {
        if coords.len() != lattice.rank() {
            return Err(Error::IncompatibleLattice(format!(
                "{} coordinates for a rank-{} lattice",
                coords.len(),
                lattice.rank()
            )));
        }
        Ok(TorsionPoint { coords: reduce_all(&coords), lattice })
    }

    pub fn origin(lattice: Arc<Lattice>) -> Self {
        let coords = vec![Rat::zero(); lattice.rank()];
        TorsionPoint { lattice, coords }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn order(&self) -> u64 {
        vector_order(&self.coords)
    }

    pub fn add(&self, other: &TorsionPoint) -> Result<TorsionPoint> {
        same_lattice(&self.lattice, &other.lattice)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| mod_one(a + b)).collect();
        Ok(TorsionPoint { lattice: self.lattice.clone(), coords })
    }

    pub fn neg(&self) -> TorsionPoint {
        let coords = self.coords.iter().map(|&a| mod_one(-a)).collect();
        TorsionPoint { lattice: self.lattice.clone(), coords }
    }

    pub fn scale(&self, k: i64) -> TorsionPoint {
        let coords = self.coords.iter().map(|&a| mod_one(a * k)).collect();
        TorsionPoint { lattice: self.lattice.clone(), coords }
    }
}

impl Serialize for TorsionPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_vec(&self.coords).serialize(s)
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", format_vec(&self.coords).join(", "))
    }
}

pub(crate) fn same_lattice(a: &Arc<Lattice>, b: &Arc<Lattice>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::IncompatibleLattice(format!("{a} vs {b}")))
    }
}

/// Finite abelian group given by invariant factors `d_1 | d_2 | ...` and one
/// generator of each cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<TorsionPoint>,
}

impl FiniteAbelianGroup {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Every element, as the set of all `Σ k_i g_i` with `0 <= k_i < d_i`.
    pub fn elements(&self, lattice: &Arc<Lattice>) -> BTreeSet<TorsionPoint> {
        let mut out = BTreeSet::from([TorsionPoint::origin(lattice.clone())]);
        for (g, &d) in self.generators.iter().zip(&self.invariant_factors) {
            let mut next = BTreeSet::new();
            for x in &out {
                let mut y = x.clone();
                for _ in 0..d {
                    next.insert(y.clone());
                    y = y.add(g).expect("generators share the lattice");
                }
            }
            out = next;
        }
        out
    }
}

/// Finite-index (or at least full-column-rank) sublattice, given by the
/// integer coordinates of its basis vectors in the ambient basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SublatticeEmbedding {
    pub ambient: Arc<Lattice>,
    pub sub: Arc<Lattice>,
    pub matrix: IntMatrix,
}

impl SublatticeEmbedding {
    pub fn new(ambient: Arc<Lattice>, sub: Arc<Lattice>, matrix: IntMatrix) -> Result<Self> {
        if matrix.nrows() != ambient.rank() || matrix.ncols() != sub.rank() {
            return Err(Error::DegenerateEmbedding(format!(
                "matrix is {}x{}, lattices have ranks {} and {}",
                matrix.nrows(),
                matrix.ncols(),
                ambient.rank(),
                sub.rank()
            )));
        }
        if smith_normal_form(&matrix).rank() != sub.rank() {
            return Err(Error::DegenerateEmbedding("columns are linearly dependent".into()));
        }
        Ok(SublatticeEmbedding { ambient, sub, matrix })
    }

    pub fn identity(lattice: Arc<Lattice>) -> Self {
        let n = lattice.rank();
        SublatticeEmbedding { ambient: lattice.clone(), sub: lattice, matrix: IntMatrix::identity(n) }
    }

    /// `k Λ ⊂ Λ`, with the sublattice basis labelled `k·label`.
    pub fn multiplication(lattice: Arc<Lattice>, k: i64) -> Result<Self> {
        let sub = Lattice::shared(lattice.basis_labels().iter().map(|l| format!("{k}·{l}")))?;
        let matrix = IntMatrix::identity(lattice.rank()).scale(k);
        Self::new(lattice, sub, matrix)
    }

    fn require_square(&self) -> Result<()> {
        if !self.matrix.is_square() {
            return Err(Error::DegenerateEmbedding("matrix is not square".into()));
        }
        Ok(())
    }
}

pub fn sublattice_index(e: &SublatticeEmbedding) -> Result<u64> {
    e.require_square()?;
    match e.matrix.det() {
        Some(0) | None => Err(Error::DegenerateEmbedding("singular matrix".into())),
        Some(d) => Ok(d.unsigned_abs()),
    }
}

/// `Λ_B / Λ_A`, realised as the kernel `M⁻¹Z^n / Z^n` of the isogeny
/// between the two tori, in sublattice coordinates.
pub fn quotient_group(e: &SublatticeEmbedding) -> Result<FiniteAbelianGroup> {
    e.require_square()?;
    inverse_image_quotient(&e.sub, &e.matrix)
        .ok_or_else(|| Error::DegenerateEmbedding("singular matrix".into()))
}

/// The group `{x ∈ Q^n : m x ∈ Z^n} / Z^n` for a nonsingular square `m`,
/// with generators `v_i / d_i` read off the Smith form `u m v = d`.
/// Returns `None` when `m` is singular.
pub(crate) fn inverse_image_quotient(
    lattice: &Arc<Lattice>,
    m: &IntMatrix,
) -> Option<FiniteAbelianGroup> {
    let smith = smith_normal_form(m);
    let diag = smith.diagonal();
    if diag.contains(&0) {
        return None;
    }
    let mut factors: Vec<(u64, TorsionPoint)> = Vec::new();
    for (i, &d) in diag.iter().enumerate() {
        if d == 1 {
            continue;
        }
        let coords = smith.v.column(i).into_iter().map(|c| Rat::new(c, d)).collect();
        let g = TorsionPoint::new(lattice.clone(), coords).expect("rank matches");
        factors.push((d as u64, g));
    }
    // Stable fixtures: lexicographic order among generators of equal order.
    factors.sort();
    let (invariant_factors, generators) = factors.into_iter().unzip();
    Some(FiniteAbelianGroup { invariant_factors, generators })
}

/// All `n^rank` points of `(1/n)Λ / Λ`, in lexicographic coordinate order.
pub fn torsion_subgroup(lattice: &Arc<Lattice>, n: u64) -> Result<Vec<TorsionPoint>> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    let n = n as i64;
    let rank = lattice.rank();
    let mut out = Vec::with_capacity((n as usize).pow(rank as u32));
    let mut digits = vec![0i64; rank];
    loop {
        let coords = digits.iter().map(|&k| Rat::new(k, n)).collect();
        out.push(TorsionPoint { lattice: lattice.clone(), coords });
        let mut pos = rank;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Rewrites a point of the ambient vector space, given by (unreduced)
/// coordinates `x` in the ambient basis, in the sublattice basis:
/// solves `M y = x` over `Q` and returns `y` modulo 1.
pub fn coordinates_in_sublattice(x: &[Rat], e: &SublatticeEmbedding) -> Result<TorsionPoint> {
    e.require_square()?;
    if x.len() != e.ambient.rank() {
        return Err(Error::IncompatibleLattice(format!(
            "{} coordinates for ambient rank {}",
            x.len(),
            e.ambient.rank()
        )));
    }
    let smith = smith_normal_form(&e.matrix);
    let diag = smith.diagonal();
    if diag.contains(&0) {
        return Err(Error::DegenerateEmbedding("singular matrix".into()));
    }
    // M = U⁻¹ D V⁻¹  ⇒  y = V D⁻¹ U x
    let ux = smith.u.mul_rat_vec(x);
    let scaled: Vec<Rat> = ux.iter().zip(&diag).map(|(&c, &d)| c / d).collect();
    let y = smith.v.mul_rat_vec(&scaled);
    TorsionPoint::new(e.sub.clone(), y)
}

/// Pushes a sublattice-coordinate point forward to ambient coordinates
/// (`x = M y` modulo 1): the isogeny between the two tori.
pub fn push_forward(y: &TorsionPoint, e: &SublatticeEmbedding) -> Result<TorsionPoint> {
    same_lattice(y.lattice(), &e.sub)?;
    TorsionPoint::new(e.ambient.clone(), e.matrix.mul_rat_vec(y.coords()))
}
