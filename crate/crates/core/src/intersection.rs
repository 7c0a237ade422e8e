//! Intersection pairings on labeled divisor classes, and the numerical
//! calculus of kernel curves on a product of two elliptic curves.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr")]
pub struct IntersectionLattice {
    basis_labels: Vec<String>,
    gram: IntMatrix,
}

#[derive(Deserialize)]
struct LatticeRepr {
    basis_labels: Vec<String>,
    gram: IntMatrix,
}

impl TryFrom<LatticeRepr> for IntersectionLattice {
    type Error = Error;
    fn try_from(r: LatticeRepr) -> Result<Self> {
        IntersectionLattice::new(r.basis_labels, r.gram)
    }
}

impl IntersectionLattice {
    pub fn new(basis_labels: Vec<String>, gram: IntMatrix) -> Result<Self> {
        let n = basis_labels.len();
        if n == 0 || gram.nrows() != n || gram.ncols() != n {
            return Err(Error::InvalidIntersection(format!(
                "{} labels for a {}x{} gram matrix",
                n,
                gram.nrows(),
                gram.ncols()
            )));
        }
        if gram.transpose() != gram {
            return Err(Error::InvalidIntersection("gram matrix is not symmetric".into()));
        }
        Ok(IntersectionLattice { basis_labels, gram })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidIntersection(e.to_string()))
    }

    pub fn rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis_labels.iter().position(|l| l == label)
    }

    /// `a·b` on basis elements given by label.
    pub fn pairing(&self, a: &str, b: &str) -> Option<i64> {
        Some(self.gram[(self.index_of(a)?, self.index_of(b)?)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    #[serde(skip)]
    lattice: Arc<IntersectionLattice>,
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(lattice: Arc<IntersectionLattice>, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != lattice.rank() {
            return Err(Error::IncompatibleLattice(format!(
                "{} coefficients for a rank-{} lattice",
                coeffs.len(),
                lattice.rank()
            )));
        }
        Ok(DivisorClass { lattice, coeffs })
    }

    pub fn zero(lattice: Arc<IntersectionLattice>) -> Self {
        let coeffs = vec![0; lattice.rank()];
        DivisorClass { lattice, coeffs }
    }

    pub fn basis(lattice: Arc<IntersectionLattice>, label: &str) -> Result<Self> {
        let i = lattice
            .index_of(label)
            .ok_or_else(|| Error::InvalidIntersection(format!("no basis class {label}")))?;
        let mut c = Self::zero(lattice);
        c.coeffs[i] = 1;
        Ok(c)
    }

    /// Parses `"2Y2 - Y1 + Z2"`-style combinations of basis labels.
    pub fn parse(lattice: Arc<IntersectionLattice>, expr: &str) -> Result<Self> {
        let mut out = Self::zero(lattice.clone());
        let cleaned = expr.replace(' ', "");
        let bad = || Error::Parse(format!("cannot read divisor class {expr:?}"));
        if cleaned.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            let split = body.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
            let coeff: i64 = if split == 0 { 1 } else { body[..split].parse().map_err(|_| bad())? };
            let idx = lattice.index_of(&body[split..]).ok_or_else(bad)?;
            out.coeffs[idx] += sign * coeff;
        }
        Ok(out)
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(DivisorClass { lattice: self.lattice.clone(), coeffs })
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        let coeffs = self.coeffs.iter().map(|a| k * a).collect();
        DivisorClass { lattice: self.lattice.clone(), coeffs }
    }

    pub fn sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.add(&other.scale(-1))
    }

    fn check(&self, other: &DivisorClass) -> Result<()> {
        if self.lattice != other.lattice {
            return Err(Error::IncompatibleLattice("divisor classes on different lattices".into()));
        }
        Ok(())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, label) in self.coeffs.iter().zip(self.lattice.basis_labels()) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let sep = if first { "" } else { " " };
            let mag = c.abs();
            let num = if mag == 1 { String::new() } else { mag.to_string() };
            if first {
                write!(f, "{sign}{num}{label}")?;
            } else {
                write!(f, "{sep}{sign} {num}{label}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub fn dot(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    a.check(b)?;
    let g = a.lattice.gram();
    let mut s = 0;
    for (i, ai) in a.coeffs.iter().enumerate() {
        for (j, bj) in b.coeffs.iter().enumerate() {
            s += ai * g[(i, j)] * bj;
        }
    }
    Ok(s)
}

const PEN6_JSON: &str = include_str!("../fixtures/pen6_lattice.json");

/// Basis `(Y1, Y2, Z1, Z2, W)`; the unstated products are solved from
/// orthogonality of each fibre to its components (see the fixture).
pub fn pen6_lattice() -> Arc<IntersectionLattice> {
    Arc::new(IntersectionLattice::from_json(PEN6_JSON).expect("bundled fixture"))
}

/// `F1 = 3Y1 + 2Z1 + Z2 + W`.
pub fn pen6_f1(l: &Arc<IntersectionLattice>) -> DivisorClass {
    DivisorClass::parse(l.clone(), "3Y1 + 2Z1 + Z2 + W").expect("pen-6 basis")
}

/// `F2 = 3Y2 + Z1 + 2Z2 + W`.
pub fn pen6_f2(l: &Arc<IntersectionLattice>) -> DivisorClass {
    DivisorClass::parse(l.clone(), "3Y2 + Z1 + 2Z2 + W").expect("pen-6 basis")
}

/// `K_S = 2Y1 + 2Y2 + 2Z1 + 2Z2 + W`.
pub fn serrano_canonical_pen6(l: &Arc<IntersectionLattice>) -> DivisorClass {
    DivisorClass::parse(l.clone(), "2Y1 + 2Y2 + 2Z1 + 2Z2 + W").expect("pen-6 basis")
}

/// `d·nef` when negative: a certificate that `d` is not nef.
pub fn nef_violation_certificate(d: &DivisorClass, nef: &DivisorClass) -> Result<Option<i64>> {
    let v = dot(d, nef)?;
    Ok((v < 0).then_some(v))
}

/// The connected kernel of `(x, y) ↦ px + qy` on `E × E`, as a numerical class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct KernelCurve {
    pub p: i64,
    pub q: i64,
}

impl KernelCurve {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p.gcd(&q) != 1 {
            return Err(Error::NonPrimitive(p, q));
        }
        Ok(KernelCurve { p, q })
    }
}

impl fmt::Display for KernelCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

fn det(c1: &KernelCurve, c2: &KernelCurve) -> i64 {
    c1.p * c2.q - c1.q * c2.p
}

fn check_primitive(c: &KernelCurve) -> Result<()> {
    KernelCurve::new(c.p, c.q).map(|_| ())
}

pub fn kernel_dot(c1: &KernelCurve, c2: &KernelCurve) -> Result<i64> {
    check_primitive(c1)?;
    check_primitive(c2)?;
    Ok(det(c1, c2).pow(2))
}

/// Degree against the product polarization `{0}×E + E×{0}`.
pub fn degree_vs_product_polarization(c: &KernelCurve) -> Result<i64> {
    let f1 = KernelCurve { p: 1, q: 0 };
    let f2 = KernelCurve { p: 0, q: 1 };
    Ok(kernel_dot(c, &f1)? + kernel_dot(c, &f2)?)
}

/// Counts `(x1, x2, y1, y2) ∈ (Z/m)^4` with `p_i x + q_i y ≡ t_i` in both
/// real coordinates, where the target is the image of the tuple `(1,0,0,1)`.
pub fn kernel_dot_oracle(c1: &KernelCurve, c2: &KernelCurve, m: i64) -> Result<i64> {
    check_primitive(c1)?;
    check_primitive(c2)?;
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let image = |x: [i64; 2], y: [i64; 2]| -> [i64; 4] {
        [
            (c1.p * x[0] + c1.q * y[0]).rem_euclid(m),
            (c1.p * x[1] + c1.q * y[1]).rem_euclid(m),
            (c2.p * x[0] + c2.q * y[0]).rem_euclid(m),
            (c2.p * x[1] + c2.q * y[1]).rem_euclid(m),
        ]
    };
    let target = image([1, 0], [0, 1]);
    let mut count = 0;
    for x1 in 0..m {
        for x2 in 0..m {
            for y1 in 0..m {
                for y2 in 0..m {
                    if image([x1, x2], [y1, y2]) == target {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}
