//! Vector bundles on an elliptic curve through their Atiyah data.
//!
//! An indecomposable bundle of rank `r` and degree `d` is
//! `E(r', d', L') ⊗ F_h` with `h = gcd(r, d)`, `r = h r'`, `d = h d'` and
//! `F_h` the unipotent self-extension of `O`. It is stored as
//! `(r, d, L')` with `L'` a point of the curve: the determinant when
//! `(r, d)` are coprime, the line-bundle twist when `d = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rat, mod_one, parse_rat, vector_order, Rat};

/// A point of `E`: a torsion part in `(Q/Z)²` plus integer multiples of
/// free generators standing for general points.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EllipticPoint {
    torsion: [Rat; 2],
    free: BTreeMap<String, i64>,
}

impl EllipticPoint {
    pub fn origin() -> Self {
        Self::default()
    }

    pub fn torsion(a: Rat, b: Rat) -> Self {
        EllipticPoint { torsion: [mod_one(a), mod_one(b)], free: BTreeMap::new() }
    }

    /// A general point named `name`.
    pub fn free(name: &str) -> Self {
        EllipticPoint { torsion: [Rat::zero(); 2], free: BTreeMap::from([(name.to_string(), 1)]) }
    }

    pub fn torsion_part(&self) -> [Rat; 2] {
        self.torsion
    }

    pub fn is_origin(&self) -> bool {
        self.free.is_empty() && self.torsion.iter().all(Zero::is_zero)
    }

    pub fn is_torsion(&self) -> bool {
        self.free.is_empty()
    }

    pub fn order(&self) -> Option<u64> {
        self.is_torsion().then(|| vector_order(&self.torsion))
    }

    pub fn scale(&self, k: i64) -> Self {
        let free = self
            .free
            .iter()
            .filter(|&(_n, c)| c * k != 0).map(|(n, c)| (n.clone(), c * k))
            .collect();
        EllipticPoint { torsion: [mod_one(self.torsion[0] * k), mod_one(self.torsion[1] * k)], free }
    }
}

impl Add for &EllipticPoint {
    type Output = EllipticPoint;
    fn add(self, rhs: &EllipticPoint) -> EllipticPoint {
        let mut free = self.free.clone();
        for (n, c) in &rhs.free {
            let e = free.entry(n.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                free.remove(n);
            }
        }
        EllipticPoint {
            torsion: [mod_one(self.torsion[0] + rhs.torsion[0]), mod_one(self.torsion[1] + rhs.torsion[1])],
            free,
        }
    }
}

impl Neg for &EllipticPoint {
    type Output = EllipticPoint;
    fn neg(self) -> EllipticPoint {
        self.scale(-1)
    }
}

impl Sub for &EllipticPoint {
    type Output = EllipticPoint;
    fn sub(self, rhs: &EllipticPoint) -> EllipticPoint {
        self + &-rhs
    }
}

impl fmt::Display for EllipticPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (n, &c) in &self.free {
            let body = match c.abs() {
                1 => n.clone(),
                k => format!("{k}{n}"),
            };
            let sign = if c < 0 { "-" } else if parts.is_empty() { "" } else { "+" };
            parts.push(if parts.is_empty() { format!("{sign}{body}") } else { format!("{sign} {body}") });
        }
        if !self.torsion.iter().all(Zero::is_zero) {
            let t = format!("({},{})", format_rat(&self.torsion[0]), format_rat(&self.torsion[1]));
            parts.push(if parts.is_empty() { t } else { format!("+ {t}") });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for EllipticPoint {
    type Err = Error;

    /// `0`, `a,b` (torsion coordinates), `(a,b)`, a name such as `p`, an
    /// integer multiple `3p`, and sums or differences of these.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot read point {s:?}"));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad());
        }
        let mut terms: Vec<&str> = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        for (i, &ch) in bytes.iter().enumerate() {
            let splits = (ch == b'+' || ch == b'-') && i > start;
            let inside_pair = i > 0 && (bytes[i - 1] == b',' || bytes[i - 1] == b'(');
            if splits && !inside_pair {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);

        let mut out = EllipticPoint::origin();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            let body = body.trim_start_matches('(').trim_end_matches(')');
            let point = if let Some((a, b)) = body.split_once(',') {
                EllipticPoint::torsion(parse_rat(a)?, parse_rat(b)?)
            } else if body.chars().all(|c| c.is_ascii_digit() || c == '/') {
                if parse_rat(body)? != Rat::zero() {
                    return Err(bad());
                }
                EllipticPoint::origin()
            } else {
                let split = body.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
                let k: i64 = if split == 0 { 1 } else { body[..split].parse().map_err(|_| bad())? };
                let name = &body[split..];
                if !name.chars().next().is_some_and(char::is_alphabetic) {
                    return Err(bad());
                }
                EllipticPoint::free(name).scale(k)
            };
            out = &out + &point.scale(sign);
        }
        Ok(out)
    }
}

impl Serialize for EllipticPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EllipticPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "BundleRepr")]
pub struct IndecomposableBundle {
    rank: u32,
    degree: i64,
    det_point: EllipticPoint,
}

#[derive(Deserialize)]
struct BundleRepr {
    rank: u32,
    degree: i64,
    det_point: EllipticPoint,
}

impl TryFrom<BundleRepr> for IndecomposableBundle {
    type Error = Error;
    fn try_from(r: BundleRepr) -> Result<Self> {
        IndecomposableBundle::new(r.rank, r.degree, r.det_point)
    }
}

impl IndecomposableBundle {
    pub fn new(rank: u32, degree: i64, det_point: EllipticPoint) -> Result<Self> {
        if rank == 0 {
            return Err(Error::UnsupportedBundle("rank must be at least 1".into()));
        }
        Ok(IndecomposableBundle { rank, degree, det_point })
    }

    /// `O_E`.
    pub fn trivial() -> Self {
        Self::line(0, EllipticPoint::origin())
    }

    /// The line bundle of degree `d` with determinant point `p`.
    pub fn line(degree: i64, p: EllipticPoint) -> Self {
        IndecomposableBundle { rank: 1, degree, det_point: p }
    }

    /// `E_p(r, 1)`.
    pub fn atiyah(r: u32, p: EllipticPoint) -> Result<Self> {
        Self::new(r, 1, p)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn det_point(&self) -> &EllipticPoint {
        &self.det_point
    }

    /// `h = gcd(r, d)`: the size of the unipotent factor.
    pub fn multiplicity(&self) -> u32 {
        (self.rank as i64).gcd(&self.degree) as u32
    }

    fn coprime_rank(&self) -> i64 {
        (self.rank / self.multiplicity()) as i64
    }

    /// Tensor product with a line bundle of degree `e` and class `m`.
    pub fn tensor_line(&self, e: i64, m: &EllipticPoint) -> Self {
        IndecomposableBundle {
            rank: self.rank,
            degree: self.degree + self.rank as i64 * e,
            det_point: &self.det_point + &m.scale(self.coprime_rank()),
        }
    }

    pub fn dual(&self) -> Self {
        IndecomposableBundle { rank: self.rank, degree: -self.degree, det_point: -&self.det_point }
    }

    pub fn h0(&self) -> i64 {
        match self.degree {
            d if d > 0 => d,
            d if d < 0 => 0,
            _ => i64::from(self.det_point.is_origin()),
        }
    }

    /// By Serre duality, `h1(B) = h0(B^*)`.
    pub fn h1(&self) -> i64 {
        self.dual().h0()
    }
}

impl fmt::Display for IndecomposableBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({}, {}; {})", self.rank, self.degree, self.det_point)
    }
}

pub fn h0(b: &IndecomposableBundle) -> i64 {
    b.h0()
}

pub fn h1(b: &IndecomposableBundle) -> i64 {
    b.h1()
}

/// `b ⊗ O(q)` for a degree-0 class `q`.
pub fn twist(b: &IndecomposableBundle, q: &EllipticPoint) -> IndecomposableBundle {
    b.tensor_line(0, q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDecomposition {
    pub summands: Vec<IndecomposableBundle>,
}

impl BundleDecomposition {
    pub fn new(summands: Vec<IndecomposableBundle>) -> Self {
        BundleDecomposition { summands }
    }

    pub fn rank(&self) -> u32 {
        self.summands.iter().map(|b| b.rank).sum()
    }

    pub fn degree(&self) -> i64 {
        self.summands.iter().map(|b| b.degree).sum()
    }

    pub fn h0(&self) -> i64 {
        self.summands.iter().map(IndecomposableBundle::h0).sum()
    }

    pub fn h1(&self) -> i64 {
        self.summands.iter().map(IndecomposableBundle::h1).sum()
    }

    pub fn tensor_line(&self, e: i64, m: &EllipticPoint) -> Self {
        BundleDecomposition { summands: self.summands.iter().map(|b| b.tensor_line(e, m)).collect() }
    }

    pub fn twist(&self, q: &EllipticPoint) -> Self {
        self.tensor_line(0, q)
    }

    /// Summands as a sorted multiset, for comparisons up to reordering.
    pub fn sorted(&self) -> Vec<IndecomposableBundle> {
        let mut v = self.summands.clone();
        v.sort();
        v
    }
}

impl fmt::Display for BundleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// The data of `O ⊕ E_p(r,1) ⊕ Q_2 ⊕ … ⊕ Q_{g−r}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushforwardData {
    pub g: u32,
    pub r: u32,
    pub p: EllipticPoint,
    #[serde(default)]
    pub torsion: Vec<EllipticPoint>,
}

fn check_torsion_list(torsion: &[EllipticPoint]) -> Result<()> {
    for (i, t) in torsion.iter().enumerate() {
        if !t.is_torsion() {
            return Err(Error::InvalidTorsionList(format!("{t} is not a torsion point")));
        }
        if t.is_origin() {
            return Err(Error::InvalidTorsionList("trivial entry".into()));
        }
        if torsion[..i].contains(t) {
            return Err(Error::InvalidTorsionList(format!("{t} appears twice")));
        }
    }
    Ok(())
}

pub fn pushforward_decomposition(
    g: u32,
    r: u32,
    p: &EllipticPoint,
    torsion: &[EllipticPoint],
) -> Result<BundleDecomposition> {
    if g < 2 {
        return Err(Error::InvalidShape(format!("fibre genus {g} < 2")));
    }
    if r < 1 || r > g - 1 {
        return Err(Error::InvalidShape(format!("rank {r} outside 1..={}", g - 1)));
    }
    let expected = (g - r - 1) as usize;
    if torsion.len() != expected {
        return Err(Error::InvalidShape(format!(
            "{} torsion summands given, {expected} needed for g = {g}, r = {r}",
            torsion.len()
        )));
    }
    check_torsion_list(torsion)?;
    let mut summands = vec![IndecomposableBundle::trivial(), IndecomposableBundle::atiyah(r, p.clone())?];
    summands.extend(torsion.iter().map(|t| IndecomposableBundle::line(0, t.clone())));
    Ok(BundleDecomposition { summands })
}

/// Recognizes the pushforward normal form and returns its data.
pub fn pushforward_shape(d: &BundleDecomposition) -> Result<PushforwardData> {
    let bad = |why: &str| Error::InvalidShape(format!("{d}: {why}"));
    let atiyah: Vec<_> = d.summands.iter().filter(|b| b.degree == 1).collect();
    if atiyah.len() != 1 {
        return Err(bad("expected exactly one degree-1 summand"));
    }
    let trivial = IndecomposableBundle::trivial();
    let mut seen_trivial = false;
    let mut torsion = Vec::new();
    for b in &d.summands {
        if b.degree == 1 {
            continue;
        }
        if b.rank != 1 || b.degree != 0 {
            return Err(bad("extra summands must be degree-0 line bundles"));
        }
        if *b == trivial && !seen_trivial {
            seen_trivial = true;
        } else {
            torsion.push(b.det_point.clone());
        }
    }
    if !seen_trivial {
        return Err(bad("no trivial summand"));
    }
    check_torsion_list(&torsion)?;
    Ok(PushforwardData { g: d.rank(), r: atiyah[0].rank, p: atiyah[0].det_point.clone(), torsion })
}

/// `h0(S, K_S + f^*η − F_q)`, computed on the base as
/// `h0(E, f_*ω_S ⊗ O(η) ⊗ O(−q))`. The twist has degree −1, so only a
/// rank-1 Atiyah summand can contribute.
pub fn h0_omega_twisted_minus_fibre(
    d: &BundleDecomposition,
    eta: &EllipticPoint,
    q: &EllipticPoint,
) -> Result<i64> {
    pushforward_shape(d)?;
    Ok(d.tensor_line(-1, &(eta - q)).h0())
}

/// Whether `r(f) = 1`, with the unique point `p` such that `|K_S − F_p|`
/// is nonempty.
pub fn r_equals_one(d: &BundleDecomposition) -> Result<(bool, Option<EllipticPoint>)> {
    let shape = pushforward_shape(d)?;
    let origin = EllipticPoint::origin();
    let mut candidates: Vec<EllipticPoint> = d.summands.iter().map(|b| b.det_point.clone()).collect();
    candidates.sort();
    candidates.dedup();
    let mut hits = Vec::new();
    for q in candidates {
        if h0_omega_twisted_minus_fibre(d, &origin, &q)? == 1 {
            hits.push(q);
        }
    }
    match hits.as_slice() {
        [p] if shape.r == 1 && *p == shape.p => Ok((true, Some(p.clone()))),
        [] => Ok((false, None)),
        _ => Err(Error::InvalidShape(format!("{d}: ambiguous witnesses {hits:?}"))),
    }
}

/// `h1(S, ω_S ⊗ f^*Q)` by Leray: `h1(E, f_*ω_S ⊗ Q) + h0(E, R¹f_*ω_S ⊗ Q)`
/// with `R¹f_*ω_S = O_E`.
pub fn jump_h1(d: &BundleDecomposition, q: &EllipticPoint) -> Result<i64> {
    pushforward_shape(d)?;
    Ok(d.twist(q).h1() + i64::from(q.is_origin()))
}

/// Shape of `f_*ω_{S/C}` for a slope-4 fibration with `q(S) > g(C)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XiaoShape {
    pub trivial_summands: u32,
    pub semistable_rank: u32,
    pub semistable_degree: i64,
    /// Rank of the Atiyah summand when the semistable part is forced to be
    /// `E_p(gF−1, 1)` (elliptic base, degree 1).
    pub atiyah_rank: Option<u32>,
}

/// `chi` is `χ(O_S)`, needed for `deg f_*ω_{S/C} = χ(O_S) − (g(C)−1)(g(F)−1)`.
pub fn xiao_structure(g_f: u32, slope: Rat, q_surface: u32, g_c: u32, chi: i64) -> Result<XiaoShape> {
    if slope != Rat::from_integer(4) {
        return Err(Error::NotApplicable(format!("slope {} is not 4", format_rat(&slope))));
    }
    if q_surface <= g_c {
        return Err(Error::NotApplicable(format!("q(S) = {q_surface} does not exceed g(C) = {g_c}")));
    }
    if q_surface - g_c != 1 {
        return Err(Error::ContradictsXiao(format!("q(S) − g(C) = {} ≠ 1", q_surface - g_c)));
    }
    if g_f < 2 {
        return Err(Error::InvalidShape(format!("fibre genus {g_f} < 2")));
    }
    let degree = chi - (g_c as i64 - 1) * (g_f as i64 - 1);
    Ok(XiaoShape {
        trivial_summands: 1,
        semistable_rank: g_f - 1,
        semistable_degree: degree,
        atiyah_rank: (g_c == 1 && degree == 1).then_some(g_f - 1),
    })
}
