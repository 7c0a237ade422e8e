//! Numerical invariants of irrational fibrations `f: S → C` on surfaces
//! with `p_g = q = 2`, the `f_n` family and the database of examples.

use num_integer::Integer;
use serde::Serialize;

use crate::bundles::{pushforward_decomposition, pushforward_shape, xiao_structure, BundleDecomposition, EllipticPoint, XiaoShape};
use crate::error::{Error, Result};
use crate::intersection::{
    dot, nef_violation_certificate, pen6_f1, pen6_f2, pen6_lattice, serrano_canonical_pen6, DivisorClass,
    KernelCurve, degree_vs_product_polarization,
};
use crate::rational::{serde_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub pg: u32,
    pub q: u32,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub chi: i64,
    pub albanese_degree: Option<u32>,
    pub ample_canonical: Option<bool>,
}

impl SurfaceInvariants {
    pub fn new(pg: u32, q: u32, k2: i64) -> Self {
        SurfaceInvariants {
            pg,
            q,
            k2,
            chi: 1 - q as i64 + pg as i64,
            albanese_degree: None,
            ample_canonical: None,
        }
    }

    /// `p_g = q = 2`, hence `χ = 1`.
    pub fn pg_q_2(k2: i64) -> Self {
        Self::new(2, 2, k2)
    }

    pub fn with_albanese_degree(mut self, d: u32) -> Self {
        self.albanese_degree = Some(d);
        self
    }

    pub fn with_ample_canonical(mut self, ample: bool) -> Self {
        self.ample_canonical = Some(ample);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibrationRecord {
    #[serde(rename = "gC")]
    pub g_c: u32,
    #[serde(rename = "gF")]
    pub g_f: u32,
    pub isotrivial: Option<bool>,
    pub r: Option<u32>,
    pub decomposition: Option<BundleDecomposition>,
    pub group_order: Option<u32>,
}

impl FibrationRecord {
    /// Validates `1 ≤ r ≤ gF − 1` and, when given, that the decomposition
    /// has total rank `gF` and Atiyah rank `r`.
    pub fn new(
        g_c: u32,
        g_f: u32,
        r: Option<u32>,
        decomposition: Option<BundleDecomposition>,
    ) -> Result<Self> {
        if g_f < 2 {
            return Err(Error::InvalidShape(format!("fibre genus {g_f} < 2")));
        }
        if let Some(r) = r {
            if r < 1 || r > g_f - 1 {
                return Err(Error::InvalidShape(format!("r = {r} outside 1..={}", g_f - 1)));
            }
        }
        if let Some(d) = &decomposition {
            let shape = pushforward_shape(d)?;
            if shape.g != g_f || Some(shape.r) != r {
                return Err(Error::InvalidShape(format!(
                    "decomposition of rank {} with Atiyah rank {} does not match gF = {g_f}, r = {r:?}",
                    shape.g, shape.r
                )));
            }
        }
        Ok(FibrationRecord { g_c, g_f, isotrivial: None, r, decomposition, group_order: None })
    }

    pub fn isotrivial(mut self, group_order: u32) -> Self {
        self.isotrivial = Some(true);
        self.group_order = Some(group_order);
        self
    }

    pub fn non_isotrivial(mut self) -> Self {
        self.isotrivial = Some(false);
        self
    }
}

/// `λ(f) = K²_{S/C} / Δ(f)`.
pub fn slope(k2: i64, chi: i64, g_c: i64, g_f: i64) -> Result<Rat> {
    let b = (g_c - 1) * (g_f - 1);
    let delta = chi - b;
    if delta == 0 {
        return Err(Error::UndefinedSlope);
    }
    Ok(Rat::new(k2 - 8 * b, delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsotrivialityVerdict {
    NoObstruction,
    NotIsotrivialIfNotIsogenous,
    NotIsotrivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub verdict: IsotrivialityVerdict,
    pub inequality: Option<String>,
}

/// An isotrivial fibration forces `K² ≤ 8χ − 2` unless `S` is isogenous
/// to a product, and `K² ≤ 8χ − 5` when `K_S` is also ample.
pub fn isotriviality_obstruction(k2: i64, chi: i64, ample: Option<bool>) -> Obstruction {
    if ample == Some(true) && 8 * chi - 5 < k2 && k2 < 8 * chi {
        return Obstruction {
            verdict: IsotrivialityVerdict::NotIsotrivial,
            inequality: Some(format!("K_S ample and 8χ−5 = {} < K² = {k2} < 8χ = {}", 8 * chi - 5, 8 * chi)),
        };
    }
    if k2 > 8 * chi - 2 {
        return Obstruction {
            verdict: IsotrivialityVerdict::NotIsotrivialIfNotIsogenous,
            inequality: Some(format!("K² = {k2} > 8χ−2 = {}", 8 * chi - 2)),
        };
    }
    Obstruction { verdict: IsotrivialityVerdict::NoObstruction, inequality: None }
}

/// Largest fibre genus allowed when `r(f) = 1`, from `2g − 2 = K·F ≤ K²`
/// and `K² ≤ 9χ`.
pub fn genus_bound_r1(k2: i64, chi: i64) -> i64 {
    Integer::div_floor(&k2.min(9 * chi), &2) + 1
}

/// Riemann–Hurwitz for a double cover branched at `branch_points` points.
pub fn double_cover_fibre_genus(g_base: i64, branch_points: i64) -> Result<i64> {
    if branch_points < 0 || branch_points % 2 != 0 {
        return Err(Error::InvalidBranching(branch_points));
    }
    Ok(2 * g_base - 1 + branch_points / 2)
}

/// `q = 2` with an irrational pencil forces an elliptic base.
pub fn albanese_base_check(q_surface: u32, g_base: u32) -> bool {
    q_surface == 2 && g_base == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRecord {
    pub n: u32,
    pub surface: SurfaceInvariants,
    pub fibration: FibrationRecord,
    #[serde(with = "serde_rat")]
    pub slope: Rat,
    pub xiao: XiaoShape,
    pub isotriviality: Obstruction,
}

/// The fibration `f_n` on the double cover of `E × E` branched over a
/// smooth curve in `|2L|`: fibre is the double cover of the kernel curve
/// of `(1, n)`, branched at its `2(n²+1)` points on the branch curve.
pub fn family_fn(n: u32) -> Result<FamilyRecord> {
    if n == 0 {
        return Err(Error::NotApplicable("the family starts at n = 1".into()));
    }
    let surface = SurfaceInvariants::pg_q_2(4).with_albanese_degree(2);
    let g_c = 1;
    if !albanese_base_check(surface.q, g_c) {
        return Err(Error::NotApplicable("base must be elliptic".into()));
    }
    let en_l = degree_vs_product_polarization(&KernelCurve::new(1, n as i64)?)?;
    let g_f = double_cover_fibre_genus(1, 2 * en_l)? as u32;
    let slope = slope(surface.k2, surface.chi, g_c as i64, g_f as i64)?;
    let xiao = xiao_structure(g_f, slope, surface.q, g_c, surface.chi)?;
    let r = xiao
        .atiyah_rank
        .ok_or_else(|| Error::InvalidShape("semistable part is not an Atiyah bundle".into()))?;
    let decomposition = pushforward_decomposition(g_f, r, &EllipticPoint::free("p"), &[])?;
    let fibration = FibrationRecord::new(g_c, g_f, Some(r), Some(decomposition))?;
    let isotriviality = isotriviality_obstruction(surface.k2, surface.chi, surface.ample_canonical);
    Ok(FamilyRecord { n, surface, fibration, slope, xiao, isotriviality })
}

/// How the `r` values of a database entry were obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "detail")]
pub enum RSource {
    /// Stored value with its justification.
    Stored(String),
    /// Recomputed here; the detail names the route.
    Derived(String),
    /// Depends on the choice of twist; see `classify`.
    ByTwist(String),
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleEntry {
    pub id: &'static str,
    pub surface: SurfaceInvariants,
    pub fibrations: [FibrationRecord; 2],
    pub group: Option<&'static str>,
    pub m1: Vec<u32>,
    pub m2: Vec<u32>,
    #[serde(rename = "F1F2")]
    pub f1f2: Option<i64>,
    pub r_source: RSource,
}

impl ExampleEntry {
    pub fn r_values(&self) -> [Option<u32>; 2] {
        [self.fibrations[0].r, self.fibrations[1].r]
    }
}

fn isotrivial_pair(g: [u32; 2], order: u32, r: [Option<u32>; 2]) -> Result<[FibrationRecord; 2]> {
    // f_i : S → C_i/G has fibre C_{3−i}
    Ok([
        FibrationRecord::new(1, g[1], r[0], None)?.isotrivial(order),
        FibrationRecord::new(1, g[0], r[1], None)?.isotrivial(order),
    ])
}

/// `r` for the slope-4 examples: Xiao splitting plus the Atiyah normal form.
pub fn r_from_xiao(surface: &SurfaceInvariants, g_f: u32) -> Result<u32> {
    let s = slope(surface.k2, surface.chi, 1, g_f as i64)?;
    xiao_structure(g_f, s, surface.q, 1, surface.chi)?
        .atiyah_rank
        .ok_or_else(|| Error::InvalidShape("semistable part is not an Atiyah bundle".into()))
}

/// Checks on the pen-6 configuration and the resulting `r(f_1)`, `r(f_2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pen6Derivation {
    #[serde(rename = "K2")]
    pub k2: i64,
    #[serde(rename = "F1F1")]
    pub f1f1: i64,
    #[serde(rename = "F2F2")]
    pub f2f2: i64,
    #[serde(rename = "F1F2")]
    pub f1f2: i64,
    #[serde(rename = "KY1")]
    pub k_y1: i64,
    #[serde(rename = "KY2")]
    pub k_y2: i64,
    pub certificate_1: Option<i64>,
    pub certificate_2: Option<i64>,
    pub r: [Option<u32>; 2],
}

/// `K_S = F_i + R_i` with `R_1 = 2Y2 − Y1 + Z2` (and symmetrically `R_2`).
/// If `r(f_i) = 1` then `R_i` would be effective, which a negative
/// intersection with the other (nef) fibre rules out; genus 3 then leaves
/// `r = 2`.
pub fn pen6_derivation() -> Result<Pen6Derivation> {
    let l = pen6_lattice();
    let (f1, f2) = (pen6_f1(&l), pen6_f2(&l));
    let k = serrano_canonical_pen6(&l);
    let y1 = DivisorClass::basis(l.clone(), "Y1")?;
    let y2 = DivisorClass::basis(l.clone(), "Y2")?;
    let r1 = k.sub(&f1)?;
    let r2 = k.sub(&f2)?;
    let certificate_1 = nef_violation_certificate(&r1, &f2)?;
    let certificate_2 = nef_violation_certificate(&r2, &f1)?;
    let g_f = 3;
    let r_of = |cert: Option<i64>| cert.map(|_| g_f - 1);
    Ok(Pen6Derivation {
        k2: dot(&k, &k)?,
        f1f1: dot(&f1, &f1)?,
        f2f2: dot(&f2, &f2)?,
        f1f2: dot(&f1, &f2)?,
        k_y1: dot(&k, &y1)?,
        k_y2: dot(&k, &y2)?,
        certificate_1,
        certificate_2,
        r: [r_of(certificate_1), r_of(certificate_2)],
    })
}

/// The curated examples. Isotrivial ones are `(C1 × C2)/G` with fibrations
/// onto the elliptic curves `C_i/G`.
pub fn isotrivial_examples() -> Result<Vec<ExampleEntry>> {
    let pen5_surface = SurfaceInvariants::pg_q_2(4);
    let pen5_r = r_from_xiao(&pen5_surface, 3)?;
    let pen6 = pen6_derivation()?;
    Ok(vec![
        ExampleEntry {
            id: "pen-1",
            surface: SurfaceInvariants::pg_q_2(8),
            fibrations: isotrivial_pair([3, 3], 4, [Some(1), Some(1)])?,
            group: Some("Z/2 x Z/2"),
            m1: vec![2, 2],
            m2: vec![2, 2],
            f1f2: Some(4),
            r_source: RSource::Stored(
                "G abelian: the pushforward splits into a direct sum of line bundles".into(),
            ),
        },
        ExampleEntry {
            id: "pen-4",
            surface: SurfaceInvariants::pg_q_2(4),
            fibrations: isotrivial_pair([2, 2], 2, [Some(1), Some(1)])?,
            group: Some("Z/2"),
            m1: vec![2, 2],
            m2: vec![2, 2],
            f1f2: Some(2),
            r_source: RSource::Derived("g(F) = 2 forces r = 1".into()),
        },
        ExampleEntry {
            id: "pen-5",
            surface: pen5_surface,
            fibrations: isotrivial_pair([3, 3], 8, [Some(pen5_r), Some(pen5_r)])?,
            group: Some("Q8 or D8"),
            m1: vec![2],
            m2: vec![2],
            f1f2: Some(8),
            r_source: RSource::Derived("slope 4, Xiao splitting, Atiyah normal form".into()),
        },
        ExampleEntry {
            id: "pen-6",
            surface: SurfaceInvariants::pg_q_2(pen6.k2),
            fibrations: isotrivial_pair([3, 3], pen6.f1f2 as u32, pen6.r)?,
            group: Some("S3"),
            m1: vec![3],
            m2: vec![3],
            f1f2: Some(pen6.f1f2),
            r_source: RSource::Derived("nef-violation certificate on the pen-6 lattice".into()),
        },
        ExampleEntry {
            id: "k26-d2",
            surface: SurfaceInvariants::pg_q_2(6).with_albanese_degree(2).with_ample_canonical(true),
            fibrations: [
                FibrationRecord::new(1, 3, None, None)?.non_isotrivial(),
                FibrationRecord::new(1, 3, None, None)?.non_isotrivial(),
            ],
            group: None,
            m1: vec![],
            m2: vec![],
            f1f2: Some(4),
            r_source: RSource::ByTwist("classify the pair (Q, Q^{1/2}) to get {r(f1), r(f2)}".into()),
        },
        ExampleEntry {
            id: "k5-3",
            surface: SurfaceInvariants::pg_q_2(5).with_albanese_degree(3),
            fibrations: [
                FibrationRecord::new(1, 3, None, None)?.non_isotrivial(),
                FibrationRecord::new(1, 3, None, None)?.non_isotrivial(),
            ],
            group: None,
            m1: vec![],
            m2: vec![],
            f1f2: None,
            r_source: RSource::Unknown("not computed".into()),
        },
        ExampleEntry {
            id: "k6-4",
            surface: SurfaceInvariants::pg_q_2(6).with_albanese_degree(4),
            fibrations: [
                FibrationRecord::new(1, 4, None, None)?.non_isotrivial(),
                FibrationRecord::new(1, 4, None, None)?.non_isotrivial(),
            ],
            group: None,
            m1: vec![],
            m2: vec![],
            f1f2: None,
            r_source: RSource::Unknown("not computed".into()),
        },
    ])
}

pub fn example(id: &str) -> Result<Option<ExampleEntry>> {
    Ok(isotrivial_examples()?.into_iter().find(|e| e.id == id))
}

/// The infinite families on surfaces with `(K², deg α)` in
/// `{(5,3), (6,2), (6,4)}`: only the qualitative statement is recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalFamily {
    #[serde(rename = "K2")]
    pub k2: i64,
    pub albanese_degree: u32,
    pub r: &'static str,
}

pub fn diagonal_families() -> Vec<DiagonalFamily> {
    [(5, 3), (6, 2), (6, 4)]
        .into_iter()
        .map(|(k2, albanese_degree)| DiagonalFamily {
            k2,
            albanese_degree,
            r: ">= 2 for all but finitely many n; fibre genus strictly increasing",
        })
        .collect()
}
