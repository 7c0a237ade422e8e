//! Command-line front end. `run` does all the work and returns the exit
//! code with the text for stdout and stderr, so it can be driven in tests.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::bundles::{
    h0_omega_twisted_minus_fibre, jump_h1, r_equals_one, pushforward_decomposition, BundleDecomposition,
    EllipticPoint, PushforwardData,
};
use crate::character::{character_product, kernel_of_restriction, restrict_character, two_torsion_character_tables, Character};
use crate::error::Error;
use crate::fibration::{
    albanese_base_check, double_cover_fibre_genus, example, family_fn, genus_bound_r1,
    isotriviality_obstruction, pen6_derivation, r_from_xiao, slope, IsotrivialityVerdict,
};
use crate::intersection::{
    degree_vs_product_polarization, dot, kernel_dot, kernel_dot_oracle, nef_violation_certificate,
    pen6_lattice, DivisorClass, IntersectionLattice, KernelCurve,
};
use crate::lattice::{sublattice_index, TorsionPoint};
use crate::names::name_of;
use crate::polarization::{phi_2_data, polarization_type};
use crate::rational::{format_rat, parse_rat, rat, Rat};
use crate::report::Report;
use crate::torus::{
    admissible_pairs, build_special_surface, classify, classify_origin_singularity,
    classify_origin_singularity_oracle, k_l_points, moduli_type, phi2_image, rf_pair, OriginSingularity,
    SpecialAbelianSurface,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DOMAIN: i32 = 65;

const APPENDIX_JSON: &str = include_str!("../fixtures/appendix.json");

#[derive(Parser, Debug)]
#[command(name = "abelfib", version, about = "Exact checks on (1,2)-polarized abelian surfaces and irrational fibrations")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Replace the bundled appendix fixture (used to test failure reporting).
    #[arg(long, global = true, value_name = "PATH")]
    pub fixture: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every check on the special (1,2) surface.
    Appendix,
    /// Reproduce a database example.
    Example(ExampleArgs),
    /// The f_n family record.
    FamilyFn {
        #[arg(long)]
        n: u32,
    },
    /// Slope K²_{S/C} / Δ(f).
    Slope {
        #[arg(long, allow_hyphen_values = true)]
        k2: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long)]
        gc: i64,
        #[arg(long)]
        gf: i64,
    },
    /// Genus bound for r = 1, isotriviality obstruction, Riemann–Hurwitz.
    Bounds(BoundsArgs),
    /// Kernel-curve or divisor-class intersection numbers.
    Intersect(IntersectArgs),
    /// Normal-form decompositions of the pushforward and their cohomology.
    Bundle(BundleArgs),
    /// Origin singularity, {r(f1), r(f2)} and moduli type of a twist.
    Classify {
        #[arg(long = "Q")]
        q: String,
        #[arg(long = "Qhalf")]
        qhalf: String,
    },
}

#[derive(Args, Debug)]
pub struct ExampleArgs {
    pub id: String,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "Q")]
    pub q: Option<String>,
    #[arg(long = "Qhalf")]
    pub qhalf: Option<String>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k2: i64,
    #[arg(long, default_value_t = 1)]
    pub chi: i64,
    #[arg(long)]
    pub ample: Option<bool>,
    /// Fibre genus to test against the r = 1 bound.
    #[arg(long)]
    pub gf: Option<i64>,
    #[arg(long)]
    pub g_base: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub branch: Option<i64>,
    /// q(S) and g(C) for the elliptic-base check.
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub gc: Option<u32>,
}

#[derive(Args, Debug)]
pub struct IntersectArgs {
    /// Kernel curve `p,q`; one gives its degree, two their intersection.
    #[arg(long, allow_hyphen_values = true)]
    pub pq: Vec<String>,
    /// Also count solutions modulo M.
    #[arg(long)]
    pub m: Option<i64>,
    /// `pen6` or a JSON file {basis_labels, gram}.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Divisor class such as `2Y2 - Y1 + Z2`.
    #[arg(long, allow_hyphen_values = true)]
    pub class: Vec<String>,
    /// Nef class to test the first class against.
    #[arg(long, allow_hyphen_values = true)]
    pub nef: Option<String>,
}

#[derive(Args, Debug)]
pub struct BundleArgs {
    #[arg(long)]
    pub g: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, default_value = "p", allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, allow_hyphen_values = true)]
    pub torsion: Vec<String>,
    /// JSON {g, r, p, torsion} inline or as a file path.
    #[arg(long)]
    pub spec: Option<String>,
    #[command(subcommand)]
    pub query: Option<BundleQuery>,
}

#[derive(Subcommand, Debug)]
pub enum BundleQuery {
    H0,
    H1,
    Jump {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    RCriterion,
    Twisted {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        eta: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => CliError::Usage(msg),
            other => CliError::Domain(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let code = if report.all_pass() { EXIT_OK } else { EXIT_VERIFY };
            let stdout = if cli.json { report.to_json() + "\n" } else { report.to_text() };
            let stderr = report
                .failing()
                .map(|c| format!("check failed: {}\n", c.name))
                .collect();
            Output { code, stdout, stderr }
        }
        Err(CliError::Usage(msg)) => Output { code: EXIT_USAGE, stdout: String::new(), stderr: format!("usage error: {msg}\n") },
        Err(CliError::Domain(e)) => Output {
            code: EXIT_DOMAIN,
            stdout: String::new(),
            stderr: format!("{}: {e}\n", e.name()),
        },
    }
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Appendix => cmd_appendix(cli.fixture.as_ref()),
        Command::Example(a) => cmd_example(a),
        Command::FamilyFn { n } => cmd_family_fn(*n),
        Command::Slope { k2, chi, gc, gf } => {
            let mut r = Report::new("slope", json!({"K2": k2, "chi": chi, "gC": gc, "gF": gf}));
            r.result("slope", format_rat(&slope(*k2, *chi, *gc, *gf)?));
            Ok(r)
        }
        Command::Bounds(a) => cmd_bounds(a),
        Command::Intersect(a) => cmd_intersect(a),
        Command::Bundle(a) => cmd_bundle(a),
        Command::Classify { q, qhalf } => {
            let s = build_special_surface();
            let (q, qhalf) = (parse_character(&s, q)?, parse_character(&s, qhalf)?);
            let mut r = Report::new("classify", json!({"Q": display_character(&q), "Qhalf": display_character(&qhalf)}));
            fill_classification(&mut r, &s, &q, &qhalf)?;
            Ok(r)
        }
    }
}

/// A named character of `Λ_A` or its values as comma-separated rationals.
pub fn parse_character(s: &SpecialAbelianSurface, text: &str) -> crate::Result<Character> {
    if let Some(c) = s.character(text.trim()) {
        return Ok(c);
    }
    let values = text.split(',').map(parse_rat).collect::<crate::Result<Vec<Rat>>>().map_err(|_| {
        Error::Parse(format!("unknown character {text:?}: expected a name such as chiA1 or values like 0,0,1/2,0"))
    })?;
    Character::new(s.lattice_a().clone(), values).map_err(|e| Error::Parse(e.to_string()))
}

fn display_character(c: &Character) -> Value {
    match name_of(c) {
        Some(n) => json!(n),
        None => json!(c.values().iter().map(format_rat).collect::<Vec<_>>()),
    }
}

fn fill_classification(r: &mut Report, s: &SpecialAbelianSurface, q: &Character, qhalf: &Character) -> CliResult<()> {
    let c = classify(s, q, qhalf)?;
    let closed = classify_origin_singularity(s, q, qhalf)?;
    r.result("classification", &c);
    r.result("closed_form_singularity", closed);
    r.check("closed form agrees with enumeration", closed, c.singularity);
    Ok(())
}

#[derive(Deserialize)]
struct AppendixFixture {
    index: u64,
    #[serde(rename = "type_B")]
    type_b: [u64; 2],
    #[serde(rename = "type_A")]
    type_a: [u64; 2],
    #[serde(rename = "K_L")]
    k_l: Vec<Vec<String>>,
    kernel_of_restriction: Vec<[i8; 4]>,
    chi_b: BTreeMap<String, [i8; 4]>,
    chi_a: BTreeMap<String, [i8; 4]>,
    epsilon: BTreeMap<String, [i8; 4]>,
    im_phi2: Vec<String>,
    node: Vec<String>,
    smooth_trivial_q: Vec<String>,
    #[serde(rename = "smooth_Q")]
    smooth_q: Vec<String>,
}

fn load_fixture(path: Option<&PathBuf>) -> CliResult<AppendixFixture> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?,
        None => APPENDIX_JSON.to_string(),
    };
    // field names in the file use the table names as written (chi_B, smooth_trivial_Q, ...)
    let value: Value = serde_json::from_str(&text).map_err(|e| usage(format!("bad fixture: {e}")))?;
    let value = rename_keys(value, &[("chi_B", "chi_b"), ("chi_A", "chi_a"), ("smooth_trivial_Q", "smooth_trivial_q")]);
    serde_json::from_value(value).map_err(|e| usage(format!("bad fixture: {e}")))
}

fn rename_keys(mut v: Value, pairs: &[(&str, &str)]) -> Value {
    if let Value::Object(m) = &mut v {
        for (from, to) in pairs {
            if let Some(x) = m.remove(*from) {
                m.insert(to.to_string(), x);
            }
        }
    }
    v
}

fn sign_set<'a>(chars: impl IntoIterator<Item = &'a Character>) -> BTreeSet<Vec<i8>> {
    chars.into_iter().filter_map(Character::signs).collect()
}

fn name_set<'a>(chars: impl IntoIterator<Item = &'a Character>) -> BTreeSet<String> {
    chars.into_iter().map(|c| name_of(c).unwrap_or_else(|| c.to_string())).collect()
}

fn cmd_appendix(fixture: Option<&PathBuf>) -> CliResult<Report> {
    let fx = load_fixture(fixture)?;
    let s = build_special_surface();
    let mut r = Report::new("appendix", json!({"fixture": fixture.map(|p| p.display().to_string())}));
    let (a, b) = (s.lattice_a().clone(), s.lattice_b().clone());

    r.check("index of Λ_A in Λ_B", fx.index, sublattice_index(&s.embedding)?);
    let ty = |t: crate::polarization::PolarizationType| [t.d1, t.d2];
    r.check("type of E_B", fx.type_b, ty(polarization_type(&s.form_b)?));
    r.check("type of E_A", fx.type_a, ty(polarization_type(&s.form_a)?));

    let expected_kl: BTreeSet<Vec<String>> = fx.k_l.iter().cloned().collect();
    let actual_kl: BTreeSet<Vec<String>> =
        k_l_points(&s).iter().map(|p| p.coords().iter().map(format_rat).collect()).collect();
    r.check("K(L) = <μ2, (λ1+λ2)/2>", expected_kl, actual_kl);

    let kernel = kernel_of_restriction(&s.embedding, 2)?;
    let expected_kernel: BTreeSet<Vec<i8>> = fx.kernel_of_restriction.iter().map(|s| s.to_vec()).collect();
    r.check("kernel of the dual isogeny on 2-torsion", expected_kernel, sign_set(&kernel));
    let from_b = |n: &str| -> CliResult<Character> {
        let signs = fx.chi_b.get(n).ok_or_else(|| usage(format!("fixture lacks {n}")))?;
        Ok(Character::from_signs(b.clone(), signs)?)
    };
    let generator = character_product(&from_b("chiB1")?, &from_b("chiB4")?)?;
    let nontrivial: Vec<&Character> = kernel.iter().filter(|c| !c.is_trivial()).collect();
    r.check("kernel generated by chiB1 chiB4", vec![generator.signs()], nontrivial.iter().map(|c| c.signs()).collect::<Vec<_>>());

    for i in [0, 1, 2, 3, 5] {
        let (bn, an) = (format!("chiB{i}"), format!("chiA{i}"));
        let expected = fx.chi_a.get(&an).map(|s| s.to_vec());
        let actual = restrict_character(&from_b(&bn)?, &s.embedding)?.signs();
        r.check(&format!("restriction of {bn} is {an}"), expected, actual);
    }

    let tables = two_torsion_character_tables(&s.embedding)?;
    let expected_chi: BTreeSet<Vec<i8>> = fx.chi_a.values().map(|s| s.to_vec()).collect();
    let expected_eps: BTreeSet<Vec<i8>> = fx.epsilon.values().map(|s| s.to_vec()).collect();
    r.check("characters restricted from Λ_B form the chi table", expected_chi, sign_set(&tables.extendable));
    r.check("the remaining characters form the epsilon table", expected_eps, sign_set(&tables.new));

    let phi = phi_2_data(&s.form_a)?;
    let expected_im: BTreeSet<String> = fx.im_phi2.iter().cloned().collect();
    r.check("im φ_2", expected_im, name_set(&phi.image));
    r.check("ker φ_2 = K(L)", true, phi.kernel == k_l_points(&s));
    let half = rat(1, 2);
    let z = Rat::from_integer(0);
    let lambda1_half = TorsionPoint::new(a.clone(), vec![half, z, z, z])?;
    let chi1 = crate::polarization::phi_l_on_point(&s.form_a, &lambda1_half)?;
    r.check("φ(λ1/2) = chiA1", json!("chiA1"), display_character(&chi1));

    appendix_classification(&mut r, &s, &fx)?;
    r.result("admissible_pairs", admissible_pairs(&s).len());
    Ok(r)
}

fn appendix_classification(r: &mut Report, s: &SpecialAbelianSurface, fx: &AppendixFixture) -> CliResult<()> {
    let im = phi2_image(s);
    let mut node = BTreeSet::new();
    let mut smooth_trivial = BTreeSet::new();
    let mut smooth_q = BTreeSet::new();
    let mut disagreements = Vec::new();
    let mut table = Vec::new();
    let mut types_ok = true;
    for (q, qhalf) in admissible_pairs(s) {
        let oracle = classify_origin_singularity_oracle(s, &q, &qhalf)?;
        let closed = classify_origin_singularity(s, &q, &qhalf)?;
        let mt = moduli_type(&q, &qhalf, &im)?;
        let qh_name = name_of(&qhalf).unwrap_or_else(|| qhalf.to_string());
        match (q.is_trivial(), oracle) {
            (true, OriginSingularity::Node) => {
                node.insert(qh_name.clone());
            }
            (true, OriginSingularity::SmoothPoint) => {
                smooth_trivial.insert(qh_name.clone());
            }
            (false, OriginSingularity::SmoothPoint | OriginSingularity::Node) => {
                smooth_q.insert(name_of(&q).unwrap_or_else(|| q.to_string()));
            }
            _ => {}
        }
        // node ⇒ Ib, smooth with trivial Q ⇒ Ia, smooth with nontrivial Q ⇒ II
        let expected_type = match (oracle, q.is_trivial()) {
            (OriginSingularity::Node, _) => Some(crate::torus::ModuliType::Ib),
            (OriginSingularity::SmoothPoint, true) => Some(crate::torus::ModuliType::Ia),
            (OriginSingularity::SmoothPoint, false) => Some(crate::torus::ModuliType::II),
            _ => None,
        };
        if expected_type.is_some_and(|t| t != mt) {
            types_ok = false;
        }
        if closed != oracle {
            disagreements.push(json!({
                "Q": display_character(&q),
                "Qhalf": display_character(&qhalf),
                "closed_form": closed,
                "enumeration": oracle,
            }));
        }
        table.push(json!({
            "Q": display_character(&q),
            "Qhalf": display_character(&qhalf),
            "singularity": oracle,
            "rf_pair": rf_pair(oracle),
            "moduli_type": mt,
        }));
    }
    let set = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
    r.check("node exactly for Q trivial, Q^1/2 = chiA1", set(&fx.node), node);
    r.check("smooth point with Q trivial exactly for the four listed roots", set(&fx.smooth_trivial_q), smooth_trivial);
    r.check("smooth point with Q nontrivial only for Q = chiA1", set(&fx.smooth_q), smooth_q);
    r.check("moduli types of the node and smooth cases", true, types_ok);
    r.check("closed form agrees with enumeration on every admissible pair", Vec::<Value>::new(), disagreements);
    r.result("classification_table", table);
    Ok(())
}

fn cmd_example(a: &ExampleArgs) -> CliResult<Report> {
    if a.id == "family-fn" {
        let n = a.n.ok_or_else(|| usage("example family-fn needs --n"))?;
        return cmd_family_fn(n);
    }
    let entry = example(&a.id)?.ok_or_else(|| {
        usage(format!("unknown example {:?}; known: pen-1, pen-4, pen-5, pen-6, k26-d2, k5-3, k6-4, family-fn", a.id))
    })?;
    let mut r = Report::new("example", json!({"id": a.id, "Q": a.q, "Qhalf": a.qhalf}));
    r.result("record", &entry);
    match entry.id {
        "pen-5" => {
            let gf = entry.fibrations[0].g_f;
            let sl = slope(entry.surface.k2, entry.surface.chi, 1, gf as i64)?;
            r.check("slope", "4", format_rat(&sl));
            r.check("r from the Xiao splitting", entry.r_values(), [Some(r_from_xiao(&entry.surface, gf)?); 2]);
        }
        "pen-6" => {
            let d = pen6_derivation()?;
            r.result("derivation", &d);
            r.check("K_S^2", 5, d.k2);
            r.check("F1^2", 0, d.f1f1);
            r.check("F2^2", 0, d.f2f2);
            r.check("F1 F2", 6, d.f1f2);
            r.check("K_S Y1", 1, d.k_y1);
            r.check("K_S Y2", 1, d.k_y2);
            r.check("(2Y2 - Y1 + Z2) F2", Some(-2), d.certificate_1);
            r.check("r from the nef certificates", [Some(2), Some(2)], d.r);
        }
        "pen-1" | "pen-4" => {
            for (i, f) in entry.fibrations.iter().enumerate() {
                let bound = genus_bound_r1(entry.surface.k2, entry.surface.chi);
                r.check(&format!("g(F{}) within the r = 1 genus bound", i + 1), true, f.g_f as i64 <= bound);
            }
        }
        "k26-d2" => {
            let ob = isotriviality_obstruction(entry.surface.k2, entry.surface.chi, entry.surface.ample_canonical);
            r.check("not isotrivial", IsotrivialityVerdict::NotIsotrivial, ob.verdict);
            if let (Some(q), Some(qh)) = (&a.q, &a.qhalf) {
                let s = build_special_surface();
                let (q, qh) = (parse_character(&s, q)?, parse_character(&s, qh)?);
                fill_classification(&mut r, &s, &q, &qh)?;
            }
        }
        _ => {}
    }
    Ok(r)
}

fn cmd_family_fn(n: u32) -> CliResult<Report> {
    let rec = family_fn(n)?;
    let mut r = Report::new("family-fn", json!({"n": n}));
    let n = n as u64;
    r.check("gF = n^2 + 2", n * n + 2, rec.fibration.g_f as u64);
    r.check("r = n^2 + 1", Some(n * n + 1), rec.fibration.r.map(u64::from));
    r.check("slope", "4", format_rat(&rec.slope));
    let dec = rec.fibration.decomposition.as_ref().expect("family records carry a decomposition");
    r.check("r(f) is not 1", false, r_equals_one(dec)?.0);
    r.result("record", &rec);
    Ok(r)
}

fn cmd_bounds(a: &BoundsArgs) -> CliResult<Report> {
    let mut r = Report::new(
        "bounds",
        json!({"K2": a.k2, "chi": a.chi, "ample": a.ample, "gF": a.gf, "g_base": a.g_base, "branch": a.branch, "q": a.q, "gC": a.gc}),
    );
    let bound = genus_bound_r1(a.k2, a.chi);
    r.result("genus_bound_r1", bound);
    r.result("isotriviality", isotriviality_obstruction(a.k2, a.chi, a.ample));
    if let Some(gf) = a.gf {
        r.result("r1_possible", gf <= bound);
    }
    match (a.g_base, a.branch) {
        (Some(g), Some(b)) => {
            r.result("double_cover_fibre_genus", double_cover_fibre_genus(g, b)?);
        }
        (None, None) => {}
        _ => return Err(usage("--g-base and --branch go together")),
    }
    match (a.q, a.gc) {
        (Some(q), Some(gc)) => {
            r.result("elliptic_base", albanese_base_check(q, gc));
        }
        (None, None) => {}
        _ => return Err(usage("--q and --gc go together")),
    }
    Ok(r)
}

fn parse_pq(s: &str) -> CliResult<KernelCurve> {
    let (p, q) = s.split_once(',').ok_or_else(|| usage(format!("expected p,q but got {s:?}")))?;
    let p: i64 = p.trim().parse().map_err(|_| usage(format!("bad integer in {s:?}")))?;
    let q: i64 = q.trim().parse().map_err(|_| usage(format!("bad integer in {s:?}")))?;
    Ok(KernelCurve::new(p, q)?)
}

fn load_lattice(spec: &str) -> CliResult<Arc<IntersectionLattice>> {
    if spec == "pen6" {
        return Ok(pen6_lattice());
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| usage(format!("cannot read {spec}: {e}")))?
    };
    Ok(Arc::new(IntersectionLattice::from_json(&text)?))
}

fn cmd_intersect(a: &IntersectArgs) -> CliResult<Report> {
    let mut r = Report::new(
        "intersect",
        json!({"pq": a.pq, "m": a.m, "lattice": a.lattice, "class": a.class, "nef": a.nef}),
    );
    match (a.pq.is_empty(), &a.lattice) {
        (false, None) => {
            let curves = a.pq.iter().map(|s| parse_pq(s)).collect::<CliResult<Vec<_>>>()?;
            match curves.as_slice() {
                [c] => {
                    r.result("degree", degree_vs_product_polarization(c)?);
                }
                [c1, c2] => {
                    let d = kernel_dot(c1, c2)?;
                    r.result("intersection", d);
                    if let Some(m) = a.m {
                        let count = kernel_dot_oracle(c1, c2, m)?;
                        r.result("oracle_count", count);
                        let det = (c1.p * c2.q - c1.q * c2.p).abs();
                        if det > 0 && m % det == 0 {
                            r.check("oracle count equals intersection", d, count);
                        }
                    }
                }
                _ => return Err(usage("give one or two --pq values")),
            }
        }
        (true, Some(spec)) => {
            let l = load_lattice(spec)?;
            let classes = a
                .class
                .iter()
                .map(|c| DivisorClass::parse(l.clone(), c))
                .collect::<crate::Result<Vec<_>>>()?;
            match classes.as_slice() {
                [c] => {
                    r.result("intersection", dot(c, c)?);
                }
                [c1, c2] => {
                    r.result("intersection", dot(c1, c2)?);
                }
                _ => return Err(usage("give one or two --class values")),
            }
            if let Some(nef) = &a.nef {
                let nef = DivisorClass::parse(l.clone(), nef)?;
                r.result("nef_violation", nef_violation_certificate(&classes[0], &nef)?);
            }
        }
        _ => return Err(usage("use either --pq or --lattice with --class")),
    }
    Ok(r)
}

fn parse_point(s: &str) -> CliResult<EllipticPoint> {
    Ok(s.parse::<EllipticPoint>()?)
}

fn bundle_data(a: &BundleArgs) -> CliResult<PushforwardData> {
    if let Some(spec) = &a.spec {
        let text = if spec.trim_start().starts_with('{') {
            spec.clone()
        } else {
            std::fs::read_to_string(spec).map_err(|e| usage(format!("cannot read {spec}: {e}")))?
        };
        return serde_json::from_str(&text).map_err(|e| usage(format!("bad bundle spec: {e}")));
    }
    let g = a.g.ok_or_else(|| usage("bundle needs --g and --r, or --spec"))?;
    let r = a.r.ok_or_else(|| usage("bundle needs --g and --r, or --spec"))?;
    let torsion = a.torsion.iter().map(|t| parse_point(t)).collect::<CliResult<Vec<_>>>()?;
    Ok(PushforwardData { g, r, p: parse_point(&a.p)?, torsion })
}

fn cmd_bundle(a: &BundleArgs) -> CliResult<Report> {
    let data = bundle_data(a)?;
    let d: BundleDecomposition = pushforward_decomposition(data.g, data.r, &data.p, &data.torsion)?;
    let mut r = Report::new("bundle", serde_json::to_value(&data).expect("serializable"));
    r.result("decomposition", d.to_string());
    r.result("rank", d.rank());
    r.result("degree", d.degree());
    match &a.query {
        None => {
            r.result("h0", d.h0());
            r.result("h1", d.h1());
        }
        Some(BundleQuery::H0) => {
            r.result("h0", d.h0());
        }
        Some(BundleQuery::H1) => {
            r.result("h1", d.h1());
        }
        Some(BundleQuery::Jump { q }) => {
            r.result("jump_h1", jump_h1(&d, &parse_point(q)?)?);
        }
        Some(BundleQuery::RCriterion) => {
            let (yes, witness) = r_equals_one(&d)?;
            r.result("r_equals_one", yes);
            r.result("witness", witness);
        }
        Some(BundleQuery::Twisted { eta, q }) => {
            r.result("h0", h0_omega_twisted_minus_fibre(&d, &parse_point(eta)?, &parse_point(q)?)?);
        }
    }
    Ok(r)
}
