//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; the process fails if any does.

use std::collections::BTreeSet;
use std::time::Instant;

use abelfib::bundles::*;
use abelfib::character::*;
use abelfib::fibration::*;
use abelfib::intersection::*;
use abelfib::lattice::*;
use abelfib::names::{name_of, EPSILON};
use abelfib::polarization::*;
use abelfib::rational::{rat, Rat};
use abelfib::torus::*;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn names(set: &BTreeSet<Character>) -> BTreeSet<String> {
    set.iter().map(|c| name_of(c).unwrap_or_else(|| c.to_string())).collect()
}

fn set_of(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn c1_type_and_index() -> Outcome {
    let s = build_special_surface();
    let t = polarization_type(&s.form_a).map_err(|e| e.to_string())?;
    ensure!((t.d1, t.d2) == (1, 2), "type {t}");
    let idx = sublattice_index(&s.embedding).map_err(|e| e.to_string())?;
    ensure!(idx == 2, "index {idx}");
    Ok(())
}

fn c2_k_of_l() -> Outcome {
    let s = build_special_surface();
    let k = kernel_k_l(&s.form_a).map_err(|e| e.to_string())?;
    let got = k.elements(s.lattice_a());
    // 0, μ2, (λ1+λ2)/2 and their sum, in the Λ_A basis
    let h = rat(1, 2);
    let z = Rat::from_integer(0);
    let want: BTreeSet<TorsionPoint> = [[z, z, z, z], [z, z, z, h], [z, h, z, z], [z, h, z, h]]
        .into_iter()
        .map(|c| TorsionPoint::new(s.lattice_a().clone(), c.to_vec()).unwrap())
        .collect();
    ensure!(got == want, "K(L) = {:?}", got.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    let mu2 = coordinates_in_sublattice(&[z, z, z, h * 2], &s.embedding).map_err(|e| e.to_string())?;
    let half_sum = coordinates_in_sublattice(&[h, h, z, z], &s.embedding).map_err(|e| e.to_string())?;
    ensure!(want.contains(&mu2) && want.contains(&half_sum), "μ2 or (λ1+λ2)/2 missing from K(L)");
    Ok(())
}

fn c3_kernel_of_restriction() -> Outcome {
    let s = build_special_surface();
    let k = kernel_of_restriction(&s.embedding, 2).map_err(|e| e.to_string())?;
    let signs: BTreeSet<Vec<i8>> = k.iter().filter_map(Character::signs).collect();
    let want: BTreeSet<Vec<i8>> = [vec![1, 1, 1, 1], vec![1, 1, -1, -1]].into();
    ensure!(signs == want, "kernel {signs:?}");
    Ok(())
}

fn c4_image_of_phi2() -> Outcome {
    let s = build_special_surface();
    let data = phi_2_data(&s.form_a).map_err(|e| e.to_string())?;
    let got = names(&data.image);
    let want = set_of(&["chiA0", "chiA1", "chiA2chiA5", "chiA3chiA5"]);
    ensure!(got == want, "image {got:?}");
    Ok(())
}

fn c5_character_tables() -> Outcome {
    let s = build_special_surface();
    let t = two_torsion_character_tables(&s.embedding).map_err(|e| e.to_string())?;
    let chi = set_of(&["chiA0", "chiA1", "chiA2", "chiA3", "chiA5", "chiA1chiA5", "chiA2chiA5", "chiA3chiA5"]);
    ensure!(names(&t.extendable) == chi, "extendable {:?}", names(&t.extendable));
    let eps: BTreeSet<Vec<i8>> = EPSILON.iter().map(|(_, v)| v.to_vec()).collect();
    let new: BTreeSet<Vec<i8>> = t.new.iter().filter_map(Character::signs).collect();
    ensure!(new == eps && t.new.len() == 8, "new {new:?}");
    ensure!(t.extendable.is_disjoint(&t.new), "tables overlap");
    Ok(())
}

fn c6_classification() -> Outcome {
    let s = build_special_surface();
    let im = phi2_image(&s);
    let mut problems = Vec::new();
    let mut node = BTreeSet::new();
    let mut smooth_a = BTreeSet::new();
    let mut smooth_b = 0;
    let pairs = admissible_pairs(&s);
    for (q, qh) in &pairs {
        let oracle = classify_origin_singularity_oracle(&s, q, qh).map_err(|e| e.to_string())?;
        let closed = classify_origin_singularity(&s, q, qh).map_err(|e| e.to_string())?;
        let label = format!("(Q={}, Qhalf={})", name_of(q).unwrap_or_else(|| q.to_string()), qh);
        if oracle != closed {
            problems.push(format!("{label}: closed form {closed}, enumeration {oracle}"));
        }
        let mt = moduli_type(q, qh, &im).map_err(|e| e.to_string())?;
        let rf = rf_pair(oracle);
        match oracle {
            OriginSingularity::Node => {
                node.insert(name_of(qh).unwrap_or_default());
                if !q.is_trivial() || mt != ModuliType::Ib || rf != [1, 1] {
                    problems.push(format!("{label}: node with {mt} {rf:?}"));
                }
            }
            OriginSingularity::SmoothPoint if q.is_trivial() => {
                smooth_a.insert(name_of(qh).unwrap_or_default());
                if mt != ModuliType::Ia || rf != [1, 2] {
                    problems.push(format!("{label}: smooth (a) with {mt} {rf:?}"));
                }
            }
            OriginSingularity::SmoothPoint => {
                smooth_b += 1;
                if name_of(q).as_deref() != Some("chiA1") || mt != ModuliType::II || rf != [1, 2] {
                    problems.push(format!("{label}: smooth (b) with {mt} {rf:?}"));
                }
            }
            OriginSingularity::None => {
                if rf != [2, 2] {
                    problems.push(format!("{label}: none with {rf:?}"));
                }
            }
        }
    }
    if node != set_of(&["chiA1"]) {
        problems.push(format!("node set {node:?}"));
    }
    if smooth_a != set_of(&["chiA2", "chiA3", "chiA5", "chiA1chiA5"]) {
        problems.push(format!("smooth (a) set {smooth_a:?}"));
    }
    let roots_of_chi1 = pairs.iter().filter(|(q, _)| name_of(q).as_deref() == Some("chiA1")).count();
    if smooth_b != roots_of_chi1 {
        problems.push(format!("smooth (b) for {smooth_b} of {roots_of_chi1} roots of chiA1"));
    }
    ensure!(problems.is_empty(), "{} of {} pairs: {}", problems.len(), pairs.len(), problems.join("; "));
    Ok(())
}

fn c7_kernel_curves() -> Outcome {
    for n in 1..=20i64 {
        let c = KernelCurve::new(1, n).unwrap();
        let total = kernel_dot(&c, &KernelCurve::new(1, 0).unwrap()).unwrap()
            + kernel_dot(&c, &KernelCurve::new(0, 1).unwrap()).unwrap();
        ensure!(total == n * n + 1, "n = {n}: {total}");
    }
    let prim: Vec<(i64, i64)> =
        (-6i64..=6).flat_map(|p| (-6i64..=6).map(move |q| (p, q))).filter(|(p, q)| p.gcd(q) == 1).collect();
    let mut checked = 0;
    for &(p1, q1) in &prim {
        for &(p2, q2) in &prim {
            let det = (p1 * q2 - q1 * p2).abs();
            if !(1..=6).contains(&det) {
                continue;
            }
            let (a, b) = (KernelCurve::new(p1, q1).unwrap(), KernelCurve::new(p2, q2).unwrap());
            let d = kernel_dot(&a, &b).unwrap();
            let o = kernel_dot_oracle(&a, &b, det.max(2)).unwrap();
            ensure!(d == o, "{a} . {b}: {d} vs count {o}");
            checked += 1;
        }
    }
    ensure!(checked > 0, "no pairs");
    Ok(())
}

fn c8_family() -> Outcome {
    for n in 1..=20u32 {
        let rec = family_fn(n).map_err(|e| e.to_string())?;
        let (gf, r) = (rec.fibration.g_f, rec.fibration.r);
        ensure!(gf == n * n + 2 && r == Some(n * n + 1), "n = {n}: gF {gf}, r {r:?}");
        ensure!(rec.slope == Rat::from_integer(4), "n = {n}: slope {}", rec.slope);
        let x = xiao_structure(gf, rec.slope, 2, 1, 1).map_err(|e| e.to_string())?;
        ensure!(x.atiyah_rank == Some(n * n + 1), "n = {n}: {x:?}");
    }
    Ok(())
}

fn c9_pen6() -> Outcome {
    let d = pen6_derivation().map_err(|e| e.to_string())?;
    ensure!(d.k2 == 5, "K^2 {}", d.k2);
    ensure!(d.f1f1 == 0 && d.f2f2 == 0, "F^2 {} {}", d.f1f1, d.f2f2);
    ensure!(d.f1f2 == 6, "F1F2 {}", d.f1f2);
    ensure!(d.k_y1 == 1 && d.k_y2 == 1, "KY {} {}", d.k_y1, d.k_y2);
    let l = pen6_lattice();
    let test = DivisorClass::parse(l.clone(), "2Y2 - Y1 + Z2").unwrap();
    let v = dot(&test, &pen6_f2(&l)).unwrap();
    ensure!(v == -2, "(2Y2 - Y1 + Z2).F2 = {v}");
    let cert = nef_violation_certificate(&test, &pen6_f2(&l)).unwrap();
    ensure!(cert == Some(-2), "certificate {cert:?}");
    ensure!(d.r[0] == Some(2), "r1 {:?}", d.r[0]);
    let rec = example("pen-6").unwrap().unwrap();
    ensure!(rec.r_values()[0] == Some(2), "recorded {:?}", rec.r_values());
    Ok(())
}

fn torsion_points_up_to(order: u64) -> Vec<EllipticPoint> {
    let mut out = BTreeSet::new();
    for n in 1..=order as i64 {
        for a in 0..n {
            for b in 0..n {
                out.insert(EllipticPoint::torsion(rat(a, n), rat(b, n)));
            }
        }
    }
    out.into_iter().collect()
}

fn random_point(rng: &mut ChaCha8Rng) -> EllipticPoint {
    let t = EllipticPoint::torsion(rat(rng.gen_range(0..6), 6), rat(rng.gen_range(0..6), 6));
    if rng.gen_bool(0.5) {
        &t + &EllipticPoint::free("p").scale(rng.gen_range(-3..=3))
    } else {
        t
    }
}

fn c10_bundles() -> Outcome {
    let p = EllipticPoint::free("p");
    let qs = torsion_points_up_to(6);
    for r in 1..=10 {
        let e = IndecomposableBundle::atiyah(r, p.clone()).unwrap();
        for q in &qs {
            let t = e.tensor_line(0, q);
            ensure!(t.h0() == 1 && t.h1() == 0, "E_p({r},1) ⊗ {q}: h0 {} h1 {}", t.h0(), t.h1());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let b = IndecomposableBundle::new(rng.gen_range(1..=8), rng.gen_range(-12..=-1), random_point(&mut rng)).unwrap();
        ensure!(b.h0() == 0, "{b}: h0 {}", b.h0());
    }
    for _ in 0..200 {
        let b = IndecomposableBundle::new(rng.gen_range(1..=8), rng.gen_range(-12..=12), random_point(&mut rng)).unwrap();
        ensure!(b.h0() - b.h1() == b.degree(), "{b}: h0 {} h1 {}", b.h0(), b.h1());
    }
    Ok(())
}

fn c11_jump() -> Outcome {
    let t1 = EllipticPoint::torsion(rat(1, 2), rat(0, 1));
    let t2 = EllipticPoint::torsion(rat(1, 3), rat(2, 3));
    let d = pushforward_decomposition(5, 2, &EllipticPoint::free("p"), &[t1.clone(), t2.clone()]).map_err(|e| e.to_string())?;
    let j = |q: &EllipticPoint| jump_h1(&d, q).unwrap();
    ensure!(j(&EllipticPoint::origin()) == 2, "origin {}", j(&EllipticPoint::origin()));
    for t in [&t1, &t2] {
        let inv = -t;
        ensure!(j(&inv) == 1, "at {inv}: {}", j(&inv));
    }
    let others = [
        EllipticPoint::torsion(rat(0, 1), rat(1, 2)),
        EllipticPoint::torsion(rat(1, 2), rat(1, 2)),
        EllipticPoint::torsion(rat(1, 3), rat(0, 1)),
        EllipticPoint::torsion(rat(1, 4), rat(0, 1)),
        EllipticPoint::torsion(rat(1, 5), rat(3, 5)),
    ];
    for q in &others {
        ensure!(j(q) == 0, "at {q}: {}", j(q));
    }
    Ok(())
}

fn c12_numerics() -> Outcome {
    let ob = isotriviality_obstruction(6, 1, Some(true));
    ensure!(ob.verdict == IsotrivialityVerdict::NotIsotrivial, "{:?}", ob.verdict);
    let b = genus_bound_r1(9, 1);
    ensure!(b == 5, "bound {b}");
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("polarization type (1,2) and index 2", c1_type_and_index),
        ("K(L) = <μ2, (λ1+λ2)/2>", c2_k_of_l),
        ("kernel of restriction on 2-torsion", c3_kernel_of_restriction),
        ("image of φ_2", c4_image_of_phi2),
        ("chi and epsilon tables", c5_character_tables),
        ("closed form equals enumeration and reproduces the case table", c6_classification),
        ("kernel-curve intersections", c7_kernel_curves),
        ("f_n family", c8_family),
        ("pen-6 re-derivation", c9_pen6),
        ("bundle cohomology", c10_bundles),
        ("h1 jump table", c11_jump),
        ("isotriviality window and genus bound", c12_numerics),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({ms} ms)\n    {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
