use std::collections::BTreeSet;
use std::sync::Arc;

use abelfib::bundles::*;
use abelfib::character::*;
use abelfib::fibration::*;
use abelfib::intersection::*;
use abelfib::lattice::*;
use abelfib::polarization::*;
use abelfib::rational::{rat, Rat};
use abelfib::torus::*;
use num_integer::Integer;
use proptest::prelude::*;

fn lattice(n: usize) -> Arc<Lattice> {
    Lattice::shared((1..=n).map(|i| format!("e{i}"))).unwrap()
}

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-5i64..=5, c), r)
            .prop_map(|rows| IntMatrix::from_rows(rows).unwrap())
    })
}

fn square(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), n).prop_map(|rows| IntMatrix::from_rows(rows).unwrap())
}

/// A product of elementary matrices, so determinant ±1.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3), 0..12).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n);
        for (i, j, k) in ops {
            if i == j {
                continue;
            }
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = k;
            m = m.mul(&e);
        }
        m
    })
}

fn index_two_embedding() -> impl Strategy<Value = SublatticeEmbedding> {
    (unimodular(4), unimodular(4), 0..4usize).prop_map(|(u, v, slot)| {
        let mut d = IntMatrix::identity(4);
        d[(slot, slot)] = 2;
        let m = u.mul(&d).mul(&v);
        SublatticeEmbedding::new(lattice(4), Lattice::shared(["a1", "a2", "a3", "a4"]).unwrap(), m).unwrap()
    })
}

fn torsion_point(n: u64) -> impl Strategy<Value = TorsionPoint> {
    prop::collection::vec(0..n as i64, 4)
        .prop_map(move |c| TorsionPoint::new(lattice(4), c.into_iter().map(|x| rat(x, n as i64)).collect()).unwrap())
}

fn ell_point() -> impl Strategy<Value = EllipticPoint> {
    prop_oneof![
        (0i64..6, 1i64..7, 0i64..6, 1i64..7).prop_map(|(a, b, c, d)| EllipticPoint::torsion(rat(a, b), rat(c, d))),
        (-2i64..=2, 0i64..3).prop_map(|(k, t)| {
            &EllipticPoint::free("p").scale(k) + &EllipticPoint::torsion(rat(t, 3), Rat::from_integer(0))
        }),
    ]
}

fn bundle() -> impl Strategy<Value = IndecomposableBundle> {
    (1u32..=6, -8i64..=8, ell_point()).prop_map(|(r, d, p)| IndecomposableBundle::new(r, d, p).unwrap())
}

fn primitive() -> impl Strategy<Value = KernelCurve> {
    (-6i64..=6, -6i64..=6)
        .prop_filter("primitive", |(p, q)| p.gcd(q) == 1)
        .prop_map(|(p, q)| KernelCurve::new(p, q).unwrap())
}

proptest! {
    #[test]
    fn smith_form_is_a_diagonal_factorization(m in matrix(4)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert_eq!(s.u.det().map(i64::abs), Some(1));
        prop_assert_eq!(s.v.det().map(i64::abs), Some(1));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= 0);
            if w[0] == 0 {
                prop_assert_eq!(w[1], 0);
            } else {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn index_is_quotient_order(m in square(3)) {
        prop_assume!(m.det().unwrap_or(0) != 0);
        let e = SublatticeEmbedding::new(lattice(3), lattice(3), m.clone()).unwrap();
        let index = sublattice_index(&e).unwrap();
        prop_assert_eq!(index, m.det().unwrap().unsigned_abs());
        prop_assert_eq!(quotient_group(&e).unwrap().order(), index);
    }

    #[test]
    fn phi_is_a_homomorphism(x in torsion_point(4), y in torsion_point(4)) {
        let s = build_special_surface();
        let relabel = |p: &TorsionPoint| TorsionPoint::new(s.lattice_a().clone(), p.coords().to_vec()).unwrap();
        let (x, y) = (relabel(&x), relabel(&y));
        let sum = phi_l_on_point(&s.form_a, &x.add(&y).unwrap()).unwrap();
        let prod = character_product(
            &phi_l_on_point(&s.form_a, &x).unwrap(),
            &phi_l_on_point(&s.form_a, &y).unwrap(),
        ).unwrap();
        prop_assert_eq!(sum, prod);
    }

    #[test]
    fn index_two_sublattices_of_a_principal_lattice_have_type_1_2(e in index_two_embedding()) {
        prop_assert_eq!(sublattice_index(&e).unwrap(), 2);
        let f = AlternatingForm::standard_principal(e.ambient.clone()).unwrap();
        let t = polarization_type(&restrict_form(&f, &e).unwrap()).unwrap();
        prop_assert_eq!(t.d1 * t.d2, 2);
        prop_assert_eq!((t.d1, t.d2), (1, 2));
    }

    #[test]
    fn restriction_is_a_homomorphism(e in index_two_embedding(), a in torsion_point(4), b in torsion_point(4)) {
        let chi = |p: &TorsionPoint| Character::new(e.ambient.clone(), p.coords().to_vec()).unwrap();
        let (ca, cb) = (chi(&a), chi(&b));
        let lhs = restrict_character(&character_product(&ca, &cb).unwrap(), &e).unwrap();
        let rhs = character_product(&restrict_character(&ca, &e).unwrap(), &restrict_character(&cb, &e).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(kernel_of_restriction(&e, 2).unwrap().len(), 2);
    }

    #[test]
    fn kernel_dot_is_symmetric_and_sign_invariant(a in primitive(), b in primitive()) {
        let d = kernel_dot(&a, &b).unwrap();
        prop_assert_eq!(d, kernel_dot(&b, &a).unwrap());
        let neg = KernelCurve::new(-a.p, -a.q).unwrap();
        prop_assert_eq!(d, kernel_dot(&neg, &b).unwrap());
        prop_assert_eq!(d == 0, (a.p, a.q) == (b.p, b.q) || (a.p, a.q) == (-b.p, -b.q));
    }

    #[test]
    fn riemann_roch_holds_with_twists(b in bundle(), e in -3i64..=3, m in ell_point()) {
        prop_assert_eq!(b.h0() - b.h1(), b.degree());
        let t = b.tensor_line(e, &m);
        prop_assert_eq!(t.h0() - t.h1(), t.degree());
        prop_assert!(t.h0() >= 0 && t.h1() >= 0);
        let tw = twist(&b, &m);
        prop_assert_eq!(h0(&tw) - h1(&tw), tw.degree());
    }

    #[test]
    fn cohomology_rank_and_degree_are_additive(bs in prop::collection::vec(bundle(), 1..6), m in ell_point()) {
        let d = BundleDecomposition::new(bs.clone());
        prop_assert_eq!(d.h0(), bs.iter().map(|b| b.h0()).sum::<i64>());
        prop_assert_eq!(d.h1(), bs.iter().map(|b| b.h1()).sum::<i64>());
        prop_assert_eq!(d.rank(), bs.iter().map(|b| b.rank()).sum::<u32>());
        prop_assert_eq!(d.degree(), bs.iter().map(|b| b.degree()).sum::<i64>());
        let t = d.twist(&m);
        prop_assert_eq!(t.h0() - t.h1(), t.degree());
    }

    #[test]
    fn negative_degree_indecomposables_have_no_sections(r in 1u32..=8, d in -20i64..=-1, p in ell_point()) {
        prop_assert_eq!(IndecomposableBundle::new(r, d, p).unwrap().h0(), 0);
    }

    #[test]
    fn r_equals_one_has_a_unique_witness(g in 2u32..=7, r in 1u32..=6, k in 1i64..=3, ts in prop::collection::btree_set((1i64..6, 0i64..6), 0..6)) {
        prop_assume!(r < g);
        let torsion: Vec<EllipticPoint> = ts.into_iter()
            .map(|(a, b)| EllipticPoint::torsion(rat(a, 6), rat(b, 6)))
            .take((g - r - 1) as usize)
            .collect();
        prop_assume!(torsion.len() == (g - r - 1) as usize);
        let p = EllipticPoint::free("p").scale(k);
        let d = pushforward_decomposition(g, r, &p, &torsion).unwrap();
        let (yes, witness) = r_equals_one(&d).unwrap();
        prop_assert_eq!(yes, r == 1);
        let candidates: BTreeSet<EllipticPoint> = d.summands.iter().map(|b| b.det_point().clone()).collect();
        let hits: Vec<_> = candidates.iter()
            .filter(|q| h0_omega_twisted_minus_fibre(&d, &EllipticPoint::origin(), q).unwrap() == 1)
            .cloned()
            .collect();
        if r == 1 {
            prop_assert_eq!(hits, vec![p.clone()]);
            prop_assert_eq!(witness, Some(p));
        } else {
            prop_assert!(hits.is_empty());
            prop_assert_eq!(witness, None);
        }
    }

    #[test]
    fn jump_values_over_probes(g in 3u32..=8, r in 1u32..=4, ts in prop::collection::btree_set((0i64..5, 1i64..5), 0..6)) {
        prop_assume!(r < g);
        let torsion: Vec<EllipticPoint> = ts.into_iter()
            .map(|(a, b)| EllipticPoint::torsion(rat(a, 5), rat(b, 5)))
            .take((g - r - 1) as usize)
            .collect();
        prop_assume!(torsion.len() == (g - r - 1) as usize);
        let d = pushforward_decomposition(g, r, &EllipticPoint::free("p"), &torsion).unwrap();
        prop_assert_eq!(jump_h1(&d, &EllipticPoint::origin()).unwrap(), 2);
        let mut total = 0;
        for a in 0..5 {
            for b in 0..5 {
                let q = EllipticPoint::torsion(rat(a, 5), rat(b, 5));
                let j = jump_h1(&d, &q).unwrap();
                let expected = if q.is_origin() { 2 } else { i64::from(torsion.contains(&-&q)) };
                prop_assert_eq!(j, expected);
                total += j;
            }
        }
        prop_assert_eq!(total, 2 + (g - r - 1) as i64);
    }

    #[test]
    fn translation_fibres_are_k_l_cosets(v in prop::collection::vec(0i64..4, 4)) {
        let s = build_special_surface();
        let xi = Character::new(s.lattice_a().clone(), v.into_iter().map(|x| rat(x, 4)).collect()).unwrap();
        let pts = translation_points_for_twist(&s, &xi, SEARCH_LEVEL).unwrap();
        let kl = k_l_points(&s);
        prop_assert!(pts.is_empty() || pts.len() == kl.len());
        if let Some(x0) = pts.iter().next() {
            for y in &pts {
                prop_assert!(kl.contains(&y.add(&x0.neg()).unwrap()));
            }
        }
    }

    #[test]
    fn kernel_dot_agrees_with_counting(a in primitive(), b in primitive()) {
        let det = (a.p * b.q - a.q * b.p).abs();
        prop_assume!((2..=6).contains(&det));
        let d = kernel_dot(&a, &b).unwrap();
        prop_assert_eq!(kernel_dot_oracle(&a, &b, det).unwrap(), d);
        prop_assert_eq!(kernel_dot_oracle(&a, &b, 2 * det).unwrap(), d);
    }
}

#[test]
fn phi_kernel_and_image_sizes_multiply_to_the_torsion_count() {
    let s = build_special_surface();
    for n in 1..=4u64 {
        let data = phi_n_data(&s.form_a, n).unwrap();
        assert_eq!(data.kernel.len() * data.image.len(), n.pow(4) as usize, "n = {n}");
    }
}

#[test]
fn kernel_dot_matches_counting_for_every_small_determinant() {
    let mut checked = 0;
    for p1 in -6i64..=6 {
        for q1 in -6i64..=6 {
            for p2 in -6i64..=6 {
                for q2 in -6i64..=6 {
                    let det = (p1 * q2 - q1 * p2).abs();
                    if p1.gcd(&q1) != 1 || p2.gcd(&q2) != 1 || !(2..=6).contains(&det) {
                        continue;
                    }
                    // sign and order do not change the count, so one representative suffices
                    if (p1, q1) > (p2, q2) || p1 < 0 || p2 < 0 {
                        continue;
                    }
                    let (a, b) = (KernelCurve::new(p1, q1).unwrap(), KernelCurve::new(p2, q2).unwrap());
                    assert_eq!(kernel_dot_oracle(&a, &b, det).unwrap(), det * det, "{a} {b}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn family_records_are_consistent() {
    let mut last = 0;
    for n in 1..=12 {
        let rec = family_fn(n).unwrap();
        let gf = rec.fibration.g_f;
        assert!(gf > last);
        last = gf;
        let deg = degree_vs_product_polarization(&KernelCurve::new(1, n as i64).unwrap()).unwrap();
        assert_eq!(gf as i64, double_cover_fibre_genus(1, 2 * deg).unwrap());
        assert_eq!(rec.fibration.r, Some(gf - 1));
        assert_eq!(rec.slope, Rat::from_integer(4));
        let x = &rec.xiao;
        assert_eq!(x.atiyah_rank, Some(gf - 1));
        let d = rec.fibration.decomposition.as_ref().unwrap();
        assert_eq!(pushforward_shape(d).unwrap().r, gf - 1);
    }
}

#[test]
fn stored_r_one_respects_the_genus_bound() {
    for e in isotrivial_examples().unwrap() {
        for (f, r) in e.fibrations.iter().zip(e.r_values()) {
            if r == Some(1) {
                assert!(f.g_f as i64 <= genus_bound_r1(e.surface.k2, e.surface.chi), "{}", e.id);
            }
        }
    }
}

#[test]
fn pen6_fibres_are_orthogonal_to_their_components() {
    let l = pen6_lattice();
    let b = |s: &str| DivisorClass::basis(l.clone(), s).unwrap();
    let (f1, f2, k) = (pen6_f1(&l), pen6_f2(&l), serrano_canonical_pen6(&l));
    for c in ["Y1", "Z1", "Z2", "W"] {
        assert_eq!(dot(&f1, &b(c)).unwrap(), 0, "F1.{c}");
    }
    for c in ["Y2", "Z1", "Z2", "W"] {
        assert_eq!(dot(&f2, &b(c)).unwrap(), 0, "F2.{c}");
    }
    assert_eq!(dot(&f1, &f1).unwrap(), 0);
    assert_eq!(dot(&f2, &f2).unwrap(), 0);
    for f in [&f1, &f2] {
        assert_eq!(dot(&k.add(f).unwrap(), f).unwrap(), 4);
    }
}

/// With the self-intersections of the curves fixed, only one choice of the
/// unknown products makes F1, F2 fibres of the right genus.
#[test]
fn pen6_unknown_products_are_forced() {
    let l = pen6_lattice();
    let mut gram = l.gram().rows();
    let mut solutions = Vec::new();
    for yw in -3i64..=3 {
        for yz1 in -3i64..=3 {
            for yz2 in -3i64..=3 {
                // Y1 is index 0; Z1, Z2, W are 2, 3, 4. Y2 mirrors Y1 with Z1, Z2 swapped.
                for (i, v) in [(4, yw), (2, yz1), (3, yz2)] {
                    gram[0][i] = v;
                    gram[i][0] = v;
                }
                for (i, v) in [(4, yw), (3, yz1), (2, yz2)] {
                    gram[1][i] = v;
                    gram[i][1] = v;
                }
                let trial = Arc::new(
                    IntersectionLattice::new(l.basis_labels().to_vec(), IntMatrix::from_rows(gram.clone()).unwrap()).unwrap(),
                );
                let (f1, f2, k) = (pen6_f1(&trial), pen6_f2(&trial), serrano_canonical_pen6(&trial));
                let b = |s: &str| DivisorClass::basis(trial.clone(), s).unwrap();
                let ok = ["Y1", "Z1", "Z2", "W"].iter().all(|c| dot(&f1, &b(c)).unwrap() == 0)
                    && ["Y2", "Z1", "Z2", "W"].iter().all(|c| dot(&f2, &b(c)).unwrap() == 0)
                    && dot(&k.add(&f1).unwrap(), &f1).unwrap() == 4
                    && dot(&f1, &f2).unwrap() == 6;
                if ok {
                    solutions.push((yw, yz1, yz2));
                }
            }
        }
    }
    assert_eq!(solutions, vec![(1, 1, 0)]);
}
