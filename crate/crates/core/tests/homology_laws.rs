//! Homology laws beyond the acceptance criteria: vanishing
//! characterizations, functoriality of the comparison map, the
//! dimension-shift of kernel/cokernel complexes, and the six-term sequence
//! of a composite in groups.

use exacta_core::fgab::{AbCat, AbObject};
use exacta_core::fingrp::{catalog, Grp, GroupHom};
use exacta_core::homology::{
    classify, decompose, homology_c, homology_k, induced_on_hc, induced_on_hk, lambda,
    relaxed_snake, six_term_from_composite, snake, ChainComplex, ComplexClass,
    RelaxedSnakeInput,
};
use exacta_core::diexact::{Ses, SesMorphism};
use exacta_core::matrix::Mat;
use exacta_core::sample::{self, pools};
use exacta_core::zexact::{iso_check, ZExact};
use rand::SeedableRng as _;
use rand_chacha::ChaCha8Rng;

/// The subnormal dimension-shift complex: 0 -> K -> M -> M/L -> 0 with
/// M = (Z/3 x Z/3) x| C2, K = Z/3 x 0, L = Z/3 x Z/3.
fn subnormal_complex(cat: &Grp) -> ChainComplex<Grp> {
    let m = catalog::generalized_dihedral_3x3();
    let l_carrier: Vec<usize> = (0..18).filter(|&x| x % 2 == 0).collect();
    let k_carrier: Vec<usize> = vec![0, 6, 12];
    let (k_obj, k_incl) = m.subgroup_object(&k_carrier);
    let d2 = GroupHom { dom: k_obj, cod: m.clone(), table: k_incl };
    let (q_obj, proj) = m.quotient_by(&l_carrier);
    let d1 = GroupHom { dom: m.clone(), cod: q_obj.clone(), table: proj };
    ChainComplex::new(cat, 0, vec![q_obj, m.clone(), d2.dom.clone()], vec![d1, d2]).unwrap()
}

/// Vanishing on the subnormal example: H^c detects the failure
/// of exactness, while the complex is coexact at the middle and H^k
/// vanishes there accordingly.
#[test]
fn vanishing_characterizations_on_subnormal_complex() {
    let cat = Grp;
    let cx = subnormal_complex(&cat);
    assert_eq!(classify(&cat, &cx).unwrap(), ComplexClass::Subnormal);
    let dec = decompose(&cat, &cx).unwrap();

    // not exact at the middle, and H^c sees it
    let hc = homology_c(&cat, &cx, &dec, 1).unwrap();
    assert!(!cat.is_zero_object(&hc.object));
    assert!(
        !exacta_core::diexact::is_exact_at(&cat, &cx.diff(&cat, 2), &cx.diff(&cat, 1)).unwrap()
    );

    // coexact at the middle: d_1 factors through coker(d_2) with a monic
    // remainder; H^k vanishes there (2.3.14.i)
    let coker_d2 = cat.cokernel(&cx.diff(&cat, 2));
    let v = cat.descend_along_epi(&coker_d2, &cx.diff(&cat, 1)).unwrap();
    assert!(cat.is_mono(&v));
    let hk = homology_k(&cat, &cx, &dec, 1).unwrap();
    assert!(cat.is_zero_object(&hk.object));
}

/// The lambda comparison is natural for morphisms of
/// complexes, checked on product-complex projections per backend.
fn lambda_functoriality<C: ZExact>(cat: &C, pool: &[C::Obj], salt: u64, count: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1A3BDA ^ salt);
    for _ in 0..count {
        let a = sample::sample_normal_complex(cat, &mut rng, pool, 4).unwrap();
        let b = sample::sample_normal_complex(cat, &mut rng, pool, 4).unwrap();
        let prod = sample::product_complex(cat, &a, &b).unwrap();
        let lo = prod.lo;
        let hi = prod.hi;
        let a = a.padded(cat, lo, hi);
        let dec_prod = decompose(cat, &prod).unwrap();
        let dec_a = decompose(cat, &a).unwrap();
        // the projection is a morphism of complexes prod -> a
        let proj_at = |n: i64| -> C::Mor {
            let (_, pr1, _) = cat.product(&a.object(cat, n), &b.object(cat, n));
            pr1
        };
        for n in lo..=hi {
            let hc_map = induced_on_hc(cat, &dec_prod, &dec_a, &proj_at, n).unwrap();
            let hk_map = induced_on_hk(cat, &dec_prod, &dec_a, &proj_at, n).unwrap();
            let lam_prod = lambda(cat, &prod, &dec_prod, n).unwrap();
            let lam_a = lambda(cat, &a, &dec_a, n).unwrap();
            let left = cat.compose(&hk_map, &lam_prod).unwrap();
            let right = cat.compose(&lam_a, &hc_map).unwrap();
            assert!(cat.eq_mor(&left, &right), "lambda naturality square at {n}");
        }
    }
}

#[test]
fn lambda_functoriality_sampled() {
    lambda_functoriality(&AbCat, &pools::ab(8), 1, 8);
    lambda_functoriality(&Grp, &pools::groups(8), 2, 8);
}

/// Kernel/cokernel complexes of the frozen (Z/2 -> Z/4 -> Z/2,
/// verticals (0, x2, 0))
/// morphism of exact sequences: the kernel complex is subnormal, the
/// cokernel complex is cosubnormal, and homology shifts by two degrees.
#[test]
fn kernel_cokernel_complexes_dimension_shift() {
    let ab = AbCat;
    let z2 = AbObject::from_factors(&[2], 0);
    let z4 = AbObject::from_factors(&[4], 0);
    let incl = ab.morphism(z2.clone(), z4.clone(), Mat::from_i64(&[&[2]])).unwrap();
    let proj = ab.morphism(z4.clone(), z2.clone(), Mat::from_i64(&[&[1]])).unwrap();
    // exact rows in degrees 2, 1, 0
    let row = ChainComplex::new(
        &ab,
        0,
        vec![z2.clone(), z4.clone(), z2.clone()],
        vec![proj.clone(), incl.clone()],
    )
    .unwrap();
    let times2 = ab.morphism(z4.clone(), z4.clone(), Mat::from_i64(&[&[2]])).unwrap();
    let verticals: Vec<exacta_core::fgab::AbMorphism> =
        vec![ab.zero_mor(&z2, &z2), times2, ab.zero_mor(&z2, &z2)];

    // squares commute (checked), all verticals normal in Ab
    for n in 1..=2 {
        let lhs = ab
            .compose(&verticals[(n - 1) as usize], &row.diff(&ab, n))
            .unwrap();
        let rhs = ab
            .compose(&row.diff(&ab, n), &verticals[n as usize])
            .unwrap();
        assert!(ab.eq_mor(&lhs, &rhs));
    }

    // kernel and cokernel complexes with induced differentials
    let kers: Vec<_> = verticals.iter().map(|v| ab.kernel(v)).collect();
    let mut k_objs = Vec::new();
    let mut k_diffs = Vec::new();
    for k in &kers {
        k_objs.push(ab.dom(k));
    }
    // reverse order: degree 0 first in our windows
    k_objs.reverse();
    let kers_rev: Vec<_> = kers.iter().rev().cloned().collect();
    for n in 1..=2usize {
        let lifted = ab
            .lift_through_mono(
                &kers_rev[n - 1],
                &ab.compose(&row.diff(&ab, n as i64), &kers_rev[n]).unwrap(),
            )
            .unwrap();
        k_diffs.push(lifted);
    }
    let k_complex = ChainComplex::new(&ab, 0, k_objs, k_diffs).unwrap();
    let k_class = classify(&ab, &k_complex).unwrap();
    assert!(
        matches!(k_class, ComplexClass::Normal | ComplexClass::Subnormal),
        "kernel complex must be subnormal, got {k_class:?}"
    );

    let cokers: Vec<_> = verticals.iter().map(|v| ab.cokernel(v)).collect();
    let mut c_objs: Vec<_> = cokers.iter().map(|c| ab.cod(c)).collect();
    c_objs.reverse();
    let cokers_rev: Vec<_> = cokers.iter().rev().cloned().collect();
    let mut c_diffs = Vec::new();
    for n in 1..=2usize {
        let descended = ab
            .descend_along_epi(
                &cokers_rev[n],
                &ab.compose(&cokers_rev[n - 1], &row.diff(&ab, n as i64)).unwrap(),
            )
            .unwrap();
        c_diffs.push(descended);
    }
    let c_complex = ChainComplex::new(&ab, 0, c_objs, c_diffs).unwrap();
    let c_class = classify(&ab, &c_complex).unwrap();
    assert!(
        matches!(c_class, ComplexClass::Normal | ComplexClass::Cosubnormal),
        "cokernel complex must be cosubnormal, got {c_class:?}"
    );

    // H^c_{n-1}(K) = H^k_{n+1}(C) across the window
    let dec_k = decompose(&ab, &k_complex).unwrap();
    let dec_c = decompose(&ab, &c_complex).unwrap();
    for n in 0..=2i64 {
        let hck = homology_c(&ab, &k_complex, &dec_k, n - 1).unwrap();
        let hkc = homology_k(&ab, &c_complex, &dec_c, n + 1).unwrap();
        assert_eq!(
            hck.object.label(),
            hkc.object.label(),
            "dimension shift at n = {n}"
        );
    }
    // the nonzero value: H^c_0(K) = Z/2 = H^k_2(C)
    let hck0 = homology_c(&ab, &k_complex, &dec_k, 0).unwrap();
    assert_eq!(hck0.object.label(), "Z/2");

    // on this morphism: the kernel sequence is exact iff the
    // cokernel sequence is (here: neither is exact at the shifted spots)
    let k_exact = exacta_core::diexact::is_exact_at(
        &ab,
        &k_complex.diff(&ab, 1),
        &k_complex.diff(&ab, 0),
    )
    .unwrap();
    let c_exact = exacta_core::diexact::is_exact_at(
        &ab,
        &c_complex.diff(&ab, 3),
        &c_complex.diff(&ab, 2),
    )
    .unwrap();
    assert_eq!(k_exact, c_exact);
}

/// The composite six-term sequence for a pair of normal endomorphisms
/// of the cyclic group of
/// order 12, matching the abelian computation.
#[test]
fn six_term_from_composite_in_groups() {
    let grp = Grp;
    let z12 = catalog::cyclic(12);
    let table_mul = |k: usize| -> GroupHom {
        GroupHom::new(z12.clone(), z12.clone(), (0..12).map(|i| (i * k) % 12).collect())
            .unwrap()
    };
    let f = table_mul(2);
    let g = table_mul(3);
    let six = six_term_from_composite(&grp, &f, &g).unwrap();
    assert!(six.verify_interior(&grp).unwrap());
    // K(f) = <6> of order 2, K(gf) = K(x6) = <2> of order 6, K(g) = <4> of order 3
    assert_eq!(six.objects[0].size, 2);
    assert_eq!(six.objects[1].size, 6);
    assert_eq!(six.objects[2].size, 3);
}

/// The relaxed snake specializes to the classical snake on genuinely short
/// exact rows: both produce exact six-term sequences with matching end
/// objects.
#[test]
fn relaxed_snake_specializes_to_classical() {
    let ab = AbCat;
    let z2 = AbObject::from_factors(&[2], 0);
    let z4 = AbObject::from_factors(&[4], 0);
    let k = ab.morphism(z2.clone(), z4.clone(), Mat::from_i64(&[&[2]])).unwrap();
    let q = ab.morphism(z4.clone(), z2.clone(), Mat::from_i64(&[&[1]])).unwrap();
    let xi = ab.morphism(z4.clone(), z4.clone(), Mat::from_i64(&[&[2]])).unwrap();
    let kappa = ab.zero_mor(&z2, &z2);
    let rho = ab.zero_mor(&z2, &z2);

    let classical = snake(
        &ab,
        &SesMorphism::new(
            &ab,
            Ses { k: k.clone(), q: q.clone() },
            Ses { k: k.clone(), q: q.clone() },
            kappa.clone(),
            xi.clone(),
            rho.clone(),
        )
        .unwrap(),
    )
    .unwrap();

    let relaxed = relaxed_snake(
        &ab,
        &RelaxedSnakeInput {
            top_k: k.clone(),
            top_q: q.clone(),
            bottom_l: k.clone(),
            bottom_r: q.clone(),
            kappa,
            xi,
            rho,
        },
    )
    .unwrap();
    assert!(relaxed.verify_interior(&ab).unwrap());
    for (a, b) in classical.objects.iter().zip(&relaxed.objects) {
        assert_eq!(a.label(), b.label());
    }
}

/// Snake connecting map sanity in groups: a sampled run has the same
/// six objects when fed through the relaxed reduction.
#[test]
fn sampled_group_snake_against_relaxed() {
    let grp = Grp;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let pool = pools::groups(16);
    for _ in 0..10 {
        let m = sample::sample_ses_morphism(&grp, &mut rng, &pool).unwrap();
        let classical = snake(&grp, &m).unwrap();
        let relaxed = relaxed_snake(
            &grp,
            &RelaxedSnakeInput {
                top_k: m.top.k.clone(),
                top_q: m.top.q.clone(),
                bottom_l: m.bottom.k.clone(),
                bottom_r: m.bottom.q.clone(),
                kappa: m.kappa.clone(),
                xi: m.xi.clone(),
                rho: m.rho.clone(),
            },
        )
        .unwrap();
        for (a, b) in classical.objects.iter().zip(&relaxed.objects) {
            assert_eq!(a.size, b.size);
        }
        // connecting maps agree up to the canonical identifications: both
        // make the sequence exact, verified independently
        assert!(classical.verify_interior(&grp).unwrap());
        assert!(relaxed.verify_interior(&grp).unwrap());
    }
}

/// Exact complexes stay exact under lambda at every degree in both
/// directions, on a long exact instance.
#[test]
fn long_exact_instance_has_iso_lambda_and_zero_homology() {
    let ab = AbCat;
    let z2 = AbObject::from_factors(&[2], 0);
    let z4 = AbObject::from_factors(&[4], 0);
    let splice = ab
        .compose(
            &ab.morphism(z2.clone(), z4.clone(), Mat::from_i64(&[&[2]])).unwrap(),
            &ab.morphism(z4.clone(), z2.clone(), Mat::from_i64(&[&[1]])).unwrap(),
        )
        .unwrap();
    let cx = ChainComplex::new(
        &ab,
        0,
        vec![z4.clone(), z4.clone(), z4.clone(), z4.clone()],
        vec![splice.clone(), splice.clone(), splice.clone()],
    )
    .unwrap();
    assert_eq!(classify(&ab, &cx).unwrap(), ComplexClass::Normal);
    let dec = decompose(&ab, &cx).unwrap();
    for n in 1..=2 {
        let hc = homology_c(&ab, &cx, &dec, n).unwrap();
        let hk = homology_k(&ab, &cx, &dec, n).unwrap();
        assert!(ab.is_zero_object(&hc.object));
        assert!(ab.is_zero_object(&hk.object));
        assert!(iso_check(&ab, &lambda(&ab, &cx, &dec, n).unwrap()));
    }
}

/// Naturality of the snake on sampled diagram morphisms: projecting a
/// product of snake inputs onto a factor commutes with the connecting
/// morphisms.
#[test]
fn snake_naturality_on_product_projections() {
    let ab = AbCat;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let pool = pools::ab(12);
    let mut done = 0;
    while done < 6 {
        let m1 = sample::sample_ses_morphism(&ab, &mut rng, &pool).unwrap();
        let m2 = sample::sample_ses_morphism(&ab, &mut rng, &pool).unwrap();
        // componentwise product of the two diagrams
        let pair_mor = |f: &exacta_core::fgab::AbMorphism,
                        g: &exacta_core::fgab::AbMorphism|
         -> exacta_core::fgab::AbMorphism {
            let (_, pr1, pr2) = ab.product(&ab.dom(f), &ab.dom(g));
            ab.pair(
                &ab.compose(f, &pr1).unwrap(),
                &ab.compose(g, &pr2).unwrap(),
            )
            .unwrap()
        };
        let top = Ses {
            k: pair_mor(&m1.top.k, &m2.top.k),
            q: pair_mor(&m1.top.q, &m2.top.q),
        };
        let bottom = Ses {
            k: pair_mor(&m1.bottom.k, &m2.bottom.k),
            q: pair_mor(&m1.bottom.q, &m2.bottom.q),
        };
        let prod = match SesMorphism::new(
            &ab,
            top,
            bottom,
            pair_mor(&m1.kappa, &m2.kappa),
            pair_mor(&m1.xi, &m2.xi),
            pair_mor(&m1.rho, &m2.rho),
        ) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let six_prod = match snake(&ab, &prod) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let six_1 = snake(&ab, &m1).unwrap();
        // induced maps on K(rho) and Q(kappa) from the projection
        let (_, pr_rho, _) = ab.product(&ab.dom(&m1.rho), &ab.dom(&m2.rho));
        let ker_rho_prod = ab.kernel(&prod.rho);
        let ker_rho_1 = ab.kernel(&m1.rho);
        let k_map = ab
            .lift_through_mono(&ker_rho_1, &ab.compose(&pr_rho, &ker_rho_prod).unwrap())
            .unwrap();
        let (_, pr_kap, _) = ab.product(&ab.cod(&m1.kappa), &ab.cod(&m2.kappa));
        let coker_kappa_prod = ab.cokernel(&prod.kappa);
        let coker_kappa_1 = ab.cokernel(&m1.kappa);
        let q_map = ab
            .descend_along_epi(
                &coker_kappa_prod,
                &ab.compose(&coker_kappa_1, &pr_kap).unwrap(),
            )
            .unwrap();
        // the naturality square: q_map . d_prod = d_1 . k_map
        let lhs = ab.compose(&q_map, &six_prod.maps[2]).unwrap();
        let rhs = ab.compose(&six_1.maps[2], &k_map).unwrap();
        assert!(ab.eq_mor(&lhs, &rhs), "snake connecting map is natural");
        done += 1;
    }
}
