use hermlie_core::catalog::{catalog_entry, catalog_list};
use hermlie_core::constructions::{nilpotent_family, skt_extension, FamilyLabel, Rho};
use hermlie_core::exterior::{contract, endo_star, j_transform, wedge};
use hermlie_core::hermitian::{
    abelian_skt_conditions, balanced_defect, bismut_torsion, center_dc_components, center_obstruction,
    chern_ricci, dc_form, is_balanced, is_generalized_kahler, is_kahler, is_skt, lee_form, ComplexStructure,
    GkVerdict, HermitianData, Metric,
};
use hermlie_core::liealg::{semidirect_product, verify_nilradical, NilradicalVerdict};
use hermlie_core::sample::{self, BaseKind, Codim2Options};
use hermlie_core::search::{in_span, skt_metric_search, solution_space, MetricKind, SearchStatus};
use hermlie_core::{KForm, LieAlgebra, Matrix, Scalar, Subspace, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn form(dim: usize, deg: usize) -> impl Strategy<Value = KForm> {
    prop::collection::vec((prop::collection::btree_set(0..dim, deg..=deg), -3i64..=3), 0..5).prop_map(
        move |terms| {
            let mut f = KForm::zero(deg, dim);
            for (idx, c) in terms {
                f.add_term(idx.into_iter().collect(), Scalar::from_int(c));
            }
            f
        },
    )
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2i64..=2, n * n)
        .prop_map(move |xs| Matrix::from_fn(n, n, |r, c| Scalar::from_int(xs[r * n + c])))
}

fn sign(k: usize) -> Scalar {
    Scalar::from_int(if k.is_multiple_of(2) { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_graded_commutative(
        (a, b) in (2usize..=8).prop_flat_map(|n| (0..=3usize.min(n), 0..=3usize.min(n)).prop_flat_map(move |(p, q)| (form(n, p), form(n, q))))
    ) {
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.scale(&sign(a.degree() * b.degree())));
    }

    #[test]
    fn wedge_is_associative((a, b, c) in (form(6, 1), form(6, 2), form(6, 2))) {
        let left = wedge(&wedge(&a, &b).unwrap(), &c).unwrap();
        let right = wedge(&a, &wedge(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn wedge_of_covectors_evaluates_to_determinant(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 3),
        tuple in prop::collection::btree_set(0usize..5, 3..=3),
    ) {
        let covs: Vec<KForm> = rows.iter().map(|r| KForm::covector(&Vector::from_ints(r))).collect();
        let w = wedge(&wedge(&covs[0], &covs[1]).unwrap(), &covs[2]).unwrap();
        let vs: Vec<Vector> = tuple.iter().map(|&i| Vector::basis(5, i)).collect();
        let det = Matrix::from_fn(3, 3, |r, c| Scalar::from_int(rows[r][vs_index(&tuple, c)])).determinant();
        prop_assert_eq!(w.evaluate(&vs).unwrap(), det);
    }

    #[test]
    fn endo_star_is_a_linear_derivation(
        (c, d, a, b) in (matrix(5), matrix(5), form(5, 2), form(5, 1))
    ) {
        let cd = &c + &d;
        prop_assert_eq!(endo_star(&cd, &a).unwrap(), &endo_star(&c, &a).unwrap() + &endo_star(&d, &a).unwrap());
        let ab = wedge(&a, &b).unwrap();
        let rhs = &wedge(&endo_star(&c, &a).unwrap(), &b).unwrap() + &wedge(&a, &endo_star(&c, &b).unwrap()).unwrap();
        prop_assert_eq!(endo_star(&c, &ab).unwrap(), rhs);
        let a2 = &a + &a;
        prop_assert_eq!(endo_star(&c, &a2).unwrap(), endo_star(&c, &a).unwrap().scale(&Scalar::from_int(2)));
    }

    #[test]
    fn j_twice_is_sign_of_degree((deg, p_entries) in (0usize..=4, prop::collection::vec(-1i64..=1, 36)), seed in any::<u64>()) {
        // conjugate the standard structure by a random invertible matrix
        let mut p = Matrix::from_fn(6, 6, |r, c| Scalar::from_int(p_entries[r * 6 + c]));
        p = &p + &Matrix::identity(6).scale(&Scalar::from_int(5));
        prop_assume!(!p.determinant().is_zero());
        let j0 = ComplexStructure::standard(6).unwrap();
        let j = &(&p * j0.matrix()) * &p.inverse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = KForm::zero(deg, 6);
        for _ in 0..4 {
            let mut idx: Vec<usize> = (0..6).collect();
            for i in 0..6 { idx.swap(i, rng.gen_range(i..6)); }
            idx.truncate(deg);
            a.add_term(idx, Scalar::from_int(rng.gen_range(-3..=3)));
        }
        let twice = j_transform(&j, &j_transform(&j, &a).unwrap()).unwrap();
        prop_assert_eq!(twice, a.scale(&sign(deg)));
    }

    #[test]
    fn scalar_text_round_trip(p in -50i64..50, q in 1i64..20, r in -50i64..50, s in 1i64..20, d in prop::sample::select(vec![2u64, 3, 5, 6, 7])) {
        let x = &Scalar::from_frac(p, q) + &(&Scalar::from_frac(r, s) * &Scalar::sqrt_of(d));
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        if !x.is_zero() {
            prop_assert!((&x * &x.recip()).is_one());
        }
    }

    #[test]
    fn dd_vanishes_iff_jacobi(entries in prop::collection::vec((0usize..4, 0usize..4, 0usize..4, -1i64..=1), 1..6)) {
        let mut brackets = Vec::new();
        for (i, j, k, c) in entries {
            if i < j && c != 0 {
                let mut v = Vector::zeros(4);
                v[k] = Scalar::from_int(c);
                brackets.push(((i, j), v));
            }
        }
        prop_assume!(!brackets.is_empty());
        let Ok(alg) = LieAlgebra::from_brackets(4, &brackets) else { return Ok(()); };
        let dd_zero = alg
            .differentials()
            .iter()
            .all(|de| alg.ce_differential(de).unwrap().is_zero());
        prop_assert_eq!(dd_zero, alg.jacobi_check().is_none());
    }
}

fn vs_index(tuple: &std::collections::BTreeSet<usize>, c: usize) -> usize {
    *tuple.iter().nth(c).unwrap()
}

#[test]
fn broken_algebra_has_nonzero_dd() {
    // [e1,e2] = e3, [e2,e3] = e1, [e1,e3] = e1 violates Jacobi
    let e = |i| Vector::basis(3, i);
    let alg = LieAlgebra::from_brackets(3, &[((0, 1), e(2)), ((1, 2), e(0)), ((0, 2), e(0))]).unwrap();
    assert!(alg.jacobi_check().is_some());
    assert!(alg.differentials().iter().any(|de| !alg.ce_differential(de).unwrap().is_zero()));
    assert!(alg.validate().is_err());
}

fn embed(f: &KForm, n: usize) -> KForm {
    let mut out = KForm::zero(f.degree(), n);
    for (idx, c) in f.terms() {
        out.add_term(idx.to_vec(), c.clone());
    }
    out
}

#[test]
fn differential_splits_along_codim_two_nilradical() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for name in catalog_list() {
        let entry = catalog_entry(name).unwrap();
        let Some(h) = &entry.nilradical else { continue };
        let alg = &entry.algebra;
        let n = alg.dim();
        if h.codim() != 2 || h != &Subspace::coordinate(n, &(0..n - 2).collect::<Vec<_>>()) {
            continue;
        }
        let m = n - 2;
        let (u, ju) = (Vector::basis(n, m), Vector::basis(n, m + 1));
        // ad restricted to h, zero on the complement
        let on_h = |x: &Vector| {
            let ad = alg.ad(x);
            Matrix::from_fn(n, n, |r, c| if c < m { ad[(r, c)].clone() } else { Scalar::zero() })
        };
        let a = on_h(&u);
        let b = on_h(&ju);
        let v = alg.bracket(&u, &ju).unwrap();
        let dh = alg.restrict(h).unwrap();
        let uf = KForm::basis(n, &[m]);
        let juf = KForm::basis(n, &[m + 1]);
        for _ in 0..50 {
            let deg = rng.gen_range(1..=3);
            let mut alpha = KForm::zero(deg, m);
            for _ in 0..3 {
                let mut idx: Vec<usize> = (0..m).collect();
                for i in 0..m {
                    idx.swap(i, rng.gen_range(i..m));
                }
                idx.truncate(deg);
                alpha.add_term(idx, sample::small_int(&mut rng, 3));
            }
            let full = embed(&alpha, n);
            let rhs = &(&(&wedge(&uf, &endo_star(&a, &full).unwrap()).unwrap()
                + &wedge(&juf, &endo_star(&b, &full).unwrap()).unwrap())
                - &wedge(&wedge(&uf, &juf).unwrap(), &contract(&v, &full).unwrap()).unwrap())
                + &embed(&dh.ce_differential(&alpha).unwrap(), n);
            assert_eq!(alg.ce_differential(&full).unwrap(), rhs, "{name}");
        }
        checked += 1;
    }
    assert!(checked >= 6);
}

/// `aA + bB` restricted to `h` is never nilpotent for random `(a, b) ≠ 0`.
fn spot_check(alg: &LieAlgebra, h: &Subspace, rng: &mut ChaCha8Rng, samples: usize) -> bool {
    let comp = h.coordinate_complement();
    let ads: Vec<Matrix> = comp.iter().map(|u| h.restrict(&alg.ad(u)).unwrap()).collect();
    (0..samples).all(|_| {
        let mut m = Matrix::zeros(h.dim(), h.dim());
        let mut all_zero = true;
        for ad in &ads {
            let c = Scalar::from_frac(rng.gen_range(-20..=20), rng.gen_range(1..=7));
            all_zero &= c.is_zero();
            m = &m + &ad.scale(&c);
        }
        all_zero || !m.is_nilpotent()
    })
}

#[test]
fn nilradical_verdicts_survive_random_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in catalog_list() {
        let entry = catalog_entry(name).unwrap();
        let Some(h) = &entry.nilradical else { continue };
        if verify_nilradical(&entry.algebra, h).unwrap() == NilradicalVerdict::IsNilradical {
            assert!(spot_check(&entry.algebra, h, &mut rng, 1000), "{name}");
        }
    }
}

#[test]
fn extensions_are_lie_algebras_and_restrict_to_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..25 {
        let base = sample::nilpotent_skt_base(&mut rng);
        let k = rng.gen_range(1..=2);
        let spec = sample::extension_spec(&mut rng, base.clone(), k);
        let alg = semidirect_product(base.algebra(), &spec.theta, &[]).unwrap();
        assert!(alg.jacobi_check().is_none());
        let out = skt_extension(&spec).unwrap();
        let n = base.algebra().dim();
        let h = Subspace::coordinate(out.algebra().dim(), &(0..n).collect::<Vec<_>>());
        let restricted = out.algebra().restrict(&h).unwrap();
        assert_eq!(restricted.differentials(), base.algebra().differentials());
        assert_eq!(&h.restrict(out.complex_structure().matrix()).unwrap(), base.complex_structure().matrix());
        assert_eq!(&h.restrict(out.metric().matrix()).unwrap(), base.metric().matrix());
    }
}

#[test]
fn family_labels_are_locally_constant() {
    let half = Scalar::from_frac(1, 2);
    for (p, q) in [(1, 1), (9, 10), (7, 5), (-1, 1), (-9, 10)] {
        let (_, l) = nilpotent_family(Rho::One, &half, &Scalar::from_frac(p, q));
        assert_eq!(l, FamilyLabel::H2, "{p}/{q}");
    }
    for (p, q) in [(0, 1), (1, 2), (4, 5), (-4, 5), (85, 100)] {
        let (_, l) = nilpotent_family(Rho::One, &half, &Scalar::from_frac(p, q));
        assert_eq!(l, FamilyLabel::H5, "{p}/{q}");
    }
}

fn instances(seed: u64, opts: Codim2Options, count: usize) -> Vec<sample::Codim2Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = sample::codim2_instances(&mut rng, opts, count, 40 * count).unwrap();
    assert_eq!(v.len(), count, "not enough random instances");
    v
}

const GENERAL: Codim2Options = Codim2Options {
    base: BaseKind::Any,
    skew: false,
    bracket: true,
    random_metric: true,
};

#[test]
fn chern_ricci_vanishes_with_invariant_codim_two_nilradical() {
    for inst in instances(21, GENERAL, 50) {
        assert!(chern_ricci(&inst.hermitian).unwrap().is_zero());
    }
}

#[test]
fn center_obstruction_matches_direct_evaluation() {
    for inst in instances(22, GENERAL, 30) {
        let hd = &inst.hermitian;
        let (alg, j, g) = (hd.algebra(), hd.complex_structure(), hd.metric());
        assert_eq!(
            center_obstruction(alg, j, g, &inst.nilradical).unwrap(),
            center_dc_components(hd, &inst.nilradical).unwrap()
        );
    }
}

#[test]
fn abelian_nilradical_skt_criterion() {
    let mut seen = [0usize; 2];
    for (seed, skew) in [(23, true), (24, false)] {
        let opts = Codim2Options {
            base: BaseKind::Abelian,
            skew,
            bracket: false,
            random_metric: !skew,
        };
        for inst in instances(seed, opts, 15) {
            let hd = &inst.hermitian;
            let cond = abelian_skt_conditions(hd.algebra(), hd.complex_structure(), hd.metric(), &inst.nilradical)
                .unwrap();
            assert_eq!(cond, is_skt(hd).unwrap());
            seen[cond as usize] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn hermitian_identities_on_random_instances() {
    for inst in instances(25, GENERAL, 30) {
        let hd = &inst.hermitian;
        let c = bismut_torsion(hd).unwrap();
        assert_eq!(c, -&dc_form(hd).unwrap());
        let rho = chern_ricci(hd).unwrap();
        assert!(hd.algebra().ce_differential(&rho).unwrap().is_zero());
        let kahler = is_kahler(hd).unwrap();
        if kahler {
            assert!(is_skt(hd).unwrap() && is_balanced(hd).unwrap());
        }
        let j = hd.complex_structure().matrix();
        let gk = is_generalized_kahler(hd.algebra(), j, &j.scale(&-Scalar::one()), hd.metric());
        assert_eq!(gk == GkVerdict::Split, kahler);
    }
}

#[test]
fn balanced_reduces_to_nilradical_when_unimodular() {
    let opts = Codim2Options {
        base: BaseKind::Any,
        skew: true,
        bracket: false,
        random_metric: false,
    };
    let mut checked = 0;
    for inst in instances(26, opts, 20) {
        let hd = &inst.hermitian;
        if !hd.algebra().is_unimodular() {
            continue;
        }
        let h = &inst.nilradical;
        let sub = hd.algebra().restrict(h).unwrap().validate().unwrap();
        let jh = ComplexStructure::new(h.restrict(hd.complex_structure().matrix()).unwrap()).unwrap();
        let gh = Metric::new(h.restrict(hd.metric().matrix()).unwrap()).unwrap();
        let small = HermitianData::new(sub, jh, gh).unwrap();
        assert_eq!(is_balanced(hd).unwrap(), is_balanced(&small).unwrap());
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn lee_form_vanishes_iff_balanced_on_unimodular_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let j6 = ComplexStructure::standard(6).unwrap();
    for _ in 0..20 {
        let g = sample::compatible_metric(&mut rng, &j6);
        let hd = HermitianData::new(LieAlgebra::abelian(6), j6.clone(), g).unwrap();
        assert!(lee_form(&hd).unwrap().is_zero() && is_balanced(&hd).unwrap());
    }
    let opts = Codim2Options {
        base: BaseKind::Any,
        skew: true,
        bracket: false,
        random_metric: true,
    };
    for inst in instances(28, opts, 20) {
        let hd = &inst.hermitian;
        if hd.algebra().is_unimodular() {
            assert_eq!(lee_form(hd).unwrap().is_zero(), balanced_defect(hd).unwrap().is_zero());
        }
    }
}

#[test]
fn generalized_kahler_with_invariant_nilradical_is_kahler() {
    let flat = Codim2Options { base: BaseKind::Abelian, skew: true, bracket: false, random_metric: false };
    let (mut gk_seen, mut non_gk_seen) = (0, 0);
    for inst in instances(29, GENERAL, 15).into_iter().chain(instances(31, flat, 15)) {
        let hd = &inst.hermitian;
        let n = hd.algebra().dim();
        let m = n - 2;
        let j = hd.complex_structure().matrix();
        // candidates that keep h invariant
        let flip_tail = Matrix::from_fn(n, n, |r, c| {
            let s = if r >= m { -Scalar::one() } else { Scalar::one() };
            &j[(r, c)] * &s
        });
        for jm in [j.scale(&-Scalar::one()), flip_tail] {
            if is_generalized_kahler(hd.algebra(), j, &jm, hd.metric()).is_gk() {
                gk_seen += 1;
                assert!(is_kahler(hd).unwrap());
            } else {
                non_gk_seen += 1;
            }
        }
    }
    let t = catalog_entry("tau30_x_tau30").unwrap();
    let s = &t.structures[0];
    assert!(is_generalized_kahler(&t.algebra, s.j.matrix(), s.j.negate().matrix(), &s.g).is_gk());
    assert!(is_kahler(&t.hermitian("J").unwrap()).unwrap());
    assert!(gk_seen > 0 && non_gk_seen > 0);
}

#[test]
fn kahler_implies_skt_and_balanced_on_catalog() {
    for name in catalog_list() {
        let e = catalog_entry(name).unwrap();
        for s in &e.structures {
            let hd = e.hermitian(&s.label).unwrap();
            if is_kahler(&hd).unwrap() {
                assert!(is_skt(&hd).unwrap() && is_balanced(&hd).unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn search_witnesses_reverify_and_catalog_metrics_are_admissible() {
    for name in catalog_list() {
        let e = catalog_entry(name).unwrap();
        for s in &e.structures {
            let hd = e.hermitian(&s.label).unwrap();
            if !is_skt(&hd).unwrap() {
                continue;
            }
            let space = solution_space(&e.algebra, &s.j, MetricKind::Skt).unwrap();
            assert!(in_span(&space, &hermlie_core::hermitian::fundamental_form(&hd)), "{name}");
        }
        if e.algebra.dim() <= 8 {
            let s = &e.structures[0];
            let out = skt_metric_search(&e.algebra, &s.j, 0, 64).unwrap();
            if out.status == SearchStatus::Found {
                let g = out.metric.unwrap();
                assert!(g.matrix().is_positive_definite());
                let hd = HermitianData::new(e.algebra.clone(), s.j.clone(), g).unwrap();
                assert!(is_skt(&hd).unwrap(), "{name}");
            }
        }
    }
}
