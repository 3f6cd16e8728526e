//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use hermlie_cli::dsl::{catalog_document, parse_document, parse_structure, serialize};
use hermlie_cli::io::{hermitian_to_json, HermitianFile};
use hermlie_core::catalog::{catalog_entry, catalog_list, CatalogEntry};
use hermlie_core::constructions::{
    nilpotent_family, nilpotent_family_hermitian, s1, s2, s3, s4, s5, s6, s7, skt_extension, FamilyLabel, Rho,
};
use hermlie_core::hermitian::{
    abelian_skt_conditions, bismut_torsion, center_dc_components, center_obstruction, chern_lee, chern_ricci,
    dc_form, is_balanced, is_generalized_kahler, is_kahler, is_skt, GkVerdict, HermitianData,
};
use hermlie_core::liealg::{verify_nilradical, NilradicalVerdict};
use hermlie_core::sample::{self, BaseKind, Codim2Instance, Codim2Options};
use hermlie_core::search::{kahler_metric_search, skt_metric_search, SearchStatus, DEFAULT_BUDGET};
use hermlie_core::{KForm, LieAlgebra, Matrix, Scalar, Subspace, Vector};

/// `Σ c · e^{idx}` with 1-based indices.
fn form(dim: usize, terms: &[(i64, &[usize])]) -> KForm {
    let deg = terms.first().map_or(0, |t| t.1.len());
    let mut f = KForm::zero(deg, dim);
    for (c, idx) in terms {
        f.add_term(idx.iter().map(|i| i - 1).collect(), Scalar::from_int(*c));
    }
    f
}

fn entry(name: &str) -> CatalogEntry {
    catalog_entry(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn hermitian(name: &str, label: &str) -> HermitianData {
    entry(name).hermitian(label).unwrap_or_else(|| panic!("{name} has no structure {label}"))
}

fn instances(seed: u64, opts: Codim2Options, count: usize) -> Vec<Codim2Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = sample::codim2_instances(&mut rng, opts, count, 40 * count).unwrap();
    assert_eq!(v.len(), count, "not enough random instances");
    v
}

fn golden_tensors() {
    let s8 = hermitian("s8", "J");
    assert_eq!(bismut_torsion(&s8).unwrap(), form(8, &[(-1, &[1, 2, 3]), (-2, &[4, 5, 6])]));
    assert_eq!(chern_lee(&s8).unwrap(), form(8, &[(1, &[3]), (1, &[6]), (1, &[7])]));
    assert_eq!(chern_ricci(&s8).unwrap(), form(8, &[(-1, &[3, 7]), (-2, &[6, 8])]));

    for name in ["g2n_3", "g2n_4", "g2n_5"] {
        let n = entry(name).algebra.dim();
        let e123 = form(n, &[(1, &[1, 2, 3])]);
        assert_eq!(dc_form(&hermitian(name, "I+")).unwrap(), e123, "{name}");
        assert_eq!(dc_form(&hermitian(name, "I-")).unwrap(), e123.scale(&-Scalar::one()), "{name}");
    }

    let remark = entry("s3_remark");
    let n = remark.algebra.dim();
    let e456 = form(n, &[(1, &[4, 5, 6])]);
    assert_eq!(dc_form(&hermitian("s3_remark", "I+")).unwrap(), e456);
    assert_eq!(dc_form(&hermitian("s3_remark", "I-")).unwrap(), e456.scale(&-Scalar::one()));
    assert!(!remark.algebra.is_unimodular());
}

fn skt_examples_with_gk_pairs() {
    for name in ["g5_35_R", "tau30_x_tau30"] {
        let e = entry(name);
        for s in &e.structures {
            assert!(is_skt(&e.hermitian(&s.label).unwrap()).unwrap(), "{name} {}", s.label);
        }
        assert_eq!(e.gk.len(), 1, "{name}");
        let (p, m) = (&e.structures[e.gk[0].plus], &e.structures[e.gk[0].minus]);
        assert_eq!(p.g, m.g);
        assert!(is_generalized_kahler(&e.algebra, p.j.matrix(), m.j.matrix(), &p.g).is_gk(), "{name}");
        let out = skt_metric_search(&e.algebra, &e.structures[0].j, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(out.status, SearchStatus::Found, "{name}");
        let hd = HermitianData::new(e.algebra.clone(), e.structures[0].j.clone(), out.metric.unwrap()).unwrap();
        assert!(is_skt(&hd).unwrap(), "{name}");
    }
}

/// A random member of one of the four isomorphism classes of the family.
fn random_base<R: Rng>(rng: &mut R, class: usize) -> HermitianData {
    let half = Scalar::from_frac(1, 2);
    loop {
        let d = Scalar::from_frac(rng.gen_range(-8..=8), rng.gen_range(1..=5));
        let (rho, gamma, delta, label) = match class {
            0 => (Rho::Zero, Scalar::zero(), d, FamilyLabel::H2),
            1 => (Rho::Zero, Scalar::zero(), Scalar::zero(), FamilyLabel::H8),
            2 => {
                let sign = Scalar::from_int(if rng.gen() { 1 } else { -1 });
                (Rho::One, half.clone(), &(&Scalar::sqrt_of(3) * &half) * &sign, FamilyLabel::H4)
            }
            _ => (Rho::One, half.clone(), d, FamilyLabel::H5),
        };
        if nilpotent_family(rho, &gamma, &delta).1 == label {
            return nilpotent_family_hermitian(rho, &gamma, &delta).unwrap();
        }
    }
}

fn extension_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let mut nontrivial = 0;
    for i in 0..100 {
        let base = random_base(&mut rng, i % 4);
        let k = rng.gen_range(1..=2);
        let spec = sample::extension_spec(&mut rng, base, k);
        spec.validate().unwrap();
        nontrivial += spec.theta.iter().any(|t| !t.is_zero()) as usize;
        let out = skt_extension(&spec).unwrap();
        assert!(is_skt(&out).unwrap(), "draw {i}");
    }
    assert!(nontrivial >= 50, "only {nontrivial} draws with nonzero theta");

    let one = Scalar::one();
    let half = Scalar::from_frac(1, 2);
    let tables = [
        (s1(&one, &one), "(f27, -f17, -f47, f37, 2*f34, -2*f12, 0, 0)"),
        (s2(&one), "(f27, -f17, -f47, f37, 0, -2*f12, 0, 0)"),
        (s3(&one, &one), "(f27, -f17, -f47, f37, f13 - f24 + 2*f34, f23 + f14 - 2*f12 - f34, 0, 0)"),
        (s4(&one), "(f27, -f17, -f47, f37, f13 - f24 + sqrt(3)*f34, f23 + f14 - 2*f12 - f34, 0, 0)"),
        (s5(&one, &half), "(f27, -f17, -f47, f37, f13 - f24 + f34, f23 + f14 - 2*f12 - f34, 0, 0)"),
        (s6(&one, &one, &one), "(f27, -f17, f48, -f38, 2*f34, -2*f12, 0, 0)"),
        (s7(&one, &one), "(f27, -f17, f48, -f38, 0, -2*f12, 0, 0)"),
    ];
    for (i, (s, table)) in tables.into_iter().enumerate() {
        let s = s.unwrap();
        let expected = parse_structure(table).unwrap();
        assert_eq!(s.algebra().differentials(), expected.differentials(), "s{}", i + 1);
        assert!(is_skt(&s).unwrap(), "s{}", i + 1);
    }
    assert_eq!(s4(&one).unwrap().algebra().radicand(), 3);
}

const GENERAL: Codim2Options = Codim2Options {
    base: BaseKind::Any,
    skew: false,
    bracket: true,
    random_metric: true,
};

fn codim_two_suite() {
    for inst in instances(41, GENERAL, 50) {
        assert!(chern_ricci(&inst.hermitian).unwrap().is_zero());
    }
    for inst in instances(42, GENERAL, 30) {
        let hd = &inst.hermitian;
        let (alg, j, g) = (hd.algebra(), hd.complex_structure(), hd.metric());
        assert_eq!(
            center_obstruction(alg, j, g, &inst.nilradical).unwrap(),
            center_dc_components(hd, &inst.nilradical).unwrap()
        );
    }
    let mut seen = [0usize; 2];
    for (seed, skew) in [(43, true), (44, false)] {
        let opts = Codim2Options { base: BaseKind::Abelian, skew, bracket: false, random_metric: !skew };
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

fn structural_suite() {
    for name in catalog_list() {
        let alg = &entry(name).algebra;
        assert!(alg.jacobi_check().is_none(), "{name}");
        for de in alg.differentials() {
            assert!(alg.ce_differential(&de).unwrap().is_zero(), "{name}");
        }
    }
    // [e1,e2] = e3, [e2,e3] = e1, [e1,e3] = e1
    let e = |i| Vector::basis(3, i);
    let broken = LieAlgebra::from_brackets(3, &[((0, 1), e(2)), ((1, 2), e(0)), ((0, 2), e(0))]).unwrap();
    assert!(broken.jacobi_check().is_some());
    assert!(broken.differentials().iter().any(|de| !broken.ce_differential(de).unwrap().is_zero()));

    for name in catalog_list() {
        let e = entry(name);
        for s in &e.structures {
            let hd = e.hermitian(&s.label).unwrap();
            if is_kahler(&hd).unwrap() {
                assert!(is_skt(&hd).unwrap() && is_balanced(&hd).unwrap(), "{name} {}", s.label);
            }
        }
    }

    let flat = Codim2Options { base: BaseKind::Abelian, skew: true, bracket: false, random_metric: false };
    let six = |v: Vec<Codim2Instance>| v.into_iter().filter(|i| i.hermitian.algebra().dim() == 6).take(10);
    let mut outcomes = [0usize; 2];
    for inst in six(instances(45, GENERAL, 40)).chain(six(instances(46, flat, 40))) {
        let hd = &inst.hermitian;
        let j = hd.complex_structure().matrix();
        let gk = is_generalized_kahler(hd.algebra(), j, &j.scale(&-Scalar::one()), hd.metric());
        let kahler = is_kahler(hd).unwrap();
        assert_eq!(gk.is_gk(), kahler);
        assert_eq!(gk == GkVerdict::Split, kahler);
        outcomes[kahler as usize] += 1;
    }
    assert_eq!(outcomes.iter().sum::<usize>(), 20);
    assert!(outcomes[0] > 0 && outcomes[1] > 0, "{outcomes:?}");
}

fn survives_spot_check(alg: &LieAlgebra, h: &Subspace, rng: &mut ChaCha8Rng) -> bool {
    let ads: Vec<Matrix> =
        h.coordinate_complement().iter().map(|u| h.restrict(&alg.ad(u)).unwrap()).collect();
    (0..1000).all(|_| {
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

fn nilradical_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for name in ["g5_35_R", "tau30_x_tau30", "s6", "s7", "s8", "g2n_3", "g2n_4", "g2n_5"] {
        let e = entry(name);
        let h = e.nilradical.as_ref().unwrap_or_else(|| panic!("{name} has no nilradical"));
        assert_eq!(verify_nilradical(&e.algebra, h).unwrap(), NilradicalVerdict::IsNilradical, "{name}");
        assert!(survives_spot_check(&e.algebra, h, &mut rng), "{name}");
    }
    let wrong = [
        ("tau30_x_tau30", vec![0, 1, 2, 4]),
        ("s6", vec![0, 1, 2, 3, 4, 5, 6]),
        ("s8", vec![0, 1, 2, 3, 4, 6]),
    ];
    for (name, idx) in wrong {
        let alg = &entry(name).algebra;
        let h = Subspace::coordinate(alg.dim(), &idx);
        assert_ne!(verify_nilradical(alg, &h).unwrap(), NilradicalVerdict::IsNilradical, "{name} {idx:?}");
    }
}

fn kahler_search_never_succeeds() {
    for name in ["g5_35_R", "g8_b", "s8"] {
        let e = entry(name);
        let out = kahler_metric_search(&e.algebra, &e.structures[0].j, 0, 4096).unwrap();
        assert_ne!(out.status, SearchStatus::Found, "{name}");
    }
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hermlie")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn cli_round_trip() {
    for name in catalog_list() {
        let e = entry(name);
        let text = serialize(&catalog_document(&e));
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.to_algebra().unwrap().differentials(), e.algebra.differentials(), "{name}");
        assert_eq!(serialize(&doc), text, "{name}");
        let (code, exported) = run(&["export", name]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(exported, text, "{name}");
    }

    let dir = tempfile::tempdir().unwrap();
    let structure = dir.path().join("s8.txt");
    let herm = dir.path().join("s8.json");
    let (code, text) = run(&["export", "s8"]);
    assert_eq!(code, 0);
    std::fs::write(&structure, text).unwrap();
    let (code, json) = run(&["export", "s8", "--hermitian"]);
    assert_eq!(code, 0);
    let e = entry("s8");
    let direct = hermitian_to_json(&HermitianFile {
        structures: e.structures.clone(),
        gk: e.gk.clone(),
        nilradical: e.nilradical.clone(),
    });
    assert_eq!(serde_json::from_str::<Value>(&json).unwrap(), direct);
    std::fs::write(&herm, json).unwrap();

    let (code, out) = run(&[
        "check",
        structure.to_str().unwrap(),
        "--hermitian",
        herm.to_str().unwrap(),
        "--assert",
        "skt=true",
        "--assert",
        "chern_ricci_flat=false",
    ]);
    assert_eq!(code, 0, "{out}");
    let report: Value = serde_json::from_str(&out).unwrap();
    let s = &report["structures"][0];
    assert_eq!(s["skt"], true);
    assert_eq!(s["chern_ricci_flat"], false);
    let w = &s["witnesses"]["chern_ricci_flat"];
    assert_eq!(w["component"], serde_json::json!([3, 7]));
    assert_eq!(w["coefficient"], "-1");
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 8] = [
        ("golden tensors", golden_tensors),
        ("SKT examples and generalized Kähler pairs", skt_examples_with_gk_pairs),
        ("SKT extensions of nilpotent bases", extension_suite),
        ("codimension-two nilradical identities", codim_two_suite),
        ("structural identities", structural_suite),
        ("nilradical verdicts", nilradical_suite),
        ("no Kähler metric found where none exists", kahler_search_never_succeeds),
        ("CLI round trip", cli_round_trip),
    ];
    panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let ok = panic::catch_unwind(AssertUnwindSafe(f)).is_ok();
        failed += !ok as usize;
        println!("criterion {} ({name}): {}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
