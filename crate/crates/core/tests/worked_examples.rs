use std::sync::Arc;

use perazzo_core::closed_forms::{full_perazzo_betti, toy_af_betti, zf_betti};
use perazzo_core::doubling::{
    verify_doubling_pair, verify_full_perazzo, verify_sampled, PairOptions, Status, Tier,
    VerifyOptions,
};
use perazzo_core::ideals::{
    general_position_check, generator_count_in_degree, quotient_hf_and_hvector, zf_ideal,
};
use perazzo_core::inverse_system::{
    annihilator_min_gens, build_perazzo_form, catalecticant, inverse_system_hf, GeneralParts,
    IntPoly,
};
use perazzo_core::matrix::rank_of_rows;
use perazzo_core::resolution::oracle_betti_of_ideal;
use perazzo_core::*;

fn xyz() -> Arc<PolyRing<PrimeField>> {
    PolyRing::new(
        PrimeField::default(),
        vec!["x".into(), "y".into(), "z".into()],
    )
}

fn toy_spec() -> PerazzoSpec {
    PerazzoSpec::new(
        3,
        2,
        4,
        vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 3]],
    )
}

fn stanley_spec() -> PerazzoSpec {
    let p = [
        [3, 0, 0],
        [0, 3, 0],
        [0, 0, 3],
        [2, 1, 0],
        [2, 0, 1],
        [1, 2, 0],
        [0, 2, 1],
        [1, 0, 2],
        [0, 1, 2],
        [1, 1, 1],
    ]
    .iter()
    .map(|e| IntPoly {
        terms: vec![(e.to_vec(), 1)],
    })
    .collect();
    PerazzoSpec::with_parts(9, 3, 4, GeneralParts { p, g: None }, true)
}

fn ci_ideal(
    r: &Arc<PolyRing<PrimeField>>,
    first: Form<PrimeField>,
) -> HomogeneousIdeal<PrimeField> {
    let y2 = Form::var(r, 1).pow(2);
    let z3 = Form::var(r, 2).pow(3);
    HomogeneousIdeal::new(r, vec![first, y2, z3]).unwrap()
}

#[test]
fn toy_verification_passes_with_expected_table() {
    let f = PrimeField::default();
    let rep = verify_full_perazzo(&f, &toy_spec(), &VerifyOptions::default(), 0).unwrap();
    assert!(rep.passed(), "{rep:#?}");
    assert!(rep.checks.iter().all(|c| c.status == Status::Pass));
    let a = &rep.tables["af_oracle"];
    assert_eq!(a.row(1, 5), vec![0, 15, 40, 45, 24, 5]);
    assert_eq!(a.row(3, 5), vec![0, 5, 24, 45, 40, 15]);
    assert_eq!(a.get(0, 0), 1);
    assert_eq!(a.get(6, 10), 1);
    assert_eq!(a, &toy_af_betti(3).unwrap());
}

#[test]
fn nine_variable_pipeline_passes_all_tiers() {
    let f = PrimeField::default();
    let rep = verify_sampled(&f, 3, 3, 0, 32002, &VerifyOptions::default()).unwrap();
    assert_eq!(rep.spec.as_ref().unwrap().n, 5);
    assert!(rep.passed());
    for name in ["f_oracle_af", "f_oracle_zf", "f_oracle_cone"] {
        assert_eq!(rep.check(name).unwrap().status, Status::Pass);
    }
}

#[test]
fn complete_intersection_table() {
    let r = xyz();
    let lin = Form::var(&r, 0).sub(&Form::var(&r, 1)).unwrap();
    let ideal = ci_ideal(&r, lin);
    let b = oracle_betti_of_ideal(&ideal, 4, None).unwrap();
    let expect = [
        (0, 0),
        (1, 1),
        (1, 2),
        (1, 3),
        (2, 3),
        (2, 4),
        (2, 5),
        (3, 6),
    ];
    assert_eq!(b.entries().len(), expect.len());
    for (i, j) in expect {
        assert_eq!(b.get(i, j), 1, "beta_{i},{j}");
    }
    let (_, h) = quotient_hf_and_hvector(&ideal, 5);
    assert_eq!(h.entries(), [1, 2, 2, 1]);
}

#[test]
fn doubling_pairs() {
    let r = xyz();
    let j =
        HomogeneousIdeal::new(&r, vec![Form::var(&r, 1).pow(2), Form::var(&r, 2).pow(3)]).unwrap();
    let lin = Form::var(&r, 0).sub(&Form::var(&r, 1)).unwrap();
    let rep = verify_doubling_pair(&j, &ci_ideal(&r, lin), 3, 2, &PairOptions::default()).unwrap();
    assert!(rep.passed(), "{rep:#?}");

    let rep = verify_doubling_pair(
        &j,
        &ci_ideal(&r, Form::var(&r, 0)),
        3,
        2,
        &PairOptions::default(),
    )
    .unwrap();
    assert!(rep.passed(), "{rep:#?}");
    assert_eq!(rep.check("e_cone").unwrap().status, Status::Pass);
}

#[test]
fn non_full_binary_quartics_table() {
    let f = PrimeField::default();
    let spec = PerazzoSpec::new(
        3,
        2,
        5,
        vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]],
    );
    let s = PolyRing::perazzo(f, 3, 2, true);
    let r = PolyRing::perazzo(f, 3, 2, false);
    let ann = Annihilator::new(&r, build_perazzo_form(&s, &spec).unwrap()).unwrap();
    let b = oracle_betti_of_ideal(&ann, 5, None).unwrap();
    assert_eq!(b.row(1, 6), vec![0, 14, 36, 39, 20, 4, 0]);
    assert_eq!(b.row(2, 6), vec![0, 1, 4, 6, 4, 1, 0]);
    assert_eq!(b.row(3, 6), vec![0, 1, 4, 6, 4, 1, 0]);
    assert_eq!(b.row(4, 6), vec![0, 4, 20, 39, 36, 14, 0]);
    assert_eq!(b.get(0, 0), 1);
    assert_eq!(b.get(6, 11), 1);
}

#[test]
fn stanley_form_hilbert_function_and_generators() {
    let f = PrimeField::default();
    let spec = stanley_spec();
    let s = PolyRing::perazzo(f, 9, 3, true);
    let r = PolyRing::perazzo(f, 9, 3, false);
    let form = build_perazzo_form(&s, &spec).unwrap();
    assert_eq!(form.num_terms(), 10);
    assert_eq!(inverse_system_hf(&form).entries(), [1, 13, 12, 13, 1]);
    let cat = catalecticant(&form, 2).unwrap();
    assert_eq!(rank_of_rows(&f, cat.ncols(), cat.rows()), 12);

    let ann = Annihilator::new(&r, form).unwrap();
    let gens = annihilator_min_gens(&ann);
    let table = full_perazzo_betti(9, 3, 4).unwrap();
    for t in 1..=5u32 {
        assert_eq!(
            gens.count_in_degree(t) as u64,
            table.get(1, t as i64),
            "degree {t}"
        );
    }
    assert_eq!(gens.count_in_degree(2), 79);
}

#[test]
fn stanley_parameters_at_default_tier() {
    let f = PrimeField::default();
    let rep = verify_sampled(&f, 3, 4, 0, 32002, &VerifyOptions::default()).unwrap();
    assert!(rep.passed());
    for c in &rep.checks {
        let expected = if c.name.starts_with("f_") {
            Status::Skipped
        } else {
            Status::Pass
        };
        assert_eq!(c.status, expected, "{}", c.name);
    }
}

#[test]
fn stanley_parameters_at_deep_tier() {
    let f = PrimeField::default();
    let opts = VerifyOptions {
        tier: Tier::Deep,
        ..Default::default()
    };
    let rep = verify_sampled(&f, 3, 4, 0, 32002, &opts).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.check("f_oracle_af").unwrap().status, Status::Pass);
}

#[test]
fn stanley_form_oracle_table() {
    let f = PrimeField::default();
    let s = PolyRing::perazzo(f, 9, 3, true);
    let r = PolyRing::perazzo(f, 9, 3, false);
    let ann = Annihilator::new(&r, build_perazzo_form(&s, &stanley_spec()).unwrap()).unwrap();
    let b = oracle_betti_of_ideal(&ann, 4, None).unwrap();
    assert_eq!(b, full_perazzo_betti(9, 3, 4).unwrap());
}

#[test]
fn zf_generator_counts_follow_closed_form() {
    let f = PrimeField::default();
    for (m, d, seed) in [(2, 4, 1), (3, 3, 2), (2, 5, 3)] {
        let (spec, _) = PerazzoSpec::sample_full(&f, m, d, seed, 32002).unwrap();
        let r = PolyRing::perazzo(f, spec.n, m, false);
        let zf = zf_ideal(&r, &spec).unwrap();
        let b = zf_betti(spec.n, m, d).unwrap();
        for t in 1..=d + 1 {
            assert_eq!(
                generator_count_in_degree(&zf, t) as u64,
                b.get(1, t as i64),
                "m={m} d={d} t={t}"
            );
        }
    }
}

#[test]
fn collinear_points_are_rejected() {
    let f = PrimeField::default();
    let forms = vec![
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![1, 1, 0],
        vec![1, 2, 0],
        vec![1, 3, 0],
        vec![0, 0, 1],
    ];
    let spec = PerazzoSpec::new(5, 3, 3, forms);
    assert!(spec.full);
    assert!(!general_position_check(&f, &spec));
    let r = PolyRing::perazzo(f, 5, 3, false);
    assert!(matches!(
        zf_ideal(&r, &spec),
        Err(AlgebraError::NotGeneralPosition)
    ));
    assert!(matches!(
        verify_full_perazzo(&f, &spec, &VerifyOptions::default(), 0),
        Err(AlgebraError::NotGeneralPosition)
    ));
}

#[test]
fn rational_mode_matches_prime_mode() {
    let opts = VerifyOptions {
        record_timing: false,
        ..Default::default()
    };
    let p = verify_full_perazzo(&PrimeField::default(), &toy_spec(), &opts, 0).unwrap();
    let q = verify_full_perazzo(&RationalField, &toy_spec(), &opts, 0).unwrap();
    assert_eq!(p.checks, q.checks);
    assert_eq!(p.tables, q.tables);
}

#[test]
fn one_c_one_table_matches_monomial_ideal() {
    use perazzo_core::closed_forms::betti_1c1;
    for (c, e) in [(2usize, 3u32), (3, 3), (4, 3), (3, 5)] {
        let names = (0..c).map(|i| format!("x{i}")).collect();
        let r = PolyRing::new(PrimeField::default(), names);
        let mut gens = vec![Form::var(&r, c - 1).pow(e + 1)];
        for i in 0..c {
            for j in i..c {
                if (i, j) != (c - 1, c - 1) {
                    gens.push(Form::var(&r, i).multiply(&Form::var(&r, j)).unwrap());
                }
            }
        }
        let ideal = HomogeneousIdeal::new(&r, gens).unwrap();
        let b = oracle_betti_of_ideal(&ideal, e, None).unwrap();
        assert_eq!(b, betti_1c1(c, e).unwrap(), "c={c} e={e}");
    }
}
