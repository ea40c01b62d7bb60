use std::collections::BTreeSet;
use std::sync::Arc;

use perazzo_core::closed_forms::{
    eliahou_kervaire, full_perazzo_betti, full_perazzo_hf, toy_zf_betti, zf_betti, zf_hvector,
};
use perazzo_core::doubling::{verify_sampled, VerifyOptions};
use perazzo_core::ideals::quotient_hf_and_hvector;
use perazzo_core::resolution::{
    hilbert_series_from_betti, mapping_cone_betti, oracle_betti_of_ideal,
};
use perazzo_core::*;
use proptest::prelude::*;

const FULL_PARAMS: [(usize, u32); 10] = [
    (2, 3),
    (2, 4),
    (2, 5),
    (2, 6),
    (3, 3),
    (3, 4),
    (3, 5),
    (3, 6),
    (4, 3),
    (4, 4),
];

fn full(m: usize, d: u32) -> usize {
    perazzo_core::closed_forms::full_n(m, d).unwrap()
}

fn gorenstein_symmetric(b: &BettiTable, d: i64) -> bool {
    let nv = b.nvars();
    b.iter()
        .all(|(i, j, v)| i <= nv && b.get(nv - i, nv as i64 + d - j) == v)
}

#[test]
fn closed_form_tables_are_gorenstein_symmetric() {
    for (m, d) in FULL_PARAMS {
        let b = full_perazzo_betti(full(m, d), m, d).unwrap();
        assert!(gorenstein_symmetric(&b, d as i64), "m={m} d={d}");
    }
}

#[test]
fn closed_form_equals_cone_of_scheme_table() {
    for (m, d) in FULL_PARAMS {
        let n = full(m, d);
        let cone = mapping_cone_betti(&zf_betti(n, m, d).unwrap(), n + m, d as i64);
        assert_eq!(cone, full_perazzo_betti(n, m, d).unwrap(), "m={m} d={d}");
    }
}

#[test]
fn closed_form_series_matches_hilbert_function() {
    for (m, d) in FULL_PARAMS {
        let n = full(m, d);
        let hs = hilbert_series_from_betti(&full_perazzo_betti(n, m, d).unwrap(), d + 3);
        let hf = full_perazzo_hf(n, m, d).unwrap();
        let padded: Vec<i64> = (0..=d as usize + 3)
            .map(|t| hf.entries().get(t).copied().unwrap_or(0) as i64)
            .collect();
        assert_eq!(hs, padded, "m={m} d={d}");
    }
}

#[test]
fn binary_reduction_matches_toy_family() {
    for d in 2..=8u32 {
        assert_eq!(
            zf_betti(d as usize, 2, d + 1).unwrap(),
            toy_zf_betti(d as usize).unwrap(),
            "d={d}"
        );
    }
}

#[test]
fn scheme_degree_is_twice_point_count() {
    for (m, d) in FULL_PARAMS {
        let n = full(m, d);
        assert_eq!(
            zf_hvector(n, m, d).unwrap().sum(),
            2 * (n as u64 + 1),
            "m={m} d={d}"
        );
    }
}

#[test]
fn betti_tables_do_not_depend_on_the_points() {
    let f = PrimeField::default();
    let opts = VerifyOptions {
        record_timing: false,
        ..Default::default()
    };
    for (m, d) in [(2, 3), (2, 4), (2, 5), (3, 3)] {
        let a = verify_sampled(&f, m, d, 11, 32002, &opts).unwrap();
        let b = verify_sampled(&f, m, d, 12, 32002, &opts).unwrap();
        assert_ne!(a.spec, b.spec);
        assert!(a.passed() && b.passed());
        assert_eq!(a.tables, b.tables, "m={m} d={d}");
        assert!(gorenstein_symmetric(&a.tables["af_oracle"], d as i64));
    }
}

fn ring(nvars: usize) -> Arc<PolyRing<PrimeField>> {
    PolyRing::new(
        PrimeField::default(),
        (1..=nvars).map(|i| format!("x{i}")).collect(),
    )
}

/// Minimal generators of the strongly stable closure of `seeds`.
fn borel_closure(nvars: usize, seeds: &[Vec<u16>]) -> Vec<Monomial> {
    let mut all: BTreeSet<Vec<u16>> = BTreeSet::new();
    let mut stack: Vec<Vec<u16>> = seeds.to_vec();
    while let Some(e) = stack.pop() {
        if !all.insert(e.clone()) {
            continue;
        }
        for k in 0..nvars {
            if e[k] == 0 {
                continue;
            }
            for i in 0..k {
                let mut w = e.clone();
                w[k] -= 1;
                w[i] += 1;
                stack.push(w);
            }
        }
    }
    let monos: Vec<Monomial> = all.into_iter().map(Monomial::new).collect();
    monos
        .iter()
        .filter(|u| !monos.iter().any(|v| v != *u && v.divides(u)))
        .cloned()
        .collect()
}

fn stable_seeds() -> impl Strategy<Value = (usize, Vec<Vec<u16>>)> {
    (1usize..=5).prop_flat_map(|nv| {
        let mono = proptest::collection::vec(0u16..=4, nv)
            .prop_filter("degree 1..=4", |e| (1..=4).contains(&e.iter().sum::<u16>()));
        (Just(nv), proptest::collection::vec(mono, 1..=3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn eliahou_kervaire_matches_oracle((nv, seeds) in stable_seeds()) {
        let gens = borel_closure(nv, &seeds);
        let r = ring(nv);
        let ideal = HomogeneousIdeal::new(
            &r,
            gens.iter().map(|g| Form::monomial(&r, g.clone())).collect(),
        ).unwrap();
        let top = gens.iter().map(|g| g.degree()).max().unwrap();
        let oracle = oracle_betti_of_ideal(&ideal, top, None).unwrap();
        prop_assert_eq!(oracle, eliahou_kervaire(&gens).unwrap());
    }
}

type RawForm = (u32, Vec<(Vec<u16>, i64)>);

fn small_forms() -> impl Strategy<Value = Vec<RawForm>> {
    let form = (1u32..=3).prop_flat_map(|deg| {
        let term = (proptest::collection::vec(0u16..=3, 3), -3i64..=3);
        (Just(deg), proptest::collection::vec(term, 1..=4))
    });
    proptest::collection::vec(form, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn oracle_series_matches_direct_hilbert_function(raw in small_forms()) {
        let r = ring(3);
        let f = *r.field();
        let mut gens = Vec::new();
        for (deg, terms) in raw {
            let terms: Vec<_> = terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<u16>() as u32 == deg)
                .map(|(e, c)| (Monomial::new(e), f.from_i64(c)))
                .collect();
            if let Ok(g) = Form::from_terms(&r, deg, terms) {
                if !g.is_zero() {
                    gens.push(g);
                }
            }
        }
        prop_assume!(!gens.is_empty());
        let ideal = HomogeneousIdeal::new(&r, gens).unwrap();
        let top = 5;
        let b = oracle_betti_of_ideal(&ideal, top, None).unwrap();
        let (hf, _) = quotient_hf_and_hvector(&ideal, top);
        let direct: Vec<i64> = hf.values.iter().map(|&v| v as i64).collect();
        prop_assert_eq!(hilbert_series_from_betti(&b, top), direct);
    }
}
