//! Machine-checked doubling pipelines.
//!
//! [`verify_full_perazzo`] replays, on one concrete spec, the argument that a
//! full Perazzo algebra `A_F` is the doubling of its double-point scheme
//! `Z_F`. The exact sequence `0 -> omega(-d) -> R/I(Z_F) -> A_F -> 0` is not
//! built as a module map; it is certified through Hilbert series and Betti
//! table agreement.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::closed_forms::{
    binomial_u64, check_full, full_perazzo_betti, full_perazzo_hf, zf_betti, zf_hilbert_function,
    zf_hvector,
};
use crate::error::AlgebraError;
use crate::field::Field;
use crate::ideals::{
    double_point_ideal, general_position_check, generator_count_in_degree, is_contained,
    pieces_equal, quotient_hf_and_hvector, zf_ideal, GradedIdeal, HomogeneousIdeal,
    IntersectionIdeal,
};
use crate::inverse_system::{build_perazzo_form, inverse_system_hf, Annihilator, PerazzoSpec};
use crate::resolution::{
    dual_betti_table, hilbert_series_from_betti, mapping_cone_betti, oracle_betti_of_ideal,
    regularity, BettiTable,
};
use crate::ring::PolyRing;

/// Default bound on the number of variables for oracle runs.
pub const DEFAULT_ORACLE_MAX_VARS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Default,
    Deep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub tier: Tier,
    pub oracle_max_vars: usize,
    pub seed: Option<u64>,
    pub record_timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tier: Tier::Default,
            oracle_max_vars: DEFAULT_ORACLE_MAX_VARS,
            seed: None,
            record_timing: true,
        }
    }
}

impl VerifyOptions {
    fn oracle_allowed(&self, nvars: usize) -> bool {
        self.tier == Tier::Deep || nvars <= self.oracle_max_vars
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub observed: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub characteristic: u64,
    pub seed: Option<u64>,
    pub tier: Tier,
    pub oracle_max_vars: usize,
    pub resamples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub config: ReportConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<PerazzoSpec>,
    pub checks: Vec<Check>,
    pub tables: BTreeMap<String, BettiTable>,
    pub verdict: Status,
    /// Wall-clock time; not part of report comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The report with timing removed, for comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            timing_ms: None,
            ..self.clone()
        }
    }
}

struct Builder {
    checks: Vec<Check>,
    tables: BTreeMap<String, BettiTable>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            checks: Vec::new(),
            tables: BTreeMap::new(),
        }
    }

    fn record(&mut self, name: &str, ok: bool, observed: impl ToString, expected: impl ToString) {
        self.checks.push(Check {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            observed: observed.to_string(),
            expected: expected.to_string(),
        });
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.checks.push(Check {
            name: name.to_string(),
            status: Status::Skipped,
            observed: why.to_string(),
            expected: String::new(),
        });
    }

    fn compare_tables(&mut self, name: &str, observed: &BettiTable, expected: &BettiTable) {
        match table_difference(observed, expected) {
            None => self.record(name, true, "equal", "equal"),
            Some(diff) => self.record(name, false, diff, "equal tables"),
        }
    }

    fn finish(
        mut self,
        subject: String,
        config: ReportConfig,
        spec: Option<PerazzoSpec>,
        start: Option<Instant>,
    ) -> VerificationReport {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        let verdict = if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        VerificationReport {
            subject,
            config,
            spec,
            checks: self.checks,
            tables: self.tables,
            verdict,
            timing_ms: start.map(|s| s.elapsed().as_millis() as u64),
        }
    }
}

/// First entry where two tables differ, if any.
pub fn table_difference(a: &BettiTable, b: &BettiTable) -> Option<String> {
    let mut keys: Vec<(usize, i64)> = a
        .entries()
        .keys()
        .chain(b.entries().keys())
        .copied()
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .find(|&(i, j)| a.get(i, j) != b.get(i, j))
        .map(|(i, j)| format!("beta_{i},{j}: {} vs {}", a.get(i, j), b.get(i, j)))
}

/// First index where two series differ.
pub fn series_difference(a: &[i64], b: &[i64]) -> Option<String> {
    a.iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .map(|k| format!("coefficient {k}: {} vs {}", a[k], b[k]))
}

fn direct_series<F: Field>(ideal: &dyn GradedIdeal<F>, top: u32) -> Vec<i64> {
    let ring = ideal.ring();
    (0..=top)
        .map(|t| (ring.basis(t).len() - ideal.dim(t)) as i64)
        .collect()
}

/// Order of vanishing at `t = 1` of `sum (-1)^i beta_{i,j} t^j`, which is the
/// codimension of the module.
pub fn codimension_from_betti(b: &BettiTable) -> usize {
    let mut coeffs: BTreeMap<i64, i128> = BTreeMap::new();
    for (i, j, v) in b.iter() {
        *coeffs.entry(j).or_insert(0) += if i % 2 == 0 { v as i128 } else { -(v as i128) };
    }
    let lo = coeffs.keys().next().copied().unwrap_or(0);
    let mut poly: Vec<i128> = Vec::new();
    for (j, c) in coeffs {
        let k = (j - lo) as usize;
        if poly.len() <= k {
            poly.resize(k + 1, 0);
        }
        poly[k] = c;
    }
    let mut order = 0;
    while !poly.is_empty() && poly.iter().sum::<i128>() == 0 {
        // divide by (t - 1) using synthetic division
        let mut q = vec![0i128; poly.len() - 1];
        let mut acc = 0i128;
        for k in (1..poly.len()).rev() {
            acc += poly[k];
            q[k - 1] = acc;
        }
        poly = q;
        order += 1;
    }
    order
}

/// Runs all checks on a full Perazzo spec.
pub fn verify_full_perazzo<F: Field>(
    field: &F,
    spec: &PerazzoSpec,
    opts: &VerifyOptions,
    resamples: usize,
) -> Result<VerificationReport, AlgebraError> {
    let start = opts.record_timing.then(Instant::now);
    if !spec.full {
        return Err(AlgebraError::InvalidParameters(
            "verification needs a full spec; the double-point scheme is only defined there".into(),
        ));
    }
    check_full(spec.n, spec.m, spec.d)?;
    spec.validate(field)?;
    if spec.parts.is_some() {
        return Err(AlgebraError::InvalidParameters(
            "verification needs the linear forms L_i, not explicit parts".into(),
        ));
    }
    if !general_position_check(field, spec) {
        return Err(AlgebraError::NotGeneralPosition);
    }
    let (n, m, d) = (spec.n, spec.m, spec.d);
    let nvars = spec.nvars();
    let r = PolyRing::perazzo(field.clone(), n, m, false);
    let s = PolyRing::perazzo(field.clone(), n, m, true);
    let form = build_perazzo_form(&s, spec)?;
    let ann = Arc::new(Annihilator::new(&r, form.clone())?);
    let zf = Arc::new(zf_ideal(&r, spec)?);
    let points: Vec<Arc<dyn GradedIdeal<F>>> = (0..=n)
        .map(|i| double_point_ideal(&r, spec, i).map(|p| Arc::new(p) as Arc<dyn GradedIdeal<F>>))
        .collect::<Result<_, _>>()?;
    let inter = IntersectionIdeal::new(points)?;

    let mut b = Builder::new();
    let af_formula = full_perazzo_betti(n, m, d)?;
    let zf_formula = zf_betti(n, m, d)?;

    let agree = pieces_equal(zf.as_ref(), &inter, d + 1);
    b.record(
        "zf_two_paths",
        agree,
        if agree {
            "pieces equal"
        } else {
            "pieces differ"
        },
        format!("generators and intersection agree through degree {}", d + 1),
    );

    let contained = is_contained(&zf, ann.as_ref(), d + 1);
    b.record(
        "a_containment",
        contained,
        contained,
        format!("I(Z_F) inside Ann(F) through degree {}", d + 1),
    );

    let hf_af = inverse_system_hf(&form);
    let hf_af_expected = full_perazzo_hf(n, m, d)?;
    b.record(
        "b_hf_af",
        hf_af == hf_af_expected,
        format!("{:?}", hf_af.entries()),
        format!("{:?}", hf_af_expected.entries()),
    );

    let (hf_zf, h_zf) = quotient_hf_and_hvector(zf.as_ref(), d + 2);
    let hf_zf_expected = zf_hilbert_function(n, m, d, d + 2)?;
    b.record(
        "b_hf_zf",
        hf_zf.values == hf_zf_expected,
        format!("{:?}", hf_zf.values),
        format!("{hf_zf_expected:?}"),
    );
    let h_expected = zf_hvector(n, m, d)?;
    b.record(
        "b_hvector_zf",
        h_zf == h_expected,
        format!("{:?}", h_zf.entries()),
        format!("{:?}", h_expected.entries()),
    );

    let delta = generator_count_in_degree(ann.as_ref(), d) as i64
        - generator_count_in_degree(zf.as_ref(), d) as i64;
    b.record("c_generator_delta", delta == n as i64 + 1, delta, n + 1);
    let deg2 = hf_zf.values[2] as i64 - hf_af.entries()[2] as i64;
    let deg2_expected = binomial_u64(d as u64 + m as u64 - 3, m as u64 - 2);
    b.record(
        "c_degree2_delta",
        deg2 == deg2_expected as i64,
        deg2,
        deg2_expected,
    );

    let top = d + 2;
    let omega = dual_betti_table(&zf_formula, n + m, d as i64);
    let lhs: Vec<i64> = hilbert_series_from_betti(&zf_formula, top)
        .iter()
        .zip(hilbert_series_from_betti(&omega, top))
        .map(|(z, w)| z - w)
        .collect();
    let direct_z = direct_series(zf.as_ref(), top);
    let direct_a: Vec<i64> = (0..=top as usize)
        .map(|t| hf_af.entries().get(t).copied().unwrap_or(0) as i64)
        .collect();
    let lhs_direct: Vec<i64> = direct_z
        .iter()
        .zip(hilbert_series_from_betti(&omega, top))
        .map(|(z, w)| z - w)
        .collect();
    let exact = lhs == direct_a && lhs_direct == direct_a;
    b.record(
        "d_series_exactness",
        exact,
        format!("{lhs_direct:?}"),
        format!("{direct_a:?}"),
    );

    let cone = mapping_cone_betti(&zf_formula, n + m, d as i64);
    b.compare_tables("e_cone_closed_form", &cone, &af_formula);

    if opts.oracle_allowed(nvars) {
        let (oa, oz) = rayon::join(
            || oracle_betti_of_ideal(ann.as_ref(), d, opts.seed),
            || oracle_betti_of_ideal(zf.as_ref(), d, opts.seed),
        );
        let (oa, oz) = (oa?, oz?);
        b.compare_tables("f_oracle_af", &oa, &af_formula);
        b.compare_tables("f_oracle_zf", &oz, &zf_formula);
        b.compare_tables(
            "f_oracle_cone",
            &mapping_cone_betti(&oz, n + m, d as i64),
            &oa,
        );
        b.tables.insert("af_oracle".into(), oa);
        b.tables.insert("zf_oracle".into(), oz);
    } else {
        let why = format!(
            "{nvars} variables exceed the oracle budget of {}",
            opts.oracle_max_vars
        );
        for name in ["f_oracle_af", "f_oracle_cone", "f_oracle_zf"] {
            b.skip(name, &why);
        }
    }
    b.tables.insert("af_formula".into(), af_formula);
    b.tables.insert("zf_formula".into(), zf_formula);

    let config = ReportConfig {
        characteristic: field.characteristic(),
        seed: opts.seed,
        tier: opts.tier,
        oracle_max_vars: opts.oracle_max_vars,
        resamples,
    };
    Ok(b.finish(
        format!("full Perazzo algebra (n, m, d) = ({n}, {m}, {d})"),
        config,
        Some(spec.clone()),
        start,
    ))
}

/// Samples a general-position spec for `(m, d)` from `seed` and verifies it.
pub fn verify_sampled<F: Field>(
    field: &F,
    m: usize,
    d: u32,
    seed: u64,
    bound: i64,
    opts: &VerifyOptions,
) -> Result<VerificationReport, AlgebraError> {
    let (spec, resamples) = PerazzoSpec::sample_full(field, m, d, seed, bound)?;
    let opts = VerifyOptions {
        seed: Some(seed),
        ..opts.clone()
    };
    verify_full_perazzo(field, &spec, &opts, resamples)
}

#[derive(Clone, Debug, Default)]
pub struct PairOptions {
    pub base: VerifyOptions,
    /// Last degree of the series comparison.
    pub series_top: Option<u32>,
    /// Last Betti row computed for `R/J`; one guard row is added.
    pub max_row: Option<u32>,
}

fn row_bound<F: Field>(ideal: &HomogeneousIdeal<F>) -> u32 {
    ideal
        .generators()
        .iter()
        .map(|g| g.degree().saturating_sub(1))
        .sum::<u32>()
        .max(ideal.max_generator_degree().saturating_sub(1))
}

/// Checks that `R/I` is the doubling of `R/J` with twist `d`, where `R/J`
/// is Cohen-Macaulay of codimension `c`.
pub fn verify_doubling_pair<F: Field>(
    j: &HomogeneousIdeal<F>,
    i: &HomogeneousIdeal<F>,
    d: i64,
    c: usize,
    opts: &PairOptions,
) -> Result<VerificationReport, AlgebraError> {
    let start = opts.base.record_timing.then(Instant::now);
    let ring = j.ring();
    if !crate::ring::same_ring(ring, i.ring()) {
        return Err(AlgebraError::RingMismatch);
    }
    let nvars = ring.nvars();
    let max_row_j = opts.max_row.unwrap_or_else(|| row_bound(j));
    let top = opts
        .series_top
        .unwrap_or_else(|| (d.max(0) as u32).max(max_row_j) + nvars as u32 + 2);
    let mut b = Builder::new();

    let contained = is_contained(j, i, top);
    b.record("a_containment", contained, contained, "J inside I");

    if !opts.base.oracle_allowed(nvars) {
        let why = format!(
            "{nvars} variables exceed the oracle budget of {}",
            opts.base.oracle_max_vars
        );
        for name in ["b_window", "c_cohen_macaulay", "d_series", "e_cone"] {
            b.skip(name, &why);
        }
    } else {
        let bj = oracle_betti_of_ideal(j, max_row_j + 1, opts.base.seed)?;
        let guard: Vec<u64> = bj.row_nonzero(max_row_j as i64 + 1);
        b.record(
            "b_window",
            guard.is_empty(),
            format!("guard row {}: {guard:?}", max_row_j + 1),
            "empty guard row",
        );
        let pd = bj.projective_dimension().unwrap_or(0);
        let codim = codimension_from_betti(&bj);
        b.record(
            "c_cohen_macaulay",
            pd == c && codim == c,
            format!("projective dimension {pd}, codimension {codim}"),
            format!("both {c}"),
        );

        let omega = dual_betti_table(&bj, c, d);
        let lhs: Vec<i64> = direct_series(j, top)
            .iter()
            .zip(hilbert_series_from_betti(&omega, top))
            .map(|(a, w)| a - w)
            .collect();
        let rhs = direct_series(i, top);
        match series_difference(&lhs, &rhs) {
            None => b.record("d_series", true, format!("{lhs:?}"), format!("{rhs:?}")),
            Some(diff) => b.record("d_series", false, diff, format!("{rhs:?}")),
        }

        let cone = mapping_cone_betti(&bj, c, d);
        let reg = regularity(&cone).unwrap_or(0).max(0) as u32;
        let bi = oracle_betti_of_ideal(i, reg + 1, opts.base.seed)?;
        b.compare_tables("e_cone", &bi, &cone);
        b.tables.insert("j_oracle".into(), bj);
        b.tables.insert("i_oracle".into(), bi);
        b.tables.insert("cone".into(), cone);
    }

    let config = ReportConfig {
        characteristic: ring.field().characteristic(),
        seed: opts.base.seed,
        tier: opts.base.tier,
        oracle_max_vars: opts.base.oracle_max_vars,
        resamples: 0,
    };
    Ok(b.finish(
        format!("doubling pair, twist {d}, codimension {c}"),
        config,
        None,
        start,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::form::Form;

    #[test]
    fn codimension_of_simple_tables() {
        let mut b = BettiTable::new(3);
        b.add(0, 0, 1);
        b.add(1, 2, 1);
        b.add(1, 3, 1);
        b.add(2, 5, 1);
        assert_eq!(codimension_from_betti(&b), 2);
        let mut free = BettiTable::new(3);
        free.add(0, 0, 1);
        assert_eq!(codimension_from_betti(&free), 0);
    }

    #[test]
    fn non_full_specs_are_refused() {
        let field = PrimeField::default();
        let spec = PerazzoSpec::new(
            3,
            2,
            5,
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]],
        );
        assert!(!spec.full);
        assert!(matches!(
            verify_full_perazzo(&field, &spec, &VerifyOptions::default(), 0),
            Err(AlgebraError::InvalidParameters(_))
        ));
    }

    #[test]
    fn equal_ideals_are_not_a_doubling() {
        let r = PolyRing::new(
            PrimeField::default(),
            vec!["x".into(), "y".into(), "z".into()],
        );
        let gens = || vec![Form::var(&r, 1).pow(2), Form::var(&r, 2).pow(3)];
        let j = HomogeneousIdeal::new(&r, gens()).unwrap();
        let i = HomogeneousIdeal::new(&r, gens()).unwrap();
        let rep = verify_doubling_pair(&j, &i, 3, 2, &PairOptions::default()).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.check("d_series").unwrap().status, Status::Fail);
    }
}
