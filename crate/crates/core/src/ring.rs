//! Polynomial rings, monomials and degreewise monomial bases.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::field::Field;

/// Exponent vector with cached total degree.
///
/// The ordering is graded lexicographic with the declared variable order
/// (`x0 > x1 > ...`), so `x0^2 > x0*x1 > x1^2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    /// `x_i * self`
    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] += 1;
        Monomial {
            exps,
            degree: self.degree + 1,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn complement_in(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
            degree: other.degree - self.degree,
        })
    }

    /// Index of the last variable with a positive exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// The monomials of one degree, in decreasing graded-lex order, with a
/// reverse index.
#[derive(Debug)]
pub struct MonomialBasis {
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let mut monomials = Vec::new();
        let mut exps = vec![0u16; nvars];
        if nvars == 0 {
            if degree == 0 {
                monomials.push(Monomial::new(vec![]));
            }
        } else {
            fill_basis(&mut monomials, &mut exps, 0, degree);
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            degree,
            monomials,
            index,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

fn fill_basis(out: &mut Vec<Monomial>, exps: &mut [u16], pos: usize, remaining: u32) {
    if pos + 1 == exps.len() {
        exps[pos] = remaining as u16;
        out.push(Monomial::new(exps.to_vec()));
        exps[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        exps[pos] = e as u16;
        fill_basis(out, exps, pos + 1, remaining - e);
    }
    exps[pos] = 0;
}

/// Variable blocks of a Perazzo ring: `x_0..x_n` followed by `u_1..u_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Blocks {
    pub x: usize,
    pub u: usize,
}

/// A polynomial ring over an exact field with a fixed, total variable order.
///
/// Rings are shared behind `Arc`; monomial bases are built once per degree
/// and cached.
pub struct PolyRing<F: Field> {
    field: F,
    names: Vec<String>,
    blocks: Option<Blocks>,
    bases: Mutex<HashMap<u32, Arc<MonomialBasis>>>,
    mul_tables: Mutex<HashMap<u32, Arc<Vec<u32>>>>,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, names: Vec<String>) -> Arc<Self> {
        Arc::new(PolyRing {
            field,
            names,
            blocks: None,
            bases: Mutex::new(HashMap::new()),
            mul_tables: Mutex::new(HashMap::new()),
        })
    }

    /// `K[x_0..x_n, u_1..u_m]`, or its dual `K[X_0..X_n, U_1..U_m]`.
    pub fn perazzo(field: F, n: usize, m: usize, dual: bool) -> Arc<Self> {
        let (x, u) = if dual { ("X", "U") } else { ("x", "u") };
        let names = (0..=n)
            .map(|i| format!("{x}{i}"))
            .chain((1..=m).map(|k| format!("{u}{k}")))
            .collect();
        Arc::new(PolyRing {
            field,
            names,
            blocks: Some(Blocks { x: n + 1, u: m }),
            bases: Mutex::new(HashMap::new()),
            mul_tables: Mutex::new(HashMap::new()),
        })
    }

    /// The ring with the same variable order and case-swapped names, the
    /// partner of `self` under contraction.
    pub fn dual(&self) -> Arc<Self> {
        let names = self
            .names
            .iter()
            .map(|s| {
                s.chars()
                    .map(|c| {
                        if c.is_uppercase() {
                            c.to_ascii_lowercase()
                        } else {
                            c.to_ascii_uppercase()
                        }
                    })
                    .collect()
            })
            .collect();
        Arc::new(PolyRing {
            field: self.field.clone(),
            names,
            blocks: self.blocks,
            bases: Mutex::new(HashMap::new()),
            mul_tables: Mutex::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn blocks(&self) -> Option<Blocks> {
        self.blocks
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn basis(&self, t: u32) -> Arc<MonomialBasis> {
        let mut cache = self.bases.lock().expect("basis cache poisoned");
        cache
            .entry(t)
            .or_insert_with(|| Arc::new(MonomialBasis::new(self.nvars(), t)))
            .clone()
    }

    /// Flattened table `idx * nvars + k -> index of x_k * m_idx` from degree
    /// `t` into degree `t + 1`. Multiplication by a variable preserves the
    /// monomial order, so mapped indices of a sorted row stay sorted.
    pub fn mul_table(&self, t: u32) -> Arc<Vec<u32>> {
        if let Some(tab) = self
            .mul_tables
            .lock()
            .expect("table cache poisoned")
            .get(&t)
        {
            return tab.clone();
        }
        let src = self.basis(t);
        let dst = self.basis(t + 1);
        let nv = self.nvars();
        let mut tab = Vec::with_capacity(src.len() * nv);
        for m in src.monomials() {
            for k in 0..nv {
                tab.push(dst.index_of(&m.mul_var(k)).expect("product in basis") as u32);
            }
        }
        let tab = Arc::new(tab);
        self.mul_tables
            .lock()
            .expect("table cache poisoned")
            .insert(t, tab.clone());
        tab
    }

    /// Whether `self` and `other` pair under contraction: same field and same
    /// number of variables.
    pub fn pairs_with(&self, other: &PolyRing<F>) -> bool {
        self.field == other.field && self.nvars() == other.nvars()
    }
}

impl<F: Field> PartialEq for PolyRing<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.names == other.names && self.blocks == other.blocks
    }
}

impl<F: Field> fmt::Debug for PolyRing<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolyRing")
            .field("char", &self.field.characteristic())
            .field("vars", &self.names)
            .finish()
    }
}

pub fn same_ring<F: Field>(a: &Arc<PolyRing<F>>, b: &Arc<PolyRing<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The monomials of degree `t`, in the fixed basis order.
pub fn monomial_basis<F: Field>(ring: &PolyRing<F>, t: u32) -> Vec<Monomial> {
    ring.basis(t).monomials().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::binomial_u64;
    use crate::field::PrimeField;

    #[test]
    fn two_variables_degree_two() {
        let ring = PolyRing::new(PrimeField::default(), vec!["x".into(), "y".into()]);
        let b = monomial_basis(&ring, 2);
        let shown: Vec<String> = b.iter().map(|m| m.display_with(ring.names())).collect();
        assert_eq!(shown, ["x^2", "x*y", "y^2"]);
    }

    #[test]
    fn degree_zero_is_one() {
        let ring = PolyRing::perazzo(PrimeField::default(), 3, 2, false);
        let b = monomial_basis(&ring, 0);
        assert_eq!(b, vec![Monomial::one(6)]);
    }

    #[test]
    fn basis_sizes_are_binomial() {
        for nvars in 1..=13usize {
            let ring = PolyRing::new(
                PrimeField::default(),
                (0..nvars).map(|i| format!("v{i}")).collect(),
            );
            for t in 0..=12u32 {
                if binomial_u64(t as u64 + nvars as u64 - 1, nvars as u64 - 1) > 200_000 {
                    continue;
                }
                let b = ring.basis(t);
                assert_eq!(
                    b.len() as u64,
                    binomial_u64(t as u64 + nvars as u64 - 1, nvars as u64 - 1)
                );
                // strictly decreasing, hence no duplicates
                assert!(b.monomials().windows(2).all(|w| w[0] > w[1]));
            }
        }
        let ring = PolyRing::new(
            PrimeField::default(),
            vec!["a".into(), "b".into(), "c".into()],
        );
        assert_eq!(ring.basis(4).len(), 15);
    }

    #[test]
    fn dual_names_swap_case() {
        let ring = PolyRing::perazzo(PrimeField::default(), 2, 2, false);
        let dual = ring.dual();
        assert_eq!(dual.names(), ["X0", "X1", "X2", "U1", "U2"]);
        assert!(ring.pairs_with(&dual));
    }
}
