//! Closed formulas for Hilbert functions and graded Betti numbers.
//!
//! All arithmetic is done in arbitrary precision and converted to `u64` at
//! the end; a value that does not fit is an [`AlgebraError::Overflow`].
//!
//! Binomial convention: `C(a, b) = 0` whenever `b < 0` or `a < b`. The inner
//! sum `sum_{l=0}^{d-1} C(l+j-1, j-1)` over the monomials of degree `< d` in
//! `j` variables is taken to be `1` for `j = 0` and is evaluated as
//! `C(d+j-1, j)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;
use crate::ideals::HVector;
use crate::resolution::BettiTable;
use crate::ring::Monomial;

/// `C(a, b)` with the zero convention, exact.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || a < b {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for k in 0..b {
        acc *= a - k;
        acc /= k + 1;
    }
    acc
}

/// `C(a, b)` for small arguments; panics if the value exceeds `u64`.
pub fn binomial_u64(a: u64, b: u64) -> u64 {
    binomial(a as i64, b as i64)
        .to_u64()
        .expect("binomial coefficient fits in u64")
}

fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

fn to_u64(v: &BigInt, what: &str) -> Result<u64, AlgebraError> {
    if v.is_negative() {
        return Err(AlgebraError::Overflow(format!("{what} = {v} is negative")));
    }
    v.to_u64()
        .ok_or_else(|| AlgebraError::Overflow(format!("{what} = {v}")))
}

/// `sum_{l=0}^{d-1} C(l+j-1, j-1)`, via the hockey-stick identity.
pub fn inner_sum(d: u32, j: u32) -> BigInt {
    binomial(d as i64 + j as i64 - 1, j as i64)
}

/// The same sum evaluated term by term, with the `j = 0` value `1`.
pub fn inner_sum_direct(d: u32, j: u32) -> BigInt {
    if j == 0 {
        return BigInt::one();
    }
    (0..d as i64)
        .map(|l| binomial(l + j as i64 - 1, j as i64 - 1))
        .sum()
}

/// Checks `n + 1 = C(d+m-2, m-1)` together with `n, m >= 2`, `d >= 3`.
pub fn check_full(n: usize, m: usize, d: u32) -> Result<(), AlgebraError> {
    if n < 2 || m < 2 || d < 3 {
        return Err(AlgebraError::InvalidParameters(format!(
            "need n >= 2, m >= 2, d >= 3 (got n={n}, m={m}, d={d})"
        )));
    }
    let expect = binomial(d as i64 + m as i64 - 2, m as i64 - 1);
    if expect != bi(n as i64 + 1) {
        return Err(AlgebraError::InvalidParameters(format!(
            "not full: n+1 = {} but C(d+m-2, m-1) = {expect}",
            n + 1
        )));
    }
    Ok(())
}

/// `n` forced by fullness for given `m` and `d`.
pub fn full_n(m: usize, d: u32) -> Result<usize, AlgebraError> {
    let v = binomial(d as i64 + m as i64 - 2, m as i64 - 1);
    let n = to_u64(&v, "C(d+m-2, m-1)")? as usize;
    if n == 0 {
        return Err(AlgebraError::InvalidParameters(
            "empty parameter set".into(),
        ));
    }
    Ok(n - 1)
}

fn put(t: &mut BettiTable, i: usize, j: i64, v: &BigInt) -> Result<(), AlgebraError> {
    let v = to_u64(v, &format!("beta_{i},{j}"))?;
    t.add(i, j, v);
    Ok(())
}

/// Betti table of an artinian quotient of codimension `c`, socle degree `e`
/// and h-vector `(1, c, 1, ..., 1)`, in `c` variables.
pub fn betti_1c1(c: usize, e: u32) -> Result<BettiTable, AlgebraError> {
    if c < 2 || e < 3 {
        return Err(AlgebraError::InvalidParameters(format!(
            "need c >= 2 and e >= 3 (got c={c}, e={e})"
        )));
    }
    one_c_one_rows(c, c, e)
}

fn one_c_one_rows(nvars: usize, c: usize, e: u32) -> Result<BettiTable, AlgebraError> {
    let mut t = BettiTable::new(nvars);
    t.add(0, 0, 1);
    let c_ = c as i64;
    for i in 1..=c {
        let i_ = i as i64;
        let top = binomial(c_ - 1, i_ - 1);
        let lin = bi(i_) * binomial(c_ + 1, i_ + 1) - &top;
        put(&mut t, i, i_ + e as i64, &top)?;
        put(&mut t, i, i_ + 1, &lin)?;
    }
    Ok(t)
}

/// Betti table of `R/I(Z)` for `n+1` double points on a line in `P^{n+2}`.
pub fn toy_zf_betti(n: usize) -> Result<BettiTable, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::InvalidParameters(format!(
            "need n >= 2 (got {n})"
        )));
    }
    one_c_one_rows(n + 3, n + 2, n as u32)
}

/// `alpha_i = (i-1) C(d+3, i)`, the row of the binary full Perazzo algebra with
/// socle degree `d+1`.
pub fn toy_alpha(d: u32, i: usize) -> BigInt {
    bi(i as i64 - 1) * binomial(d as i64 + 3, i as i64)
}

/// Betti table of a full Perazzo algebra in `K[x_0..x_d, u, v]` with socle
/// degree `d + 1`.
pub fn toy_af_betti(d: u32) -> Result<BettiTable, AlgebraError> {
    if d < 2 {
        return Err(AlgebraError::InvalidParameters(format!(
            "need d >= 2 (got {d})"
        )));
    }
    let nv = d as usize + 3;
    let mut t = BettiTable::new(nv);
    t.add(0, 0, 1);
    t.add(nv, 2 * d as i64 + 4, 1);
    for k in 1..=d as usize + 2 {
        put(&mut t, k, k as i64 + 1, &toy_alpha(d, k + 1))?;
        put(
            &mut t,
            k,
            k as i64 + d as i64,
            &toy_alpha(d, d as usize + 4 - k),
        )?;
    }
    Ok(t)
}

/// h-vector of a full Perazzo algebra with socle degree `d`.
pub fn full_perazzo_hf(n: usize, m: usize, d: u32) -> Result<HVector, AlgebraError> {
    check_full(n, m, d)?;
    let m_ = m as i64;
    let mut h = vec![0u64; d as usize + 1];
    h[0] = 1;
    h[d as usize] = 1;
    if d == 3 {
        h[1] = (n + m + 1) as u64;
        h[2] = h[1];
    } else {
        for i in 1..=(d / 2) as i64 {
            let v = binomial(i + m_ - 1, m_ - 1) + binomial(d as i64 - i + m_ - 1, m_ - 1);
            let v = to_u64(&v, "HF")?;
            h[i as usize] = v;
            h[d as usize - i as usize] = v;
        }
    }
    Ok(HVector::new(h))
}

/// `beta_{i,i+1}` for `1 <= i <= r` of the quadratic monomial ideal with a
/// linear resolution in `r` variables built on the first `n` of them.
pub fn quadrics_linear_res_betti(n: usize, r: usize) -> Result<Vec<u64>, AlgebraError> {
    if n < 1 || n >= r {
        return Err(AlgebraError::InvalidParameters(format!(
            "need 1 <= n < r (got n={n}, r={r})"
        )));
    }
    let (n_, r_) = (n as i64, r as i64);
    (1..=r_)
        .map(|i| {
            let v = bi(i) * binomial(n_ + 1, i + 1) + bi(n_) * (binomial(r_, i) - binomial(n_, i));
            to_u64(&v, &format!("beta_{i},{}", i + 1))
        })
        .collect()
}

/// Minimal generators of that ideal: `x_i x_j` for `i, j <= n` and `x_i x_k`
/// for `i <= n < k <= r` (variables numbered from 1).
pub fn quadrics_linear_res_ideal(n: usize, r: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..r {
            let mut e = vec![0u16; r];
            e[i] += 1;
            e[j] += 1;
            out.push(Monomial::new(e));
        }
    }
    out
}

/// Betti table of `R/I(Z_F)` for a full Perazzo spec.
pub fn zf_betti(n: usize, m: usize, d: u32) -> Result<BettiTable, AlgebraError> {
    check_full(n, m, d)?;
    let (n_, m_) = (n as i64, m as i64);
    let mut t = BettiTable::new(n + m + 1);
    t.add(0, 0, 1);
    for i in 1..=(n + m) as i64 {
        let lin = bi(i) * binomial(n_ + 2, i + 1)
            + bi(n_ + 1) * (binomial(n_ + m_, i) - binomial(n_ + 1, i));
        let top: BigInt = (0..=m_ - 2)
            .map(|j| binomial(j + n_ + 1, i - 1) * inner_sum(d, j as u32))
            .sum();
        put(&mut t, i as usize, i + 1, &lin)?;
        put(&mut t, i as usize, d as i64 - 1 + i, &top)?;
    }
    Ok(t)
}

/// `alpha_i` of a full Perazzo algebra, `2 <= i <= n+m+1`.
pub fn full_alpha(n: usize, m: usize, d: u32, i: usize) -> BigInt {
    let (n_, m_, i_) = (n as i64, m as i64, i as i64);
    let mut v = bi(i_ - 1) * binomial(n_ + 2, i_)
        + bi(n_ + 1) * (binomial(n_ + m_, i_ - 1) - binomial(n_ + 1, i_ - 1));
    for j in 0..=m_ - 2 {
        v += binomial(j + n_ + 1, n_ + m_ + 1 - i_) * inner_sum(d, j as u32);
    }
    v
}

/// Betti table of a full Perazzo algebra `A_F` with socle degree `d`.
pub fn full_perazzo_betti(n: usize, m: usize, d: u32) -> Result<BettiTable, AlgebraError> {
    check_full(n, m, d)?;
    let nv = n + m + 1;
    let mut t = BettiTable::new(nv);
    t.add(0, 0, 1);
    t.add(nv, (nv as u32 + d) as i64, 1);
    for k in 1..=n + m {
        put(&mut t, k, k as i64 + 1, &full_alpha(n, m, d, k + 1))?;
        put(
            &mut t,
            k,
            k as i64 + d as i64 - 1,
            &full_alpha(n, m, d, n + m + 2 - k),
        )?;
    }
    Ok(t)
}

/// h-vector of the artinian reduction of `R/I(Z_F)`.
pub fn zf_hvector(n: usize, m: usize, d: u32) -> Result<HVector, AlgebraError> {
    check_full(n, m, d)?;
    let mut h = vec![1, (n + m) as u64];
    for t in 2..d as i64 {
        h.push(to_u64(&binomial(m as i64 + t - 2, m as i64 - 2), "h")?);
    }
    Ok(HVector::new(h))
}

/// Hilbert function of `R/I(Z_F)` in degrees `0..=top`.
pub fn zf_hilbert_function(n: usize, m: usize, d: u32, top: u32) -> Result<Vec<u64>, AlgebraError> {
    check_full(n, m, d)?;
    (0..=top)
        .map(|t| {
            if t == 0 {
                Ok(1)
            } else if t < d {
                let v = binomial(t as i64 + m as i64 - 1, m as i64 - 1) + bi(n as i64 + 1);
                to_u64(&v, "HF")
            } else {
                Ok(2 * (n as u64 + 1))
            }
        })
        .collect()
}

/// Raw degreewise stable predicate: for every generator `u`, every `k` with
/// `x_k | u` and every `i < k`, `x_i u / x_k` lies in the ideal. Returns the
/// first failing generator and witness, scanning `k` downwards and `i`
/// upwards.
pub fn stable_violation(gens: &[Monomial]) -> Option<(Monomial, Monomial)> {
    for u in gens {
        for k in (0..u.nvars()).rev() {
            if u.exps()[k] == 0 {
                continue;
            }
            for i in 0..k {
                let mut e = u.exps().to_vec();
                e[k] -= 1;
                e[i] += 1;
                let w = Monomial::new(e);
                if !gens.iter().any(|g| g.divides(&w)) {
                    return Some((u.clone(), w));
                }
            }
        }
    }
    None
}

pub fn is_stable(gens: &[Monomial]) -> bool {
    stable_violation(gens).is_none()
}

fn show(m: &Monomial) -> String {
    let names: Vec<String> = (1..=m.nvars()).map(|i| format!("x{i}")).collect();
    m.display_with(&names)
}

/// Betti table of `R/J` for a stable monomial ideal `J` given by its minimal
/// generators: `beta_{i, i+deg u-1} = sum_u C(m(u)-1, i-1)`, with `m(u)` the
/// largest (1-based) index of a variable dividing `u`.
pub fn eliahou_kervaire(gens: &[Monomial]) -> Result<BettiTable, AlgebraError> {
    let Some(first) = gens.first() else {
        return Err(AlgebraError::InvalidParameters("no generators".into()));
    };
    let nvars = first.nvars();
    if gens.iter().any(|g| g.nvars() != nvars) {
        return Err(AlgebraError::RingMismatch);
    }
    for (a, ga) in gens.iter().enumerate() {
        if ga.degree() == 0 {
            return Err(AlgebraError::InvalidParameters("unit ideal".into()));
        }
        for (b, gb) in gens.iter().enumerate() {
            if a != b && ga.divides(gb) {
                return Err(AlgebraError::NotMinimal(format!(
                    "generator {} divides {}",
                    show(ga),
                    show(gb)
                )));
            }
        }
    }
    if let Some((g, w)) = stable_violation(gens) {
        return Err(AlgebraError::NotStable {
            generator: show(&g),
            witness: show(&w),
        });
    }
    let mut t = BettiTable::new(nvars);
    t.add(0, 0, 1);
    for u in gens {
        let mu = u.max_var().expect("nonconstant") as i64 + 1;
        for i in 1..=mu {
            let v = binomial(mu - 1, i - 1);
            put(&mut t, i as usize, i + u.degree() as i64 - 1, &v)?;
        }
    }
    Ok(t)
}
