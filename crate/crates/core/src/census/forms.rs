//! Level-one modular forms as q-expansions: Eisenstein series, `Delta`,
//! Victor Miller bases and Hecke operators.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::field::{Integers, PrimeField, Ring};
use super::qseries::QSeries;
use super::CensusError;
use crate::numth::{is_prime, pow_mod};

/// Divisor power sums `sum_{d | n} power(d)` for `0 <= n <= prec` (entry 0 unused).
fn divisor_sums<T: Clone>(prec: usize, zero: T, power: impl Fn(u64) -> T, add: impl Fn(&T, &T) -> T) -> Vec<T> {
    let mut s = vec![zero; prec + 1];
    for d in 1..=prec {
        let dp = power(d as u64);
        for m in (d..=prec).step_by(d) {
            s[m] = add(&s[m], &dp);
        }
    }
    s
}

fn eisenstein_constant(k: u32) -> Result<i64, CensusError> {
    match k {
        4 => Ok(240),
        6 => Ok(-504),
        _ => Err(CensusError::BadWeight(k as i64)),
    }
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n` or `E_6 = 1 - 504 sum sigma_5(n) q^n`.
pub fn eisenstein(k: u32, prec: usize) -> Result<QSeries<Integers>, CensusError> {
    let c = BigInt::from(eisenstein_constant(k)?);
    if prec == 0 {
        return Err(CensusError::PrecisionTooSmall { needed: 1, got: 0 });
    }
    let sums = divisor_sums(prec, BigInt::zero(), |d| BigInt::from(d).pow(k - 1), |a, b| a + b);
    let mut coeffs: Vec<BigInt> = sums.into_iter().map(|s| s * &c).collect();
    coeffs[0] = BigInt::from(1);
    Ok(QSeries::new(Integers, coeffs))
}

pub fn eisenstein_mod_p(k: u32, p: u64, prec: usize) -> Result<QSeries<PrimeField>, CensusError> {
    let c = eisenstein_constant(k)?;
    let f = PrimeField::new(p);
    let c = f.from_i64(c);
    let sums = divisor_sums(prec, 0u64, |d| pow_mod(d % p, (k - 1) as u64, p), |a, b| f.add(a, b));
    let mut coeffs: Vec<u64> = sums.into_iter().map(|s| f.mul(&s, &c)).collect();
    coeffs[0] = 1;
    Ok(QSeries::new(f, coeffs))
}

/// `Delta = (E_4^3 - E_6^2) / 1728`.
pub fn delta(prec: usize) -> Result<QSeries<Integers>, CensusError> {
    let e4 = eisenstein(4, prec)?;
    let e6 = eisenstein(6, prec)?;
    let diff = e4.pow(3).sub(&e6.pow(2));
    let d = BigInt::from(1728);
    let mut coeffs = Vec::with_capacity(prec + 1);
    for c in diff.coeffs() {
        let (q, r) = c.div_rem(&d);
        if !r.is_zero() {
            return Err(CensusError::NonExactDivision);
        }
        coeffs.push(q);
    }
    Ok(QSeries::new(Integers, coeffs))
}

/// `q prod_{n >= 1} (1 - q^n)^24` over any ring, using the pentagonal
/// number theorem for the inner product.
pub fn delta_product<R: Ring>(ring: R, prec: usize) -> QSeries<R> {
    let mut coeffs = vec![ring.zero(); prec + 1];
    coeffs[0] = ring.one();
    for j in 1i64.. {
        let g1 = (j * (3 * j - 1) / 2) as usize;
        if g1 > prec {
            break;
        }
        let sign = if j % 2 == 1 { ring.from_i64(-1) } else { ring.one() };
        coeffs[g1] = sign.clone();
        let g2 = (j * (3 * j + 1) / 2) as usize;
        if g2 <= prec {
            coeffs[g2] = sign;
        }
    }
    let eta24 = QSeries::new(ring.clone(), coeffs).pow(24);
    let mut shifted = vec![ring.zero()];
    shifted.extend(eta24.coeffs()[..prec].iter().cloned());
    QSeries::new(ring, shifted)
}

/// Dimension of the space of level-one cusp forms of weight `k`.
pub fn dim_cusp(k: i64) -> usize {
    if k < 12 || k % 2 != 0 || k == 14 {
        return 0;
    }
    let d = (k / 12) as usize;
    if k % 12 == 2 {
        d - 1
    } else {
        d
    }
}

/// Exponents `(a, b)` with `4a + 6b = k - 12 d`.
fn eisenstein_part(k: i64, d: usize) -> (u32, u32) {
    match k - 12 * d as i64 {
        0 => (0, 0),
        4 => (1, 0),
        6 => (0, 1),
        8 => (2, 0),
        10 => (1, 1),
        14 => (2, 1),
        r => unreachable!("residual weight {r}"),
    }
}

fn check_weight(k: i64) -> Result<usize, CensusError> {
    if k < 2 || k % 2 != 0 {
        return Err(CensusError::BadWeight(k));
    }
    Ok(dim_cusp(k))
}

/// Shared construction: `g_j = Delta^j E_6^{2(d-j)} E_4^a E_6^b`, then
/// echelonised so that `f_i = q^i + O(q^{d+1})`.
fn build_basis<R: Ring>(
    k: i64,
    d: usize,
    e4: &QSeries<R>,
    e6: &QSeries<R>,
    delta: &QSeries<R>,
) -> Vec<QSeries<R>> {
    let ring = e4.ring().clone();
    let prec = e4.prec();
    let (a, b) = eisenstein_part(k, d);
    let tail = e4.pow(a).mul(&e6.pow(b));
    let e6sq = e6.mul(e6);
    let mut e6_powers = vec![QSeries::one(ring.clone(), prec)];
    for _ in 1..d {
        let next = e6_powers.last().expect("nonempty").mul(&e6sq);
        e6_powers.push(next);
    }
    let mut g = Vec::with_capacity(d);
    let mut delta_j = QSeries::one(ring.clone(), prec);
    for j in 1..=d {
        delta_j = delta_j.mul(delta);
        g.push(delta_j.mul(&e6_powers[d - j]).mul(&tail));
    }
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = g[i].coeffs()[j + 1].clone();
            if !ring.is_zero(&c) {
                g[i] = g[i].sub(&g[j].scale(&c));
            }
        }
    }
    g
}

/// Integral echelon basis of cusp forms of weight `k`.
pub fn victor_miller_basis(k: i64, prec: usize) -> Result<Vec<QSeries<Integers>>, CensusError> {
    let d = check_weight(k)?;
    if d == 0 {
        return Ok(Vec::new());
    }
    if prec <= d {
        return Err(CensusError::PrecisionTooSmall { needed: d + 1, got: prec });
    }
    let e4 = eisenstein(4, prec)?;
    let e6 = eisenstein(6, prec)?;
    let delta = delta(prec)?;
    Ok(build_basis(k, d, &e4, &e6, &delta))
}

/// The same basis reduced mod `p`, computed directly over `F_p`.
pub fn victor_miller_basis_mod_p(k: i64, p: u64, prec: usize) -> Result<Vec<QSeries<PrimeField>>, CensusError> {
    if !is_prime(p) {
        return Err(CensusError::NotPrime(p));
    }
    let d = check_weight(k)?;
    if d == 0 {
        return Ok(Vec::new());
    }
    if prec <= d {
        return Err(CensusError::PrecisionTooSmall { needed: d + 1, got: prec });
    }
    let f = PrimeField::new(p);
    let e4 = eisenstein_mod_p(4, p, prec)?;
    let e6 = eisenstein_mod_p(6, p, prec)?;
    let delta = delta_product(f, prec);
    Ok(build_basis(k, d, &e4, &e6, &delta))
}

/// `a_m(T_n f) = sum_{d | gcd(m, n)} d^{k-1} a_{mn/d^2}(f)`, to precision
/// `floor(N / n)`.
pub fn hecke_tn<R: Ring>(f: &QSeries<R>, n: u64, k: u32) -> Result<QSeries<R>, CensusError> {
    let n_us = n as usize;
    if n == 0 || f.prec() < n_us {
        return Err(CensusError::PrecisionTooSmall { needed: n_us.max(1), got: f.prec() });
    }
    let ring = f.ring().clone();
    let out_prec = f.prec() / n_us;
    let divisors: Vec<(usize, R::Elem)> = (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| (d as usize, ring.from_int(&BigInt::from(d).pow(k.saturating_sub(1)))))
        .collect();
    let coeffs = (0..=out_prec)
        .map(|m| {
            let mut acc = ring.zero();
            for (d, dk) in &divisors {
                if m % d == 0 {
                    let idx = m * n_us / (d * d);
                    acc = ring.add(&acc, &ring.mul(dk, &f.coeffs()[idx]));
                }
            }
            acc
        })
        .collect();
    Ok(QSeries::new(ring, coeffs))
}

/// Matrix of `T_l` on the mod-`p` Victor Miller basis: row `i` holds the
/// coordinates of `T_l f_i`.
pub fn hecke_matrix(k: i64, ell: u64, p: u64, prec: usize) -> Result<Vec<Vec<u64>>, CensusError> {
    if !is_prime(ell) {
        return Err(CensusError::NotPrime(ell));
    }
    if ell == p {
        return Err(CensusError::EllEqualsP(p));
    }
    let d = check_weight(k)?;
    let needed = ell as usize * (d + 1) + 1;
    if prec < needed {
        return Err(CensusError::PrecisionTooSmall { needed, got: prec });
    }
    let basis = victor_miller_basis_mod_p(k, p, prec)?;
    let rows: Vec<Vec<u64>> = basis.into_iter().map(QSeries::into_coeffs).collect();
    Ok(hecke_rows(&PrimeField::new(p), &rows, k as u32, ell, &crate::census::linalg::identity(&PrimeField::new(p), d)))
}

/// Coordinates of `T_l g` for each `g = sum_j v_j f_j` with `v` a row of
/// `vectors`; `basis` holds the coefficient lists of the echelon basis.
pub(crate) fn hecke_rows(f: &PrimeField, basis: &[Vec<u64>], k: u32, ell: u64, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let d = basis.len();
    let p = f.p();
    let ell_k = pow_mod(ell % p, (k - 1) as u64, p);
    let l = ell as usize;
    let coeff_of = |v: &[u64], idx: usize| -> u64 {
        let mut acc: u128 = 0;
        for (c, row) in v.iter().zip(basis) {
            if *c != 0 {
                acc += (*c * row[idx]) as u128;
            }
        }
        (acc % p as u128) as u64
    };
    vectors
        .iter()
        .map(|v| {
            (1..=d)
                .map(|m| {
                    let mut t = coeff_of(v, m * l);
                    if m % l == 0 {
                        t = f.add(&t, &f.mul(&ell_k, &coeff_of(v, m / l)));
                    }
                    t
                })
                .collect()
        })
        .collect()
}
