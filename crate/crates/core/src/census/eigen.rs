//! Simultaneous Hecke eigensystems in a single weight, grouped into Galois
//! orbits. Each orbit is described inside its own Hecke field
//! `F_p[x] / (g)`, where `x` is the eigenvalue of a primitive Hecke operator.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use super::field::{ExtField, Field, PrimeField, Ring};
use super::forms::{dim_cusp, hecke_rows, victor_miller_basis_mod_p};
use super::linalg::{self, Matrix};
use super::poly;
use super::qseries::QSeries;
use super::CensusError;
use crate::numth::is_prime;

/// Supplies echelon bases of cusp forms mod `p`.
pub trait BasisSource: Sync {
    /// Rows are the coefficient lists `a_0..=a_prec` of `f_1..f_d`.
    fn basis_mod_p(&self, k: u32, p: u64, prec: usize) -> Result<Vec<Vec<u64>>, CensusError>;
}

/// Computes every basis from scratch.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectBasis;

impl BasisSource for DirectBasis {
    fn basis_mod_p(&self, k: u32, p: u64, prec: usize) -> Result<Vec<Vec<u64>>, CensusError> {
        Ok(victor_miller_basis_mod_p(k as i64, p, prec)?.into_iter().map(QSeries::into_coeffs).collect())
    }
}

/// One Galois orbit of eigensystems of weight `weight`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeckeOrbit {
    pub weight: u32,
    /// Minimal polynomial of `x` over `F_p`, monic, constant term first.
    pub modulus: Vec<u64>,
    /// `x` is the eigenvalue of `sum c T_l` over these `(l, c)`.
    pub primitive: Vec<(u64, u64)>,
    /// `a_l` for each separator prime, as a polynomial in `x` of degree `< e`.
    pub eigenvalues: Vec<Vec<u64>>,
    /// Algebraic multiplicity of each conjugate system.
    pub multiplicity: usize,
}

impl HeckeOrbit {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn field(&self, p: u64) -> ExtField {
        ExtField::new(PrimeField::new(p), self.modulus.clone())
    }
}

/// Number of leading separator primes used for splitting before switching to
/// linear combinations.
const SPLIT_OPS: usize = 4;
const COMBINATION_TRIES: usize = 64;

/// Echelon rows spanning a Hecke-stable subspace of `F_p^d`.
#[derive(Debug, Clone)]
struct Space {
    rows: Matrix<u64>,
    pivots: Vec<usize>,
}

impl Space {
    fn dim(&self) -> usize {
        self.rows.len()
    }
}

struct Op {
    ell: u64,
    matrix: Matrix<u64>,
    modulus: Vec<u64>,
}

struct Ctx<'a> {
    k: u32,
    p: u64,
    f: PrimeField,
    d: usize,
    ells: &'a [u64],
    source: &'a dyn BasisSource,
    basis: Vec<Vec<u64>>,
    prec: usize,
    draws: u64,
}

impl Ctx<'_> {
    fn ensure(&mut self, prec: usize) -> Result<(), CensusError> {
        if prec > self.prec || self.basis.is_empty() {
            let basis = self.source.basis_mod_p(self.k, self.p, prec)?;
            if basis.len() != self.d || basis.iter().any(|row| row.len() != prec + 1) {
                return Err(CensusError::Internal("basis source returned a malformed basis"));
            }
            self.basis = basis;
            self.prec = prec;
        }
        Ok(())
    }

    fn rng(&mut self, tag: u64) -> ChaCha8Rng {
        self.draws += 1;
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.p.to_le_bytes());
        seed[8..16].copy_from_slice(&(self.k as u64).to_le_bytes());
        seed[16..24].copy_from_slice(&tag.to_le_bytes());
        seed[24..].copy_from_slice(&self.draws.to_le_bytes());
        ChaCha8Rng::from_seed(seed)
    }

    fn factor(&mut self, tag: u64, m: &Matrix<u64>) -> Vec<(Vec<u64>, u32)> {
        let cp = linalg::charpoly(&self.f, m);
        let mut rng = self.rng(tag);
        poly::factor(&self.f, &cp, &mut rng)
    }

    /// Matrix of `T_l` on `space`, in the coordinates of its rows.
    fn restrict(&mut self, ell: u64, space: &Space) -> Result<Matrix<u64>, CensusError> {
        self.ensure(ell as usize * self.d)?;
        let images = hecke_rows(&self.f, &self.basis, self.k, ell, &space.rows);
        images
            .iter()
            .map(|img| {
                linalg::coordinates(&self.f, &space.rows, &space.pivots, img)
                    .ok_or(CensusError::Internal("subspace is not Hecke stable"))
            })
            .collect()
    }

    /// Coefficient `a_m` of each row of `space`.
    fn row_coefficients(&self, space: &Space, m: usize) -> Vec<u64> {
        let p = self.p as u128;
        space
            .rows
            .iter()
            .map(|r| {
                let s: u128 = r.iter().zip(&self.basis).map(|(c, b)| (c * b[m]) as u128).sum();
                (s % p) as u64
            })
            .collect()
    }

    /// `a_l / a_1` for an eigenvector given in the coordinates of `space`.
    fn read_eigenvalues(&self, space: &Space, field: &ExtField, v: &[Vec<u64>]) -> Result<Vec<Vec<u64>>, CensusError> {
        let coeff = |m: usize| {
            let cs = self.row_coefficients(space, m);
            v.iter().zip(&cs).fold(field.zero(), |acc, (x, &c)| field.add(&acc, &field.scale_int(x, c)))
        };
        let a1 = coeff(1);
        let inv = field.inv(&a1).ok_or(CensusError::Internal("eigenvector with a_1 = 0"))?;
        Ok(self.ells.iter().map(|&l| field.mul(&coeff(l as usize), &inv)).collect())
    }

    /// Splits `space` into the generalised eigenspaces of `m` (given in its
    /// coordinates) along the factors of its characteristic polynomial.
    fn split(&self, space: &Space, m: &Matrix<u64>, factors: &[(Vec<u64>, u32)]) -> Result<Vec<Space>, CensusError> {
        let f = &self.f;
        let mut pieces = Vec::new();
        let mut total = 0;
        for (g, a) in factors {
            let mut ga = vec![1u64];
            for _ in 0..*a {
                ga = poly::mul(f, &ga, g);
            }
            let kernel = linalg::left_kernel(f, &linalg::poly_matrix(f, &ga, m));
            let ambient: Matrix<u64> = kernel.iter().map(|c| linalg::vec_mat(f, c, &space.rows)).collect();
            let (rows, pivots) = linalg::rref(f, &ambient);
            total += rows.len();
            pieces.push(Space { rows, pivots });
        }
        if total != space.dim() {
            return Err(CensusError::Internal("generalised eigenspaces do not fill the space"));
        }
        Ok(pieces)
    }
}

/// All Galois orbits of eigensystems of `{T_l : l in ells}` on cusp forms of
/// weight `k` mod `p`.
pub fn weight_orbits(k: u32, p: u64, ells: &[u64], source: &dyn BasisSource) -> Result<Vec<HeckeOrbit>, CensusError> {
    if p < 3 || !is_prime(p) {
        return Err(CensusError::NotPrime(p));
    }
    if k < 2 || k % 2 != 0 || k as u64 > p + 1 {
        return Err(CensusError::BadWeight(k as i64));
    }
    if ells.is_empty() || ells.iter().any(|&l| l == p || !is_prime(l)) {
        return Err(CensusError::BadSeparator);
    }
    let d = dim_cusp(k as i64);
    if d == 0 {
        return Ok(Vec::new());
    }
    let f = PrimeField::new(p);
    let max_ell = *ells.iter().max().expect("nonempty") as usize;
    let mut ctx = Ctx { k, p, f, d, ells, source, basis: Vec::new(), prec: 0, draws: 0 };
    ctx.ensure((ells[0] as usize * d).max(max_ell))?;
    let full = Space { rows: linalg::identity(&f, d), pivots: (0..d).collect() };
    let mut stack = vec![full];
    let mut out = Vec::new();
    while let Some(space) = stack.pop() {
        resolve(&mut ctx, space, &mut stack, &mut out)?;
    }
    out.sort_by(|a, b| {
        a.degree().cmp(&b.degree()).then_with(|| a.eigenvalues.cmp(&b.eigenvalues)).then_with(|| a.modulus.cmp(&b.modulus))
    });
    let dims: usize = out.iter().map(|o| o.degree() * o.multiplicity).sum();
    if dims != d {
        return Err(CensusError::Internal("eigensystem multiplicities do not add up"));
    }
    Ok(out)
}

fn resolve(ctx: &mut Ctx, space: Space, stack: &mut Vec<Space>, out: &mut Vec<HeckeOrbit>) -> Result<(), CensusError> {
    let mut ops = Vec::new();
    for &ell in ctx.ells.iter().take(SPLIT_OPS) {
        let m = ctx.restrict(ell, &space)?;
        let factors = ctx.factor(ell, &m);
        if factors.len() > 1 {
            stack.extend(ctx.split(&space, &m, &factors)?);
            return Ok(());
        }
        let (g, a) = factors.into_iter().next().expect("nonconstant charpoly");
        if a == 1 {
            out.push(simple_orbit(ctx, &space, &m, &g, vec![(ell, 1)])?);
            return Ok(());
        }
        ops.push(Op { ell, matrix: m, modulus: g });
    }
    mixed(ctx, space, ops, stack, out)
}

fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

/// Every operator in `ops` acts on `space` with a single irreducible factor;
/// look for a primitive combination and extract the eigensystem.
fn mixed(
    ctx: &mut Ctx,
    space: Space,
    ops: Vec<Op>,
    stack: &mut Vec<Space>,
    out: &mut Vec<HeckeOrbit>,
) -> Result<(), CensusError> {
    let f = ctx.f;
    let n = space.dim();
    let target = ops.iter().fold(1, |acc, op| lcm(acc, op.modulus.len() - 1));
    let mut candidates: Vec<Vec<u64>> = (0..ops.len())
        .filter(|&i| ops[i].modulus.len() - 1 == target)
        .map(|i| (0..ops.len()).map(|j| (i == j) as u64).collect())
        .collect();
    let mut rng = ctx.rng(u64::MAX);
    for _ in 0..COMBINATION_TRIES {
        let mut c: Vec<u64> = (0..ops.len()).map(|_| f.random(&mut rng)).collect();
        c[0] = 1;
        candidates.push(c);
    }
    for c in candidates {
        let theta = combine(&f, &ops, &c, n);
        let factors = ctx.factor(u64::MAX - 1, &theta);
        if factors.len() > 1 {
            stack.extend(ctx.split(&space, &theta, &factors)?);
            return Ok(());
        }
        let (g, a) = factors.into_iter().next().expect("nonconstant charpoly");
        if g.len() - 1 != target {
            continue;
        }
        let primitive: Vec<(u64, u64)> =
            ops.iter().zip(&c).filter(|(_, &ci)| ci != 0).map(|(op, &ci)| (op.ell, ci)).collect();
        if a == 1 {
            out.push(simple_orbit(ctx, &space, &theta, &g, primitive)?);
            return Ok(());
        }
        return repeated_orbit(ctx, space, ops, theta, g, primitive, stack, out);
    }
    Err(CensusError::Internal("no primitive Hecke operator found"))
}

fn combine(f: &PrimeField, ops: &[Op], c: &[u64], n: usize) -> Matrix<u64> {
    let mut theta = vec![vec![0u64; n]; n];
    for (op, &ci) in ops.iter().zip(c) {
        for (row, src) in theta.iter_mut().zip(&op.matrix) {
            for (x, y) in row.iter_mut().zip(src) {
                *x = f.add(x, &f.mul(&ci, y));
            }
        }
    }
    theta
}

/// `theta` acts on `space` with irreducible characteristic polynomial `g`:
/// the eigenvector for the root `x` is `(g / (X - x))(theta) v`.
fn simple_orbit(
    ctx: &Ctx,
    space: &Space,
    theta: &Matrix<u64>,
    g: &[u64],
    primitive: Vec<(u64, u64)>,
) -> Result<HeckeOrbit, CensusError> {
    let f = ctx.f;
    let n = space.dim();
    let field = ExtField::new(f, g.to_vec());
    let x = field.generator();
    let mut krylov = vec![{
        let mut v = vec![0u64; n];
        v[0] = 1;
        v
    }];
    for _ in 1..n {
        let next = linalg::vec_mat(&f, krylov.last().expect("nonempty"), theta);
        krylov.push(next);
    }
    let mut b = vec![field.zero(); n];
    b[n - 1] = field.one();
    for i in (1..n).rev() {
        b[i - 1] = field.add(&field.lift(g[i]), &field.mul(&x, &b[i]));
    }
    let v: Vec<Vec<u64>> = (0..n)
        .map(|j| b.iter().zip(&krylov).fold(field.zero(), |acc, (bi, u)| field.add(&acc, &field.scale_int(bi, u[j]))))
        .collect();
    let eigenvalues = ctx.read_eigenvalues(space, &field, &v)?;
    Ok(HeckeOrbit { weight: ctx.k, modulus: g.to_vec(), primitive, eigenvalues, multiplicity: 1 })
}

fn lift_matrix(field: &ExtField, m: &Matrix<u64>) -> Matrix<Vec<u64>> {
    m.iter().map(|row| row.iter().map(|&c| field.lift(c)).collect()).collect()
}

/// `theta` has characteristic polynomial `g^a` with `a > 1`. The eigenspace
/// of `x` is cut down by further Hecke operators until it is a line or every
/// separator prime has been used.
#[allow(clippy::too_many_arguments)]
fn repeated_orbit(
    ctx: &mut Ctx,
    space: Space,
    mut ops: Vec<Op>,
    theta: Matrix<u64>,
    g: Vec<u64>,
    primitive: Vec<(u64, u64)>,
    stack: &mut Vec<Space>,
    out: &mut Vec<HeckeOrbit>,
) -> Result<(), CensusError> {
    let n = space.dim();
    let e = g.len() - 1;
    let field = ExtField::new(ctx.f, g.clone());
    let x = field.generator();
    let mut shifted = lift_matrix(&field, &theta);
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] = field.sub(&row[i], &x);
    }
    let kernel = linalg::left_kernel(&field, &shifted);
    let weight = ctx.k;
    let orbit = |eigenvalues| HeckeOrbit {
        weight,
        modulus: g.clone(),
        primitive: primitive.clone(),
        eigenvalues,
        multiplicity: n / e,
    };
    if kernel.len() == 1 {
        let eigenvalues = ctx.read_eigenvalues(&space, &field, &kernel[0])?;
        out.push(orbit(eigenvalues));
        return Ok(());
    }
    let t = kernel.len();
    let kernel_pivots = linalg::pivots_of(&field, &kernel);
    let t_inv = field.inv(&field.lift(t as u64 % ctx.p)).ok_or(CensusError::Internal("eigenspace dimension divisible by p"))?;
    let mut blocks: Vec<Matrix<Vec<u64>>> = Vec::new();
    let mut values = Vec::new();
    for &ell in ctx.ells {
        let m = match ops.iter().find(|op| op.ell == ell) {
            Some(op) => op.matrix.clone(),
            None => ctx.restrict(ell, &space)?,
        };
        let lifted = lift_matrix(&field, &m);
        let on_kernel: Matrix<Vec<u64>> = kernel
            .iter()
            .map(|kv| {
                let img = linalg::vec_mat(&field, kv, &lifted);
                linalg::coordinates(&field, &kernel, &kernel_pivots, &img)
                    .ok_or(CensusError::Internal("eigenspace is not Hecke stable"))
            })
            .collect::<Result<_, _>>()?;
        let trace = (0..t).fold(field.zero(), |acc, i| field.add(&acc, &on_kernel[i][i]));
        let lambda = field.mul(&trace, &t_inv);
        let mut nil = on_kernel.clone();
        for (i, row) in nil.iter_mut().enumerate() {
            row[i] = field.sub(&row[i], &lambda);
        }
        let mut power = nil.clone();
        for _ in 1..t {
            power = linalg::mat_mul(&field, &power, &nil);
        }
        if power.iter().flatten().any(|c| !field.is_zero(c)) {
            // two systems share the eigenvalue of theta; let T_l separate them
            if ops.iter().any(|op| op.ell == ell) {
                return Err(CensusError::Internal("inconsistent primary component"));
            }
            let factors = ctx.factor(ell, &m);
            if factors.len() > 1 {
                stack.extend(ctx.split(&space, &m, &factors)?);
                return Ok(());
            }
            let modulus = factors.into_iter().next().expect("nonconstant").0;
            ops.push(Op { ell, matrix: m, modulus });
            return mixed(ctx, space, ops, stack, out);
        }
        values.push(lambda);
        blocks.push(nil);
        let joined: Matrix<Vec<u64>> =
            (0..t).map(|i| blocks.iter().flat_map(|b| b[i].iter().cloned()).collect()).collect();
        let common = linalg::left_kernel(&field, &joined);
        if common.len() == 1 {
            let v = linalg::vec_mat(&field, &common[0], &kernel);
            let eigenvalues = ctx.read_eigenvalues(&space, &field, &v)?;
            out.push(orbit(eigenvalues));
            return Ok(());
        }
    }
    out.push(orbit(values));
    Ok(())
}
