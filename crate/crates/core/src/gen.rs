//! Ready-made instances: Hermite-Padé approximation, vanishing ideals of
//! points, annihilators of matrices, multivariate Padé approximation, and
//! seeded random commuting families.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::matrix::DenseMatrix;
use crate::syzygy::Instance;

/// `D x D` upper shift: `e_i -> e_{i+1}`.
pub fn upper_shift(field: PrimeField, d: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(field, d, d);
    for i in 0..d.saturating_sub(1) {
        m.set(i, i + 1, 1);
    }
    m
}

/// Coefficient vector of length `d`, rejecting nonzero coefficients of degree `>= d`.
fn truncated_coeffs(field: PrimeField, coeffs: &[i64], d: usize, what: &str) -> Result<Vec<FieldElem>> {
    let mut v: Vec<FieldElem> = coeffs.iter().map(|&c| field.from_i64(c)).collect();
    if let Some(pos) = v.iter().skip(d).position(|&c| c != 0) {
        return Err(Error::InvalidInput(format!(
            "{what} has a nonzero coefficient at index {} but only {d} are allowed",
            pos + d
        )));
    }
    v.resize(d, 0);
    Ok(v)
}

/// Relations `p1 f1 + ... + pm fm = 0 mod x^D` for univariate `f_i`
/// given by their coefficient lists (constant term first).
pub fn gen_hermite_pade(field: PrimeField, d: usize, polys: &[Vec<i64>]) -> Result<Instance> {
    let rows = polys
        .iter()
        .enumerate()
        .map(|(i, f)| truncated_coeffs(field, f, d, &format!("f{}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let f = DenseMatrix::from_row_vecs(field, d, rows)?;
    Instance::new(vec![upper_shift(field, d)], f)
}

/// Vanishing ideal of a set of distinct points of `GF(p)^n`.
pub fn gen_points_ideal(field: PrimeField, points: &[Vec<i64>]) -> Result<Instance> {
    let n = points
        .first()
        .map(|pt| pt.len())
        .ok_or_else(|| Error::InvalidInput("at least one point is required".into()))?;
    if n == 0 {
        return Err(Error::InvalidInput("points need at least one coordinate".into()));
    }
    let mut seen = HashSet::new();
    let mut reduced = Vec::with_capacity(points.len());
    for pt in points {
        if pt.len() != n {
            return Err(Error::DimensionMismatch(format!("point {pt:?} has {} coordinates, expected {n}", pt.len())));
        }
        let r: Vec<FieldElem> = pt.iter().map(|&c| field.from_i64(c)).collect();
        if !seen.insert(r.clone()) {
            return Err(Error::DuplicatePoint(format!("{r:?}")));
        }
        reduced.push(r);
    }
    let k = reduced.len();
    let mats = (0..n)
        .map(|j| {
            let mut m = DenseMatrix::zeros(field, k, k);
            for (i, pt) in reduced.iter().enumerate() {
                m.set(i, i, pt[j]);
            }
            m
        })
        .collect();
    let f = DenseMatrix::from_row_vecs(field, k, vec![vec![1; k]])?;
    Instance::new(mats, f)
}

/// Kronecker product `I_d ⊗ N`: block diagonal with `d` copies of `N`.
fn block_diagonal(n: &DenseMatrix, copies: usize) -> DenseMatrix {
    let d = n.rows();
    let mut out = DenseMatrix::zeros(n.field(), d * copies, d * copies);
    for b in 0..copies {
        for i in 0..d {
            for j in 0..d {
                out.set(b * d + i, b * d + j, n.get(i, j));
            }
        }
    }
    out
}

/// Polynomials `p` with `p(N1, ..., Nn) = 0` for commuting `d x d` matrices.
///
/// The instance acts on `d x d` matrices flattened row by row: `M_k` is
/// `I_d ⊗ N_k` and the single row of `F` is the flattened identity.
pub fn gen_matrix_annihilator(ns: &[DenseMatrix]) -> Result<Instance> {
    let first = ns.first().ok_or_else(|| Error::InvalidInput("at least one matrix is required".into()))?;
    let (field, d) = (first.field(), first.rows());
    for (k, nk) in ns.iter().enumerate() {
        if !nk.is_square() || nk.rows() != d {
            return Err(Error::DimensionMismatch(format!("N{} is not {d}x{d}", k + 1)));
        }
        if nk.field() != field {
            return Err(Error::FieldMismatch(nk.field().modulus(), field.modulus()));
        }
    }
    for i in 0..ns.len() {
        for j in i + 1..ns.len() {
            if ns[i].mul(&ns[j])? != ns[j].mul(&ns[i])? {
                return Err(Error::NonCommuting(i + 1, j + 1));
            }
        }
    }
    let mats = ns.iter().map(|nk| block_diagonal(nk, d)).collect();
    let f = DenseMatrix::identity(field, d).into_data();
    Instance::new(mats, DenseMatrix::from_flat(field, 1, d * d, f)?)
}

/// Simultaneous Padé approximation in `n` variables modulo `<X1^d, ..., Xn^d>`.
///
/// Each `f_i` is a dense coefficient vector of length at most `d^n` on the
/// monomials `X^e`, listed with `X1` varying fastest (index
/// `e1 + e2 d + ... + en d^(n-1)`). Relations `p` satisfy
/// `-p1 + p2 f2 + ... + pm fm = 0` in `K[X]/<X1^d, ..., Xn^d>`.
pub fn gen_multivar_pade(field: PrimeField, n: usize, d: usize, fs: &[Vec<i64>]) -> Result<Instance> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidInput("need n >= 1 and d >= 1".into()));
    }
    let dim = d
        .checked_pow(n as u32)
        .ok_or_else(|| Error::InvalidInput(format!("d^n = {d}^{n} is too large")))?;
    let mut mats = Vec::with_capacity(n);
    let mut stride = 1;
    for _ in 0..n {
        let mut m = DenseMatrix::zeros(field, dim, dim);
        for idx in 0..dim {
            if (idx / stride) % d + 1 < d {
                m.set(idx, idx + stride, 1);
            }
        }
        mats.push(m);
        stride *= d;
    }
    let mut rows = Vec::with_capacity(fs.len() + 1);
    let mut minus_one = vec![0; dim];
    minus_one[0] = field.neg(1);
    rows.push(minus_one);
    for (i, f) in fs.iter().enumerate() {
        rows.push(truncated_coeffs(field, f, dim, &format!("f{}", i + 2))?);
    }
    Instance::new(mats, DenseMatrix::from_row_vecs(field, dim, rows)?)
}

fn random_matrix(field: PrimeField, rows: usize, cols: usize, density: f64, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let p = field.modulus();
    let data = (0..rows * cols)
        .map(|_| if rng.gen_bool(density) { rng.gen_range(0..p) } else { 0 })
        .collect();
    DenseMatrix::from_flat(field, rows, cols, data).expect("residues in range")
}

/// `sum_t coeffs[t] * a^t` by the baby-step giant-step scheme, which needs
/// about `2 sqrt(len)` matrix products.
pub fn eval_matrix_poly(a: &DenseMatrix, coeffs: &[FieldElem]) -> Result<DenseMatrix> {
    let field = a.field();
    let d = a.rows();
    if coeffs.is_empty() {
        return Ok(DenseMatrix::zeros(field, d, d));
    }
    let step = (coeffs.len() as f64).sqrt().ceil().max(1.0) as usize;
    let mut powers = vec![DenseMatrix::identity(field, d)];
    for t in 1..=step {
        powers.push(powers[t - 1].mul(a)?);
    }
    let giant = powers[step].clone();
    let mut acc = DenseMatrix::zeros(field, d, d);
    for chunk in coeffs.chunks(step).rev() {
        acc = acc.mul(&giant)?;
        let mut data = acc.into_data();
        for (t, &c) in chunk.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &y) in data.iter_mut().zip(powers[t].data()) {
                *x = field.mul_add(*x, c, y);
            }
        }
        acc = DenseMatrix::from_flat(field, d, d, data)?;
    }
    Ok(acc)
}

/// Seeded random instance with `M1` random of random sparsity, each other
/// `M_k = q_k(M1)` for a random polynomial `q_k` of degree `< D`, and a random `F`.
pub fn gen_random_commuting(field: PrimeField, n: usize, d: usize, m: usize, seed: u64) -> Result<Instance> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("need n >= 1 and m >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.modulus();
    let density = [0.15, 0.35, 0.6, 1.0][rng.gen_range(0..4)];
    let m1 = random_matrix(field, d, d, density, &mut rng);
    let mut mats = vec![m1.clone()];
    for _ in 1..n {
        let deg = if d == 0 { 0 } else { rng.gen_range(1..=d) };
        let coeffs: Vec<FieldElem> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
        mats.push(eval_matrix_poly(&m1, &coeffs)?);
    }
    let f_density = [0.5, 1.0][rng.gen_range(0..2)];
    let f = random_matrix(field, m, d, f_density, &mut rng);
    Instance::new(mats, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{Monomial, MonomialOrder};
    use crate::poly::ModulePoly;
    use crate::syzygy::syzygy_basis;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mat(p: u64, rows: &[&[i64]]) -> DenseMatrix {
        DenseMatrix::from_rows(gf(p), rows).unwrap()
    }

    fn poly(p: u64, n: usize, m: usize, terms: &[(&[u32], usize, i64)]) -> ModulePoly {
        ModulePoly::from_terms(gf(p), n, m, terms.iter().map(|(e, c, a)| (Monomial::new(e.to_vec(), *c), *a))).unwrap()
    }

    #[test]
    fn hermite_pade_shape() {
        let inst = gen_hermite_pade(gf(7), 2, &[vec![1], vec![1, 1]]).unwrap();
        assert_eq!(inst.f, mat(7, &[&[1, 0], &[1, 1]]));
        assert_eq!(inst.mats, vec![mat(7, &[&[0, 1], &[0, 0]])]);
        let z = gen_hermite_pade(gf(7), 2, &[vec![], vec![1]]).unwrap();
        assert_eq!(z.f.row(0), &[0, 0]);
        assert!(gen_hermite_pade(gf(7), 2, &[vec![1, 0, 3]]).is_err());
        assert!(gen_hermite_pade(gf(7), 2, &[vec![1, 0, 0]]).is_ok());
    }

    #[test]
    fn points_shape_and_ideals() {
        let inst = gen_points_ideal(gf(7), &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(inst.mats[0], mat(7, &[&[0, 0, 0], &[0, 1, 0], &[0, 0, 0]]));
        assert_eq!(inst.mats[1], mat(7, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]));
        assert_eq!(inst.f, mat(7, &[&[1, 1, 1]]));

        let one = gen_points_ideal(gf(7), &[vec![3]]).unwrap();
        let gb = syzygy_basis(&MonomialOrder::top_lex(), &one).unwrap();
        assert_eq!(gb.elements, vec![poly(7, 1, 1, &[(&[1], 0, 1), (&[0], 0, -3)])]);

        let two = gen_points_ideal(gf(7), &[vec![0], vec![1]]).unwrap();
        let gb = syzygy_basis(&MonomialOrder::top_lex(), &two).unwrap();
        assert_eq!(gb.elements, vec![poly(7, 1, 1, &[(&[2], 0, 1), (&[1], 0, -1)])]);

        assert!(matches!(gen_points_ideal(gf(7), &[vec![1, 2], vec![8, 2]]), Err(Error::DuplicatePoint(_))));
    }

    #[test]
    fn annihilator_examples() {
        let nil = gen_matrix_annihilator(&[mat(7, &[&[0, 1], &[0, 0]])]).unwrap();
        assert_eq!((nil.m, nil.d), (1, 4));
        let gb = syzygy_basis(&MonomialOrder::top_lex(), &nil).unwrap();
        assert_eq!(gb.elements, vec![poly(7, 1, 1, &[(&[2], 0, 1)])]);

        let id = gen_matrix_annihilator(&[DenseMatrix::identity(gf(7), 3)]).unwrap();
        let gb = syzygy_basis(&MonomialOrder::top_lex(), &id).unwrap();
        assert_eq!(gb.elements, vec![poly(7, 1, 1, &[(&[1], 0, 1), (&[0], 0, -1)])]);

        let bad = gen_matrix_annihilator(&[mat(7, &[&[0, 1], &[0, 0]]), mat(7, &[&[0, 0], &[1, 0]])]);
        assert_eq!(bad, Err(Error::NonCommuting(1, 2)));
    }

    #[test]
    fn multivar_pade_shapes() {
        let inst = gen_multivar_pade(gf(7), 2, 2, &[vec![1, 2, 3, 4]]).unwrap();
        let shift = [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]];
        let block = [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]];
        let as_rows = |a: [[i64; 4]; 4]| mat(7, &a.iter().map(|r| &r[..]).collect::<Vec<_>>());
        assert_eq!(inst.mats[0], as_rows(shift));
        assert_eq!(inst.mats[1], as_rows(block));
        assert_eq!(inst.f.row(0), &[6, 0, 0, 0]);
        assert_eq!(inst.f.row(1), &[1, 2, 3, 4]);
        assert!(inst.check_commuting().is_ok());

        // f2 = 0: c2 is a relation, c1 is not
        let zero = gen_multivar_pade(gf(7), 2, 2, &[vec![0; 4]]).unwrap();
        let c2 = poly(7, 2, 2, &[(&[0, 0], 1, 1)]);
        assert!(zero.apply_poly(&c2).unwrap().iter().all(|&x| x == 0));
        let c1 = poly(7, 2, 2, &[(&[0, 0], 0, 1)]);
        assert!(zero.apply_poly(&c1).unwrap().iter().any(|&x| x != 0));
        assert!(gen_multivar_pade(gf(7), 2, 2, &[vec![0, 0, 0, 0, 1]]).is_err());
    }

    #[test]
    fn random_instances() {
        let a = gen_random_commuting(gf(97), 3, 6, 2, 42).unwrap();
        let b = gen_random_commuting(gf(97), 3, 6, 2, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.check_commuting().is_ok());
        assert_ne!(a, gen_random_commuting(gf(97), 3, 6, 2, 43).unwrap());
        let empty = gen_random_commuting(gf(97), 2, 0, 1, 1).unwrap();
        assert_eq!(empty.d, 0);
    }

    #[test]
    fn matrix_poly_matches_horner() {
        let a = mat(97, &[&[1, 2, 0], &[3, 4, 5], &[0, 6, 7]]);
        let coeffs = [5, 0, 3, 9, 1, 2, 8];
        let mut horner = DenseMatrix::zeros(gf(97), 3, 3);
        for &c in coeffs.iter().rev() {
            horner = horner.mul(&a).unwrap();
            for i in 0..3 {
                let v = gf(97).add(horner.get(i, i), c);
                horner.set(i, i, v);
            }
        }
        assert_eq!(eval_matrix_poly(&a, &coeffs).unwrap(), horner);
    }
}
