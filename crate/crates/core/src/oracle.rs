//! Slow reference computations on the fully materialised multi-Krylov
//! matrix, used to cross-check the engine.

use crate::error::{Error, Result};
use crate::matrix::{left_nullspace_rref, rref, DenseMatrix};
use crate::monomial::{box_size, Monomial, MonomialIndex, MonomialOrder};
use crate::poly::{contract, expand, GroebnerBasis, ModulePoly};
use crate::syzygy::{degree_bound_log2, monomial_basis, syzygy_basis, Instance};

/// Default cap on the number of rows of a materialised Krylov matrix.
pub const DEFAULT_ROW_LIMIT: usize = 1_000_000;
/// Default cap on the number of rows fed to a nullspace computation.
pub const DEFAULT_NULLSPACE_LIMIT: usize = 4_096;

/// Size limits for the oracle, overridable with `SYZKIT_ORACLE_LIMIT`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub rows: usize,
    pub nullspace_rows: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            rows: DEFAULT_ROW_LIMIT,
            nullspace_rows: DEFAULT_NULLSPACE_LIMIT,
        }
    }
}

impl OracleLimits {
    /// Defaults, with the row limit taken from `SYZKIT_ORACLE_LIMIT` when set.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(v) = std::env::var("SYZKIT_ORACLE_LIMIT").ok().and_then(|s| s.trim().parse().ok()) {
            limits.rows = v;
        }
        limits
    }

    pub fn with_rows(rows: usize) -> Self {
        OracleLimits {
            rows,
            ..Self::default()
        }
    }
}

/// Rows `f_i M^e` for all `X^e c_i` with `e < bounds`, ordered by the index.
pub fn materialize_multi_krylov(
    order: &MonomialOrder,
    inst: &Instance,
    bounds: &[u32],
    limits: &OracleLimits,
) -> Result<(MonomialIndex, DenseMatrix)> {
    if bounds.len() != inst.n {
        return Err(Error::DimensionMismatch(format!("{} bounds for {} variables", bounds.len(), inst.n)));
    }
    let index = MonomialIndex::build(order, bounds, inst.m, limits.rows)?;
    let d = inst.d;
    let mut k = DenseMatrix::zeros(inst.field, index.len(), d);
    // visit monomials by total degree so each row comes from an earlier one
    let mut visit: Vec<usize> = (0..index.len()).collect();
    visit.sort_by_key(|&i| index.monomial_at(i).degree());
    for i in visit {
        let mon = index.monomial_at(i);
        let row = match (0..inst.n).find(|&v| mon.exps()[v] > 0) {
            None => inst.f.row(mon.comp()).to_vec(),
            Some(v) => {
                let prev = mon.div_var(v).expect("positive exponent");
                let j = index.index_of(&prev).expect("divisor lies in the box");
                inst.mats[v].vec_mul(k.row(j))?
            }
        };
        k.row_mut(i).copy_from_slice(&row);
    }
    Ok((index, k))
}

/// The per-variable bound `2^(ceil(log2 D) + 1)` used by the engine.
pub fn full_bounds(inst: &Instance) -> Vec<u32> {
    vec![1u32 << degree_bound_log2(inst.d); inst.n]
}

/// Monomials of the row rank profile of the full multi-Krylov matrix.
pub fn oracle_monomial_basis(order: &MonomialOrder, inst: &Instance, limits: &OracleLimits) -> Result<Vec<Monomial>> {
    if inst.d == 0 {
        return Ok(Vec::new());
    }
    let (index, k) = materialize_multi_krylov(order, inst, &full_bounds(inst), limits)?;
    let prof = k.row_rank_profile();
    Ok(prof.indices.iter().map(|&i| index.monomial_at(i).clone()).collect())
}

/// RREF basis of the syzygies with exponents below `bounds`, as flat
/// vectors on the returned index.
pub fn oracle_bounded_syzygies(
    order: &MonomialOrder,
    inst: &Instance,
    bounds: &[u32],
    limits: &OracleLimits,
) -> Result<(MonomialIndex, DenseMatrix)> {
    let size = box_size(bounds, inst.m).unwrap_or(usize::MAX);
    if size > limits.nullspace_rows {
        return Err(Error::SizeLimit {
            requested: size,
            limit: limits.nullspace_rows,
        });
    }
    let (index, k) = materialize_multi_krylov(order, inst, bounds, limits)?;
    Ok((index, left_nullspace_rref(&k)))
}

/// Bounds just large enough to contain every term of `gb`.
pub fn basis_bounds(gb: &GroebnerBasis) -> Vec<u32> {
    let mut b = vec![1u32; gb.n];
    for g in &gb.elements {
        for (x, e) in b.iter_mut().zip(g.max_degrees()) {
            *x = (*x).max(e + 1);
        }
    }
    b
}

/// Whether `v` lies in the row space of the RREF matrix `basis`.
pub fn in_row_space(basis: &DenseMatrix, v: &[u32]) -> bool {
    let (red, pivots) = rref(basis);
    let f = basis.field();
    let mut w = v.to_vec();
    for (t, &c) in pivots.iter().enumerate() {
        let a = w[c];
        if a == 0 {
            continue;
        }
        let na = f.neg(a);
        for (x, &y) in w.iter_mut().zip(red.row(t)) {
            *x = f.mul_add(*x, na, y);
        }
    }
    w.iter().all(|&x| x == 0)
}

/// One named check with its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// Compare the engine with the oracle on one instance.
///
/// Checks: staircase agreement, soundness of every basis element,
/// reducedness, nullity, membership of the basis in the bounded nullspace,
/// and reduction to zero of every bounded syzygy.
pub fn verify_instance(order: &MonomialOrder, inst: &Instance, limits: &OracleLimits) -> Result<Vec<CheckOutcome>> {
    let order = order.resolved(inst.n)?;
    let mut out = Vec::new();
    let engine = monomial_basis(&order, inst)?;
    let oracle = oracle_monomial_basis(&order, inst, limits)?;
    out.push(CheckOutcome::new(
        "monomial basis",
        engine.monbas == oracle,
        format!("engine {} monomials, oracle {}", engine.monbas.len(), oracle.len()),
    ));

    let gb = syzygy_basis(&order, inst)?;
    let mut unsound = 0;
    for g in &gb.elements {
        if inst.apply_poly(g)?.iter().any(|&x| x != 0) {
            unsound += 1;
        }
    }
    out.push(CheckOutcome::new(
        "soundness",
        unsound == 0,
        format!("{unsound} of {} elements do not annihilate F", gb.elements.len()),
    ));
    out.push(CheckOutcome::new(
        "reduced",
        gb.check_reduced(),
        gb.reducedness().err().map(|e| e.to_string()).unwrap_or_default(),
    ));

    let bounds = basis_bounds(&gb);
    let (index, null) = oracle_bounded_syzygies(&order, inst, &bounds, limits)?;
    let expected_nullity = index.len() - engine.monbas.len();
    out.push(CheckOutcome::new(
        "nullity",
        null.rows() == expected_nullity,
        format!("oracle nullity {}, expected {expected_nullity}", null.rows()),
    ));
    let mut outside = 0;
    for g in &gb.elements {
        if !in_row_space(&null, &expand(&index, g)?) {
            outside += 1;
        }
    }
    out.push(CheckOutcome::new(
        "basis in nullspace",
        outside == 0,
        format!("{outside} elements outside the oracle nullspace"),
    ));
    let mut nonzero = 0;
    for row in null.row_iter() {
        let p = contract(inst.field, &index, row)?;
        if !gb.reduce(&p)?.is_zero() {
            nonzero += 1;
        }
    }
    out.push(CheckOutcome::new(
        "nullspace reduces to zero",
        nonzero == 0,
        format!("{nonzero} of {} oracle syzygies have a nonzero remainder", null.rows()),
    ));
    Ok(out)
}

/// Echelon form of a row space with pivots at the greatest monomial of each
/// row, every pivot column cleared in the other rows.
///
/// The row whose pivot is a minimal generator of the leading module is the
/// corresponding element of the reduced Gröbner basis.
pub fn leading_echelon(field: crate::field::PrimeField, index: &MonomialIndex, basis: &DenseMatrix) -> Result<Vec<ModulePoly>> {
    let rev: Vec<usize> = (0..basis.cols()).rev().collect();
    let (red, _) = rref(&basis.select_cols(&rev));
    red.select_cols(&rev)
        .row_iter()
        .map(|r| contract(field, index, r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::gen::{gen_hermite_pade, gen_points_ideal};

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn krylov_block_layout() {
        // TOP-lex with X > Y, bounds (2, 3): blocks F, F My, F My^2, F Mx, F Mx My, F Mx My^2
        let f = gf(97);
        let mx = DenseMatrix::from_rows(f, &[&[1i64, 2, 3][..], &[0, 1, 4], &[0, 0, 1]]).unwrap();
        let my = crate::gen::eval_matrix_poly(&mx, &[0, 2, 1]).unwrap();
        let fm = DenseMatrix::from_rows(f, &[&[1i64, 0, 7][..], &[4, 5, 6]]).unwrap();
        let inst = Instance::new(vec![mx.clone(), my.clone()], fm.clone()).unwrap();
        let (_, k) = materialize_multi_krylov(&MonomialOrder::top_lex(), &inst, &[2, 3], &OracleLimits::default()).unwrap();
        assert_eq!((k.rows(), k.cols()), (12, 3));
        let my2 = my.mul(&my).unwrap();
        let blocks = [
            fm.clone(),
            fm.mul(&my).unwrap(),
            fm.mul(&my2).unwrap(),
            fm.mul(&mx).unwrap(),
            fm.mul(&mx).unwrap().mul(&my).unwrap(),
            fm.mul(&mx).unwrap().mul(&my2).unwrap(),
        ];
        let mut expected = blocks[0].clone();
        for b in &blocks[1..] {
            expected = expected.vstack(b).unwrap();
        }
        // rows alternate c1, c2 inside each block, as in the stacked blocks
        assert_eq!(k, expected);
    }

    #[test]
    fn trivial_bounds_give_f() {
        let inst = gen_points_ideal(gf(7), &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let (_, k) = materialize_multi_krylov(&MonomialOrder::top_lex(), &inst, &[1, 1], &OracleLimits::default()).unwrap();
        assert_eq!(k, inst.f);
        let zero = Instance::new(vec![DenseMatrix::zeros(gf(7), 2, 2)], DenseMatrix::identity(gf(7), 2)).unwrap();
        let (idx, k) = materialize_multi_krylov(&MonomialOrder::top_lex(), &zero, &[3], &OracleLimits::default()).unwrap();
        for (i, mon) in idx.entries().iter().enumerate() {
            assert_eq!(k.row(i).iter().all(|&x| x == 0), !mon.is_unit());
        }
    }

    #[test]
    fn oracle_monomial_basis_examples() {
        let one = Instance::new(vec![DenseMatrix::zeros(gf(7), 1, 1)], DenseMatrix::identity(gf(7), 1)).unwrap();
        let b = oracle_monomial_basis(&MonomialOrder::top_lex(), &one, &OracleLimits::default()).unwrap();
        assert_eq!(b, vec![Monomial::unit(1, 0)]);
        let empty = Instance::new(vec![DenseMatrix::zeros(gf(7), 0, 0)], DenseMatrix::zeros(gf(7), 1, 0)).unwrap();
        assert!(oracle_monomial_basis(&MonomialOrder::top_lex(), &empty, &OracleLimits::default())
            .unwrap()
            .is_empty());
        let pts = gen_points_ideal(gf(7), &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let b = oracle_monomial_basis(&MonomialOrder::top_degrevlex(), &pts, &OracleLimits::default()).unwrap();
        assert_eq!(b, monomial_basis(&MonomialOrder::top_degrevlex(), &pts).unwrap().monbas);
    }

    #[test]
    fn hermite_pade_nullspace() {
        let inst = gen_hermite_pade(gf(7), 2, &[vec![1], vec![1, 1]]).unwrap();
        let order = MonomialOrder::top_lex();
        let (index, null) = oracle_bounded_syzygies(&order, &inst, &[4], &OracleLimits::default()).unwrap();
        assert_eq!(null.rows(), 6);
        let gb = syzygy_basis(&order, &inst).unwrap();
        for g in &gb.elements {
            assert!(in_row_space(&null, &expand(&index, g).unwrap()));
        }
        let polys = leading_echelon(gf(7), &index, &null).unwrap();
        for p in &polys {
            assert!(inst.apply_poly(p).unwrap().iter().all(|&x| x == 0));
        }
        for g in &gb.elements {
            let lead = g.leading_monomial(&order).unwrap();
            let p = polys.iter().find(|p| p.leading_monomial(&order).unwrap() == lead).unwrap();
            assert_eq!(p, g);
        }
    }

    #[test]
    fn size_limits() {
        let inst = gen_points_ideal(gf(7), &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let tiny = OracleLimits { rows: 10, nullspace_rows: 10 };
        assert!(matches!(
            oracle_monomial_basis(&MonomialOrder::top_lex(), &inst, &tiny),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            oracle_bounded_syzygies(&MonomialOrder::top_lex(), &inst, &[4, 4], &tiny),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn verify_points() {
        let inst = gen_points_ideal(gf(7), &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        for order in [MonomialOrder::top_lex(), MonomialOrder::pot_degrevlex()] {
            let checks = verify_instance(&order, &inst, &OracleLimits::default()).unwrap();
            assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        }
    }
}
