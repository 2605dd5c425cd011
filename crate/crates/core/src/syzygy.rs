//! Monomial bases, normal forms and reduced Gröbner bases of syzygy modules.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::matrix::DenseMatrix;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{position_map, GroebnerBasis, ModulePoly, StaircaseData};

/// Commuting matrices `M1..Mn` acting on `K^D` together with the `m x D` matrix `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub field: PrimeField,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub mats: Vec<DenseMatrix>,
    pub f: DenseMatrix,
}

impl Instance {
    /// Checks shapes; commutation is checked separately by [`Instance::check_commuting`].
    pub fn new(mats: Vec<DenseMatrix>, f: DenseMatrix) -> Result<Self> {
        let field = f.field();
        let n = mats.len();
        let (m, d) = (f.rows(), f.cols());
        if n == 0 {
            return Err(Error::InvalidInput("at least one variable is required".into()));
        }
        if m == 0 {
            return Err(Error::InvalidInput("F must have at least one row".into()));
        }
        for (k, mk) in mats.iter().enumerate() {
            if mk.field() != field {
                return Err(Error::FieldMismatch(mk.field().modulus(), field.modulus()));
            }
            if mk.rows() != d || mk.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "M{} is {}x{}, expected {d}x{d}",
                    k + 1,
                    mk.rows(),
                    mk.cols()
                )));
            }
        }
        Ok(Instance { field, n, m, d, mats, f })
    }

    /// Fails with [`Error::NonCommuting`] naming the first offending pair.
    pub fn check_commuting(&self) -> Result<()> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let a = self.mats[i].mul(&self.mats[j])?;
                let b = self.mats[j].mul(&self.mats[i])?;
                if a != b {
                    return Err(Error::NonCommuting(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    /// `p · F`: the sum over terms `c X^e c_i` of `c * f_i * M^e`.
    pub fn apply_poly(&self, p: &ModulePoly) -> Result<Vec<FieldElem>> {
        if p.nvars() != self.n || p.ncomps() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in K[X1..X{}]^{} applied to an instance with n = {}, m = {}",
                p.nvars(),
                p.ncomps(),
                self.n,
                self.m
            )));
        }
        if p.field() != self.field {
            return Err(Error::FieldMismatch(p.field().modulus(), self.field.modulus()));
        }
        let f = self.field;
        let mut acc = vec![0; self.d];
        for (mon, &c) in p.terms() {
            let v = self.monomial_row(mon)?;
            for (a, x) in acc.iter_mut().zip(v) {
                *a = f.mul_add(*a, c, x);
            }
        }
        Ok(acc)
    }

    /// `mon · F` computed by repeated vector-matrix products.
    pub fn monomial_row(&self, mon: &Monomial) -> Result<Vec<FieldElem>> {
        let mut v = self.f.row(mon.comp()).to_vec();
        for (k, &e) in mon.exps().iter().enumerate() {
            for _ in 0..e {
                v = self.mats[k].vec_mul(&v)?;
            }
        }
        Ok(v)
    }
}

/// The monomial basis of the quotient and the images of its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasisResult {
    /// Ascending staircase `b_1 < ... < b_delta`.
    pub monbas: Vec<Monomial>,
    /// `delta x D` matrix whose row `j` is `b_j · F`.
    pub basmat: DenseMatrix,
}

fn ceil_log2(d: usize) -> u32 {
    if d <= 1 {
        0
    } else {
        usize::BITS - (d - 1).leading_zeros()
    }
}

/// Exponent of the per-variable degree bound `2^(ceil(log2 D) + 1)`.
pub fn degree_bound_log2(d: usize) -> u32 {
    ceil_log2(d) + 1
}

/// Rows tagged with their monomials, kept ascending under the order.
struct TaggedRows {
    mons: Vec<Monomial>,
    rows: Vec<Vec<FieldElem>>,
}

impl TaggedRows {
    fn keep_rank_profile(self, field: PrimeField, d: usize) -> Result<TaggedRows> {
        let mat = DenseMatrix::from_row_vecs(field, d, self.rows)?;
        let prof = mat.row_rank_profile();
        let mons = prof.indices.iter().map(|&i| self.mons[i].clone()).collect();
        let rows = prof.indices.iter().map(|&i| mat.row(i).to_vec()).collect();
        Ok(TaggedRows { mons, rows })
    }
}

/// Merge two ascending tagged lists.
fn merge_sorted(order: &MonomialOrder, a: TaggedRows, b: TaggedRows) -> TaggedRows {
    let total = a.mons.len() + b.mons.len();
    let mut mons = Vec::with_capacity(total);
    let mut rows = Vec::with_capacity(total);
    let mut ia = a.mons.into_iter().zip(a.rows).peekable();
    let mut ib = b.mons.into_iter().zip(b.rows).peekable();
    loop {
        let take_a = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => order.compare(&x.0, &y.0) != Ordering::Greater,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        let (mon, row) = if take_a { ia.next() } else { ib.next() }.expect("peeked");
        mons.push(mon);
        rows.push(row);
    }
    TaggedRows { mons, rows }
}

/// Monomial basis of `K[X]^m / Syz(F)` by iterated rank profiles of growing
/// submatrices of the multi-Krylov matrix, squaring `M_k` at each round.
pub fn monomial_basis(order: &MonomialOrder, inst: &Instance) -> Result<MonomialBasisResult> {
    monomial_basis_impl(order, inst, true)
}

/// Same as [`monomial_basis`] but always sorting, even for the order in
/// which new rows already arrive sorted.
pub fn monomial_basis_generic(order: &MonomialOrder, inst: &Instance) -> Result<MonomialBasisResult> {
    monomial_basis_impl(order, inst, false)
}

fn monomial_basis_impl(order: &MonomialOrder, inst: &Instance, fast_path: bool) -> Result<MonomialBasisResult> {
    let order = order.resolved(inst.n)?;
    let (field, d, n) = (inst.field, inst.d, inst.n);
    if d == 0 {
        return Ok(MonomialBasisResult {
            monbas: Vec::new(),
            basmat: DenseMatrix::zeros(field, 0, 0),
        });
    }
    let presorted = fast_path && order.is_insertion_order(n);
    let max_round = degree_bound_log2(d);

    let mut start: Vec<(Monomial, Vec<FieldElem>)> =
        (0..inst.m).map(|i| (Monomial::unit(n, i), inst.f.row(i).to_vec())).collect();
    start.sort_by(|a, b| order.compare(&a.0, &b.0));
    let (mons, rows) = start.into_iter().unzip();
    let mut cur = TaggedRows { mons, rows }.keep_rank_profile(field, d)?;

    for k in 0..n {
        let mut power = inst.mats[k].clone();
        let mut e = 0u32;
        loop {
            if e > max_round {
                return Err(Error::Internal(format!(
                    "monomial basis iteration for X{} did not stabilise after {e} squarings",
                    k + 1
                )));
            }
            if e > 0 {
                power = power.mul(&power)?;
            }
            let step = 1u32 << e;
            let cur_mat = DenseMatrix::from_row_vecs(field, d, cur.rows.clone())?;
            let shifted = cur_mat.mul(&power)?;
            let new = TaggedRows {
                mons: cur.mons.iter().map(|b| b.mul_by_power(k, step)).collect::<Result<_>>()?,
                rows: shifted.row_iter().map(|r| r.to_vec()).collect(),
            };
            let prev_mons = cur.mons.clone();
            let merged = if presorted {
                let mut all = TaggedRows {
                    mons: cur.mons,
                    rows: cur.rows,
                };
                all.mons.extend(new.mons);
                all.rows.extend(new.rows);
                debug_assert!(order.is_sorted(&all.mons), "insertion order is not sorted");
                all
            } else {
                merge_sorted(&order, cur, new)
            };
            cur = merged.keep_rank_profile(field, d)?;
            if cur.mons == prev_mons {
                break;
            }
            e += 1;
        }
    }
    let basmat = DenseMatrix::from_row_vecs(field, d, cur.rows)?;
    Ok(MonomialBasisResult {
        monbas: cur.mons,
        basmat,
    })
}

/// Coordinates `N` with `T = N · basmat`, solved on the column rank profile
/// of `basmat` and checked on all columns.
pub fn normal_form_matrix(t: &DenseMatrix, basmat: &DenseMatrix) -> Result<DenseMatrix> {
    if t.cols() != basmat.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns in T, {} in the basis matrix",
            t.cols(),
            basmat.cols()
        )));
    }
    let delta = basmat.rows();
    let prof = basmat.column_rank_profile();
    if prof.rank < delta {
        return Err(Error::Singular);
    }
    let b_hat = basmat.select_cols(&prof.indices);
    let t_hat = t.select_cols(&prof.indices);
    let n = t_hat.mul(&b_hat.invert()?)?;
    let residual = t.sub(&n.mul(basmat)?)?;
    if let Some(row) = (0..residual.rows()).find(|&i| residual.row(i).iter().any(|&x| x != 0)) {
        return Err(Error::ResidualNonZero(row + 1));
    }
    Ok(n)
}

/// Normal forms of the monomials whose images are the rows of `t`.
pub fn normal_form(t: &DenseMatrix, monbas: &[Monomial], basmat: &DenseMatrix, n: usize, m: usize) -> Result<Vec<ModulePoly>> {
    if monbas.len() != basmat.rows() {
        return Err(Error::DimensionMismatch("monbas and basis matrix differ in length".into()));
    }
    let coords = normal_form_matrix(t, basmat)?;
    coords
        .row_iter()
        .map(|r| {
            let mut p = ModulePoly::zero(t.field(), n, m);
            for (b, &c) in monbas.iter().zip(r) {
                p.add_term(b.clone(), c)?;
            }
            Ok(p)
        })
        .collect()
}

/// Images `mu · F` for monomials `mu` that are either some `c_i` or `X_k b`
/// with `b` in the staircase.
fn border_images(inst: &Instance, mb: &MonomialBasisResult, targets: &[Monomial]) -> Result<DenseMatrix> {
    let pos = position_map(&mb.monbas);
    let mut rows = Vec::with_capacity(targets.len());
    for mu in targets {
        if mu.is_unit() {
            rows.push(inst.f.row(mu.comp()).to_vec());
            continue;
        }
        let (k, j) = (0..inst.n)
            .find_map(|k| mu.div_var(k).and_then(|b| pos.get(&b).map(|&j| (k, j))))
            .ok_or_else(|| Error::Internal(format!("{mu} is not adjacent to the staircase")))?;
        rows.push(inst.mats[k].vec_mul(mb.basmat.row(j))?);
    }
    DenseMatrix::from_row_vecs(inst.field, inst.d, rows)
}

/// Order `targets` the way the leading monomials are processed: units
/// first, then grouped by the first variable `k` with `mu / X_k` in the staircase.
fn group_by_variable(inst: &Instance, mb: &MonomialBasisResult, targets: &[Monomial]) -> Vec<Monomial> {
    let pos = position_map(&mb.monbas);
    let mut groups: Vec<Vec<Monomial>> = vec![Vec::new(); inst.n + 1];
    for mu in targets {
        let slot = if mu.is_unit() {
            0
        } else {
            (0..inst.n)
                .find(|&k| mu.div_var(k).is_some_and(|b| pos.contains_key(&b)))
                .map_or(0, |k| k + 1)
        };
        groups[slot].push(mu.clone());
    }
    groups.into_iter().flatten().collect()
}

fn polys_minus_normal_forms(
    order: &MonomialOrder,
    inst: &Instance,
    mb: &MonomialBasisResult,
    targets: &[Monomial],
) -> Result<Vec<ModulePoly>> {
    let t = border_images(inst, mb, targets)?;
    let nfs = normal_form(&t, &mb.monbas, &mb.basmat, inst.n, inst.m)?;
    let mut out = Vec::with_capacity(targets.len());
    for (mu, nf) in targets.iter().zip(nfs) {
        let g = ModulePoly::term(inst.field, inst.n, inst.m, mu.clone(), 1)?.sub(&nf)?;
        debug_assert_eq!(g.leading_monomial(order).ok().as_ref(), Some(mu));
        out.push(g);
    }
    Ok(out)
}

/// Reduced Gröbner basis of the syzygy module of `inst` under `order`,
/// sorted ascending by leading monomial.
pub fn syzygy_basis(order: &MonomialOrder, inst: &Instance) -> Result<GroebnerBasis> {
    let order = order.resolved(inst.n)?;
    let mb = monomial_basis(&order, inst)?;
    syzygy_basis_from(&order, inst, &mb)
}

/// [`syzygy_basis`] reusing a precomputed monomial basis.
pub fn syzygy_basis_from(order: &MonomialOrder, inst: &Instance, mb: &MonomialBasisResult) -> Result<GroebnerBasis> {
    let order = order.resolved(inst.n)?;
    let stairs = StaircaseData::from_monbas(&order, &mb.monbas, inst.n, inst.m);
    let targets = group_by_variable(inst, mb, &stairs.lm);
    let elements = polys_minus_normal_forms(&order, inst, mb, &targets)?;
    let mut gb = GroebnerBasis::new(&order, inst.field, inst.n, inst.m, elements)?;
    gb.sort();
    Ok(gb)
}

/// Border basis: `mu - nf(mu)` for every border monomial, ascending.
pub fn border_basis(order: &MonomialOrder, inst: &Instance) -> Result<Vec<ModulePoly>> {
    let order = order.resolved(inst.n)?;
    let mb = monomial_basis(&order, inst)?;
    let stairs = StaircaseData::from_monbas(&order, &mb.monbas, inst.n, inst.m);
    polys_minus_normal_forms(&order, inst, &mb, &stairs.border)
}
