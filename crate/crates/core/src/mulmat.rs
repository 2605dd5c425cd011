//! Multiplication matrices from a reduced Gröbner basis, and change of order.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matrix::DenseMatrix;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{position_map, staircase_from_lm, structural_assumption, GroebnerBasis};
use crate::syzygy::{syzygy_basis, Instance};

/// Rows `v_j · M^e` for `1 <= e <= bounds[j]`, grouped by `j` and then by `e`.
///
/// Powers are obtained by repeated squaring: the rows with
/// `2^(i-1) < e <= 2^i` come from a single product with `M^(2^(i-1))`.
pub fn krylov_eval(m: &DenseMatrix, vectors: &[Vec<FieldElem>], bounds: &[usize]) -> Result<DenseMatrix> {
    let field = m.field();
    let d = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch("Krylov evaluation needs a square matrix".into()));
    }
    if vectors.len() != bounds.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} vectors with {} bounds",
            vectors.len(),
            bounds.len()
        )));
    }
    if let Some(j) = bounds.iter().position(|&e| e == 0) {
        return Err(Error::InvalidInput(format!("bound {} is zero", j + 1)));
    }
    // powers[j][e - 1] = v_j M^e
    let v = DenseMatrix::from_row_vecs(field, d, vectors.to_vec())?;
    let first = v.mul(m)?;
    let mut powers: Vec<Vec<Vec<FieldElem>>> = first.row_iter().map(|r| vec![r.to_vec()]).collect();
    let max_e = bounds.iter().copied().max().unwrap_or(0);
    let mut n_pow = m.clone();
    let mut i = 1u32;
    while (1usize << (i - 1)) < max_e {
        if i > 1 {
            n_pow = n_pow.mul(&n_pow)?;
        }
        let half = 1usize << (i - 1);
        let full = 1usize << i;
        // sources (j, e - half) for half < e <= min(bounds[j], full)
        let mut targets = Vec::new();
        let mut sources = Vec::new();
        for (j, &ej) in bounds.iter().enumerate() {
            for e in half + 1..=ej.min(full) {
                targets.push(j);
                sources.push(powers[j][e - half - 1].clone());
            }
        }
        if !sources.is_empty() {
            let prod = DenseMatrix::from_row_vecs(field, d, sources)?.mul(&n_pow)?;
            for (row, &j) in prod.row_iter().zip(&targets) {
                powers[j].push(row.to_vec());
            }
        }
        i += 1;
    }
    let rows: Vec<Vec<FieldElem>> = powers.into_iter().flatten().collect();
    DenseMatrix::from_row_vecs(field, d, rows)
}

/// Generators `f_j` and bounds `e_j` describing `{X_var^e f_j : 1 <= e <= e_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NextMonomialsFamily {
    /// 0-based index of the variable being multiplied in.
    pub var: usize,
    pub generators: Vec<Monomial>,
    pub bounds: Vec<usize>,
}

impl NextMonomialsFamily {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The monomials of the family, generator by generator.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for (f, &e) in self.generators.iter().zip(&self.bounds) {
            for p in 1..=e {
                out.push(f.mul_by_power(self.var, p as u32).expect("bounded exponent"));
            }
        }
        out
    }
}

/// Border monomials reachable from `s` by powers of `X_var` that are not yet in `s`.
///
/// Candidates are taken in ascending order; for each `f` in `s ∩ border` with
/// `X_var f` in `border - s`, the bound is the largest `e` such that
/// `X_var^e f` stays in `border - s`.
pub fn next_monomials(
    order: &MonomialOrder,
    border: &HashSet<Monomial>,
    s: &HashSet<Monomial>,
    var: usize,
) -> NextMonomialsFamily {
    let fresh = |x: &Monomial| border.contains(x) && !s.contains(x);
    let mut candidates: Vec<&Monomial> = s.iter().filter(|f| border.contains(*f)).collect();
    candidates.sort_by(|a, b| order.compare(a, b));
    let mut generators = Vec::new();
    let mut bounds = Vec::new();
    for f in candidates {
        let mut next = f.mul_var(var);
        if !fresh(&next) {
            continue;
        }
        let mut e = 1;
        loop {
            next = next.mul_var(var);
            if !fresh(&next) {
                break;
            }
            e += 1;
        }
        generators.push(f.clone());
        bounds.push(e);
    }
    NextMonomialsFamily { var, generators, bounds }
}

/// Output of [`multiplication_matrices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulMatResult {
    /// Ascending staircase.
    pub monbas: Vec<Monomial>,
    /// `mats[k]` has row `j` equal to the coordinates of `nf(X_{k+1} b_j)`.
    pub mats: Vec<DenseMatrix>,
    /// One family per round, for the variables `X_n` down to `X_2`.
    pub families: Vec<NextMonomialsFamily>,
    /// All monomials whose normal form was determined, ascending.
    pub covered: Vec<Monomial>,
}

fn read_matrix(
    store: &HashMap<Monomial, Vec<FieldElem>>,
    monbas: &[Monomial],
    var: usize,
    gb: &GroebnerBasis,
) -> Result<DenseMatrix> {
    let d = monbas.len();
    let rows = monbas
        .iter()
        .map(|b| {
            let xb = b.mul_var(var);
            store
                .get(&xb)
                .cloned()
                .ok_or_else(|| Error::Internal(format!("normal form of {xb} is not available when reading M{}", var + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    DenseMatrix::from_row_vecs(gb.field, d, rows)
}

/// Coordinates on `monbas` of `nf(lead(g)) = lead(g) - g` for a monic `g`.
fn negated_tail(gb: &GroebnerBasis, pos: &HashMap<&Monomial, usize>, idx: usize) -> Result<(Monomial, Vec<FieldElem>)> {
    let g = &gb.elements[idx];
    let lead = g.leading_monomial(&gb.order)?;
    let mut v = vec![0; pos.len()];
    for (mon, &c) in g.terms() {
        if *mon == lead {
            continue;
        }
        let j = pos
            .get(mon)
            .ok_or_else(|| Error::NotReduced(format!("tail term {mon} lies outside the staircase")))?;
        v[*j] = gb.field.neg(c);
    }
    Ok((lead, v))
}

/// Multiplication matrices of `X1..Xn` on the quotient by the module
/// generated by `gb`, expressed on its monomial basis.
pub fn multiplication_matrices(gb: &GroebnerBasis) -> Result<MulMatResult> {
    let (n, m) = (gb.n, gb.m);
    let order = gb.order.resolved(n)?;
    gb.reducedness()?;
    let lm = gb.leading_monomials()?;
    structural_assumption(&lm)?;
    let stairs = staircase_from_lm(&order, &lm, n, m)?;
    let monbas = stairs.monbas.clone();
    let d = monbas.len();
    let pos = position_map(&monbas);

    let mut store: HashMap<Monomial, Vec<FieldElem>> = HashMap::new();
    for (j, b) in monbas.iter().enumerate() {
        let mut unit = vec![0; d];
        unit[j] = 1;
        store.insert(b.clone(), unit);
    }
    for idx in 0..gb.elements.len() {
        let (lead, v) = negated_tail(gb, &pos, idx)?;
        store.insert(lead, v);
    }

    let border: HashSet<Monomial> = stairs.border.iter().cloned().collect();
    let mut s: HashSet<Monomial> = store.keys().cloned().collect();
    let mut mats: Vec<Option<DenseMatrix>> = vec![None; n];
    mats[n - 1] = Some(read_matrix(&store, &monbas, n - 1, gb)?);
    let mut families = Vec::new();
    for v in (0..n - 1).rev() {
        let w = v + 1;
        let fam = next_monomials(&order, &border, &s, w);
        if !fam.is_empty() {
            let vectors = fam.generators.iter().map(|f| store[f].clone()).collect::<Vec<_>>();
            let mw = mats[w].as_ref().expect("matrix read in the previous round");
            let k = krylov_eval(mw, &vectors, &fam.bounds)?;
            for (mon, row) in fam.monomials().into_iter().zip(k.row_iter()) {
                s.insert(mon.clone());
                store.insert(mon, row.to_vec());
            }
        }
        families.push(fam);
        mats[v] = Some(read_matrix(&store, &monbas, v, gb)?);
    }
    let mut covered: Vec<Monomial> = s.into_iter().collect();
    order.sort(&mut covered);
    Ok(MulMatResult {
        monbas,
        mats: mats.into_iter().map(|x| x.expect("all matrices read")).collect(),
        families,
        covered,
    })
}

/// Instance `(mats, F)` whose syzygy module is the module generated by `gb`.
pub fn instance_from_basis(gb: &GroebnerBasis, mm: &MulMatResult) -> Result<Instance> {
    let (n, m, field) = (gb.n, gb.m, gb.field);
    let d = mm.monbas.len();
    let pos = position_map(&mm.monbas);
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let c = Monomial::unit(n, i);
        if let Some(&j) = pos.get(&c) {
            let mut unit = vec![0; d];
            unit[j] = 1;
            rows.push(unit);
            continue;
        }
        let idx = (0..gb.elements.len())
            .find(|&t| gb.elements[t].leading_monomial(&gb.order).ok().as_ref() == Some(&c))
            .ok_or_else(|| Error::Internal(format!("{c} is neither in the staircase nor a leading monomial")))?;
        rows.push(negated_tail(gb, &pos, idx)?.1);
    }
    let f = DenseMatrix::from_row_vecs(field, d, rows)?;
    Instance::new(mm.mats.clone(), f)
}

/// Reduced Gröbner basis for `to` of the module generated by `gb`.
pub fn change_order(gb: &GroebnerBasis, to: &MonomialOrder) -> Result<GroebnerBasis> {
    let mm = multiplication_matrices(gb)?;
    let inst = instance_from_basis(gb, &mm)?;
    syzygy_basis(to, &inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::ModulePoly;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mon(exps: &[u32], comp: usize) -> Monomial {
        Monomial::new(exps.to_vec(), comp)
    }

    fn poly(p: u64, n: usize, m: usize, terms: &[(&[u32], usize, i64)]) -> ModulePoly {
        ModulePoly::from_terms(gf(p), n, m, terms.iter().map(|(e, c, a)| (mon(e, *c), *a))).unwrap()
    }

    fn mat(p: u64, rows: &[&[i64]]) -> DenseMatrix {
        DenseMatrix::from_rows(gf(p), rows).unwrap()
    }

    fn points_gb() -> GroebnerBasis {
        GroebnerBasis::new(
            &MonomialOrder::top_degrevlex(),
            gf(7),
            2,
            1,
            vec![
                poly(7, 2, 1, &[(&[0, 2], 0, 1), (&[0, 1], 0, -1)]),
                poly(7, 2, 1, &[(&[1, 1], 0, 1)]),
                poly(7, 2, 1, &[(&[2, 0], 0, 1), (&[1, 0], 0, -1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn krylov_examples() {
        let shift = mat(7, &[&[0, 1], &[0, 0]]);
        assert_eq!(krylov_eval(&shift, &[vec![1, 0]], &[2]).unwrap(), mat(7, &[&[0, 1], &[0, 0]]));
        let m = mat(7, &[&[1, 2], &[3, 4]]);
        let k = krylov_eval(&m, &[vec![1, 0], vec![0, 1]], &[1, 1]).unwrap();
        assert_eq!(k, m);
        assert!(krylov_eval(&m, &[vec![1, 0]], &[0]).is_err());
        assert!(krylov_eval(&m, &[vec![1, 0, 0]], &[1]).is_err());
    }

    #[test]
    fn krylov_matches_naive_loop() {
        let f = gf(97);
        let m = DenseMatrix::from_rows(f, &[&[1i64, 5, 7][..], &[0, 3, 2], &[9, 1, 4]]).unwrap();
        let vs = vec![vec![1, 2, 3], vec![0, 0, 1], vec![5, 0, 0]];
        let es = [5, 1, 7];
        let k = krylov_eval(&m, &vs, &es).unwrap();
        let mut r = 0;
        for (v, &e) in vs.iter().zip(&es) {
            let mut cur = v.clone();
            for _ in 0..e {
                cur = m.vec_mul(&cur).unwrap();
                assert_eq!(k.row(r), &cur[..]);
                r += 1;
            }
        }
        assert_eq!(r, k.rows());
    }

    #[test]
    fn next_monomials_examples() {
        let order = MonomialOrder::top_degrevlex().resolved(2).unwrap();
        let lm = [mon(&[0, 3], 0), mon(&[1, 1], 0), mon(&[2, 0], 0)];
        let st = staircase_from_lm(&order, &lm, 2, 1).unwrap();
        let border: HashSet<_> = st.border.iter().cloned().collect();
        let s: HashSet<_> = st.monbas.iter().chain(&st.lm).cloned().collect();
        let fam = next_monomials(&order, &border, &s, 1);
        assert_eq!(fam.generators, vec![mon(&[1, 1], 0)]);
        assert_eq!(fam.bounds, vec![1]);
        assert_eq!(fam.monomials(), vec![mon(&[1, 2], 0)]);

        let lm = [mon(&[0, 2], 0), mon(&[1, 1], 0), mon(&[2, 0], 0)];
        let st = staircase_from_lm(&order, &lm, 2, 1).unwrap();
        let border: HashSet<_> = st.border.iter().cloned().collect();
        let s: HashSet<_> = st.monbas.iter().chain(&st.lm).cloned().collect();
        assert!(next_monomials(&order, &border, &s, 1).is_empty());
    }

    #[test]
    fn points_matrices() {
        let mm = multiplication_matrices(&points_gb()).unwrap();
        assert_eq!(mm.monbas, vec![mon(&[0, 0], 0), mon(&[0, 1], 0), mon(&[1, 0], 0)]);
        assert_eq!(mm.mats[0], mat(7, &[&[0, 0, 1], &[0, 0, 0], &[0, 0, 1]]));
        assert_eq!(mm.mats[1], mat(7, &[&[0, 1, 0], &[0, 1, 0], &[0, 0, 0]]));
    }

    #[test]
    fn univariate_and_trivial_matrices() {
        let gb = GroebnerBasis::new(&MonomialOrder::top_lex(), gf(7), 1, 1, vec![poly(7, 1, 1, &[(&[2], 0, 1)])]).unwrap();
        let mm = multiplication_matrices(&gb).unwrap();
        assert_eq!(mm.monbas, vec![mon(&[0], 0), mon(&[1], 0)]);
        assert_eq!(mm.mats, vec![mat(7, &[&[0, 1], &[0, 0]])]);

        let gb = GroebnerBasis::new(&MonomialOrder::top_lex(), gf(7), 1, 1, vec![poly(7, 1, 1, &[(&[0], 0, 1)])]).unwrap();
        let mm = multiplication_matrices(&gb).unwrap();
        assert!(mm.monbas.is_empty());
        assert_eq!(mm.mats, vec![DenseMatrix::zeros(gf(7), 0, 0)]);
        assert_eq!(change_order(&gb, &MonomialOrder::pot_lex()).unwrap().elements, gb.elements);
    }

    #[test]
    fn assumption_and_reducedness_errors() {
        let gb = GroebnerBasis::new(
            &MonomialOrder::top_lex(),
            gf(7),
            2,
            1,
            vec![poly(7, 2, 1, &[(&[0, 1], 0, 1)]), poly(7, 2, 1, &[(&[3, 0], 0, 1)])],
        )
        .unwrap();
        assert!(matches!(multiplication_matrices(&gb), Err(Error::AssumptionViolated { i: 1, j: 2, .. })));
        let gb = GroebnerBasis::new(&MonomialOrder::top_lex(), gf(7), 1, 1, vec![poly(7, 1, 1, &[(&[2], 0, 3)])]).unwrap();
        assert!(matches!(multiplication_matrices(&gb), Err(Error::NotReduced(_))));
    }

    #[test]
    fn change_order_examples() {
        let gb = points_gb();
        assert_eq!(change_order(&gb, &gb.order).unwrap(), gb);
        let lex = change_order(&gb, &MonomialOrder::top_lex()).unwrap();
        assert!(lex.check_reduced());
        assert_eq!(lex.order.to_string(), "top:lex:vars=1,2");
        for g in &gb.elements {
            assert!(lex.reduce(g).unwrap().is_zero());
        }
        for h in &lex.elements {
            assert!(gb.reduce(h).unwrap().is_zero());
        }
        let uni = GroebnerBasis::new(
            &MonomialOrder::top_lex(),
            gf(7),
            1,
            1,
            vec![poly(7, 1, 1, &[(&[2], 0, 1), (&[0], 0, 1)])],
        )
        .unwrap();
        assert_eq!(change_order(&uni, &MonomialOrder::top_degrevlex()).unwrap().elements, uni.elements);
    }
}
