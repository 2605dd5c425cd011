//! Sparse elements of K[X1..Xn]^m, Gröbner bases, staircases and
//! multivariate division.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::monomial::{Monomial, MonomialIndex, MonomialOrder};

/// A polynomial vector, stored as a map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ModulePoly {
    field: PrimeField,
    n: usize,
    m: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl ModulePoly {
    pub fn zero(field: PrimeField, n: usize, m: usize) -> Self {
        ModulePoly {
            field,
            n,
            m,
            terms: BTreeMap::new(),
        }
    }

    /// The polynomial `coeff * mon`.
    pub fn term(field: PrimeField, n: usize, m: usize, mon: Monomial, coeff: FieldElem) -> Result<Self> {
        let mut p = Self::zero(field, n, m);
        p.add_term(mon, coeff)?;
        Ok(p)
    }

    /// Build from signed coefficients; repeated monomials are summed.
    pub fn from_terms<I>(field: PrimeField, n: usize, m: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut p = Self::zero(field, n, m);
        for (mon, c) in terms {
            p.add_term(mon, field.from_i64(c))?;
        }
        Ok(p)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn nvars(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn ncomps(&self) -> usize {
        self.m
    }
    pub fn terms(&self) -> &BTreeMap<Monomial, FieldElem> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, mon: &Monomial) -> FieldElem {
        self.terms.get(mon).copied().unwrap_or(0)
    }

    fn check_monomial(&self, mon: &Monomial) -> Result<()> {
        if mon.nvars() != self.n || mon.comp() >= self.m {
            return Err(Error::DimensionMismatch(format!(
                "monomial {mon} in a module with n = {}, m = {}",
                self.n, self.m
            )));
        }
        Ok(())
    }

    /// Add `coeff * mon`, dropping the term if it cancels.
    pub fn add_term(&mut self, mon: Monomial, coeff: FieldElem) -> Result<()> {
        self.check_monomial(&mon)?;
        let f = self.field;
        let c = f.from_u64(coeff as u64);
        if c == 0 {
            return Ok(());
        }
        match self.terms.entry(mon) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    fn check_compatible(&self, other: &ModulePoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.modulus(), other.field.modulus()));
        }
        if self.n != other.n || self.m != other.m {
            return Err(Error::DimensionMismatch("polynomials of different shapes".into()));
        }
        Ok(())
    }

    /// `self + alpha * other`
    pub fn add_scaled(&self, alpha: FieldElem, other: &ModulePoly) -> Result<ModulePoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (mon, &c) in &other.terms {
            out.add_term(mon.clone(), self.field.mul(alpha, c))?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &ModulePoly) -> Result<ModulePoly> {
        self.add_scaled(1, other)
    }

    pub fn sub(&self, other: &ModulePoly) -> Result<ModulePoly> {
        self.add_scaled(self.field.neg(1), other)
    }

    pub fn scale(&self, alpha: FieldElem) -> ModulePoly {
        let mut out = ModulePoly::zero(self.field, self.n, self.m);
        if alpha.is_multiple_of(self.field.modulus()) {
            return out;
        }
        for (mon, &c) in &self.terms {
            out.terms.insert(mon.clone(), self.field.mul(alpha, c));
        }
        out
    }

    /// Multiply by the ring monomial `X^exps`.
    pub fn mul_exps(&self, exps: &[u32]) -> Result<ModulePoly> {
        let mut out = ModulePoly::zero(self.field, self.n, self.m);
        for (mon, &c) in &self.terms {
            out.terms.insert(mon.mul_exps(exps)?, c);
        }
        Ok(out)
    }

    /// Greatest term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Result<(Monomial, FieldElem)> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(a.0, b.0))
            .map(|(mon, &c)| (mon.clone(), c))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Result<Monomial> {
        self.leading_term(order).map(|t| t.0)
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, FieldElem)> {
        let mut v: Vec<_> = self.terms.iter().map(|(mon, &c)| (mon.clone(), c)).collect();
        v.sort_by(|a, b| order.compare(&b.0, &a.0));
        v
    }

    /// Largest exponent of each variable over all terms.
    pub fn max_degrees(&self) -> Vec<u32> {
        let mut out = vec![0; self.n];
        for mon in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(mon.exps()) {
                *o = (*o).max(e);
            }
        }
        out
    }
}

impl fmt::Debug for ModulePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ModulePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(mon, c)| format!("{c}*{mon}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Flatten `p` into the coefficient vector indexed by `index`.
pub fn expand(index: &MonomialIndex, p: &ModulePoly) -> Result<Vec<FieldElem>> {
    if p.ncomps() != index.m() || p.nvars() != index.bounds().len() {
        return Err(Error::DimensionMismatch("polynomial shape differs from the index".into()));
    }
    let mut v = vec![0; index.len()];
    for (mon, &c) in p.terms() {
        let i = index.index_of(mon).ok_or_else(|| Error::DegreeOutOfBounds {
            monomial: mon.to_string(),
            bounds: index.bounds().to_vec(),
        })?;
        v[i] = c;
    }
    Ok(v)
}

/// Inverse of [`expand`].
pub fn contract(field: PrimeField, index: &MonomialIndex, v: &[FieldElem]) -> Result<ModulePoly> {
    if v.len() != index.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for an index of {} monomials",
            v.len(),
            index.len()
        )));
    }
    let mut p = ModulePoly::zero(field, index.bounds().len(), index.m());
    for (i, &c) in v.iter().enumerate() {
        if c != 0 {
            p.add_term(index.monomial_at(i).clone(), c)?;
        }
    }
    Ok(p)
}

/// A list of module elements together with the order they are a basis for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub field: PrimeField,
    pub n: usize,
    pub m: usize,
    pub elements: Vec<ModulePoly>,
}

impl GroebnerBasis {
    /// Wrap `elements`, resolving the order's precedence for `n` variables.
    pub fn new(order: &MonomialOrder, field: PrimeField, n: usize, m: usize, elements: Vec<ModulePoly>) -> Result<Self> {
        let order = order.resolved(n)?;
        for g in &elements {
            if g.field() != field {
                return Err(Error::FieldMismatch(g.field().modulus(), field.modulus()));
            }
            if g.nvars() != n || g.ncomps() != m {
                return Err(Error::DimensionMismatch("basis element of the wrong shape".into()));
            }
        }
        Ok(GroebnerBasis {
            order,
            field,
            n,
            m,
            elements,
        })
    }

    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        self.elements.iter().map(|g| g.leading_monomial(&self.order)).collect()
    }

    /// Sort elements ascending by leading monomial.
    pub fn sort(&mut self) {
        let order = self.order.clone();
        self.elements.sort_by(|a, b| match (a.leading_monomial(&order), b.leading_monomial(&order)) {
            (Ok(x), Ok(y)) => order.compare(&x, &y),
            (Err(_), Ok(_)) => Ordering::Less,
            (Ok(_), Err(_)) => Ordering::Greater,
            (Err(_), Err(_)) => Ordering::Equal,
        });
    }

    /// Reducedness with a reason on failure.
    pub fn reducedness(&self) -> Result<()> {
        let mut leads = Vec::with_capacity(self.elements.len());
        for g in &self.elements {
            let (mon, c) = g.leading_term(&self.order).map_err(|_| Error::NotReduced("zero element".into()))?;
            if c != 1 {
                return Err(Error::NotReduced(format!("leading term of {g} is not monic")));
            }
            leads.push(mon);
        }
        for (i, a) in leads.iter().enumerate() {
            for (j, b) in leads.iter().enumerate() {
                if i != j && a.divides(b) {
                    return Err(Error::NotReduced(format!("leading monomial {a} divides {b}")));
                }
            }
        }
        for g in &self.elements {
            let lead = g.leading_monomial(&self.order)?;
            for mon in g.terms().keys().filter(|&t| *t != lead) {
                if let Some(l) = leads.iter().find(|l| l.divides(mon)) {
                    return Err(Error::NotReduced(format!("leading monomial {l} divides the tail term {mon}")));
                }
            }
        }
        Ok(())
    }

    pub fn check_reduced(&self) -> bool {
        self.reducedness().is_ok()
    }

    /// Normal form of `p` against this basis.
    pub fn reduce(&self, p: &ModulePoly) -> Result<ModulePoly> {
        divide(&self.order, p, &self.elements)
    }
}

/// Multivariate division of `p` by `basis` under `order`; returns the remainder.
///
/// Among the elements whose leading monomial divides the current term, the one
/// with the smallest leading monomial is used.
pub fn divide(order: &MonomialOrder, p: &ModulePoly, basis: &[ModulePoly]) -> Result<ModulePoly> {
    let mut reducers = Vec::with_capacity(basis.len());
    for g in basis {
        p.check_compatible(g)?;
        let (lm, lc) = g.leading_term(order)?;
        let inv = g.field().inv(lc).expect("nonzero leading coefficient");
        reducers.push((lm, inv, g));
    }
    reducers.sort_by(|a, b| order.compare(&a.0, &b.0));
    let f = p.field();
    let mut rem = ModulePoly::zero(f, p.nvars(), p.ncomps());
    let mut cur = p.clone();
    while let Ok((mon, c)) = cur.leading_term(order) {
        match reducers.iter().find(|r| r.0.divides(&mon)) {
            Some((lm, inv, g)) => {
                let q = lm.quotient_exps(&mon);
                let shifted = g.mul_exps(&q)?;
                cur = cur.add_scaled(f.neg(f.mul(c, *inv)), &shifted)?;
            }
            None => {
                cur.terms.remove(&mon);
                rem.terms.insert(mon, c);
            }
        }
    }
    Ok(rem)
}

/// The staircase of a monomial submodule and the monomials bordering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseData {
    /// Monomials outside the submodule, ascending.
    pub monbas: Vec<Monomial>,
    /// Minimal generators of the submodule, ascending.
    pub lm: Vec<Monomial>,
    /// `{X_k b} ∪ {c_i not in monbas}`, ascending.
    pub expset: Vec<Monomial>,
    /// `expset - monbas`, ascending.
    pub border: Vec<Monomial>,
}

impl StaircaseData {
    /// Derive expset, border and minimal generators from a finite staircase.
    pub fn from_monbas(order: &MonomialOrder, monbas: &[Monomial], n: usize, m: usize) -> StaircaseData {
        let in_b: HashSet<&Monomial> = monbas.iter().collect();
        let mut expset: HashSet<Monomial> = HashSet::new();
        for b in monbas {
            for k in 0..n {
                expset.insert(b.mul_var(k));
            }
        }
        for i in 0..m {
            let c = Monomial::unit(n, i);
            if !in_b.contains(&c) {
                expset.insert(c);
            }
        }
        let mut border: Vec<Monomial> = expset.iter().filter(|x| !in_b.contains(x)).cloned().collect();
        order.sort(&mut border);
        let lm: Vec<Monomial> = border
            .iter()
            .filter(|x| !border.iter().any(|y| y != *x && y.divides(x)))
            .cloned()
            .collect();
        let mut expset: Vec<Monomial> = expset.into_iter().collect();
        order.sort(&mut expset);
        let mut monbas = monbas.to_vec();
        order.sort(&mut monbas);
        StaircaseData {
            monbas,
            lm,
            expset,
            border,
        }
    }

    pub fn dim(&self) -> usize {
        self.monbas.len()
    }
}

fn check_minimal(lm: &[Monomial]) -> Result<()> {
    for (i, a) in lm.iter().enumerate() {
        for (j, b) in lm.iter().enumerate() {
            if i != j && a.divides(b) {
                return Err(Error::NotMinimal(a.to_string(), b.to_string()));
            }
        }
    }
    Ok(())
}

/// Staircase of the submodule generated by the pairwise non-divisible `lm`.
pub fn staircase_from_lm(order: &MonomialOrder, lm: &[Monomial], n: usize, m: usize) -> Result<StaircaseData> {
    if let Some(bad) = lm.iter().find(|x| x.nvars() != n || x.comp() >= m) {
        return Err(Error::DimensionMismatch(format!("generator {bad} with n = {n}, m = {m}")));
    }
    check_minimal(lm)?;
    let order = order.resolved(n)?;
    for i in 0..m {
        let comp: Vec<&Monomial> = lm.iter().filter(|x| x.comp() == i).collect();
        if comp.iter().any(|x| x.is_unit()) {
            continue;
        }
        for k in 0..n {
            let pure = comp
                .iter()
                .any(|x| x.exps().iter().enumerate().all(|(t, &e)| (t == k) == (e > 0)));
            if !pure {
                return Err(Error::InfiniteStaircase {
                    component: i + 1,
                    variable: k + 1,
                });
            }
        }
    }
    let in_module = |x: &Monomial| lm.iter().any(|g| g.divides(x));
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut stack: Vec<Monomial> = (0..m).map(|i| Monomial::unit(n, i)).filter(|c| !in_module(c)).collect();
    seen.extend(stack.iter().cloned());
    while let Some(b) = stack.pop() {
        for k in 0..n {
            let next = b.mul_var(k);
            if !in_module(&next) && seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    let monbas: Vec<Monomial> = seen.into_iter().collect();
    let data = StaircaseData::from_monbas(&order, &monbas, n, m);
    let mut sorted_lm = lm.to_vec();
    order.sort(&mut sorted_lm);
    debug_assert_eq!(data.lm, sorted_lm);
    Ok(data)
}

/// Check that for every generator `mu`, every `j` with `X_j | mu` and every
/// `i < j`, the monomial `(X_i / X_j) * mu` lies in the submodule spanned by `lm`.
pub fn structural_assumption(lm: &[Monomial]) -> Result<()> {
    for mu in lm {
        let n = mu.nvars();
        for j in 0..n {
            let Some(base) = mu.div_var(j) else { continue };
            for i in 0..j {
                let moved = base.mul_var(i);
                if !lm.iter().any(|g| g.divides(&moved)) {
                    return Err(Error::AssumptionViolated {
                        generator: mu.to_string(),
                        i: i + 1,
                        j: j + 1,
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn check_structural_assumption(lm: &[Monomial]) -> bool {
    structural_assumption(lm).is_ok()
}

/// Map from staircase monomials to their position.
pub(crate) fn position_map(monbas: &[Monomial]) -> HashMap<&Monomial, usize> {
    monbas.iter().enumerate().map(|(i, b)| (b, i)).collect()
}
