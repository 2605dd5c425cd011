//! Monomials of the free module K[X1..Xn]^m and monomial orders on them.
//!
//! A monomial `X^e c_i` is stored as its exponent vector plus a 0-based
//! component index; the 1-based component only appears in text and JSON.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
    comp: usize,
}

impl Monomial {
    /// `X^exps c_{comp+1}`.
    pub fn new(exps: Vec<u32>, comp: usize) -> Self {
        Monomial { exps, comp }
    }

    /// The unit vector `c_{comp+1}` in `n` variables.
    pub fn unit(n: usize, comp: usize) -> Self {
        Monomial {
            exps: vec![0; n],
            comp,
        }
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }
    #[inline]
    pub fn comp(&self) -> usize {
        self.comp
    }
    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// True iff `self` divides `other` (same component, exponentwise <=).
    pub fn divides(&self, other: &Monomial) -> bool {
        self.comp == other.comp && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `X_var^e * self`, with `var` 0-based.
    pub fn mul_by_power(&self, var: usize, e: u32) -> Result<Monomial> {
        let mut out = self.clone();
        let slot = out
            .exps
            .get_mut(var)
            .ok_or_else(|| Error::DimensionMismatch(format!("variable X{} in {} variables", var + 1, self.nvars())))?;
        *slot = slot.checked_add(e).ok_or(Error::ExponentOverflow(var + 1))?;
        Ok(out)
    }

    /// `X_var * self`; panics only on exponent overflow, which cannot occur
    /// for the staircase sizes handled here.
    pub fn mul_var(&self, var: usize) -> Monomial {
        self.mul_by_power(var, 1).expect("exponent overflow")
    }

    /// `self / X_var` when `X_var` divides `self`.
    pub fn div_var(&self, var: usize) -> Option<Monomial> {
        if self.exps[var] == 0 {
            return None;
        }
        let mut out = self.clone();
        out.exps[var] -= 1;
        Some(out)
    }

    /// Multiply by the ring monomial `X^exps`.
    pub fn mul_exps(&self, exps: &[u32]) -> Result<Monomial> {
        let mut out = self.clone();
        for (k, (a, &b)) in out.exps.iter_mut().zip(exps).enumerate() {
            *a = a.checked_add(b).ok_or(Error::ExponentOverflow(k + 1))?;
        }
        Ok(out)
    }

    /// Exponent vector of `other / self`, assuming `self.divides(other)`.
    pub fn quotient_exps(&self, other: &Monomial) -> Vec<u32> {
        debug_assert!(self.divides(other));
        other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "X{}*", k + 1)?,
                _ => write!(f, "X{}^{}*", k + 1, e)?,
            }
        }
        write!(f, "c{}", self.comp + 1)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseOrder {
    Lex,
    DegLex,
    DegRevLex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleWrapper {
    /// Term over position: compare the monomials first, then the components.
    Top,
    /// Position over term: compare the components first.
    Pot,
}

/// A monomial order on K[X1..Xn]^m.
///
/// `precedence` lists 0-based variable indices from most to least
/// significant. An empty list stands for the default `X1 > X2 > ... > Xn`
/// and is filled in by [`MonomialOrder::resolved`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub base: BaseOrder,
    pub wrapper: ModuleWrapper,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(wrapper: ModuleWrapper, base: BaseOrder) -> Self {
        MonomialOrder {
            base,
            wrapper,
            precedence: Vec::new(),
        }
    }

    pub fn top_lex() -> Self {
        Self::new(ModuleWrapper::Top, BaseOrder::Lex)
    }
    pub fn pot_lex() -> Self {
        Self::new(ModuleWrapper::Pot, BaseOrder::Lex)
    }
    pub fn top_degrevlex() -> Self {
        Self::new(ModuleWrapper::Top, BaseOrder::DegRevLex)
    }
    pub fn pot_degrevlex() -> Self {
        Self::new(ModuleWrapper::Pot, BaseOrder::DegRevLex)
    }

    /// Set the precedence (0-based variable indices, most significant first).
    pub fn with_precedence(mut self, precedence: Vec<usize>) -> Result<Self> {
        check_permutation(&precedence)?;
        self.precedence = precedence;
        Ok(self)
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    /// Fix the number of variables: fills in the default precedence or
    /// checks that an explicit one has length `n`.
    pub fn resolved(&self, n: usize) -> Result<Self> {
        if self.precedence.is_empty() {
            return Ok(MonomialOrder {
                precedence: (0..n).collect(),
                ..self.clone()
            });
        }
        if self.precedence.len() != n {
            return Err(Error::InvalidOrder(format!(
                "{self}: precedence names {} variables, expected {n}",
                self.precedence.len()
            )));
        }
        Ok(self.clone())
    }

    /// True for TOP-lex with `Xn > ... > X1`, the order in which the
    /// monomial-basis iteration introduces new monomials.
    pub fn is_insertion_order(&self, n: usize) -> bool {
        self.wrapper == ModuleWrapper::Top
            && self.base == BaseOrder::Lex
            && self.precedence.len() == n
            && self.precedence.iter().rev().copied().eq(0..n)
    }

    #[inline]
    fn var_at(&self, t: usize) -> usize {
        if self.precedence.is_empty() {
            t
        } else {
            self.precedence[t]
        }
    }

    /// Compare two ring monomials given by exponent vectors.
    pub fn compare_exps(&self, a: &[u32], b: &[u32]) -> Ordering {
        let n = a.len();
        let lex = || {
            for t in 0..n {
                let k = self.var_at(t);
                match a[k].cmp(&b[k]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        let deg = |v: &[u32]| v.iter().map(|&e| e as u64).sum::<u64>();
        match self.base {
            BaseOrder::Lex => lex(),
            BaseOrder::DegLex => deg(a).cmp(&deg(b)).then_with(lex),
            BaseOrder::DegRevLex => deg(a).cmp(&deg(b)).then_with(|| {
                for t in (0..n).rev() {
                    let k = self.var_at(t);
                    match a[k].cmp(&b[k]) {
                        Ordering::Equal => continue,
                        // a larger exponent in the least significant variable makes the monomial smaller
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    /// Compare two module monomials.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match self.wrapper {
            ModuleWrapper::Top => self.compare_exps(&a.exps, &b.exps).then(a.comp.cmp(&b.comp)),
            ModuleWrapper::Pot => a.comp.cmp(&b.comp).then_with(|| self.compare_exps(&a.exps, &b.exps)),
        }
    }

    /// Like [`compare`](Self::compare) but rejecting mismatched dimensions.
    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != b.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "comparing monomials in {} and {} variables",
                a.nvars(),
                b.nvars()
            )));
        }
        if !self.precedence.is_empty() && self.precedence.len() != a.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "order on {} variables applied to {}",
                self.precedence.len(),
                a.nvars()
            )));
        }
        Ok(self.compare(a, b))
    }

    pub fn sort(&self, v: &mut [Monomial]) {
        v.sort_by(|a, b| self.compare(a, b));
    }

    pub fn is_sorted(&self, v: &[Monomial]) -> bool {
        v.windows(2).all(|w| self.compare(&w[0], &w[1]) == Ordering::Less)
    }
}

fn check_permutation(p: &[usize]) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &k in p {
        if k >= p.len() || seen[k] {
            return Err(Error::InvalidOrder(format!("precedence {p:?} is not a permutation")));
        }
        seen[k] = true;
    }
    Ok(())
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.wrapper {
            ModuleWrapper::Top => "top",
            ModuleWrapper::Pot => "pot",
        };
        let b = match self.base {
            BaseOrder::Lex => "lex",
            BaseOrder::DegLex => "deglex",
            BaseOrder::DegRevLex => "degrevlex",
        };
        write!(f, "{w}:{b}")?;
        if !self.precedence.is_empty() {
            let vars: Vec<String> = self.precedence.iter().map(|k| (k + 1).to_string()).collect();
            write!(f, ":vars={}", vars.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for MonomialOrder {
    type Err = Error;

    /// Parses `top:lex`, `pot:degrevlex:vars=3,1,2` and similar.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidOrder(s.to_string());
        let mut parts = s.trim().split(':');
        let wrapper = match parts.next().ok_or_else(bad)?.to_ascii_lowercase().as_str() {
            "top" => ModuleWrapper::Top,
            "pot" => ModuleWrapper::Pot,
            _ => return Err(bad()),
        };
        let base = match parts.next().ok_or_else(bad)?.to_ascii_lowercase().as_str() {
            "lex" => BaseOrder::Lex,
            "deglex" => BaseOrder::DegLex,
            "degrevlex" | "grevlex" => BaseOrder::DegRevLex,
            _ => return Err(bad()),
        };
        let mut order = MonomialOrder::new(wrapper, base);
        if let Some(vars) = parts.next() {
            let list = vars.strip_prefix("vars=").ok_or_else(bad)?;
            let prec = list
                .split(',')
                .map(|t| match t.trim().parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>>>()?;
            order = order.with_precedence(prec).map_err(|_| bad())?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(order)
    }
}

/// All monomials `X^e c_i` with `e < bounds` and `i < m`, sorted ascending,
/// together with the inverse lookup. This is the explicit indexing function;
/// the main algorithms never build it.
#[derive(Debug, Clone)]
pub struct MonomialIndex {
    order: MonomialOrder,
    bounds: Vec<u32>,
    m: usize,
    entries: Vec<Monomial>,
    positions: HashMap<Monomial, usize>,
}

/// Number of monomials in the box `bounds` times `m`, or `None` on overflow.
pub fn box_size(bounds: &[u32], m: usize) -> Option<usize> {
    bounds.iter().try_fold(m, |acc, &b| acc.checked_mul(b as usize))
}

impl MonomialIndex {
    /// Builds the sorted list; fails with [`Error::SizeLimit`] above `limit` entries.
    pub fn build(order: &MonomialOrder, bounds: &[u32], m: usize, limit: usize) -> Result<Self> {
        let n = bounds.len();
        if n == 0 || bounds.contains(&0) {
            return Err(Error::InvalidInput(format!("bounds {bounds:?} must be positive")));
        }
        let order = order.resolved(n)?;
        let size = box_size(bounds, m).unwrap_or(usize::MAX);
        if size > limit {
            return Err(Error::SizeLimit { requested: size, limit });
        }
        let mut entries = Vec::with_capacity(size);
        let mut e = vec![0u32; n];
        'outer: loop {
            for c in 0..m {
                entries.push(Monomial::new(e.clone(), c));
            }
            for k in 0..n {
                e[k] += 1;
                if e[k] < bounds[k] {
                    continue 'outer;
                }
                e[k] = 0;
            }
            break;
        }
        order.sort(&mut entries);
        let positions = entries.iter().enumerate().map(|(i, mon)| (mon.clone(), i)).collect();
        Ok(MonomialIndex {
            order,
            bounds: bounds.to_vec(),
            m,
            entries,
            positions,
        })
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }
    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn entries(&self) -> &[Monomial] {
        &self.entries
    }

    /// 0-based position of `mon`, if it lies in the box.
    pub fn index_of(&self, mon: &Monomial) -> Option<usize> {
        self.positions.get(mon).copied()
    }

    pub fn monomial_at(&self, i: usize) -> &Monomial {
        &self.entries[i]
    }
}
