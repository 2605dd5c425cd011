//! JSON forms of instances, Gröbner bases and multiplication matrices.
//!
//! Every integer is a canonical residue in `[0, p)`; anything else is
//! rejected on input. Terms are written in descending order for the basis
//! order and components are numbered from 1, so equal inputs always
//! serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::DenseMatrix;
use crate::monomial::{Monomial, MonomialOrder};
use crate::mulmat::MulMatResult;
use crate::poly::{GroebnerBasis, ModulePoly};
use crate::syzygy::Instance;

#[derive(Debug, Serialize, Deserialize)]
struct InstanceJson {
    p: u64,
    n: usize,
    m: usize,
    #[serde(rename = "D")]
    d: usize,
    mats: Vec<Vec<u64>>,
    #[serde(rename = "F")]
    f: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TermJson {
    coeff: u64,
    exps: Vec<u32>,
    comp: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct BasisJson {
    order: String,
    p: u64,
    n: usize,
    m: usize,
    elements: Vec<Vec<TermJson>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MonomialJson {
    exps: Vec<u32>,
    comp: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct MulMatJson {
    p: u64,
    n: usize,
    #[serde(rename = "D")]
    d: usize,
    order: String,
    monbas: Vec<MonomialJson>,
    mats: Vec<Vec<u64>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::InvalidInput(format!("malformed JSON: {e}"))
}

fn residues(field: PrimeField, what: &str, vals: &[u64]) -> Result<Vec<u32>> {
    let p = field.modulus() as u64;
    vals.iter()
        .map(|&v| {
            if v < p {
                Ok(v as u32)
            } else {
                Err(Error::InvalidInput(format!("{what} contains {v}, which is not a residue modulo {p}")))
            }
        })
        .collect()
}

fn flat(m: &DenseMatrix) -> Vec<u64> {
    m.data().iter().map(|&x| x as u64).collect()
}

fn matrix(field: PrimeField, what: &str, d: usize, vals: &[u64], rows: usize) -> Result<DenseMatrix> {
    if vals.len() != rows * d {
        return Err(Error::DimensionMismatch(format!(
            "{what} has {} entries, expected {}",
            vals.len(),
            rows * d
        )));
    }
    DenseMatrix::from_flat(field, rows, d, residues(field, what, vals)?)
}

fn monomial_from_json(n: usize, m: usize, exps: Vec<u32>, comp: usize) -> Result<Monomial> {
    if exps.len() != n {
        return Err(Error::DimensionMismatch(format!("monomial has {} exponents, expected {n}", exps.len())));
    }
    if comp == 0 || comp > m {
        return Err(Error::InvalidInput(format!("component {comp} is outside 1..={m}")));
    }
    Ok(Monomial::new(exps, comp - 1))
}

pub fn instance_to_json(inst: &Instance) -> String {
    let j = InstanceJson {
        p: inst.field.modulus() as u64,
        n: inst.n,
        m: inst.m,
        d: inst.d,
        mats: inst.mats.iter().map(flat).collect(),
        f: flat(&inst.f),
    };
    serde_json::to_string_pretty(&j).expect("serializable") + "\n"
}

pub fn instance_from_json(s: &str) -> Result<Instance> {
    let j: InstanceJson = serde_json::from_str(s).map_err(parse_err)?;
    let field = PrimeField::new(j.p)?;
    if j.mats.len() != j.n {
        return Err(Error::DimensionMismatch(format!("n = {} but {} matrices given", j.n, j.mats.len())));
    }
    let mats = j
        .mats
        .iter()
        .enumerate()
        .map(|(k, v)| matrix(field, &format!("M{}", k + 1), j.d, v, j.d))
        .collect::<Result<Vec<_>>>()?;
    let f = matrix(field, "F", j.d, &j.f, j.m)?;
    Instance::new(mats, f)
}

fn poly_to_json(order: &MonomialOrder, g: &ModulePoly) -> Vec<TermJson> {
    g.sorted_terms(order)
        .into_iter()
        .map(|(mon, c)| TermJson {
            coeff: c as u64,
            exps: mon.exps().to_vec(),
            comp: mon.comp() + 1,
        })
        .collect()
}

pub fn basis_to_json(gb: &GroebnerBasis) -> String {
    let j = BasisJson {
        order: gb.order.to_string(),
        p: gb.field.modulus() as u64,
        n: gb.n,
        m: gb.m,
        elements: gb.elements.iter().map(|g| poly_to_json(&gb.order, g)).collect(),
    };
    serde_json::to_string_pretty(&j).expect("serializable") + "\n"
}

/// Parse a basis file. The elements are taken as given; call
/// [`GroebnerBasis::reducedness`] to check them.
pub fn basis_from_json(s: &str) -> Result<GroebnerBasis> {
    let j: BasisJson = serde_json::from_str(s).map_err(parse_err)?;
    let field = PrimeField::new(j.p)?;
    let order: MonomialOrder = j.order.parse()?;
    if j.n == 0 || j.m == 0 {
        return Err(Error::InvalidInput("need n >= 1 and m >= 1".into()));
    }
    let mut elements = Vec::with_capacity(j.elements.len());
    for terms in j.elements {
        let mut g = ModulePoly::zero(field, j.n, j.m);
        for t in terms {
            let c = residues(field, "coefficient", &[t.coeff])?[0];
            g.add_term(monomial_from_json(j.n, j.m, t.exps, t.comp)?, c)?;
        }
        elements.push(g);
    }
    GroebnerBasis::new(&order, field, j.n, j.m, elements)
}

pub fn mulmats_to_json(gb: &GroebnerBasis, mm: &MulMatResult) -> String {
    let j = MulMatJson {
        p: gb.field.modulus() as u64,
        n: gb.n,
        d: mm.monbas.len(),
        order: gb.order.to_string(),
        monbas: mm
            .monbas
            .iter()
            .map(|b| MonomialJson {
                exps: b.exps().to_vec(),
                comp: b.comp() + 1,
            })
            .collect(),
        mats: mm.mats.iter().map(flat).collect(),
    };
    serde_json::to_string_pretty(&j).expect("serializable") + "\n"
}

/// Monomial basis and multiplication matrices read back from
/// [`mulmats_to_json`] output.
pub fn mulmats_from_json(s: &str) -> Result<(Vec<Monomial>, Vec<DenseMatrix>)> {
    let j: MulMatJson = serde_json::from_str(s).map_err(parse_err)?;
    let field = PrimeField::new(j.p)?;
    let m = j.monbas.iter().map(|b| b.comp).max().unwrap_or(1);
    let monbas = j
        .monbas
        .into_iter()
        .map(|b| monomial_from_json(j.n, m, b.exps, b.comp))
        .collect::<Result<Vec<_>>>()?;
    let mats = j
        .mats
        .iter()
        .enumerate()
        .map(|(k, v)| matrix(field, &format!("M{}", k + 1), j.d, v, j.d))
        .collect::<Result<Vec<_>>>()?;
    Ok((monbas, mats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_points_ideal, gen_random_commuting};
    use crate::mulmat::multiplication_matrices;
    use crate::syzygy::syzygy_basis;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn instance_round_trip() {
        for seed in 0..5 {
            let inst = gen_random_commuting(gf(97), 2, 5, 2, seed).unwrap();
            let s = instance_to_json(&inst);
            assert_eq!(instance_from_json(&s).unwrap(), inst);
            assert_eq!(instance_to_json(&instance_from_json(&s).unwrap()), s);
        }
    }

    #[test]
    fn instance_schema() {
        let inst = gen_points_ideal(gf(7), &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&instance_to_json(&inst)).unwrap();
        assert_eq!(v["p"], 7);
        assert_eq!(v["D"], 3);
        assert_eq!(v["F"], serde_json::json!([1, 1, 1]));
        assert_eq!(v["mats"][0], serde_json::json!([0, 0, 0, 0, 1, 0, 0, 0, 0]));
    }

    #[test]
    fn rejects_non_canonical_residues() {
        let s = r#"{"p":7,"n":1,"m":1,"D":1,"mats":[[7]],"F":[1]}"#;
        assert!(matches!(instance_from_json(s), Err(Error::InvalidInput(_))));
        let s = r#"{"p":7,"n":1,"m":1,"D":2,"mats":[[0,1,0]],"F":[1,0]}"#;
        assert!(matches!(instance_from_json(s), Err(Error::DimensionMismatch(_))));
        assert!(instance_from_json("{").is_err());
    }

    #[test]
    fn basis_round_trip() {
        for (k, order) in ["top:lex", "pot:degrevlex", "top:deglex:vars=2,1"].iter().enumerate() {
            let order: MonomialOrder = order.parse().unwrap();
            let inst = gen_random_commuting(gf(97), 2, 6, 2, k as u64).unwrap();
            let gb = syzygy_basis(&order, &inst).unwrap();
            let s = basis_to_json(&gb);
            let back = basis_from_json(&s).unwrap();
            assert_eq!(back, gb);
            assert_eq!(basis_to_json(&back), s);
        }
    }

    #[test]
    fn basis_terms_descending_with_one_based_components() {
        let inst = gen_points_ideal(gf(7), &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let gb = syzygy_basis(&MonomialOrder::top_lex(), &inst).unwrap();
        let v: serde_json::Value = serde_json::from_str(&basis_to_json(&gb)).unwrap();
        assert_eq!(v["order"], "top:lex:vars=1,2");
        assert_eq!(v["elements"].as_array().unwrap().len(), 3);
        for el in v["elements"].as_array().unwrap() {
            assert_eq!(el[0]["comp"], 1);
            assert_eq!(el[0]["coeff"], 1);
        }
    }

    #[test]
    fn mulmats_round_trip() {
        let inst = gen_points_ideal(gf(7), &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let gb = syzygy_basis(&MonomialOrder::top_degrevlex(), &inst).unwrap();
        let mm = multiplication_matrices(&gb).unwrap();
        let (monbas, mats) = mulmats_from_json(&mulmats_to_json(&gb, &mm)).unwrap();
        assert_eq!(monbas, mm.monbas);
        assert_eq!(mats, mm.mats);
    }
}
